"""Planar primitives for distance-sum ratio analysis.

Points are plain ``(x, y)`` tuples and every function is pure.  Absolute
tolerances (``EPS_GEO``) are meant for unit-scale data; the solvers in
:mod:`ellimatch.witness` normalize instances into the unit square before
relying on them.
"""

from __future__ import annotations

import math

Point = tuple[float, float]

# Absolute comparison tolerance at unit scale.
EPS_GEO = 1e-9

# The minimax distance-sum ratio bound 2/sqrt(3), attained exactly by the
# doubled equilateral triangle.
RATIO_BOUND = 2.0 / math.sqrt(3.0)

_TWO_PI = 2.0 * math.pi


class DegenerateEdgeError(ValueError):
    """Segment endpoints coincide where a proper edge is required."""


class ZeroVectorError(ValueError):
    """Angle or bisector requested for the zero vector."""


class FocusError(ValueError):
    """Gradient requested at a segment endpoint, where it is undefined."""


def dist(a: Point, b: Point) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


def norm(x: Point) -> float:
    """Euclidean length of a vector."""
    return math.hypot(x[0], x[1])


def _require_nonzero(v: Point) -> None:
    if v[0] == 0.0 and v[1] == 0.0:
        raise ZeroVectorError("operation undefined for the zero vector")


def angle_undirected(x: Point, y: Point) -> float:
    """Smallest non-negative angle between vectors x and y, in [0, pi]."""
    _require_nonzero(x)
    _require_nonzero(y)
    cross = x[0] * y[1] - x[1] * y[0]
    dot = x[0] * y[0] + x[1] * y[1]
    return math.atan2(abs(cross), dot)


def angle_directed(x: Point, y: Point) -> float:
    """Counterclockwise angle that rotates vector x onto vector y, in [0, 2*pi)."""
    _require_nonzero(x)
    _require_nonzero(y)
    cross = x[0] * y[1] - x[1] * y[0]
    dot = x[0] * y[0] + x[1] * y[1]
    a = math.atan2(cross, dot) % _TWO_PI
    # Float modulo may round a tiny negative angle up to exactly 2*pi.
    return 0.0 if a >= _TWO_PI else a


def h_ratio(a: Point, b: Point, x: Point) -> float:
    """Distance-sum ratio (|a-x| + |b-x|) / |a-b|.

    Always >= 1; equals 1 exactly when x lies on the segment ab.  Level sets
    are the confocal ellipses with foci a and b.
    """
    d = dist(a, b)
    if d <= EPS_GEO:
        raise DegenerateEdgeError(f"edge endpoints coincide: {a}, {b}")
    return (dist(a, x) + dist(b, x)) / d


def grad_h(a: Point, b: Point, x: Point) -> Point:
    """Gradient of ``h_ratio(a, b, .)`` at x, undefined at the endpoints.

    Equals ((x-a)/|x-a| + (x-b)/|x-b|) / |a-b|.
    """
    d = dist(a, b)
    if d <= EPS_GEO:
        raise DegenerateEdgeError(f"edge endpoints coincide: {a}, {b}")
    da = dist(x, a)
    db = dist(x, b)
    if da <= EPS_GEO or db <= EPS_GEO:
        raise FocusError(f"gradient undefined at endpoint: {x}")
    gx = ((x[0] - a[0]) / da + (x[0] - b[0]) / db) / d
    gy = ((x[1] - a[1]) / da + (x[1] - b[1]) / db) / d
    return (gx, gy)


def bisector_point(x: Point, y: Point) -> Point:
    """Point on segment xy hit by the bisector of the angle between x and y
    at the origin: (|y| x + |x| y) / (|x| + |y|).

    Antipodal inputs collapse to the origin, where no bisecting ray exists;
    callers must handle that case.
    """
    _require_nonzero(x)
    _require_nonzero(y)
    nx = norm(x)
    ny = norm(y)
    s = nx + ny
    return ((ny * x[0] + nx * y[0]) / s, (ny * x[1] + nx * y[1]) / s)


def f_ratio(x: Point, y: Point) -> float:
    """(|x| + |y|) / |x - y|: the distance-sum ratio of segment xy seen from
    the origin.  Strictly decreases when y slides inward along the segment."""
    d = dist(x, y)
    if d <= EPS_GEO:
        raise DegenerateEdgeError(f"coincident arguments: {x}, {y}")
    return (norm(x) + norm(y)) / d


def in_ellipse(a: Point, b: Point, lam: float, x: Point) -> bool:
    """Membership in the filled ellipse {z : |a-z| + |b-z| <= lam |a-b|}.

    Non-strict: boundary points within EPS_GEO count as inside, since
    witness points sit exactly on active-edge boundaries.
    """
    if lam < 1.0:
        raise ValueError(f"lam must be >= 1, got {lam}")
    return h_ratio(a, b, x) <= lam + EPS_GEO


def in_lens(x: Point, y: Point, alpha: float, z: Point) -> bool:
    """Membership in the alpha-lens of segment xy: the two endpoints plus
    every point from which the segment subtends an angle of at least alpha."""
    if not 0.0 < alpha < math.pi:
        raise ValueError(f"alpha must lie in (0, pi), got {alpha}")
    if dist(x, y) <= EPS_GEO:
        raise DegenerateEdgeError(f"coincident arguments: {x}, {y}")
    if z == x or z == y:
        return True
    u = (x[0] - z[0], x[1] - z[1])
    v = (y[0] - z[0], y[1] - z[1])
    if (u[0] == 0.0 and u[1] == 0.0) or (v[0] == 0.0 and v[1] == 0.0):
        return True
    # atan2 of cross/dot keeps precision near 0 and pi, unlike acos.
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return math.atan2(abs(cross), dot) >= alpha
