"""Witness-point extraction for matchings.

Minimizes the maximum per-edge distance-sum ratio over the plane, identifies
the active edges and a 2- or 3-edge support whose bisector points surround
the witness, certifies optimality through the gradient convex hull, and
computes the Steiner-star (geometric median) objective.

All solvers normalize the instance into the unit square first; the ratios are
similarity-invariant, so nothing is lost and the unit-scale tolerances of
:mod:`ellimatch.geom` apply.  Outputs are mapped back to input coordinates.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .geom import EPS_GEO, Point, DegenerateEdgeError, bisector_point, dist, h_ratio, norm
from .matching import Matching, PointSet, validate_pairs
from .minimax import ACT_REL, EPS_CERT, Piece, min_norm_point, minimize_max

# Relative activity tolerance for the reported active set (times lambda*).
EPS_ACT = ACT_REL

# Above this, a witness is considered strictly off every segment and support
# extraction applies; below, the witness sits on a segment (ratio 1 regime).
LAMBDA_SEGMENT = 1.0 + 1e-9

IndexPair = tuple[int, int]


class SupportError(RuntimeError):
    """No 2- or 3-edge support contains the witness; the witness is likely
    inaccurate."""


@dataclass(frozen=True)
class WitnessResult:
    """Minimax witness for an edge set.

    ``certificate`` pairs each active edge with its convex coefficient in the
    gradient combination whose norm is ``residual``.  ``support`` is None when
    the ratio is 1 within tolerance (witness on a segment) or when extraction
    failed.
    """

    o_star: Point
    lambda_star: float
    active: tuple[int, ...]
    support: tuple[int, ...] | None
    certificate: tuple[tuple[int, float], ...]
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of an optimality check at a given point; failure is a verdict,
    not an exception."""

    ok: bool
    residual: float
    lambda_at: float
    coefficients: tuple[tuple[int, float], ...]


def _normalize(points: Sequence[Point]) -> tuple[list[Point], Point, float]:
    """Similarity transform onto the unit square: returns (scaled points,
    offset, scale) with original = offset + scale * scaled."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, y0 = min(xs), min(ys)
    scale = max(max(xs) - x0, max(ys) - y0)
    if scale <= 0.0:
        scale = 1.0
    return [((p[0] - x0) / scale, (p[1] - y0) / scale) for p in points], (x0, y0), scale


def _edge_pieces(pts: Sequence[Point], pairs: Sequence[IndexPair]) -> list[Piece]:
    pieces: list[Piece] = []
    for i, j in pairs:
        a, b = pts[i], pts[j]
        d = dist(a, b)
        if d <= EPS_GEO:
            raise DegenerateEdgeError(f"zero-length edge between indices {i} and {j}")

        def val(x: Point, a=a, b=b, d=d) -> float:
            return (math.hypot(x[0] - a[0], x[1] - a[1]) + math.hypot(x[0] - b[0], x[1] - b[1])) / d

        def grad(x: Point, a=a, b=b, d=d) -> Point:
            da = math.hypot(x[0] - a[0], x[1] - a[1])
            db = math.hypot(x[0] - b[0], x[1] - b[1])
            # At a focus the smooth part alone is a valid subgradient.
            gx = (x[0] - a[0]) / da if da > 1e-15 else 0.0
            gy = (x[1] - a[1]) / da if da > 1e-15 else 0.0
            if db > 1e-15:
                gx += (x[0] - b[0]) / db
                gy += (x[1] - b[1]) / db
            return (gx / d, gy / d)

        pieces.append((val, grad))
    return pieces


def h_max(s: PointSet, pairs: Sequence[IndexPair], x: Point) -> float:
    """Maximum distance-sum ratio over the given edges at x."""
    return max(h_ratio(s[i], s[j], x) for i, j in pairs)


def minimize_h(s: PointSet, m: Matching, *, subgrad_iters: int = 5000) -> WitnessResult:
    """Global minimizer of the edgewise max distance-sum ratio of a matching."""
    validate_pairs(s, m.pairs)
    return minimize_h_over_edges(s, m.pairs, subgrad_iters=subgrad_iters)


def minimize_h_over_edges(
    s: PointSet, pairs: Sequence[IndexPair], *, subgrad_iters: int = 5000
) -> WitnessResult:
    """Like :func:`minimize_h` but for an arbitrary edge list (used by the
    triple-restricted intersection checks)."""
    if not pairs:
        raise ValueError("no edges to minimize over")
    used = sorted({k for p in pairs for k in p})
    coords = [s[k] for k in used]
    scaled, offset, scale = _normalize(coords)
    npts = dict(zip(used, scaled))

    pieces = _edge_pieces(npts, pairs)
    mids = [
        ((npts[i][0] + npts[j][0]) / 2.0, (npts[i][1] + npts[j][1]) / 2.0) for i, j in pairs
    ]
    x0 = (
        sum(p[0] for p in mids) / len(mids),
        sum(p[1] for p in mids) / len(mids),
    )
    diameter = max(
        (dist(scaled[i], scaled[j]) for i in range(len(scaled)) for j in range(i + 1, len(scaled))),
        default=1.0,
    )
    # The ratio never drops below 1, so 1 is a proven floor; hitting it
    # certifies optimality even when the witness sits on a duplicated point
    # where the gradient hull cannot cancel.
    res = minimize_max(
        pieces, x0, diameter, subgrad_iters=subgrad_iters, value_floor=1.0
    )

    lam = res.value
    residual = res.residual
    if res.converged and residual > EPS_CERT:
        # Certified by the value floor: zero is a genuine subgradient at a
        # duplicated-point witness (the endpoint ball absorbs the gradient).
        residual = 0.0
    certificate = tuple(zip(res.active, res.coefficients))
    support: tuple[int, ...] | None = None
    if lam > LAMBDA_SEGMENT:
        try:
            support, _ = _support_in_frame(npts, pairs, res.active, res.x)
        except (SupportError, DegenerateEdgeError):
            support = None
    o_star = (offset[0] + scale * res.x[0], offset[1] + scale * res.x[1])
    return WitnessResult(
        o_star=o_star,
        lambda_star=lam,
        active=res.active,
        support=support,
        certificate=certificate,
        residual=residual,
        iterations=res.iterations,
        converged=res.converged,
    )


def active_set(
    s: PointSet, m: Matching, o: Point, lam: float, *, tol: float = EPS_ACT
) -> tuple[int, ...]:
    """Edges whose ratio at o is within ``tol * lam`` of lam."""
    out = []
    for e, (i, j) in enumerate(m.pairs):
        if h_ratio(s[i], s[j], o) >= lam * (1.0 - tol):
            out.append(e)
    return tuple(out)


def _support_in_frame(
    pts: Sequence[Point] | dict[int, Point],
    pairs: Sequence[IndexPair],
    active: Sequence[int],
    o: Point,
    *,
    tol: float = EPS_GEO,
) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Support search in a given coordinate frame; see caratheodory_support."""
    ls = []
    for e in active:
        i, j = pairs[e]
        x = (pts[i][0] - o[0], pts[i][1] - o[1])
        y = (pts[j][0] - o[0], pts[j][1] - o[1])
        ls.append(bisector_point(x, y))
    unit = max((norm(l) for l in ls), default=0.0)
    if unit <= 0.0:
        unit = 1.0
    ls = [(l[0] / unit, l[1] / unit) for l in ls]

    k = len(active)
    for a in range(k):
        la = ls[a]
        for b in range(a + 1, k):
            lb = ls[b]
            dx, dy = lb[0] - la[0], lb[1] - la[1]
            dd = dx * dx + dy * dy
            t = 0.0 if dd == 0.0 else min(1.0, max(0.0, -(la[0] * dx + la[1] * dy) / dd))
            px, py = la[0] + t * dx, la[1] + t * dy
            if math.hypot(px, py) <= tol:
                return (active[a], active[b]), (1.0 - t, t)

    for a in range(k):
        la = ls[a]
        for b in range(a + 1, k):
            lb = ls[b]
            for c in range(b + 1, k):
                lc = ls[c]
                den = (lb[0] - la[0]) * (lc[1] - la[1]) - (lb[1] - la[1]) * (lc[0] - la[0])
                if abs(den) < 1e-30:
                    continue
                alpha = (lb[0] * lc[1] - lb[1] * lc[0]) / den
                beta = (lc[0] * la[1] - lc[1] * la[0]) / den
                gamma = (la[0] * lb[1] - la[1] * lb[0]) / den
                if alpha < -1e-9 or beta < -1e-9 or gamma < -1e-9:
                    continue
                alpha, beta, gamma = max(alpha, 0.0), max(beta, 0.0), max(gamma, 0.0)
                ssum = alpha + beta + gamma
                alpha, beta, gamma = alpha / ssum, beta / ssum, gamma / ssum
                rx = alpha * la[0] + beta * lb[0] + gamma * lc[0]
                ry = alpha * la[1] + beta * lb[1] + gamma * lc[1]
                if math.hypot(rx, ry) <= tol:
                    return (active[a], active[b], active[c]), (alpha, beta, gamma)

    raise SupportError(
        f"no 2- or 3-edge support among {len(active)} active edges contains the witness"
    )


def caratheodory_support(
    s: PointSet,
    m: Matching,
    active: Sequence[int],
    o: Point,
    *,
    tol: float = EPS_GEO,
) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Pick 2 or 3 active edges whose bisector points' convex hull contains o.

    Pairs are preferred over triples.  Containment is tested in the frame
    translated to o and rescaled to unit size, so ``tol`` applies at unit
    scale.  Raises :class:`SupportError` when nothing works, which signals an
    inaccurate witness.
    """
    return _support_in_frame(s.points, m.pairs, active, o, tol=tol)


def optimality_certificate(
    s: PointSet,
    m: Matching,
    o: Point,
    *,
    eps_cert: float = EPS_CERT,
    act_tol: float = EPS_ACT,
) -> CertificateResult:
    """Check whether o minimizes the max ratio: the origin must lie (within
    ``eps_cert``) in the convex hull of the active edges' gradients.

    Gradients are taken in the unit-square-normalized frame, where the
    residual tolerance is meaningful.
    """
    validate_pairs(s, m.pairs)
    used = sorted({k for p in m.pairs for k in p})
    scaled, offset, scale = _normalize([s[k] for k in used])
    npts = dict(zip(used, scaled))
    on = ((o[0] - offset[0]) / scale, (o[1] - offset[1]) / scale)

    pieces = _edge_pieces(npts, m.pairs)
    vals = [v(on) for v, _ in pieces]
    lam = max(vals)
    active = [e for e, v in enumerate(vals) if v >= lam * (1.0 - act_tol)]
    grads = [pieces[e][1](on) for e in active]
    _, coeffs, residual = min_norm_point(grads)
    return CertificateResult(
        ok=residual <= eps_cert,
        residual=residual,
        lambda_at=lam,
        coefficients=tuple(zip(active, coeffs)),
    )


def steiner_star(
    s: PointSet, *, grad_tol: float = 1e-6, max_iters: int = 50000
) -> tuple[Point, float]:
    """Geometric-median center and its total-distance objective.

    Weiszfeld iteration from the centroid.  When an iterate lands on an input
    point, the vertex optimality test applies: the pull of the remaining
    points must not exceed the multiplicity of the vertex, otherwise the
    iterate steps along the pull direction.  The sum of unit vectors is
    scale-free, so ``grad_tol`` certifies the center in any frame.
    """
    pts, offset, scale = _normalize(s.points)
    n = len(pts)
    y = (sum(p[0] for p in pts) / n, sum(p[1] for p in pts) / n)
    for _ in range(max_iters):
        at = 0
        rx = ry = 0.0
        wx = wy = winv = 0.0
        for p in pts:
            d = math.hypot(y[0] - p[0], y[1] - p[1])
            if d <= 1e-13:
                at += 1
                continue
            rx += (p[0] - y[0]) / d
            ry += (p[1] - y[1]) / d
            winv += 1.0 / d
            wx += p[0] / d
            wy += p[1] / d
        rn = math.hypot(rx, ry)
        if at:
            if rn <= at + 1e-12:
                break  # vertex-optimal
            step = (rn - at) / winv
            y = (y[0] + step * rx / rn, y[1] + step * ry / rn)
        else:
            if rn <= grad_tol:
                break  # subgradient certificate
            y2 = (wx / winv, wy / winv)
            if dist(y, y2) <= 1e-16 * (1.0 + norm(y)):
                y = y2
                break
            y = y2
    total = sum(math.hypot(y[0] - p[0], y[1] - p[1]) for p in pts)
    center = (offset[0] + scale * y[0], offset[1] + scale * y[1])
    return center, scale * total
