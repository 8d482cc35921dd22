"""Minimizer for pointwise maxima of smooth convex pieces on the plane.

Two phases.  Phase 1 is a diminishing-step subgradient descent (step D/sqrt(k)
for instance diameter D) that tracks the best iterate and bails out early on a
plateau or a certified optimum.  Phase 2 polishes by alternating Newton steps
on the stationarity system with minimum-norm-subgradient line searches and
Nelder-Mead shrinks, until the convex-combination certificate residual drops
below ``eps_cert`` or the shrinking simplex collapses, in which case the
result comes back flagged.

The certificate is the classical optimality condition for maxima of convex
functions: at a minimizer, the origin lies in the convex hull of the active
pieces' gradients.  ``min_norm_point`` gives the distance to that hull, which
doubles as a residual and a descent direction.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .geom import Point

# Convex-combination certificate residual accepted as "optimal".
EPS_CERT = 1e-7

# Relative activity tolerance: pieces within ACT_REL * max(1, |f|) of the max.
ACT_REL = 1e-6

Piece = tuple[Callable[[Point], float], Callable[[Point], Point]]

# Activity-tolerance ladder used to pick descent directions; widening the
# active set avoids zigzagging along nonsmooth valleys.
_DIRECTION_DELTAS = (1e-12, 1e-10, 1e-8, 1e-6, 1e-4)


@dataclass(frozen=True)
class MinimaxResult:
    x: Point
    value: float
    active: tuple[int, ...]
    coefficients: tuple[float, ...]  # convex weights aligned with `active`
    residual: float
    iterations: int
    converged: bool


def min_norm_point(vectors: Sequence[Point]) -> tuple[Point, tuple[float, ...], float]:
    """Closest point to the origin in the convex hull of 2-D vectors.

    Exhausts supports of size 1, 2 and 3 (sufficient in the plane) and
    returns (point, convex coefficients over the inputs, norm of the point).
    """
    m = len(vectors)
    if m == 0:
        raise ValueError("min_norm_point needs at least one vector")
    best_r = math.inf
    best_p: Point = (0.0, 0.0)
    best_coeffs = [0.0] * m

    def consider(p: Point, coeffs: list[float]) -> None:
        nonlocal best_r, best_p, best_coeffs
        r = math.hypot(p[0], p[1])
        if r < best_r:
            best_r = r
            best_p = p
            best_coeffs = coeffs

    for i in range(m):
        c = [0.0] * m
        c[i] = 1.0
        consider(vectors[i], c)

    for i in range(m):
        vi = vectors[i]
        for j in range(i + 1, m):
            vj = vectors[j]
            dx = vj[0] - vi[0]
            dy = vj[1] - vi[1]
            dd = dx * dx + dy * dy
            if dd == 0.0:
                continue
            t = -(vi[0] * dx + vi[1] * dy) / dd
            if t <= 0.0 or t >= 1.0:
                continue  # endpoint optima are covered by the singletons
            c = [0.0] * m
            c[i] = 1.0 - t
            c[j] = t
            consider((vi[0] + t * dx, vi[1] + t * dy), c)

    for i in range(m):
        vi = vectors[i]
        for j in range(i + 1, m):
            vj = vectors[j]
            for k in range(j + 1, m):
                vk = vectors[k]
                den = (vj[0] - vi[0]) * (vk[1] - vi[1]) - (vj[1] - vi[1]) * (vk[0] - vi[0])
                if abs(den) < 1e-30:
                    continue
                # Barycentric coordinates of the origin.
                alpha = (vj[0] * vk[1] - vj[1] * vk[0]) / den
                beta = (vk[0] * vi[1] - vk[1] * vi[0]) / den
                gamma = (vi[0] * vj[1] - vi[1] * vj[0]) / den
                if alpha < -1e-12 or beta < -1e-12 or gamma < -1e-12:
                    continue
                alpha, beta, gamma = max(alpha, 0.0), max(beta, 0.0), max(gamma, 0.0)
                ssum = alpha + beta + gamma
                alpha, beta, gamma = alpha / ssum, beta / ssum, gamma / ssum
                c = [0.0] * m
                c[i], c[j], c[k] = alpha, beta, gamma
                px = alpha * vi[0] + beta * vj[0] + gamma * vk[0]
                py = alpha * vi[1] + beta * vj[1] + gamma * vk[1]
                consider((px, py), c)

    return best_p, tuple(best_coeffs), best_r


def _certificate(
    pieces: Sequence[Piece], x: Point, act_rel: float
) -> tuple[list[float], float, list[int], tuple[float, ...], float]:
    """Evaluate all pieces at x and compute the min-norm certificate over the
    gradients of the active ones.  Returns (values, max, active, coeffs over
    active, residual)."""
    vals = [v(x) for v, _ in pieces]
    f = max(vals)
    tol = act_rel * max(1.0, abs(f))
    active = [i for i, v in enumerate(vals) if v >= f - tol]
    grads = [pieces[i][1](x) for i in active]
    _, coeffs, residual = min_norm_point(grads)
    return vals, f, active, coeffs, residual


def _solve2(j00: float, j01: float, j10: float, j11: float, r0: float, r1: float):
    det = j00 * j11 - j01 * j10
    if abs(det) < 1e-300:
        return None
    return ((j11 * r0 - j01 * r1) / det, (j00 * r1 - j10 * r0) / det)


def _newton_polish(
    pieces: Sequence[Piece],
    x: Point,
    f: float,
    active: Sequence[int],
    scale: float,
) -> tuple[Point, int] | None:
    """Newton refinement of the stationarity system for a trial support.

    Function-value-based refinement bottoms out at sqrt(ulp) position
    accuracy, which is not enough for the gradient certificate when the
    witness sits near an edge endpoint (huge curvature).  Newton on the
    equal-value / aligned-gradient equations works on gradient values
    instead and reaches machine precision.  Returns the first candidate that
    stays close in value, or None.
    """
    if not 2 <= len(active) <= 6:
        return None
    combos: list[tuple[int, ...]] = []
    if len(active) >= 3:
        combos.extend(itertools.combinations(active, 3))
    combos.extend(itertools.combinations(active, 2))
    fd = 1e-7 * scale
    evals = 0

    for combo in combos:
        y = x
        ok = False
        for _ in range(30):
            if len(combo) == 3:
                i, j, k = combo
                vi, vj, vk = pieces[i][0](y), pieces[j][0](y), pieces[k][0](y)
                gi, gj, gk = pieces[i][1](y), pieces[j][1](y), pieces[k][1](y)
                evals += 3
                r0, r1 = vi - vk, vj - vk
                step = _solve2(
                    gi[0] - gk[0], gi[1] - gk[1], gj[0] - gk[0], gj[1] - gk[1], r0, r1
                )
            else:
                i, j = combo
                vi, vj = pieces[i][0](y), pieces[j][0](y)
                gi, gj = pieces[i][1](y), pieces[j][1](y)
                evals += 2
                r0 = vi - vj
                r1 = gi[0] * gj[1] - gi[1] * gj[0]

                def cross_at(p: Point) -> float:
                    a = pieces[i][1](p)
                    b = pieces[j][1](p)
                    return a[0] * b[1] - a[1] * b[0]

                cxp = cross_at((y[0] + fd, y[1]))
                cxm = cross_at((y[0] - fd, y[1]))
                cyp = cross_at((y[0], y[1] + fd))
                cym = cross_at((y[0], y[1] - fd))
                evals += 8
                step = _solve2(
                    gi[0] - gj[0],
                    gi[1] - gj[1],
                    (cxp - cxm) / (2.0 * fd),
                    (cyp - cym) / (2.0 * fd),
                    r0,
                    r1,
                )
            if step is None:
                break
            sn = math.hypot(step[0], step[1])
            if sn > 0.1 * scale:  # keep Newton local
                step = (step[0] * 0.1 * scale / sn, step[1] * 0.1 * scale / sn)
                sn = 0.1 * scale
            y = (y[0] - step[0], y[1] - step[1])
            if sn < 1e-13 * scale:
                ok = True
                break
        if not ok:
            continue
        fy = max(v(y) for v, _ in pieces)
        evals += len(pieces)
        if fy <= f + 1e-12 * max(1.0, abs(f)):
            return y, evals
    return None


def _nelder_mead(
    fn: Callable[[Point], float],
    x0: Point,
    size: float,
    scale: float,
    *,
    max_iter: int = 300,
) -> tuple[Point, float, float, int]:
    """One Nelder-Mead run on a 2-simplex seeded around x0.

    Returns (best point, best value, final simplex diameter, evaluations).
    """
    pts = [x0, (x0[0] + size, x0[1]), (x0[0], x0[1] + size)]
    vals = [fn(p) for p in pts]
    evals = 3

    def diam() -> float:
        return max(
            math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
            for i in range(3)
            for j in range(i + 1, 3)
        )

    for _ in range(max_iter):
        order = sorted(range(3), key=lambda i: vals[i])
        b, mid, w = order
        if diam() < 1e-15 * scale or vals[w] - vals[b] < 1e-17 * max(1.0, abs(vals[b])):
            break
        cx = (pts[b][0] + pts[mid][0]) / 2.0
        cy = (pts[b][1] + pts[mid][1]) / 2.0
        xr = (2.0 * cx - pts[w][0], 2.0 * cy - pts[w][1])
        fr = fn(xr)
        evals += 1
        if fr < vals[b]:
            xe = (3.0 * cx - 2.0 * pts[w][0], 3.0 * cy - 2.0 * pts[w][1])
            fe = fn(xe)
            evals += 1
            if fe < fr:
                pts[w], vals[w] = xe, fe
            else:
                pts[w], vals[w] = xr, fr
        elif fr < vals[mid]:
            pts[w], vals[w] = xr, fr
        else:
            xc = ((cx + pts[w][0]) / 2.0, (cy + pts[w][1]) / 2.0)
            fc = fn(xc)
            evals += 1
            if fc < vals[w]:
                pts[w], vals[w] = xc, fc
            else:
                for i in (mid, w):
                    pts[i] = ((pts[i][0] + pts[b][0]) / 2.0, (pts[i][1] + pts[b][1]) / 2.0)
                    vals[i] = fn(pts[i])
                    evals += 1
    best = min(range(3), key=lambda i: vals[i])
    return pts[best], vals[best], diam(), evals


def minimize_max(
    pieces: Sequence[Piece],
    x0: Point,
    diameter: float,
    *,
    subgrad_iters: int = 5000,
    eps_cert: float = EPS_CERT,
    act_rel: float = ACT_REL,
    polish_rounds: int = 80,
    value_floor: float | None = None,
    floor_tol: float = 1e-9,
) -> MinimaxResult:
    """Minimize max_i f_i over the plane for smooth convex pieces f_i.

    ``value_floor`` is an optional proven global lower bound of the max (the
    ratio functions never drop below 1).  Reaching it within ``floor_tol``
    certifies optimality directly, which covers minima pinned at piece
    singularities where no gradient combination can cancel.
    """
    if not pieces:
        raise ValueError("minimize_max needs at least one piece")
    scale = max(diameter, 1e-12)

    def fmax(x: Point) -> float:
        return max(v(x) for v, _ in pieces)

    def certified(f: float, residual: float) -> bool:
        if residual <= eps_cert:
            return True
        return value_floor is not None and f <= value_floor + floor_tol

    iterations = 0

    def _finish(x: Point) -> MinimaxResult:
        """Assemble the result at x, sharpening a certified point with one
        Newton pass so downstream containment tests see full precision."""
        nonlocal iterations
        _, f, active, coeffs, residual = _certificate(pieces, x, act_rel)
        refined = _newton_polish(pieces, x, f, active, scale)
        if refined is not None:
            y, ev = refined
            iterations += ev
            _, fy, act_y, coeffs_y, res_y = _certificate(pieces, y, act_rel)
            if res_y <= residual and fy <= f + 1e-12 * max(1.0, abs(f)):
                x, f, active, coeffs, residual = y, fy, act_y, coeffs_y, res_y
        return MinimaxResult(
            x, f, tuple(active), tuple(coeffs), residual, iterations, certified(f, residual)
        )

    x = x0
    best_x = x0
    best_f = fmax(x0)

    # ---- phase 1: subgradient descent with diminishing steps
    stall = 0
    for k in range(1, subgrad_iters + 1):
        iterations += 1
        vals = [v(x) for v, _ in pieces]
        f = max(vals)
        if f < best_f - 1e-13 * max(1.0, abs(best_f)):
            best_x, best_f = x, f
            stall = 0
        else:
            stall += 1
        g = pieces[vals.index(f)][1](x)
        gn = math.hypot(g[0], g[1])
        if gn <= eps_cert:
            best_x, best_f = x, f
            break
        step = scale / math.sqrt(k)
        x = (x[0] - step * g[0] / gn, x[1] - step * g[1] / gn)
        if stall >= 300:
            break
        if k % 100 == 0:
            _, f_b, _, _, residual = _certificate(pieces, best_x, act_rel)
            if certified(f_b, residual):
                return _finish(best_x)

    # ---- phase 2: certificate-driven polish
    x = best_x
    f = best_f
    step_hint = 0.05 * scale
    nm_size = 0.05 * scale

    def min_norm_step(x: Point, f: float, vals: list[float]) -> tuple[Point, float] | None:
        """One line-search step along the negative minimum-norm subgradient,
        widening the active set until a usable direction appears."""
        nonlocal step_hint, iterations
        for delta in _DIRECTION_DELTAS:
            tol = delta * max(1.0, abs(f))
            idxs = [i for i, v in enumerate(vals) if v >= f - tol]
            grads = [pieces[i][1](x) for i in idxs]
            p, _, pr = min_norm_point(grads)
            if pr <= eps_cert:
                # The widened hull already cancels; only position refinement
                # can tighten the true active set further.
                return None
            dvec = (-p[0] / pr, -p[1] / pr)
            t = step_hint
            while t > 1e-17 * scale:
                x2 = (x[0] + t * dvec[0], x[1] + t * dvec[1])
                f2 = fmax(x2)
                iterations += 1
                if f2 < f - 0.1 * t * pr:
                    step_hint = min(2.0 * t, 0.25 * scale)
                    return x2, f2
                t *= 0.5
        return None

    for _ in range(polish_rounds):
        vals, f, active, coeffs, residual = _certificate(pieces, x, act_rel)
        if certified(f, residual):
            return _finish(x)
        refined = _newton_polish(pieces, x, f, active, scale)
        if refined is not None:
            y, ev = refined
            iterations += ev
            _, fy, act_y, coeffs_y, res_y = _certificate(pieces, y, act_rel)
            if res_y <= eps_cert:
                return _finish(y)
            if fy < f:
                x, f = y, fy
                vals = [v(x) for v, _ in pieces]
        progressed = False
        # Descend along minimum-norm subgradients while that keeps working;
        # this is what converges in kinked valleys where Nelder-Mead crawls.
        for _ in range(60):
            stepped = min_norm_step(x, f, vals)
            if stepped is None:
                break
            x, f = stepped
            progressed = True
            vals, f, active, coeffs, residual = _certificate(pieces, x, act_rel)
            if certified(f, residual):
                return _finish(x)
        # Nelder-Mead shrink handles the smooth flats the subgradient steps
        # cannot certify through.
        x3, f3, sdiam, ev = _nelder_mead(fmax, x, nm_size, scale)
        iterations += ev
        if f3 < f - 1e-16 * max(1.0, abs(f)):
            x, f = x3, f3
            progressed = True
            # Restart slightly above the collapsed simplex size so the next
            # run can still move, shrinking toward the optimum overall.
            nm_size = max(4.0 * sdiam, 1e-11 * scale)
        if f < best_f:
            best_x, best_f = x, f
        if not progressed:
            nm_size *= 0.01
            if nm_size < 1e-13 * scale:
                break

    if best_f < f:
        x = best_x
    return _finish(x)
