"""Bicolored improvement graphs and the alternating-cycle descent loop.

When a matching's minimax ratio exceeds 2/sqrt(3), the graph on the support
edges' endpoints (blue = tight matching edges, red = pairs beating the ratio
strictly) contains a cycle alternating blue and red; swapping along it
strictly increases matching cost.  Iterating this is a finite descent: cost
grows at every step and there are finitely many matchings, so the loop stops
at a matching whose ratio is within tolerance of the bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import theorem_tol
from .geom import EPS_GEO, RATIO_BOUND, Point, dist, norm
from .matching import (
    Matching,
    PointSet,
    SizeCapError,
    improvement_threshold,
    local_search,
    validate_pairs,
)
from .witness import (
    EPS_ACT,
    SupportError,
    WitnessResult,
    active_set,
    caratheodory_support,
    minimize_h,
)

# Relative strict margin required of red edges: ratio must beat lambda by
# more than EPS_RED_REL * lambda * scale.
EPS_RED_REL = 1e-9

# Exhaustive cycle search cap (vertices).
CYCLE_SEARCH_CAP = 16

# Activity-tolerance ladder for cycle search; widened when numerics hide the
# cycle that must exist for lambda above the bound.
_ACT_LADDER = (EPS_ACT, 1e-5, 1e-4, 1e-3)


class VertexAtOriginError(ValueError):
    """A graph vertex coincides with the witness (the ratio should be 1)."""


class GraphColorError(ValueError):
    """A blue edge fails the tightness requirement at the given tolerance."""


class CycleMatchError(ValueError):
    """The cycle's blue edges are not all present in the matching."""


class ImprovementError(RuntimeError):
    """Applying a cycle failed to increase cost: numerical inconsistency."""


@dataclass(frozen=True)
class BicoloredGraph:
    """Endpoints of selected edges, translated so the witness is the origin.

    Blue edges are the (tight) matching pairs; red edges are strict-inequality
    pairs.  Edges hold graph-vertex indices; ``point_ids`` maps them back to
    the instance.
    """

    vertices: tuple[Point, ...]
    point_ids: tuple[int, ...]
    blue_edges: tuple[tuple[int, int], ...]
    red_edges: tuple[tuple[int, int], ...]
    origin_excluded: bool = True

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if len(self.point_ids) != n:
            raise ValueError("point_ids must align with vertices")
        seen = [False] * n
        for i, j in self.blue_edges:
            for k in (i, j):
                if not 0 <= k < n:
                    raise ValueError(f"blue edge index {k} out of range")
                if seen[k]:
                    raise ValueError("blue edges are not a matching")
                seen[k] = True
        if not all(seen):
            raise ValueError("blue edges do not cover every vertex")
        blue = {tuple(sorted(e)) for e in self.blue_edges}
        for e in self.red_edges:
            if tuple(sorted(e)) in blue:
                raise ValueError(f"edge {e} is both blue and red")


@dataclass(frozen=True)
class AlternatingCycle:
    """Point-id sequence x1 y1 x2 y2 ... closing back to x1; consecutive
    pairs alternate blue (matching) and red."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if n < 4 or n % 2:
            raise ValueError(f"alternating cycle needs even length >= 4, got {n}")
        if len(set(self.vertices)) != n:
            raise ValueError("cycle vertices must be distinct")

    def blue_pairs(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[k], v[k + 1]) for k in range(0, len(v), 2)]

    def red_pairs(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[k + 1], v[(k + 2) % len(v)]) for k in range(0, len(v), 2)]


def build_graph(
    s: PointSet,
    edges: list[tuple[int, int]],
    o: Point,
    lam: float,
    *,
    blue_rtol: float = EPS_ACT,
    red_rtol: float = EPS_RED_REL,
) -> BicoloredGraph:
    """Classify vertex pairs of the selected edges into blue (tight at lam)
    and red (strictly beating lam by the red margin); equality-up-to-margin
    pairs get no color.
    """
    ids: list[int] = []
    for i, j in edges:
        for k in (i, j):
            if k in ids:
                raise ValueError(f"point index {k} appears in two edges")
            ids.append(k)
    verts = [(s[k][0] - o[0], s[k][1] - o[1]) for k in ids]
    n = len(verts)
    scale = max(
        (dist(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)),
        default=0.0,
    )
    if scale <= 0.0:
        scale = max(max(norm(v) for v in verts), 1.0)
    for k, v in enumerate(verts):
        if norm(v) <= EPS_GEO * scale:
            raise VertexAtOriginError(
                f"point {ids[k]} coincides with the witness; ratio should be 1"
            )

    local = {pid: k for k, pid in enumerate(ids)}
    blue_tol = blue_rtol * lam * scale
    blue = []
    for i, j in edges:
        u, v = verts[local[i]], verts[local[j]]
        d = dist(u, v)
        if abs(norm(u) + norm(v) - lam * d) > blue_tol:
            raise GraphColorError(
                f"edge ({i}, {j}) is not tight at lambda={lam} within {blue_tol}"
            )
        blue.append(tuple(sorted((local[i], local[j]))))

    blue_set = set(blue)
    red_margin = red_rtol * lam * scale
    red = []
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) in blue_set:
                continue
            d = dist(verts[a], verts[b])
            if d <= EPS_GEO * scale:
                continue
            if lam * d - (norm(verts[a]) + norm(verts[b])) > red_margin:
                red.append((a, b))

    return BicoloredGraph(
        vertices=tuple(verts),
        point_ids=tuple(ids),
        blue_edges=tuple(blue),
        red_edges=tuple(red),
        origin_excluded=True,
    )


def find_alternating_cycle(
    g: BicoloredGraph, *, cap: int = CYCLE_SEARCH_CAP
) -> AlternatingCycle | None:
    """Exhaustive depth-first search for a simple cycle alternating blue and
    red edges, or None when no such cycle exists."""
    n = len(g.vertices)
    if n > cap:
        raise SizeCapError(f"{n} vertices exceeds the cycle-search cap of {cap}")
    partner: dict[int, int] = {}
    for a, b in g.blue_edges:
        partner[a] = b
        partner[b] = a
    radj: dict[int, list[int]] = {v: [] for v in range(n)}
    for a, b in g.red_edges:
        radj[a].append(b)
        radj[b].append(a)
    for v in radj:
        radj[v].sort()

    def dfs(path: list[int], used: set[int]) -> list[int] | None:
        cur = path[-1]
        for w in radj[cur]:
            if w == path[0] and len(path) >= 4:
                return list(path)
            if w in used:
                continue
            p = partner[w]
            if p in used:
                continue
            path.extend((w, p))
            used.update((w, p))
            found = dfs(path, used)
            if found is not None:
                return found
            used.difference_update((w, p))
            del path[-2:]
        return None

    for a, b in g.blue_edges:
        for x1, y1 in ((a, b), (b, a)):
            found = dfs([x1, y1], {x1, y1})
            if found is not None:
                return AlternatingCycle(tuple(g.point_ids[v] for v in found))
    return None


def apply_cycle(m: Matching, cycle: AlternatingCycle, s: PointSet) -> Matching:
    """Swap the cycle's blue (matching) edges for its red ones.

    The result is a perfect matching whose cost must strictly exceed the
    original; anything else raises :class:`ImprovementError` as a numerical
    inconsistency signal.
    """
    current = set(m.pairs)
    blues = {tuple(sorted(p)) for p in cycle.blue_pairs()}
    missing = blues - current
    if missing:
        raise CycleMatchError(f"cycle blue edges not in matching: {sorted(missing)}")
    reds = {tuple(sorted(p)) for p in cycle.red_pairs()}
    result = Matching.from_pairs(s, (current - blues) | reds)
    if result.cost <= m.cost + improvement_threshold(m.cost):
        raise ImprovementError(
            f"cycle swap did not increase cost: {m.cost} -> {result.cost}"
        )
    return result


@dataclass(frozen=True)
class DescentStep:
    lambda_star: float
    cost: float  # matching cost after the swap
    cycle_length: int


@dataclass(frozen=True)
class DescentResult:
    matching: Matching
    witness: WitnessResult | None
    trace: tuple[DescentStep, ...]
    status: str  # ok | cycle_not_found | solver_failure | degenerate_edges
    #             | improvement_violation | step_limit

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _has_zero_edge(s: PointSet, m: Matching) -> bool:
    scale = max(s.diameter(), 1.0)
    return any(dist(s[i], s[j]) <= EPS_GEO * scale for i, j in m.pairs)


def h_slack(s: PointSet, m: Matching, e: int, o: Point, lam: float) -> float:
    """Signed tightness gap lambda - h_e(o) of edge e at o."""
    i, j = m.pairs[e]
    a, b = s[i], s[j]
    return lam - (dist(a, o) + dist(b, o)) / dist(a, b)


def _find_improving_cycle(
    s: PointSet, m: Matching, w: WitnessResult
) -> AlternatingCycle | None:
    o, lam = w.o_star, w.lambda_star
    for act_tol in _ACT_LADDER:
        active = active_set(s, m, o, lam, tol=act_tol)
        if len(active) < 2:
            continue
        candidates: list[tuple[int, ...]] = []
        try:
            support, _ = caratheodory_support(s, m, active, o)
            candidates.append(support)
        except (SupportError, ValueError):
            pass
        if len(active) > CYCLE_SEARCH_CAP // 2:
            ranked = sorted(
                active, key=lambda e: abs(h_slack(s, m, e, o, lam))
            )[: CYCLE_SEARCH_CAP // 2]
            capped = tuple(sorted(ranked))
        else:
            capped = active
        if not candidates or candidates[0] != capped:
            candidates.append(capped)
        for edge_ids in candidates:
            pairs = [m.pairs[e] for e in edge_ids]
            try:
                g = build_graph(s, pairs, o, lam, blue_rtol=act_tol)
            except (VertexAtOriginError, GraphColorError, ValueError):
                continue
            cycle = find_alternating_cycle(g)
            if cycle is not None:
                return cycle
    return None


def descend(
    s: PointSet, init: Matching, *, max_steps: int = 500, tol: float | None = None
) -> DescentResult:
    """Improve a matching by alternating-cycle swaps until its minimax ratio
    is within tolerance of 2/sqrt(3).

    Every accepted swap strictly increases cost, so the loop terminates.  All
    failure modes come back as flagged statuses, never exceptions.
    """
    validate_pairs(s, init.pairs)
    tol = theorem_tol(tol)
    m = init
    if _has_zero_edge(s, m):
        m = local_search(s, m)
        if _has_zero_edge(s, m):
            return DescentResult(m, None, (), "degenerate_edges")

    trace: list[DescentStep] = []
    witness: WitnessResult | None = None
    for _ in range(max_steps):
        witness = minimize_h(s, m)
        if not witness.converged:
            return DescentResult(m, witness, tuple(trace), "solver_failure")
        if witness.lambda_star <= RATIO_BOUND + tol:
            return DescentResult(m, witness, tuple(trace), "ok")
        cycle = _find_improving_cycle(s, m, witness)
        if cycle is None:
            return DescentResult(m, witness, tuple(trace), "cycle_not_found")
        try:
            m = apply_cycle(m, cycle, s)
        except ImprovementError:
            return DescentResult(m, witness, tuple(trace), "improvement_violation")
        trace.append(DescentStep(witness.lambda_star, m.cost, len(cycle.vertices)))
    return DescentResult(m, witness, tuple(trace), "step_limit")
