"""Perfect matchings of planar point sets: representation, cost, exact
max-sum solvers, and 2-opt local search."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .geom import Point, dist

# Size caps (number of points) for the exact solvers.
EXACT_CAP = 20
BRUTE_CAP = 12


class SizeCapError(ValueError):
    """Instance exceeds the solver's configured size cap."""


@dataclass(frozen=True)
class PointSet:
    """Indexed list of planar points.  Duplicates are allowed (the input is
    a multiset in effect); matching operations additionally require an even
    count."""

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("point set is empty")
        cleaned = []
        for i, p in enumerate(self.points):
            x, y = float(p[0]), float(p[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"non-finite coordinate at index {i}: {p}")
            cleaned.append((x, y))
        object.__setattr__(self, "points", tuple(cleaned))

    @classmethod
    def of(cls, coords: Iterable[Sequence[float]]) -> "PointSet":
        return cls(tuple((c[0], c[1]) for c in coords))

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def diameter(self) -> float:
        pts = self.points
        return max(
            (dist(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))),
            default=0.0,
        )


def canonical_pairs(pairs: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    """Sorted-pair, sorted-list canonical form used for deterministic output
    and tie-breaking."""
    return tuple(sorted(tuple(sorted((int(p[0]), int(p[1])))) for p in pairs))


def validate_pairs(s: PointSet, pairs: Sequence[tuple[int, int]]) -> None:
    """Check that pairs form a perfect matching of the indices of s."""
    n = len(s)
    seen = [False] * n
    for i, j in pairs:
        for k in (i, j):
            if not 0 <= k < n:
                raise IndexError(f"point index {k} out of range for {n} points")
            if seen[k]:
                raise ValueError(f"point index {k} matched twice")
            seen[k] = True
    if not all(seen):
        missing = [k for k, ok in enumerate(seen) if not ok]
        raise ValueError(f"unmatched point indices: {missing}")


@dataclass(frozen=True)
class Matching:
    """Perfect pairing of point indices with its cached total edge length."""

    pairs: tuple[tuple[int, int], ...]
    cost: float

    @classmethod
    def from_pairs(cls, s: PointSet, pairs: Iterable[Sequence[int]]) -> "Matching":
        canon = canonical_pairs(pairs)
        validate_pairs(s, canon)
        total = sum(dist(s[i], s[j]) for i, j in canon)
        return cls(canon, total)

    def edge(self, s: PointSet, e: int) -> tuple[Point, Point]:
        i, j = self.pairs[e]
        return s[i], s[j]


def cost(m: Matching, s: PointSet) -> float:
    """Recompute the total Euclidean length of the matching over s."""
    validate_pairs(s, m.pairs)
    return sum(dist(s[i], s[j]) for i, j in m.pairs)


def improvement_threshold(current_cost: float) -> float:
    """Minimum accepted cost increase; guards against float swap cycling."""
    return 1e-12 * (1.0 + current_cost)


def _require_even(s: PointSet) -> None:
    if len(s) % 2:
        raise ValueError(f"perfect matching needs an even point count, got {len(s)}")


def exact_max_sum(s: PointSet, *, cap: int = EXACT_CAP) -> Matching:
    """Globally optimal max-sum matching by dynamic programming over vertex
    subsets.

    State: the set of already-matched indices; the lowest unmatched index is
    always paired next, against every other unmatched one.  O(2^n * n) time
    and O(2^n) memory.  Exact cost ties are broken toward the fewest
    zero-length edges (duplicated points can tie a degenerate pairing with a
    proper one, and downstream witness math needs proper edges), then toward
    the lexicographically smallest canonical pair list.
    """
    _require_even(s)
    n = len(s)
    if n > cap:
        raise SizeCapError(f"{n} points exceeds the exact-solver cap of {cap}")
    pts = s.points
    d = [[dist(pts[i], pts[j]) for j in range(n)] for i in range(n)]
    full = (1 << n) - 1
    neg = (float("-inf"), 0)
    # value[mask] = (best total, -zero-edge count) over the points NOT in
    # mask; tuples compare cost first, exactly.
    value: list[tuple[float, int]] = [neg] * (full + 1)
    value[full] = (0.0, 0)
    for mask in range(full - 1, -1, -1):
        if mask.bit_count() & 1:
            continue
        rem = ~mask & full
        bi = rem & -rem
        i = bi.bit_length() - 1
        best = neg
        jbits = rem ^ bi
        di = d[i]
        while jbits:
            bj = jbits & -jbits
            dij = di[bj.bit_length() - 1]
            rest = value[mask | bi | bj]
            v = (dij + rest[0], rest[1] - (dij == 0.0))
            if v > best:
                best = v
            jbits ^= bj
        value[mask] = best

    pairs = []
    mask = 0
    while mask != full:
        rem = ~mask & full
        bi = rem & -rem
        i = bi.bit_length() - 1
        target = value[mask]
        jbits = rem ^ bi
        di = d[i]
        while jbits:
            bj = jbits & -jbits
            j = bj.bit_length() - 1
            # Exact equality: value[mask] was computed as the max of these
            # same expressions.  The smallest such j is the lex-least.
            dij = di[j]
            rest = value[mask | bi | bj]
            if (dij + rest[0], rest[1] - (dij == 0.0)) == target:
                pairs.append((i, j))
                mask |= bi | bj
                break
            jbits ^= bj
        else:  # pragma: no cover - unreachable by construction
            raise AssertionError("DP reconstruction failed")
    return Matching.from_pairs(s, pairs)


def brute_force_max_sum(s: PointSet, *, cap: int = BRUTE_CAP) -> Matching:
    """Max-sum matching by exhaustive (2n-1)!! enumeration.

    Independent oracle for :func:`exact_max_sum`: same tie rule (fewest zero
    edges, then lex-least) and the same right-nested summation order when
    scoring a pairing, so exact cost ties resolve identically in both solvers
    even on degenerate inputs.  Enumeration pairs the lowest free index first
    and scans partners in increasing order, making the first optimum found
    the lex-least one.
    """
    _require_even(s)
    n = len(s)
    if n > cap:
        raise SizeCapError(f"{n} points exceeds the brute-force cap of {cap}")
    pts = s.points
    d = [[dist(pts[i], pts[j]) for j in range(n)] for i in range(n)]
    best = (float("-inf"), 0)
    best_pairs: list[tuple[int, int]] = []
    chosen: list[tuple[int, int]] = []

    def recurse(remaining: list[int]) -> None:
        nonlocal best, best_pairs
        if not remaining:
            total = 0.0
            zeros = 0
            for i, j in reversed(chosen):
                total = d[i][j] + total
                zeros += d[i][j] == 0.0
            if (total, -zeros) > best:
                best = (total, -zeros)
                best_pairs = list(chosen)
            return
        i = remaining[0]
        for k in range(1, len(remaining)):
            chosen.append((i, remaining[k]))
            recurse(remaining[1:k] + remaining[k + 1 :])
            chosen.pop()

    recurse(list(range(n)))
    return Matching.from_pairs(s, best_pairs)


def local_search(s: PointSet, init: Matching) -> Matching:
    """2-opt local search: replace edges {ab, cd} by {ac, bd} or {ad, bc}
    while total length grows by more than the improvement threshold.

    Never decreases cost and terminates: every accepted swap increases cost
    by a strictly positive amount bounded away from zero.
    """
    validate_pairs(s, init.pairs)
    pts = s.points
    pairs = [list(p) for p in init.pairs]
    total = sum(dist(pts[i], pts[j]) for i, j in init.pairs)
    improved = True
    while improved:
        improved = False
        for e in range(len(pairs)):
            for f in range(e + 1, len(pairs)):
                a, b = pairs[e]
                c, dd = pairs[f]
                base = dist(pts[a], pts[b]) + dist(pts[c], pts[dd])
                alt1 = dist(pts[a], pts[c]) + dist(pts[b], pts[dd])
                alt2 = dist(pts[a], pts[dd]) + dist(pts[b], pts[c])
                eps = improvement_threshold(total)
                if alt1 >= alt2 and alt1 > base + eps:
                    pairs[e] = [a, c]
                    pairs[f] = [b, dd]
                    total += alt1 - base
                    improved = True
                elif alt2 > base + eps:
                    pairs[e] = [a, dd]
                    pairs[f] = [b, c]
                    total += alt2 - base
                    improved = True
    return Matching.from_pairs(s, pairs)
