"""Theorem-level verdict checks."""

from __future__ import annotations

import math

import pytest

from conftest import (
    DOUBLED_TRIANGLE,
    SQUARE,
    TRIANGLE_CENTROID,
    square_sides,
    triangle_sides,
)
from ellimatch import (
    RATIO_BOUND,
    InstanceSpec,
    Matching,
    PointSet,
    SizeCapError,
    check_fingerhut,
    check_helly_triples,
    check_suri,
    check_theorem,
    check_tverberg_disks,
    exact_max_sum,
    generate,
    minimize_h,
)


class TestCheckFingerhut:
    def test_doubled_triangle_tight(self):
        v = check_fingerhut(DOUBLED_TRIANGLE, triangle_sides(), TRIANGLE_CENTROID)
        assert v.passed
        assert abs(v.margin) <= 1e-9

    def test_square_diagonals_have_slack(self):
        m = Matching.from_pairs(SQUARE, [(0, 2), (1, 3)])
        v = check_fingerhut(SQUARE, m, (0.5, 0.5))
        assert v.passed
        assert v.margin == pytest.approx(
            RATIO_BOUND * math.sqrt(2) - math.sqrt(2), abs=1e-12
        )

    def test_square_sides_fail(self):
        v = check_fingerhut(SQUARE, square_sides(), (0.5, 0.5))
        assert not v.passed
        assert v.margin == pytest.approx(RATIO_BOUND - math.sqrt(2), abs=1e-12)

    def test_consistent_with_witness_bound(self):
        for seed in range(15):
            s = generate(InstanceSpec("gaussian", 8, seed))
            m = exact_max_sum(s)
            w = minimize_h(s, m)
            if w.lambda_star <= RATIO_BOUND + 1e-6:
                assert check_fingerhut(s, m, w.o_star).passed

    def test_verdict_invariant(self):
        v = check_fingerhut(SQUARE, square_sides(), (0.5, 0.5))
        assert v.passed == (v.margin >= -v.tolerance)


class TestVerdictInvariant:
    def test_holds_for_every_check(self):
        s = generate(InstanceSpec("uniform-square", 8, 23))
        m = exact_max_sum(s)
        w = minimize_h(s, m)
        verdicts = [
            check_fingerhut(s, m, w.o_star),
            check_theorem(s),
            check_helly_triples(s, m),
            check_suri(s),
            check_tverberg_disks(s, m),
        ]
        for v in verdicts:
            assert v.passed == (v.margin >= -v.tolerance), v.name


class TestCheckTheorem:
    def test_random_instances_pass(self):
        for seed in range(10):
            v = check_theorem(generate(InstanceSpec("uniform-square", 10, seed)))
            assert v.passed

    def test_doubled_triangle_margin_zero(self):
        v = check_theorem(DOUBLED_TRIANGLE)
        assert v.passed
        assert abs(v.margin) <= 1e-7

    def test_two_points(self):
        v = check_theorem(PointSet.of([(0, 0), (1, 1)]))
        assert v.passed
        assert v.details["lambda_star"] == pytest.approx(1.0, abs=1e-9)

    def test_cap_enforced(self):
        s = generate(InstanceSpec("uniform-square", 12, 0))
        with pytest.raises(SizeCapError):
            check_theorem(s, cap=10)


class TestCheckHellyTriples:
    def test_max_sum_matchings_consistent(self):
        for seed in range(5):
            s = generate(InstanceSpec("uniform-square", 8, seed))
            m = exact_max_sum(s)
            v = check_helly_triples(s, m)
            assert v.passed
            assert v.details["discordant"] == []

    def test_bad_matching_fails_globally_and_triplewise(self):
        # three nested side-paired squares: every triple already violates
        pts = []
        for r in (1.0, 2.0, 3.0):
            pts.extend([(-r, -r), (r, -r), (r, r), (-r, r)])
        s = PointSet.of(pts)
        pairs = [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)]
        m = Matching.from_pairs(s, pairs)
        v = check_helly_triples(s, m)
        assert v.passed  # discordance-free: both global and triples fail
        assert v.details["lambda_star"] > RATIO_BOUND
        assert v.details["worst_triple_lambda"] > RATIO_BOUND

    def test_single_edge_matching(self):
        s = PointSet.of([(0, 0), (1, 0)])
        m = Matching.from_pairs(s, [(0, 1)])
        v = check_helly_triples(s, m)
        assert v.passed

    def test_pair_matching_degenerates_to_pairs(self):
        s = SQUARE
        m = exact_max_sum(s)
        v = check_helly_triples(s, m)
        assert v.passed
        assert all(len(row["edges"]) == 2 for row in v.details["triples"])


class TestCheckSuri:
    def test_doubled_triangle_equality(self):
        v = check_suri(DOUBLED_TRIANGLE)
        assert v.passed
        assert abs(v.margin) <= 1e-7
        assert v.details["steiner_total"] == pytest.approx(2 * math.sqrt(3), abs=1e-7)
        assert v.details["matching_cost"] == pytest.approx(3.0, abs=1e-12)

    def test_unit_square(self):
        v = check_suri(SQUARE)
        assert v.passed
        assert v.details["steiner_total"] == pytest.approx(2 * math.sqrt(2), abs=1e-7)

    def test_two_points(self):
        v = check_suri(PointSet.of([(0, 0), (5, 0)]))
        assert v.passed

    def test_random_instances(self):
        for seed in range(15):
            v = check_suri(generate(InstanceSpec("clustered", 10, seed)))
            assert v.passed


class TestCheckTverbergDisks:
    def test_square_diagonals(self):
        m = Matching.from_pairs(SQUARE, [(0, 2), (1, 3)])
        v = check_tverberg_disks(SQUARE, m)
        assert v.passed
        # both disks are centered at (0.5, 0.5) with radius sqrt(2)/2
        assert v.margin == pytest.approx(math.sqrt(2) / 2, abs=1e-6)

    def test_max_sum_matchings_pass(self):
        for seed in range(10):
            s = generate(InstanceSpec("uniform-square", 8, seed))
            m = exact_max_sum(s)
            assert check_tverberg_disks(s, m).passed

    def test_far_apart_side_pairing_fails(self):
        s = PointSet.of([(0, 0), (1, 0), (10, 0), (11, 0)])
        m = Matching.from_pairs(s, [(0, 1), (2, 3)])
        v = check_tverberg_disks(s, m)
        assert not v.passed
        assert v.margin < -1.0

    def test_independent_of_ellipse_verdict(self):
        # side-paired square: ratio bound fails but the disks still meet
        m = square_sides()
        assert not check_fingerhut(SQUARE, m, (0.5, 0.5)).passed
        assert check_tverberg_disks(SQUARE, m).passed
