from fractions import Fraction as F

import pytest

from scmarginal.analysis import lemma1_interval
from scmarginal.merge import build_merge_problem, medication_observations
from scmarginal.oracle import (
    RawConstraints,
    TABLE_ROWS,
    exhaustive_projection_check,
    lemma1_pass_set,
    sample_feasible_c,
    scan_lemma1,
    table_fidelity_check,
    table_value,
)
from scmarginal.polytope import Polygon2, enumerate_vertices, project_hull
from scmarginal.scm import enumerate_binary

from conftest import random_observations


def test_table_rows_are_bit_encoding():
    for (x, y), row in TABLE_ROWS.items():
        assert row == "".join(str((k >> (2 * x + y)) & 1) for k in range(16))


def test_table_checks():
    assert table_fidelity_check()
    assert exhaustive_projection_check()
    h7 = enumerate_binary()[7]
    assert h7(1, 1) == table_value(7, 1, 1) == 0


class TestRawConstraints:
    def test_vertices_pass(self):
        for seed in range(3):
            p = build_merge_problem(*random_observations(seed))
            raw = RawConstraints(p.obs_x, p.obs_y)
            for v in enumerate_vertices(p.polytope):
                ok, lams = raw.check([int(x * _den(v)) for x in v], _den(v))
                assert ok and lams == p.lambdas(v)

    def test_rejects(self):
        p = build_merge_problem(*medication_observations())
        raw = RawConstraints(p.obs_x, p.obs_y)
        assert not raw.check([1] + [0] * 15, 1)[0]
        assert not raw.check([1] * 16, 15)[0]  # does not sum to one
        v = enumerate_vertices(p.polytope)[0]
        num = [int(x * _den(v)) for x in v]
        num[0], num[1] = num[0] - 1, num[1] + 1  # negative or off the constraint set
        assert not raw.check(num, _den(v))[0]

    def test_null_space(self):
        p = build_merge_problem(*random_observations(2))
        raw = RawConstraints(p.obs_x, p.obs_y)
        basis = raw.null_space()
        assert basis
        for d in basis:
            assert sum(d) == 0
            a, b = p.A @ d, p.B @ d
            # a direction stays inside both one-parameter families
            assert a[1] == a[0] and a[2] == -a[0] and a[3] == -a[0]
            assert b[1] == b[0] and b[2] == -b[0] and b[3] == -b[0]


def _den(v):
    from math import lcm
    return lcm(*(x.denominator for x in v))


class TestSampling:
    def test_zero_samples(self):
        rep = sample_feasible_c(build_merge_problem(*medication_observations()), 0)
        assert rep.tested == rep.feasible == rep.contradictions == 0
        assert rep.vertices_checked > 0 and rep.passed

    def test_medication_pins_lambda_a(self):
        rep = sample_feasible_c(build_merge_problem(*medication_observations()), 300)
        assert rep.passed and rep.feasible > 0
        assert rep.lambda_a_range == (F(2, 5), F(2, 5))

    def test_generic_instance(self, generic_problem):
        rep = sample_feasible_c(generic_problem, 600, seed=1)
        assert rep.passed and rep.feasible > 0 and rep.tested == 600

    def test_deterministic(self, generic_problem):
        assert sample_feasible_c(generic_problem, 90, seed=3) == sample_feasible_c(generic_problem, 90, seed=3)

    def test_detects_a_shrunk_polygon(self, generic_problem):
        """A polygon missing one vertex must produce feasible points outside it."""
        p = generic_problem
        poly = project_hull(enumerate_vertices(p.polytope), p.projection)
        shrunk = Polygon2.from_points(poly.vertices[1:])
        rep = sample_feasible_c(p, 600, seed=0, polygon=shrunk)
        assert rep.feasible_outside_polygon > 0 and not rep.passed


class TestLemma1Scan:
    def test_random_instances(self):
        for seed in range(30):
            assert scan_lemma1(*random_observations(seed), grid=200)

    def test_pass_set_nonempty_for_coarse_instance(self):
        ox, oy = random_observations(0, denominator=10)
        iv = lemma1_interval(ox, oy)
        passing = lemma1_pass_set(ox, oy, 1000)
        if iv.upper - iv.lower >= F(1, 1000):
            assert passing
        assert all(F(i, 1000) in iv for i in passing)
