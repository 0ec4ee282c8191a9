from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scmarginal.errors import DegenerateCause, StatisticallyInconsistent
from scmarginal.merge import (
    and_model_observations,
    build_constraint_matrices,
    build_merge_problem,
    medication_observations,
    observations_from_joint,
    project_binary,
    statistical_merge_check,
)
from scmarginal.polytope import enumerate_vertices
from scmarginal.scm import BinaryResponse, MarginalObservation, markov_kernel

from conftest import random_observations

open_probs = st.fractions(0, 1, max_denominator=50).filter(lambda p: 0 < p < 1)


def brute_column(k, var, p1):
    """Column k of A (var='Y') or B (var='X') from the bit definition of h_k."""
    outputs_to_f = {(0, 0): 0, (1, 1): 1, (0, 1): 2, (1, 0): 3}
    col = [F(0)] * 4
    for value, w in ((0, 1 - p1), (1, p1)):
        if var == "Y":
            out = tuple((k >> (2 * x + value)) & 1 for x in (0, 1))
        else:
            out = tuple((k >> (2 * value + y)) & 1 for y in (0, 1))
        col[outputs_to_f[out]] += w
    return col


class TestProjection:
    def test_examples(self):
        assert project_binary(BinaryResponse(0), "X", 0).id == 0
        assert project_binary(BinaryResponse(7), "Y", 1).id == 3
        assert project_binary(BinaryResponse(15), "Y", 0).id == 1

    def test_total(self):
        for k in range(16):
            for var in "XY":
                for v in (0, 1):
                    assert project_binary(BinaryResponse(k), var, v).id in range(4)

    def test_bad_variable(self):
        with pytest.raises(ValueError):
            project_binary(BinaryResponse(3), "Z", 0)


class TestConstraintMatrices:
    def test_h0_column(self):
        A, _ = build_constraint_matrices(F(1, 3), F(1, 2))
        assert A.column(0) == (1, 0, 0, 0)

    def test_h10_and_h12_columns(self):
        theta, phi = F(3, 7), F(2, 9)
        A, B = build_constraint_matrices(theta, phi)
        assert list(A.column(10)) == brute_column(10, "Y", theta) == [1 - theta, theta, 0, 0]
        assert list(B.column(12)) == brute_column(12, "X", phi) == [1 - phi, phi, 0, 0]

    @given(open_probs, open_probs)
    def test_all_columns_match_brute_force_and_sum_to_one(self, py, px):
        A, B = build_constraint_matrices(py, px)
        assert A.shape == B.shape == (4, 16)
        for k in range(16):
            assert list(A.column(k)) == brute_column(k, "Y", py)
            assert list(B.column(k)) == brute_column(k, "X", px)
        assert all(s == 1 for s in A.column_sums() + B.column_sums())

    def test_degenerate(self):
        with pytest.raises(DegenerateCause):
            build_constraint_matrices(0, F(1, 2))
        with pytest.raises(DegenerateCause):
            build_constraint_matrices(F(1, 2), 1)


class TestMergeCheck:
    def test_joint_generated_is_mergeable(self):
        for seed in range(20):
            assert statistical_merge_check(*random_observations(seed))

    def test_inconsistent(self):
        ox = MarginalObservation(F(3, 10), F(3, 10), F(1, 2))
        oy = MarginalObservation(F(3, 5), F(3, 5), F(1, 2))
        assert not statistical_merge_check(ox, oy)
        with pytest.raises(StatisticallyInconsistent):
            build_merge_problem(ox, oy)

    def test_medication(self):
        ox, oy = medication_observations()
        assert ox.z0 == oy.z0 == F(9, 20)
        assert statistical_merge_check(ox, oy)


class TestMergeProblem:
    def test_layout(self):
        p = build_merge_problem(*and_model_observations(F(3, 4)))
        poly = p.polytope
        assert poly.ineq_matrix.shape == (32, 16)
        assert poly.eq_matrix.shape == (7, 16)
        assert poly.ineq_matrix.entries[0:4] == p.A.entries
        assert poly.ineq_matrix.entries[4:8] == (-p.A).entries
        assert poly.ineq_matrix.entries[8:12] == p.B.entries
        assert poly.ineq_matrix.entries[12:16] == (-p.B).entries
        for k in range(16):
            assert poly.ineq_matrix[16 + k] == tuple(-F(int(j == k)) for j in range(16))
        assert poly.eq_matrix[6] == (1,) * 16 and poly.eq_rhs[6] == 1
        assert p.projection.entries == (p.A[0], p.B[0])

    def test_rhs_folding(self):
        ox, oy = and_model_observations(F(3, 4))
        p = build_merge_problem(ox, oy)
        fa = p.family_a
        a0, lo, hi = fa.base, fa.lambda_min, fa.lambda_max
        assert p.polytope.ineq_rhs[0:4] == (a0[0] + hi, a0[1] + hi, a0[2] - lo, a0[3] - lo)
        assert p.polytope.ineq_rhs[4:8] == (-a0[0] - lo, -a0[1] - lo, -a0[2] + hi, -a0[3] + hi)
        # elimination rows: a0 - a1, a0 + a2, a0 + a3 are free of lambda
        assert p.polytope.eq_rhs[0:3] == (a0[0] - a0[1], a0[0] + a0[2], a0[0] + a0[3])

    def test_pure(self):
        obs = random_observations(5)
        assert build_merge_problem(*obs) == build_merge_problem(*obs)

    def test_feasible_examples(self):
        for obs in (and_model_observations(F(3, 4)), medication_observations()):
            assert enumerate_vertices(build_merge_problem(*obs).polytope)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=16, max_size=16).filter(any))
def test_feasibility_transfer(weights):
    p = build_merge_problem(*random_observations(11))
    c = [F(w, sum(weights)) for w in weights]
    a, b = p.A @ c, p.B @ c
    assert sum(a) == sum(b) == 1 and min(a) >= 0 and min(b) >= 0
    kx = markov_kernel(a)
    assert 0 <= a[0] <= min(kx)


def test_feasible_points_reproduce_observed_kernels():
    for seed in range(5):
        ox, oy = random_observations(seed)
        p = build_merge_problem(ox, oy)
        for v in enumerate_vertices(p.polytope):
            assert markov_kernel(p.A @ v) == (ox.p0_given0, ox.p0_given1)
            assert markov_kernel(p.B @ v) == (oy.p0_given0, oy.p0_given1)


def test_observations_from_joint_flat_and_nested():
    tz = (F(3, 10), F(4, 5), F(3, 10), F(7, 10))
    flat = observations_from_joint(F(1, 4), F(1, 3), tz)
    nested = observations_from_joint(F(1, 4), F(1, 3), [[tz[0], tz[1]], [tz[2], tz[3]]])
    assert flat == nested
    ox, oy = flat
    # P(Z=0 | X=0) = (1 - 3/10) * 2/3 + (1 - 4/5) * 1/3
    assert ox.p0_given0 == F(7, 10) * F(2, 3) + F(1, 5) * F(1, 3)
    with pytest.raises(ValueError):
        observations_from_joint(F(1, 2), F(1, 2), tz[:3])
