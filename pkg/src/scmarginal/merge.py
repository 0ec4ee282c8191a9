"""Linear consistency constraints between a joint model and two marginal models.

A joint model is a distribution ``c`` over the 16 binary responses ``h_k``.
Fixing one cause turns ``h_k`` into a unary response of the other, which
makes the marginal response vectors ``A c`` and ``B c`` linear in ``c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateCause, StatisticallyInconsistent
from .polytope import ConstraintMatrix, HPolytope, identity
from .rational import Vector, to_rational
from .scm import (
    BinaryResponse,
    MarginalFamily,
    MarginalObservation,
    UnaryResponse,
    enumerate_binary,
    family_from_observation,
    unary_from_table,
)

N_JOINT = 16
# Rows combining a response vector so that lambda cancels: a0-a1, a0+a2, a0+a3.
ELIMINATION_ROWS = (
    (Fraction(1), Fraction(-1), Fraction(0), Fraction(0)),
    (Fraction(1), Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
)


def project_binary(h: BinaryResponse, fixed_variable: str, value: int) -> UnaryResponse:
    """Unary response left over after fixing one argument of ``h``."""
    if fixed_variable == "X":
        return unary_from_table((h(value, 0), h(value, 1)))
    if fixed_variable == "Y":
        return unary_from_table((h(0, value), h(1, value)))
    raise ValueError(f"fixed_variable must be 'X' or 'Y', got {fixed_variable!r}")


@lru_cache(maxsize=None)
def projection_index(fixed_variable: str, value: int) -> tuple[int, ...]:
    """Unary id of each ``h_k`` once ``fixed_variable`` is set to ``value``."""
    return tuple(project_binary(h, fixed_variable, value).id for h in enumerate_binary())


def _marginalising_matrix(fixed_variable: str, p1: Fraction) -> ConstraintMatrix:
    weights = (1 - p1, p1)
    rows = [[Fraction(0)] * N_JOINT for _ in range(4)]
    for value, w in enumerate(weights):
        for k, j in enumerate(projection_index(fixed_variable, value)):
            rows[j][k] += w
    return ConstraintMatrix(tuple(tuple(r) for r in rows))


def build_constraint_matrices(p_y1, p_x1) -> tuple[ConstraintMatrix, ConstraintMatrix]:
    """``A`` (X -> Z side, averages over Y) and ``B`` (Y -> Z side, averages over X)."""
    p_y1, p_x1 = to_rational(p_y1), to_rational(p_x1)
    for name, p in (("P(Y=1)", p_y1), ("P(X=1)", p_x1)):
        if not 0 < p < 1:
            raise DegenerateCause(f"{name} = {p} must lie strictly inside (0, 1)")
    return _marginalising_matrix("Y", p_y1), _marginalising_matrix("X", p_x1)


def statistical_merge_check(obs_x: MarginalObservation, obs_y: MarginalObservation) -> bool:
    """True iff both datasets imply the same P(Z=0)."""
    return obs_x.z0 == obs_y.z0


@dataclass(frozen=True)
class MergeProblem:
    obs_x: MarginalObservation
    obs_y: MarginalObservation
    family_a: MarginalFamily
    family_b: MarginalFamily
    A: ConstraintMatrix
    B: ConstraintMatrix
    polytope: HPolytope
    projection: ConstraintMatrix

    def lambdas(self, c) -> tuple[Fraction, Fraction]:
        return self.projection @ c


def _family_rows(M: ConstraintMatrix, fam: MarginalFamily):
    lo, hi = fam.lambda_min, fam.lambda_max
    a0 = fam.base
    upper = tuple(a + d for a, d in zip(a0, (hi, hi, -lo, -lo)))
    lower = tuple(-a + d for a, d in zip(a0, (-lo, -lo, hi, hi)))
    elim = M.left_multiply(ELIMINATION_ROWS)
    elim_rhs = tuple(sum((w * a for w, a in zip(row, a0)), Fraction(0)) for row in ELIMINATION_ROWS)
    return upper, lower, elim, elim_rhs


def build_merge_problem(obs_x: MarginalObservation, obs_y: MarginalObservation) -> MergeProblem:
    if not statistical_merge_check(obs_x, obs_y):
        raise StatisticallyInconsistent(
            f"P(Z=0) differs between datasets: {obs_x.z0} vs {obs_y.z0}"
        )
    fam_a = family_from_observation(obs_x)
    fam_b = family_from_observation(obs_y)
    A, B = build_constraint_matrices(obs_y.cause1, obs_x.cause1)
    a_up, a_lo, a_elim, a_elim_rhs = _family_rows(A, fam_a)
    b_up, b_lo, b_elim, b_elim_rhs = _family_rows(B, fam_b)

    ineq = A.vstack(-A, B, -B, -identity(N_JOINT))
    ineq_rhs = a_up + a_lo + b_up + b_lo + (Fraction(0),) * N_JOINT
    ones = ConstraintMatrix(((Fraction(1),) * N_JOINT,))
    eq = a_elim.vstack(b_elim, ones)
    eq_rhs = a_elim_rhs + b_elim_rhs + (Fraction(1),)
    labels = tuple(
        [f"A[{j}]<=" for j in range(4)] + [f"-A[{j}]<=" for j in range(4)]
        + [f"B[{j}]<=" for j in range(4)] + [f"-B[{j}]<=" for j in range(4)]
        + [f"c[{k}]>=0" for k in range(N_JOINT)]
    )
    polytope = HPolytope(ineq, ineq_rhs, eq, eq_rhs, labels)
    projection = ConstraintMatrix((A[0], B[0]))
    return MergeProblem(obs_x, obs_y, fam_a, fam_b, A, B, polytope, projection)


def observations_from_joint(theta_x, theta_y, theta_z) -> tuple[MarginalObservation, MarginalObservation]:
    """Marginal observations implied by ``P(X=1)``, ``P(Y=1)`` and ``P(Z=1 | X=x, Y=y)``.

    ``theta_z`` is indexed ``[x][y]`` or flat in the order 00, 01, 10, 11.
    """
    tx, ty = to_rational(theta_x), to_rational(theta_y)
    flat = [to_rational(v) for row in theta_z for v in (row if isinstance(row, (list, tuple)) else [row])]
    if len(flat) != 4:
        raise ValueError("theta_z needs four conditionals")
    z0 = [[1 - flat[0], 1 - flat[1]], [1 - flat[2], 1 - flat[3]]]
    px = (1 - tx, tx)
    py = (1 - ty, ty)
    obs_x = MarginalObservation(
        z0[0][0] * py[0] + z0[0][1] * py[1],
        z0[1][0] * py[0] + z0[1][1] * py[1],
        tx,
    )
    obs_y = MarginalObservation(
        z0[0][0] * px[0] + z0[1][0] * px[1],
        z0[0][1] * px[0] + z0[1][1] * px[1],
        ty,
    )
    return obs_x, obs_y


def and_model_observations(theta, p_x1=Fraction(1, 2)) -> tuple[MarginalObservation, MarginalObservation]:
    """Marginals with X independent of Z, P(Y=0, Z=1) = 0 and P(Z=1) = 1/2."""
    theta = to_rational(theta)
    obs_x = MarginalObservation(Fraction(1, 2), Fraction(1, 2), p_x1)
    obs_y = MarginalObservation(Fraction(1), 1 - 1 / (2 * theta), theta)
    return obs_x, obs_y


def medication_observations() -> tuple[MarginalObservation, MarginalObservation]:
    """Medication (X) and genotype (Y) studies sharing the recovery outcome Z."""
    obs_x = MarginalObservation(Fraction(1, 2), Fraction(2, 5), Fraction(1, 2))
    obs_y = MarginalObservation(Fraction(1, 12), Fraction(1), Fraction(2, 5))
    return obs_x, obs_y
