"""Causal queries over the merged polytope.

Bounds on the marginal parameters and on linear counterfactual queries,
the constructive witness showing that both marginal parameters can reach
their upper limits simultaneously, and closed forms for the AND example.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CounterfactuallyInfeasible,
    EmptyPolytope,
    StatisticallyInconsistent,
    ThetaOutOfRange,
)
from .merge import N_JOINT, MergeProblem, statistical_merge_check
from .polytope import (
    Polygon2,
    Sense,
    Status,
    contains,
    directional_extremes,
    enumerate_vertices,
    project_hull,
    solve_lp,
)
from .rational import Vector, to_rational
from .scm import MarginalObservation

Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class BoundsReport:
    lambda_a_prior: Interval
    lambda_b_prior: Interval
    lambda_a_merged: Interval
    lambda_b_merged: Interval
    polygon: Polygon2
    area_ratio_box: Fraction
    area_ratio_polygon: Fraction
    gamma_a: Interval
    gamma_b: Interval
    vertices: tuple[Vector, ...] = ()

    @property
    def prior_box(self) -> Polygon2:
        return Polygon2.box(self.lambda_a_prior, self.lambda_b_prior)

    @property
    def corner(self) -> tuple[Fraction, Fraction]:
        """(lambda_a_max, lambda_b_max) of the prior box."""
        return self.lambda_a_prior[1], self.lambda_b_prior[1]

    @property
    def prop1_member(self) -> bool:
        return contains(self.polygon, self.corner)

    @property
    def nested(self) -> bool:
        """Merged intervals lie inside the prior ones."""
        return (
            self.lambda_a_prior[0] <= self.lambda_a_merged[0] <= self.lambda_a_merged[1] <= self.lambda_a_prior[1]
            and self.lambda_b_prior[0] <= self.lambda_b_merged[0] <= self.lambda_b_merged[1] <= self.lambda_b_prior[1]
        )


def _width_ratio(merged: Interval, prior: Interval) -> Fraction:
    prior_width = prior[1] - prior[0]
    if prior_width == 0:
        return Fraction(1)
    return (merged[1] - merged[0]) / prior_width


def box_ratio(prior_a: Interval, prior_b: Interval, merged_a: Interval, merged_b: Interval) -> Fraction:
    """Product of width ratios; a zero-width prior dimension contributes 1."""
    return _width_ratio(merged_a, prior_a) * _width_ratio(merged_b, prior_b)


def polygon_ratio(polygon: Polygon2, prior_a: Interval, prior_b: Interval) -> Fraction:
    """Area of the polygon relative to the prior box.

    When one prior dimension has zero width the prior box is a segment and
    the ratio is taken in the remaining dimension; when both are zero it is 1.
    """
    wa, wb = prior_a[1] - prior_a[0], prior_b[1] - prior_b[0]
    if wa and wb:
        return polygon.area / (wa * wb)
    if wa:
        lo, hi = polygon.extent(0)
        return (hi - lo) / wa
    if wb:
        lo, hi = polygon.extent(1)
        return (hi - lo) / wb
    return Fraction(1)


def _objective_bounds(problem: MergeProblem, objective) -> Interval:
    poly = problem.polytope
    low = solve_lp(poly, objective, Sense.MIN)
    if low.status is Status.INFEASIBLE:
        raise CounterfactuallyInfeasible("no joint model is consistent with both marginals")
    high = solve_lp(poly, objective, Sense.MAX)
    return low.value, high.value


def gamma_objective(problem: MergeProblem, side: str = "X") -> Vector:
    """Weights expressing the counterfactual influence of X (or Y) on Z as a linear function of c."""
    M = {"X": problem.A, "Y": problem.B}[side]
    return tuple(a + b for a, b in zip(M[2], M[3]))


def query_bounds(problem: MergeProblem, objective) -> Interval:
    """(min, max) of ``objective . c`` over the feasible joint models."""
    objective = tuple(to_rational(v) for v in objective)
    if len(objective) != N_JOINT:
        raise ValueError(f"objective must have {N_JOINT} entries")
    return _objective_bounds(problem, objective)


def gamma_bounds(problem: MergeProblem, side: str = "X") -> Interval:
    return query_bounds(problem, gamma_objective(problem, side))


def bounds_report(problem: MergeProblem, method: str = "hull") -> BoundsReport:
    fa, fb = problem.family_a, problem.family_b
    prior_a = (fa.lambda_min, fa.lambda_max)
    prior_b = (fb.lambda_min, fb.lambda_max)
    merged_a = _objective_bounds(problem, problem.projection[0])
    merged_b = _objective_bounds(problem, problem.projection[1])
    try:
        if method == "hull":
            vertices = tuple(enumerate_vertices(problem.polytope))
            polygon = project_hull(vertices, problem.projection)
        elif method == "support":
            vertices = ()
            polygon = directional_extremes(problem.polytope, problem.projection)
        else:
            raise ValueError(f"unknown method {method!r}; use 'hull' or 'support'")
    except EmptyPolytope as exc:
        raise CounterfactuallyInfeasible(str(exc)) from exc
    return BoundsReport(
        lambda_a_prior=prior_a,
        lambda_b_prior=prior_b,
        lambda_a_merged=merged_a,
        lambda_b_merged=merged_b,
        polygon=polygon,
        area_ratio_box=box_ratio(prior_a, prior_b, merged_a, merged_b),
        area_ratio_polygon=polygon_ratio(polygon, prior_a, prior_b),
        gamma_a=gamma_bounds(problem, "X"),
        gamma_b=gamma_bounds(problem, "Y"),
        vertices=vertices,
    )


# --- joint conditionals with a monotone ordering -------------------------------------


@dataclass(frozen=True)
class Q2x2:
    """``q[i][j] = P(Z=0 | X=i, Y=j)`` of an independent-causes joint distribution."""

    q00: Fraction
    q01: Fraction
    q10: Fraction
    q11: Fraction

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return (self.q00, self.q01, self.q10, self.q11)[2 * i + j]

    def kernels(self, p_x1, p_y1) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """(P(Z=0|X=0), P(Z=0|X=1)) and (P(Z=0|Y=0), P(Z=0|Y=1))."""
        px, py = (1 - p_x1, p_x1), (1 - p_y1, p_y1)
        kx = tuple(sum(self[i, j] * py[j] for j in (0, 1)) for i in (0, 1))
        ky = tuple(sum(self[i, j] * px[i] for i in (0, 1)) for j in (0, 1))
        return kx, ky

    def relabel(self, flip_x: bool, flip_y: bool) -> "Q2x2":
        cells = [self[i ^ flip_x, j ^ flip_y] for i in (0, 1) for j in (0, 1)]
        return Q2x2(*cells)


@dataclass(frozen=True)
class Lemma1Interval:
    """Admissible values of the conditional in the lowest cell.

    ``flip_x``/``flip_y`` record which cause labels were swapped so that both
    kernels are non-decreasing; the interval then refers to cell
    ``(flip_x, flip_y)`` of the original labelling.
    """

    lower: Fraction
    upper: Fraction
    etas: tuple[Fraction, ...]
    flip_x: bool
    flip_y: bool

    @property
    def empty(self) -> bool:
        return self.lower > self.upper

    @property
    def cell(self) -> tuple[int, int]:
        return int(self.flip_x), int(self.flip_y)

    def __contains__(self, q) -> bool:
        return self.lower <= q <= self.upper


def _normalise(obs_x: MarginalObservation, obs_y: MarginalObservation):
    if not statistical_merge_check(obs_x, obs_y):
        raise StatisticallyInconsistent(f"P(Z=0) differs: {obs_x.z0} vs {obs_y.z0}")
    flip_x = obs_x.p0_given1 < obs_x.p0_given0
    flip_y = obs_y.p0_given1 < obs_y.p0_given0
    if flip_x:
        obs_x = obs_x.relabeled()
    if flip_y:
        obs_y = obs_y.relabeled()
    return obs_x, obs_y, flip_x, flip_y


def _etas(obs_x: MarginalObservation, obs_y: MarginalObservation) -> tuple[Fraction, ...]:
    zx0, zx1 = obs_x.p0_given0, obs_x.p0_given1
    zy0, zy1 = obs_y.p0_given0, obs_y.p0_given1
    px0, px1 = obs_x.cause0, obs_x.cause1
    py0, py1 = obs_y.cause0, obs_y.cause1
    dx, dy = zx1 - zx0, zy1 - zy0
    eta1 = Fraction(0)
    eta2 = zx0
    eta3 = zy0
    eta4 = zy0 - px1 / py0 * dx
    eta5 = zx0 - dy * py1 / px0
    eta6 = (px1 * py1 - zy1 * py1 + zx0 * px0) / (px0 * py0)
    return eta1, eta2, eta3, eta4, eta5, eta6


def lemma1_interval(obs_x: MarginalObservation, obs_y: MarginalObservation) -> Lemma1Interval:
    nx, ny, flip_x, flip_y = _normalise(obs_x, obs_y)
    e = _etas(nx, ny)
    return Lemma1Interval(max(e[0], e[3], e[4]), min(e[1], e[2], e[5]), e, flip_x, flip_y)


def complete_q(obs_x: MarginalObservation, obs_y: MarginalObservation, q00) -> Q2x2:
    """Solve the marginal equations for the other three cells given ``q00``."""
    q00 = to_rational(q00)
    px0, px1 = obs_x.cause0, obs_x.cause1
    py0, py1 = obs_y.cause0, obs_y.cause1
    q01 = (obs_x.p0_given0 - q00 * py0) / py1
    q10 = (obs_y.p0_given0 - q00 * px0) / px1
    q11 = (obs_y.p0_given1 - q01 * px0) / px1
    return Q2x2(q00, q01, q10, q11)


def _relabel_response(k: int, flip_x: bool, flip_y: bool) -> int:
    """Index of the response h' with h'(x ^ flip_x, y ^ flip_y) = h_k(x, y)."""
    out = 0
    for x in (0, 1):
        for y in (0, 1):
            if (k >> (2 * x + y)) & 1:
                out |= 1 << (2 * (x ^ flip_x) + (y ^ flip_y))
    return out


def _monotone_witness(q: Q2x2) -> list[Fraction]:
    c = [Fraction(0)] * N_JOINT
    c[0] = q.q00
    if q.q01 >= q.q10:
        c[1] = q.q10 - q.q00
        c[5] = q.q01 - q.q10
        c[7] = q.q11 - q.q01
    else:
        c[1] = q.q01 - q.q00
        c[3] = q.q10 - q.q01
        c[7] = q.q11 - q.q10
    c[15] = 1 - q.q11
    return c


def prop1_witness(obs_x: MarginalObservation, obs_y: MarginalObservation) -> Vector:
    """Joint response distribution attaining both marginal upper limits."""
    nx, ny, flip_x, flip_y = _normalise(obs_x, obs_y)
    e = _etas(nx, ny)
    lower, upper = max(e[0], e[3], e[4]), min(e[1], e[2], e[5])
    if lower > upper:  # cannot happen for mergeable inputs
        raise AssertionError("empty Lemma-1 interval")
    q = complete_q(nx, ny, (lower + upper) / 2)
    c_norm = _monotone_witness(q)
    c = [Fraction(0)] * N_JOINT
    for k, v in enumerate(c_norm):
        c[_relabel_response(k, flip_x, flip_y)] = v
    return tuple(c)


def and_model_reference(theta) -> tuple[Fraction, Vector, Interval]:
    """Closed-form answers for the AND example at ``P(Y=1) = theta``.

    Returns ``(lambda_b_star, b, (1 - theta, 1/2))``.
    """
    theta = to_rational(theta)
    if not Fraction(1, 2) <= theta < 1:
        raise ThetaOutOfRange(f"theta must lie in [1/2, 1), got {theta}")
    lam_b = (2 * theta - 1) / (2 * theta)
    b = (lam_b, Fraction(0), 1 / (2 * theta), Fraction(0))
    return lam_b, b, (1 - theta, Fraction(1, 2))
