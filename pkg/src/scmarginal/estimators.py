"""scikit-learn style front end.

``fit`` takes the observed marginal data and builds the feasible set of joint
models; ``predict`` answers membership of candidate ``(lambda_a, lambda_b)``
pairs in the projected region. Parameters are exposed through
``get_params``/``set_params`` so the objects compose with sklearn utilities.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .analysis import bounds_report, prop1_witness, query_bounds
from .confounded import N_STACKED, bounds_over, confounded_polytope, parse_objective
from .merge import build_merge_problem
from .polytope import contains
from .rational import to_rational
from .validation import check_joint_table, check_observation_pair, check_points


class MarginalMerger(BaseEstimator):
    """Merge two Boolean marginal causal models sharing the effect Z.

    Parameters
    ----------
    method : {"hull", "support"}
        How the projected region is computed: convex hull of enumerated
        vertices, or support-function LPs.
    """

    def __init__(self, method: str = "hull"):
        self.method = method

    def fit(self, X, y=None):
        if self.method not in ("hull", "support"):
            raise ValueError(f"method must be 'hull' or 'support', got {self.method!r}")
        obs_x, obs_y = check_observation_pair(X)
        self.problem_ = build_merge_problem(obs_x, obs_y)
        self.report_ = bounds_report(self.problem_, method=self.method)
        self.polygon_ = self.report_.polygon
        self.vertices_ = self.report_.vertices
        self.lambda_a_bounds_ = self.report_.lambda_a_merged
        self.lambda_b_bounds_ = self.report_.lambda_b_merged
        return self

    def predict(self, X) -> np.ndarray:
        """Boolean array: is each ``(lambda_a, lambda_b)`` pair jointly attainable?"""
        check_is_fitted(self, "polygon_")
        return np.array([contains(self.polygon_, p) for p in check_points(X)], dtype=bool)

    def query_bounds(self, objective) -> tuple[Fraction, Fraction]:
        check_is_fitted(self, "problem_")
        return query_bounds(self.problem_, objective)

    def witness(self):
        """A joint model attaining both marginal upper limits."""
        check_is_fitted(self, "problem_")
        return prop1_witness(self.problem_.obs_x, self.problem_.obs_y)


class ConfoundedMerger(BaseEstimator):
    """Bounds on linear queries when both cause-effect pairs may be confounded.

    ``fit`` takes ``X = (alpha, beta)`` with ``alpha[2i+j] = P(X=i, Z=j)`` and
    ``beta[2i+j] = P(Y=i, Z=j)``; optional ``do_x``/``do_y`` hold
    ``P(Z=j | do(cause=i))`` at the same positions.
    """

    def __init__(self, monotonic_x: bool = False, monotonic_y: bool = False):
        self.monotonic_x = monotonic_x
        self.monotonic_y = monotonic_y

    def fit(self, X, y=None, do_x=None, do_y=None):
        alpha, beta = X
        alpha = check_joint_table(alpha, "alpha")
        beta = check_joint_table(beta, "beta")
        self.problem_ = confounded_polytope(
            alpha, beta, do_x, do_y, (bool(self.monotonic_x), bool(self.monotonic_y))
        )
        return self

    def bounds(self, objective) -> tuple[Fraction, Fraction]:
        check_is_fitted(self, "problem_")
        if isinstance(objective, str):
            objective = parse_objective(objective)
        objective = tuple(to_rational(v) for v in objective)
        if len(objective) != N_STACKED:
            raise ValueError(f"objective must have {N_STACKED} entries")
        return bounds_over(self.problem_, objective)
