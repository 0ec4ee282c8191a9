"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .rational import to_rational
from .scm import MarginalObservation


def check_probability(value, name: str = "value") -> Fraction:
    p = to_rational(value)
    if not 0 <= p <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_probabilities(values: Sequence, length: int, name: str = "values") -> tuple[Fraction, ...]:
    values = list(values)
    if len(values) != length:
        raise ValueError(f"{name} must have {length} entries, got {len(values)}")
    return tuple(check_probability(v, f"{name}[{i}]") for i, v in enumerate(values))


def check_observation_pair(X) -> tuple[MarginalObservation, MarginalObservation]:
    """Accept two ``MarginalObservation`` objects or a 2x3 array-like.

    Array rows are ``[P(Z=0|cause=0), P(Z=0|cause=1), P(cause=1)]`` for the
    X-dataset and then the Y-dataset.
    """
    if isinstance(X, dict):
        X = (X["x"], X["y"])
    rows = list(X)
    if len(rows) != 2:
        raise ValueError(f"expected two marginal datasets, got {len(rows)}")
    out = []
    for name, row in zip(("X", "Y"), rows):
        if isinstance(row, MarginalObservation):
            out.append(row)
        else:
            p = check_probabilities(row, 3, f"{name}-dataset")
            out.append(MarginalObservation(*p))
    return out[0], out[1]


def check_joint_table(values, name: str) -> tuple[Fraction, ...]:
    t = check_probabilities(values, 4, name)
    if sum(t) != 1:
        raise ValueError(f"{name} must sum to 1, got {sum(t)}")
    return t


def check_points(points) -> list[tuple[Fraction, Fraction]]:
    out = []
    for p in points:
        p = list(p)
        if len(p) != 2:
            raise ValueError("points must be (lambda_a, lambda_b) pairs")
        out.append((to_rational(p[0]), to_rational(p[1])))
    return out
