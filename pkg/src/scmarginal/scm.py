"""Boolean response-function machinery for cause-effect SCMs.

Unary responses ``f_j`` map one Boolean cause to Z and are ordered
``(0, 1, ID, NOT)``. Binary responses ``h_k`` map ``(x, y)`` to Z; the value
``h_k(x, y)`` is bit ``2x + y`` of ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateCause, LambdaOutOfRange
from .rational import Vector, to_rational

# (f(0), f(1)) for f_0 ... f_3
UNARY_TABLES = ((0, 0), (1, 1), (0, 1), (1, 0))
UNARY_NAMES = ("ZERO", "ONE", "ID", "NOT")
DIRECTION = (Fraction(1), Fraction(1), Fraction(-1), Fraction(-1))


@dataclass(frozen=True)
class UnaryResponse:
    id: int

    def __post_init__(self):
        if self.id not in range(4):
            raise ValueError(f"unary response id must be in 0..3, got {self.id}")

    @property
    def table(self) -> dict[int, int]:
        return dict(enumerate(UNARY_TABLES[self.id]))

    @property
    def name(self) -> str:
        return UNARY_NAMES[self.id]

    def __call__(self, x: int) -> int:
        return UNARY_TABLES[self.id][x]


@dataclass(frozen=True)
class BinaryResponse:
    id: int

    def __post_init__(self):
        if self.id not in range(16):
            raise ValueError(f"binary response id must be in 0..15, got {self.id}")

    @property
    def table(self) -> dict[tuple[int, int], int]:
        return {(x, y): self(x, y) for x in (0, 1) for y in (0, 1)}

    def __call__(self, x: int, y: int) -> int:
        return (self.id >> (2 * x + y)) & 1


def unary_from_table(outputs: tuple[int, int]) -> UnaryResponse:
    return UnaryResponse(UNARY_TABLES.index(tuple(outputs)))


def enumerate_unary() -> list[UnaryResponse]:
    return [UnaryResponse(j) for j in range(4)]


def enumerate_binary() -> list[BinaryResponse]:
    return [BinaryResponse(k) for k in range(16)]


@dataclass(frozen=True)
class MarginalObservation:
    """Observed kernel P(Z=0 | cause) and cause marginal for one dataset.

    ``p0_given0 = P(Z=0 | cause=0)``, ``p0_given1 = P(Z=0 | cause=1)`` and
    ``cause1 = P(cause=1)``.
    """

    p0_given0: Fraction
    p0_given1: Fraction
    cause1: Fraction

    def __post_init__(self):
        for name in ("p0_given0", "p0_given1", "cause1"):
            value = to_rational(getattr(self, name))
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)
        if self.cause1 in (0, 1):
            raise DegenerateCause(f"P(cause=1) = {self.cause1} is degenerate")

    @property
    def cause0(self) -> Fraction:
        return 1 - self.cause1

    @property
    def z0(self) -> Fraction:
        """Implied marginal P(Z=0)."""
        return self.p0_given0 * self.cause0 + self.p0_given1 * self.cause1

    def joint(self) -> Vector:
        """P(cause=i, Z=j) at index ``2*i + j``."""
        return (
            self.cause0 * self.p0_given0,
            self.cause0 * (1 - self.p0_given0),
            self.cause1 * self.p0_given1,
            self.cause1 * (1 - self.p0_given1),
        )

    def relabeled(self) -> "MarginalObservation":
        """Same data with the cause values 0 and 1 swapped."""
        return MarginalObservation(self.p0_given1, self.p0_given0, self.cause0)


@dataclass(frozen=True)
class MarginalFamily:
    base: Vector
    lambda_min: Fraction
    lambda_max: Fraction
    direction: Vector = DIRECTION

    @property
    def p00(self) -> Fraction:
        return self.base[2]

    @property
    def p01(self) -> Fraction:
        return self.base[3]

    @property
    def width(self) -> Fraction:
        return self.lambda_max - self.lambda_min

    def __contains__(self, lam) -> bool:
        return self.lambda_min <= lam <= self.lambda_max


def family_from_observation(obs: MarginalObservation) -> MarginalFamily:
    if obs.cause1 in (0, 1):
        raise DegenerateCause(f"P(cause=1) = {obs.cause1} is degenerate")
    p00, p01 = obs.p0_given0, obs.p0_given1
    base = (Fraction(0), 1 - p00 - p01, p00, p01)
    return MarginalFamily(
        base=base,
        lambda_min=max(Fraction(0), p00 + p01 - 1),
        lambda_max=min(p00, p01),
    )


def _check_lambda(family: MarginalFamily, lam) -> Fraction:
    lam = to_rational(lam)
    if lam not in family:
        raise LambdaOutOfRange(
            f"lambda={lam} outside [{family.lambda_min}, {family.lambda_max}]"
        )
    return lam


def response_vector(family: MarginalFamily, lam) -> Vector:
    lam = _check_lambda(family, lam)
    return tuple(b + lam * d for b, d in zip(family.base, family.direction))


def counterfactual_influence(family: MarginalFamily, lam) -> Fraction:
    """Probability that Z flips had the cause been flipped: ``a_2 + a_3``."""
    lam = _check_lambda(family, lam)
    return family.p00 + family.p01 - 2 * lam


def markov_kernel(v) -> tuple[Fraction, Fraction]:
    """(P(Z=0 | cause=0), P(Z=0 | cause=1)) induced by a response vector."""
    v = tuple(to_rational(x) for x in v)
    if len(v) != 4:
        raise ValueError("response vector must have 4 entries")
    return v[0] + v[2], v[0] + v[3]


def is_simplex_point(v) -> bool:
    return all(x >= 0 for x in v) and sum(v) == 1

