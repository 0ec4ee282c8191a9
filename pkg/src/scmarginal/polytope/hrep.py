"""H-representations and their equality-reduced form."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from ..rational import Vector, dot, to_rational


@dataclass(frozen=True)
class ConstraintMatrix:
    """Dense matrix of rationals, stored row-major as nested tuples."""

    entries: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(tuple(to_rational(x) for x in row) for row in self.entries)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index):
        if isinstance(index, tuple):
            i, j = index
            return self.entries[i][j]
        return self.entries[index]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return self.rows

    def __matmul__(self, vector: Sequence[Fraction]) -> Vector:
        return tuple(dot(row, vector) for row in self.entries)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def column_sums(self) -> Vector:
        return tuple(sum(self.column(j), Fraction(0)) for j in range(self.cols))

    def __neg__(self) -> "ConstraintMatrix":
        return ConstraintMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def left_multiply(self, weights: Sequence[Sequence[Fraction]]) -> "ConstraintMatrix":
        """Return ``W @ self`` for a small weight matrix ``W``."""
        cols = [self.column(j) for j in range(self.cols)]
        return ConstraintMatrix(
            tuple(tuple(dot(w, col) for col in cols) for w in weights)
        )

    def vstack(self, *others: "ConstraintMatrix") -> "ConstraintMatrix":
        rows = list(self.entries)
        for other in others:
            rows.extend(other.entries)
        return ConstraintMatrix(tuple(rows))

    def to_numpy(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.entries])


def identity(n: int, scale=1) -> ConstraintMatrix:
    s = Fraction(scale)
    return ConstraintMatrix(
        tuple(tuple(s if i == j else Fraction(0) for j in range(n)) for i in range(n))
    )


@dataclass(frozen=True)
class HPolytope:
    """``{c : ineq_matrix @ c <= ineq_rhs, eq_matrix @ c == eq_rhs}``."""

    ineq_matrix: ConstraintMatrix
    ineq_rhs: Vector
    eq_matrix: ConstraintMatrix
    eq_rhs: Vector
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ineq_rhs", tuple(to_rational(x) for x in self.ineq_rhs))
        object.__setattr__(self, "eq_rhs", tuple(to_rational(x) for x in self.eq_rhs))
        if self.ineq_matrix.rows != len(self.ineq_rhs):
            raise ValueError("inequality rows and rhs differ in length")
        if self.eq_matrix.rows != len(self.eq_rhs):
            raise ValueError("equality rows and rhs differ in length")
        dims = {m.cols for m in (self.ineq_matrix, self.eq_matrix) if m.rows}
        if len(dims) > 1:
            raise ValueError("inequality and equality blocks differ in width")

    @property
    def dim(self) -> int:
        return self.ineq_matrix.cols if self.ineq_matrix.rows else self.eq_matrix.cols

    def slacks(self, point: Sequence[Fraction]) -> tuple[Vector, Vector]:
        """(b - A c, C c - d) for a candidate point."""
        ineq = tuple(h - g for g, h in zip(self.ineq_matrix @ point, self.ineq_rhs))
        eq = tuple(g - d for g, d in zip(self.eq_matrix @ point, self.eq_rhs))
        return ineq, eq

    def contains(self, point: Sequence[Fraction]) -> bool:
        ineq, eq = self.slacks(point)
        return all(s >= 0 for s in ineq) and all(e == 0 for e in eq)

    @cached_property
    def reduced(self) -> "ReducedSystem":
        return reduce_equalities(self)


@dataclass
class ReducedSystem:
    """Polytope rewritten over the free coordinates of its equality subspace.

    Points are ``c = offset + sum_j x_j * basis[j]`` where ``x`` ranges over
    ``{x : rows[i] . x <= rhs[i]}``. Rows are primitive integer vectors and
    duplicates keep only the tightest right-hand side.
    """

    dim: int
    offset: Vector
    basis: list[Vector]
    free: list[int]
    rows: list[tuple[int, ...]]
    rhs: list[Fraction]
    infeasible: bool = False

    @property
    def k(self) -> int:
        return len(self.free)

    def lift(self, x: Sequence[Fraction]) -> Vector:
        c = list(self.offset)
        for xj, col in zip(x, self.basis):
            if xj:
                for i, v in enumerate(col):
                    if v:
                        c[i] += xj * v
        return tuple(c)

    def pull_objective(self, objective: Sequence[Fraction]) -> tuple[Vector, Fraction]:
        """Express ``objective . c`` as ``w . x + const``."""
        w = tuple(dot(objective, col) for col in self.basis)
        return w, dot(objective, self.offset)


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the first ``ncols`` columns."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def primitive(values: Sequence[Fraction]) -> tuple[tuple[int, ...], Fraction]:
    """Scale a rational row to coprime integers; returns (row, positive scale)."""
    den = lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * den) for v in values]
    g = gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints), Fraction(0)
    return tuple(i // g for i in ints), Fraction(den, g)


def reduce_equalities(poly: HPolytope) -> ReducedSystem:
    n = poly.dim
    aug = [list(row) + [rhs] for row, rhs in zip(poly.eq_matrix, poly.eq_rhs)]
    m, pivots = rref(aug, n)
    for row in m[len(pivots):]:
        if row[n] != 0:
            return ReducedSystem(n, (), [], [], [], [], infeasible=True)
    free = [j for j in range(n) if j not in pivots]
    offset = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        offset[col] = m[r][n]
    basis = []
    for f in free:
        col = [Fraction(0)] * n
        col[f] = Fraction(1)
        for r, p in enumerate(pivots):
            col[p] = -m[r][f]
        basis.append(tuple(col))

    tight: dict[tuple[int, ...], Fraction] = {}
    infeasible = False
    for g, h in zip(poly.ineq_matrix, poly.ineq_rhs):
        lhs = [dot(g, col) for col in basis]
        rhs = h - dot(g, offset)
        row, scale = primitive(lhs)
        if scale == 0:
            if rhs < 0:
                infeasible = True
            continue
        rhs = rhs * scale
        if row not in tight or rhs < tight[row]:
            tight[row] = rhs
    rows = list(tight)
    return ReducedSystem(
        dim=n,
        offset=tuple(offset),
        basis=basis,
        free=free,
        rows=rows,
        rhs=[tight[r] for r in rows],
        infeasible=infeasible,
    )
