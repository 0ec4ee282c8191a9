"""Exact two-phase simplex with Bland's rule."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..rational import Vector, to_rational
from .hrep import HPolytope, ReducedSystem

ZERO = Fraction(0)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class Sense(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class LpResult:
    status: Status
    value: Fraction | None = None
    witness: Vector | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _pivot(tab, rhs, basis, r, j):
    row = tab[r]
    inv = 1 / row[j]
    if inv != 1:
        tab[r] = row = [v * inv if v else ZERO for v in row]
        rhs[r] *= inv
    nz = [(c, v) for c, v in enumerate(row) if v]
    for i in range(len(tab)):
        if i == r:
            continue
        f = tab[i][j]
        if f:
            ti = tab[i]
            for c, v in nz:
                ti[c] -= f * v
            rhs[i] -= f * rhs[r]
    basis[r] = j


def _run(tab, rhs, basis, cost, allowed):
    """Minimise ``cost`` from a feasible canonical basis. Returns False if unbounded."""
    while True:
        cb = [cost[b] for b in basis]
        entering = None
        for j in allowed:
            if j in basis:
                continue
            reduced = cost[j] - sum((c * tab[i][j] for i, c in enumerate(cb) if c and tab[i][j]), ZERO)
            if reduced < 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i, row in enumerate(tab):
            a = row[entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, rhs, basis, best[1], entering)


def simplex_leq(rows: Sequence[Sequence[int | Fraction]], rhs: Sequence[Fraction],
                objective: Sequence[Fraction], nonneg: Sequence[bool]):
    """Minimise ``objective . x`` subject to ``rows @ x <= rhs``.

    ``nonneg[j]`` marks variables already known to be non-negative; others
    are split into positive and negative parts. Returns ``(status, x)``.
    """
    k = len(objective)
    cols = []  # (variable, sign)
    for j in range(k):
        cols.append((j, 1))
        if not nonneg[j]:
            cols.append((j, -1))
    nv = len(cols)
    m = len(rows)
    n_art = sum(1 for b in rhs if b < 0)
    width = nv + m + n_art
    tab, b_vec, basis = [], [], []
    art = nv + m
    for i, (row, b) in enumerate(zip(rows, rhs)):
        line = [ZERO] * width
        for c, (j, s) in enumerate(cols):
            if row[j]:
                line[c] = Fraction(row[j] * s)
        line[nv + i] = Fraction(1)
        b = Fraction(b)
        if b < 0:
            line = [-v for v in line]
            b = -b
            line[art] = Fraction(1)
            basis.append(art)
            art += 1
        else:
            basis.append(nv + i)
        tab.append(line)
        b_vec.append(b)

    if n_art:
        phase1 = [ZERO] * (nv + m) + [Fraction(1)] * n_art
        _run(tab, b_vec, basis, phase1, range(width))
        if sum((b_vec[i] for i, v in enumerate(basis) if v >= nv + m), ZERO) > 0:
            return Status.INFEASIBLE, None
        for i in range(len(basis)):
            if basis[i] >= nv + m:
                j = next((c for c in range(nv + m) if tab[i][c] != 0 and c not in basis), None)
                if j is not None:
                    _pivot(tab, b_vec, basis, i, j)
        keep = [i for i in range(len(basis)) if basis[i] < nv + m]
        tab = [tab[i][: nv + m] for i in keep]
        b_vec = [b_vec[i] for i in keep]
        basis = [basis[i] for i in keep]

    cost = [ZERO] * (nv + m)
    for c, (j, s) in enumerate(cols):
        cost[c] = Fraction(objective[j]) * s
    if not _run(tab, b_vec, basis, cost, range(nv + m)):
        return Status.UNBOUNDED, None
    x = [ZERO] * k
    for i, v in enumerate(basis):
        if v < nv:
            j, s = cols[v]
            x[j] += s * b_vec[i]
    return Status.OPTIMAL, x


def _sign_split(system: ReducedSystem, extra_rows=()):
    rows, rhs, nonneg = [], [], [False] * system.k
    for row, b in list(zip(system.rows, system.rhs)) + list(extra_rows):
        nz = [j for j, v in enumerate(row) if v]
        if len(nz) == 1 and row[nz[0]] < 0 and b == 0:
            nonneg[nz[0]] = True
            continue
        rows.append(row)
        rhs.append(b)
    return rows, rhs, nonneg


def solve_reduced(system: ReducedSystem, weights: Sequence[Fraction], sense: Sense,
                  extra_rows=()) -> tuple[Status, Vector | None]:
    """Optimise ``weights . x`` over a reduced system; returns the optimal x."""
    if system.infeasible:
        return Status.INFEASIBLE, None
    if system.k == 0:
        if any(b < 0 for b in system.rhs) or any(b < 0 for _, b in extra_rows):
            return Status.INFEASIBLE, None
        return Status.OPTIMAL, ()
    rows, rhs, nonneg = _sign_split(system, extra_rows)
    obj = [w if sense is Sense.MIN else -w for w in weights]
    status, x = simplex_leq(rows, rhs, obj, nonneg)
    return status, (tuple(x) if x is not None else None)


def solve_lp(poly: HPolytope, objective: Sequence, sense: Sense | str = Sense.MIN) -> LpResult:
    """Exact optimum of ``objective . c`` over the polytope."""
    sense = Sense(sense) if isinstance(sense, str) else sense
    objective = tuple(to_rational(v) for v in objective)
    if len(objective) != poly.dim:
        raise ValueError(f"objective has length {len(objective)}, expected {poly.dim}")
    system = poly.reduced
    weights, const = system.pull_objective(objective)
    status, x = solve_reduced(system, weights, sense)
    if status is not Status.OPTIMAL:
        return LpResult(status)
    witness = system.lift(x)
    return LpResult(status, sum((a * b for a, b in zip(objective, witness)), ZERO), witness)
