"""Marginal and joint models under unobserved confounding.

A confounded marginal model is a distribution ``qA`` over pairs
``(cause value i, response function f_j)``, stored at index ``4*i + j``.
The joint model is a distribution ``q`` over ``(x, y, h_k)`` stored at
index ``32*x + 16*y + k``. Observational tables ``alpha`` hold
``P(cause=i, Z=j)`` at index ``2*i + j``; interventional tables hold
``P(Z=j | do(cause=i))`` with the same layout.

All programs are over the stacked vector ``(qA, qB, q)`` of length 80.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CounterfactuallyInfeasible, UnidentifiableQuery
from .merge import projection_index
from .polytope import ConstraintMatrix, HPolytope, Sense, Status, identity, solve_lp
from .rational import Vector, to_rational
from .scm import UNARY_TABLES, MarginalObservation

N_MARGINAL = 8
N_JOINT = 64
N_STACKED = 2 * N_MARGINAL + N_JOINT
OFFSET = {"qa": 0, "qb": N_MARGINAL, "q": 2 * N_MARGINAL}


def marginal_index(i: int, j: int) -> int:
    return 4 * i + j


def joint_index(x: int, y: int, k: int) -> int:
    return 32 * x + 16 * y + k


def _matrix(rows: int, cols: int, cells) -> ConstraintMatrix:
    grid = [[0] * cols for _ in range(rows)]
    for r, c in cells:
        grid[r][c] += 1
    return ConstraintMatrix(tuple(tuple(row) for row in grid))


def build_observational_constraints() -> tuple[ConstraintMatrix, ConstraintMatrix]:
    """``L`` with ``alpha[2i+j] = sum_j' q[4i+j'] * 1{f_j'(i) = j}`` (same for both sides)."""
    cells = [(2 * i + UNARY_TABLES[jp][i], marginal_index(i, jp))
             for i in (0, 1) for jp in range(4)]
    L = _matrix(4, N_MARGINAL, cells)
    return L, L


def build_interventional_constraints() -> ConstraintMatrix:
    """Rows ``P(Z=j | do(i)) = sum_i' sum_j' q[4i'+j'] * 1{f_j'(i) = j}``."""
    cells = [(2 * i + UNARY_TABLES[jp][i], marginal_index(ip, jp))
             for i in (0, 1) for jp in range(4) for ip in (0, 1)]
    return _matrix(4, N_MARGINAL, cells)


def build_consistency_matrices() -> tuple[ConstraintMatrix, ConstraintMatrix]:
    """0/1 matrices with ``qA = K_A q`` and ``qB = K_B q``."""
    a_cells, b_cells = [], []
    for x in (0, 1):
        for y in (0, 1):
            for k in range(16):
                col = joint_index(x, y, k)
                a_cells.append((marginal_index(x, projection_index("Y", y)[k]), col))
                b_cells.append((marginal_index(y, projection_index("X", x)[k]), col))
    return _matrix(N_MARGINAL, N_JOINT, a_cells), _matrix(N_MARGINAL, N_JOINT, b_cells)


def _table(values, name: str) -> Vector | None:
    if values is None:
        return None
    v = tuple(to_rational(x) for x in values)
    if len(v) != 4 or any(not 0 <= x <= 1 for x in v):
        raise ValueError(f"{name} must be four probabilities")
    return v


def _check_joint2(alpha, name: str) -> Vector:
    a = _table(alpha, name)
    if sum(a) != 1:
        raise ValueError(f"{name} must sum to 1, got {sum(a)}")
    return a


def _check_do(table, name: str) -> Vector | None:
    t = _table(table, name)
    if t is not None and (t[0] + t[1] != 1 or t[2] + t[3] != 1):
        raise ValueError(f"each do-row of {name} must sum to 1")
    return t


@dataclass(frozen=True)
class ConfoundedProblem:
    polytope: HPolytope
    row_counts: dict

    @property
    def n_equalities(self) -> int:
        return self.polytope.eq_matrix.rows


def confounded_polytope(alpha, beta, alpha_iv=None, beta_iv=None,
                        monotonic: tuple[bool, bool] = (False, False)) -> ConfoundedProblem:
    """H-representation of the feasible stacked vectors ``(qA, qB, q)``."""
    alpha = _check_joint2(alpha, "alpha")
    beta = _check_joint2(beta, "beta")
    alpha_iv = _check_do(alpha_iv, "alpha_iv")
    beta_iv = _check_do(beta_iv, "beta_iv")
    L_A, L_B = build_observational_constraints()
    L_IV = build_interventional_constraints()
    K_A, K_B = build_consistency_matrices()

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    counts = {}

    def place(block_rows, offset, values, label):
        for row, value in zip(block_rows, values):
            full = [Fraction(0)] * N_STACKED
            full[offset:offset + len(row)] = row
            rows.append(full)
            rhs.append(value)
        counts[label] = counts.get(label, 0) + len(values)

    place(L_A, OFFSET["qa"], alpha, "observational")
    place(L_B, OFFSET["qb"], beta, "observational")
    if alpha_iv is not None:
        place(L_IV, OFFSET["qa"], alpha_iv, "interventional")
    if beta_iv is not None:
        place(L_IV, OFFSET["qb"], beta_iv, "interventional")
    for flag, side in zip(monotonic, ("qa", "qb")):
        if flag:
            row = [Fraction(0)] * N_MARGINAL
            row[marginal_index(0, 3)] = row[marginal_index(1, 3)] = Fraction(1)
            place([row], OFFSET[side], [Fraction(0)], "monotonicity")
    for K, side in ((K_A, "qa"), (K_B, "qb")):
        for r in range(N_MARGINAL):
            full = [Fraction(0)] * N_STACKED
            full[OFFSET[side] + r] = Fraction(1)
            for c, v in enumerate(K[r]):
                if v:
                    full[OFFSET["q"] + c] = -v
            rows.append(full)
            rhs.append(Fraction(0))
        counts["consistency"] = counts.get("consistency", 0) + N_MARGINAL
    norm = [Fraction(0)] * N_STACKED
    norm[OFFSET["q"]:] = [Fraction(1)] * N_JOINT
    rows.append(norm)
    rhs.append(Fraction(1))
    counts["normalisation"] = 1
    counts["positivity"] = N_STACKED

    poly = HPolytope(
        ineq_matrix=-identity(N_STACKED),
        ineq_rhs=(Fraction(0),) * N_STACKED,
        eq_matrix=ConstraintMatrix(tuple(tuple(r) for r in rows)),
        eq_rhs=tuple(rhs),
    )
    return ConfoundedProblem(poly, counts)


def confounded_query_bounds(alpha, beta, objective, alpha_iv=None, beta_iv=None,
                            monotonic: tuple[bool, bool] = (False, False)) -> tuple[Fraction, Fraction]:
    """(min, max) of a linear objective over the stacked vector ``(qA, qB, q)``."""
    problem = confounded_polytope(alpha, beta, alpha_iv, beta_iv, monotonic)
    return bounds_over(problem, objective)


def bounds_over(problem: ConfoundedProblem, objective) -> tuple[Fraction, Fraction]:
    objective = tuple(to_rational(v) for v in objective)
    if len(objective) != N_STACKED:
        raise ValueError(f"objective must have {N_STACKED} entries")
    low = solve_lp(problem.polytope, objective, Sense.MIN)
    if low.status is Status.INFEASIBLE:
        raise CounterfactuallyInfeasible("the confounded constraints admit no solution")
    high = solve_lp(problem.polytope, objective, Sense.MAX)
    return low.value, high.value


# --- embedding of unconfounded solutions ------------------------------------------


def observational_table(obs: MarginalObservation) -> Vector:
    """``P(cause=i, Z=j)`` at index ``2i + j``."""
    return obs.joint()


def interventional_table(obs: MarginalObservation) -> Vector:
    """Do-table equal to the observed conditionals (no confounding)."""
    return (obs.p0_given0, 1 - obs.p0_given0, obs.p0_given1, 1 - obs.p0_given1)


def embed_unconfounded(c: Sequence, p_x1, p_y1) -> Vector:
    """Stacked ``(qA, qB, q)`` with ``q[x,y,k] = P(X=x) P(Y=y) c_k``."""
    p_x1, p_y1 = to_rational(p_x1), to_rational(p_y1)
    px, py = (1 - p_x1, p_x1), (1 - p_y1, p_y1)
    q = [Fraction(0)] * N_JOINT
    for x in (0, 1):
        for y in (0, 1):
            for k in range(16):
                q[joint_index(x, y, k)] = px[x] * py[y] * to_rational(c[k])
    K_A, K_B = build_consistency_matrices()
    return tuple(K_A @ q) + tuple(K_B @ q) + tuple(q)


# --- objective specifications -------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?|\d*\.\d+)\s*\*?\s*)?([a-z_]+)(?:\[([\d,\s]+)\]|=(\d+))?\s*")
_UNIDENTIFIABLE = {"cf_x_given_xy", "cf_y_given_xy"}


def _unit(name: str, args: tuple[int, ...]) -> list[Fraction]:
    w = [Fraction(0)] * N_STACKED
    a, b = OFFSET["qa"], OFFSET["qb"]

    def need(n):
        if len(args) != n:
            raise ValueError(f"{name} takes {n} index value(s), got {len(args)}")

    if name in _UNIDENTIFIABLE:
        raise UnidentifiableQuery(
            f"{name}: single-node counterfactuals given both causes are not determined by these models"
        )
    if name in ("lambda_a", "lambda_b"):
        need(0)
        off = a if name == "lambda_a" else b
        for i in (0, 1):
            w[off + marginal_index(i, 0)] = Fraction(1)
    elif name in ("gamma_a", "gamma_b"):
        need(0)
        off = a if name == "gamma_a" else b
        for i in (0, 1):
            for j in (2, 3):
                w[off + marginal_index(i, j)] = Fraction(1)
    elif name in ("ra", "rz", "rb"):
        need(1)
        off = b if name == "rb" else a
        for i in (0, 1):
            w[off + marginal_index(i, args[0])] = Fraction(1)
    elif name == "s":
        need(1)
        for x in (0, 1):
            for y in (0, 1):
                w[OFFSET["q"] + joint_index(x, y, args[0])] = Fraction(1)
    elif name in ("qa", "qb"):
        need(2)
        w[OFFSET[name] + marginal_index(*args)] = Fraction(1)
    elif name == "q":
        need(3)
        w[OFFSET["q"] + joint_index(*args)] = Fraction(1)
    elif name == "mass":
        need(0)
        w[OFFSET["q"]:] = [Fraction(1)] * N_JOINT
    else:
        raise ValueError(f"unknown objective term {name!r}")
    return w


def _check_ranges(name: str, args: tuple[int, ...]):
    limits = {"ra": (4,), "rz": (4,), "rb": (4,), "s": (16,), "qa": (2, 4), "qb": (2, 4), "q": (2, 2, 16)}
    for value, limit in zip(args, limits.get(name, ())):
        if not 0 <= value < limit:
            raise ValueError(f"index {value} out of range in {name}")


def parse_objective(spec: str) -> Vector:
    """Parse e.g. ``"lambda_a"``, ``"ra=2"``, ``"qa[0,1] - 1/2*qb[1,0]"`` or ``"s=7 + s=15"``.

    Terms: ``lambda_a``, ``lambda_b`` (mass on the constant-zero response),
    ``gamma_a``, ``gamma_b`` (mass on ID and NOT), ``ra=j``/``rz=j`` and
    ``rb=j`` (response ``f_j`` on either side), ``s=k`` (joint response
    ``h_k``), ``qa[i,j]``, ``qb[i,j]``, ``q[x,y,k]`` and ``mass``.
    """
    if not spec or not spec.strip():
        raise ValueError("empty objective")
    total = [Fraction(0)] * N_STACKED
    pos = 0
    text = spec.strip().lower()
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse objective near {text[pos:]!r}")
        sign, coef, name, bracket, eq = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator before {name!r}")
        first = False
        args: tuple[int, ...] = ()
        if bracket is not None:
            args = tuple(int(s) for s in bracket.split(",") if s.strip())
        elif eq is not None:
            args = (int(eq),)
        _check_ranges(name, args)
        factor = to_rational(coef) if coef else Fraction(1)
        if sign == "-":
            factor = -factor
        for idx, v in enumerate(_unit(name, args)):
            if v:
                total[idx] += factor * v
        pos = m.end()
    return tuple(total)
