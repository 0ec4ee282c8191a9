"""Independent brute-force checks of the merge pipeline.

Nothing here reuses the constraint matrices built in :mod:`scmarginal.merge`:
the response functions are read off a literal copy of the 16-function truth
table, and feasibility is decided by substituting a candidate ``c`` straight
into ``A c = a(lambda)``, ``B c = b(lambda')``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import StatisticallyInconsistent
from .merge import MergeProblem, project_binary
from .polytope import Polygon2, contains, enumerate_vertices, project_hull
from .scm import BinaryResponse, MarginalObservation

# Truth table of h_0 ... h_15, one string per input row (x, y).
TABLE_ROWS = {
    (0, 0): "0101010101010101",
    (0, 1): "0011001100110011",
    (1, 0): "0000111100001111",
    (1, 1): "0000000011111111",
}
MIX_SIZE = 16
UNARY_BY_OUTPUT = {(0, 0): 0, (1, 1): 1, (0, 1): 2, (1, 0): 3}


def table_value(k: int, x: int, y: int) -> int:
    return int(TABLE_ROWS[(x, y)][k])


def truth_table_projection(k: int, fixed_variable: str, value: int) -> int:
    if fixed_variable == "X":
        outputs = (table_value(k, value, 0), table_value(k, value, 1))
    else:
        outputs = (table_value(k, 0, value), table_value(k, 1, value))
    return UNARY_BY_OUTPUT[outputs]


def exhaustive_projection_check() -> bool:
    """All 64 projections agree with the truth-table recomputation."""
    for k in range(16):
        h = BinaryResponse(k)
        for var in ("X", "Y"):
            for value in (0, 1):
                if project_binary(h, var, value).id != truth_table_projection(k, var, value):
                    return False
    return True


def table_fidelity_check() -> bool:
    """``BinaryResponse`` reproduces all 64 cells of the truth table."""
    return all(
        BinaryResponse(k)(x, y) == table_value(k, x, y)
        for k in range(16) for (x, y) in TABLE_ROWS
    )


# --- raw substitution ----------------------------------------------------------


class RawConstraints:
    """The marginal consistency equations in integer form.

    ``A`` and ``B`` are recomputed from the truth table and scaled to integers;
    a candidate ``c = num / den`` is tested with integer arithmetic only.
    """

    def __init__(self, obs_x: MarginalObservation, obs_y: MarginalObservation):
        self.sides = []
        for obs, other, var in ((obs_x, obs_y, "Y"), (obs_y, obs_x, "X")):
            weights = (1 - other.cause1, other.cause1)
            M = [[Fraction(0)] * 16 for _ in range(4)]
            for value, w in enumerate(weights):
                for k in range(16):
                    M[truth_table_projection(k, var, value)][k] += w
            scale = lcm(*(v.denominator for row in M for v in row))
            M_int = [[int(v * scale) for v in row] for row in M]
            p00, p01 = obs.p0_given0, obs.p0_given1
            self.sides.append((M, M_int, scale, p00, p01,
                               max(Fraction(0), p00 + p01 - 1), min(p00, p01)))

    def marginal_lambdas(self, c) -> tuple[Fraction, Fraction]:
        return tuple(sum((m * ck for m, ck in zip(side[0][0], c)), Fraction(0))
                     for side in self.sides)

    def check(self, num, den: int):
        """Return ``(feasible, (lambda_a, lambda_b))`` for ``c = num / den``."""
        feasible = all(v >= 0 for v in num) and sum(num) == den
        lams = []
        for _, M_int, scale, p00, p01, lo, hi in self.sides:
            Ac = [sum(m * v for m, v in zip(row, num) if m) for row in M_int]
            total = den * scale
            lam = Fraction(Ac[0], total)
            lams.append(lam)
            if not feasible:
                continue
            # A c = (lam, 1 - p00 - p01 + lam, p00 - lam, p01 - lam)
            expected = (lam, 1 - p00 - p01 + lam, p00 - lam, p01 - lam)
            if any(Fraction(a, total) != e for a, e in zip(Ac, expected)) or not lo <= lam <= hi:
                feasible = False
        return feasible, tuple(lams)

    def null_space(self) -> list[list[int]]:
        """Integer basis of directions that keep every equation satisfied."""
        rows = []
        for M, *_ in self.sides:
            # (A d)_j - dir_j (A d)_0 = 0 for j = 1..3
            for j, s in ((1, -1), (2, 1), (3, 1)):
                rows.append([M[j][k] + s * M[0][k] for k in range(16)])
        rows.append([Fraction(1)] * 16)
        # plain Gauss-Jordan elimination
        pivots, r = [], 0
        m = [list(row) for row in rows]
        for col in range(16):
            p = next((i for i in range(r, len(m)) if m[i][col]), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            m[r] = [v / m[r][col] for v in m[r]]
            for i in range(len(m)):
                if i != r and m[i][col]:
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(col)
            r += 1
        basis = []
        for free in (c for c in range(16) if c not in pivots):
            vec = [Fraction(0)] * 16
            vec[free] = Fraction(1)
            for i, p in enumerate(pivots):
                vec[p] = -m[i][free]
            den = lcm(*(v.denominator for v in vec))
            basis.append([int(v * den) for v in vec])
        return basis


@dataclass(frozen=True)
class SampleReport:
    tested: int = 0
    feasible: int = 0
    feasible_inside_polygon: int = 0
    feasible_outside_polygon: int = 0
    infeasible_inside: int = 0
    vertices_checked: int = 0
    lambda_a_range: tuple[Fraction, Fraction] | None = None
    lambda_b_range: tuple[Fraction, Fraction] | None = None

    @property
    def contradictions(self) -> int:
        return self.feasible_outside_polygon + self.infeasible_inside

    @property
    def passed(self) -> bool:
        return self.contradictions == 0


def _dirichlet_weights(rng: np.random.Generator, n: int) -> list[int]:
    """Normalised-exponential weights, rationalised to integers on a 1e6 grid."""
    w = np.rint(rng.exponential(size=n) * 10**6).astype(np.int64)
    if not w.any():
        w[0] = 1
    return [int(v) for v in w]


def sample_feasible_c(problem: MergeProblem, n: int, seed: int = 0,
                      polygon: Polygon2 | None = None) -> SampleReport:
    """Classify ``n`` points of the 15-simplex by raw substitution.

    Every enumerated vertex is checked first. Sample ``i`` is then one of three
    kinds (by ``i % 3``): a raw Dirichlet draw, a random mixture of between 1
    and ``MIX_SIZE`` enumerated vertices, or such a mixture pushed along a
    random direction that preserves every equation, up to 1.25 times the
    distance to the nearest positivity boundary. Feasible points must project
    into the polygon; vertex mixtures must be feasible.
    """
    raw = RawConstraints(problem.obs_x, problem.obs_y)
    vertices = enumerate_vertices(problem.polytope)
    if polygon is None:
        polygon = project_hull(vertices, problem.projection)
    counts = dict(tested=0, feasible=0, feasible_inside_polygon=0,
                  feasible_outside_polygon=0, infeasible_inside=0, vertices_checked=0)

    for v in vertices:
        counts["vertices_checked"] += 1
        den = lcm(*(x.denominator for x in v))
        ok, lams = raw.check([int(x * den) for x in v], den)
        if not ok:
            counts["infeasible_inside"] += 1
        elif not contains(polygon, lams):
            counts["feasible_outside_polygon"] += 1

    vden = lcm(*(x.denominator for v in vertices for x in v))
    vint = [[int(x * vden) for x in v] for v in vertices]
    null = raw.null_space()
    ranges: list = [None, None]

    for i in range(n):
        rng = np.random.default_rng((seed, i))
        kind = i % 3
        from_vertices = kind != 0
        if kind == 0:
            num = _dirichlet_weights(rng, 16)
            den = sum(num)
        else:
            size = int(rng.integers(1, min(MIX_SIZE, len(vint)) + 1))
            picks = rng.choice(len(vint), size=size, replace=False)
            chosen = [vint[j] for j in sorted(picks)]
            w = _dirichlet_weights(rng, len(chosen))
            num = [sum(wi * v[k] for wi, v in zip(w, chosen)) for k in range(16)]
            den = vden * sum(w)
            if kind == 2 and null:
                coef = rng.integers(-5, 6, size=len(null))
                d = [sum(int(a) * b[k] for a, b in zip(coef, null)) for k in range(16)]
                limits = [Fraction(num[k], -d[k]) for k in range(16) if d[k] < 0]
                if limits:
                    t_max = min(limits)
                    u = Fraction(int(rng.integers(0, 1251)), 1000)
                    t = t_max * u
                    scale = t.denominator
                    num = [x * scale + t.numerator * dk for x, dk in zip(num, d)]
                    den *= scale
                    from_vertices = u <= 1
        feasible, lams = raw.check(num, den)
        counts["tested"] += 1
        if feasible:
            counts["feasible"] += 1
            for axis, lam in enumerate(lams):
                lo, hi = ranges[axis] or (lam, lam)
                ranges[axis] = (min(lo, lam), max(hi, lam))
            if contains(polygon, lams):
                counts["feasible_inside_polygon"] += 1
            else:
                counts["feasible_outside_polygon"] += 1
        elif from_vertices:
            counts["infeasible_inside"] += 1
    return SampleReport(**counts, lambda_a_range=ranges[0], lambda_b_range=ranges[1])


# --- Lemma-1 grid scan ----------------------------------------------------------------


def _monotone_frame(obs_x: MarginalObservation, obs_y: MarginalObservation):
    if obs_x.p0_given0 * obs_x.cause0 + obs_x.p0_given1 * obs_x.cause1 != \
            obs_y.p0_given0 * obs_y.cause0 + obs_y.p0_given1 * obs_y.cause1:
        raise StatisticallyInconsistent("the two datasets imply different P(Z=0)")
    if obs_x.p0_given1 < obs_x.p0_given0:
        obs_x = MarginalObservation(obs_x.p0_given1, obs_x.p0_given0, 1 - obs_x.cause1)
    if obs_y.p0_given1 < obs_y.p0_given0:
        obs_y = MarginalObservation(obs_y.p0_given1, obs_y.p0_given0, 1 - obs_y.cause1)
    return obs_x, obs_y


def lemma1_constraints(obs_x: MarginalObservation, obs_y: MarginalObservation, q00) -> tuple[bool, ...]:
    """Truth values of the six ordering constraints at a given lowest-cell value.

    The other three conditionals are obtained from the requirement that the
    joint reproduces both observed kernels.
    """
    px0, px1 = 1 - obs_x.cause1, obs_x.cause1
    py0, py1 = 1 - obs_y.cause1, obs_y.cause1
    # P(Z=0|X=0) = q00 P(Y=0) + q01 P(Y=1)
    q01 = (obs_x.p0_given0 - q00 * py0) / py1
    # P(Z=0|Y=0) = q00 P(X=0) + q10 P(X=1)
    q10 = (obs_y.p0_given0 - q00 * px0) / px1
    # P(Z=0|Y=1) = q01 P(X=0) + q11 P(X=1)
    q11 = (obs_y.p0_given1 - q01 * px0) / px1
    return (0 <= q00, q00 <= q01, q00 <= q10, q01 <= q11, q10 <= q11, q11 <= 1)


def lemma1_pass_set(obs_x: MarginalObservation, obs_y: MarginalObservation, grid: int) -> list[int]:
    """Indices ``i`` such that ``q00 = i / grid`` satisfies all six constraints."""
    ox, oy = _monotone_frame(obs_x, obs_y)
    return [i for i in range(grid + 1) if all(lemma1_constraints(ox, oy, Fraction(i, grid)))]


def scan_lemma1(obs_x: MarginalObservation, obs_y: MarginalObservation, grid: int = 1000) -> bool:
    """Grid pass-set equals the closed-form interval intersected with the grid."""
    from .analysis import lemma1_interval

    interval = lemma1_interval(obs_x, obs_y)
    passing = lemma1_pass_set(obs_x, obs_y, grid)
    expected = [i for i in range(grid + 1) if Fraction(i, grid) in interval]
    return passing == expected
