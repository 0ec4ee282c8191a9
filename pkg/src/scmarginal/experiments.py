"""Seeded random-instance experiments.

Instances are drawn in the joint parametrisation ``theta_x = P(X=1)``,
``theta_y = P(Y=1)``, ``theta_z[x][y] = P(Z=1 | X=x, Y=y)``, which makes the
two marginal datasets statistically mergeable by construction. Every trial
has its own generator seeded by ``(master seed, trial index)``, so results do
not depend on how trials are distributed over worker processes.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import betaincinv

from .analysis import BoundsReport, bounds_report, prop1_witness
from .merge import build_merge_problem, observations_from_joint
from .rational import DENOMINATOR, to_rational

BETA_TABLE_SIZE = 4097


@lru_cache(maxsize=32)
def _beta_table(alpha: float, beta: float) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, BETA_TABLE_SIZE)
    return betaincinv(alpha, beta, grid)


def beta_quantile(u: float, alpha, beta) -> Fraction:
    """Inverse CDF of Beta(alpha, beta) by linear interpolation in a fixed table.

    The result is rounded to a multiple of ``1 / DENOMINATOR``.
    """
    table = _beta_table(float(alpha), float(beta))
    x = float(np.interp(u, np.linspace(0.0, 1.0, BETA_TABLE_SIZE), table))
    return Fraction(round(x * DENOMINATOR), DENOMINATOR)


def _uniform_open(rng: np.random.Generator) -> Fraction:
    """Uniform draw on the 1e-6 grid, excluding the degenerate values 0 and 1."""
    while True:
        v = Fraction(int(rng.integers(0, DENOMINATOR + 1)), DENOMINATOR)
        if 0 < v < 1:
            return v


@dataclass(frozen=True)
class JointInstance:
    theta_x: Fraction
    theta_y: Fraction
    theta_z: tuple[Fraction, Fraction, Fraction, Fraction]  # cells 00, 01, 10, 11

    def observations(self):
        return observations_from_joint(self.theta_x, self.theta_y, self.theta_z)


def sample_instance(seed: int, index: int, alpha=1, beta=1) -> JointInstance:
    rng = np.random.default_rng((seed, index))
    tx = _uniform_open(rng)
    ty = _uniform_open(rng)
    tz = tuple(beta_quantile(float(rng.random()), alpha, beta) for _ in range(4))
    return JointInstance(tx, ty, tz)


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    trial: int
    instance: JointInstance
    report: BoundsReport
    witness_valid: bool
    wall_time: float = field(default=0.0, compare=False)

    @property
    def prop1_member(self) -> bool:
        return self.report.prop1_member

    @property
    def box_ratio(self) -> Fraction:
        return self.report.area_ratio_box

    @property
    def polygon_ratio(self) -> Fraction:
        return self.report.area_ratio_polygon


def run_trial(seed: int, index: int, alpha=1, beta=1, method: str = "hull") -> TrialRecord:
    start = time.perf_counter()
    inst = sample_instance(seed, index, alpha, beta)
    obs_x, obs_y = inst.observations()
    problem = build_merge_problem(obs_x, obs_y)
    report = bounds_report(problem, method=method)
    witness = prop1_witness(obs_x, obs_y)
    valid = problem.polytope.contains(witness) and problem.lambdas(witness) == report.corner
    return TrialRecord(seed, index, inst, report, valid, time.perf_counter() - start)


def _run_trial_args(args):
    return run_trial(*args)


def run_trials(n: int, alpha=1, beta=1, seed: int = 0, workers: int = 1,
               method: str = "hull") -> list[TrialRecord]:
    """Run ``n`` trials; output order is by trial index regardless of ``workers``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    alpha, beta = to_rational(alpha), to_rational(beta)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    jobs = [(seed, i, alpha, beta, method) for i in range(n)]
    if workers <= 1:
        records = [_run_trial_args(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_trial_args, jobs, chunksize=max(1, n // (4 * workers))))
    return sorted(records, key=lambda r: r.trial)


@dataclass(frozen=True)
class Summary:
    n: int
    frac_box_lt1: Fraction
    frac_polygon_lt1: Fraction
    mean_box_reduction: Fraction
    mean_polygon_reduction: Fraction
    all_prop1: bool


def summarize(records: list[TrialRecord]) -> Summary:
    n = len(records)
    box = [r.box_ratio for r in records]
    poly = [r.polygon_ratio for r in records]
    return Summary(
        n=n,
        frac_box_lt1=Fraction(sum(1 for b in box if b < 1), n),
        frac_polygon_lt1=Fraction(sum(1 for p in poly if p < 1), n),
        mean_box_reduction=1 - sum(box, Fraction(0)) / n,
        mean_polygon_reduction=1 - sum(poly, Fraction(0)) / n,
        all_prop1=all(r.prop1_member and r.witness_valid for r in records),
    )


def sweep_grid(resolution: int) -> list[Fraction]:
    """Interior grid ``k / (resolution + 1)`` for ``k = 1..resolution``."""
    if resolution < 1:
        raise ValueError("grid resolution must be at least 1")
    return [Fraction(k, resolution + 1) for k in range(1, resolution + 1)]


GENERIC_CONDITIONALS = (Fraction(3, 10), Fraction(4, 5), Fraction(3, 10), Fraction(7, 10))
XOR_CONDITIONALS = (Fraction(0), Fraction(1), Fraction(1), Fraction(0))


def sweep(theta_z, resolution: int):
    """Yield one frame per ``(P(X=1), P(Y=1))`` grid cell."""
    theta_z = tuple(to_rational(v) for v in theta_z)
    for tx in sweep_grid(resolution):
        for ty in sweep_grid(resolution):
            obs_x, obs_y = observations_from_joint(tx, ty, theta_z)
            report = bounds_report(build_merge_problem(obs_x, obs_y))
            yield tx, ty, report
