"""The three experiment arms: analytical baseline, GA only, and GA followed by
pattern search (GPS)."""

from __future__ import annotations

import dataclasses
import enum
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import UnreachableError
from .ga import GaTrace, run_ga
from .kinematics import inverse_kinematics
from .objective import FitnessBreakdown, TrackingProblem, breakdown_of_path, encode, point_errors
from .pattern_search import PsTrace, run_ps
from .scenario import ScenarioConfig


class Arm(enum.Enum):
    ANALYTIC = "analytic"
    GA = "ga"
    GPS = "gps"


@dataclass
class RunResult:
    arm: Arm
    path: np.ndarray  # (n, 3) radians
    point_errors: np.ndarray  # (n,) meters
    breakdown: FitnessBreakdown
    ga_trace: Optional[GaTrace] = None
    ps_trace: Optional[PsTrace] = None
    duration_s: float = 0.0
    seed: Optional[int] = None

    @property
    def f_eval(self) -> float:
        return self.breakdown.f_eval


def _result(arm, problem: TrackingProblem, path, **kw) -> RunResult:
    errs = point_errors(path, problem.trajectory, problem.model)
    bd = breakdown_of_path(path, problem.trajectory, problem.model, problem.weights)
    return RunResult(arm, np.asarray(path), errs, bd, **kw)


def analytic_path(cfg: ScenarioConfig) -> np.ndarray:
    """Closed-form joint path through every via point, on the initial configuration's branch."""
    model, branch = cfg.robot(), cfg.branch()
    rows = []
    for i, pose in enumerate(cfg.trajectory()):
        try:
            rows.append(inverse_kinematics(model, pose, branch).as_array())
        except UnreachableError as exc:
            raise UnreachableError(
                f"via point {i} ({pose.x:.6g}, {pose.y:.6g}, phi={math.degrees(pose.phi):.6g} deg) "
                f"is unreachable: {exc}",
                index=i,
                pose=pose,
            ) from exc
    return np.array(rows)


def run_analytic(cfg: ScenarioConfig) -> RunResult:
    t0 = time.perf_counter()
    path = analytic_path(cfg)
    problem = cfg.problem()
    return _result(Arm.ANALYTIC, problem, path, duration_s=time.perf_counter() - t0)


def initial_population(cfg: ScenarioConfig, problem: TrackingProblem):
    """Factory for the GA's starting population.

    Every individual is the pinned start configuration repeated along the
    path plus uniform noise of ``init_spread_deg``. With ``seed_analytic`` the
    first individual is the closed-form path instead.
    """
    spread = math.radians(cfg.ga.init_spread_deg)
    base = np.tile(problem.start.as_array(), problem.n_points - 1)
    seeded = encode(analytic_path(cfg)) if cfg.ga.seed_analytic else None

    def make(rng):
        pop = base + rng.uniform(-spread, spread, (cfg.ga.population_size, problem.dim))
        if seeded is not None:
            pop[0] = seeded
        return pop

    return make


def run_ga_arm(cfg: ScenarioConfig, seed: Optional[int] = None, *, workers: int = 1) -> RunResult:
    seed = cfg.seed if seed is None else seed
    t0 = time.perf_counter()
    problem = cfg.problem()
    params = dataclasses.replace(cfg.ga, bounds=problem.bounds)
    trace = run_ga(
        problem.fitness_values,
        params,
        seed,
        initial_population=initial_population(cfg, problem),
        vectorized=True,
        workers=workers,
    )
    return _result(Arm.GA, problem, problem.decode(trace.x), ga_trace=trace,
                   duration_s=time.perf_counter() - t0, seed=seed)


def run_gps_arm(cfg: ScenarioConfig, seed: Optional[int] = None, *, workers: int = 1,
                ga_result: Optional[RunResult] = None) -> RunResult:
    """Refine the GA's best individual with pattern search on tracking error alone."""
    if ga_result is None:
        ga_result = run_ga_arm(cfg, seed, workers=workers)
    t0 = time.perf_counter()
    problem = cfg.problem()
    params = dataclasses.replace(cfg.ps, bounds=problem.bounds)
    trace = run_ps(problem.tracking_values, ga_result.ga_trace.x, params,
                   vectorized=True, workers=workers)
    return _result(
        Arm.GPS, problem, problem.decode(trace.x),
        ga_trace=ga_result.ga_trace, ps_trace=trace,
        duration_s=ga_result.duration_s + time.perf_counter() - t0,
        seed=ga_result.seed,
    )


def run_arms(cfg: ScenarioConfig, arms: Sequence[Arm] = tuple(Arm), seed: Optional[int] = None,
             *, workers: int = 1) -> list[RunResult]:
    """Run the requested arms in order; the GPS arm reuses the GA arm's run."""
    arms = [Arm(a) for a in arms]
    results = []
    ga = None
    for arm in Arm:
        if arm not in arms:
            continue
        if arm is Arm.ANALYTIC:
            results.append(run_analytic(cfg))
        elif arm is Arm.GA:
            ga = run_ga_arm(cfg, seed, workers=workers)
            results.append(ga)
        else:
            results.append(run_gps_arm(cfg, seed, workers=workers, ga_result=ga))
    return results
