"""Real-coded genetic algorithm.

Operator suite: rank fitness scaling, stochastic uniform selection, scattered
crossover, shrinking Gaussian mutation and elitism. Each generation is made of
the elite, then crossover children, then mutation children.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import _evaluate
from .errors import GpsTrackError, LengthMismatchError, ValidationError


class EmptyPopulationError(ValidationError):
    pass


class DegenerateExpectationsError(ValidationError):
    pass


@dataclass(frozen=True)
class GaParams:
    population_size: int = 100
    generations: int = 200
    elite_count: int = 2
    crossover_fraction: float = 0.8
    mutation_scale: float = 1.0
    mutation_shrink: float = 1.0
    # early stop when the best value improves by less than stall_tolerance
    # over stall_generations generations; None disables it
    stall_generations: Optional[int] = None
    stall_tolerance: float = 1e-6
    # recorded for completeness; inert with a single population
    migration_fraction: float = 0.2
    migration_interval: int = 20
    # initial population: start configuration repeated along the path plus
    # uniform noise of this half-width (degrees)
    init_spread_deg: float = 10.0
    seed_analytic: bool = False
    bounds: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.generations < 1:
            raise ValidationError(f"generations must be >= 1, got {self.generations}")
        if self.elite_count < 0 or self.population_size < 1:
            raise ValidationError("population_size must be >= 1 and elite_count >= 0")
        if self.elite_count > self.population_size:
            raise ValidationError(
                f"elite_count {self.elite_count} exceeds population_size {self.population_size}"
            )
        if self.elite_count < self.population_size and self.population_size < 2:
            raise ValidationError("population_size must be >= 2 to breed offspring")
        if not 0.0 <= self.crossover_fraction <= 1.0:
            raise ValidationError(
                f"crossover_fraction must lie in [0, 1], got {self.crossover_fraction}"
            )
        if self.mutation_scale < 0 or self.mutation_shrink < 0:
            raise ValidationError("mutation scale and shrink must be >= 0")
        if self.stall_generations is not None and self.stall_generations < 1:
            raise ValidationError("stall_generations must be >= 1 when set")
        if self.bounds is not None:
            b = np.asarray(self.bounds, dtype=float)
            if b.ndim != 2 or b.shape[1] != 2 or np.any(b[:, 0] > b[:, 1]):
                raise ValidationError("bounds must be a (d, 2) array with lo <= hi")
            object.__setattr__(self, "bounds", b)

    @property
    def n_crossover(self) -> int:
        return int(round(self.crossover_fraction * (self.population_size - self.elite_count)))

    @property
    def n_mutation(self) -> int:
        return self.population_size - self.elite_count - self.n_crossover


@dataclass
class GaTrace:
    best_fitness: np.ndarray  # (G,)
    mean_fitness: np.ndarray  # (G,)
    best_vectors: np.ndarray  # (G, d)
    x: np.ndarray
    fun: float
    seed: Optional[int]
    evaluations: int
    populations: Optional[list] = None

    @property
    def generations(self) -> int:
        return len(self.best_fitness)


def rank_scale(raw_fitness, slots: Optional[int] = None) -> np.ndarray:
    """Rank-based expectations for a minimisation problem.

    The individual with rank ``r`` (1 = lowest raw value, ties broken by
    position) gets an expectation proportional to ``1/sqrt(r)``. Expectations
    are returned in the input order and sum to ``slots`` (default: the
    population size).
    """
    raw = np.asarray(raw_fitness, dtype=float).ravel()
    if raw.size == 0:
        raise EmptyPopulationError("cannot scale an empty population")
    slots = raw.size if slots is None else slots
    order = np.argsort(raw, kind="stable")
    ranks = np.empty(raw.size)
    ranks[order] = np.arange(1, raw.size + 1)
    e = 1.0 / np.sqrt(ranks)
    return e * (slots / e.sum())


def select_sus(expectations, k: int, rng: np.random.Generator) -> np.ndarray:
    """Stochastic universal sampling: ``k`` equally spaced pointers, one random offset."""
    e = np.asarray(expectations, dtype=float).ravel()
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if e.size == 0 or np.any(e < 0) or not np.any(e > 0) or not np.all(np.isfinite(e)):
        raise DegenerateExpectationsError("expectations must be finite, >= 0 and not all zero")
    wheel = np.cumsum(e) / e.sum()
    step = 1.0 / k
    pointers = rng.random() * step + step * np.arange(k)
    idx = np.searchsorted(wheel, pointers, side="right")
    # guard against cumsum rounding leaving the last pointer past wheel[-1]
    return np.minimum(idx, e.size - 1)


def crossover_scattered(p1, p2, rng: np.random.Generator) -> np.ndarray:
    """Uniform crossover; rows of ``p1``/``p2`` pair up when given 2-D arrays."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise LengthMismatchError(f"parent shapes differ: {p1.shape} vs {p2.shape}")
    mask = rng.random(p1.shape) < 0.5
    return np.where(mask, p1, p2)


def mutation_sigma(gen: int, params: GaParams, bounds: np.ndarray) -> np.ndarray:
    """Per-gene standard deviation at generation ``gen`` (never negative)."""
    bounds = np.asarray(bounds, dtype=float)
    factor = params.mutation_scale * max(0.0, 1.0 - params.mutation_shrink * gen / params.generations)
    return factor * (bounds[:, 1] - bounds[:, 0])


def mutate_gaussian(v, gen: int, params: GaParams, rng: np.random.Generator, bounds=None) -> np.ndarray:
    """Add zero-mean Gaussian noise scaled to each gene's bound range, then clamp."""
    bounds = params.bounds if bounds is None else np.asarray(bounds, dtype=float)
    if bounds is None:
        raise ValidationError("mutate_gaussian needs bounds")
    v = np.asarray(v, dtype=float)
    sigma = mutation_sigma(gen, params, bounds)
    noise = rng.standard_normal(v.shape) * sigma
    return np.clip(v + noise, bounds[:, 0], bounds[:, 1])


InitialPopulation = Union[np.ndarray, Callable[[np.random.Generator], np.ndarray], None]


class ObjectiveError(GpsTrackError):
    pass


def _score(objective, X, vectorized, workers, gen):
    try:
        f = _evaluate.evaluate(objective, X, vectorized=vectorized, workers=workers)
    except Exception as exc:
        raise ObjectiveError(f"objective failed in generation {gen}: {exc}") from exc
    return f


def run_ga(
    objective,
    params: GaParams,
    seed: Optional[int] = None,
    *,
    initial_population: InitialPopulation = None,
    vectorized: bool = False,
    workers: int = 1,
    keep_populations: bool = False,
) -> GaTrace:
    """Minimise ``objective`` over the box ``params.bounds``.

    ``objective`` maps one vector to a float, or a ``(m, d)`` batch to ``(m,)``
    when ``vectorized`` is true. ``initial_population`` may be an array (rows
    beyond those supplied are drawn uniformly in the box) or a callable taking
    the run's generator. All random draws come from one generator seeded with
    ``seed``, consumed in a fixed order on the calling thread.
    """
    if params.bounds is None:
        raise ValidationError("GaParams.bounds must be set")
    bounds = params.bounds
    lo, hi = bounds[:, 0], bounds[:, 1]
    dim = len(bounds)
    pop_size = params.population_size
    rng = np.random.default_rng(seed)

    if callable(initial_population):
        init = np.asarray(initial_population(rng), dtype=float)
    elif initial_population is None:
        init = np.empty((0, dim))
    else:
        init = np.atleast_2d(np.asarray(initial_population, dtype=float))
    if init.size and init.shape[1] != dim:
        raise LengthMismatchError(f"initial population has {init.shape[1]} genes, expected {dim}")
    init = init[:pop_size]
    extra = pop_size - len(init)
    fill = lo + rng.random((extra, dim)) * (hi - lo)
    pop = np.clip(np.vstack([init.reshape(-1, dim), fill]), lo, hi)
    scores = _score(objective, pop, vectorized, workers, 0)
    evaluations = pop_size

    n_elite, n_x, n_m = params.elite_count, params.n_crossover, params.n_mutation
    n_parents = 2 * n_x + n_m
    best_f, mean_f, best_x, pops = [], [], [], []

    for gen in range(params.generations):
        order = np.argsort(scores, kind="stable")
        elite = pop[order[:n_elite]]
        elite_scores = scores[order[:n_elite]]
        children = []
        if n_parents:
            parents = select_sus(rank_scale(scores, n_parents), n_parents, rng)
            parents = parents[rng.permutation(n_parents)]
            if n_x:
                children.append(
                    crossover_scattered(pop[parents[0:2 * n_x:2]], pop[parents[1:2 * n_x:2]], rng)
                )
            if n_m:
                children.append(mutate_gaussian(pop[parents[2 * n_x:]], gen, params, rng, bounds))
        if children:
            kids = np.clip(np.vstack(children), lo, hi)
            kid_scores = _score(objective, kids, vectorized, workers, gen + 1)
            evaluations += len(kids)
            pop = np.vstack([elite, kids])
            scores = np.concatenate([elite_scores, kid_scores])
        else:
            pop, scores = elite, elite_scores

        i = int(np.argmin(scores))
        best_f.append(scores[i])
        mean_f.append(scores.mean())
        best_x.append(pop[i].copy())
        if keep_populations:
            pops.append(pop.copy())

        sg = params.stall_generations
        if sg is not None and len(best_f) > sg and best_f[-1 - sg] - best_f[-1] < params.stall_tolerance:
            break

    best_f = np.array(best_f)
    return GaTrace(
        best_fitness=best_f,
        mean_fitness=np.array(mean_f),
        best_vectors=np.array(best_x),
        x=best_x[-1].copy(),
        fun=float(best_f[-1]),
        seed=seed,
        evaluations=evaluations,
        populations=pops if keep_populations else None,
    )
