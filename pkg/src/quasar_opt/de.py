"""Classic DE/rand/1/bin baseline with fixed F and CR."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    BoundsBox,
    OptResult,
    Population,
    RngStream,
    as_objective,
    best_of,
    clip_to_bounds,
    evaluate_rows,
)
from .quasar import _require_finite
from .sampling import InitMethod, initial_population


@dataclass
class DeConfig:
    """Textbook DE/rand/1/bin constants.

    pop_size of None resolves to 10 * D; at least 4 members are required so
    the three donors and the target can be pairwise distinct.
    """

    f_weight: float = 0.5
    cr: float = 0.9
    pop_size: Optional[int] = None
    g_max: int = 100
    seed: int = 0
    init_method: InitMethod = InitMethod.SOBOL

    def __post_init__(self):
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError(f"cr must be in [0, 1], got {self.cr}")
        if self.pop_size is not None and self.pop_size < 4:
            raise ValueError("pop_size must be at least 4")
        if self.g_max < 0:
            raise ValueError("g_max must be nonnegative")

    def resolved_pop_size(self, dim: int) -> int:
        n = 10 * dim if self.pop_size is None else self.pop_size
        if n < 4:
            raise ValueError("pop_size must be at least 4")
        return n


def _distinct_donors(rng: RngStream, n: int):
    """Per target i: three donor indices, pairwise distinct and != i."""
    idx = np.arange(n)
    r1 = rng.integers(0, n - 1, size=n)
    r1 += r1 >= idx
    f = np.sort(np.stack([idx, r1]), axis=0)
    r2 = rng.integers(0, n - 2, size=n)
    r2 += r2 >= f[0]
    r2 += r2 >= f[1]
    f = np.sort(np.stack([idx, r1, r2]), axis=0)
    r3 = rng.integers(0, n - 3, size=n)
    r3 += r3 >= f[0]
    r3 += r3 >= f[1]
    r3 += r3 >= f[2]
    return r1, r2, r3


def _de_step(objective, bounds: BoundsBox, pop: Population, cfg: DeConfig,
             rng: RngStream) -> Population:
    """One DE/rand/1/bin generation: v = X_r1 + F*(X_r2 - X_r3), binomial
    crossover with a forced mutant component (j_rand), greedy selection."""
    n, d = pop.size, pop.dim
    r1, r2, r3 = _distinct_donors(rng, n)
    x = pop.positions
    mutants = clip_to_bounds(
        x[r1] + cfg.f_weight * (x[r2] - x[r3]), bounds
    )
    j_rand = rng.integers(0, d, size=n)
    mix = rng.random((n, d)) <= cfg.cr
    mix[np.arange(n), j_rand] = True
    trials = np.where(mix, mutants, x)
    trial_fit = evaluate_rows(objective, trials)
    _require_finite(trial_fit, pop.generation, np.arange(n))

    accept = trial_fit < pop.fitness
    positions = np.where(accept[:, None], trials, x)
    fitness = np.where(accept, trial_fit, pop.fitness)
    return Population(positions, fitness, pop.generation + 1,
                      pop.eval_count + n)


def de_optimize(f, bounds: BoundsBox, cfg: Optional[DeConfig] = None) -> OptResult:
    """Minimize f over the box with DE/rand/1/bin.

    Same result contract as quasar.optimize: exactly g_max generations, no
    early stopping, deterministic for a given (f, bounds, cfg).
    """
    cfg = cfg or DeConfig()
    objective = as_objective(f, bounds.dim)
    n = cfg.resolved_pop_size(bounds.dim)
    rng = RngStream(cfg.seed)

    t0 = time.perf_counter()
    positions = initial_population(cfg.init_method, n, bounds, rng)
    fitness = evaluate_rows(objective, positions)
    _require_finite(fitness, 0, np.arange(n))
    pop = Population(positions, fitness, generation=0, eval_count=n)

    _, best_pos, best_fit = best_of(pop)
    trace = np.empty(cfg.g_max + 1)
    trace[0] = best_fit
    for g in range(cfg.g_max):
        pop = _de_step(objective, bounds, pop, cfg, rng)
        gen_best = float(pop.fitness.min())
        if gen_best < best_fit:
            best_fit = gen_best
            best_pos = pop.positions[int(np.argmin(pop.fitness))].copy()
        trace[g + 1] = best_fit
    runtime = time.perf_counter() - t0

    known = getattr(objective, "known_optimum", None)
    error = best_fit - known if known is not None else best_fit
    return OptResult(
        best_position=best_pos,
        best_fitness=best_fit,
        error=float(error),
        trace=trace,
        runtime_seconds=runtime,
        eval_count=pop.eval_count,
    )
