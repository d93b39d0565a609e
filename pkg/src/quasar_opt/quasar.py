"""QUASAR: quasi-adaptive search with asymptotic reinitialization.

A DE-family optimizer combining three probabilistically selected mutation
strategies, rank-based crossover rates, greedy elitism, and replacement of
the worst population slice by samples from an elite-fitted Gaussian whose
trigger probability decays asymptotically over generations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import IntEnum
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
    rank_population,
)
from .sampling import InitMethod, initial_population

# Factor distributions: local exploitation N(0, 0.33^2); global exploration
# is an equal-weight mixture of N(+0.5, 0.25^2) and N(-0.5, 0.25^2).
F_LOCAL_SCALE = 0.33
F_GLOBAL_MODE = 0.5
F_GLOBAL_SCALE = 0.25


class MutationStrategy(IntEnum):
    SPOOKY_BEST = 0      # exploit around the population best
    SPOOKY_CURRENT = 1   # move the current point along best-random
    SPOOKY_RANDOM = 2    # explore from a random member


@dataclass
class QuasarConfig:
    """All QUASAR constants.

    pop_size of None resolves to 10 * D at optimize time. Probabilities and
    fractions must lie in (0, 1]; pop_size must be at least 5 so mutation can
    draw distinct indices.
    """

    entangle_rate: float = 0.33
    cr_floor: float = 0.33
    p_final: float = 0.33
    g_final: float = 0.33
    reinit_fraction: float = 0.33
    elite_fraction: float = 0.25
    noise_divisor: float = 20.0
    epsilon_jitter: float = 1e-12
    pop_size: Optional[int] = None
    g_max: int = 100
    seed: int = 0
    init_method: InitMethod = InitMethod.SOBOL

    def __post_init__(self):
        for name in ("entangle_rate", "cr_floor", "p_final", "g_final",
                     "reinit_fraction", "elite_fraction"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.noise_divisor <= 0:
            raise ValueError("noise_divisor must be positive")
        if self.epsilon_jitter <= 0:
            raise ValueError("epsilon_jitter must be positive")
        if self.pop_size is not None and self.pop_size < 5:
            raise ValueError("pop_size must be at least 5")
        if self.g_max < 0:
            raise ValueError("g_max must be nonnegative")

    def resolved_pop_size(self, dim: int) -> int:
        n = 10 * dim if self.pop_size is None else self.pop_size
        if n < 5:
            raise ValueError("pop_size must be at least 5")
        return n


@dataclass(frozen=True)
class EliteStats:
    """Mean and jittered covariance of the top-M individuals."""

    mu: np.ndarray       # (D,)
    sigma: np.ndarray    # (D, D), symmetric, includes the epsilon*I jitter
    m: int
    epsilon: float = 1e-12


@dataclass(frozen=True)
class StepInfo:
    """Diagnostics for one generation step."""

    reinit_mask: np.ndarray        # (N,) bool: replaced via reinitialization
    n_reinit: int
    cholesky_fallback: int         # 0 clean, 1 strong jitter, 2 diagonal only
    strategy_counts: np.ndarray    # draws per MutationStrategy value
    n_accepted: int                # trials that won greedy selection


def select_strategy(rng: RngStream, entangle_rate: float, size=None):
    """Draw mutation strategies: SPOOKY_BEST with probability entangle_rate,
    otherwise SPOOKY_CURRENT or SPOOKY_RANDOM with equal probability.

    Scalar draw without `size`; ndarray of strategy codes with `size`.
    """
    if not 0.0 < entangle_rate <= 1.0:
        raise ValueError(f"entangle_rate must be in (0, 1], got {entangle_rate}")
    if size is None:
        if rng.random() < entangle_rate:
            return MutationStrategy.SPOOKY_BEST
        if rng.random() < 0.5:
            return MutationStrategy.SPOOKY_CURRENT
        return MutationStrategy.SPOOKY_RANDOM
    u_best = rng.random(size)
    u_split = rng.random(size)
    out = np.where(u_split < 0.5,
                   int(MutationStrategy.SPOOKY_CURRENT),
                   int(MutationStrategy.SPOOKY_RANDOM))
    out = np.where(u_best < entangle_rate,
                   int(MutationStrategy.SPOOKY_BEST), out)
    return out.astype(np.int8)


def sample_f_local(rng: RngStream, size=None):
    """Local mutation factor: N(0, 0.33^2)."""
    return rng.normal(0.0, F_LOCAL_SCALE, size)


def sample_f_global(rng: RngStream, size=None):
    """Global mutation factor: equal-weight bimodal mixture of
    N(+0.5, 0.25^2) and N(-0.5, 0.25^2)."""
    if size is None:
        mode = F_GLOBAL_MODE if rng.random() < 0.5 else -F_GLOBAL_MODE
        return rng.normal(mode, F_GLOBAL_SCALE)
    modes = np.where(rng.random(size) < 0.5, F_GLOBAL_MODE, -F_GLOBAL_MODE)
    return rng.normal(modes, F_GLOBAL_SCALE)


def mutate(i: int, strategy: MutationStrategy, pop: Population, best_idx: int,
           rng: RngStream, bounds: BoundsBox,
           f_factor: Optional[float] = None,
           rand_index: Optional[int] = None) -> np.ndarray:
    """Mutant vector for individual i under the given strategy, clipped.

    SPOOKY_BEST:    X_best + F_local  * (X_i    - X_rand)
    SPOOKY_CURRENT: X_i    + F_global * (X_best - X_rand)
    SPOOKY_RANDOM:  X_rand + F_global * (X_i    - X_rand)   (one shared X_rand)

    X_rand is uniform over all indices except i. `f_factor` and `rand_index`
    override the internal draws (used by tests and the vectorized step).
    """
    n = pop.size
    if n < 3:
        raise ValueError("mutation needs a population of at least 3")
    if not 0 <= i < n:
        raise ValueError(f"individual index {i} out of range")
    if f_factor is None:
        if strategy is MutationStrategy.SPOOKY_BEST:
            f_factor = sample_f_local(rng)
        else:
            f_factor = sample_f_global(rng)
    if rand_index is None:
        r = int(rng.integers(0, n - 1))
        rand_index = r + 1 if r >= i else r
    xi = pop.positions[i]
    xb = pop.positions[best_idx]
    xr = pop.positions[rand_index]
    if strategy is MutationStrategy.SPOOKY_BEST:
        v = xb + f_factor * (xi - xr)
    elif strategy is MutationStrategy.SPOOKY_CURRENT:
        v = xi + f_factor * (xb - xr)
    elif strategy is MutationStrategy.SPOOKY_RANDOM:
        v = xr + f_factor * (xi - xr)
    else:
        raise ValueError(f"unknown strategy: {strategy!r}")
    return clip_to_bounds(v, bounds)


def _build_mutants(positions: np.ndarray, best_idx: int, var_idx: np.ndarray,
                   strategies: np.ndarray, f: np.ndarray,
                   rand_idx: np.ndarray) -> np.ndarray:
    """Vectorized mutation for the variation set (pre-clipping)."""
    xi = positions[var_idx]
    xr = positions[rand_idx]
    xb = positions[best_idx]
    f = f[:, None]
    v = np.empty_like(xi)
    b = strategies == int(MutationStrategy.SPOOKY_BEST)
    c = strategies == int(MutationStrategy.SPOOKY_CURRENT)
    r = strategies == int(MutationStrategy.SPOOKY_RANDOM)
    v[b] = xb + f[b] * (xi[b] - xr[b])
    v[c] = xi[c] + f[c] * (xb - xr[c])
    v[r] = xr[r] + f[r] * (xi[r] - xr[r])
    return v


def crossover_rate(rank, n: int, cr_floor: float = 0.33):
    """Rank-based crossover rate max((n-1-rank)/(n-1), cr_floor).

    Ranks are 0-based: the best individual (rank 0) gets CR = 1.0, the worst
    is floored at cr_floor. Accepts scalar or ndarray ranks.
    """
    if n < 2:
        raise ValueError("crossover rate needs a population of at least 2")
    raw = (n - 1 - np.asarray(rank)) / (n - 1)
    out = np.maximum(raw, cr_floor)
    return float(out) if out.ndim == 0 else out


def binomial_crossover(x: np.ndarray, v: np.ndarray, cr: float,
                       rng: RngStream) -> np.ndarray:
    """Component-wise mix: take v[n] where rand(0,1) <= cr, else x[n]."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if x.shape != v.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {v.shape}")
    return np.where(rng.random(x.shape) <= cr, v, x)


def greedy_select(x: np.ndarray, fx: float, u: np.ndarray, fu: float):
    """Keep the trial only on strict improvement; ties keep the incumbent."""
    if fu < fx:
        return u, fu
    return x, fx


def reinit_probability(g: int, g_max: int, p_final: float = 0.33,
                       g_final: float = 0.33) -> float:
    """Reinitialization probability exp(ln(p_final) / (g_final * g_max) * g).

    Decays from 1 at g=0 to p_final at g = g_final * g_max, continuing
    asymptotically toward zero beyond that point.
    """
    if g_max < 1:
        raise ValueError("g_max must be at least 1")
    if not 0 <= g <= g_max:
        raise ValueError(f"generation {g} outside [0, {g_max}]")
    return float(np.exp(np.log(p_final) / (g_final * g_max) * g))


def compute_elite_stats(pop: Population, elite_fraction: float = 0.25,
                        epsilon: float = 1e-12) -> EliteStats:
    """Mean and unbiased covariance of the top max(2, floor(frac*N)) members.

    The covariance gets an epsilon*I jitter so it admits a Cholesky
    factorization even when the elites are degenerate.
    """
    n = pop.size
    m = max(2, int(elite_fraction * n))
    if n < m:
        raise ValueError(
            f"covariance needs at least {m} individuals, population has {n}"
        )
    order = np.argsort(pop.fitness, kind="stable")
    elites = pop.positions[order[:m]]
    mu = elites.mean(axis=0)
    centered = elites - mu
    sigma = centered.T @ centered / (m - 1)
    sigma += epsilon * np.eye(pop.dim)
    return EliteStats(mu=mu, sigma=sigma, m=m, epsilon=epsilon)


def _reinit_batch(stats: EliteStats, bounds: BoundsBox, rng: RngStream,
                  noise_divisor: float, count: int):
    """Sample `count` replacement positions; never aborts.

    Returns (positions, fallback): fallback 0 used the jittered covariance
    as-is, 1 needed a stronger jitter (epsilon * 1e6), 2 fell back to
    independent per-dimension sampling from diag(sigma).
    """
    mu, sigma = stats.mu, stats.sigma
    d = mu.size
    z = rng.normal(size=(count, d))
    fallback = 0
    try:
        chol = np.linalg.cholesky(sigma)
        y = mu + z @ chol.T
    except np.linalg.LinAlgError:
        try:
            chol = np.linalg.cholesky(sigma + stats.epsilon * 1e6 * np.eye(d))
            y = mu + z @ chol.T
            fallback = 1
        except np.linalg.LinAlgError:
            y = mu + z * np.sqrt(np.maximum(np.diag(sigma), 0.0))
            fallback = 2
    delta = rng.normal(0.0, bounds.width / noise_divisor, size=(count, d))
    return clip_to_bounds(y + delta, bounds), fallback


def sample_reinit_position(stats: EliteStats, bounds: BoundsBox,
                           rng: RngStream,
                           noise_divisor: float = 20.0) -> np.ndarray:
    """One replacement position: N(mu, sigma) plus bounds-scaled noise,
    clipped into the box.

    The noise component is N(0, ((high-low)/noise_divisor)^2) per dimension.
    """
    positions, _ = _reinit_batch(stats, bounds, rng, noise_divisor, 1)
    return positions[0]


def step(objective, bounds: BoundsBox, pop: Population, cfg: QuasarConfig,
         rng: RngStream):
    """Advance one generation; returns (new_population, StepInfo).

    Order within a generation: (1) rank the population; (2) each of the
    floor(reinit_fraction * N) worst individuals is independently replaced
    with probability reinit_probability(g) by an elite-covariance sample
    (evaluated immediately, no crossover or greedy comparison); (3) every
    other individual runs strategy selection, mutation, rank-based binomial
    crossover and greedy selection against its trial. Crossover rates use
    the step-start ranking; mutation donors come from the post-reinit
    snapshot, and all trials are evaluated against it (batch-synchronous,
    so results do not depend on evaluation parallelism).

    Draw order (all on the coordinating thread): reinit Bernoullis, reinit
    Gaussians and noise, strategy selectors, local factors, global factors,
    donor indices, crossover matrix.
    """
    n, d = pop.size, pop.dim
    ranks = rank_population(pop)

    positions = pop.positions.copy()
    fitness = pop.fitness.copy()
    evals = 0

    # Worst slice, ordered best-to-worst, each member drawn independently.
    n_slice = int(cfg.reinit_fraction * n)
    order = np.argsort(ranks)
    slice_members = order[n - n_slice:] if n_slice > 0 else np.empty(0, dtype=int)
    p_reinit = reinit_probability(pop.generation, cfg.g_max,
                                  cfg.p_final, cfg.g_final)
    draws = rng.random(n_slice)
    chosen = slice_members[draws < p_reinit]
    fallback = 0
    if chosen.size:
        stats = compute_elite_stats(pop, cfg.elite_fraction, cfg.epsilon_jitter)
        new_pos, fallback = _reinit_batch(stats, bounds, rng,
                                          cfg.noise_divisor, chosen.size)
        new_fit = evaluate_rows(objective, new_pos)
        _require_finite(new_fit, pop.generation, chosen)
        positions[chosen] = new_pos
        fitness[chosen] = new_fit
        evals += chosen.size

    reinit_mask = np.zeros(n, dtype=bool)
    reinit_mask[chosen] = True
    var_idx = np.flatnonzero(~reinit_mask)
    m = var_idx.size

    best_idx = int(np.argmin(fitness))
    strategies = select_strategy(rng, cfg.entangle_rate, size=m)
    is_best = strategies == int(MutationStrategy.SPOOKY_BEST)
    f = np.empty(m)
    f[is_best] = sample_f_local(rng, size=int(is_best.sum()))
    f[~is_best] = sample_f_global(rng, size=int(m - is_best.sum()))
    r = rng.integers(0, n - 1, size=m)
    rand_idx = r + (r >= var_idx)

    mutants = clip_to_bounds(
        _build_mutants(positions, best_idx, var_idx, strategies, f, rand_idx),
        bounds,
    )
    cr = crossover_rate(ranks[var_idx], n, cfg.cr_floor)
    mix = rng.random((m, d)) <= cr[:, None]
    trials = np.where(mix, mutants, positions[var_idx])
    trial_fit = evaluate_rows(objective, trials)
    _require_finite(trial_fit, pop.generation, var_idx)
    evals += m

    accept = trial_fit < fitness[var_idx]
    winners = var_idx[accept]
    positions[winners] = trials[accept]
    fitness[winners] = trial_fit[accept]

    new_pop = Population(positions, fitness, pop.generation + 1,
                         pop.eval_count + evals)
    info = StepInfo(
        reinit_mask=reinit_mask,
        n_reinit=int(chosen.size),
        cholesky_fallback=fallback,
        strategy_counts=np.bincount(strategies.astype(int), minlength=3),
        n_accepted=int(accept.sum()),
    )
    return new_pop, info


def _require_finite(values: np.ndarray, generation: int, indices: np.ndarray):
    bad = ~np.isfinite(values)
    if bad.any():
        k = int(np.argmax(bad))
        raise ValueError(
            f"objective returned a non-finite value ({values[k]}) at "
            f"generation {generation} for individual {int(indices[k])}"
        )


def optimize(f, bounds: BoundsBox, cfg: Optional[QuasarConfig] = None) -> OptResult:
    """Minimize f over the box with QUASAR.

    Parameters
    ----------
    f : callable or ObjectiveFunction
        Function of a length-D vector returning a float (lower is better).
    bounds : BoundsBox
        Search box; every emitted position stays inside it.
    cfg : QuasarConfig, optional
        Algorithm constants; defaults throughout, population 10 * D.

    Returns
    -------
    OptResult
        Best-so-far position/fitness, error relative to the known optimum
        when available, the per-generation best-so-far trace, wall-clock
        runtime and the number of objective evaluations.

    The run is a pure function of (f, bounds, cfg) including cfg.seed: the
    same inputs reproduce the result bit for bit. Exactly g_max generations
    are executed; there is no early stopping and no polish step.
    """
    cfg = cfg or QuasarConfig()
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
        pop, _ = step(objective, bounds, pop, cfg, rng)
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
