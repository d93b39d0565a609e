"""Evaluation statistics: GMERF, Friedman rank sums, Wilcoxon, runtime ratios.

GMERF (geometric mean error reduction factor) is the geometric mean of
per-trial error ratios comparison/reference; values above 1 mean the
reference algorithm achieved lower errors. All geometric means are computed
in log space. Final errors are floored at ERROR_FLOOR before forming ratios
so exact-zero errors stay well defined; callers should surface when the
floor was applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import chi2, norm, rankdata, t as t_dist

ERROR_FLOOR = 1e-12


def _checked(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a nonempty 1-D array")
    if not np.all(np.isfinite(arr)):
        bad = int(np.argmax(~np.isfinite(arr)))
        raise ValueError(f"{name}[{bad}] is not finite: {arr[bad]}")
    return arr


def _log_ratios(comparison_errors, reference_errors,
                floor: float = ERROR_FLOOR) -> np.ndarray:
    comp = _checked(comparison_errors, "comparison_errors")
    ref = _checked(reference_errors, "reference_errors")
    if comp.size != ref.size:
        raise ValueError(
            f"error vectors must align: {comp.size} vs {ref.size} trials"
        )
    return np.log(np.maximum(comp, floor)) - np.log(np.maximum(ref, floor))


def gmerf(comparison_errors, reference_errors,
          floor: float = ERROR_FLOOR) -> float:
    """Geometric mean of per-trial ratios comparison/reference."""
    return float(np.exp(np.mean(_log_ratios(comparison_errors,
                                            reference_errors, floor))))


def gmerf_overall(per_scenario) -> float:
    """Geometric mean of per-scenario GMERF values."""
    vals = _checked(per_scenario, "per_scenario")
    if np.any(vals <= 0):
        raise ValueError("GMERF values must be positive")
    return float(np.exp(np.mean(np.log(vals))))


def gmerf_ci(comparison_errors, reference_errors, level: float = 0.95,
             floor: float = ERROR_FLOOR) -> Tuple[float, float]:
    """Two-sided t-interval on the geometric mean ratio.

    Built on the mean of log ratios and exponentiated, so it always
    straddles the point GMERF; constant ratios give a zero-width interval.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must be in (0, 1)")
    logs = _log_ratios(comparison_errors, reference_errors, floor)
    n = logs.size
    if n < 2:
        raise ValueError("confidence interval needs at least 2 trials")
    mean = logs.mean()
    se = logs.std(ddof=1) / np.sqrt(n)
    half = t_dist.ppf(0.5 + level / 2.0, df=n - 1) * se
    return float(np.exp(mean - half)), float(np.exp(mean + half))


@dataclass(frozen=True)
class FriedmanResult:
    rank_sums: np.ndarray   # per algorithm, aligned with input columns
    statistic: float
    p_value: float


def friedman_rank_sums(median_errors) -> FriedmanResult:
    """Friedman test over a scenarios-by-algorithms matrix of median errors.

    Per scenario, algorithms get ranks 1..A (average ranks on ties, best =
    lowest error = rank 1); rank sums accumulate across scenarios. The
    chi-square statistic uses the standard tie correction and A-1 degrees
    of freedom. A lower rank sum indicates better overall performance.
    """
    m = np.asarray(median_errors, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 2:
        raise ValueError("need a (scenarios, algorithms>=2) matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("median errors must be finite")
    s, a = m.shape
    ranks = np.apply_along_axis(rankdata, 1, m)
    rank_sums = ranks.sum(axis=0)

    stat = (12.0 / (s * a * (a + 1))) * np.sum(rank_sums ** 2) - 3.0 * s * (a + 1)
    # Tie correction: 1 - sum(t^3 - t) / (s * a * (a^2 - 1)).
    ties = 0.0
    for row in ranks:
        _, counts = np.unique(row, return_counts=True)
        ties += np.sum(counts.astype(float) ** 3 - counts)
    c = 1.0 - ties / (s * a * (a * a - 1))
    if c <= 0:
        # Every scenario fully tied: no evidence of any difference.
        return FriedmanResult(rank_sums, 0.0, 1.0)
    stat /= c
    p = float(chi2.sf(stat, df=a - 1))
    return FriedmanResult(rank_sums, float(stat), p)


def wilcoxon_signed_rank(x, y) -> Tuple[float, float]:
    """Paired two-sided Wilcoxon signed-rank test, normal approximation.

    Zero differences are dropped; at least 5 nonzero pairs are required.
    The statistic is min(W+, W-); the p-value uses the tie-corrected
    variance and a 0.5 continuity correction toward the mean.
    """
    xa = _checked(x, "x")
    ya = _checked(y, "y")
    if xa.size != ya.size:
        raise ValueError("paired samples must have equal length")
    d = xa - ya
    d = d[d != 0.0]
    n = d.size
    if n == 0:
        raise ValueError("degenerate test: all paired differences are zero")
    if n < 5:
        raise ValueError(
            f"need at least 5 nonzero differences, got {n}"
        )
    ranks = rankdata(np.abs(d))
    w_plus = ranks[d > 0].sum()
    w_minus = ranks[d < 0].sum()
    statistic = min(w_plus, w_minus)

    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, counts = np.unique(ranks, return_counts=True)
    var -= np.sum(counts.astype(float) ** 3 - counts) / 48.0
    if var <= 0:
        raise ValueError("degenerate test: zero variance after ties")
    z = (statistic - mean + 0.5) / np.sqrt(var)
    p = float(min(2.0 * norm.cdf(z), 1.0))
    return float(statistic), p


@dataclass(frozen=True)
class RuntimeRatios:
    """Run-time comparison grouped by a label (dimension or sample size).

    ratio_of_means[g] divides the groups' mean run times; paired_mean[g] is
    the mean of per-trial ratios within the group; overall averages the
    per-group paired means.
    """

    ratio_of_means: Dict[str, float]
    paired_mean: Dict[str, float]
    overall: float


def runtime_ratios(times_comparison, times_reference, groups) -> RuntimeRatios:
    """Per-group and overall run-time ratios comparison/reference.

    All three arguments align per trial; times must be positive.
    """
    tc = _checked(times_comparison, "times_comparison")
    tr = _checked(times_reference, "times_reference")
    labels = np.asarray(groups)
    if not (tc.size == tr.size == labels.size):
        raise ValueError("times and groups must align")
    if np.any(tc <= 0) or np.any(tr <= 0):
        raise ValueError("run times must be positive")
    ratio_of_means: Dict[str, float] = {}
    paired_mean: Dict[str, float] = {}
    for g in dict.fromkeys(labels.tolist()):  # first-appearance order
        sel = labels == g
        ratio_of_means[str(g)] = float(tc[sel].mean() / tr[sel].mean())
        paired_mean[str(g)] = float(np.mean(tc[sel] / tr[sel]))
    overall = float(np.mean(list(paired_mean.values())))
    return RuntimeRatios(ratio_of_means, paired_mean, overall)


@dataclass
class ScenarioResults:
    """Aligned per-trial results for one (function, dim, pop) cell.

    Error and runtime vectors are aligned by trial index across algorithms
    and must share one common length.
    """

    function: str
    dim: int
    pop: int
    errors: Dict[str, np.ndarray]
    runtimes: Dict[str, np.ndarray]

    def __post_init__(self):
        lengths = {len(v) for v in self.errors.values()}
        lengths |= {len(v) for v in self.runtimes.values()}
        if len(lengths) != 1 or lengths.pop() < 1:
            raise ValueError(
                f"per-trial vectors for {self.function}/D={self.dim}/"
                f"N={self.pop} must share one nonzero length"
            )

    @property
    def n_trials(self) -> int:
        return len(next(iter(self.errors.values())))


@dataclass
class ScenarioSummary:
    """Aggregated statistics for one (function, dim, pop) cell."""

    function: str
    dim: int
    pop: int
    n_trials: int
    gm_error: Dict[str, float]                      # per algorithm
    mean_runtime: Dict[str, float]                  # per algorithm
    gmerf: Dict[str, float] = field(default_factory=dict)       # per comparison
    gmerf_ci: Dict[str, List[float]] = field(default_factory=dict)
    p_error: Dict[str, Optional[float]] = field(default_factory=dict)
    p_runtime: Dict[str, Optional[float]] = field(default_factory=dict)
    error_floor_applied: bool = False

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "dim": self.dim,
            "pop": self.pop,
            "n_trials": self.n_trials,
            "gm_error": self.gm_error,
            "mean_runtime": self.mean_runtime,
            "gmerf": self.gmerf,
            "gmerf_ci": self.gmerf_ci,
            "p_error": self.p_error,
            "p_runtime": self.p_runtime,
            "error_floor_applied": self.error_floor_applied,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioSummary":
        return cls(**d)


@dataclass
class SummaryTable:
    """Full experiment summary: per-scenario stats plus overall aggregates."""

    algorithms: List[str]
    reference: Optional[str]
    scenarios: List[ScenarioSummary]
    rank_sums: Dict[str, float]
    friedman_statistic: Optional[float]
    friedman_p: Optional[float]
    gmerf_overall: Dict[str, float]
    gmerf_overall_ci: Dict[str, List[float]]
    runtime_ratio_by_dim: Dict[str, Dict[str, float]]
    runtime_ratio_by_pop: Dict[str, Dict[str, float]]
    runtime_ratio_overall: Dict[str, float]
    n_failed_trials: int = 0

    def to_dict(self) -> dict:
        return {
            "algorithms": self.algorithms,
            "reference": self.reference,
            "scenarios": [s.to_dict() for s in self.scenarios],
            "rank_sums": self.rank_sums,
            "friedman_statistic": self.friedman_statistic,
            "friedman_p": self.friedman_p,
            "gmerf_overall": self.gmerf_overall,
            "gmerf_overall_ci": self.gmerf_overall_ci,
            "runtime_ratio_by_dim": self.runtime_ratio_by_dim,
            "runtime_ratio_by_pop": self.runtime_ratio_by_pop,
            "runtime_ratio_overall": self.runtime_ratio_overall,
            "n_failed_trials": self.n_failed_trials,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SummaryTable":
        d = dict(d)
        d["scenarios"] = [ScenarioSummary.from_dict(s) for s in d["scenarios"]]
        return cls(**d)
