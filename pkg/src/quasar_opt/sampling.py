"""Initial-population generators: Sobol (default), Latin hypercube, uniform."""

from __future__ import annotations

from enum import Enum
from typing import Optional

import numpy as np
from scipy.stats import qmc

from .core import BoundsBox, RngStream

# Size of the Joe-Kuo direction-number table shipped with scipy's Sobol engine.
SOBOL_MAX_DIM = 21201


class InitMethod(Enum):
    SOBOL = "sobol"
    LATIN_HYPERCUBE = "lhs"
    UNIFORM_RANDOM = "uniform"


def sobol_sample(n: int, bounds: BoundsBox, rng: Optional[RngStream] = None,
                 scramble: bool = False) -> np.ndarray:
    """First n Sobol points after the all-zeros point, scaled into the box.

    Points are emitted in Gray-code order starting at sequence index 1, so
    no row sits exactly on the lower corner; with ``scramble=False`` the
    output is independent of any seed. ``scramble=True`` applies a digital
    XOR shift drawn from ``rng`` (one 53-bit mask per dimension), which
    preserves the dyadic stratification structure.

    Coordinates lie in [low, high): the low edge is attainable, the high
    edge is not.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    d = bounds.dim
    if d > SOBOL_MAX_DIM:
        raise ValueError(
            f"Sobol direction numbers cover at most {SOBOL_MAX_DIM} "
            f"dimensions; got {d}"
        )
    engine = qmc.Sobol(d=d, scramble=False)
    engine.fast_forward(1)
    unit = engine.random(n)
    if scramble:
        if rng is None:
            raise ValueError("scrambling requires an rng")
        unit = _digital_shift(unit, rng)
    return bounds.low + unit * bounds.width


def _digital_shift(unit: np.ndarray, rng: RngStream) -> np.ndarray:
    """XOR every coordinate's 53-bit expansion with a per-dimension mask."""
    masks = rng.integers(0, 1 << 53, size=unit.shape[1]).astype(np.uint64)
    bits = (unit * float(1 << 53)).astype(np.uint64)
    return (bits ^ masks) / float(1 << 53)


def lhs_sample(n: int, bounds: BoundsBox, rng: RngStream) -> np.ndarray:
    """Latin hypercube: per dimension, one uniform point in each of n strata.

    Strata are permuted independently per dimension.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    d = bounds.dim
    unit = np.empty((n, d))
    for j in range(d):
        unit[:, j] = (rng.permutation(n) + rng.random(n)) / n
    return bounds.low + unit * bounds.width


def uniform_sample(n: int, bounds: BoundsBox, rng: RngStream) -> np.ndarray:
    """i.i.d. uniform points inside the box."""
    if n < 1:
        raise ValueError("need at least one sample")
    unit = rng.random((n, bounds.dim))
    return bounds.low + unit * bounds.width


def initial_population(method: InitMethod, n: int, bounds: BoundsBox,
                       rng: RngStream) -> np.ndarray:
    """Dispatch to the chosen generator. Sobol ignores rng (scramble off)."""
    if method is InitMethod.SOBOL:
        return sobol_sample(n, bounds)
    if method is InitMethod.LATIN_HYPERCUBE:
        return lhs_sample(n, bounds, rng)
    if method is InitMethod.UNIFORM_RANDOM:
        return uniform_sample(n, bounds, rng)
    raise ValueError(f"unknown init method: {method!r}")
