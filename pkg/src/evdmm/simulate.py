"""Seedable samplers for MEV vectors with unit Frechet margins.

Random numbers come from numpy's Philox 4x64 counter-based generator.  Rows
are produced in fixed-size shards, and shard ``k`` draws from a stream keyed
by ``(seed, k)``, so the output depends only on ``(model, n, seed)`` and not
on how many workers generate it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InputError
from .tail_models import Comonotone, Independence, Logistic, M4, TailModel

__all__ = [
    "SimulationSpec",
    "sample",
    "frechet_cdf",
    "frechet_quantile",
    "SHARD_ROWS",
    "DEFAULT_MAX_CELLS",
]

SHARD_ROWS = 1 << 16
DEFAULT_MAX_CELLS = 200_000_000

_SUPPORTED = (Logistic, M4, Independence, Comonotone)


@dataclass(frozen=True)
class SimulationSpec:
    model: TailModel
    n: int
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.model, _SUPPORTED):
            raise InputError(f"no sampler for the {self.model.family!r} family")
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"sample count must be a positive integer, got {self.n!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InputError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "seed", int(self.seed))


def frechet_cdf(x):
    """Unit Frechet distribution function ``exp(-1/x)`` (zero for ``x <= 0``)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)


def frechet_quantile(u):
    """Inverse of :func:`frechet_cdf`: ``-1/log(u)`` for ``0 < u < 1``."""
    arr = np.asarray(u, dtype=float)
    if not np.all((arr > 0) & (arr < 1)):
        raise InputError("Frechet quantile needs probabilities strictly inside (0, 1)")
    out = -1.0 / np.log(arr)
    return float(out) if out.ndim == 0 else out


def _generator(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))


def _positive_stable_log(rng: np.random.Generator, theta: float, size: int) -> np.ndarray:
    """Log of positive stable variates with Laplace transform ``exp(-t^theta)``.

    Kanter's representation, evaluated in logs so small ``theta`` does not
    overflow.
    """
    if theta == 1.0:
        return np.zeros(size)
    u = rng.uniform(0.0, np.pi, size)
    w = rng.standard_exponential(size)
    return ((1.0 - theta) / theta * (np.log(np.sin((1.0 - theta) * u)) - np.log(w))
            + np.log(np.sin(theta * u)) - np.log(np.sin(u)) / theta)


def _draw(model: TailModel, rng: np.random.Generator, rows: int) -> np.ndarray:
    d = model.dimension
    if isinstance(model, Comonotone):
        z = 1.0 / rng.standard_exponential(rows)
        return np.repeat(z[:, np.newaxis], d, axis=1)
    if isinstance(model, Independence):
        return 1.0 / rng.standard_exponential((rows, d))
    if isinstance(model, Logistic):
        # X_j = (S / E_j)^theta, S positive stable, E_j iid unit exponential
        log_s = _positive_stable_log(rng, model.theta, rows)
        log_e = np.log(rng.standard_exponential((rows, d)))
        return np.exp(model.theta * (log_s[:, np.newaxis] - log_e))
    if isinstance(model, M4):
        z = 1.0 / rng.standard_exponential((rows, model.alpha.shape[0]))
        return np.max(z[:, :, np.newaxis] * model.alpha[np.newaxis, :, :], axis=1)
    raise InputError(f"no sampler for the {model.family!r} family")


def sample(spec: SimulationSpec, workers: int = 1,
           max_cells: int = DEFAULT_MAX_CELLS) -> np.ndarray:
    """Draw ``spec.n`` independent rows from the model's MEV law.

    Parameters
    ----------
    spec : SimulationSpec
    workers : int
        Threads used to fill shards; the result does not depend on it.
    max_cells : int
        Refuse requests with more than this many entries.

    Returns
    -------
    ndarray, shape (n, d)
        Strictly positive draws with unit Frechet margins.
    """
    d = spec.model.dimension
    if spec.n * d > max_cells:
        raise CapacityError(f"{spec.n} x {d} samples exceed the cap of {max_cells} entries")
    out = np.empty((spec.n, d))
    n_shards = math.ceil(spec.n / SHARD_ROWS)

    def fill(k: int) -> None:
        lo = k * SHARD_ROWS
        hi = min(lo + SHARD_ROWS, spec.n)
        out[lo:hi] = _draw(spec.model, _generator(spec.seed, k), hi - lo)

    if workers > 1 and n_shards > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(n_shards)))
    else:
        for k in range(n_shards):
            fill(k)
    # guard against underflow in extreme parameter corners
    np.maximum(out, np.finfo(float).tiny, out=out)
    return out
