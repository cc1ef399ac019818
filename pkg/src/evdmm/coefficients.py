"""Max-min dependence coefficients of MEV vectors.

For a partition ``I_1, ..., I_p`` of the components and weights
``lam_1, ..., lam_p > 0`` the coefficient is the expected range

    R = E[ max_j F(M_j)^lam_j - min_j F(M_j)^lam_j ],   M_j = max_{i in I_j} X_i,

with ``F`` the unit Frechet cdf.  Writing the minimum as an alternating sum of
maxima turns ``R`` into a signed sum over the ``2^p - 1`` non-empty block
subsets ``T`` of the terms

    e(T) = E[ max_{j in T} F(M_j)^lam_j ] = l(w_T) / (1 + l(w_T)),

where ``w_T`` places ``1/lam_j`` on the components of block ``j in T``.

Subsets are encoded as integer masks (bit ``j`` selects block ``j``) and are
always enumerated in increasing mask order so results are reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError
from .partition import Partition, parse_partition
from .tail_models import (
    Logistic,
    M4,
    TailModel,
    eval_tail,
    extremal_coefficient,
    make_block_independent,
)

__all__ = [
    "Partition",
    "parse_partition",
    "CoefficientReport",
    "check_weights",
    "subset_masks",
    "as_mask",
    "inclusion_exclusion",
    "weighted_indicator",
    "e_term",
    "max_min_R",
    "max_min_R_unit",
    "subcollection_R",
    "closed_form_R",
    "bounds_R",
    "independent_blocks_upper_unit",
    "pairwise_madogram",
    "lambda_madogram_display",
    "comonotone_R",
]


def check_weights(lam, p: int) -> np.ndarray:
    """Validate a weight vector of length ``p``; ``None`` means all ones."""
    if lam is None:
        return np.ones(p)
    arr = np.atleast_1d(np.asarray(lam, dtype=float))
    if arr.ndim != 1 or arr.shape[0] != p:
        raise InputError(f"expected {p} weights (one per block), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise InputError("weights must be finite and strictly positive")
    return arr


def subset_masks(p: int) -> range:
    """Non-empty subsets of ``p`` blocks, as masks in increasing order."""
    return range(1, 1 << p)


def as_mask(subset, p: int) -> int:
    """Accept a mask or an iterable of 0-based block indices."""
    if isinstance(subset, (int, np.integer)):
        mask = int(subset)
    else:
        mask = 0
        for j in subset:
            j = int(j)
            if not 0 <= j < p:
                raise InputError(f"block index {j} out of range 0..{p - 1}")
            mask |= 1 << j
    if mask <= 0:
        raise InputError("subset of blocks must be non-empty")
    if mask >> p:
        raise InputError(f"subset mask {mask} refers to blocks beyond {p}")
    return mask


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def inclusion_exclusion(terms: Mapping[int, float], full_mask: int) -> float:
    """``terms[full] - sum_{T subset of full} (-1)^(|T|+1) terms[T]``.

    ``terms`` maps every non-empty sub-mask of ``full_mask`` to its expected
    maximum; the result is the expected range over the blocks in ``full_mask``.
    Summation is exactly rounded (``math.fsum``) to keep cancellation under
    control for many blocks.
    """
    parts = [terms[full_mask]]
    sub = full_mask
    subs = []
    while sub:
        subs.append(sub)
        sub = (sub - 1) & full_mask
    for t in reversed(subs):
        sign = 1.0 if _popcount(t) % 2 == 1 else -1.0
        parts.append(-sign * terms[t])
    return math.fsum(parts)


def weighted_indicator(partition: Partition, lam, subset) -> np.ndarray:
    """Vector with ``1/lam_j`` on the components of each block ``j`` in ``subset``."""
    lam = check_weights(lam, partition.p)
    mask = as_mask(subset, partition.p)
    w = np.zeros(partition.dimension)
    for j, block in enumerate(partition.blocks):
        if mask >> j & 1:
            w[list(block)] = 1.0 / lam[j]
    return w


def _check_model(model: TailModel, partition: Partition) -> None:
    if not isinstance(partition, Partition):
        raise InputError("expected a Partition")
    if model.dimension != partition.dimension:
        raise InputError(
            f"model dimension {model.dimension} does not match partition "
            f"dimension {partition.dimension}"
        )


def e_term(model: TailModel, partition: Partition, lam, subset) -> float:
    """Expected weighted maximum over the blocks in ``subset``: ``l(w)/(1 + l(w))``."""
    _check_model(model, partition)
    value = eval_tail(model, weighted_indicator(partition, lam, subset))
    return value / (1.0 + value)


def _all_e_terms(model, partition, lam) -> dict[int, float]:
    lam = check_weights(lam, partition.p)
    return {t: e_term(model, partition, lam, t) for t in subset_masks(partition.p)}


@dataclass(frozen=True)
class CoefficientReport:
    """Outcome of :func:`max_min_R`.

    Attributes
    ----------
    R : float
        The max-min coefficient.
    e_terms : dict
        ``mask -> e(T)`` for every non-empty subset of blocks.
    lower, upper : float
        Bounds from :func:`bounds_R`.
    model : TailModel
    partition : Partition
    lam : tuple of float
    """

    R: float
    e_terms: dict[int, float]
    lower: float
    upper: float
    model: TailModel
    partition: Partition
    lam: tuple[float, ...]

    def to_dict(self, digits: int | None = 10) -> dict:
        """JSON-ready mapping; masks become decimal strings (bit j = block j+1)."""
        fmt = (lambda v: float(f"{v:.{digits}g}")) if digits else float
        return {
            "R": fmt(self.R),
            "e_terms": {str(t): fmt(v) for t, v in sorted(self.e_terms.items())},
            "lower": fmt(self.lower),
            "upper": fmt(self.upper),
            "model": self.model.to_dict(),
            "partition": self.partition.to_list(),
            "lambda": [fmt(v) for v in self.lam],
        }

    def to_json(self, digits: int | None = 10) -> str:
        return json.dumps(self.to_dict(digits))


def max_min_R(model: TailModel, partition: Partition, lam=None,
              with_bounds: bool = True) -> CoefficientReport:
    """Exact max-min coefficient by inclusion-exclusion over block subsets.

    Parameters
    ----------
    model : TailModel
    partition : Partition
    lam : array_like, optional
        One positive weight per block (default: all ones).
    with_bounds : bool
        Also compute the lower/upper bounds (costs a second enumeration for
        the upper bound); when false both are NaN.

    Returns
    -------
    CoefficientReport
    """
    _check_model(model, partition)
    lam = check_weights(lam, partition.p)
    terms = _all_e_terms(model, partition, lam)
    r = inclusion_exclusion(terms, partition.full_mask)
    # the exact value is >= 0; rounding may leave a tiny negative residue
    r = max(r, 0.0)
    if with_bounds:
        lower, upper = bounds_R(model, partition, lam)
    else:
        lower = upper = math.nan
    return CoefficientReport(r, terms, lower, upper, model, partition, tuple(float(v) for v in lam))


def max_min_R_unit(model: TailModel, partition: Partition) -> float:
    """Coefficient at unit weights from extremal coefficients of block unions only."""
    _check_model(model, partition)
    terms = {}
    for t in subset_masks(partition.p):
        eps = extremal_coefficient(model, partition.union(t))
        terms[t] = eps / (1.0 + eps)
    return max(inclusion_exclusion(terms, partition.full_mask), 0.0)


def subcollection_R(model: TailModel, partition: Partition, lam, blocks: Iterable[int]) -> float:
    """Coefficient of the sub-vector made of the given blocks (0-based), with their weights.

    Only the subsets of ``blocks`` enter, so this equals the coefficient of the
    marginal MEV vector on the union of those blocks.
    """
    _check_model(model, partition)
    lam = check_weights(lam, partition.p)
    full = as_mask(blocks, partition.p)
    terms = {}
    sub = full
    while sub:
        terms[sub] = e_term(model, partition, lam, sub)
        sub = (sub - 1) & full
    return max(inclusion_exclusion(terms, full), 0.0)


def _scaled_power_sum(weights: np.ndarray, base: np.ndarray, theta: float) -> float:
    """``(sum weights * base^(1/theta))^theta`` with the largest base factored out."""
    top = base.max()
    return float(top * np.sum(weights * (base / top) ** (1.0 / theta)) ** theta)


def closed_form_R(model: TailModel, partition: Partition, lam=None) -> float:
    """Explicit alternating-sum formula for the logistic and M4 families.

    Uses ``R = sum_{T proper} (-1)^(|T|+1) / (1 + l_T) - (1 + (-1)^p) / (1 + l_full)``
    with ``l_T`` written out per family at block level, so it does not go
    through :func:`e_term` and serves as a cross-check of :func:`max_min_R`.
    """
    _check_model(model, partition)
    lam = check_weights(lam, partition.p)
    p = partition.p
    inv_lam = 1.0 / lam
    if isinstance(model, Logistic):
        sizes = np.array(partition.block_sizes(), dtype=float)

        def level(mask):
            sel = [j for j in range(p) if mask >> j & 1]
            return _scaled_power_sum(sizes[sel], inv_lam[sel], model.theta)
    elif isinstance(model, M4):
        # per-signature maximum coefficient within each block, shape (signatures, p)
        block_max = np.stack([model.alpha[:, list(b)].max(axis=1) for b in partition.blocks], axis=1)
        scaled = block_max * inv_lam

        def level(mask):
            sel = [j for j in range(p) if mask >> j & 1]
            return float(np.sum(scaled[:, sel].max(axis=1)))
    else:
        raise InputError(f"no closed form for the {model.family!r} family")
    full = partition.full_mask
    parts = []
    for t in range(1, full):
        sign = 1.0 if _popcount(t) % 2 == 1 else -1.0
        parts.append(sign / (1.0 + level(t)))
    parts.append(-(1.0 + (-1.0) ** p) / (1.0 + level(full)))
    return max(math.fsum(parts), 0.0)


def _lower_bound(model: TailModel, partition: Partition, lam: np.ndarray) -> float:
    # Block maxima coupled comonotonically with their true laws: F(M_j)^lam_j is
    # U^(lam_j / eps_j) for one uniform U, giving the smallest possible range.
    eps = np.array([extremal_coefficient(model, b) for b in partition.blocks])
    rate = lam / eps
    return max(float(1.0 / (1.0 + rate.min()) - 1.0 / (1.0 + rate.max())), 0.0)


def bounds_R(model: TailModel, partition: Partition, lam=None) -> tuple[float, float]:
    """Lower and upper bounds for the coefficient under the same block laws.

    The upper bound is the coefficient of the model with mutually independent
    blocks (:func:`make_block_independent`).  The lower bound couples the
    block maxima comonotonically; with singleton blocks it is
    ``1/(1 + min lam) - 1/(1 + max lam)`` and it vanishes at unit weights
    whenever all blocks share the same extremal coefficient.
    """
    _check_model(model, partition)
    lam = check_weights(lam, partition.p)
    lower = _lower_bound(model, partition, lam)
    hat = make_block_independent(model, partition)
    upper = inclusion_exclusion(_all_e_terms(hat, partition, lam), partition.full_mask)
    return lower, max(upper, 0.0)


def independent_blocks_upper_unit(model: TailModel, partition: Partition) -> float:
    """Upper bound at unit weights from the block extremal coefficients alone.

    With independent blocks the extremal coefficient of a union of blocks is
    the sum of the block coefficients.
    """
    _check_model(model, partition)
    eps = [extremal_coefficient(model, b) for b in partition.blocks]
    terms = {}
    for t in subset_masks(partition.p):
        s = math.fsum(eps[j] for j in range(partition.p) if t >> j & 1)
        terms[t] = s / (1.0 + s)
    return max(inclusion_exclusion(terms, partition.full_mask), 0.0)


def pairwise_madogram(model: TailModel, partition: Partition, lam=None) -> float:
    """Generalized madogram of two blocks: half the coefficient."""
    if partition.p != 2:
        raise InputError(f"madogram needs exactly two blocks, got {partition.p}")
    return 0.5 * max_min_R(model, partition, lam, with_bounds=False).R


def lambda_madogram_display(model: TailModel, weight: float) -> float:
    """Bivariate lambda-madogram via ``l(1/w, 1/(1-w))`` for ``0 < w < 1``.

    Equals ``pairwise_madogram(model, singletons, (w, 1 - w))``.
    """
    if model.dimension != 2:
        raise InputError("the lambda-madogram formula is bivariate")
    w = float(weight)
    if not 0.0 < w < 1.0:
        raise InputError("weight must lie in (0, 1)")
    val = eval_tail(model, [1.0 / w, 1.0 / (1.0 - w)])
    return val / (1.0 + val) - 1.5 / ((1.0 + w) * (2.0 - w))


def comonotone_R(lam) -> float:
    """Coefficient of a fully comonotone vector: ``1/(1 + min lam) - 1/(1 + max lam)``."""
    arr = np.atleast_1d(np.asarray(lam, dtype=float))
    arr = check_weights(arr, arr.shape[0])
    return 1.0 / (1.0 + arr.min()) - 1.0 / (1.0 + arr.max())
