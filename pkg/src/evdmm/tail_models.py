"""Tail dependence functions of multivariate extreme value distributions.

A tail dependence function ``l`` on ``[0, inf)^d`` determines an MEV law with
unit Frechet margins through ``G(z) = exp(-l(1/z_1, ..., 1/z_d))``.  Every
``l`` here is homogeneous of order one and lies between ``max(x)`` (total
dependence) and ``sum(x)`` (independence).

Models are immutable; evaluation is a pure function of the model and input.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .errors import InputError
from .partition import Partition

__all__ = [
    "TailModel",
    "Logistic",
    "M4",
    "Independence",
    "Comonotone",
    "BlockIndependent",
    "eval_tail",
    "extremal_coefficient",
    "make_block_independent",
    "model_from_dict",
    "load_m4_csv",
]


class TailModel:
    """Base class; subclasses implement ``_evaluate`` on a validated vector."""

    family: str = ""
    dimension: int

    def __call__(self, x) -> float:
        return eval_tail(self, x)

    def _evaluate(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def _parameters(self) -> dict[str, Any]:
        return {}

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready descriptor ``{family, dimension, parameters}``."""
        return {"family": self.family, "dimension": self.dimension,
                "parameters": self._parameters()}


def _check_dimension(d) -> int:
    if int(d) != d or d < 1:
        raise InputError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class Logistic(TailModel):
    """Symmetric logistic model ``l(x) = (sum x_j^(1/theta))^theta``, ``0 < theta <= 1``."""

    theta: float
    dimension: int
    family: str = field(default="logistic", init=False, repr=False)

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 < theta <= 1.0):
            raise InputError(f"logistic theta must lie in (0, 1], got {self.theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "dimension", _check_dimension(self.dimension))

    def _evaluate(self, x):
        top = x.max()
        if top == 0.0:
            return 0.0
        # max-factoring keeps (x/top)^(1/theta) in [0, 1] for tiny theta
        return float(top * np.sum((x / top) ** (1.0 / self.theta)) ** self.theta)

    def _parameters(self):
        return {"theta": self.theta}


@dataclass(frozen=True)
class Independence(TailModel):
    """Independent margins: ``l(x) = sum(x)``."""

    dimension: int
    family: str = field(default="independence", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", _check_dimension(self.dimension))

    def _evaluate(self, x):
        return float(np.sum(x))


@dataclass(frozen=True)
class Comonotone(TailModel):
    """Totally dependent margins: ``l(x) = max(x)``."""

    dimension: int
    family: str = field(default="comonotone", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", _check_dimension(self.dimension))

    def _evaluate(self, x):
        return float(x.max())


@dataclass(frozen=True, eq=False)
class M4(TailModel):
    """Multivariate maxima of moving maxima, truncated to a finite signature set.

    ``alpha`` has one row per signature ``s`` (an ``(l, k)`` pair of the
    moving-maxima representation) and one column per component, and
    ``l(x) = sum_s max_j alpha[s, j] * x_j``.  Each column must sum to one so
    the margins stay unit Frechet.

    Parameters
    ----------
    alpha : array_like, shape (n_signatures, d)
        Non-negative coefficients.
    signatures : sequence of str, optional
        Labels for the rows, kept for serialization.  Defaults to ``"0", "1", ...``.
    """

    alpha: np.ndarray
    signatures: tuple[str, ...] | None = None
    family: str = field(default="m4", init=False, repr=False)

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        if alpha.ndim == 1:
            alpha = alpha[np.newaxis, :]
        if alpha.ndim != 2 or alpha.size == 0:
            raise InputError("M4 alpha must be a non-empty (signatures x components) array")
        if not np.all(np.isfinite(alpha)):
            raise InputError("M4 alpha must be finite")
        if np.any(alpha < 0):
            raise InputError("M4 alpha must be non-negative")
        col_sums = alpha.sum(axis=0)
        if not np.allclose(col_sums, 1.0, rtol=1e-9, atol=0.0):
            bad = int(np.argmax(np.abs(col_sums - 1.0)))
            raise InputError(
                f"M4 alpha column {bad + 1} sums to {col_sums[bad]!r}; "
                "every component's coefficients must sum to 1"
            )
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        sigs = self.signatures
        if sigs is None:
            sigs = tuple(str(s) for s in range(alpha.shape[0]))
        else:
            sigs = tuple(str(s) for s in sigs)
            if len(sigs) != alpha.shape[0]:
                raise InputError("one signature label per alpha row is required")
        object.__setattr__(self, "signatures", sigs)

    @property
    def dimension(self) -> int:  # type: ignore[override]
        return self.alpha.shape[1]

    def __eq__(self, other):
        return (isinstance(other, M4) and self.signatures == other.signatures
                and np.array_equal(self.alpha, other.alpha))

    def __hash__(self):
        return hash((self.signatures, self.alpha.tobytes()))

    def _evaluate(self, x):
        return float(np.sum(np.max(self.alpha * x, axis=1)))

    def _parameters(self):
        return {"signatures": list(self.signatures), "alpha": self.alpha.tolist()}


@dataclass(frozen=True)
class BlockIndependent(TailModel):
    """``base`` with its blocks made mutually independent.

    ``l(x) = sum_j base(x restricted to block j)``; within each block the law is
    that of ``base``.
    """

    base: TailModel
    partition: Partition
    family: str = field(default="block_independent", init=False, repr=False)

    def __post_init__(self):
        if self.partition.dimension != self.base.dimension:
            raise InputError(
                f"partition covers {self.partition.dimension} components, "
                f"model has {self.base.dimension}"
            )

    @property
    def dimension(self) -> int:  # type: ignore[override]
        return self.base.dimension

    def _evaluate(self, x):
        total = 0.0
        for block in self.partition.blocks:
            masked = np.zeros_like(x)
            idx = list(block)
            masked[idx] = x[idx]
            total += self.base._evaluate(masked)
        return total

    def _parameters(self):
        return {"base": self.base.to_dict(), "partition": self.partition.to_list()}


def _as_point(model: TailModel, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != model.dimension:
        raise InputError(
            f"expected a vector of length {model.dimension}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InputError("tail function arguments must be finite")
    if np.any(arr < 0):
        raise InputError("tail function arguments must be non-negative")
    return arr


def eval_tail(model: TailModel, x) -> float:
    """Evaluate the tail dependence function ``l(x)``.

    Parameters
    ----------
    model : TailModel
    x : array_like, shape (d,)
        Non-negative finite coordinates.

    Returns
    -------
    float
        ``l(x)``, with ``max(x) <= l(x) <= sum(x)``; zero at the origin.
    """
    arr = _as_point(model, x)
    if not arr.any():
        return 0.0
    return model._evaluate(arr)


def extremal_coefficient(model: TailModel, subset: Iterable[int]) -> float:
    """Extremal coefficient of the sub-vector with 0-based indices ``subset``.

    This is ``l`` at the indicator vector of ``subset``; it lies in ``[1, |S|]``.
    """
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise InputError("extremal coefficient needs a non-empty subset")
    if idx[0] < 0 or idx[-1] >= model.dimension:
        raise InputError(f"subset indices must lie in 0..{model.dimension - 1}")
    indicator = np.zeros(model.dimension)
    indicator[idx] = 1.0
    return model._evaluate(indicator)


def make_block_independent(model: TailModel, partition: Partition) -> BlockIndependent:
    """Model with the same within-block laws and independent blocks."""
    if not isinstance(partition, Partition):
        raise InputError("make_block_independent needs a Partition")
    return BlockIndependent(model, partition)


def model_from_dict(desc: dict[str, Any]) -> TailModel:
    """Rebuild a model from :meth:`TailModel.to_dict` output."""
    try:
        family = desc["family"]
        params = desc.get("parameters") or {}
        dim = desc.get("dimension")
        if family == "logistic":
            return Logistic(params["theta"], dim)
        if family == "independence":
            return Independence(dim)
        if family == "comonotone":
            return Comonotone(dim)
        if family == "m4":
            model = M4(params["alpha"], params.get("signatures"))
            if dim is not None and dim != model.dimension:
                raise InputError("M4 dimension does not match alpha")
            return model
        if family == "block_independent":
            base = model_from_dict(params["base"])
            blocks = [[i - 1 for i in b] for b in params["partition"]]
            return BlockIndependent(base, Partition(blocks, base.dimension))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed model descriptor: {exc}") from None
    raise InputError(f"unknown model family {family!r}")


def load_m4_csv(path) -> M4:
    """Read M4 coefficients from CSV with columns ``signature_id, component_index, alpha``.

    ``component_index`` is 1-based.  Missing (signature, component) pairs are zero.
    """
    entries: list[tuple[str, int, float]] = []
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            required = {"signature_id", "component_index", "alpha"}
            if reader.fieldnames is None or not required <= set(reader.fieldnames):
                raise InputError(f"{path}: expected columns {sorted(required)}")
            for row in reader:
                try:
                    entries.append((row["signature_id"].strip(),
                                    int(row["component_index"]), float(row["alpha"])))
                except ValueError as exc:
                    raise InputError(f"{path}: bad row {row}: {exc}") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not entries:
        raise InputError(f"{path}: no coefficients")
    signatures: list[str] = []
    for sig, _, _ in entries:
        if sig not in signatures:
            signatures.append(sig)
    d = max(j for _, j, _ in entries)
    if min(j for _, j, _ in entries) < 1:
        raise InputError(f"{path}: component_index is 1-based")
    alpha = np.zeros((len(signatures), d))
    row_of = {s: k for k, s in enumerate(signatures)}
    for sig, j, a in entries:
        alpha[row_of[sig], j - 1] += a
    return M4(alpha, signatures)


def random_m4(rng: np.random.Generator, dimension: int, n_signatures: int,
              sparsity: float = 0.0) -> M4:
    """Random M4 coefficients with normalized columns (handy for tests and demos)."""
    alpha = rng.exponential(size=(n_signatures, dimension))
    if sparsity > 0:
        alpha *= rng.random(alpha.shape) >= sparsity
        empty = alpha.sum(axis=0) == 0
        alpha[0, empty] = 1.0
    return M4(alpha / alpha.sum(axis=0))
