"""Ordered partitions of component indices into blocks."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError, InputError

DEFAULT_MAX_BLOCKS = 20


def max_blocks() -> int:
    """Upper limit on the number of blocks, overridable through ``EVDMM_MAX_P``."""
    raw = os.environ.get("EVDMM_MAX_P")
    if raw is None:
        return DEFAULT_MAX_BLOCKS
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"EVDMM_MAX_P must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("EVDMM_MAX_P must be positive")
    return value


@dataclass(frozen=True)
class Partition:
    """Blocks ``I_1, ..., I_p`` of 0-based component indices covering ``range(dimension)``.

    Block order is significant: weights and subset masks refer to blocks by
    position (bit ``j`` of a mask selects block ``j``).
    """

    blocks: tuple[tuple[int, ...], ...]
    dimension: int

    def __init__(self, blocks: Iterable[Iterable[int]], dimension: int | None = None):
        normalized = tuple(tuple(int(i) for i in block) for block in blocks)
        if not normalized:
            raise InputError("partition needs at least one block")
        if any(len(b) == 0 for b in normalized):
            raise InputError("partition blocks must be non-empty")
        flat = [i for b in normalized for i in b]
        if len(set(flat)) != len(flat):
            raise InputError("partition blocks must be disjoint")
        if dimension is None:
            dimension = max(flat) + 1
        if sorted(flat) != list(range(dimension)):
            raise InputError(f"partition blocks must cover 0..{dimension - 1} exactly")
        if len(normalized) > max_blocks():
            raise CapacityError(
                f"{len(normalized)} blocks exceed the limit of {max_blocks()} "
                "(2^p subsets are enumerated; set EVDMM_MAX_P to override)"
            )
        object.__setattr__(self, "blocks", normalized)
        object.__setattr__(self, "dimension", int(dimension))

    @classmethod
    def singletons(cls, dimension: int) -> Partition:
        return cls([[i] for i in range(dimension)], dimension)

    @property
    def p(self) -> int:
        return len(self.blocks)

    @property
    def full_mask(self) -> int:
        return (1 << self.p) - 1

    def __len__(self) -> int:
        return self.p

    def __iter__(self):
        return iter(self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def union(self, mask: int) -> tuple[int, ...]:
        """Sorted component indices of the blocks selected by ``mask``."""
        return tuple(sorted(i for j, b in enumerate(self.blocks) if mask >> j & 1 for i in b))

    def to_list(self, one_based: bool = True) -> list[list[int]]:
        shift = 1 if one_based else 0
        return [[i + shift for i in b] for b in self.blocks]

    def format(self, names: Sequence[str] | None = None) -> str:
        """Inverse of :func:`parse_partition`."""
        if names is None:
            return "|".join(",".join(str(i + 1) for i in b) for b in self.blocks)
        return "|".join(",".join(names[i] for i in b) for b in self.blocks)


def parse_partition(text: str, column_names: Sequence[str] | None = None,
                    dimension: int | None = None) -> Partition:
    """Parse the block grammar ``"i,j,...|k,..."``.

    Items are either 1-based indices or column names; mixing both kinds in a
    single string is rejected.

    >>> parse_partition("1,2|3").blocks
    ((0, 1), (2,))
    >>> parse_partition("a|b,c", column_names=["a", "b", "c"]).blocks
    ((0,), (1, 2))
    """
    if not text or not text.strip():
        raise InputError("empty group specification")
    raw_blocks = [[item.strip() for item in chunk.split(",")] for chunk in text.split("|")]
    if any(item == "" for block in raw_blocks for item in block):
        raise InputError(f"malformed group specification {text!r}")
    items = [item for block in raw_blocks for item in block]
    numeric = [item.isdigit() for item in items]
    if all(numeric):
        blocks = [[int(item) - 1 for item in block] for block in raw_blocks]
        if any(i < 0 for b in blocks for i in b):
            raise InputError("group indices are 1-based")
        if column_names is not None and dimension is None:
            dimension = len(column_names)
    elif not any(numeric):
        if column_names is None:
            raise InputError("column names in groups require named columns")
        lookup = {name: k for k, name in enumerate(column_names)}
        missing = [item for item in items if item not in lookup]
        if missing:
            raise InputError(f"unknown column name(s): {', '.join(missing)}")
        blocks = [[lookup[item] for item in block] for block in raw_blocks]
        if dimension is None:
            dimension = len(column_names)
    else:
        raise InputError("groups must use either indices or column names, not both")
    return Partition(blocks, dimension)
