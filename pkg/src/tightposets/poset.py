"""Posets of index sets, stored as sorted bitmask lists.

Index sets are bitmasks over ``{1..k}``: bit ``i-1`` stands for index ``i``.
The order is inclusion and is derived on demand, never stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ValidationError
from .subsetsum import mask_to_indices, popcount

__all__ = [
    "Poset",
    "mask_from_indices",
    "indices_from_mask",
    "set_sort_key",
]

MAX_K = 64


def mask_from_indices(indices: Iterable[int]) -> int:
    """Bitmask for a collection of 1-based indices."""
    m = 0
    for i in indices:
        if isinstance(i, bool) or not isinstance(i, int) or i < 1 or i > MAX_K:
            raise ValidationError(f"index {i!r} is not in 1..{MAX_K}")
        m |= 1 << (i - 1)
    return m


def indices_from_mask(mask: int) -> list[int]:
    """Sorted 1-based indices of a bitmask."""
    return [i + 1 for i in mask_to_indices(mask)]


def set_sort_key(mask: int) -> tuple:
    """Order by size, then lexicographically on the sorted index list."""
    return (popcount(mask), indices_from_mask(mask))


@dataclass(frozen=True)
class Poset:
    """A family of subsets of ``{1..k}`` that always contains the empty set."""

    k: int
    sets: tuple

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0 or self.k > MAX_K:
            raise ValidationError(f"k must be in 0..{MAX_K}, got {self.k!r}")
        full = (1 << self.k) - 1
        masks = set()
        for m in self.sets:
            if not isinstance(m, int) or m < 0 or m & ~full:
                raise ValidationError(f"set {m!r} is not a subset of 1..{self.k}")
            masks.add(m)
        masks.add(0)
        object.__setattr__(self, "sets", tuple(sorted(masks, key=set_sort_key)))
        object.__setattr__(self, "_members", frozenset(masks))

    @classmethod
    def from_index_sets(cls, k: int, sets: Iterable[Sequence[int]]) -> "Poset":
        masks = []
        for s in sets:
            m = mask_from_indices(s)
            if len(set(s)) != len(list(s)):
                raise ValidationError(f"repeated index in {list(s)!r}")
            masks.append(m)
        return cls(k, tuple(masks))

    def __contains__(self, mask) -> bool:
        return mask in self._members

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def full(self) -> int:
        return (1 << self.k) - 1

    @property
    def nonempty(self) -> tuple:
        return tuple(m for m in self.sets if m)

    def index_sets(self) -> list[list[int]]:
        return [indices_from_mask(m) for m in self.sets]

    def to_json(self) -> dict:
        return {"k": self.k, "sets": self.index_sets()}

    @classmethod
    def from_json(cls, obj: dict) -> "Poset":
        try:
            k = obj["k"]
            sets = obj["sets"]
        except (KeyError, TypeError) as exc:
            raise ValidationError("poset JSON needs 'k' and 'sets'") from exc
        if not isinstance(k, int) or isinstance(k, bool):
            raise ValidationError("poset 'k' must be an integer")
        for s in sets:
            if any(i > k for i in s if isinstance(i, int)):
                raise ValidationError(f"set {s!r} uses an index above k={k}")
        return cls.from_index_sets(k, sets)

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Apply ``i -> perm[i-1]`` (1-based permutation) to every set."""
        if sorted(perm) != list(range(1, self.k + 1)):
            raise ValidationError("relabel needs a permutation of 1..k")
        out = []
        for m in self.sets:
            out.append(mask_from_indices(perm[i - 1] for i in indices_from_mask(m)))
        return Poset(self.k, tuple(out))

    def __str__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.index_sets())
        return f"Poset(k={self.k}: {body})"
