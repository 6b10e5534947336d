"""Immutable edge sets backed by integer bitmasks.

Edge ids are small non-negative integers; a set is the integer whose bit i
is set iff edge i is in the set.  All operations return new EdgeSet values,
and iteration is always in ascending id order, which is what makes every
"pick an arbitrary edge" step in the algorithms deterministic.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class EdgeSet:
    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        if mask < 0:
            raise ValueError("edge set mask must be non-negative")
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("EdgeSet is immutable")

    @classmethod
    def of(cls, *ids: int) -> "EdgeSet":
        return cls.from_ids(ids)

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "EdgeSet":
        mask = 0
        for e in ids:
            if e < 0:
                raise ValueError(f"negative edge id {e}")
            mask |= 1 << e
        return cls(mask)

    @classmethod
    def single(cls, e: int) -> "EdgeSet":
        if e < 0:
            raise ValueError(f"negative edge id {e}")
        return cls(1 << e)

    def __contains__(self, e: int) -> bool:
        return e >= 0 and (self.mask >> e) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.mask | other.mask)

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.mask & other.mask)

    def __sub__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.mask & ~other.mask)

    def __le__(self, other: "EdgeSet") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "EdgeSet") -> bool:
        return self.mask != other.mask and self.mask & ~other.mask == 0

    def add(self, e: int) -> "EdgeSet":
        return EdgeSet(self.mask | (1 << e))

    def remove(self, e: int) -> "EdgeSet":
        if e not in self:
            raise KeyError(e)
        return EdgeSet(self.mask & ~(1 << e))

    def discard(self, e: int) -> "EdgeSet":
        return EdgeSet(self.mask & ~(1 << e)) if e >= 0 else self

    def isdisjoint(self, other: "EdgeSet") -> bool:
        return self.mask & other.mask == 0

    def issubset(self, other: "EdgeSet") -> bool:
        return self <= other

    def min(self) -> int:
        """Smallest edge id in the set."""
        if not self.mask:
            raise ValueError("min of empty edge set")
        return (self.mask & -self.mask).bit_length() - 1

    def max(self) -> int:
        """Largest edge id in the set."""
        if not self.mask:
            raise ValueError("max of empty edge set")
        return self.mask.bit_length() - 1

    def ids(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return "EdgeSet{" + ",".join(str(e) for e in self) + "}"


EMPTY = EdgeSet(0)


def union_all(sets: Iterable[EdgeSet]) -> EdgeSet:
    mask = 0
    for s in sets:
        mask |= s.mask
    return EdgeSet(mask)
