"""Vertex sets as Python int bitmasks.

All set-valued results in this package are plain ints: bit i set means
vertex i is in the set.  Ints give constant-factor-fast AND/OR on the
dense, near-complete graphs everything here works with.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator


def bit(i: int) -> int:
    return 1 << i


def full_mask(n: int) -> int:
    """All of {0, ..., n-1}."""
    return (1 << n) - 1


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def bits(mask: int) -> Iterator[int]:
    """Iterate set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit, or -1 for the empty mask."""
    if not mask:
        return -1
    return (mask & -mask).bit_length() - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def to_list(mask: int) -> list[int]:
    return list(bits(mask))
