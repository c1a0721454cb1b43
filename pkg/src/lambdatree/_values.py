"""Arrays of exact group values.

Pairwise quantities over a word ball are held in numpy arrays. Small balls use
``dtype=object`` arrays of :class:`Elem`; large balls over ``Z[1/a]`` use int64
codes ``value * a**M`` through :class:`ScaledCodec`. Both kinds support
elementwise ``+``/``-``; comparisons go through :func:`ranks`.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import numpy as np

from .oag import Descriptor, Elem, Localized, cmp, zero


class ObjectCodec:
    dtype = object

    def __init__(self, desc: Descriptor):
        self.desc = desc
        self.zero = zero(desc)

    def encode(self, x: Elem):
        return x

    def decode(self, c) -> Elem:
        return c

    def array(self, values) -> np.ndarray:
        out = np.empty(len(values), dtype=object)
        out[:] = list(values)
        return out


class ScaledCodec:
    """Exact int64 codes for elements of ``Z[1/a]`` with denominators
    dividing ``a**M``."""

    dtype = np.int64

    def __init__(self, desc: Localized, M: int):
        self.desc = desc
        self.M = M
        self.unit = desc.base ** M
        self.zero = 0

    def encode(self, x: Elem) -> int:
        v = x.v * self.unit
        if v.denominator != 1:
            raise ValueError(f"{x} needs a finer scale than {self.desc.base}^-{self.M}")
        if abs(v.numerator) >= 2**62:
            raise OverflowError(f"{x} exceeds the int64 code range")
        return int(v.numerator)

    def decode(self, c) -> Elem:
        return Elem(self.desc, Fraction(int(c), self.unit))

    def array(self, values) -> np.ndarray:
        return np.array([self.encode(v) for v in values], dtype=np.int64)


def ranks(arr: np.ndarray, codec, extra=()) -> tuple[np.ndarray, list, list[Elem]]:
    """Order-preserving integer ranks of ``arr``.

    Returns ``(rank_array, extra_ranks, distinct_values)`` where
    ``distinct_values[r]`` is the element with rank ``r``. ``extra`` values
    (already encoded) are ranked jointly with the array.
    """
    extra = list(extra)
    if arr.dtype != object:
        flat = np.concatenate([arr.ravel(), np.array(extra, dtype=arr.dtype)])
        uniq, inv = np.unique(flat, return_inverse=True)
        n = arr.size
        return (
            inv[:n].reshape(arr.shape).astype(np.int64),
            [int(i) for i in inv[n:]],
            [codec.decode(u) for u in uniq],
        )
    seen: dict = {}
    for v in arr.ravel():
        seen.setdefault(v, None)
    for v in extra:
        seen.setdefault(v, None)
    distinct = sorted(seen, key=functools.cmp_to_key(cmp))
    pos = {v: i for i, v in enumerate(distinct)}
    flat = np.fromiter((pos[v] for v in arr.ravel()), dtype=np.int64, count=arr.size)
    return flat.reshape(arr.shape), [pos[v] for v in extra], distinct


def signs(arr: np.ndarray, codec) -> np.ndarray:
    """Elementwise sign (-1, 0, 1) as an int array."""
    if arr.dtype != object:
        return np.sign(arr).astype(np.int64)
    return np.frompyfunc(lambda e: e.sign(), 1, 1)(arr).astype(np.int64)


def equal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        return a == b
    return np.frompyfunc(lambda x, y: x == y, 2, 1)(a, b).astype(bool)
