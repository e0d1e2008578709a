"""NPN canonical forms of 4-input truth tables.

A transform is (perm, mask, out).  Applied to a table ``tt`` it yields the
function ``x -> out ^ tt(y)`` with ``y_i = x[perm[i]] ^ mask_i``.  The
canonical form of ``tt`` is the smallest table over all 768 transforms;
transforms are ranked permutation-major (itertools order), then mask, then
output bit, and the first one reaching the minimum is reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

VARS = (0xAAAA, 0xCCCC, 0xF0F0, 0xFF00)
PERMS = tuple(itertools.permutations(range(4)))


@dataclass(frozen=True)
class NpnTransform:
    perm: tuple[int, int, int, int]
    mask: int
    out: int

    @property
    def index(self) -> int:
        return (PERMS.index(self.perm) * 16 + self.mask) * 2 + self.out


def transform_from_index(i: int) -> NpnTransform:
    out = i & 1
    i >>= 1
    return NpnTransform(PERMS[i // 16], i % 16, out)


def _minterm_maps() -> np.ndarray:
    """Row t maps minterm x to the minterm y read from the original table."""
    maps = np.empty((384, 16), dtype=np.intp)
    for p, perm in enumerate(PERMS):
        for mask in range(16):
            for x in range(16):
                y = 0
                for i in range(4):
                    y |= (((x >> perm[i]) & 1) ^ ((mask >> i) & 1)) << i
                maps[p * 16 + mask, x] = y
    return maps


@lru_cache(maxsize=1)
def transform_tables() -> np.ndarray:
    """(384, 65536) uint16: input-transformed version of every table."""
    maps = _minterm_maps()
    allt = np.arange(65536, dtype=np.uint16)
    # planes[y][x]: bit y of every table, pre-shifted to position x
    planes = np.empty((16, 16, 65536), dtype=np.uint16)
    for y in range(16):
        bit = (allt >> np.uint16(y)) & np.uint16(1)
        for x in range(16):
            planes[y, x] = bit << np.uint16(x)
    out = np.empty((384, 65536), dtype=np.uint16)
    xs = np.arange(16)
    for t in range(384):
        out[t] = np.bitwise_or.reduce(planes[maps[t], xs], axis=0)
    return out


@lru_cache(maxsize=1)
def canonical_tables() -> tuple[np.ndarray, np.ndarray]:
    """Canonical form and first minimizing transform index for all 65536 tables."""
    T = transform_tables()
    best = np.full(65536, 0xFFFF + 1, dtype=np.int32)
    arg = np.zeros(65536, dtype=np.int32)
    for t in range(384):
        for out in (0, 1):
            v = (T[t] ^ np.uint16(0xFFFF * out)).astype(np.int32)
            better = v < best
            best = np.where(better, v, best)
            arg = np.where(better, 2 * t + out, arg)
    return best.astype(np.uint16), arg.astype(np.int16)


def apply_transform(tt: int, t: NpnTransform) -> int:
    out = 0
    for x in range(16):
        y = 0
        for i in range(4):
            y |= (((x >> t.perm[i]) & 1) ^ ((t.mask >> i) & 1)) << i
        out |= (((tt >> y) & 1) ^ t.out) << x
    return out


def npn_canonical(tt: int) -> tuple[int, NpnTransform]:
    """(canonical table, transform mapping ``tt`` onto it)."""
    if not 0 <= tt <= 0xFFFF:
        raise ValueError("truth table must be 16 bits")
    canon, arg = canonical_tables()
    return int(canon[tt]), transform_from_index(int(arg[tt]))


def num_classes() -> int:
    return len(np.unique(canonical_tables()[0]))
