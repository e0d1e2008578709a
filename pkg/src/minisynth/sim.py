"""Bit-parallel AIG simulation on 64-bit pattern words.

Each uint64 word carries 64 independent assignments.  Nodes are grouped by
level so one numpy gather/AND per level evaluates the whole graph.
"""

from __future__ import annotations

import numpy as np

from .aig import Aig

ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)

# patterns for the six variables that vary inside one word
_WORD_VARS = [
    0xAAAAAAAAAAAAAAAA,
    0xCCCCCCCCCCCCCCCC,
    0xF0F0F0F0F0F0F0F0,
    0xFF00FF00FF00FF00,
    0xFFFF0000FFFF0000,
    0xFFFFFFFF00000000,
]


class Simulator:
    """Precompiled simulator for one Aig.

    Sources are the primary inputs followed by latch states; results are the
    primary outputs followed by latch next-states.
    """

    def __init__(self, aig: Aig):
        self.num_sources = aig.num_inputs + aig.num_latches
        live = aig.reachable()
        row = {0: 0}
        for i, lit in enumerate(aig.sources()):
            row[lit >> 1] = 1 + i
        nxt = 1 + self.num_sources
        for n in live:
            row[n] = nxt
            nxt += 1
        self.num_rows = nxt

        lev = {}
        by_level: dict[int, list[int]] = {}
        for n in live:
            a, b = aig.fanins(n)
            la = lev.get(a >> 1, 0)
            lb = lev.get(b >> 1, 0)
            lev[n] = max(la, lb) + 1
            by_level.setdefault(lev[n], []).append(n)

        self._steps = []
        for level in sorted(by_level):
            nodes = by_level[level]
            fa = [aig.fanins(n)[0] for n in nodes]
            fb = [aig.fanins(n)[1] for n in nodes]
            self._steps.append((
                np.array([row[n] for n in nodes], dtype=np.intp),
                np.array([row[x >> 1] for x in fa], dtype=np.intp),
                _compl_mask(fa),
                np.array([row[x >> 1] for x in fb], dtype=np.intp),
                _compl_mask(fb),
            ))
        roots = aig.roots()
        self._out_rows = np.array([row[x >> 1] for x in roots], dtype=np.intp)
        self._out_mask = _compl_mask(roots)

    def run(self, words) -> np.ndarray:
        """Simulate; ``words`` has shape (num_sources, nwords)."""
        words = np.asarray(words, dtype=np.uint64)
        if words.ndim == 1:
            words = words.reshape(-1, 1)
        if words.shape[0] != self.num_sources:
            raise ValueError(f"expected {self.num_sources} source rows, got {words.shape[0]}")
        nw = words.shape[1]
        vals = np.empty((self.num_rows, nw), dtype=np.uint64)
        vals[0] = 0
        vals[1:1 + self.num_sources] = words
        for rows, ra, ma, rb, mb in self._steps:
            vals[rows] = (vals[ra] ^ ma[:, None]) & (vals[rb] ^ mb[:, None])
        return vals[self._out_rows] ^ self._out_mask[:, None]


def _compl_mask(lits) -> np.ndarray:
    return np.array([0xFFFFFFFFFFFFFFFF if x & 1 else 0 for x in lits], dtype=np.uint64)


def simulate(aig: Aig, stimuli) -> np.ndarray:
    """Simulate ``aig`` on per-source pattern words.

    ``stimuli`` holds one row of uint64 words per primary input and then per
    latch state; the result holds one row per primary output and then per
    latch next-state.  Python ints (< 2**64) are accepted as single words.
    """
    if not isinstance(stimuli, np.ndarray):
        stimuli = np.array([_as_row(s) for s in stimuli], dtype=np.uint64)
        if stimuli.size == 0:
            stimuli = stimuli.reshape(0, 1)
    return Simulator(aig).run(stimuli)


def _as_row(s):
    if isinstance(s, (int, np.integer)):
        return [int(s)]
    return list(s)


def exhaustive_words(nbits: int, start_word: int, nwords: int) -> np.ndarray:
    """Stimulus rows enumerating assignments ``64*start_word ...`` of ``nbits`` variables."""
    rows = np.empty((nbits, nwords), dtype=np.uint64)
    w = np.arange(start_word, start_word + nwords, dtype=np.uint64)
    for j in range(nbits):
        if j < 6:
            rows[j] = _WORD_VARS[j]
        else:
            bit = (w >> np.uint64(j - 6)) & np.uint64(1)
            rows[j] = np.where(bit == 1, ALL_ONES, np.uint64(0))
    return rows


def random_words(nbits: int, nwords: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2**64, size=(nbits, nwords), dtype=np.uint64)


def valid_mask(total: int, start_word: int, nwords: int) -> np.ndarray:
    """Per-word mask of the patterns whose index is below ``total``."""
    mask = np.full(nwords, ALL_ONES, dtype=np.uint64)
    first = start_word * 64
    if first + 64 * nwords <= total:
        return mask
    for i in range(nwords):
        lo = first + 64 * i
        if lo + 64 <= total:
            continue
        k = max(0, total - lo)
        mask[i] = np.uint64((1 << k) - 1)
    return mask


def bit_of(words: np.ndarray, index: int) -> int:
    return int((int(words[index // 64]) >> (index % 64)) & 1)
