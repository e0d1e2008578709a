"""K-feasible cut enumeration with 16-bit truth tables (K <= 4)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..aig import Aig
from .npn import VARS

TRIVIAL_TT = VARS[0]


@dataclass(frozen=True)
class Cut:
    leaves: tuple[int, ...]  # node indices, ascending
    tt: int                  # function of the leaves; leaf i is variable i

    def __len__(self):
        return len(self.leaves)


def _build_stretch() -> np.ndarray:
    """STRETCH[m][tt]: table over a sub-cut re-expressed on a super-cut where
    the sub-cut's leaves sit at the positions set in mask m (in order)."""
    out = np.zeros((16, 65536), dtype=np.uint16)
    allt = np.arange(65536, dtype=np.uint32)
    for m in range(16):
        pos = [p for p in range(4) if (m >> p) & 1]
        res = np.zeros(65536, dtype=np.uint32)
        for x in range(16):
            y = 0
            for i, p in enumerate(pos):
                y |= ((x >> p) & 1) << i
            res |= ((allt >> y) & 1) << x
        out[m] = res
    return out


_STRETCH = None


def stretch_table():
    global _STRETCH
    if _STRETCH is None:
        _STRETCH = _build_stretch()
    return _STRETCH


def _position_mask(sub, union) -> int:
    m = 0
    for leaf in sub:
        m |= 1 << union.index(leaf)
    return m


def merge_cuts(c0: Cut, compl0: int, c1: Cut, compl1: int, k: int = 4) -> Cut | None:
    leaves = tuple(sorted(set(c0.leaves) | set(c1.leaves)))
    if len(leaves) > k:
        return None
    st = stretch_table()
    t0 = int(st[_position_mask(c0.leaves, leaves), c0.tt]) ^ (0xFFFF if compl0 else 0)
    t1 = int(st[_position_mask(c1.leaves, leaves), c1.tt]) ^ (0xFFFF if compl1 else 0)
    return Cut(leaves, t0 & t1)


def prune(cuts: list[Cut], limit: int) -> list[Cut]:
    """Drop duplicates and dominated cuts, then keep the ``limit`` smallest."""
    uniq = {}
    for c in cuts:
        uniq.setdefault(c.leaves, c)
    ordered = sorted(uniq.values(), key=lambda c: (len(c.leaves), c.leaves))
    kept: list[Cut] = []
    for c in ordered:
        s = set(c.leaves)
        if any(set(d.leaves) <= s for d in kept):
            continue
        kept.append(c)
    return kept[:limit]


def node_cuts(n: int, fanin_cuts, fanins, k: int = 4, limit: int = 8) -> list[Cut]:
    """Cuts of AND node ``n`` from the cut lists of its two fanins."""
    (a, b), (ca, cb) = fanins, fanin_cuts
    merged = [Cut((n,), TRIVIAL_TT)]
    for x in ca:
        for y in cb:
            c = merge_cuts(x, a & 1, y, b & 1, k)
            if c is not None:
                merged.append(c)
    trivial, rest = merged[0], prune(merged[1:], limit - 1)
    return [trivial] + rest


def enumerate_cuts(aig: Aig, k: int = 4, per_node_limit: int = 8) -> dict[int, list[Cut]]:
    """Bottom-up cut sets for every live node; sources get only their trivial cut."""
    if not 1 <= k <= 4:
        raise ValueError("cut size must be between 1 and 4")
    if per_node_limit < 1:
        raise ValueError("per_node_limit must be at least 1")
    cuts: dict[int, list[Cut]] = {}
    for lit in aig.sources():
        cuts[lit >> 1] = [Cut((lit >> 1,), TRIVIAL_TT)]
    cuts[0] = [Cut((), 0)]
    for n in aig.reachable():
        a, b = aig.fanins(n)
        cuts[n] = node_cuts(n, (cuts[a >> 1], cuts[b >> 1]), (a, b), k, per_node_limit)
    return cuts
