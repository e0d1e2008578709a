"""AND-tree balancing.

Maximal multi-input ANDs (supergates) are collected through
non-complemented, single-fanout AND edges and rebuilt as trees that always
combine the two shallowest operands first.  Two orders are tried, by AND
level and by mapped level (NAND2 plus inverters), and the original tree
competes as well.  The tree with the lowest mapped level is kept among those
no deeper in AND levels than the original, so neither depth ever grows.
"""

from __future__ import annotations

import heapq

from ..aig import CONST0, CONST1, Aig


def _fanout_counts(aig: Aig) -> list[int]:
    refs = [0] * aig.num_nodes
    for v in aig.reachable():
        a, b = aig.fanins(v)
        refs[a >> 1] += 1
        refs[b >> 1] += 1
    for lit in aig.roots():
        refs[lit >> 1] += 1
    return refs


def _shape(aig: Aig, lit: int, refs):
    """Supergate tree below ``lit``: a leaf literal or a (left, right) pair."""
    v = lit >> 1
    if lit & 1 or not aig.is_and(v) or refs[v] != 1:
        return lit
    a, b = aig.fanins(v)
    return (_shape(aig, a, refs), _shape(aig, b, refs))


def _leaves(shape, out):
    if isinstance(shape, tuple):
        _leaves(shape[0], out)
        _leaves(shape[1], out)
    else:
        out.append(shape)
    return out


def supergate(aig: Aig, root: int, refs) -> list[int]:
    """Leaf literals of the supergate rooted at AND node ``root``."""
    a, b = aig.fanins(root)
    return _leaves((_shape(aig, a, refs), _shape(aig, b, refs)), [])


def _combine_levels(ops, mapped_first: bool) -> tuple[int, int]:
    """(AND level, mapped level) of the tree built from (level, cost) pairs."""
    def key(lv, c):
        return (c, lv) if mapped_first else (lv, c)

    heap = [key(lv, c) for lv, c in ops]
    heapq.heapify(heap)
    while len(heap) > 1:
        x, y = heapq.heappop(heap), heapq.heappop(heap)
        (lx, cx), (ly, cy) = key(*x), key(*y)  # key() is its own inverse
        # an inner AND is used uncomplemented: NAND2 plus inverter
        heapq.heappush(heap, key(1 + max(lx, ly), 2 + max(cx, cy)))
    return key(*heap[0])


def _remap(shape, mapping):
    if isinstance(shape, tuple):
        return (_remap(shape[0], mapping), _remap(shape[1], mapping))
    return mapping[shape >> 1] ^ (shape & 1)


class _Builder:
    def __init__(self, dst: Aig):
        self.dst = dst
        self.mlev = [0] * dst.num_nodes

    def cost(self, lit: int) -> int:
        v = lit >> 1
        if v == 0:
            return 0
        if self.dst.is_and(v):
            return self.mlev[v] + 1 - (lit & 1)
        return lit & 1

    def make_and(self, a: int, b: int) -> int:
        r = self.dst.make_and(a, b)
        while len(self.mlev) < self.dst.num_nodes:
            self.mlev.append(0)
        if r >= 2 and self.dst.is_and(r >> 1) and not self.mlev[r >> 1]:
            self.mlev[r >> 1] = 1 + max(self.cost(a), self.cost(b))
        return r

    def shape_levels(self, shape):
        if not isinstance(shape, tuple):
            return self.dst.level(shape), self.cost(shape)
        (la, ca), (lb, cb) = self.shape_levels(shape[0]), self.shape_levels(shape[1])
        return 1 + max(la, lb), 2 + max(ca, cb)

    def build_shape(self, shape) -> int:
        if not isinstance(shape, tuple):
            return shape
        return self.make_and(self.build_shape(shape[0]), self.build_shape(shape[1]))

    def tree(self, lits, shape=None) -> int:
        """AND of ``lits``; ``shape`` is the original tree over the same leaves, if any."""
        ops = [(self.dst.level(x), self.cost(x)) for x in lits]
        a_first = _combine_levels(ops, False)
        m_first = _combine_levels(ops, True)
        if shape is not None:
            orig = self.shape_levels(shape)
            best = min((c, lv, i) for i, (lv, c) in enumerate((a_first, m_first, orig))
                       if lv <= orig[0])
            if best[2] == 2:
                return self.build_shape(shape)
            mapped_first = best[2] == 1
        else:
            mapped_first = m_first[0] <= a_first[0]

        def key(x):
            lv, c = self.dst.level(x), self.cost(x)
            return (c, lv, x) if mapped_first else (lv, c, x)

        heap = [key(x) for x in lits]
        heapq.heapify(heap)
        while len(heap) > 1:
            a = heapq.heappop(heap)[2]
            b = heapq.heappop(heap)[2]
            heapq.heappush(heap, key(self.make_and(a, b)))
        return heap[0][2]


def balance(aig: Aig) -> Aig:
    refs = _fanout_counts(aig)
    # supergate roots that survive: reached from a root or as a leaf
    needed = set()
    stack = [lit >> 1 for lit in aig.roots()]
    groups: dict[int, list[int]] = {}
    shapes = {}
    while stack:
        v = stack.pop()
        if v in needed or not aig.is_and(v):
            continue
        needed.add(v)
        a, b = aig.fanins(v)
        shapes[v] = (_shape(aig, a, refs), _shape(aig, b, refs))
        groups[v] = _leaves(shapes[v], [])
        stack.extend(lit >> 1 for lit in groups[v])

    dst, mapping = aig.empty_like()
    b = _Builder(dst)
    for v in sorted(needed):
        leaf_lits = [mapping[x >> 1] ^ (x & 1) for x in groups[v]]
        lits = set(leaf_lits)
        if CONST0 in lits or any(x ^ 1 in lits for x in lits):
            mapping[v] = CONST0
            continue
        lits.discard(CONST1)
        if not lits:
            mapping[v] = CONST1
            continue
        # the original shape competes only if its leaves stayed distinct
        shape = None
        if len(lits) == len(leaf_lits):
            shape = _remap(shapes[v], mapping)
        mapping[v] = b.tree(sorted(lits), shape)
    return aig.finish_like(dst, [mapping[r >> 1] ^ (r & 1) for r in aig.roots()])
