"""Mutable AIG used by in-place passes.

Keeps fanout lists and reference counts so that a node can be replaced by
another literal: its fanouts are re-pointed (re-hashing them, which may in
turn merge them with existing nodes) and whatever becomes unreferenced is
deleted.  ``to_aig`` rebuilds a compact, strashed Aig.

Two levels are tracked per node: the AND level, and the level of the node's
NAND2 output after mapping, where each use of a true AND value or of a
complemented source adds one inverter.
"""

from __future__ import annotations

from ..aig import CONST0, CONST1, KIND_AND, Aig


class MutableAig:
    def __init__(self, aig: Aig):
        self.src = aig
        n = aig.num_nodes
        self.kind = [aig.kind(i) for i in range(n)]
        self.f0 = [0] * n
        self.f1 = [0] * n
        self.alive = [False] * n
        self.alive[0] = True
        self.refs = [0] * n
        self.fanouts: list[set[int]] = [set() for _ in range(n)]
        self.level = [0] * n
        self.mlevel = [0] * n
        self.strash: dict[tuple[int, int], int] = {}
        for lit in aig.sources():
            self.alive[lit >> 1] = True
        # only live logic is loaded; dead nodes of the source stay dead
        for v in aig.reachable():
            a, b = aig.fanins(v)
            self.f0[v], self.f1[v] = a, b
            self.alive[v] = True
            self.strash[(a, b)] = v
            for x in (a, b):
                self.refs[x >> 1] += 1
                self.fanouts[x >> 1].add(v)
            self.level[v] = 1 + max(self.level[a >> 1], self.level[b >> 1])
            self.mlevel[v] = 1 + max(self.lit_cost(a), self.lit_cost(b))
        self.roots = aig.roots()
        self.req = None      # node -> latest AND level, once tracking is on
        self.req_lit = None  # literal -> latest mapped level
        for lit in self.roots:
            self.refs[lit >> 1] += 1

    def num_nodes(self) -> int:
        return len(self.kind)

    def is_and(self, v: int) -> bool:
        return self.kind[v] == KIND_AND and self.alive[v]

    def fanins(self, v: int) -> tuple[int, int]:
        return self.f0[v], self.f1[v]

    def lit_level(self, lit: int) -> int:
        return self.level[lit >> 1]

    def lit_cost(self, lit: int) -> int:
        """Mapped level of the net carrying ``lit``."""
        v = lit >> 1
        if v == 0:
            return 0
        if self.kind[v] == KIND_AND:
            return self.mlevel[v] + (1 - (lit & 1))
        return lit & 1

    # -- construction -------------------------------------------------------

    @staticmethod
    def fold(a: int, b: int):
        """Result of the trivial AND rules, or None when a node is needed."""
        if a > b:
            a, b = b, a
        if a == CONST0 or a ^ 1 == b:
            return CONST0
        if a == CONST1 or a == b:
            return b
        return None

    def lookup(self, a: int, b: int):
        r = self.fold(a, b)
        if r is not None:
            return r
        if a > b:
            a, b = b, a
        v = self.strash.get((a, b))
        return None if v is None else 2 * v

    def make_and(self, a: int, b: int) -> int:
        r = self.lookup(a, b)
        if r is not None:
            return r
        if a > b:
            a, b = b, a
        v = len(self.kind)
        self.kind.append(KIND_AND)
        self.f0.append(a)
        self.f1.append(b)
        self.alive.append(True)
        self.refs.append(0)
        self.fanouts.append(set())
        self.level.append(1 + max(self.level[a >> 1], self.level[b >> 1]))
        self.mlevel.append(1 + max(self.lit_cost(a), self.lit_cost(b)))
        self.strash[(a, b)] = v
        for x in (a, b):
            self.refs[x >> 1] += 1
            self.fanouts[x >> 1].add(v)
        return 2 * v

    # -- deletion and replacement -------------------------------------------

    def delete_if_unused(self, v: int) -> None:
        stack = [v]
        while stack:
            u = stack.pop()
            if not self.is_and(u) or self.refs[u] > 0:
                continue
            self.alive[u] = False
            a, b = self.f0[u], self.f1[u]
            if self.strash.get((a, b)) == u:
                del self.strash[(a, b)]
            for x in (a, b):
                w = x >> 1
                self.refs[w] -= 1
                self.fanouts[w].discard(u)
                if self.refs[w] == 0:
                    stack.append(w)

    def replace(self, old: int, new_lit: int) -> None:
        """Make every user of node ``old`` use ``new_lit`` instead."""
        work = [(old, new_lit)]
        while work:
            old, new_lit = work.pop()
            if not self.alive[old] or new_lit >> 1 == old:
                continue
            nw = new_lit >> 1
            if self.req is not None:
                self._transfer_required(old, new_lit)
            for i, r in enumerate(self.roots):
                if r >> 1 == old:
                    self.roots[i] = new_lit ^ (r & 1)
                    self.refs[old] -= 1
                    self.refs[nw] += 1
            for p in sorted(self.fanouts[old]):
                if not self.alive[p]:
                    continue
                a, b = self.f0[p], self.f1[p]
                if self.strash.get((a, b)) == p:
                    del self.strash[(a, b)]
                if a >> 1 == old:
                    a = new_lit ^ (a & 1)
                if b >> 1 == old:
                    b = new_lit ^ (b & 1)
                for x in (self.f0[p], self.f1[p]):
                    if x >> 1 == old:
                        self.refs[old] -= 1
                        self.refs[nw] += 1
                        self.fanouts[nw].add(p)
                self.fanouts[old].discard(p)
                if a > b:
                    a, b = b, a
                self.f0[p], self.f1[p] = a, b
                merged = self.fold(a, b)
                if merged is None:
                    q = self.strash.get((a, b))
                    if q is not None and q != p:
                        merged = 2 * q
                if merged is not None:
                    # p became trivial or a duplicate: retire it too
                    work.append((p, merged))
                else:
                    self.strash[(a, b)] = p
                    self._update_level(p)
            self.delete_if_unused(old)

    def _update_level(self, v: int) -> None:
        stack = [v]
        while stack:
            u = stack.pop()
            if not self.is_and(u):
                continue
            a, b = self.f0[u], self.f1[u]
            lev = 1 + max(self.level[a >> 1], self.level[b >> 1])
            mlev = 1 + max(self.lit_cost(a), self.lit_cost(b))
            if lev != self.level[u] or mlev != self.mlevel[u]:
                self.level[u] = lev
                self.mlevel[u] = mlev
                stack.extend(self.fanouts[u])

    # -- timing ----------------------------------------------------------------

    def depths(self) -> tuple[int, int]:
        """(AND depth, mapped depth) over all roots."""
        if not self.roots:
            return 0, 0
        return (max(self.lit_level(r) for r in self.roots),
                max(self.lit_cost(r) for r in self.roots))

    def track_required(self, depth: int, mdepth: int) -> None:
        """Start tracking the latest AND level per node and mapped level per
        literal that keep every root within ``depth`` / ``mdepth``.

        Afterwards ``replace`` hands a node's limits to its replacement and
        tightens them down through the fanins, so the limits stay safe
        without being recomputed.
        """
        big = 1 << 30
        self.req, self.req_lit = {}, {}
        for r in self.roots:
            self.req[r >> 1] = min(self.req.get(r >> 1, big), depth)
            self.req_lit[r] = min(self.req_lit.get(r, big), mdepth)
        for v in reversed(self._topo(self.roots)):
            self._push_required(v)

    def required(self, v: int) -> tuple[int, int, int]:
        """(AND level limit, mapped limit of 2v, mapped limit of 2v+1)."""
        big = 1 << 30
        return (self.req.get(v, big), self.req_lit.get(2 * v, big),
                self.req_lit.get(2 * v + 1, big))

    def _push_required(self, v: int) -> list[int]:
        """Propagate v's limits to its fanins; returns the fanins that tightened."""
        r, rp, rn = self.required(v)
        rnand = min(rp - 1, rn)
        changed = []
        for x in (self.f0[v], self.f1[v]):
            w = x >> 1
            big = 1 << 30
            if r - 1 < self.req.get(w, big) or rnand - 1 < self.req_lit.get(x, big):
                self.req[w] = min(self.req.get(w, big), r - 1)
                self.req_lit[x] = min(self.req_lit.get(x, big), rnand - 1)
                changed.append(w)
        return changed

    def _transfer_required(self, old: int, new_lit: int) -> None:
        r, rp, rn = self.required(old)
        big = 1 << 30
        w = new_lit >> 1
        self.req[w] = min(self.req.get(w, big), r)
        for lit, lim in ((new_lit, rp), (new_lit ^ 1, rn)):
            self.req_lit[lit] = min(self.req_lit.get(lit, big), lim)
        stack = [w]
        while stack:
            u = stack.pop()
            if self.is_and(u):
                stack.extend(self._push_required(u))

    # -- export ----------------------------------------------------------------

    def to_aig(self) -> Aig:
        src = self.src
        dst, mapping = src.empty_like()
        order = self._topo(self.roots)
        for v in order:
            a, b = self.f0[v], self.f1[v]
            mapping[v] = dst.make_and(mapping[a >> 1] ^ (a & 1), mapping[b >> 1] ^ (b & 1))
        return src.finish_like(dst, [mapping[r >> 1] ^ (r & 1) for r in self.roots])

    def _topo(self, roots) -> list[int]:
        seen = set()
        order = []
        for r in roots:
            stack = [(r >> 1, False)]
            while stack:
                v, done = stack.pop()
                if done:
                    order.append(v)
                    continue
                if v in seen or self.kind[v] != KIND_AND:
                    continue
                seen.add(v)
                stack.append((v, True))
                stack.append((self.f1[v] >> 1, False))
                stack.append((self.f0[v] >> 1, False))
        return order

