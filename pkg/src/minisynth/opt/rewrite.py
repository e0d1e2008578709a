"""Cut-based rewriting against the precomputed NPN structure database.

One sweep over the nodes in ascending index order.  For every 4-input cut
of a node the database structure of the cut function's NPN class is a
candidate replacement.  Its gain is the number of nodes freed by dropping
the node's fanout-free cone (bounded by the cut) minus the nodes the
candidate would add after structural hashing.  By default a candidate must
also arrive within the node's required time, both in AND levels and in
mapped levels (NAND2 plus inverters), so neither depth of the whole graph
grows.
"""

from __future__ import annotations

from ..aig import Aig
from .cuts import Cut, node_cuts
from .graph import MutableAig
from .npn import canonical_tables, transform_from_index
from .rewrite_db import NpnEntry, default_db


def _mffc(g: MutableAig, root: int, leaves) -> set[int]:
    """Nodes freed if ``root`` lost all its references, stopping at ``leaves``."""
    stop = set(leaves)
    freed = set()
    dec: dict[int, int] = {}
    stack = [root]
    while stack:
        v = stack.pop()
        if v in freed:
            continue
        freed.add(v)
        for x in g.fanins(v):
            w = x >> 1
            if w in stop or not g.is_and(w):
                continue
            dec[w] = dec.get(w, 0) + 1
            if dec[w] == g.refs[w]:
                stack.append(w)
    return freed


class _Candidate:
    __slots__ = ("gain", "level", "tt", "cut", "entry", "inputs", "out_compl")

    def key(self):
        return (-self.gain, self.level, self.tt)


def _placeholder_inputs(cut: Cut, transform) -> list[int]:
    """Literal (over leaf nodes) driving each database placeholder x_j."""
    leaves = [2 * v for v in cut.leaves] + [0] * (4 - len(cut.leaves))
    inputs = [0] * 4
    for i in range(4):
        j = transform.perm[i]
        inputs[j] = leaves[i] ^ ((transform.mask >> i) & 1)
    return inputs


def _evaluate(g: MutableAig, root: int, entry: NpnEntry, inputs, out_compl, mffc):
    """Cost of instantiating ``entry`` in place of ``root``.

    Returns (new node count, AND level, mapped level per output polarity,
    touches_root, result literal or None when new nodes are needed).
    """
    lits: list = []      # existing literal, or None for a node to be created
    levels: list[int] = []
    mlevels: list[int] = []
    added = 0
    touches_root = False

    def resolve(lit):
        """(literal or None, AND level, mapped level) of a structure literal."""
        if lit < 2:
            return lit, 0, 0
        if lit < 10:
            x = inputs[(lit >> 1) - 1] ^ (lit & 1)
            return x, g.lit_level(x), g.lit_cost(x)
        j = (lit >> 1) - 5
        x = lits[j]
        if x is None:
            return None, levels[j], mlevels[j] + 1 - (lit & 1)
        x ^= lit & 1
        return x, levels[j], g.lit_cost(x)

    for a, b in entry.nodes:
        la, lva, ma = resolve(a)
        lb, lvb, mb = resolve(b)
        found = None
        if la is not None and lb is not None:
            found = g.lookup(la, lb)
        if found is None:
            added += 1
            lits.append(None)
            levels.append(1 + max(lva, lvb))
            mlevels.append(1 + max(ma, mb))
        else:
            w = found >> 1
            if w == root:
                touches_root = True
            if w in mffc:
                added += 1  # kept alive, so no longer freed
            lits.append(found)
            levels.append(g.lit_level(found))
            mlevels.append(g.mlevel[w] if g.is_and(w) else 0)
    mcost = {}
    for pol in (0, 1):
        out, lev, m = resolve(entry.output ^ out_compl ^ pol)
        mcost[pol] = m
    out, lev, _ = resolve(entry.output ^ out_compl)
    return added, lev, mcost, touches_root, out


def _instantiate(g: MutableAig, entry: NpnEntry, inputs, out_compl) -> int:
    lits: list[int] = []

    def resolve(lit):
        if lit < 2:
            return lit
        if lit < 10:
            return inputs[(lit >> 1) - 1] ^ (lit & 1)
        return lits[(lit >> 1) - 5] ^ (lit & 1)

    for a, b in entry.nodes:
        lits.append(g.make_and(resolve(a), resolve(b)))
    return resolve(entry.output) ^ out_compl


def rewrite(aig: Aig, zero_gain: bool = False, cut_size: int = 4, cut_limit: int = 8,
            preserve_levels: bool = True, db=None) -> Aig:
    """One rewriting sweep; returns a new, compacted Aig."""
    if cut_size != 4:
        raise ValueError("the structure database is built for 4-input cuts")
    db = default_db() if db is None else db
    canon, arg = canonical_tables()
    g = MutableAig(aig)
    cuts: dict[int, list[Cut]] = {0: [Cut((), 0)]}
    for lit in aig.sources():
        cuts[lit >> 1] = [Cut((lit >> 1,), 0xAAAA)]

    def live(c: Cut) -> bool:
        return all(g.alive[v] for v in c.leaves)

    def cuts_of(v: int) -> list[Cut]:
        # iterative so deep carry chains do not hit the recursion limit
        stack = [v]
        while stack:
            u = stack[-1]
            if u in cuts and all(live(c) for c in cuts[u]):
                stack.pop()
                continue
            a, b = g.fanins(u)
            pending = [x >> 1 for x in (a, b) if (x >> 1) not in cuts]
            if pending:
                stack.extend(pending)
                continue
            fa = [c for c in cuts[a >> 1] if live(c)] or [Cut((a >> 1,), 0xAAAA)]
            fb = [c for c in cuts[b >> 1] if live(c)] or [Cut((b >> 1,), 0xAAAA)]
            cuts[u] = node_cuts(u, (fa, fb), (a, b), cut_size, cut_limit)
            stack.pop()
        return cuts[v]

    if preserve_levels:
        g.track_required(*g.depths())
    for v in range(1, aig.num_nodes):
        if not g.is_and(v):
            continue
        best = None
        for cut in cuts_of(v)[1:]:
            if not live(cut):
                continue
            tt = cut.tt
            c = int(canon[tt])
            entry = db.get(c)
            if entry is None:
                continue
            t = transform_from_index(int(arg[tt]))
            inputs = _placeholder_inputs(cut, t)
            mffc = _mffc(g, v, cut.leaves)
            added, lev, mcost, touches_root, out = _evaluate(g, v, entry, inputs, t.out, mffc)
            if touches_root or (out is not None and out >> 1 == v):
                continue  # no-op, or would feed the node into its own replacement
            gain = len(mffc) - added
            if gain < 0 or (gain == 0 and not zero_gain):
                continue
            if preserve_levels:
                r, rp, rn = g.required(v)
                if lev > r or mcost[0] > rp or mcost[1] > rn:
                    continue
            cand = _Candidate()
            cand.gain, cand.level, cand.tt = gain, (lev, max(mcost.values())), c
            cand.cut, cand.entry, cand.inputs, cand.out_compl = cut, entry, inputs, t.out
            if best is None or cand.key() < best.key():
                best = cand
        if best is None:
            continue
        new_lit = _instantiate(g, best.entry, best.inputs, best.out_compl)
        if new_lit >> 1 == v:
            continue
        g.replace(v, new_lit)
    return g.to_aig()
