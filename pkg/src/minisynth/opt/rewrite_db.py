"""Database of small AND/inverter structures, one per 4-input NPN class.

The builder enumerates sets of node functions breadth first: a state is a
set of k functions over the four leaves that can be computed with k AND
nodes, and each level adds one AND of two available literals.  States are
reduced modulo input permutation/negation, which keeps the search to a few
thousand states per level.  The first level at which a class appears gives
its minimum node count; among the structures of that size the one with the
smallest depth is kept (first found on ties).

Structure literals: 0/1 are constants, ``2 + 2*i`` is leaf i, ``10 + 2*j``
is node j; the low bit complements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .npn import VARS, canonical_tables, transform_from_index, transform_tables

FORMAT_VERSION = 1
MAX_NODES = 7
_BIG = 1 << 10


@dataclass(frozen=True)
class NpnEntry:
    canonical_tt: int
    nodes: tuple[tuple[int, int], ...]
    output: int

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def depth(self) -> int:
        return structure_depth(self.nodes, self.output)


def structure_depth(nodes, output) -> int:
    lev = []
    for a, b in nodes:
        lev.append(1 + max(_lit_level(a, lev), _lit_level(b, lev)))
    return _lit_level(output, lev)


def _lit_level(lit, lev):
    return lev[(lit >> 1) - 5] if lit >= 10 else 0


def simulate_structure(nodes, output, leaves=VARS) -> int:
    """Truth table of a structure with the given 16-bit leaf tables."""
    vals = []

    def val(lit):
        if lit < 2:
            v = 0
        elif lit < 10:
            v = leaves[(lit >> 1) - 1]
        else:
            v = vals[(lit >> 1) - 5]
        return v ^ (0xFFFF if lit & 1 else 0)

    for a, b in nodes:
        vals.append(val(a) & val(b))
    return val(output)


# -- enumeration -------------------------------------------------------------

def _norm(a):
    a = a.astype(np.uint16)
    return a ^ ((a & np.uint16(1)) * np.uint16(0xFFFF))


@lru_cache(maxsize=1)
def _normalized_images() -> np.ndarray:
    """(65536, 384): every input-transformed image of every table, normalized."""
    return np.ascontiguousarray(_norm(transform_tables()).T)


def _canon_states(S: np.ndarray) -> np.ndarray:
    """Lexicographically smallest sorted image of each state under the 384 input transforms."""
    images = _normalized_images()
    n, k = S.shape
    res = np.empty_like(S)
    chunk = max(1, (1 << 22) // (384 * k))
    for s in range(0, n, chunk):
        blk = S[s:s + chunk]
        cols = _sorted_columns([images[blk[:, j]] for j in range(k)])  # k x (b, 384)
        alive = np.ones(cols[0].shape, dtype=bool)
        out = np.empty((blk.shape[0], k), dtype=np.uint16)
        for j in range(k):
            v = np.where(alive, cols[j], np.uint16(0xFFFF))
            mn = v.min(axis=1)
            alive &= v == mn[:, None]
            out[:, j] = mn
        res[s:s + chunk] = out
    return res


def _sorted_columns(cols):
    """Elementwise sort across a short list of equal-shape arrays (odd-even transposition)."""
    cols = list(cols)
    k = len(cols)
    for rnd in range(k):
        for i in range(rnd % 2, k - 1, 2):
            lo = np.minimum(cols[i], cols[i + 1])
            cols[i + 1] = np.maximum(cols[i], cols[i + 1])
            cols[i] = lo
    return cols


def _literals(S: np.ndarray) -> np.ndarray:
    n = S.shape[0]
    leaves = np.array(list(VARS) + [v ^ 0xFFFF for v in VARS], dtype=np.uint16)
    return np.concatenate([np.broadcast_to(leaves, (n, 8)), S, S ^ 0xFFFF], axis=1)


def _state_depths(S: np.ndarray) -> np.ndarray:
    """Minimum depth of every node function of every state, computed only from
    the state's own functions and the leaves."""
    n, k = S.shape
    if k == 0:
        return np.zeros((n, 0), dtype=np.int32)
    lits = _literals(S)
    ii, jj = np.triu_indices(lits.shape[1], 1)
    nf = _norm(lits[:, ii] & lits[:, jj])
    match = [nf == S[:, j:j + 1] for j in range(k)]
    d = np.full((n, k), _BIG, dtype=np.int32)
    for _ in range(k):
        dl = np.concatenate([np.zeros((n, 8), dtype=np.int32), d, d], axis=1)
        cand = 1 + np.maximum(dl[:, ii], dl[:, jj])
        for j in range(k):
            d[:, j] = np.minimum(d[:, j], np.where(match[j], cand, _BIG).min(axis=1))
    return d


def _reconstruct(state, pair, depth):
    """Nodes computing the AND of literal pair ``pair`` over ``state``."""
    k = len(state)
    lits = [int(x) for x in _literals(np.array([state], dtype=np.uint16).reshape(1, k))[0]]
    L = len(lits)
    pairs = [(i, j) for i in range(L) for j in range(i + 1, L)]

    def lit_depth(i):
        return 0 if i < 8 else int(depth[(i - 8) % k])

    # chosen defining pair for each state function: first pair of minimum depth
    choice = {}
    for j, v in enumerate(state):
        for a, b in pairs:
            f = lits[a] & lits[b]
            if (f if not f & 1 else f ^ 0xFFFF) == v and 1 + max(lit_depth(a), lit_depth(b)) == depth[j]:
                choice[j] = (a, b, f != v)
                break
    nodes: list[tuple[int, int]] = []
    placed: dict[int, int] = {}  # state index -> node index

    def emit(idx) -> int:
        if idx < 8:
            return 2 + 2 * (idx % 4) + (idx >= 4)
        j = (idx - 8) % k
        neg = idx >= 8 + k
        if j not in placed:
            a, b, flip = choice[j]
            la, lb = emit(a), emit(b)
            nodes.append((min(la, lb), max(la, lb)))
            placed[j] = (len(nodes) - 1, flip)
        node, flip = placed[j]
        return 10 + 2 * node + (flip ^ neg)

    la, lb = emit(pair[0]), emit(pair[1])
    nodes.append((min(la, lb), max(la, lb)))
    return nodes, 10 + 2 * (len(nodes) - 1)


def _to_canonical(nodes, output, tt):
    """Re-express a structure for ``tt`` as one for its canonical table."""
    canon, arg = canonical_tables()
    t = transform_from_index(int(arg[tt]))

    def remap(lit):
        if 2 <= lit < 10:
            i = (lit >> 1) - 1
            return 2 + 2 * t.perm[i] + ((lit & 1) ^ ((t.mask >> i) & 1))
        return lit

    new_nodes = tuple(tuple(sorted((remap(a), remap(b)))) for a, b in nodes)
    out = remap(output) ^ t.out
    c = int(canon[tt])
    if simulate_structure(new_nodes, out) != c:
        raise AssertionError(f"structure for {tt:04x} does not implement class {c:04x}")
    return NpnEntry(c, new_nodes, out)


def build_rewrite_db(max_nodes: int = MAX_NODES) -> dict[int, NpnEntry]:
    """Exhaustive enumeration; returns canonical table -> smallest, then shallowest entry."""
    canon, _ = canonical_tables()
    db: dict[int, NpnEntry] = {}
    db[int(canon[0])] = _to_canonical((), 0, 0)
    db[int(canon[VARS[0]])] = _to_canonical((), 2, VARS[0])

    states = np.zeros((1, 0), dtype=np.uint16)
    depths = np.zeros((1, 0), dtype=np.int32)
    for k in range(1, max_nodes + 1):
        n = states.shape[0]
        lits = _literals(states)
        L = lits.shape[1]
        ii, jj = np.triu_indices(L, 1)
        newf = lits[:, ii] & lits[:, jj]
        nf = _norm(newf)
        ok = nf != 0
        for v in VARS:
            ok &= nf != v
        for c in range(states.shape[1]):
            ok &= nf != states[:, c:c + 1]

        dl = np.concatenate([np.zeros((n, 8), dtype=np.int32), depths, depths], axis=1)
        cand_depth = 1 + np.maximum(dl[:, ii], dl[:, jj])
        cls = canon[newf].astype(np.int64)
        known = np.isin(cls, np.array(sorted(db), dtype=np.int64))
        rows, cols = np.nonzero(ok & ~known)
        if len(rows):
            c_cls = cls[rows, cols]
            c_dep = cand_depth[rows, cols]
            flat = rows.astype(np.int64) * len(ii) + cols
            order = np.lexsort((flat, c_dep, c_cls))
            first = np.ones(len(order), dtype=bool)
            first[1:] = c_cls[order][1:] != c_cls[order][:-1]
            for idx in order[first]:
                r, p = int(rows[idx]), int(cols[idx])
                nodes, out = _reconstruct(tuple(int(x) for x in states[r]), (int(ii[p]), int(jj[p])),
                                          [int(x) for x in depths[r]])
                if len(nodes) != k:
                    raise AssertionError("enumeration produced a non-minimal structure")
                entry = _to_canonical(nodes, out, int(newf[r, p]))
                db[entry.canonical_tt] = entry
        if k == max_nodes:
            break
        rows, cols = np.nonzero(ok)
        new = np.concatenate([states[rows], nf[rows, cols][:, None]], axis=1)
        new.sort(axis=1)
        new = np.unique(new, axis=0)
        states = np.unique(_canon_states(new), axis=0)
        depths = _state_depths(states)
    return dict(sorted(db.items()))


# -- persistence --------------------------------------------------------------

def dumps(db: dict[int, NpnEntry]) -> str:
    lines = ["# 4-input NPN rewrite structures",
             f"version {FORMAT_VERSION}",
             f"classes {len(db)}",
             "# tt size depth output fanin-pairs..."]
    for tt, e in sorted(db.items()):
        pairs = " ".join(f"{a} {b}" for a, b in e.nodes)
        lines.append(f"{tt:04x} {e.size} {e.depth} {e.output}" + (f" {pairs}" if pairs else ""))
    return "\n".join(lines) + "\n"


def loads(text: str) -> dict[int, NpnEntry]:
    db = {}
    version = None
    expected = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "version":
            version = int(rest)
            if version != FORMAT_VERSION:
                raise FormatError(f"unsupported database version {version}", lineno)
            continue
        if head == "classes":
            expected = int(rest)
            continue
        if version is None:
            raise FormatError("missing version header", lineno)
        try:
            fields = [int(head, 16)] + [int(x) for x in rest.split()]
        except ValueError:
            raise FormatError(f"malformed entry {line!r}", lineno) from None
        tt, size, depth, out = fields[:4]
        flat = fields[4:]
        if len(flat) != 2 * size:
            raise FormatError(f"entry {tt:04x} lists {len(flat) // 2} nodes, expected {size}", lineno)
        entry = NpnEntry(tt, tuple(zip(flat[0::2], flat[1::2])), out)
        if entry.depth != depth or simulate_structure(entry.nodes, entry.output) != tt:
            raise FormatError(f"entry {tt:04x} is inconsistent", lineno)
        db[tt] = entry
    if version is None:
        raise FormatError("missing version header", 1)
    if expected is not None and expected != len(db):
        raise FormatError(f"expected {expected} classes, found {len(db)}", 1)
    return db


def save_rewrite_db(db: dict[int, NpnEntry], path) -> None:
    Path(path).write_text(dumps(db))


def load_rewrite_db(path) -> dict[int, NpnEntry]:
    return loads(Path(path).read_text())


@lru_cache(maxsize=1)
def default_db() -> dict[int, NpnEntry]:
    """The database shipped with the package."""
    text = resources.files("minisynth").joinpath("data/rewrite_db.txt").read_text()
    return loads(text)
