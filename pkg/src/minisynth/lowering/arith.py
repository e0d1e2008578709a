"""Adders, Booth radix-4 multiplier and carry-save reduction.

All arithmetic is unsigned and modulo 2^W; bit lists are LSB first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..aig import CONST0, CONST1, Aig
from .fragment import BitNetlistFragment, measure

RIPPLE = "ripple"
PREFIX = "prefix"


def full_adder(aig: Aig, a: int, b: int, c: int) -> tuple[int, int]:
    """(sum, carry) of three bits."""
    p = aig.make_xor(a, b)
    s = aig.make_xor(p, c)
    carry = aig.make_or(aig.make_and(a, b), aig.make_and(c, p))
    return s, carry


def _ripple(aig, a, b, cin):
    out = []
    c = cin
    for x, y in zip(a, b):
        s, c = full_adder(aig, x, y, c)
        out.append(s)
    return out, c


def _sklansky(aig, a, b, cin):
    w = len(a)
    p = [aig.make_xor(x, y) for x, y in zip(a, b)]
    g = [aig.make_and(x, y) for x, y in zip(a, b)]
    if w and cin != CONST0:
        g[0] = aig.make_or(g[0], aig.make_and(p[0], cin))
    # G[i]/P[i] cover bits [block start .. i]; after the last round, [0 .. i]
    G, P = list(g), list(p)
    span = 1
    while span < w:
        for i in range(w):
            if (i // span) % 2 == 1:
                j = (i // span) * span - 1
                G[i] = aig.make_or(G[i], aig.make_and(P[i], G[j]))
                P[i] = aig.make_and(P[i], P[j])
        span *= 2
    carries = [cin] + G[:-1] if w else []
    out = [aig.make_xor(pi, ci) for pi, ci in zip(p, carries)]
    return out, (G[-1] if w else cin)


def add_bits(aig: Aig, a, b, cin: int = CONST0, arch: str = RIPPLE) -> tuple[list[int], int]:
    """(a + b + cin) as (sum bits, carry out)."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ValueError("adder operands must have equal width")
    if arch == PREFIX:
        return _sklansky(aig, a, b, cin)
    if arch == RIPPLE:
        return _ripple(aig, a, b, cin)
    raise ValueError(f"unknown adder architecture {arch!r}")


def build_final_adder(aig: Aig, sum_bits, carry_bits, arch: str = RIPPLE) -> BitNetlistFragment:
    """Carry-propagate adder closing a carry-save pair, modulo 2^W."""
    out, _ = add_bits(aig, sum_bits, carry_bits, CONST0, arch)
    return measure(aig, out, list(sum_bits) + list(carry_bits), arch=arch)


def sub_bits(aig, a, b, arch=RIPPLE) -> list[int]:
    return add_bits(aig, a, [x ^ 1 for x in b], CONST1, arch)[0]


def neg_bits(aig, a, arch=RIPPLE) -> list[int]:
    return add_bits(aig, [x ^ 1 for x in a], [CONST0] * len(a), CONST1, arch)[0]


def less_than(aig, a, b, arch=RIPPLE) -> int:
    """a < b, unsigned: no carry out of a + ~b + 1."""
    return add_bits(aig, a, [x ^ 1 for x in b], CONST1, arch)[1] ^ 1


def equal(aig, a, b) -> int:
    return aig.make_and_tree([aig.make_xnor(x, y) for x, y in zip(a, b)])


# -- Booth radix-4 ----------------------------------------------------------

def booth_partial_products(aig: Aig, a_bits, b_bits, width: int) -> list[list[int]]:
    """Partial-product rows of a*b mod 2^width, followed by one correction row.

    Digit i looks at (b[2i+1], b[2i], b[2i-1]) and selects 0, ±a or ±2a
    shifted by 2i.  A negative digit is written as the inverted row plus a 1
    at column 2i; those 1s form the correction row.
    """
    a = list(a_bits)[:width] + [CONST0] * max(0, width - len(a_bits))
    b = list(b_bits)[:width] + [CONST0] * max(0, width - len(b_bits))

    def bb(k):
        return b[k] if 0 <= k < width else CONST0

    rows = []
    correction = [CONST0] * width
    for i in range((width + 1) // 2):
        hi, mid, lo = bb(2 * i + 1), bb(2 * i), bb(2 * i - 1)
        one = aig.make_xor(mid, lo)
        two = aig.make_or(aig.make_and(hi, aig.make_and(mid ^ 1, lo ^ 1)),
                          aig.make_and(hi ^ 1, aig.make_and(mid, lo)))
        neg = hi
        row = [CONST0] * width
        for j in range(width - 2 * i):
            prev = a[j - 1] if j >= 1 else CONST0
            pp = aig.make_or(aig.make_and(one, a[j]), aig.make_and(two, prev))
            row[2 * i + j] = aig.make_xor(pp, neg)
        rows.append(row)
        correction[2 * i] = neg
    rows.append(correction)
    return rows


@dataclass
class CarrySavePair:
    """Two rows whose sum mod 2^W is the product (plus any addend rows)."""
    sum_bits: list[int]
    carry_bits: list[int]
    rows: list[list[int]]  # the rows that were compressed
    stages: list[list[list[int]]] = field(default_factory=list)  # columns after each stage
    internal_nodes: int = 0
    depth: int = 0
    operand_bits: list[int] = field(default_factory=list)

    @property
    def outputs(self):
        return self.sum_bits + self.carry_bits


def compress_rows(aig: Aig, rows, width: int) -> tuple[list[int], list[int], list]:
    """Greedy per-column 3:2 reduction down to two rows.

    Within a column the earliest-arriving bits are combined first.  Carries
    out of column width-1 are dropped (modulo 2^width).  Returns the two rows
    and the column contents after every stage, the first entry being the input.
    """
    cols = [[r[j] for r in rows if r[j] != CONST0] for j in range(width)]
    stages = [[list(c) for c in cols]]
    while any(len(c) > 2 for c in cols):
        nxt = [[] for _ in range(width)]
        for j, col in enumerate(cols):
            col = sorted(col, key=aig.level)
            k = 0
            while len(col) - k >= 3:
                s, c = full_adder(aig, col[k], col[k + 1], col[k + 2])
                nxt[j].append(s)
                if j + 1 < width:
                    nxt[j + 1].append(c)
                k += 3
            nxt[j].extend(col[k:])
        cols = [[x for x in c if x != CONST0] for c in nxt]
        stages.append([list(c) for c in cols])
    row0 = [c[0] if len(c) > 0 else CONST0 for c in cols]
    row1 = [c[1] if len(c) > 1 else CONST0 for c in cols]
    return row0, row1, stages


def build_booth_csa_multiplier(aig: Aig, a_bits, b_bits, result_width: int,
                               reduce: bool = True) -> CarrySavePair:
    """Booth radix-4 partial products reduced to a carry-save pair (no final adder).

    With ``reduce=False`` only the rows are built, for a caller that will add
    more rows before compressing (see fuse_mac).
    """
    rows = booth_partial_products(aig, a_bits, b_bits, result_width)
    leaves = list(a_bits) + list(b_bits)
    if not reduce:
        return CarrySavePair([], [], rows, operand_bits=leaves)
    s, c, stages = compress_rows(aig, rows, result_width)
    frag = measure(aig, s + c, leaves)
    return CarrySavePair(s, c, rows, stages, frag.internal_nodes, frag.depth, leaves)


def fuse_mac(aig: Aig, multiplier: CarrySavePair, addend_bits, arch: str = RIPPLE) -> BitNetlistFragment:
    """(a*b + c) mod 2^W: the addend enters the compressor as an extra initial row,
    leaving a single carry-propagate adder."""
    width = len(multiplier.rows[0])
    if len(addend_bits) != width:
        raise ValueError("addend width must equal the product width")
    rows = multiplier.rows + [list(addend_bits)]
    s, c, stages = compress_rows(aig, rows, width)
    out, _ = add_bits(aig, s, c, CONST0, arch)
    leaves = multiplier.operand_bits + list(addend_bits)
    return measure(aig, out, leaves, stages=stages)


def multiply(aig: Aig, a_bits, b_bits, arch: str = RIPPLE) -> list[int]:
    w = len(a_bits)
    pair = build_booth_csa_multiplier(aig, a_bits, b_bits, w)
    return add_bits(aig, pair.sum_bits, pair.carry_bits, CONST0, arch)[0]


def multiply_add(aig: Aig, a_bits, b_bits, c_bits, arch: str = RIPPLE) -> list[int]:
    w = len(c_bits)
    pair = build_booth_csa_multiplier(aig, a_bits, b_bits, w, reduce=False)
    return fuse_mac(aig, pair, c_bits, arch).outputs
