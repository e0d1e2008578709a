"""Two lowerings of the indexed part-select ``bus[index +: slice_width]``.

Both compute ``(bus >> index)[slice_width-1:0]`` with bits past the MSB read
as 0.  Bit lists are LSB first.
"""

from __future__ import annotations

from ..aig import CONST0, Aig
from .fragment import BitNetlistFragment, measure


def lower_indexed_select_shifter(aig: Aig, bus_bits, index_bits, slice_width: int) -> BitNetlistFragment:
    """Logarithmic barrel shifter: one full-bus-width 2:1 mux layer per index bit."""
    bus_bits, index_bits = list(bus_bits), list(index_bits)
    n = len(bus_bits)
    if not 1 <= slice_width <= n:
        raise ValueError(f"slice width {slice_width} not in 1..{n}")
    cur = bus_bits
    layers = []
    for j, s in enumerate(index_bits):
        step = 1 << j
        if step >= n:
            # every bit would shift out: the layer only clears
            cur = [aig.make_and(s ^ 1, x) for x in cur]
        else:
            cur = [aig.make_mux(s, cur[k + step] if k + step < n else CONST0, cur[k])
                   for k in range(n)]
        layers.append(list(cur))
    out = cur[:slice_width]
    return measure(aig, out, bus_bits + index_bits, layers=layers)


def lower_indexed_select_muxtree(aig: Aig, bus_bits, index_bits, slice_width: int) -> BitNetlistFragment:
    """Balanced tree of slice-wide 2:1 mux blocks over the candidate slices.

    Leaves are the candidate slices for each in-range index value.  The leaf
    level is keyed on the most significant in-range index bit and the root on
    the least significant one.  Index bits above the candidate range only
    enforce the zero result; they are folded into the root's select terms so
    they add no level on the data path.
    """
    bus_bits, index_bits = list(bus_bits), list(index_bits)
    n = len(bus_bits)
    if not 1 <= slice_width <= n:
        raise ValueError(f"slice width {slice_width} not in 1..{n}")
    ncand = min(n, 1 << len(index_bits))
    m = (ncand - 1).bit_length()  # index bits that address a candidate
    low, high = index_bits[:m], index_bits[m:]
    in_range = aig.make_and_tree([s ^ 1 for s in high])

    def candidate(v):
        return [bus_bits[v + k] if v + k < n else CONST0 for k in range(slice_width)]

    blocks = [candidate(v) for v in range(1 << m)]
    levels = [blocks]
    # reduce on index bits m-1 .. 1; bit 0 is handled together with the range mask
    for j in range(m - 1, 0, -1):
        half = len(blocks) // 2
        s = low[j]
        blocks = [[aig.make_mux(s, hi, lo) for hi, lo in zip(blocks[v + half], blocks[v])]
                  for v in range(half)]
        levels.append(blocks)
    if m == 0:
        out = [aig.make_and(in_range, x) for x in blocks[0]]
    else:
        s0 = low[0]
        pick_hi = aig.make_and(s0, in_range)
        pick_lo = aig.make_and(s0 ^ 1, in_range)
        out = [aig.make_or(aig.make_and(pick_hi, hi), aig.make_and(pick_lo, lo))
               for hi, lo in zip(blocks[1], blocks[0])]
    levels.append([out])
    return measure(aig, out, bus_bits + index_bits, levels=levels, candidates=ncand)


def lower_select(aig: Aig, bus_bits, index_bits, slice_width: int, strategy: str,
                 descending: bool = False) -> BitNetlistFragment:
    """``bus[index +: w]`` or, with ``descending``, ``bus[index -: w]``.

    A descending select is an ascending one over the bus padded with w-1 zero
    bits below bit 0.
    """
    bus_bits = list(bus_bits)
    if descending:
        bus_bits = [CONST0] * (slice_width - 1) + bus_bits
    fn = lower_indexed_select_muxtree if strategy == "muxtree" else lower_indexed_select_shifter
    return fn(aig, bus_bits, index_bits, slice_width)


def shift_right(aig: Aig, bits, amount_bits) -> list[int]:
    """Logical right shift through the barrel shifter; amounts >= width give 0."""
    return lower_indexed_select_shifter(aig, bits, amount_bits, len(bits)).outputs


def shift_left(aig: Aig, bits, amount_bits) -> list[int]:
    return shift_right(aig, list(reversed(bits)), amount_bits)[::-1]

