"""Bit-blasting of a WordLevelDesign into an Aig."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..aig import CONST0, CONST1, Aig, bit_name
from ..ir import WordLevelDesign, fuse_mac_sites
from . import arith
from .select import lower_select, shift_left, shift_right


class PartSelectStrategy(str, Enum):
    SHIFTER = "shifter"
    MUXTREE = "muxtree"


class FinalAdder(str, Enum):
    RIPPLE = "ripple"
    PREFIX = "prefix"


class Multiplier(str, Enum):
    BOOTH_RADIX4_CSA = "booth-radix4-csa"


@dataclass(frozen=True)
class LoweringOptions:
    part_select_strategy: PartSelectStrategy = PartSelectStrategy.SHIFTER
    mac_fusion: bool = False
    final_adder: FinalAdder = FinalAdder.RIPPLE
    multiplier: Multiplier = Multiplier.BOOTH_RADIX4_CSA

    def __post_init__(self):
        # accept plain strings for convenience, reject anything else
        object.__setattr__(self, "part_select_strategy", PartSelectStrategy(self.part_select_strategy))
        object.__setattr__(self, "final_adder", FinalAdder(self.final_adder))
        object.__setattr__(self, "multiplier", Multiplier(self.multiplier))


def lower_design(design: WordLevelDesign, opts: LoweringOptions | None = None) -> Aig:
    """One PI per input bit, one latch per register bit, one PO per output bit."""
    opts = opts or LoweringOptions()
    if opts.mac_fusion:
        design = fuse_mac_sites(design)
    aig = Aig()
    arch = opts.final_adder.value
    strategy = opts.part_select_strategy.value
    bits: list[list[int] | None] = [None] * len(design.nodes)
    input_nodes = {s.node: s for s in design.inputs}
    reg_nodes = {r.state: (i, r) for i, r in enumerate(design.registers)}

    # sources first so PI and latch numbering follows declaration order
    for s in design.inputs:
        bits[s.node] = [aig.add_input(bit_name(s.name, s.width, i)) for i in range(s.width)]
    latch_base = []
    for r in design.registers:
        latch_base.append(aig.num_latches)
        bits[r.state] = [aig.add_latch(bit_name(r.name, r.width, i)) for i in range(r.width)]

    for op in design.nodes:
        if op.id in input_nodes or op.id in reg_nodes:
            continue
        v = [bits[o] for o in op.operands]
        bits[op.id] = _lower_op(aig, op, v, design, arch, strategy)
        assert len(bits[op.id]) == op.width, op

    for s in design.outputs:
        for i, lit in enumerate(bits[s.node]):
            aig.add_output(lit, bit_name(s.name, s.width, i))
    for base, r in zip(latch_base, design.registers):
        for i, lit in enumerate(bits[r.next]):
            aig.set_latch_next(base + i, lit)
    return aig


def _lower_op(aig: Aig, op, v, design, arch, strategy) -> list[int]:
    k, w = op.kind, op.width
    if k == "Const":
        return [CONST1 if (op.params[0] >> i) & 1 else CONST0 for i in range(w)]
    if k == "Not":
        return [x ^ 1 for x in v[0]]
    if k == "And":
        return [aig.make_and(x, y) for x, y in zip(v[0], v[1])]
    if k == "Or":
        return [aig.make_or(x, y) for x, y in zip(v[0], v[1])]
    if k == "Xor":
        return [aig.make_xor(x, y) for x, y in zip(v[0], v[1])]
    if k == "Neg":
        return arith.neg_bits(aig, v[0], arch)
    if k == "Add":
        return arith.add_bits(aig, v[0], v[1], CONST0, arch)[0]
    if k == "Sub":
        return arith.sub_bits(aig, v[0], v[1], arch)
    if k == "Mul":
        return arith.multiply(aig, v[0], v[1], arch)
    if k == "Fma":
        return arith.multiply_add(aig, v[0], v[1], v[2], arch)
    if k in ("Eq", "Ne"):
        e = arith.equal(aig, v[0], v[1])
        return [e if k == "Eq" else e ^ 1]
    if k == "Lt":
        return [arith.less_than(aig, v[0], v[1], arch)]
    if k == "Gt":
        return [arith.less_than(aig, v[1], v[0], arch)]
    if k == "Le":
        return [arith.less_than(aig, v[1], v[0], arch) ^ 1]
    if k == "Ge":
        return [arith.less_than(aig, v[0], v[1], arch) ^ 1]
    if k == "ReduceAnd":
        return [aig.make_and_tree(v[0])]
    if k == "ReduceOr":
        return [aig.make_or_tree(v[0])]
    if k == "ReduceXor":
        return [aig.make_xor_tree(v[0])]
    if k == "Shl":
        return shift_left(aig, v[0], v[1])
    if k == "Shr":
        return shift_right(aig, v[0], v[1])
    if k == "Mux":
        s = v[0][0]
        return [aig.make_mux(s, x, y) for x, y in zip(v[1], v[2])]
    if k == "Concat":
        out = []
        for x in reversed(v):
            out.extend(x)
        return out
    if k == "Replicate":
        return list(v[0]) * op.params[0]
    if k == "StaticSlice":
        hi, lo = op.params
        return list(v[0][lo:hi + 1])
    if k == "IndexedSliceUp":
        return lower_select(aig, v[0], v[1], w, strategy).outputs
    if k == "IndexedSliceDown":
        return lower_select(aig, v[0], v[1], w, strategy, descending=True).outputs
    if k == "BitSelect":
        return lower_select(aig, v[0], v[1], 1, strategy).outputs
    raise ValueError(f"cannot lower {k}")
