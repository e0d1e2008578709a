"""Width-annotated word-level dataflow IR and its reference evaluator.

Nodes are stored in topological order; every operand id is smaller than the
id of its user.  Register state nodes (kind ``Reg``) are leaves, so the graph
is acyclic even for designs with feedback through registers.

Operand conventions:
  Concat       operands most significant first
  Mux          (select, then, else), select is 1 bit
  Shl/Shr      (value, amount)
  BitSelect    (value, index)
  IndexedSlice (value, index), params (slice_width,)
  StaticSlice  (value,), params (hi, lo)
  Replicate    (value,), params (count,)
  Fma          (a, b, c) computing a*b + c, produced by fuse_mac_sites
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MissingInput, WidthMismatch

LEAF_KINDS = ("Input", "Reg", "Const")
BITWISE = ("And", "Or", "Xor")
ARITH = ("Add", "Sub", "Mul")
COMPARE = ("Eq", "Ne", "Lt", "Le", "Gt", "Ge")
REDUCE = ("ReduceAnd", "ReduceOr", "ReduceXor")
KINDS = LEAF_KINDS + ("Not", "Neg") + BITWISE + ARITH + COMPARE + REDUCE + (
    "Shl", "Shr", "Mux", "Concat", "Replicate", "StaticSlice",
    "IndexedSliceUp", "IndexedSliceDown", "BitSelect", "Fma",
)


def mask(width: int) -> int:
    return (1 << width) - 1


@dataclass(frozen=True)
class BitVectorValue:
    width: int
    value: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be positive")
        if not 0 <= self.value <= mask(self.width):
            raise WidthMismatch(f"value {self.value} does not fit in {self.width} bits")

    def __int__(self):
        return self.value

    __index__ = __int__


@dataclass(frozen=True)
class WordOp:
    id: int
    kind: str
    width: int
    operands: tuple[int, ...] = ()
    params: tuple[int, ...] = ()
    name: str | None = None


@dataclass(frozen=True)
class Signal:
    name: str
    width: int
    node: int


@dataclass(frozen=True)
class Register:
    name: str
    width: int
    state: int  # the Reg leaf node
    next: int   # node computing the next value


@dataclass(frozen=True)
class MacSite:
    mul_node: int
    addend_node: int
    add_node: int


@dataclass
class WordLevelDesign:
    name: str
    nodes: list[WordOp]
    inputs: list[Signal]
    outputs: list[Signal]
    registers: list[Register] = field(default_factory=list)
    nets: dict[str, tuple[int, int]] = field(default_factory=dict)
    clock: str | None = None

    def node(self, i: int) -> WordOp:
        return self.nodes[i]

    def width_of(self, i: int) -> int:
        return self.nodes[i].width

    def input_bits(self) -> int:
        return sum(s.width for s in self.inputs)

    def state_bits(self) -> int:
        return sum(r.width for r in self.registers)

    def roots(self) -> list[int]:
        return [s.node for s in self.outputs] + [r.next for r in self.registers]

    def users(self) -> list[int]:
        """Use count per node; outputs and register inputs count as users."""
        count = [0] * len(self.nodes)
        for op in self.nodes:
            for o in op.operands:
                count[o] += 1
        for r in self.roots():
            count[r] += 1
        return count

    def validate(self) -> None:
        for i, op in enumerate(self.nodes):
            if op.id != i:
                raise ValueError(f"node {i} carries id {op.id}")
            if op.kind not in KINDS:
                raise ValueError(f"unknown kind {op.kind}")
            if op.width < 1:
                raise ValueError(f"node {i} has width {op.width}")
            for o in op.operands:
                if not 0 <= o < i:
                    raise ValueError(f"node {i} uses operand {o} out of topological order")
            _check_widths(op, [self.nodes[o].width for o in op.operands])
        for s in self.outputs:
            if self.nodes[s.node].width != s.width:
                raise WidthMismatch(f"output {s.name} width {s.width} != node width")
        for r in self.registers:
            if self.nodes[r.next].width != r.width or self.nodes[r.state].width != r.width:
                raise WidthMismatch(f"register {r.name} width mismatch")


def _check_widths(op: WordOp, ow: list[int]) -> None:
    k, w = op.kind, op.width

    def bad(msg):
        raise WidthMismatch(f"%{op.id} {k}: {msg}")

    if k in ("Not", "Neg") + BITWISE + ARITH and any(x != w for x in ow):
        bad(f"operand widths {ow} differ from result width {w}")
    if k in COMPARE and (w != 1 or ow[0] != ow[1]):
        bad("comparison needs equal operand widths and a 1-bit result")
    if k in REDUCE and w != 1:
        bad("reduction result must be 1 bit")
    if k in ("Shl", "Shr") and ow[0] != w:
        bad("shifted value must have the result width")
    if k == "Mux" and (ow[0] != 1 or ow[1] != w or ow[2] != w):
        bad("mux needs a 1-bit select and arms of the result width")
    if k == "Concat" and sum(ow) != w:
        bad("width is not the sum of operand widths")
    if k == "Replicate" and op.params[0] * ow[0] != w:
        bad("width is not count times operand width")
    if k == "StaticSlice":
        hi, lo = op.params
        if not 0 <= lo <= hi < ow[0] or w != hi - lo + 1:
            bad(f"bounds [{hi}:{lo}] invalid for width {ow[0]}")
    if k in ("IndexedSliceUp", "IndexedSliceDown") and not (1 <= w <= ow[0] and op.params[0] == w):
        bad("slice width must be between 1 and the operand width")
    if k == "BitSelect" and w != 1:
        bad("bit select result must be 1 bit")
    if k == "Fma" and any(x != w for x in ow):
        bad("fma operands must have the result width")


# -- scalar semantics ------------------------------------------------------

def apply_op(kind: str, width: int, params, vals, widths) -> int:
    """Value of one operator on Python ints (shared by evaluation and folding)."""
    m = mask(width)
    if kind == "Not":
        return ~vals[0] & m
    if kind == "Neg":
        return -vals[0] & m
    if kind == "And":
        return vals[0] & vals[1]
    if kind == "Or":
        return vals[0] | vals[1]
    if kind == "Xor":
        return vals[0] ^ vals[1]
    if kind == "Add":
        return (vals[0] + vals[1]) & m
    if kind == "Sub":
        return (vals[0] - vals[1]) & m
    if kind == "Mul":
        return (vals[0] * vals[1]) & m
    if kind == "Fma":
        return (vals[0] * vals[1] + vals[2]) & m
    if kind in COMPARE:
        a, b = vals
        return int({"Eq": a == b, "Ne": a != b, "Lt": a < b,
                    "Le": a <= b, "Gt": a > b, "Ge": a >= b}[kind])
    if kind == "ReduceAnd":
        return int(vals[0] == mask(widths[0]))
    if kind == "ReduceOr":
        return int(vals[0] != 0)
    if kind == "ReduceXor":
        return bin(vals[0]).count("1") & 1
    if kind == "Shl":
        return 0 if vals[1] >= width else (vals[0] << vals[1]) & m
    if kind == "Shr":
        return 0 if vals[1] >= width else vals[0] >> vals[1]
    if kind == "Mux":
        return vals[1] if vals[0] else vals[2]
    if kind == "Concat":
        acc = 0
        for v, w in zip(vals, widths):
            acc = (acc << w) | v
        return acc
    if kind == "Replicate":
        acc = 0
        for _ in range(params[0]):
            acc = (acc << widths[0]) | vals[0]
        return acc
    if kind == "StaticSlice":
        hi, lo = params
        return (vals[0] >> lo) & mask(hi - lo + 1)
    if kind == "IndexedSliceUp":
        x, i = vals
        return 0 if i >= widths[0] else (x >> i) & m
    if kind == "IndexedSliceDown":
        # x[i -: W] covers bits i .. i-W+1; positions below 0 or above the MSB read 0
        x, i = vals
        lo = i - (width - 1)
        if lo >= widths[0]:
            return 0
        return ((x >> lo) if lo >= 0 else (x << -lo)) & m
    if kind == "BitSelect":
        x, i = vals
        return (x >> i) & 1 if i < widths[0] else 0
    raise ValueError(f"cannot apply {kind}")


def _coerce(name, width, v):
    if isinstance(v, BitVectorValue):
        if v.width != width:
            raise WidthMismatch(f"{name}: expected {width} bits, got {v.width}")
        return v.value
    v = int(v)
    if not 0 <= v <= mask(width):
        raise WidthMismatch(f"{name}: value {v} does not fit in {width} bits")
    return v


def evaluate(design: WordLevelDesign, input_values, register_state=None):
    """One clock cycle: returns (outputs, next register state) as BitVectorValues.

    ``register_state`` defaults to all registers at zero.
    """
    vals: list[int] = [0] * len(design.nodes)
    given = {}
    for s in design.inputs:
        if s.name not in input_values:
            raise MissingInput(s.name)
        given[s.node] = _coerce(s.name, s.width, input_values[s.name])
    for r in design.registers:
        if register_state is None:
            given[r.state] = 0
        elif r.name not in register_state:
            raise MissingInput(r.name)
        else:
            given[r.state] = _coerce(r.name, r.width, register_state[r.name])
    for op in design.nodes:
        if op.kind == "Const":
            vals[op.id] = op.params[0]
        elif op.kind in ("Input", "Reg"):
            vals[op.id] = given[op.id]
        else:
            vals[op.id] = apply_op(op.kind, op.width, op.params,
                                   [vals[o] for o in op.operands],
                                   [design.nodes[o].width for o in op.operands])
    outs = {s.name: BitVectorValue(s.width, vals[s.node]) for s in design.outputs}
    nxt = {r.name: BitVectorValue(r.width, vals[r.next]) for r in design.registers}
    return outs, nxt


# -- vectorized semantics --------------------------------------------------

def _popcount_parity(x, big):
    if big:
        return np.array([bin(int(v)).count("1") & 1 for v in x], dtype=object)
    return (np.bitwise_count(x) & np.uint8(1)).astype(np.uint64)


def evaluate_batch(design: WordLevelDesign, inputs, state=None):
    """Evaluate many stimuli at once.

    ``inputs``/``state`` map names to equal-length integer arrays.  uint64
    arithmetic is used when every node fits in 64 bits, Python ints otherwise.
    Returns (outputs, next_state) as dicts of arrays.
    """
    big = any(op.width > 64 for op in design.nodes)
    dtype = object if big else np.uint64
    n = None
    for s in design.inputs:
        if s.name not in inputs:
            raise MissingInput(s.name)
        n = len(inputs[s.name])
    if n is None:
        n = len(next(iter(state.values()))) if state else 1

    def conv(a):
        if big:
            return np.array([int(v) for v in a], dtype=object)
        return np.asarray(a).astype(np.uint64)

    def const(v):
        return np.full(n, v if big else np.uint64(v), dtype=dtype)

    zero, one = const(0), const(1)
    vals = [None] * len(design.nodes)
    leaf = {}
    for s in design.inputs:
        leaf[s.node] = conv(inputs[s.name])
    for r in design.registers:
        if state is None:
            leaf[r.state] = zero
        elif r.name not in state:
            raise MissingInput(r.name)
        else:
            leaf[r.state] = conv(state[r.name])

    def msk(w):
        return mask(w) if big else np.uint64(mask(w))

    def shift_amount(s, limit):
        # clamp so that no shift exceeds the machine word; caller masks the result
        return np.where(s >= limit, 0, s) if big else np.minimum(s, np.uint64(63))

    def b2v(c):
        return np.where(c, one, zero)

    for op in design.nodes:
        k, w = op.kind, op.width
        if k == "Const":
            vals[op.id] = const(op.params[0])
            continue
        if k in ("Input", "Reg"):
            vals[op.id] = leaf[op.id]
            continue
        v = [vals[o] for o in op.operands]
        ow = [design.nodes[o].width for o in op.operands]
        m = msk(w)
        if k == "Not":
            r = ~v[0] & m if not big else np.array([~int(x) & m for x in v[0]], dtype=object)
        elif k == "Neg":
            r = (zero - v[0]) & m if not big else np.array([-int(x) & m for x in v[0]], dtype=object)
        elif k == "And":
            r = v[0] & v[1]
        elif k == "Or":
            r = v[0] | v[1]
        elif k == "Xor":
            r = v[0] ^ v[1]
        elif k == "Add":
            r = (v[0] + v[1]) & m
        elif k == "Sub":
            r = (v[0] - v[1]) & m if not big else np.array(
                [(int(a) - int(b)) & m for a, b in zip(v[0], v[1])], dtype=object)
        elif k == "Mul":
            r = (v[0] * v[1]) & m
        elif k == "Fma":
            r = (v[0] * v[1] + v[2]) & m
        elif k == "Eq":
            r = b2v(v[0] == v[1])
        elif k == "Ne":
            r = b2v(v[0] != v[1])
        elif k == "Lt":
            r = b2v(v[0] < v[1])
        elif k == "Le":
            r = b2v(v[0] <= v[1])
        elif k == "Gt":
            r = b2v(v[0] > v[1])
        elif k == "Ge":
            r = b2v(v[0] >= v[1])
        elif k == "ReduceAnd":
            r = b2v(v[0] == msk(ow[0]))
        elif k == "ReduceOr":
            r = b2v(v[0] != 0)
        elif k == "ReduceXor":
            r = _popcount_parity(v[0], big)
        elif k in ("Shl", "Shr"):
            s = shift_amount(v[1], w)
            shifted = (v[0] << s) & m if k == "Shl" else v[0] >> s
            r = np.where(v[1] >= w, zero, shifted)
        elif k == "Mux":
            r = np.where(v[0] != 0, v[1], v[2])
        elif k == "Concat":
            r = v[0]
            for x, xw in zip(v[1:], ow[1:]):
                r = (r << (xw if big else np.uint64(xw))) | x
        elif k == "Replicate":
            r = v[0]
            for _ in range(op.params[0] - 1):
                r = (r << (ow[0] if big else np.uint64(ow[0]))) | v[0]
        elif k == "StaticSlice":
            hi, lo = op.params
            r = (v[0] >> (lo if big else np.uint64(lo))) & msk(hi - lo + 1)
        elif k in ("IndexedSliceUp", "BitSelect"):
            s = shift_amount(v[1], ow[0])
            r = np.where(v[1] >= ow[0], zero, (v[0] >> s) & m)
        elif k == "IndexedSliceDown":
            idx = v[1]
            up = idx >= w - 1  # the slice starts at bit idx-(w-1) >= 0
            if big:
                lo = np.array([int(i) - (w - 1) for i in idx], dtype=object)
                r = np.array([0 if l >= ow[0] else ((int(x) >> l) if l >= 0 else (int(x) << -l)) & m
                              for x, l in zip(v[0], lo)], dtype=object)
            else:
                wm1 = np.uint64(w - 1)
                lo = np.where(up, idx - np.where(up, wm1, idx), np.uint64(0))
                left = np.where(up, np.uint64(0), wm1 - np.where(up, wm1, idx))
                r = np.where(lo >= ow[0], zero,
                             ((v[0] >> np.minimum(lo, np.uint64(63))) << left) & m)
        else:
            raise ValueError(f"cannot evaluate {k}")
        vals[op.id] = r
    outs = {s.name: vals[s.node] for s in design.outputs}
    nxt = {r.name: vals[r.next] for r in design.registers}
    return outs, nxt


# -- accessors ---------------------------------------------------------------

def width_of(node: WordOp) -> int:
    return node.width


def topo_order(design: WordLevelDesign) -> list[WordOp]:
    """Nodes in a valid topological order; stable because storage order is one."""
    return list(design.nodes)


# -- MAC detection and fusion -------------------------------------------------

def detect_mac_sites(design: WordLevelDesign) -> list[MacSite]:
    """Add nodes fed by a same-width, single-user Mul (either operand order)."""
    users = design.users()
    sites = []
    for op in design.nodes:
        if op.kind != "Add":
            continue
        for pos in (0, 1):
            m = design.nodes[op.operands[pos]]
            if m.kind == "Mul" and m.width == op.width and users[m.id] == 1:
                sites.append(MacSite(m.id, op.operands[1 - pos], op.id))
                break
    return sites


def fuse_mac_sites(design: WordLevelDesign, sites=None) -> WordLevelDesign:
    """Replace each site's Add by an Fma node; the absorbed Mul becomes dead and is dropped."""
    if sites is None:
        sites = detect_mac_sites(design)
    by_add = {s.add_node: s for s in sites}
    nodes = []
    for op in design.nodes:
        s = by_add.get(op.id)
        if s is not None:
            a, b = design.nodes[s.mul_node].operands
            op = WordOp(op.id, "Fma", op.width, (a, b, s.addend_node), (), op.name)
        nodes.append(op)
    fused = WordLevelDesign(design.name, nodes, list(design.inputs), list(design.outputs),
                            list(design.registers), dict(design.nets), design.clock)
    return sweep(fused)


def sweep(design: WordLevelDesign) -> WordLevelDesign:
    """Drop nodes unreachable from outputs and registers; renumber densely."""
    live = set()
    stack = design.roots() + [s.node for s in design.inputs] + [r.state for r in design.registers]
    while stack:
        i = stack.pop()
        if i in live:
            continue
        live.add(i)
        stack.extend(design.nodes[i].operands)
    remap = {}
    nodes = []
    for op in design.nodes:
        if op.id in live:
            remap[op.id] = len(nodes)
            nodes.append(WordOp(len(nodes), op.kind, op.width,
                                tuple(remap[o] for o in op.operands), op.params, op.name))
    inputs = [Signal(s.name, s.width, remap[s.node]) for s in design.inputs]
    outputs = [Signal(s.name, s.width, remap[s.node]) for s in design.outputs]
    regs = [Register(r.name, r.width, remap[r.state], remap[r.next]) for r in design.registers]
    nets = {k: (w, remap[n]) for k, (w, n) in design.nets.items() if n in remap}
    return WordLevelDesign(design.name, nodes, inputs, outputs, regs, nets, design.clock)


# -- text dump -------------------------------------------------------------

def dump(design: WordLevelDesign) -> str:
    """Canonical text form, one node per line: ``%id = Kind(width) %a %b [params]``."""
    lines = [f"design {design.name}"]
    for op in design.nodes:
        parts = [f"%{op.id} = {op.kind}({op.width})"]
        parts += [f"%{o}" for o in op.operands]
        if op.params:
            parts.append("[" + ", ".join(str(p) for p in op.params) + "]")
        if op.name is not None and op.kind in ("Input", "Reg"):
            parts.append(f'"{op.name}"')
        lines.append(" ".join(parts))
    for s in design.outputs:
        lines.append(f"output {s.name}({s.width}) = %{s.node}")
    for r in design.registers:
        lines.append(f"register {r.name}({r.width}) <= %{r.next}")
    return "\n".join(lines) + "\n"
