"""Elaboration: Ast -> width-checked WordLevelDesign.

Width rules:
  * arithmetic and bitwise operators, unary ~ and -, shift values and ternary
    arms take the width of their context (the target net); narrower operands
    are zero-extended, wider ones are an error
  * comparisons extend both sides to the wider one and yield 1 bit;
    reductions and ! yield 1 bit
  * concatenations, replications, selects, shift amounts, select indices and
    ternary conditions are sized by themselves
  * an unsized decimal has the minimal width that holds its value
"""

from __future__ import annotations

from ..errors import (
    CombinationalCycle, DeclarationError, MultipleDrivers, UndrivenNet, UnsupportedConstruct,
    WidthMismatch,
)
from ..ir import COMPARE, Register, Signal, WordLevelDesign, WordOp, apply_op, mask, sweep
from .ast import (
    Ast, Binary, BitSelect, Concat, Ident, IndexedPartSelect, Number, PartSelect, Port,
    Replicate, Ternary, Unary,
)

BINARY_KIND = {
    "+": "Add", "-": "Sub", "*": "Mul", "&": "And", "|": "Or", "^": "Xor",
    "<<": "Shl", ">>": "Shr",
    "==": "Eq", "!=": "Ne", "<": "Lt", "<=": "Le", ">": "Gt", ">=": "Ge",
}
REDUCE_KIND = {"&": "ReduceAnd", "|": "ReduceOr", "^": "ReduceXor"}


class _Builder:
    """Appends nodes in topological order with constant folding and CSE."""

    def __init__(self):
        self.nodes: list[WordOp] = []
        self.memo: dict = {}

    def add(self, kind, width, operands=(), params=(), name=None) -> int:
        operands, params = tuple(operands), tuple(params)
        if kind not in ("Input", "Reg", "Const"):
            ops = [self.nodes[o] for o in operands]
            if all(o.kind == "Const" for o in ops):
                v = apply_op(kind, width, params, [o.params[0] for o in ops], [o.width for o in ops])
                return self.const(width, v)
            if kind == "Mux" and ops[0].kind == "Const":
                return operands[1] if ops[0].params[0] else operands[2]
            if kind == "StaticSlice" and params == (ops[0].width - 1, 0):
                return operands[0]
        key = (kind, width, operands, params) if kind not in ("Input", "Reg") else None
        if key is not None and key in self.memo:
            return self.memo[key]
        i = len(self.nodes)
        self.nodes.append(WordOp(i, kind, width, operands, params, name))
        if key is not None:
            self.memo[key] = i
        return i

    def const(self, width, value) -> int:
        return self.add("Const", width, (), (value,))

    def width(self, i) -> int:
        return self.nodes[i].width

    def is_const(self, i) -> bool:
        return self.nodes[i].kind == "Const"

    def zext(self, i, width, span, what="operand") -> int:
        w = self.width(i)
        if w == width:
            return i
        if w > width:
            raise WidthMismatch(f"{what} is {w} bits wide but its context is {width} bits", span)
        if self.is_const(i):
            return self.const(width, self.nodes[i].params[0])
        return self.add("Concat", width, (self.const(width - w, 0), i))

    def to_bool(self, i) -> int:
        return i if self.width(i) == 1 else self.add("ReduceOr", 1, (i,))


class _Elaborator:
    def __init__(self, ast: Ast):
        self.ast = ast
        self.b = _Builder()
        self.decl = ast.declared()
        self.node_of: dict[str, int] = {}
        self.driver: dict[str, object] = {}
        self.visiting: list[str] = []
        self.regs: dict[str, int] = {}

    def run(self) -> WordLevelDesign:
        ast, b = self.ast, self.b
        for s in ast.seq_assigns:
            if s.target in self.driver:
                raise MultipleDrivers(f"register {s.target!r} is assigned more than once", s.span)
            self.driver[s.target] = s
        for a in ast.assigns:
            if a.target in self.driver:
                raise MultipleDrivers(f"net {a.target!r} has more than one driver", a.span)
            self.driver[a.target] = a

        clock = ast.seq_assigns[0].clock if ast.seq_assigns else None
        inputs = []
        for p in ast.ports:
            # the clock is implicit in the registers, not a data input
            if p.direction == "input" and p.name != clock:
                n = b.add("Input", p.width, name=p.name)
                self.node_of[p.name] = n
                inputs.append(Signal(p.name, p.width, n))
        for s in ast.seq_assigns:
            w = self.decl[s.target].width
            n = b.add("Reg", w, name=s.target)
            self.regs[s.target] = n
            self.node_of[s.target] = n

        # every non-input net must be driven, used or not
        for name, d in self.decl.items():
            if isinstance(d, Port) and d.direction == "input":
                continue
            if name not in self.driver:
                raise UndrivenNet(f"{name!r} has no driver", d.span)
        for a in ast.assigns:
            self.net(a.target, a.span)
        registers = []
        for s in ast.seq_assigns:
            w = self.decl[s.target].width
            nxt = self.expr(s.expr, w)
            registers.append(Register(s.target, w, self.regs[s.target], nxt))

        outputs = [Signal(p.name, p.width, self.net(p.name, p.span))
                   for p in ast.ports if p.direction == "output"]
        nets = {}
        for name, d in self.decl.items():
            if name == clock and name not in self.node_of:
                continue
            if name in self.node_of:
                nets[name] = (d.width, self.node_of[name])
        design = WordLevelDesign(ast.module, b.nodes, inputs, outputs, registers, nets, clock)
        design = sweep(design)
        design.validate()
        return design

    def net(self, name, span) -> int:
        if name in self.node_of:
            return self.node_of[name]
        if name in self.visiting:
            cycle = self.visiting[self.visiting.index(name):] + [name]
            raise CombinationalCycle("combinational cycle: " + " -> ".join(cycle),
                                     self.driver[name].span)
        d = self.decl.get(name)
        if d is None:
            raise DeclarationError(f"{name!r} is not declared", span)
        if name == self.clock_name():
            raise UnsupportedConstruct("clock used as data", span)
        drv = self.driver.get(name)
        if drv is None:
            raise UndrivenNet(f"{name!r} has no driver", span)
        self.visiting.append(name)
        n = self.expr(drv.expr, d.width)
        self.visiting.pop()
        self.node_of[name] = n
        return n

    def clock_name(self):
        return self.ast.seq_assigns[0].clock if self.ast.seq_assigns else None

    # -- width computation --------------------------------------------------

    def self_width(self, e) -> int:
        if isinstance(e, Ident):
            return self.decl[e.name].width
        if isinstance(e, Number):
            return self.number_width(e)
        if isinstance(e, Unary):
            return 1 if e.op in ("!", "&", "|", "^") else self.self_width(e.operand)
        if isinstance(e, Binary):
            if BINARY_KIND[e.op] in COMPARE:
                return 1
            if e.op in ("<<", ">>"):
                return self.self_width(e.left)
            return max(self.self_width(e.left), self.self_width(e.right))
        if isinstance(e, Ternary):
            return max(self.self_width(e.then), self.self_width(e.other))
        if isinstance(e, Concat):
            return sum(self.self_width(x) for x in e.items)
        if isinstance(e, Replicate):
            return e.count * self.self_width(e.item)
        if isinstance(e, BitSelect):
            return 1
        if isinstance(e, PartSelect):
            return e.hi - e.lo + 1
        if isinstance(e, IndexedPartSelect):
            return e.width
        raise TypeError(e)

    def number_width(self, e: Number) -> int:
        if e.width is None:
            return max(1, e.value.bit_length())
        if e.value > mask(e.width):
            raise WidthMismatch(f"constant {e.value} does not fit in {e.width} bits", e.span)
        return e.width

    # -- expressions ----------------------------------------------------------

    def expr(self, e, width) -> int:
        """Node for ``e`` evaluated in a context of ``width`` bits."""
        b = self.b
        if isinstance(e, Binary) and BINARY_KIND[e.op] not in COMPARE:
            kind = BINARY_KIND[e.op]
            left = self.expr(e.left, width)
            if kind in ("Shl", "Shr"):
                amount = self.expr(e.right, self.self_width(e.right))
                return b.add(kind, width, (left, amount))
            right = self.expr(e.right, width)
            return b.add(kind, width, (left, right))
        if isinstance(e, Unary) and e.op in ("~", "-"):
            kind = "Not" if e.op == "~" else "Neg"
            return b.add(kind, width, (self.expr(e.operand, width),))
        if isinstance(e, Ternary):
            cond = b.to_bool(self.expr(e.cond, self.self_width(e.cond)))
            return b.add("Mux", width, (cond, self.expr(e.then, width), self.expr(e.other, width)))
        return b.zext(self.self_sized(e), width, e.span)

    def self_sized(self, e) -> int:
        b = self.b
        if isinstance(e, Ident):
            return self.net(e.name, e.span)
        if isinstance(e, Number):
            return b.const(self.number_width(e), e.value)
        if isinstance(e, Unary):
            if e.op in ("~", "-"):
                return self.expr(e, self.self_width(e))
            x = self.expr(e.operand, self.self_width(e.operand))
            if e.op == "!":
                return b.add("Eq", 1, (x, b.const(b.width(x), 0)))
            return b.add(REDUCE_KIND[e.op], 1, (x,))
        if isinstance(e, Binary):
            kind = BINARY_KIND[e.op]
            if kind in COMPARE:
                w = max(self.self_width(e.left), self.self_width(e.right))
                return b.add(kind, 1, (self.expr(e.left, w), self.expr(e.right, w)))
            return self.expr(e, self.self_width(e))
        if isinstance(e, Ternary):
            return self.expr(e, self.self_width(e))
        if isinstance(e, Concat):
            items = [self.expr(x, self.self_width(x)) for x in e.items]
            if len(items) == 1:
                return items[0]
            return b.add("Concat", sum(b.width(i) for i in items), items)
        if isinstance(e, Replicate):
            if e.count < 1:
                raise WidthMismatch("replication count must be positive", e.span)
            x = self.expr(e.item, self.self_width(e.item))
            if e.count == 1:
                return x
            return b.add("Replicate", e.count * b.width(x), (x,), (e.count,))
        if isinstance(e, PartSelect):
            x = self.net(e.name, e.span)
            w = b.width(x)
            if not 0 <= e.lo <= e.hi < w:
                raise WidthMismatch(f"part-select [{e.hi}:{e.lo}] out of range for "
                                    f"{e.name!r} ({w} bits)", e.span)
            return b.add("StaticSlice", e.hi - e.lo + 1, (x,), (e.hi, e.lo))
        if isinstance(e, BitSelect):
            x = self.net(e.name, e.span)
            idx = self.expr(e.index, self.self_width(e.index))
            if b.is_const(idx):
                i = b.nodes[idx].params[0]
                return b.add("StaticSlice", 1, (x,), (i, i)) if i < b.width(x) else b.const(1, 0)
            return b.add("BitSelect", 1, (x, idx))
        if isinstance(e, IndexedPartSelect):
            x = self.net(e.name, e.span)
            w = b.width(x)
            if not 1 <= e.width <= w:
                raise WidthMismatch(f"slice width {e.width} not in 1..{w} for {e.name!r}", e.span)
            idx = self.expr(e.index, self.self_width(e.index))
            if b.is_const(idx):
                i = b.nodes[idx].params[0]
                lo = i - (e.width - 1) if e.descending else i
                if 0 <= lo and lo + e.width <= w:
                    return b.add("StaticSlice", e.width, (x,), (lo + e.width - 1, lo))
            kind = "IndexedSliceDown" if e.descending else "IndexedSliceUp"
            return b.add(kind, e.width, (x, idx), (e.width,))
        raise TypeError(e)


def elaborate(ast: Ast) -> WordLevelDesign:
    """Resolve widths, fold constants and order nodes topologically."""
    return _Elaborator(ast).run()
