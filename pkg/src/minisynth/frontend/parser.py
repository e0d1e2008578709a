"""Recursive-descent parser for the synthesizable Verilog subset."""

from __future__ import annotations

from ..errors import DeclarationError, ParseError, UnsupportedConstruct
from .ast import (
    Ast, Binary, BitSelect, Concat, ContinuousAssign, Ident, IndexedPartSelect,
    NetDecl, Number, PartSelect, Port, Replicate, SequentialAssign, Ternary, Unary,
)
from .lexer import Token, tokenize

# binary operators from loosest to tightest binding
BINARY_LEVELS = [
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*",),
]
UNARY_OPS = ("~", "!", "-", "&", "|", "^")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.full_selects = []

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text, kind=None) -> bool:
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "eof"

    def accept(self, text) -> Token | None:
        if self.at(text) and self.tok.kind in ("op", "kw"):
            return self.next()
        return None

    def expect(self, text) -> Token:
        t = self.tok
        if t.text != text or t.kind not in ("op", "kw"):
            raise ParseError(f"expected {text!r}, found {_describe(t)}", t.span)
        return self.next()

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "id":
            raise ParseError(f"expected identifier, found {_describe(t)}", t.span)
        return self.next()

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num" or t.value[0] is not None:
            raise ParseError(f"expected an unsized integer, found {_describe(t)}", t.span)
        self.next()
        return t.value[1]

    # -- module structure --------------------------------------------------

    def module(self) -> Ast:
        start = self.expect("module")
        name = self.ident().text
        ports: dict[str, Port] = {}
        order: list[str] = []
        header_names: list[tuple[str, object]] = []
        nets: dict[str, NetDecl] = {}
        assigns: list[ContinuousAssign] = []
        seqs: list[SequentialAssign] = []
        ansi = False

        def declare(table, item):
            if item.name in ports or item.name in nets:
                raise DeclarationError(f"{item.name!r} declared more than once", item.span)
            table[item.name] = item

        if self.accept("("):
            if not self.at(")"):
                if self.tok.text in ("input", "output") and self.tok.kind == "kw":
                    ansi = True
                    direction, is_reg, width = None, False, 1
                    while True:
                        if self.tok.kind == "kw" and self.tok.text in ("input", "output"):
                            direction, is_reg, width = self._port_head()
                        elif direction is None:
                            raise ParseError("expected port direction", self.tok.span)
                        t = self.ident()
                        p = Port(t.text, direction, width, is_reg, t.span)
                        declare(ports, p)
                        order.append(p.name)
                        if not self.accept(","):
                            break
                else:
                    while True:
                        t = self.ident()
                        header_names.append((t.text, t.span))
                        if not self.accept(","):
                            break
            self.expect(")")
        self.expect(";")

        while not self.at("endmodule", "kw"):
            t = self.tok
            if t.kind == "eof":
                raise ParseError("missing 'endmodule'", t.span)
            if t.kind == "kw" and t.text in ("input", "output"):
                if ansi:
                    raise ParseError("port redeclared in body of an ANSI-style module", t.span)
                direction, is_reg, width = self._port_head()
                while True:
                    n = self.ident()
                    p = Port(n.text, direction, width, is_reg, n.span)
                    if p.name not in {h for h, _ in header_names}:
                        raise DeclarationError(f"{p.name!r} is not in the port list", n.span)
                    declare(ports, p)
                    if not self.accept(","):
                        break
                self.expect(";")
            elif t.kind == "kw" and t.text in ("wire", "reg"):
                self.next()
                width = self._range()
                while True:
                    n = self.ident()
                    existing = ports.get(n.text)
                    if t.text == "reg" and existing is not None and existing.direction == "output" \
                            and not existing.is_reg and not ansi and existing.width == width:
                        ports[n.text] = Port(existing.name, "output", width, True, existing.span)
                    elif t.text == "wire" and existing is not None and not ansi \
                            and existing.width == width and not existing.is_reg:
                        pass  # `output y; wire y;` adds nothing
                    else:
                        declare(nets, NetDecl(n.text, width, t.text, n.span))
                    if self.accept("="):
                        if t.text == "reg":
                            raise UnsupportedConstruct("reg initializer", n.span)
                        assigns.append(ContinuousAssign(n.text, self.expr(), n.span))
                    if not self.accept(","):
                        break
                self.expect(";")
            elif t.kind == "kw" and t.text == "assign":
                self.next()
                while True:
                    target = self._lvalue()
                    self.expect("=")
                    assigns.append(ContinuousAssign(target.text, self.expr(), target.span))
                    if not self.accept(","):
                        break
                self.expect(";")
            elif t.kind == "kw" and t.text == "always":
                seqs.extend(self._always())
            elif t.kind == "id" and self.peek().kind == "id":
                raise UnsupportedConstruct("module instantiation", t.span)
            else:
                raise ParseError(f"unexpected {_describe(t)} in module body", t.span)
        self.expect("endmodule")
        if self.tok.kind != "eof":
            if self.at("module", "kw"):
                raise UnsupportedConstruct("multiple modules", self.tok.span)
            raise ParseError(f"trailing {_describe(self.tok)} after endmodule", self.tok.span)

        decl = {**ports, **nets}
        for name, hi, lo, sp in self.full_selects:
            d = decl.get(name)
            if d is not None and (lo != 0 or hi != d.width - 1):
                raise UnsupportedConstruct("partial assignment target", sp)
        if not ansi:
            for h, sp in header_names:
                if h not in ports:
                    raise DeclarationError(f"port {h!r} has no direction declaration", sp)
            order = [h for h, _ in header_names]
        return Ast(name, tuple(ports[n] for n in order), tuple(nets.values()),
                   tuple(assigns), tuple(seqs), start.span)

    def _port_head(self):
        direction = self.next().text
        is_reg = False
        if self.accept("reg"):
            if direction == "input":
                raise ParseError("inputs cannot be reg", self.toks[self.i - 1].span)
            is_reg = True
        elif self.accept("wire"):
            pass
        return direction, is_reg, self._range()

    def _range(self) -> int:
        if not self.at("["):
            return 1
        sp = self.next().span
        hi = self.integer()
        self.expect(":")
        lo = self.integer()
        self.expect("]")
        if lo != 0:
            raise UnsupportedConstruct("range with non-zero LSB", sp)
        return hi + 1

    def _lvalue(self) -> Token:
        t = self.ident()
        if self.at("["):
            # only a select covering the whole net is accepted: y[7:0] = ...
            sp = self.next().span
            if self.tok.kind == "num" and self.peek().text == ":":
                hi = self.integer()
                self.expect(":")
                lo = self.integer()
                self.expect("]")
                self.full_selects.append((t.text, hi, lo, sp))
                return t
            raise UnsupportedConstruct("select on assignment target", sp)
        if self.at("{"):
            raise UnsupportedConstruct("concatenation on assignment target", self.tok.span)
        return t

    def _always(self) -> list[SequentialAssign]:
        self.expect("always")
        at = self.expect("@")
        self.expect("(")
        if self.at("*"):
            raise UnsupportedConstruct("always @*", at.span)
        if not self.accept("posedge"):
            raise UnsupportedConstruct("level-sensitive always block", self.tok.span)
        clock = self.ident().text
        if self.at("or") or self.at(","):
            raise UnsupportedConstruct("multiple clock edges", self.tok.span)
        self.expect(")")
        out = []
        if self.accept("begin"):
            while not self.accept("end"):
                out.append(self._nonblocking(clock))
        else:
            out.append(self._nonblocking(clock))
        return out

    def _nonblocking(self, clock) -> SequentialAssign:
        target = self._lvalue()
        if self.at("="):
            raise UnsupportedConstruct("blocking assignment in always block", self.tok.span)
        self.expect("<=")
        e = self.expr()
        self.expect(";")
        return SequentialAssign(clock, target.text, e, target.span)

    # -- expressions --------------------------------------------------------

    def expr(self):
        cond = self.binary(0)
        if self.at("?", "op"):
            sp = self.next().span
            then = self.expr()
            self.expect(":")
            other = self.expr()
            return Ternary(cond, then, other, cond.span if cond.span else sp)
        return cond

    def binary(self, level):
        if level == len(BINARY_LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        ops = BINARY_LEVELS[level]
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.next().text
            right = self.binary(level + 1)
            left = Binary(op, left, right, left.span)
        return left

    def unary(self):
        t = self.tok
        if t.kind == "op" and t.text in UNARY_OPS:
            self.next()
            return Unary(t.text, self.unary(), t.span)
        if t.kind == "op" and t.text == "+":
            raise UnsupportedConstruct("unary +", t.span)
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.next()
            width, value, base = t.value
            return Number(width, value, base, t.span)
        if t.kind == "id":
            self.next()
            if self.at("["):
                return self._select(t)
            if self.at("("):
                raise UnsupportedConstruct("function call", t.span)
            return Ident(t.text, t.span)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.at("{"):
            return self._concat()
        raise ParseError(f"expected expression, found {_describe(t)}", t.span)

    def _select(self, name_tok):
        self.expect("[")
        idx = self.expr()
        if self.accept(":"):
            if not (isinstance(idx, Number) and idx.width is None):
                raise UnsupportedConstruct("non-constant part-select bound", idx.span)
            lo = self.integer()
            self.expect("]")
            if self.at("["):
                raise UnsupportedConstruct("multi-dimensional select", self.tok.span)
            return PartSelect(name_tok.text, idx.value, lo, name_tok.span)
        for op, desc in (("+:", False), ("-:", True)):
            if self.accept(op):
                width = self.integer()
                self.expect("]")
                return IndexedPartSelect(name_tok.text, idx, width, desc, name_tok.span)
        self.expect("]")
        if self.at("["):
            raise UnsupportedConstruct("multi-dimensional select", self.tok.span)
        return BitSelect(name_tok.text, idx, name_tok.span)

    def _concat(self):
        sp = self.expect("{").span
        if self.tok.kind == "num" and self.tok.value[0] is None and self.peek().text == "{":
            count = self.integer()
            self.expect("{")
            items = [self.expr()]
            while self.accept(","):
                items.append(self.expr())
            self.expect("}")
            self.expect("}")
            item = items[0] if len(items) == 1 else Concat(tuple(items), items[0].span)
            return Replicate(count, item, sp)
        items = [self.expr()]
        while self.accept(","):
            items.append(self.expr())
        self.expect("}")
        return Concat(tuple(items), sp)


def _describe(t: Token) -> str:
    return "end of input" if t.kind == "eof" else repr(t.text)


def parse_design(source: str, filename: str = "<input>") -> Ast:
    """Parse one module of the Verilog subset and check its declarations."""
    ast = _Parser(tokenize(source, filename)).module()
    check_ast(ast)
    return ast


def check_ast(ast: Ast) -> None:
    decl = ast.declared()
    clocks = {s.clock for s in ast.seq_assigns}
    for s in ast.seq_assigns:
        if s.clock not in decl:
            raise DeclarationError(f"clock {s.clock!r} is not declared", s.span)
        c = decl[s.clock]
        if not isinstance(c, Port) or c.direction != "input" or c.width != 1:
            raise UnsupportedConstruct("clock that is not a 1-bit input", s.span)
    if len(clocks) > 1:
        raise UnsupportedConstruct("multiple clocks", ast.seq_assigns[-1].span)
    for a in ast.assigns:
        _check_refs(a.expr, decl)
        _check_target(a.target, decl, a.span, sequential=False)
    for s in ast.seq_assigns:
        _check_refs(s.expr, decl)
        _check_target(s.target, decl, s.span, sequential=True)


def _check_target(name, decl, span, sequential):
    d = decl.get(name)
    if d is None:
        raise DeclarationError(f"{name!r} is not declared", span)
    is_reg = (isinstance(d, Port) and d.is_reg) or (isinstance(d, NetDecl) and d.kind == "reg")
    if isinstance(d, Port) and d.direction == "input":
        raise DeclarationError(f"cannot assign to input {name!r}", span)
    if sequential and not is_reg:
        raise DeclarationError(f"{name!r} is assigned in an always block but is not a reg", span)
    if not sequential and is_reg:
        raise DeclarationError(f"reg {name!r} cannot be driven by a continuous assignment", span)


def walk(e):
    yield e
    if isinstance(e, Unary):
        yield from walk(e.operand)
    elif isinstance(e, Binary):
        yield from walk(e.left)
        yield from walk(e.right)
    elif isinstance(e, Ternary):
        yield from walk(e.cond)
        yield from walk(e.then)
        yield from walk(e.other)
    elif isinstance(e, Concat):
        for it in e.items:
            yield from walk(it)
    elif isinstance(e, Replicate):
        yield from walk(e.item)
    elif isinstance(e, (BitSelect, IndexedPartSelect)):
        yield from walk(e.index)


def _check_refs(expr, decl):
    for e in walk(expr):
        name = getattr(e, "name", None)
        if name is not None and name not in decl:
            raise DeclarationError(f"{name!r} is not declared", e.span)
