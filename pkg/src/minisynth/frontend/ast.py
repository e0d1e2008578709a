"""Syntax tree for the Verilog subset.

Spans are carried on every node but excluded from equality, so a tree
re-parsed from its printed form compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("line and column are 1-based")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


NOSPAN = SourceSpan("<generated>", 1, 1)


def _span():
    return field(default=NOSPAN, compare=False, repr=False)


class Expr:
    span: SourceSpan


@dataclass(frozen=True)
class Ident(Expr):
    name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Number(Expr):
    """Sized (``8'hff``) or unsized (``3``) constant; ``width`` is None when unsized."""
    width: int | None
    value: int
    base: str = field(default="d", compare=False)
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Concat(Expr):
    items: tuple[Expr, ...]
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Replicate(Expr):
    count: int
    item: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class BitSelect(Expr):
    name: str
    index: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class PartSelect(Expr):
    name: str
    hi: int
    lo: int
    span: SourceSpan = _span()


@dataclass(frozen=True)
class IndexedPartSelect(Expr):
    """``name[index +: width]`` (ascending) or ``name[index -: width]``."""
    name: str
    index: Expr
    width: int
    descending: bool = False
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Port:
    name: str
    direction: str  # "input" | "output"
    width: int
    is_reg: bool = False
    span: SourceSpan = _span()


@dataclass(frozen=True)
class NetDecl:
    name: str
    width: int
    kind: str = "wire"  # "wire" | "reg"
    span: SourceSpan = _span()


@dataclass(frozen=True)
class ContinuousAssign:
    target: str
    expr: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SequentialAssign:
    clock: str
    target: str
    expr: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Ast:
    module: str
    ports: tuple[Port, ...]
    nets: tuple[NetDecl, ...]
    assigns: tuple[ContinuousAssign, ...]
    seq_assigns: tuple[SequentialAssign, ...]
    span: SourceSpan = _span()

    def declared(self) -> dict[str, object]:
        out = {p.name: p for p in self.ports}
        out.update({n.name: n for n in self.nets})
        return out
