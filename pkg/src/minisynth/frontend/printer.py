"""Canonical Verilog printer.

Binary and ternary expressions are fully parenthesized, so re-parsing the
output yields the same tree regardless of operator precedence.
"""

from __future__ import annotations

from .ast import (
    Ast, Binary, BitSelect, Concat, Ident, IndexedPartSelect, Number, PartSelect,
    Replicate, Ternary, Unary,
)


def print_expr(e) -> str:
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, Number):
        if e.width is None:
            return str(e.value)
        if e.base == "b":
            return f"{e.width}'b{e.value:b}"
        if e.base == "h":
            return f"{e.width}'h{e.value:x}"
        return f"{e.width}'d{e.value}"
    if isinstance(e, Unary):
        inner = print_expr(e.operand)
        if isinstance(e.operand, Unary):
            inner = f"({inner})"
        return f"{e.op}{inner}"
    if isinstance(e, Binary):
        return f"({print_expr(e.left)} {e.op} {print_expr(e.right)})"
    if isinstance(e, Ternary):
        return f"({print_expr(e.cond)} ? {print_expr(e.then)} : {print_expr(e.other)})"
    if isinstance(e, Concat):
        return "{" + ", ".join(print_expr(x) for x in e.items) + "}"
    if isinstance(e, Replicate):
        item = e.item
        if isinstance(item, Concat) and len(item.items) > 1:
            body = ", ".join(print_expr(x) for x in item.items)
        else:
            body = print_expr(item)
        return f"{{{e.count}{{{body}}}}}"
    if isinstance(e, BitSelect):
        return f"{e.name}[{print_expr(e.index)}]"
    if isinstance(e, PartSelect):
        return f"{e.name}[{e.hi}:{e.lo}]"
    if isinstance(e, IndexedPartSelect):
        op = "-:" if e.descending else "+:"
        return f"{e.name}[{print_expr(e.index)} {op} {e.width}]"
    raise TypeError(f"not an expression: {e!r}")


def _range(width):
    return f" [{width - 1}:0]" if width > 1 else ""


def print_design(ast: Ast) -> str:
    ports = []
    for p in ast.ports:
        kind = " reg" if p.is_reg else ""
        ports.append(f"  {p.direction}{kind}{_range(p.width)} {p.name}")
    lines = [f"module {ast.module}(" + ("\n" + ",\n".join(ports) + "\n" if ports else "") + ");"]
    for n in ast.nets:
        lines.append(f"  {n.kind}{_range(n.width)} {n.name};")
    for a in ast.assigns:
        lines.append(f"  assign {a.target} = {print_expr(a.expr)};")
    if ast.seq_assigns:
        lines.append(f"  always @(posedge {ast.seq_assigns[0].clock}) begin")
        for s in ast.seq_assigns:
            lines.append(f"    {s.target} <= {print_expr(s.expr)};")
        lines.append("  end")
    lines.append("endmodule")
    return "\n".join(lines) + "\n"
