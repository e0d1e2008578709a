from .ast import SourceSpan, Ast
from .parser import parse_design
from .printer import print_design, print_expr
from .elaborate import elaborate


def load_design(source: str, filename: str = "<input>"):
    """Parse and elaborate in one step."""
    return elaborate(parse_design(source, filename))


__all__ = ["SourceSpan", "Ast", "parse_design", "print_design", "print_expr", "elaborate",
           "load_design"]
