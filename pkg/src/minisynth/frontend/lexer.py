from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError, UnsupportedConstruct
from .ast import SourceSpan

KEYWORDS = {
    "module", "endmodule", "input", "output", "wire", "reg", "assign",
    "always", "posedge", "begin", "end",
}

# legal Verilog that the subset rejects by name
UNSUPPORTED_KEYWORDS = {
    "signed", "integer", "parameter", "localparam", "generate", "endgenerate",
    "genvar", "initial", "negedge", "if", "else", "case", "casez", "casex",
    "endcase", "for", "while", "function", "endfunction", "task", "endtask",
    "inout", "logic", "always_ff", "always_comb", "real", "supply0", "supply1",
    "tri", "wand", "wor", "defparam",
}

UNSUPPORTED_OPS = {
    "===", "!==", "<<<", ">>>", "**", "&&", "||", "~&", "~|", "~^", "^~",
    "/", "%",
}

OPERATORS = [
    "===", "!==", "<<<", ">>>",
    "+:", "-:", "<<", ">>", "<=", ">=", "==", "!=", "**", "&&", "||",
    "~&", "~|", "~^", "^~",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", "?", ":",
    "(", ")", "[", "]", "{", "}", ",", ";", "@", "#", ".",
]

_NUMBER = re.compile(r"(\d[\d_]*)?\s*'\s*([sS]?)([bBdDhHoO])\s*([0-9a-fA-FxXzZ?_]+)|\d[\d_]*")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*")
_SYSTEM = re.compile(r"\$[A-Za-z_][A-Za-z0-9_$]*")
_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "kw", "num", "op", "eof"
    text: str
    span: SourceSpan
    value: object = None


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)

    def span_at(p):
        return SourceSpan(filename, line, p - line_start + 1)

    def advance(to):
        nonlocal pos, line, line_start
        chunk = text[pos:to]
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = to

    while pos < n:
        m = _WS.match(text, pos)
        if m:
            advance(m.end())
            continue
        if text.startswith("//", pos):
            end = text.find("\n", pos)
            advance(n if end < 0 else end)
            continue
        if text.startswith("/*", pos):
            end = text.find("*/", pos + 2)
            if end < 0:
                raise LexError("unterminated block comment", span_at(pos))
            advance(end + 2)
            continue
        sp = span_at(pos)
        ch = text[pos]
        if ch == "`":
            raise UnsupportedConstruct("compiler directive", sp)
        if ch == "$":
            m = _SYSTEM.match(text, pos)
            if not m:
                raise LexError(f"bad character {ch!r}", sp)
            raise UnsupportedConstruct(m.group(0), sp)
        if ch.isdigit() or ch == "'":
            m = _NUMBER.match(text, pos)
            if not m:
                raise LexError("malformed number", sp)
            tokens.append(_number_token(m, sp))
            advance(m.end())
            continue
        m = _IDENT.match(text, pos)
        if m:
            word = m.group(0)
            if word in UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstruct(word, sp)
            tokens.append(Token("kw" if word in KEYWORDS else "id", word, sp))
            advance(m.end())
            continue
        for op in OPERATORS:
            if text.startswith(op, pos):
                if op in UNSUPPORTED_OPS:
                    raise UnsupportedConstruct(op, sp)
                if op in ("#", "."):
                    raise UnsupportedConstruct(op, sp)
                tokens.append(Token("op", op, sp))
                advance(pos + len(op))
                break
        else:
            raise LexError(f"bad character {ch!r}", sp)
    tokens.append(Token("eof", "", span_at(pos)))
    return tokens


def _number_token(m, sp) -> Token:
    text = m.group(0)
    if m.group(3) is None:
        return Token("num", text, sp, (None, int(text.replace("_", "")), "d"))
    size, signed, base, digits = m.group(1), m.group(2), m.group(3).lower(), m.group(4)
    if signed:
        raise UnsupportedConstruct("signed constant", sp)
    if size is None:
        raise UnsupportedConstruct("unsized based constant", sp)
    if any(c in "xXzZ?" for c in digits):
        raise UnsupportedConstruct("four-state constant", sp)
    if base == "o":
        raise UnsupportedConstruct("octal constant", sp)
    width = int(size.replace("_", ""))
    if width < 1:
        raise LexError("constant width must be positive", sp)
    radix = {"b": 2, "d": 10, "h": 16}[base]
    try:
        value = int(digits.replace("_", ""), radix)
    except ValueError:
        raise LexError(f"bad digits {digits!r} for base {base!r}", sp) from None
    return Token("num", text, sp, (width, value, base))
