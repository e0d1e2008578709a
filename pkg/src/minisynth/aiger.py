"""ASCII AIGER ("aag") reader and writer.

Only the combinational core of AIGER 1.9 is supported: inputs, latches with
zero reset, outputs, AND gates and the symbol table.  Bad/constraint/justice/
fairness sections must be empty.
"""

from __future__ import annotations

from .aig import Aig, CONST0
from .errors import FormatError


def write_aiger(aig: Aig) -> str:
    """Serialize the live part of ``aig``; variables are renumbered compactly."""
    var = {0: 0}
    nxt = 1
    for lit in aig.inputs:
        var[lit >> 1] = nxt
        nxt += 1
    for state, _ in aig.latches:
        var[state >> 1] = nxt
        nxt += 1
    live = aig.reachable()
    for n in live:
        var[n] = nxt
        nxt += 1

    def enc(lit):
        return 2 * var[lit >> 1] + (lit & 1)

    ni, nl, no, na = aig.num_inputs, aig.num_latches, aig.num_outputs, len(live)
    lines = [f"aag {ni + nl + na} {ni} {nl} {no} {na}"]
    lines += [str(enc(lit)) for lit in aig.inputs]
    lines += [f"{enc(s)} {enc(n)}" for s, n in aig.latches]
    lines += [str(enc(lit)) for lit in aig.outputs]
    for n in live:
        a, b = aig.fanins(n)
        a, b = sorted((enc(a), enc(b)))
        lines.append(f"{2 * var[n]} {a} {b}")
    for prefix, names in (("i", aig.input_names), ("l", aig.latch_names), ("o", aig.output_names)):
        for i, name in enumerate(names):
            if name is not None:
                lines.append(f"{prefix}{i} {name}")
    return "\n".join(lines) + "\n"


def _ints(line, lineno, count=None):
    try:
        vals = [int(tok) for tok in line.split()]
    except ValueError:
        raise FormatError(f"expected integers, got {line!r}", lineno) from None
    if count is not None and len(vals) not in (count if isinstance(count, tuple) else (count,)):
        raise FormatError(f"expected {count} fields, got {len(vals)}", lineno)
    if any(v < 0 for v in vals):
        raise FormatError("negative literal", lineno)
    return vals


def read_aiger(text: str) -> Aig:
    """Parse ASCII AIGER text into a structurally hashed Aig."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file", 1)
    head = lines[0].split()
    if not head or head[0] != "aag":
        raise FormatError("missing 'aag' header", 1)
    hdr = _ints(" ".join(head[1:]), 1, (5, 6, 7, 8, 9))
    m, ni, nl, no, na = hdr[:5]
    if any(hdr[5:]):
        raise FormatError("bad/constraint/justice/fairness sections are not supported", 1)
    if m < ni + nl + na:
        raise FormatError(f"maximum variable index {m} too small", 1)
    need = 1 + ni + nl + no + na
    if len(lines) < need:
        raise FormatError("unexpected end of file", len(lines) + 1)

    pos = 1
    input_vars, latch_defs, output_lits, and_defs = [], [], [], {}

    def check_lit(lit, lineno):
        if lit >> 1 > m:
            raise FormatError(f"literal {lit} exceeds maximum variable index {m}", lineno)

    defined = {}
    for _ in range(ni):
        (lit,) = _ints(lines[pos], pos + 1, 1)
        if lit & 1 or lit < 2:
            raise FormatError(f"input literal {lit} must be even and positive", pos + 1)
        check_lit(lit, pos + 1)
        if lit >> 1 in defined:
            raise FormatError(f"variable {lit >> 1} defined twice", pos + 1)
        defined[lit >> 1] = pos + 1
        input_vars.append(lit >> 1)
        pos += 1
    for _ in range(nl):
        vals = _ints(lines[pos], pos + 1, (2, 3))
        lit, nxt = vals[0], vals[1]
        if len(vals) == 3 and vals[2] != 0:
            raise FormatError("only zero-initialized latches are supported", pos + 1)
        if lit & 1 or lit < 2:
            raise FormatError(f"latch literal {lit} must be even and positive", pos + 1)
        check_lit(lit, pos + 1)
        check_lit(nxt, pos + 1)
        if lit >> 1 in defined:
            raise FormatError(f"variable {lit >> 1} defined twice", pos + 1)
        defined[lit >> 1] = pos + 1
        latch_defs.append((lit >> 1, nxt, pos + 1))
        pos += 1
    for _ in range(no):
        (lit,) = _ints(lines[pos], pos + 1, 1)
        check_lit(lit, pos + 1)
        output_lits.append((lit, pos + 1))
        pos += 1
    and_order = []
    for _ in range(na):
        lhs, r0, r1 = _ints(lines[pos], pos + 1, 3)
        if lhs & 1 or lhs < 2:
            raise FormatError(f"AND literal {lhs} must be even and positive", pos + 1)
        for lit in (lhs, r0, r1):
            check_lit(lit, pos + 1)
        if lhs >> 1 in defined:
            raise FormatError(f"variable {lhs >> 1} defined twice", pos + 1)
        defined[lhs >> 1] = pos + 1
        and_defs[lhs >> 1] = (r0, r1, pos + 1)
        and_order.append(lhs >> 1)
        pos += 1

    names = {"i": {}, "l": {}, "o": {}}
    limits = {"i": ni, "l": nl, "o": no}
    while pos < len(lines):
        line = lines[pos]
        if line == "c":
            break
        if line and line[0] in "bcjf" and line[0] not in names:
            raise FormatError(f"unsupported symbol {line.split()[0]!r}", pos + 1)
        kind = line[:1]
        idx, _, name = line[1:].partition(" ")
        if kind not in names or not idx.isdigit() or not name:
            raise FormatError(f"malformed symbol table entry {line!r}", pos + 1)
        if int(idx) >= limits[kind]:
            raise FormatError(f"symbol index {idx} out of range", pos + 1)
        names[kind][int(idx)] = name
        pos += 1

    aig = Aig()
    lit_of = {0: CONST0}
    for i, v in enumerate(input_vars):
        lit_of[v] = aig.add_input(names["i"].get(i))
    for i, (v, _, _) in enumerate(latch_defs):
        lit_of[v] = aig.add_latch(names["l"].get(i))

    state = {}

    def resolve(lit, lineno):
        v = lit >> 1
        if v in lit_of:
            return lit_of[v] ^ (lit & 1)
        if v not in and_defs:
            raise FormatError(f"literal {lit} is never defined", lineno)
        stack = [v]
        while stack:
            u = stack[-1]
            if u in lit_of:
                stack.pop()
                continue
            if u not in and_defs:
                raise FormatError(f"variable {u} is never defined", lineno)
            r0, r1, ln = and_defs[u]
            pending = [x >> 1 for x in (r0, r1) if (x >> 1) not in lit_of]
            if pending:
                if state.get(u) == "open":
                    raise FormatError(f"combinational cycle through variable {u}", ln)
                state[u] = "open"
                stack.extend(pending)
                continue
            lit_of[u] = aig.make_and(lit_of[r0 >> 1] ^ (r0 & 1), lit_of[r1 >> 1] ^ (r1 & 1))
            stack.pop()
        return lit_of[v] ^ (lit & 1)

    for v in and_order:
        resolve(2 * v, and_defs[v][2])
    for i, (lit, lineno) in enumerate(output_lits):
        aig.add_output(resolve(lit, lineno), names["o"].get(i))
    for i, (_, nxt, lineno) in enumerate(latch_defs):
        aig.set_latch_next(i, resolve(nxt, lineno))
    return aig
