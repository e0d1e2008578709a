"""Checks an Aig against the word-level evaluator on concrete stimuli."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aig import Aig
from .ir import WordLevelDesign, evaluate_batch
from .sim import Simulator

_WEIGHTS = np.uint64(1) << np.arange(64, dtype=np.uint64)


def values_to_words(values, width: int) -> np.ndarray:
    """Transpose integer values into bit-parallel rows: shape (width, ceil(n/64))."""
    values = np.asarray(values)
    n = len(values)
    nw = (n + 63) // 64
    out = np.zeros((width, nw), dtype=np.uint64)
    pad = nw * 64 - n
    for i in range(width):
        if values.dtype == object:
            bits = np.array([(int(v) >> i) & 1 for v in values], dtype=np.uint64)
        else:
            bits = (values.astype(np.uint64) >> np.uint64(i)) & np.uint64(1)
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint64)]).reshape(nw, 64)
        out[i] = (bits * _WEIGHTS).sum(axis=1, dtype=np.uint64)
    return out


def words_to_values(rows: np.ndarray, n: int) -> np.ndarray:
    """Inverse of values_to_words; Python ints when wider than 64 bits."""
    width = rows.shape[0]
    bits = ((rows[:, :, None] >> np.arange(64, dtype=np.uint64)) & np.uint64(1))
    bits = bits.reshape(width, -1)[:, :n]
    if width > 64:
        vals = np.zeros(n, dtype=object)
        for i in range(width):
            vals = vals + (bits[i].astype(object) << i)
        return vals
    vals = np.zeros(n, dtype=np.uint64)
    for i in range(width):
        vals |= bits[i] << np.uint64(i)
    return vals


def random_values(rng: np.random.Generator, width: int, n: int) -> np.ndarray:
    if width <= 64:
        raw = rng.integers(0, np.iinfo(np.uint64).max, size=n, dtype=np.uint64, endpoint=True)
        return raw & np.uint64((1 << width) - 1) if width < 64 else raw
    chunks = (width + 63) // 64
    out = np.zeros(n, dtype=object)
    for _ in range(chunks):
        part = rng.integers(0, np.iinfo(np.uint64).max, size=n, dtype=np.uint64, endpoint=True)
        out = (out << 64) + part.astype(object)
    return out & ((1 << width) - 1)


@dataclass
class OracleResult:
    checked: int
    mismatches: int
    first: dict | None = None

    def __bool__(self):
        return self.mismatches == 0


def compare_with_oracle(design: WordLevelDesign, aig: Aig, inputs: dict, state: dict | None = None) -> OracleResult:
    """Simulate ``aig`` and evaluate ``design`` on the same word-level stimuli.

    The Aig must come from lower_design (PI bits in input order, latch bits in
    register order, PO bits in output order).
    """
    if inputs:
        n = len(next(iter(inputs.values())))
    elif state:
        n = len(next(iter(state.values())))
    else:
        n = 1
    if state is None:
        state = {r.name: np.zeros(n, dtype=np.uint64) for r in design.registers}
    rows = [values_to_words(inputs[s.name], s.width) for s in design.inputs]
    rows += [values_to_words(state[r.name], r.width) for r in design.registers]
    nw = (n + 63) // 64
    stim = np.concatenate(rows) if rows else np.zeros((0, nw), dtype=np.uint64)
    out = Simulator(aig).run(stim)
    want_out, want_next = evaluate_batch(design, inputs, state)
    mismatches = np.zeros(n, dtype=bool)
    first = None
    pos = 0
    for name, width, want in ([(s.name, s.width, want_out[s.name]) for s in design.outputs]
                              + [(r.name, r.width, want_next[r.name]) for r in design.registers]):
        got = words_to_values(out[pos:pos + width], n)
        pos += width
        bad = np.array([int(g) != int(x) for g, x in zip(got, want)]) if (
            got.dtype == object or np.asarray(want).dtype == object) else (got != np.asarray(want, dtype=np.uint64))
        if bad.any() and first is None:
            k = int(np.nonzero(bad)[0][0])
            first = {"index": k, "signal": name, "got": int(got[k]), "want": int(want[k])}
        mismatches |= bad
    return OracleResult(n, int(mismatches.sum()), first)


def random_check(design: WordLevelDesign, aig: Aig, count: int = 10_000, seed: int = 0) -> OracleResult:
    rng = np.random.default_rng(seed)
    inputs = {s.name: random_values(rng, s.width, count) for s in design.inputs}
    state = {r.name: random_values(rng, r.width, count) for r in design.registers}
    return compare_with_oracle(design, aig, inputs, state)


def exhaustive_check(design: WordLevelDesign, aig: Aig) -> OracleResult:
    """Every assignment of input and register bits (keep the total small)."""
    sigs = [(s.name, s.width) for s in design.inputs] + [(r.name, r.width) for r in design.registers]
    total = sum(w for _, w in sigs)
    if total > 24:
        raise ValueError(f"{total} bits is too many for an exhaustive check")
    allv = np.arange(1 << total, dtype=np.uint64)
    vals = {}
    shift = 0
    for name, w in sigs:
        vals[name] = (allv >> np.uint64(shift)) & np.uint64((1 << w) - 1)
        shift += w
    ins = {s.name: vals[s.name] for s in design.inputs}
    st = {r.name: vals[r.name] for r in design.registers}
    return compare_with_oracle(design, aig, ins, st)
