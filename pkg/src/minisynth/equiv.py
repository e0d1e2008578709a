"""Simulation-based combinational equivalence checking.

Latches are cut: their states become pseudo-inputs and their next-state
functions pseudo-outputs, so two sequential circuits are compared by their
output and transition logic only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .aig import Aig
from .errors import ExhaustiveTooLarge, SignatureMismatch
from .sim import Simulator, exhaustive_words, random_words, valid_mask

MAX_EXHAUSTIVE_BITS = 24
CHUNK_WORDS = 2048


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Random:
    count: int = 100_000
    seed: int = 0


@dataclass
class Verdict:
    equivalent: bool
    checked: int = 0
    # source name -> bit, and the names of the roots that differ
    assignment: dict = field(default_factory=dict)
    differing: list = field(default_factory=list)

    def __bool__(self):
        return self.equivalent

    def __str__(self):
        if self.equivalent:
            return f"Equivalent ({self.checked} assignments)"
        bits = ", ".join(f"{k}={v}" for k, v in self.assignment.items())
        return f"Counterexample({bits}; differing: {', '.join(self.differing)})"


def signature(aig: Aig):
    return (tuple(aig.input_names), tuple(aig.latch_names), tuple(aig.output_names))


def build_miter(a: Aig, b: Aig) -> Aig:
    """Shared-input miter: one XOR output per root pair, then their OR."""
    if signature(a) != signature(b):
        raise SignatureMismatch(_describe_mismatch(a, b))
    miter, map_a = a.empty_like()
    map_b = {0: 0}
    for lit_a, lit_b in zip(a.sources(), b.sources()):
        map_b[lit_b >> 1] = map_a[lit_a >> 1]
    roots_a = a.transfer(miter, map_a)
    roots_b = b.transfer(miter, map_b)
    diffs = [miter.make_xor(x, y) for x, y in zip(roots_a, roots_b)]
    for d, name in zip(diffs, a.root_names()):
        miter.add_output(d, name)
    miter.add_output(miter.make_or_tree(diffs), "miter")
    # latches of the miter are pure pseudo-inputs; their next-state is unused
    return miter


def _fallback(names, prefix):
    return [n if n is not None else f"{prefix}{i}" for i, n in enumerate(names)]


def _describe_mismatch(a, b):
    for what, x, y in zip(("inputs", "latches", "outputs"), signature(a), signature(b)):
        if x != y:
            return f"{what} differ: {list(x)[:8]} vs {list(y)[:8]}"
    return "signatures differ"


def check_equivalence(a: Aig, b: Aig, mode=None) -> Verdict:
    """Compare two Aigs with identical source/root signatures."""
    if mode is None:
        mode = Random()
    miter = build_miter(a, b)
    nbits = miter.num_inputs + miter.num_latches
    sim = Simulator(miter)
    names = _fallback(a.input_names, "i") + _fallback(a.latch_names, "l")
    root_names = _fallback(a.output_names, "o") + _fallback(a.latch_names, "l")

    if isinstance(mode, Exhaustive):
        if nbits > MAX_EXHAUSTIVE_BITS:
            raise ExhaustiveTooLarge(
                f"{nbits} input+latch bits exceed the exhaustive limit of {MAX_EXHAUSTIVE_BITS}")
        total = 1 << nbits
        words_total = max(1, total // 64)
        gen = ((start, exhaustive_words(nbits, start, min(CHUNK_WORDS, words_total - start)))
               for start in range(0, words_total, CHUNK_WORDS))
    else:
        total = mode.count
        words_total = (total + 63) // 64
        rng = np.random.default_rng(mode.seed)
        gen = ((start, random_words(nbits, min(CHUNK_WORDS, words_total - start), rng))
               for start in range(0, words_total, CHUNK_WORDS))

    for start, stim in gen:
        nw = stim.shape[1]
        out = sim.run(stim)
        # the last row is the miter; latch next-state rows follow the outputs
        flag = out[miter.num_outputs - 1] & valid_mask(total, start, nw)
        hits = np.nonzero(flag)[0]
        if len(hits):
            w = int(hits[0])
            bit = (int(flag[w]) & -int(flag[w])).bit_length() - 1
            assignment = {names[j]: int((int(stim[j, w]) >> bit) & 1) for j in range(nbits)}
            differing = [root_names[i] for i in range(len(root_names))
                         if (int(out[i, w]) >> bit) & 1]
            return Verdict(False, start * 64 + w * 64 + bit, assignment, differing)
    return Verdict(True, total)
