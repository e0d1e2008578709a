import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minisynth.aig import CONST0, CONST1, Aig
from minisynth.aiger import read_aiger, write_aiger
from minisynth.equiv import Exhaustive, Random, check_equivalence
from minisynth.errors import ExhaustiveTooLarge, FormatError, SignatureMismatch
from minisynth.sim import exhaustive_words, simulate

from conftest import random_aig

GOLDEN = __import__("pathlib").Path(__file__).parent / "golden"


def test_constant_folding_rules():
    aig = Aig()
    x = aig.add_input("x")
    assert aig.make_and(x, CONST0) == CONST0
    assert aig.make_and(CONST1, x) == x
    assert aig.make_and(x, x) == x
    assert aig.make_and(x, x ^ 1) == CONST0
    assert aig.num_nodes == 2  # constant and x only


def test_structural_hashing():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    n1 = aig.make_and(a, b)
    assert aig.make_and(b, a) == n1
    assert aig.num_nodes == 4
    aig.add_output(n1)
    assert aig.stats() == (1, 1)


def test_stats_examples():
    aig = Aig()
    a, b, c = (aig.add_input() for _ in range(3))
    aig.add_output(aig.make_and(aig.make_and(a, b), c))
    aig.add_output(aig.make_and(a, c ^ 1))
    assert aig.stats() == (3, 2)
    aig2 = Aig()
    a, b, c, d = (aig2.add_input() for _ in range(4))
    aig2.add_output(aig2.make_and(aig2.make_and(aig2.make_and(a, b), c), d))
    assert aig2.stats() == (3, 3)


def test_dead_logic_not_counted():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    aig.make_and(a, b)
    aig.add_output(a)
    assert aig.stats() == (0, 0)
    assert aig.compact().num_nodes == 3


def test_simulate_examples():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    aig.add_output(aig.make_and(a, b ^ 1))
    aig.add_output(aig.make_xor(a, b))
    out = simulate(aig, [0b1100, 0b1010])
    assert int(out[0, 0]) & 0xF == 0b0100
    assert int(out[1, 0]) & 0xF == 0b0110


def test_latch_cut_simulation():
    aig = Aig()
    x = aig.add_input("x")
    q = aig.add_latch("q")
    aig.set_latch_next(0, aig.make_xor(x, q))
    aig.add_output(q)
    out = simulate(aig, [0b0101, 0b0011])
    assert int(out[0, 0]) & 0xF == 0b0011
    assert int(out[1, 0]) & 0xF == 0b0110


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_simulation_matches_per_pattern_oracle(seed):
    aig = random_aig(seed, n_inputs=5, n_ands=25)
    stim = exhaustive_words(5, 0, 1)
    got = simulate(aig, stim)
    for p in range(32):
        val = {0: 0}
        for i, lit in enumerate(aig.inputs):
            val[lit >> 1] = (p >> i) & 1
        for v in aig.reachable():
            f0, f1 = aig.fanins(v)
            val[v] = (val[f0 >> 1] ^ (f0 & 1)) & (val[f1 >> 1] ^ (f1 & 1))
        for k, lit in enumerate(aig.outputs):
            want = val.get(lit >> 1, 0) ^ (lit & 1)
            assert (int(got[k, 0]) >> p) & 1 == want


# -- AIGER -----------------------------------------------------------------------

def test_aiger_buffer_golden():
    aig = Aig()
    aig.add_output(aig.add_input())
    assert write_aiger(aig) == (GOLDEN / "buffer.aag").read_text()


def test_aiger_and_golden():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    aig.add_output(aig.make_and(a, b))
    assert write_aiger(aig) == (GOLDEN / "and2.aag").read_text()


def test_aiger_symbols_and_latches_round_trip():
    aig = random_aig(5, n_inputs=4, n_ands=30, n_outputs=3, n_latches=2)
    text = write_aiger(aig)
    back = read_aiger(text)
    assert write_aiger(back) == text
    assert back.input_names == aig.input_names
    assert check_equivalence(aig, back, Exhaustive())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_aiger_round_trip_is_structural(seed):
    aig = random_aig(seed, n_latches=1)
    back = read_aiger(write_aiger(aig))
    assert back.structurally_equal(aig.compact())


@pytest.mark.parametrize("text", [
    "aig 1 1 0 1 0\n2\n2\n",          # binary header
    "aag 1 1 0 1 0\n2\n",             # truncated
    "aag 1 1 0 1 0\n2\n8\n",          # literal out of range
    "aag 2 1 0 1 1\n2\n4\n4 4 2\n",   # self-loop
    "aag 1 1 0 1 0\nx\n2\n",          # not an integer
])
def test_aiger_format_errors(text):
    with pytest.raises(FormatError):
        read_aiger(text)


# -- equivalence -----------------------------------------------------------------

def _pair(f, g, n=2):
    a, b = Aig(), Aig()
    xa = [a.add_input(f"x{i}") for i in range(n)]
    xb = [b.add_input(f"x{i}") for i in range(n)]
    a.add_output(f(a, *xa), "y")
    b.add_output(g(b, *xb), "y")
    return a, b


def test_demorgan_is_equivalent():
    a, b = _pair(lambda g, x, y: g.make_or(x, y),
                 lambda g, x, y: g.make_and(x ^ 1, y ^ 1) ^ 1)
    v = check_equivalence(a, b, Exhaustive())
    assert v.equivalent and v.checked == 4


def test_counterexample_reported():
    a, b = _pair(lambda g, x, y: g.make_and(x, y), lambda g, x, y: g.make_or(x, y))
    v = check_equivalence(a, b, Exhaustive())
    assert not v
    assert v.differing == ["y"]
    x, y = v.assignment["x0"], v.assignment["x1"]
    assert (x & y) != (x | y)


def test_random_mode_finds_rare_difference():
    # differs only when all 16 inputs are 1
    def f(g, *xs):
        return g.make_and_tree(xs)
    a, b = _pair(f, lambda g, *xs: CONST0, n=16)
    assert not check_equivalence(a, b, Exhaustive())
    assert check_equivalence(a, b, Random(1000, 1)).equivalent  # 1000 random vectors miss it


def test_signature_mismatch():
    a, _ = _pair(lambda g, x, y: x, lambda g, x, y: x)
    c = Aig()
    c.add_output(c.add_input("x0"), "y")
    with pytest.raises(SignatureMismatch):
        check_equivalence(a, c)


def test_exhaustive_limit():
    a = Aig()
    for i in range(25):
        a.add_input(f"x{i}")
    a.add_output(CONST0)
    with pytest.raises(ExhaustiveTooLarge):
        check_equivalence(a, a, Exhaustive())


def test_latches_are_cut():
    def build(swap):
        g = Aig()
        x = g.add_input("x")
        q = g.add_latch("q")
        g.set_latch_next(0, g.make_and(q, x) if swap else g.make_and(x, q))
        g.add_output(q, "y")
        return g
    assert check_equivalence(build(False), build(True), Exhaustive()).checked == 4
