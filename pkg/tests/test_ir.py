import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minisynth.errors import MissingInput, WidthMismatch
from minisynth.frontend import load_design
from minisynth.ir import (
    BitVectorValue, WordLevelDesign, detect_mac_sites, dump, evaluate, evaluate_batch, fuse_mac_sites,
)
from minisynth.oracle import random_values

from conftest import corpus_design


def _design(body, ports):
    return load_design(f"module t({ports}); {body} endmodule")


def test_add_example():
    d = _design("assign y = a + b;", "input [7:0] a, input [7:0] b, output [7:0] y")
    out, _ = evaluate(d, {"a": 200, "b": 100})
    assert out["y"] == BitVectorValue(8, 44)


def test_indexed_select_out_of_range_reads_zero():
    d = _design("assign y = x[i +: 4];", "input [7:0] x, input [2:0] i, output [3:0] y")
    out, _ = evaluate(d, {"x": 0xA5, "i": 6})
    assert int(out["y"]) == 0b10  # bits 7,6 of 0xA5 then two zeros
    down = _design("assign y = x[i -: 4];", "input [7:0] x, input [2:0] i, output [3:0] y")
    out, _ = evaluate(down, {"x": 0xA5, "i": 1})
    assert int(out["y"]) == 0b0100  # bits 1..-2: 0,1 from 0xA5 shifted up by two


def test_missing_input():
    d = _design("assign y = a;", "input a, output y")
    with pytest.raises(MissingInput):
        evaluate(d, {})


def test_value_too_wide():
    d = _design("assign y = a;", "input [1:0] a, output [1:0] y")
    with pytest.raises(WidthMismatch):
        evaluate(d, {"a": 4})
    with pytest.raises(WidthMismatch):
        BitVectorValue(2, 4)


def test_register_next_state():
    d = _design("always @(posedge clk) q <= q + d;",
                "input clk, input [3:0] d, output reg [3:0] q")
    out, nxt = evaluate(d, {"d": 3}, {"q": 14})
    assert int(out["q"]) == 14 and int(nxt["q"]) == 1


# big-int oracle: a Python expression mirroring the Verilog
ORACLE_CASES = [
    ("assign y = (a * b + c) ^ (a >> 3);", "input [15:0] a, input [15:0] b, input [15:0] c, output [15:0] y",
     lambda a, b, c: ((a * b + c) ^ (a >> 3)) & 0xFFFF),
    ("assign y = a < b ? a - b : {b[7:0], a[7:0]};",
     "input [15:0] a, input [15:0] b, input [15:0] c, output [15:0] y",
     lambda a, b, c: ((a - b) & 0xFFFF) if a < b else ((b & 0xFF) << 8) | (a & 0xFF)),
    ("assign y = {15'd0, ^a} | (c << b[3:0]) | {15'd0, &b};",
     "input [15:0] a, input [15:0] b, input [15:0] c, output [15:0] y",
     lambda a, b, c: (bin(a).count("1") & 1) | ((c << (b & 15)) & 0xFFFF) | int(b == 0xFFFF)),
    ("assign y = a[b[3:0] +: 8];", "input [15:0] a, input [15:0] b, input [15:0] c, output [7:0] y",
     lambda a, b, c: (a >> (b & 15)) & 0xFF),
]


@pytest.mark.parametrize("body, ports, ref", ORACLE_CASES)
def test_batch_evaluation_against_bigint_oracle(body, ports, ref):
    d = _design(body, ports)
    rng = np.random.default_rng(7)
    vals = {n: random_values(rng, 16, 10_000) for n in "abc"}
    out, _ = evaluate_batch(d, vals)
    want = [ref(int(a), int(b), int(c)) for a, b, c in zip(vals["a"], vals["b"], vals["c"])]
    assert [int(x) for x in out["y"]] == want
    # the scalar evaluator agrees on a sample
    for k in range(0, 10_000, 997):
        o, _ = evaluate(d, {n: int(vals[n][k]) for n in "abc"})
        assert int(o["y"]) == want[k]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_wide_mac_semantics(a, b, c):
    d = corpus_design("mac32")
    out, _ = evaluate(d, {"a": a, "b": b, "c": c})
    assert int(out["y"]) == (a * b + c) % 2**32


def test_dump_golden():
    d = _design("assign y = a + 4'd3;", "input [3:0] a, output [3:0] y")
    assert dump(d) == (
        "design t\n"
        '%0 = Input(4) "a"\n'
        "%1 = Const(4) [3]\n"
        "%2 = Add(4) %0 %1\n"
        "output y(4) = %2\n"
    )


def test_validate_accepts_corpus(corpus_name):
    corpus_design(corpus_name).validate()


def test_mac_site_in_corpus():
    sites = detect_mac_sites(corpus_design("mac16"))
    assert len(sites) == 1


def test_two_mac_sites():
    d = _design("assign y = (a * b + c) + (d * e + f);",
                "input [7:0] a, b, c, d, e, f, output [7:0] y")
    assert len(detect_mac_sites(d)) == 2


def test_shared_multiplier_is_not_fused():
    d = _design("wire [7:0] p; assign p = a * b; assign y = p + c; assign z = p;",
                "input [7:0] a, b, c, output [7:0] y, output [7:0] z")
    assert detect_mac_sites(d) == []


def test_fusion_preserves_semantics_and_consumes_sites():
    d = _design("assign y = (a * b + c) + (d * e + f);",
                "input [7:0] a, b, c, d, e, f, output [7:0] y")
    fused = fuse_mac_sites(d)
    fused.validate()
    assert detect_mac_sites(fused) == []
    assert sum(op.kind == "Fma" for op in fused.nodes) == 2
    assert not any(op.kind == "Mul" for op in fused.nodes)
    rng = np.random.default_rng(3)
    vals = {n: random_values(rng, 8, 2000) for n in "abcdef"}
    want, _ = evaluate_batch(d, vals)
    got, _ = evaluate_batch(fused, vals)
    assert np.array_equal(np.asarray(want["y"]), np.asarray(got["y"]))


def test_design_is_plain_data():
    d = corpus_design("scoreboard")
    assert isinstance(d, WordLevelDesign)
    assert d.input_bits() == 11 and d.state_bits() == 8
