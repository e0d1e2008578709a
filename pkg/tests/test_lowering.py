import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minisynth.aig import CONST0, Aig
from minisynth.equiv import Exhaustive, Random, check_equivalence
from minisynth.frontend import load_design
from minisynth.lowering import (
    FinalAdder, LoweringOptions, PartSelectStrategy, booth_partial_products, build_booth_csa_multiplier,
    build_final_adder, compress_rows, fuse_mac, lower_design, lower_indexed_select_muxtree,
    lower_indexed_select_shifter,
)
from minisynth.lowering.arith import add_bits
from minisynth.oracle import exhaustive_check, random_check, words_to_values
from minisynth.sim import exhaustive_words, simulate

from conftest import corpus_design, lowered


def _words(aig, widths):
    """Inputs of the given widths (LSB first) as literal lists."""
    return [[aig.add_input() for _ in range(w)] for w in widths]


def _exhaustive_outputs(aig, nbits, out_width):
    """Output word per assignment; assignment k sets PI j to bit j of k."""
    n = 1 << nbits
    stim = exhaustive_words(nbits, 0, max(1, n // 64))
    out = simulate(aig, stim)
    return [int(v) for v in words_to_values(out[:out_width], n)]


def _operands(k, widths):
    vals = []
    for w in widths:
        vals.append(k & ((1 << w) - 1))
        k >>= w
    return vals


# -- part-select -----------------------------------------------------------------

@pytest.mark.parametrize("builder", [lower_indexed_select_shifter, lower_indexed_select_muxtree])
@pytest.mark.parametrize("n, k, w", [(16, 4, 4), (8, 3, 8), (12, 4, 3), (8, 2, 5), (5, 3, 2), (1, 1, 1)])
def test_select_matches_shift_oracle(builder, n, k, w):
    aig = Aig()
    bus, idx = _words(aig, (n, k))
    for lit in builder(aig, bus, idx, w).outputs:
        aig.add_output(lit)
    got = _exhaustive_outputs(aig, n + k, w)
    for p, y in enumerate(got):
        x, i = _operands(p, (n, k))
        assert y == (x >> i) & ((1 << w) - 1)


def test_shifter_has_one_layer_per_index_bit():
    aig = Aig()
    bus, idx = _words(aig, (8, 3))
    frag = lower_indexed_select_shifter(aig, bus, idx, 4)
    assert len(frag.info["layers"]) == 3
    assert all(len(layer) == 8 for layer in frag.info["layers"])


def test_select_sizes_16_4_4():
    sizes = {}
    for f in (lower_indexed_select_shifter, lower_indexed_select_muxtree):
        aig = Aig()
        bus, idx = _words(aig, (16, 4))
        sizes[f] = f(aig, bus, idx, 4).internal_nodes
    # frozen after the exhaustive check above
    assert sizes[lower_indexed_select_shifter] == 126
    assert sizes[lower_indexed_select_muxtree] == 75


def test_full_width_slice_gives_no_muxtree_advantage():
    sizes = []
    for f in (lower_indexed_select_shifter, lower_indexed_select_muxtree):
        aig = Aig()
        bus, idx = _words(aig, (8, 3))
        sizes.append(f(aig, bus, idx, 8).internal_nodes)
    # no win when the slice is the whole bus
    assert sizes == [58, 58]


def test_slice_width_validation():
    aig = Aig()
    bus, idx = _words(aig, (4, 2))
    with pytest.raises(ValueError):
        lower_indexed_select_muxtree(aig, bus, idx, 5)
    with pytest.raises(ValueError):
        lower_indexed_select_shifter(aig, bus, idx, 0)


def test_constant_index_lowers_to_wires():
    src = "module c(input [15:0] x, output [3:0] y); assign y = x[4'd5 +: 4]; endmodule"
    for ps in PartSelectStrategy:
        aig = lower_design(load_design(src), LoweringOptions(ps))
        assert aig.node_count() == 0
        assert aig.outputs == aig.inputs[5:9]


SCAN16 = """module scan16(input [15:0] bus, input [3:0] idx, output [3:0] up, output [3:0] down);
  assign up = bus[idx +: 4];
  assign down = bus[idx -: 4];
endmodule"""


def test_strategies_equivalent_exhaustively_on_20_bit_scanner():
    d = load_design(SCAN16)
    shifter = lower_design(d, LoweringOptions(PartSelectStrategy.SHIFTER))
    muxtree = lower_design(d, LoweringOptions(PartSelectStrategy.MUXTREE))
    v = check_equivalence(shifter, muxtree, Exhaustive())
    assert v.equivalent and v.checked == 2**20
    assert exhaustive_check(d, muxtree)


def test_psel_scan_strategies_random_equivalent():
    s, m = lowered("psel_scan", "shifter"), lowered("psel_scan", "muxtree")
    assert check_equivalence(s, m, Random(100_000, 0))
    assert m.node_count() < s.node_count()


# -- adders ---------------------------------------------------------------------

@pytest.mark.parametrize("arch", ["ripple", "prefix"])
def test_adders_exhaustive_8bit(arch):
    aig = Aig()
    a, b = _words(aig, (8, 8))
    cin = aig.add_input()
    s, cout = add_bits(aig, a, b, cin, arch)
    for lit in s + [cout]:
        aig.add_output(lit)
    got = _exhaustive_outputs(aig, 17, 9)
    for p, y in enumerate(got):
        x, z, c = _operands(p, (8, 8, 1))
        assert y == x + z + c


def test_prefix_adder_is_shallower():
    depth = {}
    for arch in ("ripple", "prefix"):
        aig = Aig()
        a, b = _words(aig, (32, 32))
        frag = build_final_adder(aig, a, b, arch)
        depth[arch] = frag.depth
    assert depth["prefix"] < depth["ripple"]


def test_final_adder_rejects_mismatched_rows():
    aig = Aig()
    a, b = _words(aig, (4, 3))
    with pytest.raises(ValueError):
        build_final_adder(aig, a, b)


# -- Booth / CSA --------------------------------------------------------------------

def test_booth_8bit_exhaustive():
    aig = Aig()
    a, b = _words(aig, (8, 8))
    pair = build_booth_csa_multiplier(aig, a, b, 8)
    out, _ = add_bits(aig, pair.sum_bits, pair.carry_bits)
    for lit in out:
        aig.add_output(lit)
    got = _exhaustive_outputs(aig, 16, 8)
    for p, y in enumerate(got):
        x, z = _operands(p, (8, 8))
        assert y == (x * z) & 0xFF


def test_booth_row_count():
    aig = Aig()
    a, b = _words(aig, (16, 16))
    rows = booth_partial_products(aig, a, b, 16)
    assert len(rows) == 8 + 1  # ceil(16/2) digits plus the correction row


def _column_value(stage_cols, assignment_val, width):
    return sum(sum(assignment_val[x] for x in col) << j for j, col in enumerate(stage_cols)) % (1 << width)


def test_csa_preserves_column_weighted_sum():
    """Each 3:2 stage keeps sum(column bits * 2^j) mod 2^W, checked by simulation."""
    width = 8
    aig = Aig()
    a, b = _words(aig, (8, 8))
    rows = booth_partial_products(aig, a, b, width)
    s, c, stages = compress_rows(aig, rows, width)
    assert len(stages) >= 3
    assert all(len(col) <= 2 for col in stages[-1])
    lits = sorted({x for st in stages for col in st for x in col})
    for x in lits:
        aig.add_output(x)
    rng = np.random.default_rng(11)
    stim = rng.integers(0, 2**64, size=(16, 4), dtype=np.uint64)
    out = simulate(aig, stim)
    for w in range(4):
        for bit in range(0, 64, 7):
            val = {x: (int(out[i, w]) >> bit) & 1 for i, x in enumerate(lits)}
            sums = {_column_value(st, val, width) for st in stages}
            assert len(sums) == 1
            x = sum(((int(stim[j, w]) >> bit) & 1) << j for j in range(8))
            z = sum(((int(stim[8 + j, w]) >> bit) & 1) << j for j in range(8))
            assert sums == {(x * z) & 0xFF}


def test_fused_mac_exhaustive_24_bits():
    aig = Aig()
    a, b, c = _words(aig, (8, 8, 8))
    pair = build_booth_csa_multiplier(aig, a, b, 8, reduce=False)
    frag = fuse_mac(aig, pair, c)
    for lit in frag.outputs:
        aig.add_output(lit)
    got = np.array(_exhaustive_outputs(aig, 24, 8), dtype=np.int64)
    k = np.arange(1 << 24, dtype=np.int64)
    x, z, y = k & 0xFF, (k >> 8) & 0xFF, (k >> 16) & 0xFF
    assert np.array_equal(got, (x * z + y) & 0xFF)


def test_fusion_reduces_mac_depth():
    plain = lowered("mac16", "muxtree", False)
    fused = lowered("mac16", "muxtree", True)
    assert check_equivalence(plain, fused, Random(100_000, 1))
    assert fused.depth() < plain.depth()
    assert fused.node_count() < plain.node_count()


# -- whole designs against the word-level oracle ----------------------------------

@pytest.mark.parametrize("ps", list(PartSelectStrategy))
@pytest.mark.parametrize("fusion", [False, True])
@pytest.mark.parametrize("adder", list(FinalAdder))
def test_corpus_lowering_matches_oracle(corpus_name, ps, fusion, adder):
    d = corpus_design(corpus_name)
    aig = lower_design(d, LoweringOptions(ps, fusion, adder))
    res = random_check(d, aig, 10_000, seed=2)
    assert res, res.first


def test_pi_po_latch_counts():
    aig = lowered("scoreboard")
    assert (aig.num_inputs, aig.num_latches) == (11, 8)
    d = corpus_design("scoreboard")
    assert aig.num_outputs == sum(s.width for s in d.outputs)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["+", "-", "*", "&", "|", "^", "<<", ">>"]), st.sampled_from(["<", "==", ">="]))
def test_random_expressions_lower_correctly(op, cmp):
    src = (f"module r(input [5:0] a, input [5:0] b, input [2:0] s, output [5:0] y);"
           f" assign y = (a {cmp} b) ? (a {op} b) : a[s +: 3] ^ {{b[2:0], s}};"
           f" endmodule")
    d = load_design(src)
    for ps in PartSelectStrategy:
        aig = lower_design(d, LoweringOptions(ps, True, "prefix"))
        assert exhaustive_check(d, aig)
