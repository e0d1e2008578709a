import pytest
from hypothesis import given, settings, strategies as st

from minisynth.aig import Aig
from minisynth.equiv import Exhaustive, check_equivalence
from minisynth.errors import BadParameter, UnknownPass
from minisynth.lowering import LoweringOptions, lower_design
from minisynth.opt import balance, rewrite
from minisynth.opt.script import (
    BASIC, BUILTIN, ENHANCED, PassInvocation, load_script, parse_script, run_script,
)
from minisynth.qor.cells import map_to_cells, measure

from conftest import corpus_design, random_aig


def _ll(aig):
    return measure(map_to_cells(aig)).logic_levels


def _chain(n):
    aig = Aig()
    xs = [aig.add_input() for _ in range(n)]
    acc = xs[0]
    for x in xs[1:]:
        acc = aig.make_and(acc, x)
    aig.add_output(acc)
    return aig


def test_balance_chain_of_four():
    aig = _chain(4)
    assert aig.stats() == (3, 3)
    out = balance(aig)
    assert out.stats() == (3, 2)
    assert check_equivalence(aig, out, Exhaustive())


def test_balance_chain_of_eight():
    out = balance(_chain(8))
    assert out.stats() == (7, 3)


def test_balance_keeps_shared_nodes():
    aig = Aig()
    a, b, c, d = (aig.add_input() for _ in range(4))
    ab = aig.make_and(a, b)
    aig.add_output(aig.make_and(aig.make_and(ab, c), d))
    aig.add_output(ab)  # ab has two fanouts: a supergate boundary
    out = balance(aig)
    assert check_equivalence(aig, out, Exhaustive())
    assert out.node_count() == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_balance_is_sound_and_monotone(seed):
    aig = random_aig(seed, n_inputs=6, n_ands=60, n_outputs=4, n_latches=1)
    out = balance(aig)
    assert check_equivalence(aig, out, Exhaustive())
    assert out.depth() <= aig.depth()
    assert _ll(out) <= _ll(aig)


def test_rewrite_finds_smaller_mux():
    # mux built from 4 ANDs with a duplicated select term
    aig = Aig()
    s, x, y = aig.add_input(), aig.add_input(), aig.add_input()
    hi = aig.make_and(s, x)
    lo = aig.make_and(s ^ 1, y)
    both = aig.make_and(x, y)  # consensus term, redundant
    out = aig.make_or(aig.make_or(hi, lo), both)
    aig.add_output(out)
    assert aig.node_count() == 5
    res = rewrite(aig, preserve_levels=False)
    assert check_equivalence(aig, res, Exhaustive())
    assert res.node_count() == 3


def test_rewrite_rejects_cut_size():
    with pytest.raises(ValueError):
        rewrite(_chain(3), cut_size=5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.booleans())
def test_rewrite_is_sound_and_never_grows(seed, zero_gain):
    aig = random_aig(seed, n_inputs=6, n_ands=80, n_outputs=5)
    out = rewrite(aig, zero_gain=zero_gain)
    assert check_equivalence(aig, out, Exhaustive())
    assert out.node_count() <= aig.compact().node_count()
    # timing is preserved by default
    assert out.depth() <= aig.depth()
    assert _ll(out) <= _ll(aig)


def test_rewrite_is_deterministic():
    aig = random_aig(99, n_ands=120)
    assert rewrite(aig).structurally_equal(rewrite(aig))


# -- scripts ------------------------------------------------------------------

def test_builtin_scripts():
    assert set(BUILTIN) == {"basic", "enhanced", "none"}
    assert [str(p) for p in BASIC.passes] == ["strash", "balance"]
    assert "rewrite zero_gain=on" in [str(p) for p in ENHANCED.passes]


def test_parse_script():
    s = parse_script("# mine\nstrash\nrewrite zero_gain=on cut_limit=6  # inline\n\nbalance\n", "mine")
    assert s.name == "mine"
    assert [str(p) for p in s.passes] == ["strash", "rewrite cut_limit=6 zero_gain=on", "balance"]


def test_script_errors():
    with pytest.raises(UnknownPass):
        parse_script("refactor\n")
    with pytest.raises(BadParameter):
        parse_script("rewrite depth=3\n")
    with pytest.raises(BadParameter):
        parse_script("rewrite zero_gain\n")
    with pytest.raises(BadParameter):
        PassInvocation.of("balance", x=1)
    with pytest.raises(UnknownPass):
        load_script("/nonexistent/script.txt")


def test_load_script_file(tmp_path):
    p = tmp_path / "quick.txt"
    p.write_text("strash\nbalance\n")
    s = load_script(str(p))
    assert s.name == "quick" and len(s.passes) == 2


def test_run_script_stats_chain():
    aig = lower_design(corpus_design("rng_rom"))
    out, stats = run_script(aig, ENHANCED)
    assert len(stats) == len(ENHANCED.passes)
    for prev, cur in zip(stats, stats[1:]):
        assert cur.nodes_before == prev.nodes_after
        assert cur.depth_before == prev.depth_after
    assert stats[-1].nodes_after == out.node_count()


@pytest.mark.parametrize("name", ["rng_rom", "scoreboard"])
@pytest.mark.parametrize("ps", ["shifter", "muxtree"])
def test_every_pass_is_exhaustively_equivalent(name, ps):
    """Designs with at most 20 input+latch bits: check after each pass, not only at the end."""
    aig = lower_design(corpus_design(name), LoweringOptions(ps, False, "prefix"))
    assert aig.num_inputs + aig.num_latches <= 20
    ref = aig
    for p in ENHANCED.passes:
        nxt = p.run(aig)
        assert check_equivalence(ref, nxt, Exhaustive()), str(p)
        aig = nxt
