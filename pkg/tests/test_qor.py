import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minisynth import corpus_path
from minisynth.aig import CONST0, CONST1, Aig
from minisynth.errors import FrontendError, LibraryIncomplete
from minisynth.qor import (
    DEFAULT_LIBRARY, Cell, CellLibrary, FlowConfig, column_config, compare_configs, map_to_cells,
    measure, run_flow, simulate_netlist,
)
from minisynth.qor.plotting import plot_comparison, plot_passes
from minisynth.sim import simulate

from conftest import random_aig


def _metrics(aig):
    nl = map_to_cells(aig)
    nl.validate()
    return measure(nl)


def test_buffer_costs_nothing():
    aig = Aig()
    aig.add_output(aig.add_input())
    m = _metrics(aig)
    assert (m.area_ge, m.logic_levels, m.cell_counts) == (0.0, 0, {})


def test_and_is_nand_plus_inv():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    aig.add_output(aig.make_and(a, b))
    m = _metrics(aig)
    assert m.area_ge == pytest.approx(1.67)
    assert m.logic_levels == 2
    assert m.cell_counts == {"INV": 1, "NAND2": 1}


def test_inverter_absorbed_into_nand():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    aig.add_output(aig.make_and(a, b) ^ 1)
    m = _metrics(aig)
    assert (m.area_ge, m.logic_levels) == (1.0, 1)


def test_or_needs_input_inverters():
    aig = Aig()
    a, b = aig.add_input(), aig.add_input()
    aig.add_output(aig.make_or(a, b))  # NAND(~a, ~b)
    m = _metrics(aig)
    assert m.area_ge == pytest.approx(2.34)
    assert m.logic_levels == 2


def test_shared_inverter():
    aig = Aig()
    a, b, c = (aig.add_input() for _ in range(3))
    ab = aig.make_and(a, b)
    aig.add_output(aig.make_and(ab, c))
    aig.add_output(ab)
    m = _metrics(aig)
    # NAND ab, one INV for the true ab used twice, NAND, INV
    assert m.cell_counts == {"INV": 2, "NAND2": 2}


def test_four_input_and_levels():
    aig = Aig()
    xs = [aig.add_input() for _ in range(4)]
    aig.add_output(aig.make_and(aig.make_and(xs[0], xs[1]), aig.make_and(xs[2], xs[3])))
    assert _metrics(aig).logic_levels == 4


def test_constant_outputs_are_tied():
    aig = Aig()
    aig.add_input()
    aig.add_output(CONST0)
    aig.add_output(CONST1)
    nl = map_to_cells(aig)
    assert nl.outputs == [0, 1]
    assert measure(nl).area_ge == 0.0


def test_library_validation():
    with pytest.raises(ValueError):
        CellLibrary((Cell("N", "NAND2", 0.0),))
    with pytest.raises(ValueError):
        CellLibrary((Cell("X", "XOR2", 1.0),))
    lib = CellLibrary((Cell("N", "NAND2", 1.0),))
    aig = Aig()
    aig.add_output(aig.make_and(aig.add_input(), aig.add_input()))
    with pytest.raises(LibraryIncomplete):
        map_to_cells(aig, lib)


def test_custom_library_areas():
    lib = CellLibrary((Cell("nd2", "NAND2", 2.0), Cell("iv", "INV", 0.5)))
    aig = Aig()
    aig.add_output(aig.make_and(aig.add_input(), aig.add_input()))
    assert measure(map_to_cells(aig, lib), lib).area_ge == 2.5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_mapping_preserves_function(seed):
    aig = random_aig(seed, n_inputs=8, n_ands=70, n_outputs=6, n_latches=2)
    nl = map_to_cells(aig)
    nl.validate()
    rng = np.random.default_rng(seed)
    stim = rng.integers(0, 2**64, size=(10, 157), dtype=np.uint64)  # ~10^4 vectors
    assert np.array_equal(simulate(aig, stim), simulate_netlist(nl, stim))


# -- flow ---------------------------------------------------------------------

IDENTITY = "module ident(input [7:0] a, output [7:0] y); assign y = a; endmodule\n"


@pytest.fixture
def ident(tmp_path):
    p = tmp_path / "ident.v"
    p.write_text(IDENTITY)
    return p


def test_identity_module_costs_nothing(ident):
    r = run_flow(ident)
    assert (r.area_ge, r.logic_levels, r.aig_nodes, r.aig_depth) == (0.0, 0, 0, 0)
    assert r.equivalent is True


def test_report_deterministic_except_runtime(tmp_path):
    src = corpus_path("scoreboard")
    a = run_flow(src, FlowConfig(script="enhanced")).to_dict()
    b = run_flow(src, FlowConfig(script="enhanced")).to_dict()
    for d in (a, b):
        d.pop("runtime_s")
        for p in d["per_pass"]:
            p.pop("runtime_s")
    assert a == b


def test_report_outputs(tmp_path):
    out, aag = tmp_path / "r.json", tmp_path / "o.aag"
    r = run_flow(corpus_path("scoreboard"),
                 FlowConfig(report_format="json", out=str(out), emit_aiger=str(aag)))
    data = json.loads(out.read_text())
    assert data["area_ge"] == r.area_ge and data["design"] == "scoreboard"
    assert "[exhaustive]" in data["equivalence"]
    assert aag.read_text().startswith("aag ")
    text = r.to_text()
    assert "area (GE)" in text and "logic levels" in text


def test_random_equivalence_for_wide_designs():
    r = run_flow(corpus_path("mac16"), FlowConfig(vectors=5000, seed=4))
    assert r.equivalent and "random, seed 4" in r.equivalence


def test_flow_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(equiv="sat")
    with pytest.raises(ValueError):
        FlowConfig(vectors=0)
    with pytest.raises(FileNotFoundError):
        FlowConfig(script="no/such/script")


def test_top_mismatch(ident):
    with pytest.raises(FrontendError):
        run_flow(ident, FlowConfig(top="other"))


def test_comparison_outputs(tmp_path, ident):
    configs = [column_config(k, FlowConfig(equiv="off")) for k in ("iguana", "mux")]
    cmp = compare_configs([ident, corpus_path("scoreboard")], configs)
    assert cmp.labels == ["Iguana-like", "MUX"]
    assert cmp.designs == ["ident", "scoreboard"]
    assert cmp.total("aig_nodes", 0) == 84 and cmp.total("aig_nodes", 1) == 72
    text = cmp.to_text()
    assert "corpus total" in text and "72*" in text
    rows = cmp.csv_rows()
    assert rows[0] == ["design", "metric", "Iguana-like", "MUX"]
    path = tmp_path / "c.csv"
    with open(path, "w", newline="") as f:
        csv.writer(f).writerows(rows)
    assert len(list(csv.reader(open(path)))) == 1 + 3 * 4
    plot_comparison(cmp, tmp_path / "c.png")
    assert (tmp_path / "c.png").read_bytes()[:4] == b"\x89PNG"


def test_column_config_unknown():
    with pytest.raises(ValueError):
        column_config("yosys")


def test_plot_passes(tmp_path):
    r = run_flow(corpus_path("rng_rom"), FlowConfig(script="enhanced", equiv="off"))
    plot_passes(r, tmp_path / "p.png")
    assert (tmp_path / "p.png").stat().st_size > 1000
