import pytest
from hypothesis import given, settings, strategies as st

from minisynth.errors import (
    CombinationalCycle, DeclarationError, FrontendError, LexError, MultipleDrivers, ParseError,
    UndrivenNet, UnsupportedConstruct, WidthMismatch,
)
from minisynth.frontend import load_design, parse_design, print_design, print_expr
from minisynth.frontend import ast as A
from minisynth.frontend.lexer import tokenize
from minisynth.ir import dump, evaluate


def test_identity_module():
    ast = parse_design("module id(input [3:0] a, output [3:0] y); assign y = a; endmodule")
    assert ast.module == "id"
    assert [(p.name, p.direction, p.width) for p in ast.ports] == [("a", "input", 4), ("y", "output", 4)]
    assert len(ast.assigns) == 1
    assert ast.assigns[0].expr == A.Ident("a")


def test_indexed_part_select_node():
    ast = parse_design("module m(input [15:0] x, input [3:0] i, output [3:0] y);"
                       " assign y = x[i +: 4]; endmodule")
    e = ast.assigns[0].expr
    assert isinstance(e, A.IndexedPartSelect)
    assert (e.name, e.width, e.descending) == ("x", 4, False)
    down = parse_design("module m(input [15:0] x, input [3:0] i, output [3:0] y);"
                        " assign y = x[i -: 4]; endmodule").assigns[0].expr
    assert down.descending


def test_signed_rejected_with_span():
    src = "module m(input [3:0] a, input [3:0] b, output [3:0] y);\n  assign y = $signed(a) * b;\nendmodule"
    with pytest.raises(UnsupportedConstruct) as ei:
        parse_design(src, "t.v")
    assert "$signed" in str(ei.value)
    assert str(ei.value).startswith("t.v:2:")


@pytest.mark.parametrize("src, construct", [
    ("module m(input signed [3:0] a, output y); assign y = a[0]; endmodule", "signed"),
    ("module m(input [3:0] a, output y); assign y = a[0] && a[1]; endmodule", "&&"),
    ("module m(input [3:0] a, output [3:0] y); assign y = a / 2; endmodule", "/"),
    ("module m(input clk, input a, output reg y); always @(negedge clk) y <= a; endmodule", "negedge"),
])
def test_unsupported_constructs(src, construct):
    with pytest.raises(UnsupportedConstruct) as ei:
        parse_design(src)
    assert construct in str(ei.value)


def test_lex_error_location():
    with pytest.raises(LexError) as ei:
        tokenize("module m;\n  \\ x\n", "f.v")
    assert str(ei.value).startswith("f.v:2:3")


def test_directive_is_unsupported():
    with pytest.raises(UnsupportedConstruct):
        tokenize("`define X 1\n")


def test_parse_error_location():
    with pytest.raises(ParseError) as ei:
        parse_design("module m(input a, output y);\nassign y = ;\nendmodule", "p.v")
    assert str(ei.value).startswith("p.v:2:")


def test_comments_are_skipped():
    ast = parse_design("// c\nmodule m(input a, /* x */ output y); assign y = ~a; // end\nendmodule")
    assert ast.assigns[0].expr == A.Unary("~", A.Ident("a"))


def test_non_ansi_ports_and_registers():
    src = """module acc(clk, d, q);
        input clk; input [3:0] d; output [3:0] q; reg [3:0] q;
        always @(posedge clk) q <= q + d;
    endmodule"""
    design = load_design(src)
    assert [r.name for r in design.registers] == ["q"]
    assert design.clock == "clk"
    # the clock is not a data input
    assert [s.name for s in design.inputs] == ["d"]


def test_duplicate_declaration():
    with pytest.raises(DeclarationError):
        parse_design("module m(input a, output y); wire a; assign y = a; endmodule")


# -- elaboration -------------------------------------------------------------

def test_add_zero_extends_to_target_width():
    d = load_design("module m(input [3:0] a, input [3:0] b, output [7:0] y); assign y = a + b; endmodule")
    add = [op for op in d.nodes if op.kind == "Add"]
    assert len(add) == 1 and add[0].width == 8
    assert all(d.nodes[o].width == 8 for o in add[0].operands)
    out, _ = evaluate(d, {"a": 15, "b": 15})
    assert int(out["y"]) == 30  # no wrap at 4 bits


def test_two_cycle():
    src = "module m(input x, output y); wire a, b; assign a = b; assign b = a; assign y = a ^ x; endmodule"
    with pytest.raises(CombinationalCycle) as ei:
        load_design(src)
    assert "a" in str(ei.value) and "b" in str(ei.value)


def test_constant_too_wide():
    with pytest.raises(WidthMismatch) as ei:
        load_design("module m(output [3:0] y); assign y = 4'd18; endmodule")
    assert "18" in str(ei.value)


def test_wider_operand_than_target():
    with pytest.raises(WidthMismatch):
        load_design("module m(input [7:0] a, output [3:0] y); assign y = a; endmodule")


def test_multiple_drivers():
    with pytest.raises(MultipleDrivers):
        load_design("module m(input a, output y); assign y = a; assign y = ~a; endmodule")


def test_undriven_net():
    with pytest.raises(UndrivenNet):
        load_design("module m(input a, output y); wire w; assign y = a; endmodule")


def test_every_frontend_error_carries_a_span():
    bad = [
        "module m(input a, output y); assign y = b; endmodule",
        "module m(input [7:0] a, output [3:0] y); assign y = a; endmodule",
        "module m(input a, output y); assign y = a; assign y = a; endmodule",
    ]
    for src in bad:
        with pytest.raises(FrontendError) as ei:
            load_design(src, "s.v")
        assert ei.value.span is not None
        assert str(ei.value).startswith("s.v:")


def test_constant_folding():
    d = load_design("module m(output [7:0] y); assign y = (8'd3 + 8'd4) * 8'd2; endmodule")
    kinds = [op.kind for op in d.nodes]
    assert kinds == ["Const"]
    assert d.nodes[0].params[0] == 14


def test_elaboration_is_deterministic():
    from minisynth import corpus_path
    src = corpus_path("scoreboard").read_text()
    assert dump(load_design(src)) == dump(load_design(src))


# -- printer round trip --------------------------------------------------------

NAMES = ("a", "b", "c")  # all declared [7:0]

leaf = st.one_of(
    st.sampled_from(NAMES).map(A.Ident),
    st.builds(lambda w, v, base: A.Number(w, v % (1 << w), base),
              st.integers(1, 8), st.integers(0, 255), st.sampled_from("bdh")),
    st.builds(lambda n, i: A.BitSelect(n, A.Number(None, i)), st.sampled_from(NAMES), st.integers(0, 7)),
    st.builds(lambda n, hi, lo: A.PartSelect(n, max(hi, lo), min(hi, lo)),
              st.sampled_from(NAMES), st.integers(0, 7), st.integers(0, 7)),
)


def _extend(children):
    return st.one_of(
        st.builds(A.Unary, st.sampled_from(["~", "!", "-", "&", "|", "^"]), children),
        st.builds(A.Binary, st.sampled_from(["+", "-", "*", "&", "|", "^", "<<", ">>", "==", "!=",
                                             "<", "<=", ">", ">="]), children, children),
        st.builds(A.Ternary, children, children, children),
        st.builds(lambda xs: A.Concat(tuple(xs)), st.lists(children, min_size=1, max_size=3)),
        st.builds(A.Replicate, st.integers(1, 3), children),
        st.builds(lambda n, e, w, d: A.IndexedPartSelect(n, e, w, d),
                  st.sampled_from(NAMES), children, st.integers(1, 4), st.booleans()),
    )


exprs = st.recursive(leaf, _extend, max_leaves=8)


def _module(expr):
    ports = tuple(A.Port(n, "input", 8) for n in NAMES) + (A.Port("y", "output", 16),)
    return A.Ast("gen", ports, (), (A.ContinuousAssign("y", expr),), ())


@settings(max_examples=300, deadline=None)
@given(exprs)
def test_print_parse_round_trip(expr):
    ast = _module(expr)
    text = print_design(ast)
    assert parse_design(text) == ast


def test_print_expr_parenthesizes():
    e = A.Binary("+", A.Ident("a"), A.Binary("*", A.Ident("b"), A.Ident("c")))
    assert print_expr(e) == "(a + (b * c))"
