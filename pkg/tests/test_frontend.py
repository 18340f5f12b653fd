import pytest
from hypothesis import given, settings, strategies as st

from boogievc.ast import Assert, Assign, Binary, Goto, IntType, MapType, BoolType, Program, Return, Select, Var
from boogievc.errors import ParseError, SymbolError, TypeCheckError
from boogievc.frontend import (
    build_symbol_table, parse_expr, parse_program, print_expr, print_program, typecheck,
)
from boogievc.generators import random_boolean_program

from support import data_path, load


def src(body, params="x : int", results=""):
    return f"procedure p({params}) returns ({results}) {{ {body} }}"


def test_make_even_statements_and_labels():
    p = load("makeEven.bpl")
    real = [s for s in p.statements if not isinstance(s, Goto)]
    assert len(real) == 6
    assert isinstance(real[-1], Return)
    assert [b.label for b in p.body if b.label] == ["L0", "L1", "L2", "L3", "L4"]


def test_minimal_body():
    p = parse_program("procedure p() returns () { return; }")
    assert p.statements == (Return(),)


def test_trailing_return_is_added():
    p = parse_program(src("x := 1;"))
    assert isinstance(p.statements[-1], Return)
    assert len(p.statements) == 2


def test_undefined_goto_target():
    with pytest.raises(ParseError, match="L9"):
        parse_program(src("goto L9;"))


def test_duplicate_label():
    with pytest.raises(ParseError):
        parse_program(src("A: x := 1; A: return;"))


def test_precedence():
    e = parse_expr("a || b && c == d")
    assert isinstance(e, Binary) and e.op == "||"
    assert e.right.op == "&&" and e.right.right.op == "=="
    assert print_expr(parse_expr("1 + 2 - 3")) == "1 + 2 - 3"
    assert print_expr(parse_expr("1 - (2 - 3)")) == "1 - (2 - 3)"


def test_sugar_is_desugared():
    assert print_expr(parse_expr("a != b")) == "!(a == b)"
    assert print_expr(parse_expr("a > b")) == "b < a"


def test_reserved_names_rejected():
    with pytest.raises(ParseError):
        parse_program(src("v@1 := 1;"))
    p = parse_program("procedure p() returns () { var v@1 : int; v@1 := 1; }", allow_reserved=True)
    assert p.locals[0].name == "v@1"


def test_print_round_trip_on_examples():
    for name in ("makeEven.bpl", "dead.bpl", "indexOf.bpl", "fbool.bpl"):
        p = load(name)
        assert parse_program(print_program(p)) == p


def test_single_return_prints_to_fixed_point():
    text = print_program(parse_program("procedure p() returns () { }"))
    assert print_program(parse_program(text)) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_round_trip(seed):
    p = parse_program(random_boolean_program(seed, nvars=3, nblocks=4))
    once = parse_program(print_program(p))
    assert once == p
    assert print_program(once) == print_program(p)


def test_assert_int_names_rule():
    p = parse_program("procedure p() returns () { assert 1; }")
    with pytest.raises(TypeCheckError) as ei:
        typecheck(p)
    assert "[asrt]" in str(ei.value)


def test_increment_is_int():
    p = parse_program(src("x := x + 1;"))
    tm = typecheck(p)
    a = p.statements[0]
    assert isinstance(a, Assign)
    assert tm[a.rhs] == IntType()


def test_select_equality_types():
    p = parse_program(src("assert v[i] == true;", params="v : [int] bool, i : int"))
    tm = typecheck(p)
    eq = p.statements[0].expr
    sel = eq.left
    assert isinstance(sel, Select)
    assert tm[sel.map] == MapType(IntType(), BoolType())
    assert tm[sel] == BoolType()
    assert tm[eq] == BoolType()


def test_typecheck_is_deterministic():
    p = load("makeEven.bpl")
    assert typecheck(p).signature() == typecheck(p).signature()


@pytest.mark.parametrize("body,rule", [
    ("x := true;", "[asgn]"),
    ("assume x;", "[asm]"),
    ("assert x && true;", "[bool]"),
    ("assert true + 1 == 2;", "[arith]"),
    ("assert true < 1;", "[comp]"),
    ("assert x == true;", "[eq]"),
])
def test_type_errors(body, rule):
    with pytest.raises(TypeCheckError) as ei:
        typecheck(parse_program(src(body)))
    assert rule in str(ei.value)


def test_v_has_five_use_sites():
    p = load("makeEven.bpl")
    t = build_symbol_table(p)
    assert len(t.use_sites(t.lookup("v"))) == 5


def test_unused_local():
    p = parse_program("procedure p() returns () { var z : int; return; }")
    t = build_symbol_table(p)
    assert t.lookup("z") is not None
    assert t.uses(t.lookup("z")) == []


def test_undeclared_variable():
    with pytest.raises(SymbolError) as ei:
        build_symbol_table(parse_program(src("x := z;")))
    assert "z" in str(ei.value) and "1:" in str(ei.value)


def test_quantifier_scoping():
    p = parse_program(src("assert (forall y : int :: y < x || !(y < x));"))
    typecheck(p)
    t = build_symbol_table(p)
    assert len(t.uses(t.lookup("x"))) == 2
