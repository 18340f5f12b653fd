import random

from hypothesis import given, settings, strategies as st

from boogievc.ast import Return
from boogievc.flowgraph import (
    build_flowgraph, build_pseudo_flowgraph, is_acyclic, reachable, to_dot, to_program,
    topological_order,
)
from boogievc.frontend import parse_program, typecheck
from boogievc.generators import random_boolean_program
from boogievc.passivation import random_series_parallel_flowgraph

from oracles import is_series_parallel
from support import load

DEAD_DRAWN_EDGES = {(0, 1), (1, 2), (2, 4), (2, 6), (4, 5), (6, 7)}


def dot_edges(text):
    out = set()
    for line in text.splitlines():
        line = line.strip().rstrip(";")
        if "->" in line:
            a, b = (x.strip() for x in line.split("->"))
            out.add((int(a[1:]), int(b[1:])))
    return out


def test_dead_pseudo_flowgraph():
    g = build_pseudo_flowgraph(load("dead.bpl"))
    assert g.nodes == list(range(8))
    # statement 3 is not a goto, so it falls through to 4 even though it
    # is never reached; the drawing leaves that edge out
    assert g.edges == DEAD_DRAWN_EDGES | {(3, 4)}


def test_single_return_pseudo():
    g = build_pseudo_flowgraph(parse_program("procedure p() returns () { return; }"))
    assert g.nodes == [0, 1] and g.edges == {(0, 1)}


def test_index_of_has_loop():
    g = build_flowgraph(load("indexOf.bpl"))
    assert not is_acyclic(g)
    assert (3, 4) in g.edges and (4, 3) in g.edges


def test_dead_flowgraph():
    g = build_flowgraph(load("dead.bpl"))
    assert g.nodes == [0, 1, 4, 5, 6, 7]
    assert g.edges == {(0, 1), (1, 4), (1, 6), (4, 5), (6, 7)}
    pseudo = build_pseudo_flowgraph(load("dead.bpl"))
    assert 3 not in reachable(pseudo)


def test_chain():
    p = parse_program("procedure p(x : int) returns () { x := 1; x := 2; return; }")
    g = build_flowgraph(p)
    assert g.edges == {(0, 1), (1, 2), (2, 3)}
    assert is_acyclic(g)


def test_make_even_diamond():
    g = build_flowgraph(load("makeEven.bpl"))
    assert len(g.nodes) == 7  # the six statements and the sentinel
    assert g.edges == {(0, 1), (1, 3), (1, 5), (3, 7), (5, 8), (7, 8), (8, 9)}


def test_dot_round_trip():
    g = build_flowgraph(load("dead.bpl"))
    assert dot_edges(to_dot(g)) == g.edges
    two = build_flowgraph(parse_program("procedure p(x : int) returns () { x := 1; }"))
    d = to_dot(two)
    assert d.count("[label=") == 3 and len(dot_edges(d)) == 2
    empty = to_dot(build_flowgraph(parse_program("procedure p() returns () { }")))
    assert d.startswith("digraph") and dot_edges(empty) == {(0, 1)}


def test_dot_escapes_quotes():
    assert '\\"' in to_dot(build_flowgraph(load("dead.bpl")), 'a"b')


def test_to_program_reparses_to_same_graph():
    for name in ("makeEven.bpl", "dead.bpl"):
        p = load(name)
        g = build_flowgraph(p)
        from boogievc.frontend import print_program
        q = parse_program(print_program(to_program(g, p)), allow_reserved=True)
        typecheck(q)
        h = build_flowgraph(q)
        assert len(h.nodes) == len(g.nodes) and len(h.edges) == len(g.edges)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_only_returns_are_sinks(seed):
    g = build_flowgraph(parse_program(random_boolean_program(seed, nblocks=5)))
    for x in g.nodes:
        assert bool(g.succ[x]) != isinstance(g.stmt[x], Return)
    order = topological_order(g)
    pos = {x: i for i, x in enumerate(order)}
    assert all(pos[a] < pos[b] for a, b in g.edges)


def test_series_parallel_generator():
    for seed in range(1000):
        r = random.Random(seed)
        g = random_series_parallel_flowgraph(seed, r.randint(1, 12), r.random(), r.random())
        assert is_acyclic(g)
        sink = [x for x in g.nodes if not g.succ[x]]
        assert len(sink) == 1
        assert is_series_parallel(g.nodes, g.edges, g.initial, sink[0]), seed


def test_generator_is_deterministic():
    a = random_series_parallel_flowgraph(7, 9, .5, .5)
    b = random_series_parallel_flowgraph(7, 9, .5, .5)
    assert a.edges == b.edges and a.stmt == b.stmt


def test_budget_one_is_single_node():
    g = random_series_parallel_flowgraph(3, 1, 1.0, 0.0)
    inner = [x for x in g.nodes if g.pred[x] and g.succ[x]]
    assert len(inner) == 1
