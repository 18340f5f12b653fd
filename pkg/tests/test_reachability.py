import math
import random
from types import SimpleNamespace

import pytest

from boogievc.flowgraph import Flowgraph, build_flowgraph
from boogievc.frontend import parse_program, typecheck
from boogievc.generators import inject_assume_false, random_boolean_program
from boogievc.prover import ProverSession
from boogievc.reachability import (
    BLACK, GRAY, WHITE, Coloring, compute_dominators, inner, naive_reachability, outer,
    pick_query_node, propagate_black, propagate_white, query_bound, reachability_analysis,
    split_nodes,
)
from boogievc.smt import IntType, Session
from boogievc.vcgen import VCGen

from oracles import brute_dominators, execute
from support import load, prepare


def graph(n, edges, root=0):
    return Flowgraph({i: None for i in range(n)}, edges, root)


def stub_gen(g):
    s = Session()
    return SimpleNamespace(sp_annotate=lambda h: SimpleNamespace(
        pre={x: s.prop(f"i{x}") for x in h.nodes}, post={x: s.prop(f"o{x}") for x in h.nodes}))


def test_split_single_node():
    g = graph(1, [])
    sp = split_nodes(g, stub_gen(g))
    assert sp.graph.nodes == [0, 1] and sp.graph.edges == {(0, 1)}


def test_split_dead():
    p = load("dead.bpl")
    g = build_flowgraph(p)
    s = Session()
    gen = VCGen.for_program(p, s)
    sp = split_nodes(g, gen)
    assert len(sp.graph.nodes) == 12
    assert len(sp.graph.edges) == len(g.edges) + len(g.nodes)
    x = s.var("x", IntType())
    assert sp.formula[outer(4)] is s.And(s.mk("lt", (s.int_lit(0), x)), s.mk("lt", (x, s.int_lit(0))))


def test_dominator_examples():
    assert compute_dominators(graph(4, [(0, 1), (1, 2), (2, 3)])).idom == {0: None, 1: 0, 2: 1, 3: 2}
    assert compute_dominators(graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])).idom[3] == 0


def random_dag(seed, max_nodes=50):
    r = random.Random(seed)
    n = r.randint(1, max_nodes)
    edges = set()
    for y in range(1, n):
        for x in r.sample(range(y), min(y, r.randint(1, 3))):
            edges.add((x, y))
    return graph(n, edges)


def test_dominators_against_definition():
    for seed in range(200):
        g = random_dag(seed)
        assert compute_dominators(g).idom == brute_dominators(g.nodes, g.succ, 0)


def test_dominators_on_subgraph():
    g = graph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
    t = compute_dominators(g, [0, 2, 3, 4])
    assert t.idom == {0: None, 2: 0, 3: 2, 4: 3}


def test_white_propagates_to_dominators():
    g = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    col = Coloring({n: GRAY for n in g.nodes})
    propagate_white(4, compute_dominators(g), col)
    assert all(col[n] == WHITE for n in range(5))


def test_star_black_stays_local():
    g = graph(6, [(0, k) for k in range(1, 6)])
    col = Coloring({n: GRAY for n in g.nodes})
    col[0] = WHITE
    propagate_black(1, g, col)
    assert col[1] == BLACK and all(col[k] == GRAY for k in range(2, 6))


def test_black_needs_all_parents():
    g = graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    col = Coloring({n: GRAY for n in g.nodes})
    propagate_black(1, g, col)
    assert col[3] == GRAY
    propagate_black(2, g, col)
    assert col[3] == BLACK


def test_repaint_is_an_error():
    col = Coloring({0: WHITE})
    with pytest.raises(Exception):
        col.paint(0, BLACK)


def test_query_node_is_deepest_leaf():
    g = graph(5, [(0, 1), (1, 2), (0, 3), (3, 4)])
    t = compute_dominators(g)
    col = Coloring({n: GRAY for n in g.nodes})
    assert pick_query_node(t, col) == 2


def analyse(p, naive=False):
    typecheck(p)
    g, ag, gen = prepare(p)
    with ProverSession() as pv:
        fn = naive_reachability if naive else reachability_analysis
        return g, ag, fn(ag, gen, pv, gen.hypotheses)


def test_dead():
    g, ag, rep = analyse(load("dead.bpl"))
    assert rep.blockers == {4}
    assert rep.unreachable == {5}
    assert not rep.doomed
    lines = rep.findings(ag, display=g, filename="dead.bpl")
    assert lines == ["L4: blocker assumption: assume x < 0; at dead.bpl:5:7",
                     "L5: unreachable: return; at dead.bpl:6:7"]
    _, _, naive = analyse(load("dead.bpl"), naive=True)
    assert naive.classification() == rep.classification()


def test_two_returns():
    p = parse_program("procedure p(x : int) returns () {\n"
                      "  goto A, B;\n  A: assume 0 < x; return;\n  B: assume x < 1; return;\n}")
    _, _, rep = analyse(p)
    assert rep.clean and rep.initial_leaves == 2 and rep.query_count == 2


def test_entry_blocker_is_one_cluster():
    p = parse_program("procedure p(x : int) returns () {\n"
                      "  assume false; x := 1; assert x == 1; x := 2; assert x == 2;\n}")
    g, ag, rep = analyse(p)
    assert rep.blockers == {1}
    assert rep.unreachable == {n for n in ag.nodes if n > 1}
    lines = rep.findings(ag, display=g)
    assert len(lines) == 2
    assert "blocker" in lines[0] and "unreachable: x := 1;" in lines[1]


def test_doomed_assertion():
    p = parse_program("procedure p(x : int) returns () { assume 0 < x; assert x < 0; }")
    _, _, rep = analyse(p)
    assert rep.doomed == {2}
    assert rep.unreachable == {3}


def test_naive_on_assertion_free_chain():
    k = 5
    body = " ".join("b := !b;" for _ in range(k))
    p = parse_program(f"procedure p(b : bool) returns () {{ {body} }}")
    _, ag, rep = analyse(p, naive=True)
    assert rep.clean
    # a precondition query per node, plus a postcondition query per assumption
    assert rep.query_count == len(ag.nodes) + k + 1


def programs(count, **kw):
    for seed in range(count):
        r = random.Random(seed)
        yield seed, parse_program(random_boolean_program(
            seed, nvars=r.randint(1, 4), nblocks=r.randint(2, 8), **kw))


def test_fast_and_naive_agree_with_execution():
    from boogievc.ast import Assert, Assume
    for seed, p in programs(80):
        g, ag, fast = analyse(p)
        _, _, naive = analyse(p, naive=True)
        assert fast.classification() == naive.classification(), seed
        assert fast.blockers == naive.blockers
        ex = execute(p)
        orig = set(g.nodes) - {0}
        assert fast.unreachable & orig == {x for x in orig if x - 1 not in ex.reached}
        assert fast.doomed == {x for x in orig if isinstance(g.stmt[x], Assert)
                               and x - 1 in ex.reached and x - 1 not in ex.passed}
        assert fast.blockers == {x for x in orig if isinstance(g.stmt[x], Assume)
                                 and x - 1 in ex.reached and x - 1 not in ex.passed}


def test_query_bound_with_bugs():
    checked = 0
    for seed, p in programs(120, p_assume=0.1, p_assert=0.2):
        typecheck(p)
        _, _, base = analyse(p, naive=True)
        if not base.clean:
            continue
        b = 1 + seed % 3
        q = inject_assume_false(p, seed, b)
        _, _, rep = analyse(q)
        assert rep.query_count <= rep.initial_leaves + b * (math.ceil(math.log2(max(rep.max_path, 1))) + 2)
        assert rep.query_count <= query_bound(rep)
        checked += 1
    assert checked > 20
