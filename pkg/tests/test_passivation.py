import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from boogievc.ast import Assign
from boogievc.flowgraph import build_flowgraph
from boogievc.frontend import parse_program, typecheck
from boogievc.generators import diamonds
from boogievc.passivation import (
    TwoChain, VarGraph, VarWitness, base_name, check_passive_form, check_var_passive_form,
    extract_independent_set, independent_set_passive_form, is_increasing_version, lis,
    min_versions_lower_bound, mins_to_flowgraph, passivate_var, random_series_parallel_var_graph,
    read_version, read_write_versions, two_chain_copy_optimal_distinct,
    two_chain_copy_optimal_increasing, two_chain_of, two_chain_sequence, var_graph,
    version_of, version_optimal_passive_form, versioned, versions_used, write_version,
)
from boogievc.vcgen import is_passive

from oracles import (
    brute_lis, brute_matching, brute_max_writes, brute_read_write, min_versions_exhaustive,
    min_versions_search, passive_forms_exhaustive, two_chain_min_copies_distinct,
    two_chain_min_copies_increasing,
)
from support import load

VO = VarGraph(range(7), [(0, 1), (1, 3), (3, 5), (0, 2), (2, 5), (2, 4), (4, 6)], range(7), range(7))
IV = TwoChain(2, 2, ((1, 2), (2, 1)))
# versions from the copy-free solution drawn for the iv/dv instance
IV_WITNESS = VarWitness({x: x for x in range(7)},
                        r={0: -1, 1: 0, 2: 1, 3: 0, 4: 2, 5: 1, 6: 2},
                        w={0: 0, 1: 1, 2: 2, 3: 2, 4: 1})


def sp_graphs(count, max_budget=10):
    for seed in range(count):
        r = random.Random(seed)
        yield random_series_parallel_var_graph(seed, r.randint(1, max_budget), r.random(), r.random())


def test_version_names():
    assert versioned("v", 3) == "v@3" and versioned("v", -1) == "v@-1"
    assert base_name("v@-1") == "v" and version_of("v@-1") == -1 and version_of("v") is None


def test_read_version_examples():
    g = build_flowgraph(load("makeEven.bpl"))
    assert read_version(g, "v", 0) == -1
    assert read_version(g, "v", 8) == 1  # the assert
    assert write_version(g, "v", 1) == 0  # v := u
    assert write_version(g, "v", 3) == read_version(g, "v", 3)


def test_read_write_match_path_enumeration():
    for vg in sp_graphs(300, 8):
        assert read_write_versions(vg) == brute_read_write(vg)


def test_make_even_passive_form():
    p = load("makeEven.bpl")
    g = build_flowgraph(p)
    res = version_optimal_passive_form(g, p.declarations())
    assert res.version_count["v"] == 2 and res.copy_count == 1
    (z,) = res.witness.copies
    s = res.graph.stmt[z]
    assert isinstance(s, Assign) and s.lhs == "v@1" and s.rhs.name == "v@0"
    # the copy sits on the even branch, before the assert
    assert res.graph.pred[z] == [5] and res.graph.succ[z] == [8]
    assert is_passive(res.graph)
    assert check_passive_form(g, res.graph, res.witness)


def test_vo_vs_co_example():
    pg, wit = passivate_var(VO)
    assert versions_used(pg, wit) == 4 and len(wit.copies) == 1
    (z,) = wit.copies
    assert (wit.r[z], wit.w[z]) == (1, 2) and pg.succ[z] == [5]
    assert min_versions_lower_bound(VO) == 4


def test_diamonds_need_no_copies():
    p = parse_program(diamonds(3))
    typecheck(p)
    res = version_optimal_passive_form(build_flowgraph(p), p.declarations())
    assert res.copy_count == 0
    assert res.version_labels["u"] == [-1, 0, 1, 2]


def test_iv_witness_accepted():
    vg = IV.to_var_graph()
    assert check_var_passive_form(vg, vg, IV_WITNESS)
    assert not is_increasing_version(vg, IV_WITNESS)


def test_identity_witness_on_passive_graph():
    vg = VarGraph(range(3), [(0, 1), (1, 2)], [2], [0])
    wit = VarWitness({0: 0, 1: 1, 2: 2}, {0: -1, 1: 0, 2: 0}, {0: 0, 1: 0, 2: 0})
    assert check_var_passive_form(vg, vg, wit)


def test_mutated_witness_rejected():
    pg, wit = passivate_var(VO)
    for x in [n for n in VO.nodes if n in VO.writes]:
        for v in range(4):
            if v == wit.w[x]:
                continue
            w = dict(wit.w)
            w[x] = v
            bad = VarWitness(wit.c, wit.r, w, wit.copies)
            reasons = []
            assert not check_var_passive_form(VO, pg, bad, reasons)
            assert reasons


def test_lower_bound_examples():
    assert min_versions_lower_bound(VO) == 4
    assert min_versions_lower_bound(VarGraph(range(3), [(0, 1), (1, 2)], [1, 2], [])) == 0
    for vg in sp_graphs(300):
        assert min_versions_lower_bound(vg) == brute_max_writes(vg)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 10), st.floats(0, 1), st.floats(0, 1))
def test_algorithm_is_version_optimal(seed, budget, pw, pr):
    vg = random_series_parallel_var_graph(seed, budget, pw, pr)
    pg, wit = passivate_var(vg)
    assert check_var_passive_form(vg, pg, wit)
    assert is_increasing_version(pg, wit)
    assert versions_used(pg, wit) == min_versions_lower_bound(vg) == min_versions_search(vg)


def test_exhaustive_minimum_on_small_graphs():
    n = 0
    for vg in sp_graphs(200, 5):
        pg, wit = passivate_var(vg)
        assert versions_used(pg, wit) == min_versions_exhaustive(vg)
        n += 1
    assert n == 200


def test_lis_examples():
    assert lis([]) == 0
    assert lis([2, 1, 3, 1, 4]) == 3
    assert lis(list(range(7))) == 7
    assert lis([5, 4, 3]) == 1


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 6), max_size=10))
def test_lis_matches_enumeration(seq):
    assert lis(seq) == brute_lis(seq)


def test_special_family_instance():
    # lists per right node: [2], [3,1], [4,2], []
    tc = TwoChain(4, 4, ((2, 1), (3, 2), (1, 2), (4, 3), (2, 3)))
    assert two_chain_sequence(tc) == [2, 3, 1, 4, 2]
    assert lis(two_chain_sequence(tc)) == 3
    assert two_chain_copy_optimal_increasing(tc) == 2
    assert two_chain_min_copies_increasing(4, 4, tc.dotted) == 2


def test_two_chain_trivial_and_star():
    assert two_chain_copy_optimal_increasing(TwoChain(2, 3, ())) == 0
    assert two_chain_copy_optimal_distinct(TwoChain(2, 3, ())) == 0
    star = TwoChain(1, 3, ((1, 1), (1, 2), (1, 3)))
    assert two_chain_copy_optimal_distinct(star) == 2
    assert brute_matching(star.dotted) == 1


def test_iv_two_chain():
    assert two_chain_copy_optimal_distinct(IV) == 0
    assert two_chain_copy_optimal_increasing(IV) == 1
    assert two_chain_of(IV.to_var_graph()) == IV


def random_two_chain(seed, max_len=3, max_dotted=4):
    r = random.Random(seed)
    a, b = r.randint(1, max_len), r.randint(1, max_len)
    pairs = list(itertools.product(range(1, a + 1), range(1, b + 1)))
    return TwoChain(a, b, tuple(r.sample(pairs, min(len(pairs), r.randint(0, max_dotted)))))


def test_two_chain_increasing_matches_brute_force():
    for seed in range(150):
        tc = random_two_chain(seed, 4, 10)
        assert two_chain_copy_optimal_increasing(tc) == \
            two_chain_min_copies_increasing(tc.left, tc.right, tc.dotted), tc


def test_two_chain_distinct_is_matching_lower_bound():
    exact = 0
    for seed in range(60):
        tc = random_two_chain(seed)
        fast = two_chain_copy_optimal_distinct(tc)
        slow = two_chain_min_copies_distinct(tc.left, tc.right, tc.dotted)
        assert brute_matching(tc.dotted) == len(tc.dotted) - fast
        assert fast <= slow, tc
        exact += fast == slow
    assert exact >= 50


def test_two_chain_distinct_gap():
    tc = TwoChain(2, 3, ((2, 1), (2, 2), (1, 2)))
    assert two_chain_copy_optimal_distinct(tc) == 1
    assert two_chain_min_copies_distinct(2, 3, tc.dotted) == 2
    # the general enumeration agrees that one copy is not enough
    vg = tc.to_var_graph()
    assert next(passive_forms_exhaustive(vg, 6, max_copies=1), None) is None
    assert next(passive_forms_exhaustive(vg, 6, max_copies=2), None) is not None


def test_two_chain_recognizer_rejects_other_shapes():
    with pytest.raises(ValueError):
        two_chain_of(VO)


def test_mins_gadget_sizes():
    assert len(mins_to_flowgraph(["x", "y", "z"], [("x", "y"), ("y", "z")]).graph.nodes) == 10
    assert len(mins_to_flowgraph(["a"], []).graph.nodes) == 4


def independent(nodes, edges, s):
    return not any(a in s and b in s for a, b in edges)


def random_graph(seed, max_nodes=5):
    r = random.Random(seed)
    n = r.randint(1, max_nodes)
    nodes = list(range(n))
    edges = [(a, b) for a, b in itertools.combinations(nodes, 2) if r.random() < 0.4]
    return nodes, edges


def test_independent_set_round_trip():
    for seed in range(60):
        nodes, edges = random_graph(seed, 8)
        gad = mins_to_flowgraph(nodes, edges)
        for k in range(len(nodes) + 1):
            for s in itertools.combinations(nodes, k):
                if not independent(nodes, edges, s):
                    continue
                pg, wit = independent_set_passive_form(gad, s)
                assert check_var_passive_form(gad.graph, pg, wit)
                assert is_increasing_version(pg, wit)
                assert len(wit.copies) == len(nodes) - k
                assert extract_independent_set(gad, pg, wit) == set(s)


def test_gadget_copy_optimum_is_complement_of_mis():
    cases = [(["a"], []), (["a", "b"], []), (["a", "b"], [("a", "b")]),
             (["a", "b", "c"], [("a", "b"), ("a", "c")])]
    for nodes, edges in cases:
        gad = mins_to_flowgraph(nodes, edges)
        mis = max(k for k in range(len(nodes) + 1) for s in itertools.combinations(nodes, k)
                  if independent(nodes, edges, s))
        best = []
        for m in range(1, 5):
            # forms come out in order of copy count
            hit = next(passive_forms_exhaustive(gad.graph, m, max_copies=len(nodes),
                                                increasing=True), None)
            if hit is not None:
                best.append(len(hit[1].copies))
        assert min(best) == len(nodes) - mis, (nodes, edges)


def test_flowgraph_passive_form_on_random_programs():
    from boogievc.generators import random_boolean_program
    for seed in range(100):
        p = parse_program(random_boolean_program(seed, nvars=3, nblocks=5))
        typecheck(p)
        g = build_flowgraph(p)
        res = version_optimal_passive_form(g, p.declarations())
        assert is_passive(res.graph)
        assert check_passive_form(g, res.graph, res.witness)
        for v in res.version_count:
            assert res.version_count[v] == min_versions_lower_bound(var_graph(g, v))
