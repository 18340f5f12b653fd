"""Semantic reachability: which statements can some execution reach, which
assumptions block every execution, which assertions fail on every
execution that reaches them.

Each flowgraph node ``x`` is split into ``x_i`` (carrying the sp
precondition) and ``x_o`` (carrying the postcondition).  A split node is
black when its formula is unsatisfiable.  The fast analysis asks the
prover about as few split nodes as it can and infers the rest from the
dominator tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set

from .ast import Assert, Assume
from .errors import BoogieError, ProverError
from .flowgraph import Flowgraph, topological_order
from .smt import Term

WHITE, BLACK, GRAY = "white", "black", "gray"
SPLIT = 0.7


def inner(x: int) -> int:
    return 2 * x


def outer(x: int) -> int:
    return 2 * x + 1


def original(n: int) -> int:
    return n // 2


@dataclass
class SplitFlowgraph:
    graph: Flowgraph
    formula: Dict[int, Term]
    source: Flowgraph


def split_nodes(g: Flowgraph, gen) -> SplitFlowgraph:
    """``gen`` is a VCGen whose predicates give the sp annotation."""
    ann = gen.sp_annotate(g)
    stmt, formula, edges = {}, {}, []
    for x in g.nodes:
        stmt[inner(x)] = g.stmt[x]
        stmt[outer(x)] = g.stmt[x]
        formula[inner(x)] = ann.pre[x]
        formula[outer(x)] = ann.post[x]
        edges.append((inner(x), outer(x)))
        for y in g.succ[x]:
            edges.append((outer(x), inner(y)))
    label = {}
    for x, lab in g.label.items():
        label[inner(x)] = lab
        label[outer(x)] = lab
    h = Flowgraph(stmt, edges, inner(g.initial), label,
                  {n: original(n) for n in stmt}, g.program)
    return SplitFlowgraph(h, formula, g)


# ------------------------------------------------------------ dominators


@dataclass
class DominatorTree:
    root: int
    idom: Dict[int, Optional[int]]
    depth: Dict[int, int]

    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {n: [] for n in self.idom}
        for n, p in self.idom.items():
            if p is not None:
                out[p].append(n)
        return out

    def leaves(self) -> List[int]:
        ch = self.children()
        return sorted(n for n, c in ch.items() if not c)

    def path(self, x: int) -> List[int]:
        out = []
        while x is not None:
            out.append(x)
            x = self.idom[x]
        return out[::-1]

    def dominates(self, a: int, b: int) -> bool:
        while b is not None:
            if a == b:
                return True
            b = self.idom[b]
        return False


def compute_dominators(g: Flowgraph, nodes: Optional[Iterable[int]] = None,
                       root: Optional[int] = None) -> DominatorTree:
    """Immediate dominators of a rooted dag, optionally restricted to the
    subgraph induced by ``nodes``.  Nodes are inserted in topological
    order; idom(y) is the tree LCA of y's predecessors."""
    root = g.initial if root is None else root
    keep = set(g.nodes if nodes is None else nodes)
    if root not in keep:
        raise BoogieError("root not in the subgraph")
    idom: Dict[int, Optional[int]] = {root: None}
    depth = {root: 0}
    for y in topological_order(g):
        if y not in keep or y == root:
            continue
        preds = [x for x in g.pred[y] if x in keep]
        known = [x for x in preds if x in idom]
        if not known:
            raise BoogieError(f"node {y} is unreachable from the root")
        a = known[0]
        for b in known[1:]:
            a = _lca(a, b, idom, depth)
        idom[y] = a
        depth[y] = depth[a] + 1
    missing = keep - idom.keys()
    if missing:
        raise BoogieError(f"node {min(missing)} is unreachable from the root")
    return DominatorTree(root, idom, depth)


def _lca(a, b, idom, depth):
    while depth[a] > depth[b]:
        a = idom[a]
    while depth[b] > depth[a]:
        b = idom[b]
    while a != b:
        a, b = idom[a], idom[b]
    return a


# ------------------------------------------------------------ coloring


class Coloring(dict):
    def paint(self, n: int, color: str):
        cur = self.get(n, GRAY)
        if cur != GRAY:
            raise ProverError(f"node {n} is already {cur}")
        self[n] = color

    def gray(self) -> List[int]:
        return sorted(n for n, c in self.items() if c == GRAY)


def propagate_white(y: int, tree: DominatorTree, col: Coloring):
    """Paint ``y`` and its dominators white."""
    col.paint(y, WHITE)
    y = tree.idom[y]
    while y is not None and col[y] != WHITE:
        col.paint(y, WHITE)
        y = tree.idom[y]


def propagate_black(x: int, g: Flowgraph, col: Coloring):
    """Paint ``x`` black, then every node all of whose predecessors are black."""
    col.paint(x, BLACK)
    stack = [x]
    while stack:
        n = stack.pop()
        for y in g.succ[n]:
            if col[y] == GRAY and all(col[p] == BLACK for p in g.pred[y]):
                col[y] = BLACK
                stack.append(y)


# ------------------------------------------------------------ reports


@dataclass
class ReachReport:
    unreachable: Set[int] = field(default_factory=set)
    blockers: Set[int] = field(default_factory=set)
    doomed: Set[int] = field(default_factory=set)
    query_count: int = 0
    coloring: Optional[Coloring] = None
    initial_leaves: int = 0
    black_rounds: int = 0
    max_path: int = 0
    unknown_queries: int = 0

    @property
    def clean(self) -> bool:
        return not (self.unreachable or self.blockers or self.doomed)

    def classification(self):
        return (frozenset(self.unreachable), frozenset(self.doomed))

    def unreachable_heads(self, g: Flowgraph) -> Set[int]:
        """Unreachable nodes entered from a reachable one: one per region
        rather than one per statement."""
        return {n for n in self.unreachable
                if not g.pred[n] or any(p not in self.unreachable for p in g.pred[n])}

    def findings(self, g: Flowgraph, display: Optional[Flowgraph] = None,
                 filename: str = "") -> List[str]:
        """One line per finding: label, kind, statement, source position.
        Statements are shown from ``display`` (say, the pre-passivation
        graph).  An unreachable region is reported once, at its entry; an
        entry that ``display`` lacks, such as an inserted copy, is
        reported at its successors instead."""
        from .frontend import print_statement
        shown = display if display is not None else g
        heads = set()
        for n in self.unreachable_heads(g):
            if n in shown.stmt:
                heads.add(n)
            else:
                heads |= {y for y in g.succ[n] if y in shown.stmt and y in self.unreachable}
        rows = [(n, "unreachable") for n in heads]
        rows += [(n, "blocker assumption") for n in self.blockers if n in shown.stmt]
        rows += [(n, "doomed assertion") for n in self.doomed if n in shown.stmt]
        out = []
        for n, kind in sorted(rows):
            st = shown.stmt[n]
            pos = getattr(st, "pos", None)
            where = f"{filename}:{pos.line}:{pos.col}" if pos is not None else "?"
            lab = g.label.get(n, f"node {n}")
            out.append(f"{lab}: {kind}: {print_statement(st)} at {where}")
        return out


def _classify(g: Flowgraph, black_in, black_out) -> ReachReport:
    rep = ReachReport()
    for x in g.nodes:
        if black_in(x):
            rep.unreachable.add(x)
        elif black_out(x):
            s = g.stmt[x]
            if isinstance(s, Assert):
                rep.doomed.add(x)
            elif isinstance(s, Assume):
                rep.blockers.add(x)
    return rep


class _Asker:
    def __init__(self, prover, hypotheses: Sequence[Term]):
        self.prover = prover
        self.hyps = list(hypotheses)
        self.count = 0
        self.unknown = 0

    def __enter__(self):
        self.prover.push()
        for h in self.hyps:
            self.prover.assume(h)
        return self

    def __exit__(self, *exc):
        self.prover.pop()

    def unsat(self, f: Term) -> bool:
        self.count += 1
        v = self.prover.is_valid(f.session.Not(f))
        if v.status == "unknown":
            self.unknown += 1
        return v.valid


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def pick_query_node(tree: DominatorTree, col: Coloring) -> int:
    """Deepest gray node of the tree (necessarily a leaf), smallest index
    on ties."""
    best = None
    for n in tree.idom:
        if col[n] != GRAY:
            continue
        if best is None or tree.depth[n] > tree.depth[best] or \
                (tree.depth[n] == tree.depth[best] and n < best):
            best = n
    if best is None:
        raise ProverError("no gray node left in the dominator tree")
    return best


def reachability_analysis(g: Flowgraph, gen, prover, hypotheses: Sequence[Term] = ()) -> ReachReport:
    sp = split_nodes(g, gen)
    h = sp.graph
    col = Coloring({n: GRAY for n in h.nodes})
    col[h.initial] = WHITE
    tree = compute_dominators(h)
    initial_leaves = len(tree.leaves())
    max_path = max(tree.depth.values()) + 1
    rounds = 0
    with _Asker(prover, list(hypotheses)) as ask:
        while col.gray():
            x = pick_query_node(tree, col)
            if ask.unsat(sp.formula[x]):
                propagate_black(x, h, col)
                path = tree.path(x)
                i = max(k for k, y in enumerate(path) if col[y] == WHITE)
                j = len(path) - 1
                while i + 1 < j:
                    k = _round_half_up(i + SPLIT * (j - i))
                    k = min(max(k, i + 1), j - 1)
                    y = path[k]
                    if col[y] == WHITE:
                        i = k
                    elif col[y] == BLACK:
                        j = k
                    elif ask.unsat(sp.formula[y]):
                        propagate_black(y, h, col)
                        j = k
                    else:
                        propagate_white(y, tree, col)
                        i = k
                rounds += 1
                tree = compute_dominators(h, [n for n in h.nodes if col[n] != BLACK])
                max_path = max(max_path, max(tree.depth.values()) + 1)
            else:
                propagate_white(x, tree, col)
    rep = _classify(g, lambda x: col[inner(x)] == BLACK, lambda x: col[outer(x)] == BLACK)
    rep.query_count = ask.count
    rep.unknown_queries = ask.unknown
    rep.coloring = col
    rep.initial_leaves = initial_leaves
    rep.black_rounds = rounds
    rep.max_path = max_path
    return rep


def query_bound(rep: ReachReport) -> int:
    """l + b * (ceil(log2 h) + 2)."""
    h = max(rep.max_path, 1)
    return rep.initial_leaves + rep.black_rounds * (math.ceil(math.log2(h)) + 2)


def naive_reachability(g: Flowgraph, gen, prover, hypotheses: Sequence[Term] = ()) -> ReachReport:
    """One or two queries per statement. Assumptions whose postcondition is
    unsatisfiable are reported as blockers, assertions as doomed."""
    ann = gen.sp_annotate(g)
    un, out_black = set(), set()
    with _Asker(prover, list(hypotheses)) as ask:
        for x in g.nodes:
            if ask.unsat(ann.pre[x]):
                un.add(x)
            elif isinstance(g.stmt[x], (Assert, Assume)) and ask.unsat(ann.post[x]):
                out_black.add(x)
    rep = _classify(g, lambda x: x in un, lambda x: x in out_black)
    rep.query_count = ask.count
    rep.unknown_queries = ask.unknown
    return rep
