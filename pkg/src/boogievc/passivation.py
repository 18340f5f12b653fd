"""Version-optimal passive form and the machinery around it.

A single-variable view of a flowgraph is a :class:`VarGraph`: nodes,
edges, and which nodes read or write the variable. The passivation
algorithm, the passive-form checker and the combinatorial demonstrators
(two-chain graphs, the independent-set gadget, the series-parallel
generator) all work on that view; :func:`version_optimal_passive_form`
lifts the algorithm to whole Boogie flowgraphs, one variable at a time.
"""

from __future__ import annotations

import bisect
import heapq
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .ast import (
    Assert, Assign, Assume, BoolLit, Binary, IntLit, Return, Var, VariableDecl,
    rename_vars, stmt_reads, stmt_writes,
)
from .errors import CyclicGraphError
from .flowgraph import Flowgraph, sentinel, to_program, topological_order


def versioned(v: str, k: int) -> str:
    return f"{v}@{k}"


def base_name(name: str) -> str:
    return name.split("@", 1)[0]


def version_of(name: str) -> Optional[int]:
    if "@" not in name:
        return None
    return int(name.split("@", 1)[1])


# ----------------------------------------------------------- graph view


class VarGraph:
    """A flowgraph reduced to what matters for one variable."""

    def __init__(self, nodes: Iterable[int], edges: Iterable[Tuple[int, int]],
                 reads: Iterable[int] = (), writes: Iterable[int] = (), initial: int = 0):
        self.nodes = sorted(set(nodes))
        self.succ: Dict[int, List[int]] = {n: [] for n in self.nodes}
        self.pred: Dict[int, List[int]] = {n: [] for n in self.nodes}
        for a, b in sorted(set(edges)):
            self.succ[a].append(b)
            self.pred[b].append(a)
        self.reads: FrozenSet[int] = frozenset(reads)
        self.writes: FrozenSet[int] = frozenset(writes)
        self.initial = initial

    @property
    def edges(self) -> Set[Tuple[int, int]]:
        return {(a, b) for a in self.nodes for b in self.succ[a]}

    def __repr__(self):
        return (f"VarGraph(nodes={self.nodes}, edges={sorted(self.edges)}, "
                f"reads={sorted(self.reads)}, writes={sorted(self.writes)})")

    def topological_order(self) -> List[int]:
        indeg = {n: len(self.pred[n]) for n in self.nodes}
        ready = [n for n in self.nodes if indeg[n] == 0]
        heapq.heapify(ready)
        out = []
        while ready:
            x = heapq.heappop(ready)
            out.append(x)
            for y in self.succ[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    heapq.heappush(ready, y)
        if len(out) != len(self.nodes):
            raise CyclicGraphError()
        return out

    def descendants(self) -> Dict[int, int]:
        """Bitmask (over positions in ``self.nodes``) of nodes reachable by
        a nonempty path."""
        pos = {n: i for i, n in enumerate(self.nodes)}
        out = {n: 0 for n in self.nodes}
        for x in reversed(self.topological_order()):
            m = 0
            for y in self.succ[x]:
                m |= out[y] | (1 << pos[y])
            out[x] = m
        return out

    def to_flowgraph(self, var: str = "v") -> Flowgraph:
        """Concrete statements: read+write ``v := v + 1``, write-only
        ``v := 0``, read-only ``assume 0 < v``, neither ``assume true``.
        Every leaf gets a return successor."""
        stmt = {}
        for n in self.nodes:
            r, w = n in self.reads, n in self.writes
            if r and w:
                stmt[n] = Assign(var, Binary("+", Var(var), IntLit(1)))
            elif w:
                stmt[n] = Assign(var, IntLit(0))
            elif r:
                stmt[n] = Assume(Binary("<", IntLit(0), Var(var)))
            else:
                stmt[n] = sentinel() if n == self.initial else Assume(BoolLit(True))
        edges = set(self.edges)
        nxt = max(self.nodes) + 1
        for n in self.nodes:
            if not self.succ[n]:
                stmt[nxt] = Return()
                edges.add((n, nxt))
                nxt += 1
        return Flowgraph(stmt, edges, self.initial)


def var_graph(g: Flowgraph, v: str) -> VarGraph:
    reads = [n for n in g.nodes if v in {base_name(x) for x in stmt_reads(g.stmt[n])}]
    writes = [n for n in g.nodes if v in {base_name(x) for x in stmt_writes(g.stmt[n])}]
    return VarGraph(g.nodes, g.edges, reads, writes, g.initial)


def program_variables(g: Flowgraph) -> List[str]:
    names = set()
    for n in g.nodes:
        s = g.stmt[n]
        names |= {base_name(x) for x in stmt_reads(s) | stmt_writes(s)}
    return sorted(names)


# ----------------------------------------------------- read/write versions


def read_write_versions(vg: VarGraph) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Both memo tables of the Read/Write recursion, filled in one
    topological sweep."""
    R: Dict[int, int] = {}
    W: Dict[int, int] = {}
    for y in vg.topological_order():
        r = -1
        for x in vg.pred[y]:
            r = max(r, W[x])
        R[y] = r
        W[y] = r + (1 if y in vg.writes else 0)
    return R, W


def _as_var_graph(g, v):
    return g if isinstance(g, VarGraph) else var_graph(g, v)


def read_version(g, v: str, y: int) -> int:
    return read_write_versions(_as_var_graph(g, v))[0][y]


def write_version(g, v: str, y: int) -> int:
    return read_write_versions(_as_var_graph(g, v))[1][y]


def min_versions_lower_bound(g, v: str = "v") -> int:
    """Largest number of write nodes on a path from the initial node."""
    vg = _as_var_graph(g, v)
    best = {}
    for y in vg.topological_order():
        b = max((best[x] for x in vg.pred[y]), default=0)
        best[y] = b + (1 if y in vg.writes else 0)
    return max(best.values(), default=0)


# ---------------------------------------------------------------- witness


@dataclass
class VarWitness:
    """Single-variable witness: ``c`` maps original nodes to passive nodes,
    ``r``/``w`` give versions on passive nodes, ``copies`` are the
    inserted copy nodes."""
    c: Dict[int, int]
    r: Dict[int, int]
    w: Dict[int, int]
    copies: FrozenSet[int] = frozenset()


@dataclass
class PassiveWitness:
    c: Dict[int, int]
    r: Dict[str, Dict[int, int]]
    w: Dict[str, Dict[int, int]]
    copies: FrozenSet[int] = frozenset()
    copies_of: Dict[str, FrozenSet[int]] = field(default_factory=dict)


@dataclass
class PassiveResult:
    graph: Flowgraph
    witness: PassiveWitness
    version_count: Dict[str, int]
    copy_count: int
    version_labels: Dict[str, List[int]]
    decls: List[VariableDecl] = field(default_factory=list)

    def program(self, template):
        return to_program(self.graph, template, locals_=tuple(template.locals) + tuple(self.decls))


def passivate_var(vg: VarGraph) -> Tuple[VarGraph, VarWitness]:
    """The passivation algorithm on a single-variable view."""
    R, W = read_write_versions(vg)
    r, w = dict(R), dict(W)
    nodes = list(vg.nodes)
    edges = []
    reads, writes = set(vg.reads), set(vg.writes)
    fused: Dict[Tuple[int, int, int], int] = {}
    nxt = max(nodes) + 1 if nodes else 0
    for x, y in sorted(vg.edges):
        if W[x] != R[y]:
            key = (y, R[y], W[x])
            z = fused.get(key)
            if z is None:
                z = nxt
                nxt += 1
                fused[key] = z
                nodes.append(z)
                reads.add(z)
                writes.add(z)
                r[z] = W[x]
                w[z] = R[y]
                edges.append((z, y))
            edges.append((x, z))
        else:
            edges.append((x, y))
    copies = frozenset(fused.values())
    pg = VarGraph(nodes, edges, reads, writes, vg.initial)
    return pg, VarWitness({x: x for x in vg.nodes}, r, w, copies)


def _rename_stmt(s, v: str, rv: int, wv: int):
    def look(name):
        return versioned(v, rv) if name == v else None

    if isinstance(s, Assign):
        lhs = versioned(v, wv) if s.lhs == v else s.lhs
        return Assign(lhs, rename_vars(s.rhs, look), s.pos)
    if isinstance(s, Assume):
        return Assume(rename_vars(s.expr, look), s.pos)
    if isinstance(s, Assert):
        return Assert(rename_vars(s.expr, look), s.pos)
    return s


def version_optimal_passive_form(g: Flowgraph, decls: Sequence[VariableDecl] = ()) -> PassiveResult:
    """Passivate every variable of ``g`` in name order."""
    topological_order(g)
    types = {d.name: d.type for d in decls}
    stmt = dict(g.stmt)
    edges = set(g.edges)
    nodes = set(g.nodes)
    c = {x: x for x in g.nodes}
    rs: Dict[str, Dict[int, int]] = {}
    ws: Dict[str, Dict[int, int]] = {}
    copies_of: Dict[str, FrozenSet[int]] = {}
    counts: Dict[str, int] = {}
    labels: Dict[str, List[int]] = {}
    all_copies: Set[int] = set()
    for v in program_variables(g):
        cur = Flowgraph(stmt, edges, g.initial)
        vg = var_graph(cur, v)
        pg, wit = passivate_var(vg)
        for n in vg.nodes:
            rv, wv = wit.r[n], wit.w[n]
            stmt[n] = _rename_stmt(stmt[n], v, rv, wv)
        for z in sorted(wit.copies):
            stmt[z] = Assign(versioned(v, wit.w[z]), Var(versioned(v, wit.r[z])))
        nodes = set(pg.nodes)
        edges = pg.edges
        rs[v] = wit.r
        ws[v] = wit.w
        copies_of[v] = wit.copies
        all_copies |= wit.copies
        written = {wit.w[n] for n in pg.writes}
        counts[v] = len(written)
        used = set(written)
        used |= {wit.r[n] for n in pg.reads}
        labels[v] = sorted(used)
    out = Flowgraph(stmt, edges, g.initial, g.label,
                    {x: g.origin.get(x, x) for x in g.nodes}, g.program, g.dead)
    new_decls = []
    for v in sorted(labels):
        t = types.get(v)
        if t is None:
            continue
        new_decls.extend(VariableDecl(versioned(v, k), t) for k in labels[v])
    wit = PassiveWitness(c, rs, ws, frozenset(all_copies), copies_of)
    return PassiveResult(out, wit, counts, len(all_copies), labels, new_decls)


# --------------------------------------------------------------- checking


def _path_closure(nodes, succ):
    vg = VarGraph(nodes, [(a, b) for a in nodes for b in succ[a]])
    return vg, vg.descendants(), {n: i for i, n in enumerate(vg.nodes)}


def _check_core(orig: VarGraph, pg: VarGraph, c, r, w, copy_nodes, stmt_ok=True,
                reasons=None) -> bool:
    def no(msg):
        if reasons is not None:
            reasons.append(msg)
        return False

    try:
        _, desc, pos = _path_closure(pg.nodes, pg.succ)
    except CyclicGraphError:
        return no("passive graph is cyclic")
    # passivity: written at most once per path; no read-write clash
    ws_nodes = sorted(pg.writes)
    for x in ws_nodes:
        if x not in w:
            return no(f"write node {x} has no write version")
    for x in pg.reads:
        if x not in r:
            return no(f"read node {x} has no read version")
    for x in ws_nodes:
        for y in ws_nodes:
            if x != y and desc[x] >> pos[y] & 1 and w[x] == w[y]:
                return no(f"nodes {x} and {y} on one path both write version {w[x]}")
    for x in pg.reads & pg.writes:
        if r[x] == w[x]:
            return no(f"node {x} reads and writes version {w[x]}")
    # (a) kind preserved
    for x in orig.nodes:
        if x not in c or c[x] not in pos:
            return no(f"node {x} has no image")
        y = c[x]
        if (x in orig.reads) != (y in pg.reads) and y not in copy_nodes:
            return no(f"node {x} changed read behaviour")
        if (x in orig.writes) != (y in pg.writes) and y not in copy_nodes:
            return no(f"node {x} changed write behaviour")
    if not stmt_ok:
        return no("statement structure not preserved")
    image = set(c[x] for x in orig.nodes)
    # (b) others are copies
    for n in pg.nodes:
        if n not in image and n not in copy_nodes:
            return no(f"node {n} is neither an image nor a copy")
    # (c) flow structure
    for z in copy_nodes:
        if z in image:
            return no(f"copy node {z} is also an image")
        if not pg.succ[z]:
            return no(f"copy node {z} has no outgoing edge")
    for x in orig.nodes:
        # copy-only paths from c(x)
        hit = set()
        stack = list(pg.succ[c[x]])
        seen = set()
        while stack:
            z = stack.pop()
            if z in seen:
                continue
            seen.add(z)
            if z in image:
                hit.add(z)
            if z in copy_nodes:
                stack.extend(pg.succ[z])
        want = {c[y] for y in orig.succ[x]}
        if hit != want:
            return no(f"flow from {x} not preserved")
    # (d)
    if c.get(orig.initial) != pg.initial:
        return no("initial node not preserved")
    # (f) latest written version
    for x in ws_nodes:
        stack = list(pg.succ[x])
        seen = set()
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            if y in pg.reads and r[y] != w[x]:
                return no(f"node {y} reads {r[y]} but {x} wrote {w[x]}")
            if y not in pg.writes:
                stack.extend(pg.succ[y])
    return True


def check_var_passive_form(orig: VarGraph, pg: VarGraph, wit: VarWitness, reasons=None) -> bool:
    for z in wit.copies:
        if z not in pg.reads or z not in pg.writes:
            if reasons is not None:
                reasons.append(f"copy node {z} must read and write")
            return False
    return _check_core(orig, pg, wit.c, wit.r, wit.w, wit.copies, reasons=reasons)


def _is_copy_stmt(s) -> bool:
    return (isinstance(s, Assign) and isinstance(s.rhs, Var)
            and "@" in s.lhs and "@" in s.rhs.name
            and base_name(s.lhs) == base_name(s.rhs.name))


def check_passive_form(original, passive, wit, reasons=None) -> bool:
    """Validate a passive-form witness. Accepts single-variable views with
    a :class:`VarWitness` or full flowgraphs with a :class:`PassiveWitness`."""
    if isinstance(original, VarGraph):
        return check_var_passive_form(original, passive, wit, reasons)
    image = set(wit.c.values())
    copy_nodes = {n for n in passive.nodes if n not in image}
    for n in copy_nodes:
        if not _is_copy_stmt(passive.stmt[n]):
            if reasons is not None:
                reasons.append(f"node {n} is not a copy statement")
            return False
    names = sorted(set(program_variables(original)) | set(program_variables(passive)))
    for x in original.nodes:
        if wit.c.get(x) not in passive.stmt:
            if reasons is not None:
                reasons.append(f"node {x} has no image")
            return False
    for v in names:
        ov = var_graph(original, v)
        pv = var_graph(passive, v)
        r = wit.r.get(v, {})
        w = wit.w.get(v, {})
        # (e) confined
        for n in passive.nodes:
            s = passive.stmt[n]
            for name in stmt_reads(s):
                if base_name(name) == v and version_of(name) != r.get(n):
                    if reasons is not None:
                        reasons.append(f"node {n} reads {name}, not version {r.get(n)}")
                    return False
            for name in stmt_writes(s):
                if base_name(name) == v and version_of(name) != w.get(n):
                    if reasons is not None:
                        reasons.append(f"node {n} writes {name}, not version {w.get(n)}")
                    return False
        mine = {n for n in copy_nodes if base_name(passive.stmt[n].lhs) == v}
        if not _check_core(ov, pv, wit.c, r, w, copy_nodes, reasons=reasons):
            return False
        for z in mine:
            if z not in pv.reads or z not in pv.writes:
                return False
    # (a) statement structure: c(x) is x with every variable versioned
    for x in original.nodes:
        s = original.stmt[x]
        t = s
        for v in names:
            if v in stmt_reads(s) or v in stmt_writes(s):
                t = _rename_stmt(t, v, wit.r.get(v, {}).get(wit.c[x], 0),
                                 wit.w.get(v, {}).get(wit.c[x], 0))
        if t != passive.stmt[wit.c[x]]:
            if reasons is not None:
                reasons.append(f"statement of node {x} changed shape")
            return False
    return True


def is_increasing_version(pg: VarGraph, wit: VarWitness) -> bool:
    _, desc, pos = _path_closure(pg.nodes, pg.succ)
    for x in pg.writes:
        for y in pg.writes:
            if x != y and desc[x] >> pos[y] & 1 and not wit.w[x] < wit.w[y]:
                return False
    return True


def versions_used(pg: VarGraph, wit: VarWitness) -> int:
    return len({wit.w[n] for n in pg.writes})


# -------------------------------------------------------------------- lis


class _Predecessor:
    """Ordered map with ``update`` and ``predecessor`` queries. Values are
    kept increasing in key order: an update evicts larger keys whose value
    is not larger, so the largest key at or below k carries the best
    value at or below k."""

    def __init__(self):
        self.keys: List[int] = []
        self.vals: Dict[int, int] = {}

    def predecessor(self, k: int) -> int:
        i = bisect.bisect_right(self.keys, k)
        return self.vals[self.keys[i - 1]] if i else 0

    def update(self, k: int, v: int):
        i = bisect.bisect_left(self.keys, k)
        if i < len(self.keys) and self.keys[i] == k:
            self.vals[k] = v
            i += 1
        else:
            self.keys.insert(i, k)
            self.vals[k] = v
            i += 1
        j = i
        while j < len(self.keys) and self.vals[self.keys[j]] <= v:
            del self.vals[self.keys[j]]
            j += 1
        del self.keys[i:j]


def lis(seq: Sequence[int]) -> int:
    """Length of a longest strictly increasing subsequence."""
    d = _Predecessor()
    r = 0
    for x in seq:
        l = 1 + d.predecessor(x - 1)
        r = max(r, l)
        if l > d.predecessor(x):
            d.update(x, l)
    return r


# -------------------------------------------------------------- two-chain


@dataclass(frozen=True)
class TwoChain:
    """Two write-only chains below a write-only root; ``dotted`` holds
    (left position, right position) pairs, positions starting at 1, each
    standing for a read-only node fed by both."""
    left: int
    right: int
    dotted: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for i, j in self.dotted:
            if not (1 <= i <= self.left and 1 <= j <= self.right):
                raise ValueError(f"dotted edge ({i}, {j}) out of range")
        if len(set(self.dotted)) != len(self.dotted):
            raise ValueError("duplicate dotted edge")

    def left_node(self, i):
        return i

    def right_node(self, j):
        return self.left + j

    def to_var_graph(self) -> VarGraph:
        edges = []
        prev = 0
        for i in range(1, self.left + 1):
            edges.append((prev, i))
            prev = i
        prev = 0
        for j in range(1, self.right + 1):
            edges.append((prev, self.right_node(j)))
            prev = self.right_node(j)
        base = self.left + self.right + 1
        reads = []
        for k, (i, j) in enumerate(self.dotted):
            d = base + k
            edges += [(self.left_node(i), d), (self.right_node(j), d)]
            reads.append(d)
        nodes = list(range(base + len(self.dotted)))
        return VarGraph(nodes, edges, reads, range(base), 0)


def two_chain_of(g) -> TwoChain:
    """Recognize the two-chain shape in a VarGraph (or pass a TwoChain through)."""
    if isinstance(g, TwoChain):
        return g
    vg = g
    if vg.initial in vg.reads or vg.initial not in vg.writes:
        raise ValueError("input not two-chain: root must be write-only")
    chains = []
    owner = {}
    for s in vg.succ[vg.initial]:
        if s in vg.reads:
            raise ValueError("input not two-chain: read node under the root")
        chain = [s]
        while True:
            nxt = [y for y in vg.succ[chain[-1]] if y in vg.writes]
            if len(nxt) > 1:
                raise ValueError("input not two-chain: chain forks")
            if not nxt:
                break
            chain.append(nxt[0])
        chains.append(chain)
    if len(chains) != 2:
        raise ValueError("input not two-chain: root needs two chains")
    for k, ch in enumerate(chains):
        for p, n in enumerate(ch, start=1):
            if n in vg.reads or n in owner or len(vg.pred[n]) != 1:
                raise ValueError("input not two-chain: malformed chain")
            owner[n] = (k, p)
    dotted = []
    for n in vg.nodes:
        if n == vg.initial or n in owner:
            continue
        if n in vg.writes or n not in vg.reads or vg.succ[n] or len(vg.pred[n]) != 2:
            raise ValueError("input not two-chain: bad dotted node")
        a, b = sorted((owner[p] for p in vg.pred[n] if p in owner), key=lambda t: t[0])
        if a[0] != 0 or b[0] != 1:
            raise ValueError("input not two-chain: dotted node must join both chains")
        dotted.append((a[1], b[1]))
    return TwoChain(len(chains[0]), len(chains[1]), tuple(dotted))


def two_chain_sequence(tc: TwoChain) -> List[int]:
    """Per right node, its dotted left partners sorted decreasing, concatenated."""
    lists = {j: [] for j in range(1, tc.right + 1)}
    for i, j in tc.dotted:
        lists[j].append(i)
    seq = []
    for j in range(1, tc.right + 1):
        seq.extend(sorted(lists[j], reverse=True))
    return seq


def two_chain_copy_optimal_increasing(g) -> int:
    tc = two_chain_of(g)
    return len(tc.dotted) - lis(two_chain_sequence(tc))


def max_bipartite_matching(edges: Iterable[Tuple[int, int]]) -> int:
    """Size of a maximum matching (augmenting paths)."""
    adj: Dict[int, List[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
    match: Dict[int, int] = {}

    def augment(a, seen):
        for b in adj[a]:
            if b in seen:
                continue
            seen.add(b)
            if b not in match or augment(match[b], seen):
                match[b] = a
                return True
        return False

    return sum(1 for a in sorted(adj) if augment(a, set()))


def two_chain_copy_optimal_distinct(g) -> int:
    """Dotted edges left unselected by a maximum matching.

    This counts one copy per unselected dotted edge. That is a lower bound
    and usually exact, but a lone copy cannot always be placed: for dotted
    edges (2,1), (2,2), (1,2) the matching leaves (2,2) out, and a copy on
    either side would rewrite a version already written on its own chain.
    The true optimum there is 2."""
    tc = two_chain_of(g)
    return len(tc.dotted) - max_bipartite_matching(tc.dotted)


# -------------------------------------------------- independent-set gadget


@dataclass
class MinsGadget:
    graph: VarGraph
    o: Dict[object, int]
    i: Dict[object, int]
    r: Dict[object, int]


def mins_to_flowgraph(nodes: Sequence, edges: Iterable[Tuple[object, object]]) -> MinsGadget:
    """Each node x becomes write-only x_o, x_i and read-only x_r fed by both,
    with 0 -> x_o; each undirected edge x-y adds x_o -> y_i and y_o -> x_i."""
    o, i, r = {}, {}, {}
    for k, x in enumerate(nodes):
        o[x], i[x], r[x] = 3 * k + 1, 3 * k + 2, 3 * k + 3
    es = []
    for x in nodes:
        es += [(0, o[x]), (o[x], r[x]), (i[x], r[x])]
    for x, y in edges:
        if x == y:
            raise ValueError("self loop")
        es += [(o[x], i[y]), (o[y], i[x])]
    allnodes = [0] + [n for x in nodes for n in (o[x], i[x], r[x])]
    writes = [0] + [n for x in nodes for n in (o[x], i[x])]
    reads = [r[x] for x in nodes]
    return MinsGadget(VarGraph(allnodes, es, reads, writes, 0), o, i, r)


def extract_independent_set(gad: MinsGadget, pg: VarGraph, wit: VarWitness) -> Set:
    """Nodes x whose read node is not preceded by a copy."""
    return {x for x, rn in gad.r.items() if not any(p in wit.copies for p in pg.pred[wit.c[rn]])}


def independent_set_passive_form(gad: MinsGadget, chosen: Iterable) -> Tuple[VarGraph, VarWitness]:
    """Non-redundant increasing-version form whose copy-free read nodes are
    exactly ``chosen``: versions 2/2 inside, 1/3 outside."""
    chosen = set(chosen)
    g = gad.graph
    w = {0: 0}
    r = {0: -1}
    for x in gad.o:
        if x in chosen:
            w[gad.o[x]] = w[gad.i[x]] = 2
        else:
            w[gad.o[x]], w[gad.i[x]] = 1, 3
        r[gad.o[x]] = 0
    for x in gad.o:
        preds = g.pred[gad.i[x]]
        r[gad.i[x]] = max((w[p] for p in preds), default=-1)
    nodes = list(g.nodes)
    edges = set(g.edges)
    copies = set()
    reads, writes = set(g.reads), set(g.writes)
    nxt = max(nodes) + 1
    for x in gad.o:
        rn = gad.r[x]
        hi = max(w[gad.o[x]], w[gad.i[x]])
        r[rn] = hi
        w[rn] = hi
        if w[gad.o[x]] != w[gad.i[x]]:
            lo = gad.o[x] if w[gad.o[x]] < w[gad.i[x]] else gad.i[x]
            z = nxt
            nxt += 1
            nodes.append(z)
            edges.discard((lo, rn))
            edges |= {(lo, z), (z, rn)}
            copies.add(z)
            reads.add(z)
            writes.add(z)
            r[z], w[z] = w[lo], hi
    pg = VarGraph(nodes, edges, reads, writes, 0)
    return pg, VarWitness({n: n for n in g.nodes}, r, w, frozenset(copies))


# ---------------------------------------------------- random SP flowgraphs


def random_series_parallel_var_graph(seed, node_budget: int, p_write: float, p_read: float) -> VarGraph:
    """Grow s -> x -> t by random productions on a random edge a -> b:
    series subdivides it (a -> y -> b), parallel adds a detour a -> y -> b
    next to it.  Both keep the graph two-terminal series-parallel.  Once
    the interior has ``node_budget`` nodes, each is marked write/read
    independently.  Nodes are numbered topologically; s is 0."""
    if not (0 <= p_write <= 1 and 0 <= p_read <= 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if node_budget < 1:
        raise ValueError("node budget must be positive")
    rng = random.Random(seed)
    S, T = -1, -2
    edges = [(S, 0), (0, T)]
    interior = [0]
    while len(interior) < node_budget:
        i = rng.randrange(len(edges))
        a, b = edges[i]
        y = len(interior)
        if rng.random() < 0.5:
            edges[i:i + 1] = [(a, y), (y, b)]
        else:
            edges += [(a, y), (y, b)]
        interior.append(y)
    succ = {n: [] for n in [S, T] + interior}
    indeg = {n: 0 for n in succ}
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    order = []
    ready = [S]
    while ready:
        n = ready.pop(0)
        order.append(n)
        for z in sorted(succ[n], key=lambda q: (q == T, q)):
            indeg[z] -= 1
            if indeg[z] == 0:
                ready.append(z)
    num = {n: k for k, n in enumerate(order)}
    reads, writes = [], []
    for n in order:
        if n in (S, T):
            continue
        if rng.random() < p_write:
            writes.append(num[n])
        if rng.random() < p_read:
            reads.append(num[n])
    return VarGraph(range(len(order)), [(num[a], num[b]) for a, b in edges], reads, writes, 0)


def random_series_parallel_flowgraph(seed, node_budget: int, p_write: float = 0.5,
                                     p_read: float = 0.5) -> Flowgraph:
    """Concrete flowgraph over variable ``v``; the SP sink is the return."""
    vg = random_series_parallel_var_graph(seed, node_budget, p_write, p_read)
    g = vg.to_flowgraph("v")
    t = max(vg.nodes)
    stmt = {n: s for n, s in g.stmt.items() if n in vg.nodes}
    stmt[t] = Return()
    return Flowgraph(stmt, vg.edges, 0)
