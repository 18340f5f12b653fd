"""Pseudo-flowgraphs and flowgraphs of core-Boogie programs.

Node 0 is a sentinel ``assume true``; node ``k`` (k >= 1) is the k-th
statement of the body. The pseudo-flowgraph keeps goto nodes; the
flowgraph contracts them away and drops whatever the sentinel cannot
reach.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional

from .ast import (
    Assign, Assume, BoolLit, Goto, LabeledStatement, Program, Return,
)
from .errors import CyclicGraphError


def sentinel():
    return Assume(BoolLit(True))


class Flowgraph:
    """Directed graph over integer nodes; ``stmt`` maps node to statement.

    ``label`` keeps source labels for diagnostics and ``origin`` maps
    nodes of derived graphs back to nodes of the graph they came from.
    """

    def __init__(self, stmt: Dict[int, object], edges: Iterable, initial: int = 0,
                 label: Optional[Dict[int, str]] = None,
                 origin: Optional[Dict[int, int]] = None, program: Optional[Program] = None,
                 dead: Iterable[int] = ()):
        self.stmt = dict(stmt)
        self.initial = initial
        self.succ: Dict[int, List[int]] = {n: [] for n in self.stmt}
        self.pred: Dict[int, List[int]] = {n: [] for n in self.stmt}
        for a, b in sorted(set(edges)):
            self.succ[a].append(b)
            self.pred[b].append(a)
        self.label = dict(label or {})
        self.origin = dict(origin or {})
        self.program = program
        self.dead = sorted(dead)

    @property
    def nodes(self) -> List[int]:
        return sorted(self.stmt)

    @property
    def edges(self) -> set:
        return {(a, b) for a, bs in self.succ.items() for b in bs}

    def __len__(self):
        return len(self.stmt)

    def leaves(self) -> List[int]:
        return [n for n in self.nodes if not self.succ[n]]

    def with_stmts(self, stmt: Dict[int, object]) -> "Flowgraph":
        """Same shape, different statements."""
        return Flowgraph(stmt, self.edges, self.initial, self.label, self.origin,
                         self.program, self.dead)

    def describe(self, n: int) -> str:
        from .frontend import print_statement
        lab = self.label.get(n)
        return (f"{lab}: " if lab else "") + print_statement(self.stmt[n])


def build_pseudo_flowgraph(p: Program) -> Flowgraph:
    stmts = p.statements
    index = {lab: i + 1 for lab, i in p.label_index().items()}
    stmt = {0: sentinel()}
    label = {}
    edges = []
    n = len(stmts)
    for k, ls in enumerate(p.body, start=1):
        stmt[k] = ls.stmt
        if ls.label is not None:
            label[k] = ls.label
    for x in range(0, n + 1):
        s = stmt[x]
        if isinstance(s, Goto):
            for t in s.targets:
                edges.append((x, index[t]))
        elif not isinstance(s, Return) and x + 1 <= n:
            edges.append((x, x + 1))
    return Flowgraph(stmt, edges, 0, label, program=p)


def build_flowgraph(p: Program) -> Flowgraph:
    pg = build_pseudo_flowgraph(p)
    reach = _reachable(pg, 0)
    keep = [x for x in pg.nodes if x in reach and not isinstance(pg.stmt[x], Goto)]
    edges = set()
    for m in keep:
        # walk through goto nodes only
        seen = set()
        stack = list(pg.succ[m])
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            if isinstance(pg.stmt[y], Goto):
                stack.extend(pg.succ[y])
            else:
                edges.add((m, y))
    dead = [x for x in pg.nodes if x not in reach and not isinstance(pg.stmt[x], Goto)]
    return Flowgraph({x: pg.stmt[x] for x in keep}, edges, 0,
                     {x: l for x, l in pg.label.items() if x in keep},
                     {x: x for x in keep}, program=p, dead=dead)


def _reachable(g: Flowgraph, start: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.succ[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def reachable(g: Flowgraph, start: Optional[int] = None) -> set:
    return _reachable(g, g.initial if start is None else start)


def topological_order(g: Flowgraph) -> List[int]:
    """Kahn's algorithm with smallest-index tie-breaking.

    Raises CyclicGraphError on a cycle."""
    import heapq
    indeg = {n: len(g.pred[n]) for n in g.stmt}
    ready = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        x = heapq.heappop(ready)
        out.append(x)
        for y in g.succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(ready, y)
    if len(out) != len(indeg):
        raise CyclicGraphError()
    return out


def is_acyclic(g: Flowgraph) -> bool:
    try:
        topological_order(g)
    except CyclicGraphError:
        return False
    return True


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(g: Flowgraph, name: str = "flowgraph") -> str:
    lines = [f'digraph "{_dot_escape(name)}" {{', "  node [shape=box];"]
    for n in g.nodes:
        lines.append(f'  n{n} [label="{n}: {_dot_escape(g.describe(n))}"];')
    for a, b in sorted(g.edges):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_program(g: Flowgraph, template: Program, locals_=None) -> Program:
    """Render a flowgraph back to Boogie text form with explicit gotos.

    The sentinel's successors become the target of a leading goto, so
    re-parsing gives a graph isomorphic to ``g``."""
    names = {n: f"N{n}" for n in g.nodes}
    body = []
    if g.succ[g.initial]:
        body.append(LabeledStatement(None, Goto(tuple(names[y] for y in g.succ[g.initial]))))
    for n in topological_order(g) if is_acyclic(g) else g.nodes:
        if n == g.initial:
            continue
        body.append(LabeledStatement(names[n], g.stmt[n]))
        if not isinstance(g.stmt[n], Return):
            if g.succ[n]:
                body.append(LabeledStatement(None, Goto(tuple(names[y] for y in g.succ[n]))))
            else:
                body.append(LabeledStatement(None, Return()))
    if not body or not isinstance(body[-1].stmt, Return):
        body.append(LabeledStatement(None, Return()))
    return Program(template.name, template.args, template.results,
                   tuple(locals_) if locals_ is not None else template.locals,
                   tuple(body), template.functions, template.axioms, template.pos)


def statement_kind(s) -> str:
    if isinstance(s, Assign):
        return "assign"
    if isinstance(s, Assume):
        return "assume"
    if isinstance(s, Goto):
        return "goto"
    if isinstance(s, Return):
        return "return"
    return "assert"
