"""Verification conditions for acyclic flowgraphs.

Passive graphs first lose their assignments (``v := e`` becomes
``assume v == e``); the VC then comes from either the strongest
postcondition sweep or the weakest precondition sweep. A third entry
point, :func:`wp_with_assignments`, substitutes through assignments
directly and exists to show how badly that scales.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional

from .ast import Assert, Assign, Assume, Binary, Return, Var, stmt_reads, stmt_writes
from .errors import BoogieError
from .flowgraph import Flowgraph, topological_order
from .passivation import base_name
from .smt import Session, Term, Translator, substitute


class TypeEnv(dict):
    """Variable types; versioned names ``v@k`` inherit the type of ``v``."""

    def __missing__(self, key):
        b = base_name(key)
        if b != key and b in self:
            return self[b]
        raise KeyError(key)


class NotPassiveError(BoogieError):
    pass


def is_passive(g: Flowgraph) -> bool:
    """Each name written at most once per path; no node reads what it writes."""
    order = topological_order(g)
    writers: Dict[str, list] = {}
    for n in g.nodes:
        s = g.stmt[n]
        w = stmt_writes(s)
        if w & stmt_reads(s):
            return False
        for v in w:
            writers.setdefault(v, []).append(n)
    pos = {n: i for i, n in enumerate(order)}
    desc = {n: 0 for n in g.nodes}
    for x in reversed(order):
        m = 0
        for y in g.succ[x]:
            m |= desc[y] | (1 << pos[y])
        desc[x] = m
    for ns in writers.values():
        for a in ns:
            for b in ns:
                if a != b and desc[a] >> pos[b] & 1:
                    return False
    return True


def assignments_to_assumptions(g: Flowgraph) -> Flowgraph:
    if not is_passive(g):
        raise NotPassiveError("assignment removal needs a passive flowgraph")
    stmt = {}
    for n, s in g.stmt.items():
        if isinstance(s, Assign):
            stmt[n] = Assume(Binary("==", Var(s.lhs, s.pos), s.rhs, s.pos), s.pos)
        else:
            stmt[n] = s
    return g.with_stmts(stmt)


@dataclass
class AnnotatedFlowgraph:
    graph: Flowgraph
    pre: Dict[int, Term]
    post: Dict[int, Term]


class VCGen:
    """Statement predicates are translated once per node and cached."""

    def __init__(self, session: Session, env: Dict[str, object], functions: Iterable = (),
                 use_ite: bool = True):
        self.s = session
        self.env = env if isinstance(env, TypeEnv) else TypeEnv(env)
        self.tr = Translator(session, self.env, functions, use_ite)
        self._q: Dict[tuple, Term] = {}

    @classmethod
    def for_program(cls, program, session: Optional[Session] = None, **kw) -> "VCGen":
        env = TypeEnv({d.name: d.type for d in program.declarations()})
        return cls(session or Session(), env, program.functions, **kw)

    @property
    def hypotheses(self):
        return sorted(self.tr.hypotheses, key=lambda t: t.key)

    def axioms(self, program):
        return [self.tr.translate(a).term for a in program.axioms]

    def predicate(self, g: Flowgraph, n: int) -> Term:
        """q_x: the predicate of an assume/assert; return counts as assume true."""
        s = g.stmt[n]
        k = (id(s), n)
        t = self._q.get(k)
        if t is None:
            if isinstance(s, (Assume, Assert)):
                t = self.tr.translate(s.expr).term
            elif isinstance(s, Return):
                t = self.s.top
            else:
                raise BoogieError(f"node {n} is an assignment; remove assignments first")
            self._q[k] = t
        return t

    # -- strongest postcondition
    def sp_annotate(self, g: Flowgraph) -> AnnotatedFlowgraph:
        pre: Dict[int, Term] = {}
        post: Dict[int, Term] = {}
        for y in topological_order(g):
            if y == g.initial:
                a = self.s.top
            else:
                a = self.s.Or([post[x] for x in g.pred[y]])
            pre[y] = a
            post[y] = self.s.And(a, self.predicate(g, y))
        return AnnotatedFlowgraph(g, pre, post)

    def vc_sp(self, g: Flowgraph, ann: Optional[AnnotatedFlowgraph] = None) -> Term:
        ann = ann or self.sp_annotate(g)
        parts = [self.s.Implies(ann.pre[x], self.predicate(g, x))
                 for x in g.nodes if isinstance(g.stmt[x], Assert)]
        return self.s.And(parts)

    # -- weakest precondition
    def wp_annotate(self, g: Flowgraph) -> AnnotatedFlowgraph:
        pre: Dict[int, Term] = {}
        post: Dict[int, Term] = {}
        for x in reversed(topological_order(g)):
            b = self.s.And([pre[y] for y in g.succ[x]])
            post[x] = b
            q = self.predicate(g, x)
            if isinstance(g.stmt[x], Assert):
                pre[x] = self.s.And(q, b)
            else:
                pre[x] = self.s.Implies(q, b)
        return AnnotatedFlowgraph(g, pre, post)

    def vc_wp(self, g: Flowgraph) -> Term:
        return self.wp_annotate(g).pre[g.initial]

    def vc(self, g: Flowgraph, method: str = "sp") -> Term:
        if method == "sp":
            return self.vc_sp(g)
        if method == "wp":
            return self.vc_wp(g)
        raise ValueError(f"unknown VC method {method}")

    # -- wp straight through assignments
    def wp_with_assignments(self, g: Flowgraph) -> AnnotatedFlowgraph:
        pre: Dict[int, Term] = {}
        post: Dict[int, Term] = {}
        for x in reversed(topological_order(g)):
            b = self.s.And([pre[y] for y in g.succ[x]])
            post[x] = b
            s = g.stmt[x]
            if isinstance(s, Assign):
                v = self.s.var(s.lhs, self.env[s.lhs])
                e = self.tr.translate(s.rhs, "term").term
                pre[x] = substitute(b, {v: e})
            elif isinstance(s, Assert):
                pre[x] = self.s.And(self.predicate(g, x), b)
            else:
                pre[x] = self.s.Implies(self.predicate(g, x), b)
        return AnnotatedFlowgraph(g, pre, post)


def uninterpreted_application_count(t: Term) -> int:
    """Distinct applications of uninterpreted functions in the dag; for
    function-composition predicates this is the edge count of the trie of
    reversed composition strings."""
    from .smt import INTERPRETED, postorder
    return sum(1 for x in postorder(t) if x.label not in INTERPRETED)
