"""Sharing elimination so VCs print in linear size.

Shared formula nodes are replaced by fresh propositional variables
(``$def0``, ``$def1``, ...) whose definitions are collected and put in
front of the formula as hypotheses. Validity is preserved; the set of
satisfying stores is not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .smt import Session, Term, postorder

POSITIVE, NEGATIVE, MIXED, ABSENT = "positive", "negative", "mixed", "absent"


@dataclass
class UnshareConfig:
    k: int = -1
    monotone_plucking: bool = False


@dataclass
class UnshareStats:
    visits: int = 0
    new_nodes: int = 0
    max_new_per_visit: int = 0
    definitions: List[Term] = field(default_factory=list)
    fresh: List[Term] = field(default_factory=list)
    body: Optional[Term] = None


def print_size(t: Term, memo: Dict[Term, int] = None) -> int:
    """Length of the tree print: 1 + sum over children (memoized)."""
    memo = {} if memo is None else memo
    for x in postorder(t):
        if x not in memo:
            memo[x] = 1 + sum(memo[c] for c in x.children)
    return memo[t]


def count_parents(t: Term) -> Dict[Term, int]:
    counts: Dict[Term, int] = {}
    for x in postorder(t):
        counts.setdefault(x, 0)
        for c in x.children:
            counts[c] = counts.get(c, 0) + 1
    return counts


def _flip(p):
    return {POSITIVE: NEGATIVE, NEGATIVE: POSITIVE}.get(p, p)


def _join(a, b):
    if a == ABSENT:
        return b
    if b == ABSENT or a == b:
        return a
    return MIXED


def polarity(t: Term, v: Term) -> str:
    """Syntactic polarity of the variable ``v`` in ``t``: the left side of
    an implication and the operand of a negation flip it; anything under
    another connective (iff, ite, quantifiers, atoms) counts as mixed."""
    memo: Dict[Term, str] = {}
    for x in postorder(t):
        if x is v:
            r = POSITIVE
        elif x.label in ("and", "or"):
            r = ABSENT
            for c in x.children:
                r = _join(r, memo[c])
        elif x.label == "not":
            r = _flip(memo[x.children[0]])
        elif x.label == "implies":
            r = _join(_flip(memo[x.children[0]]), memo[x.children[1]])
        else:
            r = MIXED if any(memo[c] != ABSENT for c in x.children) else ABSENT
        memo[x] = r
    return memo[t]


class FreshNames:
    """Counter behind the ``$def<N>`` names; names in ``taken`` are skipped."""

    def __init__(self, start: int = 0, taken=()):
        self.n = start
        self.taken = set(taken)

    def next(self, s: Session, taken) -> Term:
        while True:
            name = f"$def{self.n}"
            self.n += 1
            if name not in taken and name not in self.taken:
                return s.prop(name)


def _session_names(s: Session) -> FreshNames:
    fn = getattr(s, "_def_names", None)
    if fn is None:
        fn = s._def_names = FreshNames()
    return fn


def eliminate_sharing(t: Term, cfg: UnshareConfig = None, stats: UnshareStats = None,
                      names: FreshNames = None) -> Term:
    """Pluck shared formula nodes into fresh definitions. Without ``names``
    the session-wide counter is used, so separate calls never reuse a name."""
    cfg = cfg or UnshareConfig()
    if not t.is_formula:
        raise TypeError("eliminate_sharing needs a formula")
    s = t.session
    names = names or _session_names(s)
    stats = stats if stats is not None else UnshareStats()
    parents = count_parents(t)
    taken = {x.name for x in postorder(t) if x.is_var}
    sizes: Dict[Term, int] = {}
    memo: Dict[Term, Term] = {}
    defs: List[tuple] = []  # (fresh var, subterm)

    for x in postorder(t):
        if not x.is_formula or any(not c.is_formula for c in x.children):
            memo[x] = x
            continue
        before = len(s.table)
        stats.visits += 1
        new = s.rebuild(x, [memo[c] for c in x.children]) if x.children else x
        ps = print_size(new, sizes)
        pc = parents.get(x, 0)
        if ps * pc - (ps + pc) > cfg.k:
            v = names.next(s, taken)
            defs.append((v, new))
            stats.fresh.append(v)
            new = v
        memo[x] = new
        grown = len(s.table) - before
        stats.new_nodes += grown
        stats.max_new_per_visit = max(stats.max_new_per_visit, grown)

    body = memo[t]
    rhs_vars = set()
    for _, q in defs:
        rhs_vars |= {y for y in postorder(q) if y.is_var}
    clauses = []
    for v, q in defs:
        conn = s.Iff(v, q)
        if cfg.monotone_plucking and v not in rhs_vars:
            pol = polarity(body, v)
            if pol == POSITIVE:
                conn = s.Implies(q, v)
            elif pol == NEGATIVE:
                conn = s.Implies(v, q)
        clauses.append(conn)
    stats.definitions = clauses
    stats.body = body
    stats.new_nodes += len(clauses)
    return _implies_chain(s, clauses, body)


def _implies_chain(s: Session, clauses, body):
    if not clauses:
        return body
    return s.Implies(s.And(clauses), body)


def definitions_in_order(t: Term) -> List[Term]:
    """The hypotheses of an unshared formula, ordered by $def index."""
    if t.label != "implies":
        return []
    ante = t.session.flatten("and", t.children[0])

    def idx(c):
        v = c.children[0] if c.children[0].is_var else c.children[1]
        try:
            return int(v.name[4:])
        except (AttributeError, ValueError):
            return -1

    return sorted(ante, key=idx)
