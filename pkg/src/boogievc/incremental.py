"""Edit-and-verify support.

``prune(p, q)`` takes the negation ``p`` of an old, valid VC and the
negation ``q`` of a new VC and returns a formula between ``not p and q``
and ``q``; when the old VC is valid, the result is unsatisfiable exactly
when ``q`` is.  Pruning only helps if the two dags share nodes, so the
second half of the module recovers a leaf correspondence (location tries,
string similarity, maximum-weight matching) and renames the old VC.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import SortError
from .hungarian import max_weight_matching
from .smt import Session, Term, postorder, substitute


def _by_key(ts):
    return sorted(ts, key=lambda t: t.key)


class Pruner:
    """Memoized pruning; ``calls`` counts executions of the body."""

    def __init__(self, session: Session):
        self.s = session
        self.memo: Dict[Tuple[Term, Term], Term] = {}
        self.calls = 0

    def prune(self, p: Term, q: Term) -> Term:
        if not (p.is_formula and q.is_formula):
            raise SortError("prune needs two formulas")
        k = (p, q)
        r = self.memo.get(k)
        if r is None:
            r = self._body(p, q)
            self.memo[k] = r
        return r

    def _body(self, p: Term, q: Term) -> Term:
        s = self.s
        self.calls += 1
        q_or = s.flatten("or", q)
        q_and = s.flatten("and", q)
        p_or = s.flatten("or", p)
        p_or_and = [s.flatten("and", u) for u in _by_key(p_or)]
        # p or q themselves count as a single disjunct/conjunct here
        if (p_or | {p}) & (q_and | {q}):
            return s.bottom
        r = set()
        for u in p_or_and:
            r |= u & q_and
        if r:
            p2 = s.Or([s.And(_by_key(u - r)) for u in p_or_and])
            rest = [self.prune(p2, u) for u in _by_key(q_and - r)]
            return s.And(_by_key(r) + rest)
        if len(q_or) > 1:
            return s.Or([self.prune(p, u) for u in _by_key(q_or)])
        return q


def negation_normal_form(t: Term) -> Term:
    """Push negations down to atoms through and, or, not and implies, and
    flatten nested conjunctions and disjunctions.  Equivalences and other
    atoms are left alone.  Pruning only looks at and/or spines, so this
    exposes more of a negated VC to it."""
    s = t.session
    memo: Dict[Tuple[Term, bool], Term] = {}

    def go(x: Term, neg: bool) -> Term:
        k = (x, neg)
        r = memo.get(k)
        if r is not None:
            return r
        lab = x.label
        if lab in ("and", "or"):
            op = lab if not neg else ("or" if lab == "and" else "and")
            parts = [go(c, neg) for c in x.children]
            r = s.mk(op, [y for c in parts for y in s.flatten(op, c)])
        elif lab == "implies":
            a, b = x.children
            parts = [go(a, not neg), go(b, neg)]
            op = "and" if neg else "or"
            r = s.mk(op, [y for c in parts for y in s.flatten(op, c)])
        elif lab == "not":
            r = go(x.children[0], not neg)
        elif lab in ("true", "false") and neg:
            r = s.mk("false" if lab == "true" else "true")
        else:
            r = s.Not(x) if neg else x
        memo[k] = r
        return r

    return go(t, False)


def prune(p: Term, q: Term) -> Term:
    return Pruner(p.session).prune(p, q)


def prune_call_count(p: Term, q: Term) -> int:
    pr = Pruner(p.session)
    pr.prune(p, q)
    return pr.calls


# ------------------------------------------------------------ locations


class LocationNode:
    """Trie node over reversed root paths. ``end`` marks that a path may
    stop here (the node stands for the root). Children keys are unique, so
    path strings correspond one to one with end-marked trie paths."""

    __slots__ = ("label", "end", "children", "uid")

    def __init__(self, label, end, children, uid):
        self.label = label
        self.end = end
        self.children = children
        self.uid = uid

    def __repr__(self):
        return f"Loc({self.label!r}, end={self.end}, {len(self.children)} children)"


class LocationTable:
    def __init__(self):
        self._table: Dict[tuple, LocationNode] = {}
        self._merge: Dict[tuple, LocationNode] = {}
        self._paths: Dict[LocationNode, int] = {}
        self._common: Dict[tuple, int] = {}

    def make(self, label, end, children) -> LocationNode:
        children = tuple(sorted(children, key=lambda ec: (ec[0], ec[1].label, ec[1].uid)))
        key = (label, end, tuple((e, c.uid) for e, c in children))
        n = self._table.get(key)
        if n is None:
            n = LocationNode(label, end, children, len(self._table))
            self._table[key] = n
        return n

    def merge(self, a: LocationNode, b: LocationNode) -> LocationNode:
        if a is b:
            return a
        if a.label != b.label:
            raise ValueError("merging locations with different labels")
        k = (a.uid, b.uid) if a.uid < b.uid else (b.uid, a.uid)
        r = self._merge.get(k)
        if r is None:
            r = self.make(a.label, a.end or b.end, self._merge_children(a.children + b.children))
            self._merge[k] = r
        return r

    def _merge_children(self, pairs):
        grouped: Dict[tuple, LocationNode] = {}
        for e, c in pairs:
            key = (e, c.label)
            grouped[key] = self.merge(grouped[key], c) if key in grouped else c
        return [(k[0], c) for k, c in grouped.items()]

    def path_count(self, n: LocationNode) -> int:
        r = self._paths.get(n)
        if r is None:
            r = int(n.end) + sum(self.path_count(c) for _, c in n.children)
            self._paths[n] = r
        return r

    def common_paths(self, a: LocationNode, b: LocationNode) -> int:
        if a.label != b.label:
            return 0
        if a is b:
            return self.path_count(a)
        k = (a.uid, b.uid) if a.uid < b.uid else (b.uid, a.uid)
        r = self._common.get(k)
        if r is None:
            bc = {(e, c.label): c for e, c in b.children}
            r = int(a.end and b.end)
            for e, c in a.children:
                d = bc.get((e, c.label))
                if d is not None:
                    r += self.common_paths(c, d)
            self._common[k] = r
        return r

    def erase_label(self, n: LocationNode, label: str = "") -> LocationNode:
        return self.make(label, n.end, n.children)


def node_label(t: Term) -> str:
    if t.is_var:
        return t.name
    if t.label == "literal_int":
        return str(t.payload)
    return t.label


def edge_label(parent: Term, index: int) -> str:
    d = parent.session.lookup(parent.label)
    if d.commutative or len(parent.children) == 1:
        return ""
    return str(index)


class DagLocations:
    """Locations of the nodes of one dag; the incoming-edge index is built
    once up front."""

    def __init__(self, root: Term, table: Optional[LocationTable] = None):
        self.root = root
        self.table = table or LocationTable()
        self.nodes = postorder(root)
        self.parents: Dict[Term, List[Tuple[str, Term]]] = {x: [] for x in self.nodes}
        for x in self.nodes:
            for i, c in enumerate(x.children):
                self.parents[c].append((edge_label(x, i), x))
        self._memo: Dict[Term, LocationNode] = {}

    def location(self, x: Term) -> LocationNode:
        if x not in self.parents:
            raise KeyError("node is not in the dag")
        # reverse postorder puts parents first
        if not self._memo:
            for y in reversed(self.nodes):
                kids = [(e, self._memo[p]) for e, p in self.parents[y]]
                self._memo[y] = self.table.make(
                    node_label(y), y is self.root, self.table._merge_children(kids))
        return self._memo[x]

    def leaf_location(self, x: Term) -> LocationNode:
        """Location with the leaf's own label erased, so that leaves sitting
        in the same place compare identical regardless of their names."""
        return self.table.erase_label(self.location(x))

    def leaves(self) -> List[Term]:
        return [x for x in self.nodes if not x.children]

    def variable_leaves(self) -> List[Term]:
        bound = {x.children[0] for x in self.nodes if x.label in ("forall", "exists")}
        vs = [x for x in self.nodes if x.is_var and x not in bound]
        return sorted(vs, key=lambda v: (v.name, v.key))


def path_strings(root: Term, x: Term) -> set:
    """All reversed root paths as label tuples, by explicit enumeration.
    Exponential; only for small dags."""
    parents: Dict[Term, list] = {y: [] for y in postorder(root)}
    for y in parents:
        for i, c in enumerate(y.children):
            parents[c].append((edge_label(y, i), y))
    out = set()

    def go(y, acc):
        acc = acc + (node_label(y),)
        if y is root:
            out.add(acc)
        for e, p in parents[y]:
            go(p, acc + (e,))

    go(x, ())
    return out


# ---------------------------------------------------------- similarity


def lcs(s: str, t: str) -> int:
    if not s or not t:
        return 0
    prev = [0] * (len(t) + 1)
    for a in s:
        cur = [0]
        for j, b in enumerate(t):
            cur.append(prev[j] + 1 if a == b else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def location_similarity(table: LocationTable, a: LocationNode, b: LocationNode) -> int:
    na, nb = table.path_count(a), table.path_count(b)
    return 2 * table.common_paths(a, b) - abs(na - nb)


def leaf_similarity(lp: DagLocations, u: Term, lq: DagLocations, v: Term) -> int:
    if lp.table is not lq.table:
        raise ValueError("both dags need one location table")
    w1 = lcs(node_label(u), node_label(v))
    w2 = location_similarity(lp.table, lp.leaf_location(u), lq.leaf_location(v))
    return w1 + w2


@dataclass
class Correspondence:
    pairs: List[Tuple[Term, Term]] = field(default_factory=list)
    weights: Dict[Tuple[Term, Term], int] = field(default_factory=dict)

    def mapping(self) -> Dict[Term, Term]:
        return dict(self.pairs)

    def __len__(self):
        return len(self.pairs)


def _same_kind(u: Term, v: Term) -> bool:
    return u.sort == v.sort and u.var_type == v.var_type


def match_leaves(p: Term, q: Term) -> Correspondence:
    """Maximum-weight matching of variable leaves of ``p`` to those of
    ``q``. Pairs of different types are never matched; pairs whose
    weight is not positive are dropped."""
    if p.session is not q.session:
        raise ValueError("both dags must live in one session")
    table = LocationTable()
    lp, lq = DagLocations(p, table), DagLocations(q, table)
    us, vs = lp.variable_leaves(), lq.variable_leaves()
    if not us or not vs:
        return Correspondence()
    forbid = -(10 ** 9)
    w = [[leaf_similarity(lp, u, lq, v) if _same_kind(u, v) else forbid for v in vs]
         for u in us]
    out = Correspondence()
    for i, j in max_weight_matching(w):
        if w[i][j] > 0:
            out.pairs.append((us[i], vs[j]))
            out.weights[(us[i], vs[j])] = w[i][j]
    return out


def rename_for_sharing(p: Term, corr) -> Term:
    """Rename variables of the old VC ``p`` to their partners."""
    mapping = corr.mapping() if isinstance(corr, Correspondence) else dict(corr)
    for u, v in mapping.items():
        if not u.is_var:
            raise SortError(f"cannot rename interpreted label {u.label}")
        if not _same_kind(u, v):
            raise SortError(f"renaming {u.name} to a term of another sort")
    if not mapping:
        return p
    return substitute(p, mapping)
