"""Hash-consed, sort-checked term dags.

Every term lives in a :class:`Session`. Building the same structure twice
returns the same object, so ``is`` is the structural equality test. The
builders apply a handful of boolean simplifications (unit and zero
absorption for and/or, double negation, trivial implications).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Tuple, Union

from .ast import (
    BOOL, INT, Binary, BoolLit, BoolType, Call, IntLit, IntType, MapType,
    Quantified, Select, Unary, Var,
)
from .errors import SortError

# ------------------------------------------------------------------ sorts


@dataclass(frozen=True)
class Sort:
    name: str
    of: Optional["Sort"] = None

    def __str__(self):
        return f"VAR({self.of})" if self.name == "VAR" else self.name

    def __repr__(self):
        return str(self)


FORMULA = Sort("FORMULA")
TERM = Sort("TERM")
INT_S = Sort("INT")
BOOL_S = Sort("BOOL")


def VAR(of: Sort) -> Sort:
    return Sort("VAR", of)


def _parent(s: Sort) -> Optional[Sort]:
    if s.name == "VAR":
        return s.of
    if s in (INT_S, BOOL_S):
        return TERM
    return None


def is_subsort(s: Sort, t: Sort) -> bool:
    while s is not None:
        if s == t:
            return True
        s = _parent(s)
    return False


def base_sort(s: Sort) -> Sort:
    """Strip VAR wrappers."""
    while s.name == "VAR":
        s = s.of
    return s


def sort_of_type(t) -> Sort:
    if isinstance(t, IntType):
        return INT_S
    if isinstance(t, BoolType):
        return BOOL_S
    return TERM


# ------------------------------------------------------------ label defs


@dataclass(frozen=True)
class Variadic:
    sort: Sort


@dataclass(frozen=True)
class LabelDef:
    label: str
    args: Union[Tuple[Sort, ...], Variadic]
    result: Union[Sort, Callable]
    meta: Optional[type] = None
    commutative: bool = False
    interp: Optional[Callable] = None  # ground semantics for `evalGround`


# ------------------------------------------------------------------ terms


class Term:
    __slots__ = ("label", "children", "sort", "payload", "session", "uid", "key", "__weakref__")

    def __init__(self, label, children, sort, payload, session, uid, key):
        self.label = label
        self.children = children
        self.sort = sort
        self.payload = payload
        self.session = session
        self.uid = uid
        self.key = key

    @property
    def is_formula(self) -> bool:
        return is_subsort(self.sort, FORMULA)

    @property
    def is_var(self) -> bool:
        return self.label == "var"

    @property
    def name(self) -> str:
        if self.label != "var":
            raise AttributeError(f"{self.label} term has no variable name")
        return self.payload[0]

    @property
    def var_type(self):
        return self.payload[1]

    def __repr__(self):
        return to_sexpr(self, limit=400)

    # hash and equality stay identity-based: hash-consing makes that structural


def _fmt_payload(t):
    if t.label == "var":
        return t.payload[0]
    return str(t.payload)


def to_sexpr(t: Term, limit: Optional[int] = None) -> str:
    """Tree-expanded rendering; ``limit`` truncates large dags."""
    out = []
    budget = [limit if limit is not None else -1]

    def go(x):
        if budget[0] == 0:
            out.append("...")
            return
        budget[0] -= 1
        if x.label in ("var", "literal_int"):
            out.append(_fmt_payload(x))
        elif not x.children:
            out.append(x.label)
        else:
            out.append("(" + x.label)
            for c in x.children:
                out.append(" ")
                go(c)
            out.append(")")

    go(t)
    return "".join(out)


def _ite_sort(children):
    a, b = base_sort(children[1].sort), base_sort(children[2].sort)
    return a if a == b else TERM


def _select_sort(children):
    m = children[0]
    mt = _map_type_of(m)
    if mt is None:
        return TERM
    return sort_of_type(mt.element)


def _map_type_of(t: Term):
    if t.label == "var":
        bt = t.payload[1]
        return bt if isinstance(bt, MapType) else None
    if t.label == "select":
        outer = _map_type_of(t.children[0])
        if outer is not None and isinstance(outer.element, MapType):
            return outer.element
        return None
    if t.label == "ite":
        return _map_type_of(t.children[1])
    fr = t.session.func_types.get(t.label)
    if fr is not None and isinstance(fr, MapType):
        return fr
    return None


def _even(x):
    return x % 2 == 0


def _base_defs():
    F, T, I, B = FORMULA, TERM, INT_S, BOOL_S
    return [
        LabelDef("true", (), F),
        LabelDef("false", (), F),
        LabelDef("and", Variadic(F), F, commutative=True),
        LabelDef("or", Variadic(F), F, commutative=True),
        LabelDef("not", (F,), F),
        LabelDef("implies", (F, F), F),
        LabelDef("iff", (F, F), F),
        LabelDef("eq", (T, T), F),
        LabelDef("distinct", (T, T), F),
        LabelDef("lt", (I, I), F),
        LabelDef("plus", (I, I), I),
        LabelDef("minus", (I, I), I),
        LabelDef("neg", (I,), I),
        LabelDef("literal_int", (), I, meta=int),
        LabelDef("trueTerm", (), B),
        LabelDef("falseTerm", (), B),
        LabelDef("ite", (F, T, T), _ite_sort),
        LabelDef("select", (T, T), _select_sort),
        LabelDef("forall", (T, F), F),
        LabelDef("exists", (T, F), F),
        LabelDef("even", (I,), F, interp=_even),
    ]


INTERPRETED = frozenset(d.label for d in _base_defs()) | {"var"}


class Session:
    """Label definitions plus the hash-cons table."""

    def __init__(self):
        self.frames = [{}]
        for d in _base_defs():
            self.frames[0][d.label] = d
        self.table: Dict[tuple, Term] = {}
        self.func_types: Dict[str, object] = {}  # uninterpreted result types
        self.func_sigs: Dict[str, tuple] = {}
        self._uid = itertools.count()
        self._flat: Dict[tuple, frozenset] = {}
        self.top = self.mk("true")
        self.bottom = self.mk("false")

    # -- definition frames
    def define_label(self, d: LabelDef, boogie_result=None):
        for fr in self.frames:
            if d.label in fr:
                raise SortError(f"label {d.label} already defined")
        if d.label == "var":
            raise SortError("label var is reserved")
        self.frames[-1][d.label] = d
        if boogie_result is not None:
            self.func_types[d.label] = boogie_result

    def push_def_frame(self):
        self.frames.append({})

    def pop_def_frame(self):
        if len(self.frames) == 1:
            raise SortError("pop of empty definition stack")
        fr = self.frames.pop()
        for name in fr:
            self.func_types.pop(name, None)
            self.func_sigs.pop(name, None)

    def lookup(self, label) -> LabelDef:
        for fr in reversed(self.frames):
            if label in fr:
                return fr[label]
        raise SortError(f"undefined label {label}")

    def is_defined(self, label) -> bool:
        return any(label in fr for fr in self.frames)

    def define_function(self, name, param_types, result_type):
        """Declare an uninterpreted function over Boogie types."""
        res = FORMULA if result_type == "formula" else sort_of_type(result_type)
        self.define_label(
            LabelDef(name, tuple(TERM for _ in param_types), res),
            boogie_result=result_type)
        self.func_sigs[name] = (tuple(param_types), result_type)

    # -- interning
    def _intern(self, label, children, sort, payload) -> Term:
        k = (label, payload, sort if label == "var" else None, children)
        t = self.table.get(k)
        if t is None:
            skey = (label, repr(payload), tuple(c.key for c in children))
            t = Term(label, children, sort, payload, self, next(self._uid), skey)
            self.table[k] = t
        return t

    def var(self, name: str, btype) -> Term:
        """Variable leaf. ``btype`` is a Boogie type or ``"formula"`` for a
        propositional variable."""
        if btype == "formula":
            sort = VAR(FORMULA)
        elif isinstance(btype, MapType):
            sort = VAR(TERM)
        else:
            sort = VAR(sort_of_type(btype))
        return self._intern("var", (), sort, (name, btype))

    def prop(self, name: str) -> Term:
        return self.var(name, "formula")

    def int_lit(self, n: int) -> Term:
        return self.mk("literal_int", (), payload=int(n))

    def mk(self, label: str, children: Iterable[Term] = (), payload=None) -> Term:
        children = tuple(children)
        d = self.lookup(label)
        for c in children:
            if c.session is not self:
                raise SortError(f"child of {label} belongs to another session")
        if d.meta is not None:
            if not isinstance(payload, d.meta) or isinstance(payload, bool):
                raise SortError(f"{label} needs a {d.meta.__name__} payload")
        elif payload is not None:
            raise SortError(f"{label} takes no payload")
        if isinstance(d.args, Variadic):
            want = [d.args.sort] * len(children)
        else:
            if len(children) != len(d.args):
                raise SortError(f"{label} expects {len(d.args)} arguments, got {len(children)}")
            want = d.args
        for i, (c, s) in enumerate(zip(children, want)):
            if not is_subsort(c.sort, s):
                raise SortError(
                    f"sort mismatch in argument {i} of {label}: expected {s}, got {c.sort}")
        if label in ("forall", "exists") and not children[0].is_var:
            raise SortError(f"{label} must bind a variable")
        simp = self._simplify(label, children)
        if simp is not None:
            return simp
        if d.commutative:
            children = tuple(sorted(set(children), key=lambda c: c.key))
        res = d.result(children) if callable(d.result) else d.result
        return self._intern(label, children, res, payload)

    def _simplify(self, label, cs):
        if label in ("and", "or"):
            unit, zero = ("true", "false") if label == "and" else ("false", "true")
            kept = []
            for c in cs:
                if c.label == zero:
                    return self.mk(zero)
                if c.label != unit:
                    kept.append(c)
            kept = set(kept)
            if not kept:
                return self.mk(unit)
            if len(kept) == 1:
                return next(iter(kept))
            if len(kept) != len(cs):
                return self.mk(label, kept)
            return None
        if label == "not":
            c = cs[0]
            if c.label == "not":
                return c.children[0]
            if c.label == "true":
                return self.mk("false")
            if c.label == "false":
                return self.mk("true")
        if label == "implies":
            a, b = cs
            if a.label == "true":
                return b
            if b.label == "true" or a.label == "false":
                return self.mk("true")
        return None

    # -- convenience builders
    def And(self, *cs):
        if len(cs) == 1 and not isinstance(cs[0], Term):
            cs = tuple(cs[0])
        return self.mk("and", cs)

    def Or(self, *cs):
        if len(cs) == 1 and not isinstance(cs[0], Term):
            cs = tuple(cs[0])
        return self.mk("or", cs)

    def Not(self, a):
        return self.mk("not", (a,))

    def Implies(self, a, b):
        return self.mk("implies", (a, b))

    def Iff(self, a, b):
        return self.mk("iff", (a, b))

    def Eq(self, a, b):
        return self.mk("eq", (a, b))

    def true_term(self):
        return self.mk("trueTerm")

    def false_term(self):
        return self.mk("falseTerm")

    # -- flatten
    def flatten(self, op: str, t: Term) -> frozenset:
        if op not in ("and", "or"):
            raise ValueError("flatten works on and/or")
        k = (op, t)
        r = self._flat.get(k)
        if r is None:
            if t.label != op:
                r = frozenset((t,))
            else:
                acc = set()
                for c in t.children:
                    acc |= self.flatten(op, c)
                r = frozenset(acc)
            self._flat[k] = r
        return r

    def rebuild(self, t: Term, children) -> Term:
        """Same label/payload over new children (simplifications apply)."""
        if t.label == "var":
            return t
        return self.mk(t.label, children, t.payload)


# ---------------------------------------------------------------- queries


def postorder(root: Term):
    """Each distinct node once, children before parents."""
    seen = set()
    out = []
    stack = [(root, False)]
    while stack:
        t, done = stack.pop()
        if done:
            out.append(t)
            continue
        if t in seen:
            continue
        seen.add(t)
        stack.append((t, True))
        for c in reversed(t.children):
            if c not in seen:
                stack.append((c, False))
    return out


def node_count(t: Term) -> int:
    return len(postorder(t))


def free_symbols(t: Term):
    """(variables, uninterpreted labels) occurring free in ``t``."""
    vs, fs = set(), set()
    bound_ok = {}
    for x in postorder(t):
        if x.label == "var":
            vs.add(x)
        elif x.label not in INTERPRETED:
            fs.add(x.label)
        elif x.label in ("forall", "exists"):
            bound_ok[x] = x.children[0]
    # variables that occur only under their binder are not free
    if bound_ok:
        vs = _free_vars(t)
    return vs, fs


def _free_vars(t: Term) -> set:
    memo = {}

    def go(x):
        r = memo.get(x)
        if r is None:
            if x.label == "var":
                r = frozenset((x,))
            elif x.label in ("forall", "exists"):
                r = go(x.children[1]) - {x.children[0]}
            else:
                acc = frozenset()
                for c in x.children:
                    acc |= go(c)
                r = acc
            memo[x] = r
        return r

    return set(go(t))


def substitute(t: Term, mapping: Dict[Term, Term]) -> Term:
    """Replace variable leaves per ``mapping``; memoized over the dag.
    Binders shadow (quantified variables are never replaced)."""
    s = t.session
    memo: Dict[Term, Term] = {}

    def go(x, shadow):
        if shadow:
            return go_shadowed(x, shadow)
        r = memo.get(x)
        if r is not None:
            return r
        if x.label == "var":
            r = mapping.get(x, x)
        elif not x.children:
            r = x
        elif x.label in ("forall", "exists"):
            b = x.children[0]
            body = go(x.children[1], frozenset((b,)) if b in mapping else frozenset())
            r = s.rebuild(x, (b, body))
        else:
            r = s.rebuild(x, [go(c, shadow) for c in x.children])
        memo[x] = r
        return r

    def go_shadowed(x, shadow):
        if x.label == "var":
            return x if x in shadow else mapping.get(x, x)
        if not x.children:
            return x
        if x.label in ("forall", "exists"):
            b = x.children[0]
            return s.rebuild(x, (b, go_shadowed(x.children[1], shadow | {b})))
        return s.rebuild(x, [go_shadowed(c, shadow) for c in x.children])

    return go(t, frozenset())


# ------------------------------------------------------------ translation


@dataclass(frozen=True)
class TranslationResult:
    term: Term
    hypotheses: frozenset


class Translator:
    """Boogie expression to SmtTerm. Bool-typed terms sitting where a
    formula is needed become ``eq(t, trueTerm)``; formulas sitting where a
    term is needed become ``ite(f, trueTerm, falseTerm)``."""

    def __init__(self, session: Session, env: Dict[str, object],
                 functions: Iterable = (), use_ite: bool = True):
        self.s = session
        self.env = env
        self.use_ite = use_ite
        self.hypotheses: set = set()
        self._bridged = False
        self.func_results: Dict[str, object] = {"even": "formula"}
        for f in functions:
            if f.name == "even":
                continue
            self.func_results[f.name] = f.result
            if not session.is_defined(f.name):
                session.define_function(f.name, [p.type for p in f.params], f.result)

    def distinctness(self) -> Term:
        return self.s.mk("distinct", (self.s.true_term(), self.s.false_term()))

    def _bridge(self):
        self._bridged = True
        self.hypotheses.add(self.distinctness())

    def translate(self, e, mode: str = "formula") -> TranslationResult:
        if mode not in ("formula", "term"):
            raise ValueError(mode)
        self._bridged = False
        fn = self.formula if mode == "formula" else self.term
        t = fn(e, {})
        hyps = frozenset((self.distinctness(),)) if self._bridged else frozenset()
        return TranslationResult(t, hyps)

    def _var(self, name, bound):
        if name in bound:
            return bound[name]
        try:
            t = self.env[name]
        except KeyError:
            raise SortError(f"untyped variable {name}") from None
        return self.s.var(name, t)

    def formula(self, e, bound) -> Term:
        s = self.s
        if isinstance(e, BoolLit):
            return s.top if e.value else s.bottom
        if isinstance(e, Unary) and e.op == "!":
            return s.Not(self.formula(e.operand, bound))
        if isinstance(e, Binary):
            if e.op == "&&":
                return s.And(self.formula(e.left, bound), self.formula(e.right, bound))
            if e.op == "||":
                return s.Or(self.formula(e.left, bound), self.formula(e.right, bound))
            if e.op == "==":
                return s.Eq(self.term(e.left, bound), self.term(e.right, bound))
            if e.op == "<":
                return s.mk("lt", (self.term(e.left, bound), self.term(e.right, bound)))
        if isinstance(e, Quantified):
            v = s.var(e.var.name, e.var.type)
            body = self.formula(e.body, {**bound, e.var.name: v})
            return s.mk(e.kind, (v, body))
        if isinstance(e, Call) and self.func_results.get(e.func) == "formula":
            return s.mk(e.func, [self.term(a, bound) for a in e.args])
        # a bool-valued term in formula position
        t = self.term(e, bound)
        if t.is_formula:
            return t
        if base_sort(t.sort) not in (BOOL_S, TERM):
            raise SortError(f"expression of sort {t.sort} used as a formula")
        self._bridge()
        return s.Eq(t, s.true_term())

    def term(self, e, bound) -> Term:
        s = self.s
        if isinstance(e, IntLit):
            return s.int_lit(e.value)
        if isinstance(e, BoolLit):
            self._bridge()
            return s.true_term() if e.value else s.false_term()
        if isinstance(e, Var):
            return self._var(e.name, bound)
        if isinstance(e, Unary) and e.op == "-":
            return s.mk("neg", (self.term(e.operand, bound),))
        if isinstance(e, Binary) and e.op in ("+", "-"):
            lab = "plus" if e.op == "+" else "minus"
            return s.mk(lab, (self.term(e.left, bound), self.term(e.right, bound)))
        if isinstance(e, Select):
            return s.mk("select", (self.term(e.map, bound), self.term(e.index, bound)))
        if isinstance(e, Call) and self.func_results.get(e.func) != "formula":
            if e.func not in self.func_results:
                raise SortError(f"undeclared function {e.func}")
            return s.mk(e.func, [self.term(a, bound) for a in e.args])
        # formula in term position
        f = self.formula(e, bound)
        if not self.use_ite:
            raise SortError("formula in term position needs ite (disabled)")
        self._bridge()
        return s.mk("ite", (f, s.true_term(), s.false_term()))


# ------------------------------------------------------------- evaluation


class EvalError(Exception):
    pass


def eval_ground(t: Term, store: Dict[str, object], bound: int = 4):
    """Evaluate under ``store``; quantifiers range over bool or [-bound, bound].
    Uninterpreted functions may be supplied in ``store`` as callables."""
    memo: Dict[Term, object] = {}

    def go(x, env):
        if env:
            return ev(x, env)
        r = memo.get(x, memo)
        if r is memo:
            r = ev(x, env)
            memo[x] = r
        return r

    def ev(x, env):
        lab = x.label
        ch = x.children
        if lab == "var":
            n = x.payload[0]
            if x in env:
                return env[x]
            if n not in store:
                raise EvalError(f"unbound variable {n}")
            return store[n]
        if lab == "true":
            return True
        if lab == "false":
            return False
        if lab == "trueTerm":
            return True
        if lab == "falseTerm":
            return False
        if lab == "literal_int":
            return x.payload
        if lab == "and":
            return all(go(c, env) for c in ch)
        if lab == "or":
            return any(go(c, env) for c in ch)
        if lab == "not":
            return not go(ch[0], env)
        if lab == "implies":
            return (not go(ch[0], env)) or go(ch[1], env)
        if lab == "iff":
            return go(ch[0], env) == go(ch[1], env)
        if lab == "eq":
            return go(ch[0], env) == go(ch[1], env)
        if lab == "distinct":
            return go(ch[0], env) != go(ch[1], env)
        if lab == "lt":
            return go(ch[0], env) < go(ch[1], env)
        if lab == "plus":
            return go(ch[0], env) + go(ch[1], env)
        if lab == "minus":
            return go(ch[0], env) - go(ch[1], env)
        if lab == "neg":
            return -go(ch[0], env)
        if lab == "ite":
            return go(ch[1], env) if go(ch[0], env) else go(ch[2], env)
        if lab == "select":
            m = go(ch[0], env)
            i = go(ch[1], env)
            try:
                return m[i]
            except (KeyError, IndexError, TypeError):
                raise EvalError(f"map value has no entry for index {i}")
        if lab in ("forall", "exists"):
            b = ch[0]
            dom = (False, True) if isinstance(b.payload[1], BoolType) or b.payload[1] == "formula" \
                else range(-bound, bound + 1)
            if isinstance(b.payload[1], MapType):
                raise EvalError("quantification over maps is not supported")
            vals = (ev(ch[1], {**env, b: v}) for v in dom)
            return all(vals) if lab == "forall" else any(vals)
        d = t.session.lookup(lab)
        if d.interp is not None:
            return d.interp(*[go(c, env) for c in ch])
        f = store.get(lab)
        if callable(f):
            return f(*[go(c, env) for c in ch])
        raise EvalError(f"unsupported label {lab}")

    return go(t, {})
