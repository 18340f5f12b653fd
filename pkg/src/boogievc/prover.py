"""Validity checking.

Two backends sit behind :class:`ProverSession`:

* ``internal``: exhaustive evaluation over bounded stores (booleans fully,
  integers in ``[-B, B]``), vectorized with numpy.  Pure boolean formulas
  get an exact answer; with integers a ``valid`` answer only covers the
  bound, which the verdict says via ``exhaustive=False``.
* ``external``: a long-running SMT-LIB2 solver process (``z3 -in`` and
  the like) fed through stdin.

Both record the same SMT-LIB2 transcript, and :func:`emit_smtlib` writes
a standalone query file.  :func:`parse_smtlib` reads our own output back.
"""

from __future__ import annotations

import re
import subprocess
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .ast import BOOL, INT, BoolType, IntType, MapType
from .errors import ProverError, SortError
from .smt import INTERPRETED, Session, Term, _free_vars, postorder
from .unshare import FreshNames, UnshareConfig, UnshareStats, eliminate_sharing, print_size

DEFAULT_BOUND = 4
DEFAULT_MAX_STORES = 1 << 22
DEFAULT_UNSHARE_CAP = 2000
_CHUNK = 1 << 16


@dataclass
class BoundedVerdict:
    status: str  # valid | invalid | unknown
    bound: int = DEFAULT_BOUND
    store: Optional[Dict[str, object]] = None
    exhaustive: bool = False
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def invalid(self) -> bool:
        return self.status == "invalid"

    def __str__(self):
        return self.status


# ------------------------------------------------------------ internal oracle

_SUPPORTED = frozenset({
    "true", "false", "and", "or", "not", "implies", "iff", "eq", "distinct", "lt",
    "plus", "minus", "neg", "literal_int", "trueTerm", "falseTerm", "ite",
    "forall", "exists", "even", "var",
})


def _domain(t: Term, bound: int):
    bt = t.var_type
    if bt == "formula" or isinstance(bt, BoolType):
        return np.array([False, True])
    if isinstance(bt, IntType):
        return np.arange(-bound, bound + 1, dtype=np.int64)
    return None


def _py(v):
    return v.item() if hasattr(v, "item") else v


class _Evaluator:
    def __init__(self, root: Term, bound: int):
        self.cols: Dict[Term, np.ndarray] = {}
        self.bound = bound
        self.fv: Dict[Term, frozenset] = {}
        for x in postorder(root):
            if x.is_var:
                self.fv[x] = frozenset((x,))
            elif x.label in ("forall", "exists"):
                self.fv[x] = self.fv[x.children[1]] - {x.children[0]}
            else:
                acc = frozenset()
                for c in x.children:
                    acc |= self.fv[c]
                self.fv[x] = acc
        self.base: Dict[Term, object] = {}

    def run(self, t: Term, cols):
        self.cols = cols
        self.base = {}
        return self._eval(t, {}, self.base)

    def _eval(self, root, env, memo):
        # explicit stack: VCs can be deep
        stack = [root]
        while stack:
            x = stack[-1]
            m = memo if env and (self.fv[x] & env.keys()) else self.base
            if x in m:
                stack.pop()
                continue
            if x.label in ("forall", "exists"):
                m[x] = self._quant(x, env)
                stack.pop()
                continue
            pending = []
            for c in x.children:
                mc = memo if env and (self.fv[c] & env.keys()) else self.base
                if c not in mc:
                    pending.append(c)
            if pending:
                stack.extend(pending)
                continue
            vals = []
            for c in x.children:
                mc = memo if env and (self.fv[c] & env.keys()) else self.base
                vals.append(mc[c])
            m[x] = self._apply(x, vals, env)
            stack.pop()
        m = memo if env and (self.fv[root] & env.keys()) else self.base
        return m[root]

    def _quant(self, x, env):
        b, body = x.children
        dom = _domain(b, self.bound)
        if dom is None:
            raise ProverError("quantifier over a map domain")
        acc = None
        for val in dom:
            env2 = dict(env)
            env2[b] = val
            r = self._eval(body, env2, {})
            if acc is None:
                acc = r
            elif x.label == "forall":
                acc = np.logical_and(acc, r)
            else:
                acc = np.logical_or(acc, r)
        return acc

    def _apply(self, x, v, env):
        lab = x.label
        if lab == "var":
            if x in env:
                return env[x]
            return self.cols[x]
        if lab == "true" or lab == "trueTerm":
            return np.bool_(True)
        if lab == "false" or lab == "falseTerm":
            return np.bool_(False)
        if lab == "literal_int":
            return np.int64(x.payload)
        if lab == "and":
            r = v[0]
            for a in v[1:]:
                r = np.logical_and(r, a)
            return r
        if lab == "or":
            r = v[0]
            for a in v[1:]:
                r = np.logical_or(r, a)
            return r
        if lab == "not":
            return np.logical_not(v[0])
        if lab == "implies":
            return np.logical_or(np.logical_not(v[0]), v[1])
        if lab in ("iff", "eq"):
            return np.equal(v[0], v[1])
        if lab == "distinct":
            return np.not_equal(v[0], v[1])
        if lab == "lt":
            return np.less(v[0], v[1])
        if lab == "plus":
            return np.add(v[0], v[1])
        if lab == "minus":
            return np.subtract(v[0], v[1])
        if lab == "neg":
            return np.negative(v[0])
        if lab == "ite":
            return np.where(v[0], v[1], v[2])
        if lab == "even":
            return np.equal(np.mod(v[0], 2), 0)
        raise ProverError(f"unsupported label {lab}")


def bounded_validity(t: Term, bound: int = DEFAULT_BOUND,
                     max_stores: int = DEFAULT_MAX_STORES) -> BoundedVerdict:
    """Check ``t`` on every bounded store."""
    if not t.is_formula:
        raise SortError("validity needs a formula")
    labels = {x.label for x in postorder(t)}
    bad = labels - _SUPPORTED
    if bad:
        return BoundedVerdict("unknown", bound, reason="unsupported: " + ", ".join(sorted(bad)))
    free = sorted(_free_vars(t), key=lambda v: (v.name, v.key))
    doms = []
    exhaustive = True
    for v in free:
        d = _domain(v, bound)
        if d is None:
            return BoundedVerdict("unknown", bound, reason=f"map variable {v.name}")
        if d.dtype != bool:
            exhaustive = False
        doms.append(d)
    for x in postorder(t):
        if x.label in ("forall", "exists") and isinstance(x.children[0].var_type, IntType):
            exhaustive = False
    total = 1
    for d in doms:
        total *= len(d)
    if total > max_stores:
        return BoundedVerdict("unknown", bound, reason=f"{total} stores exceed the cap")
    strides = []
    acc = 1
    for d in reversed(doms):
        strides.append(acc)
        acc *= len(d)
    strides.reverse()
    ev = _Evaluator(t, bound)
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        cols = {v: d[(idx // st) % len(d)] for v, d, st in zip(free, doms, strides)}
        r = np.broadcast_to(np.asarray(ev.run(t, cols), dtype=bool), idx.shape)
        if not r.all():
            i = int(np.argmin(r))
            store = {v.name: _py(cols[v][i]) for v in free}
            return BoundedVerdict("invalid", bound, store, exhaustive)
    return BoundedVerdict("valid", bound, None, exhaustive)


# ------------------------------------------------------------ SMT-LIB text

_SIMPLE = re.compile(r"^[A-Za-z~!$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*$")
_RESERVED = {"par", "NUMERAL", "DECIMAL", "STRING", "_", "!", "as", "let", "exists",
             "forall", "match", "assert", "check-sat", "declare-fun", "define-fun"}

_OPS = {"and": "and", "or": "or", "not": "not", "implies": "=>", "iff": "=", "eq": "=",
        "distinct": "distinct", "lt": "<", "plus": "+", "minus": "-", "neg": "-",
        "ite": "ite", "select": "select", "even": "even"}

EVEN_DEF = "(define-fun even ((x Int)) Bool (= (mod x 2) 0))"


def symbol(name: str) -> str:
    if _SIMPLE.match(name) and name not in _RESERVED:
        return name
    if "|" in name or "\\" in name:
        raise ProverError(f"symbol {name!r} cannot be quoted")
    return f"|{name}|"


def smt_sort(bt) -> str:
    if bt == "formula" or isinstance(bt, BoolType):
        return "Bool"
    if isinstance(bt, IntType):
        return "Int"
    if isinstance(bt, MapType):
        return f"(Array {smt_sort(bt.index)} {smt_sort(bt.element)})"
    raise ProverError(f"no SMT-LIB sort for {bt!r}")


def to_smtlib(t: Term) -> str:
    """Tree print of a term (shared nodes are printed each time)."""
    out: List[str] = []
    stack: List[object] = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            out.append(x)
            continue
        lab = x.label
        if lab == "var":
            out.append(symbol(x.name))
        elif lab == "literal_int":
            out.append(str(x.payload) if x.payload >= 0 else f"(- {-x.payload})")
        elif lab in ("true", "false", "trueTerm", "falseTerm"):
            out.append(lab)
        elif lab in ("forall", "exists"):
            b = x.children[0]
            out.append(f"({lab} (({symbol(b.name)} {smt_sort(b.var_type)})) ")
            stack.append(")")
            stack.append(x.children[1])
        else:
            op = _OPS.get(lab, None)
            if op is None:
                op = symbol(lab)
            if not x.children:
                out.append(op)
                continue
            out.append("(" + op)
            stack.append(")")
            for c in reversed(x.children):
                stack.append(c)
                stack.append(" ")
    return "".join(out)


def _symbols(terms: Iterable[Term]):
    vs, fs = set(), set()
    uses_even = quant = arrays = False
    for t in terms:
        fv = _free_vars(t)
        vs |= fv
        for x in postorder(t):
            if x.label == "even":
                uses_even = True
            elif x.label in ("forall", "exists"):
                quant = True
            elif x.label == "select":
                arrays = True
            elif x.label in ("trueTerm", "falseTerm"):
                fs.add(x.label)
            elif x.label not in INTERPRETED:
                fs.add(x.label)
            if x.is_var and isinstance(x.var_type, MapType):
                arrays = True
    return vs, fs, uses_even, quant, arrays


def _declaration(s: Session, name: str) -> str:
    if name in ("trueTerm", "falseTerm"):
        return f"(declare-fun {name} () Bool)"
    sig = s.func_sigs.get(name)
    if sig is None:
        raise ProverError(f"undeclared symbol {name}")
    params, res = sig
    args = " ".join(smt_sort(p) for p in params)
    return f"(declare-fun {symbol(name)} ({args}) {smt_sort(res)})"


def _var_declaration(v: Term) -> str:
    return f"(declare-fun {symbol(v.name)} () {smt_sort(v.var_type)})"


def logic_for(terms: Sequence[Term]) -> str:
    _, _, _, quant, arrays = _symbols(terms)
    return ("" if quant else "QF_") + ("AUFLIA" if arrays else "UFLIA")


def _prepared(t: Term, cap: int, names: FreshNames, k: int = -1) -> Tuple[List[Term], Term]:
    """Split ``t`` into (definitions, body) when its print is too large."""
    if cap >= 0 and print_size(t) > cap:
        st = UnshareStats()
        eliminate_sharing(t, UnshareConfig(k=k), st, names)
        return list(st.definitions), st.body
    return [], t


def emit_smtlib(goal: Term, hypotheses: Sequence[Term] = (), unshare_cap: int = DEFAULT_UNSHARE_CAP,
                unshare_k: int = -1) -> str:
    """A standalone satisfiability query for ``hypotheses and not goal``;
    unsat means the goal is valid.  Output depends only on the terms."""
    s = goal.session
    taken = set()
    for t in list(hypotheses) + [goal]:
        taken |= {v.name for v in _free_vars(t)}
    names = FreshNames(0, taken)
    hyp_parts = [_prepared(h, unshare_cap, names, unshare_k) for h in hypotheses]
    gdefs, gbody = _prepared(goal, unshare_cap, names, unshare_k)
    asserted: List[Term] = []
    for defs, body in hyp_parts:
        asserted.extend(defs)
        asserted.append(body)
    asserted.extend(gdefs)
    negated = s.Not(gbody)
    everything = asserted + [negated]
    vs, fs, uses_even, _, _ = _symbols(everything)
    lines = [f"(set-logic {logic_for(everything)})"]
    for f in sorted(fs):
        lines.append(_declaration(s, f))
    for v in sorted(vs, key=lambda v: v.name):
        lines.append(_var_declaration(v))
    if uses_even:
        lines.append(EVEN_DEF)
    for a in asserted:
        lines.append(f"(assert {to_smtlib(a)})")
    lines.append(f"(assert {to_smtlib(negated)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ sessions


class _Level:
    __slots__ = ("kind", "term", "declared")

    def __init__(self, kind, term=None):
        self.kind = kind  # "assume" or "frame"
        self.term = term
        self.declared: set = set()


class ExternalSolver:
    """Persistent solver process speaking SMT-LIB2 on stdin/stdout."""

    def __init__(self, command: Sequence[str], timeout: float = 60.0):
        self.command = list(command)
        self.timeout = timeout
        try:
            self.proc = subprocess.Popen(self.command, stdin=subprocess.PIPE,
                                         stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                                         text=True, bufsize=1)
        except OSError as e:
            raise ProverError(f"cannot start solver {' '.join(self.command)}: {e}") from e

    def send(self, line: str):
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise ProverError(f"solver process died: {e}") from e

    def check(self) -> str:
        self.send("(check-sat)")
        ans = self.proc.stdout.readline()
        if not ans:
            err = self.proc.stderr.read() if self.proc.poll() is not None else ""
            raise ProverError(f"solver closed its output {err.strip()}")
        ans = ans.strip()
        if ans.startswith("(error"):
            raise ProverError(f"solver error: {ans}")
        return ans

    def close(self):
        if self.proc.poll() is None:
            try:
                self.proc.stdin.write("(exit)\n")
                self.proc.stdin.flush()
            except OSError:
                pass
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()


class ProverSession:
    """assume / retract / push / pop / is_valid.

    Every assumption opens its own solver scope so ``retract`` can undo
    it; hypotheses are therefore sent once and stay active for all later
    queries in their scope."""

    def __init__(self, backend: str = "internal", bound: int = DEFAULT_BOUND,
                 command: Optional[Sequence[str]] = None, max_stores: int = DEFAULT_MAX_STORES,
                 unshare_cap: int = DEFAULT_UNSHARE_CAP, record: Optional[bool] = None):
        if backend not in ("internal", "external"):
            raise ValueError(f"unknown backend {backend}")
        self.backend = backend
        self.bound = bound
        self.max_stores = max_stores
        self.unshare_cap = unshare_cap
        self.levels: List[_Level] = []
        self.base_declared: set = set()
        self.query_count = 0
        self.record = backend == "external" if record is None else record
        self.transcript: List[str] = []
        self.solver = None
        self._names = FreshNames()
        if backend == "external":
            if not command:
                raise ProverError("external backend needs a solver command")
            self.solver = ExternalSolver(command)
        self._emit("(set-option :print-success false)")
        self._emit(EVEN_DEF)

    # -- plumbing
    def _emit(self, line: str):
        if self.record:
            self.transcript.append(line)
        if self.solver is not None:
            self.solver.send(line)

    def _declared(self) -> set:
        out = set(self.base_declared)
        for lv in self.levels:
            out |= lv.declared
        return out

    def _declare_for(self, terms: Sequence[Term], into: set):
        if not (self.record or self.solver):
            return
        have = self._declared()
        vs, fs, _, _, _ = _symbols(terms)
        s = terms[0].session
        for f in sorted(fs):
            if ("f", f) not in have:
                self._emit(_declaration(s, f))
                into.add(("f", f))
        for v in sorted(vs, key=lambda v: v.name):
            if ("v", v.name) not in have:
                self._emit(_var_declaration(v))
                into.add(("v", v.name))

    def _open(self, kind, term=None) -> _Level:
        lv = _Level(kind, term)
        self.levels.append(lv)
        self._emit("(push 1)")
        return lv

    def _close(self, n: int):
        for _ in range(n):
            self.levels.pop()
        self._emit(f"(pop {n})")

    # -- interface
    @property
    def assumptions(self) -> List[Term]:
        return [lv.term for lv in self.levels if lv.kind == "assume"]

    def assume(self, f: Term):
        if not f.is_formula:
            raise SortError("assumptions must be formulas")
        lv = self._open("assume", f)
        if self.record or self.solver:
            defs, body = _prepared(f, self.unshare_cap, self._names)
            self._declare_for(defs + [body], lv.declared)
            for d in defs:
                self._emit(f"(assert {to_smtlib(d)})")
            self._emit(f"(assert {to_smtlib(body)})")

    def retract(self):
        if not self.levels or self.levels[-1].kind != "assume":
            raise ProverError("retract without a matching assume")
        self._close(1)

    def push(self):
        self._open("frame")

    def pop(self):
        n = 0
        for lv in reversed(self.levels):
            n += 1
            if lv.kind == "frame":
                self._close(n)
                return
        raise ProverError("pop without a matching push")

    def is_valid(self, f: Term) -> BoundedVerdict:
        if not f.is_formula:
            raise SortError("validity needs a formula")
        self.query_count += 1
        if self.record or self.solver:
            defs, body = _prepared(f, self.unshare_cap, self._names)
            lv = _Level("query")
            self._emit("(push 1)")
            self.levels.append(lv)
            try:
                neg = f.session.Not(body)
                self._declare_for(defs + [neg], lv.declared)
                for d in defs:
                    self._emit(f"(assert {to_smtlib(d)})")
                self._emit(f"(assert {to_smtlib(neg)})")
                if self.solver is not None:
                    if self.record:
                        self.transcript.append("(check-sat)")
                    ans = self.solver.check()
                else:
                    self._emit("(check-sat)")
                    ans = None
            finally:
                self.levels.pop()
                self._emit("(pop 1)")
            if ans is not None:
                if ans == "unsat":
                    return BoundedVerdict("valid", self.bound, exhaustive=True)
                if ans == "sat":
                    return BoundedVerdict("invalid", self.bound, exhaustive=True)
                return BoundedVerdict("unknown", self.bound, reason=ans)
        s = f.session
        goal = s.Implies(s.And(self.assumptions), f) if self.assumptions else f
        return bounded_validity(goal, self.bound, self.max_stores)

    def close(self):
        if self.solver is not None:
            self.solver.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# ------------------------------------------------------------ reading back


def _sexprs(text: str):
    toks = re.findall(r"\|[^|]*\||\(|\)|;[^\n]*|[^\s()]+", text)
    stack: List[list] = [[]]
    for tk in toks:
        if tk.startswith(";"):
            continue
        if tk == "(":
            stack.append([])
        elif tk == ")":
            if len(stack) == 1:
                raise ProverError("unbalanced ')' in SMT-LIB input")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tk[1:-1] if tk.startswith("|") else tk)
    if len(stack) != 1:
        raise ProverError("unbalanced '(' in SMT-LIB input")
    return stack[0]


def _btype(sx):
    if sx == "Int":
        return INT
    if sx == "Bool":
        return BOOL
    if isinstance(sx, list) and len(sx) == 3 and sx[0] == "Array":
        return MapType(_btype(sx[1]), _btype(sx[2]))
    raise ProverError(f"unsupported sort {sx!r}")


_FORMULA_HEADS = {"not", "and", "or", "=>", "=", "distinct", "<", ">", "<=", ">=",
                  "forall", "exists", "even"}


@dataclass
class SmtScript:
    logic: Optional[str] = None
    variables: Dict[str, object] = field(default_factory=dict)
    functions: Dict[str, tuple] = field(default_factory=dict)
    asserts: List[Term] = field(default_factory=list)


class _Reader:
    def __init__(self, s: Session, script: SmtScript):
        self.s = s
        self.sc = script

    def var(self, name, bound):
        if name in bound:
            return bound[name]
        if name not in self.sc.variables:
            raise ProverError(f"undeclared symbol {name}")
        return self.s.var(name, self.sc.variables[name])

    def is_formula(self, sx, bound) -> bool:
        if isinstance(sx, list):
            return bool(sx) and sx[0] in _FORMULA_HEADS
        if sx in ("true", "false"):
            return True
        v = bound.get(sx)
        if v is not None:
            return v.is_formula
        return self.sc.variables.get(sx) == "formula"

    def formula(self, sx, bound) -> Term:
        s = self.s
        if not isinstance(sx, list):
            if sx == "true":
                return s.top
            if sx == "false":
                return s.bottom
            t = self.var(sx, bound)
            if t.is_formula:
                return t
            return s.Eq(t, s.true_term())
        head, args = sx[0], sx[1:]
        if head == "not":
            return s.Not(self.formula(args[0], bound))
        if head == "and":
            return s.And([self.formula(a, bound) for a in args])
        if head == "or":
            return s.Or([self.formula(a, bound) for a in args])
        if head == "=>":
            *ante, cons = args
            r = self.formula(cons, bound)
            for a in reversed(ante):
                r = s.Implies(self.formula(a, bound), r)
            return r
        if head == "=":
            a, b = args
            if self.is_formula(a, bound) or self.is_formula(b, bound):
                return s.Iff(self.formula(a, bound), self.formula(b, bound))
            return s.Eq(self.term(a, bound), self.term(b, bound))
        if head == "distinct":
            a, b = args
            return s.mk("distinct", (self.term(a, bound), self.term(b, bound)))
        if head in ("<", ">", "<=", ">="):
            a, b = (self.term(x, bound) for x in args)
            if head == "<":
                return s.mk("lt", (a, b))
            if head == ">":
                return s.mk("lt", (b, a))
            if head == "<=":
                return s.Not(s.mk("lt", (b, a)))
            return s.Not(s.mk("lt", (a, b)))
        if head in ("forall", "exists"):
            (name, sort), = args[0]
            v = s.var(name, _btype(sort))
            return s.mk(head, (v, self.formula(args[1], {**bound, name: v})))
        if head == "even":
            return s.mk("even", (self.term(args[0], bound),))
        t = self.term(sx, bound)
        if t.is_formula:
            return t
        return s.Eq(t, s.true_term())

    def term(self, sx, bound) -> Term:
        s = self.s
        if not isinstance(sx, list):
            if re.fullmatch(r"[0-9]+", sx):
                return s.int_lit(int(sx))
            if sx == "trueTerm":
                return s.true_term()
            if sx == "falseTerm":
                return s.false_term()
            if sx in ("true", "false"):
                return s.mk("ite", (self.formula(sx, bound), s.true_term(), s.false_term()))
            return self.var(sx, bound)
        head, args = sx[0], sx[1:]
        if head == "-" and len(args) == 1:
            if not isinstance(args[0], list) and args[0].isdigit():
                return s.int_lit(-int(args[0]))
            return s.mk("neg", (self.term(args[0], bound),))
        if head in ("+", "-"):
            lab = "plus" if head == "+" else "minus"
            r = self.term(args[0], bound)
            for a in args[1:]:
                r = s.mk(lab, (r, self.term(a, bound)))
            return r
        if head == "ite":
            return s.mk("ite", (self.formula(args[0], bound), self.term(args[1], bound),
                                self.term(args[2], bound)))
        if head == "select":
            return s.mk("select", (self.term(args[0], bound), self.term(args[1], bound)))
        if head in _FORMULA_HEADS:
            return s.mk("ite", (self.formula(sx, bound), s.true_term(), s.false_term()))
        if head not in self.sc.functions:
            raise ProverError(f"undeclared function {head}")
        return s.mk(head, [self.term(a, bound) for a in args])


def parse_smtlib(text: str, session: Session) -> SmtScript:
    """Read the subset of SMT-LIB2 that :func:`emit_smtlib` writes."""
    sc = SmtScript()
    rd = _Reader(session, sc)
    for cmd in _sexprs(text):
        if not isinstance(cmd, list) or not cmd:
            raise ProverError(f"unexpected token {cmd!r}")
        head = cmd[0]
        if head == "set-logic":
            sc.logic = cmd[1]
        elif head in ("check-sat", "set-option", "set-info", "exit", "push", "pop"):
            continue
        elif head == "define-fun":
            if cmd[1] != "even":
                raise ProverError(f"unsupported definition {cmd[1]}")
        elif head == "declare-fun":
            name, params, res = cmd[1], cmd[2], cmd[3]
            if name in ("trueTerm", "falseTerm"):
                continue
            if params:
                ptypes = [_btype(p) for p in params]
                rtype = _btype(res)
                sc.functions[name] = (tuple(ptypes), rtype)
                if not session.is_defined(name):
                    session.define_function(name, ptypes, rtype)
            else:
                bt = _btype(res)
                sc.variables[name] = "formula" if name.startswith("$def") else bt
        elif head == "assert":
            sc.asserts.append(rd.formula(cmd[1], {}))
        else:
            raise ProverError(f"unsupported command {head}")
    return sc
