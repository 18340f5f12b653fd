"""Program and formula generators for experiments and tests.

Everything takes a ``random.Random`` (or a seed), so runs are repeatable.
Programs come back as Boogie source text; feeding them through the parser
keeps the generators honest about the concrete syntax.
"""

from __future__ import annotations

import dataclasses
import random
from typing import List, Optional, Sequence

from .ast import Assume, BoolLit, LabeledStatement, Program
from .smt import Session, Term


def _rng(r) -> random.Random:
    return r if isinstance(r, random.Random) else random.Random(r)


def diamonds(n: int, name: str = "Diamonds") -> str:
    """``assert p0(u)`` followed by n diamonds; diamond k either applies e_k
    or f_k to u and ends with ``assert p_k(u)``."""
    if n < 1:
        raise ValueError("need at least one diamond")
    lines = [f"function p0(int) returns (bool);"]
    for k in range(1, n + 1):
        lines.append(f"function e{k}(int) returns (int);")
        lines.append(f"function f{k}(int) returns (int);")
        lines.append(f"function p{k}(int) returns (bool);")
    lines.append(f"procedure {name}(u : int) returns () {{")
    lines.append("  A0: assert p0(u); goto E1, F1;")
    for k in range(1, n + 1):
        lines.append(f"  E{k}: u := e{k}(u); goto A{k};")
        lines.append(f"  F{k}: u := f{k}(u); goto A{k};")
        nxt = f"goto E{k + 1}, F{k + 1};" if k < n else "return;"
        lines.append(f"  A{k}: assert p{k}(u); {nxt}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def diamond_trie_edges(n: int) -> int:
    """Closed form for the trie of the wp-with-assignments query after the
    first assertion: |q_{n-1}| = 4, |q_{k-1}| = 2|q_k| + 4."""
    return 2 ** (n + 2) - 4


# ------------------------------------------------------------ booleans


def random_bool_expr(r: random.Random, names: Sequence[str], depth: int = 2) -> str:
    if depth <= 0 or r.random() < 0.35:
        x = r.random()
        if x < 0.05:
            return r.choice(["true", "false"])
        v = r.choice(names)
        return f"!{v}" if x < 0.4 else v
    op = r.choice(["&&", "||", "==", "!=", "!"])
    if op == "!":
        return f"!({random_bool_expr(r, names, depth - 1)})"
    a = random_bool_expr(r, names, depth - 1)
    b = random_bool_expr(r, names, depth - 1)
    return f"({a} {op} {b})"


def random_boolean_program(seed, nvars: int = 3, nblocks: int = 4, max_stmts: int = 3,
                           p_assume: float = 0.25, p_assert: float = 0.3,
                           depth: int = 2, name: str = "P") -> str:
    """An acyclic program over boolean inputs ``b0..``: blocks jump only
    forward, so every flowgraph is a dag."""
    r = _rng(seed)
    names = [f"b{i}" for i in range(nvars)]
    params = ", ".join(f"{v} : bool" for v in names)
    out = [f"procedure {name}({params}) returns () {{"]
    for i in range(nblocks):
        stmts = []
        for _ in range(r.randint(1, max_stmts)):
            x = r.random()
            e = random_bool_expr(r, names, depth)
            if x < p_assume:
                stmts.append(f"assume {e};")
            elif x < p_assume + p_assert:
                stmts.append(f"assert {e};")
            else:
                stmts.append(f"{r.choice(names)} := {e};")
        later = list(range(i + 1, nblocks))
        if not later or r.random() < 0.15:
            stmts.append("return;")
        else:
            k = min(len(later), r.choice([1, 2, 2]))
            targets = sorted(r.sample(later, k))
            stmts.append("goto " + ", ".join(f"B{t}" for t in targets) + ";")
        out.append(f"  B{i}: " + " ".join(stmts))
    out.append("}")
    return "\n".join(out) + "\n"


def inject_assume_false(p: Program, seed, count: int = 1) -> Program:
    """Insert ``count`` copies of ``assume false`` at random body positions.
    A label on the displaced statement moves to the new one, so jumps still
    pass through it."""
    r = _rng(seed)
    body = list(p.body)
    for _ in range(count):
        i = r.randrange(len(body))
        cur = body[i]
        pos = getattr(cur.stmt, "pos", None)
        bug = LabeledStatement(cur.label, Assume(BoolLit(False, pos), pos))
        body[i:i + 1] = [bug, LabeledStatement(None, cur.stmt)]
    return dataclasses.replace(p, body=tuple(body))


# ------------------------------------------------------------ formulas


def random_formula_dag(s: Session, seed, nvars: int = 4, size: int = 10,
                       names: Optional[Sequence[str]] = None) -> Term:
    """A formula over propositional variables built by combining random earlier
    nodes, so subformulas end up shared."""
    r = _rng(seed)
    names = list(names) if names is not None else [f"x{i}" for i in range(nvars)]
    pool: List[Term] = [s.prop(v) for v in names]
    for _ in range(size):
        op = r.choice(["and", "or", "not", "implies", "iff", "and", "or"])
        a, b = r.choice(pool), r.choice(pool)
        if op == "not":
            t = s.Not(a)
        elif op == "and":
            t = s.And(a, b)
        elif op == "or":
            t = s.Or(a, b)
        elif op == "implies":
            t = s.Implies(a, b)
        else:
            t = s.Iff(a, b)
        pool.append(t)
    tail = pool[-3:] if len(pool) >= 3 else pool
    return s.Or(tail) if r.random() < 0.5 else s.And(tail)
