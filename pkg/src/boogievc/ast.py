"""Abstract syntax for core Boogie.

Nodes are frozen dataclasses. Equality is structural and ignores source
positions, so two parses of the same text compare equal. Code that needs
per-occurrence bookkeeping (type maps, symbol tables) keys on ``id()``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


def _pos():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class BoolType:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class IntType:
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class MapType:
    index: "BoogieType"
    element: "BoogieType"

    def __post_init__(self):
        if not isinstance(self.index, (BoolType, IntType)):
            raise ValueError("map index type must be primitive")

    def __str__(self) -> str:
        return f"[{self.index}]{self.element}"


BoogieType = Union[BoolType, IntType, MapType]

BOOL = BoolType()
INT = IntType()


@dataclass(frozen=True)
class VariableDecl:
    name: str
    type: BoogieType
    pos: Optional[Pos] = _pos()

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")


# ---------------------------------------------------------- expressions

@dataclass(frozen=True)
class Quantified:
    kind: str  # "forall" | "exists"
    var: VariableDecl
    body: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Unary:
    op: str  # "!" | "-"
    operand: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Binary:
    op: str  # "+" "-" "<" "==" "&&" "||"
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Select:
    map: "Expr"
    index: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Call:
    """Function application; an extension over the core grammar."""
    func: str
    args: Tuple["Expr", ...]
    pos: Optional[Pos] = _pos()


Expr = Union[Quantified, Unary, Binary, Select, Var, BoolLit, IntLit, Call]

BINARY_OPS = ("+", "-", "<", "==", "&&", "||")
UNARY_OPS = ("!", "-")


def children(e: Expr) -> Tuple[Expr, ...]:
    if isinstance(e, Quantified):
        return (e.body,)
    if isinstance(e, Unary):
        return (e.operand,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, Select):
        return (e.map, e.index)
    if isinstance(e, Call):
        return e.args
    return ()


def walk(e: Expr):
    """Pre-order traversal of an expression tree."""
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(reversed(children(x)))


def free_vars(e: Expr) -> set:
    out: set = set()

    def go(x, bound):
        if isinstance(x, Var):
            if x.name not in bound:
                out.add(x.name)
        elif isinstance(x, Quantified):
            go(x.body, bound | {x.var.name})
        else:
            for c in children(x):
                go(c, bound)

    go(e, frozenset())
    return out


def rename_vars(e: Expr, mapping) -> Expr:
    """Replace free occurrences of variables by name; ``mapping`` is a dict
    or a callable returning the new name (or None to keep it)."""
    look = mapping.get if isinstance(mapping, dict) else mapping

    def go(x, bound):
        if isinstance(x, Var):
            if x.name in bound:
                return x
            new = look(x.name)
            return x if new is None else Var(new, x.pos)
        if isinstance(x, Quantified):
            return Quantified(x.kind, x.var, go(x.body, bound | {x.var.name}), x.pos)
        if isinstance(x, Unary):
            return Unary(x.op, go(x.operand, bound), x.pos)
        if isinstance(x, Binary):
            return Binary(x.op, go(x.left, bound), go(x.right, bound), x.pos)
        if isinstance(x, Select):
            return Select(go(x.map, bound), go(x.index, bound), x.pos)
        if isinstance(x, Call):
            return Call(x.func, tuple(go(a, bound) for a in x.args), x.pos)
        return x

    return go(e, frozenset())


# ----------------------------------------------------------- statements

@dataclass(frozen=True)
class Assign:
    lhs: str
    rhs: Expr
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Assume:
    expr: Expr
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Assert:
    expr: Expr
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Goto:
    targets: Tuple[str, ...]
    pos: Optional[Pos] = _pos()

    def __post_init__(self):
        if not self.targets:
            raise ValueError("goto needs at least one target")


@dataclass(frozen=True)
class Return:
    pos: Optional[Pos] = _pos()


Statement = Union[Assign, Assume, Assert, Goto, Return]


@dataclass(frozen=True)
class LabeledStatement:
    label: Optional[str]
    stmt: Statement


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    params: Tuple[VariableDecl, ...]
    result: BoogieType
    pos: Optional[Pos] = _pos()


@dataclass(frozen=True)
class Program:
    name: str
    args: Tuple[VariableDecl, ...]
    results: Tuple[VariableDecl, ...]
    locals: Tuple[VariableDecl, ...]
    body: Tuple[LabeledStatement, ...]
    functions: Tuple[FunctionDecl, ...] = ()
    axioms: Tuple[Expr, ...] = ()
    pos: Optional[Pos] = _pos()

    @property
    def statements(self) -> Tuple[Statement, ...]:
        return tuple(ls.stmt for ls in self.body)

    def declarations(self) -> Tuple[VariableDecl, ...]:
        return self.args + self.results + self.locals

    def label_index(self) -> dict:
        return {ls.label: i for i, ls in enumerate(self.body) if ls.label is not None}


def stmt_exprs(s: Statement) -> Tuple[Expr, ...]:
    if isinstance(s, Assign):
        return (s.rhs,)
    if isinstance(s, (Assume, Assert)):
        return (s.expr,)
    return ()


def stmt_reads(s: Statement) -> set:
    out: set = set()
    for e in stmt_exprs(s):
        out |= free_vars(e)
    return out


def stmt_writes(s: Statement) -> set:
    return {s.lhs} if isinstance(s, Assign) else set()
