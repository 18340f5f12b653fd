"""Parsing, printing, typechecking and symbol resolution for core Boogie.

Precedence, loosest first: quantifier body, ``||``, ``&&``, ``==``/``!=``,
``<``/``>``, ``+``/``-``, select, unary. ``!=`` and ``>`` are sugar and
are desugared during parsing.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional

from .ast import (
    BOOL, INT, Assert, Assign, Assume, Binary, BoolLit, BoolType, Call,
    FunctionDecl, Goto, IntLit, IntType, LabeledStatement, MapType, Pos,
    Program, Quantified, Return, Select, Unary, Var, VariableDecl, children,
    stmt_exprs,
)
from .errors import ParseError, SymbolError, TypeCheckError, TypeDiagnostic

# built-in uninterpreted predicates available without a declaration
BUILTIN_FUNCTIONS = {"even": FunctionDecl("even", (VariableDecl("x", INT),), BOOL)}

RESERVED_PREFIX = "$def"

KEYWORDS = {
    "procedure", "returns", "var", "assume", "assert", "goto", "return",
    "true", "false", "forall", "exists", "int", "bool", "function", "axiom",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<id>[A-Za-z_$'#.~^?\\][A-Za-z0-9_$'#.~^?\\@-]*)
  | (?P<op>:=|::|==|!=|&&|\|\||[-+<>!()\[\]{},;:])
""", re.VERBOSE)

# identifiers may contain '-' only in the reserved passive form "v@-1"
_PASSIVE_NAME = re.compile(r"^[^@]+@-?[0-9]+$")


class Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.pos})"


def tokenize(source: str) -> List[Token]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise ParseError(f"unexpected character {source[i]!r}", Pos(line, col))
        kind = m.lastgroup
        text = m.group()
        if kind == "id":
            # a '-' is only legal right after '@'; otherwise split the token
            j = 1
            while j < len(text):
                if text[j] == "-" and text[j - 1] != "@":
                    break
                j += 1
            text = text[:j]
            if text in KEYWORDS:
                kind = "kw"
        if kind not in ("ws", "comment"):
            toks.append(Token(kind, text, Pos(line, col)))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        i += len(text)
    toks.append(Token("eof", "", Pos(line, col)))
    return toks


class Parser:
    def __init__(self, source: str, allow_reserved: bool = False):
        self.toks = tokenize(source)
        self.i = 0
        self.allow_reserved = allow_reserved

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{msg}, found {found}", t.pos)

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "id":
            self.fail("expected identifier")
        if not self.allow_reserved:
            if "@" in t.text:
                raise ParseError(f"'@' is reserved in identifiers: {t.text}", t.pos)
            if t.text.startswith(RESERVED_PREFIX):
                raise ParseError(f"identifier {t.text} uses the reserved prefix {RESERVED_PREFIX}", t.pos)
        elif "@" in t.text and not _PASSIVE_NAME.match(t.text):
            raise ParseError(f"malformed versioned identifier {t.text}", t.pos)
        return self.advance()

    # -- types
    def type_(self):
        if self.at("int"):
            self.advance()
            return INT
        if self.at("bool"):
            self.advance()
            return BOOL
        if self.at("["):
            pos = self.advance().pos
            idx = self.type_()
            if not isinstance(idx, (BoolType, IntType)):
                raise ParseError("map index type must be bool or int", pos)
            self.expect("]")
            return MapType(idx, self.type_())
        self.fail("expected type")

    def typed_var(self) -> VariableDecl:
        t = self.ident()
        self.expect(":")
        return VariableDecl(t.text, self.type_(), t.pos)

    def var_list(self) -> tuple:
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append(self.typed_var())
            while self.at(","):
                self.advance()
                out.append(self.typed_var())
        self.expect(")")
        return tuple(out)

    # -- expressions
    def expr(self):
        if self.at("forall") or self.at("exists"):
            return self.quantifier()
        return self.or_expr()

    def quantifier(self):
        t = self.advance()
        decl = self.typed_var()
        self.expect("::")
        return Quantified(t.text, decl, self.expr(), t.pos)

    def _left_assoc(self, sub, ops):
        left = sub()
        while self.tok.kind == "op" and self.tok.text in ops:
            t = self.advance()
            right = sub()
            left = self._binary(t, left, right)
        return left

    @staticmethod
    def _binary(t, left, right):
        pos = t.pos
        if t.text == "!=":
            return Unary("!", Binary("==", left, right, pos), pos)
        if t.text == ">":
            return Binary("<", right, left, pos)
        return Binary(t.text, left, right, pos)

    def or_expr(self):
        return self._left_assoc(self.and_expr, ("||",))

    def and_expr(self):
        return self._left_assoc(self.eq_expr, ("&&",))

    def eq_expr(self):
        return self._left_assoc(self.cmp_expr, ("==", "!="))

    def cmp_expr(self):
        return self._left_assoc(self.add_expr, ("<", ">"))

    def add_expr(self):
        return self._left_assoc(self.select_expr, ("+", "-"))

    def select_expr(self):
        e = self.unary_expr()
        while self.at("["):
            t = self.advance()
            idx = self.expr()
            self.expect("]")
            e = Select(e, idx, t.pos)
        return e

    def unary_expr(self):
        if self.at("!") or self.at("-"):
            t = self.advance()
            return Unary(t.text, self.unary_expr(), t.pos)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return IntLit(int(t.text), t.pos)
        if self.at("true") or self.at("false"):
            self.advance()
            return BoolLit(t.text == "true", t.pos)
        if self.at("forall") or self.at("exists"):
            return self.quantifier()
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "id":
            self.ident()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                return Call(t.text, tuple(args), t.pos)
            return Var(t.text, t.pos)
        self.fail("expected expression")

    # -- statements and program
    def statement(self) -> LabeledStatement:
        label = None
        if self.tok.kind == "id" and self.toks[self.i + 1].text == ":" and self.toks[self.i + 1].kind == "op":
            label = self.ident().text
            self.advance()
        t = self.tok
        if self.at("assume"):
            self.advance()
            s = Assume(self.expr(), t.pos)
        elif self.at("assert"):
            self.advance()
            s = Assert(self.expr(), t.pos)
        elif self.at("goto"):
            self.advance()
            targets = [self.ident().text]
            while self.at(","):
                self.advance()
                targets.append(self.ident().text)
            s = Goto(tuple(targets), t.pos)
        elif self.at("return"):
            self.advance()
            s = Return(t.pos)
        elif t.kind == "id":
            lhs = self.ident()
            self.expect(":=")
            s = Assign(lhs.text, self.expr(), lhs.pos)
        else:
            self.fail("expected statement")
        self.expect(";")
        return LabeledStatement(label, s)

    def function_decl(self) -> FunctionDecl:
        pos = self.expect("function").pos
        name = self.ident().text
        self.expect("(")
        params = []
        k = 0
        while not self.at(")"):
            if params:
                self.expect(",")
            if self.tok.kind == "id" and self.toks[self.i + 1].text == ":":
                params.append(self.typed_var())
            else:
                p = self.tok.pos
                params.append(VariableDecl(f"_{k}", self.type_(), p))
            k += 1
        self.expect(")")
        self.expect("returns")
        self.expect("(")
        if self.tok.kind == "id" and self.toks[self.i + 1].text == ":":
            result = self.typed_var().type
        else:
            result = self.type_()
        self.expect(")")
        self.expect(";")
        return FunctionDecl(name, tuple(params), result, pos)

    def program(self) -> Program:
        functions, axioms = [], []
        while self.at("function") or self.at("axiom"):
            if self.at("function"):
                functions.append(self.function_decl())
            else:
                self.advance()
                axioms.append(self.expr())
                self.expect(";")
        pos = self.expect("procedure").pos
        name = self.ident()
        args = self.var_list()
        self.expect("returns")
        results = self.var_list()
        self.expect("{")
        local_decls = []
        while self.at("var"):
            self.advance()
            local_decls.append(self.typed_var())
            self.expect(";")
        body = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("expected '}'")
            body.append(self.statement())
        close = self.expect("}")
        if self.tok.kind != "eof":
            self.fail("expected end of input")
        if not body or not isinstance(body[-1].stmt, Return):
            body.append(LabeledStatement(None, Return(close.pos)))
        _check_labels(body)
        return Program(name.text, args, results, tuple(local_decls), tuple(body),
                       tuple(functions), tuple(axioms), name.pos)


def _check_labels(body):
    seen = {}
    for ls in body:
        if ls.label is None:
            continue
        if ls.label in seen:
            raise ParseError(f"duplicate label {ls.label}", ls.stmt.pos)
        seen[ls.label] = ls
    for ls in body:
        if isinstance(ls.stmt, Goto):
            for t in ls.stmt.targets:
                if t not in seen:
                    raise ParseError(f"goto target {t} is not a declared label", ls.stmt.pos)


def parse_program(source: str, allow_reserved: bool = False) -> Program:
    """Parse core-Boogie text. ``allow_reserved`` admits the versioned
    names produced by passivation (``v@3``) and ``$def`` names."""
    return Parser(source, allow_reserved).program()


def parse_expr(source: str, allow_reserved: bool = False):
    p = Parser(source, allow_reserved)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("expected end of expression")
    return e


# ------------------------------------------------------------------ printer

_PREC = {"||": 1, "&&": 2, "==": 3, "<": 4, "+": 5, "-": 5}
_SELECT_PREC = 6
_UNARY_PREC = 7
_ATOM_PREC = 8


def _prec(e) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Select):
        return _SELECT_PREC
    if isinstance(e, Unary):
        return _UNARY_PREC
    return _ATOM_PREC  # quantifiers print parenthesized


def _wrap(e, needed: int) -> str:
    s = print_expr(e)
    return s if _prec(e) >= needed else f"({s})"


def print_expr(e) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, IntLit):
        if e.value < 0:
            raise ValueError("negative literals have no concrete syntax; use unary minus")
        return str(e.value)
    if isinstance(e, Call):
        return f"{e.func}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, Quantified):
        return f"({e.kind} {e.var.name}: {e.var.type} :: {print_expr(e.body)})"
    if isinstance(e, Unary):
        return e.op + _wrap(e.operand, _UNARY_PREC)
    if isinstance(e, Select):
        return f"{_wrap(e.map, _SELECT_PREC)}[{print_expr(e.index)}]"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    raise TypeError(f"not an expression: {e!r}")


def print_statement(s) -> str:
    if isinstance(s, Assign):
        return f"{s.lhs} := {print_expr(s.rhs)};"
    if isinstance(s, Assume):
        return f"assume {print_expr(s.expr)};"
    if isinstance(s, Assert):
        return f"assert {print_expr(s.expr)};"
    if isinstance(s, Goto):
        return f"goto {', '.join(s.targets)};"
    if isinstance(s, Return):
        return "return;"
    raise TypeError(f"not a statement: {s!r}")


def _decls(ds) -> str:
    return ", ".join(f"{d.name}: {d.type}" for d in ds)


def print_program(p: Program) -> str:
    head = []
    for f in p.functions:
        head.append(f"function {f.name}({_decls(f.params)}) returns ({f.result});")
    for a in p.axioms:
        head.append(f"axiom {print_expr(a)};")
    sig = f"procedure {p.name}({_decls(p.args)}) returns ({_decls(p.results)})"
    lines = []
    for ls in p.body:
        text = print_statement(ls.stmt)
        lines.append(f"{ls.label}: {text}" if ls.label is not None else text)
    if not p.locals and len(lines) == 1:
        head.append(f"{sig} {{ {lines[0]} }}")
    else:
        head.append(sig + " {")
        head.extend(f"  var {d.name}: {d.type};" for d in p.locals)
        head.extend("  " + line for line in lines)
        head.append("}")
    return "\n".join(head) + "\n"


# ------------------------------------------------------------ symbol table

class SymbolTable:
    """Declaration/use links. Uses are Var nodes plus assignment statements
    (for their left-hand side); both are keyed by object identity."""

    def __init__(self):
        self.decls: List[VariableDecl] = []
        self._uses: Dict[int, list] = {}
        self._decl_of: Dict[int, VariableDecl] = {}
        self._site: Dict[int, int] = {}
        self._keep = []

    def _add_decl(self, d):
        self.decls.append(d)
        self._uses.setdefault(id(d), [])

    def _link(self, use, decl, site):
        self._uses[id(decl)].append(use)
        self._decl_of[id(use)] = decl
        self._site[id(use)] = site
        self._keep.append(use)

    def uses(self, decl) -> list:
        return list(self._uses.get(id(decl), []))

    def decl_of(self, use) -> VariableDecl:
        return self._decl_of[id(use)]

    def use_sites(self, decl) -> set:
        """Statement indices (or ``-k-1`` for axiom k) containing a use."""
        return {self._site[id(u)] for u in self._uses.get(id(decl), [])}

    def lookup(self, name) -> Optional[VariableDecl]:
        for d in self.decls:
            if d.name == name:
                return d
        return None


def build_symbol_table(p: Program) -> SymbolTable:
    table = SymbolTable()
    scope = {}
    for d in p.declarations():
        if d.name in scope:
            raise SymbolError(f"duplicate declaration of {d.name}", d.pos)
        scope[d.name] = d
        table._add_decl(d)

    def visit(e, env, site):
        if isinstance(e, Var):
            d = env.get(e.name)
            if d is None:
                raise SymbolError(f"undeclared identifier {e.name} at {e.pos}", e.pos)
            table._link(e, d, site)
        elif isinstance(e, Quantified):
            table._add_decl(e.var)
            visit(e.body, {**env, e.var.name: e.var}, site)
        else:
            if isinstance(e, Call) and e.func not in _function_env(p):
                raise SymbolError(f"undeclared function {e.func} at {e.pos}", e.pos)
            for c in children(e):
                visit(c, env, site)

    for k, a in enumerate(p.axioms):
        visit(a, {}, -k - 1)
    for i, s in enumerate(p.statements):
        if isinstance(s, Assign):
            d = scope.get(s.lhs)
            if d is None:
                raise SymbolError(f"undeclared identifier {s.lhs} at {s.pos}", s.pos)
            table._link(s, d, i)
        for e in stmt_exprs(s):
            visit(e, scope, i)
    return table


def _function_env(p: Program) -> dict:
    env = dict(BUILTIN_FUNCTIONS)
    for f in p.functions:
        env[f.name] = f
    return env


# --------------------------------------------------------------- typecheck

class TypeMap:
    """Types of expression occurrences, keyed by identity."""

    def __init__(self):
        self._types: Dict[int, object] = {}
        self._exprs: Dict[int, object] = {}

    def _set(self, e, t):
        self._types[id(e)] = t
        self._exprs[id(e)] = e

    def __getitem__(self, e):
        return self._types[id(e)]

    def __contains__(self, e):
        return id(e) in self._types

    def __len__(self):
        return len(self._types)

    def items(self):
        return [(self._exprs[k], t) for k, t in self._types.items()]

    def signature(self) -> list:
        """Order-stable snapshot usable for equality comparisons."""
        return [(repr(self._exprs[k]), str(t)) for k, t in self._types.items()]


def typecheck(p: Program) -> TypeMap:
    """Type every expression occurrence; raise TypeCheckError listing one
    diagnostic per violated rule."""
    build_symbol_table(p)
    funcs = _function_env(p)
    env0 = {d.name: d.type for d in p.declarations()}
    tm = TypeMap()
    diags: List[TypeDiagnostic] = []

    def bad(rule, msg, e):
        diags.append(TypeDiagnostic(rule, f"{msg}: {print_expr(e)}", e, getattr(e, "pos", None)))

    def need(rule, e, t, want, what):
        if t is not None and t != want:
            bad(rule, f"{what} must be {want}, got {t}", e)

    def go(e, env):
        if isinstance(e, IntLit):
            t = INT
        elif isinstance(e, BoolLit):
            t = BOOL
        elif isinstance(e, Var):
            t = env[e.name]
        elif isinstance(e, Unary):
            a = go(e.operand, env)
            if e.op == "!":
                need("[bool]", e, a, BOOL, "operand of !")
                t = BOOL
            else:
                need("[arith]", e, a, INT, "operand of unary -")
                t = INT
        elif isinstance(e, Binary):
            a, b = go(e.left, env), go(e.right, env)
            if e.op in ("&&", "||"):
                need("[bool]", e, a, BOOL, f"left operand of {e.op}")
                need("[bool]", e, b, BOOL, f"right operand of {e.op}")
                t = BOOL
            elif e.op in ("+", "-"):
                need("[arith]", e, a, INT, f"left operand of {e.op}")
                need("[arith]", e, b, INT, f"right operand of {e.op}")
                t = INT
            elif e.op == "<":
                need("[comp]", e, a, INT, "left operand of <")
                need("[comp]", e, b, INT, "right operand of <")
                t = BOOL
            else:
                if a is not None and b is not None and a != b:
                    bad("[eq]", f"operands of == differ in type ({a} vs {b})", e)
                t = BOOL
        elif isinstance(e, Select):
            m, i = go(e.map, env), go(e.index, env)
            t = None
            if m is not None:
                if not isinstance(m, MapType):
                    bad("[select]", f"selected expression must be a map, got {m}", e)
                else:
                    need("[select]", e, i, m.index, "map index")
                    t = m.element
        elif isinstance(e, Quantified):
            b = go(e.body, {**env, e.var.name: e.var.type})
            need("[quant]", e, b, BOOL, "quantifier body")
            t = BOOL
        elif isinstance(e, Call):
            f = funcs[e.func]
            ts = [go(a, env) for a in e.args]
            if len(ts) != len(f.params):
                bad("[call]", f"{e.func} expects {len(f.params)} arguments, got {len(ts)}", e)
            else:
                for k, (a, prm) in enumerate(zip(ts, f.params)):
                    need("[call]", e, a, prm.type, f"argument {k + 1} of {e.func}")
            t = f.result
        else:
            raise TypeError(f"not an expression: {e!r}")
        if t is not None:
            tm._set(e, t)
        return t

    for a in p.axioms:
        need("[axiom]", a, go(a, {}), BOOL, "axiom")
    for s in p.statements:
        if isinstance(s, Assign):
            t = go(s.rhs, env0)
            lt = env0[s.lhs]
            if t is not None and t != lt:
                diags.append(TypeDiagnostic(
                    "[asgn]", f"cannot assign {t} to {s.lhs}: {lt}", s.rhs, s.pos))
        elif isinstance(s, Assert):
            need("[asrt]", s.expr, go(s.expr, env0), BOOL, "assert operand")
        elif isinstance(s, Assume):
            need("[asm]", s.expr, go(s.expr, env0), BOOL, "assume operand")
    if diags:
        raise TypeCheckError(diags)
    return tm
