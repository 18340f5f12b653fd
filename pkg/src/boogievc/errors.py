"""Exception types shared across the pipeline."""

from __future__ import annotations


class BoogieError(Exception):
    """Base class for user-facing diagnostics."""

    def __init__(self, message: str, pos=None):
        self.message = message
        self.pos = pos
        where = f"{pos}: " if pos is not None else ""
        super().__init__(where + message)


class ParseError(BoogieError):
    pass


class SymbolError(BoogieError):
    pass


class TypeDiagnostic:
    def __init__(self, rule: str, message: str, expr=None, pos=None):
        self.rule = rule
        self.message = message
        self.expr = expr
        self.pos = pos

    def __str__(self) -> str:
        where = f"{self.pos}: " if self.pos is not None else ""
        return f"{where}{self.rule} {self.message}"

    __repr__ = __str__


class TypeCheckError(BoogieError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        super().__init__("; ".join(str(d) for d in self.diagnostics))
        self.pos = first.pos


class CyclicGraphError(BoogieError):
    def __init__(self, message="cyclic flowgraph: loop handling out of scope"):
        super().__init__(message)


class SortError(Exception):
    pass


class ProverError(Exception):
    pass
