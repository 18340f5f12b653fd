"""Shared fixtures-by-function for the test modules."""

from __future__ import annotations

import os

from boogievc.flowgraph import build_flowgraph
from boogievc.frontend import parse_program, typecheck
from boogievc.passivation import version_optimal_passive_form
from boogievc.smt import Session
from boogievc.vcgen import VCGen, assignments_to_assumptions

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


def load(name: str):
    with open(data_path(name), encoding="utf-8") as f:
        p = parse_program(f.read())
    typecheck(p)
    return p


def prepare(p, session=None):
    """Flowgraph, passive assignment-free flowgraph and a VC generator."""
    g = build_flowgraph(p)
    pr = version_optimal_passive_form(g, p.declarations())
    ag = assignments_to_assumptions(pr.graph)
    gen = VCGen.for_program(pr.program(p), session or Session())
    return g, ag, gen
