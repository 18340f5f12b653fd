"""Command-line driver.

    boogievc FILE [--vc-method=sp|wp] [--emit=report|smt2|dot]
                  [--dump-dir=DIR] [--reach] [--prune-against=OLD.smt2]
                  [--prover=internal[:BOUND]|external:CMD] [--unshare-k=K]

Stages run in order (parse, typecheck, flowgraph, passivate, assignments
to assumptions, VC, unshare) and the first failing one stops the run.
Exit status: 0 verified or clean, 1 verification failure or findings,
2 usage or input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import shlex
import sys
from dataclasses import dataclass
from typing import List, Optional, TextIO

from .errors import BoogieError, CyclicGraphError
from .flowgraph import build_flowgraph, build_pseudo_flowgraph, is_acyclic, to_dot, to_program
from .frontend import parse_program, print_program, typecheck
from .incremental import match_leaves, negation_normal_form, prune, rename_for_sharing
from .passivation import version_optimal_passive_form
from .prover import DEFAULT_BOUND, DEFAULT_UNSHARE_CAP, ProverSession, emit_smtlib, parse_smtlib
from .reachability import naive_reachability, reachability_analysis
from .smt import Session
from .unshare import UnshareConfig, eliminate_sharing
from .vcgen import VCGen, assignments_to_assumptions

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class PipelineConfig:
    input: str
    vc_method: str = "sp"
    dump_dir: Optional[str] = None
    emit: str = "report"
    prune_against: Optional[str] = None
    reach: bool = False
    prover: str = "internal"
    unshare_k: int = -1
    naive_reach: bool = False

    def validate(self):
        if self.vc_method not in ("sp", "wp"):
            raise UsageError(f"unknown VC method {self.vc_method!r}")
        if self.emit not in ("report", "smt2", "dot"):
            raise UsageError(f"unknown emit kind {self.emit!r}")
        if self.reach and self.prune_against:
            raise UsageError("--reach and --prune-against are exclusive")
        if self.reach and self.emit != "report":
            raise UsageError("--reach produces a report; drop --emit")
        if self.prune_against and self.emit == "dot":
            raise UsageError("--prune-against emits a query, not a graph")
        prover_backend(self.prover)


def prover_backend(text: str):
    """``internal``, ``internal:BOUND`` or ``external:COMMAND``."""
    kind, _, arg = text.partition(":")
    if kind == "internal":
        try:
            bound = int(arg) if arg else DEFAULT_BOUND
        except ValueError:
            raise UsageError(f"bad bound in --prover={text}") from None
        if bound < 1:
            raise UsageError("the internal prover needs a positive bound")
        return dict(backend="internal", bound=bound)
    if kind == "external":
        cmd = shlex.split(arg)
        if not cmd:
            raise UsageError("--prover=external needs a command")
        return dict(backend="external", command=cmd)
    raise UsageError(f"unknown prover {text!r}")


class Dumper:
    """Writes ``NN-name/`` directories; does nothing without a directory."""

    def __init__(self, root: Optional[str]):
        self.root = root
        self.n = 0

    def stage(self, name: str, files: dict):
        self.n += 1
        if self.root is None:
            return
        d = os.path.join(self.root, f"{self.n:02d}-{name}")
        os.makedirs(d, exist_ok=True)
        for fname, text in files.items():
            with open(os.path.join(d, fname), "w", encoding="utf-8") as f:
                f.write(text)


def _recheck(program, stage: str) -> str:
    """Print, re-parse and re-typecheck a transformed program."""
    text = print_program(program)
    try:
        typecheck(parse_program(text, allow_reserved=True))
    except BoogieError as e:
        raise RuntimeError(f"stage {stage} produced an ill-typed program: {e}") from e
    return text


def _where(cfg: PipelineConfig, program) -> str:
    pos = program.pos
    name = os.path.basename(cfg.input)
    return f"{name}:{pos.line}:{pos.col}" if pos is not None else name


def run_pipeline(cfg: PipelineConfig, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg.validate()
        return _run(cfg, out)
    except UsageError as e:
        print(f"usage: {e}", file=err)
        return EXIT_USAGE
    except CyclicGraphError as e:
        print(e.message, file=err)
        return EXIT_USAGE
    except BoogieError as e:
        print(f"{os.path.basename(cfg.input)}:{e}", file=err)
        return EXIT_USAGE
    except OSError as e:
        print(f"cannot read input: {e}", file=err)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=err)
        return EXIT_INTERNAL


def _run(cfg: PipelineConfig, out: TextIO) -> int:
    with open(cfg.input, encoding="utf-8") as f:
        source = f.read()
    dump = Dumper(cfg.dump_dir)

    program = parse_program(source)
    dump.stage("parse", {"program.bpl": print_program(program),
                         "flowgraph.dot": to_dot(build_pseudo_flowgraph(program), program.name)})
    typecheck(program)
    dump.stage("typecheck", {"program.bpl": print_program(program),
                             "flowgraph.dot": to_dot(build_pseudo_flowgraph(program), program.name)})

    g = build_flowgraph(program)
    text = _recheck(to_program(g, program), "flowgraph")
    dump.stage("flowgraph", {"program.bpl": text, "flowgraph.dot": to_dot(g, program.name)})

    if not is_acyclic(g):
        raise CyclicGraphError()
    passive = version_optimal_passive_form(g, program.declarations())
    pprog = passive.program(program)
    text = _recheck(pprog, "passivate")
    dump.stage("passivate", {"program.bpl": text, "flowgraph.dot": to_dot(passive.graph, program.name)})

    ag = assignments_to_assumptions(passive.graph)
    aprog = to_program(ag, pprog)
    text = _recheck(aprog, "assumptions")
    dump.stage("assumptions", {"program.bpl": text, "flowgraph.dot": to_dot(ag, program.name)})

    session = Session()
    gen = VCGen.for_program(aprog, session)
    axioms = gen.axioms(aprog)

    if cfg.emit == "dot" and not cfg.reach:
        out.write(to_dot(ag, program.name))
        return EXIT_OK

    opts = prover_backend(cfg.prover)
    if cfg.reach:
        with ProverSession(**opts) as prover:
            analyse = naive_reachability if cfg.naive_reach else reachability_analysis
            rep = analyse(ag, gen, prover, list(gen.hypotheses) + axioms)
        lines = rep.findings(ag, display=g, filename=os.path.basename(cfg.input))
        for line in lines:
            print(line, file=out)
        if rep.unknown_queries:
            print(f"note: {rep.unknown_queries} queries were inconclusive", file=out)
        print(f"queries: {rep.query_count}", file=out)
        if lines:
            return EXIT_FAIL
        print(f"OK: {program.name} at {_where(cfg, program)}", file=out)
        return EXIT_OK

    vc = gen.vc(ag, cfg.vc_method)
    hyps = list(gen.hypotheses) + axioms
    smt_opts = dict(unshare_cap=DEFAULT_UNSHARE_CAP, unshare_k=cfg.unshare_k)
    dump.stage("vc", {"vc.smt2": emit_smtlib(vc, hyps, unshare_cap=-1)})
    unshared = eliminate_sharing(vc, UnshareConfig(k=cfg.unshare_k))
    dump.stage("unshare", {"vc.smt2": emit_smtlib(unshared, hyps, unshare_cap=-1)})

    if cfg.prune_against:
        with open(cfg.prune_against, encoding="utf-8") as f:
            old = parse_smtlib(f.read(), session)
        p = negation_normal_form(session.And(old.asserts))
        q = negation_normal_form(session.And(hyps + [session.Not(vc)]))
        r = prune(rename_for_sharing(p, match_leaves(p, q)), q)
        goal, hyps = session.Not(r), []
        dump.stage("prune", {"vc.smt2": emit_smtlib(goal, hyps, **smt_opts)})
    else:
        goal = vc

    if cfg.emit == "smt2":
        out.write(emit_smtlib(goal, hyps, **smt_opts))
        return EXIT_OK

    with ProverSession(unshare_cap=DEFAULT_UNSHARE_CAP, **opts) as prover:
        for h in hyps:
            prover.assume(h)
        verdict = prover.is_valid(goal)
    where = _where(cfg, program)
    if verdict.valid:
        print(f"OK: {program.name} at {where}", file=out)
        return EXIT_OK
    if verdict.invalid:
        print(f"FAIL: {program.name} at {where}", file=out)
        if verdict.store:
            shown = ", ".join(f"{k}={v}" for k, v in sorted(verdict.store.items()))
            print(f"counterexample: {shown}", file=out)
        return EXIT_FAIL
    print(f"UNKNOWN: {program.name} at {where}: {verdict.reason or 'inconclusive'}", file=out)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="boogievc", description="Verify acyclic core Boogie procedures.")
    ap.add_argument("input", help="Boogie source file")
    ap.add_argument("--vc-method", choices=("sp", "wp"), default="sp")
    ap.add_argument("--dump-dir", default=None, help="write per-stage program and dot files here")
    ap.add_argument("--emit", choices=("report", "smt2", "dot"), default="report")
    ap.add_argument("--prune-against", default=None, metavar="FILE",
                    help="SMT-LIB2 query of a previous, valid version")
    ap.add_argument("--reach", action="store_true", help="semantic reachability report")
    ap.add_argument("--naive-reach", action="store_true", help="with --reach, query every statement")
    ap.add_argument("--prover", default="internal", help="internal[:BOUND] or external:COMMAND")
    ap.add_argument("--unshare-k", type=int, default=-1)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    cfg = PipelineConfig(ns.input, ns.vc_method, ns.dump_dir, ns.emit, ns.prune_against,
                         ns.reach, ns.prover, ns.unshare_k, ns.naive_reach)
    return run_pipeline(cfg)


if __name__ == "__main__":
    sys.exit(main())
