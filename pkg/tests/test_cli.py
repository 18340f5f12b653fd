import io
import os

import pytest

from boogievc.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, PipelineConfig, main, run_pipeline

from support import data_path


def run(**kw):
    out, err = io.StringIO(), io.StringIO()
    code = run_pipeline(PipelineConfig(**kw), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("method", ["sp", "wp"])
def test_make_even_ok(method):
    code, out, _ = run(input=data_path("makeEven.bpl"), vc_method=method)
    assert code == EXIT_OK
    assert out.startswith("OK: makeEven at makeEven.bpl:")


def test_smt2_is_byte_identical():
    texts = {run(input=data_path("makeEven.bpl"), emit="smt2")[1] for _ in range(3)}
    assert len(texts) == 1
    assert next(iter(texts)).rstrip().endswith("(check-sat)")


def test_failing_program(tmp_path):
    f = tmp_path / "bad.bpl"
    f.write_text("procedure bad(x : int) returns () { assert x < 0; }\n")
    code, out, _ = run(input=str(f))
    assert code == EXIT_FAIL
    assert out.startswith("FAIL: bad at bad.bpl:1:")
    # the incoming value of x is version -1
    assert "counterexample: x@-1=" in out


def test_reach_dead():
    code, out, _ = run(input=data_path("dead.bpl"), reach=True)
    assert code == EXIT_FAIL
    assert out.splitlines() == ["L4: blocker assumption: assume x < 0; at dead.bpl:5:7",
                                "L5: unreachable: return; at dead.bpl:6:7",
                                "queries: 4"]
    naive = run(input=data_path("dead.bpl"), reach=True, naive_reach=True)[1]
    assert naive.splitlines()[:2] == out.splitlines()[:2]


def test_reach_clean():
    code, out, _ = run(input=data_path("makeEven.bpl"), reach=True)
    assert code == EXIT_OK
    assert out.splitlines()[-1].startswith("OK: makeEven")


def test_cycle_rejected():
    code, _, err = run(input=data_path("indexOf.bpl"))
    assert code == EXIT_USAGE
    assert "cycl" in err.lower()


def test_dump_dir(tmp_path):
    code, _, _ = run(input=data_path("makeEven.bpl"), dump_dir=str(tmp_path))
    assert code == EXIT_OK
    dirs = sorted(os.listdir(tmp_path))
    assert dirs == ["01-parse", "02-typecheck", "03-flowgraph", "04-passivate",
                    "05-assumptions", "06-vc", "07-unshare"]
    assert sorted(os.listdir(tmp_path / "04-passivate")) == ["flowgraph.dot", "program.bpl"]
    assert "v@1 := v@0" in (tmp_path / "04-passivate" / "program.bpl").read_text()


def test_emit_dot():
    code, out, _ = run(input=data_path("makeEven.bpl"), emit="dot")
    assert code == EXIT_OK and out.startswith("digraph")


@pytest.mark.parametrize("kw", [
    dict(vc_method="xp"), dict(emit="pdf"), dict(reach=True, emit="smt2"),
    dict(reach=True, prune_against="x.smt2"), dict(prover="internal:0"),
    dict(prover="external:"), dict(prover="oracle"),
])
def test_usage_errors(kw):
    code, _, err = run(input=data_path("makeEven.bpl"), **kw)
    assert code == EXIT_USAGE and err.startswith("usage:")


def test_parse_error_position(tmp_path):
    f = tmp_path / "broken.bpl"
    f.write_text("procedure p() returns () { x := ; }\n")
    code, _, err = run(input=str(f))
    assert code == EXIT_USAGE and err.startswith("broken.bpl:")


def test_missing_file():
    assert run(input="/nonexistent.bpl")[0] == EXIT_USAGE


def test_argv_entry_point(capsys):
    assert main([data_path("makeEven.bpl"), "--vc-method=wp"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("OK:")
    assert main(["--bogus"]) == EXIT_USAGE


def test_prune_against_previous_version(tmp_path):
    old = tmp_path / "old.smt2"
    old.write_text(run(input=data_path("makeEven.bpl"), emit="smt2")[1])
    code, out, _ = run(input=data_path("makeEven.bpl"), prune_against=str(old))
    assert code == EXIT_OK and out.startswith("OK:")
    code, out, _ = run(input=data_path("makeEven.bpl"), prune_against=str(old), emit="smt2")
    assert code == EXIT_OK and "(check-sat)" in out


def test_prune_keeps_new_obligation(tmp_path):
    old = tmp_path / "old.smt2"
    old.write_text(run(input=data_path("makeEven.bpl"), emit="smt2")[1])
    new = tmp_path / "new.bpl"
    new.write_text(open(data_path("makeEven.bpl")).read().replace(
        "assert even(v); return;", "assert even(v); assert v < u; return;"))
    code, out, _ = run(input=str(new), prune_against=str(old))
    assert code == EXIT_FAIL and out.startswith("FAIL:")
