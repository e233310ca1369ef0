import io
import subprocess
import sys

import pytest

from hifkit.cli import main
from hifkit.fixtures import FIXTURES, fixture
from hifkit.proof import check_derivation, format_script, parse_script, stats
from hifkit.calculus import RuleName as R

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from cutgen import with_cuts  # noqa: E402


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def script(tmp_path):
    def write(d, name="p.hpf"):
        path = tmp_path / name
        path.write_text(format_script(d) if not isinstance(d, str) else d)
        return str(path)
    return write


# ---------------------------------------------------------------- decide

def test_decide_valid():
    code, out, _ = run("decide", "(A -> B) | (B -> A)")
    assert code == 0 and out.startswith("VALID")


def test_decide_countermodel():
    code, out, _ = run("decide", "A | ~A")
    assert code == 1
    assert out.startswith("COUNTERMODEL value=1/2")
    assert "pred A = 1/2" in out


def test_countermodel_feeds_eval(tmp_path):
    _, out, _ = run("decide", "A | ~A")
    model = tmp_path / "m.txt"
    model.write_text(out.split("\n", 1)[1])
    formula = tmp_path / "f.txt"
    formula.write_text("A | ~A\n")
    code, out, _ = run("eval", str(formula), str(model))
    assert code == 1 and "1/2" in out


def test_decide_hypersequent():
    code, out, _ = run("decide", "A | B => A || A | B => B")
    assert code == 0 and out.startswith("VALID")


def test_decide_first_order():
    code, out, _ = run("decide", "(exists x. P(x)) -> forall x. P(x)", "--samples", "200")
    assert code == 1 and out.startswith("COUNTERMODEL")
    code, out, _ = run("decide", "(forall x. P(x)) -> exists x. P(x)", "--samples", "100")
    assert code == 0 and out.startswith("UNKNOWN")


def test_decide_syntax_error():
    code, _, err = run("decide", "A &")
    assert code == 2 and "error" in err


# ---------------------------------------------------------------- check, stats, eval

def test_check_fixture(script):
    code, out, _ = run("check", script(fixture("D")))
    assert code == 0
    assert out.startswith("OK D") and "8 nodes" in out


def test_check_failure_reports_node(script):
    bad = format_script(fixture("D")).replace("EC [7]", "EW [7]")
    code, _, err = run("check", script(bad))
    assert code == 1 and "8" in err


def test_check_config_override(script):
    path = script(with_cuts(fixture("ax1"), 1, seed=2))
    assert run("check", path)[0] == 0
    assert run("check", path, "--config", "hif-minus")[0] == 1


def test_stats(script):
    code, out, _ = run("stats", script(fixture("or-forall")))
    assert code == 0
    assert "order = 6" in out


def test_eval(script, tmp_path):
    model = tmp_path / "m.txt"
    model.write_text("domain d\nprop A = 1/2\nprop B = 1/4\n")
    code, out, _ = run("eval", script(fixture("D")), str(model))
    assert code == 0 and "SATISFIED" in out
    formula = tmp_path / "f.txt"
    formula.write_text("A -> B\n")
    code, out, _ = run("eval", str(formula), str(model))
    assert code == 1 and "FALSIFIED" in out


def test_missing_file():
    assert run("check", "/nonexistent/x.hpf")[0] == 2


def test_bad_arguments():
    assert run("transform")[0] == 2
    assert run("frobnicate")[0] == 2


# ---------------------------------------------------------------- transform

@pytest.mark.parametrize("kind, name", [
    ("cut-elim", None), ("tt-elim", "tt-demo"), ("midseq", "prenex-demo"),
    ("cm-normalize", "D"), ("atomize", "or-forall"), ("or-prime", "or-forall"),
])
def test_transform_output_checks(script, kind, name):
    d = with_cuts(fixture("D"), 1, seed=4) if name is None else fixture(name)
    code, out, err = run("transform", script(d), "--kind", kind)
    assert code == 0, err
    e = parse_script(out)
    assert check_derivation(e) == []
    assert e.conclusion == d.conclusion
    assert f"kind = {kind}" in err
    if kind == "cut-elim":
        assert stats(e).count(R.CUT) == 0


def test_transform_to_file_and_recheck(script, tmp_path):
    target = tmp_path / "out.hpf"
    code, out, _ = run("transform", script(fixture("tt-demo")), "--kind", "tt-elim", "--stars",
                       "--out", str(target))
    assert code == 0 and out == ""
    assert run("check", str(target))[0] == 0
    assert stats(parse_script(target.read_text())).count(R.TT) == 0


def test_transform_is_deterministic(script):
    path = script(with_cuts(fixture("ax2"), 2, seed=11))
    first = run("transform", path, "--kind", "cut-elim")
    assert first == run("transform", path, "--kind", "cut-elim")


def test_transform_refuses_unchecked_input(script):
    bad = format_script(fixture("D")).replace("EC [7]", "EW [7]")
    assert run("transform", script(bad), "--kind", "cut-elim")[0] != 0


def test_transform_error_exit(script):
    # midhypersequent needs a prenex end hypersequent
    code, _, err = run("transform", script(fixture("or-forall")), "--kind", "midseq")
    assert code == 1 and "prenex" in err


# ---------------------------------------------------------------- fixtures, selftest

def test_fixtures_list():
    code, out, _ = run("fixtures", "list")
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == list(FIXTURES)
    assert out.splitlines()[0] == "D\thif-minus\t=> (A -> B) | (B -> A)"


def test_fixtures_emit(tmp_path):
    code, out, _ = run("fixtures", "emit", "D")
    assert code == 0 and out == format_script(fixture("D"))
    code, _, _ = run("fixtures", "emit", "all", "--out", str(tmp_path))
    assert code == 0
    assert {p.stem for p in tmp_path.glob("*.hpf")} == set(FIXTURES)


def test_fixtures_emit_unknown():
    assert run("fixtures", "emit", "nope")[0] == 2


def test_selftest():
    code, out, _ = run("selftest", "--seed", "2")
    assert code == 0
    assert "kernel" in out
    assert "FAIL" not in out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hifkit.cli", "decide", "A -> A"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("VALID")
