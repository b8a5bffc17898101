import io
import json
import subprocess
import sys

import pytest

import herbrand_lab.cli as cli
from herbrand_lab.cli import KINDS, dumps_record, exit_code_for, main
from herbrand_lab.lab import InternalInconsistency


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def p(programs_dir):
    return lambda name: str(programs_dir / name)


def test_solve_append(p):
    code, out, _ = run("solve", "--program", p("append.pl"), "--query", "app([a],[b],Z)", "--alphabet", "+a/0, b/0")
    assert code == 0
    assert out.splitlines() == ["Z = [a,b]", "(exhausted)"]


def test_solve_keep_duplicates(p):
    code, out, _ = run("solve", "--program", p("p2.pl"), "--query", "p(Y)", "--keep-duplicates")
    assert code == 0
    assert out.splitlines() == ["true", "Y = a", "(exhausted)"]
    _, out1, _ = run("solve", "--program", p("p1.pl"), "--query", "p(Y)")
    _, out2, _ = run("solve", "--program", p("p2.pl"), "--query", "p(Y)")
    assert out1 == out2


def test_solve_budget_hit_is_unknown(p):
    code, out, _ = run("solve", "--program", p("append.pl"), "--query", "app(X,Y,Z)", "--max-depth", "3")
    assert code == 1
    assert out.splitlines()[-1].startswith("(budget hit")


def test_empty_query_is_usage_error(p):
    code, out, err = run("solve", "--program", p("p2.pl"), "--query", "")
    assert code == 2 and out == "" and "query" in err


def test_parse_errors_exit_2(p, tmp_path):
    bad = tmp_path / "bad.pl"
    bad.write_text("p(X) :- .\n")
    assert run("solve", "--program", str(bad), "--query", "p(X)")[0] == 2
    assert run("solve", "--program", p("p2.pl"), "--query", "p(X")[0] == 2
    assert run("solve", "--program", str(tmp_path / "none.pl"), "--query", "p(X)")[0] == 2
    assert run("model", "--program", p("append.pl"), "--depth", "0")[0] == 2
    assert run("bogus")[0] == 2
    assert run()[0] == 2


def test_check_intro(p):
    code, out, _ = run("check", "--program", p("intro.pl"), "--query", "p(X)")
    assert code == 0
    assert "M_P |= Q : holds" in out
    assert "P |= Q : fails" in out
    assert "theorem-1 conditions: violated" in out


def test_check_append_extra_symbol(p):
    code, out, _ = run("check", "--program", p("append.pl"), "--alphabet", "+g/1", "--query", "app([X],[Y],[X,Y])")
    assert code == 0
    assert "conditions: hold (a: g/1)" in out
    assert "verdicts agree" in out


def test_check_tiny_budget(p):
    code, out, _ = run("check", "--program", p("append.pl"), "--query", "app([X],[Y],[X,Y])", "--max-nodes", "3")
    assert code == 1
    assert "M_P |= Q : unknown" in out


def test_check_query_outside_alphabet(p):
    code, _, err = run("check", "--program", p("intro.pl"), "--query", "p(b)")
    assert code == 2 and "outside the alphabet" in err


def test_check_internal_inconsistency(p, monkeypatch):
    def boom(*a, **k):
        raise InternalInconsistency("planted", {"query": "p(X)"})

    monkeypatch.setattr(cli, "equivalence_verdict", boom)
    code, out, err = run("check", "--program", p("intro.pl"), "--query", "p(X)", "--format", "json")
    assert code == 3
    assert json.loads(out)["bundle"] == {"query": "p(X)"}
    assert "planted" in err


def test_generalize_example(p):
    code, out, _ = run("generalize", "--program", p("append.pl"), "--query", "app([a],[[]|g(a,X)],[g(a,Y),Z,[a]])")
    assert code == 0
    assert out.splitlines() == ["app([V1],[[]|V2],[V3,Z,[V1]])", "  V1 = a", "  V2 = g(a,X)", "  V3 = g(a,Y)"]


def test_aliens_with_occurring(p):
    code, out, _ = run("aliens", "--occurring", "'[]'/0, '.'/2", "--query", "app([a],[[]|g(a,X)],[g(a,Y),Z,[a]])")
    assert code == 0
    assert out.splitlines()[0] == "a   at 0.0.0 0.2.1.1.0.0"


def test_counterexample_intro():
    code, out, _ = run("counterexample", "--occurring", "a/0", "--alphabet", "a/0", "--query", "p(V)")
    assert code == 0 and out == "p(a).\n"


def test_counterexample_premise_violation():
    code, _, err = run("counterexample", "--occurring", "a/0", "--alphabet", "a/0, f/1", "--query", "p(V)")
    assert code == 2 and "condition (a)" in err


def test_model_listing(p):
    code, out, _ = run("model", "--program", p("append.pl"), "--depth", "2")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 12
    assert lines[0] == "app([],[],[])"
    assert lines[-1] == "% 11 atoms, stage 3, term depth <= 2, approximation"


def test_entails(p):
    assert run("entails", "--program", p("append3.pl"), "--query", "app([X],[Y],[X,Y])")[1].startswith("P |= Q : fails")
    assert run("entails", "--program", p("append.pl"), "--query", "app([X],[Y],[X,Y])")[1].startswith("P |= Q : holds")


def test_fuzz_seed_from_environment(monkeypatch):
    args = ("fuzz", "--cases", "5", "--property", "lemma3", "--format", "json")
    explicit = run(*args, "--seed", "4")
    monkeypatch.setenv("HERBRAND_LAB_SEED", "4")
    assert run(*args) == explicit
    monkeypatch.setenv("HERBRAND_LAB_SEED", "x")
    assert run(*args)[0] == 2
    assert run("fuzz", "--property", "nope")[0] == 2


JSON_COMMANDS = [
    ("solve", "--program", "append.pl", "--query", "app(X,Y,[a,b])", "--alphabet", "+a/0, b/0"),
    ("check", "--program", "intro.pl", "--query", "p(X)"),
    ("entails", "--program", "pxxy.pl", "--query", "p(V,V,Z)"),
    ("aliens", "--program", "append.pl", "--query", "app([a],[[]|g(a,X)],[g(a,Y),Z,[a]])"),
    ("generalize", "--program", "append.pl", "--query", "app([a],[[]|g(a,X)],[g(a,Y),Z,[a]])"),
    ("model", "--program", "append.pl", "--depth", "1"),
    ("counterexample", "--occurring", "g/1, c/0", "--alphabet", "g/1, c/0, a1/0, b1/0", "--query", "q(b1,Y1,Y2)"),
    ("fuzz", "--cases", "3", "--property", "lemma1", "--seed", "2"),
]


@pytest.mark.parametrize("argv", JSON_COMMANDS, ids=[c[0] for c in JSON_COMMANDS])
def test_json_records_round_trip(argv, programs_dir):
    argv = [str(programs_dir / a) if a.endswith(".pl") else a for a in argv]
    code, out, _ = run(*argv, "--format", "json")
    assert code == 0
    lines = out.splitlines()
    assert lines
    for line in lines:
        rec = json.loads(line)
        assert "record" in rec
        assert dumps_record(rec) == line
    assert out == "".join(dumps_record(json.loads(x)) + "\n" for x in lines)


def test_exit_codes_are_total_over_kinds():
    assert {k: exit_code_for(k) for k in KINDS} == {
        "definite": 0,
        "consistent": 0,
        "unknown": 1,
        "usage": 2,
        "inconsistent": 3,
    }
    with pytest.raises(ValueError):
        exit_code_for("other")


def test_module_entry_point(p):
    proc = subprocess.run(
        [sys.executable, "-m", "herbrand_lab", "solve", "--program", p("intro.pl"), "--query", "p(X)"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    assert proc.stdout == "X = a\n(exhausted)\n"
