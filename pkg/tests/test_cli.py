import json

import pytest

from app.cli import run
from app.config import Settings, settings
from app.services.cnf_service import Formula
from app.services.digraph_service import parse_dot, read_edge_list
from app.services.reduction_service import reduce, validate_instance

DIGON = "2 2\n0 1\n1 0\n"
C5 = "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n"
PHI = "c x1 or x2 or not x3\np cnf 3 1\n1 2 -3 0\n"


@pytest.fixture(autouse=True)
def restore_settings():
    saved = {name: getattr(settings, name) for name in Settings.model_fields}
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


def test_solve_bounded_digon(write, capsys):
    code = run(["solve", "--algo", "bounded", "--target", "A", "-g", write("digon.el", DIGON)])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    colors = [int(line.split()[1]) for line in lines]
    assert sorted(colors) == [0, 1]


def test_solve_odd_cycle_into_digon(write, capsys):
    code = run(["solve", "--algo", "exact", "--target", write("h.el", DIGON), "-g", write("c5.el", C5)])
    assert code == 1
    assert "NOT COLORABLE" in capsys.readouterr().out


def test_solve_json(write, capsys):
    assert run(["--json", "solve", "--target", "C", "-g", write("c5.el", C5)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["colorable"] is True
    assert len(payload["coloring"]) == 5


def test_solve_with_lists(write, capsys):
    lists = write("lists.txt", "0: 1\n")
    assert run(["solve", "--target", "A", "-g", write("digon.el", DIGON), "--lists", lists]) == 0
    assert capsys.readouterr().out == "0 1\n1 0\n"


def test_bounded_solver_degree_precondition(write, capsys):
    g = write("hub.el", "3 4\n0 1\n0 2\n1 0\n2 0\n")
    assert run(["solve", "--algo", "bounded", "-g", g]) == 3
    assert "bounded solver" in capsys.readouterr().err


def test_oracle_cap_is_a_precondition(write):
    assert run(["--max-vertices", "3", "solve", "--target", "C", "-g", write("c5.el", C5)]) == 3


def test_format_error(write, capsys):
    assert run(["solve", "-g", write("bad.el", "2 3\n0 1\n")]) == 2
    assert "header declares 3 arcs" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert run(["solve", "-g", str(tmp_path / "nope.el")]) == 2


def test_usage_error():
    assert run(["frobnicate"]) == 2


def test_count_and_enumerate(write, capsys):
    digon = write("digon.el", DIGON)
    assert run(["count", "-g", digon, "--target", "A"]) == 0
    assert capsys.readouterr().out == "2\n"
    assert run(["--json", "count", "-g", digon, "--target", "A", "--enumerate", "--no-prune"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 2
    assert sorted(payload["colorings"]) == [[0, 1], [1, 0]]


def test_ac(write, capsys):
    c5, h = write("c5.el", C5), write("h.el", DIGON)
    assert run(["ac", "-g", c5, "--target", h]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "0: 0 1"
    assert run(["ac", "-g", c5, "--target", h, "--lists", write("pin.txt", "0: 0\n")]) == 1


def test_classify(write, capsys):
    g = write("tree.el", "4 3\n0 1\n0 2\n2 3\n")
    assert run(["--json", "classify", "-g", g]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["bounded_class"].startswith("out-branching")
    assert [c["shape"] for c in payload["components"]] == ["tree"]


def test_convert_round_trip(write, tmp_path):
    dot = tmp_path / "g.dot"
    assert run(["convert", "-i", write("c5.el", C5), "-o", str(dot)]) == 0
    assert parse_dot(dot.read_text()) == read_edge_list(tmp_path / "c5.el")
    back = tmp_path / "back.el"
    assert run(["convert", "-i", str(dot), "-o", str(back), "--to", "el"]) == 0
    assert back.read_text() == C5


def test_reduce_writes_outputs(write, tmp_path):
    out, meta, dot = tmp_path / "g.el", tmp_path / "meta.json", tmp_path / "g.dot"
    code = run(["reduce", "-f", write("phi.cnf", PHI), "--target", "a", "--bounded",
                "-o", str(out), "--meta", str(meta), "--dot", str(dot)])
    assert code == 0
    expected = reduce(Formula.from_ints(3, [(1, 2, -3)]), "A", bounded=True).graph
    assert read_edge_list(out) == expected
    assert json.loads(meta.read_text())["bounded"] is True
    assert dot.read_text().startswith("digraph A_bounded {")


def test_reduce_json(write, capsys):
    assert run(["--json", "reduce", "-f", write("phi.cnf", PHI), "--target", "C"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["meta"]["semantics"] == "3sat"
    assert payload["validation"]["meta_ok"] is True


def test_reduce_bad_dimacs(write):
    assert run(["reduce", "-f", write("phi.cnf", "p cnf 2 1\n1 2 0\n")]) == 2


def test_roundtrip_bounded_b(write, capsys):
    assert run(["roundtrip", "-f", write("phi.cnf", PHI), "--target", "B", "--bounded"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_roundtrip_random_batch(capsys):
    assert run(["--seed", "5", "roundtrip", "--random", "3", "--vars", "3", "--clauses", "2", "--batch"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[1] for line in lines] == ["random-1", "random-2", "random-3"]


def test_roundtrip_needs_input(capsys):
    assert run(["roundtrip"]) == 2
    assert "roundtrip needs" in capsys.readouterr().err


def test_verify_gadgets_json(capsys):
    assert run(["verify-gadgets", "--target", "A", "--report", "json", "--sizes", "1,2"]) == 0
    reports = json.loads(capsys.readouterr().out)["reports"]
    assert {r["kind"] for r in reports} == {"U", "W", "U_prime"}
    assert all(r["passed"] for r in reports)


def test_verify_gadgets_text_and_fixtures(tmp_path, capsys):
    assert run(["verify-gadgets", "--target", "B", "--sizes", "1", "--write-fixtures", str(tmp_path)]) == 0
    assert "gadgets pass" in capsys.readouterr().out
    assert (tmp_path / "forcer.el").exists()


def test_verify_gadgets_bad_sizes():
    assert run(["verify-gadgets", "--sizes", "0"]) == 2


def test_reduce_fails_when_validation_fails(write, monkeypatch, caplog):
    def failing(instance):
        report = validate_instance(instance)
        return report.model_copy(update={"degree_ok": False, "problems": ["max out-degree 3 at x1"]})

    monkeypatch.setattr("app.cli.validate_instance", failing)
    assert run(["reduce", "-f", write("phi.cnf", PHI), "--target", "B", "--bounded"]) == 1
    assert "max out-degree 3 at x1" in caplog.text


@pytest.fixture
def served(monkeypatch):
    calls = []
    monkeypatch.setattr("uvicorn.run", lambda app, **kwargs: calls.append(kwargs))
    return calls


def test_serve_reads_environment(monkeypatch, served):
    monkeypatch.setenv("HCOLOR_PORT", "9001")
    monkeypatch.setenv("HCOLOR_ORACLE_MAX_VERTICES", "30")
    assert run(["serve"]) == 0
    assert served[0]["port"] == 9001
    assert served[0]["host"] == "0.0.0.0"
    assert settings.ORACLE_MAX_VERTICES == 30


def test_serve_flags_override_environment(monkeypatch, served):
    monkeypatch.setenv("HCOLOR_PORT", "9001")
    monkeypatch.setenv("HCOLOR_HOST", "10.0.0.5")
    assert run(["serve", "--port", "9100"]) == 0
    assert served[0]["port"] == 9100
    assert served[0]["host"] == "10.0.0.5"


def test_commands_ignore_environment(monkeypatch, write):
    monkeypatch.setenv("HCOLOR_ORACLE_MAX_VERTICES", "1")
    assert run(["solve", "--target", "A", "-g", write("digon.el", DIGON)]) == 0
    assert settings.ORACLE_MAX_VERTICES == Settings.model_fields["ORACLE_MAX_VERTICES"].default
