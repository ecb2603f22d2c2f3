import json
import subprocess
import sys

import jsonschema
import pytest

from alfa.cli import RunReport, main
from alfa.dfa import dfa_isomorphic, parse_dfa, serialize_dfa
from alfa.weighted.wfa import parse_wfa, serialize_wfa, wfa_equiv
from alfa.words import read_word_list



STATS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["membership", "cache_hits", "equivalence_rounds", "phases"],
    "properties": {
        "membership": {"type": "integer", "minimum": 0},
        "cache_hits": {"type": "integer", "minimum": 0},
        "equivalence_rounds": {"type": "integer", "minimum": 0},
        "phases": {
            "type": "object",
            "propertyNames": {"enum": ["fill", "fix", "test"]},
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
    },
}


@pytest.fixture
def files(tmp_path, d1, d2, w1):
    paths = {}
    for name, text in [("d1.dfa", serialize_dfa(d1)), ("d2.dfa", serialize_dfa(d2)), ("w1.wfa", serialize_wfa(w1))]:
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        paths[name] = p
    return paths


def serve_cmd(path):
    return f"exec:{sys.executable} -m alfa serve --machine {path}"


def test_learn_lstar(files, tmp_path, d1, capsys):
    out = tmp_path / "h.dfa"
    code = main(["learn", "--algo", "lstar", "--mode", "dfa", "--target", f"file:{files['d1.dfa']}",
                 "--bound", "2", "--out", str(out), "--stats", "json"])
    assert code == 0
    assert dfa_isomorphic(parse_dfa(out.read_text()), d1)
    stats = json.loads(capsys.readouterr().out)
    jsonschema.validate(stats, STATS_SCHEMA)
    assert stats["equivalence_rounds"] <= 2


@pytest.mark.parametrize("algo", ["kv", "az"])
def test_learn_other_algorithms(files, tmp_path, d1, algo, capsys):
    out = tmp_path / "h.dfa"
    assert main(["learn", "--algo", algo, "--target", f"file:{files['d1.dfa']}", "--bound", "2",
                 "--out", str(out), "--stats", "json"]) == 0
    assert dfa_isomorphic(parse_dfa(out.read_text()), d1)
    stats = json.loads(capsys.readouterr().out)
    jsonschema.validate(stats, STATS_SCHEMA)
    if algo == "az":
        assert stats["equivalence_rounds"] == 0


@pytest.mark.parametrize("algo, words", [("id", "eps\na\n"), ("dual-id", "eps\n")])
def test_learn_with_given_words(files, tmp_path, d1, algo, words):
    given = tmp_path / "given.words"
    given.write_text(words)
    out = tmp_path / "h.dfa"
    assert main(["learn", "--algo", algo, "--target", f"file:{files['d1.dfa']}",
                 "--given-words", str(given), "--out", str(out)]) == 0
    assert dfa_isomorphic(parse_dfa(out.read_text()), d1)


def test_usage_errors(files, capsys):
    target = f"file:{files['d1.dfa']}"
    assert main(["learn", "--algo", "id", "--mode", "dfa", "--target", target]) == 2
    assert "usage error" in capsys.readouterr().err
    assert main(["learn", "--algo", "az", "--target", target]) == 2
    assert main(["learn", "--algo", "lstar", "--target", "exec:true"]) == 2
    assert main(["learn", "--algo", "lstar", "--mode", "wfa", "--target", target]) == 2
    assert main(["learn", "--algo", "kv", "--mode", "wfa", "--target", f"file:{files['w1.wfa']}"]) == 2


def test_learn_black_box(files, tmp_path, d1, capsys):
    out = tmp_path / "h.dfa"
    report = tmp_path / "report.json"
    assert main(["learn", "--algo", "kv", "--target", serve_cmd(files["d1.dfa"]), "--bound", "2",
                 "--alphabet", "a b", "--out", str(out), "--report", str(report), "--trace"]) == 0
    assert dfa_isomorphic(parse_dfa(out.read_text()), d1)
    loaded = RunReport.from_json(report.read_text())
    assert loaded.outputs == [str(out)] and loaded.stats["phases"]["test"] > 0
    assert "equivalence rounds" in capsys.readouterr().err


def test_learn_wfa(files, tmp_path, w1):
    out = tmp_path / "h.wfa"
    assert main(["learn", "--mode", "wfa", "--target", f"file:{files['w1.wfa']}", "--out", str(out)]) == 0
    assert wfa_equiv(parse_wfa(out.read_text()), w1) is None
    out2 = tmp_path / "h2.wfa"
    assert main(["learn", "--mode", "wfa", "--target", serve_cmd(files["w1.wfa"]), "--bound", "2",
                 "--out", str(out2)]) == 0
    assert wfa_equiv(parse_wfa(out2.read_text()), w1) is None


def test_mode_mismatch(files):
    assert main(["learn", "--mode", "wfa", "--target", f"file:{files['d1.dfa']}"]) == 2


def test_minimize(files, tmp_path):
    out = tmp_path / "m.dfa"
    sets = tmp_path / "sets"
    assert main(["minimize", "--in", str(files["d2.dfa"]), "--out", str(out), "--emit-sets", str(sets)]) == 0
    assert parse_dfa(out.read_text()).size == 2
    assert read_word_list((sets / "S.words").read_text(), ("a",)) == [(), ("a",)]
    assert read_word_list((sets / "E.words").read_text(), ("a",)) == [()]
    wout = tmp_path / "m.wfa"
    assert main(["minimize", "--in", str(files["w1.wfa"]), "--out", str(wout), "--mode", "wfa"]) == 0
    assert parse_wfa(wout.read_text()).dim == 2
    assert main(["minimize", "--in", str(files["d1.dfa"]), "--mode", "wfa"]) == 2


def test_gentests(files, tmp_path):
    out = tmp_path / "suite.words"
    assert main(["gentests", "--in", str(files["d1.dfa"]), "--bound", "2", "--method", "w", "--out", str(out)]) == 0
    assert out.read_text().splitlines() == ["eps", "a", "b", "a a", "a b"]
    assert main(["gentests", "--in", str(files["d1.dfa"]), "--bound", "2", "--method", "hsi", "--out", str(out)]) == 0
    assert out.read_text().splitlines() == ["eps", "a", "b", "a a", "a b"]
    assert main(["gentests", "--in", str(files["d1.dfa"]), "--bound", "1"]) == 2


def test_equiv(files, tmp_path, capsys):
    assert main(["equiv", "--known", str(files["d1.dfa"]), "--black", serve_cmd(files["d1.dfa"]), "--bound", "2"]) == 0
    assert capsys.readouterr().out.startswith("pass")
    other = tmp_path / "all.dfa"
    other.write_text("dfa\nalphabet: a b\nstates: q0\ninitial: q0\naccepting: q0\nq0 a -> q0\nq0 b -> q0\n")
    assert main(["equiv", "--known", str(files["d1.dfa"]), "--black", serve_cmd(other), "--bound", "2"]) == 1
    assert capsys.readouterr().out.strip() == "counterexample: a"
    assert main(["equiv", "--known", str(files["d1.dfa"]), "--black", serve_cmd(other)]) == 2


def test_format_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.dfa"
    bad.write_text("dfa\nalphabet: a\nstates: q0\ninitial: q9\naccepting:\nq0 a -> q0\n")
    assert main(["minimize", "--in", str(bad)]) == 2
    assert "line" in capsys.readouterr().err


def test_random_is_seeded(tmp_path):
    a, b = tmp_path / "a.dfa", tmp_path / "b.dfa"
    main(["random", "--states", "5", "--seed", "7", "--out", str(a)])
    main(["random", "--states", "5", "--seed", "7", "--out", str(b)])
    assert a.read_text() == b.read_text()
    assert parse_dfa(a.read_text()).size == 5
    w = tmp_path / "w.wfa"
    main(["random", "--mode", "wfa", "--states", "3", "--out", str(w)])
    assert parse_wfa(w.read_text()).dim == 3


def test_run_report_round_trip():
    report = RunReport(["out.dfa"], {"membership": 3, "cache_hits": 1, "equivalence_rounds": 1,
                                     "phases": {"fill": 3}}, 1, 0.25)
    assert RunReport.from_json(report.to_json()) == report
    assert "membership queries: 3" in report.render()


def test_console_script_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "alfa", "gentests", "--in", str(files["d1.dfa"]), "--bound", "2"],
                          capture_output=True, text=True, timeout=30)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "eps"
