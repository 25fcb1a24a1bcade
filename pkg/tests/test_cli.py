import json
from pathlib import Path

import pytest

from tforms.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("field,code", [("p1", 0), ("e2", 0), ("e3", 0), ("e4", 1)])
def test_analyze_json(capsys, field, code):
    rc, out, _ = run(capsys, "analyze", "--field", field)
    assert rc == code
    assert out == (GOLDEN / f"analyze_{field}.json").read_text()


def test_analyze_markdown(capsys):
    rc, out, _ = run(capsys, "analyze", "--field", "e3", "--format", "md")
    assert rc == 0
    assert out == (GOLDEN / "analyze_e3.md").read_text()


def test_analyze_stage_error_exit(capsys):
    rc, out, err = run(capsys, "analyze", "--field", "e3", "--depth", "4", "--iterations", "6")
    assert rc == 1 and out == ""
    assert "toroidal system" in err


@pytest.mark.parametrize("field", ["e2", "e3", "e4"])
def test_toroidal_matches_golden(capsys, field):
    rc, out, _ = run(capsys, "toroidal", "--field", field)
    assert rc == 0
    assert out == (GOLDEN / f"toroidal_{field}.json").read_text()


@pytest.mark.parametrize("q,quotient,cover_quotient", [
    (2, [1, 2, 2], [1, 0, 2]), (3, [1, 3, 3], [1, 1, 3]), (4, [1, 4, 4], [1, 0, 4])])
def test_zeta(capsys, q, quotient, cover_quotient):
    rc, out, _ = run(capsys, "zeta", "--field", f"e{q}")
    assert rc == 0
    d = json.loads(out)
    assert d["quotient"] == quotient
    assert d["counts"] == {"k1": 1, "k2": 2 * q + 1}
    rc, out, _ = run(capsys, "zeta", "--field", f"e{q}", "--cover", "genus2")
    d = json.loads(out)
    assert d["quotient"] == cover_quotient
    assert len(d["cover"]["P"]) == 5


def test_zeta_projective_line(capsys):
    rc, out, _ = run(capsys, "zeta", "--field", "p1_3")
    assert rc == 0 and json.loads(out)["P"] == [1]


def test_graph_json_and_dot(capsys):
    rc, out, _ = run(capsys, "graph", "--field", "e3")
    d = json.loads(out)
    assert rc == 0 and d["validation"]["ok"]
    assert {"src": "c1", "dst": "z0", "w": 2} in d["graph"]["arcs"]
    rc, out, _ = run(capsys, "graph", "--field", "e3", "--dot")
    assert out.startswith('digraph "e3"')
    assert '"c0" -> "c1" [label="4"];' in out


@pytest.mark.parametrize("q", [2, 3, 4])
def test_reduce_json(capsys, q):
    rc, out, _ = run(capsys, "reduce", "--field", f"e{q}", "--place", "1", "--format", "json")
    d = json.loads(out)
    assert rc == 0
    assert len(d["reductions"]) == q * q + 1
    assert d["tally"] == {"c2": q + 1, "t1": q * (q - 1)}
    assert all(r["chain"] for r in d["reductions"])


def test_reduce_text(capsys):
    rc, out, _ = run(capsys, "reduce", "--field", "e2", "--place", "2")
    assert rc == 0
    assert out.strip().splitlines()[-1] == "tally: 2 t2, 3 c2"


def test_reduce_bad_place(capsys):
    rc, _, err = run(capsys, "reduce", "--field", "e2", "--place", "9")
    assert rc == 2 and "1..2" in err


def test_unknown_field_exits_with_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze", "--field", "e7"])
    assert info.value.code == 2
