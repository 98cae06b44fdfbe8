import json

import pytest

from job.cli import COMMANDS, build_parser, run


@pytest.fixture
def a2_file(tmp_path):
    path = tmp_path / "a2.divide"
    assert run(["generate", "chebyshev", "2", "3", "--out", str(path)]) == 0
    return str(path)


def _fixture_file(tmp_path, name: str, suffix: str) -> str:
    path = tmp_path / f"{name}{suffix}"
    assert run(["generate", "fixture", name, "--out", str(path)]) == 0
    return str(path)


def test_build_parser__verbs() -> None:
    args = build_parser().parse_args(["winding", "x.divide", "--expr", "v1", "--field", "shifted-cut"])
    assert (args.verb, args.expr, args.field) == ("winding", "v1", "shifted-cut")


def test_run__usage_error(capsys) -> None:
    assert run(["nonsense"]) == 2
    assert run(["graph", "x.divide", "--format", "svg"]) == 2


def test_run__missing_file(capsys) -> None:
    assert run(["invariants", "/nonexistent/a.divide"]) == 1
    assert capsys.readouterr().err.startswith("error: ParseError:")


def test_run__unexpected_failure(a2_file, capsys, monkeypatch) -> None:
    def explode(args):
        raise RuntimeError("boom")

    monkeypatch.setitem(COMMANDS, "invariants", explode)
    assert run(["invariants", a2_file]) == 1
    assert "error: InternalError: RuntimeError: boom" in capsys.readouterr().err.splitlines()


def test_invariants(a2_file, capsys) -> None:
    assert run(["invariants", a2_file]) == 0
    assert capsys.readouterr().out.splitlines() == ["mu: 2", "delta: 1", "regions: 1", "branches: 1", "genus: 1"]


def test_validate__ok(a2_file, capsys) -> None:
    assert run(["validate", a2_file]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_validate__disjoint(tmp_path, capsys) -> None:
    path = _fixture_file(tmp_path, "disjoint", ".poly")
    capsys.readouterr()
    assert run(["validate", path]) == 1
    captured = capsys.readouterr()
    assert "DisjointBranches: (0,1)" in captured.out
    assert captured.err.startswith("error: ")


def test_graph__json(a2_file, capsys) -> None:
    assert run(["graph", a2_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["edges"] == [[0, 1]]


def test_graph__dot(a2_file, capsys) -> None:
    assert run(["graph", a2_file, "--format", "dot"]) == 0
    assert "s0 -- e0;" in capsys.readouterr().out


def test_fiber(a2_file, capsys) -> None:
    assert run(["fiber", a2_file]) == 0
    out = capsys.readouterr().out
    assert "genus: 1\nboundary: 1\nchi: -1\n" in out
    assert run(["fiber", a2_file, "--subsurface", "0"]) == 0
    assert "chi: 0\nboundary: 2\ngenus: 0\n" in capsys.readouterr().out


def test_winding__all_distinguished(a2_file, capsys) -> None:
    assert run(["winding", a2_file]) == 0
    assert capsys.readouterr().out.splitlines() == ["v0: 0", "v1: 0"]


def test_winding__twisted(a2_file, capsys) -> None:
    assert run(["winding", a2_file, "--expr", "T(v0)^+1(v1)"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "curve: T(v0)^+1(v1)"
    assert lines[-1] == "winding: 0"


def test_winding__curve_takes_base(a2_file, capsys) -> None:
    assert run(["winding", a2_file, "--curve", "T(v0)^+1(v1)"]) == 1
    assert capsys.readouterr().err.startswith("error: ParseError")


def test_toggle__fixture_script(tmp_path, capsys) -> None:
    path = _fixture_file(tmp_path, "case2", ".json")
    assert run(["toggle", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["tripod"] == "(1,4,4)"
    assert payload["script"] == "3->4; 8->9"
    assert payload["smith"] == [1] * 10


def test_toggle__bad_step(tmp_path, capsys) -> None:
    path = _fixture_file(tmp_path, "case2", ".json")
    assert run(["toggle", path, "--script", "1->9"]) == 1
    assert capsys.readouterr().err.startswith("error: IncoherentTriangle")


def test_toggle__graph_json(a2_file, tmp_path, capsys) -> None:
    graph_path = tmp_path / "a2.json"
    assert run(["graph", a2_file]) == 0
    graph_path.write_text(capsys.readouterr().out)
    assert run(["toggle", str(graph_path), "--script", ""]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["vertices"] == [0, 1]
    assert payload["tripod"] is None


def test_assemble__chebyshev_3_10(tmp_path, capsys) -> None:
    path = tmp_path / "c310.divide"
    assert run(["generate", "chebyshev", "3", "10", "--out", str(path)]) == 0
    assert run(["assemble", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["core_type"] == "(1,2,6)"
    assert payload["final"] == {"genus": 9, "boundary": 1}


def test_generate__stdout(capsys) -> None:
    assert run(["generate", "dn", "4"]) == 0
    assert json.loads(capsys.readouterr().out) == {"0": [1, 2, 3], "1": [0], "2": [0], "3": [0]}


def test_generate__bad_params(capsys) -> None:
    assert run(["generate", "pencil", "3"]) == 1
    assert capsys.readouterr().err.startswith("error: BadParams")


def test_winding__strip_loop(a2_file, capsys) -> None:
    assert run(["winding", a2_file, "--curve", "o0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["curve: o0", "class: 0,0", "winding: 1"]


def test_assemble__chebyshev_4_5_records_a_move(tmp_path, capsys) -> None:
    path = tmp_path / "c45.divide"
    assert run(["generate", "chebyshev", "4", "5", "--out", str(path)]) == 0
    assert run(["assemble", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["moves"]) == 1
    assert payload["core_type"] in {"(1,2,6)", "(1,4,4)", "(2,3,4)", "(2,2,5)"}
    assert payload["final"] == {"genus": 6, "boundary": 1}


def test_assemble__no_core(a2_file, capsys) -> None:
    assert run(["assemble", a2_file]) == 1
    assert capsys.readouterr().err.startswith("error: NoCore:")
