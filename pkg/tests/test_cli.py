import json

import pytest

from descentkit import cli, descent


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_homology_of_shipped_circle(capsys):
    code, out = run(["homology", "circle"], capsys)
    assert code == 0
    assert json.loads(out)["homology"] == {"0": 1, "1": 1, "2": 0}


def test_homology_of_boundary_tetrahedron(capsys):
    code, out = run(["homology", "boundary_simplex_3", "-N", "4", "--format", "text"], capsys)
    assert code == 0
    assert out.split("\n")[:4] == ["H_0 = 1", "H_1 = 0", "H_2 = 1", "H_3 = 0"]


@pytest.mark.parametrize("how", [["point"], ["--input", "point"]])
def test_derive_point_over_product_monoid(capsys, how):
    code, out = run(["derive", *how, "--triple", "QxQ", "-N", "4"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == {"0": 1, "1": 0, "2": 0, "3": 0}


def test_derive_with_monoid_file(capsys):
    path = cli.fixture_path("monoid_UT2")
    code, out = run(["derive", "point", "--triple", str(path), "-N", "3"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == {"0": 1, "1": 0, "2": 0}


def test_resolve_disk_is_acyclic(capsys):
    code, out = run(["resolve", "disk_cochain_0", "--triple", "Q[t]/t2"], capsys)
    assert code == 0
    assert set(json.loads(out)["homology"].values()) == {0}


def test_spectral_page_of_flag(capsys):
    code, out = run(["ss", "flag_shifted", "-r", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["consistent"] and data["r"] == 1


def test_suite_s7_fifty_passes(capsys, tmp_path):
    out = tmp_path / "s7.json"
    code = cli.main(["suite", "--suite", "S7", "--seed", "1", "--instances", "50", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] == 50 and rep["failures"] == []


def test_reports_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.main(["suite", "--suite", "s3,s8", "--seed", "5", "--instances", "5",
                         "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_failure_writes_counterexample_that_rechecks(tmp_path, monkeypatch, capsys):
    s = descent.SUITES["s3"]
    original = s.check

    def flaky(inst, N, Q):
        ok, detail = original(inst, N, Q)
        total = sum(c.dim(q) for c in inst["X"].objects for q in c.dims) if "X" in inst else 0
        return (ok and total % 2 == 0), detail
    monkeypatch.setattr(s, "check", flaky)
    out = tmp_path / "rep.json"
    code = cli.main(["suite", "--suite", "s3", "--seed", "0", "--instances", "8", "--out", str(out)])
    rep = json.loads(out.read_text())
    if rep["ok"]:
        pytest.skip("sabotage did not trigger on these instances")
    assert code == 1
    files = sorted(tmp_path.glob("counterexample-s3-0-*.json"))
    assert len(files) == len(rep["failures"])
    assert cli.main(["recheck", str(files[0])]) == 1
    monkeypatch.setattr(s, "check", original)
    assert cli.main(["recheck", str(files[0])]) == 0


def test_gen_writes_instances(tmp_path):
    assert cli.main(["gen", "--suite", "s7", "--instances", "3", "--out", str(tmp_path)]) == 0
    files = sorted(tmp_path.glob("s7-0-*.json"))
    assert len(files) == 3
    doc = json.loads(files[0].read_text())
    assert doc["suite"] == "s7" and doc["index"] == 0


def test_exit_codes_for_bad_input(tmp_path, capsys):
    bad_dd = tmp_path / "dd.json"
    one = [["1"]]
    bad_dd.write_text(json.dumps({"type": "complex", "direction": "chain", "dims": {"0": 1, "1": 1, "2": 1},
                                  "diff": {"1": one, "2": one}}))
    assert cli.main(["homology", str(bad_dd)]) == 3
    malformed = tmp_path / "m.json"
    malformed.write_text(json.dumps({"type": "complex", "direction": "chain", "dims": {"0": 1, "1": 1},
                                     "diff": {"1": [["1", "2"]]}}))
    assert cli.main(["homology", str(malformed)]) == 2
    notjson = tmp_path / "x.json"
    notjson.write_text("{")
    assert cli.main(["homology", str(notjson)]) == 2
    assert cli.main(["suite", "--suite", "nope"]) == 2
    assert cli.main(["suite", "--suite", "s3", "-N", "9"]) == 2
    assert cli.main(["homology", "no_such_fixture"]) == 2
    assert cli.main(["derive", "point", "--triple", "Z/2"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["homology"])
    assert exc.value.code == 2
