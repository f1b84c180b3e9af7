import json

import pytest

from dilutetl.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_basis_count(capsys):
    code, out = run_cli(capsys, "basis", "--n", "3", "--count")
    assert code == 0 and out.strip() == "51"


def test_basis_listing_round_trips(capsys):
    code, out = run_cli(capsys, "basis", "--n", "2", "--json")
    objs = json.loads(out)
    assert len(objs) == 9
    assert {"n", "edges", "isolated"} <= set(objs[0])


def test_multiply_loop(capsys):
    code, out = run_cli(capsys, "multiply",
                        "D2:(L1,L2)(R1,R2)", "D2:(L1,L2)(R1,R2)")
    assert code == 0 and out.strip() == "delta^1 * D2:(L1,L2)(R1,R2)"


def test_multiply_annihilated(capsys):
    code, out = run_cli(capsys, "multiply",
                        "D2:(L1,R1)(L2,R2)", "D2:(L1,R1)")
    assert code == 0 and out.strip() == "0"


def test_link_state(capsys):
    code, out = run_cli(capsys, "link-state", "--diagram",
                        "D6:(L1,L3)(L4,R1)(L5,R5)(R3,R4)")
    assert code == 0 and out.strip() == "DO()DO"


def test_ideal_intersection(capsys):
    code, out = run_cli(capsys, "ideal", "--n", "3", "L:1", "L:2")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 0


def test_idempotent_json(capsys):
    code, out = run_cli(capsys, "idempotent", "--link-state", "DO")
    obj = json.loads(out)
    assert code == 0
    assert obj["e"] == "D2:(L1,R1)"
    assert obj["conditions"] == [True] * 4 and obj["unit_verified"]


def test_mv_and_homology_round_trip(capsys, tmp_path):
    dump = tmp_path / "mv.json"
    code, out = run_cli(capsys, "mv", "--n", "2", "--ring", "Z",
                        "--delta", "0", "--emit-matrices", str(dump))
    obj = json.loads(out)
    assert code == 0 and obj["acyclic"]
    assert obj["tor"]["homology"][0] == {"degree": 0, "betti": 1, "torsion": []}
    code, out = run_cli(capsys, "homology", "--in", str(dump),
                        "--ring", "Z", "--delta", "0")
    res = json.loads(out)
    assert code == 0
    assert all(g["betti"] == 0 and not g["torsion"] for g in res["homology"])


def test_mv_zdelta_d_squared(capsys):
    code, out = run_cli(capsys, "mv", "--n", "3", "--ring", "Z[delta]",
                        "--delta", "generic")
    obj = json.loads(out)
    assert code == 0 and obj["d_squared_zero"]


def test_bar_tor_records(capsys):
    code, out = run_cli(capsys, "bar-tor", "--n", "2", "--ring", "Fp:2",
                        "--delta", "0", "--max-degree", "4")
    lines = [json.loads(l) for l in out.strip().splitlines()]
    assert code == 0
    assert [l["betti"] for l in lines] == [1, 0, 0, 0, 0]
    assert lines[0] == {"degree": 0, "betti": 1, "torsion": []}


def test_snf_file(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({
        "rows": 2, "cols": 2,
        "entries": [[0, 0, "2"], [0, 1, "4"], [1, 0, "6"], [1, 1, "8"]]}))
    code, out = run_cli(capsys, "snf", "--in", str(f))
    obj = json.loads(out)
    assert code == 0
    assert obj["invariant_factors"] == [2, 4] and obj["torsion"] == [2, 4]


def test_tl_compare(capsys):
    code, out = run_cli(capsys, "tl-compare", "--n", "2", "--ring", "Fp:2",
                        "--delta", "0", "--max-degree", "4")
    obj = json.loads(out)
    assert code == 0
    assert [g["betti"] for g in obj["classical"]] == [1, 1, 1, 1, 1]
    assert [g["betti"] for g in obj["dilute"]] == [1, 0, 0, 0, 0]


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["basis"])  # --n missing
    assert err.value.code == 2


def test_domain_errors_exit_two(capsys):
    assert main(["ideal", "--n", "3", "cup"]) == 2
    assert main(["multiply", "D2:(L1,R2)(L2,R1)", "D2:"]) == 2
    assert main(["bar-tor", "--n", "3", "--ring", "Q", "--delta", "0",
                 "--max-degree", "9"]) == 2
    err = capsys.readouterr().err
    assert "even n" in err and "cross" in err and "refused" in err


def test_verify_small(capsys, tmp_path):
    code, out = run_cli(capsys, "verify", "--n", "1,2", "--rings", "Z,Fp:2",
                        "--deltas", "0,1", "--max-bar-degree", "2",
                        "--out-dir", str(tmp_path))
    assert code == 0
    assert "[PASS]" in out and "[FAIL]" not in out
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["all_pass"] and report["schema_version"] == 1
