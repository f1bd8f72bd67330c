import json

from obliquity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_tower_json(capsys):
    code, out, _ = run(capsys, "compute", "cyclictower(2,6)", "--n-max", "8")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "tower" and doc["schema_version"] == 1
    assert [r["stable"] for r in doc["rows"]] == [1, 2, 2, 4, 4, 4, 4, 8]
    assert all(r["stabilized"] for r in doc["rows"])
    assert doc["params"]["window"] == 2 and doc["params"]["n_max"] == 8


def test_compute_group(capsys):
    code, out, _ = run(capsys, "compute", "--expr", "quaternion(8)", "--n-max", "2")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["levels"] for r in rows] == [[1], [4]]


def test_json_and_csv_agree(capsys):
    _, js, _ = run(capsys, "compute", "wreathtower(cyclic(2),3)", "--n-max", "4", "--star")
    _, cs, _ = run(capsys, "compute", "wreathtower(cyclic(2),3)", "--n-max", "4", "--star", "--format", "csv")
    doc = json.loads(js)
    flat = [(r["n"], k, v) for r in doc["rows"] for k, v in enumerate(r["levels"], start=1)]
    lines = cs.strip().splitlines()
    assert lines[0] == "n,level,value,stabilized,stable"
    assert [tuple(map(int, ln.split(",")[:3])) for ln in lines[1:]] == flat


def test_output_is_deterministic(capsys):
    first = run(capsys, "compute", "sym(4)", "--n-max", "6", "--star")
    assert run(capsys, "compute", "sym(4)", "--n-max", "6", "--star") == first


def test_exit_codes(capsys):
    code, _, err = run(capsys, "compute", "wr(", "--n-max", "2")
    assert code == 2 and "offset 3" in err
    assert run(capsys, "verify", "bogus")[0] == 2
    assert run(capsys, "parse", "cyclictower(4,2)")[0] == 2
    assert run(capsys, "compute", "sym(8)", "--n-max", "2")[0] == 3
    assert run(capsys, "compute", "sym(7)", "--n-max", "2", "--star")[0] == 3


def test_parse_command(capsys):
    code, out, _ = run(capsys, "parse", "--expr", "prod( sym(3), cyclic(2))", "--check")
    assert code == 0 and out.strip() == "prod(sym(3),cyclic(2))"


def test_generators_file(tmp_path, capsys):
    f = tmp_path / "d8.txt"
    f.write_text("# dihedral of order 8\n(0 1 2 3)\n(0 2)\n")
    code, out, _ = run(capsys, "compute", "--generators-file", str(f), "--n-max", "2")
    assert code == 0 and [r["stable"] for r in json.loads(out)["rows"]] == [1, 4]


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "phi", "--max-order", "24")
    assert code == 0 and out.startswith("PASS phi")
    code, out, _ = run(capsys, "verify", "--suite", "trichotomy", "--max-order", "12")
    assert code == 0
