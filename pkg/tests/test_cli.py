import csv
import json

import numpy as np
import pytest

from rangekit.cli import (CSV_HEADER, bench_rows, generate_points, instance_to_json, main,
                          parse_instance_text, rows_to_csv)


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def f3_file(tmp_path):
    return _write(tmp_path / "f3.json", {"dimension": 1, "alpha": 1, "points": [[3], [0], [1]]})


def _solve(args, capsys):
    assert main(["solve"] + args) == 0
    return json.loads(capsys.readouterr().out)


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["gen", "--dist", "uniform", "--n", "4", "--dim", "2", "--seed", "7", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_shapes():
    assert generate_points("uniform", 1, 1, 123).shape == (1, 1)
    pts = generate_points("collinear-noise", 5, 2, 1)
    assert np.abs(pts[:, 1]).max() <= 0.01
    assert np.all(np.diff(pts[:, 0]) > 0)
    assert generate_points("clustered", 9, 3, 2).shape == (9, 3)
    assert main(["gen", "--n", "0"]) == 1


def test_instance_round_trip(tmp_path):
    text = instance_to_json(2, 1.0, [[0.5, 0.25], [1.0, 2.0]])
    obj = parse_instance_text(text)
    assert instance_to_json(obj["dimension"], obj["alpha"], obj["points"]) == text


def test_plain_text_importer(tmp_path, capsys):
    p = tmp_path / "f3.txt"
    p.write_text("1 3 1\n0\n1\n3\n")
    assert _solve(["exact1d", str(p)], capsys)["cost"] == pytest.approx(5)


def test_solve_reports_input_order(f3_file, capsys):
    out = _solve(["exact1d", f3_file], capsys)
    assert out["ranges"] == [2.0, 1.0, 2.0]        # input order (3, 0, 1)
    assert out["cost"] == pytest.approx(5) and out["valid"] is True
    assert list(out) == ["algorithm", "cost", "ranges", "valid", "t", "params", "elapsed_ms"]


def test_solve_examples(tmp_path, f3_file, capsys):
    sq = _write(tmp_path / "sq.json", {"dimension": 2, "alpha": 1, "points": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    assert _solve(["brute", sq], capsys)["cost"] == pytest.approx(4)
    assert main(["solve", "approx", f3_file, "--alpha", "2"]) == 2
    assert main(["solve", "exact1d", sq]) == 2
    assert main(["solve", "brute", sq, "--cap", "3"]) == 3
    assert main(["solve", "exact1d", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1, "alpha": 1, "points": [[0], [0]]}')
    assert main(["solve", "exact1d", str(bad)]) == 1


def test_verify(tmp_path, f3_file, capsys):
    good = _write(tmp_path / "good.json", {"algorithm": "x", "cost": 5, "ranges": [2, 1, 2], "valid": True,
                                            "t": None, "params": {}, "elapsed_ms": 0})
    assert main(["verify", f3_file, good]) == 0
    assert main(["verify", f3_file, good, "--t", "1"]) == 0
    bad = _write(tmp_path / "bad.json", {"algorithm": "x", "cost": 3, "ranges": [1, 1, 1], "valid": True,
                                          "t": None, "params": {}, "elapsed_ms": 0})
    assert main(["verify", f3_file, bad]) == 2
    report = capsys.readouterr().out
    assert "connectivity: FAIL" in report
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["verify", f3_file, str(tmp_path / "junk.json")]) == 1


def test_bench_csv(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--algs", "exact1d,brute", "--sizes", "3,12", "--seeds", "0", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 5
    assert rows[4][7] == "error:TooLarge"
    assert rows[1][6] == rows[2][6]           # brute and exact1d agree at n = 3


def test_bench_empty_sizes(tmp_path):
    assert rows_to_csv(bench_rows(["exact1d"], [], [0])) == ",".join(CSV_HEADER) + "\n"


def test_bench_exact_matches_oracle():
    rows = bench_rows(["exact1d", "brute"], [4, 6, 8], [0, 1])
    for a, b in zip(rows[::2], rows[1::2]):
        assert float(a["cost"]) == pytest.approx(float(b["cost"]), rel=1e-9)
