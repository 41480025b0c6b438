import json
from pathlib import Path

import pytest

from cfconj.cli import main

E_FORM_JSON = json.dumps({"beta": 3, "A": [[1], [0, 2], [1]], "B": [[1], [1], [1]], "head": []})
EQ16_JSON = json.dumps({
    "beta": 4,
    "A": [[-1, 3], [2], [0, 3], [2, 12]],
    "B": [[-1], [-1], [-1], [-1]],
    "head": [],
})
PHI18_JSON = json.dumps({"beta": 1, "A": [[18]], "B": [[-1]], "head": [[18, 1]]})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_eval_and_list(capsys):
    code, out, _ = run(capsys, "constants", "eval", "--name", "e", "--digits", "20")
    assert code == 0
    assert out.strip() == "2.71828182845904523536"
    code, out, _ = run(capsys, "constants", "list")
    assert code == 0
    names = [line.split("\t")[0] for line in out.strip().splitlines()]
    assert "e" in names and "pi" in names and names == sorted(names, key=names.index)


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["constants", "eval", "--digits", "5"])
    assert exc.value.code == 1


def test_computation_error_exit_code(capsys):
    code, _, err = run(capsys, "constants", "eval", "--name", "nope", "--digits", "5")
    assert code == 2
    assert "error" in err


def test_extract_signed(capsys):
    code, out, err = run(capsys, "extract", "--constant", "14/9", "--signs=-1,1", "--depth", "10")
    assert code == 0
    assert [int(x) for x in out.split()] == [2, 2, 4]
    assert "terminated" in err


def test_extract_catalog(capsys):
    code, out, _ = run(capsys, "extract", "--constant", "e", "--signs", "1", "--depth", "8")
    assert code == 0
    assert [int(x) for x in out.split()] == [2, 1, 2, 1, 1, 4, 1, 1, 6]


def test_bm_roundtrip(tmp_path, capsys):
    sample = tmp_path / "sample.txt"
    sample.write_text("\n".join("1 1 2 1 1 4 1 1 6 1 1 8 1 1 10 1 1 12".split()))
    code, out, _ = run(capsys, "bm", "--sample", str(sample))
    assert code == 0
    data = json.loads(out)
    assert data["L"] == 6
    assert data["connection"] == [0, 0, -2, 0, 0, 1]
    assert data["significant"] is True
    assert data["closed_form"]["beta"] == 3


def test_fold_cli(capsys):
    code, out, _ = run(capsys, "fold", "--form", E_FORM_JSON)
    assert code == 0
    data = json.loads(out)
    assert data["b"] == [-3, 4, 4]
    assert data["a"] == [8, 16, 8]
    assert data["start_index"] == 2


def test_simplify_cli(capsys):
    code, out, _ = run(capsys, "simplify", "--form", EQ16_JSON)
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "simple"
    assert data["form"]["beta"] == 6
    assert data["mobius"] == {"a": 0, "b": -1, "c": 1, "d": 1}


def test_predict_degrees_and_classify(capsys):
    code, out, _ = run(capsys, "predict-degrees", "--form", E_FORM_JSON)
    assert code == 0
    assert json.loads(out) == {"deg_a": 2, "deg_b": 2, "profile": [1, 1, 1, 1]}
    code, out, _ = run(capsys, "classify", "--form", E_FORM_JSON)
    assert json.loads(out)["verdict"] == "super-exponential"
    code, out, _ = run(capsys, "classify", "--form", json.dumps(
        {"beta": 1, "A": [[]], "B": [[-1]], "head": []}))
    assert json.loads(out)["verdict"] == "divergent"


def test_rate_with_csv_and_figure(tmp_path, capsys):
    csv_path = tmp_path / "phi18.csv"
    code, out, err = run(
        capsys, "rate", "--form", PHI18_JSON, "--target", "phi", "--emit-csv", str(csv_path)
    )
    assert code == 0
    assert abs(float(out.strip()) - 2.508) < 0.01
    assert "not the CF limit" in err
    rows = csv_path.read_text().strip().splitlines()
    assert rows[0] == "depth,log10_error"
    assert len(rows) == 102  # header + depths 0..100
    values = [float(r.split(",")[1]) for r in rows[1:]]
    assert all(a > b for a, b in zip(values, values[1:]))  # strictly decreasing
    assert (tmp_path / "phi18.png").exists()


def test_cf_eval_cli(capsys):
    code, out, _ = run(capsys, "cf", "eval", "--form", E_FORM_JSON, "--depth", "30", "--digits", "15")
    assert code == 0
    assert out.strip() == "0.718281828459045"


def test_search_cli_small(tmp_path, capsys):
    out_path = tmp_path / "results.json"
    code, _, err = run(
        capsys, "search", "--constant", "phi", "--max-degree", "1", "--coeff-range", "1",
        "--max-sign-period", "1", "--depth", "40", "--verify-digits", "200",
        "--out", str(out_path),
    )
    assert code == 0
    records = json.loads(out_path.read_text())
    assert isinstance(records, list) and records
    assert "complexity estimate" in err


def test_search_cli_empty_is_exit_zero(tmp_path, capsys):
    out_path = tmp_path / "empty.json"
    code, _, _ = run(
        capsys, "search", "--constant", "22/7", "--max-degree", "1", "--coeff-range", "1",
        "--max-sign-period", "1", "--depth", "30", "--verify-digits", "100",
        "--out", str(out_path),
    )
    assert code == 0
    assert json.loads(out_path.read_text()) == []


def test_verify_cli(tmp_path, capsys):
    out_path = tmp_path / "results.json"
    run(
        capsys, "search", "--constant", "phi", "--max-degree", "1", "--coeff-range", "1",
        "--max-sign-period", "1", "--depth", "40", "--verify-digits", "150",
        "--out", str(out_path),
    )
    code, out, err = run(capsys, "verify", "--records", str(out_path))
    assert code == 0
    assert "verified" in out
    assert "mismatch" not in out


def test_fixtures_cli(tmp_path, capsys):
    out_dir = tmp_path / "report"
    code, _, err = run(capsys, "fixtures", "--out", str(out_dir))
    assert code == 0
    rates = (out_dir / "rates.csv").read_text().strip().splitlines()
    assert rates[0] == "name,formula,reference_rate,measured_rate"
    assert len(rates) > 15
    assert (out_dir / "convergence.csv").exists()
    assert (out_dir / "convergence.png").exists()
    assert "VIOLATED" not in err


def test_search_report_dir_renders_csv_and_figures(tmp_path, capsys):
    out_path = tmp_path / "results.json"
    report_dir = tmp_path / "report"
    code, _, err = run(
        capsys, "search", "--constant", "phi", "--max-degree", "1", "--coeff-range", "1",
        "--max-sign-period", "1", "--depth", "40", "--verify-digits", "200",
        "--out", str(out_path), "--report-dir", str(report_dir),
    )
    assert code == 0
    csvs = sorted(report_dir.glob("*.csv"))
    assert csvs, "per-record convergence CSVs expected"
    assert all(p.with_suffix(".png").exists() for p in csvs)
    header = csvs[0].read_text().splitlines()[0]
    assert header == "depth,log10_error"
