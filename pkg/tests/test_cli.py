import csv
import json

import pytest

from cartan_hartogs.cli import Check, Report, main, report_json


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_coeffs_unit(capsys, tmp_path):
    out = tmp_path / "c.json"
    code, cap = run(capsys, "coeffs", "--type", "I", "--m", "1", "--n", "1", "--bigk", "1", "--bign", "1",
                    "--out", str(out))
    assert code == 0
    assert "b_2 = 1" in cap.out
    data = json.loads(out.read_text())
    assert data["schema"] == 1
    assert data["constants"]["b"] == [0, 0, 1]


def test_coeffs_k2(capsys, tmp_path):
    out = tmp_path / "c.json"
    code, _ = run(capsys, "coeffs", "--m", "1", "--n", "1", "--bigk", "2", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["constants"]["b"] == [0, 1, 1]


def test_missing_dimension_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["coeffs", "--n", "1"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["coeffs", "--m", "1", "--n", "1", "--p", "2"],
    ["curvature", "--type", "II", "--p", "2"],
    ["verify-metric", "--type", "III", "--q", "1"],
    ["coeffs", "--m", "1", "--n", "1", "--bigk", "-1"],
    ["equivalence", "--m", "1", "--n", "1", "--xmax", "1.5"],
    ["nonsense"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_verify_metric_ball(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, cap = run(capsys, "verify-metric", "--m", "1", "--n", "1", "--lambda", "3", "--samples", "10",
                    "--out", str(out))
    assert code == 0
    assert "PASS" in cap.out and len(cap.out.strip().splitlines()) == 1
    names = [c["name"] for c in json.loads(out.read_text())["checks"]]
    assert "ball_identity" in names and names == sorted(names)


def test_verify_metric_type_iv(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, _ = run(capsys, "verify-metric", "--type", "IV", "--n", "3", "--bign", "2", "--bigk", "1.5",
                  "--lambda", "2", "--samples", "5", "--out", str(out))
    assert code == 0
    assert [c["name"] for c in json.loads(out.read_text())["checks"]] == ["positivity_g_lambda_hessian"]


def test_verify_metric_conditioning_warning(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, cap = run(capsys, "verify-metric", "--m", "2", "--n", "1", "--bign", "2", "--samples", "30",
                    "--xmax", "0.999", "--out", str(out))
    assert code == 0
    assert "conditioning" in cap.err
    assert json.loads(out.read_text())["warnings"]


def test_curvature_and_csv(capsys, tmp_path):
    out = tmp_path / "c.csv"
    code, _ = run(capsys, "curvature", "--m", "2", "--n", "1", "--bign", "2", "--lambda", "5", "--samples", "5",
                  "--directions", "3", "--format", "csv", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["name", "passed", "samples", "max_abs_err", "max_rel_err"]
    assert all(r["passed"] == "true" for r in rows)


def test_equivalence_report(capsys, tmp_path):
    out = tmp_path / "e.json"
    code, _ = run(capsys, "equivalence", "--m", "1", "--n", "1", "--lambda", "3", "--samples", "5",
                  "--out", str(out))
    data = json.loads(out.read_text())
    assert code == 0
    assert data["constants"]["a"] == pytest.approx(1.0, abs=1e-10)


def test_failing_report_exit_code(capsys, monkeypatch):
    import cartan_hartogs.cli as cli

    def fake(args, domain):
        return Report("coeffs", domain.describe(), args.seed, checks=[Check("x", False, 1)])

    monkeypatch.setitem(cli._COMMANDS, "coeffs", fake)
    assert main(["coeffs", "--m", "1", "--n", "1"]) == 1


def test_json_encoding():
    rep = Report("t", {"type": "I"}, 42, checks=[Check("b", True, 1, 0.1), Check("a", True, 1)],
                 constants={"z": float("inf"), "y": 1 / 3})
    text = report_json(rep)
    data = json.loads(text)
    assert [c["name"] for c in data["checks"]] == ["a", "b"]
    assert data["constants"]["z"] == "inf"
    assert "0.33333333333333331" in text
    assert list(data) == sorted(data)


def test_deterministic(capsys, tmp_path):
    texts = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        run(capsys, "curvature", "--m", "2", "--n", "2", "--bigk", "0.5", "--lambda", "1.5", "--samples", "4",
            "--directions", "3", "--out", str(out))
        data = json.loads(out.read_text())
        data.pop("wall_time_ms")
        texts.append(json.dumps(data, sort_keys=True))
    assert texts[0] == texts[1]
