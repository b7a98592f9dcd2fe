import json

import pytest

from tensortract.cli import main


def run(args):
    return main(list(args))


def read_csv(path):
    lines = path.read_text().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:] if line]
    return header, rows


def test_eigs_sobolev_min_csv(tmp_path):
    out = tmp_path / "eigs.csv"
    assert run(["eigs", "--family", "sobolev-min", "--count", "2",
                "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["j", "lambda", "alpha", "beta"]
    assert float(rows[0][1]) == pytest.approx(1.35103388, abs=1e-7)
    assert float(rows[1][1]) == pytest.approx(0.08521617, abs=1e-7)


def test_eigs_korobov_tie(tmp_path):
    out = tmp_path / "eigs.csv"
    assert run(["eigs", "--family", "korobov", "--alpha", "1", "--beta", "1",
                "--count", "3", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert [float(r[1]) for r in rows] == [1.0, 1.0, 1.0]


def test_eigs_cosh_json(tmp_path):
    out = tmp_path / "eigs.json"
    assert run(["eigs", "--family", "sobolev-cosh", "--count", "2",
                "--out", str(out), "--format", "json"]) == 0
    data = json.loads(out.read_text())
    lams = [row["lambda"] for row in data["eigenpairs"]]
    assert lams[0] == 1.0
    assert lams[1] == pytest.approx(0.091999668, abs=1e-9)


def test_oracle_eigs_small_grid(tmp_path):
    out = tmp_path / "oracle.csv"
    assert run(["oracle-eigs", "--family", "sobolev-min", "--count", "2",
                "--grid-size", "200", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert float(rows[0][1]) == pytest.approx(1.35103388, rel=1e-3)


def test_oracle_eigs_refine(tmp_path):
    out = tmp_path / "refined.csv"
    assert run(["oracle-eigs", "--family", "sobolev-min", "--count", "1",
                "--refine", "100,200", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["j", "lambda", "error_estimate"]
    assert float(rows[0][1]) == pytest.approx(1.3510338868783787, abs=1e-5)
    assert float(rows[0][2]) > 0.0


def test_complexity_command(tmp_path):
    out = tmp_path / "cx.json"
    assert run(["complexity", "--family", "korobov", "--alpha", "1",
                "--beta", "0.5", "--d", "1", "--eps", "0.6",
                "--out", str(out), "--format", "json"]) == 0
    data = json.loads(out.read_text())
    assert data["count"] == 3
    assert data["method"] == "dfs-multiset"
    assert not data["saturated"]


def test_complexity_std_lower_bound(capsys):
    assert run(["complexity", "--family", "korobov", "--alpha", "1",
                "--beta", "0.5", "--d", "2", "--eps", "0.5",
                "--info-class", "std", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lower_bound_only"] is True


def test_classify_command(capsys):
    assert run(["classify", "--family", "sobolev-min", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["classification_all"] == "qpt-not-pt"
    assert data["qpt_exponent"] == 1.0
    assert data["classification_std"] == "curse"
    assert data["goodcase_holds"] is True


def test_classify_korobov_tie(capsys):
    assert run(["classify", "--family", "korobov", "--alpha", "1.0",
                "--beta", "1.0", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["classification_all"] == "curse"
    assert data["classification_std"] == "curse"


def test_density_outputs_and_determinism(tmp_path, capsys):
    out = tmp_path / "fig"
    assert run(["density", "--samples", "257", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["unit_mass_defect"] < 1e-6
    csv_path, svg_path = tmp_path / "fig.csv", tmp_path / "fig.svg"
    first_csv = csv_path.read_bytes()
    first_svg = svg_path.read_bytes()
    assert run(["density", "--samples", "257", "--out", str(out)]) == 0
    capsys.readouterr()
    assert csv_path.read_bytes() == first_csv
    assert svg_path.read_bytes() == first_svg
    assert first_svg.startswith(b"<?xml")

    header, rows = read_csv(csv_path)
    assert header == ["x", "g1"]
    ys = [float(r[1]) for r in rows]
    # monotone in the direction fixed by the endpoint sign check
    direction = 1.0 if ys[-1] > ys[0] else -1.0
    assert all(direction * (b - a) > 0.0 for a, b in zip(ys, ys[1:]))
    assert ys[-1] / ys[0] == pytest.approx(1.5333081513115288, abs=1e-9)


def test_density_csv_round_trip_exact(tmp_path, capsys):
    out = tmp_path / "fig"
    assert run(["density", "--samples", "65", "--out", str(out)]) == 0
    capsys.readouterr()
    from tensortract.cli import density_profile
    xs, ys, _ = density_profile(65)
    _, rows = read_csv(tmp_path / "fig.csv")
    for (x, y), row in zip(zip(xs, ys), rows):
        assert float(row[0]) == x
        assert float(row[1]) == y


def test_density_rejects_other_families(capsys):
    assert run(["density", "--family", "sobolev-cosh"]) == 2


def test_verify_reduction_small(tmp_path):
    out = tmp_path / "report.json"
    assert run(["verify-reduction", "--problems", "4", "--trials", "2",
                "--samples", "6", "--seed", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["failures"] == 0
    assert len(data["reports"]) == 4


def test_verify_reduction_from_file(tmp_path):
    from tensortract import random_problem, save_problem
    path = tmp_path / "problem.txt"
    save_problem(random_problem(seed=2, m=4, k=2), path)
    out = tmp_path / "report.json"
    assert run(["verify-reduction", "--problem", str(path), "--trials", "2",
                "--samples", "6", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["instances"] == 1


def test_config_file_defaults_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family=korobov\nalpha=1\nbeta=0.5\nd=1\neps=0.6\nformat=json\n")
    assert run(["complexity", "--config", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 3
    # explicit flags win over the config value
    assert run(["complexity", "--config", str(cfg), "--eps", "0.9"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 1


def test_invalid_arguments_exit_code():
    assert run(["eigs", "--family", "korobov", "--alpha", "0.3",
                "--beta", "0.5", "--count", "2"]) == 2


def test_resource_guard_exit_code():
    assert run(["complexity", "--family", "korobov", "--alpha", "0.51",
                "--beta", "1.0", "--d", "2", "--eps", "0.000001"]) == 3


def test_reproduce_subset(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["reproduce", "--only", "1,3,4", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "checks passed" in text
    data = json.loads(out.read_text())
    assert all(row["pass"] for row in data)
    assert {row["criterion_id"] for row in data} == {"1", "3", "4"}


def test_reproduce_fail_hook(tmp_path, capsys):
    out = tmp_path / "report.csv"
    assert run(["reproduce", "--only", "1", "--fail", "1", "--out", str(out),
                "--format", "csv"]) == 4
    assert "FAIL" in capsys.readouterr().out


def test_density_needs_two_samples():
    assert run(["density", "--samples", "1"]) == 2


def test_svg_format_rejected_outside_density():
    assert run(["eigs", "--family", "sobolev-min", "--count", "2",
                "--format", "svg"]) == 2


def test_verify_reduction_byte_identical_for_same_seed(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify-reduction", "--problems", "3", "--trials", "2", "--samples", "5",
            "--seed", "11"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
