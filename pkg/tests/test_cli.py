import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

import hessint as h
from hessint.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    data_lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    comments = dict(ln[2:].split("=", 1) for ln in text.splitlines() if ln.startswith("# "))
    rows = list(csv.DictReader(io.StringIO("\n".join(data_lines))))
    return comments, rows


def test_bounds_row_values(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--n", "3", "--ratio", "2",
                           "--k", "1", "--reproducible")
    assert code == 0
    comments, rows = parse_csv(out)
    assert comments["command"] == "bounds"
    assert "generated_at" not in comments
    assert len(rows) == 1
    row = rows[0]
    assert row["epsilon_upper"] == "0.59999999999999998"  # 17 significant digits
    assert float(row["c"]) == h.pucci_c(h.Ellipticity(3, 2.0, 1))
    assert float(row["epsilon_global"]) == h.epsilon_global(h.Ellipticity(3, 2.0, 1))


def test_bounds_invalid_rank_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "bounds", "--n", "3", "--ratio", "2", "--k", "3")
    assert code == 2
    assert "error" in err.lower()


def test_sweep_normalized_column_and_k_rules(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n-range", "3:8", "--ratios", "1.5,2",
                           "--k-rule", "half", "--reproducible")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 12
    for row in rows:
        n, k = int(row["n"]), int(row["k"])
        assert k == max(1, n // 2 - 1)
        expected = float(row["refined_lower"]) * float(row["ratio"]) ** (n - k)
        assert math.isclose(float(row["refined_lower_normalized"]), expected, rel_tol=1e-15)


def test_sweep_explicit_list(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n-range", "3,5", "--ratios", "2",
                           "--reproducible")
    assert code == 0
    _, rows = parse_csv(out)
    assert [int(r["n"]) for r in rows] == [3, 5]
    assert all(int(r["k"]) == 1 for r in rows)


def test_lambertw_json_round_trip(capsys):
    code, out, _ = run_cli(capsys, "lambertw", "--branch", "-1", "--z=-0.2,-0.05",
                           "--format", "json", "--reproducible")
    assert code == 0
    doc = json.loads(out)
    assert doc["provenance"]["command"] == "lambertw"
    assert len(doc["rows"]) == 2
    for row in doc["rows"]:
        expected = h.lambert_wm1(row["z"]).value
        assert row["value"] == expected
        assert row["residual"] <= 1e-12


def test_lambertw_domain_failure(capsys):
    code, _, err = run_cli(capsys, "lambertw", "--branch", "-1", "--z", "0.5")
    assert code == 2
    assert "error" in err.lower()


def test_reproducible_runs_are_byte_identical(capsys):
    args = ("counterexample", "--n", "3", "--ratio", "2", "--eps", "0.7",
            "--mrange", "3:6", "--reproducible")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_timestamp_present_without_reproducible(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--n", "3", "--ratio", "2")
    assert code == 0
    comments, _ = parse_csv(out)
    assert "generated_at" in comments


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.csv"
    code, out, _ = run_cli(capsys, "bounds", "--n", "3", "--ratio", "2",
                           "--output", str(target), "--reproducible")
    assert code == 0
    assert out == ""
    comments, rows = parse_csv(target.read_text())
    assert comments["command"] == "bounds"
    assert len(rows) == 1


def test_t0_beta_round_trip_row(capsys):
    code, out, _ = run_cli(capsys, "t0", "--n", "3", "--beta", "2", "--reproducible")
    assert code == 0
    _, rows = parse_csv(out)
    row = rows[0]
    assert float(row["t0_expected"]) == 1.5
    assert math.isclose(float(row["t0"]), 1.5, rel_tol=1e-8)
    assert math.isclose(float(row["ratio"]), h.rho_for_beta(3, 2.0), rel_tol=1e-15)


def test_t0_requires_ratio_or_beta(capsys):
    code, _, err = run_cli(capsys, "t0", "--n", "3")
    assert code == 2
    assert "ratio" in err and "beta" in err


def test_counterexample_scan_rows(capsys):
    code, out, _ = run_cli(capsys, "counterexample", "--n", "3", "--ratio", "2",
                           "--eps", "0.7", "--mrange", "3:10", "--reproducible")
    assert code == 0
    comments, rows = parse_csv(out)
    assert comments["condition_ok"] == "True"
    assert float(comments["alpha"]) == 3.0
    assert float(comments["fit_exponent"]) > 0.0
    bounds = [float(r["lower_bound"]) for r in rows]
    assert [int(r["m"]) for r in rows] == list(range(3, 11))
    assert all(b > a for a, b in zip(bounds, bounds[1:]))
    scan = h.divergence_scan(3, 2.0, 0.7, range(3, 11))
    assert bounds == list(scan.lower_bounds)


def test_counterexample_condition_failure_notes(capsys):
    code, out, _ = run_cli(capsys, "counterexample", "--n", "3", "--ratio", "2",
                           "--eps", "0.6", "--mrange", "3:6", "--reproducible")
    assert code == 0
    comments, rows = parse_csv(out)
    assert comments["condition_ok"] == "False"
    assert "does not exceed" in comments["note"]
    assert rows == []


def test_theta_command(tmp_path, capsys):
    g = h.grid_from_callable(lambda p: -2.0 * (p ** 2).sum(axis=1), 2, 33,
                             domain_radius=1.0)
    grid_path = tmp_path / "parab.json"
    g.save(grid_path)
    code, out, _ = run_cli(capsys, "theta", "--input", str(grid_path),
                           "--a-max", "16", "--bisect-tol", "0.1", "--reproducible")
    assert code == 0
    comments, rows = parse_csv(out)
    assert comments["grid_hash"] == g.content_hash()
    assert float(comments["restrict_radius"]) == 0.5
    assert float(comments["converged_fraction"]) == 1.0
    measures = [float(r["measure"]) for r in rows]
    ts = [float(r["t"]) for r in rows]
    assert all(b >= a for a, b in zip(ts, ts[1:]))
    assert all(b <= a for a, b in zip(measures, measures[1:]))
    # theta = 4 everywhere: full measure below, zero above
    assert measures[0] > 0.7
    assert measures[-1] == 0.0


def test_theta_missing_grid_is_usage_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "theta", "--input", str(tmp_path / "absent.json"),
                           "--a-max", "4", "--bisect-tol", "0.5")
    assert code == 2
    assert "error" in err.lower()


def test_decay_degenerate_exits_3_with_partial_report(tmp_path, capsys):
    g = h.grid_from_callable(lambda p: (p ** 2).sum(axis=1), 2, 33, domain_radius=1.0)
    grid_path = tmp_path / "convex.json"
    g.save(grid_path)
    code, out, err = run_cli(capsys, "decay", "--input", str(grid_path),
                             "--delta", "1", "--levels", "5", "--n", "2",
                             "--ratio", "2", "--reproducible")
    assert code == 3
    assert "warning" in err.lower()
    comments, rows = parse_csv(out)
    assert "warning" in comments
    assert len(rows) == 6
    assert all(float(r["count_measure"]) == 0.0 for r in rows)


def test_decay_normal_run(tmp_path, capsys):
    g = h.grid_from_callable(lambda p: -8.0 * (p ** 2).sum(axis=1), 2, 33,
                             domain_radius=1.0)
    grid_path = tmp_path / "steep.json"
    g.save(grid_path)
    code, out, err = run_cli(capsys, "decay", "--input", str(grid_path),
                             "--delta", "1", "--levels", "6", "--n", "2",
                             "--ratio", "2", "--reproducible")
    assert code == 0
    assert err == ""
    comments, rows = parse_csv(out)
    assert float(comments["theoretical_ratio"]) == 0.875
    counts = [float(r["count_measure"]) for r in rows]
    assert all(b <= a + 1e-12 for a, b in zip(counts, counts[1:]))


def test_config_file_fills_parameters(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"ratio": 2.0}))
    code, out, _ = run_cli(capsys, "t0", "--n", "3", "--config", str(cfg),
                           "--reproducible")
    assert code == 0
    _, rows = parse_csv(out)
    assert math.isclose(float(rows[0]["t0"]), 3.0 * (math.e - 1.0) / math.e, rel_tol=1e-12)


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"ratio": 2.0, "wavelength": 13}))
    code, _, err = run_cli(capsys, "t0", "--n", "3", "--config", str(cfg))
    assert code == 2
    assert "wavelength" in err


def test_threads_flag_accepted(capsys):
    code, _, _ = run_cli(capsys, "bounds", "--n", "3", "--ratio", "2",
                         "--threads", "4", "--reproducible")
    assert code == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hessint.cli", "bounds", "--n", "3", "--ratio", "2",
         "--reproducible"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "epsilon_upper" in proc.stdout
