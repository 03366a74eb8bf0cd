import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from fbst.cli import main
from fbst.report import diff_reports, load_report


def _simulate_csv(tmp_path, name="groups.csv", seed=7):
    path = tmp_path / name
    code = main([
        "simulate", "two-groups", "--n", "30,35", "--mu", "0.6,0.0",
        "--sd", "1,1", "--seed", str(seed), "--out", str(path),
    ])
    assert code == 0
    return path


def test_simulate_writes_metadata_comment(tmp_path, capsys):
    path = _simulate_csv(tmp_path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# fbst:")
    meta = json.loads(lines[0].split(":", 1)[1])
    assert meta["seed"] == 7
    assert "true_effect" in meta
    assert lines[1] == "group,value"
    assert len(lines) == 2 + 30 + 35
    err = capsys.readouterr().err
    assert "simulated 30+35 observations" in err


def test_simulate_stdout_and_labels(capsys):
    code = main([
        "simulate", "two-groups", "--n", "10", "--mu", "0.2,0.1",
        "--sd", "0.9", "--labels", "treat,control", "--seed", "3",
    ])
    assert code == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[1] == "group,value"
    assert lines[2].startswith("treat,")
    assert lines[-1].startswith("control,")
    # one value for --n and --sd applies to both groups
    assert len(lines) == 2 + 20


def test_ttest_grid_report_and_plot(tmp_path, capsys):
    data = _simulate_csv(tmp_path)
    report_path = tmp_path / "report.json"
    plot_path = tmp_path / "plot.svg"
    code = main([
        "ttest", "--data", str(data), "--seed", "1",
        "--report", str(report_path), "--plot", str(plot_path), "--digits", "4",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "two-group test (grid method)" in out
    assert "ev against null" in out
    assert "BF01" in out

    report = load_report(report_path)
    assert report["tool"] == "fbst"
    assert report["schema_version"] == 1
    assert report["error"] is None
    assert report["config"]["subcommand"] == "ttest"
    assert report["config"]["seed"] == 1
    results = report["results"]
    assert 0.0 <= results["evalue"]["ev_against"] <= 1.0
    assert results["evalue"]["ev_against"] + results["evalue"]["ev_support"] == 1.0
    assert results["evalue"]["dims"] == {"k": 3, "h": 2}
    assert results["evalue"]["pv0"] is not None
    assert set(results["bayes_factor"]) == {"bf01", "bf10"}
    assert results["hpd"]["lower"] < results["hpd"]["upper"]
    assert results["data"]["true_effect"] == pytest.approx(0.6, rel=1e-12)

    root = ET.fromstring(plot_path.read_text())
    assert root.tag.endswith("svg")


def test_ttest_reports_are_deterministic(tmp_path):
    data = _simulate_csv(tmp_path)
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["ttest", "--data", str(data), "--seed", "5", "--report", str(r1)]) == 0
    assert main(["ttest", "--data", str(data), "--seed", "5", "--report", str(r2)]) == 0
    # everything except the self-referential report path must match exactly
    assert diff_reports(load_report(r1), load_report(r2),
                        ignore=("created_at", "report")) == []


def test_ttest_stdin_verify_and_tamper(tmp_path, capsys, monkeypatch):
    rng = np.random.default_rng(12)
    rows = ["group,value"]
    rows += [f"a,{v:.6f}" for v in rng.normal(0.5, 1.0, 25)]
    rows += [f"b,{v:.6f}" for v in rng.normal(0.0, 1.0, 25)]
    csv_text = "\n".join(rows) + "\n"

    report_path = tmp_path / "stdin.json"
    monkeypatch.setattr("sys.stdin", io.StringIO(csv_text))
    code = main(["ttest", "--stdin", "--seed", "2", "--report", str(report_path)])
    assert code == 0
    report = load_report(report_path)
    assert report["config"]["data"] is None
    assert report["config"]["data_inline"] == csv_text
    capsys.readouterr()

    # the inline data makes the report self-contained, so verify re-runs it
    assert main(["--verify", str(report_path)]) == 0
    assert "reproduces exactly" in capsys.readouterr().out

    report["results"]["evalue"]["ev_against"] = 0.123456
    from fbst.report import write_report

    write_report(report_path, report)
    assert main(["--verify", str(report_path)]) == 1
    err = capsys.readouterr().err
    assert "verification failed" in err
    assert "ev_against" in err


def test_ttest_mcmc_writes_draws(tmp_path, capsys):
    data = _simulate_csv(tmp_path)
    report_path = tmp_path / "mcmc.json"
    draws_path = tmp_path / "draws.csv"
    code = main([
        "ttest", "--data", str(data), "--method", "mcmc",
        "--iterations", "2800", "--warmup", "300", "--seed", "4",
        "--report", str(report_path), "--draws", str(draws_path),
    ])
    assert code == 0
    lines = draws_path.read_text().splitlines()
    assert lines[0] == "chain,mu,log_sigma,effect"
    assert len(lines) == 1 + 4 * 2500
    report = load_report(report_path)
    diag = report["results"]["diagnostics"]
    assert set(diag["rhat"]) == {"mu", "log_sigma", "effect"}
    assert max(diag["rhat"].values()) < 1.1
    assert report["results"]["evalue"]["method"] == "samples"
    assert report["results"]["evalue"]["estimator_sd"] is not None
    capsys.readouterr()
    # the verify path re-runs the sampler deterministically
    assert main(["--verify", str(report_path)]) == 0


def test_ttest_interval_null_and_custom_reference(tmp_path, capsys):
    data = _simulate_csv(tmp_path)
    report_path = tmp_path / "interval.json"
    code = main([
        "ttest", "--data", str(data), "--seed", "1",
        "--null-interval=-0.2,0.2", "--reference", "normal(0, 1.5)",
        "--report", str(report_path),
    ])
    assert code == 0
    report = load_report(report_path)
    assert report["config"]["null_interval"] == [-0.2, 0.2]
    assert report["results"]["evalue"]["null"] == "interval(-0.2, 0.2)"
    assert "normal" in report["results"]["evalue"]["reference"]
    # interval nulls have no point for the asymptotic p-value or Bayes factor
    assert report["results"]["evalue"]["pv0"] is None
    assert "bayes_factor" not in report["results"]
    capsys.readouterr()


def test_evalue_subcommand(tmp_path, capsys):
    rng = np.random.default_rng(9)
    draws_path = tmp_path / "effect.csv"
    values = rng.normal(0.4, 0.15, 12_000)
    draws_path.write_text(
        "chain,effect\n" + "\n".join(f"0,{v:.12g}" for v in values) + "\n"
    )
    report_path = tmp_path / "ev.json"
    code = main([
        "evalue", "--data", str(draws_path), "--column", "effect",
        "--report", str(report_path),
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "e-value from 12000 draws" in out
    report = load_report(report_path)
    assert report["results"]["n_draws"] == 12_000
    # without --dims there is no standardized e-value
    assert report["results"]["evalue"]["sev_against"] is None
    assert report["results"]["evalue"]["ev_against"] > 0.9

    with_dims = tmp_path / "ev2.json"
    code = main([
        "evalue", "--data", str(draws_path), "--column", "effect",
        "--dims", "1,0", "--report", str(with_dims),
    ])
    assert code == 0
    ev = load_report(with_dims)["results"]["evalue"]
    assert ev["sev_against"] == ev["ev_against"]


REGRESS_N = 60


def _regression_csv(tmp_path):
    rng = np.random.default_rng(20)
    x = rng.normal(size=REGRESS_N)
    grp = rng.choice(["no", "yes"], REGRESS_N)
    y = 1.0 + 1.5 * x + 0.8 * (grp == "yes") + rng.normal(0.0, 0.5, REGRESS_N)
    path = tmp_path / "reg.csv"
    rows = ["y,x,grp"] + [f"{yi:.10g},{xi:.10g},{g}" for yi, xi, g in zip(y, x, grp)]
    path.write_text("\n".join(rows) + "\n")
    return path


def test_regress_report(tmp_path, capsys):
    data = _regression_csv(tmp_path)
    report_path = tmp_path / "regress.json"
    code = main([
        "regress", "--data", str(data), "--formula", "y ~ x + grp",
        "--iterations", "3000", "--warmup", "500", "--seed", "8",
        "--report", str(report_path),
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "linear regression: 60 rows used of 60" in out
    assert "grpyes" in out

    report = load_report(report_path)
    results = report["results"]
    assert results["data"]["names"] == ["intercept", "x", "grpyes"]
    assert results["data"]["encodings"]["grp"]["baseline"] == "no"
    params = results["parameters"]
    assert set(params) == {"intercept", "x", "grpyes", "sigma"}
    assert params["x"]["mean"] == pytest.approx(1.5, abs=0.2)
    assert max(results["diagnostics"]["rhat"].values()) < 1.05
    assert set(results["evalues"]) == {"x", "grpyes"}
    ev_x = results["evalues"]["x"]
    assert ev_x["ev_against"] > 0.95
    assert ev_x["pv0"] is not None
    assert ev_x["dims"] == {"k": 4, "h": 3}
    assert set(results["bayes_factors"]) == {"x", "grpyes"}
    assert results["bayes_factors"]["x"]["bf01"] < 0.5


def test_regress_convergence_failure_exit_2(tmp_path, capsys):
    data = _regression_csv(tmp_path)
    report_path = tmp_path / "failed.json"
    code = main([
        "regress", "--data", str(data), "--formula", "y ~ x + grp",
        "--iterations", "40", "--warmup", "5", "--seed", "1",
        "--report", str(report_path),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err
    report = load_report(report_path)
    assert report["results"] is None
    assert report["error"]["type"] == "ConvergenceError"
    assert max(report["error"]["rhat"].values()) > 1.05
    capsys.readouterr()
    # a failed run records no results, so there is nothing to verify
    assert main(["--verify", str(report_path)]) == 1


def test_usage_and_data_errors_exit_1(tmp_path, capsys):
    assert main([]) == 1
    assert main(["ttest", "--data", "x.csv"]) == 1  # missing --seed
    assert main(["ttest", "--data", str(tmp_path / "nope.csv"), "--seed", "1"]) == 1
    assert main(["ttest", "--bogus-flag", "--seed", "1"]) == 1
    assert main(["simulate", "two-groups", "--n", "1,2,3", "--mu", "0",
                 "--sd", "1", "--seed", "1"]) == 1
    data = _simulate_csv(tmp_path)
    assert main(["ttest", "--data", str(data), "--value-col", "score", "--seed", "1"]) == 1
    err = capsys.readouterr().err
    assert "error:" in err


def test_help_and_version_exit_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "FBST_THREADS" in capsys.readouterr().out
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "fbst" in capsys.readouterr().out
