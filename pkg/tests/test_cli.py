import io
import json

import pytest

from perovkit.cli import ConfigError, RunConfig, main, run
from perovkit.example import builtin_spec


def run_quiet(**kw):
    buf = io.StringIO()
    code = run(RunConfig(**kw), out=buf)
    return code, buf.getvalue()


def test_check_builtin(tmp_path):
    report = tmp_path / "r.json"
    code, text = run_quiet(mode="check", report_path=str(report))
    assert code == 0 and text.rstrip().endswith("PASSED")
    data = json.loads(report.read_text())
    assert data["passed"] and data["check"]["overall_pass"]
    diag = [data["check"]["combined"][0][0], data["check"]["combined"][1][1]]
    assert diag == pytest.approx([0.0990, 0.0653], abs=2e-3)
    assert set(data) == {"config", "spec", "check", "failed_checks", "passed"}


def test_solve_coarse_grid(tmp_path):
    report = tmp_path / "r.json"
    code, _ = run_quiet(mode="solve", grid_N=64, report_path=str(report))
    assert code == 0
    sol = json.loads(report.read_text())["solve"]
    assert sol["converged"] and sol["in_ball"]
    assert max(sol["residual"]) <= 1e-4


def test_bad_spec_names_rho_condition(tmp_path):
    spec = builtin_spec().replace(P=1e3).to_dict()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(spec))
    code, text = run_quiet(mode="check", spec_path=str(path))
    assert code == 1
    assert "FAILED" in text and "rho_condition" in text


def test_regularity_failure_on_grid_hitting_the_zero():
    code, text = run_quiet(mode="solve", grid_N=96)
    assert code == 1 and "A_regularity" in text


def test_config_errors():
    with pytest.raises(ConfigError):
        RunConfig(grid_N=8)
    with pytest.raises(ConfigError):
        RunConfig(tol=0.0)
    with pytest.raises(ConfigError):
        RunConfig(mode="plot")
    assert main(["--grid", "4"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["--mode", "plot"])
    assert info.value.code == 2


def test_unparseable_spec(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run_quiet(mode="check", spec_path=str(path))[0] == 2
    path.write_text(json.dumps({**builtin_spec().to_dict(), "problem": "other"}))
    assert run_quiet(mode="check", spec_path=str(path))[0] == 2
    assert run_quiet(mode="check", spec_path=str(tmp_path / "missing.json"))[0] == 2


def test_constants_only_spec_supports_check_only(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({**builtin_spec().to_dict(), "problem": None}))
    assert run_quiet(mode="check", spec_path=str(path))[0] == 0
    assert run_quiet(mode="solve", spec_path=str(path))[0] == 2


def test_report_is_byte_identical(tmp_path):
    path = tmp_path / "r.json"
    blobs = []
    for _ in range(2):
        run_quiet(mode="all", grid_N=64, samples=60, seed=4, report_path=str(path))
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]


def test_written_spec_round_trips(tmp_path):
    path = tmp_path / "spec.json"
    assert main(["--write-spec", str(path)]) == 0
    code, _ = run_quiet(mode="check", spec_path=str(path), report_path=str(tmp_path / "r1.json"))
    assert code == 0
    run_quiet(mode="check", report_path=str(tmp_path / "r2.json"))
    r1 = json.loads((tmp_path / "r1.json").read_text())
    r2 = json.loads((tmp_path / "r2.json").read_text())
    assert r1["check"] == r2["check"] and r1["spec"] == r2["spec"]
