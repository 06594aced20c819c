import json
import math

import pytest

from bosehub.cli import main
from bosehub.harness import ConfigError, ExperimentConfig, preset_config, preset_names, run_experiment
from bosehub.harness.runner import OUTPUT_ENV, compare, output_root
from bosehub.harness.verify import verify_suite

BASE = {
    "name": "mini",
    "model": {"eps": 1.0},
    "state": {"kind": "number", "lam": [1.0, 0.0], "n_total": 40},
    "grid": {"t_max": 2.0, "dt": 0.01},
    "engines": ["ed", "pendulum", "gp"],
    "sweep": {"g": [0.5, 3.0]},
    "tolerances": {"rho1": 0.2},
}


def cfg_with(**changes):
    raw = json.loads(json.dumps(BASE))
    for key, value in changes.items():
        raw[key] = value
    return raw


def write(tmp_path, raw, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return path


@pytest.mark.parametrize("raw", [
    cfg_with(engines=[]),
    cfg_with(engines=["ed", "warp"]),
    cfg_with(extra=1),
    cfg_with(model={"eps": 1.0, "g": 0.5, "colour": 1}),
    cfg_with(state={"kind": "number", "lam": [1.0, 0.0]}, sweep={"g": [0.5]}),
    cfg_with(state={"kind": "coherent", "lam": [1.0, 0.0], "n_total": 3}),
    cfg_with(sweep={"g": []}),
    cfg_with(grid={"t_max": 1.0, "dt": 0.0}),
    cfg_with(options={"substeps": 2, "speed": "max"}),
    cfg_with(model={"eps": 1.0, "u": 0.1}),
])
def test_invalid_configs_rejected(raw):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(raw)


def test_sweep_points_in_order():
    cfg = ExperimentConfig.from_dict(cfg_with(sweep={"g": [0.5, 1.0], "n_total": [10, 20]}))
    assert cfg.points() == [{"g": 0.5, "n_total": 10}, {"g": 1.0, "n_total": 10},
                            {"g": 0.5, "n_total": 20}, {"g": 1.0, "n_total": 20}]


def test_run_emits_csv_and_report(tmp_path):
    report = run_experiment(ExperimentConfig.from_dict(BASE), tmp_path)
    assert report.passed
    assert [p.regime for p in report.points] == ["oscillatory", "self-trapped"]
    header = (tmp_path / "mini_g0.5_N40_ed.csv").read_text().splitlines()[0]
    assert header == "t,rho1,n12_over_N,q_re,q_im,norm"
    saved = json.loads((tmp_path / "mini_report.json").read_text())
    assert saved["passed"] and len(saved["points"]) == 2


def test_json_format(tmp_path):
    raw = cfg_with(output={"path": "x", "format": "json"}, engines=["pendulum"])
    run_experiment(ExperimentConfig.from_dict(raw), tmp_path)
    data = json.loads((tmp_path / "mini_g3_N40_pendulum.json").read_text())
    assert set(data) == {"t", "phi", "phi_dot", "rho1", "n12_over_N"}
    assert len(data["t"]) == len(data["phi_dot"]) == 201


def test_comparisons_symmetric(tmp_path):
    report = run_experiment(ExperimentConfig.from_dict(BASE), tmp_path, write=False)
    series = report.points[0].series
    swapped = {k: series[k] for k in reversed(list(series))}
    assert compare(series, {}) == compare(swapped, {})


def test_tolerance_failure_reported(tmp_path):
    raw = cfg_with(tolerances={"rho1": 1e-9})
    report = run_experiment(ExperimentConfig.from_dict(raw), tmp_path)
    assert not report.passed
    assert main(["run", str(write(tmp_path, raw)), "--out", str(tmp_path / "o")]) == 1


def test_engine_failure_keeps_other_results(tmp_path):
    raw = cfg_with(state={"kind": "number", "lam": [1.0, 1.0], "n_total": 40}, engines=["ed", "pendulum"])
    report = run_experiment(ExperimentConfig.from_dict(raw), tmp_path)
    point = report.points[0]
    assert "pendulum" in point.failures and "ed" in point.series
    assert (tmp_path / "mini_g0.5_N40_ed.csv").exists()
    assert not report.passed


def test_byte_identical_reruns(tmp_path):
    cfg = ExperimentConfig.from_dict(cfg_with(options={"workers": 2}))
    run_experiment(cfg, tmp_path / "a")
    run_experiment(cfg, tmp_path / "b")
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_output_env_var(tmp_path, monkeypatch):
    cfg = ExperimentConfig.from_dict(cfg_with(output={"path": "sub/dir"}))
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    assert output_root(cfg) == tmp_path / "sub" / "dir"
    assert output_root(cfg, "/elsewhere").as_posix() == "/elsewhere"
    monkeypatch.delenv(OUTPUT_ENV)
    assert output_root(cfg).as_posix() == "sub/dir"


def test_cli_exit_codes(tmp_path, capsys):
    good = write(tmp_path, BASE)
    assert main(["run", str(good), "--out", str(tmp_path / "o")]) == 0
    assert main(["run", str(write(tmp_path, cfg_with(engines=[]), "bad.json"))]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "broken.json").write_text("{not json")
    assert main(["run", str(tmp_path / "broken.json")]) == 2
    assert main(["preset", "no-such-figure"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["list-presets"]) == 0
    assert "fig-5.3.3" in capsys.readouterr().out


def test_presets_exist_and_validate():
    assert set(preset_names()) == {"fig-4", "fig-5.1.1", "fig-5.1.2", "fig-5.3.1", "fig-5.3.2", "fig-5.3.3"}
    for name in preset_names():
        assert preset_config(name).engines
        assert preset_config(name, full=True).engines


def test_small_preset_end_to_end(tmp_path):
    report = run_experiment(preset_config("fig-4"), tmp_path)
    assert report.passed
    sup = [c["sup"] for c in report.points[0].comparisons if c["observable"] == "a_re"]
    assert sup and sup[0] < 1e-9


def test_verify_quick_passes():
    results = verify_suite(quick=True)
    assert results and all(r.passed for r in results)


def test_verify_detects_asymmetry():
    failed = [r.name for r in verify_suite(inject_asymmetry=True, quick=True) if not r.passed]
    assert any(name.startswith("L0_") for name in failed)


def test_verify_cli_tight_quadrature(capsys):
    assert main(["verify", "--quadrature-tol", "1e-16"]) == 1
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    fres = [l for l in lines if l.get("name") == "fresnel_identity"]
    assert fres and not fres[0]["passed"] and math.isfinite(fres[0]["observed"])


def test_verify_cli_default():
    assert main(["verify"]) == 0
