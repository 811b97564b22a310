import math

import numpy as np
import pytest

from chargecluster.calibration import calibrate_kappa, first_peak_fidelity
from chargecluster.cli import main
from chargecluster.config import ExperimentConfig, parse_lines
from chargecluster.errors import TargetUnreachable
from chargecluster.experiments import (noisy_trajectory, run_all, run_scenario, sample_times,
                                       verification_passes, verification_report)
from chargecluster.output import read_csv


def small_config(tmp_path, **kw):
    base = dict(n_qubits=2, t_end=4 * math.pi, dt=2e-3, output_dir=str(tmp_path / "out"))
    base.update(kw)
    return ExperimentConfig(**base)


def test_sample_times_grid():
    cfg = ExperimentConfig(t_end=1.0, dt=0.01, sample_every=10)
    t = sample_times(cfg)
    assert len(t) == 11 and t[-1] == pytest.approx(1.0)


def test_run_all_small_chain(tmp_path):
    cfg = small_config(tmp_path)
    results = run_all(cfg)
    assert [r.scenario for r in results] == ["ideal", "t1", "t2", "combined", "coherence"]
    assert all(r.error is None for r in results)
    out = tmp_path / "out"
    csvs = sorted(p.name for p in out.glob("*.csv"))
    assert csvs == ["coherence_combined.csv", "coherence_t1.csv", "combined.csv", "ideal.csv", "t1.csv", "t2.csv"]
    t, v = read_csv(out / "ideal.csv")
    assert len(t) == len(sample_times(cfg))
    t, v = read_csv(out / "coherence_t1.csv")
    assert t[0] == pytest.approx(math.pi)
    assert len(t) == int(cfg.coherence_window / (cfg.dt * cfg.sample_every) + 1e-9) + 1
    assert (out / "summary.txt").read_text().startswith("# n_qubits=2")


def test_n2_ideal_peaks(tmp_path):
    res = run_scenario(small_config(tmp_path), "ideal", write=False)
    assert len(res.peaks) == 2
    assert min(res.peaks.peak_values) >= 1 - 1e-9
    assert res.summary["trough_0"] == pytest.approx(0.25)


def test_svg_written_on_request(tmp_path):
    cfg = small_config(tmp_path, emit_svg=True)
    run_scenario(cfg, "coherence")
    text = (tmp_path / "out" / "coherence.svg").read_text()
    assert text.count("<polyline") == 2


def test_scenario_ordering_at_fixed_kappa(tmp_path):
    cfg = small_config(tmp_path, n_qubits=3, kappa=5.0)
    first = {s: run_scenario(cfg, s, write=False).summary["first_peak"] for s in ("ideal", "t1", "t2", "combined")}
    assert first["ideal"] > first["t1"] > first["combined"]
    assert first["ideal"] > first["t2"] > first["combined"]


def test_noisy_trajectory_stays_physical(tmp_path):
    traj = noisy_trajectory(small_config(tmp_path, kappa=20.0), "combined")
    assert traj.repaired == 0
    f = traj.values["fidelity"]
    assert np.all((f >= 0) & (f <= 1))


def test_first_peak_fidelity_monotone_in_kappa(tmp_path):
    cfg = small_config(tmp_path)
    values = [first_peak_fidelity(cfg, k) for k in (0.5, 2.0, 8.0)]
    assert values[0] > values[1] > values[2]


def test_calibrate_kappa_hits_target(tmp_path):
    cfg = small_config(tmp_path)
    kappa = calibrate_kappa(0.9, cfg)
    assert first_peak_fidelity(cfg, kappa) == pytest.approx(0.9, abs=5e-3)


def test_calibrate_unreachable(tmp_path):
    with pytest.raises(TargetUnreachable):
        calibrate_kappa(0.999999, small_config(tmp_path))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_verification_report(n):
    report = verification_report(n)
    assert verification_passes(report)


def test_cli_verify(capsys):
    assert main(["verify", "--n-qubits", "3"]) == 0
    assert "n=3: PASS" in capsys.readouterr().out


def test_cli_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("dt=abc\n")
    assert main(["run-all", "--config", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_cli_invalid_value_is_config_error(tmp_path):
    assert main(["run", "--scenario", "ideal", "--dt", "0", "--out", str(tmp_path)]) == 1


def test_cli_run_single_scenario(tmp_path, capsys):
    code = main(["run", "--scenario", "ideal", "--n-qubits", "2", "--t-end", "6.3", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "ideal.csv").exists()
    assert "first_peak" in capsys.readouterr().out


def test_cli_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", "--scenario", "ideal", "--n-qubits", "2", "--out", str(blocker / "sub")]) == 3


def test_cli_calibrate_writes_config(tmp_path, capsys):
    code = main(["calibrate", "--target", "0.9", "--n-qubits", "2", "--dt", "2e-3", "--out", str(tmp_path)])
    assert code == 0
    values = parse_lines((tmp_path / "calibrated.cfg").read_text())
    assert "kappa=" in capsys.readouterr().out
    assert values["n_qubits"] == 2 and values["kappa"] > 0
