"""Scenario pipelines: ideal revivals, T1/T2 fidelity decay and post-preparation coherence."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cluster import (cluster_product_form, cluster_standard, hadamard_map, initial_state,
                      stabilizer_residuals, stabilizer_set, verify_stabilizers)
from .config import ExperimentConfig
from .errors import ClusterSimError, NoPeaks
from .evolution import NoiseModel, collapse_operators, evolve_pure, integrate_master, propagate
from .hamiltonian import build_projector_form, build_raw, equivalence_shift, pairwise_commutators
from .linalg import phase_align
from .metrics import (PeakReport, crossing_time, fidelity_mixed, fidelity_pure, find_peaks,
                      l1_coherence, parabolic_refine, refine_peak)
from .output import emit_csv, emit_svg
from .qubits import tuned_chain

log = logging.getLogger(__name__)

FIDELITY_SCENARIOS = ("ideal", "t1", "t2", "combined")
ALL_SCENARIOS = FIDELITY_SCENARIOS + ("coherence",)
COHERENCE_MODELS = ("combined", "t1")


@dataclass
class ScenarioResult:
    scenario: str
    csv_paths: list[Path] = field(default_factory=list)
    peaks: PeakReport | None = None
    summary: dict[str, float | None] = field(default_factory=dict)
    series: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    partial: bool = False
    error: str | None = None

    @property
    def csv_path(self) -> Path | None:
        return self.csv_paths[0] if self.csv_paths else None


def sample_times(config: ExperimentConfig, t_end: float | None = None) -> np.ndarray:
    t_end = config.t_end if t_end is None else t_end
    spacing = config.dt * config.sample_every
    return np.arange(int(math.floor(t_end / spacing + 1e-9)) + 1) * spacing


def target_state(n: int) -> np.ndarray:
    return cluster_product_form(n)


def _target_dm(n):
    psi = target_state(n)
    return np.outer(psi, psi.conj())


def ideal_fidelity(config: ExperimentConfig):
    """Exact fidelity function of time for noise-free evolution from |0...0>."""
    n, g = config.n_qubits, config.g
    psi0 = initial_state(n)
    target = target_state(n)
    return lambda t: fidelity_pure(target, evolve_pure(psi0, n, g * t))


def noisy_trajectory(config: ExperimentConfig, scenario: str, t_end: float | None = None, strict=False):
    n = config.n_qubits
    noise = NoiseModel.for_scenario(scenario, config.t1_us, config.t2_us, config.kappa)
    h = build_projector_form(n, config.g)
    psi0 = initial_state(n)
    sigma = _target_dm(n)
    return integrate_master(np.outer(psi0, psi0.conj()), h, collapse_operators(noise, n),
                            config.t_end if t_end is None else t_end, config.dt, config.sample_every,
                            observables={"fidelity": lambda rho: fidelity_mixed(rho, sigma)},
                            keep_states=False, strict=strict, scenario=scenario)


def revival_peaks(times, values, config: ExperimentConfig, exact=None) -> PeakReport:
    """Peaks of a fidelity series, refined exactly when a callable is supplied."""
    report = find_peaks(times, values, unit=math.pi / config.g)
    if exact is None:
        return parabolic_refine(times, values, report)
    refined = PeakReport(expected_times=report.expected_times, indices=report.indices,
                         tolerance=report.tolerance)
    for t in report.peak_times:
        tp, fp = refine_peak(exact, t, report.tolerance)
        refined.peak_times.append(tp)
        refined.peak_values.append(fp)
    return refined


def _peak_summary(report: PeakReport) -> dict:
    vals = report.peak_values
    return {
        "n_peaks": float(len(vals)),
        "first_peak": vals[0] if vals else None,
        "fourth_peak": vals[3] if len(vals) > 3 else None,
    }


def _nearest(times, values, t):
    return float(values[int(np.argmin(np.abs(times - t)))])


def _fidelity_scenario(config, scenario, out):
    times = sample_times(config)
    if scenario == "ideal":
        exact = ideal_fidelity(config)
        values = np.array([exact(t) for t in times])
        partial = False
    else:
        exact = None
        traj = noisy_trajectory(config, scenario)
        values = traj.values["fidelity"]
        partial = traj.repaired > 0
    try:
        peaks = revival_peaks(times, values, config, exact)
    except NoPeaks:
        peaks = PeakReport()
    summary = _peak_summary(peaks)
    two_pi = 2 * math.pi / config.g
    summary["trough_0"] = float(values[0])
    summary["trough_2pi"] = exact(two_pi) if exact else _nearest(times, values, two_pi)
    result = ScenarioResult(scenario, peaks=peaks, summary=summary, partial=partial,
                            series={scenario: (times, values)})
    if out is not None:
        result.csv_paths.append(emit_csv(out / f"{scenario}.csv", times, values))
    return result


def coherence_series(config: ExperimentConfig, model: str):
    """Normalized l1 coherence during free decay after preparing the state at g t = pi.

    Times are absolute (the snapshot sits at t = pi / g).
    """
    n = config.n_qubits
    noise = NoiseModel.for_scenario(model, config.t1_us, config.t2_us, config.kappa)
    ops = collapse_operators(noise, n)
    t_prep = math.pi / config.g
    psi0 = initial_state(n)
    rho = propagate(np.outer(psi0, psi0.conj()), build_projector_form(n, config.g), ops, t_prep, config.dt)
    c0 = l1_coherence(rho)
    traj = integrate_master(rho, np.zeros_like(rho), ops, config.coherence_window, config.dt,
                            config.sample_every, observables={"coherence": lambda r: l1_coherence(r) / c0},
                            keep_states=False, strict=False, scenario=f"coherence_{model}")
    return t_prep + traj.times, traj.values["coherence"], traj.repaired > 0


def _coherence_scenario(config, out):
    result = ScenarioResult("coherence")
    for model in COHERENCE_MODELS:
        times, values, partial = coherence_series(config, model)
        t_prep = math.pi / config.g
        half = crossing_time(times, values, 0.5)
        result.summary[f"{model}_half_life"] = None if half is None else half - t_prep
        result.summary[f"{model}_at_15"] = float(np.interp(t_prep + 15.0, times, values))
        result.series[f"coherence_{model}"] = (times, values)
        result.partial |= partial
        if out is not None:
            result.csv_paths.append(emit_csv(out / f"coherence_{model}.csv", times, values))
    return result


def run_scenario(config: ExperimentConfig, scenario: str | None = None, write: bool = True) -> ScenarioResult:
    config = config.validate()
    scenario = scenario or config.scenario
    if scenario not in ALL_SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    out = None
    if write:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
    log.info("running %s (n=%d, kappa=%g)", scenario, config.n_qubits, config.kappa)
    if scenario == "coherence":
        result = _coherence_scenario(config, out)
    else:
        result = _fidelity_scenario(config, scenario, out)
    if write and config.emit_svg:
        labels = list(result.series)
        y_label = "normalized l1 coherence" if scenario == "coherence" else "fidelity"
        emit_svg(out / f"{scenario}.svg", [result.series[k] for k in labels], labels,
                 title=f"{scenario} (N={config.n_qubits})", y_label=y_label)
    return result


def run_all(config: ExperimentConfig, write: bool = True) -> list[ScenarioResult]:
    """Run every scenario; a failing scenario is recorded and the rest still run."""
    config = config.validate()
    results = []
    for scenario in ALL_SCENARIOS:
        try:
            results.append(run_scenario(config, scenario, write))
        except (ClusterSimError, OSError) as exc:
            log.error("scenario %s failed: %s", scenario, exc)
            results.append(ScenarioResult(scenario, error=f"{type(exc).__name__}: {exc}"))
    if write:
        write_summary(results, Path(config.output_dir) / "summary.txt", config)
    return results


def format_summary(results: list[ScenarioResult], config: ExperimentConfig | None = None) -> str:
    lines = []
    if config is not None:
        lines.append(f"# n_qubits={config.n_qubits} g={config.g!r} kappa={config.kappa!r} "
                     f"dt={config.dt!r} t1_us={config.t1_us!r} t2_us={config.t2_us!r}")
    lines.append(f"{'scenario':<12} {'quantity':<22} value")
    for r in results:
        if r.error:
            lines.append(f"{r.scenario:<12} {'error':<22} {r.error}")
            continue
        for key, value in r.summary.items():
            text = "n/a" if value is None else f"{value:.10g}"
            lines.append(f"{r.scenario:<12} {key:<22} {text}")
        if r.peaks is not None:
            for k, (t, v) in enumerate(zip(r.peaks.peak_times, r.peaks.peak_values), start=1):
                lines.append(f"{r.scenario:<12} {f'peak_{k}':<22} t={t:.6f} F={v:.10f}")
        if r.partial:
            lines.append(f"{r.scenario:<12} {'partial':<22} PSD repair applied")
    return "\n".join(lines) + "\n"


def write_summary(results, path, config=None) -> Path:
    path = Path(path)
    path.write_text(format_summary(results, config), encoding="utf-8", newline="\n")
    return path


def verification_report(n: int, g: float = 1.0) -> dict[str, float]:
    """Numerical evidence that the evolved state is the linear cluster state, for one ``n``."""
    product = target_state(n)
    evolved = evolve_pure(initial_state(n), n, math.pi)
    mapped = hadamard_map(cluster_standard(n))
    pairs = {"product_vs_evolved": (product, evolved),
             "product_vs_hadamard_standard": (product, mapped),
             "evolved_vs_hadamard_standard": (evolved, mapped)}
    report = {}
    for name, (a, b) in pairs.items():
        aligned, _ = phase_align(a, b)
        report[name] = fidelity_pure(a, aligned)
    stabs = stabilizer_set(n)
    report["stabilizer_worst_residual"] = verify_stabilizers(cluster_standard(n), stabs)[1]
    report["stabilizer_residual_on_evolved"] = float(np.max(stabilizer_residuals(hadamard_map(evolved), stabs)))
    report["stabilizer_max_commutator"] = stabs.max_commutator()
    chain = tuned_chain(n)
    g_chain = chain.g
    raw = build_raw(chain)
    report["raw_shift_minus_expected"] = (equivalence_shift(raw, build_projector_form(n, g_chain), n, g_chain)
                                          - (n - 1) * g_chain / 4)
    report["projector_max_commutator"] = pairwise_commutators(n) if n >= 3 else 0.0
    return report


def verification_passes(report: dict[str, float]) -> bool:
    fid_ok = all(abs(1 - v) <= 1e-10 for k, v in report.items() if "_vs_" in k)
    stab_ok = report["stabilizer_worst_residual"] <= 1e-9 and report["stabilizer_residual_on_evolved"] <= 1e-9
    return (fid_ok and stab_ok and report["stabilizer_max_commutator"] <= 1e-12
            and abs(report["raw_shift_minus_expected"]) <= 1e-10 and report["projector_max_commutator"] <= 1e-13)
