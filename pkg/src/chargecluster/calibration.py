"""Fit the time-unit scale kappa (microseconds per simulation unit).

The physical size of g is never fixed, so coherence times in microseconds do
not map onto the dimensionless time axis by themselves. Kappa is chosen once so
that the combined-noise first revival reaches a target fidelity.
"""
from __future__ import annotations

import math

from scipy.optimize import bisect

from .config import ExperimentConfig
from .errors import NoPeaks, TargetUnreachable
from .experiments import noisy_trajectory, revival_peaks

KAPPA_BRACKET = (1e-3, 1e3)
CALIBRATION_TOL = 5e-3


def first_peak_fidelity(config: ExperimentConfig, kappa: float) -> float:
    """Combined-noise fidelity at the first revival, integrating only up to g t = 2 pi."""
    cfg = config.replace(kappa=kappa)
    traj = noisy_trajectory(cfg, "combined", t_end=2 * math.pi / cfg.g)
    times, values = traj.times, traj.values["fidelity"]
    try:
        peaks = revival_peaks(times, values, cfg)
        if abs(peaks.offsets[0]) <= peaks.tolerance:
            return peaks.peak_values[0]
    except NoPeaks:
        pass
    # strong decay can flatten the revival into a shoulder; use the window maximum
    window = (times >= 0.5 * math.pi / cfg.g) & (times <= 1.5 * math.pi / cfg.g)
    return float(values[window].max())


def calibrate_kappa(target: float, config: ExperimentConfig, bracket=KAPPA_BRACKET,
                    tol: float = CALIBRATION_TOL) -> float:
    """Kappa at which the combined first-peak fidelity equals ``target``.

    First-peak fidelity falls monotonically with kappa, so bisection on
    log(kappa) over ``bracket`` is safe.
    """
    if not 0 < target < 1:
        raise TargetUnreachable(f"target {target} outside (0, 1)")
    config = config.validate()
    lo, hi = bracket
    f_lo = first_peak_fidelity(config, lo)
    f_hi = first_peak_fidelity(config, hi)
    if not f_hi <= target <= f_lo:
        raise TargetUnreachable(f"target {target} outside achievable range [{f_hi:.6f}, {f_lo:.6f}] "
                                f"for kappa in [{lo:g}, {hi:g}]")

    def f(log_k):
        return first_peak_fidelity(config, math.exp(log_k)) - target

    kappa = math.exp(bisect(f, math.log(lo), math.log(hi), xtol=1e-6))
    achieved = first_peak_fidelity(config, kappa)
    if abs(achieved - target) > tol:
        raise TargetUnreachable(f"bisection converged to F={achieved:.6f}, target {target}")
    return kappa
