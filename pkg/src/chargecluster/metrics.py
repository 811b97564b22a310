"""State-comparison metrics and revival-peak extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimensionMismatch, NoPeaks
from .linalg import psd_sqrt


def fidelity_pure(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def fidelity_mixed(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"{rho.shape} vs {sigma.shape}")
    root = psd_sqrt(rho)
    inner = root @ sigma @ root
    value = np.trace(psd_sqrt(0.5 * (inner + inner.conj().T))).real ** 2
    return float(min(1.0, max(0.0, value)))


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of |rho_ij| over off-diagonal entries (computational basis)."""
    rho = np.asarray(rho)
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


@dataclass
class PeakReport:
    peak_times: list[float] = field(default_factory=list)
    peak_values: list[float] = field(default_factory=list)
    expected_times: list[float] = field(default_factory=list)
    indices: list[int] = field(default_factory=list)
    tolerance: float = 0.0

    def __len__(self):
        return len(self.peak_times)

    @property
    def offsets(self) -> list[float]:
        return [t - e for t, e in zip(self.peak_times, self.expected_times)]

    @property
    def all_matched(self) -> bool:
        return all(abs(d) <= self.tolerance for d in self.offsets)


def _local_maxima(series: np.ndarray) -> list[int]:
    """Indices of interior maxima; a flat top reports its first sample."""
    found = []
    n = len(series)
    i = 1
    while i < n - 1:
        if series[i] > series[i - 1]:
            j = i
            while j + 1 < n and series[j + 1] == series[i]:
                j += 1
            if j + 1 < n and series[j + 1] < series[i]:
                found.append(i)
            i = j + 1
        else:
            i += 1
    return found


def find_peaks(times, series, unit: float = math.pi) -> PeakReport:
    """Locate revival peaks and pair each with the nearest odd multiple of ``unit``.

    ``times`` may be an array or anything with a ``times`` attribute (an
    ``EvolutionTrajectory``). Matching tolerance is two sample spacings.
    """
    times = np.asarray(getattr(times, "times", times), dtype=float)
    series = np.asarray(series, dtype=float)
    if len(series) < 3 or len(series) != len(times):
        raise ValueError("need at least 3 samples and matching times")
    idx = _local_maxima(series)
    if not idx:
        raise NoPeaks("series has no interior local maximum")
    spacing = float(np.min(np.diff(times)))
    report = PeakReport(tolerance=2 * spacing)
    for i in idx:
        t = float(times[i])
        m = max(0, round((t / unit - 1) / 2))
        report.peak_times.append(t)
        report.peak_values.append(float(series[i]))
        report.expected_times.append((2 * m + 1) * unit)
        report.indices.append(i)
    return report


def refine_peak(func: Callable[[float], float], t_guess: float, halfwidth: float,
                xatol: float = 1e-10) -> tuple[float, float]:
    """Maximize a smooth scalar function of time near a sampled peak."""
    res = minimize_scalar(lambda t: -func(t), bounds=(t_guess - halfwidth, t_guess + halfwidth),
                          method="bounded", options={"xatol": xatol})
    return float(res.x), float(-res.fun)


def crossing_time(times, series, level: float) -> float | None:
    """First time ``series`` drops to ``level`` or below, linearly interpolated."""
    times = np.asarray(times, dtype=float)
    series = np.asarray(series, dtype=float)
    below = np.nonzero(series <= level)[0]
    if not below.size:
        return None
    k = int(below[0])
    if k == 0:
        return float(times[0])
    t0, t1, s0, s1 = times[k - 1], times[k], series[k - 1], series[k]
    return float(t0 + (s0 - level) / (s0 - s1) * (t1 - t0))


def parabolic_refine(times, series, report: PeakReport) -> PeakReport:
    """Replace each sampled peak by the vertex of the parabola through it and its neighbours."""
    times = np.asarray(getattr(times, "times", times), dtype=float)
    series = np.asarray(series, dtype=float)
    out = PeakReport(expected_times=list(report.expected_times), indices=list(report.indices),
                     tolerance=report.tolerance)
    for i in report.indices:
        y0, y1, y2 = series[i - 1], series[i], series[i + 1]
        h = times[i + 1] - times[i]
        denom = y0 - 2 * y1 + y2
        if denom >= 0:
            out.peak_times.append(float(times[i]))
            out.peak_values.append(float(y1))
            continue
        shift = 0.5 * (y0 - y2) / denom
        out.peak_times.append(float(times[i] + shift * h))
        out.peak_values.append(float(min(1.0, y1 - 0.25 * (y0 - y2) * shift)))
    return out
