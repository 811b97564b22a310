"""Exact projector-product evolution and a fixed-step Lindblad integrator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, StepTooLarge, UnphysicalRates
from .hamiltonian import PauliLabel, pair_projector, pauli_embed
from .linalg import SIGMA_MINUS, dag, kron_all, I2

# Above this Hilbert dimension the d^2 x d^2 Liouvillian gets too big to hold.
SUPEROP_MAX_DIM = 32
TRACE_TOL = 1e-10
PSD_TOL = 1e-5

T1_US = 262.69
T2_US = 176.67


@dataclass(frozen=True)
class NoiseModel:
    t1: float = T1_US
    t2: float = T2_US
    kappa: float = 1.0
    enable_relaxation: bool = True
    enable_dephasing: bool = True

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError("coherence times must be positive")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")

    @classmethod
    def for_scenario(cls, name: str, t1: float = T1_US, t2: float = T2_US, kappa: float = 1.0):
        flags = {
            "ideal": (False, False),
            "t1": (True, False),
            "t2": (False, True),
            "combined": (True, True),
        }
        if name not in flags:
            raise ValueError(f"no noise model for scenario {name!r}")
        relax, dephase = flags[name]
        return cls(t1, t2, kappa, relax, dephase)

    @property
    def gamma1(self) -> float:
        return self.kappa / self.t1

    @property
    def gamma_phi(self) -> float:
        """Pure-dephasing rate; with relaxation on, the T1 share of T2 is removed."""
        if self.enable_relaxation:
            return self.kappa * (1.0 / self.t2 - 1.0 / (2.0 * self.t1))
        return self.kappa / self.t2


@dataclass
class EvolutionTrajectory:
    times: np.ndarray
    states: np.ndarray | None = None
    values: dict[str, np.ndarray] = field(default_factory=dict)
    scenario: str = ""
    repaired: int = 0


def unitary_exact(n: int, phase: float, order: Sequence[int] | None = None) -> np.ndarray:
    """prod_k [I + (exp(-i*phase) - 1) P_k P_{k+1}] for the projector-form Hamiltonian.

    ``phase`` is g*t. ``order`` permutes the factors; they commute, so it only
    matters for checking that claim.
    """
    if n < 2:
        raise ValueError("need at least two qubits")
    dim = 2**n
    factor = np.exp(-1j * phase) - 1.0
    u = np.eye(dim, dtype=complex)
    for k in (order if order is not None else range(n - 1)):
        u = u @ (np.eye(dim, dtype=complex) + factor * pair_projector(k, n))
    return u


def evolve_pure(state: np.ndarray, n: int, phase: float) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**n,):
        raise DimensionMismatch(f"state of shape {state.shape} for {n} qubits")
    factor = np.exp(-1j * phase) - 1.0
    out = state.copy()
    for k in range(n - 1):
        out = out + factor * (pair_projector(k, n) @ out)
    return out


def collapse_operators(noise: NoiseModel, n: int) -> list[np.ndarray]:
    ops = []
    if noise.enable_dephasing:
        gphi = noise.gamma_phi
        if gphi < 0:
            # t2 == 2*t1 can land a few ulps below zero
            if gphi < -1e-12 * noise.kappa / noise.t2:
                raise UnphysicalRates(f"pure dephasing rate {gphi:.3e} < 0 (T2 > 2 T1)")
            gphi = 0.0
    for j in range(n):
        if noise.enable_relaxation:
            ops.append(math.sqrt(noise.gamma1) * _embed(SIGMA_MINUS, j, n))
        if noise.enable_dephasing:
            ops.append(math.sqrt(gphi / 2) * pauli_embed(PauliLabel("Z", j), n))
    return ops


def _embed(op, site, n):
    return kron_all(op if k == site else I2 for k in range(n))


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, collapse: Sequence[np.ndarray]) -> np.ndarray:
    """-i[H, rho] + sum_C (C rho C^dag - {C^dag C, rho} / 2)."""
    if rho.shape != h.shape or any(c.shape != h.shape for c in collapse):
        raise DimensionMismatch("rho, H and collapse operators must share a dimension")
    out = -1j * (h @ rho - rho @ h)
    for c in collapse:
        cd = dag(c)
        cdc = cd @ c
        out += c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)
    return out


def liouvillian(h: np.ndarray, collapse: Sequence[np.ndarray]) -> np.ndarray:
    """Superoperator acting on row-major ``rho.ravel()``; vec(A rho B) = (A kron B^T) vec(rho)."""
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for c in collapse:
        cdc = dag(c) @ c
        sup += np.kron(c, c.conj()) - 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T))
    return sup


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _stepper(h, collapse, dt):
    d = h.shape[0]
    if d <= SUPEROP_MAX_DIM:
        # One RK4 step of a linear ODE is the degree-4 Taylor polynomial of exp(dt L).
        a = dt * liouvillian(h, collapse)
        step = np.eye(d * d, dtype=complex)
        term = np.eye(d * d, dtype=complex)
        for k in range(1, 5):
            term = term @ a / k
            step = step + term
        return lambda rho: (step @ rho.ravel()).reshape(d, d)
    return lambda rho: rk4_step(lambda r: lindblad_rhs(r, h, collapse), rho, dt)


def _clean(rho, strict):
    """Re-Hermitize, renormalize the trace and check positivity. Returns (rho, repaired)."""
    rho = 0.5 * (rho + dag(rho))
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        rho = rho / tr
    w, v = np.linalg.eigh(rho)
    if w[0] >= -PSD_TOL:
        return rho, False
    if strict:
        raise StepTooLarge(f"density matrix eigenvalue {w[0]:.3e}; reduce dt")
    w = np.clip(w, 0.0, None)
    rho = (v * w) @ dag(v)
    return rho / np.trace(rho).real, True


def _validate(rho0, h, collapse, dt):
    if dt <= 0:
        raise ValueError("dt must be positive")
    if rho0.shape != h.shape or any(c.shape != h.shape for c in collapse):
        raise DimensionMismatch("rho0, H and collapse operators must share a dimension")


def integrate_master(rho0: np.ndarray, h: np.ndarray, collapse: Sequence[np.ndarray],
                     t_end: float, dt: float, sample_every: int = 10, *,
                     observables: Mapping[str, Callable[[np.ndarray], float]] | None = None,
                     keep_states: bool = True, strict: bool = True,
                     scenario: str = "") -> EvolutionTrajectory:
    """Fixed-step RK4 integration of the Lindblad equation on ``[0, t_end]``.

    Samples are taken every ``sample_every`` steps (step index times dt), so
    the trajectory has ``floor(t_end / (dt * sample_every)) + 1`` entries. Each
    sample is re-Hermitized and trace-renormalized before it is stored and fed
    back. A sample with an eigenvalue below -1e-5 raises ``StepTooLarge`` when
    ``strict``; otherwise it is projected back onto the PSD cone and counted
    in ``trajectory.repaired``.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    h = np.asarray(h, dtype=complex)
    _validate(rho0, h, collapse, dt)
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")

    n_samples = int(math.floor(t_end / (dt * sample_every) + 1e-9)) + 1
    step = _stepper(h, collapse, dt)
    observables = dict(observables or {})

    times = np.arange(n_samples) * (sample_every * dt)
    states = np.empty((n_samples,) + rho0.shape, dtype=complex) if keep_states else None
    values = {name: np.empty(n_samples) for name in observables}
    repaired = 0

    rho = rho0
    for s in range(n_samples):
        if s:
            for _ in range(sample_every):
                rho = step(rho)
        rho, fixed = _clean(rho, strict)
        repaired += fixed
        if keep_states:
            states[s] = rho
        for name, fn in observables.items():
            values[name][s] = fn(rho)
    return EvolutionTrajectory(times, states, values, scenario, repaired)


def propagate(rho0: np.ndarray, h: np.ndarray, collapse: Sequence[np.ndarray],
              t: float, dt: float) -> np.ndarray:
    """State at exactly time ``t``: whole RK4 steps, then one shorter final step."""
    rho0 = np.asarray(rho0, dtype=complex)
    h = np.asarray(h, dtype=complex)
    _validate(rho0, h, collapse, dt)
    n_full = int(math.floor(t / dt + 1e-9))
    rest = t - n_full * dt
    step = _stepper(h, collapse, dt)
    rho = rho0
    for _ in range(n_full):
        rho = step(rho)
    if rest > 1e-15:
        rho = rk4_step(lambda r: lindblad_rhs(r, h, collapse), rho, rest)
    rho, _ = _clean(rho, strict=True)
    return rho
