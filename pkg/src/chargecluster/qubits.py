"""Charge-qubit parameters, flux-tuned energies and the coupling tuning condition.

Units: hbar = 1 and the flux quantum Phi_0 = 1, so fluxes are fractions of a
flux quantum and energies double as angular frequencies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

from .errors import FluxOutOfRange, InconsistentTuning, NoBracket

FLUX_MAX = 0.5
TUNE_TOL = 1e-12
G_REL_TOL = 1e-9


@dataclass(frozen=True)
class QubitParams:
    charging_energy: float
    josephson_energy: float
    offset_charge: float = 1.0
    flux: float = 0.0

    def __post_init__(self):
        if self.charging_energy <= 0 or self.josephson_energy <= 0:
            raise ValueError("charging and Josephson energies must be positive")

    @property
    def charging_regime(self) -> bool:
        return self.charging_energy >= 10 * self.josephson_energy


@dataclass(frozen=True)
class ChainParams:
    qubits: tuple[QubitParams, ...]
    coupler_inductance: float

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) < 2:
            raise ValueError("a chain needs at least two qubits")
        if self.coupler_inductance <= 0:
            raise ValueError("coupler inductance must be positive")

    def __len__(self):
        return len(self.qubits)

    @property
    def g(self) -> float:
        return derive_g(self)


def coupler_inductance(large_junction_energy: float) -> float:
    """Effective inductance of the large junction, Phi_0 / (2 pi I_0) with I_0 = 2 pi E_J0 / Phi_0."""
    critical_current = 2 * math.pi * large_junction_energy
    return 1.0 / (2 * math.pi * critical_current)


def _check_flux(flux: float) -> None:
    if not 0.0 <= flux <= FLUX_MAX:
        raise FluxOutOfRange(f"flux {flux!r} outside [0, 0.5]")


def epsilon(q: QubitParams) -> float:
    """Single-qubit sigma_z coefficient; vanishes at the degeneracy point."""
    return 0.5 * q.charging_energy * (q.offset_charge - 1.0)


def effective_josephson(q: QubitParams) -> float:
    _check_flux(q.flux)
    return q.josephson_energy * math.cos(math.pi * q.flux)


def coupling_strength(qi: QubitParams, qj: QubitParams, inductance: float) -> float:
    _check_flux(qi.flux)
    _check_flux(qj.flux)
    return (inductance * math.pi**2 * qi.josephson_energy * qj.josephson_energy
            * math.sin(math.pi * qi.flux) * math.sin(math.pi * qj.flux))


def _bisect_flux(f, scale: float) -> float:
    lo, hi = f(0.0), f(FLUX_MAX)
    if not (lo < 0 < hi):
        raise NoBracket(f"no sign change on [0, 0.5]: f(0)={lo:.3e}, f(0.5)={hi:.3e}")
    root = bisect(f, 0.0, FLUX_MAX, xtol=1e-16, rtol=1e-15, maxiter=200)
    if abs(f(root)) > TUNE_TOL * scale:
        raise NoBracket(f"bisection residual {f(root):.3e} above tolerance")
    return root


def tune_flux(josephson_energy: float, inductance: float, interior: bool) -> float:
    """Uniform flux on a coupled pair at which the coupling balances the tunnelling energy.

    Interior qubits need ``Lambda = E_J_eff / 2``; chain ends need
    ``Lambda = E_J_eff``. The difference is strictly increasing in flux, so the
    root found by bisection on ``[0, 0.5]`` is unique.
    """
    if josephson_energy <= 0 or inductance <= 0:
        raise NoBracket("Josephson energy and inductance must be positive")
    weight = 0.5 if interior else 1.0
    scale = inductance * math.pi**2 * josephson_energy**2

    def f(phi):
        s = math.sin(math.pi * phi)
        return scale * s * s - weight * josephson_energy * math.cos(math.pi * phi)

    return _bisect_flux(f, josephson_energy)


def tune_end_flux(neighbor: QubitParams, inductance: float) -> float:
    """Flux for a chain-end qubit whose neighbour is already tuned.

    ``Lambda = E_J_eff`` on the end qubit is independent of its own E_J, so
    only the flux is fixed here.
    """
    _check_flux(neighbor.flux)
    a = inductance * math.pi**2 * neighbor.josephson_energy * math.sin(math.pi * neighbor.flux)

    def f(phi):
        return a * math.sin(math.pi * phi) - math.cos(math.pi * phi)

    return _bisect_flux(f, 1.0)


def pair_rates(chain: ChainParams) -> list[float]:
    """Every value of g implied by the tuning conditions, in chain order."""
    qs = chain.qubits
    n = len(qs)
    rates = [4 * coupling_strength(qs[i], qs[i + 1], chain.coupler_inductance) for i in range(n - 1)]
    for i, q in enumerate(qs):
        factor = 4.0 if i in (0, n - 1) else 2.0
        rates.append(factor * effective_josephson(q))
    return rates


def derive_g(chain: ChainParams) -> float:
    rates = pair_rates(chain)
    g = rates[0]
    worst = max(abs(r - g) for r in rates) / abs(g) if g else math.inf
    if g <= 0 or worst > G_REL_TOL:
        raise InconsistentTuning(f"tuning conditions disagree: relative spread {worst:.3e}")
    return g


def tuned_chain(n: int, josephson_energy: float = 1.0, inductance: float = 1 / math.pi**2,
                charging_energy: float | None = None) -> ChainParams:
    """Build an ``n``-qubit chain at the degeneracy point satisfying every tuning condition.

    Interior qubits share ``josephson_energy`` and the interior root flux. For
    ``n >= 3`` the end qubits cannot reuse that E_J, so their flux comes from
    ``tune_end_flux`` and their E_J is chosen to hit ``E_J_eff = g / 4``.
    """
    if n < 2:
        raise ValueError("a chain needs at least two qubits")
    if n == 2:
        phi = tune_flux(josephson_energy, inductance, interior=False)
        ec = charging_energy or 20 * josephson_energy
        q = QubitParams(ec, josephson_energy, 1.0, phi)
        return ChainParams((q, q), inductance)

    phi = tune_flux(josephson_energy, inductance, interior=True)
    g = 2 * josephson_energy * math.cos(math.pi * phi)
    ec = charging_energy or 20 * josephson_energy
    inner = QubitParams(ec, josephson_energy, 1.0, phi)
    end_phi = tune_end_flux(inner, inductance)
    end_ej = g / (4 * math.cos(math.pi * end_phi))
    end = QubitParams(charging_energy or 20 * max(end_ej, josephson_energy), end_ej, 1.0, end_phi)
    return ChainParams((end,) + (inner,) * (n - 2) + (end,), inductance)
