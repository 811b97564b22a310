"""Array Hamiltonian in the raw charge-qubit form and in the projector form.

Qubit indices are 0-based here; user-facing labels are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import NotAtDegeneracy, NotProportionalToIdentity, SiteOutOfRange
from .linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron_all
from .qubits import ChainParams, coupling_strength, effective_josephson

PAULIS = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


@dataclass(frozen=True)
class PauliLabel:
    axis: str
    site: int

    def __post_init__(self):
        if self.axis not in PAULIS:
            raise ValueError(f"unknown Pauli axis {self.axis!r}")


@dataclass
class HamiltonianTerms:
    n_qubits: int
    single_site: list[tuple[int, float, str]] = field(default_factory=list)
    two_site: list[tuple[int, int, float, str, str]] = field(default_factory=list)
    constant: float = 0.0

    def __post_init__(self):
        for i, j, coeff, *_ in self.two_site:
            if abs(i - j) != 1:
                raise ValueError(f"coupling ({i}, {j}) is not nearest-neighbour")
        coeffs = [c for _, c, _ in self.single_site] + [c for _, _, c, _, _ in self.two_site]
        if any(np.iscomplexobj(c) for c in coeffs):
            raise ValueError("coefficients must be real")

    def to_matrix(self) -> np.ndarray:
        n = self.n_qubits
        h = self.constant * np.eye(2**n, dtype=complex)
        for site, coeff, axis in self.single_site:
            h += coeff * pauli_embed(PauliLabel(axis, site), n)
        for i, j, coeff, ai, aj in self.two_site:
            h += coeff * pauli_embed(PauliLabel(ai, i), n) @ pauli_embed(PauliLabel(aj, j), n)
        return h


def pauli_embed(label: PauliLabel, n: int) -> np.ndarray:
    if not 0 <= label.site < n:
        raise SiteOutOfRange(f"site {label.site} outside 0..{n - 1}")
    return kron_all(PAULIS[label.axis] if k == label.site else I2 for k in range(n))


def pauli_string(labels: str) -> np.ndarray:
    """Dense operator for a Pauli string such as ``"ZXZ"`` (leftmost = qubit 0)."""
    return kron_all(PAULIS[c] for c in labels)


def _frozen(a):
    a.setflags(write=False)
    return a


@lru_cache(maxsize=256)
def projector_site(site: int, n: int) -> np.ndarray:
    """(1 - sigma_x) / 2 on ``site``; keeps (|0> - |1>)/sqrt(2), kills (|0> + |1>)/sqrt(2).

    Cached and returned read-only.
    """
    return _frozen(0.5 * (np.eye(2**n, dtype=complex) - pauli_embed(PauliLabel("X", site), n)))


@lru_cache(maxsize=256)
def pair_projector(site: int, n: int) -> np.ndarray:
    return _frozen(projector_site(site, n) @ projector_site(site + 1, n))


def raw_terms(chain: ChainParams) -> HamiltonianTerms:
    for k, q in enumerate(chain.qubits):
        if abs(q.offset_charge - 1.0) > 1e-12:
            raise NotAtDegeneracy(f"qubit {k + 1} has offset charge {q.offset_charge}")
    qs = chain.qubits
    n = len(qs)
    single = [(k, -effective_josephson(q), "X") for k, q in enumerate(qs)]
    pairs = [(k, k + 1, coupling_strength(qs[k], qs[k + 1], chain.coupler_inductance), "X", "X")
             for k in range(n - 1)]
    return HamiltonianTerms(n, single, pairs)


def build_raw(chain: ChainParams) -> np.ndarray:
    return raw_terms(chain).to_matrix()


def build_projector_form(n: int, g: float) -> np.ndarray:
    if n < 2 or g <= 0:
        raise ValueError("projector form needs n >= 2 and g > 0")
    return g * sum(pair_projector(k, n) for k in range(n - 1))


def equivalence_shift(raw: np.ndarray, projector_form: np.ndarray, n: int, g: float) -> float:
    """Constant c with ``projector_form - raw = c * I``; must equal (n - 1) g / 4."""
    diff = projector_form - raw
    c = float(np.trace(diff).real) / diff.shape[0]
    residual = float(np.max(np.abs(diff - c * np.eye(diff.shape[0]))))
    if residual > 1e-9:
        raise NotProportionalToIdentity(f"difference is not a multiple of I (residual {residual:.3e})")
    expected = (n - 1) * g / 4
    if abs(c - expected) > 1e-10 * max(1.0, abs(expected)):
        raise NotProportionalToIdentity(f"shift {c!r} differs from (n-1)g/4 = {expected!r}")
    return c


def pairwise_commutators(n: int) -> float:
    terms = [pair_projector(k, n) for k in range(n - 1)]
    worst = 0.0
    for a, b in combinations(terms, 2):
        worst = max(worst, float(np.max(np.abs(a @ b - b @ a))))
    return worst
