"""Target-state constructions, the Hadamard equivalence map and stabilizer checks.

Two single-qubit X-basis conventions are in play. The charge-qubit derivation
labels the sigma_x = -1 eigenstate (|0> - |1>)/sqrt(2) as ``|+>``; textbook
graph states use (|0> + |1>)/sqrt(2). Each state constructor records which
convention its output is written in as a ``convention`` attribute.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .hamiltonian import pauli_string
from .linalg import HADAMARD

_S = 1 / np.sqrt(2)


@dataclass(frozen=True)
class BasisConvention:
    name: str
    plus: np.ndarray
    minus: np.ndarray


PROJECTOR = BasisConvention("projector", np.array([_S, -_S], dtype=complex), np.array([_S, _S], dtype=complex))
STANDARD = BasisConvention("standard", np.array([_S, _S], dtype=complex), np.array([_S, -_S], dtype=complex))
COMPUTATIONAL = "computational"


def _declares(convention):
    def mark(fn):
        fn.convention = convention
        return fn
    return mark


def _n_of(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


@_declares(COMPUTATIONAL)
def initial_state(n: int) -> np.ndarray:
    """All islands empty, |0...0>."""
    if n < 1:
        raise ValueError("n must be >= 1")
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    return psi


@_declares(STANDARD.name)
def cluster_standard(n: int) -> np.ndarray:
    """CZ-chain graph state: amplitude 2^(-n/2) (-1)^(sum_i x_i x_{i+1}) on each bit string."""
    if n < 2:
        raise ValueError("n must be >= 2")
    bits = np.array(list(itertools.product((0, 1), repeat=n)))
    parity = np.sum(bits[:, :-1] * bits[:, 1:], axis=1)
    return ((-1.0) ** parity / 2 ** (n / 2)).astype(complex)


@_declares(PROJECTOR.name)
def cluster_product_form(n: int) -> np.ndarray:
    """Cluster state built from pair blocks acting on the projector-convention X basis.

    Starts from |0...0> = 2^(-n/2) sum over all |+/->-strings, flips the sign
    of every string where qubits k and k+1 are both ``|+>`` (one block per
    pair), then rewrites the result in the computational basis.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    # axis value 0 = |->, 1 = |+> (projector convention)
    amps = np.full((2,) * n, 2 ** (-n / 2), dtype=complex)
    for k in range(n - 1):
        idx = [slice(None)] * n
        idx[k] = idx[k + 1] = 1
        amps[tuple(idx)] *= -1
    change = np.column_stack([PROJECTOR.minus, PROJECTOR.plus])
    for k in range(n):
        amps = np.moveaxis(np.tensordot(change, amps, axes=([1], [k])), 0, k)
    return amps.reshape(-1)


def hadamard_map(state: np.ndarray) -> np.ndarray:
    """Apply a Hadamard to every qubit."""
    state = np.asarray(state, dtype=complex)
    n = _n_of(state)
    amps = state.reshape((2,) * n)
    for k in range(n):
        amps = np.moveaxis(np.tensordot(HADAMARD, amps, axes=([1], [k])), 0, k)
    return amps.reshape(-1)


@dataclass
class StabilizerSet:
    labels: list[str]
    generators: list[np.ndarray]

    def __len__(self):
        return len(self.generators)

    def max_commutator(self) -> float:
        worst = 0.0
        for a, b in itertools.combinations(self.generators, 2):
            worst = max(worst, float(np.max(np.abs(a @ b - b @ a))))
        return worst

    def max_square_error(self) -> float:
        eye = np.eye(self.generators[0].shape[0])
        return max(float(np.max(np.abs(s @ s - eye))) for s in self.generators)


def stabilizer_set(n: int) -> StabilizerSet:
    """X on each site with Z on its chain neighbours; labels are 1-based, e.g. ``Z1X2Z3``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    labels, gens = [], []
    for k in range(n):
        word = ["I"] * n
        word[k] = "X"
        for nb in (k - 1, k + 1):
            if 0 <= nb < n:
                word[nb] = "Z"
        labels.append("".join(f"{p}{i + 1}" for i, p in enumerate(word) if p != "I"))
        gens.append(pauli_string("".join(word)))
    return StabilizerSet(labels, gens)


def stabilizer_residuals(state: np.ndarray, stabs: StabilizerSet) -> np.ndarray:
    """Per-generator deviation from the +1 eigenvalue.

    Vectors give ``||S psi - psi||``; density matrices give ``|1 - Tr(S rho)|``.
    """
    state = np.asarray(state, dtype=complex)
    dim = stabs.generators[0].shape[0]
    if state.shape[0] != dim:
        raise DimensionMismatch(f"state dimension {state.shape[0]} vs stabilizers {dim}")
    if state.ndim == 1:
        return np.array([np.linalg.norm(s @ state - state) for s in stabs.generators])
    return np.abs(1.0 - stabilizer_expectations(state, stabs))


def stabilizer_expectations(rho: np.ndarray, stabs: StabilizerSet) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    return np.array([np.trace(s @ rho).real for s in stabs.generators])


def verify_stabilizers(state: np.ndarray, stabs: StabilizerSet) -> tuple[bool, float]:
    res = stabilizer_residuals(state, stabs)
    tol = 1e-9 if np.ndim(state) == 1 else 1e-8
    worst = float(np.max(res))
    return worst <= tol, worst
