"""Dense complex linear-algebra kernels.

Matrices and states are plain ``numpy`` complex arrays. Nothing here mutates
its inputs.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

from .errors import NegativeSpectrum, NotHermitian

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-6

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# |0><1| in the charge basis: removes the excess Cooper pair.
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; entry (i*p + k, j*q + l) is a[i, j] * b[k, l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(factors) -> np.ndarray:
    return reduce(kron, factors, np.ones((1, 1), dtype=complex))


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - dag(a)))) if a.size else 0.0


def check_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    err = hermiticity_error(a)
    if err > tol:
        raise NotHermitian(f"max|A - A^dag| = {err:.3e} exceeds {tol:.0e}")


def herm_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending real eigenvalues ``w`` and a unitary ``v`` with
    ``a = v @ diag(w) @ v^dag``.
    """
    a = np.asarray(a, dtype=complex)
    check_hermitian(a)
    # symmetrize so LAPACK sees an exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (a + dag(a)))
    return w, v


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-1e-6, 0)`` are round-off and are clamped to zero, as are
    positive eigenvalues below double-precision resolution of the largest one
    (their square roots would otherwise inject ~1e-8 noise).
    """
    w, v = herm_eig(a)
    if w.size and w[0] < -CLAMP_TOL:
        raise NegativeSpectrum(f"eigenvalue {w[0]:.3e} below -{CLAMP_TOL:.0e}")
    floor = 64 * np.finfo(float).eps * max(float(np.max(np.abs(w))), 1e-300)
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)) @ dag(v)


def expm_oracle(h: np.ndarray, theta: float) -> np.ndarray:
    """Brute-force ``exp(-i*theta*h)`` through the eigenbasis of ``h``."""
    w, v = herm_eig(h)
    return (v * np.exp(-1j * theta * w)) @ dag(v)


def phase_align(a: np.ndarray, b: np.ndarray, tol: float = 1e-14) -> tuple[np.ndarray, bool]:
    """Rotate the global phase of ``b`` so that <a|b> is real and non-negative.

    Returns ``(aligned, ok)``. When the overlap is below ``tol`` the phase is
    undefined, so ``b`` comes back unchanged with ``ok=False``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = np.vdot(a, b)
    if abs(overlap) < tol:
        return b, False
    return b * (abs(overlap) / overlap), True
