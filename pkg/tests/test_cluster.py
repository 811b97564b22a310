import itertools
import math

import numpy as np
import pytest

from chargecluster.cluster import (PROJECTOR, STANDARD, cluster_product_form, cluster_standard, hadamard_map,
                                   initial_state, stabilizer_expectations, stabilizer_residuals,
                                   stabilizer_set, verify_stabilizers)
from chargecluster.errors import DimensionMismatch
from chargecluster.evolution import NoiseModel, collapse_operators, evolve_pure, propagate
from chargecluster.hamiltonian import build_projector_form, pauli_embed, PauliLabel, pauli_string
from chargecluster.linalg import SIGMA_X, phase_align
from chargecluster.metrics import fidelity_pure

from conftest import random_state


def aligned_fidelity(a, b):
    b2, _ = phase_align(a, b)
    return fidelity_pure(a, b2)


def test_conventions():
    assert np.allclose(SIGMA_X @ PROJECTOR.plus, -PROJECTOR.plus)
    assert np.allclose(SIGMA_X @ PROJECTOR.minus, PROJECTOR.minus)
    assert np.allclose(SIGMA_X @ STANDARD.plus, STANDARD.plus)
    assert cluster_product_form.convention == "projector"
    assert cluster_standard.convention == "standard"
    assert initial_state.convention == "computational"


def test_initial_state():
    assert np.array_equal(initial_state(1), [1, 0])
    assert np.array_equal(initial_state(2), [1, 0, 0, 0])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_initial_state_x_basis_expansion(n):
    total = np.zeros(2**n, dtype=complex)
    for word in itertools.product((PROJECTOR.minus, PROJECTOR.plus), repeat=n):
        vec = np.ones(1, dtype=complex)
        for v in word:
            vec = np.kron(vec, v)
        total += vec
    assert np.allclose(total / 2 ** (n / 2), initial_state(n))


def test_cluster_standard_two_qubits():
    assert np.allclose(cluster_standard(2), 0.5 * np.array([1, 1, 1, -1]))


def test_cluster_standard_three_qubits_phase_rule():
    amps = cluster_standard(3) * 2 * math.sqrt(2)
    expected = [(-1) ** (b[0] * b[1] + b[1] * b[2]) for b in itertools.product((0, 1), repeat=3)]
    assert np.allclose(amps, expected)
    # minus signs on 011, 110 only (111 has two adjacent pairs)
    assert [format(i, "03b") for i, a in enumerate(amps) if a.real < 0] == ["011", "110"]


def test_cluster_standard_zero_string():
    assert cluster_standard(4)[0] == pytest.approx(0.25)


def test_cluster_standard_is_cz_chain():
    n = 4
    plus = np.ones(2**n) / 2 ** (n / 2)
    cz = np.ones(2**n)
    for idx, bits in enumerate(itertools.product((0, 1), repeat=n)):
        for k in range(n - 1):
            if bits[k] and bits[k + 1]:
                cz[idx] *= -1
    assert np.allclose(cz * plus, cluster_standard(n))


def test_product_form_two_qubits():
    # (|-> + |+> sigma_x)(|-> + |+>) / 2 expanded by hand in the charge basis
    m, p = PROJECTOR.minus, PROJECTOR.plus
    expanded = 0.5 * (np.kron(m, m) + np.kron(m, p) + np.kron(p, m) + np.kron(p, SIGMA_X @ p))
    assert np.allclose(cluster_product_form(2), expanded)
    assert np.allclose(cluster_product_form(2), 0.5 * np.array([1, 1, 1, -1]))


@pytest.mark.parametrize("n", range(2, 7))
def test_product_form_equals_evolved_state(n):
    evolved = evolve_pure(initial_state(n), n, math.pi)
    assert aligned_fidelity(cluster_product_form(n), evolved) >= 1 - 1e-10


def test_product_form_overlap_with_zero_string():
    assert abs(cluster_product_form(4)[0]) ** 2 == pytest.approx(1 / 16)


def test_hadamard_on_projector_basis():
    assert np.allclose(hadamard_map(PROJECTOR.plus), [0, 1])
    assert np.allclose(hadamard_map(PROJECTOR.minus), [1, 0])


@pytest.mark.parametrize("n", range(2, 7))
def test_hadamard_maps_product_form_to_standard(n):
    assert aligned_fidelity(cluster_standard(n), hadamard_map(cluster_product_form(n))) >= 1 - 1e-10


def test_hadamard_layer_needed_beyond_two_qubits():
    assert fidelity_pure(cluster_standard(2), cluster_product_form(2)) == pytest.approx(1.0)
    assert fidelity_pure(cluster_standard(3), cluster_product_form(3)) < 0.5


def test_hadamard_involutive(rng):
    psi = random_state(rng, 32)
    assert np.max(np.abs(hadamard_map(hadamard_map(psi)) - psi)) <= 1e-12


def test_hadamard_rejects_bad_dimension():
    with pytest.raises(DimensionMismatch):
        hadamard_map(np.ones(6) / math.sqrt(6))


def test_stabilizer_labels():
    assert stabilizer_set(2).labels == ["X1Z2", "Z1X2"]
    s3 = stabilizer_set(3)
    assert s3.labels[1] == "Z1X2Z3"
    assert np.array_equal(s3.generators[1], pauli_string("ZXZ"))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_stabilizers_commute_and_square_to_identity(n):
    s = stabilizer_set(n)
    assert len(s) == n
    assert s.max_commutator() == 0.0
    assert s.max_square_error() == 0.0


@pytest.mark.parametrize("n", range(2, 7))
def test_standard_cluster_is_stabilized(n):
    ok, worst = verify_stabilizers(cluster_standard(n), stabilizer_set(n))
    assert ok and worst <= 1e-12


def test_product_state_fails_stabilizers():
    ok, worst = verify_stabilizers(initial_state(4), stabilizer_set(4))
    assert not ok and worst > 0.1


@pytest.mark.parametrize("site", range(3))
def test_single_z_error_flips_only_its_own_generator(site):
    n = 3
    stabs = stabilizer_set(n)
    damaged = pauli_embed(PauliLabel("Z", site), n) @ cluster_standard(n)
    res = stabilizer_residuals(damaged, stabs)
    failing = [k for k, r in enumerate(res) if r > 1e-9]
    assert failing == [site]
    expectations = stabilizer_expectations(damaged, stabs)
    assert expectations[site] == pytest.approx(-1.0)


def test_density_matrix_stabilizer_check():
    psi = cluster_standard(4)
    ok, worst = verify_stabilizers(np.outer(psi, psi.conj()), stabilizer_set(4))
    assert ok and worst <= 1e-12


def test_stabilizer_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        verify_stabilizers(cluster_standard(3), stabilizer_set(4))


def test_noisy_stabilizer_expectation_drops_with_rate():
    n = 3
    stabs = stabilizer_set(n)
    psi0 = initial_state(n)
    h = build_projector_form(n, 1.0)
    means = []
    for kappa in (1.0, 5.0, 20.0, 50.0):
        ops = collapse_operators(NoiseModel(kappa=kappa), n)
        rho = propagate(np.outer(psi0, psi0.conj()), h, ops, math.pi, 1e-3)
        # compare in the standard frame: conjugate by the Hadamard layer
        had = np.array([hadamard_map(col) for col in np.eye(2**n)]).T
        means.append(stabilizer_expectations(had @ rho @ had.conj().T, stabs).mean())
    assert all(a > b for a, b in zip(means, means[1:]))
