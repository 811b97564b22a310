"""Linear cluster-state generation on superconducting charge-qubit chains.

Builds the flux-tuned array Hamiltonian, evolves it exactly or under T1/T2
Lindblad noise, and checks the result against the CZ-chain graph state.
"""
from .calibration import calibrate_kappa
from .cluster import (cluster_product_form, cluster_standard, hadamard_map, initial_state,
                      stabilizer_set, verify_stabilizers)
from .config import ExperimentConfig, parse_config
from .evolution import NoiseModel, collapse_operators, evolve_pure, integrate_master, unitary_exact
from .experiments import run_all, run_scenario
from .hamiltonian import build_projector_form, build_raw
from .metrics import fidelity_mixed, fidelity_pure, find_peaks, l1_coherence
from .qubits import ChainParams, QubitParams, tune_flux, tuned_chain

__version__ = "0.1.0"
