import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    weights = rng.random(rank)
    weights /= weights.sum()
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        psi = random_state(rng, dim)
        rho += w * np.outer(psi, psi.conj())
    return rho


# acceptance verdicts, keyed by criterion number, printed once at the end of the run
ACCEPTANCE_LINES: dict[int, list[tuple[bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        checks = ACCEPTANCE_LINES[number]
        verdict = "PASS" if all(ok for ok, _ in checks) else "FAIL"
        detail = "; ".join(f"{'ok' if ok else 'MISS'} {text}" for ok, text in checks)
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {detail}")
