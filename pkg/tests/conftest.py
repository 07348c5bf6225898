import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def random_pauli_observable(n, rng, n_terms=4):
    from idblock.circuit import Observable

    terms = []
    for _ in range(n_terms):
        k = rng.integers(1, min(n, 3) + 1)
        qs = rng.choice(n, size=k, replace=False)
        terms.append((float(rng.normal()), {int(q): "XYZ"[rng.integers(3)] for q in qs}))
    return Observable(terms)


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def _report(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
