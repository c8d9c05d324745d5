import functools

import numpy as np
import pytest

from qcontext.polar_space import build_space

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(label: str) -> np.ndarray:
    """Kronecker product of 2x2 Pauli matrices, qubit 1 leftmost."""
    return functools.reduce(np.kron, (_PAULI[c] for c in label))


@functools.lru_cache(maxsize=None)
def cached_space(n: int):
    return build_space(n)


@pytest.fixture(scope="session")
def space2():
    return cached_space(2)


@pytest.fixture(scope="session")
def space3():
    return cached_space(3)


@pytest.fixture(scope="session")
def space4():
    return cached_space(4)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
