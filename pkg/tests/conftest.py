import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from moritalab.cli import build_inclusion, load_scenario, run_scenario
from moritalab.condexp import with_quasi_basis
from moritalab.fdalg import MatrixAlgebra, full_algebra, scalars
from moritalab.morita import standard_partner
from moritalab.numlin import Subspace, orthonormalize, random_unitary
from moritalab.paragroup import build_tower, relative_commutants
from moritalab.towers import upward

settings.register_profile("default", deadline=None, max_examples=12, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

F11_I2 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)  # f11 (x) 1 in M_2(M_2)


def unit(i, j, d=2):
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1
    return m


def diagonal(d=2) -> MatrixAlgebra:
    return MatrixAlgebra(Subspace((d, d), np.stack([unit(i, i, d) for i in range(d)])))


def multi_matrix(blocks, seed=None) -> MatrixAlgebra:
    """(+)_i M_{k_i} (x) 1_{m_i} inside M_d, optionally rotated by a random unitary."""
    d = sum(k * m for k, m in blocks)
    elems, off = [], 0
    for k, m in blocks:
        for i in range(k):
            for j in range(k):
                x = np.zeros((d, d), dtype=complex)
                x[off:off + k * m, off:off + k * m] = np.kron(unit(i, j, k), np.eye(m))
                elems.append(x)
        off += k * m
    if seed is not None:
        U = random_unitary(d, np.random.default_rng(seed))
        elems = [U @ x @ U.conj().T for x in elems]
    return MatrixAlgebra(orthonormalize(elems, shape=(d, d)))


@pytest.fixture(scope="session")
def s1():
    E = with_quasi_basis(build_inclusion(load_scenario("s1_trace_m2"), 1e-9))
    M, EB, EX = standard_partner(E, 2, F11_I2)
    EB = with_quasi_basis(EB)
    return {"E": E, "M": M, "EB": EB, "EX": EX, "U": upward(M, E, EB, EX)}


@pytest.fixture(scope="session")
def s2():
    E = with_quasi_basis(build_inclusion(load_scenario("s2_pinching_d2"), 1e-9))
    M, EB, EX = standard_partner(E, 1, np.eye(2))
    EB = with_quasi_basis(EB)
    return {"E": E, "M": M, "EB": EB, "EX": EX, "U": upward(M, E, EB, EX)}


@pytest.fixture(scope="session")
def s1_run():
    return run_scenario(load_scenario("s1_trace_m2"))


@pytest.fixture(scope="session")
def towers3():
    """Depth-3 towers and relative commutants for S1 and S3 (about 8 s each)."""
    out = {}
    for name in ("s1_trace_m2", "s3_corner_of_s1"):
        E = with_quasi_basis(build_inclusion(load_scenario(name), 1e-9))
        T = build_tower(E, 3)
        out[name] = (T, relative_commutants(E.target, T))
    return out


@pytest.fixture
def m2():
    return full_algebra(2)


@pytest.fixture
def c2():
    return scalars(2)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
