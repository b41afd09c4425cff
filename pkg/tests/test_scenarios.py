import numpy as np
import pytest

from conftest import diagonal
from moritalab.bimodule import check_bimodule_expectation
from moritalab.condexp import (quasi_basis_violation, trace_expectation, verify_expectation,
                               watatani_index, with_quasi_basis)
from moritalab.errors import InconsistentSpanError
from moritalab.fdalg import scalars
from moritalab.morita import check_morita_pair, transport_expectation
from moritalab.numlin import orthonormalize
from moritalab.scenarios import fit_linear, tower_pair


@pytest.fixture(scope="module")
def s4():
    return tower_pair(with_quasi_basis(trace_expectation(diagonal(), scalars(2))))


def test_tower_pair_sizes_frozen_from_oracle(s4):
    # frozen from scripts/derive_oracles.py: dim B = 2, dim B_1 = 4, dim B_2 = 8
    M = s4.pair
    assert (M.A.dim, M.C.dim, M.B.dim, M.D.dim) == (4, 8, 1, 2)
    assert (M.Y.dim, M.X.dim) == (4, 2)
    assert check_morita_pair(M).passed


def test_tower_pair_expectations(s4):
    for E in (s4.F2, s4.F):
        assert verify_expectation(E, samples=5).passed
        assert max(quasi_basis_violation(E, E.quasi_basis)) < 1e-8
    assert np.allclose(watatani_index(s4.F), 2 * np.eye(s4.F.d))
    assert check_bimodule_expectation(s4.G).passed


def test_transport_of_F2_recovers_F_and_G(s4):
    EB, EX = transport_expectation(s4.pair, s4.F2)
    assert max(np.linalg.norm(EB(d) - s4.F(d)) for d in s4.pair.D.basis) < 1e-10
    assert max(np.linalg.norm(EX(y) - s4.G(y)) for y in s4.pair.Y.basis) < 1e-10


def test_fit_linear_detects_inconsistent_data():
    S = orthonormalize([np.eye(2)], shape=(2, 2))
    vals = fit_linear(S, [np.eye(2), 2 * np.eye(2)], [np.ones(1), 2 * np.ones(1)])
    # the basis element is 1/sqrt(2) and 1 maps to 1
    assert np.allclose(vals, np.ones((1, 1)) / np.sqrt(2))
    with pytest.raises(InconsistentSpanError):
        fit_linear(S, [np.eye(2), 2 * np.eye(2)], [np.ones(1), np.ones(1)])
