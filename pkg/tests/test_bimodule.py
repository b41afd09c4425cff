import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import diagonal, multi_matrix, unit
from moritalab.bimodule import (CornerBimodule, bimodule_from_generators, bimodule_map,
                                check_bimodule_expectation, check_equivalence, dual_bimodule, dual_expectation_map,
                                induced_left_expectation, induced_right_expectation, interior_tensor,
                                left_expectation_from, left_frame, right_expectation_from,
                                right_frame, self_bimodule, tensor_gram_rank)
from moritalab.errors import RankDeficientError
from moritalab.fdalg import full_algebra, scalars
from moritalab.numlin import dag, orthonormalize


def column_module():
    """C^2 as an M_2-C bimodule (2 x 1 matrices)."""
    return CornerBimodule(full_algebra(2), scalars(1), orthonormalize([np.eye(2)[:, [0]], np.eye(2)[:, [1]]]))


def test_self_bimodules_are_equivalences():
    for A in (full_algebra(2), diagonal(), multi_matrix([(1, 1), (2, 1)], 5)):
        assert check_equivalence(self_bimodule(A)).passed


def test_column_module_is_equivalence_and_frames():
    X = column_module()
    assert check_equivalence(X).passed
    R = right_frame(X)
    assert np.allclose(sum(dag(x) @ x for x in R), np.eye(1))
    L = left_frame(X)
    assert np.allclose(sum(x @ dag(x) for x in L), np.eye(2))


def test_non_full_bimodule_detected():
    X = bimodule_from_generators(diagonal(), diagonal(), [unit(0, 0)])
    rep = check_equivalence(X)
    assert X.dim == 1
    assert not rep["left_full"].passed and not rep["right_full"].passed
    assert rep["left_action"].passed


def test_dual_is_involutive():
    X = column_module()
    Xdd = dual_bimodule(dual_bimodule(X))
    assert np.allclose(Xdd.basis, X.basis)
    assert dual_bimodule(X).shape == (1, 2)
    assert check_equivalence(dual_bimodule(X)).passed


def test_interior_tensor_with_dual_recovers_left_algebra():
    X = column_module()
    T = interior_tensor(X, dual_bimodule(X))
    assert T.dim == 4 == tensor_gram_rank(X, dual_bimodule(X))
    T2 = interior_tensor(dual_bimodule(X), X)
    assert T2.dim == 1 == tensor_gram_rank(dual_bimodule(X), X)


@given(st.integers(0, 10**6))
def test_interior_tensor_rank_matches_gram_rank(seed):
    A = multi_matrix([(1, 1), (1, 1)], seed)
    X = self_bimodule(A)
    assert interior_tensor(X, X).dim == tensor_gram_rank(X, X) == A.dim


def test_partner_expectation_axioms(s1):
    EX = s1["EX"]
    assert check_bimodule_expectation(EX).passed
    assert check_bimodule_expectation(dual_expectation_map(EX)).passed


def test_expectation_determined_by_either_side(s1):
    EX, EA, EB = s1["EX"], s1["E"], s1["EB"]
    R = right_expectation_from(EB, EX.big, EX.small)
    L = left_expectation_from(EA, EX.big, EX.small)
    assert np.abs(R.values - EX.values).max() < 1e-10
    assert np.abs(L.values - EX.values).max() < 1e-10


def test_algebra_expectations_induced_from_bimodule_map(s1):
    EX, EA, EB = s1["EX"], s1["E"], s1["EB"]
    IA = induced_left_expectation(EX, EA.target, EA.source)
    IB = induced_right_expectation(EX, EB.target, EB.source)
    assert max(np.linalg.norm(IA(c) - EA(c)) for c in EA.source.basis) < 1e-10
    assert max(np.linalg.norm(IB(d) - EB(d)) for d in EB.source.basis) < 1e-10


def test_induced_expectation_requires_faithful_action():
    X = bimodule_from_generators(diagonal(), diagonal(), [unit(0, 0)])
    EX = bimodule_map(X, X, lambda y: y)
    with pytest.raises(RankDeficientError):
        induced_left_expectation(EX, diagonal(), diagonal())
