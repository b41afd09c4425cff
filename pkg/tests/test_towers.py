import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import multi_matrix
from moritalab.bimodule import BimoduleExpectation
from moritalab.condexp import trace_expectation, with_quasi_basis
from moritalab.errors import BadProjectionError, StarConditionError
from moritalab.fdalg import full_algebra
from moritalab.morita import standard_partner
from moritalab.numlin import subspace_distance
from moritalab.towers import (check_uniqueness, check_upward, downward, duality_check,
                              jones_fixed_subspace, uniqueness_iso, updown_relation_check, upward)

HALF = np.full((2, 2), 0.5, dtype=complex)


def test_upward_first_level_dims_frozen_from_oracle(s1, s2):
    # frozen from scripts/derive_oracles.py: C_1 has dim 16 for S1 and 8 for S2
    assert s1["U"].C1.dim == 16
    assert s2["U"].C1.dim == 8
    # S2's partner is itself (n = 1, p = 1)
    assert s2["U"].D1.dim == 8


@pytest.mark.parametrize("name", ["s1", "s2"])
def test_upward_checks(name, request):
    U = request.getfixturevalue(name)["U"]
    rep = check_upward(U)
    assert rep.passed, str(rep)
    assert rep["phi_seed_independence"].violation <= 1e-8
    assert rep["jones_compression"].violation <= 1e-8


def test_uniqueness_with_own_expectation(s2):
    U = s2["U"]
    theta = uniqueness_iso(U, U.Y1, U.EY)
    assert max(np.linalg.norm(theta(w) - w) for w in U.Y1.basis) < 1e-8
    assert check_uniqueness(U, U.Y1, U.EY, theta).passed


def test_uniqueness_rejects_candidate_without_star_condition(s2):
    U = s2["U"]
    FY = BimoduleExpectation(U.EY.big, U.EY.small, 2 * U.EY.values, U.EY.left_exp, U.EY.right_exp)
    with pytest.raises(StarConditionError):
        uniqueness_iso(U, U.Y1, FY)


def test_duality_second_level(s2):
    rep = duality_check(s2["U"])
    assert rep.passed, str(rep)
    assert rep["dim_Y2"].passed


def test_downward_by_explicit_projections(s2):
    D = downward(s2["M"], s2["E"], s2["EB"], s2["EX"], HALF, HALF)
    assert D.report.passed, str(D.report)
    # {p}' inside D_2 is the scalars
    assert D.P.dim == 1 and D.Q.dim == 1


def test_downward_rejects_wrong_projection(s2):
    with pytest.raises(BadProjectionError):
        downward(s2["M"], s2["E"], s2["EB"], s2["EX"], np.diag([1.0, 0.0]).astype(complex), HALF)


def test_jones_fixed_subspace_is_X(s1, s2):
    for s in (s1, s2):
        U = s["U"]
        assert subspace_distance(jones_fixed_subspace(U), U.pair.X.space) < 1e-8


def test_updown_relations_with_rebuild(s2):
    rep = updown_relation_check(s2["U"], HALF, HALF)
    assert rep.passed, str(rep)
    for k in ("rebuild_C_blocks", "rebuild_D_blocks", "rebuild1_C_blocks", "rebuild1_Y_dim"):
        assert rep[k].passed


# d = 2 keeps each example well under a second; index 2, 1 and 4 respectively
@settings(max_examples=4)
@given(st.sampled_from([[(1, 1), (1, 1)], [(2, 1)], [(1, 2)]]), st.integers(0, 10**6))
def test_random_partner_upward_and_rebuild(blocks, seed):
    A = multi_matrix(blocks, seed)
    E = with_quasi_basis(trace_expectation(full_algebra(A.d), A))
    M, EB, EX = standard_partner(E, 1, np.eye(A.d))
    U = upward(M, E, with_quasi_basis(EB), EX)
    assert check_upward(U, samples=5).passed
    rep = updown_relation_check(U)
    assert rep.passed, str(rep)
