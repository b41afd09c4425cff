import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import diagonal, multi_matrix, unit
from moritalab.errors import NotProjectionError, NotSubalgebraError
from moritalab.fdalg import (algebra_violation, amplify, block_structure, center, commutant,
                             full_algebra, generate_algebra, inclusion_matrix, is_full_projection,
                             is_subalgebra, same_block_data, scalars)

# (block size, multiplicity) lists with total size at most 5
block_lists = st.lists(st.tuples(st.integers(1, 2), st.integers(1, 2)), min_size=1, max_size=3).filter(
    lambda b: sum(k * m for k, m in b) <= 5)
seeds = st.integers(0, 10**6)


def test_generate_full_and_diagonal(m2):
    A = generate_algebra(2, [unit(0, 1)])
    assert A.dim == 4 and is_subalgebra(m2, A)
    D = generate_algebra(2, [unit(0, 0)])
    assert D.dim == 2 and D.contains(np.eye(2))


def test_commutant_dims_frozen_from_oracle(m2):
    # frozen from scripts/derive_oracles.py
    assert commutant(diagonal(), m2).dim == 2
    assert commutant(m2, m2).dim == 1


def test_commutant_rejects_outside_elements():
    with pytest.raises(NotSubalgebraError):
        commutant([unit(0, 1)], diagonal())


def test_commutant_of_large_algebra_uses_generators():
    # M_4 (x) 1_2 inside M_8: 16-dimensional, commutant 1_4 (x) M_2
    A = multi_matrix([(4, 2)], seed=1)
    C = commutant(A, full_algebra(8))
    assert C.dim == 4
    assert commutant(scalars(16), full_algebra(16)).dim == 256


@given(block_lists, seeds)
def test_block_structure_recovers_blocks(blocks, seed):
    A = multi_matrix(blocks, seed)
    assert algebra_violation(A) < 1e-10
    bs = block_structure(A)
    assert sorted(bs.blocks) == sorted(blocks)
    assert np.allclose(sum(bs.central_projections), np.eye(A.d), atol=1e-8)
    assert center(A).dim == len(blocks)


@given(block_lists, seeds)
def test_commutant_dimension_and_bicommutant(blocks, seed):
    A = multi_matrix(blocks, seed)
    M = full_algebra(A.d)
    C = commutant(A, M)
    assert C.dim == sum(m * m for _, m in blocks)
    CC = commutant(C, M)
    assert CC.dim == A.dim and is_subalgebra(A, CC)


@given(block_lists, seeds)
def test_inclusion_into_full_matrix_algebra(blocks, seed):
    A = multi_matrix(blocks, seed)
    inc = inclusion_matrix(A, full_algebra(A.d))
    # a block M_k (x) 1_m sits in M_d with multiplicity m
    assert sorted((k, int(inc.entries[i, 0])) for i, (k, _) in enumerate(inc.small.blocks)) == sorted(blocks)


def test_inclusion_matrix_d2_in_m2(m2):
    inc = inclusion_matrix(diagonal(), m2)
    assert inc.entries.tolist() == [[1], [1]]


def test_full_projection(m2):
    assert is_full_projection(unit(0, 0), m2)
    assert not is_full_projection(unit(0, 0), diagonal())
    with pytest.raises(NotProjectionError):
        is_full_projection(np.array([[1, 1], [0, 0]], dtype=complex), m2)


def test_amplify_layout():
    A = amplify(diagonal(), 2)
    assert A.dim == 8 and A.d == 4
    assert A.contains(np.kron(unit(0, 1), unit(1, 1)))
    assert not A.contains(np.kron(unit(0, 1), unit(0, 1)))


def test_same_block_data():
    assert same_block_data(multi_matrix([(1, 1), (1, 1)], 0), diagonal())
    assert not same_block_data(full_algebra(2), diagonal())
