from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import F11_I2, diagonal, multi_matrix
from moritalab.condexp import trace_expectation, with_quasi_basis
from moritalab.errors import SizeCapError
from moritalab.fdalg import BlockStructure, full_algebra, scalars
from moritalab.paragroup import (ParagroupData, bratteli_dot, build_tower, check_tower,
                                 commutant_corner_iso, compare_paragroups, relative_commutants)


def paragroup(E, depth):
    T = build_tower(E, depth)
    return T, relative_commutants(E.target, T)


def trace_s1():
    return with_quasi_basis(trace_expectation(full_algebra(2), scalars(2)))


def pinching():
    return with_quasi_basis(trace_expectation(full_algebra(2), diagonal()))


def base_s4():
    return with_quasi_basis(trace_expectation(diagonal(), scalars(2)))


# frozen from scripts/derive_oracles.py (module-picture Kronecker commutants, depth 2)
ORACLE = {
    "s1": (trace_s1, [4, 16, 64], [4, 16, 64], [1, 1, 1]),
    "s2": (pinching, [4, 8, 16], [2, 4, 8], [2, 4, 2]),
    "s4_base": (base_s4, [2, 4, 8], [2, 4, 8], [2, 1, 2]),
}


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_tower_and_relative_commutants_frozen_from_oracle(name):
    make, tower_dims, rc_dims, rc_blocks = ORACLE[name]
    T, P = paragroup(make(), 2)
    assert [lev.dim for lev in T.levels] == tower_dims
    assert P.rc_dims == rc_dims
    assert [len(s.blocks) for s in P.block_dims] == rc_blocks
    assert check_tower(T).passed


def test_size_caps():
    with pytest.raises(SizeCapError):
        build_tower(trace_s1(), 4)
    with pytest.raises(SizeCapError):
        build_tower(trace_s1(), 2, ambient_cap=10)
    with pytest.raises(ValueError):
        build_tower(trace_s1(), -1)


def test_tower_lift_is_the_level_embedding():
    T, _ = paragroup(trace_s1(), 2)
    x = np.array([[1, 2], [3, 4]], dtype=complex)
    y = T.lift(x, 0, 2)
    assert T.levels[2].contains(y)
    assert np.allclose(T.lift(x @ x, 0, 2), y @ y)


def test_compare_self_and_different():
    _, P1 = paragroup(trace_s1(), 1)
    _, P2 = paragroup(pinching(), 1)
    assert compare_paragroups(P1, P1).equal
    v = compare_paragroups(P1, P2)
    assert not v.equal and v.reason.startswith("level 0")


def test_compare_respects_block_permutations():
    _, P = paragroup(pinching(), 2)
    # reorder the blocks of every level and permute the inclusion matrices to match
    perms = [list(range(len(s.blocks)))[::-1] for s in P.block_dims]
    blocks = [BlockStructure([s.blocks[i] for i in p], [s.central_projections[i] for i in p])
              for s, p in zip(P.block_dims, perms)]
    mats = [replace(m, entries=m.entries[np.ix_(perms[n], perms[n + 1])]) for n, m in enumerate(P.bratteli)]
    Q = ParagroupData(P.rc_dims, mats, blocks, P.algebras)
    v = compare_paragroups(P, Q)
    assert v.equal and v.permutations is not None
    # breaking one inclusion entry breaks the isomorphism
    bad = [replace(mats[0], entries=mats[0].entries + 1)] + mats[1:]
    assert not compare_paragroups(P, ParagroupData(P.rc_dims, bad, blocks, P.algebras)).equal


def test_corner_commutant_isomorphism():
    pi, src, tgt, rep = commutant_corner_iso(trace_s1(), 2, F11_I2)
    assert rep.passed and src.dim == tgt.dim


def test_bratteli_dot_depth_one():
    _, P = paragroup(trace_s1(), 1)
    dot = bratteli_dot(P, "s1")
    assert dot.startswith('digraph "s1" {')
    assert 'L0_0 -> L1_0 [label="2"];' in dot
    assert dot.rstrip().endswith("}")


@settings(max_examples=6)
@given(st.sampled_from([[(1, 2)], [(1, 1), (1, 1)], [(2, 1)], [(1, 1), (2, 1)]]),
       st.integers(0, 10**6), st.integers(0, 10**6))
def test_paragroup_invariant_under_unitary_conjugation(blocks, s1, s2):
    P = [relative_commutants(A, build_tower(with_quasi_basis(trace_expectation(full_algebra(A.d), A)), 1))
         for A in (multi_matrix(blocks, s1), multi_matrix(blocks, s2))]
    assert P[0].rc_dims[0] == sum(m * m for _, m in blocks)
    assert compare_paragroups(*P).equal
