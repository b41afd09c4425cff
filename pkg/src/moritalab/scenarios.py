"""Concrete Morita pairs used by the built-in scenarios.

The tower pair starts from A in B with expectation F and realizes the
inclusions B_1 in B_2 (left) and A in B (right), where B_2 is the basic
construction of the dual expectation F_1: B_1 -> B.  The big bimodule is
B_1 itself and the small one is B f, both written as rectangular matrices
through the isometric embedding y -> [F_1(w_i^* y)]_i for a Parseval
quasi-basis {w_i} of F_1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bimodule import BimoduleExpectation
from .condexp import (BasicConstruction, CondExpectation, basic_construction, dual_expectation,
                      index_of, quasi_basis, with_quasi_basis)
from .errors import InconsistentSpanError
from .fdalg import MatrixAlgebra
from .morita import MoritaPair, make_pair
from .numlin import (DEFAULT_TOL, Subspace, dag, lstsq_map, orthonormalize, psd_inv, psd_sqrt,
                     range_isometry)


def fit_linear(space: Subspace, inputs, outputs, tol: float = 1e-8) -> np.ndarray:
    """Values on the basis of space of the linear map sending inputs[k] to outputs[k]."""
    inputs, outputs = np.asarray(inputs), np.asarray(outputs)
    S = space.columns.conj().T @ inputs.reshape(len(inputs), -1).T
    T, res = lstsq_map(S, outputs.reshape(len(outputs), -1).T)
    if res > tol:
        raise InconsistentSpanError(f"linear fit residual {res:.2e}")
    return T.T.reshape(space.dim, *outputs.shape[1:])


@dataclass(frozen=True, eq=False)
class TowerPair:
    pair: MoritaPair
    F2: CondExpectation  # B_2 -> B_1, left
    F: CondExpectation  # B -> A, right
    G: BimoduleExpectation  # B_1 -> B f
    base: BasicConstruction  # A in B in B_1
    F1: CondExpectation


def tower_pair(F: CondExpectation, tol: float = DEFAULT_TOL) -> TowerPair:
    bc = basic_construction(F, tol)
    F1 = dual_expectation(bc, F, tol)
    ws = [u for u, _ in quasi_basis(F1)]
    m = bc.module_dim
    B1, f = bc.algebra, bc.jones

    def iota(y):
        return np.concatenate([F1(dag(w) @ y) for w in ws], axis=0)

    def block(b1):
        return np.block([[F1(dag(wi) @ b1 @ wj) for wj in ws] for wi in ws])

    V = range_isometry(block(np.eye(m)))
    Vh = dag(V)
    r = V.shape[1]
    emb = lambda y: Vh @ iota(y)
    Ymats = [emb(y) for y in B1.basis]
    Y_space = orthonormalize(Ymats, tol, shape=(r, m))
    B1img = MatrixAlgebra(orthonormalize([Vh @ block(b) @ V for b in B1.basis], tol, shape=(r, r)))
    B2img = MatrixAlgebra(orthonormalize([x @ dag(y) for x in Ymats for y in Ymats], tol, shape=(r, r)))
    ind = index_of(F)
    h = bc.embed(psd_sqrt(ind))
    lamB = bc.embedded(F.source, tol)
    lamA = bc.embedded(F.target, tol)
    X_space = orthonormalize([emb(h @ bc.embed(b) @ f) for b in F.source.basis], tol, shape=(r, m))
    M = make_pair(B1img, B2img, lamA, lamB, Y_space, X_space)

    ind1_inv = psd_inv(index_of(F1))
    pairs = [(x, y) for x in B1.basis for y in B1.basis]
    vals = fit_linear(B2img.span, [emb(x) @ dag(emb(y)) for x, y in pairs],
                      [Vh @ block(ind1_inv @ x @ dag(y)) @ V for x, y in pairs])
    F2 = with_quasi_basis(CondExpectation(B2img, B1img, vals))

    bs = F.source.basis
    Fr = CondExpectation(lamB, lamA, fit_linear(lamB.span, bc.embed_many(bs),
                                                bc.embed_many(np.stack([F(b) for b in bs]))))
    Fr = with_quasi_basis(Fr)

    ins, outs = [], []
    for x in bs:
        for y in bs:
            ins.append(emb(bc.embed(x) @ f @ bc.embed(y)))
            outs.append(emb(bc.embed(x @ F(y)) @ f))
    gvals = fit_linear(Y_space, ins, outs)
    G = BimoduleExpectation(M.Y, M.X, gvals, F2, Fr)
    return TowerPair(M, F2, Fr, G, bc, F1)
