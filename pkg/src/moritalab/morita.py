"""Strong Morita equivalence of inclusions: standard form, transport, linking algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bimodule import (BimoduleExpectation, CornerBimodule, bimodule_map, check_bimodule_expectation,
                       check_equivalence, dual_bimodule, left_frame, mixed_fullness, right_frame)
from .condexp import (CondExpectation, amplify_map, compress_expectation, compression_data,
                      diag_amplify, from_map, index_of, quasi_basis, verify_expectation)
from .errors import FrameNotFoundError
from .fdalg import MatrixAlgebra, amplify, compress, is_full_projection, is_subalgebra
from .numlin import DEFAULT_TOL, Subspace, dag, orthonormalize, subspace_distance
from .report import CHECK_TOL, CheckReport


@dataclass(frozen=True, eq=False)
class MoritaPair:
    """A in C (inside M_{d1}) and B in D (inside M_{d2}) linked by X inside Y."""

    A: MatrixAlgebra
    C: MatrixAlgebra
    B: MatrixAlgebra
    D: MatrixAlgebra
    Y: CornerBimodule  # C-D
    X: CornerBimodule  # A-B
    frame: np.ndarray  # x_i in X with sum x_i^* x_i = 1


def make_pair(A, C, B, D, Y_space: Subspace, X_space: Subspace, frame=None) -> MoritaPair:
    Y = CornerBimodule(C, D, Y_space)
    X = CornerBimodule(A, B, X_space)
    if frame is None:
        frame = right_frame(X)
    return MoritaPair(A, C, B, D, Y, X, np.asarray(frame))


def check_morita_pair(M: MoritaPair, tol: float = CHECK_TOL) -> CheckReport:
    rep = CheckReport()
    rep.add_bool("A_in_C", is_subalgebra(M.A, M.C))
    rep.add_bool("B_in_D", is_subalgebra(M.B, M.D))
    rep.add("X_in_Y", max((M.Y.space.residual(x) for x in M.X.basis), default=0.0), tol)
    rep.merge(check_equivalence(M.Y, tol), "Y.")
    rep.merge(check_equivalence(M.X, tol), "X.")
    rep.merge(mixed_fullness(M.Y, M.X), "YX.")
    s = sum(dag(x) @ x for x in M.frame)
    rep.add("frame_identity", np.linalg.norm(s - np.eye(M.D.d)), tol)
    rep.add("frame_in_X", max(M.X.space.residual(x) for x in M.frame), tol)
    return rep


def dual_pair(M: MoritaPair) -> MoritaPair:
    """The same equivalence read from the other side (B in D, A in C, X~ in Y~)."""
    Xd, Yd = dual_bimodule(M.X), dual_bimodule(M.Y)
    return MoritaPair(M.B, M.D, M.A, M.C, Yd, Xd, dag(left_frame(M.X)))


# -- standard form ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StandardForm:
    n: int
    p: np.ndarray  # [x_i x_j^*] in M_n(A)
    R: np.ndarray  # stacked frame, R^* R = 1
    V: np.ndarray  # range isometry of p
    pair: MoritaPair
    corner_A: MatrixAlgebra = field(repr=False)  # V^* p M_n(A) p V
    corner_C: MatrixAlgebra = field(repr=False)
    corner_X: Subspace = field(repr=False)  # W^* (1 (x) f) M_n(A) p V
    corner_Y: Subspace = field(repr=False)

    @property
    def U(self) -> np.ndarray:
        return dag(self.R) @ self.V

    def psi_B(self, b):
        return dag(self.V) @ self.R @ b @ dag(self.R) @ self.V

    psi_D = psi_B

    def psi_X(self, x):
        """First block row of [x x_j^*], compressed on the right to the range of p."""
        return x @ dag(self.R) @ self.V

    psi_Y = psi_X

    def psi_Y_inv(self, w):
        return w @ dag(self.V) @ self.R

    def psi_D_inv(self, w):
        return dag(self.R) @ self.V @ w @ dag(self.V) @ self.R

    def square_X(self, x):
        """Psi_X(x) as an element of (1 (x) f) M_n(A) p inside M_{n d1}."""
        d1 = x.shape[0]
        W = np.zeros((self.n * d1, d1), dtype=complex)
        W[:d1] = np.eye(d1)
        return W @ x @ dag(self.R)


def corner_spaces(A: MatrixAlgebra, C: MatrixAlgebra, n: int, p: np.ndarray, V: np.ndarray,
                  tol: float = DEFAULT_TOL):
    """V^* p M_n(.) p V and W^* (1 (x) f) M_n(.) p V for A and C."""
    d = A.d
    W = np.zeros((n * d, d), dtype=complex)
    W[:d] = np.eye(d)
    out = []
    for alg in (A, C):
        An = amplify(alg, n)
        out.append(compress(An, V, tol))
        out.append(orthonormalize([dag(W) @ a @ V for a in An.basis], tol, shape=(d, V.shape[1])))
    cA, cX, cC, cY = out
    return cA, cC, cX, cY


def standard_form(M: MoritaPair, tol: float = DEFAULT_TOL) -> StandardForm:
    frame = np.asarray(M.frame)
    if frame.size == 0:
        raise FrameNotFoundError("empty frame")
    n = len(frame)
    R = np.concatenate(list(frame), axis=0)
    if np.linalg.norm(dag(R) @ R - np.eye(M.D.d)) > 1e-8:
        raise FrameNotFoundError("frame does not satisfy sum x_i^* x_i = 1")
    p = R @ dag(R)
    from .numlin import range_isometry
    V = range_isometry(p)
    cA, cC, cX, cY = corner_spaces(M.A, M.C, n, p, V, tol)
    return StandardForm(n, p, R, V, M, cA, cC, cX, cY)


def check_standard_form(S: StandardForm, samples: int = 20, seed: int = 0,
                        tol: float = CHECK_TOL) -> CheckReport:
    M = S.pair
    rng = np.random.default_rng(seed)
    rep = CheckReport()
    An = amplify(M.A, S.n)
    rep.add_bool("p_full", is_full_projection(S.p, An))
    rep.add("p_in_MnA", An.span.residual(S.p), tol)
    for name, alg, target in (("B", M.B, S.corner_A), ("D", M.D, S.corner_C)):
        imgs = [S.psi_B(b) for b in alg.basis]
        rep.add(f"psi_{name}_onto", subspace_distance(orthonormalize(imgs, shape=target.span.shape), target.span), tol)
        mult = 0.0
        for _ in range(samples):
            a = alg.element(rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim))
            b = alg.element(rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim))
            mult = max(mult, np.linalg.norm(S.psi_B(a @ b) - S.psi_B(a) @ S.psi_B(b)),
                       np.linalg.norm(S.psi_B(dag(a)) - dag(S.psi_B(a))))
        rep.add(f"psi_{name}_homomorphism", mult, tol)
    for name, mod, target in (("X", M.X, S.corner_X), ("Y", M.Y, S.corner_Y)):
        imgs = [S.psi_X(x) for x in mod.basis]
        rep.add(f"psi_{name}_onto", subspace_distance(orthonormalize(imgs, shape=target.shape), target), tol)
        rep.add(f"psi_{name}_roundtrip", max(np.linalg.norm(S.psi_Y_inv(S.psi_X(x)) - x) for x in mod.basis), 1e-9)
    ipv = bim = 0.0
    for _ in range(samples):
        x = M.X.element(rng.standard_normal(M.X.dim))
        y = M.X.element(rng.standard_normal(M.X.dim))
        ipv = max(ipv, np.linalg.norm(dag(S.psi_X(x)) @ S.psi_X(y) - S.psi_B(dag(x) @ y)))
        a = M.A.element(rng.standard_normal(M.A.dim))
        b = M.B.element(rng.standard_normal(M.B.dim))
        bim = max(bim, np.linalg.norm(S.psi_X(a @ x @ b) - a @ S.psi_X(x) @ S.psi_B(b)))
    rep.add("psi_X_inner_product", ipv, tol)
    rep.add("psi_X_bimodule", bim, tol)
    return rep


# -- transport --------------------------------------------------------------------------------

def transport_expectation(M: MoritaPair, EA: CondExpectation, S: Optional[StandardForm] = None,
                          tol: float = DEFAULT_TOL):
    """(E^B, E^X) pulled back from the compressed expectation in standard form."""
    S = standard_form(M) if S is None else S
    R, n, d = S.R, S.n, M.A.d
    En = amplify_map(EA, d, n)
    EB = from_map(M.D, M.B, lambda x: dag(R) @ En(R @ x @ dag(R)) @ R)
    frame = list(M.frame)
    EX = bimodule_map(M.Y, M.X, lambda y: sum(EA(y @ dag(xj)) @ xj for xj in frame), EA, EB)
    if EA.quasi_basis is not None:
        comp = compress_expectation(EA, n, S.p, tol)
        qb = tuple((S.psi_D_inv(u), S.psi_D_inv(v)) for u, v in comp.quasi_basis)
        ind = dag(R) @ diag_amplify(index_of(EA), n) @ R
        EB = CondExpectation(EB.source, EB.target, EB.values, qb, ind)
        EX = BimoduleExpectation(EX.big, EX.small, EX.values, EA, EB)
    return EB, EX


def standard_partner(EA: CondExpectation, n: int, p: np.ndarray, tol: float = DEFAULT_TOL):
    """(MoritaPair, E^B, E^X) for the corner partner V^* p M_n(A) p V inside V^* p M_n(C) p V."""
    A, C = EA.target, EA.source
    cd = compression_data(EA, n, p, tol)
    cA, cC, cX, cY = corner_spaces(A, C, n, cd.p, cd.V, tol)
    M = make_pair(A, C, cA, cC, cY, cX)
    EB = compress_expectation(EA, n, cd.p, tol)
    EB = CondExpectation(cC, cA, np.stack([EB(x) for x in cC.basis]), EB.quasi_basis, EB.index)
    V, d = cd.V, A.d
    W = np.zeros((n * d, d), dtype=complex)
    W[:d] = np.eye(d)
    En = amplify_map(EA, d, n)
    EX = bimodule_map(M.Y, M.X, lambda y: dag(W) @ En(W @ y @ dag(V)) @ V, EA, EB)
    return M, EB, EX


def check_transport(M: MoritaPair, EB: CondExpectation, EX: BimoduleExpectation,
                    samples: int = 20, seed: int = 0, tol: float = CHECK_TOL) -> CheckReport:
    rep = CheckReport()
    rep.merge(verify_expectation(EB, samples, seed, tol), "EB.")
    rep.merge(check_bimodule_expectation(EX, samples, seed, tol), "EX.")
    if EB.index is not None:
        fresh = sum(u @ v for u, v in quasi_basis(EB))
        rep.add("EB.index_formula", np.linalg.norm(fresh - EB.index), tol)
    return rep


# -- linking algebras ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinkingData:
    LX: MatrixAlgebra
    LY: MatrixAlgebra
    P: np.ndarray
    Q: np.ndarray
    groups: list  # index groups of the LY basis: C, Y, Y~, D
    pair: MoritaPair


def _embed(block, d1, d2, where):
    out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    r = slice(0, d1) if where[0] == 0 else slice(d1, d1 + d2)
    c = slice(0, d1) if where[1] == 0 else slice(d1, d1 + d2)
    out[r, c] = block
    return out


def _linking(C, D, Y, d1, d2):
    parts = [[_embed(c, d1, d2, (0, 0)) for c in C.basis],
             [_embed(y, d1, d2, (0, 1)) for y in Y.basis],
             [_embed(dag(y), d1, d2, (1, 0)) for y in Y.basis],
             [_embed(x, d1, d2, (1, 1)) for x in D.basis]]
    groups, start = [], 0
    for part in parts:
        groups.append(list(range(start, start + len(part))))
        start += len(part)
    basis = np.stack([b for part in parts for b in part])
    return MatrixAlgebra(Subspace((d1 + d2, d1 + d2), basis)), groups


def linking_algebra(M: MoritaPair) -> LinkingData:
    d1, d2 = M.C.d, M.D.d
    LY, groups = _linking(M.C, M.D, M.Y.space, d1, d2)
    LX, _ = _linking(M.A, M.B, M.X.space, d1, d2)
    P = _embed(np.eye(d1), d1, d2, (0, 0))
    Q = _embed(np.eye(d2), d1, d2, (1, 1))
    return LinkingData(LX, LY, P, Q, groups, M)


def check_linking(L: LinkingData, tol: float = CHECK_TOL) -> CheckReport:
    from .fdalg import algebra_violation
    M = L.pair
    rep = CheckReport()
    rep.add("LX_algebra", algebra_violation(L.LX), tol)
    rep.add("LY_algebra", algebra_violation(L.LY), tol)
    rep.add_bool("LX_in_LY", is_subalgebra(L.LX, L.LY))
    rep.add("P_plus_Q", np.linalg.norm(L.P + L.Q - np.eye(L.LY.d)), tol)
    for name, alg in (("LX", L.LX), ("LY", L.LY)):
        rep.add_bool(f"P_full_{name}", is_full_projection(L.P, alg))
        rep.add_bool(f"Q_full_{name}", is_full_projection(L.Q, alg))
    rep.add_bool("dim_LX", L.LX.dim == M.A.dim + M.B.dim + 2 * M.X.dim)
    corners = {"PLXP": (L.P, L.LX, L.P, M.A.dim), "QLXQ": (L.Q, L.LX, L.Q, M.B.dim),
               "PLYP": (L.P, L.LY, L.P, M.C.dim), "QLYQ": (L.Q, L.LY, L.Q, M.D.dim),
               "PLXQ": (L.P, L.LX, L.Q, M.X.dim), "PLYQ": (L.P, L.LY, L.Q, M.Y.dim)}
    for name, (e, alg, f, want) in corners.items():
        got = orthonormalize([e @ b @ f for b in alg.basis], shape=(alg.d, alg.d)).dim
        rep.add_bool(f"corner_{name}", got == want, f"{got}/{want}")
    return rep


def linking_expectation(L: LinkingData, EA: CondExpectation, EB: CondExpectation,
                        EX: BimoduleExpectation, attach: bool = True) -> CondExpectation:
    """Blockwise [E^A(c) E^X(x); E^X(y)~ E^B(d)] with the scaled diagonal quasi-basis."""
    d1 = L.pair.C.d

    def apply(z):
        out = np.zeros_like(z, dtype=complex)
        out[:d1, :d1] = EA(z[:d1, :d1])
        out[:d1, d1:] = EX(z[:d1, d1:])
        out[d1:, :d1] = dag(EX(dag(z[d1:, :d1])))
        out[d1:, d1:] = EB(z[d1:, d1:])
        return out

    E = from_map(L.LY, L.LX, apply)
    if not attach:
        return E
    qb = linking_quasi_basis(L, EA, EB)
    ind = _block_diag(index_of(EA), index_of(EB))
    return CondExpectation(E.source, E.target, E.values, qb, ind)


def _block_diag(a, b):
    d1, d2 = a.shape[0], b.shape[0]
    out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    out[:d1, :d1] = a
    out[d1:, d1:] = b
    return out


def _pairs(E: CondExpectation) -> list:
    return list(E.quasi_basis or quasi_basis(E))


def linking_quasi_basis(L: LinkingData, EA: CondExpectation, EB: CondExpectation) -> tuple:
    """All pairs (diag(u_i, v_j), diag(u_i', v_j')) / sqrt(.) over the n x m index set.

    The first factor is scaled by 1/sqrt(m) and the second by 1/sqrt(n) so the
    sum of products equals diag(Ind(E^A), Ind(E^B)).
    """
    pa, pb = _pairs(EA), _pairs(EB)
    n, m = len(pa), len(pb)
    out = []
    for u, u2 in pa:
        for v, v2 in pb:
            out.append((_block_diag(u / np.sqrt(m), v / np.sqrt(n)),
                        _block_diag(u2 / np.sqrt(m), v2 / np.sqrt(n))))
    return tuple(out)


def unscaled_linking_quasi_basis(L: LinkingData, EA: CondExpectation, EB: CondExpectation) -> tuple:
    """diag(u_i, v_j) over all pairs, without rescaling (sums to diag(m Ind_A, n Ind_B))."""
    return tuple((_block_diag(u, v), _block_diag(u2, v2)) for u, u2 in _pairs(EA) for v, v2 in _pairs(EB))


def padded_linking_quasi_basis(L: LinkingData, EA: CondExpectation, EB: CondExpectation) -> tuple:
    """diag(u_i, v_i) with the shorter list padded by zero pairs."""
    pa, pb = _pairs(EA), _pairs(EB)
    k = max(len(pa), len(pb))
    pa += [(np.zeros_like(pa[0][0]),) * 2] * (k - len(pa))
    pb += [(np.zeros_like(pb[0][0]),) * 2] * (k - len(pb))
    return tuple((_block_diag(u, v), _block_diag(u2, v2)) for (u, u2), (v, v2) in zip(pa, pb))


def exchange_identities_check(M: MoritaPair, EA: CondExpectation, EB: CondExpectation,
                              EX: BimoduleExpectation, tol: float = CHECK_TOL) -> CheckReport:
    pa, pb = _pairs(EA), _pairs(EB)
    ia, ib = index_of(EA), index_of(EB)
    r1 = r2 = r3 = 0.0
    for y in M.Y.basis:
        r1 = max(r1, np.linalg.norm(sum(EX(y @ v) @ v2 for v, v2 in pb) - y))
        r2 = max(r2, np.linalg.norm(sum(u @ EX(u2 @ y) for u, u2 in pa) - y))
        r3 = max(r3, np.linalg.norm(ia @ y - y @ ib))
    rep = CheckReport()
    rep.add("right_expansion", r1, tol)
    rep.add("left_expansion", r2, tol)
    rep.add("index_exchange", r3, tol)
    return rep
