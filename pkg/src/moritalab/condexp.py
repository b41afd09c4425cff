"""Conditional expectations, quasi-bases, Watatani index and the Jones basic construction."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import (BadProjectionError, InconsistentSpanError, IndexNotInSubalgebraError,
                     NotFullError, NotProjectionError, NotSubalgebraError)
from .fdalg import (MatrixAlgebra, amplify, centralizer, compress, is_full_projection,
                    is_projection, is_subalgebra)
from .numlin import (DEFAULT_TOL, Subspace, dag, lstsq_map, orthonormalize, psd_inv,
                     psd_inv_sqrt, psd_sqrt, random_element, random_unitary, range_isometry, vec)
from .report import CHECK_TOL, CheckReport


@dataclass(frozen=True, eq=False)
class CondExpectation:
    """Linear map from C onto A given by its values on the basis of C."""

    source: MatrixAlgebra
    target: MatrixAlgebra
    values: np.ndarray  # (dim C, d, d)
    quasi_basis: Optional[tuple] = None  # ((u_i, v_i), ...) with sum u_i E(v_i x) = x
    index: Optional[np.ndarray] = None

    @property
    def d(self) -> int:
        return self.source.d

    def __call__(self, x: np.ndarray) -> np.ndarray:
        c = self.source.coords(x)
        return np.tensordot(c, self.values, axes=(0, 0))

    @property
    def action(self) -> np.ndarray:
        """Matrix on row-major vectorized d x d matrices."""
        V = self.values.reshape(self.source.dim, -1).T
        return V @ self.source.span.columns.conj().T


def from_map(C: MatrixAlgebra, A: MatrixAlgebra, fn: Callable) -> CondExpectation:
    return CondExpectation(C, A, np.stack([fn(b) for b in C.basis]))


def from_action(C: MatrixAlgebra, A: MatrixAlgebra, action: np.ndarray) -> CondExpectation:
    d = C.d
    return from_map(C, A, lambda b: (action @ vec(b)).reshape(d, d))


def trace_expectation(C: MatrixAlgebra, A: MatrixAlgebra) -> CondExpectation:
    """Orthogonal projection of C onto A for the ambient trace."""
    if A.d != C.d or not is_subalgebra(A, C, 1e-7):
        raise NotSubalgebraError("A must be a unital subalgebra of C")
    return from_map(C, A, A.project)


def _sample_pairs(n1, n2, limit, rng):
    pairs = [(i, j) for i in range(n1) for j in range(n2)]
    if len(pairs) > limit:
        idx = rng.choice(len(pairs), size=limit, replace=False)
        pairs = [pairs[t] for t in sorted(idx)]
    return pairs


def verify_expectation(E: CondExpectation, samples: int = 20, seed: int = 0,
                       tol: float = CHECK_TOL) -> CheckReport:
    """Maximum violation of each conditional-expectation axiom."""
    rng = np.random.default_rng(seed)
    A, C = E.target, E.source
    rep = CheckReport()
    rep.add("fixes_target", max((np.linalg.norm(E(a) - a) for a in A.basis), default=0.0), tol)
    rep.add("range_in_target", max((A.span.residual(v) for v in E.values), default=0.0), tol)
    worst = 0.0
    for i, j in _sample_pairs(A.dim, A.dim, 256, rng):
        a, b = A.basis[i], A.basis[j]
        for x in C.basis[rng.permutation(C.dim)[:8]]:
            worst = max(worst, np.linalg.norm(E(a @ x @ b) - a @ E(x) @ b))
    rep.add("bimodule", worst, tol)
    rep.add("adjoint", max(np.linalg.norm(E(dag(x)) - dag(E(x))) for x in C.basis), tol)
    neg = 0.0
    for _ in range(samples):
        x = random_element(C.span, rng)
        y = E(dag(x) @ x)
        w = np.linalg.eigvalsh(0.5 * (y + dag(y)))
        neg = max(neg, -float(w.min()))
    rep.add("positive", neg, tol)
    if E.quasi_basis is not None:
        l, r = quasi_basis_violation(E, E.quasi_basis)
        rep.add("quasi_basis_left", l, tol)
        rep.add("quasi_basis_right", r, tol)
    if E.index is not None:
        ind = E.index
        rep.add("index_central", max(np.linalg.norm(ind @ c - c @ ind) for c in C.basis), tol)
    return rep


def quasi_basis_violation(E: CondExpectation, pairs, elements=None) -> tuple[float, float]:
    """Max over x of ||sum u E(v x) - x|| and ||sum E(x u) v - x||."""
    xs = E.source.basis if elements is None else elements
    left = right = 0.0
    for x in xs:
        s1 = sum(u @ E(v @ x) for u, v in pairs)
        s2 = sum(E(x @ u) @ v for u, v in pairs)
        left = max(left, float(np.linalg.norm(s1 - x)))
        right = max(right, float(np.linalg.norm(s2 - x)))
    return left, right


def _e_gram(E: CondExpectation, basis: np.ndarray) -> np.ndarray:
    """H[k, l] = trace E(b_k^* b_l)."""
    k = len(basis)
    H = np.empty((k, k), dtype=complex)
    for i in range(k):
        prods = dag(basis[i])[None] @ basis
        H[i] = [np.trace(E(p)) for p in prods]
    return 0.5 * (H + dag(H))


def quasi_basis(E: CondExpectation, seed: Optional[int] = None,
                tol: float = DEFAULT_TOL) -> tuple:
    """Parseval frame {(u_i, u_i^*)} with sum u_i E(u_i^* x) = x.

    With a seed the starting basis of C is rotated by a random unitary,
    which gives a different quasi-basis with the same index.
    """
    C = E.source
    basis = C.basis
    if seed is not None:
        U = random_unitary(C.dim, np.random.default_rng(seed))
        basis = np.einsum("jk,jab->kab", U, basis)
    cols = basis.reshape(C.dim, -1).T
    coords = lambda x: np.linalg.lstsq(cols, vec(x), rcond=None)[0]
    G = np.stack([coords(sum(c @ E(dag(c) @ x) for c in basis)) for x in basis], axis=1)
    H = _e_gram(E, basis)
    Hh, Hmh = psd_sqrt(H), psd_inv_sqrt(H, tol)
    Ge = Hh @ G @ Hmh
    K = psd_inv_sqrt(0.5 * (Ge + dag(Ge)), tol)
    Kb = Hmh @ K @ Hh
    us = np.einsum("ji,jab->iab", Kb, basis)
    return tuple((u, dag(u)) for u in us)


def watatani_index(E: CondExpectation, seed: Optional[int] = None) -> np.ndarray:
    pairs = E.quasi_basis if (E.quasi_basis is not None and seed is None) else quasi_basis(E, seed)
    return sum(u @ v for u, v in pairs)


def with_quasi_basis(E: CondExpectation, seed: Optional[int] = None) -> CondExpectation:
    qb = quasi_basis(E, seed)
    return replace(E, quasi_basis=qb, index=sum(u @ v for u, v in qb))


def index_of(E: CondExpectation) -> np.ndarray:
    return E.index if E.index is not None else watatani_index(E)


def require_index_in_target(E: CondExpectation, tol: float = 1e-8) -> np.ndarray:
    ind = index_of(E)
    if E.target.span.residual(ind) > tol * max(1.0, np.linalg.norm(ind)):
        raise IndexNotInSubalgebraError("Watatani index does not lie in the subalgebra")
    return ind


# -- amplification and compression ---------------------------------------------------------

def amplify_map(fn: Callable, d: int, n: int) -> Callable:
    """fn (x) id_n on n x n block matrices of d x d blocks."""
    def apply(x):
        out = np.zeros_like(x, dtype=complex)
        for i in range(n):
            for j in range(n):
                out[i * d:(i + 1) * d, j * d:(j + 1) * d] = fn(x[i * d:(i + 1) * d, j * d:(j + 1) * d])
        return out
    return apply


def diag_amplify(x: np.ndarray, n: int) -> np.ndarray:
    """x (x) I_n, i.e. n diagonal copies of x."""
    return np.kron(np.eye(n), x)


def fullness_witnesses(p: np.ndarray, A: MatrixAlgebra, tol: float = 1e-8) -> list:
    """Pairs (a_j, b_j) in A with sum a_j p b_j = 1, from the minimal-norm solve."""
    K = A.dim
    cols = ((A.basis @ p)[:, None] @ A.basis[None]).reshape(K * K, -1).T
    target = vec(A.unit)
    c, *_ = np.linalg.lstsq(cols, target, rcond=None)
    if np.linalg.norm(cols @ c - target) > tol * np.sqrt(A.d):
        raise NotFullError("no elements a_j, b_j with sum a_j p b_j = 1")
    c = c.reshape(K, K)
    out = []
    for k in range(K):
        if np.linalg.norm(c[k]) > 1e-14:
            out.append((A.basis[k], np.tensordot(c[k], A.basis, axes=(0, 0))))
    return out


@dataclass(frozen=True, eq=False)
class Compression:
    n: int
    p: np.ndarray
    V: np.ndarray  # isometry onto the range of p
    A_n: MatrixAlgebra
    C_n: MatrixAlgebra
    witnesses: list = field(repr=False)


def compression_data(E: CondExpectation, n: int, p: np.ndarray, tol: float = DEFAULT_TOL) -> Compression:
    A_n, C_n = amplify(E.target, n), amplify(E.source, n)
    p = np.asarray(p, dtype=complex)
    if p.shape != (A_n.d, A_n.d):
        raise NotProjectionError(f"p has shape {p.shape}, expected {(A_n.d, A_n.d)}")
    if not is_full_projection(p, A_n, tol):
        raise NotFullError("p is not a full projection in M_n(A)")
    return Compression(n, p, range_isometry(p), A_n, C_n, fullness_witnesses(p, A_n))


def compress_expectation(E: CondExpectation, n: int, p: np.ndarray,
                         tol: float = DEFAULT_TOL) -> CondExpectation:
    """(E (x) id) on p M_n(C) p, realized unitally on the range of p."""
    cd = compression_data(E, n, p, tol)
    V, Vh = cd.V, dag(cd.V)
    B = compress(cd.A_n, V, tol)
    D = compress(cd.C_n, V, tol)
    En = amplify_map(E, E.d, n)
    values = np.stack([Vh @ En(V @ y @ Vh) @ V for y in D.basis])
    qb = None
    if E.quasi_basis is not None:
        P = cd.p
        qb = []
        for u, v in E.quasi_basis:
            for a, b in cd.witnesses:
                qb.append((Vh @ P @ diag_amplify(u, n) @ a @ P @ V,
                           Vh @ P @ b @ diag_amplify(v, n) @ P @ V))
        qb = tuple(qb)
    index = None
    if E.index is not None:
        index = Vh @ diag_amplify(E.index, n) @ cd.p @ V
    return CondExpectation(D, B, values, qb, index)


# -- basic construction ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BasicConstruction:
    """C_1 acting on the module C with inner product trace E(x^* y)."""

    algebra: MatrixAlgebra  # C_1 inside M_m
    jones: np.ndarray  # e_A
    expectation: CondExpectation
    frame: np.ndarray  # (m, ...) E-orthonormal module vectors
    coord_map: np.ndarray  # (m, N) coordinates of a vectorized module element
    generators: np.ndarray = field(repr=False)  # module generators over A

    @property
    def module_dim(self) -> int:
        return self.frame.shape[0]

    def vector(self, x: np.ndarray) -> np.ndarray:
        return self.coord_map @ vec(x)

    def element(self, v: np.ndarray) -> np.ndarray:
        return np.tensordot(v, self.frame, axes=(0, 0))

    def embed(self, c: np.ndarray) -> np.ndarray:
        """lambda(c): left multiplication on the module."""
        prods = c[None] @ self.frame
        return self.coord_map @ prods.reshape(self.module_dim, -1).T

    def embed_many(self, cs: np.ndarray) -> np.ndarray:
        m = self.module_dim
        prods = (cs[:, None] @ self.frame[None]).reshape(len(cs), m, -1)
        return np.swapaxes(prods @ self.coord_map.T, 1, 2)

    def embedded(self, A: MatrixAlgebra, tol: float = DEFAULT_TOL) -> MatrixAlgebra:
        m = self.module_dim
        return MatrixAlgebra(orthonormalize(list(self.embed_many(A.basis)), tol, shape=(m, m)))


def left_generators(module: Subspace, A: MatrixAlgebra, tol: float = DEFAULT_TOL) -> list:
    """Greedy elements g_j with module = sum_j A g_j."""
    gens, cols = [], None
    for c in module.basis:
        if cols is not None:
            r = vec(c) - cols @ (cols.conj().T @ vec(c))
            if np.linalg.norm(r) <= 1e-7:
                continue
        gens.append(c)
        S = orthonormalize([a @ g for g in gens for a in A.basis], tol)
        cols = S.columns
        if S.dim == module.dim:
            break
    return gens


def basic_construction(E: CondExpectation, tol: float = DEFAULT_TOL,
                       blocks: Optional[list] = None) -> BasicConstruction:
    """Jones basic construction realized on C with the E-valued inner product.

    blocks optionally lists index groups of the basis of C that are mutually
    orthogonal for trace E(x^* y); the Gram inverse square root is then taken
    blockwise.
    """
    C, A = E.source, E.target
    basis = C.basis
    H = _e_gram(E, basis)
    if blocks is None:
        Hh, Hmh = psd_sqrt(H), psd_inv_sqrt(H, tol)
    else:
        Hh = np.zeros_like(H)
        Hmh = np.zeros_like(H)
        for g in blocks:
            ix = np.ix_(g, g)
            Hh[ix] = psd_sqrt(H[ix])
            Hmh[ix] = psd_inv_sqrt(H[ix], tol)
    frame = np.einsum("kj,kab->jab", Hmh, basis)
    coord_map = Hh @ C.span.columns.conj().T
    m = C.dim
    e = np.stack([coord_map @ vec(E(b)) for b in frame], axis=1)
    proto = BasicConstruction(None, e, E, frame, coord_map, None)
    gens = left_generators(C.span, A, tol)
    lam_x = proto.embed_many(basis)
    lam_g = proto.embed_many(np.stack(gens))
    spanning = ((lam_x @ e)[:, None] @ lam_g[None]).reshape(-1, m, m)
    C1 = MatrixAlgebra(orthonormalize(list(spanning), tol, shape=(m, m)))
    return replace(proto, algebra=C1, generators=np.stack(gens))


def jones_violation(B: BasicConstruction) -> float:
    e = B.jones
    E = B.expectation
    worst = 0.0
    for x in E.source.basis:
        lx = B.embed(x)
        worst = max(worst, np.linalg.norm(e @ lx @ e - B.embed(E(x)) @ e))
    return float(worst)


def verify_basic_construction(B: BasicConstruction, tol: float = CHECK_TOL) -> CheckReport:
    e = B.jones
    rep = CheckReport()
    rep.add("jones_projection", max(np.linalg.norm(e - dag(e)), np.linalg.norm(e @ e - e)), tol)
    rep.add("jones_relation", jones_violation(B), tol)
    A = B.expectation.target
    rep.add("commutes_with_target",
            max((np.linalg.norm(B.embed(a) @ e - e @ B.embed(a)) for a in A.basis), default=0.0), tol)
    rep.add("contains_jones", B.algebra.span.residual(e), tol)
    rep.add("contains_embedded",
            max(B.algebra.span.residual(l) for l in B.embed_many(B.expectation.source.basis)), tol)
    return rep


def dual_expectation(B: BasicConstruction, E: Optional[CondExpectation] = None,
                     tol: float = DEFAULT_TOL) -> CondExpectation:
    """E^C on C_1 with E^C(x e_A y) = Ind(E)^{-1} x y."""
    E = B.expectation if E is None else E
    ind = index_of(E)
    ind_inv = psd_inv(ind)
    C, C1 = E.source, B.algebra
    m = B.module_dim
    xs = C.basis
    gs = B.generators
    lam_x = B.embed_many(xs)
    lam_g = B.embed_many(gs)
    spanning = ((lam_x @ B.jones)[:, None] @ lam_g[None]).reshape(-1, m * m)
    prods = ((ind_inv @ xs)[:, None] @ gs[None]).reshape(-1, *xs.shape[1:])
    vals = B.embed_many(prods).reshape(-1, m * m)
    S = C1.span.columns.conj().T @ spanning.T
    T, res = lstsq_map(S, vals.T)
    if res > 1e-8:
        raise InconsistentSpanError(f"dual expectation residual {res:.2e}")
    values = T.T.reshape(C1.dim, m, m)
    target = B.embedded(C, tol)
    qb, index = None, None
    if E.target.span.residual(ind) <= 1e-8 * max(1.0, np.linalg.norm(ind)):
        h = B.embed(psd_sqrt(ind))
        qb = tuple((B.embed(u) @ B.jones @ h, h @ B.jones @ B.embed(v))
                   for u, v in (E.quasi_basis or quasi_basis(E)))
        index = B.embed(ind)
    return CondExpectation(C1, target, values, qb, index)


# -- downward ----------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DownwardStep:
    P: MatrixAlgebra
    EP: CondExpectation
    report: CheckReport


def downward_data(E: CondExpectation, p: np.ndarray, tol: float = DEFAULT_TOL) -> DownwardStep:
    """P = {p}' within A and E^P(a) = Ind E(p a p), for p in C with E(p) = Ind^{-1}."""
    C, A = E.source, E.target
    p = np.asarray(p, dtype=complex)
    if not is_projection(p) or not C.contains(p, 1e-7):
        raise BadProjectionError("p must be a projection in C")
    ind = require_index_in_target(E)
    gap = np.linalg.norm(E(p) - psd_inv(ind))
    if gap > 1e-8:
        raise BadProjectionError(f"E(p) differs from Ind^-1 by {gap:.2e}")
    if not is_full_projection(p, C, tol):
        raise NotFullError("p is not full in C")
    P = centralizer([p], A, tol)
    EP = from_map(A, P, lambda a: ind @ E(p @ a @ p))
    rep = CheckReport()
    rep.add("pap", max(np.linalg.norm(p @ a @ p - EP(a) @ p) for a in A.basis))
    rep.add("EP_fixes_P", max(np.linalg.norm(EP(x) - x) for x in P.basis))
    span = orthonormalize([a @ p @ b for a in A.basis for b in A.basis], tol)
    rep.add_bool("ApA_is_C", span.dim == C.dim, f"dim ApA={span.dim}, dim C={C.dim}")
    return DownwardStep(P, EP, rep)
