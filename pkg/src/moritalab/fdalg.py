"""Finite-dimensional C*-algebras as unital *-subalgebras of M_d."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (DegenerateSpectrumError, NonStabilizingError, NotProjectionError,
                     NotSubalgebraError)
from .numlin import (DEFAULT_TOL, Subspace, dag, null_space, orthonormalize, span_sum,
                     subspace_distance)

INT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    """Unital *-subalgebra of M_d stored by a Frobenius-orthonormal basis."""

    span: Subspace

    @property
    def d(self) -> int:
        return self.span.shape[0]

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def basis(self) -> np.ndarray:
        return self.span.basis

    @property
    def unit(self) -> np.ndarray:
        return np.eye(self.d, dtype=complex)

    def contains(self, x, tol=DEFAULT_TOL) -> bool:
        return self.span.contains(x, tol)

    def project(self, x):
        return self.span.project(x)

    def coords(self, x):
        return self.span.coords(x)

    def element(self, c):
        return self.span.element(c)


@dataclass(frozen=True)
class BlockStructure:
    blocks: list  # [(k_i, m_i)] in canonical order
    central_projections: list = field(repr=False)

    @property
    def dims(self) -> list:
        return [k for k, _ in self.blocks]

    @property
    def dim(self) -> int:
        return sum(k * k for k, _ in self.blocks)


@dataclass(frozen=True)
class InclusionMatrix:
    entries: np.ndarray  # int, rows = blocks of the smaller algebra
    small: BlockStructure = field(repr=False)
    large: BlockStructure = field(repr=False)


def full_algebra(d: int) -> MatrixAlgebra:
    units = np.zeros((d * d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            units[i * d + j, i, j] = 1.0
    return MatrixAlgebra(Subspace((d, d), units))


def scalars(d: int) -> MatrixAlgebra:
    return MatrixAlgebra(Subspace((d, d), (np.eye(d, dtype=complex) / np.sqrt(d))[None]))


def algebra_from_span(span: Subspace, tol=DEFAULT_TOL, check=True) -> MatrixAlgebra:
    A = MatrixAlgebra(span)
    if check:
        viol = algebra_violation(A)
        if viol > 1e3 * tol * max(1, A.d):
            raise NotSubalgebraError(f"span is not a unital *-algebra (violation {viol:.2e})")
    return A


def algebra_violation(A: MatrixAlgebra, max_pairs: int = 4096, seed: int = 0) -> float:
    """Largest residual of unit, adjoint and product closure on the basis."""
    B = A.basis
    worst = A.span.residual(A.unit) / np.sqrt(A.d)
    for b in B:
        worst = max(worst, A.span.residual(dag(b)))
    k = len(B)
    pairs = [(i, j) for i in range(k) for j in range(k)]
    if len(pairs) > max_pairs:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(pairs), size=max_pairs, replace=False)
        pairs = [pairs[t] for t in sorted(idx)]
    for i, j in pairs:
        worst = max(worst, A.span.residual(B[i] @ B[j]))
    return float(worst)


def generate_algebra(ambient_dim: int, generators: Sequence[np.ndarray],
                     tol: float = DEFAULT_TOL) -> MatrixAlgebra:
    """Smallest *-subalgebra of M_d containing the generators and the identity."""
    d = ambient_dim
    gens = []
    for g in generators:
        g = np.asarray(g, dtype=complex)
        if g.shape != (d, d):
            raise NotSubalgebraError(f"generator of shape {g.shape}, expected {(d, d)}")
        if np.linalg.norm(g) > 0:
            gens.append(g)
            gens.append(dag(g))
    S = orthonormalize([np.eye(d, dtype=complex)] + gens, tol)
    if not gens:
        return MatrixAlgebra(S)
    for _ in range(d * d + 1):
        words = (S.basis[:, None] @ np.stack(gens)[None]).reshape(-1, d, d)
        T = span_sum(S, orthonormalize(list(words), tol), tol=tol)
        if T.dim == S.dim:
            return MatrixAlgebra(T)
        S = T
    raise NonStabilizingError("span dimension kept growing past d^2 iterations")


def generated_by_span(ambient_dim: int, spanning: Sequence[np.ndarray],
                      tol: float = DEFAULT_TOL) -> MatrixAlgebra:
    """Algebra spanned by a set already known to be closed under products."""
    S = orthonormalize(list(spanning), tol, shape=(ambient_dim, ambient_dim))
    return MatrixAlgebra(S)


def is_subalgebra(S: MatrixAlgebra, T: MatrixAlgebra, tol=1e-8) -> bool:
    return all(T.span.residual(b) <= tol for b in S.basis)


def commutant(S: MatrixAlgebra | Sequence[np.ndarray], ambient: MatrixAlgebra,
              tol: float = DEFAULT_TOL) -> MatrixAlgebra:
    """{x in ambient : xs = sx for all s in S}."""
    elems = S.basis if isinstance(S, MatrixAlgebra) else np.asarray(S, dtype=complex)
    for s in elems:
        if ambient.span.residual(s) > 1e-7 * max(1.0, np.linalg.norm(s)):
            raise NotSubalgebraError("S is not contained in the ambient algebra")
    if isinstance(S, MatrixAlgebra) and S.dim > 8:
        # two generic elements and their adjoints generate S
        rng = np.random.default_rng(len(elems))
        a, b, c = (np.einsum("k,kij->ij", rng.standard_normal(S.dim) + 1j * rng.standard_normal(S.dim),
                             elems) for _ in range(3))
        R = centralizer([a, dag(a), b, dag(b)], ambient, tol, project=True)
        if all(np.linalg.norm(x @ c - c @ x) <= 1e-8 * np.linalg.norm(c) for x in R.basis):
            return R
    return centralizer(elems, ambient, tol, project=True)


def centralizer(elems: Sequence[np.ndarray], ambient: MatrixAlgebra, tol: float = DEFAULT_TOL,
                project: bool = False) -> MatrixAlgebra:
    """{x in ambient : xs = sx} for arbitrary square s of the ambient size.

    With project=True the constraints are expressed in coordinates of the
    ambient, which is valid when every s lies in it.
    """
    B = ambient.basis
    k = len(B)
    Qh = ambient.span.columns.conj().T
    rows = []
    for s in elems:
        comm = (B @ s - s @ B).reshape(k, -1)
        rows.append(Qh @ comm.T if project else comm.T)
    if not rows:
        return ambient
    M = np.concatenate(rows, axis=0)
    N = null_space(M, tol, scale=max(np.linalg.norm(s, 2) for s in elems))
    elements = np.einsum("nk,kij->nij", N.basis, B)
    return MatrixAlgebra(orthonormalize(list(elements), tol, shape=(ambient.d, ambient.d)))


def center(A: MatrixAlgebra, tol: float = DEFAULT_TOL) -> MatrixAlgebra:
    return commutant(A, A, tol)


def _block_key(p: np.ndarray, k: int):
    flat = np.round(np.concatenate([p.real.ravel(), p.imag.ravel()]), 6)
    return (k, int(round(float(np.real(np.trace(p))))), tuple(-flat))


def block_structure(A: MatrixAlgebra, seed: int = 0, tol: float = DEFAULT_TOL,
                    retries: int = 5) -> BlockStructure:
    """Minimal central projections and (block size, multiplicity) pairs."""
    Z = center(A, tol)
    herm = []
    for z in Z.basis:
        herm.append(0.5 * (z + dag(z)))
        herm.append(-0.5j * (z - dag(z)))
    H = orthonormalize(herm, tol)
    H_real = [0.5 * (h + dag(h)) for h in H.basis]
    nz = Z.dim
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        coeffs = rng.standard_normal(len(H_real))
        h = np.einsum("k,kij->ij", coeffs, np.stack(H_real))
        w, V = np.linalg.eigh(0.5 * (h + dag(h)))
        scale = max(1.0, float(np.max(np.abs(w))))
        cuts = np.nonzero(np.diff(w) > 1e-6 * scale)[0]
        groups = np.split(np.arange(len(w)), cuts + 1)
        if len(groups) != nz:
            continue
        gap = np.min(np.diff(w)[cuts]) if len(cuts) else scale
        spread = max(float(w[g[-1]] - w[g[0]]) for g in groups)
        if spread > 1e-7 * scale or gap < 1e-4 * scale / max(1, nz):
            continue
        projections = [V[:, g] @ V[:, g].conj().T for g in groups]
        blocks = []
        for p in projections:
            corner = orthonormalize(list(A.basis @ p), tol)
            k = _as_int(np.sqrt(corner.dim), "block size")
            m = _as_int(np.real(np.trace(p)) / k, "multiplicity")
            blocks.append((k, m, p))
        blocks.sort(key=lambda t: _block_key(t[2], t[0]))
        return BlockStructure([(k, m) for k, m, _ in blocks], [p for _, _, p in blocks])
    raise DegenerateSpectrumError(f"no generic central element found in {retries} tries")


def _as_int(x: float, what: str) -> int:
    r = int(round(float(x)))
    if abs(r - x) > INT_TOL:
        raise DegenerateSpectrumError(f"{what} {x} is not an integer")
    return r


def inclusion_matrix(A: MatrixAlgebra, B: MatrixAlgebra, seed: int = 0,
                     tol: float = DEFAULT_TOL, sa: Optional[BlockStructure] = None,
                     sb: Optional[BlockStructure] = None) -> InclusionMatrix:
    """Multiplicity of each block of A inside each block of B (A within B, same ambient).

    Block structures already known for A or B can be passed in to skip recomputing them.
    """
    if A.d != B.d or not is_subalgebra(A, B, 1e-7):
        raise NotSubalgebraError("inclusion requires A inside B in a common ambient")
    sa = block_structure(A, seed, tol) if sa is None else sa
    sb = block_structure(B, seed, tol) if sb is None else sb
    L = np.zeros((len(sa.blocks), len(sb.blocks)), dtype=int)
    for i, (p, (k, _)) in enumerate(zip(sa.central_projections, sa.blocks)):
        for j, (q, (_, M)) in enumerate(zip(sb.central_projections, sb.blocks)):
            L[i, j] = _as_int(np.real(np.trace(p @ q)) / (k * M), "inclusion multiplicity")
    return InclusionMatrix(L, sa, sb)


def is_projection(p: np.ndarray, tol: float = 1e-8) -> bool:
    p = np.asarray(p, dtype=complex)
    return bool(np.linalg.norm(p - dag(p)) <= tol and np.linalg.norm(p @ p - p) <= tol)


def is_full_projection(p: np.ndarray, A: MatrixAlgebra, tol: float = DEFAULT_TOL) -> bool:
    """True iff the two-sided ideal A p A is all of A."""
    if not is_projection(p) or not A.contains(p, 1e-7):
        raise NotProjectionError("p must be a projection in A")
    left = orthonormalize(list(A.basis @ p), tol)
    if left.dim == 0:
        return False
    ideal = orthonormalize(list((left.basis[:, None] @ A.basis[None])
                                .reshape(-1, A.d, A.d)), tol)
    return ideal.dim == A.dim


def amplify(A: MatrixAlgebra, n: int) -> MatrixAlgebra:
    """M_n(A) inside M_{nd}; the (i, j) block of f_ij (x) a is a."""
    if n == 1:
        return A
    d = A.d
    out = []
    for i in range(n):
        for j in range(n):
            f = np.zeros((n, n))
            f[i, j] = 1.0
            out.extend(np.kron(f, a) for a in A.basis)
    return MatrixAlgebra(Subspace((n * d, n * d), np.stack(out)))


def compress(A: MatrixAlgebra, V: np.ndarray, tol: float = DEFAULT_TOL) -> MatrixAlgebra:
    """V^* A V for an isometry V whose range projection lies in A."""
    elems = [dag(V) @ a @ V for a in A.basis]
    r = V.shape[1]
    return MatrixAlgebra(orthonormalize(elems, tol, shape=(r, r)))


def image(A: MatrixAlgebra, f: Callable, shape, tol: float = DEFAULT_TOL) -> MatrixAlgebra:
    return MatrixAlgebra(orthonormalize([f(a) for a in A.basis], tol, shape=shape))


def algebra_distance(A: MatrixAlgebra, B: MatrixAlgebra) -> float:
    return subspace_distance(A.span, B.span)


def same_block_data(A: MatrixAlgebra, B: MatrixAlgebra, seed: int = 0) -> bool:
    """Equal block sizes as multisets (isomorphism test for multi-matrix algebras)."""
    return sorted(block_structure(A, seed).dims) == sorted(block_structure(B, seed).dims)
