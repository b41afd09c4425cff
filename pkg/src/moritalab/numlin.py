"""Dense complex linear algebra: subspaces, null spaces, Hermitian functional calculus.

Elements of every space are stored as numpy arrays of a fixed shape and
flattened row-major when a vector is needed.  The inner product is always
the Frobenius one, <a, b> = trace(a^* b).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InputShapeError, NearSingularError

DEFAULT_TOL = 1e-9


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(-1)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis of a subspace of arrays with a common shape."""

    shape: tuple
    basis: np.ndarray  # (k, *shape)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return int(np.prod(self.shape))

    @property
    def columns(self) -> np.ndarray:
        """Basis as an (ambient_dim, k) matrix with orthonormal columns."""
        return self.basis.reshape(self.dim, self.ambient_dim).T

    @cached_property
    def _coord_matrix(self) -> np.ndarray:
        return np.ascontiguousarray(self.columns.conj().T)

    def coords(self, x: np.ndarray) -> np.ndarray:
        return self._coord_matrix @ vec(x)

    def element(self, c: np.ndarray) -> np.ndarray:
        return (self.columns @ np.asarray(c)).reshape(self.shape)

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.element(self.coords(x))

    def residual(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(vec(x) - vec(self.project(x))))

    def contains(self, x: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.linalg.norm(x)))
        return self.residual(x) <= tol * scale

    def gram(self) -> np.ndarray:
        c = self.columns
        return c.conj().T @ c


def empty_subspace(shape) -> Subspace:
    shape = tuple(shape)
    return Subspace(shape, np.zeros((0,) + shape, dtype=complex))


def orthonormalize(spanning_set: Sequence[np.ndarray] | np.ndarray, tol: float = DEFAULT_TOL,
                   shape=None) -> Subspace:
    """Orthonormal basis of span(spanning_set).

    Directions whose singular value is at most tol times the largest one
    are dropped.  An empty input gives the zero subspace of `shape`.
    """
    items = [np.asarray(s, dtype=complex) for s in spanning_set]
    if not items:
        if shape is None:
            raise InputShapeError("empty spanning set needs an explicit shape")
        return empty_subspace(shape)
    shp = items[0].shape
    if shape is not None and tuple(shape) != shp:
        raise InputShapeError(f"expected shape {tuple(shape)}, got {shp}")
    for s in items:
        if s.shape != shp:
            raise InputShapeError(f"shape mismatch: {s.shape} vs {shp}")
    M = np.stack([s.reshape(-1) for s in items], axis=1)
    return _orth_columns(M, shp, tol)


def _orth_columns(M: np.ndarray, shape, tol: float) -> Subspace:
    if M.size == 0 or not np.any(M):
        return empty_subspace(shape)
    if M.shape[1] > 512 and M.shape[0] > 512:
        U = _blockwise_range(M, tol)
    else:
        U, s, _ = np.linalg.svd(M, full_matrices=False)
        U = U[:, :int(np.sum(s > tol * s[0]))]
    r = U.shape[1]
    return Subspace(tuple(shape), np.ascontiguousarray(U.T).reshape((r,) + tuple(shape)))


def _blockwise_range(M: np.ndarray, tol: float, block: int = 256) -> np.ndarray:
    """Orthonormal range of a wide M, one column block at a time.

    Each block is projected off the range found so far (twice, for
    stability) and only the remainder is decomposed, so a low-rank M costs
    little more than one pass of products.  Directions are dropped relative
    to the largest norm seen.
    """
    n = M.shape[0]
    U = np.zeros((n, 0), dtype=complex)
    top = 0.0
    for j in range(0, M.shape[1], block):
        R = M[:, j:j + block].astype(complex)
        # largest column norm: a cheap lower bound on the block's norm
        top = max(top, float(np.sqrt(np.max(np.sum(np.abs(R) ** 2, axis=0)))))
        for _ in range(2):
            R = R - U @ (U.conj().T @ R)
        if top == 0.0:
            continue
        Ur, s, _ = np.linalg.svd(R, full_matrices=False)
        top = max(top, float(s[0]))
        k = int(np.sum(s > tol * top))
        if k:
            U = np.concatenate([U, Ur[:, :k]], axis=1)
    return U


def span_sum(*spaces: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    shape = spaces[0].shape
    M = np.concatenate([s.columns for s in spaces], axis=1)
    return _orth_columns(M, shape, tol)


def null_space(L: np.ndarray, tol: float = DEFAULT_TOL, scale: float | None = None) -> Subspace:
    """Vectors v with ||L v|| <= tol ||L|| ||v||, by singular-value thresholding.

    scale gives the natural size of L's entries, so an L made of pure roundoff
    is treated as zero instead of being rescaled to full rank.
    """
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2:
        raise InputShapeError("null_space expects a matrix")
    n = L.shape[1]
    if L.shape[0] == 0 or not np.any(L):
        return Subspace((n,), np.eye(n, dtype=complex))
    # reduced SVD still returns all n right singular vectors when L is tall
    _, s, Vh = np.linalg.svd(L, full_matrices=L.shape[0] < n)
    ref = s[0] if scale is None else max(s[0], scale)
    r = int(np.sum(s > tol * ref))
    N = Vh[r:].conj()
    return Subspace((n,), N.reshape(-1, n))


def subspace_distance(U: Subspace, V: Subspace) -> float:
    """Spectral norm of the difference of the orthogonal projections."""
    if U.dim == 0 and V.dim == 0:
        return 0.0
    Pu = U.columns @ U.columns.conj().T
    Pv = V.columns @ V.columns.conj().T
    return float(np.linalg.norm(Pu - Pv, 2))


def hermitian_part(H: np.ndarray) -> np.ndarray:
    return 0.5 * (H + dag(H))


def herm_fn(H: np.ndarray, fn) -> np.ndarray:
    w, V = np.linalg.eigh(hermitian_part(H))
    return (V * fn(w)) @ V.conj().T


def _check_psd(H: np.ndarray, tol: float):
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InputShapeError("expected a square matrix")
    if not np.all(np.isfinite(H)):
        raise InputShapeError("non-finite entries")
    scale = max(1.0, float(np.linalg.norm(H)))
    if np.linalg.norm(H - dag(H)) > tol * scale * 10:
        raise InputShapeError("matrix is not Hermitian")
    return H


def psd_inv_sqrt(H: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """K = H^{-1/2} for Hermitian positive definite H."""
    H = _check_psd(H, tol)
    w, V = np.linalg.eigh(hermitian_part(H))
    top = max(float(np.max(np.abs(w))), 0.0) if w.size else 0.0
    if w.size and (top == 0.0 or w.min() <= tol * top):
        raise NearSingularError(
            f"smallest eigenvalue {w.min():.3e} below {tol:.1e} x largest {top:.3e}")
    return (V / np.sqrt(w)) @ V.conj().T


def psd_sqrt(H: np.ndarray) -> np.ndarray:
    return herm_fn(H, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def psd_inv(H: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    K = psd_inv_sqrt(H, tol)
    return K @ K


def support_inv_sqrt(H: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """(H^{-1/2} on the support of H, support projection)."""
    w, V = np.linalg.eigh(hermitian_part(H))
    top = float(np.max(np.abs(w))) if w.size else 0.0
    keep = w > tol * top if top > 0 else np.zeros_like(w, dtype=bool)
    Vk = V[:, keep]
    return (Vk / np.sqrt(w[keep])) @ Vk.conj().T, Vk @ Vk.conj().T


def range_isometry(p: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the range of a projection.

    Gram-Schmidt over the columns of p, so coordinate projections give
    coordinate vectors.
    """
    p = np.asarray(p, dtype=complex)
    rank = int(round(float(np.real(np.trace(p)))))
    cols = []
    for j in range(p.shape[1]):
        v = p[:, j].copy()
        for _ in range(2):
            for q in cols:
                v -= q * np.vdot(q, v)
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            cols.append(v / nv)
        if len(cols) == rank:
            break
    if not cols:
        return np.zeros((p.shape[0], 0), dtype=complex)
    return np.stack(cols, axis=1)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_element(space: Subspace, rng: np.random.Generator, normalize: bool = True) -> np.ndarray:
    c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    x = space.element(c)
    if normalize and space.dim:
        x = x / np.linalg.norm(x)
    return x


def lstsq_map(S: np.ndarray, V: np.ndarray, rcond: float = 1e-10) -> tuple[np.ndarray, float]:
    """Least-squares T with T S ~ V; returns (T, relative residual)."""
    T = V @ np.linalg.pinv(S, rcond=rcond)
    denom = max(1.0, float(np.linalg.norm(V)))
    return T, float(np.linalg.norm(T @ S - V)) / denom
