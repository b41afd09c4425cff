"""Equivalence bimodules in rectangular corner form and bimodule conditional expectations.

An A-B bimodule X is a subspace of d1 x d2 matrices with A inside M_{d1}
acting on the left and B inside M_{d2} acting on the right.  The inner
products are _A<x, y> = x y^* and <x, y>_B = x^* y, which is exactly the
corner e L f of the linking algebra L inside M_{d1 + d2}.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .condexp import CondExpectation, _sample_pairs
from .errors import AxiomViolationError, FrameNotFoundError, RankDeficientError
from .fdalg import MatrixAlgebra, algebra_from_span
from .numlin import (DEFAULT_TOL, Subspace, dag, orthonormalize, random_element, support_inv_sqrt,
                     vec)
from .report import CHECK_TOL, CheckReport


@dataclass(frozen=True, eq=False)
class CornerBimodule:
    left: MatrixAlgebra
    right: MatrixAlgebra
    space: Subspace  # of shape (left.d, right.d)

    @property
    def shape(self) -> tuple:
        return self.space.shape

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> np.ndarray:
        return self.space.basis

    def coords(self, x):
        return self.space.coords(x)

    def element(self, c):
        return self.space.element(c)

    def project(self, x):
        return self.space.project(x)

    def contains(self, x, tol=1e-8) -> bool:
        return self.space.contains(x, tol)

    @staticmethod
    def left_ip(x, y):
        return x @ dag(y)

    @staticmethod
    def right_ip(x, y):
        return dag(x) @ y

    @property
    def left_unit(self) -> np.ndarray:
        d1, d2 = self.shape
        e = np.zeros((d1 + d2, d1 + d2), dtype=complex)
        e[:d1, :d1] = np.eye(d1)
        return e

    @property
    def right_unit(self) -> np.ndarray:
        return np.eye(sum(self.shape), dtype=complex) - self.left_unit

    def corner(self, x) -> np.ndarray:
        """x placed in the upper right corner of the linking ambient."""
        d1, d2 = self.shape
        out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
        out[:d1, d1:] = x
        return out


def make_bimodule(left: MatrixAlgebra, right: MatrixAlgebra, spanning, tol=DEFAULT_TOL) -> CornerBimodule:
    return CornerBimodule(left, right, orthonormalize(list(spanning), tol, shape=(left.d, right.d)))


def bimodule_from_generators(left: MatrixAlgebra, right: MatrixAlgebra, gens,
                             tol=DEFAULT_TOL) -> CornerBimodule:
    """A . gens . B."""
    items = [a @ g @ b for g in gens for a in left.basis for b in right.basis]
    return make_bimodule(left, right, items, tol)


def dual_bimodule(X: CornerBimodule) -> CornerBimodule:
    """X~ = {x^*} with the algebras exchanged."""
    return CornerBimodule(X.right, X.left, Subspace(X.shape[::-1], dag(X.basis)))


def _span_dim(items, shape, tol=DEFAULT_TOL) -> int:
    return orthonormalize(list(items), tol, shape=shape).dim


def structure_report(X: CornerBimodule, tol: float = CHECK_TOL, max_pairs: int = 512,
                     seed: int = 0) -> CheckReport:
    """Actions, inner-product ranges and compatibility on basis samples."""
    rng = np.random.default_rng(seed)
    A, B = X.left, X.right
    rep = CheckReport()
    rep.add("left_action", max((X.space.residual(a @ x) for a in A.basis for x in X.basis), default=0.0), tol)
    rep.add("right_action", max((X.space.residual(x @ b) for b in B.basis for x in X.basis), default=0.0), tol)
    li = ri = comp = 0.0
    for i, j in _sample_pairs(X.dim, X.dim, max_pairs, rng):
        x, y = X.basis[i], X.basis[j]
        li = max(li, A.span.residual(x @ dag(y)))
        ri = max(ri, B.span.residual(dag(x) @ y))
        z = X.basis[rng.integers(X.dim)]
        comp = max(comp, np.linalg.norm((x @ dag(y)) @ z - x @ (dag(y) @ z)))
    rep.add("left_ip_range", li, tol)
    rep.add("right_ip_range", ri, tol)
    rep.add("ip_compatibility", comp, tol)
    return rep


def check_equivalence(X: CornerBimodule, tol: float = CHECK_TOL) -> CheckReport:
    """Bimodule axioms plus fullness of both inner products."""
    rep = structure_report(X, tol) if X.dim else CheckReport()
    A, B = X.left, X.right
    ld = _span_dim([x @ dag(y) for x in X.basis for y in X.basis], (A.d, A.d))
    rd = _span_dim([dag(x) @ y for x in X.basis for y in X.basis], (B.d, B.d))
    rep.add_bool("left_full", ld == A.dim, f"{ld}/{A.dim}")
    rep.add_bool("right_full", rd == B.dim, f"{rd}/{B.dim}")
    return rep


def mixed_fullness(Y: CornerBimodule, X: CornerBimodule) -> CheckReport:
    """_C<Y, X> spans C and <Y, X>_D spans D."""
    rep = CheckReport()
    C, D = Y.left, Y.right
    ld = _span_dim([y @ dag(x) for y in Y.basis for x in X.basis], (C.d, C.d))
    rd = _span_dim([dag(y) @ x for y in Y.basis for x in X.basis], (D.d, D.d))
    rep.add_bool("left_mixed_full", ld == C.dim, f"{ld}/{C.dim}")
    rep.add_bool("right_mixed_full", rd == D.dim, f"{rd}/{D.dim}")
    return rep


def right_frame(X: CornerBimodule, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Elements x_i of X with sum x_i^* x_i = 1, by the Parseval frame algorithm."""
    h = sum(dag(c) @ c for c in X.basis) if X.dim else np.zeros((X.shape[1],) * 2)
    K, supp = support_inv_sqrt(h, tol)
    if np.linalg.norm(supp - np.eye(X.shape[1])) > 1e-8:
        raise FrameNotFoundError("right inner products do not reach the unit")
    frame = X.basis @ K
    gap = max(X.space.residual(x) for x in frame)
    if gap > 1e-8:
        raise FrameNotFoundError(f"frame leaves the module (residual {gap:.2e})")
    return frame


def left_frame(X: CornerBimodule, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Elements x_i with sum x_i x_i^* = 1."""
    return dag(right_frame(dual_bimodule(X), tol))


# -- bimodule expectations -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BimoduleExpectation:
    big: CornerBimodule  # Y, a C-D bimodule
    small: CornerBimodule  # X, an A-B bimodule
    values: np.ndarray  # images of the basis of Y
    left_exp: Optional[CondExpectation] = None  # C -> A
    right_exp: Optional[CondExpectation] = None  # D -> B

    def __call__(self, y):
        return np.tensordot(self.big.coords(y), self.values, axes=(0, 0))


def bimodule_map(Y: CornerBimodule, X: CornerBimodule, fn: Callable, EA=None, EB=None) -> BimoduleExpectation:
    return BimoduleExpectation(Y, X, np.stack([fn(y) for y in Y.basis]), EA, EB)


def _norm_bound(E: BimoduleExpectation, samples, rng) -> float:
    worst = 0.0
    for _ in range(samples):
        y = random_element(E.big.space, rng)
        worst = max(worst, np.linalg.norm(E(y), 2) - (1 + 1e-8) * np.linalg.norm(y, 2))
    return max(worst, 0.0)


def check_bimodule_expectation(E: BimoduleExpectation, samples: int = 20, seed: int = 0,
                               tol: float = CHECK_TOL) -> CheckReport:
    """Max violations of the six axioms, the derived identities and the norm bound."""
    rng = np.random.default_rng(seed)
    Y, X, EA, EB = E.big, E.small, E.left_exp, E.right_exp
    rep = CheckReport()
    rep.add("range", max((X.space.residual(v) for v in E.values), default=0.0), tol)
    rep.add("fixes_small", max((np.linalg.norm(E(x) - x) for x in X.basis), default=0.0), tol)
    ys = [Y.basis[t] for t in rng.permutation(Y.dim)[:24]]
    xs = [X.basis[t] for t in rng.permutation(X.dim)[:24]]

    def worst(fn, left, right):
        out = 0.0
        for i, j in _sample_pairs(len(left), len(right), 400, rng):
            out = max(out, float(np.linalg.norm(fn(left[i], right[j]))))
        return out

    C, D, A, B = Y.left.basis, Y.right.basis, X.left.basis, X.right.basis
    if EA is not None:
        rep.add("ax1_left_outer", worst(lambda c, x: E(c @ x) - EA(c) @ x, C, xs), tol)
        rep.add("ax3_left_ip", worst(lambda y, x: EA(y @ dag(x)) - E(y) @ dag(x), ys, xs), tol)
        rep.add("derived_left_ip", max(X.left.span.residual(E(y) @ dag(x)) for y in ys for x in xs), tol)
    rep.add("ax2_left_inner", worst(lambda a, y: E(a @ y) - a @ E(y), A, ys), tol)
    if EB is not None:
        rep.add("ax4_right_outer", worst(lambda x, d: E(x @ d) - x @ EB(d), xs, D), tol)
        rep.add("ax6_right_ip", worst(lambda y, x: EB(dag(y) @ x) - dag(E(y)) @ x, ys, xs), tol)
        rep.add("derived_right_ip", max(X.right.span.residual(dag(E(y)) @ x) for y in ys for x in xs), tol)
    rep.add("ax5_right_inner", worst(lambda y, b: E(y @ b) - E(y) @ b, ys, B), tol)
    rep.add("norm_bound", _norm_bound(E, samples, rng), tol)
    return rep


def check_right_expectation(E: BimoduleExpectation, samples: int = 20, seed: int = 0,
                            tol: float = CHECK_TOL) -> CheckReport:
    """Only the right-handed axioms (outer, inner, inner product)."""
    full = check_bimodule_expectation(E, samples, seed, tol)
    keep = ("range", "fixes_small", "ax4", "ax5", "ax6", "derived_right", "norm_bound")
    return CheckReport({k: v for k, v in full.checks.items() if k.startswith(keep)})


def check_left_expectation(E: BimoduleExpectation, samples: int = 20, seed: int = 0,
                           tol: float = CHECK_TOL) -> CheckReport:
    full = check_bimodule_expectation(E, samples, seed, tol)
    keep = ("range", "fixes_small", "ax1", "ax2", "ax3", "derived_left", "norm_bound")
    return CheckReport({k: v for k, v in full.checks.items() if k.startswith(keep)})


def dual_expectation_map(E: BimoduleExpectation) -> BimoduleExpectation:
    """y~ -> E(y)~ between the dual bimodules, algebra expectations swapped."""
    Yd, Xd = dual_bimodule(E.big), dual_bimodule(E.small)
    return bimodule_map(Yd, Xd, lambda w: dag(E(dag(w))), E.right_exp, E.left_exp)


def right_expectation_from(EB: CondExpectation, Y: CornerBimodule, X: CornerBimodule,
                           tol: float = 1e-8) -> BimoduleExpectation:
    """The map with <E(y), x>_B = E^B(<y, x>_D) for all x in X."""
    right_frame(X)
    # unknown e in X: x_k^* e = E^B(x_k^* y) for every basis x_k
    M = np.stack([np.concatenate([vec(dag(xk) @ xb) for xk in X.basis]) for xb in X.basis], axis=1)
    s = np.linalg.svd(M, compute_uv=False)
    if X.dim and s[-1] <= 1e-10 * s[0]:
        raise RankDeficientError("right inner products do not determine X")
    values = []
    for y in Y.basis:
        rhs = np.concatenate([vec(EB(dag(xk) @ y)) for xk in X.basis])
        c, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        if np.linalg.norm(M @ c - rhs) > tol * max(1.0, np.linalg.norm(rhs)):
            raise RankDeficientError("defining system for E^X is inconsistent")
        values.append(X.element(c))
    return BimoduleExpectation(Y, X, np.stack(values), None, EB)


def left_expectation_from(EA: CondExpectation, Y: CornerBimodule, X: CornerBimodule,
                          tol: float = 1e-8) -> BimoduleExpectation:
    """Mirror of right_expectation_from: _A<E(y), x> = E^A(_C<y, x>)."""
    Ed = right_expectation_from(EA, dual_bimodule(Y), dual_bimodule(X), tol)
    out = dual_expectation_map(Ed)
    return BimoduleExpectation(Y, X, out.values, EA, None)


def induced_left_expectation(EX: BimoduleExpectation, A: MatrixAlgebra, C: MatrixAlgebra,
                             tol: float = 1e-8, verify: bool = True) -> CondExpectation:
    """E^A on C determined by E^A(c) x = E^X(c x) for x in X."""
    X = EX.small
    M = np.stack([np.concatenate([vec(a @ x) for x in X.basis]) for a in A.basis], axis=1)
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= 1e-10 * s[0]:
        raise RankDeficientError("A does not act faithfully on X")
    values = []
    for c in C.basis:
        rhs = np.concatenate([vec(EX(c @ x)) for x in X.basis])
        coef, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        if np.linalg.norm(M @ coef - rhs) > tol * max(1.0, np.linalg.norm(rhs)):
            raise RankDeficientError("E^X(c x) is not of the form a x")
        values.append(A.element(coef))
    E = CondExpectation(C, A, np.stack(values))
    if verify:
        from .condexp import verify_expectation
        rep = verify_expectation(E)
        if not rep.passed:
            raise AxiomViolationError(f"induced map is not an expectation:\n{rep}")
    return E


def induced_right_expectation(EX: BimoduleExpectation, B: MatrixAlgebra, D: MatrixAlgebra,
                              tol: float = 1e-8, verify: bool = True) -> CondExpectation:
    return induced_left_expectation(dual_expectation_map(EX), B, D, tol, verify)


# -- constructions --------------------------------------------------------------------------

def interior_tensor(X: CornerBimodule, Z: CornerBimodule, tol: float = DEFAULT_TOL) -> CornerBimodule:
    """X (x)_B Z realized as span{x z}.

    The multiplication map is isometric for the tensor inner product
    <x1 (x) z1, x2 (x) z2> = <z1, <x1, x2> z2>, so its image is the quotient
    of the algebraic tensor product by the Gram kernel.
    """
    prods = [x @ z for x in X.basis for z in Z.basis]
    return make_bimodule(X.left, Z.right, prods, tol) if prods else \
        CornerBimodule(X.left, Z.right, orthonormalize([], shape=(X.shape[0], Z.shape[1])))


def tensor_gram_rank(X: CornerBimodule, Z: CornerBimodule, tol: float = DEFAULT_TOL) -> int:
    """Rank of the trace of the tensor Gram matrix trace <z_j, <x_i, x_k> z_l>."""
    terms = [(x, z) for x in X.basis for z in Z.basis]
    if not terms:
        return 0
    G = np.array([[np.trace(dag(z1) @ (dag(x1) @ x2) @ z2) for x2, z2 in terms] for x1, z1 in terms])
    w = np.linalg.eigvalsh(0.5 * (G + dag(G)))
    return int(np.sum(w > tol * max(w.max(), 0.0))) if w.max() > 0 else 0


def rank_one_algebra(Y: CornerBimodule, X: CornerBimodule, tol: float = DEFAULT_TOL):
    """(C, A, frame): C spanned by theta_{y, y'} = y y'^*, A by theta over X."""
    frame = left_frame(X, tol)
    if max(np.linalg.norm(sum(x @ dag(x) @ y for x in frame) - y) for y in Y.basis) > 1e-8:
        raise FrameNotFoundError("no frame of X reproduces Y")
    d = Y.shape[0]
    C = algebra_from_span(orthonormalize([a @ dag(b) for a in Y.basis for b in Y.basis], tol, shape=(d, d)))
    A = algebra_from_span(orthonormalize([a @ dag(b) for a in X.basis for b in X.basis], tol, shape=(d, d)))
    return C, A, frame


def self_bimodule(A: MatrixAlgebra) -> CornerBimodule:
    """A as an A-A bimodule over itself."""
    return CornerBimodule(A, A, A.span)
