"""Upward and downward basic constructions for bimodule expectations, uniqueness and duality.

The upward construction is realized through the linking algebra.  The
Jones basic construction T of E^L: L_Y -> L_X acts on the module L_Y, whose
frame splits into a P-row (C and Y) and a Q-row (Y~ and D).  The corners of T
are C_1, D_1 and Y_1, and the linking dual expectation restricts to E^C,
E^D and E^Y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bimodule import (BimoduleExpectation, CornerBimodule, bimodule_map, check_bimodule_expectation,
                       mixed_fullness, right_frame)
from .condexp import (BasicConstruction, CondExpectation, basic_construction, downward_data,
                      dual_expectation, index_of, quasi_basis, require_index_in_target)
from .errors import StarConditionError
from .fdalg import MatrixAlgebra, algebra_distance, inclusion_matrix
from .morita import (LinkingData, MoritaPair, check_morita_pair, linking_algebra, linking_expectation)
from .numlin import (DEFAULT_TOL, Subspace, dag, null_space, orthonormalize, psd_inv, psd_sqrt,
                     random_element, subspace_distance)
from .report import CHECK_TOL, CheckReport


def _restrict(E: CondExpectation, C: MatrixAlgebra, A: MatrixAlgebra, lift, crop) -> CondExpectation:
    return CondExpectation(C, A, np.stack([crop(E(lift(c))) for c in C.basis]))


@dataclass(frozen=True, eq=False)
class UpwardData:
    pair: MoritaPair
    EA: CondExpectation
    EB: CondExpectation
    EX: BimoduleExpectation
    linking: LinkingData
    EL: CondExpectation
    tower: BasicConstruction  # of E^L on L_Y
    ELY: CondExpectation  # dual expectation on T
    iP: np.ndarray
    iQ: np.ndarray
    C1: MatrixAlgebra
    D1: MatrixAlgebra
    Y1: CornerBimodule
    eA: np.ndarray
    eB: np.ndarray
    EC: CondExpectation
    ED: CondExpectation
    EY: BimoduleExpectation
    next_pair: MoritaPair = field(repr=False)

    @property
    def m(self) -> int:
        return self.tower.module_dim

    def _lift(self, x, where):
        d1, d2 = self.pair.C.d, self.pair.D.d
        z = np.zeros((d1 + d2, d1 + d2), dtype=complex)
        r = slice(0, d1) if where[0] == 0 else slice(d1, None)
        c = slice(0, d1) if where[1] == 0 else slice(d1, None)
        z[r, c] = x
        return self.tower.embed(z)

    def lam_C(self, c):
        return self._lift(c, (0, 0))[np.ix_(self.iP, self.iP)]

    def lam_D(self, d):
        return self._lift(d, (1, 1))[np.ix_(self.iQ, self.iQ)]

    def phi(self, y):
        return self._lift(y, (0, 1))[np.ix_(self.iP, self.iQ)]

    def embed_corner(self, t, rows, cols):
        out = np.zeros((self.m, self.m), dtype=complex)
        out[np.ix_(rows, cols)] = t
        return out

    @property
    def unit_Q(self) -> np.ndarray:
        """Coordinates of the unit of D inside the Q-row of the module."""
        d1, d2 = self.pair.C.d, self.pair.D.d
        Q = np.zeros((d1 + d2, d1 + d2), dtype=complex)
        Q[d1:, d1:] = np.eye(d2)
        return self.tower.vector(Q)[self.iQ]

    def read_P(self, v) -> np.ndarray:
        """Upper-right block of the module element with P-row coordinates v."""
        d1 = self.pair.C.d
        full = np.zeros(self.m, dtype=complex)
        full[self.iP] = v
        return self.tower.element(full)[:d1, d1:]

    def phi_inv(self, eta):
        return self.read_P(eta @ self.unit_Q)

    # e_A xi e_B and phi(x) for x in X agree on the unit vector
    extract = phi_inv

    def phi_formula(self, y, pa, pb):
        """sum_{ij} u_i e_A phi(E^X(u_i' y v_j)) e_B v_j' for quasi-bases pa, pb."""
        out = 0
        for u, u2 in pa:
            left = self.lam_C(u) @ self.eA
            for v, v2 in pb:
                out = out + left @ self.phi(self.EX(u2 @ y @ v)) @ self.eB @ self.lam_D(v2)
        return out


def _corner_pairs(U_lam, pairs, e, h):
    return tuple((U_lam(u) @ e @ h, h @ e @ U_lam(v)) for u, v in pairs)


def upward(M: MoritaPair, EA: CondExpectation, EB: CondExpectation, EX: BimoduleExpectation,
           tol: float = DEFAULT_TOL) -> UpwardData:
    L = linking_algebra(M)
    EL = linking_expectation(L, EA, EB, EX)
    T = basic_construction(EL, tol, blocks=L.groups)
    ELY = dual_expectation(T, EL, tol)
    g = L.groups
    iP = np.array(g[0] + g[1])
    iQ = np.array(g[2] + g[3])
    TP = T.algebra
    crop = lambda t, r, c: t[np.ix_(r, c)]
    C1 = MatrixAlgebra(orthonormalize([crop(t, iP, iP) for t in TP.basis], tol, shape=(len(iP),) * 2))
    D1 = MatrixAlgebra(orthonormalize([crop(t, iQ, iQ) for t in TP.basis], tol, shape=(len(iQ),) * 2))
    Y1s = orthonormalize([crop(t, iP, iQ) for t in TP.basis], tol, shape=(len(iP), len(iQ)))
    eA, eB = crop(T.jones, iP, iP), crop(T.jones, iQ, iQ)
    proto = UpwardData(M, EA, EB, EX, L, EL, T, ELY, iP, iQ, C1, D1, None, eA, eB, None, None, None, None)
    Cin = MatrixAlgebra(orthonormalize([proto.lam_C(c) for c in M.C.basis], tol, shape=C1.span.shape))
    Din = MatrixAlgebra(orthonormalize([proto.lam_D(d) for d in M.D.basis], tol, shape=D1.span.shape))
    Y1 = CornerBimodule(C1, D1, Y1s)
    Yin = CornerBimodule(Cin, Din, orthonormalize([proto.phi(y) for y in M.Y.basis], tol, shape=Y1s.shape))
    EC = _restrict(ELY, C1, Cin, lambda t: proto.embed_corner(t, iP, iP), lambda z: crop(z, iP, iP))
    ED = _restrict(ELY, D1, Din, lambda t: proto.embed_corner(t, iQ, iQ), lambda z: crop(z, iQ, iQ))
    ia, ib = require_index_in_target(EA), require_index_in_target(EB)
    hA, hB = proto.lam_C(psd_sqrt(ia)), proto.lam_D(psd_sqrt(ib))
    qa = EA.quasi_basis or quasi_basis(EA)
    qb = EB.quasi_basis or quasi_basis(EB)
    EC = CondExpectation(EC.source, EC.target, EC.values, _corner_pairs(proto.lam_C, qa, eA, hA), proto.lam_C(ia))
    ED = CondExpectation(ED.source, ED.target, ED.values, _corner_pairs(proto.lam_D, qb, eB, hB), proto.lam_D(ib))
    EY = bimodule_map(Y1, Yin, lambda t: crop(ELY(proto.embed_corner(t, iP, iQ)), iP, iQ), EC, ED)
    N = MoritaPair(Cin, C1, Din, D1, Y1, Yin, right_frame(Yin))
    return UpwardData(M, EA, EB, EX, L, EL, T, ELY, iP, iQ, C1, D1, Y1, eA, eB, EC, ED, EY, N)


def next_level(U: UpwardData, tol: float = DEFAULT_TOL) -> UpwardData:
    """Upward construction for (C in C_1, D in D_1, phi(Y) in Y_1)."""
    return upward(U.next_pair, U.EC, U.ED, U.EY, tol)


def check_upward(U: UpwardData, samples: int = 20, seed: int = 0, tol: float = CHECK_TOL) -> CheckReport:
    rng = np.random.default_rng(seed)
    M, rep = U.pair, CheckReport()
    Yb = M.Y.basis
    inner = act = 0.0
    for i in range(len(Yb)):
        for j in range(len(Yb)):
            y, z = Yb[i], Yb[j]
            inner = max(inner, np.linalg.norm(dag(U.phi(y)) @ U.phi(z) - U.lam_D(dag(y) @ z)),
                        np.linalg.norm(U.phi(y) @ dag(U.phi(z)) - U.lam_C(y @ dag(z))))
    for _ in range(samples):
        y = random_element(M.Y.space, rng)
        c = random_element(M.C.span, rng)
        d = random_element(M.D.span, rng)
        act = max(act, np.linalg.norm(U.phi(c @ y @ d) - U.lam_C(c) @ U.phi(y) @ U.lam_D(d)))
    rep.add("phi_inner_products", inner, 1e-9)
    rep.add("phi_bimodule", act, tol)
    rep.merge(mixed_fullness(U.Y1, U.next_pair.X), "level1.")
    rep.add("EY_fixes_phiY", max(np.linalg.norm(U.EY(U.phi(y)) - U.phi(y)) for y in Yb), tol)
    rep.merge(check_bimodule_expectation(U.EY, samples, seed, tol), "EY.")
    rep.merge(check_morita_pair(U.next_pair, tol), "pair1.")
    jones = star = 0.0
    ia_inv = psd_inv(index_of(U.EA))
    for y in Yb:
        jones = max(jones, np.linalg.norm(U.eA @ U.phi(y) @ U.eB - U.eA @ U.phi(U.EX(y)) @ U.eB))
    for x in M.X.basis:
        star = max(star, np.linalg.norm(U.EY(U.eA @ U.phi(x) @ U.eB) - U.phi(ia_inv @ x)))
    rep.add("jones_compression", jones, tol)
    rep.add("EY_on_jones", star, tol)
    qa1, qb1 = quasi_basis(U.EA, seed=seed + 1), quasi_basis(U.EB, seed=seed + 2)
    qa2, qb2 = quasi_basis(U.EA, seed=seed + 3), quasi_basis(U.EB, seed=seed + 4)
    indep = canon = 0.0
    for y in Yb:
        f1, f2 = U.phi_formula(y, qa1, qb1), U.phi_formula(y, qa2, qb2)
        indep = max(indep, np.linalg.norm(f1 - f2))
        canon = max(canon, np.linalg.norm(f1 - U.phi(y)))
    rep.add("phi_seed_independence", indep, tol)
    rep.add("phi_formula", canon, tol)
    return rep


# -- uniqueness -------------------------------------------------------------------------------

def star_violation(U: UpwardData, FY: BimoduleExpectation) -> float:
    ia_inv = psd_inv(index_of(U.EA))
    return max(float(np.linalg.norm(FY(U.eA @ U.phi(y) @ U.eB) - U.phi(ia_inv @ U.EX(y))))
               for y in U.pair.Y.basis)


def uniqueness_iso(U: UpwardData, W: CornerBimodule, FY: BimoduleExpectation,
                   tol: float = 1e-8, pa=None, pb=None):
    """theta: W -> Y_1 with F^Y = E^Y o theta, built from the candidate expectation."""
    ia = require_index_in_target(U.EA)
    viol = star_violation(U, FY)
    if viol > tol:
        raise StarConditionError(f"F^Y(e_A y e_B) differs from Ind^-1 E^X(y) by {viol:.2e}")
    pa = U.EA.quasi_basis if pa is None else pa
    pb = U.EB.quasi_basis if pb is None else pb
    left = [(U.lam_C(u) @ U.eA, U.eA @ U.lam_C(u2)) for u, u2 in pa]
    right = [(U.lam_D(v) @ U.eB, U.eB @ U.lam_D(v2)) for v, v2 in pb]

    def theta(eta):
        out = 0
        for lu, ru in left:
            for lv, rv in right:
                x = U.EX(ia @ U.phi_inv(FY(ru @ eta @ lv)))
                out = out + lu @ U.phi(x) @ rv
        return out

    return theta


def check_uniqueness(U: UpwardData, W: CornerBimodule, FY: BimoduleExpectation, theta,
                     samples: int = 20, seed: int = 0, tol: float = CHECK_TOL) -> CheckReport:
    rng = np.random.default_rng(seed)
    rep = CheckReport()
    rep.add("star_condition", star_violation(U, FY), tol)
    images = np.stack([theta(w) for w in W.basis])
    s = np.linalg.svd(images.reshape(W.dim, -1), compute_uv=False)
    rep.add_bool("theta_bijective", W.dim == U.Y1.dim and s[-1] > 1e-8 * s[0])
    comp = ipv = equiv = 0.0
    for _ in range(samples):
        eta, zeta = random_element(W.space, rng), random_element(W.space, rng)
        t1, t2 = theta(eta), theta(zeta)
        comp = max(comp, np.linalg.norm(FY(eta) - U.EY(t1)))
        ipv = max(ipv, np.linalg.norm(dag(t1) @ t2 - dag(eta) @ zeta),
                  np.linalg.norm(t1 @ dag(t2) - eta @ dag(zeta)))
        c1, c2 = random_element(U.pair.C.span, rng), random_element(U.pair.C.span, rng)
        g = U.lam_C(c1) @ U.eA @ U.lam_C(c2)
        equiv = max(equiv, np.linalg.norm(theta(g @ eta) - g @ t1))
    rep.add("composition", comp, tol)
    rep.add("inner_products", ipv, tol)
    rep.add("left_equivariance", equiv, tol)
    return rep


# -- duality ----------------------------------------------------------------------------------

def gram_projection(E: CondExpectation, pairs) -> np.ndarray:
    """[E(u_i^* u_j)] with the block convention of amplify."""
    k, d = len(pairs), E.d
    p = np.zeros((k * d, k * d), dtype=complex)
    for i, (ui, _) in enumerate(pairs):
        for j, (uj, _) in enumerate(pairs):
            p[i * d:(i + 1) * d, j * d:(j + 1) * d] = E(dag(ui) @ uj)
    return p


def pad_pairs(pairs, k):
    pairs = list(pairs)
    z = np.zeros_like(pairs[0][0])
    return pairs + [(z, z.copy())] * (k - len(pairs))


def corner_module(p, q, space: Subspace, k: int, tol=DEFAULT_TOL) -> Subspace:
    """span{p (f_ab (x) x) q}."""
    items = []
    for a in range(k):
        for b in range(k):
            f = np.zeros((k, k))
            f[a, b] = 1.0
            items.extend(p @ np.kron(f, x) @ q for x in space.basis)
    d1, d2 = space.shape
    return orthonormalize(items, tol, shape=(k * d1, k * d2))


def _blocks(entries, k, d1, d2):
    out = np.zeros((k * d1, k * d2), dtype=complex)
    for i in range(k):
        for j in range(k):
            out[i * d1:(i + 1) * d1, j * d2:(j + 1) * d2] = entries[i][j]
    return out


def duality_check(U: UpwardData, U2: Optional[UpwardData] = None, samples: int = 20, seed: int = 0,
                  tol: float = CHECK_TOL) -> CheckReport:
    """E^{pM_k(X)q} o Phi_1 = Phi o E^{Y_1} on random elements of Y_2.

    U must be built from Parseval quasi-bases of E^A and E^B; U2 is the
    second level.  Both lists are padded with zero pairs to a common length.
    """
    rng = np.random.default_rng(seed)
    M = U.pair
    U2 = next_level(U) if U2 is None else U2
    pa, pb = list(U.EA.quasi_basis), list(U.EB.quasi_basis)
    k = max(len(pa), len(pb))
    pa, pb = pad_pairs(pa, k), pad_pairs(pb, k)
    d1, d2 = M.C.d, M.D.d
    p, q = gram_projection(U.EA, pa), gram_projection(U.EB, pb)
    rep = CheckReport()
    rep.add("p_projection", max(np.linalg.norm(p @ p - p), np.linalg.norm(p - dag(p))), tol)
    rep.add("q_projection", max(np.linalg.norm(q @ q - q), np.linalg.norm(q - dag(q))), tol)
    ia, ib = index_of(U.EA), index_of(U.EB)
    hA, hB = U.lam_C(psd_sqrt(ia)), U.lam_D(psd_sqrt(ib))
    ws = [U.lam_C(u) @ U.eA @ hA for u, _ in pa]
    zs = [U.lam_D(v) @ U.eB @ hB for v, _ in pb]

    def Phi(xi):
        ent = [[U.extract(U.eA @ U.lam_C(dag(pa[i][0])) @ xi @ U.lam_D(pb[j][0]) @ U.eB)
                for j in range(k)] for i in range(k)]
        return _blocks(ent, k, d1, d2)

    def Phi1(eta):
        ent = [[U.phi_inv(U2.extract(U2.eA @ U2.lam_C(dag(ws[i])) @ eta @ U2.lam_D(zs[j]) @ U2.eB))
                for j in range(k)] for i in range(k)]
        return _blocks(ent, k, d1, d2)

    pXq = corner_module(p, q, M.X.space, k)
    pYq = corner_module(p, q, M.Y.space, k)
    rep.add_bool("dim_Y1", U.Y1.dim == pXq.dim, f"{U.Y1.dim} vs {pXq.dim}")
    rep.add_bool("dim_Y2", U2.Y1.dim == pYq.dim, f"{U2.Y1.dim} vs {pYq.dim}")
    img = [Phi(xi) for xi in U.Y1.basis]
    rep.add("Phi_range", max(pXq.residual(z) for z in img), tol)
    s = np.linalg.svd(np.stack(img).reshape(len(img), -1), compute_uv=False)
    rep.add_bool("Phi_injective", s[-1] > 1e-8 * s[0])
    EXk = lambda z: _blocks([[U.EX(z[i * d1:(i + 1) * d1, j * d2:(j + 1) * d2]) for j in range(k)]
                             for i in range(k)], k, d1, d2)
    worst = rng_res = 0.0
    for _ in range(samples):
        eta = random_element(U2.Y1.space, rng)
        lhs_in = Phi1(eta)
        rng_res = max(rng_res, pYq.residual(lhs_in))
        rhs = Phi(U2.phi_inv(U2.EY(eta)))
        worst = max(worst, np.linalg.norm(EXk(lhs_in) - rhs))
    rep.add("Phi1_range", rng_res, tol)
    rep.add("commuting_square", worst, tol)
    return rep


# -- downward ---------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DownwardData:
    P: MatrixAlgebra
    Q: MatrixAlgebra
    Z: CornerBimodule
    EP: CondExpectation
    EQ: CondExpectation
    EZ: BimoduleExpectation
    pair: MoritaPair  # P in A, Q in B, Z in X
    report: CheckReport


def downward(M: MoritaPair, EA: CondExpectation, EB: CondExpectation, EX: BimoduleExpectation,
             p: np.ndarray, q: np.ndarray, tol: float = DEFAULT_TOL) -> DownwardData:
    sp, sq = downward_data(EA, p, tol), downward_data(EB, q, tol)
    X = M.X
    L = np.stack([(p @ x - x @ q).reshape(-1) for x in X.basis], axis=1)
    N = null_space(L, tol, scale=max(np.linalg.norm(p, 2), np.linalg.norm(q, 2)))
    Zs = orthonormalize([X.element(c) for c in N.basis], tol, shape=X.shape)
    Z = CornerBimodule(sp.P, sq.P, Zs)
    ia = require_index_in_target(EA)
    ib = require_index_in_target(EB)
    XasY = CornerBimodule(M.A, M.B, X.space)
    EZ = bimodule_map(XasY, Z, lambda x: ia @ EX(p @ x @ q), sp.EP, sq.EP)
    pair = MoritaPair(sp.P, M.A, sq.P, M.B, XasY, Z, right_frame(Z))
    rep = CheckReport()
    rep.merge(sp.report, "P.")
    rep.merge(sq.report, "Q.")
    rep.add("EZ_fixes_Z", max((np.linalg.norm(EZ(z) - z) for z in Z.basis), default=0.0))
    rep.add("EZ_right_index", max(np.linalg.norm(EZ(x) - EX(p @ x @ q) @ ib) for x in X.basis))
    rep.merge(check_bimodule_expectation(EZ), "EZ.")
    rep.merge(check_morita_pair(pair), "pair.")
    return DownwardData(sp.P, sq.P, Z, sp.EP, sq.EP, EZ, pair, rep)


def jones_fixed_subspace(U: UpwardData, tol: float = DEFAULT_TOL) -> Subspace:
    """{y in Y : e_A phi(y) = phi(y) e_B}."""
    Y = U.pair.Y
    L = np.stack([(U.eA @ U.phi(y) - U.phi(y) @ U.eB).reshape(-1) for y in Y.basis], axis=1)
    N = null_space(L, tol, scale=max(np.linalg.norm(U.eA, 2), np.linalg.norm(U.eB, 2)))
    return orthonormalize([Y.element(c) for c in N.basis], tol, shape=Y.shape)


def _inclusion_signature(small: MatrixAlgebra, big: MatrixAlgebra, seed: int = 0):
    """Inclusion matrix with rows and columns sorted, plus sorted block sizes."""
    inc = inclusion_matrix(small, big, seed)
    rows = sorted(range(len(inc.small.blocks)), key=lambda i: (inc.small.blocks[i][0], tuple(inc.entries[i])))
    Lm = inc.entries[rows]
    cols = sorted(range(Lm.shape[1]), key=lambda j: (inc.large.blocks[j][0], tuple(Lm[:, j])))
    return (tuple(sorted(inc.small.dims)), tuple(sorted(inc.large.dims)),
            tuple(tuple(int(v) for v in row) for row in Lm[:, cols]))


def _rebuild_checks(rep: CheckReport, prefix: str, D: DownwardData, old: MoritaPair, seed: int):
    """Run the upward construction on a downward step and compare with the original inclusions."""
    Up = upward(D.pair, D.EP, D.EQ, D.EZ)
    for tag, new, ref in (("C", (Up.next_pair.A, Up.C1), (old.A, old.C)),
                          ("D", (Up.next_pair.B, Up.D1), (old.B, old.D))):
        a, b = _inclusion_signature(*new, seed), _inclusion_signature(*ref, seed)
        rep.add_bool(f"{prefix}_{tag}_blocks", a == b, f"{a} vs {b}")
    rep.add_bool(f"{prefix}_Y_dim", Up.Y1.dim == old.Y.dim, f"{Up.Y1.dim} vs {old.Y.dim}")
    rep.add_bool(f"{prefix}_X_dim", Up.next_pair.X.dim == old.X.dim, f"{Up.next_pair.X.dim} vs {old.X.dim}")


def updown_relation_check(U: UpwardData, p: Optional[np.ndarray] = None, q: Optional[np.ndarray] = None,
                          tol: float = CHECK_TOL, seed: int = 0) -> CheckReport:
    M = U.pair
    rep = CheckReport()
    Zp = jones_fixed_subspace(U)
    rep.add("jones_fixed_equals_X", subspace_distance(Zp, M.X.space), tol)
    N = U.next_pair
    D = downward(N, U.EC, U.ED, U.EY, U.eA, U.eB)
    rep.add("recover_A", algebra_distance(D.P, MatrixAlgebra(orthonormalize(
        [U.lam_C(a) for a in M.A.basis], shape=U.C1.span.shape))), tol)
    rep.add("recover_B", algebra_distance(D.Q, MatrixAlgebra(orthonormalize(
        [U.lam_D(b) for b in M.B.basis], shape=U.D1.span.shape))), tol)
    rep.add("recover_X", subspace_distance(D.Z.space, orthonormalize(
        [U.phi(x) for x in M.X.basis], shape=U.Y1.shape)), tol)
    rep.add("recover_EX", max(np.linalg.norm(D.EZ(U.phi(y)) - U.phi(U.EX(y))) for y in M.Y.basis), tol)
    ind_inv = psd_inv(index_of(U.EA))
    rep.add("EC_of_jones", np.linalg.norm(U.EC(U.eA) - U.lam_C(ind_inv)), tol)
    rep.merge(D.report, "down1.")
    _rebuild_checks(rep, "rebuild1", D, N, seed)
    if p is not None and q is not None:
        Dn = downward(M, U.EA, U.EB, U.EX, p, q)
        rep.merge(Dn.report, "down0.")
        _rebuild_checks(rep, "rebuild", Dn, M, seed)
    return rep
