"""Jones towers, relative commutants and their Bratteli data."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .condexp import (CondExpectation, basic_construction, compression_data,
                      dual_expectation, index_of, psd_inv)
from .errors import SizeCapError
from .fdalg import (BlockStructure, MatrixAlgebra, block_structure, commutant, compress,
                    inclusion_matrix)
from .numlin import DEFAULT_TOL, dag, orthonormalize, subspace_distance
from .report import CHECK_TOL, CheckReport

DEPTH_CAP = 3
AMBIENT_CAP = 4096


@dataclass(frozen=True, eq=False)
class TowerData:
    levels: list  # C_0, C_1, ... each in its own ambient
    constructions: list  # BasicConstruction for C_{n-1} in C_n
    expectations: list  # E_0 = E, then the dual expectations C_n -> C_{n-1}
    jones: list  # e_1, e_2, ... as elements of C_1, C_2, ...

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def lift(self, x: np.ndarray, start: int, stop: int) -> np.ndarray:
        """Carry an element of C_start into C_stop."""
        for n in range(start, stop):
            x = self.constructions[n].embed(x)
        return x

    def lift_algebra(self, A: MatrixAlgebra, start: int, stop: int, tol=DEFAULT_TOL) -> MatrixAlgebra:
        d = self.levels[stop].d
        return MatrixAlgebra(orthonormalize([self.lift(a, start, stop) for a in A.basis], tol, shape=(d, d)))


def build_tower(E: CondExpectation, depth: int, depth_cap: int = DEPTH_CAP,
                ambient_cap: int = AMBIENT_CAP, tol: float = DEFAULT_TOL) -> TowerData:
    """C = C_0 in C_1 in ... in C_depth by iterated basic constructions."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > depth_cap:
        raise SizeCapError(f"depth {depth} exceeds cap {depth_cap}")
    levels, cons, exps, jones = [E.source], [], [E], []
    cur = E
    for n in range(depth):
        if cur.source.dim > ambient_cap:
            raise SizeCapError(f"level {n + 1} ambient {cur.source.dim} exceeds cap {ambient_cap}")
        B = basic_construction(cur, tol)
        nxt = dual_expectation(B, cur, tol)
        levels.append(B.algebra)
        cons.append(B)
        exps.append(nxt)
        jones.append(B.jones)
        cur = nxt
    return TowerData(levels, cons, exps, jones)


def check_tower(T: TowerData, tol: float = CHECK_TOL) -> CheckReport:
    from .condexp import verify_basic_construction
    rep = CheckReport()
    ind = index_of(T.expectations[0])
    for n, B in enumerate(T.constructions, start=1):
        rep.merge(verify_basic_construction(B, tol), f"level{n}.")
        lifted = T.lift(ind, 0, n)
        rep.add(f"level{n}.index_constant", np.linalg.norm(index_of(T.expectations[n]) - lifted), tol)
    top = T.depth
    es = [T.lift(e, i + 1, top) for i, e in enumerate(T.jones)]
    inv = T.lift(psd_inv(ind), 0, top) if top else None
    tl = comm = 0.0
    for i in range(len(es)):
        for j in range(len(es)):
            if abs(i - j) == 1:
                tl = max(tl, np.linalg.norm(es[i] @ es[j] @ es[i] - inv @ es[i]))
            elif abs(i - j) >= 2:
                comm = max(comm, np.linalg.norm(es[i] @ es[j] - es[j] @ es[i]))
    rep.add("jones_relation", tl, tol)
    rep.add("jones_commute", comm, 1e-9)
    return rep


@dataclass(frozen=True, eq=False)
class ParagroupData:
    rc_dims: list
    bratteli: list  # InclusionMatrix between consecutive relative commutants
    block_dims: list  # BlockStructure per level
    algebras: list = field(repr=False, default_factory=list)


def relative_commutants(A: MatrixAlgebra, T: TowerData, seed: int = 0,
                        tol: float = DEFAULT_TOL) -> ParagroupData:
    """A' cap C_n at every level with the inclusion matrices between them."""
    rcs, structs = [], []
    for n, Cn in enumerate(T.levels):
        An = T.lift_algebra(A, 0, n, tol)
        rc = commutant(An, Cn, tol)
        rcs.append(rc)
        structs.append(block_structure(rc, seed, tol))
    mats = []
    for n in range(len(rcs) - 1):
        up = T.lift_algebra(rcs[n], n, n + 1, tol)
        # lifting is a unital embedding, so the lifted central projections keep the block order
        projs = [T.lift(p, n, n + 1) for p in structs[n].central_projections]
        lifted = BlockStructure([(k, int(round(float(np.real(np.trace(p))) / k)))
                                 for (k, _), p in zip(structs[n].blocks, projs)], projs)
        mats.append(inclusion_matrix(up, rcs[n + 1], seed, tol, sa=lifted, sb=structs[n + 1]))
    return ParagroupData([rc.dim for rc in rcs], mats, structs, rcs)


def commutant_corner_iso(E: CondExpectation, n: int, p: np.ndarray, tol: float = DEFAULT_TOL):
    """x -> V^* x V from M_n(A)' cap M_n(C) onto (pM_n(A)p)' cap pM_n(C)p, with checks."""
    cd = compression_data(E, n, p, tol)
    V = cd.V
    src = commutant(cd.A_n, cd.C_n, tol)
    pA, pC = compress(cd.A_n, V, tol), compress(cd.C_n, V, tol)
    tgt = commutant(pA, pC, tol)
    pi = lambda x: dag(V) @ x @ V
    rep = CheckReport()
    imgs = [pi(x) for x in src.basis]
    sv = np.linalg.svd(np.stack(imgs).reshape(len(imgs), -1), compute_uv=False) if imgs else np.ones(1)
    rep.add_bool("injective", sv[-1] > 1e-8 * sv[0])
    rep.add("onto", subspace_distance(orthonormalize(imgs, tol, shape=tgt.span.shape), tgt.span), 1e-8)
    mult = star = 0.0
    for x in src.basis:
        star = max(star, np.linalg.norm(pi(dag(x)) - dag(pi(x))))
        for y in src.basis:
            mult = max(mult, np.linalg.norm(pi(x @ y) - pi(x) @ pi(y)))
    rep.add("multiplicative", mult, 1e-9)
    rep.add("adjoint", star, 1e-9)
    rep.add_bool("dims", src.dim == tgt.dim, f"{src.dim} vs {tgt.dim}")
    return pi, src, tgt, rep


@dataclass(frozen=True)
class ParagroupVerdict:
    equal: bool
    reason: str
    permutations: Optional[list] = None


def compare_paragroups(P1: ParagroupData, P2: ParagroupData) -> ParagroupVerdict:
    """Equal rc_dims and inclusion matrices up to per-level block permutations."""
    if len(P1.rc_dims) != len(P2.rc_dims):
        return ParagroupVerdict(False, "different depths")
    for n, (a, b) in enumerate(zip(P1.rc_dims, P2.rc_dims)):
        if a != b:
            return ParagroupVerdict(False, f"level {n}: relative commutant dims {a} vs {b}")
    sizes1 = [s.dims for s in P1.block_dims]
    sizes2 = [s.dims for s in P2.block_dims]

    def candidates(n):
        k = len(sizes1[n])
        if len(sizes2[n]) != k:
            return []
        return [perm for perm in itertools.permutations(range(k))
                if all(sizes1[n][i] == sizes2[n][perm[i]] for i in range(k))]

    def search(n, chosen):
        if n == len(sizes1):
            return chosen
        for perm in candidates(n):
            if n > 0:
                L1 = P1.bratteli[n - 1].entries
                L2 = P2.bratteli[n - 1].entries[np.ix_(chosen[-1], perm)]
                if not np.array_equal(L1, L2):
                    continue
            found = search(n + 1, chosen + [perm])
            if found is not None:
                return found
        return None

    found = search(0, [])
    if found is None:
        return ParagroupVerdict(False, "no block permutation matches the inclusion matrices")
    return ParagroupVerdict(True, "isomorphic", [list(p) for p in found])


def bratteli_dot(P: ParagroupData, name: str = "bratteli") -> str:
    """DOT digraph: one rank per level, nodes 'k×k (m)', edge labels = multiplicities."""
    lines = [f'digraph "{name}" {{', "  rankdir=TB;"]
    for n, s in enumerate(P.block_dims):
        nodes = []
        for i, (k, m) in enumerate(s.blocks):
            node = f"L{n}_{i}"
            nodes.append(node)
            lines.append(f'  {node} [label="{k}×{k} ({m})"];')
        lines.append("  { rank=same; " + " ".join(nodes) + " }")
    for n, inc in enumerate(P.bratteli):
        for i in range(inc.entries.shape[0]):
            for j in range(inc.entries.shape[1]):
                v = int(inc.entries[i, j])
                if v:
                    lines.append(f'  L{n}_{i} -> L{n + 1}_{j} [label="{v}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
