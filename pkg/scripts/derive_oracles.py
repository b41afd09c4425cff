"""Independent values for the test suite, computed without moritalab.

Towers are built in the module picture: C_{n+1} is the commutant of the
right C_{n-1}-action on the vector space C_n, and A sits in it by iterated
left multiplication.  Relative commutants and centers are solved as
commutants of explicit operator lists with Kronecker products.  Nothing
here uses the quasi-basis, Jones-projection or coordinate machinery of the
package, so agreement is a real cross-check.

Run:  python3 scripts/derive_oracles.py  (prints JSON)
"""
import json

import numpy as np

TOL = 1e-9


def span_basis(mats, d):
    if not len(mats):
        return np.zeros((0, d, d), complex)
    M = np.stack([m.reshape(-1) for m in mats], axis=1)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > TOL * max(s[0], 1e-300))) if s.size and s[0] > 1e-12 else 0
    return U[:, :r].T.reshape(r, d, d)


def commutant_of(ops, d):
    """{x in M_d : x s = s x for all s in ops} by one Kronecker system."""
    eye = np.eye(d)
    if not len(ops):
        return span_basis([np.eye(d)[:, [i]] @ np.eye(d)[[j], :] for i in range(d) for j in range(d)], d)
    rows = [np.kron(s, eye) - np.kron(eye, s.T) for s in ops]  # row-major vec of s x - x s
    L = np.concatenate(rows, axis=0)
    _, s, Vh = np.linalg.svd(L, full_matrices=L.shape[0] < d * d)
    r = int(np.sum(s > TOL * max(1.0, s[0])))
    N = Vh[r:].conj()
    return N.reshape(-1, d, d)


def left_ops(space, elems):
    """Matrices of v -> e v on the vector space spanned by `space` (orthonormal)."""
    cols = space.reshape(len(space), -1)
    return [np.array([[np.vdot(cols[i], (e @ space[j]).reshape(-1)) for j in range(len(space))]
                      for i in range(len(space))]) for e in elems]


def right_ops(space, elems):
    cols = space.reshape(len(space), -1)
    return [np.array([[np.vdot(cols[i], (space[j] @ e).reshape(-1)) for j in range(len(space))]
                      for i in range(len(space))]) for e in elems]


def generators(alg, rng, k=2):
    """A few random elements and their adjoints; generic ones generate alg."""
    out = []
    for _ in range(k):
        c = rng.standard_normal(len(alg)) + 1j * rng.standard_normal(len(alg))
        g = np.tensordot(c, alg, axes=(0, 0))
        out += [g, g.conj().T]
    return out


def tower(A, C, depth, seed=0):
    """dims of C_0..C_depth, relative commutant dims and their block counts."""
    rng = np.random.default_rng(seed)
    levels = [C]  # each level as an orthonormal basis inside its own M_d
    A_in = [A]  # A embedded in each level
    small = A
    for n in range(depth):
        space = levels[-1]
        sub = small  # C_{n-1} inside C_n (A when n = 0)
        R = right_ops(space, generators(sub, rng))
        nxt = commutant_of(R, len(space))
        levels.append(nxt)
        # C_n acts on itself by left multiplication; that is its copy inside C_{n+1}
        Cn_in = np.stack(left_ops(space, list(space)))
        A_in.append(np.stack(left_ops(space, list(A_in[-1]))))
        small = Cn_in
    rc_dims, blocks = [], []
    for n, lev in enumerate(levels):
        # A' cap C_n, solved in the coordinates of C_n
        ops_A = generators(A_in[n], rng)
        rc = _commutant_inside(ops_A, lev)
        rc_dims.append(len(rc))
        center = _commutant_inside(generators(rc, rng), rc)
        blocks.append(len(center))
    return {"tower_dims": [len(l) for l in levels], "rc_dims": rc_dims, "rc_blocks": blocks}


def _commutant_inside(ops, alg):
    """{x in span(alg) : x s = s x}."""
    k, d = len(alg), alg.shape[1]
    L = np.concatenate([np.stack([(b @ s - s @ b).reshape(-1) for b in alg], axis=1) for s in ops], axis=0)
    _, s, Vh = np.linalg.svd(L, full_matrices=L.shape[0] < k)
    r = int(np.sum(s > TOL * max(1.0, s[0])))
    N = Vh[r:].conj()
    return span_basis([np.tensordot(c, alg, axes=(0, 0)) for c in N], d)


def e(i, j, d=2):
    m = np.zeros((d, d), complex)
    m[i, j] = 1
    return m


def hand_index(pairs):
    return sum(u @ v for u, v in pairs)


def main():
    M2 = span_basis([e(i, j) for i in range(2) for j in range(2)], 2)
    C1 = span_basis([np.eye(2)], 2)
    D2 = span_basis([e(0, 0), e(1, 1)], 2)
    out = {}
    # quasi-bases by hand: trace onto scalars uses sqrt(2) e_ij, pinching uses e_ij
    qb_trace = [(np.sqrt(2) * e(i, j), np.sqrt(2) * e(j, i)) for i in range(2) for j in range(2)]
    qb_pinch = [(e(i, j), e(j, i)) for i in range(2) for j in range(2)]
    tr = lambda x: np.trace(x) / 2 * np.eye(2)
    pin = lambda x: np.diag(np.diag(x))
    for name, E, qb in (("trace", tr, qb_trace), ("pinching", pin, qb_pinch)):
        viol = max(np.linalg.norm(sum(u @ E(v @ x) for u, v in qb) - x) for x in M2)
        out[f"{name}_hand_quasi_basis_violation"] = float(viol)
        out[f"{name}_index_scalar"] = float(np.real(hand_index(qb)[0, 0]))
    out["s1"] = tower(C1, M2, 2)
    out["s2"] = tower(D2, M2, 2)
    out["s4_base"] = tower(span_basis([np.eye(2)], 2), D2, 2)
    # S4 sizes: B_1 = End(D_2 as a vector space), B_2 = commutant of right D_2 on B_1
    rng = np.random.default_rng(1)
    B1 = commutant_of(right_ops(D2, generators(C1, rng)), 2)
    lamB = np.stack(left_ops(D2, list(D2)))
    B2 = commutant_of(right_ops(B1, generators(lamB, rng)), len(B1))
    out["s4_dims"] = {"B": len(D2), "B1": len(B1), "B2": len(B2)}
    # commutant / generation examples
    out["commutant_D2_in_M2"] = len(_commutant_inside(list(D2), M2))
    out["commutant_M2_in_M2"] = len(_commutant_inside(list(M2), M2))
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
