"""Relative-commutant data of two scenarios side by side, with Bratteli DOT output.

Usage:  python3 scripts/compare_paragroups.py s1_trace_m2 s3_corner_of_s1 --depth 3 --dot out.dot
"""
import argparse
import sys
from pathlib import Path

from moritalab.cli import build_inclusion, load_scenario
from moritalab.condexp import with_quasi_basis
from moritalab.paragroup import bratteli_dot, build_tower, compare_paragroups, relative_commutants


def paragroup(ref, depth):
    sc = load_scenario(ref)
    E = with_quasi_basis(build_inclusion(sc, 1e-9))
    return sc.name, relative_commutants(E.target, build_tower(E, depth))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("a")
    ap.add_argument("b")
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--dot")
    args = ap.parse_args(argv)
    (na, Pa), (nb, Pb) = paragroup(args.a, args.depth), paragroup(args.b, args.depth)
    for name, P in ((na, Pa), (nb, Pb)):
        print(f"{name}: rc_dims {P.rc_dims}")
        for n, s in enumerate(P.block_dims):
            print(f"  level {n}: blocks {s.blocks}")
        for n, m in enumerate(P.bratteli):
            print(f"  {n} -> {n + 1}: {m.entries.tolist()}")
    v = compare_paragroups(Pa, Pb)
    print(f"{'isomorphic' if v.equal else 'different'}: {v.reason}")
    if args.dot:
        Path(args.dot).write_text(f"// {na} vs {nb}: {v.reason}\n" + bratteli_dot(Pa, na) + bratteli_dot(Pb, nb))
    return 0 if v.equal else 1


if __name__ == "__main__":
    sys.exit(main())
