"""Verify every bundled scenario and write one JSON report per scenario.

Usage:  python3 scripts/run_builtins.py [--out reports/] [--depth K] [--seed N]
"""
import argparse
import sys
import time
from pathlib import Path

from moritalab.cli import builtin_names, load_scenario, report_json, run_scenario
from moritalab.config import RunConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="reports")
    ap.add_argument("--depth", type=int)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ok = True
    for name in builtin_names():
        sc = load_scenario(name)
        cfg = RunConfig(check_tol=sc.tol, seed=sc.seed, depth=sc.depth).with_overrides(
            depth=args.depth, seed=args.seed)
        t0 = time.perf_counter()
        res = run_scenario(sc, cfg)
        (out / f"{name}.json").write_text(report_json(res))
        worst = res.report.max_violation
        print(f"{name:20s} {len(res.report.checks):4d} checks  {len(res.report.failures):3d} failed  "
              f"worst {worst:.1e}  {time.perf_counter() - t0:5.1f}s")
        for c in res.report.failures:
            print(f"    FAIL {c.name}: {c.violation:.3e} > {c.threshold:.1e} {c.detail}")
        ok &= res.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
