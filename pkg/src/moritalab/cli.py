"""Scenario files, the verification pipeline and the command line entry point."""
from __future__ import annotations

import argparse
import fnmatch
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .condexp import (compression_data, diag_amplify, from_action, index_of, quasi_basis_violation,
                      trace_expectation, verify_expectation, watatani_index, with_quasi_basis)
from .bimodule import check_bimodule_expectation
from .config import RunConfig
from .errors import MoritaLabError, ParseError
from .fdalg import full_algebra, generate_algebra, is_subalgebra, scalars
from .morita import (check_linking, check_morita_pair, check_standard_form, check_transport,
                     exchange_identities_check, linking_algebra, linking_expectation, standard_form,
                     standard_partner, transport_expectation, _block_diag)
from .paragroup import (ParagroupData, bratteli_dot, build_tower, check_tower, commutant_corner_iso,
                        compare_paragroups, relative_commutants)
from .report import CheckReport
from .scenarios import tower_pair
from .towers import (check_uniqueness, check_upward, duality_check, next_level, uniqueness_iso,
                     updown_relation_check, upward)

BUILTIN_PACKAGE = "moritalab.builtins"

# -- scenario files ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    ambient_dim: int
    generators_A: object  # "scalars" or list of matrices
    generators_C: object  # "full" or list of matrices
    expectation: object  # "trace" or a (d^2, d^2) matrix acting on row-major vec
    morita: Optional[tuple] = None  # (n, p)
    partner: str = "none"  # none, standard or tower
    downward: Optional[tuple] = None  # (p, q)
    depth: int = 2
    tol: float = 1e-8
    seed: int = 0
    expected_index: Optional[float] = None
    description: str = ""
    source: str = ""


_KEYS = {"name", "description", "ambient_dim", "generators_A", "generators_C", "expectation",
         "morita", "partner", "downward", "depth", "tol", "seed", "expected_index"}


def _err(msg, node):
    m = node.start_mark
    return ParseError(msg, m.line + 1, m.column + 1)


class _Reader:
    def __init__(self, text: str):
        self.loader = yaml.SafeLoader(text)

    def root(self):
        try:
            node = self.loader.get_single_node()
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark or e.context_mark
            raise ParseError(f"malformed document: {e.problem}",
                             mark.line + 1 if mark else None, mark.column + 1 if mark else None) from None
        if node is None:
            raise ParseError("empty scenario document", 1, 1)
        if not isinstance(node, yaml.MappingNode):
            raise _err("scenario must be a mapping", node)
        return node

    def value(self, node):
        return self.loader.construct_object(node, deep=True)

    def number(self, node, kind=float):
        v = self.value(node)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise _err(f"expected a number, got {v!r}", node)
        if kind is int and (not float(v).is_integer() or v < 0):
            raise _err(f"expected a nonnegative integer, got {v!r}", node)
        return kind(v)

    def entry(self, node) -> complex:
        if isinstance(node, yaml.SequenceNode):
            if len(node.value) != 2:
                raise _err("complex entries are written [re, im]", node)
            return complex(self.number(node.value[0]), self.number(node.value[1]))
        return complex(self.number(node))

    def matrix(self, node, shape=None) -> np.ndarray:
        if not isinstance(node, yaml.SequenceNode) or not node.value:
            raise _err("expected a matrix as a list of rows", node)
        rows = []
        for r in node.value:
            if not isinstance(r, yaml.SequenceNode):
                raise _err("matrix rows must be lists", r)
            rows.append([self.entry(e) for e in r.value])
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise _err("matrix rows have different lengths", node)
        out = np.array(rows, dtype=complex)
        if shape is not None and out.shape != shape:
            raise _err(f"expected a {shape[0]}x{shape[1]} matrix, got {out.shape[0]}x{out.shape[1]}", node)
        return out

    def matrices(self, node, d, keyword):
        if isinstance(node, yaml.ScalarNode):
            v = self.value(node)
            if v != keyword:
                raise _err(f"expected '{keyword}' or a list of matrices", node)
            return v
        if not isinstance(node, yaml.SequenceNode):
            raise _err("expected a list of matrices", node)
        return [self.matrix(m, (d, d)) for m in node.value]

    def mapping(self, node, keys):
        if not isinstance(node, yaml.MappingNode):
            raise _err("expected a mapping", node)
        out = {}
        for k, v in node.value:
            key = self.value(k)
            if key not in keys:
                raise _err(f"unknown key '{key}'", k)
            out[key] = v
        return out


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    r = _Reader(text)
    root = r.root()
    fields = r.mapping(root, _KEYS)
    for req in ("name", "ambient_dim", "generators_A", "generators_C", "expectation"):
        if req not in fields:
            raise ParseError(f"missing required key '{req}'", root.start_mark.line + 1, root.start_mark.column + 1)
    d = r.number(fields["ambient_dim"], int)
    if d < 1:
        raise _err("ambient_dim must be positive", fields["ambient_dim"])
    kw = {"name": str(r.value(fields["name"])), "ambient_dim": d, "source": source,
          "generators_A": r.matrices(fields["generators_A"], d, "scalars"),
          "generators_C": r.matrices(fields["generators_C"], d, "full")}
    en = fields["expectation"]
    if isinstance(en, yaml.ScalarNode):
        if r.value(en) != "trace":
            raise _err("expectation is 'trace' or a matrix on vectorized elements", en)
        kw["expectation"] = "trace"
    else:
        kw["expectation"] = r.matrix(en, (d * d, d * d))
    if "description" in fields:
        kw["description"] = str(r.value(fields["description"]))
    for key, kind in (("depth", int), ("seed", int), ("tol", float), ("expected_index", float)):
        if key in fields:
            kw[key] = r.number(fields[key], kind)
    partner = "none"
    if "morita" in fields:
        sub = r.mapping(fields["morita"], {"n", "p"})
        if set(sub) != {"n", "p"}:
            raise _err("morita needs n and p", fields["morita"])
        n = r.number(sub["n"], int)
        if n < 1:
            raise _err("n must be positive", sub["n"])
        kw["morita"] = (n, r.matrix(sub["p"], (n * d, n * d)))
        partner = "standard"
    if "partner" in fields:
        val = r.value(fields["partner"])
        if val not in ("standard", "tower", "none"):
            raise _err("partner is 'standard', 'tower' or 'none'", fields["partner"])
        if val == "standard" and "morita" not in fields:
            raise _err("partner 'standard' needs a morita block", fields["partner"])
        partner = val
    kw["partner"] = partner
    if "downward" in fields:
        sub = r.mapping(fields["downward"], {"p", "q"})
        if set(sub) != {"p", "q"}:
            raise _err("downward needs p and q", fields["downward"])
        kw["downward"] = (r.matrix(sub["p"]), r.matrix(sub["q"]))
    return Scenario(**kw)


def builtin_names() -> list:
    files = resources.files(BUILTIN_PACKAGE).iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".yaml"))


def load_scenario(ref: str) -> Scenario:
    """A path to a scenario file or the name of a built-in scenario."""
    path = Path(ref)
    if path.is_file():
        return parse_scenario(path.read_text(), str(path))
    name = ref[:-5] if ref.endswith(".yaml") else ref
    if name in builtin_names():
        text = resources.files(BUILTIN_PACKAGE).joinpath(name + ".yaml").read_text()
        return parse_scenario(text, f"builtin:{name}")
    raise FileNotFoundError(f"no scenario file or built-in named '{ref}'")


def build_inclusion(sc: Scenario, tol: float):
    d = sc.ambient_dim
    C = full_algebra(d) if sc.generators_C == "full" else generate_algebra(d, sc.generators_C, tol)
    A = scalars(d) if sc.generators_A == "scalars" else generate_algebra(d, sc.generators_A, tol)
    if not is_subalgebra(A, C, 1e-7):
        raise ParseError(f"{sc.name}: A is not contained in C")
    if isinstance(sc.expectation, str):
        return trace_expectation(C, A)
    return from_action(C, A, sc.expectation)


# -- pipeline ------------------------------------------------------------------------------------

STAGES = ("build", "pair", "transport", "tower", "linking", "exchange", "upward", "uniqueness",
          "duality", "updown", "paragroup")
_NEEDS = {"build": (), "pair": ("build",), "transport": ("pair",), "tower": ("pair",),
          "linking": ("pair",), "exchange": ("pair",), "upward": ("pair",),
          "uniqueness": ("upward",), "duality": ("upward",), "updown": ("upward",),
          "paragroup": ("pair",)}


def _selected(flt: Optional[str]) -> set:
    if not flt:
        return set(STAGES)
    head = flt.split(".")[0]
    chosen = {s for s in STAGES if fnmatch.fnmatch(s, head) or head in s}
    todo = set()
    stack = list(chosen)
    while stack:
        s = stack.pop()
        if s not in todo:
            todo.add(s)
            stack.extend(_NEEDS[s])
    return todo


def _matches(name: str, flt: Optional[str]) -> bool:
    return not flt or fnmatch.fnmatch(name, flt) or name.startswith(flt) or flt in name


@dataclass
class RunResult:
    scenario: Scenario
    config: RunConfig
    report: CheckReport
    timings: dict = field(default_factory=dict)
    paragroups: dict = field(default_factory=dict)  # side -> ParagroupData
    verdict: object = None

    @property
    def passed(self) -> bool:
        return self.report.passed


def _stage(res: RunResult, name: str, fn, ctx: dict):
    t0 = time.perf_counter()
    sub = CheckReport()
    try:
        fn(ctx, sub)
    except (MoritaLabError, np.linalg.LinAlgError, ValueError, FloatingPointError) as e:
        sub.add_bool("error", False, f"{type(e).__name__}: {e}")
    res.report.merge(sub, f"{name}.")
    res.timings[name] = time.perf_counter() - t0


def _build(ctx, rep):
    sc, cfg = ctx["scenario"], ctx["config"]
    E = with_quasi_basis(build_inclusion(sc, cfg.rank_tol))
    ctx["E"] = E
    rep.merge(verify_expectation(E, cfg.samples, cfg.seed, cfg.check_tol), "expectation.")
    left, right = quasi_basis_violation(E, E.quasi_basis)
    rep.add("quasi_basis_left", left, cfg.check_tol)
    rep.add("quasi_basis_right", right, cfg.check_tol)
    ind = index_of(E)
    rep.add("index_seed_independence", np.linalg.norm(watatani_index(E, seed=cfg.seed + 1) - ind), cfg.check_tol)
    if sc.expected_index is not None:
        rep.add("index_value", np.linalg.norm(ind - sc.expected_index * np.eye(E.d)), cfg.check_tol,
                f"expected {sc.expected_index:g}*1")


def _pair(ctx, rep):
    sc, cfg, E = ctx["scenario"], ctx["config"], ctx["E"]
    if sc.partner == "standard":
        n, p = sc.morita
        M, EB, EX = standard_partner(E, n, p, cfg.rank_tol)
        ctx.update(M=M, EA=E, EB_comp=EB, EX=EX)
        rep.merge(check_standard_form(standard_form(M), cfg.samples, cfg.seed, cfg.check_tol), "standard_form.")
    elif sc.partner == "tower":
        TP = tower_pair(E, cfg.rank_tol)
        ctx.update(M=TP.pair, EA=TP.F2, tower=TP)
    else:
        # the inclusion paired with itself through the trivial corner
        M, EB, EX = standard_partner(E, 1, np.eye(E.d), cfg.rank_tol)
        ctx.update(M=M, EA=E, EB_comp=EB, EX=EX)
    M = ctx["M"]
    EB, EX = transport_expectation(M, ctx["EA"])
    ctx.update(EB_raw=EB, EX=EX, EB=with_quasi_basis(EB))
    rep.merge(check_morita_pair(M, cfg.check_tol))


def _transport(ctx, rep):
    cfg, M = ctx["config"], ctx["M"]
    EA, EB, EX = ctx["EA"], ctx["EB_raw"], ctx["EX"]
    rep.merge(check_transport(M, EB, EX, cfg.samples, cfg.seed, cfg.check_tol))
    left, right = quasi_basis_violation(EB, EB.quasi_basis)
    rep.add("EB_quasi_basis_left", left, cfg.check_tol)
    rep.add("EB_quasi_basis_right", right, cfg.check_tol)
    sc = ctx["scenario"]
    if sc.partner == "standard":
        n, p = sc.morita
        Vc = compression_data(EA, n, p, cfg.rank_tol).V
        formula = Vc.conj().T @ p @ diag_amplify(index_of(EA), n) @ p @ Vc
        fresh = watatani_index(ctx["EB_comp"], seed=cfg.seed)
        rep.add("index_two_ways", np.linalg.norm(formula - fresh), cfg.check_tol)
        comp = ctx["EB_comp"]
        rep.add("EB_matches_compression", max(np.linalg.norm(EB(x) - comp(x)) for x in M.D.basis), cfg.check_tol)
        cl, cr = quasi_basis_violation(comp, comp.quasi_basis)
        rep.add("compressed_quasi_basis_left", cl, cfg.check_tol)
        rep.add("compressed_quasi_basis_right", cr, cfg.check_tol)


def _tower(ctx, rep):
    TP = ctx.get("tower")
    if TP is None:
        return
    cfg, M = ctx["config"], ctx["M"]
    rep.merge(verify_expectation(TP.F2, cfg.samples, cfg.seed, cfg.check_tol), "F2.")
    left, right = quasi_basis_violation(TP.F2, TP.F2.quasi_basis)
    rep.add("F2_quasi_basis_left", left, cfg.check_tol)
    rep.add("F2_quasi_basis_right", right, cfg.check_tol)
    rep.merge(check_bimodule_expectation(TP.G, cfg.samples, cfg.seed, cfg.check_tol), "G.")
    EB, EX = ctx["EB_raw"], ctx["EX"]
    rep.add("EB_equals_F", max(np.linalg.norm(EB(x) - TP.F(x)) for x in M.D.basis), cfg.check_tol)
    rep.add("EX_equals_G", max(np.linalg.norm(EX(y) - TP.G(y)) for y in M.Y.basis), cfg.check_tol)


def _linking(ctx, rep):
    cfg, M = ctx["config"], ctx["M"]
    L = linking_algebra(M)
    rep.merge(check_linking(L, cfg.check_tol))
    EL = linking_expectation(L, ctx["EA"], ctx["EB"], ctx["EX"])
    rep.merge(verify_expectation(EL, cfg.samples, cfg.seed, cfg.check_tol), "expectation.")
    left, right = quasi_basis_violation(EL, EL.quasi_basis)
    rep.add("quasi_basis_left", left, cfg.check_tol)
    rep.add("quasi_basis_right", right, cfg.check_tol)
    diag = _block_diag(index_of(ctx["EA"]), index_of(ctx["EB"]))
    rep.add("index_block_diag", np.linalg.norm(sum(u @ v for u, v in EL.quasi_basis) - diag), cfg.check_tol)
    rep.add("index_fresh", np.linalg.norm(watatani_index(EL, seed=cfg.seed) - diag), cfg.check_tol)


def _exchange(ctx, rep):
    cfg = ctx["config"]
    rep.merge(exchange_identities_check(ctx["M"], ctx["EA"], ctx["EB"], ctx["EX"], cfg.check_tol))


def _upward(ctx, rep):
    cfg = ctx["config"]
    U = upward(ctx["M"], ctx["EA"], ctx["EB"], ctx["EX"], cfg.rank_tol)
    ctx["U"] = U
    rep.merge(check_upward(U, cfg.samples, cfg.seed, cfg.check_tol))


def _uniqueness(ctx, rep):
    cfg, U = ctx["config"], ctx["U"]
    theta = uniqueness_iso(U, U.Y1, U.EY)
    rep.merge(check_uniqueness(U, U.Y1, U.EY, theta, cfg.samples, cfg.seed, cfg.check_tol))
    rep.add("theta_identity", max(np.linalg.norm(theta(w) - w) for w in U.Y1.basis), cfg.check_tol)


def _duality(ctx, rep):
    cfg = ctx["config"]
    if cfg.depth < 2:
        rep.add_bool("skipped", True, "needs depth >= 2")
        return
    U = ctx["U"]
    rep.merge(duality_check(U, next_level(U, cfg.rank_tol), cfg.samples, cfg.seed, cfg.check_tol))


def _updown(ctx, rep):
    sc, cfg = ctx["scenario"], ctx["config"]
    p, q = sc.downward if sc.downward is not None else (None, None)
    rep.merge(updown_relation_check(ctx["U"], p, q, cfg.check_tol, cfg.seed))


def _paragroup(ctx, rep):
    sc, cfg, M = ctx["scenario"], ctx["config"], ctx["M"]
    res = ctx["result"]
    sides = {"left": (M.A, ctx["EA"]), "right": (M.B, ctx["EB"])}
    for side, (A, E) in sides.items():
        T = build_tower(E, cfg.depth, cfg.depth_cap, cfg.ambient_cap, cfg.rank_tol)
        rep.merge(check_tower(T, cfg.check_tol), f"{side}.")
        res.paragroups[side] = relative_commutants(A, T, cfg.seed, cfg.rank_tol)
    P1, P2 = res.paragroups["left"], res.paragroups["right"]
    rep.add_bool("rc_dims_equal", P1.rc_dims == P2.rc_dims, f"{P1.rc_dims} vs {P2.rc_dims}")
    v = compare_paragroups(P1, P2)
    res.verdict = v
    rep.add_bool("compare", v.equal, v.reason)
    if sc.partner == "standard":
        n, p = sc.morita
        *_, crep = commutant_corner_iso(ctx["E"], n, p, cfg.rank_tol)
        rep.merge(crep, "corner_iso.")


_RUNNERS = {"build": _build, "pair": _pair, "transport": _transport, "tower": _tower,
            "linking": _linking, "exchange": _exchange, "upward": _upward, "uniqueness": _uniqueness,
            "duality": _duality, "updown": _updown, "paragroup": _paragroup}


def run_scenario(sc: Scenario, config: Optional[RunConfig] = None) -> RunResult:
    """Run every selected stage; module errors become failed checks."""
    cfg = config or RunConfig(check_tol=sc.tol, seed=sc.seed, depth=sc.depth)
    res = RunResult(sc, cfg, CheckReport())
    ctx = {"scenario": sc, "config": cfg, "result": res}
    todo = _selected(cfg.filter)
    failed = set()
    for name in STAGES:
        if name not in todo:
            continue
        if any(dep in failed for dep in _NEEDS[name]):
            res.report.add_bool(f"{name}.error", False, "skipped: a prerequisite stage failed")
            failed.add(name)
            continue
        _stage(res, name, _RUNNERS[name], ctx)
        if f"{name}.error" in res.report:
            failed.add(name)
    if cfg.filter:
        res.report.checks = {k: c for k, c in res.report.checks.items() if _matches(k, cfg.filter)}
    return res


# -- rendering -----------------------------------------------------------------------------------

def report_dict(res: RunResult) -> dict:
    """Machine-readable report; timings are left out so reruns are byte-identical."""
    checks = []
    for name in sorted(res.report.checks):
        c = res.report.checks[name]
        checks.append({"name": name, "violation": f"{c.violation:.3e}", "threshold": f"{c.threshold:.1e}",
                       "passed": c.passed, "detail": c.detail})
    out = {"scenario": res.scenario.name, "seed": res.config.seed, "depth": res.config.depth,
           "passed": res.passed, "n_checks": len(checks),
           "n_failed": sum(not c["passed"] for c in checks), "checks": checks}
    if res.paragroups:
        out["paragroup"] = {side: {"rc_dims": P.rc_dims, "blocks": [s.blocks for s in P.block_dims],
                                   "inclusions": [m.entries.tolist() for m in P.bratteli]}
                            for side, P in sorted(res.paragroups.items())}
    return out


def report_json(res: RunResult) -> str:
    return json.dumps(report_dict(res), sort_keys=True, indent=2) + "\n"


def report_text(res: RunResult) -> str:
    lines = [f"scenario {res.scenario.name} (seed {res.config.seed}, depth {res.config.depth})",
             str(res.report)]
    for name in STAGES:
        if name in res.timings:
            lines.append(f"  {name}: {res.timings[name]:.2f}s")
    n_fail = len(res.report.failures)
    lines.append(f"{len(res.report.checks)} checks, {n_fail} failed: {'PASS' if res.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def export_bratteli(P: Optional[ParagroupData], out_path, name: str = "bratteli", comment: str = ""):
    text = bratteli_dot(P, name) if P is not None else f'digraph "{name}" {{\n}}\n'
    if comment:
        text = f"// {comment}\n" + text
    Path(out_path).write_text(text)
    return out_path


# -- commands ------------------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    sc = load_scenario(args.file)
    cfg = RunConfig(check_tol=sc.tol, seed=sc.seed, depth=sc.depth).with_overrides(
        check_tol=args.tol, seed=args.seed, depth=args.depth, filter=args.filter)
    res = run_scenario(sc, cfg)
    sys.stdout.write(report_text(res))
    if args.report:
        Path(args.report).write_text(report_json(res))
    if args.dot:
        export_bratteli(res.paragroups.get("left"), args.dot, sc.name)
    return 0 if res.passed else 1


def _cmd_list(args) -> int:
    for name in builtin_names():
        sc = load_scenario(name)
        print(f"{name}: {sc.description}")
    return 0


def _scenario_paragroup(sc: Scenario, depth: int, seed: int) -> ParagroupData:
    E = with_quasi_basis(build_inclusion(sc, RunConfig().rank_tol))
    return relative_commutants(E.target, build_tower(E, depth), seed)


def _cmd_compare(args) -> int:
    sa, sb = load_scenario(args.fileA), load_scenario(args.fileB)
    seed = args.seed or 0
    Pa = _scenario_paragroup(sa, args.depth, seed)
    Pb = _scenario_paragroup(sb, args.depth, seed)
    v = compare_paragroups(Pa, Pb)
    verdict = f"{sa.name} vs {sb.name}: {'isomorphic' if v.equal else 'different'} ({v.reason})"
    print(f"{sa.name} rc_dims {Pa.rc_dims}")
    print(f"{sb.name} rc_dims {Pb.rc_dims}")
    print(verdict)
    if args.report:
        doc = {"a": sa.name, "b": sb.name, "depth": args.depth, "equal": v.equal, "reason": v.reason,
               "permutations": v.permutations, "rc_dims": {"a": Pa.rc_dims, "b": Pb.rc_dims}}
        Path(args.report).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if args.dot:
        Path(args.dot).write_text(f"// {verdict}\n" + bratteli_dot(Pa, sa.name) + bratteli_dot(Pb, sb.name))
    return 0 if v.equal else 1


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="moritalab", description="Verify Morita-equivalent inclusion scenarios.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run the verification pipeline on a scenario")
    v.add_argument("file", help="scenario file or built-in name")
    v.add_argument("--filter", help="only checks whose name matches (glob, prefix or substring)")
    v.add_argument("--seed", type=int)
    v.add_argument("--tol", type=float)
    v.add_argument("--depth", type=int)
    v.add_argument("--report", help="write the JSON report here")
    v.add_argument("--dot", help="write the relative-commutant Bratteli diagram here")
    v.set_defaults(fn=_cmd_verify)
    ls = sub.add_parser("list-builtins", help="list the bundled scenarios")
    ls.set_defaults(fn=_cmd_list)
    c = sub.add_parser("compare", help="compare relative-commutant towers of two scenarios")
    c.add_argument("fileA")
    c.add_argument("fileB")
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("--seed", type=int)
    c.add_argument("--report")
    c.add_argument("--dot")
    c.set_defaults(fn=_cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.fn(args)
    except (ParseError, FileNotFoundError, IsADirectoryError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except MoritaLabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
