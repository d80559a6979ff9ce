"""Command-line entry point ``hiddensym``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error,
3 a numerical solve did not converge.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import List, Sequence

from . import __version__
from . import config as CF
from . import oracle as O
from . import radial as R
from .opalg import catalog as C
from .opalg import verify as V
from .opalg.canonical import format_operator, reduce
from .parser import ExprSyntaxError, format_expr, parse_tree

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3

SCHEMA_ID = "hiddensym-report/1"


class UsageError(Exception):
    pass


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


def _envelope(command: str, cfg: dict, body: dict, passed: bool) -> dict:
    return {"schema": SCHEMA_ID, "version": __version__, "command": command,
            "config": cfg, "passed": passed, **body}


def _table(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _settings(args, cfg) -> V.Settings:
    ocfg = None if args.no_oracle else CF.oracle_config(cfg)
    return V.Settings(oracle=ocfg, step_check=bool(cfg["oracle"]["step_check"]), mutation=args.mutate)


def cmd_verify(args, cfg) -> int:
    if args.list:
        print("\n".join(V.suite_names()))
        print("\nmutations:\n" + "\n".join(f"  {m}" for m in sorted(C.MUTATIONS)))
        return EXIT_OK
    try:
        reports = V.run_suite(args.checks, _settings(args, cfg))
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    passed = all(r.passed for r in reports)
    if args.json:
        body = {"mutation": args.mutate, "reports": [r.as_dict(timings=args.timings) for r in reports]}
        print(_dump(_envelope("verify", cfg, body, passed)))
    else:
        rows = [("check", "verdict", "oracle", "result") + (("time",) if args.timings else ())]
        for r in reports:
            row = (r.name, r.verdict, r.oracle_verdict or "-", "PASS" if r.passed else "FAIL")
            rows.append(row + ((f"{r.wall_time:.2f}s",) if args.timings else ()))
        print(_table(rows))
        for r in reports:
            for c in r.failures():
                print(f"\n{r.name}: {c.label} [{c.kind}]")
                if c.residual:
                    print(f"  residual ({c.n_terms} terms): {c.residual}")
                for o in c.oracle:
                    print(f"  oracle h={o.fd_step:g}: {o.verdict} max {o.max_relative:.2e} "
                          f"aggregate {o.aggregate_relative:.2e}")
        if args.mutate:
            print(f"\nmutation: {args.mutate}")
        failed = [r.name for r in reports if not r.passed]
        print(f"\n{len(reports) - len(failed)}/{len(reports)} passed"
              + (f"; first failure: {failed[0]}" if failed else ""))
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# reduce / oracle
# ---------------------------------------------------------------------------

def cmd_reduce(args, cfg) -> int:
    tree = parse_tree(args.expr)
    res = reduce(tree)
    text = format_operator(res)
    if args.json:
        body = {"input": args.expr, "parsed": format_expr(tree), "canonical": text,
                "n_terms": len(res), "is_zero": res.is_zero()}
        print(_dump(_envelope("reduce", cfg, body, True)))
    else:
        print(text)
    return EXIT_OK


def cmd_oracle(args, cfg) -> int:
    """Numerical comparison of an expression against its canonical form, or against a second expression."""
    tree = parse_tree(args.expr)
    other = parse_tree(args.against) if args.against else reduce(tree)
    ocfg = CF.oracle_config(cfg)
    steps = [ocfg, ocfg.with_step(ocfg.fd_step / 2)] if cfg["oracle"]["step_check"] else [ocfg]
    body = {"input": args.expr, "against": args.against or "canonical form", "n_points": len(ocfg.points)}
    if not args.against and other.is_zero():
        # a relative deviation from an exact zero is meaningless: test the identity instead
        outcomes = [O.check_identity(tree, s) for s in steps]
        body["identity"] = [o.as_dict() for o in outcomes]
        body["checks"] = []
        passed = all(o.passed for o in outcomes)
    else:
        checks = [O.cross_check(tree, other, c) for c in steps]
        body["checks"] = [dict(c.as_dict(), fd_step=s.fd_step) for c, s in zip(checks, steps)]
        passed = all(c.passed for c in checks)
    if args.json:
        print(_dump(_envelope("oracle", cfg, body, passed)))
    else:
        print(f"{args.expr}  vs  {body['against']}  ({len(ocfg.points)} points)")
        if body["checks"]:
            rows = [("fd_step", "max relative deviation", "verdict")]
            rows += [(f"{c['fd_step']:g}", f"{c['max_relative_deviation']:.3e}", c["verdict"])
                     for c in body["checks"]]
            print(_table(rows))
        for o in body.get("identity", []):
            print(f"identity = 0 at h={o['fd_step']:g}: {o['verdict']} (max {o['max_relative_residual']:.2e})")
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def cmd_spectrum(args, cfg) -> int:
    s = cfg["spectrum"]
    count = args.count if args.count is not None else int(s["count"])
    tol = float(s["tolerance"])
    ks = sorted(set(args.k))
    results = []
    for k in ks:
        prob = R.RadialProblem(args.a, k, int(s["nodes"]), float(s["r_min"]), float(s["r_max"]), tol)
        results.append(R.solve_sector(prob, count))
    R.pair_partners(results)
    factor = float(s["partner_factor"])
    by_key = {(lv.k, lv.n_r): lv for r in results for lv in r.levels}
    rows_out, ok = [], True
    for r in results:
        for lv in r.levels:
            problems = []
            if lv.delta > tol:
                problems.append("sommerfeld")
            if lv.partner_energy is not None:
                twin = by_key[(-lv.k, lv.n_r)]
                bound = factor * max(lv.error_estimate, twin.error_estimate)
                if abs(lv.energy - lv.partner_energy) > bound:
                    problems.append("partner")
            if lv.alpha_A2 < -float(s["alpha_tolerance"]):
                problems.append("alpha_A2")
            ok &= not problems
            rows_out.append((lv, problems))
    ground = None
    if any(abs(k) == 1 for k in ks):
        g = min((lv for r in results if abs(r.k) == 1 for lv in r.levels), key=lambda lv: lv.energy)
        ground = {"k": g.k, "n_r": g.n_r, "alpha_A2": float(f"{g.alpha_A2:.6e}"),
                  "passed": abs(g.alpha_A2) <= float(s["alpha_tolerance"])}
        ok &= ground["passed"]
    spurious = sorted({e for r in results for e in r.spurious})
    ok &= not spurious
    if args.json:
        body = {"a": args.a, "k": ks, "count": count,
                "levels": [dict(lv.as_dict(), problems=p) for lv, p in rows_out],
                "ground_state": ground, "spurious": [float(f"{e:.15e}") for e in spurious]}
        print(_dump(_envelope("spectrum", cfg, body, ok)))
    else:
        rows = [("k", "n_r", "E/m", "error", "Sommerfeld", "rel.dev", "partner", "alpha_A2", "status")]
        for lv, p in rows_out:
            rows.append((str(lv.k), str(lv.n_r), f"{lv.energy:.12f}", f"{lv.error_estimate:.1e}",
                         f"{lv.sommerfeld:.12f}", f"{lv.delta:.1e}",
                         "-" if lv.partner_energy is None else f"{lv.partner_energy:.12f}",
                         f"{lv.alpha_A2:.2e}", "ok" if not p else ",".join(p)))
        print(f"a = {args.a}")
        print(_table(rows))
        if ground:
            print(f"\nground state A^2 eigenvalue: {ground['alpha_A2']:.2e} "
                  f"({'ok' if ground['passed'] else 'FAIL'})")
        if spurious:
            print(f"discarded {len(spurious)} unphysical eigenvalue(s)")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# lamb
# ---------------------------------------------------------------------------

def cmd_lamb(args, cfg) -> int:
    power = args.power if args.power is not None else int(cfg["lamb"]["power"])
    lambdas = args.lambdas if args.lambdas else cfg["lamb"]["lambdas"]
    lams = tuple(int(v) for v in lambdas)
    st = _settings(args, cfg)
    strength = next((v for v in lams if v), 1)
    try:
        rep = V.verify_lamb_breaking(power, strength, replace(st, mutation=None), lams)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    norms = {}
    if st.oracle is not None:
        for lam in lams:
            norms[str(lam)] = float(f"{O.residual_norm(V.lamb_commutator(power, lam), st.oracle):.6e}")
    passed = rep.passed
    if args.json:
        body = {"power": power, "lambdas": list(lams), "report": rep.as_dict(timings=args.timings),
                "oracle_norms": norms}
        print(_dump(_envelope("lamb", cfg, body, passed)))
    else:
        print(f"[A2, H + lambda*beta*r^{power}] at lambda = 1:")
        print(f"  {rep.details['residual_lambda_1']}")
        rows = [("lambda", "oracle residual norm")]
        rows += [(k, f"{v:.6e}") for k, v in norms.items()]
        if norms:
            print(_table(rows))
        if "oracle_ratio" in rep.details:
            print(f"ratio at 2*lambda / lambda: {rep.details['oracle_ratio']:.6f}")
        for c in rep.checks:
            print(f"  {'PASS' if c.passed and c.oracle_passed else 'FAIL'}  {c.label}")
        print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_config(args, cfg) -> int:
    # without --json the output is itself a valid config file
    print(_dump(_envelope("config", cfg, {}, True) if args.json else cfg))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--config", metavar="PATH", help="JSON config file")
    common.add_argument("--seed", type=int, help="oracle sample seed")
    common.add_argument("--tolerance", type=float,
                        help="oracle tolerance (spectrum: relative level accuracy)")
    common.add_argument("--points", type=int, help="number of oracle sample points")
    common.add_argument("--timings", action="store_true", help="include wall times (not reproducible)")

    p = argparse.ArgumentParser(prog="hiddensym", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the identity suite")
    v.add_argument("checks", nargs="*", help="check names (default: all)")
    v.add_argument("--list", action="store_true", help="list checks and mutations")
    v.add_argument("--mutate", metavar="NAME", help="inject a coefficient mutation of A2 or H")
    v.add_argument("--no-oracle", action="store_true", help="skip the numerical cross-checks")

    r = sub.add_parser("reduce", parents=[common], help="print the canonical form of an expression")
    r.add_argument("expr")

    o = sub.add_parser("oracle", parents=[common], help="numerical check of an expression")
    o.add_argument("expr")
    o.add_argument("--against", metavar="EXPR", help="compare with this expression instead of the canonical form")

    s = sub.add_parser("spectrum", parents=[common], help="radial Dirac-Coulomb levels")
    s.add_argument("--a", type=float, required=True, help="coupling constant")
    s.add_argument("--k", type=int, nargs="+", default=[-1, 1], help="sector values (default: -1 1)")
    s.add_argument("--count", type=int, help="levels per sector")

    lb = sub.add_parser("lamb", parents=[common], help="symmetry breaking by a beta r^s term")
    lb.add_argument("--power", "-s", type=int, help="exponent s in [-3, 1]")
    lb.add_argument("--lambda", dest="lambdas", type=int, nargs="+", metavar="L",
                    help="integer strengths")
    lb.add_argument("--no-oracle", action="store_true")
    lb.set_defaults(mutate=None)

    sub.add_parser("config", parents=[common], help="print the effective configuration")
    return p


_COMMANDS = {"verify": cmd_verify, "reduce": cmd_reduce, "oracle": cmd_oracle,
             "spectrum": cmd_spectrum, "lamb": cmd_lamb, "config": cmd_config}


def _effective_config(args) -> dict:
    cfg = CF.load(args.config)
    if args.seed is not None:
        cfg["oracle"]["seed"] = args.seed
    if args.points is not None:
        cfg["oracle"]["points"] = args.points
    if args.tolerance is not None:
        cfg["spectrum" if args.command == "spectrum" else "oracle"]["tolerance"] = args.tolerance
    return cfg


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _effective_config(args)
        return _COMMANDS[args.command](args, cfg)
    except ExprSyntaxError as exc:
        print(f"hiddensym: parse error: {exc}", file=sys.stderr)
        if exc.source:
            line = exc.source.splitlines()[exc.line - 1] if exc.source.splitlines() else ""
            print(f"  {line}\n  {' ' * (exc.column - 1)}^", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, CF.ConfigError, O.OracleError, R.SupercriticalError, R.NoBoundStateError,
            ValueError) as exc:
        print(f"hiddensym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except R.ConvergenceError as exc:
        print(f"hiddensym: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
