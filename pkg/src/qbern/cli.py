"""Command line frontend.

Exit codes: 0 success, 1 verification expectations not met, 2 usage error,
3 pole / resource / precision error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import carlitz, degenerate, padic, verify
from .exactcore import VARS, BudgetExceeded, PoleError, RatFunc, rf_evaluate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

FAMILIES = ("carlitz-number", "carlitz-poly", "order-r", "degenerate", "degenerate-order-r")
_NEEDS_R = {"order-r", "degenerate-order-r"}


class UsageError(Exception):
    pass


def family_value(family: str, n: int, r: int | None = None) -> RatFunc:
    if n < 0:
        raise UsageError("n must be >= 0")
    if family in _NEEDS_R:
        if r is None or r < 1:
            raise UsageError(f"family {family} needs --r >= 1")
    if family == "carlitz-number":
        return carlitz.beta_number(n)
    if family == "carlitz-poly":
        return carlitz.beta_poly_closed(n)
    if family == "order-r":
        return carlitz.beta_order_r(n, r)
    if family == "degenerate":
        return degenerate.dbeta(n)
    if family == "degenerate-order-r":
        return degenerate.dbeta_order_r(n, r)
    raise UsageError(f"unknown family {family!r}")


def parse_assignments(items) -> dict:
    """``["q=1", "L=0,Q=1"]`` -> ordered ``{"q": 1, "L": 0, "Q": 1}``."""
    out = {}
    for item in items or []:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            name, sep, value = part.partition("=")
            name = name.strip()
            if not sep or name not in VARS:
                raise UsageError(f"bad evaluation point {part!r}; use e.g. q=1")
            try:
                out[name] = Fraction(value.strip())
            except ValueError as exc:
                raise UsageError(f"bad rational {value!r}") from exc
    return out


def render(f: RatFunc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(f.to_json())
    if fmt == "latex":
        return f.to_latex()
    return f.to_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_compute(args, default_at=None) -> int:
    value = family_value(args.family, args.n, args.r)
    at = parse_assignments(args.at) if args.at else dict(default_at or {})
    value = rf_evaluate(value, at)
    _emit(render(value, args.format) + "\n", args.out)
    return EXIT_OK


def table_entries(family: str, max_n: int, r: int | None = None) -> list[dict]:
    if max_n < 0:
        raise UsageError("--max-n must be >= 0")
    return [
        {"family": family, "n": n, "r": r, "value": family_value(family, n, r).to_text()}
        for n in range(max_n + 1)
    ]


def table_json(family: str, max_n: int, r: int | None = None) -> str:
    return json.dumps(table_entries(family, max_n, r), indent=2) + "\n"


def cmd_table(args) -> int:
    _emit(table_json(args.family, args.max_n, args.r), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    bounds = {}
    for key, attr in (("n", "max_n"), ("m", "m"), ("r", "max_r"), ("j", "max_j")):
        value = getattr(args, attr)
        if value is not None:
            if value < 0:
                raise UsageError(f"bound {key} must be >= 0")
            bounds[key] = value
    if args.identity == "all":
        reports = verify.verify_all(bounds, jobs=args.jobs, term_limit=args.budget_terms)
    elif args.identity in verify.IDENTITY_IDS:
        reports = [verify.verify_identity(args.identity, bounds, term_limit=args.budget_terms)]
    else:
        raise UsageError(f"unknown identity {args.identity!r}")
    _emit(verify.reports_to_json(reports) + "\n", args.out)
    for r in reports:
        mark = "ok" if r.status == verify.expected_status(r) else "UNEXPECTED"
        print(f"{r.identity_id:18s} {r.status:5s} {mark}", file=sys.stderr)
    if any(r.status == "error" for r in reports):
        return EXIT_RESOURCE
    return EXIT_OK if verify.suite_ok(reports) else EXIT_FAIL


def padic_report(p, precision, levels, n, r=None, lam=Fraction(0), x=0) -> dict:
    cfg = padic.QConfig(p=p, K=precision, lambda_val=Fraction(lam), x_val=x)
    if r is None or r == 1:
        results = padic.check_dbeta_integral(n, cfg, levels)
    else:
        if lam != 0:
            raise UsageError("order-r p-adic check is lambda-free; drop --lambda")
        results = [padic.check_order_r(n, r, cfg, N) for N in levels]
    return {
        "n": n,
        "r": r if r is not None else 1,
        "p": p,
        "K": precision,
        "lambda": str(Fraction(lam)),
        "x": x,
        "levels": [res.as_dict() for res in results],
        "nondecreasing": padic.convergence_ok(results),
        "exact": all(res.exact for res in results),
    }


def cmd_padic(args) -> int:
    try:
        levels = [int(v) for v in args.levels.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --levels {args.levels!r}") from exc
    if not levels or min(levels) < 0:
        raise UsageError("--levels needs nonnegative integers")
    if not padic.is_prime(args.p) or args.p == 2:
        raise UsageError(f"--p must be an odd prime, got {args.p}")
    if args.n < 0 or (args.r is not None and args.r < 1) or args.x < 0:
        raise UsageError("need n >= 0, r >= 1, x >= 0")
    try:
        lam = Fraction(args.lam)
    except ValueError as exc:
        raise UsageError(f"bad --lambda {args.lam!r}") from exc
    if lam.denominator % args.p == 0:
        raise UsageError("--lambda must be a p-adic integer")
    report = padic_report(args.p, args.precision, levels, args.n, args.r, lam, args.x)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def _common(suppress: bool) -> argparse.ArgumentParser:
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "latex"),
                        **(kw or {"default": "plain"}))
    common.add_argument("--out", metavar="PATH", **(kw or {"default": None}))
    common.add_argument("--jobs", type=int, metavar="N",
                        **(kw or {"default": os.cpu_count() or 1}))
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbern",
        description="Exact Carlitz and degenerate Carlitz q-Bernoulli computations.",
        parents=[_common(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    def family_args(p):
        p.add_argument("--family", choices=FAMILIES, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--at", action="append", metavar="VAR=VALUE",
                       help="evaluate (via limits) at q, L or Q; repeatable")

    family_args(sub.add_parser("compute", parents=[common], help="compute one value"))
    family_args(sub.add_parser("limit", parents=[common],
                               help="compute with --at defaulting to q=1"))

    p = sub.add_parser("verify", parents=[common], help="run identity checks")
    p.add_argument("--identity", default="all",
                   help="identity id (" + ", ".join(verify.IDENTITY_IDS) + ") or 'all'")
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="largest m for T8")
    p.add_argument("--max-r", type=int, default=None)
    p.add_argument("--max-j", type=int, default=None)
    p.add_argument("--budget-terms", type=int,
                   default=int(os.environ["QBERN_BUDGET_TERMS"])
                   if os.environ.get("QBERN_BUDGET_TERMS") else None)

    p = sub.add_parser("table", parents=[common], help="write a JSON table of values")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--r", type=int, default=None)

    p = sub.add_parser("padic", parents=[common], help="p-adic Riemann-sum convergence")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--precision", type=int, default=15)
    p.add_argument("--levels", default="2,4,6")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--lambda", dest="lam", default="0")
    p.add_argument("--x", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    handlers = {
        "compute": cmd_compute,
        "limit": lambda a: cmd_compute(a, default_at={"q": Fraction(1)}),
        "verify": cmd_verify,
        "table": cmd_table,
        "padic": cmd_padic,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"qbern: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PoleError, BudgetExceeded, padic.PrecisionError) as exc:
        print(f"qbern: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
