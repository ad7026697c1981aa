"""genus2glue command line: construct, verify, tower, example1.

Exit codes: 0 all checks pass, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ec import DEFAULT_BUDGET
from .errors import (
    AssumptionViolated,
    Genus2GlueError,
    InvalidField,
    InvalidKernel,
    InvalidSpecialization,
    NotFound,
    RBoundViolated,
    SingularCurve,
)
from .ff import field_create
from .report import (
    SCHEMA,
    CurveRegistry,
    VerificationReport,
    construct,
    curve_record,
    parse_element,
    run_example1,
    verify_record,
)
from .towers import group_lemma_suite, tower_descriptor

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
INPUT_ERRORS = (
    AssumptionViolated, InvalidField, InvalidKernel, InvalidSpecialization,
    NotFound, RBoundViolated, SingularCurve, ValueError,
)


def _emit(doc: dict, args) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
    sys.stdout.write(text)
    if getattr(args, "figures", None):
        from .plotting import render_figures

        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        for path in render_figures(doc, out):
            print(f"figure: {path}", file=sys.stderr)


def cmd_construct(args) -> int:
    E, iso, C = construct(args.p, args.q_exp, args.isogeny, args.lam, args.auto, args.seed)
    rec = curve_record(C.field, E, iso, C)
    reg = CurveRegistry(args.registry)
    stored = reg.append(rec)
    _emit({"schema": SCHEMA, "record": stored, "model": C.to_json(), "registry": str(reg.path)}, args)
    return EXIT_PASS


def _finish(rep: VerificationReport, args) -> int:
    doc = rep.to_json(include_timing=args.timing)
    _emit(doc, args)
    return EXIT_PASS if rep.status == "pass" else EXIT_FAIL


def cmd_verify(args) -> int:
    reg = CurveRegistry(args.registry)
    bad = reg.integrity()
    if bad:
        print(f"registry lines {bad} fail digest verification", file=sys.stderr)
        return EXIT_INPUT
    rec = reg.get(args.id)
    rep = verify_record(rec, args.suite, args.budget)
    reg.add_report(rec["id"], rep)
    return _finish(rep, args)


def cmd_example1(args) -> int:
    F = field_create(args.p, args.q_exp)
    t0 = None if args.t0 is None else parse_element(F, args.t0)
    rep = VerificationReport({"suite": "example1", "p": args.p, "q": F.q, "budget": args.budget,
                              "t0": None if t0 is None else F.digits(t0)})
    run_example1(rep, F, args.budget, t0)
    if not rep.checks or rep.checks[0].status == "skipped":
        _emit(rep.to_json(), args)
        return EXIT_INPUT
    return _finish(rep, args)


def cmd_tower(args) -> int:
    desc = tower_descriptor(args.p, args.N, args.t, args.r)
    tower = desc.to_json()
    lemmas = group_lemma_suite(args.criterion_max_n)
    top = tower["orders"][-1]
    tower["order_summary"] = f"{top[:12]}... ({len(top)} digits)"
    doc = {"schema": SCHEMA, "tower": tower, "group_lemmas": lemmas, "status": "pass" if lemmas["pass"] else "fail"}
    _emit(doc, args)
    return EXIT_PASS if lemmas["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genus2glue", description=__doc__.splitlines()[0])
    ap.add_argument("--registry", default=None, help="registry file (default $GENUS2GLUE_REGISTRY or ./registry.jsonl)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="glue two Legendre curves and register the result")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--q-exp", type=int, default=1)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda", dest="lam", help="integer code or comma-separated base-p digits")
    g.add_argument("--auto", action="store_true", help="search for a valid lambda")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--isogeny", default="frob:1", help="frob:k or velu:l")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="run a verification suite on a registered curve")
    v.add_argument("--id", required=True)
    v.add_argument("--suite", choices=["core", "covers", "example1", "all"], default="core")
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    v.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identical output)")
    v.add_argument("--figures", metavar="DIR", help="also write report.json and PNG figures into DIR")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tower", help="tower degrees, orders, Kummer data and the group lemmas")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--N", type=int, required=True)
    t.add_argument("--t", type=int, required=True)
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--criterion-max-n", type=int, default=5, help="largest n for the exhaustive S_n check (<= 6)")
    t.add_argument("--figures", metavar="DIR")
    t.set_defaults(func=cmd_tower)

    e = sub.add_parser("example1", help="compare the explicit sextic with the glued curve")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--q-exp", type=int, required=True)
    e.add_argument("--t0", help="integer code or digits; default: smallest admissible")
    e.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    e.add_argument("--timing", action="store_true")
    e.add_argument("--figures", metavar="DIR")
    e.set_defaults(func=cmd_example1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Genus2GlueError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
