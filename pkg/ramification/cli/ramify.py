#!/usr/bin/env python
# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Command line interface: classify Kummer extensions, run the verification
suites and scan defect families.

    ramify classify --p 3 --h "z"
    ramify verify all --p 3 --with-u --h "1 + u*z" --samples 50
    ramify defect-scan family.json

Exit codes: classify returns 2 for a trivial extension, 3 for unparsable input
and 4 when the best-h loop hits its cap. verify returns 1 when a suite fails.
Misconfiguration gives 5 everywhere and a malformed family file 3.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from ramification.algebra.expr import eval_expr
from ramification.algebra.ext import Extension
from ramification.algebra.fields import FieldDesc, make_field
from ramification.classify import IterationCap, NotInA, ZeroH, classify
from ramification.verify.defectlab import FamilyStageError, MalformedFamily, family_scan, load_family
from ramification.verify.theorems import SUITES, run_suite

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__maintainer__ = "Materials Virtual Lab"
__email__ = "ongsp@eng.ucsd.edu"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)

SCHEMA = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_TRIVIAL = 2
EXIT_INPUT = 3
EXIT_ITERATION_CAP = 4
EXIT_CONFIG = 5


class ConfigError(ValueError):
    """Invalid command line configuration."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(message)


def _emit(payload: dict, output: str) -> None:
    if output == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2))
        return
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            print(f"{key}:")
            for k in sorted(value):
                if not k.startswith("@"):
                    print(f"  {k}: {value[k]}")
        elif isinstance(value, list):
            print(f"{key}:")
            for item in value:
                print(f"  - {item}")
        else:
            print(f"{key}: {value}")


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _field(args):
    if args.p is None:
        raise ConfigError("--p is required.")
    if args.tower < 0:
        raise ConfigError("--tower must be non-negative.")
    try:
        return make_field(FieldDesc(args.p, args.with_u, args.tower))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _report_payload(report, args) -> dict:
    d = report.as_dict()
    if args.w_normalized:
        d["w_normalized"] = report.w_normalized()
    return d


def cmd_classify(args) -> int:
    """
    Classify the extension given by --h and print its report.
    """
    fld = _field(args)
    if args.h is None:
        raise ConfigError("--h is required.")
    try:
        h = eval_expr(fld, args.h)
        report = classify(fld, h, max_iter=args.max_iter)
    except NotInA as exc:
        return _fail(EXIT_TRIVIAL, f"trivial extension: {exc}")
    except IterationCap as exc:
        return _fail(EXIT_ITERATION_CAP, str(exc))
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(EXIT_INPUT, f"invalid h {args.h!r}: {exc}")
    _emit({"command": "classify", "report": _report_payload(report, args)}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    """
    Run one or all verification suites on the extension given by --h.
    """
    fld = _field(args)
    if args.h is None:
        raise ConfigError("--h is required.")
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1.")
    try:
        h = eval_expr(fld, args.h)
        report = classify(fld, h, max_iter=args.max_iter)
    except (ValueError, ZeroDivisionError, RuntimeError) as exc:
        raise ConfigError(f"h = {args.h!r} does not define an extension: {exc}") from exc
    e = Extension(fld, h, report)
    names = SUITES if args.theorem == "all" else (args.theorem,)
    results = [run_suite(name, e, args.samples, args.seed, args.n_jobs) for name in names]
    passed = all(r.passed for r in results)
    payload = {
        "command": "verify",
        "pass": passed,
        "report": _report_payload(report, args),
        "results": [r.as_dict() for r in results],
    }
    if args.output == "text":
        payload["results"] = [f"{r.theorem}: {'pass' if r.passed else 'FAIL'}" for r in results]
        for r in results:
            for failure in r.failures:
                print(f"{r.theorem}: {failure}", file=sys.stderr)
    _emit(payload, args.output)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_defect_scan(args) -> int:
    """
    Scan a family document and print its defect certificate.
    """
    try:
        spec = load_family(args.family)
        cert = family_scan(spec, max_iter=args.max_iter, n_jobs=args.n_jobs)
    except FamilyStageError as exc:
        return _fail(EXIT_INPUT, f"stage {exc.stage} failed: {exc}")
    except (MalformedFamily, OSError, ValueError) as exc:
        return _fail(EXIT_INPUT, f"malformed family file {args.family}: {exc}")
    _emit({"command": "defect-scan", "certificate": cert.as_dict()}, args.output)
    return EXIT_OK


def _parser() -> _ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="The prime p.")
    common.add_argument("--with-u", action="store_true", help="Adjoin the transcendental u.")
    common.add_argument("--tower", type=int, default=0, help="Tower level n, adjoining s = p^(1/p^n).")
    common.add_argument("--h", help='Kummer element, e.g. "1 + u*z".')
    common.add_argument("--samples", type=int, default=100, help="Samples per suite.")
    common.add_argument("--seed", type=int, default=0, help="Seed of the samplers.")
    common.add_argument("--max-iter", type=int, default=200, help="Cap of the best-h loop.")
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--w-normalized", action="store_true", help="Add integer normalized invariants.")
    common.add_argument("--n-jobs", type=int, default=1, help="joblib workers for sampled suites.")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _ArgumentParser(
        prog="ramify",
        description="Ramification invariants of degree-p Kummer extensions.",
        epilog="Author: Materials Virtual Lab",
    )
    subparsers = parser.add_subparsers(dest="command")

    p_classify = subparsers.add_parser("classify", parents=[common], help="Classify an extension.")
    p_classify.set_defaults(func=cmd_classify)

    p_verify = subparsers.add_parser("verify", parents=[common], help="Run verification suites.")
    p_verify.add_argument("theorem", choices=(*SUITES, "all"))
    p_verify.set_defaults(func=cmd_verify)

    p_scan = subparsers.add_parser("defect-scan", parents=[common], help="Scan a defect family.")
    p_scan.add_argument("family", help="Family document (JSON or YAML).")
    p_scan.set_defaults(func=cmd_defect_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Entry point of the ramify script.
    """
    try:
        args = _parser().parse_args(argv)
        if args.command is None:
            raise ConfigError("A command is required: classify, verify or defect-scan.")
        if args.verbose:
            logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO)
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, f"ramify: {exc}")


if __name__ == "__main__":
    sys.exit(main())
