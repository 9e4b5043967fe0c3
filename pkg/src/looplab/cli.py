"""Batch command-line front door.

Subcommands: ``factor`` (run the pipeline and write a certificate),
``verify`` (independently re-check a certificate file), ``classify``
(diagram-automorphism orbit classification), and ``suite`` (the seeded
identity demo suites).  All stdout output is a single JSON document; the
exit-code contract is fixed for scripting:

    factor:   0 verified certificate written, 1 parse error,
              2 big-cell consistency failure, 3 indeterminate precision
    verify:   0 accepted, 1 schema violation, 4 rejected
    classify: 0 ok, 1 invalid diagram or automorphism
    suite:    0 all cases pass, 4 some case failed

The LOOPLAB_PREC environment variable overrides the default working
precision of 32; --precision overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .errors import (
    ConstraintViolation,
    IndeterminatePrecision,
    InternalConsistencyError,
    LoopLabError,
    NotInBigCell,
    ParseError,
    SchemaError,
)
from .factorization import (
    GROUP_RES_SL2,
    certificate_from_document,
    check_membership,
    factor_loop_element,
    verify_certificate,
)
from .groups import GROUP_SL2, GROUP_SU3, GroupElement
from .literals import parse_diagram, parse_entry, parse_matrix_strings, parse_ring
from .rootdatum import classify_orbits, datum_make, named_automorphism
from .rings import DEFAULT_PRECISION
from .suites import SUITES

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_BIG_CELL = 2
EXIT_INDETERMINATE = 3
EXIT_REJECTED = 4

MIN_PRECISION = 4


@dataclass
class RunConfig:
    """Resolved options of one invocation; the seed is echoed in outputs."""

    command: str
    ring: str = ""
    precision: int = DEFAULT_PRECISION
    group: str = ""
    input_text: str = ""
    output: str = ""
    seed: int = 0
    variable: str = "t"
    ext_degree: int = 0

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise LoopLabError(f"precision must be at least {MIN_PRECISION}")


def _default_precision(args):
    if args.precision is not None:
        return args.precision
    env = os.environ.get("LOOPLAB_PREC")
    if env:
        try:
            return int(env)
        except ValueError:
            raise LoopLabError(f"LOOPLAB_PREC is not an integer: {env!r}") from None
    return DEFAULT_PRECISION


def _emit(payload):
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _fail(command, code, message, seed=0, **extra):
    _emit({"command": command, "ok": False, "error": message, "seed": seed, **extra})
    return code


def cmd_factor(args):
    try:
        cfg = RunConfig(
            command="factor",
            ring=args.ring,
            precision=_default_precision(args),
            group=args.group,
            input_text=args.input if args.input is not None else "",
            output=args.output,
            seed=args.seed,
            variable=args.variable or ("u" if args.group == GROUP_RES_SL2 else "t"),
            ext_degree=args.ext_degree,
        )
    except LoopLabError as e:
        return _fail("factor", EXIT_PARSE, str(e), args.seed)
    try:
        if args.input_file:
            with open(args.input_file, encoding="utf-8") as fh:
                cfg.input_text = fh.read()
        if not cfg.input_text.strip():
            raise ParseError(cfg.input_text, 0, "empty input element")
        ring = parse_ring(cfg.ring)
        cells = parse_matrix_strings(cfg.input_text)
        mgroup = GROUP_SL2 if cfg.group == GROUP_RES_SL2 else cfg.group
        dim = 2 if mgroup == GROUP_SL2 else 3
        if len(cells) != dim:
            raise ParseError(cfg.input_text, 0, f"{cfg.group} expects a {dim}x{dim} matrix")
        quad = mgroup == GROUP_SU3
        entries = [[parse_entry(c, ring, cfg.variable, quad) for c in row] for row in cells]
        x = GroupElement(mgroup, entries)
        if not check_membership(x):
            raise ParseError(cfg.input_text, 0,
                             "input element fails its group membership predicate")
    except ParseError as e:
        sys.stderr.write(e.diagnostic() + "\n")
        return _fail("factor", EXIT_PARSE, str(e), cfg.seed)
    except (LoopLabError, OSError) as e:
        return _fail("factor", EXIT_PARSE, str(e), cfg.seed)
    try:
        cert = factor_loop_element(x, cfg.group, prec=cfg.precision,
                                   ext_degree=cfg.ext_degree)
    except (NotInBigCell, InternalConsistencyError) as e:
        return _fail("factor", EXIT_BIG_CELL, str(e), cfg.seed)
    except IndeterminatePrecision as e:
        return _fail("factor", EXIT_INDETERMINATE, str(e), cfg.seed)
    except ConstraintViolation as e:
        return _fail("factor", EXIT_PARSE, str(e), cfg.seed)
    text = cert.to_text()
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    _emit({
        "command": "factor",
        "ok": True,
        "seed": cfg.seed,
        "ring": cfg.ring,
        "group": cfg.group,
        "precision": cfg.precision,
        "factors": len(cert.factors),
        "certificate": cfg.output or None,
        **({} if cfg.output else {"document": cert.document()}),
    })
    return EXIT_OK


def cmd_verify(args):
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        return _fail("verify", EXIT_PARSE, f"cannot read certificate: {e}", args.seed)
    try:
        certificate_from_document(doc)
        report = verify_certificate(doc, seed=args.seed)
    except SchemaError as e:
        return _fail("verify", EXIT_PARSE, str(e), args.seed)
    payload = {
        "command": "verify",
        "ok": report.accepted,
        "seed": args.seed,
        "certificate": args.certificate,
        **report.to_json(),
    }
    if not report.accepted:
        payload["located_defect"] = report.failures()[0].name
    _emit(payload)
    return EXIT_OK if report.accepted else EXIT_REJECTED


def cmd_classify(args):
    try:
        letter, rank, aut_name = parse_diagram(args.diagram)
        datum = datum_make(letter, rank)
        aut = named_automorphism(datum, aut_name)
        cls = classify_orbits(datum, aut)
    except ParseError as e:
        sys.stderr.write(e.diagnostic() + "\n")
        return _fail("classify", EXIT_PARSE, str(e), args.seed)
    except LoopLabError as e:
        return _fail("classify", EXIT_PARSE, str(e), args.seed)
    _emit({
        "command": "classify",
        "ok": True,
        "seed": args.seed,
        "diagram": args.diagram,
        "orbits": [
            {
                "roots": [f"a{i + 1}" for i in orbit],
                "kind": kind,
                "dispatch": dispatch,
            }
            for orbit, kind, dispatch in zip(cls.orbits, cls.kinds, cls.dispatch())
        ],
    })
    return EXIT_OK


def cmd_suite(args):
    try:
        precision = _default_precision(args)
        if precision < MIN_PRECISION:
            raise LoopLabError(f"precision must be at least {MIN_PRECISION}")
        runner = SUITES[args.which]
        kwargs = {"seed": args.seed, "count": args.count}
        if args.which in ("sl2", "su3-field", "artinian"):
            kwargs["prec"] = precision
        if args.ring:
            if args.which == "artinian":
                kwargs["ring"] = args.ring
            else:
                kwargs["rings"] = (args.ring,)
        result = runner(**kwargs)
    except LoopLabError as e:
        return _fail("suite", EXIT_PARSE, str(e), args.seed)
    _emit({"command": "suite", "ok": result.passed, **result.to_json()})
    return EXIT_OK if result.passed else EXIT_REJECTED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="looplab",
        description="factor loop-group elements into unipotent matrices over "
                    "truncated Laurent series and verify the certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", help="factor an element and write a certificate")
    p.add_argument("--group", required=True, choices=[GROUP_SL2, GROUP_SU3, GROUP_RES_SL2])
    p.add_argument("--ring", required=True, help='ring descriptor, e.g. "Q[e]/(e^2)"')
    p.add_argument("--input", help='matrix literal, e.g. "[[1+e,1],[e,1]]"')
    p.add_argument("--input-file", help="file containing the matrix literal")
    p.add_argument("--output", default="", help="certificate path (stdout when omitted)")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--variable", default="", help="series variable (default t; u for res_sl2)")
    p.add_argument("--ext-degree", type=int, default=0,
                   help="tame extension degree for res_sl2 (u^e = t)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_factor)

    p = sub.add_parser("verify", help="independently re-check a certificate file")
    p.add_argument("--certificate", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("classify", help="classify diagram-automorphism orbits")
    p.add_argument("--diagram", required=True, help='e.g. "A4:flip", "D4:rot3", "E7:id"')
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("suite", help="run a seeded identity demo suite")
    p.add_argument("--which", required=True, choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--ring", default="", help="override the suite's ring(s)")
    p.add_argument("--precision", type=int, default=None)
    p.set_defaults(fn=cmd_suite)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
