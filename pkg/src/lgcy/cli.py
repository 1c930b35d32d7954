"""Command-line front door.

Subcommands: iseries, pf-check, mirror-map, statespace, moduli, connect,
monodromy, yukawa, verify-all.  Identical inputs produce byte-identical JSON
(sorted keys, canonical "p/q" rationals); exact outputs carry "exact": true
and numeric ones an explicit "digits" field.  A JSON configuration file may
supply any long-option value (same names as the flags, e.g. {"case":
"cubic33", "digits": 40}); explicit flags win.  Exit codes: 0 success, 1
computation-level invariant violation (structured error report on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .continuation import (
    ConditioningError,
    Path,
    PathError,
    PrecisionContext,
    connection_matrix,
    monodromy,
)
from .ifunc import i_gw, i_hybrid
from .mirror import closed_form_crosscheck, mirror_data
from .moduli import TopologicalType, coarse_degree, n_theta, selection_rule, virtual_dimension
from .pf import operator_for, pf_check, yukawa
from .ring import (
    IntegralityError,
    NonUnitError,
    StructureError,
    UnsupportedCaseError,
    format_rational,
    get_case,
)
from .series import FreqSeries
from .statespace import correspondence_check
from . import verify as verify_mod

import mpmath as mp

_COMPUTE_ERRORS = (
    StructureError,
    UnsupportedCaseError,
    IntegralityError,
    NonUnitError,
    PathError,
    ConditioningError,
    ZeroDivisionError,
    ValueError,
)


class _UsageError(Exception):
    pass


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _series_csv(series: FreqSeries) -> str:
    lines = ["f,sector,z_exp,H_power,value"]
    for f, h in series.support():
        coeff = series.terms[(f, h)]
        for e in sorted(coeff.terms):
            for power, value in enumerate(coeff.terms[e].coeffs):
                if value != 0:
                    lines.append(
                        f"{format_rational(f)},{h},{e},{power},{format_rational(value)}"
                    )
    return "\n".join(lines) + "\n"


def _emit(args, payload, csv_text=None, pretty_text=None) -> None:
    fmt = args.format
    if fmt == "json":
        text = _canonical_json(payload)
    elif fmt == "csv":
        if csv_text is None:
            raise _UsageError("this subcommand has no CSV table form")
        text = csv_text
    else:
        text = pretty_text if pretty_text is not None else _canonical_json(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise _UsageError(
            "missing required option(s): " + ", ".join(f"--{n}" for n in missing)
        )


# ------------------------------------------------------------- subcommands


def _cmd_iseries(args) -> int:
    _require(args, "case", "side", "order")
    case = get_case(args.case)
    series = (
        i_gw(case, args.order) if args.side == "gw" else i_hybrid(case, args.order)
    )
    payload = series.to_json_dict()
    payload["exact"] = True
    _emit(args, payload, csv_text=_series_csv(series))
    return 0


def _cmd_pf_check(args) -> int:
    _require(args, "case", "side", "order")
    case = get_case(args.case)
    op = operator_for(case.name, args.side)
    series = (
        i_gw(case, args.order) if args.side == "gw" else i_hybrid(case, args.order)
    )
    report = pf_check(op, series)
    payload = report.to_json_dict()
    payload["exact"] = True
    pretty = (
        f"operator {report.operator}: residual "
        f"{'ZERO' if report.is_zero else 'NONZERO'} through frequency "
        f"{format_rational(report.max_verified_frequency)}\n"
    )
    _emit(args, payload, pretty_text=pretty)
    return 0 if report.is_zero else 1


def _cmd_mirror_map(args) -> int:
    _require(args, "case", "side", "order")
    case = get_case(args.case)
    series = (
        i_gw(case, args.order) if args.side == "gw" else i_hybrid(case, args.order)
    )
    data = mirror_data(series)
    payload = data.to_json_dict()
    if args.numeric_check:
        if args.side != "hybrid":
            raise _UsageError("--numeric-check applies to the hybrid side")
        report = closed_form_crosscheck(
            series, n_terms=args.terms, digits=args.digits
        )
        payload["numeric_check"] = report.to_json_dict()
        if not report.all_within_budget:
            _emit(args, payload)
            return 1
    _emit(args, payload)
    return 0


def _cmd_statespace(args) -> int:
    _require(args, "case")
    report = correspondence_check(get_case(args.case))
    payload = report.to_json_dict()
    payload["exact"] = True
    pretty = (
        f"case {report.case_name}: chi={report.chi}, h21={report.h21}, "
        f"middle={report.middle_dimension}, match={report.match}\n"
    )
    _emit(args, payload, pretty_text=pretty)
    return 0 if report.match else 1


def _parse_multiplicities(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def _cmd_moduli(args) -> int:
    _require(args, "case")
    case = get_case(args.case)
    theta = TopologicalType(
        args.genus, args.beta, _parse_multiplicities(args.multiplicities)
    )
    rows: list[dict] = []
    if args.query == "selection":
        rows.append({"selected": selection_rule(case, theta)})
    elif args.query == "degree":
        rows.append(coarse_degree(case, theta, args.bundle).to_json_dict())
    elif args.query == "ntheta":
        rows.append({"n_theta": n_theta(case, theta)})
    elif args.query == "vdim":
        rows.append({"virtual_dimension": format_rational(virtual_dimension(case, theta))})
    payload = {
        "case": case.name,
        "genus": theta.genus,
        "beta": theta.degree,
        "multiplicities": list(theta.multiplicities),
        "query": args.query,
        "result": rows[0],
        "exact": True,
    }
    csv_lines = ["key,value"] + [f"{k},{v}" for k, v in rows[0].items()]
    _emit(args, payload, csv_text="\n".join(csv_lines) + "\n")
    return 0


def _cmd_connect(args) -> int:
    _require(args, "case")
    case = get_case(args.case)
    ctx = PrecisionContext(digits=args.digits)
    path = Path.parse(args.path) if args.path else None
    result = connection_matrix(case, ctx, path)
    _emit(args, result.to_json_dict())
    return 0


def _cmd_monodromy(args) -> int:
    _require(args, "case")
    case = get_case(args.case)
    ctx = PrecisionContext(digits=args.digits)
    matrix = monodromy(case, ctx, args.loop)
    payload = {
        "case": case.name,
        "loop": args.loop,
        "digits": args.digits,
        "budget": ctx.budget,
        "matrix": [
            [
                {"re": mp.nstr(x.real, args.digits), "im": mp.nstr(x.imag, args.digits)}
                for x in row
            ]
            for row in matrix
        ],
    }
    _emit(args, payload)
    return 0


def _cmd_yukawa(args) -> int:
    _require(args, "case")
    result = yukawa(get_case(args.case), n_max=args.nmax)
    payload = result.to_json_dict()
    csv_lines = ["e,n_e"] + [
        f"{e},{n}" for e, n in sorted(result.instanton.items())
    ]
    pretty = (
        f"case {result.case_name}: degree {result.degree}, pole at "
        f"{format_rational(result.pole)}\n"
        + "".join(f"  n_{e} = {n}\n" for e, n in sorted(result.instanton.items()))
    )
    _emit(args, payload, csv_text="\n".join(csv_lines) + "\n", pretty_text=pretty)
    return 0


def _cmd_verify_all(args) -> int:
    results = verify_mod.run_all(digits=args.digits)
    for res in results:
        print(res.line())
    payload = {
        "criteria": [r.to_json_dict() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(_canonical_json(payload))
    return 0 if payload["all_passed"] else 1


# ------------------------------------------------------------------ parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgcy",
        description="Exact genus-zero LG/CY correspondence computations",
    )
    parser.add_argument("--config", help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, digits=False):
        p.add_argument("--case", choices=["cubic33", "quadric2222", "quintic"])
        p.add_argument("--format", choices=["json", "csv", "pretty"])
        p.add_argument("--output")
        if digits:
            p.add_argument("--digits", type=int)

    p = sub.add_parser("iseries", help="generate an I-series")
    common(p)
    p.add_argument("--side", choices=["gw", "hybrid"])
    p.add_argument("--order", type=int)
    p.set_defaults(func=_cmd_iseries)

    p = sub.add_parser("pf-check", help="annihilation certificate")
    common(p)
    p.add_argument("--side", choices=["gw", "hybrid"])
    p.add_argument("--order", type=int)
    p.set_defaults(func=_cmd_pf_check)

    p = sub.add_parser("mirror-map", help="omegas, mirror map, cone slice")
    common(p, digits=True)
    p.add_argument("--side", choices=["gw", "hybrid"])
    p.add_argument("--order", type=int)
    p.add_argument("--numeric-check", action="store_true", default=None)
    p.add_argument("--terms", type=int)
    p.set_defaults(func=_cmd_mirror_map)

    p = sub.add_parser("statespace", help="graded state-space match")
    common(p)
    p.set_defaults(func=_cmd_statespace)

    p = sub.add_parser("moduli", help="selection rule / degrees / dimensions")
    p.add_argument(
        "query", choices=["selection", "degree", "ntheta", "vdim"]
    )
    common(p)
    p.add_argument("--genus", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--multiplicities", help='comma list, e.g. "1,2,1"')
    p.add_argument("--bundle", type=int, help="bundle index for the degree query")
    p.set_defaults(func=_cmd_moduli)

    p = sub.add_parser("connect", help="CY<->LG connection matrix")
    common(p, digits=True)
    p.add_argument("--path", help='semicolon waypoints "re+imj;..."')
    p.set_defaults(func=_cmd_connect)

    p = sub.add_parser("monodromy", help="loop transport matrix")
    common(p, digits=True)
    p.add_argument("--loop", choices=["origin", "conifold", "infinity"])
    p.set_defaults(func=_cmd_monodromy)

    p = sub.add_parser("yukawa", help="coupling and instanton numbers")
    common(p)
    p.add_argument("--nmax", type=int)
    p.set_defaults(func=_cmd_yukawa)

    p = sub.add_parser("verify-all", help="run the full acceptance suite")
    common(p, digits=True)
    p.set_defaults(func=_cmd_verify_all)

    return parser


_DEFAULTS = {
    "format": "json",
    "order": 20,
    "digits": 40,
    "genus": 0,
    "beta": 0,
    "multiplicities": "",
    "bundle": 0,
    "nmax": 5,
    "terms": 10,
    "loop": "origin",
    "numeric_check": False,
}


def _apply_config(args: argparse.Namespace) -> None:
    config = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise _UsageError("config file must hold a JSON object")
    for key, value in config.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)
    for key, value in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except _UsageError as exc:
        parser.exit(2, f"usage error: {exc}\n")
    except _COMPUTE_ERRORS as exc:
        sys.stderr.write(
            _canonical_json(
                {"error": type(exc).__name__, "message": str(exc)}
            )
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
