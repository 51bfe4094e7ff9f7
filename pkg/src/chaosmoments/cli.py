"""
Command-line entry point.

Every subcommand reads one JSON document from a file argument or stdin and
writes JSON (or CSV) to stdout. Exit status: 0 success, 1 invalid input,
2 a criterion is violated under ``--strict``, 3 the optimizer did not
converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from .criteria import (
    VIOLATED,
    characterization_check,
    cumulant_ladder_report,
    hypercontractivity_report,
    moment_lower_bound_report,
    polynomial_identity_check,
    symmetric_upper_bound_report,
    w2_bound_shape,
    w2_gap,
)
from .errors import InvalidInputError, PreconditionError
from .moments import (
    cumulants_from_moments,
    moments_from_coefficients,
    moments_from_cumulants,
    target_moments,
)
from .montecarlo import (
    DEFAULT_SEED,
    empirical_moments,
    gue_free_moments,
    moment_standard_errors,
    sample_classical,
)
from .optimize import OptimizationProblem, minimize_fourth_moment
from .spectral import ChaosKind, CoefficientSequence, CumulantSequence, MomentSequence, cumulants_from_coefficients

__all__ = ["main", "build_parser", "render_report", "EXIT_OK", "EXIT_INVALID", "EXIT_VIOLATED", "EXIT_NUMERICAL"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATED = 2
EXIT_NUMERICAL = 3

REPORT_FIELDS = ("name", "lhs", "rhs", "gap", "verdict", "tolerance")
CHECK_CRITERIA = (
    "characterization",
    "polynomial_identity",
    "cumulant_ladder",
    "moment_lower_bound",
    "symmetric_upper_bound",
    "hypercontractivity",
)

log = logging.getLogger(__name__)


def render_report(reports, fmt="json"):
    """Serialize criterion reports; field order is fixed, row order preserved."""
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_FIELDS)
        for r in reports:
            d = r.to_dict()
            writer.writerow([repr(d[k]) if isinstance(d[k], float) else d[k] for k in REPORT_FIELDS])
        return buf.getvalue().rstrip("\n")
    raise InvalidInputError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# input handling


def _read_payload(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"input is not valid JSON: {exc}") from None


def _number(v):
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return Fraction(int(v["num"]), int(v["den"]))
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidInputError(f"expected a number, got {v!r}")
    return v


def _order_values(payload, field):
    """Values of ``field``, preferring the exact companion list when present."""
    exact = payload.get(field + "_exact")
    raw = exact if exact is not None else payload.get(field)
    if not isinstance(raw, list) or not raw:
        raise InvalidInputError(f'payload needs a non-empty "{field}" list')
    return [_number(v) for v in raw]


def _coefficients(payload):
    if not isinstance(payload, dict):
        raise InvalidInputError("expected a JSON object")
    return CoefficientSequence.from_json(payload)


def _dump(obj):
    return json.dumps(obj, indent=2)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_cumulants(args):
    seq = _coefficients(_read_payload(args.input))
    c = cumulants_from_coefficients(seq, args.max_order or 6)
    return EXIT_OK, _dump(c.to_json("cumulants"))


def _cmd_moments(args):
    R = args.max_order or 6
    if args.target:
        kind = ChaosKind.parse(args.kind)
        return EXIT_OK, _dump(target_moments(kind, R).to_json("moments"))
    payload = _read_payload(args.input)
    if isinstance(payload, dict) and ("cumulants" in payload or "cumulants_exact" in payload):
        c = CumulantSequence(payload.get("kind", "classical"), _order_values(payload, "cumulants"))
        m = moments_from_cumulants(c, min(R, c.R) if args.max_order else None, method=args.method)
    else:
        m = moments_from_coefficients(_coefficients(payload), R)
    return EXIT_OK, _dump(m.to_json("moments"))


def _cmd_invert(args):
    payload = _read_payload(args.input)
    if not isinstance(payload, dict):
        raise InvalidInputError("expected a JSON object")
    m = MomentSequence(payload.get("kind", "classical"), _order_values(payload, "moments"))
    c = cumulants_from_moments(m, args.max_order)
    return EXIT_OK, _dump(c.to_json("cumulants"))


def _check_reports(seq, criteria, R, tol):
    reports = []
    c = cumulants_from_coefficients(seq, R)
    m = moments_from_cumulants(c)
    tol_kw = {} if tol is None else {"tol": tol}

    def attempt(fn, *a):
        try:
            out = fn(*a, **tol_kw)
        except PreconditionError as exc:
            log.info("skipping %s: %s", fn.__name__, exc)
            return
        reports.extend(out if isinstance(out, list) else [out])

    for name in criteria:
        if name == "characterization":
            reports.append(characterization_check(seq, **tol_kw))
        elif name == "polynomial_identity":
            reports.append(polynomial_identity_check(seq))
        elif name == "cumulant_ladder":
            for r in range(2, R // 2 + 1):
                attempt(cumulant_ladder_report, c, r)
        elif name == "moment_lower_bound":
            for r in range(2, R // 2 + 1):
                attempt(moment_lower_bound_report, m, r)
        elif name == "symmetric_upper_bound":
            for r in range(2, R // 2 + 1):
                attempt(symmetric_upper_bound_report, seq, r)
        elif name == "hypercontractivity":
            for n in range(3, R + 1):
                attempt(hypercontractivity_report, seq.kind, c, m, n)
    return reports


def _cmd_check(args):
    seq = _coefficients(_read_payload(args.input))
    seq.require_normalized()
    R = args.max_order or 8
    if R < 6:
        raise InvalidInputError("check needs --max-order >= 6")
    criteria = CHECK_CRITERIA
    if args.criteria:
        criteria = tuple(s.strip() for s in args.criteria.split(",") if s.strip())
        unknown = set(criteria) - set(CHECK_CRITERIA)
        if unknown:
            raise InvalidInputError(f"unknown criteria {sorted(unknown)}; choose from {CHECK_CRITERIA}")
    reports = _check_reports(seq, criteria, R, args.tolerance)
    text = render_report(reports, args.format or "json")
    if args.strict and any(r.verdict == VIOLATED for r in reports):
        return EXIT_VIOLATED, text
    return EXIT_OK, text


def _cmd_w2gap(args):
    seq = _coefficients(_read_payload(args.input))
    r = args.r
    R = max(6, 2 * r if r else 0)
    m = moments_from_coefficients(seq, R)
    out = {
        "kind": seq.kind.value,
        "mode": args.mode,
        "gap": w2_gap(m, args.mode, r),
        "bound_shape": w2_bound_shape(m, args.mode, r),
    }
    if r is not None:
        out["r"] = r
    return EXIT_OK, _dump(out)


def _cmd_simulate(args):
    seq = _coefficients(_read_payload(args.input))
    batch = sample_classical(seq, args.samples or 100_000, args.seed, workers=args.workers)
    if (args.format or "csv") == "csv":
        return EXIT_OK, batch.to_csv().rstrip("\n")
    R = args.max_order or 6
    out = {
        "seed": batch.seed,
        "count": batch.count,
        "params": batch.params,
        "moments": list(empirical_moments(batch, R).values),
        "std_errors": [float(s) for s in moment_standard_errors(batch, R)],
    }
    return EXIT_OK, _dump(out)


def _cmd_gue(args):
    seq = _coefficients(_read_payload(args.input))
    R = args.max_order or 6
    estimates = gue_free_moments(
        seq, range(2, R + 1, 2), args.matrix_size, args.replicas, args.seed, workers=args.workers
    )
    rows = [e.to_dict() for e in estimates]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return EXIT_OK, buf.getvalue().rstrip("\n")
    return EXIT_OK, _dump(rows)


def _cmd_optimize(args):
    payload = _read_payload(args.input)
    if not isinstance(payload, dict):
        raise InvalidInputError("problem must be a JSON object")
    try:
        problem = OptimizationProblem.from_json(payload)
    except TypeError as exc:
        raise InvalidInputError(f"malformed problem: {exc}") from None
    result = minimize_fourth_moment(problem, workers=args.workers)
    status = EXIT_OK if result.converged else EXIT_NUMERICAL
    return status, _dump(result.to_json())


COMMANDS = {
    "cumulants": (_cmd_cumulants, "cumulants of orders 1..R from coefficients"),
    "moments": (_cmd_moments, "moments from coefficients or cumulants, or exact target moments"),
    "invert": (_cmd_invert, "cumulants from a centered moment sequence"),
    "check": (_cmd_check, "evaluate convergence criteria and inequalities"),
    "w2gap": (_cmd_w2gap, "moment bracket controlling W2 to the target"),
    "simulate": (_cmd_simulate, "Monte Carlo draws of a classical element"),
    "gue": (_cmd_gue, "GUE estimates of free moments"),
    "optimize": (_cmd_optimize, "constrained fourth-moment minimization"),
}


def _positive_int(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _seed(text):
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input; 2 is reserved for violated criteria
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("input", nargs="?", help="JSON input file (default: stdin)")
    common.add_argument("--max-order", type=_positive_int, help="highest order R")
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="root seed (default 0xC0FFEE)")
    common.add_argument("--samples", type=_positive_int, help="Monte Carlo sample count")
    common.add_argument("--matrix-size", type=_positive_int, default=512)
    common.add_argument("--replicas", type=_positive_int, default=32)
    common.add_argument("--tolerance", type=float, help="absolute verdict tolerance")
    common.add_argument("--strict", action="store_true", help="exit 2 if any verdict is violated")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--workers", type=_positive_int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(
        prog="chaosmoments",
        description="Moment/cumulant calculus and fourth-moment criteria for second-order chaos.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}
    for name, (_, help_text) in COMMANDS.items():
        parsers[name] = sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    parsers["moments"].add_argument("--target", action="store_true", help="emit exact target moments")
    parsers["moments"].add_argument("--kind", default="classical", help="kind for --target")
    parsers["moments"].add_argument("--method", choices=("recursive", "enum"), default="recursive")
    parsers["check"].add_argument("--criteria", help="comma-separated subset of " + ",".join(CHECK_CRITERIA))
    parsers["w2gap"].add_argument("--mode", choices=("sextic", "even"), default="sextic")
    parsers["w2gap"].add_argument("--r", type=_positive_int, help="order index for --mode even")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = COMMANDS[args.command][0]
    try:
        status, text = handler(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
