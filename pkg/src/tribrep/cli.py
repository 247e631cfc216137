"""Command-line entry point.

Exit codes: 0 when the expected outcome is confirmed, 1 on an unexpected
mathematical outcome, 2 on a precision or configuration failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import baker, pipeline, reduction, twoadic
from .equations import Equation
from .errors import PrecisionError, VerificationError
from .realfield import compute_constants, sci
from .search import exhaustive_search, expected_solutions, search_space

EXIT_OK, EXIT_UNEXPECTED, EXIT_CONFIG = 0, 1, 2


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _shifted(args) -> Equation:
    eq = Equation.parse(args.equation)
    if eq is Equation.BGL:
        raise ValueError(f"command {args.command!r} needs one of the shifted equations 1-4")
    return eq


def cmd_constants(args, config) -> int:
    report = pipeline.constants_report(config.precision)
    k = report["constants"]
    lines = [f"{name:10s} {k[name]['mid']} +/- {k[name]['rad']}" for name in ("alpha", "c_alpha", "log_alpha", "beta_abs")]
    lines.append(f"minimal polynomial of c_alpha: {report['minimal_polynomial']['annihilating_polynomial']}")
    binet = report["binet_error"]
    lines.append(f"Binet error, literal index: holds={binet['literal_index']['holds']} "
                 f"(first failure s={binet['literal_index']['first_failure']})")
    lines.append(f"Binet error, index + 1:     holds={binet['index_plus_one']['holds']}")
    _emit(args, report, lines)
    return EXIT_OK if all(report["invariants"].values()) else EXIT_UNEXPECTED


def cmd_tables(args, config) -> int:
    rows = twoadic.verify_valuation_tables(config.table_range)
    summary = twoadic.table_summary(rows)
    lines = [f"{summary['consistent_rows']}/{summary['rows']} rows consistent over n <= {config.table_range}"]
    lines += [f"  mismatch: {r['table']} l={r['block_length']} x={r['residue']}" for r in summary["inconsistent"]]
    _emit(args, {"summary": summary, "rows": [r.to_json() for r in rows]}, lines)
    return EXIT_OK if not summary["inconsistent"] else EXIT_UNEXPECTED


def cmd_caps(args, config) -> int:
    caps = twoadic.max_block_lengths(_shifted(args), config.table_range)
    _emit(args, caps.to_json(), [f"{caps.equation.name}: k <= {caps.k_max}, l <= {caps.l_max} certified={caps.certified}"])
    return EXIT_OK if caps.certified else EXIT_UNEXPECTED


def cmd_bound(args, config) -> int:
    eq = _shifted(args)
    constants = compute_constants(config.precision)
    gamma = (baker.audited_gamma_bound if args.audited else baker.gamma_bound)(eq, constants=constants)
    initial = baker.initial_bound(eq, gamma, constants)
    instance = baker.matveev_instance(eq, constants)
    payload = {"matveev": instance.to_json(), "gamma_bound": gamma.to_json(), "initial_bound": initial.to_json()}
    lines = [
        f"C(3,3) A1 A2 A3 = {sci(instance.product.upper, 4, 'up')}",
        f"|Gamma| < {gamma.coefficient} alpha^(-{gamma.decay_rate} n) for n >= {gamma.valid_from}",
        f"n < {initial.bound} ({sci(Fraction(initial.bound), 3, 'up')})",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_reduce(args, config) -> int:
    eq = _shifted(args)
    derivation = baker.AUDITED if args.audited else baker.EXPANSION
    result = reduction.two_stage_reduce(eq, derivation, config.precision)
    lines = [
        f"initial n < {result.initial.bound}",
        f"stage 1: X0={result.stage1.X0} q_{result.stage1.convergent_index}={result.stage1.q} -> n < {result.stage1.new_bound_Y}",
        f"stage 2: X0={result.stage2.X0} q_{result.stage2.convergent_index}={result.stage2.q} -> n < {result.stage2.new_bound_Y}",
    ]
    _emit(args, result.to_json(), lines)
    return EXIT_OK


def cmd_search(args, config) -> int:
    eq = Equation.parse(args.equation)
    bound = None
    if eq is not Equation.BGL:
        bound = max(reduction.two_stage_reduce(eq, d, config.precision).final_bound
                    for d in (baker.EXPANSION, baker.AUDITED))
    space = search_space(eq, bound, n_max_override=config.nmax_override)
    report = exhaustive_search(space, config.jobs)
    found = [tuple(s.to_json().values()) for s in report.solutions]
    _emit(args, report.to_json(), [f"{eq.name}: n <= {space.n_max}, {report.candidates_scanned} products, solutions {found}"])
    return EXIT_OK if report.solutions == expected_solutions(eq) else EXIT_UNEXPECTED


def cmd_verify(args, config) -> int:
    cert = pipeline.run_pipeline(args.equation, config)
    path = cert.write(config.out)
    _emit(args, cert.body, [pipeline.summary_line(cert), f"certificate: {path}"])
    return EXIT_OK if cert.confirmed else EXIT_UNEXPECTED


def cmd_verify_all(args, config) -> int:
    certs = pipeline.run_all(config)
    for cert in certs:
        cert.write(config.out)
    payload = {c.equation.value: c.body["outcome"] for c in certs}
    _emit(args, payload, [pipeline.summary_line(c) for c in certs] + [f"certificates in {config.out}"])
    return EXIT_OK if all(c.confirmed for c in certs) else EXIT_UNEXPECTED


COMMANDS = {
    "constants": cmd_constants,
    "tables": cmd_tables,
    "caps": cmd_caps,
    "bound": cmd_bound,
    "reduce": cmd_reduce,
    "search": cmd_search,
    "verify": cmd_verify,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tribrep",
        description="Certify that no repdigit with at least two digits is a product of "
        "consecutive shifted Tribonacci numbers.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--equation", default="1", help="1, 2, 3, 4 or bgl (default: 1)")
    common.add_argument("--precision", type=int, help="working precision in decimal digits (default: 200)")
    common.add_argument("--jobs", type=int, help="search worker processes (default: 1)")
    common.add_argument("--out", help="directory for certificates (default: certificates)")
    common.add_argument("--nmax-override", type=int, help="search at least up to this n")
    common.add_argument("--config", help="flat key = value file; flags take precedence")
    common.add_argument("--json", action="store_true", help="print JSON instead of a summary")
    common.add_argument("--audited", action="store_true", help="bound/reduce: use the audited Gamma bound")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = pipeline.load_config(
            args.config,
            precision=args.precision,
            jobs=args.jobs,
            out=args.out and pipeline.Path(args.out),
            nmax_override=args.nmax_override,
        )
        return COMMANDS[args.command](args, config)
    except pipeline.StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (PrecisionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
