"""Command-line front end.

Exit status: 0 on success, 2 for bad input, 3 when code construction fails.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import secrets
import sys
from fractions import Fraction

import numpy as np

from . import coding
from .coding import CodeConstructionError, InfeasibleSchemeError
from .feasibility import is_feasible, is_feasible_exhaustive, structural_certificate
from .gf import GF
from .model import (
    ExchangeProblem,
    InvalidProblemError,
    ResourceLimitError,
    check_scheme,
    held_packets,
    load_problem,
    packet_index,
    packet_universe,
    parse_problem,
    total_cost,
)
from .simulation import TABLE1_CLIENTS, TABLE1_FIELDS, run_trials, table1_report
from .solver import solve_min_cost, solve_min_transmissions

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3


class InputError(Exception):
    pass


def _fraction_json(x: Fraction) -> dict:
    return {"value": str(x), "numerator": x.numerator, "denominator": x.denominator}


def _parse_scheme(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise InputError(f"scheme must be comma-separated integers, got {text!r}") from None


def _read_problem(path: str) -> ExchangeProblem:
    if path == "-":
        try:
            return parse_problem(json.load(sys.stdin))
        except json.JSONDecodeError as exc:
            raise InputError(f"stdin: not valid JSON ({exc})") from exc
    try:
        return load_problem(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _write_csv(rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerows(rows)


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


# -- subcommands -----------------------------------------------------------


def cmd_solve(args) -> int:
    problem = _read_problem(args.problem)
    result = solve_min_transmissions(problem.n) if args.unit_cost else solve_min_cost(problem)
    cost = total_cost(problem, result.scheme)
    if args.format == "json":
        out = result.to_json()
        out["cost"] = str(cost)
        out["cost_numerator"] = cost.numerator
        out["cost_denominator"] = cost.denominator
        out["objective"] = "transmissions" if args.unit_cost else "cost"
        _emit_json(out)
    elif args.format == "csv":
        _write_csv(
            [["client", "cost", "y"]]
            + [[i, str(problem.costs[i - 1]), result.scheme[i - 1]] for i in range(1, problem.n + 1)]
        )
    else:
        label = "minimum transmissions" if args.unit_cost else "minimum cost"
        print(f"objective: {label}")
        print(f"{'client':>6} {'cost':>8} {'sends':>6}")
        for i in result.sort_permutation:
            print(f"{i:>6} {str(problem.costs[i - 1]):>8} {result.scheme[i - 1]:>6}")
        print(f"transmissions: {result.total_transmissions}")
        print(f"cost: {cost}")
    return EXIT_OK


def cmd_feasible(args) -> int:
    y = check_scheme(args.clients, _parse_scheme(args.scheme))
    check = is_feasible_exhaustive if args.exhaustive else is_feasible
    verdict = check(args.clients, y)
    cert = structural_certificate(args.clients, y)
    if args.format == "json":
        _emit_json(
            {
                "feasible": verdict.feasible,
                "violating_subset": sorted(verdict.violating_subset) if verdict.violating_subset else None,
                "required": verdict.required,
                "actual": verdict.actual,
                "clients_decodable": cert,
            }
        )
    else:
        print(verdict.describe())
        for i, ok in enumerate(cert, start=1):
            print(f"client {i}: receiving pattern {'admits' if ok else 'lacks'} full row rank")
    return EXIT_OK


def cmd_codegen(args) -> int:
    y = check_scheme(args.clients, _parse_scheme(args.scheme))
    field = GF(args.field_bits)
    code, attempts = coding.construct_verified_code(
        args.clients, y, field, _seed(args), max_retries=args.max_retries
    )
    print(f"verified after {attempts} attempt(s)", file=sys.stderr)
    text = json.dumps(code.to_json(), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    n = args.clients
    y = (
        check_scheme(n, _parse_scheme(args.scheme))
        if args.scheme
        else solve_min_transmissions(n).scheme
    )
    field = GF(args.field_bits)
    report = run_trials(n, y, field, args.trials, _seed(args))
    if args.format == "json":
        _emit_json(
            {
                "n": n,
                "q": report.q,
                "scheme": list(report.scheme),
                "trials": report.trials,
                "seed": report.seed,
                "per_client_successes": list(report.per_client_successes),
                "all_clients_successes": report.all_clients_successes,
                "bound": _fraction_json(report.bound),
                "union_bound_heuristic": _fraction_json(report.union_bound),
            }
        )
    else:
        _write_csv(report.csv_rows())
        print(
            f"all clients decoded in {report.all_clients_successes}/{report.trials} trials "
            f"(union-bound heuristic, not the per-client bound: {float(report.union_bound):.6f})",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_bound_table(args) -> int:
    table = table1_report()
    if args.format == "json":
        _emit_json({str(q): {str(n): str(v) for n, v in row.items()} for q, row in table.items()})
    elif args.format == "csv":
        _write_csv([["q"] + [f"N={n}" for n in TABLE1_CLIENTS]] + [
            [q] + [str(table[q][n]) for n in TABLE1_CLIENTS] for q in TABLE1_FIELDS
        ])
    else:
        print(f"{'':>7}" + "".join(f"{'N=' + str(n):>8}" for n in TABLE1_CLIENTS))
        print(f"{'':>7}" + "".join(f"{'K=' + str(n * (n - 1) // 2):>8}" for n in TABLE1_CLIENTS))
        for q in TABLE1_FIELDS:
            print(f"{'q=' + str(q):>7}" + "".join(f"{str(table[q][n]):>8}" for n in TABLE1_CLIENTS))
    return EXIT_OK


def cmd_demo(args) -> int:
    seed = _seed(args)
    problem = ExchangeProblem(4, [1, 2, 3, 4])
    field = GF(8)
    n = problem.n

    best = solve_min_cost(problem)
    fewest = solve_min_transmissions(n)
    fewest_cost = total_cost(problem, fewest.scheme)
    print(f"clients: {n}, costs: {[int(c) for c in problem.costs]}, packets: {n * (n - 1) // 2}")
    print(f"minimum-cost scheme y={list(best.scheme)}: {best.total_transmissions} transmissions, cost {best.cost}")
    print(f"minimum-transmission scheme y={list(fewest.scheme)}: {fewest.total_transmissions} transmissions, cost {fewest_cost}")

    code, attempts = coding.construct_verified_code(n, best.scheme, field, seed)
    print(f"random code over GF({field.q}) decodable by all clients after {attempts} attempt(s)")

    rng = np.random.default_rng([seed, 1 << 20])
    natives = field.random(len(packet_universe(n)), rng)
    sent = coding.encode(code, natives)
    recovered_all = True
    for i in range(1, n + 1):
        known = [natives[packet_index(n, p)] for p in sorted(held_packets(n, i))]
        got = coding.decode(code, i, coding.received_by(code, i, sent), known)
        ok = all(got[p] == natives[packet_index(n, p)] for p in got)
        recovered_all &= ok
        vals = ", ".join(f"{p}={got[p]:#04x}" for p in sorted(got))
        print(f"client {i} decoded {len(got)} wanted packets: {vals} [{'ok' if ok else 'MISMATCH'}]")
    print(f"every client holds all {len(natives)} packets: {'yes' if recovered_all else 'no'}")
    return EXIT_OK if recovered_all else EXIT_RUNTIME


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csiexchange",
        description="Minimum-cost network-coded exchange of third-party channel information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal transmission scheme for a problem file")
    p.add_argument("problem", help='JSON file {"num_clients": N, "costs": [...]}, or - for stdin')
    p.add_argument("--unit-cost", action="store_true", help="minimise the number of transmissions instead")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("feasible", help="check whether a scheme admits a decodable code")
    p.add_argument("--clients", type=int, required=True)
    p.add_argument("--scheme", required=True, help='packets per client, e.g. "2,2,1,0"')
    p.add_argument("--exhaustive", action="store_true", help="enumerate every client subset")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("codegen", help="random encoding matrix verified decodable at every client")
    p.add_argument("--clients", type=int, required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--field-bits", type=int, default=8)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-retries", type=int, default=20)
    p.add_argument("--output", help="write the matrix JSON here instead of stdout")
    p.set_defaults(func=cmd_codegen)

    p = sub.add_parser("simulate", help="empirical decoding rates with random coefficients")
    p.add_argument("--clients", type=int, required=True)
    p.add_argument("--field-bits", type=int, default=8)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--scheme", help="default: a minimum-transmission scheme")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound-table", help="decoding probability bounds for N=4..12, q=256,512")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.set_defaults(func=cmd_bound_table)

    p = sub.add_parser("demo", help="four-client walk-through with costs 1,2,3,4")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, InvalidProblemError, InfeasibleSchemeError, ResourceLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CodeConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
