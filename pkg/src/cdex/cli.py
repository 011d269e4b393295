"""Command-line interface: analyze, construct, verify, decode, simulate.

Exit codes are a stable contract:
  0  success
  1  input or configuration error
  2  infeasible problem (some client cannot be served even error-free)
  3  construction search exhausted (field likely too small)
  4  verification failed
  5  work budget exceeded

All commands read the same problem-spec file; matrices live in separate
files so third-party constructions can be audited. ``--figure`` renders a
matplotlib chart next to the report (pass a path, or use the bare flag to
derive one from ``--output``).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import report as rpt
from .analysis import InfeasibleError, capability
from .codec import (
    DEFAULT_CONSTRUCT_ATTEMPTS,
    DEFAULT_DISTANCE_BUDGET,
    BudgetExceededError,
    SearchExhaustedError,
    SupportViolationError,
    deterministic_encoding,
    load_matrix_file,
    save_matrix_file,
    verify_error_correction,
)
from .decoder import decode_all
from .field import NotPrimeError, PrimeField
from .model import load_problem_file
from .sim import (
    DEFAULT_ADVERSARY_BUDGET,
    exhaustive_adversary_check,
    monte_carlo_success_rate,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_SEARCH_EXHAUSTED = 3
EXIT_VERIFY_FAIL = 4
EXIT_BUDGET = 5


class _CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _add_common(
    sub: argparse.ArgumentParser, *, matrix: bool = False, figure: bool = True
) -> None:
    sub.add_argument("--problem", required=True, help="problem-spec file (JSON)")
    if matrix:
        sub.add_argument("--matrix", required=True, help="encoding-matrix file (JSON)")
    sub.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report format (default: text)",
    )
    sub.add_argument("--output", help="write the report here instead of stdout")
    if figure:
        sub.add_argument(
            "--figure",
            nargs="?",
            const="",
            default=None,
            help="also render a figure (optional path; derived from --output when bare)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdex",
        description="capability analysis and error-tolerant code construction "
        "for one-shot cooperative data exchange",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_an = subs.add_parser("analyze", help="per-client diameters, capability, degree bound")
    _add_common(p_an)

    p_co = subs.add_parser(
        "construct",
        help="build and verify an encoding matrix; --output is the matrix file",
    )
    p_co.add_argument("--problem", required=True, help="problem-spec file (JSON)")
    p_co.add_argument(
        "--format", choices=("text", "structured"), default="text",
        help="report format (default: text)",
    )
    p_co.add_argument(
        "--output",
        default="encoding.matrix.json",
        help="where to write the constructed matrix (default encoding.matrix.json)",
    )
    p_co.add_argument(
        "--figure",
        nargs="?",
        const="",
        default=None,
        help="also render the verification chart",
    )
    p_co.add_argument("--field", type=int, help="field size q (default: q from the problem file)")
    p_co.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_CONSTRUCT_ATTEMPTS,
        help=f"attempt budget for the verified sweep (default {DEFAULT_CONSTRUCT_ATTEMPTS})",
    )
    p_co.add_argument(
        "--strategy",
        choices=("auto", "sweep", "exhaustive"),
        default="auto",
        help="construction strategy (default auto)",
    )

    p_ve = subs.add_parser("verify", help="check a matrix against a target delta")
    _add_common(p_ve, matrix=True)
    p_ve.add_argument(
        "--delta",
        type=int,
        help="target tolerated corruptions (default: the problem's capability)",
    )
    p_ve.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_DISTANCE_BUDGET,
        help="distance-computation budget",
    )

    p_de = subs.add_parser("decode", help="decode one client's view of a broadcast round")
    _add_common(p_de, matrix=True, figure=False)
    p_de.add_argument("--client", type=int, required=True, help="decoding client (1-based)")
    p_de.add_argument(
        "--broadcast", required=True, help="comma-separated received values y_1,...,y_n"
    )
    p_de.add_argument(
        "--held",
        required=True,
        help="held packet values as i=v pairs, e.g. '1=1,3=0,6=1'",
    )
    p_de.add_argument("--budget", type=int, default=DEFAULT_DISTANCE_BUDGET)

    p_si = subs.add_parser("simulate", help="adversarial sweeps and random-coding estimates")
    _add_common(p_si, matrix=False)  # --figure renders the Monte Carlo chart
    p_si.add_argument("--matrix", help="encoding-matrix file (required with --exhaustive)")
    p_si.add_argument("--field", type=int, help="field size q for Monte Carlo (default: file q)")
    p_si.add_argument("--delta", type=int, help="target delta (default: capability)")
    p_si.add_argument(
        "--exhaustive",
        action="store_true",
        help="sweep every adversary plan up to delta against --matrix",
    )
    p_si.add_argument("--trials", type=int, default=0, help="Monte Carlo trials (0 = skip)")
    p_si.add_argument("--seed", type=int, default=0, help="base seed")
    p_si.add_argument(
        "--packets",
        help="comma-separated true packet values for the exhaustive sweep "
        "(default: a few seeded random vectors)",
    )
    p_si.add_argument("--budget", type=int, default=DEFAULT_ADVERSARY_BUDGET)
    p_si.add_argument(
        "--trace-log",
        help="append one JSON line per exhaustive-sweep trace to this file",
    )

    return parser


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _figure_path(args) -> Optional[Path]:
    if args.figure is None:
        return None
    if args.figure:
        return Path(args.figure)
    if args.output:
        return Path(args.output).with_suffix(".png")
    return Path("figure.png")


def _parse_values(raw: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"cannot parse {what} {raw!r}: {exc}") from exc


def _parse_held(raw: str) -> dict[int, int]:
    held = {}
    for pair in raw.split(","):
        pair = pair.strip()
        if not pair:
            continue
        if "=" not in pair:
            raise _CliError(f"held packet {pair!r} is not of the form i=v")
        i, v = pair.split("=", 1)
        try:
            held[int(i)] = int(v)
        except ValueError as exc:
            raise _CliError(f"cannot parse held packet {pair!r}: {exc}") from exc
    return held


def _load_problem(args):
    try:
        return load_problem_file(args.problem)
    except (OSError, ValueError) as exc:
        raise _CliError(str(exc)) from exc


def _load_matrix(args, problem):
    try:
        return load_matrix_file(args.matrix, problem)
    except SupportViolationError as exc:
        raise _CliError(f"{args.matrix}: {exc}") from exc
    except (OSError, ValueError) as exc:
        raise _CliError(str(exc)) from exc


def _resolve_field(q: int) -> PrimeField:
    try:
        return PrimeField(q)
    except NotPrimeError as exc:
        raise _CliError(str(exc)) from exc


def cmd_analyze(args) -> int:
    problem, _ = _load_problem(args)
    rep = capability(problem)
    if args.format == "structured":
        _emit(args, rpt.to_structured_text("capability", rep.to_dict()))
    else:
        _emit(args, rpt.capability_text(rep))
    fig = _figure_path(args)
    if fig is not None:
        rpt.save_capability_figure(rep, fig)
    return EXIT_OK


def cmd_construct(args) -> int:
    problem, file_q = _load_problem(args)
    field = _resolve_field(args.field if args.field is not None else file_q)
    encoding = deterministic_encoding(
        problem, field, attempts=args.budget, strategy=args.strategy
    )
    rep = verify_error_correction(encoding, capability(problem).delta)
    save_matrix_file(args.output, encoding)
    if args.format == "structured":
        payload = rep.to_dict()
        payload["matrix_file"] = str(args.output)
        sys.stdout.write(rpt.to_structured_text("construct", payload))
    else:
        sys.stdout.write(f"matrix written to {args.output}\n" + rpt.verification_text(rep))
    fig = _figure_path(args)
    if fig is not None:
        rpt.save_verification_figure(rep, fig)
    return EXIT_OK


def cmd_verify(args) -> int:
    problem, _ = _load_problem(args)
    encoding = _load_matrix(args, problem)
    delta = args.delta if args.delta is not None else capability(problem).delta
    if delta < 0:
        raise _CliError(f"delta must be >= 0, got {delta}")
    rep = verify_error_correction(encoding, delta, args.budget)
    if args.format == "structured":
        _emit(args, rpt.to_structured_text("verification", rep.to_dict()))
    else:
        _emit(args, rpt.verification_text(rep))
    fig = _figure_path(args)
    if fig is not None:
        rpt.save_verification_figure(rep, fig)
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAIL


def cmd_decode(args) -> int:
    problem, _ = _load_problem(args)
    encoding = _load_matrix(args, problem)
    if not 1 <= args.client <= problem.n:
        raise _CliError(f"client {args.client} outside [1, {problem.n}]")
    y = _parse_values(args.broadcast, "broadcast vector")
    if len(y) != problem.n:
        raise _CliError(f"broadcast vector has {len(y)} values, expected {problem.n}")
    held_ints = _parse_held(args.held)
    held = {i: encoding.field.element(v) for i, v in held_ints.items()}
    try:
        result = decode_all(encoding, args.client, y, held, args.budget)
    except ValueError as exc:
        raise _CliError(str(exc)) from exc
    if args.format == "structured":
        _emit(args, rpt.to_structured_text("decode", result.to_dict()))
    else:
        _emit(args, rpt.decode_text(result))
    return EXIT_OK


def cmd_simulate(args) -> int:
    problem, file_q = _load_problem(args)
    if args.trials < 0:
        raise _CliError(f"trials must be >= 0, got {args.trials}")
    if not args.exhaustive and args.trials < 1:
        raise _CliError("nothing to simulate: pass --exhaustive and/or --trials >= 1")
    sections: list[str] = []
    structured: dict = {}
    cap = capability(problem)
    delta = args.delta if args.delta is not None else cap.delta

    if args.exhaustive:
        if not args.matrix:
            raise _CliError("--exhaustive needs --matrix")
        encoding = _load_matrix(args, problem)
        if args.packets:
            vectors = [_parse_values(args.packets, "packet vector")]
        else:
            rng = random.Random(args.seed)
            vectors = [
                [rng.randrange(encoding.field.q) for _ in range(problem.k)]
                for _ in range(3)
            ]
        log_handle = open(args.trace_log, "a", encoding="utf-8") if args.trace_log else None
        worst = None
        checked = 0
        try:
            for x in vectors:
                on_trace = None
                if log_handle is not None:

                    def on_trace(trace, _packets=list(x)):
                        log_handle.write(
                            json.dumps(
                                {
                                    "packets": _packets,
                                    "plan": trace.plan.to_dict(),
                                    "all_recovered": trace.all_recovered,
                                    "violations": list(trace.violations),
                                }
                            )
                            + "\n"
                        )

                res = exhaustive_adversary_check(
                    encoding, delta, x, args.budget, on_trace=on_trace
                )
                checked += res.plans_checked
                if not res.ok:
                    worst = (x, res)
                    break
        finally:
            if log_handle is not None:
                log_handle.close()
        if worst is None:
            sections.append(
                f"exhaustive sweep: all plans recovered over {len(vectors)} "
                f"packet vector(s), {checked} traces\n"
            )
            structured["exhaustive"] = {"ok": True, "traces": checked, "delta": delta}
        else:
            x, res = worst
            sections.append(f"packet vector {x}:\n" + rpt.adversary_text(res, delta))
            structured["exhaustive"] = {
                "ok": False,
                "traces": checked,
                "delta": delta,
                "packets": x,
                **res.to_dict(),
            }

    mc = None
    if args.trials >= 1:
        field = _resolve_field(args.field if args.field is not None else file_q)
        mc = monte_carlo_success_rate(
            problem, field, delta, trials=args.trials, seed=args.seed
        )
        sections.append(rpt.monte_carlo_text(mc))
        structured["monte_carlo"] = mc.to_dict()

    if args.format == "structured":
        _emit(args, rpt.to_structured_text("simulation", structured))
    else:
        _emit(args, "\n".join(sections))
    fig = _figure_path(args)
    if fig is not None and mc is not None:
        rpt.save_monte_carlo_figure(mc, fig)
    return EXIT_OK


_HANDLERS = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "decode": cmd_decode,
    "simulate": cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SearchExhaustedError as exc:
        print(f"search exhausted: {exc} (consider a larger field)", file=sys.stderr)
        return EXIT_SEARCH_EXHAUSTED
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
