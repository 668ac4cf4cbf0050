"""Command-line front end.

Exit codes: 0 realizable (or agreement), 1 unrealizable (or disagreement),
2 usage or parse error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys

from .expansion import BranchPolicy
from .generators import pattern_text
from .instance import InstanceError, parse_strategy, read_instance
from .oracle import DfaLimitExceeded, backward_win, build_dfa, validate_strategy
from .search import Mode, SolveConfig, StepLimitExceeded, TimeLimitExceeded, solve

EXIT_REALIZABLE = 0
EXIT_UNREALIZABLE = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _verdict_line(realizable: bool) -> str:
    return "REALIZABLE" if realizable else "UNREALIZABLE"


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.HASH_RESTART.value)
    p.add_argument("--branch", choices=["tf", "ff", "rand"], default="ff")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold-mult", type=int, default=3, metavar="K")
    p.add_argument("--no-preprocess", action="store_true")
    p.add_argument("--step-limit", type=int, default=None, metavar="N")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECS")
    p.add_argument("--stats", action="store_true", help="write a CSV diagnostics row to stderr")


def _config(args) -> SolveConfig:
    return SolveConfig(
        mode=Mode(args.mode),
        policy=BranchPolicy(args.branch, args.seed),
        threshold_multiplier=args.threshold_mult,
        preprocess=not args.no_preprocess,
        step_limit=args.step_limit,
        time_limit=args.time_limit,
    )


def _write_stats(verdict):
    row = verdict.diagnostics()
    row["wall_time"] = f"{verdict.wall_time:.6f}"
    w = csv.DictWriter(sys.stderr, fieldnames=list(row))
    w.writeheader()
    w.writerow(row)


def cmd_solve(args) -> int:
    problem = read_instance(args.path)
    verdict = solve(problem, _config(args))
    print(_verdict_line(verdict.realizable))
    if args.print_strategy and verdict.strategy is not None:
        sys.stdout.write(verdict.strategy.to_text())
    if args.stats:
        _write_stats(verdict)
    return EXIT_REALIZABLE if verdict.realizable else EXIT_UNREALIZABLE


def cmd_gen(args) -> int:
    sys.stdout.write(pattern_text(args.family, args.n))
    return 0


def cmd_oracle(args) -> int:
    problem = read_instance(args.path)
    dfa = build_dfa(problem, args.max_vars, args.max_states)
    win, _ = backward_win(dfa)
    print(_verdict_line(win))
    code = EXIT_REALIZABLE if win else EXIT_UNREALIZABLE
    if args.compare:
        verdict = solve(problem, _config(args))
        agree = verdict.realizable == win
        if agree and verdict.strategy is not None:
            agree = validate_strategy(dfa, verdict.strategy)
        print("AGREE" if agree else "DISAGREE")
        if args.stats:
            _write_stats(verdict)
        code = 0 if agree else 1
    if args.dump_dfa:
        sys.stdout.write(dfa.to_text())
    return code


def cmd_check(args) -> int:
    problem = read_instance(args.path)
    with open(args.strategy, encoding="utf-8") as fh:
        strategy = parse_strategy(fh.read(), problem)
    dfa = build_dfa(problem, args.max_vars, args.max_states)
    ok = validate_strategy(dfa, strategy)
    print("VALID" if ok else "INVALID")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ltlf-forward", description="Forward LTLf realizability and synthesis.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide realizability of an instance file")
    p.add_argument("path")
    p.add_argument("--print-strategy", action="store_true")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="print a pattern instance")
    p.add_argument("family", choices=["gf", "u"])
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="explicit-automaton verdict")
    p.add_argument("path")
    p.add_argument("--compare", action="store_true", help="also run the solver and check agreement")
    p.add_argument("--dump-dfa", action="store_true")
    p.add_argument("--max-vars", type=int, default=8)
    p.add_argument("--max-states", type=int, default=4096)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check", help="validate a printed strategy against the automaton")
    p.add_argument("path")
    p.add_argument("strategy")
    p.add_argument("--max-vars", type=int, default=8)
    p.add_argument("--max-states", type=int, default=4096)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InstanceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StepLimitExceeded, TimeLimitExceeded, DfaLimitExceeded) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
