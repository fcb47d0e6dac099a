"""Command-line front end.

Exit codes: 0 solved or verified, 1 refuted, 2 error.  All JSON goes to
standard output (or ``-o``) with sorted, stable formatting so identical
inputs and seeds give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

from .arena import Arena, ArenaError, validate
from .condition import ConditionError, MullerCondition
from .solver import AlphabetMismatch, NotWinningEverywhere, solve, synthesize_on_region
from .strategy import StrategyError, StrategyTransducer
from .verifier import ResourceLimit, Unsupported, Verdict, check_almost_sure, check_sure_win
from .zielonka import (
    admits_memoryless_randomised,
    build_zielonka_dag,
    build_zielonka_tree,
    cropped_number_r,
    dag_to_dot,
    dag_to_json,
    enumerate_cropped_dags,
    memory_number_m,
    memory_number_mU,
    memory_number_r,
    optimal_cropped_dag,
    tree_to_dot,
)

OK, REFUTED, ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _condition(path: str) -> MullerCondition:
    try:
        return MullerCondition.from_json(_read_json(path))
    except ConditionError as exc:
        raise CliError(f"{path}: {exc}") from None


def _arena(path: str, condition: MullerCondition | None = None) -> Arena:
    try:
        arena = Arena.from_json(_read_json(path))
    except ArenaError as exc:
        raise CliError(f"{path}: {exc}") from None
    problems = validate(arena)
    if problems:
        raise CliError(f"{path}: " + "; ".join(problems))
    return arena


def _strategy(path: str) -> tuple[StrategyTransducer, list | None]:
    data = _read_json(path)
    try:
        return StrategyTransducer.from_json(data), data.get("region")
    except StrategyError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- commands -----------------------------------------------------------------


def cmd_tree(args) -> int:
    cond = _condition(args.condition)
    tree = build_zielonka_tree(cond)
    print(f"m={memory_number_m(tree)} mU={memory_number_mU(tree, cond)} r={memory_number_r(tree)}")
    if args.dot:
        dot = dag_to_dot(build_zielonka_dag(tree), cond.alphabet) if args.dag else tree_to_dot(tree, cond.alphabet)
        _write(args.dot, dot)
    return OK


def cmd_bounds(args) -> int:
    cond = _condition(args.condition)
    tree = build_zielonka_tree(cond)
    _emit(
        {
            "m": memory_number_m(tree),
            "mU": memory_number_mU(tree, cond),
            "r": memory_number_r(tree),
            "memoryless_randomised": admits_memoryless_randomised(tree),
        },
        args.output,
    )
    return OK


def cmd_solve(args) -> int:
    cond = _condition(args.condition)
    arena = _arena(args.arena)
    _emit(solve(arena, cond).to_json(arena), args.output)
    return OK


def cmd_synthesize(args) -> int:
    cond = _condition(args.condition)
    arena = _arena(args.arena)
    result = synthesize_on_region(arena, cond)
    data = result.strategy.to_json()
    data["region"] = [str(s) for s in arena.sorted(result.region)]
    _emit(data, args.output)
    return OK


def _cropped(cond: MullerCondition, choice: int | None):
    tree = build_zielonka_tree(cond)
    dag = build_zielonka_dag(tree)
    if choice is None:
        return optimal_cropped_dag(dag, tree)
    for i, cropped in enumerate(enumerate_cropped_dags(dag)):
        if i == choice:
            return cropped
    raise CliError(f"cropped DAG index {choice} out of range")


def cmd_witness(args) -> int:
    from .witness import build_witness

    cond = _condition(args.condition)
    cropped = _cropped(cond, args.choice)
    witness = build_witness(cropped, cond.alphabet)
    _emit(witness.arena.to_json(), args.output)
    if args.sidecar:
        sidecar = witness.sidecar()
        sidecar["cropped_dag"] = dag_to_json(cropped, cond.alphabet)
        sidecar["r"] = cropped_number_r(cropped)
        _write(args.sidecar, json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return OK


def cmd_verify(args) -> int:
    cond = _condition(args.condition)
    arena = _arena(args.arena)
    eve, region = _strategy(args.strategy)
    adam = _strategy(args.adam)[0] if args.adam else None
    starts = args.initial or region
    if args.sure:
        report = check_sure_win(arena, cond, eve, starts, adam)
    else:
        report = check_almost_sure(arena, cond, eve, starts, adam)
    _emit(report.to_json(), args.output)
    return REFUTED if report.verdict is Verdict.REFUTED else OK


def cmd_simulate(args) -> int:
    from .simulate import simulate

    cond = _condition(args.condition)
    arena = _arena(args.arena)
    eve, region = _strategy(args.strategy)
    adam = None
    if args.adam:
        adam = _strategy(args.adam)[0]
    elif args.counterexample:
        report = _read_json(args.counterexample)
        adam = report.get("counterexample") or None
        if adam is None:
            raise CliError(f"{args.counterexample}: report has no counterexample")
        if not args.initial:
            args.initial = [name.split("|")[0] for name in adam.get("from", [])]
    starts = args.initial or region
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        stats = simulate(arena, cond, eve, adam, args.episodes, args.horizon, args.seed, starts)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(stats.to_json(cond.alphabet), args.output)
    return OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muller", description="Randomised strategies for stochastic Muller games")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tree", help="print m, mU and r of a condition; optionally write DOT")
    p.add_argument("condition")
    p.add_argument("--dot", metavar="OUT")
    p.add_argument("--dag", action="store_true", help="render the DAG instead of the tree")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("bounds", help="memory numbers as JSON")
    p.add_argument("condition")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("solve", help="almost-sure winning regions")
    p.add_argument("arena")
    p.add_argument("condition")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("synthesize", help="almost-sure strategy on Eve's region")
    p.add_argument("arena")
    p.add_argument("condition")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("witness", help="lower-bound arena of a cropped DAG")
    p.add_argument("condition")
    p.add_argument("--choice", type=int, help="index of the cropped DAG (default: one maximising r)")
    p.add_argument("-o", "--output")
    p.add_argument("--sidecar", metavar="OUT", help="write the state roles as JSON")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="exact almost-sure (or sure) check of a strategy")
    p.add_argument("arena")
    p.add_argument("condition")
    p.add_argument("strategy")
    p.add_argument("--sure", action="store_true")
    p.add_argument("--adam", metavar="STRATEGY", help="fix a positional Adam strategy")
    p.add_argument("--initial", nargs="+", metavar="STATE")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte-Carlo episodes")
    p.add_argument("arena")
    p.add_argument("condition")
    p.add_argument("strategy")
    p.add_argument("--episodes", type=int, default=1000)
    p.add_argument("--horizon", type=int)
    p.add_argument("--seed", type=int, default=0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--adam", metavar="STRATEGY")
    group.add_argument("--counterexample", metavar="REPORT", help="replay Adam's moves from a refuted report")
    p.add_argument("--initial", nargs="+", metavar="STATE")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        CliError,
        AlphabetMismatch,
        NotWinningEverywhere,
        ResourceLimit,
        Unsupported,
        ArenaError,
        StrategyError,
        ConditionError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
