"""Command-line interface.

Exit status: 0 on success, 1 when an analysis refuses its input (for example
a deviation profile that is not a dual vector), 2 on I/O or parse errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import ce as _ce
from . import duals as _duals
from . import nash as _nash
from . import report as _report
from .duals import DUAL_MODES, dual_vector_for
from .game import Game, GameError, check_correlated, check_mixed_profile, product_distribution
from .gamefile import (ParseError, gen_game, load_game, parse_correlated, parse_deviation_profile,
                       parse_mixed_profile, write_game)
from .reduction import iterate_to_elementary, reduce

log = logging.getLogger("dualreduce")


class InputError(Exception):
    """Bad input file contents (exit status 2)."""


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _nash_report(game: Game, max_size: int):
    if game.n_players == 2:
        return _nash.bimatrix_nash(game, max_size)
    return _nash.pure_nash(game)


def _fmt_bool(b) -> str:
    return "n/a" if b is None else str(bool(b)).lower()


def cmd_info(args, game):
    rep = _ce.analyze(game)
    doc = {"game": _report.game_doc(game), "ce": _report.ce_report_doc(game, rep)}
    try:
        doc["nash"] = _report.nash_doc(game, _nash_report(game, args.max_size))
    except _nash.SizeLimitExceeded as exc:
        doc["nash"] = {"skipped": str(exc)}
    if args.json:
        return doc
    d = doc["ce"]
    lines = [f"game: {game.name} ({' x '.join(map(str, game.shape))}, {game.n_profiles} profiles)",
             f"elementary: {_fmt_bool(d['is_elementary'])}",
             f"tight: {_fmt_bool(d['is_tight'])}",
             f"pretight: {_fmt_bool(d['is_pretight'])}",
             f"ce dimension: {d['dimension']} (of {game.n_profiles - 1})"]
    for i, cs in enumerate(d["coherent"]):
        lines.append(f"coherent[{i}]: {' '.join(cs)}")
    lines.append("zero-probability profiles: " + (", ".join("(" + ",".join(p) + ")" for p in d["zero_profiles"])
                                                  or "none"))
    if "equilibria" in doc["nash"]:
        lines.append(f"nash equilibria ({doc['nash']['method']}): {len(doc['nash']['equilibria'])}"
                     + (" [degenerate]" if doc["nash"]["degenerate"] else ""))
    return "\n".join(lines) + "\n"


def cmd_ce(args, game):
    rep = _ce.analyze(game)
    doc = {"witness_ce": _report.correlated_doc(game, rep.witness_ce),
           "jeopardy": _report.jeopardy_doc(game, rep.jeopardy)}
    if args.json:
        return doc
    lines = ["witness correlated equilibrium:"]
    lines += [f"  ({','.join(e['profile'])}) {e['p']}" for e in doc["witness_ce"]]
    lines.append("jeopardy (d jeopardizes c):")
    for i, edges in enumerate(doc["jeopardy"]):
        lines.append(f"  player {i}: " + (", ".join(f"{e['to']} -> {e['from']}" for e in edges) or "none"))
    return "\n".join(lines) + "\n"


def _alpha_text(game, alpha):
    out = []
    for i, plan in enumerate(alpha):
        for c, row in enumerate(plan):
            out.append(f"  [{i}] {game.labels[i][c]} -> " + " ".join(str(a) for a in row))
    return out


def cmd_duals(args, game):
    alpha = dual_vector_for(game, args.mode, args.seed)
    doc = _report.dual_doc(game, alpha, args.mode)
    if args.json:
        return doc
    lines = [f"dual vector ({args.mode}):"] + _alpha_text(game, alpha)
    lines.append("gains D(c, alpha):")
    lines += [f"  ({','.join(g['profile'])}) {' '.join(g['per_player'])} | {g['total']}" for g in doc["gains"]]
    return "\n".join(lines) + "\n"


def cmd_reduce(args, game):
    if args.alpha:
        try:
            alpha = parse_deviation_profile(_read(args.alpha), game)
            alpha = _duals.check_deviation_profile(game, alpha)
        except GameError as exc:
            raise InputError(str(exc)) from exc
        mode = "custom"
    else:
        mode = args.mode
        alpha = dual_vector_for(game, mode, args.seed)
    red = reduce(game, alpha)
    doc = _report.reduced_doc(red)
    doc["mode"] = mode
    doc["dual_vector"] = _report.dual_doc(game, alpha, mode)["plans"]
    if args.json:
        return doc
    lines = [f"reduction ({mode}):"]
    for i, p in enumerate(doc["classification"]):
        groups = " ".join("{" + ",".join(c) + "}" for c in p["classes"] if len(c) > 1)
        lines.append(f"  player {i}: kept [{' '.join(p['kept'])}] eliminated [{' '.join(p['eliminated'])}]"
                     f" grouped [{groups}]")
    return "\n".join(lines) + "\n" + write_game(red.game)


def cmd_iterate(args, game):
    trace = iterate_to_elementary(game, args.policy.replace("-", "_"), args.seed)
    doc = _report.trace_doc(trace)
    if args.json:
        return doc
    lines = [f"policy: {args.policy}, stages: {len(trace.stages)}"]
    for st in doc["stages"]:
        lines.append(f"stage {st['stage']}: {' x '.join(map(str, st['input_actions']))} -> "
                     f"{' x '.join(map(str, st['game']['actions']))}")
    lines.append(f"terminal elementary: {_fmt_bool(trace.terminal_elementary)}")
    return "\n".join(lines) + "\n" + write_game(trace.terminal)


def _marginals(game, mu):
    return tuple(_ce.marginal(game, mu, i) for i in range(game.n_players))


def cmd_certify(args, game):
    try:
        if args.profile:
            sigma = check_mixed_profile(game, parse_mixed_profile(_read(args.profile), game))
            mu = product_distribution(game, sigma)
        else:
            mu = check_correlated(game, parse_correlated(_read(args.mu), game))
            sigma = _marginals(game, mu)
            if product_distribution(game, sigma) != mu:
                sigma = None
    except GameError as exc:
        raise InputError(str(exc)) from exc
    violations = _ce.violated_constraints(game, mu)
    is_ce = not violations
    doc = {
        "ce": is_ce,
        "violations": [{"player": i, "from": game.labels[i][a], "to": game.labels[i][b]}
                       for i, a, b in violations],
        "strict": _ce.is_strict_ce(game, mu) if is_ce else False,
        "product_form": sigma is not None,
        "nash": None,
        "quasi_strict": None,
    }
    if sigma is not None:
        doc["nash"] = _nash.is_nash(game, sigma)
        doc["quasi_strict"] = _nash.is_quasi_strict(game, sigma) if doc["nash"] else False
        doc["profile"] = _report.mixed_doc(game, sigma)
    if args.json:
        return doc
    lines = [f"ce: {_fmt_bool(doc['ce'])}", f"strict: {_fmt_bool(doc['strict'])}",
             f"nash: {_fmt_bool(doc['nash'])}", f"quasi-strict: {_fmt_bool(doc['quasi_strict'])}"]
    lines += [f"violated: player {v['player']} {v['from']} -> {v['to']}" for v in doc["violations"]]
    return "\n".join(lines) + "\n"


def cmd_gen(args, _game):
    low, high = args.range
    try:
        game = gen_game(args.seed, args.actions, low, high, args.name)
    except GameError as exc:
        raise InputError(str(exc)) from exc
    return _report.game_doc(game) if args.json else write_game(game)


COMMANDS = {
    "info": cmd_info, "ce": cmd_ce, "duals": cmd_duals, "reduce": cmd_reduce,
    "iterate": cmd_iterate, "certify": cmd_certify, "gen": cmd_gen,
}


def _global_options(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False), help="emit a JSON report")
    parser.add_argument("--out", default=default(None), help="write output to this file instead of stdout")
    parser.add_argument("--max-size", type=int, default=default(_nash.DEFAULT_MAX_SIZE),
                        help="largest per-player strategy count for Nash enumeration")
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dualreduce", description="Exact dual reduction of finite games.")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, with_game=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if with_game:
            p.add_argument("game", help="game file")
        return p

    add("info", "correlated-equilibrium summary")
    add("ce", "witness correlated equilibrium and jeopardy graph")
    p = add("duals", "dual vector table and gains")
    p.add_argument("--mode", choices=DUAL_MODES, default="full")
    p.add_argument("--seed", type=int, default=None, help="independent construction of full vectors")
    p = add("reduce", "one dual reduction stage")
    p.add_argument("--mode", choices=DUAL_MODES, default="full")
    p.add_argument("--alpha", help="file with a custom deviation profile")
    p.add_argument("--seed", type=int, default=None)
    p = add("iterate", "iterate to an elementary game")
    p.add_argument("--policy", choices=("full", "strong-full"), default="full")
    p.add_argument("--seed", type=int, default=None)
    p = add("certify", "equilibrium verdicts for a strategy")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--profile", help="file with one line of weights per player")
    g.add_argument("--mu", help="file with a correlated strategy in profile order")
    p = add("gen", "generate a seeded random game", with_game=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--actions", type=int, nargs="+", required=True)
    p.add_argument("--range", type=int, nargs=2, default=(-9, 9), metavar=("LOW", "HIGH"))
    p.add_argument("--name", default=None)
    return parser


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    try:
        game = load_game(args.game) if args.command != "gen" else None
        result = COMMANDS[args.command](args, game)
    except (OSError, ParseError, InputError) as exc:
        print(f"dualreduce: error: {exc}", file=stderr)
        return 2
    except (_duals.NotADualVector, _nash.SizeLimitExceeded, GameError, ValueError) as exc:
        print(f"dualreduce: refused: {exc}", file=stderr)
        return 1
    text = _report.dumps(result) if args.json else result
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"dualreduce: error: {exc}", file=stderr)
            return 2
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run_cli())
