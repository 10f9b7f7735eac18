"""JSON-ready documents. Every number is an exact rational string."""

from __future__ import annotations

import json
from fractions import Fraction

from . import ce as _ce
from .duals import DeviationProfile, gains
from .game import Game
from .gamefile import format_rational
from .nash import NashReport
from .reduction import ReducedGame, ReductionTrace


def q(x: Fraction) -> str:
    return format_rational(x)


def qs(xs) -> list[str]:
    return [q(x) for x in xs]


def profile_labels(game: Game, profile) -> list[str]:
    return [game.labels[i][c] for i, c in enumerate(profile)]


def game_doc(game: Game) -> dict:
    return {
        "name": game.name,
        "players": game.n_players,
        "actions": list(game.shape),
        "labels": [list(ls) for ls in game.labels],
        "payoffs": [qs(row) for row in game.payoffs],
    }


def correlated_doc(game: Game, mu) -> list[dict]:
    return [{"profile": profile_labels(game, c), "p": q(w)} for c, w in zip(game.profiles(), mu) if w]


def mixed_doc(game: Game, sigma) -> list[dict]:
    return [{label: q(w) for label, w in zip(game.labels[i], s) if w} for i, s in enumerate(sigma)]


def jeopardy_doc(game: Game, graph) -> list[list[dict]]:
    return [[{"from": game.labels[i][a], "to": game.labels[i][b]} for a, b in edges]
            for i, edges in enumerate(graph)]


def ce_report_doc(game: Game, report: _ce.CeReport) -> dict:
    return {
        "is_elementary": report.is_elementary,
        "is_tight": report.is_tight,
        "is_pretight": report.is_pretight,
        "dimension": report.dimension,
        "coherent": [[game.labels[i][c] for c in cs] for i, cs in enumerate(report.coherent)],
        "zero_profiles": [profile_labels(game, game.profile(k)) for k in sorted(report.zero_profiles)],
        "jeopardy": jeopardy_doc(game, report.jeopardy),
        "witness_ce": correlated_doc(game, report.witness_ce),
    }


def dual_doc(game: Game, alpha: DeviationProfile, mode: str) -> dict:
    table = gains(game, alpha)
    plans = []
    for i, plan in enumerate(alpha):
        plans.append([{"from": game.labels[i][c], "to": {game.labels[i][d]: q(a) for d, a in enumerate(row) if a}}
                      for c, row in enumerate(plan)])
    return {
        "mode": mode,
        "plans": plans,
        "gains": [{"profile": profile_labels(game, c), "per_player": qs(per), "total": q(tot)}
                  for c, per, tot in zip(game.profiles(), table.per_player, table.total)],
        "is_dual_vector": all(t >= 0 for t in table.total),
    }


def reduced_doc(red: ReducedGame) -> dict:
    base = red.base
    players = []
    for i, d in enumerate(red.decompositions):
        players.append({
            "eliminated": [base.labels[i][c] for c in d.transient],
            "kept": [base.labels[i][c] for c in red.kept(i)],
            "classes": [[base.labels[i][c] for c in cls] for cls in d.classes],
            "stationary": [{base.labels[i][c]: q(w) for c, w in enumerate(s) if w} for s in d.stationary],
        })
    return {"classification": players, "game": game_doc(red.game)}


def trace_doc(trace: ReductionTrace) -> dict:
    stages = []
    for k, st in enumerate(trace.stages):
        doc = reduced_doc(st.reduced)
        doc["stage"] = k
        doc["input_actions"] = list(st.game.shape)
        stages.append(doc)
    return {
        "policy": trace.policy,
        "stages": stages,
        "terminal": game_doc(trace.terminal),
        "terminal_elementary": trace.terminal_elementary,
        "terminal_actions": [[{trace.original.labels[i][c]: q(w) for c, w in enumerate(s) if w} for s in acts]
                             for i, acts in enumerate(trace.terminal_actions())],
    }


def nash_doc(game: Game, report: NashReport) -> dict:
    return {
        "method": report.method,
        "degenerate": report.degenerate,
        "exact": report.exact,
        "equilibria": [mixed_doc(game, s) for s in report.equilibria],
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
