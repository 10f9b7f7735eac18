"""The correlated-equilibrium polytope of a game.

The CE system has one variable per profile and its constraints are laid out
as: incentive rows for every ``(player, from, to)`` triple in lexicographic
order (the ``from == to`` rows are identically zero), then one ``mu(c) >= 0``
row per profile, then the simplex equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import lp as _lp
from .game import CorrelatedStrategy, Game, check_correlated, deviate

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class IncentiveConstraint:
    player: int
    source: int
    target: int
    row: tuple[Fraction, ...]

    def value(self, mu) -> Fraction:
        """Expected gain of deviating from ``source`` to ``target`` under ``mu``."""
        return sum((a * w for a, w in zip(self.row, mu) if a and w), Fraction(0))


def triples(game: Game):
    for i, m in enumerate(game.shape):
        for ci in range(m):
            for di in range(m):
                yield i, ci, di


def triple_offsets(game: Game) -> tuple[int, ...]:
    offsets, acc = [], 0
    for m in game.shape:
        offsets.append(acc)
        acc += m * m
    return tuple(offsets)


def triple_index(game: Game, player: int, source: int, target: int) -> int:
    m = game.shape[player]
    return triple_offsets(game)[player] + source * m + target


@lru_cache(maxsize=4096)
def incentive_constraints(game: Game) -> tuple[IncentiveConstraint, ...]:
    out = []
    for i, ci, di in triples(game):
        row = [Fraction(0)] * game.n_profiles
        if ci != di:
            for c in game.opponent_profiles(i):
                c = deviate(c, i, ci)
                k = game.index(c)
                row[k] = game.utility(deviate(c, i, di), i) - game.payoffs[k][i]
        out.append(IncentiveConstraint(i, ci, di, tuple(row)))
    return tuple(out)


@lru_cache(maxsize=4096)
def ce_system(game: Game) -> _lp.LinearProgram:
    """The CE polytope ``{mu in Δ(C): every incentive row · mu <= 0}``."""
    n = game.n_profiles
    cons = [_lp.Constraint(ic.row, _lp.LE, 0) for ic in incentive_constraints(game)]
    for k in range(n):
        e = [0] * n
        e[k] = 1
        cons.append(_lp.Constraint(tuple(e), _lp.GE, 0))
    cons.append(_lp.Constraint((1,) * n, _lp.EQ, 1))
    names = tuple("mu(" + ",".join(game.labels[i][ci] for i, ci in enumerate(c)) + ")"
                  for c in game.profiles())
    return _lp.LinearProgram(n, tuple(cons), names=names)


def n_incentive_rows(game: Game) -> int:
    return sum(m * m for m in game.shape)


def nonnegativity_row(game: Game, k: int) -> int:
    return n_incentive_rows(game) + k


def violated_constraints(game: Game, mu) -> list[Triple]:
    """Triples ``(i, c_i, d_i)`` whose incentive constraint ``mu`` violates."""
    mu = check_correlated(game, mu)
    return [(ic.player, ic.source, ic.target) for ic in incentive_constraints(game)
            if ic.value(mu) > 0]


def is_correlated_equilibrium(game: Game, mu) -> bool:
    return not violated_constraints(game, mu)


@lru_cache(maxsize=4096)
def _tight_rows(game: Game) -> frozenset[int]:
    return _lp.implicit_equalities(ce_system(game))


@lru_cache(maxsize=4096)
def jeopardy(game: Game) -> frozenset[Triple]:
    """All triples ``(i, c_i, d_i)`` with ``d_i`` jeopardizing ``c_i`` (diagonal included)."""
    tight = _tight_rows(game)
    return frozenset((ic.player, ic.source, ic.target)
                     for k, ic in enumerate(incentive_constraints(game))
                     if ic.source == ic.target or k in tight)


def jeopardizes(game: Game, player: int, source: int, target: int) -> bool:
    """True iff the incentive constraint ``source -> target`` is tight in every CE."""
    m = game.shape[player]
    if not (0 <= source < m and 0 <= target < m):
        raise ValueError(f"strategy out of range for player {player}")
    return (player, source, target) in jeopardy(game)


def jeopardy_graph(game: Game) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Per player, the edges ``(c_i, d_i)`` with ``c_i != d_i`` and ``d_i`` jeopardizing ``c_i``."""
    j = jeopardy(game)
    return tuple(tuple((ci, di) for ci in range(m) for di in range(m)
                       if ci != di and (i, ci, di) in j)
                 for i, m in enumerate(game.shape))


@lru_cache(maxsize=4096)
def zero_probability_profiles(game: Game) -> frozenset[int]:
    """Indices of profiles with probability zero in every CE."""
    tight = _tight_rows(game)
    return frozenset(k for k in range(game.n_profiles) if nonnegativity_row(game, k) in tight)


@lru_cache(maxsize=4096)
def coherent_strategies(game: Game) -> tuple[tuple[int, ...], ...]:
    """``C_i^c``: strategies with positive marginal in at least one CE."""
    zero = zero_probability_profiles(game)
    live = [set() for _ in game.shape]
    for k, c in enumerate(game.profiles()):
        if k not in zero:
            for i, ci in enumerate(c):
                live[i].add(ci)
    return tuple(tuple(sorted(s)) for s in live)


@lru_cache(maxsize=4096)
def witness_ce(game: Game) -> CorrelatedStrategy:
    """A relative-interior CE: every constraint not tight on the whole polytope is slack.

    In particular its support is exactly the complement of the zero-probability
    profiles.
    """
    system = ce_system(game)
    tight = _tight_rows(game)
    loose = [k for k in system.inequality_rows() if k not in tight]
    _, point = _lp.max_min_slack(system, loose)
    return point


@lru_cache(maxsize=4096)
def elementary_witness(game: Game) -> tuple[Fraction, CorrelatedStrategy]:
    """``(t, mu)`` maximizing ``t`` with ``mu(c) >= t`` and every nontrivial incentive row ``<= -t``."""
    system = ce_system(game)
    rows = [k for k, ic in enumerate(incentive_constraints(game)) if ic.source != ic.target]
    rows += [nonnegativity_row(game, k) for k in range(game.n_profiles)]
    return _lp.max_min_slack(system, rows)


def is_elementary(game: Game) -> bool:
    """True iff the game has a strict correlated equilibrium with full support."""
    return elementary_witness(game)[0] > 0


def is_tight(game: Game) -> bool:
    j = jeopardy(game)
    return all(t in j for t in triples(game))


def is_pretight(game: Game) -> bool:
    j = jeopardy(game)
    for i, cs in enumerate(coherent_strategies(game)):
        for ci in cs:
            for di in cs:
                if (i, ci, di) not in j:
                    return False
    return True


def marginal(game: Game, mu, player: int) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * game.shape[player]
    for c, w in zip(game.profiles(), mu):
        if w:
            out[c[player]] += w
    return tuple(out)


def is_strict_ce(game: Game, mu) -> bool:
    """Strictness of a CE: every used recommendation strictly beats every other strategy."""
    mu = check_correlated(game, mu)
    if not is_correlated_equilibrium(game, mu):
        raise ValueError("not a correlated equilibrium")
    margins = [marginal(game, mu, i) for i in range(game.n_players)]
    for ic in incentive_constraints(game):
        if ic.source != ic.target and margins[ic.player][ic.source] > 0 and ic.value(mu) >= 0:
            return False
    return True


def ce_dimension(game: Game) -> int:
    return _lp.affine_dimension(ce_system(game))


@dataclass(frozen=True)
class CeReport:
    is_elementary: bool
    is_tight: bool
    is_pretight: bool
    dimension: int
    coherent: tuple[tuple[int, ...], ...]
    zero_profiles: frozenset[int]
    jeopardy: tuple[tuple[tuple[int, int], ...], ...]
    witness_ce: CorrelatedStrategy


def analyze(game: Game) -> CeReport:
    return CeReport(
        is_elementary=is_elementary(game),
        is_tight=is_tight(game),
        is_pretight=is_pretight(game),
        dimension=ce_dimension(game),
        coherent=coherent_strategies(game),
        zero_profiles=zero_probability_profiles(game),
        jeopardy=jeopardy_graph(game),
        witness_ce=witness_ce(game),
    )
