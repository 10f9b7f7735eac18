"""Exact Nash-equilibrium tools at desk scale.

Pure equilibria for any number of players; support enumeration and
completely-mixed block equilibria for two players.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp as _lp
from .game import (Game, GameError, MixedProfile, MixedStrategy, check_block, check_mixed_profile,
                   deviate, profile_weights, pure, support)
from .linalg import solve_affine

DEFAULT_MAX_SIZE = 5
DEFAULT_CONDITIONS_MAX_SIZE = 4


class SizeLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class NashReport:
    equilibria: tuple[MixedProfile, ...]
    method: str
    degenerate: bool = False
    exact: bool = True


def _guard(game: Game, max_size: int | None):
    if max_size is not None and max(game.shape) > max_size:
        raise SizeLimitExceeded(f"game {game.shape} exceeds the size guard {max_size}")


def pure_payoffs(game: Game, player: int, sigma) -> tuple[Fraction, ...]:
    """``U_i(σ_{-i}, c_i)`` for every ``c_i``; ``sigma[player]`` is ignored."""
    others = list(sigma)
    others[player] = (Fraction(1),) + (Fraction(0),) * (game.shape[player] - 1)
    out = []
    for ci in range(game.shape[player]):
        total = Fraction(0)
        for c, w in profile_weights(tuple(others)):
            total += w * game.utility(deviate(c, player, ci), player)
        out.append(total)
    return tuple(out)


def best_responses(game: Game, player: int, sigma_minus: Sequence[MixedStrategy]) -> tuple[int, ...]:
    """Pure best responses of ``player`` to the opponents' mixed strategies (in player order)."""
    if len(sigma_minus) != game.n_players - 1:
        raise GameError(f"expected {game.n_players - 1} opponent strategies, got {len(sigma_minus)}")
    sigma = list(sigma_minus)
    sigma.insert(player, pure(game.shape[player], 0))
    sigma = check_mixed_profile(game, sigma)
    vals = pure_payoffs(game, player, sigma)
    top = max(vals)
    return tuple(k for k, v in enumerate(vals) if v == top)


def _opponents(sigma, player):
    return tuple(s for j, s in enumerate(sigma) if j != player)


def is_nash(game: Game, sigma) -> bool:
    sigma = check_mixed_profile(game, sigma)
    for i in range(game.n_players):
        vals = pure_payoffs(game, i, sigma)
        own = sum((w * v for w, v in zip(sigma[i], vals)), Fraction(0))
        if max(vals) > own:
            return False
    return True


def is_quasi_strict(game: Game, sigma) -> bool:
    """Nash equilibrium whose every player's best-response set equals their support."""
    sigma = check_mixed_profile(game, sigma)
    if not is_nash(game, sigma):
        raise ValueError("not a Nash equilibrium")
    return all(best_responses(game, i, _opponents(sigma, i)) == support(sigma[i])
               for i in range(game.n_players))


def pure_nash(game: Game) -> NashReport:
    eqs = []
    for c in game.profiles():
        sigma = tuple(pure(m, ci) for m, ci in zip(game.shape, c))
        if is_nash(game, sigma):
            eqs.append(sigma)
    return NashReport(tuple(eqs), "pure-enumeration")


def is_strict_pure_nash(game: Game, profile) -> bool:
    row = game.payoff_vector(profile)
    return all(game.utility(deviate(profile, i, d), i) < row[i]
               for i, m in enumerate(game.shape) for d in range(m) if d != profile[i])


# --- two-player support machinery -----------------------------------------


def _payoff(game: Game, owner: int, mine: int, theirs: int, player: int) -> Fraction:
    """Payoff of ``player`` when ``owner`` plays ``mine`` and the other plays ``theirs``."""
    prof = (mine, theirs) if owner == 0 else (theirs, mine)
    return game.utility(prof, player)


@dataclass(frozen=True)
class _Side:
    strategy: MixedStrategy | None   # exact-support solution (None when none exists)
    unique: bool = True


def _support_side(game: Game, owner: int, own_support, their_support, their_pool) -> _Side:
    """A strategy of ``owner`` with support exactly ``own_support`` that makes the
    opponent indifferent on ``their_support`` and no better off elsewhere in
    ``their_pool``.

    Among solutions, the one maximizing the smallest weight is returned.
    """
    other = 1 - owner
    k = len(own_support)
    cons = []
    eq_rows = []
    for d in their_pool:
        row = tuple(_payoff(game, owner, c, d, other) for c in own_support) + (Fraction(-1),)
        if d in their_support:
            cons.append(_lp.Constraint(row, _lp.EQ, 0))
            eq_rows.append(row)
        else:
            cons.append(_lp.Constraint(row, _lp.LE, 0))
    simplex = (Fraction(1),) * k + (Fraction(0),)
    cons.append(_lp.Constraint(simplex, _lp.EQ, 1))
    first_pos = len(cons)
    for j in range(k):
        e = [Fraction(0)] * (k + 1)
        e[j] = Fraction(1)
        cons.append(_lp.Constraint(tuple(e), _lp.GE, 0))
    system = _lp.LinearProgram(k + 1, tuple(cons), lower=(Fraction(0),) * k + (None,))
    if not _lp.is_feasible(system):
        return _Side(None)
    t, x = _lp.max_min_slack(system, range(first_pos, first_pos + k))
    if t <= 0:
        return _Side(None)
    sol = solve_affine(eq_rows + [simplex], [Fraction(0)] * len(eq_rows) + [Fraction(1)], k + 1)
    unique = sol is not None and not sol[1]
    sigma = [Fraction(0)] * game.shape[owner]
    for c, w in zip(own_support, x[:k]):
        sigma[c] = w
    return _Side(tuple(sigma), unique)


def _subsets(items):
    items = list(items)
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def _require_two(game: Game):
    if game.n_players != 2:
        raise GameError("this operation is implemented for two-player games only")


def _support_pairs(game: Game, pools=None, equal_only=False):
    """Exact-support equilibria of the subgame ``pools[0] x pools[1]``.

    Yields ``(I, J, sigma, unique)`` for every support pair admitting one.
    """
    pools = pools or (tuple(range(game.shape[0])), tuple(range(game.shape[1])))
    for I in _subsets(pools[0]):
        for J in _subsets(pools[1]):
            if equal_only and len(I) != len(J):
                continue
            x = _support_side(game, 0, I, J, pools[1])
            if x.strategy is None:
                continue
            y = _support_side(game, 1, J, I, pools[0])
            if y.strategy is None:
                continue
            yield I, J, (x.strategy, y.strategy), x.unique and y.unique


def bimatrix_nash(game: Game, max_size: int | None = DEFAULT_MAX_SIZE) -> NashReport:
    """Support enumeration. One equilibrium per support pair; degeneracy is flagged
    when some support pair has unequal sizes or a non-unique solution."""
    _require_two(game)
    _guard(game, max_size)
    eqs, degenerate = [], False
    for I, J, sigma, unique in _support_pairs(game):
        if len(I) != len(J) or not unique:
            degenerate = True
        if not is_nash(game, sigma):
            raise RuntimeError(f"support enumeration produced a non-equilibrium on {I}x{J}")
        if sigma not in eqs:
            eqs.append(sigma)
    return NashReport(tuple(eqs), "support-enumeration", degenerate)


def completely_mixed_block_nash(game: Game, block) -> list[MixedProfile]:
    """Nash equilibria of ``Γ_B`` with support exactly ``B``, embedded in ``Γ``'s strategy sets.

    When the block's equilibria form a continuum only the max-min-weight
    representative is returned.
    """
    _require_two(game)
    block = check_block(game, block)
    x = _support_side(game, 0, block[0], block[1], block[1])
    if x.strategy is None:
        return []
    y = _support_side(game, 1, block[1], block[0], block[0])
    if y.strategy is None:
        return []
    return [(x.strategy, y.strategy)]


def weakly_dominated(game: Game, player: int, strategy: int) -> MixedStrategy | None:
    """A mixed strategy ``σ ≠ strategy`` doing at least as well against every opponent profile.

    Any such ``σ`` can be rescaled to avoid ``strategy`` entirely, so the
    search runs over mixtures of the other strategies.
    """
    others = [d for d in range(game.shape[player]) if d != strategy]
    if not others:
        return None
    cons = []
    for c in game.opponent_profiles(player):
        row = tuple(game.utility(deviate(c, player, d), player) for d in others)
        cons.append(_lp.Constraint(row, _lp.GE, game.utility(deviate(c, player, strategy), player)))
    cons.append(_lp.Constraint((1,) * len(others), _lp.EQ, 1))
    out = _lp.solve(_lp.LinearProgram(len(others), tuple(cons)))
    if not out.optimal:
        return None
    sigma = [Fraction(0)] * game.shape[player]
    for d, w in zip(others, out.point):
        sigma[d] = w
    return tuple(sigma)


@dataclass(frozen=True)
class ConditionsReport:
    a: bool
    b: bool
    c: bool
    counterexamples: dict = field(default_factory=dict, compare=False)


def check_conditions_abc(game: Game, max_size: int | None = DEFAULT_CONDITIONS_MAX_SIZE) -> ConditionsReport:
    """Evaluate the genericity conditions on a two-player game.

    (a) every Nash equilibrium has supports of equal size; (b) the same holds in
    every subgame obtained by deleting strategies; (c) no mixed strategy of a
    player is the own component of completely mixed equilibria on two blocks
    with disjoint opponent components.
    """
    _require_two(game)
    _guard(game, max_size)
    cex = {}
    a = True
    for I, J, sigma, _ in _support_pairs(game):
        if len(I) != len(J):
            a = False
            cex["a"] = {"supports": (I, J), "equilibrium": sigma}
            break
    # (b): an unequal-support equilibrium of any subgame is a completely mixed
    # equilibrium of the subgame spanned by its supports, and conversely
    b = a
    if b:
        for I in _subsets(range(game.shape[0])):
            for J in _subsets(range(game.shape[1])):
                if len(I) == len(J):
                    continue
                found = completely_mixed_block_nash(game, (I, J))
                if found:
                    b = False
                    cex["b"] = {"block": (I, J), "equilibrium": found[0]}
                    break
            if not b:
                break
    else:
        cex["b"] = cex["a"]
    c = True
    for i in (0, 1):
        other = 1 - i
        for Bi in _subsets(range(game.shape[i])):
            k = len(Bi)
            if k < 2:
                continue
            blocks = []
            for Bo in itertools.combinations(range(game.shape[other]), k):
                block = (Bi, Bo) if i == 0 else (Bo, Bi)
                for sigma in completely_mixed_block_nash(game, block):
                    blocks.append((set(Bo), sigma[i], block))
            for (s1, x1, b1), (s2, x2, b2) in itertools.combinations(blocks, 2):
                if not s1 & s2 and x1 == x2:
                    c = False
                    cex["c"] = {"player": i, "blocks": (b1, b2), "strategy": x1}
                    break
            if not c:
                break
        if not c:
            break
    return ConditionsReport(a, b, c, cex)
