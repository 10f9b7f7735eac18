"""Deviation plans and dual vectors.

A deviation plan for player ``i`` is a row-stochastic matrix: row ``c_i`` is
the mixed strategy ``α_i * c_i``. A deviation profile holds one plan per
player. The dual-vector polytope is parameterized by the entries
``α_i(d_i|c_i)``, ordered like the incentive triples of :mod:`dualreduce.ce`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import lp as _lp
from .ce import triple_index, triples, zero_probability_profiles
from .game import (Game, GameError, MixedStrategy, Rescaling, as_rational, check_distribution,
                   check_permutation, deviate, is_p_symmetric, permutation_closure, pure)

DeviationPlan = tuple[MixedStrategy, ...]
DeviationProfile = tuple[DeviationPlan, ...]


class NotADualVector(ValueError):
    """An operation that requires a dual vector was given something else."""


def check_plan(plan, m: int) -> DeviationPlan:
    if len(plan) != m:
        raise GameError(f"deviation plan has {len(plan)} rows, expected {m}")
    return tuple(check_distribution(row, m, f"row {k} of a deviation plan") for k, row in enumerate(plan))


def check_deviation_profile(game: Game, alpha) -> DeviationProfile:
    if len(alpha) != game.n_players:
        raise GameError(f"deviation profile has {len(alpha)} plans, game has {game.n_players} players")
    return tuple(check_plan(p, m) for p, m in zip(alpha, game.shape))


def apply_plan(plan: DeviationPlan, sigma: Sequence[Fraction]) -> MixedStrategy:
    """``α_i * σ_i``."""
    m = len(plan)
    out = [Fraction(0)] * m
    for c, w in enumerate(sigma):
        if w:
            for d, a in enumerate(plan[c]):
                if a:
                    out[d] += w * a
    return tuple(out)


def identity_plan(m: int) -> DeviationPlan:
    return tuple(pure(m, k) for k in range(m))


def trivial_dual_vector(game: Game) -> DeviationProfile:
    return tuple(identity_plan(m) for m in game.shape)


def profile_from_vector(game: Game, x: Sequence[Fraction]) -> DeviationProfile:
    return tuple(tuple(tuple(x[triple_index(game, i, ci, di)] for di in range(m)) for ci in range(m))
                 for i, m in enumerate(game.shape))


def profile_to_vector(game: Game, alpha: DeviationProfile) -> tuple[Fraction, ...]:
    return tuple(alpha[i][ci][di] for i, ci, di in triples(game))


def support_of(game: Game, alpha: DeviationProfile) -> frozenset:
    return frozenset(t for t in triples(game) if alpha[t[0]][t[1]][t[2]] != 0)


def combine(weights: Iterable[Fraction], profiles: Sequence[DeviationProfile]) -> DeviationProfile:
    """Convex combination of deviation profiles (weights are normalized)."""
    weights = [as_rational(w) for w in weights]
    total = sum(weights)
    if total <= 0 or any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative with a positive sum")
    weights = [w / total for w in weights]
    first = profiles[0]
    return tuple(
        tuple(tuple(sum((w * p[i][ci][di] for w, p in zip(weights, profiles)), Fraction(0))
                    for di in range(len(first[i])))
              for ci in range(len(first[i])))
        for i in range(len(first)))


@dataclass(frozen=True)
class DualGainTable:
    """``per_player[k][i] = D_i(c, α_i)`` and ``total[k] = D(c, α)`` for profile index ``k``."""

    per_player: tuple[tuple[Fraction, ...], ...]
    total: tuple[Fraction, ...]


def gains(game: Game, alpha) -> DualGainTable:
    alpha = check_deviation_profile(game, alpha)
    per, tot = [], []
    for c, row in zip(game.profiles(), game.payoffs):
        g = []
        for i, plan in enumerate(alpha):
            dev = sum((a * game.utility(deviate(c, i, d), i) for d, a in enumerate(plan[c[i]]) if a),
                      Fraction(0))
            g.append(dev - row[i])
        per.append(tuple(g))
        tot.append(sum(g, Fraction(0)))
    return DualGainTable(tuple(per), tuple(tot))


def dual_violations(game: Game, alpha) -> list[int]:
    """Profile indices with ``D(c, α) < 0``."""
    return [k for k, d in enumerate(gains(game, alpha).total) if d < 0]


def is_dual_vector(game: Game, alpha) -> bool:
    return not dual_violations(game, alpha)


@lru_cache(maxsize=4096)
def dual_system(game: Game) -> _lp.LinearProgram:
    """The dual-vector polytope.

    Rows: one simplex equality per ``(i, c_i)`` in lexicographic order, then
    one ``D(c, α) >= 0`` row per profile.
    """
    nv = sum(m * m for m in game.shape)
    cons = []
    for i, m in enumerate(game.shape):
        for ci in range(m):
            row = [0] * nv
            for di in range(m):
                row[triple_index(game, i, ci, di)] = 1
            cons.append(_lp.Constraint(tuple(row), _lp.EQ, 1))
    for c, payoff in zip(game.profiles(), game.payoffs):
        row = [Fraction(0)] * nv
        for i, m in enumerate(game.shape):
            for di in range(m):
                row[triple_index(game, i, c[i], di)] += game.utility(deviate(c, i, di), i)
        cons.append(_lp.Constraint(tuple(row), _lp.GE, sum(payoff, Fraction(0))))
    names = tuple(f"a{i}({game.labels[i][di]}|{game.labels[i][ci]})" for i, ci, di in triples(game))
    return _lp.LinearProgram(nv, tuple(cons), names=names)


def gain_row(game: Game, k: int) -> int:
    """Index of the ``D(c_k, α) >= 0`` row in :func:`dual_system`."""
    return sum(game.shape) + k


def _component_witnesses(game: Game, order: Sequence) -> tuple[frozenset, list[tuple]]:
    """Maximize each plan entry in ``order`` over the dual polytope.

    An entry already positive in an earlier witness needs no solve of its
    own. Returns the support and the distinct witnesses (trivial first).
    """
    system = dual_system(game)
    trivial = profile_to_vector(game, trivial_dual_vector(game))
    witnesses = [trivial]
    positive = {t for t in triples(game) if t[1] == t[2]}
    for t in order:
        if t in positive:
            continue
        e = [0] * system.n_vars
        e[triple_index(game, *t)] = 1
        out = _lp.maximize(system, e)
        if out.value > 0:
            witnesses.append(out.point)
            for s in triples(game):
                if out.point[triple_index(game, *s)] > 0:
                    positive.add(s)
    return frozenset(positive), witnesses


@lru_cache(maxsize=4096)
def _canonical_components(game: Game):
    return _component_witnesses(game, list(triples(game)))


def component_support(game: Game) -> frozenset:
    """Triples ``(i, c_i, d_i)`` with ``α_i(d_i|c_i) > 0`` for some dual vector."""
    return _canonical_components(game)[0]


def full_dual_vector(game: Game, seed: int | None = None) -> DeviationProfile:
    """A dual vector positive exactly on :func:`component_support`.

    Without a seed: the uniform average of the entry-maximizing witnesses,
    visited in triple order. With a seed: the visiting order is shuffled and
    the average uses random positive integer weights, giving an independently
    constructed full dual vector.
    """
    if seed is None:
        _, witnesses = _canonical_components(game)
        weights = [1] * len(witnesses)
    else:
        rng = random.Random(seed)
        order = list(triples(game))
        rng.shuffle(order)
        _, witnesses = _component_witnesses(game, order)
        weights = [rng.randint(1, 9) for _ in witnesses]
    avg = [sum((Fraction(w) * x[j] for w, x in zip(weights, witnesses)), Fraction(0)) / sum(weights)
           for j in range(len(witnesses[0]))]
    return profile_from_vector(game, avg)


def is_full(game: Game, alpha) -> bool:
    alpha = check_deviation_profile(game, alpha)
    return is_dual_vector(game, alpha) and support_of(game, alpha) == component_support(game)


def is_strong(game: Game, alpha) -> bool:
    """Dual vector with ``D(c, α) > 0`` on every profile that has probability zero in all CE."""
    alpha = check_deviation_profile(game, alpha)
    table = gains(game, alpha).total
    if any(d < 0 for d in table):
        return False
    return all(table[k] > 0 for k in zero_probability_profiles(game))


@lru_cache(maxsize=4096)
def strong_dual_vector(game: Game) -> DeviationProfile:
    zero = sorted(zero_probability_profiles(game))
    if not zero:
        return trivial_dual_vector(game)
    t, x = _lp.max_min_slack(dual_system(game), [gain_row(game, k) for k in zero])
    if t <= 0:
        raise RuntimeError("no strong dual vector found; the LP solver returned a non-positive slack")
    return profile_from_vector(game, x)


def strong_full_dual_vector(game: Game, seed: int | None = None) -> DeviationProfile:
    alpha = combine([1, 1], [full_dual_vector(game, seed), strong_dual_vector(game)])
    if not (is_full(game, alpha) and is_strong(game, alpha)):
        raise RuntimeError("strong+full combination failed verification")
    return alpha


def epsilon_blend(plan, eps) -> DeviationPlan:
    """``α^ε * c = ε (α * c) + (1 - ε) c``; same stationary strategies as ``plan``."""
    eps = as_rational(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    m = len(plan)
    plan = check_plan(plan, m)
    return tuple(tuple(eps * a + (1 - eps) * (c == d) for d, a in enumerate(row))
                 for c, row in enumerate(plan))


def rescaled_dual_vector(game: Game, alpha, r: Rescaling) -> DeviationProfile:
    """Turn a dual vector of ``game`` into one of ``rescale(game, r)``.

    Player ``i``'s plan is blended with ``ε_i = min_j a_j / a_i``; then
    ``D'(c, α') = (min_j a_j) D(c, α)`` for every profile.
    """
    alpha = check_deviation_profile(game, alpha)
    if not is_dual_vector(game, alpha):
        raise NotADualVector("alpha is not a dual vector of the unscaled game")
    if len(r.scale) != game.n_players:
        raise GameError("rescaling does not match the game")
    low = min(r.scale)
    return tuple(epsilon_blend(plan, low / a) for plan, a in zip(alpha, r.scale))


def _value_lp(game: Game, player: int) -> _lp.LinearProgram:
    """maximin LP for ``player`` in a two-player game: variables ``(x..., v)``."""
    m = game.shape[player]
    other = 1 - player
    cons = []
    for d in range(game.shape[other]):
        row = []
        for c in range(m):
            prof = (c, d) if player == 0 else (d, c)
            row.append(game.utility(prof, player))
        cons.append(_lp.Constraint(tuple(row) + (Fraction(-1),), _lp.GE, 0))
    cons.append(_lp.Constraint((1,) * m + (0,), _lp.EQ, 1))
    obj = (0,) * m + (1,)
    return _lp.LinearProgram(m + 1, tuple(cons), obj, "max", (Fraction(0),) * m + (None,))


def maximin(game: Game, player: int) -> tuple[Fraction, MixedStrategy]:
    """``(guaranteed payoff, optimal strategy)`` of ``player`` in a two-player game."""
    if game.n_players != 2:
        raise GameError("maximin strategies are defined here for two-player games")
    out = _lp.solve(_value_lp(game, player))
    return out.value, out.point[:-1]


def guarantee(game: Game, player: int, sigma) -> Fraction:
    """Worst-case payoff of mixed strategy ``sigma`` for ``player``."""
    other = 1 - player
    vals = []
    for d in range(game.shape[other]):
        total = Fraction(0)
        for c, w in enumerate(sigma):
            if w:
                prof = (c, d) if player == 0 else (d, c)
                total += w * game.utility(prof, player)
        vals.append(total)
    return min(vals)


def zero_sum_dual_vector(game: Game, opt1=None, opt2=None) -> DeviationProfile:
    """Send every strategy of each player to that player's optimal strategy.

    Missing optimal strategies come from the value LP. Supplied ones are
    checked for exact optimality.
    """
    if game.n_players != 2 or not game.is_zero_sum():
        raise GameError("zero_sum_dual_vector needs a two-player zero-sum game")
    v1, s1 = maximin(game, 0)
    v2, s2 = maximin(game, 1)
    if v1 + v2 != 0:
        raise RuntimeError("value LPs disagree; solver bug")
    if opt1 is None:
        opt1 = s1
    if opt2 is None:
        opt2 = s2
    opt1 = check_distribution(opt1, game.shape[0], "optimal strategy of player 0")
    opt2 = check_distribution(opt2, game.shape[1], "optimal strategy of player 1")
    if guarantee(game, 0, opt1) != v1:
        raise ValueError("opt1 is not an optimal strategy")
    if guarantee(game, 1, opt2) != v2:
        raise ValueError("opt2 is not an optimal strategy")
    alpha = (tuple(opt1 for _ in range(game.shape[0])), tuple(opt2 for _ in range(game.shape[1])))
    assert is_dual_vector(game, alpha)
    return alpha


def equivalent_mixture(game: Game, player: int, strategy: int, among: Sequence[int]):
    """A mixture over ``among`` giving ``player`` exactly the payoffs of ``strategy``, or ``None``."""
    among = list(among)
    if not among:
        return None
    cons = []
    for c in game.opponent_profiles(player):
        row = tuple(game.utility(deviate(c, player, d), player) for d in among)
        cons.append(_lp.Constraint(row, _lp.EQ, game.utility(deviate(c, player, strategy), player)))
    cons.append(_lp.Constraint((1,) * len(among), _lp.EQ, 1))
    out = _lp.solve(_lp.LinearProgram(len(among), tuple(cons)))
    if not out.optimal:
        return None
    sigma = [Fraction(0)] * game.shape[player]
    for d, w in zip(among, out.point):
        sigma[d] = w
    return tuple(sigma)


def redundancy_dual_vector(game: Game) -> tuple[DeviationProfile, tuple[tuple[int, ...], ...]]:
    """Remove strategies payoff-equivalent (for their owner) to mixtures of the others.

    Strategies are scanned in index order; each is tested against the
    strategies still present. Returns the dual vector and, per player, the
    removed strategies. Reducing by the dual vector restricts the game to the
    remaining strategies.
    """
    alpha, removed_all = [], []
    for i, m in enumerate(game.shape):
        keep = list(range(m))
        order, mix = [], {}
        for c in range(m):
            sigma = equivalent_mixture(game, i, c, [d for d in keep if d != c])
            if sigma is not None:
                keep.remove(c)
                order.append(c)
                mix[c] = sigma
        # re-express mixtures over strategies removed later; each mixture only
        # involves strategies present at its own removal time
        for c in reversed(order):
            sigma = list(mix[c])
            for d in order:
                if d != c and sigma[d]:
                    w, sigma[d] = sigma[d], Fraction(0)
                    for e, x in enumerate(mix[d]):
                        sigma[e] += w * x
            mix[c] = tuple(sigma)
        plan = tuple(mix[c] if c in mix else pure(m, c) for c in range(m))
        alpha.append(plan)
        removed_all.append(tuple(order))
    alpha = tuple(alpha)
    assert is_dual_vector(game, alpha)
    return alpha, tuple(removed_all)


def permute_deviation_profile(alpha: DeviationProfile, p) -> DeviationProfile:
    """``α^p`` with ``α^p_{p(i)} = α_i``."""
    out = [None] * len(alpha)
    for i, plan in enumerate(alpha):
        out[p[i]] = plan
    return tuple(out)


def symmetrize(game: Game, perms, alpha) -> DeviationProfile:
    """Average ``α^p`` over the closure of ``perms``."""
    alpha = check_deviation_profile(game, alpha)
    perms = [check_permutation(p, game.n_players) for p in perms]
    group = sorted(permutation_closure(perms, game.n_players))
    for p in group:
        if not is_p_symmetric(game, p):
            raise GameError(f"game is not symmetric under permutation {p}")
    if not is_dual_vector(game, alpha):
        raise NotADualVector("alpha is not a dual vector")
    images = [permute_deviation_profile(alpha, p) for p in group]
    return combine([1] * len(images), images)


DUAL_MODES = ("trivial", "full", "strong", "strong-full", "zero-sum", "redundancy")


def dual_vector_for(game: Game, mode: str, seed: int | None = None) -> DeviationProfile:
    """Dual vector by mode name (one of ``DUAL_MODES``)."""
    if mode == "trivial":
        return trivial_dual_vector(game)
    if mode == "full":
        return full_dual_vector(game, seed)
    if mode == "strong":
        return strong_dual_vector(game)
    if mode in ("strong-full", "strong_full"):
        return strong_full_dual_vector(game, seed)
    if mode == "zero-sum":
        return zero_sum_dual_vector(game)
    if mode == "redundancy":
        return redundancy_dual_vector(game)[0]
    raise ValueError(f"unknown mode {mode!r}; expected one of {DUAL_MODES}")
