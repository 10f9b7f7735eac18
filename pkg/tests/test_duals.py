import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HALF
from dualreduce import ce, duals
from dualreduce.duals import (NotADualVector, apply_plan, component_support, epsilon_blend, full_dual_vector, gains,
                              is_dual_vector, is_full, is_strong, redundancy_dual_vector, rescaled_dual_vector,
                              strong_dual_vector, strong_full_dual_vector, symmetrize, trivial_dual_vector,
                              zero_sum_dual_vector)
from dualreduce.game import Game, GameError, Rescaling, expected_utility, pure, uniform
from dualreduce.reduction import markov_decompose, reduce
from strategies import deviation_profiles, games, mixed_profiles

UNIFORM_MP = (((HALF, HALF), (HALF, HALF)), ((HALF, HALF), (HALF, HALF)))
DOMINATED = Game.bimatrix([[(3, 3), (0, 4)], [(4, 0), (1, 1)]])


def test_gain_examples(mp, mp_rescaled):
    assert gains(mp, trivial_dual_vector(mp)).total == (0,) * 4
    assert gains(mp, UNIFORM_MP).total == (0,) * 4
    table = gains(mp_rescaled, UNIFORM_MP)
    assert table.per_player[0] == (-2, 1) and table.total[0] == -1
    assert is_dual_vector(mp, UNIFORM_MP) and not is_dual_vector(mp_rescaled, UNIFORM_MP)


def test_plan_validation(mp):
    with pytest.raises(GameError):
        duals.check_deviation_profile(mp, (((1, 0), (1, 0)),))
    with pytest.raises(GameError):
        duals.check_deviation_profile(mp, (((1, 1), (1, 0)), ((1, 0), (0, 1))))


def test_component_support_examples(mp, weak_dom):
    assert component_support(mp) == frozenset(ce.triples(mp))
    supp = component_support(weak_dom)
    assert (0, 0, 1) in supp and (0, 1, 0) in supp and (1, 0, 1) not in supp and (1, 1, 0) in supp


def test_full_dual_vector_examples(mp, weak_dom, coordination):
    assert full_dual_vector(coordination) == trivial_dual_vector(coordination)
    alpha = full_dual_vector(mp)
    assert all(a > 0 for plan in alpha for row in plan for a in row)
    wd = full_dual_vector(weak_dom)
    assert wd[1][1][0] > 0 and wd[0][0][1] > 0 and wd[0][1][0] > 0
    assert is_full(weak_dom, wd)


def test_strong_examples(mp, weak_dom):
    assert strong_dual_vector(mp) == trivial_dual_vector(mp)
    s = gains(weak_dom, strong_dual_vector(weak_dom)).total
    assert s[1] > 0 and s[3] > 0
    d = gains(DOMINATED, strong_dual_vector(DOMINATED)).total
    assert all(d[k] > 0 for k in ce.zero_probability_profiles(DOMINATED))
    for g in (mp, weak_dom, DOMINATED):
        sf = strong_full_dual_vector(g)
        assert is_strong(g, sf) and is_full(g, sf)


def test_zero_sum_examples(mp):
    assert reduce(mp, zero_sum_dual_vector(mp, uniform(2), uniform(2))).game.payoffs == ((0, 0),)
    saddle = Game.bimatrix([[(2, -2), (3, -3)], [(1, -1), (0, 0)]])
    alpha = zero_sum_dual_vector(saddle)
    assert alpha[0] == (pure(2, 0), pure(2, 0)) and alpha[1] == (pure(2, 0), pure(2, 0))
    assert reduce(saddle, alpha).game.payoffs == ((2, -2),)
    flat = Game((1, 2), [(0, 0), (0, 0)])
    assert reduce(flat, zero_sum_dual_vector(flat)).game.shape == (1, 1)
    with pytest.raises(ValueError):
        zero_sum_dual_vector(mp, pure(2, 0), uniform(2))
    with pytest.raises(GameError):
        zero_sum_dual_vector(Game.bimatrix([[(1, 1)]]))


def test_rescaled_dual_vector_examples(mp, mp_rescaled):
    assert rescaled_dual_vector(mp, UNIFORM_MP, Rescaling((3, 3))) == UNIFORM_MP
    a2 = rescaled_dual_vector(mp, UNIFORM_MP, Rescaling((2, 1)))
    assert a2[0] == ((Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 4), Fraction(3, 4))) and a2[1] == UNIFORM_MP[1]
    assert gains(mp_rescaled, a2).total == (0,) * 4
    with pytest.raises(NotADualVector):
        rescaled_dual_vector(mp_rescaled, UNIFORM_MP, Rescaling((1, 1)))


def test_epsilon_blend():
    plan = ((Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 3), Fraction(2, 3)))
    assert epsilon_blend(plan, 1) == plan
    with pytest.raises(ValueError):
        epsilon_blend(plan, 0)


def test_redundancy_examples(three_col, coordination):
    alpha, removed = redundancy_dual_vector(coordination)
    assert removed == ((), ()) and alpha == trivial_dual_vector(coordination)
    alpha, removed = redundancy_dual_vector(three_col)
    assert removed == ((), (0,)) and alpha[1][0] == (0, HALF, HALF)
    dup = Game.bimatrix([[(1, 2), (1, 2), (0, 5)], [(3, 1), (3, 1), (2, 0)]])
    alpha, removed = redundancy_dual_vector(dup)
    assert removed == ((), (0,)) and reduce(dup, alpha).game.shape == (2, 2)


def test_symmetrize_examples(coordination):
    alpha = strong_full_dual_vector(coordination)
    assert symmetrize(coordination, [(0, 1)], alpha) == alpha
    bar = symmetrize(coordination, [(1, 0)], alpha)
    assert bar[0] == bar[1]
    with pytest.raises(GameError):
        symmetrize(Game.bimatrix([[(1, 0), (0, 0)], [(0, 0), (0, 0)]]), [(1, 0)], trivial_dual_vector(coordination))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_identity_and_specialization(data):
    g = data.draw(games())
    sigma = data.draw(mixed_profiles(g))
    alpha = data.draw(deviation_profiles(g))
    table = gains(g, alpha).total
    lhs = sum((w * d for (c, w), d in zip(_weights(g, sigma), table)), Fraction(0))

    def moved(j):
        s = list(sigma)
        s[j] = apply_plan(alpha[j], sigma[j])
        return expected_utility(g, tuple(s), j) - expected_utility(g, sigma, j)

    assert lhs == sum((moved(j) for j in range(g.n_players)), Fraction(0))
    # with every other plan fixing its σ_j the identity collapses onto player i
    i = data.draw(st.integers(0, g.n_players - 1))
    fixed = tuple(plan if j == i else tuple(sigma[j] for _ in range(g.shape[j])) for j, plan in enumerate(alpha))
    table = gains(g, fixed).total
    lhs = sum((w * d for (c, w), d in zip(_weights(g, sigma), table)), Fraction(0))
    s = list(sigma)
    s[i] = apply_plan(alpha[i], sigma[i])
    assert lhs == expected_utility(g, tuple(s), i) - expected_utility(g, sigma, i)


def _weights(g, sigma):
    for c in g.profiles():
        w = Fraction(1)
        for j, cj in enumerate(c):
            w *= sigma[j][cj]
        yield c, w


@given(games())
@settings(max_examples=40, deadline=None)
def test_full_and_strong_vectors(g):
    assert is_dual_vector(g, trivial_dual_vector(g))
    supp = component_support(g)
    assert supp == ce.jeopardy(g)
    assert duals.support_of(g, full_dual_vector(g)) == supp
    assert duals.support_of(g, full_dual_vector(g, seed=5)) == supp
    sf = strong_full_dual_vector(g, seed=3)
    assert is_strong(g, sf) and is_full(g, sf)


@given(games())
@settings(max_examples=40, deadline=None)
def test_strong_dual_best_response_lemma(g):
    alpha = strong_full_dual_vector(g)
    decomps = [markov_decompose(plan) for plan in alpha]
    coherent = ce.coherent_strategies(g)
    for i, m in enumerate(g.shape):
        for choice in _stationary_choices(decomps):
            for c in range(m):
                if c in coherent[i]:
                    continue
                here = list(choice)
                here[i] = pure(m, c)
                there = list(choice)
                there[i] = alpha[i][c]
                assert expected_utility(g, tuple(here), i) < expected_utility(g, tuple(there), i)


def _stationary_choices(decomps):
    return itertools.product(*(d.stationary for d in decomps))
