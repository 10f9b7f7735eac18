from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HALF
from dualreduce.game import (Game, GameError, Rescaling, correlated_expected_utility, expected_utility,
                             full_block, is_p_symmetric, permutation_closure, permute_profile, pure, rescale,
                             restrict, uniform)
from strategies import games, mixed_profiles


def test_profile_order_last_player_fastest():
    g = Game((2, 3), [(k, 0) for k in range(6)])
    assert list(g.profiles())[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
    assert all(g.index(c) == k for k, c in enumerate(g.profiles()))
    assert all(g.profile(k) == c for k, c in enumerate(g.profiles()))
    assert g.utility((1, 0), 0) == 3


def test_rejects_malformed():
    with pytest.raises(GameError):
        Game((2, 2), [(0, 0)] * 3)
    with pytest.raises(GameError):
        Game((2,), [(0.5,), (1,)])
    with pytest.raises(GameError):
        Game((2, 1), [(0, 0), (0, 0)], labels=(("a", "a"), ("b",)))
    with pytest.raises(GameError):
        Game((0, 2), [])


def test_expected_utility_examples(mp, weak_dom):
    assert expected_utility(mp, (pure(2, 0), pure(2, 0)), 0) == 1
    assert expected_utility(mp, (uniform(2), uniform(2)), 0) == 0
    assert correlated_expected_utility(mp, (Fraction(1, 4),) * 4, 0) == 0
    mu = (HALF, 0, HALF, 0)
    assert correlated_expected_utility(weak_dom, mu, 1) == HALF


@given(games())
def test_degenerate_mixture_is_pure_payoff(g):
    for c in g.profiles():
        sigma = tuple(pure(m, ci) for m, ci in zip(g.shape, c))
        assert all(expected_utility(g, sigma, i) == g.utility(c, i) for i in range(g.n_players))


@given(st.data())
@settings(max_examples=50)
def test_expected_utility_is_multilinear(data):
    g = data.draw(games())
    sigma = data.draw(mixed_profiles(g))
    i = data.draw(st.integers(0, g.n_players - 1))
    j = data.draw(st.integers(0, g.n_players - 1))
    tau = data.draw(mixed_profiles(g))[j]

    def at(t):
        s = list(sigma)
        s[j] = tuple((1 - t) * a + t * b for a, b in zip(sigma[j], tau))
        return expected_utility(g, tuple(s), i)

    u0, u1, uh = at(Fraction(0)), at(Fraction(1)), at(Fraction(1, 3))
    assert uh == u0 + Fraction(1, 3) * (u1 - u0)


def test_restrict_examples(weak_dom, three_col):
    assert restrict(weak_dom, full_block(weak_dom)) == weak_dom
    sub = restrict(weak_dom, ((0, 1), (0,)))
    assert sub.shape == (2, 1) and sub.payoffs == ((1, 1), (1, 0))
    right = restrict(three_col, ((0, 1), (1, 2)))
    assert right.payoffs == ((1, 1), (-1, -1), (-1, -1), (1, 1))
    assert right.labels == (("y1", "z1"), ("y2", "z2"))


@given(st.data())
@settings(max_examples=40)
def test_restrict_twice_is_restrict_by_intersection(data):
    g = data.draw(games())
    b1 = tuple(tuple(sorted(data.draw(st.sets(st.integers(0, m - 1), min_size=1)))) for m in g.shape)
    b2 = tuple(tuple(sorted(data.draw(st.sets(st.integers(0, len(b) - 1), min_size=1)))) for b in b1)
    inner = tuple(tuple(b[k] for k in bb) for b, bb in zip(b1, b2))
    assert restrict(restrict(g, b1), b2).payoffs == restrict(g, inner).payoffs


def test_rescale_examples(mp, mp_rescaled):
    assert rescale(mp, Rescaling((1, 1))) == mp
    assert rescale(mp, Rescaling((2, 1))).payoffs == mp_rescaled.payoffs
    shifted = rescale(mp, Rescaling((1, 1), ({(0, 0): 5}, {})))
    assert shifted.utility((0, 0), 0) == 6 and shifted.utility((1, 0), 0) == 4
    assert shifted.utility((0, 1), 0) == -1
    with pytest.raises(GameError):
        Rescaling((0, 1))


@given(st.data())
@settings(max_examples=40)
def test_rescale_composes(data):
    g = data.draw(games())
    n = g.n_players

    def draw_rescaling():
        scale = tuple(Fraction(data.draw(st.integers(1, 4)), data.draw(st.integers(1, 3))) for _ in range(n))
        offset = tuple({c: Fraction(data.draw(st.integers(-3, 3))) for c in g.opponent_profiles(i)}
                       for i in range(n))
        return Rescaling(scale, offset)

    r1, r2 = draw_rescaling(), draw_rescaling()
    combined = Rescaling(tuple(a * b for a, b in zip(r1.scale, r2.scale)),
                         tuple({c: r2.scale[i] * r1.offset[i][c] + r2.offset[i][c] for c in r1.offset[i]}
                               for i in range(n)))
    assert rescale(rescale(g, r1), r2).payoffs == rescale(g, combined).payoffs


def test_p_symmetry_examples(mp, coordination):
    assert is_p_symmetric(mp, (0, 1))
    assert not is_p_symmetric(mp, (1, 0))
    assert is_p_symmetric(coordination, (1, 0))


def test_permutation_closure():
    assert permutation_closure([(0, 1)]) == {(0, 1)}
    assert permutation_closure([(1, 0)]) == {(0, 1), (1, 0)}
    assert permutation_closure([(1, 2, 0)]) == {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


@given(games(shapes=((2, 2), (3, 3), (2, 2, 2))), st.permutations([0, 1, 2]))
def test_p_symmetry_flag_matches_definition(g, perm):
    p = tuple(perm[:g.n_players]) if g.n_players == 3 else ((1, 0) if perm[0] else (0, 1))
    flag = is_p_symmetric(g, p)
    direct = all(g.utility(permute_profile(c, p), p[i]) == g.utility(c, i)
                 for c in g.profiles() for i in range(g.n_players))
    assert flag == direct
