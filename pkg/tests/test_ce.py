from fractions import Fraction

import pytest
from hypothesis import given, settings

from dualreduce import ce
from dualreduce.game import Game
from dualreduce.lp import is_feasible
from strategies import games

TRIVIAL = Game((1, 1), [(0, 0)])
DOMINATED = Game.bimatrix([[(3, 3), (0, 4)], [(4, 0), (1, 1)]])   # first strategies strictly dominated


def point(g, profile):
    mu = [Fraction(0)] * g.n_profiles
    mu[g.index(profile)] = Fraction(1)
    return tuple(mu)


def test_system_layout(mp):
    system = ce.ce_system(mp)
    assert ce.n_incentive_rows(mp) == 8
    assert len(system.constraints) == 8 + 4 + 1
    zero_rows = [ic for ic in ce.incentive_constraints(mp) if ic.source == ic.target]
    assert len(zero_rows) == 4 and all(not any(ic.row) for ic in zero_rows)
    assert ce.triple_index(mp, 1, 1, 0) == 6
    assert ce.ce_system(TRIVIAL).is_feasible_point((1,))


def test_membership(mp, weak_dom):
    assert ce.is_correlated_equilibrium(mp, (Fraction(1, 4),) * 4)
    assert ce.violated_constraints(mp, point(mp, (0, 0))) == [(1, 0, 1)]
    assert ce.is_correlated_equilibrium(weak_dom, point(weak_dom, (0, 0)))


def test_jeopardy_examples(weak_dom, three_col, mp):
    assert ce.jeopardizes(mp, 0, 1, 1)
    assert ce.jeopardizes(weak_dom, 0, 0, 1) and ce.jeopardizes(weak_dom, 0, 1, 0)
    assert ce.jeopardizes(three_col, 1, 0, 1) and ce.jeopardizes(three_col, 1, 0, 2)
    assert not ce.jeopardizes(three_col, 1, 1, 2)
    with pytest.raises(ValueError):
        ce.jeopardizes(mp, 0, 0, 5)


def test_coherent_and_zero_profiles(mp, weak_dom):
    assert ce.coherent_strategies(mp) == ((0, 1), (0, 1))
    assert ce.coherent_strategies(weak_dom) == ((0, 1), (0,))
    assert ce.coherent_strategies(DOMINATED) == ((1,), (1,))
    assert ce.zero_probability_profiles(mp) == frozenset()
    assert ce.zero_probability_profiles(weak_dom) == {1, 3}


def test_classification_examples(mp, weak_dom, coordination):
    assert ce.is_elementary(TRIVIAL) and not ce.is_elementary(mp) and ce.is_elementary(coordination)
    assert ce.zero_probability_profiles(coordination) == frozenset()
    assert ce.is_tight(mp) and ce.is_tight(TRIVIAL) and not ce.is_tight(weak_dom)
    assert ce.is_pretight(weak_dom) and not ce.is_pretight(coordination)
    assert ce.ce_dimension(mp) == 0 and ce.ce_dimension(coordination) == 3 and ce.ce_dimension(TRIVIAL) == 0


def test_strictness(mp, weak_dom, coordination):
    assert ce.is_strict_ce(coordination, point(coordination, (0, 0)))
    assert not ce.is_strict_ce(mp, (Fraction(1, 4),) * 4)
    assert not ce.is_strict_ce(weak_dom, point(weak_dom, (0, 0)))
    with pytest.raises(ValueError):
        ce.is_strict_ce(mp, point(mp, (0, 0)))


def test_witness_is_relative_interior(weak_dom):
    mu = ce.witness_ce(weak_dom)
    assert ce.is_correlated_equilibrium(weak_dom, mu)
    assert {k for k, w in enumerate(mu) if w == 0} == ce.zero_probability_profiles(weak_dom)


def test_analyze_report(weak_dom):
    rep = ce.analyze(weak_dom)
    assert rep.is_pretight and not rep.is_elementary and rep.dimension == 1
    assert rep.jeopardy == (((0, 1), (1, 0)), ((1, 0),))


@given(games())
@settings(max_examples=60, deadline=None)
def test_region_nonempty_and_classification_consistent(g):
    assert is_feasible(ce.ce_system(g))
    mu = ce.witness_ce(g)
    assert ce.is_correlated_equilibrium(g, mu)
    if ce.is_elementary(g):
        assert all(not edges for edges in ce.jeopardy_graph(g))
        assert not ce.zero_probability_profiles(g)
        assert ce.ce_dimension(g) == g.n_profiles - 1
    if ce.is_tight(g):
        assert ce.is_pretight(g)
    if ce.is_pretight(g):
        for i, cs in enumerate(ce.coherent_strategies(g)):
            assert all(ce.jeopardizes(g, i, a, b) for a in cs for b in cs)
