from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import GAMES_DIR, bundled
from dualreduce.game import Game
from dualreduce.gamefile import (ParseError, SplitMix64, format_rational, gen_game, parse_correlated,
                                 parse_deviation_profile, parse_game, parse_mixed_profile, parse_rational,
                                 write_game)
from dualreduce.reduction import reduce
from strategies import games

MP_TEXT = """game mp
players 2
actions 2 2
payoffs
1 -1
-1 1
-1 1
1 -1
"""


def test_parse_matching_pennies(mp):
    g = parse_game(MP_TEXT)
    assert g.payoffs == mp.payoffs and g.labels == (("s0", "s1"), ("s0", "s1"))
    assert parse_game(write_game(g)) == g


def test_trivial_and_comments():
    g = parse_game("# header\ngame one   # trailing\nplayers 2\nactions 1 1\npayoffs\n0 0\n")
    assert g.shape == (1, 1) and g.payoffs == ((0, 0),)


@pytest.mark.parametrize("text, message", [
    (MP_TEXT.replace("1 -1\n", "", 1), "expected 4 payoff rows, found 3"),
    (MP_TEXT + "1 1\n", "expected 4 payoff rows, found 5"),
    (MP_TEXT.replace("-1 1\n", "-1 1/0\n", 1), "zero denominator"),
    (MP_TEXT.replace("-1 1\n", "-1 0.5\n", 1), "not a rational literal"),
    (MP_TEXT.replace("payoffs", "labels a a\nlabels b c\npayoffs"), "duplicate labels"),
    (MP_TEXT.replace("players 2", "player 2"), "expected 'players'"),
    (MP_TEXT.replace("actions 2 2", "actions 2"), "lists 1 counts for 2 players"),
])
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_game(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_game(MP_TEXT.replace("-1 1\n", "-1 x\n", 1))
    assert exc.value.line == 6 and exc.value.column == 4


def test_rationals():
    assert parse_rational("-3/6") == Fraction(-1, 2) and parse_rational("+7") == 7
    assert format_rational(Fraction(2, 4)) == "1/2" and format_rational(Fraction(-3)) == "-3"


def test_rational_payoffs_serialize(indifferent):
    red = reduce(indifferent, (((1,),), ((Fraction(1, 3), Fraction(2, 3)),) * 2))
    assert write_game(red.game).splitlines()[-1] == "1/3 1"
    assert parse_game(write_game(red.game)) == red.game


def test_bundled_round_trip():
    files = sorted(GAMES_DIR.glob("*.game"))
    assert len(files) >= 5
    for path in files:
        g = bundled(path.stem)
        assert parse_game(write_game(g)) == g
        assert write_game(parse_game(write_game(g))) == write_game(g)


@given(games())
@settings(max_examples=50)
def test_round_trip_generated(g):
    assert parse_game(write_game(g)) == g


def test_companion_files(mp):
    assert parse_mixed_profile("1/2 1/2\n1 0\n", mp) == ((Fraction(1, 2),) * 2, (1, 0))
    assert parse_correlated("1/4 1/4\n1/4 1/4\n", mp) == (Fraction(1, 4),) * 4
    alpha = parse_deviation_profile("1 0\n0 1\n1/2 1/2\n1/2 1/2\n", mp)
    assert alpha[1][0] == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ParseError):
        parse_mixed_profile("1\n1 0\n", mp)
    with pytest.raises(ParseError):
        parse_correlated("1 0 0\n", mp)


def test_splitmix64_reference_vectors():
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF
    r = SplitMix64(1234567)
    assert [r.next() for _ in range(3)] == [6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_generator_pinned():
    g = gen_game(42, (2, 2))
    assert g.name == "gen-42"
    assert g.payoffs == ((0, 6), (-5, 4), (6, -6), (0, 7))


def test_generator_properties():
    assert gen_game(5, (2, 3)) == gen_game(5, (2, 3))
    assert gen_game(5, (2, 3)).payoffs != gen_game(6, (2, 3)).payoffs
    zero = gen_game(9, (2, 2), 0, 0)
    assert zero == Game((2, 2), [(0, 0)] * 4, name="gen-9")
    assert all(-2 <= u <= 2 for row in gen_game(3, (3, 3), -2, 2).payoffs for u in row)
