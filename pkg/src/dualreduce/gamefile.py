"""Plain-text game files, companion strategy files, and the seeded game generator.

Game file grammar (line oriented, ``#`` starts a comment)::

    game <name>
    players <n>
    actions <m_1> ... <m_n>
    labels <l_1> ... <l_m1>        # optional; all n lines or none
    ...
    payoffs
    <u_1> ... <u_n>                # one row per profile, last player fastest

Rationals are integers or ``p/q`` in base 10.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .game import Game, GameError

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_MASK64 = (1 << 64) - 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column is not None else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)


def parse_rational(token: str, line: int | None = None, column: int | None = None) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"not a rational literal: {token!r}", line, column)
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {token!r}", line, column)
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def _tokens(text: str):
    """Yield ``(line_no, [(column, token), ...])`` for non-empty lines, comments stripped."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield no, toks


def parse_game(text: str) -> Game:
    lines = list(_tokens(text))
    pos = 0

    def expect(keyword):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of file, expected '{keyword}'")
        no, toks = lines[pos]
        if toks[0][1] != keyword:
            raise ParseError(f"expected '{keyword}', found {toks[0][1]!r}", no, toks[0][0])
        pos += 1
        return no, toks[1:]

    def integer(no, col, tok, what):
        if not tok.isdigit():
            raise ParseError(f"{what} must be a positive integer, got {tok!r}", no, col)
        value = int(tok)
        if value < 1:
            raise ParseError(f"{what} must be positive", no, col)
        return value

    no, rest = expect("game")
    if not rest:
        raise ParseError("missing game name", no)
    name = " ".join(t for _, t in rest)
    no, rest = expect("players")
    if len(rest) != 1:
        raise ParseError("'players' takes exactly one count", no)
    n = integer(no, rest[0][0], rest[0][1], "player count")
    no, rest = expect("actions")
    if len(rest) != n:
        raise ParseError(f"'actions' lists {len(rest)} counts for {n} players", no)
    shape = tuple(integer(no, c, t, "action count") for c, t in rest)
    labels = []
    while pos < len(lines) and lines[pos][1][0][1] == "labels":
        no, rest = lines[pos]
        pos += 1
        i = len(labels)
        if i >= n:
            raise ParseError(f"more than {n} 'labels' lines", no)
        toks = [t for _, t in rest[1:]]
        if len(toks) != shape[i]:
            raise ParseError(f"player {i} has {shape[i]} actions but {len(toks)} labels", no)
        if len(set(toks)) != len(toks):
            raise ParseError(f"duplicate labels for player {i}", no)
        for c, t in rest[1:]:
            if ";" in t:
                raise ParseError(f"label {t!r} contains ';'", no, c)
        labels.append(tuple(toks))
    if labels and len(labels) != n:
        raise ParseError(f"expected {n} 'labels' lines, found {len(labels)}")
    no, rest = expect("payoffs")
    if rest:
        raise ParseError("'payoffs' takes no arguments", no, rest[0][0])
    size = 1
    for m in shape:
        size *= m
    body = lines[pos:]
    if len(body) != size:
        raise ParseError(f"expected {size} payoff rows, found {len(body)}",
                         body[size][0] if len(body) > size else None)
    rows = []
    for no, toks in body:
        if len(toks) != n:
            raise ParseError(f"payoff row has {len(toks)} entries, expected {n}", no)
        rows.append(tuple(parse_rational(t, no, c) for c, t in toks))
    try:
        return Game(shape, rows, tuple(labels) if labels else None, name)
    except GameError as exc:
        raise ParseError(str(exc)) from exc


def write_game(game: Game) -> str:
    out = [f"game {game.name}", f"players {game.n_players}",
           "actions " + " ".join(str(m) for m in game.shape)]
    for ls in game.labels:
        out.append("labels " + " ".join(ls))
    out.append("payoffs")
    for row in game.payoffs:
        out.append(" ".join(format_rational(u) for u in row))
    return "\n".join(out) + "\n"


def load_game(path) -> Game:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read())


def _numbers(text: str) -> list[tuple[int, list[Fraction]]]:
    return [(no, [parse_rational(t, no, c) for c, t in toks]) for no, toks in _tokens(text)]


def parse_mixed_profile(text: str, game: Game):
    """One line of weights per player."""
    rows = _numbers(text)
    if len(rows) != game.n_players:
        raise ParseError(f"expected {game.n_players} lines of weights, found {len(rows)}")
    for (no, row), m in zip(rows, game.shape):
        if len(row) != m:
            raise ParseError(f"expected {m} weights, found {len(row)}", no)
    return tuple(tuple(r) for _, r in rows)


def parse_correlated(text: str, game: Game):
    """``|C|`` weights in profile order, split across lines freely."""
    flat = [q for _, row in _numbers(text) for q in row]
    if len(flat) != game.n_profiles:
        raise ParseError(f"expected {game.n_profiles} weights, found {len(flat)}")
    return tuple(flat)


def parse_deviation_profile(text: str, game: Game):
    """Rows ``α_i * c_i`` for player 0's strategies, then player 1's, and so on."""
    rows = _numbers(text)
    need = sum(game.shape)
    if len(rows) != need:
        raise ParseError(f"expected {need} plan rows, found {len(rows)}")
    out, k = [], 0
    for m in game.shape:
        plan = []
        for _ in range(m):
            no, row = rows[k]
            if len(row) != m:
                raise ParseError(f"plan row has {len(row)} entries, expected {m}", no)
            plan.append(tuple(row))
            k += 1
        out.append(tuple(plan))
    return tuple(out)


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea, Flood); the state advances by the golden gamma."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish integer in ``[0, n)`` by plain reduction modulo ``n``."""
        return self.next() % n


def gen_game(seed: int, shape: Sequence[int], low: int = -9, high: int = 9, name: str | None = None) -> Game:
    """Deterministic integer-payoff game.

    Draws one SplitMix64 output per payoff, profiles in file order and
    players innermost: ``u = low + next() % (high - low + 1)``.
    """
    shape = tuple(int(m) for m in shape)
    if not shape or any(m < 1 for m in shape):
        raise GameError(f"invalid action counts {shape}")
    if high < low:
        raise GameError(f"empty payoff range [{low}, {high}]")
    rng = SplitMix64(seed)
    span = high - low + 1
    size = 1
    for m in shape:
        size *= m
    rows = [tuple(low + rng.below(span) for _ in shape) for _ in range(size)]
    return Game(shape, rows, None, name or f"gen-{seed}")
