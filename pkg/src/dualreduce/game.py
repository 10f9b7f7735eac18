"""Finite normal-form games with exact rational payoffs.

Profiles are tuples of strategy indices, one per player. Every enumeration of
profiles in this package is lexicographic with the last player's index varying
fastest, so a profile's position in ``Game.profiles()`` is its flat index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Profile = tuple[int, ...]
MixedStrategy = tuple[Fraction, ...]
MixedProfile = tuple[MixedStrategy, ...]
CorrelatedStrategy = tuple[Fraction, ...]
Block = tuple[tuple[int, ...], ...]
PlayerPermutation = tuple[int, ...]


class GameError(ValueError):
    """Raised for malformed games, profiles or strategies."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise GameError(f"refusing float {value!r}: use an int, Fraction or 'p/q' string")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise GameError(f"not a rational: {value!r}") from exc


def default_labels(shape: Sequence[int]) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(f"s{k}" for k in range(m)) for m in shape)


@dataclass(frozen=True)
class Game:
    """An n-player game ``(N, (C_i), (U_i))``.

    ``payoffs[k]`` holds the payoff vector of the k-th profile in
    last-player-fastest order.
    """

    shape: tuple[int, ...]
    payoffs: tuple[tuple[Fraction, ...], ...]
    labels: tuple[tuple[str, ...], ...] = None
    name: str = "game"
    _strides: tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        shape = tuple(int(m) for m in self.shape)
        if not shape:
            raise GameError("a game needs at least one player")
        if any(m < 1 for m in shape):
            raise GameError(f"every player needs at least one strategy, got shape {shape}")
        n = len(shape)
        size = 1
        for m in shape:
            size *= m
        rows = tuple(tuple(as_rational(u) for u in row) for row in self.payoffs)
        if len(rows) != size:
            raise GameError(f"expected {size} payoff rows, found {len(rows)}")
        for k, row in enumerate(rows):
            if len(row) != n:
                raise GameError(f"payoff row {k} has {len(row)} entries, expected {n}")
        labels = self.labels if self.labels is not None else default_labels(shape)
        labels = tuple(tuple(str(s) for s in ls) for ls in labels)
        if len(labels) != n:
            raise GameError(f"expected labels for {n} players, got {len(labels)}")
        for i, (ls, m) in enumerate(zip(labels, shape)):
            if len(ls) != m:
                raise GameError(f"player {i} has {m} strategies but {len(ls)} labels")
            if len(set(ls)) != m:
                raise GameError(f"duplicate strategy labels for player {i}: {ls}")
        strides = [1] * n
        for i in range(n - 2, -1, -1):
            strides[i] = strides[i + 1] * shape[i + 1]
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "payoffs", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_strides", tuple(strides))

    @classmethod
    def from_function(cls, shape, utility, labels=None, name="game") -> "Game":
        """Build a game from ``utility(profile) -> payoff vector``."""
        shape = tuple(shape)
        rows = [tuple(utility(c)) for c in itertools.product(*(range(m) for m in shape))]
        return cls(shape, rows, labels, name)

    @classmethod
    def bimatrix(cls, rows, labels=None, name="game") -> "Game":
        """Two-player game from a matrix of ``(u1, u2)`` pairs, ``rows[c1][c2]``."""
        m1 = len(rows)
        m2 = len(rows[0]) if m1 else 0
        if any(len(r) != m2 for r in rows):
            raise GameError("ragged bimatrix")
        return cls((m1, m2), [tuple(cell) for r in rows for cell in r], labels, name)

    @property
    def n_players(self) -> int:
        return len(self.shape)

    @property
    def n_profiles(self) -> int:
        return len(self.payoffs)

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*(range(m) for m in self.shape))

    def index(self, profile: Profile) -> int:
        return sum(c * s for c, s in zip(profile, self._strides))

    def profile(self, k: int) -> Profile:
        out = []
        for s, m in zip(self._strides, self.shape):
            out.append((k // s) % m)
        return tuple(out)

    def utility(self, profile: Profile, player: int) -> Fraction:
        return self.payoffs[self.index(profile)][player]

    def payoff_vector(self, profile: Profile) -> tuple[Fraction, ...]:
        return self.payoffs[self.index(profile)]

    def stride(self, player: int) -> int:
        return self._strides[player]

    def opponent_profiles(self, player: int) -> Iterator[Profile]:
        """Opponent profiles ``c_{-i}`` as full profiles with slot ``player`` set to 0."""
        ranges = [range(m) if j != player else (0,) for j, m in enumerate(self.shape)]
        return itertools.product(*ranges)

    def label(self, player: int, strategy: int) -> str:
        return self.labels[player][strategy]

    def strategy_index(self, player: int, label: str) -> int:
        try:
            return self.labels[player].index(label)
        except ValueError:
            raise GameError(f"player {player} has no strategy {label!r}") from None

    def is_zero_sum(self) -> bool:
        return all(sum(row) == 0 for row in self.payoffs)

    def __str__(self) -> str:
        return f"Game({self.name!r}, shape={'x'.join(map(str, self.shape))})"


def deviate(profile: Profile, player: int, strategy: int) -> Profile:
    """The profile ``(c_{-i}, d_i)``."""
    return profile[:player] + (strategy,) + profile[player + 1:]


def pure(m: int, k: int) -> MixedStrategy:
    """Degenerate mixed strategy on strategy ``k`` out of ``m``."""
    return tuple(Fraction(int(j == k)) for j in range(m))


def uniform(m: int) -> MixedStrategy:
    return tuple(Fraction(1, m) for _ in range(m))


def support(weights: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(k for k, w in enumerate(weights) if w != 0)


def check_distribution(weights, size: int, what: str = "distribution") -> tuple[Fraction, ...]:
    w = tuple(as_rational(x) for x in weights)
    if len(w) != size:
        raise GameError(f"{what} has {len(w)} weights, expected {size}")
    if any(x < 0 for x in w):
        raise GameError(f"{what} has a negative weight")
    if sum(w) != 1:
        raise GameError(f"{what} sums to {sum(w)}, not 1")
    return w


def check_mixed_profile(game: Game, sigma) -> MixedProfile:
    if len(sigma) != game.n_players:
        raise GameError(f"mixed profile has {len(sigma)} strategies, game has {game.n_players} players")
    return tuple(check_distribution(s, m, f"mixed strategy of player {i}")
                 for i, (s, m) in enumerate(zip(sigma, game.shape)))


def check_correlated(game: Game, mu) -> CorrelatedStrategy:
    return check_distribution(mu, game.n_profiles, "correlated strategy")


def profile_weights(sigma: MixedProfile) -> Iterator[tuple[Profile, Fraction]]:
    """Nonzero ``(c, prod_j sigma_j(c_j))`` pairs, in profile order."""
    supports = [[(k, w) for k, w in enumerate(s) if w != 0] for s in sigma]
    for combo in itertools.product(*supports):
        weight = Fraction(1)
        for _, w in combo:
            weight *= w
        yield tuple(k for k, _ in combo), weight


def product_distribution(game: Game, sigma: MixedProfile) -> CorrelatedStrategy:
    """The correlated strategy induced by independent play of ``sigma``."""
    mu = [Fraction(0)] * game.n_profiles
    for c, w in profile_weights(sigma):
        mu[game.index(c)] = w
    return tuple(mu)


def expected_utility(game: Game, sigma, player: int) -> Fraction:
    """Multilinear extension of ``U_player`` at the mixed profile ``sigma``."""
    sigma = check_mixed_profile(game, sigma)
    if not 0 <= player < game.n_players:
        raise GameError(f"no player {player}")
    return sum((w * game.utility(c, player) for c, w in profile_weights(sigma)), Fraction(0))


def expected_payoffs(game: Game, sigma) -> tuple[Fraction, ...]:
    sigma = check_mixed_profile(game, sigma)
    totals = [Fraction(0)] * game.n_players
    for c, w in profile_weights(sigma):
        row = game.payoff_vector(c)
        for i in range(game.n_players):
            totals[i] += w * row[i]
    return tuple(totals)


def correlated_expected_utility(game: Game, mu, player: int) -> Fraction:
    mu = check_correlated(game, mu)
    if not 0 <= player < game.n_players:
        raise GameError(f"no player {player}")
    return sum((w * row[player] for w, row in zip(mu, game.payoffs) if w), Fraction(0))


def check_block(game: Game, block) -> Block:
    if len(block) != game.n_players:
        raise GameError(f"block has {len(block)} components, game has {game.n_players} players")
    out = []
    for i, (b, m) in enumerate(zip(block, game.shape)):
        b = tuple(sorted(set(int(k) for k in b)))
        if not b:
            raise GameError(f"block component of player {i} is empty")
        if b[0] < 0 or b[-1] >= m:
            raise GameError(f"block component of player {i} out of range: {b}")
        out.append(b)
    return tuple(out)


def full_block(game: Game) -> Block:
    return tuple(tuple(range(m)) for m in game.shape)


def restrict(game: Game, block) -> Game:
    """The subgame ``Γ_B``; strategy labels are carried over."""
    block = check_block(game, block)
    rows = [game.payoff_vector(c) for c in itertools.product(*block)]
    labels = tuple(tuple(game.labels[i][k] for k in b) for i, b in enumerate(block))
    return Game(tuple(len(b) for b in block), rows, labels, game.name)


@dataclass(frozen=True)
class Rescaling:
    """``U'_i(c) = scale[i] * U_i(c) + offset[i][c_{-i}]``.

    ``offset[i]`` maps opponent profiles (full profiles with slot ``i`` set to
    0) to rationals; missing keys mean 0.
    """

    scale: tuple[Fraction, ...]
    offset: tuple[Mapping[Profile, Fraction], ...] = None

    def __post_init__(self):
        scale = tuple(as_rational(a) for a in self.scale)
        if any(a <= 0 for a in scale):
            raise GameError(f"rescaling factors must be positive, got {scale}")
        offset = self.offset if self.offset is not None else tuple({} for _ in scale)
        if len(offset) != len(scale):
            raise GameError("rescaling scale/offset length mismatch")
        offset = tuple({tuple(k): as_rational(v) for k, v in dict(f).items()} for f in offset)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "offset", offset)

    def __hash__(self):
        return hash((self.scale, tuple(tuple(sorted(f.items())) for f in self.offset)))

    def offset_at(self, player: int, profile: Profile) -> Fraction:
        key = deviate(profile, player, 0)
        return self.offset[player].get(key, Fraction(0))


def rescale(game: Game, r: Rescaling) -> Game:
    if len(r.scale) != game.n_players:
        raise GameError(f"rescaling is for {len(r.scale)} players, game has {game.n_players}")
    rows = []
    for c, row in zip(game.profiles(), game.payoffs):
        rows.append(tuple(a * u + r.offset_at(i, c) for i, (a, u) in enumerate(zip(r.scale, row))))
    return Game(game.shape, rows, game.labels, game.name)


def check_permutation(p, n: int) -> PlayerPermutation:
    p = tuple(int(k) for k in p)
    if sorted(p) != list(range(n)):
        raise GameError(f"not a permutation of {n} players: {p}")
    return p


def permute_profile(profile: Profile, p: PlayerPermutation) -> Profile:
    """``c^p`` with ``c^p[p[i]] = c[i]``."""
    out = [0] * len(p)
    for i, ci in enumerate(profile):
        out[p[i]] = ci
    return tuple(out)


def _check_compatible(game: Game, p: PlayerPermutation) -> None:
    for i in range(game.n_players):
        if game.shape[i] != game.shape[p[i]]:
            raise GameError(
                f"players {i} and {p[i]} have different strategy counts; permutation not applicable")


def is_p_symmetric(game: Game, p) -> bool:
    """True iff ``U_{p(i)}(c^p) == U_i(c)`` for all players and profiles.

    Strategies of different players are identified by index; labels play no
    role.
    """
    p = check_permutation(p, game.n_players)
    _check_compatible(game, p)
    for c, row in zip(game.profiles(), game.payoffs):
        image = game.payoff_vector(permute_profile(c, p))
        if any(image[p[i]] != row[i] for i in range(game.n_players)):
            return False
    return True


def compose(p: PlayerPermutation, q: PlayerPermutation) -> PlayerPermutation:
    """``p ∘ q``."""
    return tuple(p[q[i]] for i in range(len(q)))


def permutation_closure(perms: Iterable[PlayerPermutation], n: int | None = None) -> frozenset:
    perms = [tuple(p) for p in perms]
    if n is None:
        if not perms:
            raise GameError("cannot infer the number of players from an empty set")
        n = len(perms[0])
    perms = [check_permutation(p, n) for p in perms]
    closed = {tuple(range(n))} | set(perms)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in perms:
                for c in (compose(a, b), compose(b, a)):
                    if c not in closed:
                        closed.add(c)
                        new.append(c)
        frontier = new
    return frozenset(closed)
