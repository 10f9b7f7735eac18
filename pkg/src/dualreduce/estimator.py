"""Estimator-style facade over single and iterated dual reduction.

``fit`` computes the dual vector (or the whole reduction trace) for a game,
``transform`` returns the reduced game and ``inverse_transform`` lifts a
correlated strategy of the reduced game back to the fitted game.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .duals import DUAL_MODES, check_deviation_profile, dual_vector_for
from .game import GameError
from .reduction import iterate_to_elementary, reduce
from .validation import check_game, check_policy


class DualReducer(TransformerMixin, BaseEstimator):
    """One reduction stage ``Γ → Γ/α``.

    ``mode`` picks the dual vector; ``alpha`` (when given) overrides it with a
    caller-supplied deviation profile.
    """

    def __init__(self, mode: str = "full", seed: int | None = None, alpha=None):
        self.mode = mode
        self.seed = seed
        self.alpha = alpha

    def fit(self, game, y=None):
        game = check_game(game)
        if self.alpha is not None:
            alpha = check_deviation_profile(game, self.alpha)
        elif self.mode in DUAL_MODES:
            alpha = dual_vector_for(game, self.mode, self.seed)
        else:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {DUAL_MODES}")
        self.reduced_ = reduce(game, alpha)
        self.alpha_ = self.reduced_.alpha
        self.game_ = game
        return self

    def transform(self, game):
        check_is_fitted(self, "reduced_")
        if check_game(game) != self.game_:
            raise GameError("transform expects the game passed to fit")
        return self.reduced_.game

    def inverse_transform(self, mu):
        check_is_fitted(self, "reduced_")
        return self.reduced_.lift(mu)


class IterativeDualReducer(TransformerMixin, BaseEstimator):
    """Iterated reduction down to an elementary game."""

    def __init__(self, policy: str = "full", seed: int | None = None, max_stages: int | None = None):
        self.policy = policy
        self.seed = seed
        self.max_stages = max_stages

    def fit(self, game, y=None):
        game = check_game(game)
        self.trace_ = iterate_to_elementary(game, check_policy(self.policy), self.seed, self.max_stages)
        self.n_stages_ = len(self.trace_.stages)
        self.game_ = game
        return self

    def transform(self, game):
        check_is_fitted(self, "trace_")
        if check_game(game) != self.game_:
            raise GameError("transform expects the game passed to fit")
        return self.trace_.terminal

    def inverse_transform(self, mu):
        check_is_fitted(self, "trace_")
        return self.trace_.lift(mu)
