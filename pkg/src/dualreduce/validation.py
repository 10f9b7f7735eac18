"""Input validation helpers shared by the estimator facade and the CLI."""

from __future__ import annotations

from .duals import check_deviation_profile, check_plan
from .game import (Game, GameError, check_block, check_correlated, check_distribution, check_mixed_profile,
                   check_permutation)

__all__ = [
    "check_game", "check_policy", "check_deviation_profile", "check_plan", "check_block",
    "check_correlated", "check_distribution", "check_mixed_profile", "check_permutation",
]


def check_game(game, *, n_players: int | None = None) -> Game:
    """Return ``game`` if it is a :class:`Game` (optionally with ``n_players`` players)."""
    if not isinstance(game, Game):
        raise GameError(f"expected a Game, got {type(game).__name__}")
    if n_players is not None and game.n_players != n_players:
        raise GameError(f"expected a {n_players}-player game, got {game.n_players} players")
    return game


def check_policy(policy: str) -> str:
    norm = policy.replace("-", "_")
    if norm not in ("full", "strong_full"):
        raise ValueError(f"unknown policy {policy!r}; expected 'full' or 'strong_full'")
    return norm
