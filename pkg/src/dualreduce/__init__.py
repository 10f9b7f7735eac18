"""Exact dual reduction of finite normal-form games."""

from .ce import CeReport, analyze, ce_dimension, is_correlated_equilibrium, is_elementary, witness_ce
from .duals import (NotADualVector, full_dual_vector, gains, is_dual_vector, strong_dual_vector,
                    strong_full_dual_vector, trivial_dual_vector)
from .estimator import DualReducer, IterativeDualReducer
from .game import Game, GameError
from .gamefile import ParseError, gen_game, load_game, parse_game, write_game
from .nash import bimatrix_nash, is_nash, is_quasi_strict
from .reduction import ReducedGame, ReductionTrace, iterate_to_elementary, reduce

__version__ = "0.1.0"

__all__ = [
    "CeReport", "DualReducer", "Game", "GameError", "IterativeDualReducer", "NotADualVector", "ParseError",
    "ReducedGame", "ReductionTrace", "analyze", "bimatrix_nash", "ce_dimension", "full_dual_vector", "gains",
    "gen_game", "is_correlated_equilibrium", "is_dual_vector", "is_elementary", "is_nash", "is_quasi_strict",
    "iterate_to_elementary", "load_game", "parse_game", "reduce", "strong_dual_vector",
    "strong_full_dual_vector", "trivial_dual_vector", "witness_ce", "write_game",
]
