from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from dualreduce.game import Game
from dualreduce.gamefile import gen_game, load_game

GAMES_DIR = Path(__file__).resolve().parent.parent / "games"

CORPUS_SHAPES = ((2, 2), (2, 3), (3, 2), (3, 3), (2, 2, 2))
CORPUS_RANGES = ((-9, 9), (0, 2))
CORPUS_SIZE = 250

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def corpus_games(size: int = CORPUS_SIZE) -> list[Game]:
    """Seeded games up to 3x3 and 2x2x2; every other game draws from a narrow range to force ties."""
    out = []
    for seed in range(size):
        shape = CORPUS_SHAPES[seed % len(CORPUS_SHAPES)]
        low, high = CORPUS_RANGES[(seed // len(CORPUS_SHAPES)) % len(CORPUS_RANGES)]
        out.append(gen_game(1000 + seed, shape, low, high))
    return out


@pytest.fixture(scope="session")
def corpus():
    return corpus_games()


def bundled(name: str) -> Game:
    return load_game(GAMES_DIR / f"{name}.game")


@pytest.fixture(scope="session")
def mp():
    return bundled("matching_pennies")


@pytest.fixture(scope="session")
def mp_rescaled():
    return bundled("matching_pennies_rescaled")


@pytest.fixture(scope="session")
def weak_dom():
    return bundled("weak_dominance")


@pytest.fixture(scope="session")
def three_col():
    return bundled("three_column")


@pytest.fixture(scope="session")
def indifferent():
    return bundled("indifferent")


@pytest.fixture(scope="session")
def coordination():
    return bundled("coordination")


HALF = Fraction(1, 2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
