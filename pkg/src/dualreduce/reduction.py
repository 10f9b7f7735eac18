"""Dual reduction: Markov decomposition of deviation plans, reduced games, lifting."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import ce as _ce
from .duals import (DeviationPlan, DeviationProfile, NotADualVector, check_deviation_profile,
                    check_plan, dual_violations, full_dual_vector, strong_full_dual_vector)
from .game import (CorrelatedStrategy, Game, MixedProfile, MixedStrategy, check_block, check_correlated,
                   check_mixed_profile, expected_payoffs, profile_weights, restrict, support)
from .linalg import solve_affine

logger = logging.getLogger(__name__)

ELIMINATED, KEPT, GROUPED = "eliminated", "kept", "grouped"


@dataclass(frozen=True)
class MarkovDecomposition:
    transient: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    stationary: tuple[MixedStrategy, ...]

    def class_of(self, strategy: int) -> int | None:
        for k, cls in enumerate(self.classes):
            if strategy in cls:
                return k
        return None


def _reachable(plan: DeviationPlan, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for d, a in enumerate(plan[c]):
            if a and d not in seen:
                seen.add(d)
                stack.append(d)
    return seen


def stationary_on(plan: DeviationPlan, cls: Sequence[int]) -> MixedStrategy:
    """The unique ``σ`` supported on the closed class ``cls`` with ``α * σ = σ``."""
    cls = list(cls)
    k = len(cls)
    # σ_d - Σ_c σ_c α(d|c) = 0 for d in cls, and Σ σ = 1
    a = [[Fraction(int(d == c)) - plan[c][d] for c in cls] for d in cls]
    a.append([Fraction(1)] * k)
    b = [Fraction(0)] * k + [Fraction(1)]
    res = solve_affine(a, b, k)
    if res is None or res[1]:
        raise RuntimeError(f"stationary system on class {cls} is singular; not a closed class")
    sigma = [Fraction(0)] * len(plan)
    for c, w in zip(cls, res[0]):
        sigma[c] = w
    return tuple(sigma)


def markov_decompose(plan) -> MarkovDecomposition:
    """Split ``C_i`` into transient states and minimal absorbing classes.

    A strategy lies in a minimal absorbing class iff every strategy it can
    reach can reach it back; its class is then its reachable set. Classes are
    ordered by their smallest member.
    """
    plan = check_plan(plan, len(plan))
    m = len(plan)
    reach = [_reachable(plan, c) for c in range(m)]
    classes, transient = [], []
    for c in range(m):
        if all(c in reach[d] for d in reach[c]):
            cls = tuple(sorted(reach[c]))
            if cls[0] == c:
                classes.append(cls)
        else:
            transient.append(c)
    stationary = tuple(stationary_on(plan, cls) for cls in classes)
    return MarkovDecomposition(tuple(transient), tuple(classes), stationary)


def _fmt(q: Fraction) -> str:
    return str(q)


def reduced_label(game: Game, player: int, sigma: MixedStrategy) -> str:
    supp = support(sigma)
    if len(supp) == 1:
        return game.labels[player][supp[0]]
    inner = ",".join(f"{game.labels[player][c]}:{_fmt(sigma[c])}" for c in supp)
    return "{" + inner + "}"


@dataclass(frozen=True)
class ReducedGame:
    """``Γ/α`` together with the data needed to interpret it in ``Γ``."""

    base: Game
    alpha: DeviationProfile
    decompositions: tuple[MarkovDecomposition, ...]
    game: Game
    classification: tuple[tuple[tuple, ...], ...] = field(repr=False)

    @property
    def reduced_actions(self) -> tuple[tuple[MixedStrategy, ...], ...]:
        return tuple(d.stationary for d in self.decompositions)

    def lift(self, mu) -> CorrelatedStrategy:
        return lift(self, mu)

    def lift_profile(self, sigma) -> MixedProfile:
        return lift_profile(self, sigma)

    def eliminated(self, player: int) -> tuple[int, ...]:
        return self.decompositions[player].transient

    def kept(self, player: int) -> tuple[int, ...]:
        return tuple(c for c, tag in enumerate(self.classification[player]) if tag[0] == KEPT)

    def partition(self):
        """Hashable summary: per player, transient set and the absorbing classes."""
        return tuple((d.transient, d.classes) for d in self.decompositions)


def _classify(decomp: MarkovDecomposition, m: int):
    out = []
    for c in range(m):
        k = decomp.class_of(c)
        if k is None:
            out.append((ELIMINATED,))
        elif len(decomp.classes[k]) == 1:
            out.append((KEPT, k))
        else:
            out.append((GROUPED, k))
    return tuple(out)


def reduce(game: Game, alpha) -> ReducedGame:
    """The ``α``-reduced game; refuses deviation profiles that are not dual vectors."""
    alpha = check_deviation_profile(game, alpha)
    bad = dual_violations(game, alpha)
    if bad:
        raise NotADualVector(f"D(c, alpha) < 0 at profiles {[game.profile(k) for k in bad]}")
    decomps = tuple(markov_decompose(plan) for plan in alpha)
    actions = [d.stationary for d in decomps]
    shape = tuple(len(a) for a in actions)
    labels = tuple(tuple(reduced_label(game, i, s) for s in acts) for i, acts in enumerate(actions))
    reduced_game = Game.from_function(
        shape, lambda r: expected_payoffs(game, tuple(actions[i][k] for i, k in enumerate(r))),
        labels, game.name)
    classification = tuple(_classify(d, m) for d, m in zip(decomps, game.shape))
    return ReducedGame(game, alpha, decomps, reduced_game, classification)


def _lift_strategy(reduced: ReducedGame, player: int, s) -> MixedStrategy:
    acts = reduced.decompositions[player].stationary
    w = [Fraction(0)] * reduced.base.shape[player]
    for k, p in enumerate(s):
        if p:
            for c, q in enumerate(acts[k]):
                w[c] += p * q
    return tuple(w)


def lift_profile(reduced: ReducedGame, sigma) -> MixedProfile:
    """Interpret a mixed profile of ``Γ/α`` as a mixed profile of ``Γ``."""
    sigma = check_mixed_profile(reduced.game, sigma)
    return tuple(_lift_strategy(reduced, i, s) for i, s in enumerate(sigma))


def lift(reduced: ReducedGame, mu) -> CorrelatedStrategy:
    """``μ̄(c) = Σ_σ μ(σ) σ(c)``: the base-game correlated strategy induced by ``μ``."""
    mu = check_correlated(reduced.game, mu)
    base = reduced.base
    out = [Fraction(0)] * base.n_profiles
    acts = reduced.reduced_actions
    for r, w in zip(reduced.game.profiles(), mu):
        if w:
            sigma = tuple(acts[i][k] for i, k in enumerate(r))
            for c, p in profile_weights(sigma):
                out[base.index(c)] += w * p
    return tuple(out)


@dataclass(frozen=True)
class Stage:
    game: Game
    alpha: DeviationProfile
    reduced: ReducedGame


@dataclass(frozen=True)
class ReductionTrace:
    original: Game
    policy: str
    stages: tuple[Stage, ...]
    terminal: Game
    terminal_elementary: bool

    def lift(self, mu) -> CorrelatedStrategy:
        """Map a correlated strategy of the terminal game back to the original game."""
        mu = check_correlated(self.terminal, mu)
        for st in reversed(self.stages):
            mu = lift(st.reduced, mu)
        return mu

    def lift_profile(self, sigma) -> MixedProfile:
        sigma = check_mixed_profile(self.terminal, sigma)
        for st in reversed(self.stages):
            sigma = lift_profile(st.reduced, sigma)
        return sigma

    def terminal_actions(self) -> tuple[tuple[MixedStrategy, ...], ...]:
        """Each terminal action as a mixed strategy of the original game."""
        out = []
        for i, m in enumerate(self.terminal.shape):
            acts = []
            for k in range(m):
                s = tuple(Fraction(int(j == k)) for j in range(m))
                for st in reversed(self.stages):
                    s = _lift_strategy(st.reduced, i, s)
                acts.append(s)
            out.append(tuple(acts))
        return tuple(out)

    def lineage(self, player: int, strategy: int) -> list[int | None]:
        """Index of ``strategy`` at each stage while it survives as a pure (kept) action.

        Entry ``k`` is the action index in ``stages[k].game`` (entry 0 is the
        strategy itself); ``None`` once the strategy is eliminated or grouped.
        """
        out = [strategy]
        cur = strategy
        for st in self.stages:
            tag = st.reduced.classification[player][cur] if cur is not None else None
            cur = tag[1] if tag is not None and tag[0] == KEPT else None
            out.append(cur)
        return out


POLICIES = ("full", "strong_full")


def canonical_dual_vector(game: Game, policy: str, seed: int | None = None) -> DeviationProfile:
    if policy == "full":
        return full_dual_vector(game, seed)
    if policy in ("strong_full", "strong-full"):
        return strong_full_dual_vector(game, seed)
    raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")


def iterate_to_elementary(game: Game, policy: str = "full", seed: int | None = None,
                          max_stages: int | None = None) -> ReductionTrace:
    """Reduce repeatedly with the policy's dual vector until the game is elementary.

    ``seed`` is forwarded to the dual-vector construction at every stage (each
    stage offset by its number) to obtain an independently built trace.
    """
    stages = []
    current = game
    while not _ce.is_elementary(current):
        if max_stages is not None and len(stages) >= max_stages:
            break
        stage_seed = None if seed is None else seed + len(stages)
        alpha = canonical_dual_vector(current, policy, stage_seed)
        red = reduce(current, alpha)
        if sum(red.game.shape) >= sum(current.shape):
            raise RuntimeError(
                f"stage {len(stages)}: {policy} reduction did not shrink non-elementary game "
                f"{current.shape} -> {red.game.shape}")
        logger.debug("stage %d: %s -> %s", len(stages), current.shape, red.game.shape)
        stages.append(Stage(current, alpha, red))
        current = red.game
    return ReductionTrace(game, policy, tuple(stages), current, _ce.is_elementary(current))


def block_equilibrium_check(game: Game, alpha, block) -> bool:
    """Check that the stationary strategies on absorbing classes form a completely mixed NE of ``Γ_B``."""
    from .nash import is_nash

    alpha = check_deviation_profile(game, alpha)
    block = check_block(game, block)
    sigma = []
    for i, (plan, b) in enumerate(zip(alpha, block)):
        decomp = markov_decompose(plan)
        if b not in decomp.classes:
            raise ValueError(f"block component {b} of player {i} is not a minimal absorbing class")
        s = decomp.stationary[decomp.classes.index(b)]
        sigma.append(tuple(s[c] for c in b))
    sub = restrict(game, block)
    full_support = all(all(w > 0 for w in s) for s in sigma)
    return full_support and is_nash(sub, tuple(sigma))
