"""Seeded single-elimination draws and model-driven tournament simulation.

Seed placement follows the tour convention: seeds 1 and 2 anchor the
extreme slots, then each successive seed group ({3-4}, {5-8}, {9-16},
{17-32}) is balloted one-per-section into a fixed slot of equal bracket
sections.  For a 32-draw this puts seeds 3-4 on {9, 24} and seeds 5-8 on
{8, 16, 17, 25}, which guarantees that seeds 1-2 cannot meet before the
final, 1-4 before the semifinals, and 1-8 before the quarterfinals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .errors import DomainError
from .model import win_probability
from .points import Category, points_for, points_or_zero

SUPPORTED_DRAWS = (32, 64, 128)
SUPPORTED_SEED_COUNTS = (8, 16, 32)

#: Conventional seed count for each supported draw size.
SEEDS_FOR_DRAW = {32: 8, 64: 16, 128: 32}

#: Round tag keyed by number of players still in.
ROUND_OF = {2: "F", 4: "SF", 8: "QF", 16: "R16", 32: "R32", 64: "R64", 128: "R128"}

PlayerId = Hashable


@dataclass
class Bracket:
    """A draw: ``slots[k]`` holds the player at 1-based slot k+1, or None."""

    draw_size: int
    slots: list[PlayerId | None]
    seeds: list[tuple[int, PlayerId]] = field(default_factory=list)

    @classmethod
    def empty(cls, draw_size: int) -> "Bracket":
        if draw_size not in SUPPORTED_DRAWS:
            raise DomainError(f"unsupported draw size {draw_size!r}; expected one of {SUPPORTED_DRAWS}")
        return cls(draw_size=draw_size, slots=[None] * draw_size)

    def player_at(self, slot: int) -> PlayerId | None:
        return self.slots[slot - 1]

    def slot_of(self, player: PlayerId) -> int:
        return self.slots.index(player) + 1

    def open_slots(self) -> list[int]:
        return [k + 1 for k, p in enumerate(self.slots) if p is None]

    def is_complete(self) -> bool:
        return all(p is not None for p in self.slots)


def seed_slot_groups(draw_size: int, n_seeds: int) -> list[list[int]]:
    """Ballot slot sets per seed group: [[1], [N], {3-4 slots}, {5-8 slots}, ...].

    Seeds 1 and 2 take the extreme slots.  Each later group gets one slot
    per bracket section: the group {3-4} sits at the near end of its free
    half-section, every group after that at the far end from the section's
    existing seed.  Reproduces the published 32-draw slots and extends them
    to 64 and 128 draws.
    """
    if draw_size not in SUPPORTED_DRAWS:
        raise DomainError(f"unsupported draw size {draw_size!r}; expected one of {SUPPORTED_DRAWS}")
    if n_seeds not in SUPPORTED_SEED_COUNTS:
        raise DomainError(f"unsupported seed count {n_seeds!r}; expected one of {SUPPORTED_SEED_COUNTS}")
    if n_seeds > draw_size // 4:
        raise DomainError(f"{n_seeds} seeds do not fit a draw of {draw_size} (at most draw_size/4)")

    groups = [[1], [draw_size]]
    # (lo, hi, anchor): a section whose single seed sits at slot `anchor`,
    # which is always one of the section's two extremes.
    sections = [(1, draw_size // 2, 1), (draw_size // 2 + 1, draw_size, draw_size)]
    placed, stage = 2, 2
    while placed < n_seeds:
        slots: list[int] = []
        next_sections: list[tuple[int, int, int]] = []
        for lo, hi, anchor in sections:
            mid = (lo + hi) // 2
            if anchor == lo:
                free_lo, free_hi = mid + 1, hi
                slot = free_lo if stage == 2 else free_hi
                next_sections += [(lo, mid, anchor), (free_lo, free_hi, slot)]
            else:
                free_lo, free_hi = lo, mid
                slot = free_hi if stage == 2 else free_lo
                next_sections += [(free_lo, free_hi, slot), (mid + 1, hi, anchor)]
            slots.append(slot)
        groups.append(slots)
        sections = next_sections
        placed += len(slots)
        stage += 1
    return groups


def place_seeds(
    draw_size: int,
    seeded_players: Sequence[PlayerId],
    rng: np.random.Generator,
) -> Bracket:
    """Assign seeds to slots; within each group the assignment is balloted."""
    if len(set(seeded_players)) != len(seeded_players):
        raise DomainError("seeded players must be distinct")
    groups = seed_slot_groups(draw_size, len(seeded_players))
    bracket = Bracket.empty(draw_size)
    seed_no = 1
    for slots in groups:
        players = seeded_players[seed_no - 1 : seed_no - 1 + len(slots)]
        order = rng.permutation(len(slots))
        for player, k in zip(players, order):
            bracket.slots[slots[k] - 1] = player
            bracket.seeds.append((seed_no, player))
            seed_no += 1
    bracket.seeds.sort()
    return bracket


def fill_unseeded(
    bracket: Bracket,
    players: Sequence[PlayerId],
    rng: np.random.Generator,
) -> Bracket:
    """Ballot the unseeded players onto the open slots, returning a new bracket."""
    open_slots = bracket.open_slots()
    if len(open_slots) != len(players):
        raise DomainError(
            f"{len(players)} unseeded players for {len(open_slots)} open slots"
        )
    assigned = set(p for p in bracket.slots if p is not None)
    if assigned & set(players):
        raise DomainError("some players are already placed in the bracket")
    filled = Bracket(bracket.draw_size, list(bracket.slots), list(bracket.seeds))
    order = rng.permutation(len(players))
    for slot, k in zip(open_slots, order):
        filled.slots[slot - 1] = players[k]
    return filled


@dataclass(frozen=True)
class TournamentResult:
    round_reached: str
    points: int


def run_tournament(
    bracket: Bracket,
    ratings: Mapping[PlayerId, float],
    alpha: float,
    category: Category,
    rng: np.random.Generator,
) -> dict[PlayerId, TournamentResult]:
    """Play out the draw; returns each player's exit round and points.

    Slot 1 meets slot 2, 3 meets 4, and winners are re-paired in order.
    Each match is won by the slot-i player with the model probability for
    the players' rating ratio.  One uniform draw per match, consumed per
    round in bracket order, so runs are reproducible for a fixed rng.
    Rounds the point table leaves blank for this draw size award 0.
    """
    if not bracket.is_complete():
        raise DomainError("bracket has unfilled slots")
    if not alpha >= 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha!r}")
    for player in bracket.slots:
        if not ratings[player] > 0:
            raise DomainError(f"player {player!r} has non-positive rating {ratings[player]!r}")

    draw = bracket.draw_size
    alive: list[PlayerId] = list(bracket.slots)
    results: dict[PlayerId, TournamentResult] = {}
    # one uniform per match, consumed round by round in bracket order
    uniforms = rng.random(draw - 1)
    win_p = win_probability
    next_u = 0
    size = draw
    while size > 1:
        tag = ROUND_OF[size]
        loser_result = TournamentResult(tag, points_or_zero(category, tag, draw))
        nxt: list[PlayerId] = []
        for k in range(0, size, 2):
            a, b = alive[k], alive[k + 1]
            p = win_p(alpha, ratings[a] / ratings[b])
            if uniforms[next_u] < p:
                winner, loser = a, b
            else:
                winner, loser = b, a
            next_u += 1
            results[loser] = loser_result
            nxt.append(winner)
        alive = nxt
        size //= 2
    results[alive[0]] = TournamentResult("W", points_for(category, "W"))
    return results
