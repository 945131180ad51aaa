"""Multi-season tour simulation.

Simulates a full calendar of seeded tournaments where every match outcome
is drawn from the ratio model, ranking points follow the official tables,
and rankings are the rolling best-18 total recomputed weekly.  The point of
the exercise: check where the points at ranks 16/32/64 settle relative to
the ideal-schedule totals (2430 / 1260 / 650).

Entry policy (the tour rulebook leaves this to the player, so the simulator
needs a deterministic one): season-start top-30 players enter all four Grand
Slams and the first eight Masters, plus a fixed number of 500 and 250 events
chosen greedily to avoid each other, and rest otherwise.  Everyone else
enters the most prestigious event with an open slot each week, by ranking
priority.
"""

from __future__ import annotations

import csv
import datetime
from collections import deque
from dataclasses import dataclass, field, replace
from heapq import nlargest
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .bracket import SEEDS_FOR_DRAW, fill_unseeded, place_seeds, run_tournament
from .errors import DomainError
from .points import BEST_N, Category, PlayerSeason, SeasonResult

WEEKS_PER_SEASON = 52
TOP_N_MANDATORY = 30
MANDATORY_MASTERS = 8  # of the 9 on the calendar, as the entry rules demand

#: Simulated draw size per category (the supported power-of-two sizes).
DRAW_FOR_CATEGORY = {
    Category.GRAND_SLAM: 128,
    Category.MASTERS_1000: 64,
    Category.TOUR_500: 32,
    Category.TOUR_250: 32,
}

_PRESTIGE = {
    Category.GRAND_SLAM: 0,
    Category.MASTERS_1000: 1,
    Category.TOUR_500: 2,
    Category.TOUR_250: 3,
}

#: Anchor date for week arithmetic; week 1 of season 1 maps to this Monday.
SEASON_EPOCH = datetime.date(2000, 1, 3)


@dataclass(frozen=True)
class CalendarEvent:
    week: int
    category: Category
    draw_size: int


def default_calendar() -> list[CalendarEvent]:
    """Tour calendar with the standard category counts (4, 9, 13, 40).

    Grand Slams and Masters get exclusive weeks; 500s run alongside a 250;
    every remaining week holds at least one 250.
    """
    draw = DRAW_FOR_CATEGORY
    gs_weeks = (3, 21, 27, 35)
    masters_weeks = (10, 12, 15, 18, 20, 32, 41, 43, 45)
    events = [CalendarEvent(w, Category.GRAND_SLAM, draw[Category.GRAND_SLAM])
              for w in gs_weeks]
    events += [CalendarEvent(w, Category.MASTERS_1000, draw[Category.MASTERS_1000])
               for w in masters_weeks]
    free_weeks = [
        w for w in range(1, WEEKS_PER_SEASON + 1)
        if w not in gs_weeks and w not in masters_weeks
    ]
    five_hundred_weeks = free_weeks[::3]
    events += [CalendarEvent(w, Category.TOUR_500, draw[Category.TOUR_500])
               for w in five_hundred_weeks]
    events += [CalendarEvent(w, Category.TOUR_250, draw[Category.TOUR_250])
               for w in free_weeks]
    events.append(CalendarEvent(free_weeks[0], Category.TOUR_250, draw[Category.TOUR_250]))
    events.sort(key=lambda e: (e.week, _PRESTIGE[e.category]))
    return events


@dataclass
class SeasonConfig:
    """Season-simulation knobs; every key here is overridable from the CLI."""

    calendar: list[CalendarEvent] = field(default_factory=default_calendar)
    top30_mandatory: bool = True
    n_500_choices: int = 3
    n_250_choices: int = 3
    alpha: float = 0.8722
    rng_seed: int = 0
    n_players: int = 300
    n_seasons: int = 1
    burn_in: int = 0
    points_floor: float = 1.0
    # free-entry appetite: beyond this many events a player only adds
    # Grand Slams and Masters, mirroring the 18 countable results that
    # determine the ranking
    max_events_per_season: int = 18

    def validate(self) -> None:
        if not self.alpha >= 0:
            raise DomainError(f"alpha must be nonnegative, got {self.alpha!r}")
        if self.n_500_choices < 0 or self.n_250_choices < 0:
            raise DomainError("optional-event choices must be nonnegative")
        if self.top30_mandatory and self.n_500_choices + self.n_250_choices < 6:
            raise DomainError(
                "mandatory top-30 entry requires at least 6 optional 500/250 choices"
            )
        if self.n_seasons < 1:
            raise DomainError("n_seasons must be at least 1")
        if not 0 <= self.burn_in < self.n_seasons:
            raise DomainError("burn_in must be smaller than n_seasons")
        if not self.points_floor > 0:
            raise DomainError("points_floor must be positive")
        if self.max_events_per_season < 1:
            raise DomainError("max_events_per_season must be at least 1")
        if not self.calendar:
            raise DomainError("calendar is empty")
        for ev in self.calendar:
            if not 1 <= ev.week <= WEEKS_PER_SEASON:
                raise DomainError(f"calendar week {ev.week} outside 1..{WEEKS_PER_SEASON}")


@dataclass(frozen=True)
class WeeklyStanding:
    season: int
    week: int
    player: str
    points: int
    rank: int


@dataclass
class SeasonReport:
    """Weekly standings for every simulated season, plus per-player results."""

    config: SeasonConfig
    players: list[str]
    standings: list[WeeklyStanding]
    player_results: list[PlayerSeason]

    def __post_init__(self) -> None:
        self._final: dict[tuple[int, int], int] | None = None

    def points_at_rank(self, season: int, rank: int) -> int:
        """Points held at the given rank in the season's final week."""
        if self._final is None:
            self._final = {
                (row.season, row.rank): row.points
                for row in self.standings
                if row.week == WEEKS_PER_SEASON
            }
        try:
            return self._final[(season, rank)]
        except KeyError:
            raise DomainError(f"no final standing for season {season}, rank {rank}") from None

    def measured_seasons(self) -> list[int]:
        return list(range(self.config.burn_in + 1, self.config.n_seasons + 1))

    def rank_summary(self, rank: int) -> dict[str, float]:
        """Median/mean/min/max of end-of-season points at a rank, burn-in excluded."""
        arr = np.array(
            [float(self.points_at_rank(s, rank)) for s in self.measured_seasons()]
        )
        return {
            "median": float(np.median(arr)),
            "mean": float(arr.mean()),
            "min": float(arr.min()),
            "max": float(arr.max()),
        }

    def write_csv(self, fp: IO[str]) -> None:
        writer = csv.writer(fp)
        writer.writerow(["season", "week", "player", "points", "rank"])
        for row in self.standings:
            writer.writerow([row.season, row.week, row.player, row.points, row.rank])


def week_date(season: int, week: int) -> datetime.date:
    absolute = (season - 1) * WEEKS_PER_SEASON + (week - 1)
    return SEASON_EPOCH + datetime.timedelta(days=7 * absolute)


def _ranked_order(points: np.ndarray, tiebreak: np.ndarray) -> np.ndarray:
    """Player indices from rank 1 down; ties broken by the random key."""
    return np.lexsort((tiebreak, -points))


def _pick_optional_events(
    config: SeasonConfig,
    top30: list[int],
    busy_weeks: dict[int, set[int]],
) -> dict[int, list[int]]:
    """Greedy optional-event choice: players take the events with the weakest
    committed field so far, in rank order.  Returns event index -> players."""
    by_category: dict[Category, list[int]] = {Category.TOUR_500: [], Category.TOUR_250: []}
    for idx, ev in enumerate(config.calendar):
        if ev.category in by_category:
            by_category[ev.category].append(idx)
    committed: dict[int, list[int]] = {idx: [] for v in by_category.values() for idx in v}
    for player in top30:
        for category, wanted in (
            (Category.TOUR_500, config.n_500_choices),
            (Category.TOUR_250, config.n_250_choices),
        ):
            candidates = sorted(
                (idx for idx in by_category[category]
                 if config.calendar[idx].week not in busy_weeks[player]),
                key=lambda idx: (len(committed[idx]), config.calendar[idx].week, idx),
            )
            for idx in candidates[:wanted]:
                committed[idx].append(player)
                busy_weeks[player].add(config.calendar[idx].week)
    return committed


def run_season(config: SeasonConfig, players: Sequence[str]) -> SeasonReport:
    """Simulate ``config.n_seasons`` consecutive 52-week seasons.

    The best-18 window rolls across season boundaries, so later seasons run
    in a stationary regime; ``config.burn_in`` marks how many initial seasons
    summaries discard.  Deterministic for a fixed rng_seed: each season cycle
    consumes its own child RNG stream, and all ranking ties are broken by
    seeded draws so players start exchangeable.
    """
    config.validate()
    players = list(players)
    if len(set(players)) != len(players):
        raise DomainError("player ids must be distinct")
    n = len(players)
    weekly_need: dict[int, int] = {}
    for ev in config.calendar:
        weekly_need[ev.week] = weekly_need.get(ev.week, 0) + ev.draw_size
    worst = max(weekly_need.values())
    if n < worst:
        raise DomainError(
            f"player pool of {n} cannot fill a week requiring {worst} entrants"
        )

    season_streams = np.random.SeedSequence(config.rng_seed).spawn(config.n_seasons)
    results: list[PlayerSeason] = [PlayerSeason() for _ in range(n)]
    # Rolling (absolute_week, points) entries per player; the best-18 total
    # over this window is the player's current ranking points.
    windows: list[deque[tuple[int, int]]] = [deque() for _ in range(n)]
    points = np.zeros(n)
    standings: list[WeeklyStanding] = []

    events_by_week: dict[int, list[int]] = {}
    for idx, ev in enumerate(config.calendar):
        events_by_week.setdefault(ev.week, []).append(idx)
    masters_order = [
        idx for idx, ev in enumerate(config.calendar)
        if ev.category == Category.MASTERS_1000
    ]
    mandatory_events = [
        idx for idx, ev in enumerate(config.calendar)
        if ev.category == Category.GRAND_SLAM
    ] + masters_order[:MANDATORY_MASTERS]

    for season in range(1, config.n_seasons + 1):
        rng = np.random.Generator(np.random.PCG64(season_streams[season - 1]))
        order = _ranked_order(points, rng.random(n))

        committed: dict[int, list[int]] = {idx: [] for idx in range(len(config.calendar))}
        busy_weeks: dict[int, set[int]] = {p: set() for p in range(n)}
        restricted: set[int] = set()
        if config.top30_mandatory:
            top30 = [int(p) for p in order[: min(TOP_N_MANDATORY, n)]]
            for idx in mandatory_events:
                week = config.calendar[idx].week
                for p in top30:
                    committed[idx].append(p)
                    busy_weeks[p].add(week)
            committed.update(_pick_optional_events(config, top30, busy_weeks))
            restricted = set(top30)

        events_played = [0] * n
        for week in range(1, WEEKS_PER_SEASON + 1):
            abs_week = (season - 1) * WEEKS_PER_SEASON + week
            today = week_date(season, week)
            played: set[int] = set()
            for idx in sorted(
                events_by_week.get(week, ()),
                key=lambda i: (_PRESTIGE[config.calendar[i].category], i),
            ):
                ev = config.calendar[idx]
                entrants = [p for p in committed[idx] if p not in played]
                have = set(entrants)
                # first pass honors the appetite cap for small events; the
                # second ignores it so a draw short of entrants still fills
                # (nobody skips a Grand Slam or Masters over fatigue either)
                for honor_cap in (True, False):
                    if len(entrants) == ev.draw_size:
                        break
                    for p in order:
                        p = int(p)
                        if p in played or p in have:
                            continue
                        if p in restricted or week in busy_weeks[p]:
                            continue
                        if (
                            honor_cap
                            and events_played[p] >= config.max_events_per_season
                            and _PRESTIGE[ev.category] >= 2
                        ):
                            continue
                        entrants.append(p)
                        have.add(p)
                        if len(entrants) == ev.draw_size:
                            break
                if len(entrants) < ev.draw_size:
                    raise DomainError(
                        f"week {week}: only {len(entrants)} entrants for a "
                        f"{ev.draw_size}-draw event"
                    )
                rank_of = {int(p): r for r, p in enumerate(order)}
                entrants.sort(key=lambda p: rank_of[p])
                n_seeds = SEEDS_FOR_DRAW[ev.draw_size]
                br = place_seeds(ev.draw_size, entrants[:n_seeds], rng)
                br = fill_unseeded(br, entrants[n_seeds:], rng)
                ratings = {p: max(points[p], config.points_floor) for p in entrants}
                outcome = run_tournament(br, ratings, config.alpha, ev.category, rng)
                for p, res in outcome.items():
                    results[p].results.append(
                        SeasonResult(ev.category, res.round_reached, res.points, today)
                    )
                    windows[p].append((abs_week, res.points))
                for p in entrants:
                    events_played[p] += 1
                played.update(entrants)

            cutoff = abs_week - WEEKS_PER_SEASON
            for p in range(n):
                window = windows[p]
                expired = False
                while window and window[0][0] <= cutoff:
                    window.popleft()
                    expired = True
                if expired or p in played:
                    entries = [pts for _, pts in window]
                    if len(entries) > BEST_N:
                        entries = nlargest(BEST_N, entries)
                    points[p] = sum(entries)
            order = _ranked_order(points, rng.random(n))
            for r, p in enumerate(order):
                p = int(p)
                standings.append(
                    WeeklyStanding(season, week, players[p], int(points[p]), r + 1)
                )

    return SeasonReport(
        config=config, players=players, standings=standings, player_results=results
    )


# --- flat key=value config files -------------------------------------------

_BOOL_KEYS = {"top30_mandatory"}
_INT_KEYS = {
    "n_500_choices",
    "n_250_choices",
    "rng_seed",
    "n_players",
    "n_seasons",
    "burn_in",
    "max_events_per_season",
}
_FLOAT_KEYS = {"alpha", "points_floor"}


def load_calendar_file(path: str | Path) -> list[CalendarEvent]:
    """Read a calendar CSV with columns week, category, draw_size."""
    events = []
    with open(path, newline="", encoding="utf-8") as fp:
        for row in csv.DictReader(fp):
            events.append(
                CalendarEvent(
                    week=int(row["week"]),
                    category=Category(row["category"]),
                    draw_size=int(row["draw_size"]),
                )
            )
    return events


def load_season_config(path: str | Path) -> SeasonConfig:
    """Parse a flat key=value config file; unknown keys are rejected."""
    config = SeasonConfig()
    base = Path(path).parent
    with open(path, encoding="utf-8") as fp:
        for line_no, raw in enumerate(fp, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key in _BOOL_KEYS:
                if value.lower() not in ("true", "false"):
                    raise DomainError(f"{path}:{line_no}: {key} must be true or false")
                config = replace(config, **{key: value.lower() == "true"})
            elif key in _INT_KEYS:
                config = replace(config, **{key: int(value)})
            elif key in _FLOAT_KEYS:
                config = replace(config, **{key: float(value)})
            elif key == "calendar":
                calendar_path = Path(value)
                if not calendar_path.is_absolute():
                    calendar_path = base / calendar_path
                config = replace(config, calendar=load_calendar_file(calendar_path))
            else:
                raise DomainError(f"{path}:{line_no}: unknown config key {key!r}")
    return config
