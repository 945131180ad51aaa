"""Match-archive and ranking-snapshot loading.

Consumes the de-facto public match-archive layout: comma-separated files
with a header row, dates as 8-digit yyyymmdd, single-letter tournament
level codes, and winner/loser rank-point columns.  A flat key=value schema
file can remap any column name for other archives.

Rows are dropped (and counted) when a player's rank points are missing or
zero, or when the row falls outside the requested date/level/round scope.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import SchemaError
from .model import MatchObservation
from .points import Category

#: Logical field -> column name in the archive files.
DEFAULT_SCHEMA: dict[str, str] = {
    "date": "tourney_date",
    "level": "tourney_level",
    "round": "round",
    "draw_size": "draw_size",
    "tournament_id": "tourney_id",
    "tournament_name": "tourney_name",
    "winner_id": "winner_id",
    "loser_id": "loser_id",
    "winner_rank": "winner_rank",
    "loser_rank": "loser_rank",
    "winner_points": "winner_rank_points",
    "loser_points": "loser_rank_points",
    "score": "score",
    # Optional: a column holding an explicit category tag (grand_slam,
    # masters_1000, tour_500, tour_250).  The stock archive has none (500-
    # and 250-series events both arrive as level "A"); the bundled sample
    # carries one so participation tables resolve exactly.
    "category": "category",
}

_REQUIRED_FIELDS = ("date", "level", "round", "winner_points", "loser_points")

#: Level letters kept by default: tour-level plus Davis Cup and Olympics.
DEFAULT_LEVELS = frozenset({"G", "M", "A", "F", "D", "O"})

_QUALIFYING_ROUNDS = frozenset({"Q1", "Q2", "Q3", "Q4"})

#: Level letter -> normalized tag on MatchObservation.
LEVEL_TAGS = {
    "G": "grand_slam",
    "M": "masters_1000",
    "A": "tour",
    "F": "finals",
    "D": "davis_cup",
    "O": "olympics",
}


def load_schema(path: str | Path) -> dict[str, str]:
    """Read a key=value schema file; keys must be known logical field names."""
    schema = dict(DEFAULT_SCHEMA)
    with open(path, encoding="utf-8") as fp:
        for line_no, raw in enumerate(fp, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SchemaError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in DEFAULT_SCHEMA:
                raise SchemaError(f"{path}:{line_no}: unknown schema field {key!r}")
            schema[key] = value
    return schema


@dataclass(frozen=True)
class RawMatchRow:
    """One archive row with typed accessors; None marks an unparseable field."""

    source: str
    line: int
    date: datetime.date | None
    level: str
    round: str
    draw_size: int | None
    tournament_id: str
    tournament_name: str
    winner_id: str
    loser_id: str
    winner_rank: int | None
    loser_rank: int | None
    winner_points: float | None
    loser_points: float | None
    score: str
    category: Category | None


@dataclass
class IngestReport:
    """Row accounting for one load_matches call.

    kept + dropped_zero_points + dropped_missing + dropped_out_of_range
    equals the number of data rows read.  dropped_out_of_range covers every
    scope filter (date range, level, qualifying rounds, walkovers); the
    breakdown records which one fired.
    """

    kept: int = 0
    dropped_zero_points: int = 0
    dropped_missing: int = 0
    dropped_out_of_range: int = 0
    out_of_range_breakdown: dict[str, int] = field(
        default_factory=lambda: {"level": 0, "round": 0, "walkover": 0, "date": 0}
    )
    files: list[str] = field(default_factory=list)

    @property
    def total_rows(self) -> int:
        return (
            self.kept
            + self.dropped_zero_points
            + self.dropped_missing
            + self.dropped_out_of_range
        )

    def summary(self) -> str:
        lines = [
            f"rows read          {self.total_rows}",
            f"kept               {self.kept}",
            f"dropped: zero pts  {self.dropped_zero_points}",
            f"dropped: missing   {self.dropped_missing}",
            f"dropped: filtered  {self.dropped_out_of_range}",
        ]
        for key, count in self.out_of_range_breakdown.items():
            lines.append(f"  by {key:<9}      {count}")
        return "\n".join(lines)


def _parse_date(text: str) -> datetime.date | None:
    text = text.strip()
    if len(text) == 8 and text.isdigit():
        try:
            return datetime.date(int(text[:4]), int(text[4:6]), int(text[6:8]))
        except ValueError:
            return None
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        return None


def _parse_float(text: str) -> float | None:
    try:
        return float(text)
    except ValueError:
        return None


def _parse_int(text: str) -> int | None:
    try:
        return int(float(text))
    except ValueError:
        return None


def _parse_category(text: str) -> Category | None:
    try:
        return Category(text.strip())
    except ValueError:
        return None


def load_raw_rows(
    paths: Sequence[str | Path],
    schema: dict[str, str] | None = None,
) -> list[RawMatchRow]:
    """Parse archive files into raw rows, in file-argument and row order."""
    schema = schema or DEFAULT_SCHEMA
    rows: list[RawMatchRow] = []
    for path in paths:
        with open(path, newline="", encoding="utf-8") as fp:
            reader = csv.DictReader(fp)
            header = reader.fieldnames or []
            missing = [
                schema[f] for f in _REQUIRED_FIELDS if schema[f] not in header
            ]
            if missing:
                raise SchemaError(f"{path}: missing required columns: {', '.join(missing)}")

            def col(record: dict, logical: str) -> str:
                name = schema.get(logical, "")
                return (record.get(name) or "").strip() if name else ""

            for line_no, record in enumerate(reader, start=2):
                rows.append(
                    RawMatchRow(
                        source=str(path),
                        line=line_no,
                        date=_parse_date(col(record, "date")),
                        level=col(record, "level"),
                        round=col(record, "round"),
                        draw_size=_parse_int(col(record, "draw_size")),
                        tournament_id=col(record, "tournament_id"),
                        tournament_name=col(record, "tournament_name"),
                        winner_id=col(record, "winner_id"),
                        loser_id=col(record, "loser_id"),
                        winner_rank=_parse_int(col(record, "winner_rank")),
                        loser_rank=_parse_int(col(record, "loser_rank")),
                        winner_points=_parse_float(col(record, "winner_points")),
                        loser_points=_parse_float(col(record, "loser_points")),
                        score=col(record, "score"),
                        category=_parse_category(col(record, "category")),
                    )
                )
    return rows


def _is_walkover(score: str) -> bool:
    needle = score.replace(" ", "").replace(".", "").upper()
    return "W/O" in needle or "WO" == needle or "WALKOVER" in needle


def load_matches(
    paths: Sequence[str | Path],
    date_range: tuple[datetime.date | None, datetime.date | None] | None = None,
    levels: frozenset[str] | set[str] = DEFAULT_LEVELS,
    include_qualifying: bool = False,
    drop_walkovers: bool = False,
    schema: dict[str, str] | None = None,
) -> tuple[list[MatchObservation], IngestReport]:
    """Load archives into winner-first observations, applying exclusions.

    Filter precedence per row: level, qualifying round, walkover (when the
    flag is set), missing date/points, date range, zero points.  Output
    order equals input row order within each file, files in argument order.
    """
    report = IngestReport(files=[str(p) for p in paths])
    observations: list[MatchObservation] = []
    date_from, date_to = date_range if date_range else (None, None)
    for row in load_raw_rows(paths, schema):
        if row.level not in levels:
            report.dropped_out_of_range += 1
            report.out_of_range_breakdown["level"] += 1
            continue
        if not include_qualifying and row.round in _QUALIFYING_ROUNDS:
            report.dropped_out_of_range += 1
            report.out_of_range_breakdown["round"] += 1
            continue
        if drop_walkovers and _is_walkover(row.score):
            report.dropped_out_of_range += 1
            report.out_of_range_breakdown["walkover"] += 1
            continue
        if row.date is None or row.winner_points is None or row.loser_points is None:
            report.dropped_missing += 1
            continue
        if (date_from and row.date < date_from) or (date_to and row.date > date_to):
            report.dropped_out_of_range += 1
            report.out_of_range_breakdown["date"] += 1
            continue
        if row.winner_points <= 0 or row.loser_points <= 0:
            report.dropped_zero_points += 1
            continue
        observations.append(
            MatchObservation(
                winner_points=row.winner_points,
                loser_points=row.loser_points,
                date=row.date,
                level=LEVEL_TAGS.get(row.level, "other"),
                round=row.round or "unknown",
            )
        )
        report.kept += 1
    return observations, report


def dump_observations(observations: Iterable[MatchObservation], fp) -> None:
    """Write normalized observations as delimited text."""
    writer = csv.writer(fp)
    writer.writerow(["date", "level", "round", "winner_points", "loser_points"])
    for obs in observations:
        writer.writerow(
            [obs.date.isoformat(), obs.level, obs.round,
             _format_points(obs.winner_points), _format_points(obs.loser_points)]
        )


def _format_points(value: float) -> str:
    return str(int(value)) if value == int(value) else repr(value)


# --- ranking snapshots ------------------------------------------------------

DEFAULT_RANKING_SCHEMA: dict[str, str] = {
    "date": "ranking_date",
    "rank": "rank",
    "player": "player",
    "points": "points",
}


@dataclass(frozen=True)
class RankingEntry:
    date: datetime.date
    rank: int
    player: str
    points: float


def load_rankings(
    paths: Sequence[str | Path],
    dates: Sequence[datetime.date] | None = None,
    schema: dict[str, str] | None = None,
) -> tuple[list[RankingEntry], list[datetime.date]]:
    """Load ranking snapshots; returns (entries, requested dates not found).

    Ranks must be unique within a date; a duplicate raises SchemaError.
    """
    schema = schema or DEFAULT_RANKING_SCHEMA
    entries: list[RankingEntry] = []
    seen: set[tuple[datetime.date, int]] = set()
    wanted = set(dates) if dates is not None else None
    for path in paths:
        with open(path, newline="", encoding="utf-8") as fp:
            reader = csv.DictReader(fp)
            header = reader.fieldnames or []
            missing = [schema[f] for f in ("date", "rank", "player", "points")
                       if schema[f] not in header]
            if missing:
                raise SchemaError(f"{path}: missing required columns: {', '.join(missing)}")
            for line_no, record in enumerate(reader, start=2):
                date = _parse_date((record.get(schema["date"]) or "").strip())
                rank = _parse_int((record.get(schema["rank"]) or "").strip())
                pts = _parse_float((record.get(schema["points"]) or "").strip())
                player = (record.get(schema["player"]) or "").strip()
                if date is None or rank is None or pts is None:
                    continue
                if wanted is not None and date not in wanted:
                    continue
                key = (date, rank)
                if key in seen:
                    raise SchemaError(
                        f"{path}:{line_no}: duplicate rank {rank} for date {date}"
                    )
                seen.add(key)
                entries.append(RankingEntry(date=date, rank=rank, player=player, points=pts))
    if wanted is None:
        return entries, []
    found = {e.date for e in entries}
    return entries, sorted(d for d in wanted if d not in found)
