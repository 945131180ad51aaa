"""Empirical analysis artifacts: binned win-frequency curves, calibration,
rank-band point statistics, and participation counts.

Each curve emits both match orientations: a match at ratio r contributes a
win at r and a loss at 1/r, which makes the ratio axis two-sided and the
frequency curve symmetric around r = 1.  Outputs are delimited text plus a
self-contained SVG per figure so results are viewable with no extra
toolchain.
"""

from __future__ import annotations

import csv
import datetime
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError
from .ingest import RankingEntry, RawMatchRow
from .model import MatchObservation, win_probability
from .points import Category, expected_points, expected_ratio_to_32

DEFAULT_RATIO_BINS = 40
DEFAULT_RATIO_SPAN = (0.01, 100.0)
DEFAULT_PROB_BINS = 20


@dataclass
class BinnedCurve:
    """Binned empirical outcomes with the model curve for comparison."""

    edges: np.ndarray
    counts: np.ndarray
    freq: np.ndarray            # empirical win frequency; NaN where empty
    mean_predicted: np.ndarray  # mean model probability of members; NaN where empty
    model_value: np.ndarray     # curve value to plot against each bin
    log_scale: bool

    @property
    def centers(self) -> np.ndarray:
        if self.log_scale:
            return np.sqrt(self.edges[:-1] * self.edges[1:])
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def n_bins(self) -> int:
        return len(self.counts)


def _bin_oriented(
    x: np.ndarray,
    outcomes: np.ndarray,
    predicted: np.ndarray,
    edges: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Histogram outcomes and predictions; x is clamped into the edge span."""
    n_bins = len(edges) - 1
    clamped = np.clip(x, edges[0], edges[-1])
    idx = np.clip(np.searchsorted(edges, clamped, side="right") - 1, 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins).astype(np.int64)
    win_sum = np.bincount(idx, weights=outcomes, minlength=n_bins)
    pred_sum = np.bincount(idx, weights=predicted, minlength=n_bins)
    with np.errstate(invalid="ignore"):
        freq = np.where(counts > 0, win_sum / np.maximum(counts, 1), np.nan)
        mean_pred = np.where(counts > 0, pred_sum / np.maximum(counts, 1), np.nan)
    return counts, freq, mean_pred


def _oriented_ratios(matches: Sequence[MatchObservation], alpha: float):
    n = len(matches)
    ratios = np.empty(2 * n)
    outcomes = np.empty(2 * n)
    for k, m in enumerate(matches):
        r = m.winner_points / m.loser_points
        ratios[2 * k] = r
        ratios[2 * k + 1] = 1.0 / r
        outcomes[2 * k] = 1.0
        outcomes[2 * k + 1] = 0.0
    with np.errstate(over="ignore"):
        predicted = 1.0 / (1.0 + ratios ** (-alpha))
    return ratios, outcomes, predicted


def bin_by_ratio(
    matches: Sequence[MatchObservation],
    alpha: float,
    n_bins: int = DEFAULT_RATIO_BINS,
    span: tuple[float, float] = DEFAULT_RATIO_SPAN,
) -> BinnedCurve:
    """Win frequency binned over the point ratio, log-spaced bins.

    Both orientations are emitted, so bin counts sum to twice the match
    count; ratios outside the span are clamped into the end bins.
    """
    if len(matches) == 0:
        raise DomainError("no matches")
    if n_bins < 2:
        raise DomainError(f"n_bins must be at least 2, got {n_bins!r}")
    lo, hi = span
    if not (0 < lo < hi):
        raise DomainError(f"invalid ratio span {span!r}")
    edges = np.geomspace(lo, hi, n_bins + 1)
    ratios, outcomes, predicted = _oriented_ratios(matches, alpha)
    counts, freq, mean_pred = _bin_oriented(ratios, outcomes, predicted, edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    model = np.array([win_probability(alpha, float(c)) for c in centers])
    return BinnedCurve(
        edges=edges, counts=counts, freq=freq, mean_predicted=mean_pred,
        model_value=model, log_scale=True,
    )


def calibration_curve(
    matches: Sequence[MatchObservation],
    alpha: float,
    n_bins: int = DEFAULT_PROB_BINS,
) -> BinnedCurve:
    """Empirical outcome frequency binned over the predicted probability.

    Linear bins on [0, 1]; well-calibrated data tracks the diagonal, so the
    per-bin model value is the mean predicted probability of its members.
    """
    if len(matches) == 0:
        raise DomainError("no matches")
    if n_bins < 2:
        raise DomainError(f"n_bins must be at least 2, got {n_bins!r}")
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    _, outcomes, predicted = _oriented_ratios(matches, alpha)
    counts, freq, mean_pred = _bin_oriented(predicted, outcomes, predicted, edges)
    return BinnedCurve(
        edges=edges, counts=counts, freq=freq, mean_predicted=mean_pred,
        model_value=mean_pred.copy(), log_scale=False,
    )


def write_curve_csv(curve: BinnedCurve, fp: IO[str]) -> None:
    writer = csv.writer(fp)
    writer.writerow(["bin_center", "count", "empirical_freq", "model_value"])
    for center, count, freq, model in zip(
        curve.centers, curve.counts, curve.freq, curve.model_value
    ):
        writer.writerow([repr(float(center)), int(count),
                         _num(freq), _num(model)])


def _num(value: float) -> str:
    return "nan" if (value is None or math.isnan(value)) else repr(float(value))


# --- rank-band statistics ----------------------------------------------------


@dataclass(frozen=True)
class RankStats:
    """Point statistics for one rank band across snapshot dates."""

    band: int
    n_dates: int
    points_max: float
    points_mean: float
    points_min: float
    points_std: float
    ratio_max: float
    ratio_mean: float
    ratio_min: float
    ratio_std: float


def rank_stats(
    rankings: Iterable[RankingEntry],
    bands: Sequence[int] = (16, 32, 64),
) -> tuple[dict[int, RankStats], list[datetime.date]]:
    """Per-band max/mean/min/std of points and of the ratio to rank 32.

    Dates missing any requested band (or rank 32) are skipped and reported.
    Std is the population standard deviation.
    """
    needed = sorted(set(bands) | {32})
    by_date: dict[datetime.date, dict[int, float]] = {}
    for entry in rankings:
        if entry.rank in needed:
            by_date.setdefault(entry.date, {})[entry.rank] = entry.points
    usable: dict[datetime.date, dict[int, float]] = {}
    skipped: list[datetime.date] = []
    for date in sorted(by_date):
        if all(rank in by_date[date] for rank in needed):
            usable[date] = by_date[date]
        else:
            skipped.append(date)
    if not usable:
        raise DomainError("no snapshot date contains every requested rank band")
    stats: dict[int, RankStats] = {}
    for band in bands:
        pts = np.array([usable[d][band] for d in usable])
        ratio = np.array([usable[d][band] / usable[d][32] for d in usable])
        stats[band] = RankStats(
            band=band,
            n_dates=len(pts),
            points_max=float(pts.max()),
            points_mean=float(pts.mean()),
            points_min=float(pts.min()),
            points_std=float(pts.std()),
            ratio_max=float(ratio.max()),
            ratio_mean=float(ratio.mean()),
            ratio_min=float(ratio.min()),
            ratio_std=float(ratio.std()),
        )
    return stats, skipped


def write_rank_stats_csv(stats: Mapping[int, RankStats], fp: IO[str]) -> None:
    writer = csv.writer(fp)
    writer.writerow([
        "band", "n_dates", "expected_points",
        "points_max", "points_mean", "points_min", "points_std",
        "expected_ratio_to_32", "ratio_max", "ratio_mean", "ratio_min", "ratio_std",
    ])
    for band in sorted(stats):
        s = stats[band]
        writer.writerow([
            band, s.n_dates, expected_points(band),
            repr(s.points_max), repr(s.points_mean), repr(s.points_min), repr(s.points_std),
            repr(expected_ratio_to_32(band)),
            repr(s.ratio_max), repr(s.ratio_mean), repr(s.ratio_min), repr(s.ratio_std),
        ])


def format_rank_stats(stats: Mapping[int, RankStats]) -> str:
    """Aligned plain-text table, ideal-schedule reference row included."""
    bands = sorted(stats)
    head = "rank band          " + "".join(f"{b:>12}" for b in bands)
    rows = [
        ("expected", [float(expected_points(b)) for b in bands]),
        ("max", [stats[b].points_max for b in bands]),
        ("mean", [stats[b].points_mean for b in bands]),
        ("min", [stats[b].points_min for b in bands]),
        ("std", [stats[b].points_std for b in bands]),
        ("ratio expected", [expected_ratio_to_32(b) for b in bands]),
        ("ratio max", [stats[b].ratio_max for b in bands]),
        ("ratio mean", [stats[b].ratio_mean for b in bands]),
        ("ratio min", [stats[b].ratio_min for b in bands]),
        ("ratio std", [stats[b].ratio_std for b in bands]),
    ]
    lines = [head]
    for name, values in rows:
        lines.append(f"{name:<19}" + "".join(f"{v:>12.4f}" for v in values))
    return "\n".join(lines)


# --- participation counts ------------------------------------------------------

PARTICIPATION_BANDS = (8, 16, 30, 64)
_HIST_CAP = 6  # histogram cells 0..5 plus "6 or more"


@dataclass
class ParticipationTable:
    """500/250 participation histograms per top-N band."""

    bands: tuple[int, ...]
    histograms: dict[tuple[int, Category], list[int]] = field(default_factory=dict)
    means: dict[tuple[int, Category], float] = field(default_factory=dict)
    unresolved_events: int = 0


def participation_table(
    rows: Sequence[RawMatchRow],
    bands: Sequence[int] = PARTICIPATION_BANDS,
    rankings: Iterable[RankingEntry] | None = None,
    as_of: datetime.date | None = None,
) -> ParticipationTable:
    """Count 500 and 250 events played per player, bucketed by rank band.

    A player "played" a tournament if he appears in any of its rows.  Band
    membership uses the ranking snapshot at ``as_of`` when given, else each
    player's rank at his latest match.  Events whose category cannot be
    resolved (stock archives tag both series "A") count as 250s and are
    tallied in ``unresolved_events``.
    """
    counted = {Category.TOUR_500, Category.TOUR_250}
    events: dict[str, tuple[Category, bool]] = {}
    players_of_event: dict[str, set[str]] = {}
    for row in rows:
        if row.category is not None:
            category, resolved = row.category, True
        elif row.level == "A":
            category, resolved = Category.TOUR_250, False
        else:
            continue
        if category not in counted:
            continue
        key = row.tournament_id or row.tournament_name
        events[key] = (category, resolved)
        players_of_event.setdefault(key, set()).update((row.winner_id, row.loser_id))

    per_player: dict[str, dict[Category, int]] = {}
    for key, (category, _) in events.items():
        for player in players_of_event[key]:
            per_player.setdefault(player, {c: 0 for c in counted})[category] += 1

    rank_of: dict[str, int] = {}
    if rankings is not None:
        snapshot: dict[str, tuple[datetime.date, int]] = {}
        for entry in rankings:
            if as_of is not None and entry.date > as_of:
                continue
            best = snapshot.get(entry.player)
            if best is None or entry.date > best[0]:
                snapshot[entry.player] = (entry.date, entry.rank)
        rank_of = {player: rank for player, (_, rank) in snapshot.items()}
    else:
        latest: dict[str, tuple[datetime.date, int]] = {}
        for row in rows:
            if row.date is None:
                continue
            for player, rank in ((row.winner_id, row.winner_rank),
                                 (row.loser_id, row.loser_rank)):
                if rank is None:
                    continue
                seen = latest.get(player)
                if seen is None or row.date >= seen[0]:
                    latest[player] = (row.date, rank)
        rank_of = {player: rank for player, (_, rank) in latest.items()}

    table = ParticipationTable(bands=tuple(bands))
    table.unresolved_events = sum(1 for _, resolved in events.values() if not resolved)
    for band in bands:
        members = [p for p, r in rank_of.items() if r <= band]
        for category in counted:
            hist = [0] * (_HIST_CAP + 1)
            total = 0
            for player in members:
                count = per_player.get(player, {}).get(category, 0)
                hist[min(count, _HIST_CAP)] += 1
                total += count
            table.histograms[(band, category)] = hist
            table.means[(band, category)] = total / len(members) if members else 0.0
    return table


def write_participation_csv(table: ParticipationTable, fp: IO[str]) -> None:
    writer = csv.writer(fp)
    writer.writerow(["band", "category"] + [str(k) for k in range(_HIST_CAP)]
                    + [f"{_HIST_CAP}_or_more", "mean"])
    for band in table.bands:
        for category in (Category.TOUR_500, Category.TOUR_250):
            hist = table.histograms[(band, category)]
            writer.writerow([band, category.value] + hist
                            + [repr(table.means[(band, category)])])


def format_participation(table: ParticipationTable) -> str:
    header = ("band  category   " + "".join(f"{k:>5}" for k in range(_HIST_CAP))
              + f"{'6+':>5}   mean")
    lines = [header]
    for band in table.bands:
        for category in (Category.TOUR_500, Category.TOUR_250):
            hist = table.histograms[(band, category)]
            mean = table.means[(band, category)]
            lines.append(
                f"{band:<5} {category.value:<10} "
                + "".join(f"{c:>5}" for c in hist)
                + f"  {mean:6.3f}"
            )
    if table.unresolved_events:
        lines.append(f"unresolved tour events counted as 250s: {table.unresolved_events}")
    return "\n".join(lines)


# --- minimal SVG emission ------------------------------------------------------

_SVG_W, _SVG_H = 640, 480
_MARGIN = 60


def _x_pos(value: float, lo: float, hi: float, log_scale: bool) -> float:
    if log_scale:
        t = (math.log10(value) - math.log10(lo)) / (math.log10(hi) - math.log10(lo))
    else:
        t = (value - lo) / (hi - lo)
    return _MARGIN + t * (_SVG_W - 2 * _MARGIN)


def _y_pos(value: float) -> float:
    return _SVG_H - _MARGIN - value * (_SVG_H - 2 * _MARGIN)


def write_curve_svg(curve: BinnedCurve, fp: IO[str], title: str, x_label: str) -> None:
    """Self-contained vector plot: model curve as a line, data as circles."""
    lo, hi = float(curve.edges[0]), float(curve.edges[-1])
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_SVG_W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    # axes
    x0, y0 = _MARGIN, _SVG_H - _MARGIN
    x1, y1 = _SVG_W - _MARGIN, _MARGIN
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = _y_pos(frac)
        parts.append(f'<line x1="{x0 - 4}" y1="{y:.1f}" x2="{x0}" y2="{y:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{frac:.2f}</text>'
        )
    if curve.log_scale:
        tick = lo
        while tick <= hi * 1.0000001:
            x = _x_pos(tick, lo, hi, True)
            parts.append(
                f'<line x1="{x:.1f}" y1="{y0}" x2="{x:.1f}" y2="{y0 + 4}" stroke="black"/>'
            )
            parts.append(
                f'<text x="{x:.1f}" y="{y0 + 18}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{tick:g}</text>'
            )
            tick *= 10
    else:
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            x = _x_pos(lo + frac * (hi - lo), lo, hi, False)
            parts.append(
                f'<line x1="{x:.1f}" y1="{y0}" x2="{x:.1f}" y2="{y0 + 4}" stroke="black"/>'
            )
            parts.append(
                f'<text x="{x:.1f}" y="{y0 + 18}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{lo + frac * (hi - lo):g}</text>'
            )
    parts.append(
        f'<text x="{_SVG_W / 2:.1f}" y="{_SVG_H - 16}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    # model curve
    line_pts = []
    for center, model in zip(curve.centers, curve.model_value):
        if math.isnan(model):
            continue
        line_pts.append(f"{_x_pos(float(center), lo, hi, curve.log_scale):.2f},{_y_pos(model):.2f}")
    if line_pts:
        parts.append(
            f'<polyline points="{" ".join(line_pts)}" fill="none" stroke="black" stroke-width="2"/>'
        )
    # empirical points
    for center, freq, count in zip(curve.centers, curve.freq, curve.counts):
        if count == 0 or math.isnan(freq):
            continue
        cx = _x_pos(float(center), lo, hi, curve.log_scale)
        parts.append(
            f'<circle cx="{cx:.2f}" cy="{_y_pos(float(freq)):.2f}" r="3" '
            f'fill="none" stroke="crimson" stroke-width="1.5"/>'
        )
    parts.append("</svg>")
    fp.write("\n".join(parts) + "\n")
