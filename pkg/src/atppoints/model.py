"""Logistic match-outcome model driven by the ranking-point ratio.

The model predicts that player i beats player j with probability

    p = ratio**alpha / (1 + ratio**alpha),    ratio = r_i / r_j

where r_i, r_j are the players' current ranking points and alpha is a
single fitted exponent.  Fitting minimizes the Brier score (mean squared
error between 0/1 outcomes and predicted probabilities) by golden-section
search over a bracket.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

DEFAULT_SEARCH_LO = 0.01
DEFAULT_SEARCH_HI = 5.0
DEFAULT_TOL = 1e-6

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ModelParams:
    """Fitted exponent plus fit metadata."""

    alpha: float
    fitted_e2: float | None = None
    n_matches: int | None = None

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if self.fitted_e2 is not None and not 0.0 <= self.fitted_e2 <= 1.0:
            raise DomainError(f"fitted_e2 must lie in [0, 1], got {self.fitted_e2!r}")
        if self.n_matches is not None and self.n_matches < 0:
            raise DomainError(f"n_matches must be nonnegative, got {self.n_matches!r}")


@dataclass(frozen=True)
class MatchObservation:
    """One completed match, oriented winner-first.

    Matches where either player had zero ranking points are excluded at
    ingestion time and are never constructed.
    """

    winner_points: float
    loser_points: float
    date: datetime.date
    level: str = "other"
    round: str = "unknown"

    def __post_init__(self) -> None:
        if not self.winner_points > 0:
            raise DomainError(f"winner_points must be positive, got {self.winner_points!r}")
        if not self.loser_points > 0:
            raise DomainError(f"loser_points must be positive, got {self.loser_points!r}")


@dataclass(frozen=True)
class Prediction:
    ratio: float
    probability: float


def win_probability(alpha: float, ratio: float) -> float:
    """Evaluate ratio**alpha / (1 + ratio**alpha) without overflow.

    For ratio > 1 the equivalent form 1 / (1 + ratio**-alpha) is used so
    that extreme ratios saturate cleanly instead of overflowing.  Agrees
    with the textbook form within 1e-12 for ratio in [1e-6, 1e6].  Where
    ratio**alpha saturates past float resolution the result is clamped to
    the open interval, one ulp inside 0 or 1.
    """
    if ratio > 1.0:
        p = 1.0 / (1.0 + math.pow(ratio, -alpha))
    else:
        t = math.pow(ratio, alpha)
        p = t / (1.0 + t)
    if p >= 1.0:
        return math.nextafter(1.0, 0.0)
    if p <= 0.0:
        return math.nextafter(0.0, 1.0)
    return p


def predict(alpha: float, r_i: float, r_j: float) -> Prediction:
    """Probability that the player holding r_i points beats the one holding r_j."""
    _require_positive("alpha", alpha)
    _require_positive("r_i", r_i)
    _require_positive("r_j", r_j)
    ratio = r_i / r_j
    return Prediction(ratio=ratio, probability=win_probability(alpha, ratio))


def _require_positive(name: str, value: float) -> None:
    # `not value > 0` also rejects NaN
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value!r}")


def _log_ratios(matches: Sequence[MatchObservation]) -> np.ndarray:
    out = np.empty(len(matches), dtype=np.float64)
    for k, m in enumerate(matches):
        out[k] = math.log(m.winner_points) - math.log(m.loser_points)
    return out


def _brier_from_log_ratios(alpha: float, log_ratios: np.ndarray) -> float:
    # p = 1 / (1 + exp(-alpha * log(ratio))) is the same logistic curve;
    # exp overflow saturates to p = 0, which is the correct limit.
    with np.errstate(over="ignore"):
        p = 1.0 / (1.0 + np.exp(-alpha * log_ratios))
    resid = 1.0 - p
    # np.mean reduces pairwise over the fixed input order: reproducible.
    return float(np.mean(resid * resid))


def brier_score(alpha: float, matches: Sequence[MatchObservation]) -> float:
    """Mean squared error of the model on winner-first observations.

    Each match contributes (1 - p)**2 with p the predicted probability of
    the actual winner.  Scoring both orientations instead changes nothing:
    the loser-side term (0 - (1 - p))**2 is identical.
    """
    _require_positive("alpha", alpha)
    if len(matches) == 0:
        raise DomainError("no matches")
    return _brier_from_log_ratios(alpha, _log_ratios(matches))


def brier_curve(matches: Sequence[MatchObservation], alphas: Iterable[float]) -> np.ndarray:
    """Brier score evaluated at each alpha, sharing one pass over the data."""
    if len(matches) == 0:
        raise DomainError("no matches")
    logs = _log_ratios(matches)
    return np.array([_brier_from_log_ratios(float(a), logs) for a in alphas])


def baseline_brier(matches: Sequence[MatchObservation]) -> float:
    """Brier score of the hard predictor "the higher-point player wins".

    p = 1 when the winner had more points, 0 when fewer, 0.5 on a tie, so
    each match contributes 0, 1, or 0.25 respectively.
    """
    if len(matches) == 0:
        raise DomainError("no matches")
    total = 0.0
    for m in matches:
        if m.winner_points < m.loser_points:
            total += 1.0
        elif m.winner_points == m.loser_points:
            total += 0.25
    return total / len(matches)


def fit_alpha(
    matches: Sequence[MatchObservation],
    search_lo: float = DEFAULT_SEARCH_LO,
    search_hi: float = DEFAULT_SEARCH_HI,
    tol: float = DEFAULT_TOL,
) -> ModelParams:
    """Minimize the Brier score over alpha in [search_lo, search_hi].

    Golden-section search, run until the bracket width drops below tol.
    The objective is smooth and empirically unimodal on real data; tests
    cross-check against a dense grid scan.  Deterministic for fixed inputs.
    """
    if len(matches) == 0:
        raise DomainError("no matches")
    if not (0 < search_lo < search_hi):
        raise DomainError(
            f"invalid search bracket [{search_lo!r}, {search_hi!r}]: need 0 < lo < hi"
        )
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")

    logs = _log_ratios(matches)

    def f(a: float) -> float:
        return _brier_from_log_ratios(a, logs)

    a, b = search_lo, search_hi
    c = b - (b - a) * _INVPHI
    d = a + (b - a) * _INVPHI
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INVPHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INVPHI
            fd = f(d)
    alpha = 0.5 * (a + b)
    return ModelParams(alpha=alpha, fitted_e2=f(alpha), n_matches=len(matches))
