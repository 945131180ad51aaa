#!/usr/bin/env python3
"""Fit the ratio model on the bundled sample archive and print a report.

Runs end to end with no external data.  For a real fit, download the public
match archive and point the CLI at it (see README).
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from atppoints.ingest import load_matches
from atppoints.model import baseline_brier, brier_curve, fit_alpha

SAMPLE = Path(__file__).resolve().parent.parent / "src" / "atppoints" / "data" / "sample_matches.csv"


def main() -> None:
    observations, report = load_matches([SAMPLE])
    print(report.summary())
    print()

    params = fit_alpha(observations)
    baseline = baseline_brier(observations)
    print(f"fitted alpha   {params.alpha:.6f}")
    print(f"brier score    {params.fitted_e2:.6f}")
    print(f"baseline       {baseline:.6f}")
    print(f"matches        {params.n_matches}")
    print()

    # objective shape around the minimum
    alphas = np.linspace(0.2, 3.0, 15)
    scores = brier_curve(observations, alphas)
    print("alpha     brier")
    for a, s in zip(alphas, scores):
        marker = " <- min" if abs(s - scores.min()) < 1e-12 else ""
        print(f"{a:5.2f}  {s:.6f}{marker}")


if __name__ == "__main__":
    main()
