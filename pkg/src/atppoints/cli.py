"""Command-line frontend: fit, predict, evaluate, report, simulate, ingest-dump.

Every command that writes files drops a manifest.json beside its outputs
recording the resolved flags, input hashes, seed, and tool version.  Data
files are byte-reproducible for identical inputs and seeds; only the
manifest timestamp differs between reruns.

Exit codes: 0 success, 2 usage, 3 schema, 4 I/O, 5 domain.
"""

from __future__ import annotations

import datetime
import functools
import sys
from pathlib import Path

import click

from . import __version__
from .errors import DomainError, SchemaError
from .ingest import (
    DEFAULT_LEVELS,
    dump_observations,
    load_matches,
    load_raw_rows,
    load_rankings,
    load_schema,
)
from .manifest import build_manifest, dataset_fingerprint, write_manifest
from .model import ModelParams, baseline_brier, brier_score, fit_alpha, predict
from .points import expected_points
from .report import (
    bin_by_ratio,
    calibration_curve,
    format_participation,
    format_rank_stats,
    participation_table,
    rank_stats,
    write_curve_csv,
    write_curve_svg,
    write_participation_csv,
    write_rank_stats_csv,
)
from .season import SeasonConfig, load_calendar_file, load_season_config, run_season

EXIT_SCHEMA = 3
EXIT_IO = 4
EXIT_DOMAIN = 5


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SchemaError as exc:
            click.echo(f"schema error: {exc}", err=True)
            sys.exit(EXIT_SCHEMA)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DOMAIN)
        except OSError as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(EXIT_IO)

    return wrapper


def ingest_options(fn):
    fn = click.option("--from", "date_from", type=click.DateTime(["%Y-%m-%d"]),
                      default=None, help="Keep matches on or after this date.")(fn)
    fn = click.option("--to", "date_to", type=click.DateTime(["%Y-%m-%d"]),
                      default=None, help="Keep matches on or before this date.")(fn)
    fn = click.option("--levels", default=",".join(sorted(DEFAULT_LEVELS)),
                      show_default=True, help="Comma-separated level letters to keep.")(fn)
    fn = click.option("--include-qualifying", is_flag=True,
                      help="Keep qualifying-round matches.")(fn)
    fn = click.option("--drop-walkovers", is_flag=True,
                      help="Drop rows whose score marks a walkover.")(fn)
    fn = click.option("--schema", "schema_path", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="key=value column-mapping file.")(fn)
    return fn


def _load(match_files, date_from, date_to, levels, include_qualifying,
          drop_walkovers, schema_path):
    schema = load_schema(schema_path) if schema_path else None
    date_range = (
        date_from.date() if date_from else None,
        date_to.date() if date_to else None,
    )
    return load_matches(
        match_files,
        date_range=date_range,
        levels=frozenset(levels.split(",")),
        include_qualifying=include_qualifying,
        drop_walkovers=drop_walkovers,
        schema=schema,
    )


def _ensure_out(out: str) -> Path:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def write_params_file(path: Path, params: ModelParams, fingerprint: str,
                      date_from, date_to) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(f"alpha={params.alpha!r}\n")
        fp.write(f"fitted_e2={params.fitted_e2!r}\n")
        fp.write(f"n_matches={params.n_matches}\n")
        fp.write(f"dataset_fingerprint={fingerprint}\n")
        fp.write(f"date_from={date_from.date().isoformat() if date_from else ''}\n")
        fp.write(f"date_to={date_to.date().isoformat() if date_to else ''}\n")


def read_params_file(path: str | Path) -> ModelParams:
    fields: dict[str, str] = {}
    with open(path, encoding="utf-8") as fp:
        for line in fp:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
    try:
        alpha = float(fields["alpha"])
    except (KeyError, ValueError):
        raise SchemaError(f"{path}: missing or invalid alpha field") from None
    e2 = fields.get("fitted_e2")
    n = fields.get("n_matches")
    return ModelParams(
        alpha=alpha,
        fitted_e2=float(e2) if e2 not in (None, "", "None") else None,
        n_matches=int(n) if n not in (None, "", "None") else None,
    )


def _resolve_alpha(alpha: float | None, params_path: str | None) -> float:
    if alpha is not None:
        return alpha
    if params_path is not None:
        return read_params_file(params_path).alpha
    raise click.UsageError("either --alpha or --params is required")


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Ranking-point ratio model: fit, evaluate, report, and simulate."""


@main.command()
@click.argument("match_files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@ingest_options
@click.option("--search-lo", default=0.01, show_default=True)
@click.option("--search-hi", default=5.0, show_default=True)
@click.option("--tol", default=1e-6, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@handle_errors
def fit(match_files, date_from, date_to, levels, include_qualifying,
        drop_walkovers, schema_path, search_lo, search_hi, tol, out):
    """Fit the exponent alpha by minimizing the Brier score."""
    observations, report = _load(match_files, date_from, date_to, levels,
                                 include_qualifying, drop_walkovers, schema_path)
    if not observations:
        raise DomainError("no matches after filtering")
    params = fit_alpha(observations, search_lo=search_lo, search_hi=search_hi, tol=tol)
    baseline = baseline_brier(observations)

    out_dir = _ensure_out(out)
    fingerprint = dataset_fingerprint(match_files)
    write_params_file(out_dir / "params.txt", params, fingerprint, date_from, date_to)
    with open(out_dir / "report.txt", "w", encoding="utf-8") as fp:
        fp.write(f"alpha        {params.alpha:.6f}\n")
        fp.write(f"e2           {params.fitted_e2:.6f}\n")
        fp.write(f"baseline_e2  {baseline:.6f}\n")
        fp.write(f"n_matches    {params.n_matches}\n\n")
        fp.write(report.summary() + "\n")
    write_manifest(
        build_manifest("fit", _flags(
            date_from=date_from, date_to=date_to, levels=levels,
            include_qualifying=include_qualifying, drop_walkovers=drop_walkovers,
            schema=schema_path, search_lo=search_lo, search_hi=search_hi,
            tol=tol, out=out), match_files),
        out_dir,
    )
    click.echo(f"alpha={params.alpha:.6f} e2={params.fitted_e2:.6f} "
               f"baseline_e2={baseline:.6f} n={params.n_matches}")


@main.command("predict")
@click.option("--alpha", type=float, default=None, help="Model exponent.")
@click.option("--params", "params_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Fitted-params file from `fit`.")
@click.argument("r_i", type=float)
@click.argument("r_j", type=float)
@handle_errors
def predict_cmd(alpha, params_path, r_i, r_j):
    """Print win probability for a player with R_I points against R_J."""
    alpha = _resolve_alpha(alpha, params_path)
    try:
        result = predict(alpha, r_i, r_j)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(f"ratio       {result.ratio:.6f}")
    click.echo(f"probability {result.probability:.6f}")


@main.command()
@click.argument("match_files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@ingest_options
@click.option("--alpha", type=float, default=None)
@click.option("--params", "params_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--out", default=None, type=click.Path(file_okay=False),
              help="Optional output directory for evaluation.txt.")
@handle_errors
def evaluate(match_files, date_from, date_to, levels, include_qualifying,
             drop_walkovers, schema_path, alpha, params_path, out):
    """Brier score of a fitted model on a (held-out) date range."""
    alpha = _resolve_alpha(alpha, params_path)
    observations, report = _load(match_files, date_from, date_to, levels,
                                 include_qualifying, drop_walkovers, schema_path)
    if not observations:
        raise DomainError("no matches after filtering")
    e2 = brier_score(alpha, observations)
    baseline = baseline_brier(observations)
    lines = (f"alpha        {alpha:.6f}\n"
             f"e2           {e2:.6f}\n"
             f"baseline_e2  {baseline:.6f}\n"
             f"n_matches    {len(observations)}\n")
    click.echo(lines, nl=False)
    if out:
        out_dir = _ensure_out(out)
        with open(out_dir / "evaluation.txt", "w", encoding="utf-8") as fp:
            fp.write(lines + "\n" + report.summary() + "\n")
        write_manifest(
            build_manifest("evaluate", _flags(
                date_from=date_from, date_to=date_to, levels=levels,
                include_qualifying=include_qualifying, drop_walkovers=drop_walkovers,
                schema=schema_path, alpha=alpha, out=out), match_files),
            out_dir,
        )


@main.command()
@click.argument("match_files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@ingest_options
@click.option("--rankings", "ranking_files", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Ranking snapshot files for the rank-band tables.")
@click.option("--alpha", type=float, default=None)
@click.option("--params", "params_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--ratio-bins", default=40, show_default=True)
@click.option("--prob-bins", default=20, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@handle_errors
def report(match_files, date_from, date_to, levels, include_qualifying,
           drop_walkovers, schema_path, ranking_files, alpha, params_path,
           ratio_bins, prob_bins, out):
    """Emit figures and tables: ratio curve, calibration, rank stats, participation."""
    alpha = _resolve_alpha(alpha, params_path)
    observations, ingest_report = _load(match_files, date_from, date_to, levels,
                                        include_qualifying, drop_walkovers, schema_path)
    if not observations:
        raise DomainError("no matches after filtering")
    out_dir = _ensure_out(out)

    ratio_curve = bin_by_ratio(observations, alpha, n_bins=ratio_bins)
    with open(out_dir / "ratio_curve.csv", "w", encoding="utf-8", newline="") as fp:
        write_curve_csv(ratio_curve, fp)
    with open(out_dir / "ratio_curve.svg", "w", encoding="utf-8") as fp:
        write_curve_svg(ratio_curve, fp, "Win frequency vs point ratio", "point ratio")

    calib = calibration_curve(observations, alpha, n_bins=prob_bins)
    with open(out_dir / "calibration.csv", "w", encoding="utf-8", newline="") as fp:
        write_curve_csv(calib, fp)
    with open(out_dir / "calibration.svg", "w", encoding="utf-8") as fp:
        write_curve_svg(calib, fp, "Outcome frequency vs predicted probability",
                        "predicted probability")

    if ranking_files:
        entries, _ = load_rankings(ranking_files)
        stats, skipped = rank_stats(entries)
        with open(out_dir / "rank_stats.csv", "w", encoding="utf-8", newline="") as fp:
            write_rank_stats_csv(stats, fp)
        with open(out_dir / "rank_stats.txt", "w", encoding="utf-8") as fp:
            fp.write(format_rank_stats(stats) + "\n")
            if skipped:
                fp.write(f"\nskipped {len(skipped)} snapshot dates missing a band\n")
    else:
        click.echo("no ranking files given: rank-band tables skipped", err=True)

    schema = load_schema(schema_path) if schema_path else None
    raw_rows = load_raw_rows(match_files, schema)
    table = participation_table(raw_rows)
    with open(out_dir / "participation.csv", "w", encoding="utf-8", newline="") as fp:
        write_participation_csv(table, fp)
    with open(out_dir / "participation.txt", "w", encoding="utf-8") as fp:
        fp.write(format_participation(table) + "\n")

    with open(out_dir / "ingest_report.txt", "w", encoding="utf-8") as fp:
        fp.write(ingest_report.summary() + "\n")

    write_manifest(
        build_manifest("report", _flags(
            date_from=date_from, date_to=date_to, levels=levels,
            include_qualifying=include_qualifying, drop_walkovers=drop_walkovers,
            schema=schema_path, rankings=list(ranking_files), alpha=alpha,
            ratio_bins=ratio_bins, prob_bins=prob_bins, out=out),
            list(match_files) + list(ranking_files)),
        out_dir,
    )
    click.echo(f"report written to {out_dir}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Flat key=value season config.")
@click.option("--alpha", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--players", "n_players", type=int, default=None)
@click.option("--seasons", "n_seasons", type=int, default=None)
@click.option("--burn-in", type=int, default=None)
@click.option("--n500", "n_500_choices", type=int, default=None)
@click.option("--n250", "n_250_choices", type=int, default=None)
@click.option("--max-events", "max_events_per_season", type=int, default=None)
@click.option("--top30-mandatory/--no-top30-mandatory", "top30_mandatory",
              default=None, help="Season-start top 30 enter majors and picks only.")
@click.option("--points-floor", type=float, default=None)
@click.option("--calendar", "calendar_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Calendar CSV (week, category, draw_size).")
@click.option("--out", required=True, type=click.Path(file_okay=False))
@handle_errors
def simulate(config_path, alpha, seed, n_players, n_seasons, burn_in,
             n_500_choices, n_250_choices, max_events_per_season,
             top30_mandatory, points_floor, calendar_path, out):
    """Run the season Monte Carlo and summarize rank-band points."""
    config = load_season_config(config_path) if config_path else SeasonConfig()
    overrides = {
        "alpha": alpha,
        "rng_seed": seed,
        "n_players": n_players,
        "n_seasons": n_seasons,
        "burn_in": burn_in,
        "n_500_choices": n_500_choices,
        "n_250_choices": n_250_choices,
        "max_events_per_season": max_events_per_season,
        "top30_mandatory": top30_mandatory,
        "points_floor": points_floor,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if calendar_path is not None:
        config.calendar = load_calendar_file(calendar_path)
    players = [f"P{i + 1:03d}" for i in range(config.n_players)]
    result = run_season(config, players)

    out_dir = _ensure_out(out)
    with open(out_dir / "seasons.csv", "w", encoding="utf-8", newline="") as fp:
        result.write_csv(fp)
    with open(out_dir / "summary.txt", "w", encoding="utf-8") as fp:
        fp.write(f"seasons      {config.n_seasons} (burn-in {config.burn_in})\n")
        fp.write(f"players      {config.n_players}\n")
        fp.write(f"alpha        {config.alpha:.6f}\n")
        fp.write(f"rng_seed     {config.rng_seed}\n\n")
        fp.write("rank band    expected      median        mean         min         max\n")
        for band in (16, 32, 64):
            s = result.rank_summary(band)
            fp.write(
                f"{band:<12} {expected_points(band):>9} {s['median']:>11.1f} "
                f"{s['mean']:>11.1f} {s['min']:>11.1f} {s['max']:>11.1f}\n"
            )
    inputs = [p for p in (config_path, calendar_path) if p]
    write_manifest(
        build_manifest("simulate", _flags(
            config=config_path, alpha=config.alpha, seed=config.rng_seed,
            players=config.n_players, seasons=config.n_seasons,
            burn_in=config.burn_in, n500=config.n_500_choices,
            n250=config.n_250_choices, max_events=config.max_events_per_season,
            top30_mandatory=config.top30_mandatory,
            points_floor=config.points_floor, calendar=calendar_path,
            out=out),
            inputs, seed=config.rng_seed),
        out_dir,
    )
    click.echo(f"simulation written to {out_dir}")


@main.command("ingest-dump")
@click.argument("match_files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@ingest_options
@click.option("--out", required=True, type=click.Path(file_okay=False))
@handle_errors
def ingest_dump(match_files, date_from, date_to, levels, include_qualifying,
                drop_walkovers, schema_path, out):
    """Normalize archives into (date, level, round, winner_points, loser_points)."""
    observations, report = _load(match_files, date_from, date_to, levels,
                                 include_qualifying, drop_walkovers, schema_path)
    out_dir = _ensure_out(out)
    with open(out_dir / "observations.csv", "w", encoding="utf-8", newline="") as fp:
        dump_observations(observations, fp)
    write_manifest(
        build_manifest("ingest-dump", _flags(
            date_from=date_from, date_to=date_to, levels=levels,
            include_qualifying=include_qualifying, drop_walkovers=drop_walkovers,
            schema=schema_path, out=out), match_files),
        out_dir,
    )
    click.echo(report.summary())


def _flags(**kwargs) -> dict:
    out = {}
    for key, value in kwargs.items():
        if isinstance(value, datetime.datetime):
            value = value.date().isoformat()
        out[key] = value
    return out


if __name__ == "__main__":
    main()
