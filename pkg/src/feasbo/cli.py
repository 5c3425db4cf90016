"""Command line interface: benchmark studies and campaign management."""

from __future__ import annotations

import csv
import json
import os

import click
import numpy as np

from . import bench as bench_module
from . import campaign as campaign_module
from .campaign import CampaignError


def _parse_floats(text: str, name: str):
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as err:
        raise click.ClickException(f"bad {name}: {err}")
    if not values:
        raise click.ClickException(f"bad {name}: no values")
    return values


def _problem_name(raw: str) -> str:
    return raw.upper()


@click.group()
def main():
    """Feasibility-first batch optimization toolkit."""


# -- bench -------------------------------------------------------------------

@main.group()
def bench():
    """Monte Carlo benchmark studies on the built-in test problems."""


@bench.command("run")
@click.option("--problem", type=click.Choice(["p1", "p2", "p3"],
                                             case_sensitive=False), required=True)
@click.option("--acq", type=click.Choice(["alg1", "eic", "both"],
                                         case_sensitive=False), default="both",
              show_default=True)
@click.option("--pi", type=float, default=0.6, show_default=True,
              help="Confidence threshold for the dual-branch acquisition.")
@click.option("--tau", type=float, default=0.0, show_default=True,
              help="Measurement noise standard deviation (0 = noiseless).")
@click.option("--reps", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--iters", type=int, default=100, show_default=True,
              help="Iteration budget per repetition.")
@click.option("--grid", type=int, default=20_000, show_default=True,
              help="Candidate grid size.")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def bench_run(problem, acq, pi, tau, reps, seed, iters, grid, jobs, out):
    """Run repeated optimizations and write metrics, tables, and traces."""
    acqs = ["alg1", "eic"] if acq.lower() == "both" else [acq.lower()]
    os.makedirs(out, exist_ok=True)
    metrics_by_acq = {}
    for name in acqs:
        config = bench_module.RunConfig(
            problem=_problem_name(problem), acquisition=name, pi=pi, tau=tau,
            repetitions=reps, seed=seed, max_iterations=iters,
            candidate_count=grid)
        click.echo(f"running {config.problem} {name} "
                   f"(pi={pi:g}, tau={tau:g}, reps={reps}) ...")
        metrics, traces = bench_module.run_monte_carlo(config, n_jobs=jobs)
        metrics_by_acq[name] = metrics
        bench_module.write_traces(os.path.join(out, "traces", name), traces)
        click.echo(f"  required iterations: {metrics.mean_required_iterations:.2f}  "
                   f"feasible fraction: {metrics.feasible_fraction:.3f}  "
                   f"({metrics.runtime_seconds:.1f}s)")
    payload = {
        "problem": _problem_name(problem),
        "pi": pi,
        "tau": tau,
        "repetitions": reps,
        "seed": seed,
        "max_iterations": iters,
        "candidate_count": grid,
        "results": {k: m.to_dict() for k, m in metrics_by_acq.items()},
    }
    bench_module.write_metrics_json(os.path.join(out, "metrics.json"), payload)
    bench_module.write_table_csv(os.path.join(out, "table.csv"), metrics_by_acq)
    bench_module.write_convergence_csv(os.path.join(out, "convergence.csv"),
                                       metrics_by_acq)
    click.echo(f"wrote {out}/metrics.json, table.csv, convergence.csv, traces/")


@bench.command("sweep-pi")
@click.option("--problem", type=click.Choice(["p1", "p2", "p3"],
                                             case_sensitive=False), default="p3",
              show_default=True)
@click.option("--pis", type=str, default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
              show_default=True, help="Comma-separated threshold values.")
@click.option("--reps", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--iters", type=int, default=100, show_default=True)
@click.option("--grid", type=int, default=20_000, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--no-eic", is_flag=True, default=False,
              help="Skip the expected-improvement reference column.")
@click.option("--out", type=click.Path(), required=True)
def bench_sweep_pi(problem, pis, reps, seed, iters, grid, jobs, no_eic, out):
    """Sweep the confidence threshold with shared initializations."""
    values = _parse_floats(pis, "--pis")
    os.makedirs(out, exist_ok=True)
    sweep = bench_module.pi_sweep(
        _problem_name(problem), values, repetitions=reps, seed=seed,
        include_eic=not no_eic, n_jobs=jobs, max_iterations=iters,
        candidate_count=grid)
    bench_module.write_sweep_csv(os.path.join(out, "sweep.csv"), sweep)
    payload = {
        "problem": _problem_name(problem),
        "repetitions": reps,
        "seed": seed,
        "results": {k: m.to_dict(include_series=False) for k, m in sweep.items()},
    }
    bench_module.write_metrics_json(os.path.join(out, "metrics.json"), payload)
    for key, metrics in sweep.items():
        click.echo(f"  pi={key}: required {metrics.mean_required_iterations:.2f}, "
                   f"feasible {metrics.feasible_fraction:.3f}")
    click.echo(f"wrote {out}/sweep.csv and metrics.json")


@bench.command("timing")
@click.option("--problem", type=click.Choice(["p1", "p2", "p3"],
                                             case_sensitive=False), default="p1",
              show_default=True)
@click.option("--grid", type=int, default=20_000, show_default=True)
@click.option("--sizes", type=str, default="10,50,100", show_default=True)
@click.option("--repeats", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="Optional JSON output file.")
def bench_timing(problem, grid, sizes, repeats, seed, out):
    """Wall-clock per full scoring iteration at several dataset sizes."""
    size_values = [int(v) for v in _parse_floats(sizes, "--sizes")]
    results = bench_module.timing_probe(_problem_name(problem),
                                        candidate_count=grid, sizes=size_values,
                                        repeats=repeats, seed=seed)
    for row in results:
        click.echo(f"  n={row['size']:4d}: median {row['median_ms']:.1f} ms "
                   f"over {len(row['times_ms'])} trials")
    if out:
        bench_module.write_metrics_json(out, {"problem": _problem_name(problem),
                                              "grid": grid, "results": results})
        click.echo(f"wrote {out}")


# -- campaign ----------------------------------------------------------------

@main.group()
def campaign():
    """Persistent experimental campaigns driven from a session file."""


def _echo_error(err: Exception):
    raise click.ClickException(str(err))


@campaign.command("init")
@click.option("--session", type=click.Path(), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--force", is_flag=True, default=False,
              help="Overwrite an existing session file.")
def campaign_init_cmd(session, config_path, force):
    """Create a session file from a JSON config."""
    try:
        state = campaign_module.campaign_init(config_path, session, force=force)
    except (CampaignError, ValueError) as err:
        _echo_error(err)
    click.echo(f"created session {session} ({state.config.name}) with "
               f"{len(state.dataset)} initialization experiments")


@campaign.command("calibrate")
@click.option("--session", type=click.Path(exists=True), required=True)
@click.option("--baseline", type=str, required=True,
              help="Comma-separated controllable inputs of the baseline point.")
@click.option("--measured-status", type=float, required=True,
              help="Freshly measured status value at the baseline point.")
@click.option("--observations", type=str, default=None,
              help="Optional comma-separated constraint measurements from the "
                   "baseline run; appended to the dataset when configured.")
@click.option("--force", is_flag=True, default=False,
              help="Accept a baseline that is not an initialization point.")
def campaign_calibrate_cmd(session, baseline, measured_status, observations, force):
    """Compute the session offset from a re-measured baseline run."""
    baseline_values = _parse_floats(baseline, "--baseline")
    obs_values = (_parse_floats(observations, "--observations")
                  if observations is not None else None)
    try:
        _, offset = campaign_module.campaign_calibrate(
            session, baseline_values, measured_status,
            constraint_measurements=obs_values, force=force)
    except (CampaignError, ValueError) as err:
        _echo_error(err)
    click.echo(f"session offset: {offset.delta!r} "
               f"(measured {offset.baseline_measured!r}, "
               f"predicted {offset.predicted!r})")


@campaign.command("suggest")
@click.option("--session", type=click.Path(exists=True), required=True)
@click.option("--n", type=int, default=None, help="Batch size for this batch only.")
@click.option("--pi", type=float, default=None,
              help="Confidence threshold override; sticky for later batches.")
@click.option("--as-json", is_flag=True, default=False)
def campaign_suggest_cmd(session, n, pi, as_json):
    """Propose the next batch of experiments."""
    try:
        _, batch = campaign_module.campaign_suggest(session, n=n, pi=pi)
    except (CampaignError, ValueError) as err:
        _echo_error(err)
    if as_json:
        click.echo(json.dumps(campaign_module._pending_to_dict(batch), indent=2))
        return
    click.echo(f"proposed batch of {len(batch)}:")
    for i in range(len(batch)):
        coords = ", ".join(f"{v:.6g}" for v in batch.candidates[i])
        click.echo(f"  [{i}] id={int(batch.candidate_ids[i])} ({coords}) "
                   f"FP={batch.selection_fips[i]:.4f} "
                   f"branch={batch.selection_branches[i]}")
    if batch.exhausted:
        click.echo("note: candidate set was exhausted before reaching the "
                   "requested batch size")


def _read_measurement_csv(path):
    """Numeric CSV of constraint measurements; optional header; an optional
    final 'v' column carries status values."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise click.ClickException(f"{path} is empty")
    has_status = False
    start = 0
    try:
        [float(v) for v in rows[0]]
    except ValueError:
        header = [c.strip().lower() for c in rows[0]]
        has_status = header[-1] == "v"
        start = 1
    data = np.array([[float(v) for v in row] for row in rows[start:]], dtype=float)
    if has_status:
        return data[:, :-1], data[:, -1]
    return data, None


@campaign.command("record")
@click.option("--session", type=click.Path(exists=True), required=True)
@click.option("--measurements", type=str, default=None,
              help="Inline rows: values comma-separated, rows "
                   "semicolon-separated, one row per pending candidate.")
@click.option("--csv", "csv_path", type=click.Path(exists=True), default=None,
              help="CSV file with one measurement row per pending candidate "
                   "(optional trailing 'v' column with status values).")
@click.option("--status", type=str, default=None,
              help="Inline comma-separated measured status values.")
def campaign_record_cmd(session, measurements, csv_path, status):
    """Record measured results for the pending batch."""
    if (measurements is None) == (csv_path is None):
        raise click.ClickException("give exactly one of --measurements or --csv")
    status_values = None
    if csv_path is not None:
        data, status_values = _read_measurement_csv(csv_path)
    else:
        data = [_parse_floats(row, "--measurements")
                for row in measurements.split(";") if row.strip()]
    if status is not None:
        status_values = _parse_floats(status, "--status")
    try:
        _, report = campaign_module.campaign_record(session, data,
                                                    status_values=status_values)
    except (CampaignError, ValueError) as err:
        _echo_error(err)
    click.echo(f"recorded {report['recorded']} results "
               f"({report['feasible_in_batch']} feasible)")
    if report["incumbent"] is not None:
        click.echo(f"incumbent cost: {report['incumbent']['cost']!r}")
    else:
        click.echo("incumbent: none (no feasible point yet)")
    if report["terminate_recommended"]:
        click.echo("recommendation: stop (at least half of this batch was "
                   "selected with near-zero feasibility probability)")


@campaign.command("abandon")
@click.option("--session", type=click.Path(exists=True), required=True)
@click.option("--reason", type=str, default="")
def campaign_abandon_cmd(session, reason):
    """Discard the pending batch without recording results."""
    try:
        campaign_module.campaign_abandon(session, reason=reason)
    except (CampaignError, ValueError) as err:
        _echo_error(err)
    click.echo("pending batch abandoned")


@campaign.command("status")
@click.option("--session", type=click.Path(exists=True), required=True)
@click.option("--as-json", is_flag=True, default=False)
def campaign_status_cmd(session, as_json):
    """Summarize the session without modifying it."""
    try:
        summary = campaign_module.campaign_status(session)
    except (CampaignError, ValueError) as err:
        _echo_error(err)
    if as_json:
        click.echo(json.dumps(summary, indent=2))
        return
    click.echo(f"campaign: {summary['name']}")
    click.echo(f"experiments: {summary['n_experiments']} "
               f"({summary['init_count']} initialization, "
               f"{summary['recorded_points']} recorded over "
               f"{summary['recorded_batches']} batches)")
    click.echo(f"feasible: {summary['feasible_count']}")
    if summary["incumbent"] is not None:
        click.echo(f"incumbent cost: {summary['incumbent']['cost']!r}")
    else:
        click.echo("incumbent: none")
    click.echo(f"confidence threshold: {summary['current_pi']:g}")
    if summary["offset_delta"] is not None:
        click.echo(f"session offset: {summary['offset_delta']!r}")
    if summary["pending"] is not None:
        click.echo(f"pending batch: {summary['pending']['count']} candidates")
    if summary["last_batch_fips"] is not None:
        fips = ", ".join(f"{v:.4f}" for v in summary["last_batch_fips"])
        click.echo(f"last batch FIPs: {fips}")
    click.echo(f"recommendation: {summary['recommendation']}")


@campaign.command("demo-config")
@click.option("--kind", type=click.Choice(["aps", "fdm"], case_sensitive=False),
              required=True)
@click.option("--inits", type=int, default=0, show_default=True,
              help="Embed this many synthetic initialization experiments.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def campaign_demo_config_cmd(kind, inits, seed, out):
    """Write a ready-to-init config for a synthetic process study."""
    payload = campaign_module.demo_config(kind.lower(), init_points=inits, seed=seed)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
