"""Headless entry points.

Exit codes: 0 ok, 1 replay verification mismatch, 2 input error.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .errors import FocusTrainerError, LogCorruptionError, ValidationError
from .eventlog import build_report, log_path, read_log
from .session import SessionConfig, replay_verify, run_session
from .stats import (
    chi_square,
    cronbach_alpha,
    likert_descriptives,
    load_contingency_csv,
    load_scale_csv,
    load_sus_csv,
    sus_band,
    sus_score,
)
from .traces import load_trace

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT_ERROR = 2


@click.group()
@click.option("--data-dir", type=click.Path(path_type=Path), default=Path("data"),
              show_default=True, help="Directory for logs and reports.")
@click.option("--seed-override", type=int, default=None,
              help="Replace the seed from the configuration document.")
@click.option("--quiet", is_flag=True, help="Suppress non-essential output.")
@click.pass_context
def main(ctx: click.Context, data_dir: Path, seed_override: int | None, quiet: bool):
    """Concentration-training session engine."""
    ctx.obj = {"data_dir": data_dir, "seed_override": seed_override, "quiet": quiet}


def _fail(message: str, code: int = EXIT_INPUT_ERROR) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config(path: Path, seed_override: int | None) -> SessionConfig:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read config {path}: {exc}")
    if seed_override is not None:
        doc["seed"] = seed_override
    return SessionConfig.from_dict(doc)


@main.command()
@click.argument("config_path", type=click.Path(exists=True, path_type=Path))
@click.argument("trace_path", type=click.Path(exists=True, path_type=Path))
@click.option("--out-dir", type=click.Path(path_type=Path), default=None,
              help="Output directory (defaults to --data-dir).")
@click.pass_context
def simulate(ctx: click.Context, config_path: Path, trace_path: Path, out_dir: Path | None):
    """Run a session from a scripted trace; write the log and report."""
    try:
        config = _load_config(config_path, ctx.obj["seed_override"])
        inputs = load_trace(trace_path)
    except FocusTrainerError as exc:
        _fail(str(exc))

    out = out_dir if out_dir is not None else ctx.obj["data_dir"]
    target = log_path(out, config.child_id, config.session_id, config.seed)
    target.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(target, "w", encoding="utf-8") as sink:
            records = run_session(config, inputs=inputs, sink=sink)
    except FocusTrainerError as exc:
        _fail(str(exc))

    report = build_report(records)
    if config.report_enabled:
        base = target.with_suffix("")
        base.with_suffix(".report.json").write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8")
        base.with_suffix(".report.txt").write_text(report.to_text(), encoding="utf-8")
    if not ctx.obj["quiet"]:
        click.echo(f"log written to {target}")
    ratio = "n/a" if report.attention_ratio is None else f"{report.attention_ratio:.4f}"
    click.echo(f"final points: {report.final_points}")
    click.echo(f"attention ratio: {ratio}")
    sys.exit(EXIT_OK)


@main.command()
@click.argument("log_file", type=click.Path(exists=True, path_type=Path))
@click.pass_context
def replay(ctx: click.Context, log_file: Path):
    """Re-run the engine on a log's recorded inputs and verify the outputs."""
    try:
        records = read_log(log_file)
        ok, divergent_seq = replay_verify(records)
    except (LogCorruptionError, ValidationError) as exc:
        _fail(str(exc))
    if not ok:
        click.echo(f"mismatch at seq {divergent_seq}", err=True)
        sys.exit(EXIT_MISMATCH)
    if not ctx.obj["quiet"]:
        click.echo("replay verified: outputs match")
    sys.exit(EXIT_OK)


@main.command()
@click.argument("kind", type=click.Choice(["sus", "alpha", "chisq", "likert"]))
@click.argument("csv_path", type=click.Path(exists=True, path_type=Path))
@click.option("--sidecar", type=click.Path(exists=True, path_type=Path), default=None,
              help="JSON sidecar with item polarity and scale range.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def score(ctx: click.Context, kind: str, csv_path: Path, sidecar: Path | None,
          as_json: bool):
    """Score an instrument CSV: usability scale, reliability, association."""
    try:
        result = _score(kind, csv_path, sidecar)
    except FocusTrainerError as exc:
        _fail(str(exc))
    if as_json:
        click.echo(json.dumps(result, sort_keys=True))
    else:
        for line in _humanize(kind, result):
            click.echo(line)
    sys.exit(EXIT_OK)


def _score(kind: str, csv_path: Path, sidecar: Path | None) -> dict:
    if kind == "sus":
        responses = load_sus_csv(csv_path)
        scores = [sus_score(r) for r in responses]
        rows = [{"score": s, "band": sus_band(s).value} for s in scores]
        mean = sum(scores) / len(scores)
        doc = {"kind": "sus", "respondents": rows, "mean": mean,
               "mean_band": sus_band(mean).value}
        if len(scores) > 1:
            import statistics
            doc["sd"] = statistics.stdev(scores)
        return doc
    if kind == "alpha":
        scale = load_scale_csv(csv_path, sidecar)
        return {"kind": "alpha", "scale": scale.name,
                "alpha": cronbach_alpha(scale), "n": len(scale.items)}
    if kind == "chisq":
        result = chi_square(load_contingency_csv(csv_path))
        return {"kind": "chisq", **result.to_dict()}
    scale = load_scale_csv(csv_path, sidecar)
    desc = likert_descriptives(scale)
    return {"kind": "likert", "scale": desc.name, "n": desc.n,
            "mean": desc.mean, "sd": desc.sd}


def _humanize(kind: str, doc: dict) -> list[str]:
    if kind == "sus":
        lines = [f"respondent {i + 1}: score {row['score']:.1f} ({row['band']})"
                 for i, row in enumerate(doc["respondents"])]
        summary = f"mean: {doc['mean']:.2f} ({doc['mean_band']})"
        if "sd" in doc:
            summary += f", sd {doc['sd']:.2f}"
        return lines + [summary]
    if kind == "alpha":
        return [f"Cronbach's alpha for {doc['scale']}: {doc['alpha']:.4f} "
                f"({doc['n']} respondents)"]
    if kind == "chisq":
        lines = [f"chi2({doc['df']}) = {doc['chi2']:.4f}, p = {doc['p_value']:.6g}, "
                 f"V = {doc['cramers_v']:.4f}, n = {doc['n']}"]
        if doc["low_expected_count"]:
            lines.append("warning: some expected cell counts are below 5")
        return lines
    sd = "undefined (single respondent)" if doc["sd"] is None else f"{doc['sd']:.4f}"
    return [f"{doc['scale']}: mean {doc['mean']:.4f}, sd {sd}, n = {doc['n']}"]


@main.command()
@click.option("--host", default=lambda: os.environ.get("FOCUSTRAINER_HOST", "127.0.0.1"),
              help="Bind address.")
@click.option("--port", type=int,
              default=lambda: int(os.environ.get("FOCUSTRAINER_PORT", "8392")),
              help="Bind port.")
@click.option("--tick-ms", type=int, default=250, show_default=True,
              help="Logical tick interval for live sessions.")
@click.option("--time-scale", type=float, default=1.0, show_default=True,
              help="Wall-time speedup factor (testing aid).")
@click.pass_context
def serve(ctx: click.Context, host: str, port: int, tick_ms: int, time_scale: float):
    """Serve the real-time session API for the companion UI."""
    import uvicorn

    from .service import create_app

    data_dir = Path(os.environ.get("FOCUSTRAINER_DATA_DIR", ctx.obj["data_dir"]))
    app = create_app(data_dir=data_dir, tick_ms=tick_ms, time_scale=time_scale)
    uvicorn.run(app, host=host, port=port, log_level="warning" if ctx.obj["quiet"] else "info")


if __name__ == "__main__":
    main()
