"""Command-line entry point.

Verbs: `serve` runs the HTTP API (optionally serving the built web UI),
`simulate` runs a simulated-teacher cohort for one condition, `score-transcript`
re-scores a recorded transcript under either strategy, and `export-metrics`
folds simulate outputs into the frozen metrics CSV.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from .cohort import (
    SESSIONS_SUFFIX,
    load_metrics_dir,
    metrics_to_csv,
    run_cohort,
    score_transcript,
    write_score_rows,
    write_sessions_file,
)
from .errors import SuperdokuError
from .scoring import Condition, ScoreStrategy
from .teachers import DEFAULT_EXPLORATION_RATE, PolicyKind, TeacherPolicy

ENV_BIND = "SUPERDOKU_BIND"
ENV_PERSIST_DIR = "SUPERDOKU_PERSIST_DIR"
ENV_BACKEND = "SUPERDOKU_MATCHER_BACKEND"
ENV_FRONTEND_DIR = "SUPERDOKU_FRONTEND_DIR"

_STRATEGIES = {s.value: s for s in ScoreStrategy}


@click.group()
def main() -> None:
    """Superdoku teaching sandbox."""


@main.command()
@click.option("--host", default=None, help="Bind address (default 127.0.0.1 or SUPERDOKU_BIND).")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option(
    "--persist-dir",
    default=None,
    type=click.Path(file_okay=False, path_type=Path),
    help="Append session event logs under this directory.",
)
@click.option("--fsync/--no-fsync", default=False, help="fsync the event log on every append.")
@click.option(
    "--frontend-dir",
    default=None,
    type=click.Path(file_okay=False, path_type=Path),
    help="Serve these static files at / (built web UI).",
)
def serve(host: str | None, port: int, persist_dir: Path | None, fsync: bool, frontend_dir: Path | None) -> None:
    """Run the HTTP API."""
    import uvicorn

    from .api import create_app
    from .engine import SessionEngine
    from .matching import LlmMatcher, MatcherBackend

    host = host or os.environ.get(ENV_BIND, "127.0.0.1")
    persist_dir = persist_dir or (
        Path(os.environ[ENV_PERSIST_DIR]) if os.environ.get(ENV_PERSIST_DIR) else None
    )
    frontend_dir = frontend_dir or (
        Path(os.environ[ENV_FRONTEND_DIR]) if os.environ.get(ENV_FRONTEND_DIR) else None
    )
    llm = None
    if os.environ.get(ENV_BACKEND, "lexicon") == MatcherBackend.LLM.value:
        llm = LlmMatcher()
    engine = SessionEngine(persist_dir=persist_dir, fsync=fsync, llm=llm)
    uvicorn.run(create_app(engine, frontend_dir=frontend_dir), host=host, port=port)


@main.command()
@click.option("--policy", type=click.Choice([p.value for p in PolicyKind]), required=True)
@click.option("--condition", type=click.Choice([c.value for c in Condition]), required=True)
@click.option("--n", "n_sessions", type=int, required=True, help="Number of sessions.")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--strategy", type=click.Choice(sorted(_STRATEGIES)), default="example", show_default=True)
@click.option("--max-iterations", type=int, default=25, show_default=True)
@click.option("--demo-interval", type=int, default=5, show_default=True)
@click.option("--workers", type=int, default=None, help="Worker pool size (default min(8, n)).")
@click.option(
    "--exploration-rate",
    type=float,
    default=DEFAULT_EXPLORATION_RATE,
    show_default=True,
    help="Adaptive policy only.",
)
def simulate(
    policy: str,
    condition: str,
    n_sessions: int,
    seed: int,
    out_dir: Path,
    strategy: str,
    max_iterations: int,
    demo_interval: int,
    workers: int | None,
    exploration_rate: float,
) -> None:
    """Run a cohort of simulated teaching sessions for one condition."""
    out_dir.mkdir(parents=True, exist_ok=True)
    teacher_policy = TeacherPolicy(PolicyKind(policy), seed=seed, exploration_rate=exploration_rate)
    cond = Condition(condition)
    out_file = out_dir / f"{condition}-{policy}{SESSIONS_SUFFIX}"
    try:
        metrics = run_cohort(
            teacher_policy,
            cond,
            n_sessions,
            seed,
            strategy=_STRATEGIES[strategy],
            max_iterations=max_iterations,
            demo_interval=demo_interval,
            workers=workers,
            partial_file=out_file.with_suffix(".partial"),
        )
    except SuperdokuError as exc:
        raise click.ClickException(f"cohort aborted: {exc}") from exc
    group = metrics.groups[condition]
    write_sessions_file(out_file, teacher_policy, cond, seed, group.sessions)
    click.echo(
        f"{condition}/{policy}: {group.n_sessions} sessions, "
        f"mean final score {group.mean_final_score:.2f} "
        f"({group.pct_of_max * 100:.2f}% of maximum) -> {out_file}"
    )


@main.command("score-transcript")
@click.option("--in", "in_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--strategy", type=click.Choice(sorted(_STRATEGIES)), default="example", show_default=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False, path_type=Path), required=True)
def score_transcript_command(in_file: Path, strategy: str, out_file: Path) -> None:
    """Re-score a recorded transcript from a fresh robot state."""
    try:
        rows = score_transcript(in_file, _STRATEGIES[strategy])
    except SuperdokuError as exc:
        raise click.ClickException(str(exc)) from exc
    write_score_rows(out_file, rows)
    click.echo(f"scored {len(rows)} iterations -> {out_file}")


@main.command("export-metrics")
@click.option("--in", "in_dir", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--max-iterations", type=int, default=25, show_default=True)
def export_metrics(in_dir: Path, out_file: Path, max_iterations: int) -> None:
    """Fold simulate outputs in a directory into one metrics CSV."""
    try:
        metrics, headers = load_metrics_dir(in_dir, max_iterations=max_iterations)
    except (FileNotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    out_file.parent.mkdir(parents=True, exist_ok=True)
    out_file.write_text(metrics_to_csv(metrics, headers), encoding="utf-8")
    conditions = ", ".join(sorted(metrics.groups))
    click.echo(f"wrote metrics for [{conditions}] -> {out_file}")


if __name__ == "__main__":
    main(prog_name="superdoku")
    sys.exit(0)
