"""Operator command-line interface.

Config precedence: flags > env (``EEGLOG_DATA``, ``EEGLOG_PORT``) >
config file (``eeglog.json`` in the working directory) > defaults.
Domain errors exit nonzero with a stable machine-parsable code; ``--json``
switches stdout to the canonical document schema (see ``docs/cli.md``).
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import analytics, pipeline, recommend as recommend_mod, synthgen
from .datamodel import EmotionQuadrant, get_profile
from .errors import EEGLogError
from .ingest import load_session
from .store import Store

DEFAULT_DATA = "./eeglog-data"
DEFAULT_PORT = 8410
CONFIG_FILE = "eeglog.json"


def _config() -> dict:
    path = Path(os.environ.get("EEGLOG_CONFIG", CONFIG_FILE))
    if path.exists():
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    return {}


def resolve_data_dir(flag: str | None) -> Path:
    value = flag or os.environ.get("EEGLOG_DATA") or _config().get("data") or DEFAULT_DATA
    return Path(value)


def resolve_port(flag: int | None) -> int:
    return int(flag or os.environ.get("EEGLOG_PORT")
               or _config().get("port") or DEFAULT_PORT)


def handle_domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except EEGLogError as exc:
            click.echo(f"error: {exc.code}: {exc.message}", err=True)
            sys.exit(exc.exit_code)
    return wrapper


def emit(payload: dict, as_json: bool, human: str) -> None:
    click.echo(json.dumps(payload, indent=1) if as_json else human)


def _metrics_table(report: dict) -> str:
    lines = []
    for scope, row in report.items():
        cols = "  ".join(f"{k}={v:.4f}" for k, v in row.items())
        lines.append(f"{scope:8s} {cols}")
    return "\n".join(lines)


@click.group()
@click.option("--data", "data_dir", default=None, help="Data directory.")
@click.option("--json", "as_json", is_flag=True, help="Canonical JSON output.")
@click.pass_context
def main(ctx, data_dir, as_json):
    """EEG music-lifelogging engine."""
    ctx.obj = {"data": resolve_data_dir(data_dir), "json": as_json}


@main.command()
@click.argument("recording", type=click.Path(exists=True))
@click.argument("session", type=click.Path(exists=True))
@click.option("--device", required=True)
@click.pass_obj
@handle_domain_errors
def ingest(obj, recording, session, device):
    """Validate and commit one session log + recording CSV."""
    store = Store(obj["data"])
    log = load_session(session)
    if log.device_id != device:
        from .errors import ProfileMismatch

        raise ProfileMismatch(
            f"session is for device {log.device_id!r}, not {device!r}")
    session_id = pipeline.ingest_session(store, log, recording)
    emit({"session_id": session_id}, obj["json"], f"ingested {session_id}")


@main.command()
@click.option("--device", required=True)
@click.option("--scope", type=click.Choice(["device", "general"]), default="device")
@click.option("--public-root", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--public-only", is_flag=True,
              help="Train the general model on public data only.")
@click.pass_obj
@handle_domain_errors
def train(obj, device, scope, public_root, seed, public_only):
    """Train the valence/arousal model pair for one device and scope."""
    store = Store(obj["data"])
    report = pipeline.train_and_store(
        store, device, scope, seed=seed, public_root=public_root,
        include_self_training=not public_only)
    emit(report, obj["json"], _metrics_table({scope: report}))


@main.command()
@click.option("--device", required=True)
@click.pass_obj
@handle_domain_errors
def evaluate(obj, device):
    """Print stored accuracy metrics for both scopes of a device."""
    report = pipeline.evaluate(Store(obj["data"]), device)
    emit(report, obj["json"], _metrics_table(report))


@main.command()
@click.option("--user", required=True)
@click.option("--period", required=True, help="ISO week, e.g. 2025-W02.")
@click.pass_obj
@handle_domain_errors
def summary(obj, user, period):
    """Weekly activity tile: EEG minutes, reports, distinct songs."""
    sessions = Store(obj["data"]).list_sessions(user)
    report = analytics.weekly_activity(sessions, period)
    emit(report, obj["json"],
         f"week {period}: {report['eeg_minutes']:.1f} EEG minutes, "
         f"{report['n_reports']} reports, {report['n_songs']} songs")


@main.command()
@click.option("--user", required=True)
@click.option("--period", required=True, help="Month, e.g. 2025-01.")
@click.pass_obj
@handle_domain_errors
def moments(obj, user, period):
    """The month's four extreme reports with their songs."""
    sessions = Store(obj["data"]).list_sessions(user)
    report = analytics.memorial_moments(sessions, period)
    human = "\n".join(
        f"{name:12s} {m['day']}  {m['value']:+.1f}  {m['song']}"
        for name, m in report.items())
    emit(report, obj["json"], human)


@main.command()
@click.option("--user", required=True)
@click.option("--period", required=True)
@click.option("--span", type=click.Choice(["day", "week", "month"]), default="week")
@click.option("--dimension", type=click.Choice(["valence", "arousal"]),
              default="valence")
@click.pass_obj
@handle_domain_errors
def activity(obj, user, period, span, dimension):
    """Reported score time series with songs."""
    sessions = Store(obj["data"]).list_sessions(user)
    report = analytics.activity_series(sessions, span, dimension, period)
    human = "\n".join(
        f"{p['timestamp']:.0f}  {p['score']:+.1f}  {p['song']}"
        for p in report["points"]) or "(no reports)"
    emit(report, obj["json"], human)


@main.command()
@click.option("--user", required=True)
@click.option("--quadrant", required=True,
              type=click.Choice([q.value for q in EmotionQuadrant]))
@click.option("--limit", type=int, default=10)
@click.pass_obj
@handle_domain_errors
def recommend(obj, user, quadrant, limit):
    """Playlist from the user's history matching a desired quadrant."""
    store = Store(obj["data"])
    sessions = store.list_sessions(user)
    if not sessions:
        from .errors import NotFound

        raise NotFound(f"unknown user {user!r}")
    playlist = recommend_mod.recommend_playlist(
        EmotionQuadrant(quadrant), sessions, limit)
    payload = {"quadrant": quadrant, "playlist": playlist}
    if not playlist:
        payload["notice"] = "NoMatch"
        human = "no matching songs"
    else:
        human = "\n".join(
            f"{s['title']}  (x{s['listen_count']})" for s in playlist)
    emit(payload, obj["json"], human)


@main.group()
def synth():
    """Synthetic fixture generation."""


@synth.command()
@click.option("--device", required=True)
@click.option("--per-quadrant", type=int, default=None)
@click.option("--total", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--out", required=True, type=click.Path())
@click.option("--public/--no-public", default=False,
              help="Also write the public-dataset-layout fixture tree.")
@click.pass_obj
@handle_domain_errors
def corpus(obj, device, per_quadrant, total, seed, out, public):
    """Generate a labeled synthetic corpus in the canonical file layout."""
    profile = get_profile(device)
    result = synthgen.generate_corpus(
        profile, n_per_quadrant=per_quadrant, total=total, seed=seed)
    written = synthgen.write_corpus(result, out)
    payload = {"device": device, "epochs": len(result.epochs),
               "sessions": len(written), "out": str(out)}
    if public:
        synthgen.generate_public_fixture(Path(out) / "public", seed=seed)
        payload["public_root"] = str(Path(out) / "public")
    emit(payload, obj["json"],
         f"wrote {len(result.epochs)} epochs in {len(written)} sessions to {out}"
         + (" (+ public fixture)" if public else ""))


@main.command()
@click.option("--port", type=int, default=None)
@click.option("--host", default="127.0.0.1")
@click.option("--public-root", type=click.Path(), default=None)
@click.pass_obj
@handle_domain_errors
def serve(obj, port, host, public_root):
    """Run the local HTTP/streaming service."""
    from . import service

    service.run(obj["data"], host=host, port=resolve_port(port),
                public_root=public_root)


if __name__ == "__main__":
    main()
