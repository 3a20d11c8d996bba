"""Summary analytics: weekly activity, score time series, memorial moments.

Stored timestamps stay UTC epoch seconds; day/week/month boundaries are
computed in the user's configured timezone.  Period strings: day
``YYYY-MM-DD``, ISO week ``YYYY-Wnn``, month ``YYYY-MM``.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from typing import Iterable, Sequence
from zoneinfo import ZoneInfo

from .datamodel import SessionLog, Trial
from .errors import NoData, SchemaError

DEFAULT_TZ = "UTC"


def _tz(tz_name: str) -> ZoneInfo:
    return ZoneInfo(tz_name)


def period_window(period: str, span: str, tz_name: str = DEFAULT_TZ) -> tuple[float, float]:
    """[start, end) epoch seconds for a day/week/month period string."""
    tz = _tz(tz_name)
    try:
        if span == "day":
            start = datetime.fromisoformat(period).replace(tzinfo=tz)
            end = start + timedelta(days=1)
        elif span == "week":
            start = datetime.strptime(period + "-1", "%G-W%V-%u").replace(tzinfo=tz)
            end = start + timedelta(days=7)
        elif span == "month":
            start = datetime.strptime(period, "%Y-%m").replace(tzinfo=tz)
            if start.month == 12:
                end = start.replace(year=start.year + 1, month=1)
            else:
                end = start.replace(month=start.month + 1)
        else:
            raise SchemaError(f"unknown span {span!r}")
    except ValueError as e:
        raise SchemaError(f"bad period {period!r} for span {span!r}: {e}") from None
    return start.timestamp(), end.timestamp()


def _local_date(ts: float, tz_name: str) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).astimezone(_tz(tz_name)).date().isoformat()


def _session_span(session: SessionLog) -> tuple[float, float]:
    return session.trials[0].baseline_start_ts, session.trials[-1].stop_ts


def _trials_in(sessions: Iterable[SessionLog], start: float, end: float) -> list[Trial]:
    out = []
    for s in sessions:
        out.extend(t for t in s.trials if start <= t.play_ts < end)
    out.sort(key=lambda t: t.play_ts)
    return out


def weekly_activity(sessions: Sequence[SessionLog], week: str,
                    tz_name: str = DEFAULT_TZ) -> dict:
    """Activity tile numbers for one ISO week."""
    start, end = period_window(week, "week", tz_name)
    minutes = 0.0
    for s in sessions:
        s0, s1 = _session_span(s)
        overlap = max(0.0, min(s1, end) - max(s0, start))
        minutes += overlap / 60.0
    trials = _trials_in(sessions, start, end)
    return {
        "eeg_minutes": round(minutes, 4),
        "n_reports": len(trials),
        "n_songs": len({t.song.title for t in trials}),
    }


def activity_series(sessions: Sequence[SessionLog], span: str, dimension: str,
                    period: str, tz_name: str = DEFAULT_TZ) -> dict:
    """Chronological reported scores with song refs, plus daily means."""
    if dimension not in ("valence", "arousal"):
        raise SchemaError(f"unknown dimension {dimension!r}")
    start, end = period_window(period, span, tz_name)
    trials = _trials_in(sessions, start, end)
    points = [{
        "timestamp": t.play_ts,
        "score": getattr(t, dimension),
        "song": t.song.title,
    } for t in trials]
    daily: dict[str, list[float]] = {}
    for t in trials:
        daily.setdefault(_local_date(t.play_ts, tz_name), []).append(getattr(t, dimension))
    daily_means = [{"day": day, "mean": sum(v) / len(v)}
                   for day, v in sorted(daily.items())]
    return {"span": span, "dimension": dimension, "period": period,
            "points": points, "daily_means": daily_means}


def memorial_moments(sessions: Sequence[SessionLog], month: str,
                     tz_name: str = DEFAULT_TZ) -> dict:
    """The month's four extreme reports: max/min valence and arousal.

    Ties across days go to the earliest day, within a day to the earliest
    trial; both follow from scanning trials in play_ts order with strict
    comparisons.
    """
    start, end = period_window(month, "month", tz_name)
    trials = _trials_in(sessions, start, end)
    if not trials:
        raise NoData(f"no reported trials in {month}")

    def extreme(dimension: str, sign: float) -> dict:
        best = max(trials, key=lambda t: (sign * getattr(t, dimension), -t.play_ts))
        return {
            "day": _local_date(best.play_ts, tz_name),
            "value": getattr(best, dimension),
            "song": best.song.title,
        }

    return {
        "max_valence": extreme("valence", 1.0),
        "min_valence": extreme("valence", -1.0),
        "max_arousal": extreme("arousal", 1.0),
        "min_arousal": extreme("arousal", -1.0),
    }
