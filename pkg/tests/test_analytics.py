from datetime import datetime, timezone

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eeglog import analytics
from eeglog.datamodel import SessionLog, Song, Trial
from eeglog.errors import NoData, SchemaError

JAN1 = datetime(2025, 1, 1, tzinfo=timezone.utc).timestamp()


def trial(start, duration=10.0, v=1.0, a=1.0, title="song"):
    return Trial(song=Song(title=title), baseline_start_ts=start,
                 play_ts=start + 2.0, stop_ts=start + 2.0 + duration,
                 valence=v, arousal=a)


def session(trials, sid="s", user="u"):
    return SessionLog(session_id=sid, user_id=user, device_id="muse2",
                      trials=tuple(trials), recording_ref=f"recordings/{sid}.csv")


def random_history(seed, n_sessions=6, trials_per=5):
    """Sessions spread over January 2025 with random scores and songs."""
    rng = np.random.default_rng(seed)
    sessions = []
    for si in range(n_sessions):
        t0 = JAN1 + rng.uniform(0, 28) * 86400.0
        trials = []
        cursor = t0
        for ti in range(trials_per):
            d = float(rng.uniform(5, 30))
            trials.append(trial(cursor, d,
                                v=round(float(rng.uniform(-5, 5)), 1),
                                a=round(float(rng.uniform(-5, 5)), 1),
                                title=f"song{rng.integers(0, 8)}"))
            cursor += d + 2.0
        sessions.append(session(trials, sid=f"s{si}"))
    return sessions


class TestPeriodWindow:
    def test_day(self):
        start, end = analytics.period_window("2025-03-10", "day")
        assert end - start == 86400
        assert datetime.fromtimestamp(start, tz=timezone.utc).isoformat() \
            == "2025-03-10T00:00:00+00:00"

    def test_week_starts_monday(self):
        start, end = analytics.period_window("2025-W02", "week")
        d = datetime.fromtimestamp(start, tz=timezone.utc)
        assert d.isoweekday() == 1
        assert d.date().isoformat() == "2025-01-06"
        assert end - start == 7 * 86400

    def test_month_and_december_rollover(self):
        start, end = analytics.period_window("2025-12", "month")
        assert datetime.fromtimestamp(end, tz=timezone.utc).year == 2026

    def test_timezone_shifts_boundaries(self):
        utc_start, _ = analytics.period_window("2025-06-01", "day", "UTC")
        tokyo_start, _ = analytics.period_window("2025-06-01", "day", "Asia/Tokyo")
        assert utc_start - tokyo_start == 9 * 3600

    @pytest.mark.parametrize("period,span", [
        ("2025-13", "month"), ("not-a-date", "day"), ("2025-W60", "week"),
        ("2025-01-01", "year")])
    def test_bad_inputs(self, period, span):
        with pytest.raises(SchemaError):
            analytics.period_window(period, span)


class TestWeeklyActivity:
    def test_hand_computed_numbers(self):
        # week 2025-W01 runs 2024-12-30 .. 2025-01-05
        mon = datetime(2024, 12, 30, 10, 0, tzinfo=timezone.utc).timestamp()
        s1 = session([trial(mon, 58.0, title="a"),
                      trial(mon + 60.0, 118.0, title="b")], sid="s1")
        out = analytics.weekly_activity([s1], "2025-W01")
        # span: first baseline start to last stop = 180 s
        assert out == {"eeg_minutes": 3.0, "n_reports": 2, "n_songs": 2}

    def test_session_straddling_week_boundary(self):
        # session starts 30 s before Monday midnight, ends 90 s after
        week_start, _ = analytics.period_window("2025-W02", "week")
        s1 = session([trial(week_start - 30.0, 118.0, title="a")], sid="s1")
        out = analytics.weekly_activity([s1], "2025-W02")
        assert out["eeg_minutes"] == pytest.approx(1.5)
        # play_ts (28 s before midnight) is outside the week, so no report
        assert out["n_reports"] == 0

    def test_duplicate_songs_counted_once(self):
        mon, _ = analytics.period_window("2025-W03", "week")
        s1 = session([trial(mon, title="x"), trial(mon + 40, title="x"),
                      trial(mon + 80, title="y")], sid="s1")
        out = analytics.weekly_activity([s1], "2025-W03")
        assert out["n_reports"] == 3
        assert out["n_songs"] == 2

    def test_empty_week(self):
        out = analytics.weekly_activity([], "2025-W05")
        assert out == {"eeg_minutes": 0.0, "n_reports": 0, "n_songs": 0}

    @pytest.mark.parametrize("seed", range(8))
    def test_report_count_oracle(self, seed):
        sessions = random_history(seed)
        start, end = analytics.period_window("2025-W03", "week")
        expected = sum(start <= t.play_ts < end
                       for s in sessions for t in s.trials)
        assert analytics.weekly_activity(sessions, "2025-W03")["n_reports"] \
            == expected


class TestActivitySeries:
    def test_points_sorted_and_in_window(self):
        sessions = random_history(3)
        out = analytics.activity_series(sessions, "month", "valence", "2025-01")
        start, end = analytics.period_window("2025-01", "month")
        ts = [p["timestamp"] for p in out["points"]]
        assert ts == sorted(ts)
        assert all(start <= t < end for t in ts)

    def test_scores_match_reports(self):
        mon, _ = analytics.period_window("2025-02", "month")
        s1 = session([trial(mon + 100, v=2.5, a=-1.0, title="a")], sid="s1")
        out = analytics.activity_series([s1], "month", "arousal", "2025-02")
        assert out["points"] == [
            {"timestamp": mon + 102.0, "score": -1.0, "song": "a"}]

    def test_daily_means_oracle(self):
        sessions = random_history(5)
        out = analytics.activity_series(sessions, "month", "valence", "2025-01")
        start, end = analytics.period_window("2025-01", "month")
        by_day: dict[str, list[float]] = {}
        for s in sessions:
            for t in s.trials:
                if start <= t.play_ts < end:
                    day = datetime.fromtimestamp(
                        t.play_ts, tz=timezone.utc).date().isoformat()
                    by_day.setdefault(day, []).append(t.valence)
        expected = [{"day": d, "mean": sum(v) / len(v)}
                    for d, v in sorted(by_day.items())]
        assert out["daily_means"] == expected

    def test_unknown_dimension(self):
        with pytest.raises(SchemaError):
            analytics.activity_series([], "month", "mood", "2025-01")


class TestMemorialMoments:
    def test_extremes_with_known_values(self):
        mon, _ = analytics.period_window("2025-03", "month")
        s1 = session([
            trial(mon + 0, v=4.0, a=1.0, title="high-v"),
            trial(mon + 100, v=-3.5, a=2.0, title="low-v"),
            trial(mon + 200, v=1.0, a=5.0, title="high-a"),
            trial(mon + 300, v=0.0, a=-4.5, title="low-a"),
        ], sid="s1")
        out = analytics.memorial_moments([s1], "2025-03")
        assert out["max_valence"]["song"] == "high-v"
        assert out["max_valence"]["value"] == 4.0
        assert out["min_valence"]["song"] == "low-v"
        assert out["max_arousal"]["song"] == "high-a"
        assert out["min_arousal"]["song"] == "low-a"
        assert out["max_valence"]["day"] == "2025-03-01"

    def test_tie_goes_to_earliest(self):
        mon, _ = analytics.period_window("2025-04", "month")
        s1 = session([trial(mon + 0, v=3.0, title="first"),
                      trial(mon + 86400, v=3.0, title="second")], sid="s1")
        out = analytics.memorial_moments([s1], "2025-04")
        assert out["max_valence"]["song"] == "first"

    def test_empty_month_raises(self):
        with pytest.raises(NoData):
            analytics.memorial_moments([], "2025-05")

    @pytest.mark.parametrize("seed", range(8))
    def test_extreme_value_oracle(self, seed):
        sessions = random_history(seed + 100)
        out = analytics.memorial_moments(sessions, "2025-01")
        start, end = analytics.period_window("2025-01", "month")
        in_month = [t for s in sessions for t in s.trials
                    if start <= t.play_ts < end]
        assert out["max_valence"]["value"] == max(t.valence for t in in_month)
        assert out["min_valence"]["value"] == min(t.valence for t in in_month)
        assert out["max_arousal"]["value"] == max(t.arousal for t in in_month)
        assert out["min_arousal"]["value"] == min(t.arousal for t in in_month)
        # the tie rule resolves to the earliest trial achieving the extreme
        best = min(t.play_ts for t in in_month
                   if t.valence == out["max_valence"]["value"])
        day = datetime.fromtimestamp(best, tz=timezone.utc).date().isoformat()
        assert out["max_valence"]["day"] == day


@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 27))
@settings(max_examples=60, deadline=None)
def test_single_trial_is_its_own_extreme(v, a, day_offset):
    start = JAN1 + day_offset * 86400.0
    s = session([trial(start, v=v, a=a, title="only")])
    out = analytics.memorial_moments([s], "2025-01")
    for key in ("max_valence", "min_valence"):
        assert out[key]["value"] == v
        assert out[key]["song"] == "only"
    for key in ("max_arousal", "min_arousal"):
        assert out[key]["value"] == a
