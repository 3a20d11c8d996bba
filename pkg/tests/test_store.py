import json
from dataclasses import replace
from unittest import mock

import pytest

from eeglog.datamodel import SessionLog, Song, TrainedModel, Trial
from eeglog.errors import NotFound, SchemaError
from eeglog.store import Store, _atomic_write_json


def trial(start, title="t"):
    return Trial(song=Song(title=title), baseline_start_ts=start,
                 play_ts=start + 2.0, stop_ts=start + 12.0,
                 valence=1.0, arousal=1.0)


def make_session(sid="s1", user="u1", start=1000.0, device="muse2"):
    return SessionLog(session_id=sid, user_id=user, device_id=device,
                      trials=(trial(start),),
                      recording_ref=f"recordings/{sid}.csv")


def make_model(target="valence", scope="device", device="muse2", bias=0.0):
    return TrainedModel(
        target=target, scope=scope, device_id=device,
        feature_mean=(0.0,), feature_std=(1.0,), selected_indices=(0,),
        support_vectors=((1.0,),), dual_coefficients=(0.5,), bias=bias,
        rbf_gamma=1.0, regularization_c=1.0,
        training_metrics={"train_acc": 1.0, "test_acc": 0.9})


@pytest.fixture()
def store(tmp_path):
    return Store(tmp_path / "data")


class TestSessions:
    def test_round_trip(self, store):
        s = make_session()
        assert store.put_session(s) == "s1"
        assert store.get_session("u1", "s1") == s

    def test_identical_reput_is_noop(self, store):
        s = make_session()
        store.put_session(s)
        store.put_session(s)
        assert len(store.list_sessions("u1")) == 1

    def test_conflicting_reput_rejected(self, store):
        store.put_session(make_session())
        changed = replace(make_session(), recording_ref="recordings/other.csv")
        with pytest.raises(SchemaError):
            store.put_session(changed)

    def test_missing_session(self, store):
        with pytest.raises(NotFound):
            store.get_session("u1", "nope")

    def test_listing_is_time_ordered(self, store):
        for sid, start in [("b", 3000.0), ("a", 1000.0), ("c", 2000.0)]:
            store.put_session(make_session(sid=sid, start=start))
        assert [s.session_id for s in store.list_sessions("u1")] == ["a", "c", "b"]

    def test_range_filter_half_open(self, store):
        for sid, start in [("a", 1000.0), ("b", 2000.0), ("c", 3000.0)]:
            store.put_session(make_session(sid=sid, start=start))
        got = store.list_sessions("u1", start_ts=1000.0, end_ts=3000.0)
        assert [s.session_id for s in got] == ["a", "b"]

    def test_device_filter(self, store):
        store.put_session(make_session(sid="m", device="muse2"))
        store.put_session(make_session(sid="e", start=2000.0, device="epoc+"))
        got = store.list_sessions("u1", device_id="epoc+")
        assert [s.session_id for s in got] == ["e"]

    def test_users_are_isolated(self, store):
        store.put_session(make_session(sid="s1", user="alice"))
        store.put_session(make_session(sid="s1", user="bob", start=2000.0))
        assert store.list_users() == ["alice", "bob"]
        assert store.get_session("alice", "s1").trials[0].baseline_start_ts == 1000.0
        assert len(store.list_sessions("alice")) == 1

    def test_unknown_user_lists_empty(self, store):
        assert store.list_sessions("ghost") == []
        assert store.list_users() == []


class TestRecordings:
    def test_resolve_relative_ref(self, store):
        s = make_session()
        rec = store.root / "recordings" / "s1.csv"
        rec.parent.mkdir(parents=True)
        rec.write_text("timestamp,TP9,AF7,AF8,TP10\n")
        assert store.resolve_recording(s) == rec

    def test_missing_recording(self, store):
        with pytest.raises(NotFound):
            store.resolve_recording(make_session())


class TestModels:
    def test_round_trip(self, store):
        m = make_model()
        store.put_model(m)
        assert store.get_model("valence", "device", "muse2") == m
        assert store.has_model("valence", "device", "muse2")

    def test_last_write_wins(self, store):
        store.put_model(make_model(bias=0.0))
        store.put_model(make_model(bias=2.5))
        assert store.get_model("valence", "device", "muse2").bias == 2.5

    def test_keys_are_independent(self, store):
        store.put_model(make_model(target="valence"))
        store.put_model(make_model(target="arousal", bias=1.0))
        store.put_model(make_model(scope="general", bias=2.0))
        assert store.get_model("valence", "device", "muse2").bias == 0.0
        assert store.get_model("arousal", "device", "muse2").bias == 1.0
        assert store.get_model("valence", "general", "muse2").bias == 2.0

    def test_missing_model(self, store):
        assert not store.has_model("valence", "device", "muse2")
        with pytest.raises(NotFound):
            store.get_model("valence", "device", "muse2")


class TestCrashSafety:
    def test_failed_write_leaves_no_partial_file(self, tmp_path):
        target = tmp_path / "doc.json"
        _atomic_write_json(target, {"v": 1})
        with mock.patch("os.replace", side_effect=OSError("disk full")):
            with pytest.raises(OSError):
                _atomic_write_json(target, {"v": 2})
        # the original committed document is untouched and no temp remains
        assert json.loads(target.read_text()) == {"v": 1}
        assert list(tmp_path.glob("*.tmp")) == []

    def test_interrupted_serialization_keeps_old_content(self, store):
        store.put_session(make_session())
        bad = make_session(sid="s2", start=2000.0)
        with mock.patch("eeglog.store._atomic_write_json",
                        side_effect=OSError("boom")):
            with pytest.raises(OSError):
                store.put_session(bad)
        assert [s.session_id for s in store.list_sessions("u1")] == ["s1"]
