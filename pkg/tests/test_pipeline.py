import numpy as np
import pytest

from eeglog import pipeline, synthgen
from eeglog.datamodel import EmotionQuadrant
from eeglog.errors import BadSample, NotFound, SchemaError
from eeglog.pipeline import StreamDetector
from eeglog.store import Store


class TestIngestSession:
    def test_commit_rewrites_recording_ref(self, tmp_path, muse_profile):
        corpus = synthgen.generate_corpus(muse_profile, total=4, seed=0)
        synthgen.write_corpus(corpus, tmp_path / "src")
        store = Store(tmp_path / "data")
        session, _ = corpus.sessions[0]
        sid = pipeline.ingest_session(
            store, session, tmp_path / "src" / session.recording_ref)
        stored = store.get_session(session.user_id, sid)
        assert stored.recording_ref == f"recordings/{sid}.csv"
        assert store.resolve_recording(stored).exists()

    def test_bad_trial_window_rejected_before_commit(self, tmp_path,
                                                     muse_profile):
        from dataclasses import replace

        corpus = synthgen.generate_corpus(muse_profile, total=4, seed=0)
        synthgen.write_corpus(corpus, tmp_path / "src")
        store = Store(tmp_path / "data")
        session, _ = corpus.sessions[0]
        late = replace(session.trials[-1],
                       baseline_start_ts=session.trials[-1].baseline_start_ts + 3600,
                       play_ts=session.trials[-1].play_ts + 3600,
                       stop_ts=session.trials[-1].stop_ts + 3600)
        broken = replace(session, trials=session.trials[:-1] + (late,))
        with pytest.raises(Exception):
            pipeline.ingest_session(
                store, broken, tmp_path / "src" / session.recording_ref)
        assert store.list_sessions(session.user_id) == []


class TestDeviceEpochs:
    def test_counts_match_corpus(self, populated_store, muse_corpus):
        epochs = pipeline.device_epochs(populated_store, "muse2")
        assert len(epochs) == len(muse_corpus.epochs)
        labels = [(e.valence_label, e.arousal_label) for e in epochs]
        expected = [(e.valence_label, e.arousal_label)
                    for e in muse_corpus.epochs]
        assert labels == expected

    def test_empty_for_other_device(self, populated_store):
        assert pipeline.device_epochs(populated_store, "epoc+") == []


class TestEvaluate:
    def test_reports_trained_scopes(self, populated_store):
        report = pipeline.evaluate(populated_store, "muse2")
        assert set(report) == {"device"}
        assert set(report["device"]) == {"v_train", "v_test",
                                         "a_train", "a_test"}

    def test_untrained_device(self, populated_store):
        with pytest.raises(NotFound):
            pipeline.evaluate(populated_store, "epoc+")


class TestDetectEpoch:
    def test_recovers_planted_quadrant(self, populated_store, muse_profile):
        for i, quadrant in enumerate(EmotionQuadrant):
            epoch = synthgen.generate_epoch(muse_profile, quadrant,
                                            seed=5000 + i)
            out = pipeline.detect_epoch(populated_store, "muse2", epoch.samples)
            assert out["quadrant"] == quadrant.value
            assert set(out["band_powers"]) == {"theta", "alpha", "beta", "gamma"}
            assert set(out["scopes"]) == {"device"}

    def test_band_powers_positive(self, populated_store, muse_profile):
        epoch = synthgen.generate_epoch(muse_profile, EmotionQuadrant.PV_PA,
                                        seed=1)
        out = pipeline.detect_epoch(populated_store, "muse2", epoch.samples)
        assert all(v > 0 for v in out["band_powers"].values())

    def test_zero_epoch_rejected(self, populated_store):
        with pytest.raises(BadSample):
            pipeline.detect_epoch(populated_store, "muse2",
                                  np.zeros((1024, 4)))

    def test_nan_epoch_rejected(self, populated_store):
        bad = np.ones((1024, 4))
        bad[3, 2] = np.nan
        with pytest.raises(BadSample):
            pipeline.detect_epoch(populated_store, "muse2", bad)

    def test_wrong_shape(self, populated_store):
        with pytest.raises(SchemaError):
            pipeline.detect_epoch(populated_store, "muse2",
                                  np.ones((1024, 3)))

    def test_untrained_device(self, populated_store):
        with pytest.raises(NotFound):
            pipeline.detect_epoch(populated_store, "epoc+",
                                  np.ones((1024, 14)))


class TestStreamDetector:
    FS = 256

    def feed_stream(self, detector, samples, t0=0.0, frame_s=0.25,
                    fs=256):
        """Feed a [n, ch] block as consecutive frames; collect messages."""
        out = []
        step = int(frame_s * fs)
        for i in range(0, len(samples), step):
            out.extend(detector.feed(t0 + i / fs, samples[i:i + step]))
        return out

    def test_ten_second_stream_yields_hopping_detections(
            self, populated_store, muse_profile):
        epoch = synthgen.generate_epoch(muse_profile, EmotionQuadrant.PV_PA,
                                        duration_s=10, seed=42)
        detector = StreamDetector(populated_store, "muse2")
        messages = self.feed_stream(detector, epoch.samples)
        detections = [m for m in messages if m["type"] == "detection"]
        # windows end at 4,5,...,10 s
        assert len(detections) == 7
        ends = [d["window_end_ts"] for d in detections]
        assert ends == pytest.approx([4, 5, 6, 7, 8, 9, 10])
        majority = sum(d["quadrant"] == "PV_PA" for d in detections)
        assert majority > len(detections) / 2

    def test_short_stream_yields_nothing(self, populated_store, muse_profile):
        epoch = synthgen.generate_epoch(muse_profile, EmotionQuadrant.NV_NA,
                                        duration_s=10, seed=43)
        detector = StreamDetector(populated_store, "muse2")
        messages = self.feed_stream(detector, epoch.samples[:3 * self.FS])
        assert messages == []

    def test_gap_resets_and_resumes(self, populated_store, muse_profile):
        epoch = synthgen.generate_epoch(muse_profile, EmotionQuadrant.PV_PA,
                                        duration_s=10, seed=44)
        detector = StreamDetector(populated_store, "muse2")
        first = self.feed_stream(detector, epoch.samples[:5 * self.FS], t0=0.0)
        assert sum(m["type"] == "detection" for m in first) == 2
        # 2 s of silence, then 5 more seconds of signal
        resumed = self.feed_stream(detector, epoch.samples[5 * self.FS:],
                                   t0=7.0)
        assert resumed[0]["type"] == "stream_gap"
        assert resumed[0]["expected_ts"] == pytest.approx(5.0)
        assert resumed[0]["resumed_ts"] == pytest.approx(7.0)
        detections = [m for m in resumed if m["type"] == "detection"]
        # fresh 5 s buffer after the reset -> windows at 11 s and 12 s
        assert [d["window_end_ts"] for d in detections] == pytest.approx([11, 12])

    def test_small_jitter_is_not_a_gap(self, populated_store, muse_profile):
        epoch = synthgen.generate_epoch(muse_profile, EmotionQuadrant.PV_PA,
                                        duration_s=10, seed=45)
        detector = StreamDetector(populated_store, "muse2")
        mid = 5 * self.FS
        first = self.feed_stream(detector, epoch.samples[:mid], t0=0.0)
        # resume 0.5 s late: under the 1 s gap threshold, no reset
        late = self.feed_stream(detector, epoch.samples[mid:], t0=5.5)
        assert not any(m["type"] == "stream_gap" for m in first + late)

    def test_bad_frame_shape(self, populated_store):
        detector = StreamDetector(populated_store, "muse2")
        with pytest.raises(SchemaError):
            detector.feed(0.0, np.ones((64, 3)))

    def test_untrained_device(self, populated_store):
        with pytest.raises(NotFound):
            StreamDetector(populated_store, "epoc+")
