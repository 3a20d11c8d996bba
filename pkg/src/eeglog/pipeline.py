"""Glue between storage, ingestion, training, and detection.

The CLI and the HTTP service both delegate here, so endpoint responses
stay equal to direct module calls by construction.
"""

from __future__ import annotations

import shutil
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import classifier, dsp, ingest
from .datamodel import (
    BAND_NAMES,
    EmotionQuadrant,
    SessionLog,
    TrainedModel,
    get_profile,
)
from .errors import BadSample, NotFound, SchemaError
from .ingest import LabeledEpoch
from .store import Store


def ingest_session(store: Store, session: SessionLog,
                   recording_path: str | Path) -> str:
    """Validate a session + recording pair and commit both to the store."""
    profile = get_profile(session.device_id)
    recording = ingest.parse_recording(recording_path, profile)
    ingest.segment_trials(recording, session)  # raises on bad trial windows
    ref = f"recordings/{session.session_id}.csv"
    dest = store.root / ref
    dest.parent.mkdir(parents=True, exist_ok=True)
    if Path(recording_path).resolve() != dest.resolve():
        shutil.copyfile(recording_path, dest)
    committed = SessionLog(
        session_id=session.session_id,
        user_id=session.user_id,
        device_id=session.device_id,
        trials=session.trials,
        recording_ref=ref,
    )
    return store.put_session(committed)


def device_epochs(store: Store, device_id: str) -> list[LabeledEpoch]:
    """All labeled listening epochs recorded with one device, any user."""
    profile = get_profile(device_id)
    epochs: list[LabeledEpoch] = []
    for user in store.list_users():
        for session in store.list_sessions(user, device_id=device_id):
            recording = ingest.parse_recording(
                store.resolve_recording(session), profile)
            epochs.extend(ingest.session_epochs(recording, session, profile))
    return epochs


def metrics_report(valence_model: TrainedModel,
                   arousal_model: TrainedModel) -> dict:
    """Accuracy table row in the published column naming."""
    v, a = valence_model.training_metrics, arousal_model.training_metrics
    if valence_model.scope == "general":
        return {"D_v_train": v["train_acc"], "v_test": v["test_acc"],
                "D_a_train": a["train_acc"], "a_test": a["test_acc"]}
    return {"v_train": v["train_acc"], "v_test": v["test_acc"],
            "a_train": a["train_acc"], "a_test": a["test_acc"]}


def train_and_store(store: Store, device_id: str, scope: str, seed: int = 0,
                    public_root: Optional[str | Path] = None,
                    include_self_training: bool = True) -> dict:
    """Train both targets for one (device, scope) pair and persist them."""
    profile = get_profile(device_id)
    epochs = device_epochs(store, device_id)
    if scope == "device":
        models = {t: classifier.train_device_model(epochs, t, profile, seed=seed)
                  for t in ("valence", "arousal")}
    elif scope == "general":
        if public_root is None:
            raise SchemaError("general scope needs a public dataset root")
        public = ingest.load_public_dataset(public_root)
        models = {t: classifier.train_general_model(
            epochs, public, t, profile, seed=seed,
            include_self_training=include_self_training)
            for t in ("valence", "arousal")}
    else:
        raise SchemaError(f"unknown scope {scope!r}")
    for model in models.values():
        store.put_model(model)
    return metrics_report(models["valence"], models["arousal"])


def evaluate(store: Store, device_id: str) -> dict:
    """Stored metrics for every trained scope of a device."""
    get_profile(device_id)
    report = {}
    for scope in ("device", "general"):
        if store.has_model("valence", scope, device_id):
            report[scope] = metrics_report(
                store.get_model("valence", scope, device_id),
                store.get_model("arousal", scope, device_id))
    if not report:
        raise NotFound(f"no trained models for {device_id!r}")
    return report


def mean_band_powers(samples: np.ndarray, fs_hz: int) -> dict[str, float]:
    powers = dsp.channel_band_powers(samples, fs_hz).mean(axis=0)
    return {band: float(p) for band, p in zip(BAND_NAMES, powers)}


def detect_epoch(store: Store, device_id: str, samples: np.ndarray) -> dict:
    """Run every available model pair of a device over one epoch."""
    profile = get_profile(device_id)
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != len(profile.channel_names):
        raise SchemaError(
            f"epoch must be [n_samples, {len(profile.channel_names)}] for "
            f"{device_id!r}")
    if not np.all(np.isfinite(samples)) or np.allclose(samples, 0.0):
        raise BadSample("degenerate (zero or non-finite) epoch")
    scopes = {}
    for scope in ("device", "general"):
        if not store.has_model("valence", scope, device_id):
            continue
        v, a, quad = classifier.predict_quadrant(
            store.get_model("valence", scope, device_id),
            store.get_model("arousal", scope, device_id),
            samples)
        scopes[scope] = {"valence_label": v, "arousal_label": a,
                         "quadrant": quad.value}
    if not scopes:
        raise NotFound(f"no trained models for {device_id!r}")
    primary = scopes.get("device", next(iter(scopes.values())))
    return {
        "valence_label": primary["valence_label"],
        "arousal_label": primary["arousal_label"],
        "quadrant": primary["quadrant"],
        "band_powers": mean_band_powers(samples, profile.sampling_rate_hz),
        "scopes": scopes,
    }


class StreamDetector:
    """4 s sliding window with a 1 s hop over pushed sample frames.

    A frame gap over 1 s resets the window; the caller gets one StreamGap
    message and detections resume once a full window has re-accumulated.
    """

    WINDOW_S = 4.0
    HOP_S = 1.0
    MAX_GAP_S = 1.0

    def __init__(self, store: Store, device_id: str):
        self.store = store
        self.profile = get_profile(device_id)
        self.models: dict[str, tuple[TrainedModel, TrainedModel]] = {}
        for scope in ("device", "general"):
            if store.has_model("valence", scope, device_id):
                self.models[scope] = (
                    store.get_model("valence", scope, device_id),
                    store.get_model("arousal", scope, device_id))
        if not self.models:
            raise NotFound(f"no trained models for {device_id!r}")
        self._reset(None)

    def _reset(self, start_ts: Optional[float]) -> None:
        self.buffer = np.empty((0, len(self.profile.channel_names)))
        self.buffer_start = start_ts
        self.next_window_end = (None if start_ts is None
                                else start_ts + self.WINDOW_S)

    def feed(self, ts: float, samples: Sequence[Sequence[float]]) -> list[dict]:
        """Push one timestamped frame; returns emitted messages in order."""
        frame = np.asarray(samples, dtype=float)
        if frame.ndim != 2 or frame.shape[1] != len(self.profile.channel_names):
            raise SchemaError(
                f"frame must carry {len(self.profile.channel_names)} channels")
        fs = self.profile.sampling_rate_hz
        messages: list[dict] = []
        if self.buffer_start is not None:
            expected = self.buffer_start + len(self.buffer) / fs
            if ts - expected > self.MAX_GAP_S:
                messages.append({"type": "stream_gap", "expected_ts": expected,
                                 "resumed_ts": ts})
                self._reset(ts)
        if self.buffer_start is None:
            self._reset(ts)
        self.buffer = np.vstack([self.buffer, frame])
        end_ts = self.buffer_start + len(self.buffer) / fs
        while end_ts >= self.next_window_end - 1e-9:
            w_end = self.next_window_end
            i1 = int(round((w_end - self.buffer_start) * fs))
            i0 = i1 - int(round(self.WINDOW_S * fs))
            window = self.buffer[i0:i1]
            messages.append(self._detect(window, w_end))
            self.next_window_end = w_end + self.HOP_S
        # keep only what future windows can still reference
        keep_from = self.next_window_end - self.WINDOW_S
        drop = int((keep_from - self.buffer_start) * fs)
        if drop > 0:
            self.buffer = self.buffer[drop:]
            self.buffer_start += drop / fs
        return messages

    def _detect(self, window: np.ndarray, window_end_ts: float) -> dict:
        scopes = {}
        for scope, (mv, ma) in self.models.items():
            v, a, quad = classifier.predict_quadrant(mv, ma, window)
            scopes[scope] = {"valence_label": v, "arousal_label": a,
                             "quadrant": quad.value}
        primary = scopes.get("device", next(iter(scopes.values())))
        return {
            "type": "detection",
            "window_end_ts": window_end_ts,
            "quadrant": primary["quadrant"],
            "valence_label": primary["valence_label"],
            "arousal_label": primary["arousal_label"],
            "band_powers": mean_band_powers(
                window, self.profile.sampling_rate_hz),
            "scopes": scopes,
        }
