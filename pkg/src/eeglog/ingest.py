"""Recording/session parsing, epoch segmentation, and public-data loading.

File formats are documented in ``docs/formats.md``:
  - recording CSV: header ``timestamp,<ch1>,...,<chN>``, microvolts,
    epoch-second timestamps with >= 3 decimals;
  - public dataset: ``root/pXX/trialYY.csv`` + ``root/pXX/labels.csv``
    (32 participants x 40 trials, 32 channels at 128 Hz, 1-9 ratings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd

from .datamodel import DeviceProfile, EEGRecording, SessionLog, Trial
from .errors import (
    BadSample,
    ChannelOrderMismatch,
    DatasetShapeMismatch,
    EpochTooShort,
    MissingTargetChannel,
    NonMonotoneTimestamps,
    TrialOutOfRange,
)

MIN_EPOCH_S = 2.0

PUBLIC_RATE_HZ = 128
PUBLIC_PARTICIPANTS = 32
PUBLIC_TRIALS = 40
PUBLIC_RATING_THRESHOLD = 5.0  # rating > 5 on the 1-9 scale is positive

# Standard 32-channel montage of the public dataset.
PUBLIC_CHANNELS = (
    "Fp1", "AF3", "F3", "F7", "FC5", "FC1", "C3", "T7", "CP5", "CP1",
    "P3", "P7", "PO3", "O1", "Oz", "Pz", "Fp2", "AF4", "Fz", "F4",
    "F8", "FC6", "FC2", "Cz", "C4", "T8", "CP6", "CP2", "P4", "P8",
    "PO4", "O2",
)


@dataclass(frozen=True)
class LabeledEpoch:
    """One labeled EEG segment ready for feature extraction."""

    samples: np.ndarray  # [n_samples, n_channels]
    channels: tuple[str, ...]
    sampling_rate_hz: int
    device_id: str
    valence_label: int
    arousal_label: int
    origin: str  # "self_collected" | "public"

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.shape[0] < MIN_EPOCH_S * self.sampling_rate_hz:
            raise EpochTooShort(
                f"epoch of {s.shape[0]} samples is under {MIN_EPOCH_S} s")
        if s.shape[1] != len(self.channels):
            raise ChannelOrderMismatch("one channel label per column required")
        if self.valence_label not in (0, 1) or self.arousal_label not in (0, 1):
            raise BadSample("labels must be binary")
        object.__setattr__(self, "samples", s)


def parse_recording(path: str | Path, profile: DeviceProfile) -> EEGRecording:
    """Parse a device recording CSV and validate it against the profile."""
    frame = pd.read_csv(path)
    expected = ["timestamp", *profile.channel_names]
    if list(frame.columns) != expected:
        raise ChannelOrderMismatch(
            f"header {list(frame.columns)} != expected {expected}")
    ts = frame["timestamp"].to_numpy(dtype=float)
    if len(ts) < 1:
        raise BadSample("recording is empty")
    if np.any(np.diff(ts) <= 0):
        row = int(np.argmax(np.diff(ts) <= 0)) + 1
        raise NonMonotoneTimestamps(f"timestamp not increasing at row {row}")
    samples = frame.iloc[:, 1:].to_numpy(dtype=float)
    bad = ~np.isfinite(samples)
    if bad.any():
        row = int(np.argwhere(bad)[0][0])
        raise BadSample(f"non-finite sample at row {row}")
    return EEGRecording(
        device_id=profile.device_id,
        start_time=float(ts[0]),
        samples=samples,
        sampling_rate_hz=profile.sampling_rate_hz,
    )


def load_session(path: str | Path) -> SessionLog:
    with open(path, encoding="utf-8") as f:
        return SessionLog.from_dict(json.load(f))


def _index_of(recording: EEGRecording, ts: float) -> int:
    return int(round((ts - recording.start_time) * recording.sampling_rate_hz))


def segment_trials(
    recording: EEGRecording, session: SessionLog
) -> list[tuple[Trial, np.ndarray, np.ndarray]]:
    """Split a recording into (trial, baseline_epoch, listening_epoch).

    The listening epoch covers [play_ts, stop_ts) and the baseline covers
    [baseline_start_ts, play_ts); epochs never overlap.
    """
    fs = recording.sampling_rate_hz
    out = []
    for trial in session.trials:
        if trial.baseline_start_ts < recording.start_time - 0.5 / fs:
            raise TrialOutOfRange(
                f"trial {trial.song.title!r} starts before the recording")
        i0 = max(_index_of(recording, trial.baseline_start_ts), 0)
        i1 = _index_of(recording, trial.play_ts)
        i2 = _index_of(recording, trial.stop_ts)
        if i2 > recording.n_samples:
            raise TrialOutOfRange(
                f"trial {trial.song.title!r} ends beyond the recording")
        listening = recording.samples[i1:i2]
        if len(listening) < MIN_EPOCH_S * fs:
            raise EpochTooShort(
                f"listening epoch of trial {trial.song.title!r} is under "
                f"{MIN_EPOCH_S} s")
        baseline = recording.samples[i0:i1]
        out.append((trial, baseline, listening))
    return out


def session_epochs(
    recording: EEGRecording, session: SessionLog, profile: DeviceProfile
) -> list[LabeledEpoch]:
    """Labeled listening epochs of a session (labels from the v/a reports)."""
    from .datamodel import labels_of

    epochs = []
    for trial, _baseline, listening in segment_trials(recording, session):
        v, a = labels_of(trial.valence, trial.arousal)
        epochs.append(LabeledEpoch(
            samples=listening,
            channels=profile.channel_names,
            sampling_rate_hz=profile.sampling_rate_hz,
            device_id=profile.device_id,
            valence_label=v,
            arousal_label=a,
            origin="self_collected",
        ))
    return epochs


def load_public_dataset(root_path: str | Path) -> list[LabeledEpoch]:
    """Load the full public-layout corpus: 32 participants x 40 trials."""
    root = Path(root_path)
    participants = sorted(p for p in root.iterdir() if p.is_dir())
    if len(participants) != PUBLIC_PARTICIPANTS:
        raise DatasetShapeMismatch(
            f"expected {PUBLIC_PARTICIPANTS} participants, found {len(participants)}")
    epochs: list[LabeledEpoch] = []
    for pdir in participants:
        labels = pd.read_csv(pdir / "labels.csv")
        if list(labels.columns) != ["trial", "valence", "arousal"]:
            raise DatasetShapeMismatch(f"bad labels header in {pdir.name}")
        if len(labels) != PUBLIC_TRIALS:
            raise DatasetShapeMismatch(
                f"{pdir.name} lists {len(labels)} trials, expected {PUBLIC_TRIALS}")
        trial_files = sorted(pdir.glob("trial*.csv"))
        if len(trial_files) != PUBLIC_TRIALS:
            raise DatasetShapeMismatch(
                f"{pdir.name} holds {len(trial_files)} trial files")
        ratings = {int(r.trial): (float(r.valence), float(r.arousal))
                   for r in labels.itertuples()}
        for t, path in enumerate(trial_files, start=1):
            frame = pd.read_csv(path)
            if list(frame.columns) != ["timestamp", *PUBLIC_CHANNELS]:
                raise DatasetShapeMismatch(f"bad channel header in {path.name}")
            ts = frame["timestamp"].to_numpy(dtype=float)
            rate = 1.0 / float(np.median(np.diff(ts)))
            if abs(rate - PUBLIC_RATE_HZ) > 1.0:
                raise DatasetShapeMismatch(
                    f"{path.name} sampled at {rate:.1f} Hz, expected {PUBLIC_RATE_HZ}")
            v_rating, a_rating = ratings[t]
            epochs.append(LabeledEpoch(
                samples=frame.iloc[:, 1:].to_numpy(dtype=float),
                channels=PUBLIC_CHANNELS,
                sampling_rate_hz=PUBLIC_RATE_HZ,
                device_id="public",
                valence_label=int(v_rating > PUBLIC_RATING_THRESHOLD),
                arousal_label=int(a_rating > PUBLIC_RATING_THRESHOLD),
                origin="public",
            ))
    return epochs


def map_channels(epoch: LabeledEpoch, profile: DeviceProfile) -> LabeledEpoch:
    """Project a public epoch onto the profile's substitution channels.

    Output columns follow the profile's substitution keys in channel order;
    rows are copied sample-for-sample.
    """
    keys = profile.substitution_keys
    cols = []
    for key in keys:
        target = profile.deap_substitution[key]
        if target not in epoch.channels:
            raise MissingTargetChannel(
                f"substitution target {target!r} absent from the epoch")
        cols.append(epoch.channels.index(target))
    return replace(
        epoch,
        samples=epoch.samples[:, cols],
        channels=keys,
        device_id=profile.device_id,
    )
