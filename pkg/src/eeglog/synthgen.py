"""Deterministic synthetic-EEG corpora with recoverable emotion signatures.

Each epoch is 1/f (pink) noise per channel plus two planted effects:
  - valence: alpha-band asymmetry, +6 dB power on the right hemisphere for
    positive valence (left for negative);
  - arousal: global beta level, beta/alpha > 1 when positive and < 1
    otherwise.
These signatures give an explicit Bayes rule that upper-bounds what the
learned classifiers can reach, which is what the end-to-end accuracy
checks lean on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from . import dsp
from .datamodel import (
    DeviceProfile,
    EEGRecording,
    EmotionQuadrant,
    SessionLog,
    Song,
    Trial,
)
from .errors import SchemaError
from .ingest import PUBLIC_CHANNELS, LabeledEpoch

QUADRANT_CYCLE = (
    EmotionQuadrant.PV_PA,
    EmotionQuadrant.PV_NA,
    EmotionQuadrant.NV_PA,
    EmotionQuadrant.NV_NA,
)

PINK_SIGMA_UV = 5.0
ALPHA_WEAK_UV = 6.0
ALPHA_STRONG_UV = 12.0  # 2x amplitude = +6 dB power
BETA_HIGH_UV = 20.0
BETA_LOW_UV = 4.0

BASELINE_S = 2.0
_EPOCH_T0 = 1736150400.0  # 2025-01-06 08:00 UTC, first synthetic session


def hemisphere_split(channels: tuple[str, ...],
                     device_id: str = "") -> tuple[list[str], list[str]]:
    """(left, right) channel lists; midline channels belong to neither."""
    left: list[str] = []
    right: list[str] = []
    for ch in channels:
        if device_id == "neurable":
            # right-ear pads are numbered 1-10, left-ear pads 11-20
            (right if int(ch) <= 10 else left).append(ch)
        elif ch.startswith("L"):
            left.append(ch)
        elif ch.startswith("R"):
            right.append(ch)
        elif ch[-1].isdigit():
            (left if int(ch[-1]) % 2 == 1 else right).append(ch)
    return left, right


def pink_noise(n: int, rng: np.random.Generator, sigma: float) -> np.ndarray:
    """1/f-amplitude noise, unit-free, scaled to the requested std."""
    white = rng.standard_normal(n)
    spectrum = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n)
    shaping = np.ones_like(freqs)
    shaping[1:] = 1.0 / np.sqrt(freqs[1:])
    shaping[0] = 0.0
    x = np.fft.irfft(spectrum * shaping, n)
    return x * (sigma / x.std())


def _signature_matrix(channels: tuple[str, ...], device_id: str, fs: int,
                      n: int, quadrant: EmotionQuadrant,
                      rng: np.random.Generator) -> np.ndarray:
    left, right = hemisphere_split(channels, device_id)
    t = np.arange(n) / fs
    alpha_hz = rng.uniform(9.0, 12.0)
    beta_hz = rng.uniform(18.0, 25.0)
    jitter = rng.uniform(0.85, 1.18)
    strong = set(right if quadrant.valence_positive else left)
    weak = set(left if quadrant.valence_positive else right)
    beta_amp = (BETA_HIGH_UV if quadrant.arousal_positive else BETA_LOW_UV) * jitter
    cols = []
    for ch in channels:
        if ch in strong:
            alpha_amp = ALPHA_STRONG_UV
        elif ch in weak:
            alpha_amp = ALPHA_WEAK_UV
        else:  # midline: average level, no asymmetry information
            alpha_amp = 0.5 * (ALPHA_STRONG_UV + ALPHA_WEAK_UV)
        alpha_amp *= jitter
        x = pink_noise(n, rng, PINK_SIGMA_UV)
        x = x + alpha_amp * np.sin(2 * np.pi * alpha_hz * t + rng.uniform(0, 2 * np.pi))
        x = x + beta_amp * np.sin(2 * np.pi * beta_hz * t + rng.uniform(0, 2 * np.pi))
        cols.append(x)
    return np.column_stack(cols)


def generate_epoch(
    profile: DeviceProfile,
    quadrant: EmotionQuadrant,
    duration_s: float = 10.0,
    seed: int = 0,
) -> LabeledEpoch:
    """One labeled synthetic epoch for a device profile."""
    if duration_s < 10.0:
        raise SchemaError("synthetic epochs must be at least 10 s")
    rng = np.random.default_rng(seed)
    n = int(round(duration_s * profile.sampling_rate_hz))
    samples = _signature_matrix(profile.channel_names, profile.device_id,
                                profile.sampling_rate_hz, n, quadrant, rng)
    return LabeledEpoch(
        samples=samples,
        channels=profile.channel_names,
        sampling_rate_hz=profile.sampling_rate_hz,
        device_id=profile.device_id,
        valence_label=int(quadrant.valence_positive),
        arousal_label=int(quadrant.arousal_positive),
        origin="self_collected",
    )


def bayes_labels(epoch: LabeledEpoch) -> tuple[int, int]:
    """Ground-truth decision rule on the planted signatures."""
    left, right = hemisphere_split(epoch.channels, epoch.device_id)
    powers = dsp.channel_band_powers(epoch.samples, epoch.sampling_rate_hz)
    by_name = dict(zip(epoch.channels, powers))
    left_alpha = np.mean([by_name[c][1] for c in left])
    right_alpha = np.mean([by_name[c][1] for c in right])
    alpha_all = powers[:, 1].mean()
    beta_all = powers[:, 2].mean()
    return int(right_alpha > left_alpha), int(beta_all > alpha_all)


@dataclass(frozen=True)
class SyntheticCorpus:
    profile: DeviceProfile
    epochs: tuple[LabeledEpoch, ...]
    sessions: tuple[tuple[SessionLog, EEGRecording], ...]


def _report_values(quadrant: EmotionQuadrant,
                   rng: np.random.Generator) -> tuple[float, float]:
    v = rng.uniform(1.0, 5.0) * (1 if quadrant.valence_positive else -1)
    a = rng.uniform(1.0, 5.0) * (1 if quadrant.arousal_positive else -1)
    return round(v, 1), round(a, 1)


def generate_corpus(
    profile: DeviceProfile,
    n_per_quadrant: int | None = None,
    seed: int = 0,
    total: int | None = None,
    duration_s: float = 10.0,
    trials_per_session: int = 8,
    user_id: str = "synth",
) -> SyntheticCorpus:
    """Balanced labeled corpus plus sessions that re-ingest cleanly.

    Either ``n_per_quadrant`` or an explicit ``total`` (quadrants cycled)
    must be given.  Sessions are laid out on consecutive days.
    """
    if total is None:
        if n_per_quadrant is None or n_per_quadrant < 1:
            raise SchemaError("need n_per_quadrant >= 1 or a total count")
        total = 4 * n_per_quadrant
    if total < 1:
        raise SchemaError("need at least one epoch")
    quadrants = [QUADRANT_CYCLE[i % 4] for i in range(total)]
    seeds = np.random.SeedSequence(seed).spawn(total)
    report_rng = np.random.default_rng(seed + 1)
    epochs = [
        generate_epoch(profile, q, duration_s,
                       seed=int(s.generate_state(1)[0] % (2**31)))
        for q, s in zip(quadrants, seeds)
    ]

    fs = profile.sampling_rate_hz
    sessions: list[tuple[SessionLog, EEGRecording]] = []
    song_rng = np.random.default_rng(seed + 2)
    for si in range(0, total, trials_per_session):
        chunk = list(range(si, min(si + trials_per_session, total)))
        session_no = si // trials_per_session
        t0 = _EPOCH_T0 + session_no * 86400.0
        cursor = t0
        trials = []
        blocks = []
        base_rng = np.random.default_rng(seed + 1000 + session_no)
        for ei in chunk:
            baseline = np.column_stack([
                pink_noise(int(BASELINE_S * fs), base_rng, PINK_SIGMA_UV)
                for _ in profile.channel_names])
            blocks.append(baseline)
            blocks.append(epochs[ei].samples)
            play = cursor + BASELINE_S
            stop = play + duration_s
            v, a = _report_values(quadrants[ei], report_rng)
            song_no = int(song_rng.integers(1, max(total // 4, 2)))
            trials.append(Trial(
                song=Song(title=f"Song {song_no:03d}", artist=f"Artist {song_no % 7}"),
                baseline_start_ts=cursor,
                play_ts=play,
                stop_ts=stop,
                valence=v,
                arousal=a,
            ))
            cursor = stop
        session_id = f"{user_id}-{profile.device_id}-{session_no:04d}"
        recording = EEGRecording(
            device_id=profile.device_id,
            start_time=t0,
            samples=np.vstack(blocks),
            sampling_rate_hz=fs,
        )
        sessions.append((SessionLog(
            session_id=session_id,
            user_id=user_id,
            device_id=profile.device_id,
            trials=tuple(trials),
            recording_ref=f"recordings/{session_id}.csv",
        ), recording))
    return SyntheticCorpus(profile=profile, epochs=tuple(epochs),
                           sessions=tuple(sessions))


def write_recording_csv(recording: EEGRecording, channels: tuple[str, ...],
                        path: Path) -> None:
    fs = recording.sampling_rate_hz
    ts = recording.start_time + np.arange(recording.n_samples) / fs
    frame = pd.DataFrame(recording.samples, columns=list(channels))
    frame.insert(0, "timestamp", ts)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.4f")


def write_corpus(corpus: SyntheticCorpus, out_dir: str | Path) -> list[Path]:
    """Write session JSONs + recording CSVs in the canonical layout."""
    out = Path(out_dir)
    (out / "sessions").mkdir(parents=True, exist_ok=True)
    written = []
    for session, recording in corpus.sessions:
        rec_path = out / session.recording_ref
        write_recording_csv(recording, corpus.profile.channel_names, rec_path)
        sess_path = out / "sessions" / f"{session.session_id}.json"
        with open(sess_path, "w", encoding="utf-8") as f:
            json.dump(session.to_dict(), f, indent=1)
        written.append(sess_path)
    return written


def generate_public_fixture(
    root: str | Path,
    seed: int = 0,
    trial_duration_s: float = 3.0,
    n_participants: int = 32,
    n_trials: int = 40,
) -> Path:
    """Write a public-dataset-layout fixture tree with planted signatures."""
    root = Path(root)
    fs = 128
    n = int(round(trial_duration_s * fs))
    counter = 0
    for p in range(1, n_participants + 1):
        pdir = root / f"p{p:02d}"
        pdir.mkdir(parents=True, exist_ok=True)
        rows = []
        for t in range(1, n_trials + 1):
            rng = np.random.default_rng(seed * 100003 + counter)
            counter += 1
            quadrant = QUADRANT_CYCLE[(p + t) % 4]
            samples = _signature_matrix(PUBLIC_CHANNELS, "public", fs, n,
                                        quadrant, rng)
            ts = np.arange(n) / fs
            frame = pd.DataFrame(samples, columns=list(PUBLIC_CHANNELS))
            frame.insert(0, "timestamp", ts)
            frame.to_csv(pdir / f"trial{t:02d}.csv", index=False,
                         float_format="%.4f")
            v = rng.uniform(5.5, 9.0) if quadrant.valence_positive else rng.uniform(1.0, 5.0)
            a = rng.uniform(5.5, 9.0) if quadrant.arousal_positive else rng.uniform(1.0, 5.0)
            rows.append({"trial": t, "valence": round(v, 2), "arousal": round(a, 2)})
        pd.DataFrame(rows).to_csv(pdir / "labels.csv", index=False)
    return root
