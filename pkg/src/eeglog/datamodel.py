"""Core value objects: device profiles, sessions, trials, features, models.

All types are frozen dataclasses (immutable, hashable where sensible) with
``to_dict`` / ``from_dict`` for the canonical JSON schema documented in
``docs/formats.md``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import SchemaError

FORMAT_VERSION = 1

BAND_NAMES = ("theta", "alpha", "beta", "gamma")


class EmotionQuadrant(str, Enum):
    """Four emotion classes from the signs of valence and arousal."""

    PV_PA = "PV_PA"
    PV_NA = "PV_NA"
    NV_PA = "NV_PA"
    NV_NA = "NV_NA"

    @property
    def valence_positive(self) -> bool:
        return self.value.startswith("PV")

    @property
    def arousal_positive(self) -> bool:
        return self.value.endswith("PA")


def quadrant_of(valence: float, arousal: float) -> EmotionQuadrant:
    """Map a (valence, arousal) report to its quadrant.

    Zero counts as negative, so the mapping is total over finite inputs.
    """
    if not (math.isfinite(valence) and math.isfinite(arousal)):
        raise SchemaError("valence/arousal must be finite")
    v = "PV" if valence > 0 else "NV"
    a = "PA" if arousal > 0 else "NA"
    return EmotionQuadrant(f"{v}_{a}")


def labels_of(valence: float, arousal: float) -> tuple[int, int]:
    """Binary (valence, arousal) labels; positive side is 1."""
    q = quadrant_of(valence, arousal)
    return (1 if q.valence_positive else 0, 1 if q.arousal_positive else 0)


@dataclass(frozen=True)
class DeviceProfile:
    """Static description of one wearable EEG headset."""

    device_id: str
    channel_names: tuple[str, ...]
    sampling_rate_hz: int
    excluded_channels: frozenset[str] = frozenset()
    deap_substitution: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.sampling_rate_hz <= 0:
            raise SchemaError("sampling_rate_hz must be positive")
        if not self.excluded_channels <= set(self.channel_names):
            raise SchemaError("excluded_channels must be a subset of channel_names")
        if not set(self.deap_substitution) <= set(self.channel_names):
            raise SchemaError("substitution keys must be channels")
        values = list(self.deap_substitution.values())
        if len(values) != len(set(values)):
            raise SchemaError("substitution targets must be distinct")

    @property
    def included_channels(self) -> tuple[str, ...]:
        """Channels used for features, in profile order."""
        return tuple(c for c in self.channel_names if c not in self.excluded_channels)

    @property
    def n_features(self) -> int:
        return 4 * len(self.included_channels)

    @property
    def substitution_keys(self) -> tuple[str, ...]:
        """Substitution-map keys in profile channel order."""
        return tuple(c for c in self.channel_names if c in self.deap_substitution)

    def to_dict(self) -> dict:
        return {
            "device_id": self.device_id,
            "channel_names": list(self.channel_names),
            "sampling_rate_hz": self.sampling_rate_hz,
            "excluded_channels": sorted(self.excluded_channels),
            "deap_substitution": dict(self.deap_substitution),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DeviceProfile":
        return cls(
            device_id=d["device_id"],
            channel_names=tuple(d["channel_names"]),
            sampling_rate_hz=int(d["sampling_rate_hz"]),
            excluded_channels=frozenset(d.get("excluded_channels", ())),
            deap_substitution=dict(d.get("deap_substitution", {})),
        )


# The four shipped headsets.  Channel lists follow the vendor electrode
# layouts (10-20 labels; Neurable uses numbered pad positions 1-20, right
# ear 1-10, left ear 11-20).
_MUSE2 = DeviceProfile(
    device_id="muse2",
    channel_names=("TP9", "AF7", "AF8", "TP10"),
    sampling_rate_hz=256,
    deap_substitution={"TP9": "T7", "AF7": "F7", "AF8": "F8", "TP10": "T8"},
)

_EMOTIV = DeviceProfile(
    device_id="epoc+",
    channel_names=(
        "AF3", "F7", "F3", "FC5", "T7", "P7", "O1",
        "O2", "P8", "T8", "FC6", "F4", "F8", "AF4",
    ),
    sampling_rate_hz=128,
    excluded_channels=frozenset({"O1", "O2"}),
    deap_substitution={c: c for c in
                       ("AF3", "F7", "F3", "T7", "P7", "P8", "T8", "F4", "F8", "AF4")},
)

_SMARTFONES = DeviceProfile(
    device_id="smartfones",
    channel_names=("L1", "L2", "L3", "L4", "R1", "R2", "R3", "R4", "C3", "C4", "Cz"),
    sampling_rate_hz=500,
    deap_substitution={"L2": "T7", "R2": "T8", "C3": "C3", "C4": "C4", "Cz": "Cz"},
)

_NEURABLE = DeviceProfile(
    device_id="neurable",
    channel_names=tuple(str(i) for i in range(1, 21)),
    sampling_rate_hz=500,
    deap_substitution={"16": "T7", "5": "T8"},
)

_PROFILES = {p.device_id: p for p in (_MUSE2, _EMOTIV, _SMARTFONES, _NEURABLE)}


def builtin_profiles() -> list[DeviceProfile]:
    """The four shipped device profiles."""
    return list(_PROFILES.values())


def get_profile(device_id: str) -> DeviceProfile:
    from .errors import NotFound

    try:
        return _PROFILES[device_id]
    except KeyError:
        raise NotFound(f"unknown device {device_id!r}") from None


@dataclass(frozen=True)
class EEGRecording:
    """One continuous multichannel recording, in microvolts."""

    device_id: str
    start_time: float
    samples: np.ndarray  # [n_samples, n_channels]
    sampling_rate_hz: int

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[0] < 1:
            raise SchemaError("samples must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(s)):
            raise SchemaError("samples must be finite")
        object.__setattr__(self, "samples", s)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sampling_rate_hz

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration_s


@dataclass(frozen=True)
class Song:
    title: str
    artist: Optional[str] = None
    source_uri: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"title": self.title}
        if self.artist is not None:
            d["artist"] = self.artist
        if self.source_uri is not None:
            d["source_uri"] = self.source_uri
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Song":
        return cls(title=d["title"], artist=d.get("artist"), source_uri=d.get("source_uri"))


@dataclass(frozen=True)
class Trial:
    """One song-listening unit: baseline, listening epoch, and self-report."""

    song: Song
    baseline_start_ts: float
    play_ts: float
    stop_ts: float
    valence: float
    arousal: float

    def __post_init__(self):
        if not (self.baseline_start_ts <= self.play_ts < self.stop_ts):
            raise SchemaError("need baseline_start_ts <= play_ts < stop_ts")
        for name, v in (("valence", self.valence), ("arousal", self.arousal)):
            if not (math.isfinite(v) and -5.0 <= v <= 5.0):
                raise SchemaError(f"{name} must lie in [-5, 5]")

    @property
    def quadrant(self) -> EmotionQuadrant:
        return quadrant_of(self.valence, self.arousal)

    def to_dict(self) -> dict:
        return {
            "song": self.song.to_dict(),
            "baseline_start_ts": self.baseline_start_ts,
            "play_ts": self.play_ts,
            "stop_ts": self.stop_ts,
            "valence": self.valence,
            "arousal": self.arousal,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trial":
        return cls(
            song=Song.from_dict(d["song"]),
            baseline_start_ts=float(d["baseline_start_ts"]),
            play_ts=float(d["play_ts"]),
            stop_ts=float(d["stop_ts"]),
            valence=float(d["valence"]),
            arousal=float(d["arousal"]),
        )


@dataclass(frozen=True)
class SessionLog:
    """One continuous listening period containing several trials."""

    session_id: str
    user_id: str
    device_id: str
    trials: tuple[Trial, ...]
    recording_ref: str

    def __post_init__(self):
        if len(self.trials) < 1:
            raise SchemaError("a session needs at least one trial")
        for a, b in zip(self.trials, self.trials[1:]):
            if b.baseline_start_ts < a.stop_ts:
                raise SchemaError("trials must be time-ordered and non-overlapping")

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "session_id": self.session_id,
            "user_id": self.user_id,
            "device_id": self.device_id,
            "trials": [t.to_dict() for t in self.trials],
            "recording_ref": self.recording_ref,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionLog":
        version = d.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            from .errors import VersionMismatch

            raise VersionMismatch(f"session format {version} != {FORMAT_VERSION}")
        return cls(
            session_id=d["session_id"],
            user_id=d["user_id"],
            device_id=d["device_id"],
            trials=tuple(Trial.from_dict(t) for t in d["trials"]),
            recording_ref=d["recording_ref"],
        )


@dataclass(frozen=True)
class FeatureVector:
    """Band-power features with per-element (channel, band) provenance."""

    values: tuple[float, ...]
    descriptors: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(self.values) != len(self.descriptors):
            raise SchemaError("values and descriptors must be parallel")
        for _, band in self.descriptors:
            if band not in BAND_NAMES:
                raise SchemaError(f"unknown band {band!r}")

    def to_dict(self) -> dict:
        return {
            "values": list(self.values),
            "descriptors": [list(d) for d in self.descriptors],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureVector":
        return cls(
            values=tuple(float(v) for v in d["values"]),
            descriptors=tuple((c, b) for c, b in d["descriptors"]),
        )


@dataclass(frozen=True)
class TrainedModel:
    """Everything needed to reproduce one binary emotion classifier."""

    target: str  # "valence" | "arousal"
    scope: str  # "device" | "general"
    device_id: str
    feature_mean: tuple[float, ...]
    feature_std: tuple[float, ...]
    selected_indices: tuple[int, ...]
    support_vectors: tuple[tuple[float, ...], ...]
    dual_coefficients: tuple[float, ...]  # alpha_i * y_i
    bias: float
    rbf_gamma: float
    regularization_c: float
    training_metrics: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.target not in ("valence", "arousal"):
            raise SchemaError("target must be valence|arousal")
        if self.scope not in ("device", "general"):
            raise SchemaError("scope must be device|general")
        if len(self.support_vectors) != len(self.dual_coefficients):
            raise SchemaError("one dual coefficient per support vector")
        if any(s <= 0 for s in self.feature_std):
            raise SchemaError("feature_std must be positive")

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "target": self.target,
            "scope": self.scope,
            "device_id": self.device_id,
            "feature_mean": list(self.feature_mean),
            "feature_std": list(self.feature_std),
            "selected_indices": list(self.selected_indices),
            "support_vectors": [list(v) for v in self.support_vectors],
            "dual_coefficients": list(self.dual_coefficients),
            "bias": self.bias,
            "rbf_gamma": self.rbf_gamma,
            "regularization_c": self.regularization_c,
            "training_metrics": dict(self.training_metrics),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedModel":
        version = d.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            from .errors import VersionMismatch

            raise VersionMismatch(f"model format {version} != {FORMAT_VERSION}")
        return cls(
            target=d["target"],
            scope=d["scope"],
            device_id=d["device_id"],
            feature_mean=tuple(float(x) for x in d["feature_mean"]),
            feature_std=tuple(float(x) for x in d["feature_std"]),
            selected_indices=tuple(int(i) for i in d["selected_indices"]),
            support_vectors=tuple(tuple(float(x) for x in v) for v in d["support_vectors"]),
            dual_coefficients=tuple(float(x) for x in d["dual_coefficients"]),
            bias=float(d["bias"]),
            rbf_gamma=float(d["rbf_gamma"]),
            regularization_c=float(d["regularization_c"]),
            training_metrics={k: float(v) for k, v in d.get("training_metrics", {}).items()},
        )


def reduced_profile(profile: DeviceProfile) -> DeviceProfile:
    """Profile restricted to the public-dataset substitution channels."""
    keys = profile.substitution_keys
    return replace(
        profile,
        channel_names=keys,
        excluded_channels=frozenset(),
        deap_substitution={k: profile.deap_substitution[k] for k in keys},
    )
