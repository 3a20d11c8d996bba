"""EEG music-lifelogging engine: ingestion, band-power features, emotion
classification, analytics, recommendation, storage, and a local service."""

from .datamodel import (
    DeviceProfile,
    EmotionQuadrant,
    FeatureVector,
    SessionLog,
    Song,
    TrainedModel,
    Trial,
    builtin_profiles,
    get_profile,
    quadrant_of,
)

__all__ = [
    "DeviceProfile",
    "EmotionQuadrant",
    "FeatureVector",
    "SessionLog",
    "Song",
    "TrainedModel",
    "Trial",
    "builtin_profiles",
    "get_profile",
    "quadrant_of",
]

__version__ = "1.0.0"
