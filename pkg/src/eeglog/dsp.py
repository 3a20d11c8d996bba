"""Filtering, spectral estimation, and band-power feature extraction.

Pipeline per channel: zero-phase 2-50 Hz band-pass, Welch PSD (2 s Hann
windows, 50% overlap), then trapezoidal band integrals over theta, alpha,
beta, gamma.  Delta is deliberately excluded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .datamodel import BAND_NAMES, DeviceProfile, FeatureVector
from .errors import DimensionMismatch, SignalTooShort, UnsupportedSamplingRate


@dataclass(frozen=True)
class BandDefinition:
    name: str
    lo_hz: float
    hi_hz: float

    def __post_init__(self):
        if not (0 < self.lo_hz < self.hi_hz):
            raise ValueError("need 0 < lo < hi")


BANDS = (
    BandDefinition("theta", 4.0, 7.0),
    BandDefinition("alpha", 8.0, 13.0),
    BandDefinition("beta", 14.0, 30.0),
    BandDefinition("gamma", 31.0, 50.0),
)

BAND_LO = 2.0
BAND_HI = 50.0
# order 6 is the lowest Butterworth order whose zero-phase response clears
# 20 dB of stopband rejection at 60 Hz while keeping passband ripple <= 1 dB
FILTER_ORDER = 6
WELCH_WINDOW_S = 2.0


def _bandpass_sos(fs_hz: float) -> np.ndarray:
    return sps.butter(FILTER_ORDER, [BAND_LO, BAND_HI], btype="bandpass",
                      fs=fs_hz, output="sos")


def bandpass(x: np.ndarray, fs_hz: float) -> np.ndarray:
    """Zero-phase 2-50 Hz band-pass; output length equals input length."""
    if fs_hz <= 2 * BAND_HI:
        raise UnsupportedSamplingRate(f"fs={fs_hz} too low for a 50 Hz band edge")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("bandpass expects a 1-D signal")
    if len(x) < 3 * FILTER_ORDER:
        raise SignalTooShort(f"signal of {len(x)} samples is too short to filter")
    sos = _bandpass_sos(fs_hz)
    return sps.sosfiltfilt(sos, x)


def psd(x: np.ndarray, fs_hz: float) -> tuple[np.ndarray, np.ndarray]:
    """Welch PSD with 2 s Hann segments at 50% overlap."""
    x = np.asarray(x, dtype=float)
    nperseg = int(round(WELCH_WINDOW_S * fs_hz))
    if len(x) < nperseg:
        raise SignalTooShort(f"need at least {nperseg} samples ({WELCH_WINDOW_S} s)")
    freqs, density = sps.welch(x, fs=fs_hz, window="hann", nperseg=nperseg,
                               noverlap=nperseg // 2, detrend=False)
    return freqs, density


def band_powers(x: np.ndarray, fs_hz: float) -> np.ndarray:
    """Integrated PSD over (theta, alpha, beta, gamma), in that order."""
    freqs, density = psd(x, fs_hz)
    return integrate_bands(freqs, density)


def integrate_bands(freqs: np.ndarray, density: np.ndarray) -> np.ndarray:
    """Trapezoidal band integrals over bins whose centers fall in [lo, hi]."""
    out = np.empty(len(BANDS))
    for i, band in enumerate(BANDS):
        mask = (freqs >= band.lo_hz) & (freqs <= band.hi_hz)
        if mask.sum() < 2:
            out[i] = density[mask].sum()
        else:
            out[i] = np.trapezoid(density[mask], freqs[mask])
    return out


def channel_band_powers(epoch: np.ndarray, fs_hz: float) -> np.ndarray:
    """Band powers per channel: [n_channels, 4], filtered first."""
    epoch = np.asarray(epoch, dtype=float)
    if epoch.ndim != 2:
        raise DimensionMismatch("epoch must be [n_samples, n_channels]")
    return np.stack([band_powers(bandpass(epoch[:, c], fs_hz), fs_hz)
                     for c in range(epoch.shape[1])])


def extract_features(epoch: np.ndarray, profile: DeviceProfile) -> FeatureVector:
    """Band-power feature vector for one epoch, channel-major band-minor.

    The epoch must carry all profile channels in profile order; excluded
    (occipital) channels are dropped here.
    """
    epoch = np.asarray(epoch, dtype=float)
    if epoch.ndim != 2 or epoch.shape[1] != len(profile.channel_names):
        raise DimensionMismatch(
            f"expected {len(profile.channel_names)} channels, got "
            f"{epoch.shape[1] if epoch.ndim == 2 else 'non-matrix'}")
    included = profile.included_channels
    cols = [profile.channel_names.index(c) for c in included]
    powers = channel_band_powers(epoch[:, cols], profile.sampling_rate_hz)
    descriptors = tuple((ch, band) for ch in included for band in BAND_NAMES)
    return FeatureVector(values=tuple(powers.reshape(-1)), descriptors=descriptors)
