"""Training and inference for the valence/arousal emotion classifiers.

Two scopes per device: the "device" model trains and tests on
self-collected epochs only; the "general" model trains on channel-mapped
public epochs (optionally mixed with the self-collected training split)
and tests on self-collected data only.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import dsp, featsel, ingest
from .datamodel import DeviceProfile, EmotionQuadrant, TrainedModel, get_profile
from .errors import (
    DimensionMismatch,
    InsufficientData,
    MissingTargetChannel,
    ProfileMismatch,
    SingleClassData,
)
from .ingest import LabeledEpoch
from .svm import SVMFit, svm_fit

MIN_TRAIN_EPOCHS = 20
TRAIN_FRACTION = 0.8
DEFAULT_C = 1.0

svm_train = svm_fit  # the SMO solver is the training core


def standardize_fit(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Population mean/std per column; near-constant columns get std 1."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise DimensionMismatch("need a non-empty [n, d] matrix")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std < 1e-12] = 1.0
    return mean, std


def standardize_apply(x: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != len(mean):
        raise DimensionMismatch(
            f"vector dimension {x.shape[-1]} != standardization dimension {len(mean)}")
    return (x - mean) / std


def stratified_split(
    y: np.ndarray, train_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic stratified index split preserving the class ratio."""
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for cls in np.unique(y):
        members = np.flatnonzero(y == cls)
        members = members[rng.permutation(len(members))]
        n_train = int(round(train_fraction * len(members)))
        n_train = min(max(n_train, 1), len(members) - 1)
        train_idx.extend(members[:n_train])
        test_idx.extend(members[n_train:])
    return np.array(sorted(train_idx)), np.array(sorted(test_idx))


def epoch_features(epoch: LabeledEpoch, channels: Sequence[str]) -> np.ndarray:
    """Band-power features over the named channels, channel-major."""
    try:
        cols = [epoch.channels.index(c) for c in channels]
    except ValueError as e:
        raise ProfileMismatch(f"epoch lacks a required channel: {e}") from None
    powers = dsp.channel_band_powers(epoch.samples[:, cols], epoch.sampling_rate_hz)
    return powers.reshape(-1)


def feature_matrix(
    epochs: Sequence[LabeledEpoch], channels: Sequence[str], target: str
) -> tuple[np.ndarray, np.ndarray]:
    X = np.stack([epoch_features(e, channels) for e in epochs])
    if target == "valence":
        y = np.array([e.valence_label for e in epochs], dtype=int)
    elif target == "arousal":
        y = np.array([e.arousal_label for e in epochs], dtype=int)
    else:
        raise DimensionMismatch(f"unknown target {target!r}")
    return X, y


def _assemble(
    target: str,
    scope: str,
    profile: DeviceProfile,
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_test: np.ndarray,
    y_test: np.ndarray,
    seed: int,
    c: float,
) -> TrainedModel:
    selection = featsel.select_if_needed(
        X_train, y_train, scorer=featsel.make_cv_svm_scorer(seed=seed, c=c))
    X_train_sel = featsel.apply_selection(X_train, selection)
    X_test_sel = featsel.apply_selection(X_test, selection)
    mean, std = standardize_fit(X_train_sel)
    fit = svm_fit(standardize_apply(X_train_sel, mean, std), y_train, c=c, seed=seed)
    train_acc = float(np.mean(
        fit.predict(standardize_apply(X_train_sel, mean, std)) == y_train))
    test_acc = float(np.mean(
        fit.predict(standardize_apply(X_test_sel, mean, std)) == y_test))
    return TrainedModel(
        target=target,
        scope=scope,
        device_id=profile.device_id,
        feature_mean=tuple(mean),
        feature_std=tuple(std),
        selected_indices=selection.selected_indices,
        support_vectors=tuple(tuple(v) for v in fit.support_vectors),
        dual_coefficients=tuple(fit.dual_coefficients),
        bias=fit.bias,
        rbf_gamma=fit.gamma,
        regularization_c=c,
        training_metrics={"train_acc": train_acc, "test_acc": test_acc},
    )


def train_device_model(
    epochs: Sequence[LabeledEpoch],
    target: str,
    profile: DeviceProfile,
    seed: int = 0,
    c: float = DEFAULT_C,
) -> TrainedModel:
    """Train on the 80% stratified split of self-collected epochs."""
    if len(epochs) < MIN_TRAIN_EPOCHS:
        raise InsufficientData(
            f"{len(epochs)} epochs < required {MIN_TRAIN_EPOCHS}")
    X, y = feature_matrix(epochs, profile.included_channels, target)
    if len(np.unique(y)) < 2:
        raise SingleClassData(f"all epochs share one {target} label")
    train_idx, test_idx = stratified_split(y, TRAIN_FRACTION, seed)
    return _assemble(target, "device", profile,
                     X[train_idx], y[train_idx], X[test_idx], y[test_idx],
                     seed, c)


def train_general_model(
    self_epochs: Sequence[LabeledEpoch],
    public_epochs: Sequence[LabeledEpoch],
    target: str,
    profile: DeviceProfile,
    seed: int = 0,
    c: float = DEFAULT_C,
    include_self_training: bool = True,
) -> TrainedModel:
    """Train on public epochs (plus the self training split); test on self."""
    keys = profile.substitution_keys
    if not keys:
        raise MissingTargetChannel(
            f"profile {profile.device_id!r} has no substitution channels")
    mapped = [e if e.channels == keys else ingest.map_channels(e, profile)
              for e in public_epochs]
    X_pub, y_pub = feature_matrix(mapped, keys, target)
    X_self, y_self = feature_matrix(self_epochs, keys, target)
    if len(np.unique(y_self)) < 2 or len(np.unique(y_pub)) < 2:
        raise SingleClassData(f"both corpora need both {target} classes")
    train_idx, test_idx = stratified_split(y_self, TRAIN_FRACTION, seed)
    if include_self_training:
        X_train = np.vstack([X_pub, X_self[train_idx]])
        y_train = np.concatenate([y_pub, y_self[train_idx]])
    else:
        X_train, y_train = X_pub, y_pub
    return _assemble(target, "general", profile,
                     X_train, y_train, X_self[test_idx], y_self[test_idx],
                     seed, c)


def _model_channels(model: TrainedModel, profile: DeviceProfile) -> tuple[str, ...]:
    return (profile.included_channels if model.scope == "device"
            else profile.substitution_keys)


def decision_value(model: TrainedModel, epoch: LabeledEpoch | np.ndarray) -> float:
    """Decision-function value of one epoch under a stored model."""
    profile = get_profile(model.device_id)
    channels = _model_channels(model, profile)
    if isinstance(epoch, LabeledEpoch):
        if epoch.device_id not in (model.device_id, "public"):
            raise ProfileMismatch(
                f"epoch from {epoch.device_id!r} fed to a {model.device_id!r} model")
        features = epoch_features(epoch, channels)
    else:
        samples = np.asarray(epoch, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != len(profile.channel_names):
            raise ProfileMismatch(
                f"expected {len(profile.channel_names)} channels of "
                f"{model.device_id!r} data")
        cols = [profile.channel_names.index(c) for c in channels]
        powers = dsp.channel_band_powers(samples[:, cols], profile.sampling_rate_hz)
        features = powers.reshape(-1)
    if model.selected_indices and max(model.selected_indices) >= len(features):
        raise DimensionMismatch(
            f"model expects at least {max(model.selected_indices) + 1} features, "
            f"epoch yields {len(features)}")
    x = features[list(model.selected_indices)]
    x = standardize_apply(x, np.array(model.feature_mean), np.array(model.feature_std))
    fit = SVMFit(
        support_vectors=np.array(model.support_vectors),
        dual_coefficients=np.array(model.dual_coefficients),
        bias=model.bias,
        gamma=model.rbf_gamma,
        c=model.regularization_c,
    )
    return float(fit.decision_function(x[None, :])[0])


def predict(model: TrainedModel, epoch: LabeledEpoch | np.ndarray) -> int:
    """Binary label of one epoch; positive decision values map to 1."""
    return int(decision_value(model, epoch) > 0)


def predict_quadrant(
    valence_model: TrainedModel,
    arousal_model: TrainedModel,
    epoch: LabeledEpoch | np.ndarray,
) -> tuple[int, int, EmotionQuadrant]:
    """Combine the two binary models into an emotion quadrant."""
    v = predict(valence_model, epoch)
    a = predict(arousal_model, epoch)
    quad = EmotionQuadrant(f"{'PV' if v else 'NV'}_{'PA' if a else 'NA'}")
    return v, a, quad
