"""Sequential Backward Selection over band-power features.

Each round drops the single feature whose removal maximizes the scorer
(ties break toward the lowest index), down to exactly k features.  The
default scorer is stratified 5-fold cross-validated accuracy of the same
RBF SVM used downstream, with per-fold standardization to avoid leakage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, SchemaError, SingleClassData
from .svm import svm_fit

Scorer = Callable[[np.ndarray, np.ndarray], float]

SELECTION_TARGET = 20  # keep at most this many features


@dataclass(frozen=True)
class SelectionResult:
    selected_indices: tuple[int, ...]
    removal_trace: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if len(set(self.selected_indices)) != len(self.selected_indices):
            raise SchemaError("selected indices must be distinct")

    @property
    def original_dim(self) -> int:
        return len(self.selected_indices) + len(self.removal_trace)

    def to_dict(self) -> dict:
        return {
            "selected_indices": list(self.selected_indices),
            "removal_trace": [[i, s] for i, s in self.removal_trace],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SelectionResult":
        return cls(
            selected_indices=tuple(int(i) for i in d["selected_indices"]),
            removal_trace=tuple((int(i), float(s)) for i, s in d["removal_trace"]),
        )


def identity_selection(n_features: int) -> SelectionResult:
    return SelectionResult(selected_indices=tuple(range(n_features)), removal_trace=())


def stratified_kfold_indices(y: np.ndarray, n_folds: int, seed: int) -> list[np.ndarray]:
    """Deterministic stratified folds; each class is split round-robin."""
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    for cls in np.unique(y):
        members = np.flatnonzero(y == cls)
        members = members[rng.permutation(len(members))]
        for j, idx in enumerate(members):
            folds[j % n_folds].append(int(idx))
    return [np.array(sorted(f), dtype=int) for f in folds]


def make_cv_svm_scorer(n_folds: int = 5, seed: int = 0, c: float = 1.0) -> Scorer:
    """Stratified k-fold CV accuracy of the downstream SVM pipeline."""

    def scorer(X: np.ndarray, y: np.ndarray) -> float:
        folds = stratified_kfold_indices(y, n_folds, seed)
        correct = 0
        for test_idx in folds:
            mask = np.ones(len(y), dtype=bool)
            mask[test_idx] = False
            X_tr, y_tr = X[mask], y[mask]
            mean = X_tr.mean(axis=0)
            std = X_tr.std(axis=0)
            std[std < 1e-12] = 1.0
            fit = svm_fit((X_tr - mean) / std, y_tr, c=c, seed=seed)
            pred = fit.predict((X[test_idx] - mean) / std)
            correct += int(np.sum(pred == y[test_idx]))
        return correct / len(y)

    return scorer


def sbs_select(X: np.ndarray, y: np.ndarray, k: int,
               scorer: Scorer | None = None) -> SelectionResult:
    """Greedy backward elimination down to exactly k features."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or len(X) != len(y):
        raise DimensionMismatch("X must be [n, d] with one label per row")
    n_features = X.shape[1]
    if k < 1:
        raise SchemaError("k must be at least 1")
    if k > n_features:
        raise SchemaError(f"k={k} exceeds {n_features} features")
    if len(np.unique(y)) < 2:
        raise SingleClassData("need both classes for selection")
    if scorer is None:
        scorer = make_cv_svm_scorer()

    kept = list(range(n_features))
    trace: list[tuple[int, float]] = []
    while len(kept) > k:
        best_score = -np.inf
        best_pos = -1
        for pos in range(len(kept)):
            candidate = kept[:pos] + kept[pos + 1:]
            score = scorer(X[:, candidate], y)
            # strict improvement required so ties go to the lowest index
            if score > best_score:
                best_score = score
                best_pos = pos
        trace.append((kept[best_pos], best_score))
        del kept[best_pos]
    return SelectionResult(selected_indices=tuple(kept), removal_trace=tuple(trace))


def select_if_needed(X: np.ndarray, y: np.ndarray, k: int = SELECTION_TARGET,
                     scorer: Scorer | None = None) -> SelectionResult:
    """SBS when the dimension exceeds k, identity otherwise."""
    n_features = np.asarray(X).shape[1]
    if n_features <= k:
        return identity_selection(n_features)
    return sbs_select(X, y, k, scorer=scorer)


def apply_selection(x: Sequence[float] | np.ndarray, result: SelectionResult) -> np.ndarray:
    """Project a vector (or matrix rows) onto the selected indices."""
    arr = np.asarray(x, dtype=float)
    dim = arr.shape[-1]
    if dim != result.original_dim:
        raise DimensionMismatch(
            f"vector of dimension {dim} does not match selection over "
            f"{result.original_dim} features")
    return arr[..., list(result.selected_indices)]
