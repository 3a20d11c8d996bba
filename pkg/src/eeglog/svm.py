"""Soft-margin RBF-kernel SVM trained by SMO pairwise optimization.

Platt-style working-set selection with a full error cache; box constraints
are per-sample so class imbalance can be handled with inverse-frequency
weights on C.  Labels are {0, 1} at the API surface, {-1, +1} internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingleClassData

KKT_TOL = 1e-3
_EPS = 1e-8


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * ||a - b||^2) for every row pair."""
    a2 = np.sum(A * A, axis=1)[:, None]
    b2 = np.sum(B * B, axis=1)[None, :]
    d2 = np.maximum(a2 + b2 - 2.0 * A @ B.T, 0.0)
    return np.exp(-gamma * d2)


def scale_gamma(X: np.ndarray) -> float:
    """Default kernel width 1 / (n_features * var(X))."""
    v = float(np.var(X))
    if v < 1e-12:
        v = 1.0
    return 1.0 / (X.shape[1] * v)


@dataclass(frozen=True)
class SVMFit:
    """Fitted dual solution restricted to the support vectors."""

    support_vectors: np.ndarray
    dual_coefficients: np.ndarray  # alpha_i * y_i
    bias: float
    gamma: float
    c: float

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.support_vectors.shape[1]:
            raise DimensionMismatch("feature dimension does not match the fit")
        K = rbf_kernel(X, self.support_vectors, self.gamma)
        return K @ self.dual_coefficients + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Binary {0,1} labels; the boundary itself maps to 0."""
        return (self.decision_function(X) > 0).astype(int)


class _SMO:
    def __init__(self, K, y, c_vec, tol, rng):
        self.K = K
        self.y = y
        self.c_vec = c_vec
        self.tol = tol
        self.rng = rng
        n = len(y)
        self.alpha = np.zeros(n)
        self.b = 0.0
        self.errors = -y.astype(float)  # f == 0 initially

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        K, y, alpha = self.K, self.y, self.alpha
        a1_old, a2_old = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        E1, E2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        C1, C2 = self.c_vec[i1], self.c_vec[i2]
        if s < 0:
            L = max(0.0, a2_old - a1_old)
            H = min(C2, C1 + a2_old - a1_old)
        else:
            L = max(0.0, a1_old + a2_old - C1)
            H = min(C2, a1_old + a2_old)
        if L >= H:
            return False
        k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > _EPS:
            a2 = a2_old + y2 * (E1 - E2) / eta
            a2 = min(max(a2, L), H)
        else:
            # Flat direction: evaluate the dual objective at both ends.
            f1 = y1 * (E1 + self.b) - a1_old * k11 - s * a2_old * k12
            f2 = y2 * (E2 + self.b) - s * a1_old * k12 - a2_old * k22
            L1 = a1_old + s * (a2_old - L)
            H1 = a1_old + s * (a2_old - H)
            Lobj = (L1 * f1 + L * f2 + 0.5 * L1 * L1 * k11
                    + 0.5 * L * L * k22 + s * L * L1 * k12)
            Hobj = (H1 * f1 + H * f2 + 0.5 * H1 * H1 * k11
                    + 0.5 * H * H * k22 + s * H * H1 * k12)
            if Lobj < Hobj - _EPS:
                a2 = L
            elif Lobj > Hobj + _EPS:
                a2 = H
            else:
                a2 = a2_old
        if abs(a2 - a2_old) < _EPS * (a2 + a2_old + _EPS):
            return False
        a1 = a1_old + s * (a2_old - a2)
        d1 = y1 * (a1 - a1_old)
        d2 = y2 * (a2 - a2_old)
        b1 = self.b - E1 - d1 * k11 - d2 * k12
        b2 = self.b - E2 - d1 * k12 - d2 * k22
        if 0.0 < a1 < C1:
            b_new = b1
        elif 0.0 < a2 < C2:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        self.errors += d1 * K[i1] + d2 * K[i2] + (b_new - self.b)
        self.b = b_new
        alpha[i1], alpha[i2] = a1, a2
        return True

    def _second_choice(self, i2: int) -> int:
        non_bound = np.flatnonzero((self.alpha > 0) & (self.alpha < self.c_vec))
        if len(non_bound) > 1:
            E2 = self.errors[i2]
            gaps = np.abs(self.errors[non_bound] - E2)
            return int(non_bound[np.argmax(gaps)])
        return -1

    def _examine(self, i2: int) -> bool:
        y2, a2 = self.y[i2], self.alpha[i2]
        E2 = self.errors[i2]
        r2 = E2 * y2
        if not ((r2 < -self.tol and a2 < self.c_vec[i2])
                or (r2 > self.tol and a2 > 0)):
            return False
        i1 = self._second_choice(i2)
        if i1 >= 0 and self._take_step(i1, i2):
            return True
        non_bound = np.flatnonzero((self.alpha > 0) & (self.alpha < self.c_vec))
        start = self.rng.integers(len(non_bound)) if len(non_bound) else 0
        for k in range(len(non_bound)):
            if self._take_step(int(non_bound[(start + k) % len(non_bound)]), i2):
                return True
        n = len(self.y)
        start = self.rng.integers(n)
        for k in range(n):
            if self._take_step((start + k) % n, i2):
                return True
        return False

    def solve(self, max_passes: int = 200) -> None:
        n = len(self.y)
        examine_all = True
        passes = 0
        while passes < max_passes:
            passes += 1
            changed = 0
            if examine_all:
                idx = range(n)
            else:
                idx = np.flatnonzero((self.alpha > 0) & (self.alpha < self.c_vec))
            for i in idx:
                changed += self._examine(int(i))
            if examine_all:
                if changed == 0:
                    break
                examine_all = False
            elif changed == 0:
                examine_all = True


def svm_fit(X: np.ndarray, y01: np.ndarray, c: float = 1.0,
            gamma: float | None = None, seed: int = 0,
            tol: float = KKT_TOL, balance_classes: bool = True) -> SVMFit:
    """Train a soft-margin RBF SVM on {0,1} labels."""
    X = np.asarray(X, dtype=float)
    y01 = np.asarray(y01, dtype=int)
    if X.ndim != 2 or len(X) != len(y01):
        raise DimensionMismatch("X must be [n, d] with one label per row")
    if not np.all(np.isfinite(X)):
        raise DimensionMismatch("features must be finite")
    classes = np.unique(y01)
    if len(classes) < 2:
        raise SingleClassData("training data holds a single class")
    y = np.where(y01 == 1, 1.0, -1.0)
    if gamma is None:
        gamma = scale_gamma(X)
    n = len(y)
    if balance_classes:
        n_pos = int(np.sum(y01 == 1))
        n_neg = n - n_pos
        w_pos = n / (2.0 * n_pos)
        w_neg = n / (2.0 * n_neg)
        c_vec = np.where(y01 == 1, c * w_pos, c * w_neg)
    else:
        c_vec = np.full(n, c)
    K = rbf_kernel(X, X, gamma)
    smo = _SMO(K, y, c_vec, tol, np.random.default_rng(seed))
    smo.solve()
    sv = smo.alpha > _EPS
    return SVMFit(
        support_vectors=X[sv].copy(),
        dual_coefficients=(smo.alpha * y)[sv].copy(),
        bias=smo.b,
        gamma=gamma,
        c=c,
    )
