"""Input checks shared by the estimator wrappers."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array, check_consistent_length, column_or_1d


def check_abscissa(X):
    """Single-feature design matrix as a float 1-d array (flux or current)."""
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single feature column, got {X.shape[1]}")
        X = X[:, 0]
    return X


def check_flux(X):
    x = check_abscissa(X)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("flux values must lie within [-1, 1] flux quanta")
    return x


def check_targets(X, y, sample_weight=None):
    """Split y into (f01, f02/2 or None) and validate lengths and weights."""
    y = check_array(y, ensure_2d=False, dtype=np.float64, ensure_all_finite="allow-nan")
    if y.ndim == 1:
        f01, f02 = y, None
    elif y.shape[1] == 1:
        f01, f02 = y[:, 0], None
    elif y.shape[1] == 2:
        f01, f02 = y[:, 0], y[:, 1]
    else:
        raise ValueError("y must hold f01 or (f01, f02/2) columns")
    if np.any(np.isnan(f01)):
        raise ValueError("f01 targets must be finite")
    if sample_weight is not None:
        sample_weight = column_or_1d(sample_weight).astype(float)
        check_consistent_length(X, f01, sample_weight)
    else:
        check_consistent_length(X, f01)
    return f01, f02, sample_weight
