"""Estimator-style wrappers: flux -> spectral features, and spectroscopy regression."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_abscissa, check_flux, check_targets
from .analytic import analytic_sweep
from .fit import FitProblem, SpectroscopyDataset, fit_spectroscopy, predict_spectroscopy
from .network import reduce
from .params import DEFAULT_BIAS, WtqCircuitParams, validate
from .spectrum import ChargeBasisConfig, spectrum_at_flux

FEATURES = ("f01", "f12", "f10", "anharmonicity")


class WTQSpectrum(TransformerMixin, BaseEstimator):
    """Map flux (in flux quanta) to (f01, f12, f10, anharmonicity) in GHz.

    Stateless apart from validation: ``fit`` checks the circuit and builds
    the reduced network.
    """

    def __init__(self, Ic1=26.0, Ic2=26.0, alphaJ=3.5, C1p=50.0, C2p=20.0, Cc=20.0,
                 CJ1=1.0, CJ2=1.0, CJ3=None, method="exact", ncut=10):
        self.Ic1 = Ic1
        self.Ic2 = Ic2
        self.alphaJ = alphaJ
        self.C1p = C1p
        self.C2p = C2p
        self.Cc = Cc
        self.CJ1 = CJ1
        self.CJ2 = CJ2
        self.CJ3 = CJ3
        self.method = method
        self.ncut = ncut

    def _circuit(self):
        return WtqCircuitParams.from_asymmetry(self.Ic1, self.Ic2, self.alphaJ, self.C1p, self.C2p,
                                               self.Cc, self.CJ1, self.CJ2, self.CJ3)

    def fit(self, X=None, y=None):
        if self.method not in ("exact", "analytic"):
            raise ValueError(f"method must be 'exact' or 'analytic', got {self.method!r}")
        self.params_ = self._circuit()
        validate(self.params_, DEFAULT_BIAS)
        self.net_ = reduce(self.params_, DEFAULT_BIAS)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        flux = check_flux(X)
        if self.method == "analytic":
            f01, alpha, f10 = analytic_sweep(self.params_, flux)
            return np.column_stack([f01, f01 + alpha, f10, alpha])
        cfg = ChargeBasisConfig.uniform(self.ncut)
        rows = []
        for x in flux:
            r = spectrum_at_flux(self.params_, self.net_, float(x), cfg)
            rows.append([r.f01, r.f12, r.f10, r.anharmonicity])
        return np.array(rows).reshape(-1, len(FEATURES))

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)


class SpectroscopyRegressor(RegressorMixin, BaseEstimator):
    """Fit circuit parameters to f01 (and optionally f02/2) versus coil current.

    ``X`` is the coil current in mA (or flux in flux quanta with
    ``abscissa="flux_phi0"``); ``y`` is f01 or an (n, 2) array of
    (f01, f02/2) in GHz, NaN allowed in the second column.
    """

    def __init__(self, Ic1=26.0, Ic2=26.0, alphaJ=3.5, C1p=50.0, C2p=20.0, Cc=20.0,
                 M_total=1.0, flux_offset=0.0, free=("Ic1", "Ic2", "alphaJ"),
                 abscissa="ib_ma", ncut_fit=8, ncut_final=12, max_nfev=200):
        self.Ic1 = Ic1
        self.Ic2 = Ic2
        self.alphaJ = alphaJ
        self.C1p = C1p
        self.C2p = C2p
        self.Cc = Cc
        self.M_total = M_total
        self.flux_offset = flux_offset
        self.free = free
        self.abscissa = abscissa
        self.ncut_fit = ncut_fit
        self.ncut_final = ncut_final
        self.max_nfev = max_nfev

    def fit(self, X, y, sample_weight=None):
        x = check_abscissa(X)
        f01, f02, w = check_targets(x, y, sample_weight)
        data = SpectroscopyDataset(x=x, f01=f01, f02_over_2=f02, weight=w, kind=self.abscissa)
        start = WtqCircuitParams.from_asymmetry(self.Ic1, self.Ic2, self.alphaJ, self.C1p, self.C2p, self.Cc)
        problem = FitProblem(params=start, M_total=self.M_total, flux_offset=self.flux_offset,
                             free=tuple(self.free), ncut_fit=self.ncut_fit,
                             ncut_final=self.ncut_final, max_nfev=self.max_nfev)
        self.result_ = fit_spectroscopy(data, problem)
        self.params_ = self.result_.params
        self.n_outputs_ = 1 if f02 is None else 2
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        x = check_abscissa(X)
        f01, f02h = predict_spectroscopy(self.params_, self.result_.M_total, self.result_.flux_offset,
                                         x, ChargeBasisConfig.uniform(self.ncut_final), self.abscissa)
        return f01 if self.n_outputs_ == 1 else np.column_stack([f01, f02h])

    def score(self, X, y, sample_weight=None):
        """Negative residual RMS in MHz over f01 (higher is better)."""
        f01 = check_targets(check_abscissa(X), y, sample_weight)[0]
        pred = self.predict(X)
        pred = pred if pred.ndim == 1 else pred[:, 0]
        return -math.sqrt(float(np.mean((pred - f01) ** 2))) * 1e3
