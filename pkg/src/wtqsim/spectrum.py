"""Charge-basis diagonalization of the effective two-mode Hamiltonian."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .network import effective_two_mode, offsets_for_flux, reduce
from .units import charging_energy_matrix_ghz

MAX_DIM = 40000
AMBIGUITY = 0.05


class ConfigurationError(ValueError):
    pass


class SpectrumError(ArithmeticError):
    """Eigensolver failure; carries a condition estimate of the matrix."""

    def __init__(self, msg, condition=None):
        self.condition = condition
        super().__init__(msg if condition is None else f"{msg} (condition number ~ {condition:.3g})")


@dataclass(frozen=True)
class ChargeBasisConfig:
    ncut1: int = 10
    ncut2: int = 10
    n_levels: int = 12

    def __post_init__(self):
        if self.ncut1 < 3 or self.ncut2 < 3:
            raise ConfigurationError(f"charge cutoffs must be >= 3, got ({self.ncut1}, {self.ncut2})")
        if self.dim > MAX_DIM:
            raise ConfigurationError(f"basis dimension {self.dim} exceeds {MAX_DIM}")

    @property
    def dim(self):
        return (2 * self.ncut1 + 1) * (2 * self.ncut2 + 1)

    @classmethod
    def uniform(cls, ncut, n_levels=12):
        return cls(ncut, ncut, n_levels)


def charge_operator(ncut):
    return np.diag(np.arange(-ncut, ncut + 1, dtype=float))


def _raise(ncut):
    # |n> -> |n+1>
    return np.diag(np.ones(2 * ncut), -1)


def cos_operator(ncut, theta=0.0):
    """Matrix of cos(phi + theta) on the charge ladder."""
    up = _raise(ncut)
    return 0.5 * (np.exp(1j * theta) * up + np.exp(-1j * theta) * up.T)


def sin_operator(ncut, theta=0.0):
    """Matrix of sin(phi + theta) on the charge ladder."""
    up = _raise(ncut)
    return (np.exp(1j * theta) * up - np.exp(-1j * theta) * up.T) / 2j


def assemble_hamiltonian(ec, ej1, e2, theta1, theta2, ncut1, ncut2):
    """Raw two-mode matrix for an E_C matrix (GHz); any cutoff >= 1."""
    n1, n2 = charge_operator(ncut1), charge_operator(ncut2)
    i1, i2 = np.eye(2 * ncut1 + 1), np.eye(2 * ncut2 + 1)
    h = 4.0 * (ec[0, 0] * np.kron(n1 @ n1, i2) + 2.0 * ec[0, 1] * np.kron(n1, n2)
               + ec[1, 1] * np.kron(i1, n2 @ n2))
    h = h - ej1 * np.kron(cos_operator(ncut1, theta1), i2) - e2 * np.kron(i1, cos_operator(ncut2, theta2))
    return h


def build_hamiltonian(spec, cfg=None):
    """H/h in GHz on the product charge basis, mode 1 as the slow index."""
    cfg = cfg or ChargeBasisConfig()
    ec = charging_energy_matrix_ghz(spec.Cmat)
    return assemble_hamiltonian(ec, spec.EJ1, spec.E2, spec.theta1, spec.theta2, cfg.ncut1, cfg.ncut2)


def diagonalize(h, n_levels=None):
    """Lowest ``n_levels`` eigenpairs of a Hermitian matrix, ascending."""
    top = h.shape[0] - 1 if n_levels is None else min(n_levels, h.shape[0]) - 1
    try:
        w, v = scipy.linalg.eigh(h, subset_by_index=(0, top))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectrumError(f"Hermitian eigensolver failed: {exc}", np.linalg.cond(h)) from exc
    if not np.all(np.isfinite(w)):
        raise SpectrumError("eigensolver returned non-finite levels", np.linalg.cond(h))
    return w, v


def exact_levels(spec, cfg=None):
    """Sorted eigenvalues (GHz) of the two-mode Hamiltonian."""
    cfg = cfg or ChargeBasisConfig()
    h = build_hamiltonian(spec, cfg)
    try:
        w = scipy.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(f"Hermitian eigensolver failed: {exc}", np.linalg.cond(h)) from exc
    return w


@dataclass
class SpectrumResult:
    """Labelled transition frequencies at one flux point (GHz)."""

    f01: float
    f12: float
    f02: float
    f10: float
    anharmonicity: float
    levels: np.ndarray
    confidences: dict
    ambiguous: bool = False
    f10_candidates: tuple = ()
    indices: dict = field(default_factory=dict)
    phix: float | None = None
    vectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def f02_over_2(self):
        return 0.5 * self.f02


def _single_mode_states(ec, ej, theta, ncut, count):
    n = charge_operator(ncut)
    h = 4.0 * ec * n @ n - ej * cos_operator(ncut, theta)
    _, v = scipy.linalg.eigh(h, subset_by_index=(0, count - 1))
    return v


def trial_states(spec, cfg):
    """Uncoupled product states |q s> for (q, s) in (0,0), (1,0), (2,0), (0,1).

    Built with the off-diagonal charging energy set to zero.
    """
    ec = charging_energy_matrix_ghz(spec.Cmat)
    v1 = _single_mode_states(ec[0, 0], spec.EJ1, spec.theta1, cfg.ncut1, 3)
    v2 = _single_mode_states(ec[1, 1], spec.E2, spec.theta2, cfg.ncut2, 2)
    return {label: np.kron(v1[:, q], v2[:, s])
            for label, (q, s) in {"00": (0, 0), "10": (1, 0), "20": (2, 0), "01": (0, 1)}.items()}


def assign_levels(levels, vectors, spec, cfg=None):
    """Label eigenlevels by overlap with uncoupled trial states.

    Each trial state takes the eigenvector of largest overlap. If the runner
    up is within 5% of the winner the assignment is flagged ambiguous and,
    for the SQUID excitation, both candidate frequencies are returned.
    """
    cfg = cfg or ChargeBasisConfig()
    if len(levels) < 6:
        raise SpectrumError(f"need at least 6 levels for assignment, got {len(levels)}")
    trials = trial_states(spec, cfg)
    idx, conf = {}, {}
    ambiguous = False
    candidates = ()
    for label, psi in trials.items():
        ov = np.abs(vectors.conj().T @ psi) ** 2
        order = np.argsort(ov)[::-1]
        best, second = order[0], order[1]
        idx[label] = int(best)
        conf[label] = float(ov[best])
        if ov[second] >= (1.0 - AMBIGUITY) * ov[best]:
            ambiguous = True
            if label == "01":
                candidates = (float(levels[best] - levels[0]), float(levels[second] - levels[0]))
    e = levels
    g = e[idx["00"]]
    f01 = float(e[idx["10"]] - g)
    f12 = float(e[idx["20"]] - e[idx["10"]])
    f10 = float(e[idx["01"]] - g)
    return SpectrumResult(f01=f01, f12=f12, f02=f01 + f12, f10=f10, anharmonicity=f12 - f01,
                          levels=np.asarray(levels), confidences=conf, ambiguous=ambiguous,
                          f10_candidates=candidates, indices=idx, vectors=vectors)


def solve_spectrum(spec, cfg=None, keep_vectors=True):
    cfg = cfg or ChargeBasisConfig()
    h = build_hamiltonian(spec, cfg)
    w, v = diagonalize(h, cfg.n_levels)
    res = assign_levels(w, v, spec, cfg)
    res.phix = spec.offsets.phix
    if not keep_vectors:
        res.vectors = None
    return res


def spectrum_at_flux(params, net, flux, cfg=None, keep_vectors=False):
    """SpectrumResult at reduced flux ``flux`` in units of the flux quantum."""
    offsets = offsets_for_flux(net, 2.0 * math.pi * flux, params)
    spec = effective_two_mode(params, net, offsets)
    return solve_spectrum(spec, cfg, keep_vectors=keep_vectors)


@dataclass
class SpectrumCurve:
    flux: np.ndarray
    results: list
    tunability: float
    anharmonicity_variation: float
    method: str = "exact"

    def column(self, name):
        return np.array([getattr(r, name) for r in self.results])

    @property
    def f01(self):
        return self.column("f01")

    @property
    def f12(self):
        return self.column("f12")

    @property
    def f10(self):
        return self.column("f10")

    @property
    def anharmonicity(self):
        return self.column("anharmonicity")


def _check_grid(flux):
    flux = np.asarray(flux, dtype=float)
    if flux.ndim != 1 or flux.size == 0:
        raise ConfigurationError("flux grid must be a non-empty 1-d sequence")
    if np.any(np.abs(flux) > 1.0):
        raise ConfigurationError("flux grid must lie within [-1, 1] flux quanta")
    return flux


def sweep_flux(params, bias, flux, cfg=None):
    """Exact spectrum over a flux grid plus the sweet-spot figures of merit."""
    cfg = cfg or ChargeBasisConfig()
    flux = _check_grid(flux)
    net = reduce(params, bias)
    results = [spectrum_at_flux(params, net, x, cfg) for x in flux]
    top = spectrum_at_flux(params, net, 0.0, cfg)
    bottom = spectrum_at_flux(params, net, 0.5, cfg)
    return SpectrumCurve(flux=flux, results=results,
                         tunability=top.f01 - bottom.f01,
                         anharmonicity_variation=abs(top.anharmonicity) - abs(bottom.anharmonicity))
