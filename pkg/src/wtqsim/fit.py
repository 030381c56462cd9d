"""Least-squares extraction of circuit parameters from f01 and f02/2 spectroscopy."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares

from .network import effective_two_mode, phase_offsets
from .spectrum import ChargeBasisConfig, solve_spectrum
from .units import FLUX_QUANTUM, MILLI, PICO, josephson_energy_ghz

PARAMETERS = ("Ic1", "Ic2", "alphaJ", "C1p", "C2p", "Cc", "M_total", "flux_offset")
MIN_ROWS = 5
MIN_SPAN = 0.3


class DatasetError(ValueError):
    pass


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectroscopyDataset:
    """Spectroscopy rows. ``x`` is the coil current in mA (``kind="ib_ma"``)
    or the flux in flux quanta (``kind="flux_phi0"``); f02_over_2 may hold NaN.
    """

    x: np.ndarray
    f01: np.ndarray
    f02_over_2: np.ndarray | None = None
    weight: np.ndarray | None = None
    kind: str = "ib_ma"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        f01 = np.asarray(self.f01, dtype=float)
        f02 = np.full_like(f01, np.nan) if self.f02_over_2 is None else np.asarray(self.f02_over_2, dtype=float)
        w = np.ones_like(f01) if self.weight is None else np.asarray(self.weight, dtype=float)
        if not (x.shape == f01.shape == f02.shape == w.shape) or x.ndim != 1:
            raise DatasetError("dataset columns must be 1-d and of equal length")
        if self.kind not in ("ib_ma", "flux_phi0"):
            raise DatasetError(f"unknown abscissa kind {self.kind!r}")
        if x.size < MIN_ROWS:
            raise DatasetError(f"need at least {MIN_ROWS} rows for an identifiable fit, got {x.size}")
        if np.any(~(f01 > 0)) or np.any(f02[~np.isnan(f02)] <= 0):
            raise DatasetError("frequencies must be positive")
        if np.any(w < 0):
            raise DatasetError("weights must be non-negative")
        for name, value in (("x", x), ("f01", f01), ("f02_over_2", f02), ("weight", w)):
            object.__setattr__(self, name, value)

    def __len__(self):
        return self.x.size

    def flux_span(self, M_total):
        """Covered range in flux quanta for mutual inductance M_total (pH)."""
        span = float(np.ptp(self.x))
        return span if self.kind == "flux_phi0" else span * MILLI * M_total * PICO / FLUX_QUANTUM


@dataclass(frozen=True)
class FitProblem:
    """Starting point, free-parameter mask and bounds.

    ``M_total`` in pH, ``flux_offset`` in the dataset's abscissa units.
    Bounds default to a factor of two around the start (offset: +-1 period).
    """

    params: object
    M_total: float = 1.0
    flux_offset: float = 0.0
    free: tuple = ("Ic1", "Ic2", "alphaJ")
    bounds: dict = field(default_factory=dict)
    ncut_fit: int = 8
    ncut_final: int = 12
    max_nfev: int = 200
    tol: float = 1e-10
    seed: int = 0

    def start(self):
        p = self.params
        return {"Ic1": p.Ic1, "Ic2": p.Ic2, "alphaJ": p.alphaJ, "C1p": p.C1p, "C2p": p.C2p,
                "Cc": p.Cc, "M_total": self.M_total, "flux_offset": self.flux_offset}


@dataclass
class FitResult:
    values: dict
    stderr: dict
    rms_mhz: float
    rms_mhz_fit: float
    converged: bool
    message: str
    nfev: int
    params: object
    M_total: float
    flux_offset: float
    free: tuple
    seed: int = 0

    def report(self):
        lines = [f"converged: {self.converged} ({self.message})",
                 f"function evaluations: {self.nfev}",
                 f"residual rms: {self.rms_mhz:.6g} MHz"]
        for name in PARAMETERS:
            v = self.values[name]
            tag = f" +- {self.stderr[name]:.3g}" if name in self.stderr else " (fixed)"
            lines.append(f"{name}: {v:.9g}{tag}")
        return "\n".join(lines)


def to_flux(x, M_total, flux_offset, kind="ib_ma"):
    """Abscissa to flux quanta."""
    x = np.asarray(x, dtype=float) - flux_offset
    if kind == "flux_phi0":
        return x
    return x * MILLI * M_total * PICO / FLUX_QUANTUM


def _spec_at(params, phix):
    # gauge-fixed offsets: only the SQUID flux enters the spectrum
    ej2 = josephson_energy_ghz(params.Ic2)
    ej3 = josephson_energy_ghz(params.Ic3)
    offsets = phase_offsets(np.array([0.0, 0.5 * phix, -0.5 * phix]), (ej3 - ej2) / (ej2 + ej3))
    return effective_two_mode(params, None, offsets)


def predict_spectroscopy(params, M_total, flux_offset, x, cfg=None, kind="ib_ma"):
    """Exact (f01, f02/2) in GHz on the abscissa grid ``x``."""
    cfg = cfg or ChargeBasisConfig(8, 8, 8)
    flux = to_flux(x, M_total, flux_offset, kind)
    f01 = np.empty(flux.size)
    f02h = np.empty(flux.size)
    cache = {}
    for i, fx in enumerate(flux):
        # the spectrum is even and periodic in flux
        key = round(abs(fx - round(fx)), 15)
        if key not in cache:
            r = solve_spectrum(_spec_at(params, 2.0 * math.pi * key), cfg, keep_vectors=False)
            cache[key] = (r.f01, r.f02_over_2)
        f01[i], f02h[i] = cache[key]
    return f01, f02h


def _apply(problem, values):
    p = problem.params
    params = replace(p, Ic1=values["Ic1"], Ic2=values["Ic2"], Ic3=values["alphaJ"] * values["Ic2"],
                     alphaJ=values["alphaJ"], C1p=values["C1p"], C2p=values["C2p"], Cc=values["Cc"])
    return params, values["M_total"], values["flux_offset"]


def _bounds(problem, start):
    lo, hi = [], []
    for name in problem.free:
        if name in problem.bounds:
            a, b = problem.bounds[name]
        elif name == "flux_offset":
            a, b = start[name] - 3.0, start[name] + 3.0
        else:
            a, b = 0.5 * start[name], 2.0 * start[name]
        if not a < b:
            raise FitError(f"empty bounds for {name}: ({a}, {b})")
        lo.append(a)
        hi.append(b)
    return np.array(lo), np.array(hi)


def _residuals(values, data, cfg):
    params, m, off = values
    f01, f02h = predict_spectroscopy(params, m, off, data.x, cfg, data.kind)
    sw = np.sqrt(data.weight)
    r = [(f01 - data.f01) * 1e3 * sw]
    mask = ~np.isnan(data.f02_over_2)
    if mask.any():
        r.append((f02h[mask] - data.f02_over_2[mask]) * 1e3 * sw[mask])
    return np.concatenate(r)


def fit_spectroscopy(data, problem):
    """Trust-region least squares over the free parameters.

    Residuals are in MHz. Offsets are optimized in absolute units, all
    other parameters relative to their starting values.
    """
    free = tuple(problem.free)
    if not free:
        raise FitError("no free parameters")
    unknown = set(free) - set(PARAMETERS)
    if unknown:
        raise FitError(f"unknown fit parameters: {sorted(unknown)}")
    if data.kind == "ib_ma" and "M_total" not in free:
        span = data.flux_span(problem.M_total)
        if span < MIN_SPAN:
            raise DatasetError(f"data span {span:.3g} flux quanta < {MIN_SPAN}: not identifiable")
    elif data.kind == "flux_phi0" and data.flux_span(1.0) < MIN_SPAN:
        raise DatasetError(f"data span below {MIN_SPAN} flux quanta: not identifiable")

    start = problem.start()
    lo, hi = _bounds(problem, start)
    scale = np.array([1.0 if n == "flux_offset" else start[n] for n in free])
    cfg = ChargeBasisConfig(problem.ncut_fit, problem.ncut_fit, 8)

    def unpack(z):
        values = dict(start)
        values.update({n: float(v) for n, v in zip(free, z * scale)})
        return values

    def fun(z):
        return _residuals(_apply(problem, unpack(z)), data, cfg)

    z0 = np.array([start[n] for n in free]) / scale
    sol = least_squares(fun, z0, bounds=(lo / scale, hi / scale), method="trf",
                        ftol=problem.tol, xtol=problem.tol, gtol=problem.tol,
                        max_nfev=problem.max_nfev, x_scale="jac")
    values = unpack(sol.x)
    m = sol.fun.size
    dof = max(m - len(free), 1)
    s2 = float(sol.fun @ sol.fun) / dof
    stderr = {}
    try:
        cov = np.linalg.inv(sol.jac.T @ sol.jac) * s2
        for i, n in enumerate(free):
            stderr[n] = float(math.sqrt(max(cov[i, i], 0.0)) * scale[i])
    except np.linalg.LinAlgError:
        stderr = {n: math.inf for n in free}

    params, mt, off = _apply(problem, values)
    final_cfg = ChargeBasisConfig(problem.ncut_final, problem.ncut_final, 8)
    res_final = _residuals((params, mt, off), data, final_cfg)
    return FitResult(
        values=values, stderr=stderr,
        rms_mhz=float(np.sqrt(np.mean(res_final**2))),
        rms_mhz_fit=float(np.sqrt(np.mean(sol.fun**2))),
        converged=bool(sol.status > 0), message=str(sol.message), nfev=int(sol.nfev),
        params=params, M_total=mt, flux_offset=off, free=free, seed=problem.seed,
    )


def synthetic_dataset(params, M_total=1.0, flux_offset=0.0, x=None, noise_mhz=0.0, seed=0,
                      kind="ib_ma", with_f02=True, cfg=None):
    """Exact-model spectroscopy with optional Gaussian noise (for round trips)."""
    x = np.linspace(-2.5, 2.5, 41) if x is None else np.asarray(x, dtype=float)
    f01, f02h = predict_spectroscopy(params, M_total, flux_offset, x,
                                     cfg or ChargeBasisConfig(12, 12, 8), kind)
    rng = np.random.default_rng(seed)
    f01 = f01 + rng.normal(0.0, noise_mhz * 1e-3, x.size)
    f02h = f02h + rng.normal(0.0, noise_mhz * 1e-3, x.size) if with_f02 else None
    return SpectroscopyDataset(x=x, f01=f01, f02_over_2=f02h, kind=kind)
