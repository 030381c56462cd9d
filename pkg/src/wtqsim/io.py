"""Run configuration files, deterministic CSV output, dataset ingestion and SVG plots.

Config files are INI-style with the unit in every key name, e.g.::

    [circuit]
    ic1_na = 26
    alpha_j = 3.5
    c1p_ff = 50
"""
from __future__ import annotations

import configparser
import csv
import hashlib
import io as _io
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .params import BiasCircuitParams, EnvironmentParams, ValidationError, WtqCircuitParams, violations

CIRCUIT_KEYS = {"ic1_na": "Ic1", "ic2_na": "Ic2", "ic3_na": "Ic3", "alpha_j": "alphaJ",
                "c1p_ff": "C1p", "c2p_ff": "C2p", "cc_ff": "Cc",
                "cj1_ff": "CJ1", "cj2_ff": "CJ2", "cj3_ff": "CJ3"}
BIAS_KEYS = {"l1_ph": "L1", "l2_ph": "L2", "lc_mh": "Lc", "m1_ph": "M1", "m2_ph": "M2",
             "r_ohm": "R", "tbath_k": "Tbath"}
ENV_KEYS = {"t1_cap_us": "T1_cap", "t2_cap_ratio": "T2_cap_ratio", "kappa_mhz": "kappa",
            "chi_mhz": "chi", "f_r_ghz": "f_r", "te_base_mk": "Te_base",
            "theta_mk_per_ma2": "Theta", "tm_base_k": "Tm_base", "tphi_d0_us": "Tphi_D0",
            "a_phi_sqrt_uphi0": "A_phi_sqrt", "f_ir_hz": "f_IR", "t_ref_us": "t_ref",
            "echo_factor": "echo_factor"}
SWEEP_KEYS = {"kind", "start", "stop", "points", "ncut", "method"}
SCAN_KEYS = {"r_ohm", "tbath_k"}
YIELD_KEYS = {"n_qubits", "delta_f_mhz", "sigma_f_mhz", "tunability_mhz", "samples", "shards"}
FIT_KEYS = {"free", "m_total_ph", "flux_offset", "abscissa", "ncut_fit", "ncut_final", "max_nfev",
            "noise_mhz", "data"}
# record field -> (section, key) for diagnostics; couplings point at the mutuals
FIELD_KEYS = {name: (section, key)
              for section, keys in (("circuit", CIRCUIT_KEYS), ("bias", BIAS_KEYS), ("environment", ENV_KEYS))
              for key, name in keys.items()}
FIELD_KEYS.update({"k1": ("bias", "m1_ph"), "k2": ("bias", "m2_ph")})
KNOWN = {"circuit": set(CIRCUIT_KEYS), "bias": set(BIAS_KEYS), "environment": set(ENV_KEYS),
         "sweep": SWEEP_KEYS, "scan": SCAN_KEYS, "yield": YIELD_KEYS, "fit": FIT_KEYS,
         "run": {"seed", "name"}}


class ConfigError(ValueError):
    """Config problem with file/line/field context."""


@dataclass
class SweepSpec:
    kind: str = "flux"
    start: float = 0.0
    stop: float = 0.5
    points: int = 51
    ncut: int = 10
    method: str = "exact"

    def grid(self):
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class RunConfig:
    circuit: WtqCircuitParams | None = None
    bias: BiasCircuitParams = field(default_factory=BiasCircuitParams)
    env: EnvironmentParams = field(default_factory=EnvironmentParams)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    scan: dict = field(default_factory=dict)
    yield_grid: dict = field(default_factory=dict)
    fit: dict = field(default_factory=dict)
    seed: int = 0
    name: str = "run"
    text: str = ""
    path: str = "<string>"

    @property
    def digest(self):
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()[:16]


def _line_of(text, section, key=None):
    cur = None
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            cur = m.group(1).strip().lower()
            if key is None and cur == section:
                return i
            continue
        if cur == section and key is not None and re.match(rf"{re.escape(key)}\s*[=:]", line, re.I):
            return i
    return None


def _where(cfg, section, key=None):
    line = _line_of(cfg.text, section, key)
    loc = f"{cfg.path}:{line}" if line else cfg.path
    return f"{loc}: [{section}]" + (f" {key}" if key else "")


def _float(cfg, parser, section, key):
    raw = parser.get(section, key)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{_where(cfg, section, key)}: expected a number, got {raw!r}") from None


def _floats(cfg, parser, section, key):
    raw = parser.get(section, key)
    try:
        return [float(v) for v in raw.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{_where(cfg, section, key)}: expected a list of numbers, got {raw!r}") from None


def _int(cfg, parser, section, key):
    value = _float(cfg, parser, section, key)
    if value != int(value):
        raise ConfigError(f"{_where(cfg, section, key)}: expected an integer, got {value}")
    return int(value)


def _record(cfg, parser, section, keys):
    kwargs = {}
    for key, name in keys.items():
        if parser.has_option(section, key):
            kwargs[name] = _float(cfg, parser, section, key)
    return kwargs


def parse_config(text, path="<string>"):
    """Parse config text into a :class:`RunConfig`; raises :class:`ConfigError`."""
    cfg = RunConfig(text=text, path=path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    for section in parser.sections():
        if section not in KNOWN:
            raise ConfigError(f"{_where(cfg, section)}: unknown section")
        for key in parser.options(section):
            if key not in KNOWN[section]:
                raise ConfigError(f"{_where(cfg, section, key)}: unknown key")

    if parser.has_section("circuit"):
        kw = _record(cfg, parser, "circuit", CIRCUIT_KEYS)
        missing = [k for k in ("ic1_na", "ic2_na", "c1p_ff", "c2p_ff", "cc_ff")
                   if not parser.has_option("circuit", k)]
        if "Ic3" not in kw and "alphaJ" not in kw:
            missing.append("ic3_na or alpha_j")
        if missing:
            raise ConfigError(f"{_where(cfg, 'circuit')}: missing {', '.join(missing)}")
        if "Ic3" not in kw:
            cj = {k: kw.pop(k) for k in ("CJ1", "CJ2", "CJ3") if k in kw}
            cfg.circuit = WtqCircuitParams.from_asymmetry(**kw, **cj)
        else:
            cfg.circuit = WtqCircuitParams(**kw)
    if parser.has_section("bias"):
        cfg.bias = BiasCircuitParams(**_record(cfg, parser, "bias", BIAS_KEYS))
    if parser.has_section("environment"):
        cfg.env = EnvironmentParams(**_record(cfg, parser, "environment", ENV_KEYS))

    if parser.has_section("sweep"):
        s = parser["sweep"]
        sweep = SweepSpec()
        sweep.kind = s.get("kind", sweep.kind).strip()
        if sweep.kind not in ("flux", "ib"):
            raise ConfigError(f"{_where(cfg, 'sweep', 'kind')}: must be 'flux' or 'ib'")
        for key in ("start", "stop"):
            if key in s:
                setattr(sweep, key, _float(cfg, parser, "sweep", key))
        for key in ("points", "ncut"):
            if key in s:
                setattr(sweep, key, _int(cfg, parser, "sweep", key))
        sweep.method = s.get("method", sweep.method).strip()
        if sweep.points < 2:
            raise ConfigError(f"{_where(cfg, 'sweep', 'points')}: a grid needs at least 2 points")
        cfg.sweep = sweep
    if parser.has_section("scan"):
        cfg.scan = {k: _floats(cfg, parser, "scan", k) for k in parser.options("scan")}
    if parser.has_section("yield"):
        cfg.yield_grid = {k: _floats(cfg, parser, "yield", k) for k in parser.options("yield")}
    if parser.has_section("fit"):
        f = parser["fit"]
        cfg.fit = {k: f[k].strip() for k in parser.options("fit")}
    if parser.has_section("run"):
        if parser.has_option("run", "seed"):
            cfg.seed = _int(cfg, parser, "run", "seed")
        cfg.name = parser.get("run", "name", fallback=cfg.name).strip()

    found = violations(cfg.circuit, cfg.bias, cfg.env)
    if found:
        raise ConfigError("; ".join(f"{_where(cfg, *FIELD_KEYS[name])}: {msg}" for name, msg in found))
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    try:
        return parse_config(text, str(path))
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def fmt(value):
    """12 significant digits; inf/nan spelled out."""
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def write_csv(path, columns, rows, config=None, seed=0, footer=None):
    """CSV with a comment header (version, config hash, seed); returns the text."""
    buf = _io.StringIO()
    buf.write(f"# wtqsim {__version__}\n")
    buf.write(f"# config_sha256: {config.digest if config is not None else 'none'}\n")
    buf.write(f"# seed: {seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    for line in footer or ():
        buf.write(f"# {line}\n")
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def read_dataset(path):
    """Spectroscopy CSV -> SpectroscopyDataset; errors name the offending rows."""
    from .fit import DatasetError, SpectroscopyDataset

    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines()]
    except OSError as exc:
        raise DatasetError(f"{path}: cannot read dataset ({exc.strerror})") from None
    body = [(i, ln) for i, ln in enumerate(lines, 1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise DatasetError(f"{path}: empty dataset")
    header = [h.strip() for h in body[0][1].split(",")]
    if "ib_ma" in header:
        kind, xcol = "ib_ma", "ib_ma"
    elif "flux_phi0" in header:
        kind, xcol = "flux_phi0", "flux_phi0"
    else:
        raise DatasetError(f"{path}:{body[0][0]}: header needs an ib_ma or flux_phi0 column")
    if "f01_ghz" not in header:
        raise DatasetError(f"{path}:{body[0][0]}: header needs an f01_ghz column")
    cols = {name: [] for name in (xcol, "f01_ghz", "f02half_ghz", "weight")}
    problems = []
    for lineno, text in body[1:]:
        cells = [c.strip() for c in text.split(",")]
        if len(cells) != len(header):
            problems.append(f"row at line {lineno}: expected {len(header)} fields, got {len(cells)}")
            continue
        rec = dict(zip(header, cells))
        try:
            x = float(rec[xcol])
            f01 = float(rec["f01_ghz"])
            f02 = float(rec["f02half_ghz"]) if rec.get("f02half_ghz") else math.nan
            w = float(rec["weight"]) if rec.get("weight") else 1.0
        except ValueError as exc:
            problems.append(f"row at line {lineno}: {exc}")
            continue
        if not f01 > 0:
            problems.append(f"row at line {lineno}: f01_ghz must be positive")
            continue
        for name, v in zip(cols, (x, f01, f02, w)):
            cols[name].append(v)
    if problems:
        raise DatasetError(f"{path}: " + "; ".join(problems))
    return SpectroscopyDataset(x=np.array(cols[xcol]), f01=np.array(cols["f01_ghz"]),
                               f02_over_2=np.array(cols["f02half_ghz"]),
                               weight=np.array(cols["weight"]), kind=kind)


def write_dataset(path, data, seed=0):
    rows = zip(data.x, data.f01, data.f02_over_2, data.weight)
    return write_csv(path, [data.kind, "f01_ghz", "f02half_ghz", "weight"], rows, seed=seed)


def plot_svg(path, x, series, xlabel, ylabel):
    """Minimal line chart; ``series`` maps label -> y values."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "wtqsim", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, y in series.items():
            ax.plot(x, y, label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if len(series) > 1:
            ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
