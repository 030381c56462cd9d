"""Command-line entry point: ``wtqsim {spectrum,coherence,fit,yield,selfcheck}``.

Exit codes: 0 success, 1 usage or config error, 2 numeric failure,
3 selfcheck or fit failure.
"""
from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
import warnings
from dataclasses import replace

import numpy as np

from . import __version__
from .analytic import analytic_sweep
from .decoherence import coherence_sweep
from .experiment import bias_sweep
from .fit import DatasetError, FitError, FitProblem, fit_spectroscopy, predict_spectroscopy
from .io import ConfigError, load_config, plot_svg, read_dataset, write_csv
from .lattice_yield import YieldModel, closed_form_yield, monte_carlo_yield
from .network import current_for_flux, reduce
from .params import ValidationError, validate
from .spectrum import ChargeBasisConfig, ConfigurationError, spectrum_at_flux
from . import selfcheck

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_FAILED = 0, 1, 2, 3
TWO_PI = 2.0 * math.pi


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _methods(args, cfg):
    method = args.method or cfg.sweep.method
    if method not in ("analytic", "exact", "both"):
        raise ConfigError(f"method must be analytic, exact or both, got {method!r}")
    return ["exact", "analytic"] if method == "both" else [method]


def _need_circuit(cfg):
    if cfg.circuit is None:
        raise ConfigError(f"{cfg.path}: a [circuit] section is required")
    validate(cfg.circuit, cfg.bias, cfg.env)


def _outdir(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _flux_grid(cfg):
    grid = cfg.sweep.grid()
    if cfg.sweep.kind == "ib":
        net = reduce(cfg.circuit, cfg.bias)
        per_ma = current_for_flux(net, TWO_PI)
        return grid / per_ma
    return grid


def cmd_spectrum(args, cfg):
    _need_circuit(cfg)
    flux = _flux_grid(cfg)
    net = reduce(cfg.circuit, cfg.bias)
    ncut = ChargeBasisConfig.uniform(cfg.sweep.ncut)
    rows, footer, series = [], [], {}
    for method in _methods(args, cfg):
        if method == "exact":
            res = [spectrum_at_flux(cfg.circuit, net, float(x), ncut) for x in flux]
            f01 = np.array([r.f01 for r in res])
            f12 = np.array([r.f12 for r in res])
            f10 = np.array([r.f10 for r in res])
            top = spectrum_at_flux(cfg.circuit, net, 0.0, ncut)
            bot = spectrum_at_flux(cfg.circuit, net, 0.5, ncut)
            a0, a1 = top.anharmonicity, bot.anharmonicity
            d = top.f01 - bot.f01
        else:
            f01, alpha, f10 = analytic_sweep(cfg.circuit, flux)
            f12 = f01 + alpha
            (t01,), (ta,), _ = analytic_sweep(cfg.circuit, [0.0])
            (b01,), (ba,), _ = analytic_sweep(cfg.circuit, [0.5])
            a0, a1, d = ta, ba, t01 - b01
        for i, x in enumerate(flux):
            rows.append((x, f01[i], f12[i], 0.5 * (f01[i] + f12[i]), f10[i], (f12[i] - f01[i]) * 1e3, method))
        footer.append(f"{method} tunability_mhz: {d * 1e3:.6g}")
        footer.append(f"{method} anharmonicity_variation_mhz: {(abs(a0) - abs(a1)) * 1e3:.6g}")
        series[f"f01 {method}"] = f01
    out = _outdir(args)
    cols = ["flux_phi0", "f01_ghz", "f12_ghz", "f02half_ghz", "f10_ghz", "anharm_mhz", "method"]
    write_csv(os.path.join(out, "spectrum.csv"), cols, rows, cfg, args.seed, footer)
    if args.svg:
        plot_svg(os.path.join(out, "spectrum.svg"), flux, series, "flux (Phi0)", "f01 (GHz)")
    for line in footer:
        print(line)
    return EXIT_OK


def _scan_biases(cfg):
    rs = cfg.scan.get("r_ohm", [cfg.bias.R])
    ts = cfg.scan.get("tbath_k", [cfg.bias.Tbath])
    return [replace(cfg.bias, R=r, Tbath=t) for r, t in itertools.product(rs, ts)]


def cmd_coherence(args, cfg):
    _need_circuit(cfg)
    ncut = ChargeBasisConfig.uniform(cfg.sweep.ncut)
    rows, series = [], {}
    grid = cfg.sweep.grid()
    for bias in _scan_biases(cfg):
        for method in _methods(args, cfg):
            if cfg.sweep.kind == "flux":
                curve = coherence_sweep(cfg.circuit, bias, cfg.env, grid, method, ncut)
                results = curve.results
            else:
                results = bias_sweep(cfg.circuit, bias, cfg.env, grid, method, ncut)
            for x, r in zip(grid, results):
                rows.append((x, r.T1, r.Tphi_flux, r.Tphi_disp, r.Tphi, r.T2, method, bias.R, bias.Tbath))
            series[f"{method} R={bias.R:g} T={bias.Tbath:g}"] = [r.Tphi for r in results]
    out = _outdir(args)
    cols = ["flux_phi0_or_ib_ma", "t1_us", "tphi_flux_us", "tphi_disp_us", "tphi_total_us", "t2_us",
            "method", "r_ohm", "tbath_k"]
    write_csv(os.path.join(out, "coherence.csv"), cols, rows, cfg, args.seed)
    if args.svg:
        xlabel = "flux (Phi0)" if cfg.sweep.kind == "flux" else "IB (mA)"
        plot_svg(os.path.join(out, "coherence.svg"), grid, series, xlabel, "Tphi (us)")
    print(f"wrote {len(rows)} rows")
    return EXIT_OK


def cmd_fit(args, cfg):
    _need_circuit(cfg)
    path = args.data or cfg.fit.get("data")
    if not path:
        raise ConfigError("no dataset given (use --data or [fit] data)")
    if args.data is None and not os.path.isabs(path):
        path = os.path.join(os.path.dirname(cfg.path), path)
    data = read_dataset(path)
    f = cfg.fit
    free = tuple(s.strip() for s in f.get("free", "Ic1, Ic2, alphaJ").split(",") if s.strip())
    problem = FitProblem(params=cfg.circuit, M_total=float(f.get("m_total_ph", cfg.bias.M_total)),
                         flux_offset=float(f.get("flux_offset", 0.0)), free=free,
                         ncut_fit=int(f.get("ncut_fit", 8)), ncut_final=int(f.get("ncut_final", 12)),
                         max_nfev=int(f.get("max_nfev", 200)), seed=args.seed)
    result = fit_spectroscopy(data, problem)
    out = _outdir(args)
    report = result.report()
    with open(os.path.join(out, "fit_report.txt"), "w", encoding="utf-8", newline="") as fh:
        fh.write(report + "\n")
    f01, f02h = predict_spectroscopy(result.params, result.M_total, result.flux_offset, data.x,
                                     ChargeBasisConfig.uniform(problem.ncut_final), data.kind)
    rows = zip(data.x, data.f01, f01, data.f02_over_2, f02h)
    write_csv(os.path.join(out, "fit_curve.csv"),
              [data.kind, "f01_data_ghz", "f01_fit_ghz", "f02half_data_ghz", "f02half_fit_ghz"],
              rows, cfg, args.seed)
    print(report)
    return EXIT_OK if result.converged else EXIT_FAILED


def cmd_yield(args, cfg):
    g = cfg.yield_grid
    try:
        ns = [int(n) for n in g.get("n_qubits", [1000])]
        delta_f = g.get("delta_f_mhz", [26.0])[0]
        sigma_f = g.get("sigma_f_mhz", [18.0])[0]
        taus = g.get("tunability_mhz", [50.0, 99.0])
        samples = int(g.get("samples", [100000])[0])
        shards = int(g.get("shards", [8])[0])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{cfg.path}: [yield] {exc}") from None
    rows = []
    for n, tau in itertools.product(ns, taus):
        model = YieldModel(n, delta_f, sigma_f, tau, samples, args.seed, shards)
        p, se = monte_carlo_yield(model)
        rows.append((n, delta_f, sigma_f, tau, closed_form_yield(model), p, se, samples))
        print(f"N={n} tunability={tau:g} MHz: closed form {rows[-1][4]:.6f}, monte carlo {p:.6f} +- {se:.2g}")
    out = _outdir(args)
    cols = ["n_qubits", "delta_f_mhz", "sigma_f_mhz", "tunability_mhz", "closed_form", "monte_carlo",
            "mc_stderr", "samples"]
    write_csv(os.path.join(out, "yield.csv"), cols, rows, cfg, args.seed)
    return EXIT_OK


def cmd_selfcheck(args, cfg=None):
    _, failed, _ = selfcheck.run(perturb_rt=args.perturb_rt, stream=sys.stdout)
    return EXIT_OK if failed == 0 else EXIT_FAILED


COMMANDS = {"spectrum": cmd_spectrum, "coherence": cmd_coherence, "fit": cmd_fit,
            "yield": cmd_yield, "selfcheck": cmd_selfcheck}


def build_parser():
    parser = _Parser(prog="wtqsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wtqsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("spectrum", "coherence", "fit", "yield"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=name != "yield", help="run configuration file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="random seed (default from config)")
        p.add_argument("--method", choices=("analytic", "exact", "both"), default=None)
        p.add_argument("--svg", action="store_true", help="also write an SVG plot")
        if name == "fit":
            p.add_argument("--data", help="spectroscopy CSV")
    p = sub.add_parser("selfcheck")
    p.add_argument("--perturb-rt", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"wtqsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "selfcheck":
            return cmd_selfcheck(args)
        if args.config:
            cfg = load_config(args.config)
        else:
            from .io import parse_config
            cfg = parse_config("", "<defaults>")
        if args.seed is None:
            args.seed = cfg.seed
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args, cfg)
    except (ConfigError, ValidationError, DatasetError, ConfigurationError, FileNotFoundError) as exc:
        print(f"wtqsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FitError as exc:
        print(f"wtqsim: fit failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ArithmeticError as exc:
        print(f"wtqsim: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
