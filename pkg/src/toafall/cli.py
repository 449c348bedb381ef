"""Command-line interface.

Subcommands: table1, fig1, pdf, moments, sample, regimes.
Exit codes: 0 success, 2 validation error, 3 convergence failure.
All floats are serialized with 17 significant digits, so identical inputs
(and seed) produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import experiments, sampling
from .core import GaussianTrajectory, PhysicalParams, classify_regime
from .distribution import ToaDensity, compute_moments, normalization
from .errors import (BracketFailureError, DegenerateKinematicsError,
                     InsufficientSamplesError, InvalidForNonzeroV0Error,
                     NotConvergedError)
from .quadrature import IntegrationConfig

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NOT_CONVERGED = 3

_CONFIG_KEYS = {
    "mass_kg": "mass",
    "sigma0_m": "sigma0",
    "v0_mps": "v0",
    "g_mps2": "g",
    "hbar_Js": "hbar",
    "x_m": "x",
}


def _fmt(value):
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _jsonable(value):
    if isinstance(value, float):
        # round-trips exactly; keeps the JSON payload at full precision
        return float(format(value, ".17g"))
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_rows(path, fmt, fieldnames, rows, *, meta=None):
    """Serialize dict rows as CSV (with '# key: value' headers) or JSON."""
    if fmt == "json":
        doc = {"meta": _jsonable(meta or {}), "rows": [_jsonable(r) for r in rows]}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        for key in sorted(meta or {}):
            buf.write(f"# {key}: {_fmt((meta or {})[key])}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in fieldnames])
        text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scenario_parent():
    p = argparse.ArgumentParser(add_help=False)
    grp = p.add_argument_group("scenario")
    grp.add_argument("--config", metavar="PATH",
                     help="JSON file with keys mass_kg, sigma0_m, v0_mps, "
                          "g_mps2, hbar_Js, x_m (flags override)")
    grp.add_argument("--mass", type=float, help="particle mass, kg")
    grp.add_argument("--sigma0", type=float, help="initial packet width, m")
    grp.add_argument("--v0", type=float, help="mean initial velocity, m/s")
    grp.add_argument("--g", type=float, help="gravitational acceleration, m/s^2")
    grp.add_argument("--hbar", type=float, help="reduced Planck constant, J s")
    grp.add_argument("--x", type=float, help="detector position, m")
    return p


def _output_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=None,
                   help="quadrature relative tolerance (default 1e-10)")
    return p


def _integration_config(args):
    if getattr(args, "tol", None) is None:
        return None
    return IntegrationConfig(rel_tol=args.tol)


def _scenario(args):
    values = {"mass": experiments.HYDROGEN_MASS_KG,
              "sigma0": experiments.DEFAULT_SIGMA0_M,
              "v0": 0.0, "g": experiments.DEFAULT_G, "x": 0.1}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, val in loaded.items():
            values[_CONFIG_KEYS[key]] = float(val)
    for name in ("mass", "sigma0", "v0", "g", "hbar", "x"):
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    x = values.pop("x")
    params = PhysicalParams(**values)
    return params, x


def _density(params, x):
    return ToaDensity(trajectory=GaussianTrajectory.free_fall(params), x=x)


def _cmd_table1(args):
    cfg = _integration_config(args)
    rows = experiments.run_table1(cfg)
    fields = ["label", "x_m", "g_mps2", "t_c_s", "delta_t_s", "q", "delta",
              "method", "delta_quadrature", "delta_semiclassical",
              "delta_quantum", "normalization"]
    out = []
    for r in rows:
        out.append({
            "label": r.label, "x_m": r.x, "g_mps2": r.g, "t_c_s": r.t_c,
            "delta_t_s": r.delta_t, "q": r.q, "delta": r.delta,
            "method": r.method,
            "delta_quadrature": r.deltas.get("quadrature"),
            "delta_semiclassical": r.deltas.get("semiclassical"),
            "delta_quantum": r.deltas.get("quantum"),
            "normalization": r.normalization,
        })
    meta = {"mass_kg": experiments.HYDROGEN_MASS_KG,
            "sigma0_m": experiments.DEFAULT_SIGMA0_M, "v0_mps": 0.0}
    _write_rows(args.out, args.format, fields, out, meta=meta)
    return EXIT_OK


def _cmd_fig1(args):
    cfg = _integration_config(args)
    points = experiments.run_fig1(args.q_min, args.q_max, args.points, cfg)
    if not any(p.converged for p in points):
        print("error: no sweep point converged", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    fields = ["q", "delta_numeric", "delta_semiclassical", "delta_quantum",
              "tc_over_tau", "sigma0_m", "converged"]
    rows = [{"q": p.q, "delta_numeric": p.delta_numeric,
             "delta_semiclassical": p.delta_semiclassical,
             "delta_quantum": p.delta_quantum, "tc_over_tau": p.tc_over_tau,
             "sigma0_m": p.sigma0, "converged": p.converged}
            for p in points]
    meta = {"sweep_variable": "sigma0", "mass_kg": experiments.HYDROGEN_MASS_KG,
            "g_mps2": experiments.DEFAULT_G, "x_m": 0.1, "v0_mps": 0.0}
    _write_rows(args.out, args.format, fields, rows, meta=meta)
    if args.plot:
        _plot_fig1(points, args.plot)
    return EXIT_OK


def _plot_fig1(points, path):
    try:
        import matplotlib
    except ImportError as exc:
        raise ValueError("--plot requires matplotlib (install extra 'plot')") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    qs = [p.q for p in points]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(qs, [p.delta_numeric for p in points], "r-", label="integrated mean")
    ax.loglog(qs, [p.delta_semiclassical for p in points], "b--", label="q^2/2")
    ax.loglog(qs, [p.delta_quantum for p in points], "g-.", label="sqrt(2/pi) q")
    ax.set_xlabel("quantumness q")
    ax.set_ylabel("relative delay")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _cmd_pdf(args):
    params, x = _scenario(args)
    ts, vals = experiments.pdf_grid(params, x, args.t_min, args.t_max, args.points)
    rows = [{"t_s": float(t), "density_per_s": float(v)} for t, v in zip(ts, vals)]
    meta = {"mass_kg": params.mass, "sigma0_m": params.sigma0, "v0_mps": params.v0,
            "g_mps2": params.g, "x_m": x}
    _write_rows(args.out, args.format, ["t_s", "density_per_s"], rows, meta=meta)
    return EXIT_OK


def _cmd_moments(args):
    params, x = _scenario(args)
    cfg = _integration_config(args)
    moments = compute_moments(_density(params, x), cfg)
    report = classify_regime(params, x)
    row = {"mean_s": moments.mean, "std_s": moments.std, "delta": moments.delta,
           "delta_t_s": moments.delta * report.t_c, "t_c_s": report.t_c,
           "q": report.q, "normalization": moments.normalization,
           "mean_error": moments.mean_error, "std_error": moments.std_error,
           "normalization_error": moments.normalization_error,
           "flags": ";".join(moments.flags)}
    _write_rows(args.out, args.format, list(row), [row],
                meta={"x_m": x, "mass_kg": params.mass, "sigma0_m": params.sigma0,
                      "v0_mps": params.v0, "g_mps2": params.g})
    return EXIT_OK


def _cmd_sample(args):
    params, x = _scenario(args)
    cfg = sampling.SamplerConfig(seed=args.seed, n_samples=args.n,
                                 workers=args.workers)
    if args.method == "longtof":
        batch = sampling.sample_toa_longtof(params, x, cfg)
    else:
        batch = sampling.sample_toa(params, x, cfg)
    d = _density(params, x)
    stats = sampling.estimate_stats(batch, d, _integration_config(args))
    norm = normalization(d, _integration_config(args))
    summary = {"n_draws": batch.n_draws, "n_detected": stats.n,
               "failures": batch.failures, "failure_rate": batch.failure_rate,
               "mean_s": stats.mean, "std_s": stats.std,
               "stderr_mean_s": stats.stderr_mean,
               "ks_statistic": stats.ks_statistic,
               "normalization": norm.value, "seed": batch.seed,
               "method": args.method}
    meta = {"x_m": x, "mass_kg": params.mass, "sigma0_m": params.sigma0,
            "v0_mps": params.v0, "g_mps2": params.g, "seed": args.seed,
            "method": args.method}
    if args.out:
        _write_rows(args.out, args.format, ["toa_s"],
                    [{"toa_s": float(t)} for t in batch.toas], meta=meta)
    _write_rows(None, "json" if args.format == "json" else "csv",
                list(summary), [summary], meta=None if args.out else meta)
    return EXIT_OK


def _cmd_regimes(args):
    params, x = _scenario(args)
    report = classify_regime(params, x)
    row = {"q": report.q, "t_c_s": report.t_c, "regime": report.regime.value,
           "delta_semiclassical": report.delta_semiclassical,
           "delta_quantum": report.delta_quantum,
           "tau_s": params.tau(), "tc_over_tau": report.t_c / params.tau()}
    _write_rows(args.out, args.format, list(row), [row],
                meta={"x_m": x, "mass_kg": params.mass, "sigma0_m": params.sigma0,
                      "v0_mps": params.v0, "g_mps2": params.g})
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toafall",
        description="Arrival-time statistics of free-falling Gaussian wave packets.")
    sub = parser.add_subparsers(dest="command", required=True)
    scenario, output = _scenario_parent(), _output_parent()

    sub.add_parser("table1", parents=[output],
                   help="the three reference drop scenarios").set_defaults(fn=_cmd_table1)

    fig1 = sub.add_parser("fig1", parents=[output],
                          help="relative delay versus quantumness sweep")
    fig1.add_argument("--q-min", type=float, default=0.01)
    fig1.add_argument("--q-max", type=float, default=40.0)
    fig1.add_argument("--points", type=int, default=40)
    fig1.add_argument("--plot", metavar="PATH.svg",
                      help="also write a log-log plot (requires matplotlib)")
    fig1.set_defaults(fn=_cmd_fig1)

    pdf = sub.add_parser("pdf", parents=[scenario, output],
                         help="tabulate the arrival-time density")
    pdf.add_argument("--t-min", type=float, default=0.0)
    pdf.add_argument("--t-max", type=float, required=True)
    pdf.add_argument("--points", type=int, default=512)
    pdf.set_defaults(fn=_cmd_pdf)

    sub.add_parser("moments", parents=[scenario, output],
                   help="quadrature mean/std/delay").set_defaults(fn=_cmd_moments)

    sample = sub.add_parser("sample", parents=[scenario, output],
                            help="seeded Monte Carlo arrival times")
    sample.add_argument("--n", type=int, required=True, help="number of draws")
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--method", choices=("exact", "longtof"), default="exact")
    sample.add_argument("--workers", type=int, default=1)
    sample.set_defaults(fn=_cmd_sample)

    sub.add_parser("regimes", parents=[scenario, output],
                   help="quantumness and regime label").set_defaults(fn=_cmd_regimes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError,
            DegenerateKinematicsError, InvalidForNonzeroV0Error,
            InsufficientSamplesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NotConvergedError, BracketFailureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED


def entry():
    raise SystemExit(main())
