"""Command-line front end.

Every command writes plain files: CSV with a ``t,value`` header (``x,...``
for fields) at 17 significant digits, and JSON reports that embed the full
configuration and the package version.  Stochastic commands require
``--seed``; identical arguments give byte-identical output.

Exit codes: 0 success, 1 internal or numerical failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, estimators, fracpde, pipeline, stochastic
from .series import TimeSeries


class UserError(Exception):
    """Bad input from the command line or an input file."""


# --- file helpers -----------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _clean_json(obj):
    if isinstance(obj, dict):
        return {str(k): _clean_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean_json(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_clean_json(obj), sort_keys=True, indent=2) + "\n"


def _write_text(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UserError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_series_csv(path: Path, series: TimeSeries):
    lines = ["t,value"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(series.t, series.values)]
    _write_text(path, "\n".join(lines) + "\n")


def write_field_csv(path: Path, x, columns: dict):
    names = list(columns)
    lines = [",".join(["x"] + names)]
    data = [columns[c] for c in names]
    for i, xi in enumerate(x):
        lines.append(",".join([_fmt(xi)] + [_fmt(col[i]) for col in data]))
    _write_text(path, "\n".join(lines) + "\n")


def read_series_csv(path, fs: float | None = None) -> TimeSeries:
    """Read a one- or two-column CSV; a non-numeric first row is a header.

    With two columns the first is time and sets the sample rate (unless
    ``fs`` is given); a single column is read as samples at ``fs`` (default 1).
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows = [(i + 1, r) for i, r in enumerate(csv.reader(text.splitlines())) if r and any(c.strip() for c in r)]
    if rows:
        try:
            [float(c) for c in rows[0][1]]
        except ValueError:
            rows = rows[1:]
    if not rows:
        raise UserError(f"{path}: empty input")
    width = len(rows[0][1])
    if width not in (1, 2):
        raise UserError(f"{path}: line {rows[0][0]}: expected 1 or 2 columns, got {width}")
    data = np.empty((len(rows), width))
    for j, (lineno, row) in enumerate(rows):
        if len(row) != width:
            raise UserError(f"{path}: line {lineno}: expected {width} columns, got {len(row)}")
        try:
            data[j] = [float(c) for c in row]
        except ValueError:
            raise UserError(f"{path}: line {lineno}: not a number: {','.join(row)!r}") from None
        if not np.all(np.isfinite(data[j])):
            raise UserError(f"{path}: line {lineno}: non-finite value")
    values = data[:, -1]
    t0 = 0.0
    if width == 2 and values.size > 1:
        t = data[:, 0]
        dt = np.diff(t)
        if np.any(dt <= 0) or np.ptp(dt) > 1e-6 * abs(dt.mean()):
            raise UserError(f"{path}: time column must be uniform and increasing")
        t0 = float(t[0])
        if fs is None:
            fs = 1.0 / float(dt.mean())
    try:
        return TimeSeries(values, fs if fs is not None else 1.0, t0)
    except ValueError as exc:
        raise UserError(f"{path}: {exc}") from None


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".json")


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return cfg


def _report(args, body: dict) -> dict:
    return {"command": args.command, "config": _config(args), "version": __version__, **body}


def _emit_report(args, body: dict, path: Path | None):
    text = _dump_json(_report(args, body))
    if path is None:
        sys.stdout.write(text)
    else:
        _write_text(path, text)


def _require_seed(args):
    if args.seed is None:
        raise UserError(f"'{args.command}' is stochastic and needs an explicit --seed")


# --- commands ---------------------------------------------------------------


def cmd_simulate(args):
    _require_seed(args)
    n, fs, seed = args.n, args.fs, args.seed
    if n < 4:
        raise UserError("--n must be at least 4")
    kind = args.kind
    if kind == "onef":
        series = stochastic.powerlaw_noise(args.beta, n, fs, seed)
    elif kind == "white":
        series = TimeSeries(np.random.default_rng(seed).standard_normal(n), fs)
    elif kind == "stable":
        law = stochastic.StableLaw(args.index, args.scale)
        series = TimeSeries(stochastic.sample_stable(law, n, seed), fs)
    elif kind == "fbm":
        series = stochastic.gen_fbm(args.hurst, n, 1.0 / fs, seed)
    elif kind == "fgn":
        series = TimeSeries(stochastic.gen_fgn(args.hurst, n, 1.0 / fs, seed), fs)
    else:  # pragma: no cover - argparse restricts choices
        raise UserError(f"unknown kind {kind}")
    out = Path(args.out)
    write_series_csv(out, series)
    _emit_report(args, {"n": len(series), "fs": series.fs, "output": str(out)}, _sidecar(out))


def _gaussian(x, sigma, centre=0.0):
    return np.exp(-0.5 * ((x - centre) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def _periodic_gaussian(x, sigma, length, centre=0.0):
    # images from neighbouring periods, enough for sigma well below length
    return sum(_gaussian(x, sigma, centre + m * length) for m in range(-3, 4))


def _rel_l2(a, b) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def _solve_frac(args, times):
    n, L, w = args.n_grid, args.length, args.width
    x = -L / 2 + np.arange(n) * (L / n)
    p0 = _gaussian(x, w)
    v0 = np.zeros(n) if args.mu > 1 else None
    problem = fracpde.FracPDEProblem.frac(p0, L, mu=args.mu, s=args.s, gamma=args.gamma, v0=v0)
    with warnings.catch_warnings():
        # recorded in the report instead
        warnings.simplefilter("ignore", fracpde.OutOfRangeExponentWarning)
        snaps = fracpde.solve_frac_diffusion_wave(problem, times)
    reference = None
    errs = []
    for snap in snaps:
        if args.mu == 1 and args.s == 2:
            exact = _periodic_gaussian(x, math.sqrt(w * w + 2 * args.gamma * snap.t), L)
            name = "heat_kernel"
        elif args.mu == 2 and args.s == 2:
            c = math.sqrt(args.gamma)
            exact = 0.5 * (_periodic_gaussian(x, w, L, c * snap.t) + _periodic_gaussian(x, w, L, -c * snap.t))
            name = "dalembert"
        elif args.mu == 1:
            law = stochastic.StableLaw(args.s, (args.gamma * snap.t) ** (1 / args.s))
            kernel = stochastic.stable_pdf(law, x, wrap=True)
            # circular convolution with the initial field
            shift = np.fft.ifftshift
            exact = np.fft.irfft(np.fft.rfft(shift(kernel)) * np.fft.rfft(p0), n=n) * (L / n)
            name = "stable_kernel"
        else:
            continue
        reference = name
        errs.append(_rel_l2(snap.values, exact))
    body = {
        "regime": problem.regime.regime,
        "y": problem.y,
        "warnings": list(problem.warnings),
        "mass": [s.mass for s in snaps],
        "mass_drift": max(abs(s.mass - snaps[0].mass) for s in snaps) if snaps else 0.0,
        "reference": reference,
        "reference_rel_err": errs if reference else None,
    }
    return problem.x, snaps, body


def _solve_lossy(args, times):
    n, L = args.n_grid, args.length
    x = -L / 2 + np.arange(n) * (L / n)
    start = -L / 4
    p0 = np.exp(-0.5 * ((x - start) / args.width) ** 2)
    v0 = fracpde.rightward_velocity(p0, L, args.c0, args.alpha0, args.y)
    problem = fracpde.FracPDEProblem.lossy(p0, v0, L, c0=args.c0, alpha0=args.alpha0, y=args.y)
    snaps = fracpde.solve_lossy_wave(problem, times)
    body = {"y": args.y, "warnings": list(problem.warnings)}
    try:
        fit = fracpde.station_attenuation(problem, start + 50 * problem.dx, start + 150 * problem.dx,
                                          n_times=2048, dt=0.5 * problem.dx / args.c0)
        body["attenuation_fit"] = {"exponent": fit.exponent, "prefactor": fit.prefactor,
                                   "n_frequencies": int(fit.omega.size)}
    except ArithmeticError as exc:
        body["attenuation_fit"] = None
        body["warnings"].append(f"attenuation fit unavailable: {exc}")
    return problem.x, snaps, body


def cmd_solve(args):
    try:
        times = [float(t) for t in args.times.split(",") if t.strip()]
    except ValueError:
        raise UserError(f"--times must be a comma-separated list of numbers, got {args.times!r}") from None
    if not times:
        raise UserError("--times is empty")
    if args.n_grid < 4 or args.n_grid & (args.n_grid - 1):
        raise UserError("--n-grid must be a power of two")
    if args.eq == "frac":
        x, snaps, body = _solve_frac(args, times)
    else:
        x, snaps, body = _solve_lossy(args, times)
    out = Path(args.out)
    write_field_csv(out, x, {f"value_t={_fmt(s.t)}": s.values for s in snaps})
    body["output"] = str(out)
    _emit_report(args, body, _sidecar(out))


def _out_path(args):
    return Path(args.out) if args.out else None


def cmd_estimate(args):
    sig = read_series_csv(args.input, args.fs)
    body = {"n": len(sig)}
    spec = estimators.fit_spectral_slope(estimators.welch_psd(sig))
    body["beta_hat"] = spec.beta_hat
    body["beta_stderr"] = spec.stderr
    body["fit_band"] = list(spec.fit_band)
    for name, fn in (("rs", estimators.hurst_rs), ("dfa", estimators.hurst_dfa)):
        try:
            h = fn(sig)
            body[f"h_{name}"] = h.h
            body[f"h_{name}_ci"] = h.ci
            body[f"h_{name}_saturated"] = h.saturated
            if name == "dfa":
                body["dfa_interpretation"] = h.interpretation
        except ValueError as exc:
            body[f"h_{name}"] = None
            body.setdefault("warnings", []).append(f"{name}: {exc}")
    _emit_report(args, body, _out_path(args))


def cmd_audit(args):
    sig = read_series_csv(args.input, args.fs)
    report = estimators.relation_audit(sig)
    _emit_report(args, report.as_dict(), _out_path(args))


def _noise_level(text):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise UserError(f"--noise-level must be 'auto' or a number, got {text!r}") from None


def _clean_values(args, n):
    if args.clean is None:
        return None
    clean = read_series_csv(args.clean).values
    if clean.size != n:
        raise UserError(f"clean reference has {clean.size} samples, input has {n}")
    return clean


def cmd_denoise(args):
    sig = read_series_csv(args.input, args.fs)
    clean = _clean_values(args, len(sig))
    res = pipeline.denoise(sig, args.beta, noise_level=_noise_level(args.noise_level), clean=clean)
    out = Path(args.out)
    write_series_csv(out, res.denoised)
    body = {"noise_level": res.noise_level, "snr_gain_db": res.snr_gain_db, "output": str(out)}
    _emit_report(args, body, _sidecar(out))


def cmd_pipeline(args):
    sig = read_series_csv(args.input, args.fs)
    clean = _clean_values(args, len(sig))
    res = pipeline.run_inverse(sig, clean=clean, noise_level=_noise_level(args.noise_level),
                               alpha0=args.alpha0, c0=args.c0, n_grid=args.n_grid)
    body = res.as_dict()
    if args.denoised_out:
        path = Path(args.denoised_out)
        write_series_csv(path, res.denoised)
        body["denoised_output"] = str(path)
    _emit_report(args, body, _out_path(args))


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="powerlaw1f", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="synthesize a time series")
    s.add_argument("--kind", required=True, choices=["onef", "white", "stable", "fbm", "fgn"])
    s.add_argument("--n", type=int, default=65536)
    s.add_argument("--fs", type=float, default=1.0)
    s.add_argument("--beta", type=float, default=1.0, help="spectral exponent (onef)")
    s.add_argument("--index", type=float, default=2.0, help="stable index (stable)")
    s.add_argument("--scale", type=float, default=1.0, help="stable scale (stable)")
    s.add_argument("--hurst", type=float, default=0.5, help="Hurst exponent (fbm, fgn)")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True, help="CSV path; a .json sidecar is written next to it")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("solve", help="solve a fractional or lossy wave problem")
    s.add_argument("--eq", required=True, choices=["frac", "lossy"])
    s.add_argument("--n-grid", type=int, default=1024)
    s.add_argument("--length", type=float, default=None, help="domain length (default: 20 frac, n-grid lossy)")
    s.add_argument("--times", default="0.1", help="comma-separated output times")
    s.add_argument("--width", type=float, default=None, help="initial Gaussian width (default 0.5 frac, 1.5 lossy)")
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--s", type=float, default=2.0)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--y", type=float, default=2.0)
    s.add_argument("--alpha0", type=float, default=0.02)
    s.add_argument("--c0", type=float, default=1.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)

    for name, fn, help_ in (
        ("estimate", cmd_estimate, "spectral slope and Hurst exponents of a CSV series"),
        ("audit", cmd_audit, "exponent-relation audit of a CSV series"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--input", required=True)
        s.add_argument("--fs", type=float, default=None)
        s.add_argument("--out", default=None, help="JSON path (default: stdout)")
        s.set_defaults(func=fn)

    s = sub.add_parser("denoise", help="suppress 1/f**beta noise")
    s.add_argument("--input", required=True)
    s.add_argument("--fs", type=float, default=None)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--noise-level", default="auto")
    s.add_argument("--clean", default=None, help="clean reference CSV for the SNR gain")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_denoise)

    s = sub.add_parser("pipeline", help="exponent, denoising, noise index and model")
    s.add_argument("--input", required=True)
    s.add_argument("--fs", type=float, default=None)
    s.add_argument("--noise-level", default="auto")
    s.add_argument("--clean", default=None)
    s.add_argument("--alpha0", type=float, default=None)
    s.add_argument("--c0", type=float, default=1.0)
    s.add_argument("--n-grid", type=int, default=1024)
    s.add_argument("--denoised-out", default=None)
    s.add_argument("--out", default=None, help="JSON path (default: stdout)")
    s.set_defaults(func=cmd_pipeline)
    return p


def _apply_defaults(args):
    if getattr(args, "command", None) == "solve":
        if args.length is None:
            args.length = 20.0 if args.eq == "frac" else float(args.n_grid)
        if args.width is None:
            args.width = 0.5 if args.eq == "frac" else 1.5


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_defaults(args)
    try:
        args.func(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numerical or internal failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
