"""Batch command-line interface.

Subcommands evaluate states, compute scalograms, reconstruct signals, and run
the verification suites.  Delimited outputs (CSV with 17-significant-digit
fields, compact JSON) are byte-deterministic for identical configurations; the
--plot flag additionally renders a figure next to each data file.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure,
4 malformed input data.  SU11_THREADS caps the per-job thread pool.
"""

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import algebra, groups, morse, states, verify, wavelets
from .errors import (
    DomainError,
    IndexOutOfRange,
    InputDataError,
    InvalidDegree,
    InvalidGroupElement,
    InvalidLabel,
    InvalidParameter,
    Su11Error,
    UnknownGenerator,
)

_CONFIG_ERRORS = (
    InvalidLabel,
    InvalidDegree,
    InvalidParameter,
    IndexOutOfRange,
    InvalidGroupElement,
    UnknownGenerator,
    DomainError,
    ValueError,
    KeyError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INPUT = 4


def _fmt(v):
    return f"{v:.17g}"


def parse_grid(text):
    """'start:stop:count' (linear) or 'log:start:stop:count' (geometric)."""
    parts = text.split(":")
    logspace = False
    if parts and parts[0] == "log":
        logspace = True
        parts = parts[1:]
    if len(parts) != 3:
        raise ValueError(f"grid spec must be start:stop:count, got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if count < 2:
        raise ValueError("grid needs at least 2 points")
    if logspace:
        if start <= 0 or stop <= start:
            raise ValueError("log grid needs 0 < start < stop")
        return np.geomspace(start, stop, count)
    if stop <= start:
        raise ValueError("grid needs start < stop")
    return np.linspace(start, stop, count)


def parse_pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def parse_segment(text):
    """'x0,y0:x1,y1:count' -> complex samples along the segment."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"segment spec must be x0,y0:x1,y1:count, got {text!r}")
    p0 = parse_pair(parts[0])
    p1 = parse_pair(parts[1])
    count = int(parts[2])
    if count < 2:
        raise ValueError("segment needs at least 2 points")
    t = np.linspace(0.0, 1.0, count)
    return complex(*p0) * (1 - t) + complex(*p1) * t


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _samples_csv(header, columns):
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _samples_json(header, columns):
    rows = [dict(zip(header, (float(v) for v in row))) for row in zip(*columns)]
    return json.dumps(rows, separators=(",", ":")) + "\n"


def _emit_samples(args, header, columns, plot_title, xlabel):
    if args.format == "json":
        _write_text(args.out, _samples_json(header, columns))
    else:
        _write_text(args.out, _samples_csv(header, columns))
    if getattr(args, "plot", False):
        if args.out is None:
            raise ValueError("--plot needs --out to name the figure file")
        from . import plotting

        plotting.plot_samples(
            args.out + ".png", columns[0], columns[-2], columns[-1], xlabel, plot_title
        )


def _two_k_label(args):
    return algebra.RepLabel(args.two_k)


def cmd_basis(args):
    label = _two_k_label(args)
    if args.m < 0:
        raise InvalidDegree(f"basis index must be nonnegative, got {args.m}")
    y = parse_grid(args.y_grid)
    vals = states.basis_halfline(label.k, args.m)(y)
    _emit_samples(args, ["y", "re", "im"], [y, vals.real, vals.imag],
                  f"basis state m={args.m}, 2k={args.two_k}", "y")
    return EXIT_OK


def cmd_coherent(args):
    label = _two_k_label(args)
    k = label.k
    if (args.zeta is None) == (args.affine is None):
        raise ValueError("exactly one of --zeta or --affine is required")
    if args.zeta is not None:
        zeta = complex(*parse_pair(args.zeta))
        phase = 1.0 + 0.0j
        title = f"coherent state zeta={zeta}, 2k={args.two_k}"
    else:
        m0 = groups.AffineElement(*parse_pair(args.affine))
        zeta = groups.affine_to_zeta(m0)
        phase = ((1 + zeta) / (1 + zeta.conjugate())) ** k
        title = f"affine coherent state (a,b)=({m0.a},{m0.b}), 2k={args.two_k}"

    if args.realization == "halfline":
        y = parse_grid(args.y_grid)
        if args.affine is not None:
            vals = states.affine_cs_halfline(k, m0)(y)
        else:
            vals = states.coherent_halfline(k, zeta)(y)
        _emit_samples(args, ["y", "re", "im"], [y, vals.real, vals.imag], title, "y")
        return EXIT_OK
    if args.realization == "disk":
        z = parse_segment(args.z_grid)
        vals = phase * states.coherent_disk(k, zeta)(z)
        _emit_samples(args, ["z_re", "z_im", "re", "im"],
                      [z.real, z.imag, vals.real, vals.imag], title, "Re z")
        return EXIT_OK
    w = parse_segment(args.w_grid)
    vals = phase * states.coherent_halfplane(k, zeta)(w)
    _emit_samples(args, ["w_re", "w_im", "re", "im"],
                  [w.real, w.imag, vals.real, vals.imag], title, "Re w")
    return EXIT_OK


def cmd_morse(args):
    y = parse_grid(args.y_grid)
    if args.affine is not None:
        m0 = groups.AffineElement(*parse_pair(args.affine))
    else:
        m0 = groups.AffineElement(1.0, 0.0)
    vals = morse.morse_family(args.s, m0)(y)
    _emit_samples(args, ["y", "re", "im"], [y, vals.real, vals.imag],
                  f"morse family s={args.s}, (a,b)=({m0.a},{m0.b})", "y")
    return EXIT_OK


def read_signal_csv(path):
    """Sampled half-line signal: header y,re,im; strictly increasing positive y."""
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise InputDataError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].replace(" ", "").lower() != "y,re,im":
        raise InputDataError("signal file must start with the header 'y,re,im'")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise InputDataError(f"malformed row: {ln!r}")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise InputDataError(f"non-numeric row: {ln!r}") from exc
    if len(rows) < 4:
        raise InputDataError("signal needs at least 4 samples")
    data = np.array(rows)
    y = data[:, 0]
    if np.any(y <= 0) or np.any(np.diff(y) <= 0):
        raise InputDataError("sample points must be positive and strictly increasing")
    return y, data[:, 1] + 1j * data[:, 2]


def signal_function(y, values, k):
    """Cubic interpolation on log y; clamped to zero outside the sampled range."""
    from scipy.interpolate import CubicSpline

    ly = np.log(y)
    sp_re = CubicSpline(ly, values.real, extrapolate=False)
    sp_im = CubicSpline(ly, values.imag, extrapolate=False)
    warnings.warn(
        "signal is clamped to zero outside the sampled range", stacklevel=2
    )

    def f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            lt = np.log(np.where(t > 0, t, 1.0))
        re = sp_re(lt)
        im = sp_im(lt)
        out = np.where(np.isnan(re), 0.0, re) + 1j * np.where(np.isnan(im), 0.0, im)
        return np.where(t > 0, out, 0.0)

    return states.HalfLineFunction(
        k, f, origin_power=0.0, decay_rate=0.0, osc_rate=0.0,
        support=(float(y[0]), float(y[-1])), label="sampled signal",
    )


def _grid_spec(args):
    a_min, a_max, n_a = wavelets.DEFAULT_GRID.a_min, wavelets.DEFAULT_GRID.a_max, wavelets.DEFAULT_GRID.n_a
    b_min, b_max, n_b = wavelets.DEFAULT_GRID.b_min, wavelets.DEFAULT_GRID.b_max, wavelets.DEFAULT_GRID.n_b
    if args.a_grid:
        parts = args.a_grid.split(":")
        if len(parts) != 3:
            raise ValueError("--a-grid must be min:max:count")
        a_min, a_max, n_a = float(parts[0]), float(parts[1]), int(parts[2])
    if args.b_grid:
        parts = args.b_grid.split(":")
        if len(parts) != 3:
            raise ValueError("--b-grid must be min:max:count")
        b_min, b_max, n_b = float(parts[0]), float(parts[1]), int(parts[2])
    return wavelets.GridSpec(a_min, a_max, n_a, b_min, b_max, n_b)


def _workers():
    try:
        return max(1, int(os.environ.get("SU11_THREADS", "1")))
    except ValueError:
        return 1


def _scheme(args):
    scheme = verify.VerifyConfig(quad_tol=args.quad_tol).scheme()
    return scheme


def cmd_scalogram(args):
    label = _two_k_label(args)
    y, values = read_signal_csv(args.input)
    psi = signal_function(y, values, label.k)
    w = wavelets.MotherWavelet.canonical(label.k, args.mother_m)
    spec = _grid_spec(args)
    grid = wavelets.analyze(psi, w, spec, _scheme(args), workers=_workers())
    payload = {
        "meta": {
            "two_k": label.two_k,
            "mother_m": args.mother_m,
            "grid": {
                "a_min": spec.a_min, "a_max": spec.a_max, "n_a": spec.n_a,
                "b_min": spec.b_min, "b_max": spec.b_max, "n_b": spec.n_b,
            },
        },
        "cells": [
            {
                "a": float(grid.a[i]),
                "b": float(grid.b[j]),
                "re": float(grid.values[i, j].real),
                "im": float(grid.values[i, j].imag),
                "flag": "quad" if grid.flags[i, j] else "",
            }
            for i in range(spec.n_a)
            for j in range(spec.n_b)
        ],
    }
    _write_text(args.out, json.dumps(payload, separators=(",", ":")) + "\n")
    if args.plot:
        if args.out is None:
            raise ValueError("--plot needs --out to name the figure file")
        from . import plotting

        plotting.plot_scalogram(args.out + ".png", grid)
    return EXIT_OK


def load_coefficient_json(path, two_k):
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise InputDataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputDataError(f"not valid JSON: {exc}") from exc
    try:
        meta = payload["meta"]
        if int(meta["two_k"]) != two_k:
            raise InvalidLabel(
                f"coefficient file has two_k={meta['two_k']}, flag says {two_k}"
            )
        g = meta["grid"]
        spec = wavelets.GridSpec(g["a_min"], g["a_max"], g["n_a"], g["b_min"], g["b_max"], g["n_b"])
        cells = payload["cells"]
        if len(cells) != spec.n_a * spec.n_b:
            raise InputDataError(f"expected {spec.n_a * spec.n_b} cells, found {len(cells)}")
        values = np.empty((spec.n_a, spec.n_b), dtype=complex)
        flags = np.zeros((spec.n_a, spec.n_b), dtype=np.uint8)
        idx = 0
        for i in range(spec.n_a):
            for j in range(spec.n_b):
                c = cells[idx]
                values[i, j] = complex(c["re"], c["im"])
                flags[i, j] = 1 if c.get("flag") else 0
                idx += 1
        mother_m = int(meta.get("mother_m", 0))
    except (KeyError, TypeError) as exc:
        raise InputDataError(f"coefficient file missing field: {exc}") from exc
    a, b, a_measure, b_measure = wavelets._cell_measures(spec)
    grid = wavelets.CoefficientGrid(
        two_k, a, b, values, a_measure, b_measure, flags, np.zeros(spec.n_a), spec
    )
    return grid, mother_m


def cmd_reconstruct(args):
    label = _two_k_label(args)
    grid, mother_m = load_coefficient_json(args.input, label.two_k)
    w = wavelets.MotherWavelet.canonical(label.k, mother_m)
    result = wavelets.synthesize(grid, w, scheme=_scheme(args))
    y = parse_grid(args.y_grid)
    vals = np.asarray(result.function(y))
    _write_text(args.out, _samples_csv(["y", "re", "im"], [y, vals.real, vals.imag]))
    report = {
        "two_k": label.two_k,
        "constant": result.constant,
        "energy": result.energy,
        "boundary_energy_fraction": result.boundary_energy_fraction,
        "est_rel_error": result.est_rel_error,
    }
    ref = None
    if args.reference:
        ry, rvals = read_signal_csv(args.reference)
        ref_fn = signal_function(ry, rvals, label.k)
        report["rel_l2_error_vs_reference"] = wavelets.rel_l2_error(
            label.k, result.function, ref_fn, _scheme(args)
        )
        ref = (ry, rvals.real)
    _write_text(args.report, json.dumps(report, separators=(",", ":")) + "\n")
    if args.plot:
        if args.out is None:
            raise ValueError("--plot needs --out to name the figure file")
        from . import plotting

        plotting.plot_reconstruction(args.out + ".png", y, vals.real, vals.imag, ref)
    return EXIT_OK


def cmd_verify(args):
    config = verify.VerifyConfig(
        quad_tol=args.quad_tol, tail_tol=args.tail_tol, proj_tol=args.proj_tol
    )
    try:
        checks = verify.run_suite(args.suite, config)
    except KeyError as exc:
        raise ValueError(str(exc)) from exc
    payload = {"suite": args.suite, "checks": [c.as_dict() for c in checks]}
    _write_text(args.out, json.dumps(payload, separators=(",", ":")) + "\n")
    if args.plot:
        if args.out is None:
            raise ValueError("--plot needs --out to name the figure file")
        from . import plotting

        plotting.plot_verify_report(args.out + ".png", checks, title=f"suite: {args.suite}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERICAL


def build_parser():
    p = argparse.ArgumentParser(
        prog="su11wav",
        description="Coherent states and affine wavelet analysis on the half-line.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grids=("y",)):
        sp.add_argument("--two-k", type=int, required=True,
                        help="representation label as the integer 2k (k >= 1)")
        if "y" in grids:
            sp.add_argument("--y-grid", default="0.01:10:1000",
                            help="start:stop:count or log:start:stop:count")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--plot", action="store_true",
                        help="also render a PNG figure next to --out")

    sp = sub.add_parser("basis", help="evaluate a canonical basis state")
    common(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(fn=cmd_basis)

    sp = sub.add_parser("coherent", help="evaluate a coherent state")
    common(sp)
    sp.add_argument("--zeta", default=None, help="re,im of the disk label")
    sp.add_argument("--affine", default=None, help="a,b of the affine label")
    sp.add_argument("--realization", choices=("halfline", "disk", "halfplane"),
                    default="halfline")
    sp.add_argument("--z-grid", default="0,0:0.9,0:200", help="segment x0,y0:x1,y1:count")
    sp.add_argument("--w-grid", default="0.2,0:3,0:200", help="segment x0,y0:x1,y1:count")
    sp.set_defaults(fn=cmd_coherent)

    sp = sub.add_parser("morse", help="evaluate a Morse-family state (k = 1)")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--affine", default=None, help="a,b (default 1,0)")
    sp.add_argument("--y-grid", default="0.01:10:1000")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default=None)
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(fn=cmd_morse)

    sp = sub.add_parser("scalogram", help="wavelet coefficients of a sampled signal")
    sp.add_argument("--two-k", type=int, required=True)
    sp.add_argument("--input", required=True, help="signal CSV with header y,re,im")
    sp.add_argument("--mother-m", type=int, default=0,
                    help="canonical-basis index of the mother wavelet")
    sp.add_argument("--a-grid", default=None, help="min:max:count (geometric)")
    sp.add_argument("--b-grid", default=None, help="min:max:count (uniform)")
    sp.add_argument("--quad-tol", type=float, default=1e-10)
    sp.add_argument("--out", default=None)
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(fn=cmd_scalogram)

    sp = sub.add_parser("reconstruct", help="rebuild a signal from coefficients")
    sp.add_argument("--two-k", type=int, required=True)
    sp.add_argument("--input", required=True, help="coefficient JSON")
    sp.add_argument("--y-grid", default="0.01:10:1000")
    sp.add_argument("--reference", default=None, help="signal CSV to compare against")
    sp.add_argument("--quad-tol", type=float, default=1e-10)
    sp.add_argument("--out", default=None, help="reconstruction CSV")
    sp.add_argument("--report", default=None, help="error-report JSON (default stdout)")
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(fn=cmd_reconstruct)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True,
                    help=f"one of {sorted(verify.SUITES)} or 'all'")
    sp.add_argument("--quad-tol", type=float, default=1e-10)
    sp.add_argument("--tail-tol", type=float, default=1e-14)
    sp.add_argument("--proj-tol", type=float, default=1e-8)
    sp.add_argument("--out", default=None)
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(fn=cmd_verify)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Su11Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
