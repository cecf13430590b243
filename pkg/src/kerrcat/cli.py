"""Command-line interface.

Exit codes: 0 success, 2 invalid configuration, 3 degenerate homodyne
outcome, 4 insufficient Wigner grid coverage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np
from scipy.integrate import quad

from .analysis import find_vacuum_zeros, scan_vacuum
from .coherent import SingleModeState, TwoModeState, state_fidelity
from .errors import DegenerateOutcomeError, DomainError, GridCoverageError
from .kerr import SchemeConfig, kerr_amplitudes, kerr_coefficients, kerr_state
from .phase_space import GridSpec, auto_grid, wigner
from .scheme import (
    double_kerr_state,
    prepare,
    quadrature_density,
    sample_homodyne,
    target_css,
    target_peak_quadrature,
)

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_GRID = 0, 2, 3, 4
CONVENTION = "x = (a + a^dagger)/sqrt(2); coherent |b> centered at (sqrt2 Re b, sqrt2 Im b); angles in radians"


class ConfigError(Exception):
    pass


def _cx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else None


def _pair(text: str) -> tuple[int, int]:
    try:
        k, l = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'k,l', got {text!r}") from None
    return k, l


def _grid(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("expected x_min,x_max,p_min,p_max,nx,np")
    try:
        return GridSpec(*(float(v) for v in parts[:4]), int(parts[4]), int(parts[5]))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _config(args) -> SchemeConfig:
    try:
        return SchemeConfig(args.alpha, args.n, tuple(args.target))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _states(result) -> list[dict]:
    return [{"coeff": _cx(c), "amp": _cx(a)} for c, a in result.state4.terms]


def cmd_coefficients(args):
    if args.n < 1 or not args.alpha > 0:
        raise ConfigError("need --n >= 1 and --alpha > 0")
    kc = kerr_coefficients(args.n)
    amps = kerr_amplitudes(args.alpha, args.n)
    entries = [
        {
            "k": k,
            "c": _cx(c),
            "modulus": abs(c),
            "phase": float(xi),
            "amp": _cx(a),
            "amp_modulus": abs(a),
            "amp_angle": math.atan2(a.imag, a.real),
        }
        for k, (c, xi, a) in enumerate(zip(kc.coeffs, kc.phases, amps), start=1)
    ]
    return {"command": "coefficients", "n": args.n, "alpha": args.alpha, "coefficients": entries}


def cmd_condition(args):
    config = _config(args)
    res = prepare(config, args.x_m)
    target = tuple(config.target_pair)
    dt = res.d[target]
    ordered = sorted(res.d.items(), key=lambda kv: abs(kv[1]), reverse=True)
    return {
        "command": "condition",
        "n": config.n_components,
        "alpha": config.alpha,
        "target": list(target),
        "x_m": res.x_m,
        "density": res.density,
        "d0": _cx(res.d0),
        "vacuum_ratio": abs(res.d0 / dt),
        "d": [
            {"label": [lab.k, lab.l], "value": _cx(v), "modulus": abs(v), "ratio_to_target": abs(v / dt)}
            for lab, v in ordered
        ],
        "fidelity_to_target": state_fidelity(res.state4, target_css(config)),
        "state4": _states(res),
    }


_SCAN_FIELDS = ["alpha", "x_m", "vacuum_ratio", "secondary_ratio", "fidelity", "density"]


def cmd_scan(args):
    config = _config(args)
    if args.steps < 1 or not 0 < args.alpha_from <= args.alpha_to:
        raise ConfigError("need 0 < --from <= --to and --steps >= 1")
    if args.alpha_from < args.alpha_to and args.steps < 2:
        raise ConfigError("a non-degenerate range needs --steps >= 2")
    track = args.fixed_x_m is None
    try:
        points = scan_vacuum(args.alpha_from, args.alpha_to, args.steps, config, track, args.fixed_x_m)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    zeros = find_vacuum_zeros(points, config, track, args.fixed_x_m)
    return {
        "command": "scan",
        "n": config.n_components,
        "target": list(config.target_pair),
        "track_peak": track,
        "points": [
            {**{f: _num(getattr(p, f)) for f in _SCAN_FIELDS}, **({"error": p.error} if p.error else {})}
            for p in points
        ],
        "zeros": [{"alpha": z.alpha, "vacuum_ratio": z.vacuum_ratio, "bracket": list(z.bracket)} for z in zeros],
    }


def _wigner_state(args) -> SingleModeState:
    if args.state == "vacuum":
        return SingleModeState.vacuum()
    config = _config(args)
    if args.state == "kerr":
        return kerr_state(config.alpha, config.n_components)
    if args.state == "target":
        return target_css(config)
    return prepare(config, args.x_m).state4


def cmd_wigner(args):
    state = _wigner_state(args)
    spec = args.grid or auto_grid(state)
    grid = wigner(state, spec)
    return {
        "command": "wigner",
        "state": args.state,
        "convention": CONVENTION,
        "spec": {f: getattr(spec, f) for f in ("x_min", "x_max", "p_min", "p_max", "nx", "np")},
        "layout": "row-major, row = x index",
        "values": grid.values.ravel().tolist(),
    }


def cmd_sample(args):
    if args.count < 1:
        raise ConfigError("--count must be >= 1")
    if not args.window > 0:
        raise ConfigError("--window must be positive")
    if args.state == "vacuum":
        two_mode = TwoModeState.from_terms([(1.0, 0.0, 0.0)])
        x_m = 0.0 if args.x_m is None else args.x_m
    else:
        config = _config(args)
        two_mode = double_kerr_state(config)
        x_m = target_peak_quadrature(config) if args.x_m is None else args.x_m
    samples = sample_homodyne(two_mode, args.seed, args.count)
    inside = int(np.count_nonzero(np.abs(samples - x_m) <= args.window))
    frac = inside / args.count
    expected, _ = quad(lambda x: float(quadrature_density(two_mode, x)[0]), x_m - args.window, x_m + args.window, epsabs=1e-13)
    out = {
        "command": "sample",
        "state": args.state,
        "seed": args.seed,
        "count": args.count,
        "x_m": x_m,
        "window": args.window,
        "mean": float(samples.mean()),
        "variance": float(samples.var()),
        "min": float(samples.min()),
        "max": float(samples.max()),
        "success_fraction": frac,
        "expected_fraction": expected,
        "binomial_sigma": math.sqrt(max(expected * (1 - expected), 0.0) / args.count),
    }
    if args.include_samples:
        out["samples"] = samples.tolist()
    return out


def _csv_text(payload) -> str:
    buf = io.StringIO()
    cmd = payload["command"]
    if cmd == "scan":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_SCAN_FIELDS)
        for p in payload["points"]:
            w.writerow(["" if p[f] is None else repr(p[f]) for f in _SCAN_FIELDS])
        buf.write("# zeros\n")
        w.writerow(["zero_alpha", "vacuum_ratio", "bracket_lo", "bracket_hi"])
        for z in payload["zeros"]:
            w.writerow([repr(z["alpha"]), repr(z["vacuum_ratio"]), repr(z["bracket"][0]), repr(z["bracket"][1])])
    elif cmd == "wigner":
        spec = payload["spec"]
        buf.write(f"# {CONVENTION}\n")
        buf.write("# " + ",".join(f"{k}={v}" for k, v in spec.items()) + "; row = x index, column = p index\n")
        values = np.asarray(payload["values"]).reshape(spec["nx"], spec["np"])
        w = csv.writer(buf, lineterminator="\n")
        for row in values:
            w.writerow([repr(float(v)) for v in row])
    else:
        raise ConfigError(f"CSV output is only available for scan and wigner, not {cmd}")
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerrcat", description="Double self-Kerr cat-state preparation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alpha=7.23):
        p.add_argument("--n", type=int, default=5, help="number of Kerr components N")
        p.add_argument("--alpha", type=float, default=alpha, help="input coherent amplitude")
        p.add_argument("--target", type=_pair, default=(3, 4), help="target CSS pair 'k,l'")
        p.add_argument("-o", "--output", help="output file (default: standard output)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("coefficients", help="Kerr coefficients c_k and amplitudes alpha_k")
    common(p, alpha=1.0)
    p.set_defaults(func=cmd_coefficients)

    p = sub.add_parser("condition", help="condition mode 4 on a homodyne outcome")
    common(p)
    p.add_argument("--x-m", type=float, default=None, help="quadrature outcome (default: target peak)")
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("scan", help="vacuum ratio versus alpha, with refined zeros")
    common(p)
    p.add_argument("--from", dest="alpha_from", type=float, required=True)
    p.add_argument("--to", dest="alpha_to", type=float, required=True)
    p.add_argument("--steps", type=int, default=401)
    p.add_argument("--fixed-x-m", type=float, default=None, help="hold the outcome fixed instead of tracking the peak")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("wigner", help="Wigner function on a grid")
    common(p)
    p.add_argument("--state", choices=("conditioned", "kerr", "target", "vacuum"), default="conditioned")
    p.add_argument("--x-m", type=float, default=None)
    p.add_argument("--grid", type=_grid, default=None, help="x_min,x_max,p_min,p_max,nx,np")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("sample", help="Monte Carlo homodyne outcomes and window statistics")
    common(p)
    p.add_argument("--state", choices=("kerr", "vacuum"), default="kerr", help="'vacuum' puts |0>|0> on the detector")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--window", type=float, default=0.1, help="acceptance half-width around x_m")
    p.add_argument("--x-m", type=float, default=None)
    p.add_argument("--include-samples", action="store_true")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.func(args)
        text = _csv_text(payload) if args.format == "csv" else json.dumps(payload, indent=1) + "\n"
    except (ConfigError, DomainError) as exc:
        print(f"kerrcat: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateOutcomeError as exc:
        print(f"kerrcat: degenerate outcome: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except GridCoverageError as exc:
        print(f"kerrcat: grid coverage: {exc}", file=sys.stderr)
        return EXIT_GRID
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
