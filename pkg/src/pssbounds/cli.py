"""Command-line interface: sweeps, measured-CM reports, mixtures, proof checks.

CSV goes to standard output with ``#`` metadata lines; JSON reports are
single documents; diagnostics go to standard error.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 asymmetric covariance matrix rejected.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__, bounds, fock, gaussian, theorem1

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_ASYMMETRIC = 3

# relative deviation from a1 = a2, gamma_p = -gamma_x that triggers the structure warning
STRUCTURE_TOL = 0.01


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _fmt(value):
    if value is None:
        return ""
    return repr(float(value))


def _grid(args):
    """List of (r, z) pairs from --r-range or --z-range."""
    if args.r_range is not None and args.z_range is not None:
        raise CliError("give only one of --r-range / --z-range")
    triple = args.r_range if args.r_range is not None else args.z_range
    if triple is None:
        triple = [0.25, 3.0, 12]
        use_r = True
    else:
        use_r = args.r_range is not None
    start, stop, steps = float(triple[0]), float(triple[1]), triple[2]
    if int(steps) != steps or steps < 2:
        raise CliError(f"steps must be an integer >= 2, got {steps}")
    if not start <= stop:
        raise CliError(f"empty range: start {start} > stop {stop}")
    values = np.linspace(start, stop, int(steps))
    points = []
    for v in values:
        v = float(v)
        if use_r:
            if v < 0.0:
                raise CliError(f"squeezing r must be >= 0, got {v}")
            z = math.tanh(v)
            r = v
        else:
            z = v
            if not 0.0 <= z < 1.0:
                raise CliError(f"z must lie in [0, 1), got {z}")
            r = math.atanh(z)
        if z >= 1.0:
            raise CliError(f"r = {v} is too large: tanh(r) rounds to 1")
        points.append((r, z))
    return points


def _parse_k_list(text):
    try:
        ks = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise CliError(f"cannot parse k list {text!r}") from None
    if not ks or any(k < 0 for k in ks):
        raise CliError(f"k values must be nonnegative integers, got {text!r}")
    return ks


def _emit_csv(out, metadata, header, rows):
    for line in metadata:
        out.write(f"# {line}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def cmd_sweep(args, out):
    ks = _parse_k_list(args.k)
    points = _grid(args)
    units = args.units
    conv = lambda v: None if v is None else bounds.convert_units(v, units)  # noqa: E731
    rows = []
    for k in ks:
        for r, z in points:
            report = bounds.pure_bounds(k, z)
            exact = None
            if args.with_oracle:
                exact = fock.exact_entanglement(fock.PssPure(k, z), args.tail_tol)
            rows.append(
                [
                    k,
                    _fmt(r),
                    _fmt(z),
                    _fmt(conv(report.e_low)),
                    _fmt(conv(report.e_up)),
                    _fmt(conv(report.logneg_closed)),
                    _fmt(conv(exact)),
                    _fmt(conv(report.delta)),
                    _fmt(report.delta_rel),
                    _fmt(conv(report.upsilon)),
                ]
            )
    metadata = [
        f"pssbounds {__version__} sweep",
        f"units={units}",
        f"k={','.join(map(str, ks))}",
        f"points={len(points)} with_oracle={bool(args.with_oracle)} tail_tol={args.tail_tol!r}",
    ]
    header = ["k", "r", "z", "e_low", "e_up", "logneg", "exact_e", "delta", "delta_rel", "upsilon"]
    _emit_csv(out, metadata, header, rows)
    return EXIT_OK


def load_cm_file(path):
    """Parse a covariance-matrix JSON file into a 4x4 array (vacuum = identity)."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CliError("covariance file must contain a JSON object")
    has_matrix, has_sf = "matrix" in doc, "standard_form" in doc
    if has_matrix == has_sf:
        raise CliError("covariance file needs exactly one of 'matrix' or 'standard_form'")
    scale = doc.get("convention_scale", 1.0)
    if not isinstance(scale, (int, float)) or not scale > 0:
        raise CliError(f"convention_scale must be a positive number, got {scale!r}")
    try:
        if has_matrix:
            cm = np.array(doc["matrix"], dtype=float)
            if cm.shape != (4, 4):
                raise CliError(f"'matrix' must be 4x4, got shape {cm.shape}")
        else:
            sf = doc["standard_form"]
            cm = gaussian.StandardFormCM(
                float(sf["a1"]), float(sf["a2"]), float(sf["gamma_x"]), float(sf["gamma_p"])
            ).matrix()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(f"malformed covariance entry: {exc}") from None
    if not np.all(np.isfinite(cm)):
        raise CliError("covariance entries must be finite")
    return cm / float(scale), doc.get("label")


def _structure_deviation(sf):
    a_scale = max(abs(sf.a1), abs(sf.a2))
    g_scale = max(abs(sf.gamma_x), abs(sf.gamma_p))
    dev_a = abs(sf.a1 - sf.a2) / a_scale if a_scale else 0.0
    dev_g = abs(sf.gamma_x + sf.gamma_p) / g_scale if g_scale else 0.0
    return max(dev_a, dev_g)


def cmd_bounds_from_cm(args, out):
    cm, label = load_cm_file(args.file)
    check = gaussian.validate(cm)
    if not check.ok:
        raise CliError(
            f"covariance matrix is not physical (symmetry defect {check.symmetry_defect:.3e}, "
            f"min eigenvalue of sigma + i Omega {check.min_eigenvalue:.3e})"
        )
    sf = gaussian.to_standard_form(cm)
    warnings = []
    if _structure_deviation(sf) > STRUCTURE_TOL:
        warnings.append(
            "standard form deviates from the photon-subtracted structure "
            f"a1 = a2, gamma_p = -gamma_x by more than {STRUCTURE_TOL:.0%}"
        )
    symmetric = sf.is_symmetric()
    used = sf
    if not symmetric:
        if not args.symmetrize:
            raise CliError(
                "covariance matrix is not symmetric (a1 != a2 or gamma_p != -gamma_x); "
                "rerun with --symmetrize to average the two modes",
                code=EXIT_ASYMMETRIC,
            )
        a = 0.5 * (sf.a1 + sf.a2)
        g = 0.5 * (sf.gamma_x - sf.gamma_p)
        used = gaussian.StandardFormCM(a, a, g, -g)
        if not gaussian.validate(used.matrix()).ok:
            raise CliError("symmetrized covariance matrix is not physical")
        warnings.append("bounds evaluated on the symmetrized standard form (mode averages)")
    report = bounds.bounds_from_standard_form(used)
    units = args.units
    doc = {
        "label": label,
        "units": units,
        "standard_form": sf.to_dict(),
        "physicality": check.to_dict(),
        "is_symmetric": symmetric,
        "e_low": bounds.convert_units(report.e_low, units),
        "e_up": bounds.convert_units(report.e_up, units),
        "delta": bounds.convert_units(report.delta, units),
        "warnings": warnings,
    }
    if used is not sf:
        doc["symmetrized_standard_form"] = used.to_dict()
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    json.dump(doc, out, indent=2)
    out.write("\n")
    return EXIT_OK


def cmd_mixed(args, out):
    if args.n < 1:
        raise CliError(f"n must be >= 1, got {args.n}")
    if not 0.0 < args.p <= 1.0:
        raise CliError(f"p must lie in (0, 1], got {args.p}")
    points = _grid(args)
    units = args.units
    rows = []
    for r, z in points:
        if z <= 0.0:
            raise CliError("mixtures with k > 0 components are undefined at z = 0; start the range above 0")
        mix = bounds.MixedPss.binomial(args.n, args.p, z)
        report = bounds.mixed_bounds(mix)
        oracle = None
        if args.with_oracle:
            rho = fock.build_mixed_density(mix.components(), dim=args.dim, tail_tol=args.tail_tol)
            oracle = fock.logneg_mixed_oracle(rho)
        conv = lambda v: None if v is None else bounds.convert_units(v, units)  # noqa: E731
        rows.append(
            [
                args.n,
                _fmt(args.p),
                _fmt(mix.k_bar),
                _fmt(r),
                _fmt(z),
                _fmt(conv(report.e_low)),
                _fmt(conv(report.e_up)),
                _fmt(conv(report.delta)),
                _fmt(report.delta_rel),
                _fmt(conv(oracle)),
            ]
        )
    metadata = [
        f"pssbounds {__version__} mixed",
        f"units={units}",
        f"binomial n={args.n} p={args.p!r}",
        f"points={len(points)} with_oracle={bool(args.with_oracle)} dim={args.dim}",
    ]
    header = ["n", "p", "k_bar", "r", "z", "e_low", "e_up", "delta", "delta_rel", "logneg_oracle"]
    _emit_csv(out, metadata, header, rows)
    return EXIT_OK


def _corrupted(m_bad):
    def coeff(k, m):
        value = theorem1.f_coeff(k, m)
        return -value - 1 if m == m_bad else value

    return coeff


def cmd_verify_theorem1(args, out):
    if args.k_max < 0 or args.l_max < 0 or args.grid < 1:
        raise CliError("k-max and l-max must be >= 0 and grid >= 1")
    coeff = theorem1.f_coeff if args.inject_fault is None else _corrupted(args.inject_fault)
    report = theorem1.verify_suite(
        k_max=args.k_max,
        l_max=args.l_max,
        grid=args.grid,
        coeff_k_max=max(args.coeff_k_max, args.k_max),
        coeff=coeff,
    )
    doc = report.to_dict()
    if args.inject_fault is not None:
        doc["parameters"]["injected_fault_m"] = args.inject_fault
    json.dump(doc, out, indent=2)
    out.write("\n")
    if not report.ok:
        for v in report.violations()[:10]:
            print(f"violation: {v.name} k={v.k} at {v.point} margin={v.margin!r}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_scaling(args, out):
    if args.k_max < 1:
        raise CliError(f"k-max must be >= 1, got {args.k_max}")
    rows = [
        [
            k,
            _fmt(bounds.convert_units(bounds.delta_max(k), args.units)),
            _fmt(bounds.convert_units(bounds.upsilon_max(k), args.units)),
        ]
        for k in range(1, args.k_max + 1)
    ]
    metadata = [f"pssbounds {__version__} scaling", f"units={args.units}", f"k_max={args.k_max}"]
    _emit_csv(out, metadata, ["k", "delta_max", "upsilon_max"], rows)
    return EXIT_OK


def _add_range(p):
    p.add_argument("--r-range", nargs=3, type=float, metavar=("START", "STOP", "STEPS"),
                   help="squeezing grid in r (default 0.25 3.0 12)")
    p.add_argument("--z-range", nargs=3, type=float, metavar=("START", "STOP", "STEPS"),
                   help="grid in z = tanh r instead of r")


def _add_units(p):
    p.add_argument("--units", choices=("nats", "bits"), default="nats")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pssbounds",
        description="Second-moment entanglement bounds for photon-subtracted twin beams.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="bounds versus squeezing for pure states (CSV)")
    p.add_argument("--k", default="1", help="comma-separated photon numbers, e.g. 0,1,2")
    _add_range(p)
    p.add_argument("--with-oracle", action="store_true",
                   help="also compute the exact entropy from the Schmidt spectrum "
                        "(cost grows like 1/(1-z); slow for z close to 1)")
    p.add_argument("--tail-tol", type=float, default=fock.DEFAULT_TAIL_TOL)
    _add_units(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds-from-cm", help="bounds from a measured covariance matrix (JSON)")
    p.add_argument("file", help="JSON file with 'matrix' or 'standard_form'")
    p.add_argument("--symmetrize", action="store_true",
                   help="average the two modes when the standard form is not symmetric")
    _add_units(p)
    p.set_defaults(func=cmd_bounds_from_cm)

    p = sub.add_parser("mixed", help="bounds for binomial mixtures of photon-subtracted states (CSV)")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--p", type=float, default=0.25)
    _add_range(p)
    p.add_argument("--with-oracle", action="store_true",
                   help="add the log-negativity of the truncated Fock-space mixture")
    p.add_argument("--dim", type=int, default=None, help="Fock truncation per mode (default: certified)")
    p.add_argument("--tail-tol", type=float, default=fock.DEFAULT_TAIL_TOL)
    _add_units(p)
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("verify-theorem1", help="check the upper-bound theorem and its proof steps (JSON)")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--l-max", type=int, default=50)
    p.add_argument("--grid", type=int, default=99, help="number of interior z points")
    p.add_argument("--coeff-k-max", type=int, default=20)
    p.add_argument("--inject-fault", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_theorem1)

    p = sub.add_parser("scaling", help="large-squeezing error and non-Gaussianity versus k (CSV)")
    p.add_argument("--k-max", type=int, default=20)
    _add_units(p)
    p.set_defaults(func=cmd_scaling)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, fock.TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
