"""Command-line front end.

Subcommands: ``mu-c``, ``growth``, ``dispersion``, ``constants``, ``verify``.
Settings come from an optional flat JSON config file (``--config``); flags
override file values. Exit codes: 0 success, 1 verification failure,
2 configuration error, 3 numerical failure, 4 subcritical viscosity,
5 viscosity below the nonlinear threshold.
"""
import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from . import critical, dispersion, growth, spectrum
from .basis import build_basis
from .errors import (NoRootError, ProfileError, SubcriticalViscosityError,
                     ThresholdViolationError)
from .forms import SlipCoefficients, assemble
from .profile import lambda_upper_bound, make_profile

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC, EXIT_SUBCRITICAL, EXIT_THRESHOLD = 0, 1, 2, 3, 4, 5
OUTPUT_DIR_ENV = "RTSLIP_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    profile_kind: str = "linear"
    profile_params: tuple = (2.0, 1.0)
    g: float = 1.0
    mu: float = 1.0
    L: float = 1.0
    xi_minus: float = 0.0
    xi_plus: float = 0.0
    n_modes: int = 48
    tol: float = 1e-10
    j_max: int = 8
    k_grid: tuple = None
    m_modes: int = 8
    workers: int = 1
    output: str = None
    format: str = "csv"

    def __post_init__(self):
        _validate_config(self)

    @property
    def profile(self):
        return make_profile(self.profile_kind, self.profile_params)

    @property
    def slip(self):
        return SlipCoefficients(self.xi_minus, self.xi_plus)

    @property
    def k_spec(self):
        if self.k_grid is not None:
            return dispersion.Grid(self.k_grid)
        return dispersion.Lattice(self.L, self.j_max)

    def to_json(self):
        d = dataclasses.asdict(self)
        for key in ("profile_params", "k_grid"):
            if d[key] is not None:
                d[key] = list(d[key])
        return json.dumps(d, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kw = {}
        for f in dataclasses.fields(cls):
            if f.name not in mapping:
                continue
            v = mapping[f.name]
            try:
                if f.name in ("profile_params", "k_grid"):
                    v = None if v is None else tuple(float(x) for x in v)
                elif f.name in ("n_modes", "j_max", "m_modes", "workers"):
                    if float(v) != int(v):
                        raise ValueError
                    v = int(v)
                elif f.name in ("profile_kind", "format"):
                    v = str(v)
                elif f.name == "output":
                    v = None if v is None else str(v)
                else:
                    v = float(v)
            except (TypeError, ValueError):
                raise ConfigError(f"invalid value for {f.name}: {mapping[f.name]!r}") from None
            kw[f.name] = v
        return cls(**kw)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_mapping(data)


def _validate_config(c):
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    for name in ("g", "mu", "L", "tol"):
        v = getattr(c, name)
        need(math.isfinite(v) and v > 0, f"{name} must be a positive finite number, got {v}")
    for name in ("xi_minus", "xi_plus"):
        v = getattr(c, name)
        need(math.isfinite(v) and v >= 0, f"{name} must be nonnegative, got {v}")
    need(c.n_modes >= 4, "n_modes must be at least 4")
    need(c.j_max >= 1, "j_max must be at least 1")
    need(1 <= c.m_modes <= c.n_modes, "m_modes must be between 1 and n_modes")
    need(c.workers >= 1, "workers must be at least 1")
    need(c.format in ("csv", "json"), "format must be csv or json")
    if c.k_grid is not None:
        need(len(c.k_grid) > 0 and all(k > 0 for k in c.k_grid),
             "k_grid entries must satisfy k > 0")
    try:
        make_profile(c.profile_kind, c.profile_params)
    except (ProfileError, ValueError) as exc:
        raise ConfigError(f"invalid density profile: {exc}") from None


# Argument parsing

def _positive_k(text):
    try:
        k = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid wave number {text!r}") from None
    if not (math.isfinite(k) and k > 0):
        raise argparse.ArgumentTypeError(f"wave number must satisfy k > 0, got {text}")
    return k


def _common(p):
    p.add_argument("--config", help="flat JSON config file")
    p.add_argument("--profile", dest="profile_kind", choices=("linear", "exponential", "polynomial"))
    p.add_argument("--profile-params", type=float, nargs="+")
    p.add_argument("--g", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--xi-minus", type=float)
    p.add_argument("--xi-plus", type=float)
    p.add_argument("--n-modes", type=int, help="basis size (default 48)")
    p.add_argument("--tol", type=float)
    p.add_argument("--m-modes", type=int, help="growth rates per wave number")
    p.add_argument("--workers", type=int)
    p.add_argument("--output", "-o", help="output file (stdout if omitted)")
    p.add_argument("--format", choices=("csv", "json"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rtslip", description="Linear Rayleigh-Taylor stability with Navier-slip walls")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mu-c", help="critical viscosity table")
    _common(p)
    p.add_argument("--k", type=_positive_k, action="append")
    p.add_argument("--k-range", nargs=3, metavar=("K0", "K1", "COUNT"))
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--closed-form", dest="which", action="store_const", const="closed")
    mode.add_argument("--numeric", dest="which", action="store_const", const="numeric")
    mode.add_argument("--both", dest="which", action="store_const", const="both")

    p = sub.add_parser("growth", help="growth rates and mode profiles at one k")
    _common(p)
    p.add_argument("--k", type=_positive_k, default=None)
    p.add_argument("--n-modes-out", type=int, help="number of growth rates to report")
    p.add_argument("--profiles-dir", help="write one amplitude CSV per mode here")

    p = sub.add_parser("dispersion", help="dispersion curve over a lattice or grid")
    _common(p)
    p.add_argument("--lattice", dest="j_max", type=int)
    p.add_argument("--k-grid", type=_positive_k, nargs="+")

    p = sub.add_parser("constants", help="constants of the nonlinear argument (JSON)")
    _common(p)
    p.add_argument("--lattice", dest="j_max", type=int)

    p = sub.add_parser("verify", help="run the invariant suite")
    _common(p)
    p.add_argument("--lattice", dest="j_max", type=int)
    return parser


def config_from_args(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.loads(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        RunConfig.from_mapping(data)  # reject unknown keys early
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    for key, value in vars(args).items():
        if key in fields and value is not None:
            data[key] = value
    return RunConfig.from_mapping(data)


def _open_output(path):
    if path is None:
        return _NoClose(sys.stdout)
    if not os.path.isabs(path) and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], path)
    return open(path, "w", newline="")


class _NoClose:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        self.fh.flush()


def fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.17g}"


# Subcommands

def cmd_mu_c(cfg, args):
    ks = list(args.k or [])
    if args.k_range:
        try:
            k0, k1, count = float(args.k_range[0]), float(args.k_range[1]), int(args.k_range[2])
        except ValueError:
            raise ConfigError("--k-range expects K0 K1 COUNT") from None
        if not (k0 > 0 and k1 > 0 and count >= 1):
            raise ConfigError("--k-range needs k > 0 and COUNT >= 1")
        ks += list(np.linspace(k0, k1, count))
    if not ks:
        ks = [1.0]
    which = args.which or "closed"
    slip = cfg.slip
    basis = build_basis(cfg.n_modes) if which != "closed" else None
    rows = []
    for k in ks:
        closed = critical.mu_c_closed_form(k, slip)
        numeric = critical.mu_c_numeric(basis, k, slip).value if basis else None
        gap = None
        if numeric is not None:
            gap = abs(numeric - closed) / closed if closed else abs(numeric)
        rows.append([fmt(k), fmt(closed) if which != "numeric" else "", fmt(numeric),
                     fmt(gap), fmt(critical.mu_c_small_k(k, slip)),
                     fmt(critical.mu_c_high_k_bound(k, slip))])
    header = ["k", "mu_c_closed", "mu_c_numeric", "relative_gap", "small_k", "high_k_bound"]
    with _open_output(cfg.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_growth(cfg, args):
    k = args.k if args.k is not None else 1.0 / cfg.L
    count = args.n_modes_out if args.n_modes_out is not None else cfg.m_modes
    if not 1 <= count <= cfg.n_modes:
        raise ConfigError("--n-modes-out must be between 1 and n_modes")
    mu_c = critical.mu_c_closed_form(k, cfg.slip)
    if cfg.mu <= mu_c:
        raise SubcriticalViscosityError(
            f"mu={cfg.mu:.17g} does not exceed mu_c(k={k:g})={mu_c:.17g}", mu_c=mu_c)
    ops = assemble(build_basis(cfg.n_modes), cfg.profile, k, cfg.slip)
    modes = growth.growth_sequence(ops, cfg.g, cfg.mu, count, cfg.tol)
    with _open_output(cfg.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "lambda_n", "fixed_point_residual", "ode_residual", "bc_residual"])
        for m in modes:
            w.writerow([m.n, fmt(m.lambda_n), fmt(m.fixed_point_residual),
                        fmt(m.ode_residual), fmt(m.bc_residual)])
    if args.profiles_dir:
        os.makedirs(args.profiles_dir, exist_ok=True)
        for m in modes:
            amps, _ = growth.assemble_mode(m)
            amps.write_csv(os.path.join(args.profiles_dir, f"mode_{m.n}.csv"))


def cmd_dispersion(cfg, args):
    curve = dispersion.sweep(cfg.profile, cfg.g, cfg.mu, cfg.slip, cfg.k_spec,
                             m_modes=cfg.m_modes, tol=cfg.tol, n_modes=cfg.n_modes,
                             workers=cfg.workers)
    with _open_output(cfg.output) as fh:
        if cfg.format == "json":
            fh.write(curve.to_json())
        else:
            curve.write_csv(fh)


def cmd_constants(cfg, args):
    mu_c = critical.mu_c_lattice(cfg.L, cfg.slip)
    if mu_c > 0 and not cfg.mu > 3 * mu_c:
        raise ThresholdViolationError(
            f"mu={cfg.mu:.17g} is not above 3 mu_c(Xi)={3 * mu_c:.17g}")
    curve = dispersion.sweep(cfg.profile, cfg.g, cfg.mu, cfg.slip, cfg.k_spec,
                             m_modes=cfg.m_modes, tol=cfg.tol, n_modes=cfg.n_modes,
                             workers=cfg.workers)
    const = dispersion.nonlinear_constants(curve, cfg.mu, cfg.slip, cfg.L)
    doc = {"config": json.loads(cfg.to_json()), "constants": const.to_dict(),
           "mu_c_sup": critical.mu_c_sup(cfg.slip),
           "note": "Lambda is the maximum over the computed wave-number window"}
    with _open_output(cfg.output) as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_verify(cfg, args):
    results = run_verification(cfg)
    ok = True
    with _open_output(cfg.output) as fh:
        for name, passed, detail in results:
            ok &= passed
            fh.write(f"{'PASS' if passed else 'FAIL'} {name}: {detail}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def run_verification(cfg):
    """List of (group, passed, detail) for the invariant suite on ``cfg``."""
    out = []
    slip, profile = cfg.slip, cfg.profile
    basis = build_basis(cfg.n_modes)

    # critical viscosity
    probe = slip if not slip.is_zero else SlipCoefficients(1.0, 1.0)
    worst, below = 0.0, True
    for k in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        exact = critical.mu_c_closed_form(k, probe)
        num = critical.mu_c_numeric(basis, k, probe).value
        worst = max(worst, abs(num - exact) / exact)
        below &= num <= exact * (1 + 1e-12)
    out.append(("critical viscosity", worst <= 1e-7 and below,
                f"max relative gap {worst:.3e}, numeric below closed form: {below}"))

    k = 1.0 / cfg.L
    mu_c = critical.mu_c_closed_form(k, slip)
    if cfg.mu <= mu_c:
        out.append(("growth", False, f"mu={cfg.mu:g} <= mu_c(k={k:g})={mu_c:.6g}"))
        return out
    ops = assemble(basis, profile, k, slip)

    # spectrum at lambda = 0
    m = min(5, cfg.n_modes)
    sl = spectrum.gamma_spectrum(ops, 0.0, cfg.mu, m)
    psi = float(np.max(spectrum.psi_identity_residual(ops, sl)))
    orth = spectrum.b_orthogonality_defect(ops, sl)
    mono = spectrum.gamma_monotonicity_check(ops, cfg.mu, [0, 0.2, 0.4, 0.6, 0.8, 1.0], m)
    out.append(("spectrum", psi <= 1e-9 and orth <= 1e-9 and mono.passed
                and bool(np.all(np.diff(sl.gammas) < 0)) and bool(np.all(sl.gammas > 0)),
                f"identity {psi:.2e}, B-orthogonality {orth:.2e}, monotone in lambda {mono.passed}"))

    # growth rates
    modes = growth.growth_sequence(ops, cfg.g, cfg.mu, cfg.m_modes, cfg.tol)
    bound = lambda_upper_bound(profile, cfg.g)
    res = max(max(md.fixed_point_residual, md.ode_residual, md.bc_residual) for md in modes)
    ident = max(growth.verify_characteristic_identity(md, ops) for md in modes)
    cont = max(growth.continuity_defect(md) for md in modes)
    top = max(md.lambda_n for md in modes)
    out.append(("growth", res <= 1e-6 and ident <= 1e-8 and cont <= 1e-9 and top <= bound + 1e-10,
                f"lambda_1={modes[0].lambda_n:.12g}, residuals {res:.2e}, identity {ident:.2e}, "
                f"continuity {cont:.2e}, bound {bound:.6g}"))

    # dispersion curve
    curve = dispersion.sweep(profile, cfg.g, cfg.mu, slip, cfg.k_spec, m_modes=min(3, cfg.m_modes),
                             tol=cfg.tol, n_modes=cfg.n_modes, workers=cfg.workers,
                             keep_modes=True)
    mcs = curve.mu_c_values
    dec = bool(np.all(np.diff(mcs) < 0)) if not slip.is_zero else bool(np.all(mcs == 0))
    over = dispersion.upper_bound_check(curve, profile, cfg.g)
    lam_cap, k_cap = dispersion.capital_lambda(curve)
    out.append(("dispersion", dec and over <= 1e-10,
                f"Lambda={lam_cap:.12g} at k={k_cap:g}, mu_c decreasing {dec}"))

    # constants
    mu_lat = critical.mu_c_lattice(cfg.L, slip)
    if mu_lat == 0 or cfg.mu > 3 * mu_lat:
        varpi0, nu0, m1, m2 = dispersion.constants_from_viscosity(cfg.mu, mu_lat)
        r1 = abs(m1 + 1 / m1 - 2 * nu0) / (2 * nu0)
        r2 = dispersion.m2_identity_residual(lam_cap, cfg.mu, mu_lat, nu0, m1, m2)
        out.append(("constants", r1 <= 1e-10 and r2 <= 1e-10 and 1 < nu0 < 1.5,
                    f"nu0={nu0:.12g}, m1={m1:.12g}, m2={m2:.12g}"))

        # maximal-mode inequality on every solved mode
        worst = math.inf
        quot = 0.0
        for row in curve.modes:
            for md in row or []:
                fld = md.field()
                lhs, rhs = dispersion.maximal_mode_terms(fld, profile, cfg.g, cfg.mu, slip,
                                                         lam_cap, cfg.L)
                worst = min(worst, (rhs - lhs) / rhs)
                if not slip.is_zero:
                    quot = max(quot, dispersion.slip_quotient(fld, slip, cfg.L))
        out.append(("inequalities", worst >= -1e-10 and quot <= mu_lat + 1e-10,
                    f"min relative slack {worst:.3e}, max slip quotient {quot:.6g}"))
    else:
        out.append(("constants", True, f"skipped: mu <= 3 mu_c(Xi) = {3 * mu_lat:.6g}"))
    return out


COMMANDS = {"mu-c": cmd_mu_c, "growth": cmd_growth, "dispersion": cmd_dispersion,
            "constants": cmd_constants, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        code = COMMANDS[args.command](cfg, args)
    except (ConfigError, ProfileError) as exc:
        print(f"rtslip: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SubcriticalViscosityError as exc:
        print(f"rtslip: subcritical viscosity: {exc}", file=sys.stderr)
        return EXIT_SUBCRITICAL
    except ThresholdViolationError as exc:
        print(f"rtslip: threshold violation: {exc}", file=sys.stderr)
        return EXIT_THRESHOLD
    except (NoRootError, linalg.LinAlgError, ArithmeticError, RuntimeError) as exc:
        print(f"rtslip: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
