"""Dispersion curves, the maximal growth rate Lambda, and the constants of the
nonlinear instability argument.

Also holds the mode-combination helpers (F_M, T^delta) and the
maximal-mode inequality checks, which only need solved modes and Lambda.
"""
import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre as leg
from scipy.optimize import brentq

from .basis import build_basis
from .critical import mu_c_closed_form, mu_c_lattice, mu_c_sup
from .errors import NormalizationError, ThresholdViolationError
from .forms import SlipCoefficients, assemble
from .growth import DEFAULT_TOL, NormalModeField, growth_sequence
from .profile import lambda_upper_bound


@dataclass(frozen=True)
class Lattice:
    """Wave numbers k = j / L for j = 1 .. j_max."""

    length: float
    j_max: int

    def values(self):
        if not self.length > 0 or self.j_max < 1:
            raise ValueError("lattice needs L > 0 and j_max >= 1")
        return [j / self.length for j in range(1, self.j_max + 1)]


@dataclass(frozen=True)
class Grid:
    k: tuple

    def values(self):
        ks = [float(k) for k in self.k]
        if any(not k > 0 for k in ks):
            raise ValueError("grid wave numbers must be positive")
        return ks


@dataclass(frozen=True, eq=False)
class DispersionCurve:
    """Growth rates lambda_1 .. lambda_m per wave number.

    ``lambda_table`` has shape (len(k_values), m); rows of skipped
    (subcritical) wave numbers are NaN. ``modes`` keeps the solved
    GrowthMode lists (None for skipped rows).
    """

    k_values: np.ndarray
    lambda_table: np.ndarray
    mu_c_values: np.ndarray
    skipped: np.ndarray
    config: dict
    modes: list = field(default=None, repr=False)

    @property
    def m_modes(self):
        return self.lambda_table.shape[1]

    def write_csv(self, path_or_file):
        header = ["k", "mu_c"] + [f"lambda_{i + 1}" for i in range(self.m_modes)] + ["skipped"]
        rows = []
        for k, mc, lams, sk in zip(self.k_values, self.mu_c_values, self.lambda_table, self.skipped):
            lam_cells = [""] * self.m_modes if sk else [f"{v:.17g}" for v in lams]
            rows.append([f"{k:.17g}", f"{mc:.17g}"] + lam_cells + [str(int(sk))])
        _write_rows(path_or_file, header, rows)

    def to_json(self):
        doc = {
            "config": self.config,
            "k": [float(k) for k in self.k_values],
            "mu_c": [float(v) for v in self.mu_c_values],
            "lambda": [None if sk else [float(v) for v in row]
                       for row, sk in zip(self.lambda_table, self.skipped)],
            "skipped": [bool(s) for s in self.skipped],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_rows(path_or_file, header, rows):
    if hasattr(path_or_file, "write"):
        w = csv.writer(path_or_file, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        _write_rows(fh, header, rows)


def sweep(profile, g, mu, slip, k_spec, m_modes=1, tol=DEFAULT_TOL, n_modes=48,
          workers=1, keep_modes=False):
    """Growth rates over a set of wave numbers.

    Wave numbers where mu <= mu_c(k, Xi) are flagged as skipped. With
    ``workers > 1`` wave numbers are solved on a thread pool; results are
    merged in input order so the output does not depend on scheduling.
    """
    if not isinstance(slip, SlipCoefficients):
        slip = SlipCoefficients(*slip)
    ks = k_spec.values() if hasattr(k_spec, "values") else [float(k) for k in k_spec]
    if not ks:
        raise ValueError("no wave numbers requested")
    basis = build_basis(n_modes)
    mu_cs = [mu_c_closed_form(k, slip) for k in ks]

    def solve(i):
        if mu <= mu_cs[i]:
            return None
        ops = assemble(basis, profile, ks[i], slip)
        return growth_sequence(ops, g, mu, m_modes, tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, range(len(ks))))
    else:
        results = [solve(i) for i in range(len(ks))]

    table = np.full((len(ks), m_modes), np.nan)
    for i, res in enumerate(results):
        if res is not None:
            table[i] = [m.lambda_n for m in res]
    config = {"profile": profile.to_dict(), "g": float(g), "mu": float(mu),
              "xi_minus": slip.xi_minus, "xi_plus": slip.xi_plus,
              "n_modes": int(n_modes), "tol": float(tol)}
    if isinstance(k_spec, Lattice):
        config["L"] = float(k_spec.length)
    return DispersionCurve(k_values=np.array(ks), lambda_table=table,
                           mu_c_values=np.array(mu_cs),
                           skipped=np.array([r is None for r in results]),
                           config=config, modes=results if keep_modes else None)


def capital_lambda(curve):
    """(Lambda, k at which it is attained) over the tabulated wave numbers.

    The supremum over the infinite lattice is approximated on the computed
    window; check saturation by enlarging the window.
    """
    lam1 = np.where(curve.skipped, -np.inf, curve.lambda_table[:, 0])
    if not np.any(np.isfinite(lam1)):
        raise ValueError("every wave number was skipped; Lambda is undefined")
    i = int(np.argmax(lam1))
    return float(lam1[i]), float(curve.k_values[i])


@dataclass(frozen=True)
class NonlinearConstants:
    capital_lambda: float
    mu_c_lattice: float
    varpi0: float
    nu0: float
    m1: float
    m2: float
    k0: float = None
    n_split: int = None

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def nu0_from_varpi0(varpi0):
    return (3.0 + varpi0) / (2.0 + varpi0)


def m1_constant(nu0):
    return nu0 + math.sqrt(nu0 * nu0 - 1.0)


def m2_constant(mu, mu_c, m1):
    """Positive root m2 of (mu + m1 m2)^2 = 2 (mu - mu_c)(m1^2 + 1) m2."""
    p = mu * (m1 * m1 - m1 + 1.0) - mu_c * (m1 * m1 + 1.0)
    disc = p * p - (mu * m1) ** 2
    if disc < 0:
        if disc > -1e-12 * p * p:
            disc = 0.0
        else:
            raise ThresholdViolationError("m2 is not real for these viscosities")
    return (p + math.sqrt(disc)) / (m1 * m1)


def m2_identity_residual(lam, mu, mu_c, nu0, m1, m2):
    """Relative defect of Lambda m1 (mu/m1 + m2)^2 / (2 (mu - mu_c)) = 2 nu0 Lambda m2."""
    lhs = lam * m1 * (mu / m1 + m2) ** 2 / (2.0 * (mu - mu_c))
    rhs = 2.0 * nu0 * lam * m2
    return abs(lhs - rhs) / abs(rhs)


def constants_from_viscosity(mu, mu_c):
    """(varpi0, nu0, m1, m2) for mu > 3 mu_c, with the midpoint choice of varpi0."""
    if mu_c > 0:
        if not mu > 3.0 * mu_c:
            raise ThresholdViolationError(
                f"mu={mu:g} must exceed 3 mu_c={3 * mu_c:g}")
        varpi0 = (mu / mu_c - 3.0) / 2.0
    else:
        varpi0 = 1.0
    nu0 = nu0_from_varpi0(varpi0)
    m1 = m1_constant(nu0)
    return varpi0, nu0, m1, m2_constant(mu, mu_c, m1)


def find_split(curve, lam_cap, nu0):
    """First lattice column k0 and index N with lambda_N(k0) > (2 nu0 / 3) Lambda > lambda_{N+1}(k0)."""
    threshold = 2.0 * nu0 / 3.0 * lam_cap
    for k, row, sk in zip(curve.k_values, curve.lambda_table, curve.skipped):
        if sk:
            continue
        for n in range(1, row.size):
            if row[n - 1] > threshold > row[n]:
                return float(k), n
    return None, None


def nonlinear_constants(curve, mu, slip, length):
    """Constants of the nonlinear argument at viscosity ``mu``.

    Raises ThresholdViolationError unless mu > 3 mu_c(1/L, Xi).
    """
    mc = mu_c_lattice(length, slip)
    varpi0, nu0, m1, m2 = constants_from_viscosity(mu, mc)
    lam_cap, _ = capital_lambda(curve)
    k0, n_split = find_split(curve, lam_cap, nu0)
    return NonlinearConstants(capital_lambda=lam_cap, mu_c_lattice=mc, varpi0=varpi0,
                              nu0=nu0, m1=m1, m2=m2, k0=k0, n_split=n_split)


# Mode combinations

def mode_l2_norm(mode, length):
    """||u_j||_{L^2(Omega)} with the x1 integral pi L done exactly."""
    b = mode.basis
    x, w = b.quad_nodes, b.quad_weights
    return math.sqrt(math.pi * length * float(w @ (mode.theta(x) ** 2 + mode.phi(x) ** 2)))


@dataclass(frozen=True, eq=False)
class ModeCombination:
    coefficients: tuple
    modes: tuple
    length: float
    norms: tuple
    normalized: bool

    def f_m(self, t):
        """F_M(t) = sum_j |C_j| exp(lam_j t)."""
        t = np.asarray(t, dtype=float)
        return sum(abs(c) * np.exp(m.lambda_n * t) for c, m in zip(self.coefficients, self.modes))

    def norm_squared(self, t, delta=1.0):
        """||delta sum_j C_j e^{lam_j t} u_j||^2 over Omega (modes share one k)."""
        b = self.modes[0].basis
        x, w = b.quad_nodes, b.quad_weights
        th = sum(c * math.exp(m.lambda_n * t) * m.theta(x) for c, m in zip(self.coefficients, self.modes))
        ph = sum(c * math.exp(m.lambda_n * t) * m.phi(x) for c, m in zip(self.coefficients, self.modes))
        return delta**2 * math.pi * self.length * float(w @ (th**2 + ph**2))

    def field(self):
        return NormalModeField(zip(self.coefficients, self.modes))


def make_mode_combination(modes, coefficients, length):
    """Combine modes at one wave number and check |C1| ||u1|| > (1/2) sum_{j>=2} |Cj| ||uj|| > 0."""
    modes = tuple(modes)
    coefficients = tuple(float(c) for c in coefficients)
    if len(modes) < 2 or len(coefficients) != len(modes):
        raise NormalizationError("need at least two modes and one coefficient per mode")
    if len({m.k for m in modes}) != 1:
        raise ValueError("all modes of a combination must share the wave number")
    if not any(coefficients[1:]):
        raise NormalizationError("coefficients C_j for j >= 2 are all zero")
    norms = tuple(mode_l2_norm(m, length) for m in modes)
    head = abs(coefficients[0]) * norms[0]
    tail = 0.5 * sum(abs(c) * n for c, n in zip(coefficients[1:], norms[1:]))
    return ModeCombination(coefficients, modes, float(length), norms, bool(head > tail > 0))


def solve_t_delta(comb, delta, epsilon0):
    """Unique T with delta F_M(T) = epsilon0; zero when delta F_M(0) >= epsilon0."""
    if not (delta > 0 and epsilon0 > 0):
        raise ValueError("delta and epsilon0 must be positive")
    f0 = delta * float(comb.f_m(0.0))
    if f0 >= epsilon0:
        return 0.0
    gap = math.log(epsilon0 / f0)
    rates = [m.lambda_n for c, m in zip(comb.coefficients, comb.modes) if c != 0]
    t_lo, t_hi = gap / max(rates), gap / min(rates)

    def h(t):
        return math.log(delta * float(comb.f_m(t))) - math.log(epsilon0)

    if t_hi - t_lo <= 4 * np.finfo(float).eps * t_hi or h(t_lo) >= 0:
        return t_lo
    return brentq(h, t_lo, t_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)


def delta0_quantities(comb, profile, n_x1=64, n_x2=201):
    """(||sum_j sigma_j(0)||_inf, (1/2) min rho0) as sampled on a grid."""
    length = comb.length
    x1 = np.linspace(0.0, 2 * math.pi * length, n_x1, endpoint=False)
    x2 = np.linspace(-1.0, 1.0, n_x2)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    sigma = comb.field().sample(0.0, X1, X2)[0]
    rho_min = float(np.min(profile.rho(x2)))
    return float(np.max(np.abs(sigma))), 0.5 * rho_min


# Maximal-mode inequality

def _tensor_grid(field, length, n_x2):
    kmax = max(abs(m.k) for _, m in field.terms)
    n_x1 = max(64, int(4 * kmax * length) + 8)
    x1 = np.linspace(0.0, 2 * math.pi * length, n_x1, endpoint=False)
    w1 = np.full(n_x1, 2 * math.pi * length / n_x1)
    x2, w2 = leg.leggauss(n_x2)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    return x1, w1, x2, w2, X1, X2, np.outer(w1, w2)


def maximal_mode_terms(field, profile, g, mu, slip, lam_cap, length, n_x2=96):
    """(lhs, rhs) of int g rho0' w2^2 + Lambda (boundary) <= Lambda^2 int rho0 |w|^2 + Lambda mu int |grad w|^2."""
    if not field.terms:
        return 0.0, 0.0
    x1, w1, x2, w2, X1, X2, W = _tensor_grid(field, length, n_x2)
    u1, u2 = field.velocity(0.0, X1, X2)
    grads = field.velocity_gradient(0.0, X1, X2)
    rho, drho = profile.rho(X2), profile.drho(X2)
    grad_sq = sum(gr**2 for gr in grads)
    top = field.velocity(0.0, x1, np.ones_like(x1))[0]
    bottom = field.velocity(0.0, x1, -np.ones_like(x1))[0]
    boundary = float(w1 @ (slip.xi_plus * top**2 + slip.xi_minus * bottom**2))
    lhs = float(np.sum(W * g * drho * u2**2)) + lam_cap * boundary
    rhs = lam_cap**2 * float(np.sum(W * rho * (u1**2 + u2**2))) + lam_cap * mu * float(np.sum(W * grad_sq))
    return lhs, rhs


def maximal_mode_inequality_check(field, profile, g, mu, slip, lam_cap, length, n_x2=96):
    """Signed slack rhs - lhs of the maximal-mode inequality (nonnegative when it holds)."""
    lhs, rhs = maximal_mode_terms(field, profile, g, mu, slip, lam_cap, length, n_x2)
    return rhs - lhs


def slip_quotient(field, slip, length, n_x2=96):
    """Boundary integral of xi |w1|^2 over ||grad w||^2_{L^2(Omega)}."""
    x1, w1, x2, w2, X1, X2, W = _tensor_grid(field, length, n_x2)
    top = field.velocity(0.0, x1, np.ones_like(x1))[0]
    bottom = field.velocity(0.0, x1, -np.ones_like(x1))[0]
    boundary = float(w1 @ (slip.xi_plus * top**2 + slip.xi_minus * bottom**2))
    grad_sq = float(np.sum(W * sum(gr**2 for gr in field.velocity_gradient(0.0, X1, X2))))
    return boundary / grad_sq


def slip_quotient_bounds(slip, length):
    """(mu_c over the lattice, mu_c^s): the quotient of any admissible field is below both."""
    return mu_c_lattice(length, slip), mu_c_sup(slip)


def upper_bound_check(curve, profile, g):
    """Largest tabulated growth rate minus sqrt(g / L0); nonpositive when the bound holds."""
    lam = curve.lambda_table[~curve.skipped]
    return float(np.max(lam) - lambda_upper_bound(profile, g)) if lam.size else -np.inf
