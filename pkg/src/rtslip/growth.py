"""Growth rates lambda_n(k, mu) and the corresponding normal modes.

lambda_n is the root of f(lam) = g k^2 gamma_n(k, lam, mu) - lam. f is
strictly decreasing with f(0) > 0, so bisection from [0, sqrt(g / L0)] always
converges. A mode is then rebuilt as

    sigma = e^{lam t} cos(k x1) omega(x2),   u1 = e^{lam t} sin(k x1) theta(x2),
    u2    = e^{lam t} cos(k x1) phi(x2),     p  = e^{lam t} cos(k x1) q(x2),

with omega = -rho0' phi / lam, theta = -phi' / k and
q = -(lam rho0 phi' + mu (k^2 phi' - phi''')) / k^2.
"""
import csv
from dataclasses import dataclass, field

import numpy as np

from .basis import evaluate_expansion
from .errors import NoRootError
from .profile import lambda_upper_bound
from .spectrum import gamma_spectrum

DEFAULT_TOL = 1e-10
MAX_DOUBLINGS = 10


@dataclass(frozen=True, eq=False)
class GrowthMode:
    """Solved characteristic value lambda_n with its vertical-velocity profile phi_n.

    The residual fields are filled in by the solver: ``fixed_point_residual``
    is |gamma_n(lam_n) - lam_n / (g k^2)| relative to lam_n / (g k^2),
    ``ode_residual`` the relative strong-form defect of the fourth-order
    equation and ``bc_residual`` the relative slip-condition defect.
    """

    n: int
    k: float
    lambda_n: float
    mu: float
    g: float
    phi_coeffs: np.ndarray
    basis: object = field(repr=False)
    profile: object = field(repr=False)
    slip: object = field(repr=False)
    gamma: float = float("nan")
    fixed_point_residual: float = float("nan")
    ode_residual: float = float("nan")
    bc_residual: float = float("nan")

    def phi(self, x, derivative=0):
        return evaluate_expansion(self.basis, self.phi_coeffs, x, derivative)

    def omega(self, x):
        return -self.profile.drho(x) * self.phi(x) / self.lambda_n

    def theta(self, x, derivative=0):
        return -self.phi(x, derivative + 1) / self.k

    def q(self, x):
        d1 = self.phi(x, 1)
        k2 = self.k**2
        return -(self.lambda_n * self.profile.rho(x) * d1
                 + self.mu * (k2 * d1 - self.phi(x, 3))) / k2

    def field(self, coefficient=1.0):
        return NormalModeField(((float(coefficient), self),))


def _f(ops, g, mu, n, lam):
    gam = gamma_spectrum(ops, lam, mu, n).gammas[n - 1]
    return g * ops.k**2 * gam - lam


def solve_growth_rate(ops, g, mu, n=1, tol=DEFAULT_TOL):
    """Characteristic value lambda_n for the assembled wave number.

    Bisection on [0, lam_hi] with lam_hi = sqrt(g / L0), doubled up to ten
    times if f(lam_hi) is not yet negative. The bracket is shrunk until its
    width is at most tol * max(1, lam); one secant step inside the final
    bracket then polishes the root.

    Raises
    ------
    SubcriticalViscosityError
        If mu does not exceed the critical viscosity at this k.
    NoRootError
        If no sign change is found after the doublings.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"mode index n must be a positive integer, got {n}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = int(n)
    f0 = _f(ops, g, mu, n, 0.0)
    lo, hi = 0.0, lambda_upper_bound(ops.profile, g)
    f_lo, f_hi = f0, _f(ops, g, mu, n, hi)
    doublings = 0
    while f_hi >= 0:
        if doublings == MAX_DOUBLINGS:
            raise NoRootError(
                f"no sign change of g k^2 gamma_{n} - lam on [0, {hi:g}] at k={ops.k:g}")
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = _f(ops, g, mu, n, hi)
        doublings += 1
    while hi - lo > tol * max(1.0, 0.5 * (lo + hi)):
        mid = 0.5 * (lo + hi)
        f_mid = _f(ops, g, mu, n, mid)
        if f_mid > 0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    candidates = [(abs(f_lo), lo), (abs(f_hi), hi)]
    if f_lo != f_hi:
        sec = lo - f_lo * (hi - lo) / (f_hi - f_lo)
        if lo < sec < hi:
            candidates.append((abs(_f(ops, g, mu, n, sec)), sec))
    lam = min(c for c in candidates if c[1] > 0)[1]
    return _finish_mode(ops, g, mu, n, lam)


def _finish_mode(ops, g, mu, n, lam):
    sl = gamma_spectrum(ops, lam, mu, n)
    gam = float(sl.gammas[n - 1])
    target = lam / (g * ops.k**2)
    mode = GrowthMode(n=n, k=ops.k, lambda_n=float(lam), mu=float(mu), g=float(g),
                      phi_coeffs=sl.eigenvectors[:, n - 1].copy(), basis=ops.basis,
                      profile=ops.profile, slip=ops.slip, gamma=gam,
                      fixed_point_residual=abs(gam - target) / target)
    ode, bc = _strong_form_parts(mode)
    object.__setattr__(mode, "ode_residual", ode)
    object.__setattr__(mode, "bc_residual", bc)
    return mode


def growth_sequence(ops, g, mu, n_max, tol=DEFAULT_TOL):
    """Modes n = 1 .. n_max, checked to be strictly decreasing in lambda."""
    modes = [solve_growth_rate(ops, g, mu, n, tol) for n in range(1, int(n_max) + 1)]
    for a, b in zip(modes, modes[1:]):
        if not b.lambda_n < a.lambda_n:
            raise RuntimeError(
                f"growth rates not strictly decreasing at n={b.n}: "
                f"{a.lambda_n:.17g} <= {b.lambda_n:.17g}")
    return modes


def decay_ratio(modes):
    return modes[-1].lambda_n / modes[0].lambda_n


def _strong_form_parts(mode, points=None):
    b = mode.basis
    if points is None:
        x = b.quad_nodes
        w = b.quad_weights
    else:
        x = np.asarray(points, dtype=float)
        w = np.full(x.size, 2.0 / x.size)
    lam, mu, k2 = mode.lambda_n, mode.mu, mode.k**2
    rho, drho = mode.profile.rho(x), mode.profile.drho(x)
    p0, p1, p2, p4 = (mode.phi(x, d) for d in (0, 1, 2, 4))
    inertia = lam**2 * (rho * k2 * p0 - drho * p1 - rho * p2)
    viscous = lam * mu * (p4 - 2 * k2 * p2 + k2 * k2 * p0)
    buoyancy = -mode.g * k2 * drho * p0
    res = inertia + viscous + buoyancy
    scale = max(np.sqrt(w @ t**2) for t in (inertia, viscous, buoyancy))
    if scale == 0:
        raise ValueError("residual of the zero function is undefined")
    interior = float(np.sqrt(w @ res**2) / scale)

    d1 = mode.phi(np.array([-1.0, 1.0]), 1)
    d2 = mode.phi(np.array([-1.0, 1.0]), 2)
    d2_inf = np.max(np.abs(mu * mode.phi(np.linspace(-1, 1, 201), 2)))
    defect = max(abs(mu * d2[1] - mode.slip.xi_plus * d1[1]),
                 abs(mu * d2[0] + mode.slip.xi_minus * d1[0]))
    return interior, float(defect / d2_inf)


def strong_form_residual(mode, sample_points=None):
    """Relative interior defect of the fourth-order equation plus the slip-condition defect."""
    ode, bc = _strong_form_parts(mode, sample_points)
    return ode + bc


def verify_characteristic_identity(mode, ops):
    """|lam B(phi, phi) - g k^2 int rho0' phi^2| / (g k^2 int rho0' phi^2) at lam = lam_n."""
    c = mode.phi_coeffs
    lam = mode.lambda_n
    rhs = mode.g * ops.k**2 * (c @ ops.M_rho_prime @ c)
    lhs = lam * (c @ ops.b_matrix(lam, mode.mu) @ c)
    return float(abs(lhs - rhs) / rhs)


def continuity_defect(mode, points=None):
    """max |k theta + phi'| on the given points (quadrature nodes by default)."""
    x = mode.basis.quad_nodes if points is None else np.asarray(points, float)
    return float(np.max(np.abs(mode.k * mode.theta(x) + mode.phi(x, 1))))


def horizontal_momentum_defect(mode, points=None):
    """Relative defect of lam rho0 theta - k q + mu (k^2 theta - theta'') on interior nodes."""
    x = mode.basis.quad_nodes if points is None else np.asarray(points, float)
    lam, mu, k = mode.lambda_n, mode.mu, mode.k
    th, th2 = mode.theta(x), mode.theta(x, 2)
    terms = (lam * mode.profile.rho(x) * th, -k * mode.q(x), mu * (k * k * th - th2))
    scale = max(np.max(np.abs(t)) for t in terms)
    return float(np.max(np.abs(sum(terms))) / scale)


@dataclass(frozen=True)
class ModeAmplitudes:
    """One-dimensional amplitude profiles of a mode sampled on ``x2``."""

    x2: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    omega: np.ndarray
    theta: np.ndarray
    q: np.ndarray

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x2", "phi", "dphi", "omega", "theta", "q"])
            for row in zip(self.x2, self.phi, self.dphi, self.omega, self.theta, self.q):
                w.writerow([f"{v:.17g}" for v in row])


def assemble_mode(mode, x2=None, n_points=201):
    """Amplitude profiles of a solved mode and the 2D field sampler.

    Returns ``(amplitudes, field)``; ``field`` samples (sigma, u1, u2, p)
    at (t, x1, x2).
    """
    if not mode.lambda_n > 0:
        raise ZeroDivisionError("mode has lambda_n = 0; omega is undefined")
    x = np.linspace(-1.0, 1.0, n_points) if x2 is None else np.asarray(x2, float)
    amps = ModeAmplitudes(x2=x, phi=mode.phi(x), dphi=mode.phi(x, 1),
                          omega=mode.omega(x), theta=mode.theta(x), q=mode.q(x))
    return amps, mode.field()


class NormalModeField:
    """Linear combination sum_j C_j e^{lam_j t} U_j of normal modes.

    Terms may sit at different wave numbers; each term is (C_j, GrowthMode).
    """

    def __init__(self, terms):
        self.terms = tuple((float(c), m) for c, m in terms)

    def __add__(self, other):
        return NormalModeField(self.terms + other.terms)

    def _parts(self, t, x1, x2):
        x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
        return x1, x2, [(c * np.exp(m.lambda_n * t), m) for c, m in self.terms]

    def sample(self, t, x1, x2):
        """(sigma, u1, u2, p) at time t and points (x1, x2)."""
        x1, x2, parts = self._parts(t, x1, x2)
        out = [np.zeros(x1.shape) for _ in range(4)]
        for a, m in parts:
            cs, sn = np.cos(m.k * x1), np.sin(m.k * x1)
            out[0] += a * cs * m.omega(x2)
            out[1] += a * sn * m.theta(x2)
            out[2] += a * cs * m.phi(x2)
            out[3] += a * cs * m.q(x2)
        return tuple(out)

    def velocity(self, t, x1, x2):
        return self.sample(t, x1, x2)[1:3]

    def velocity_gradient(self, t, x1, x2):
        """(d1 u1, d2 u1, d1 u2, d2 u2) at (x1, x2)."""
        x1, x2, parts = self._parts(t, x1, x2)
        out = [np.zeros(x1.shape) for _ in range(4)]
        for a, m in parts:
            cs, sn = np.cos(m.k * x1), np.sin(m.k * x1)
            th, dth = m.theta(x2), m.theta(x2, 1)
            ph, dph = m.phi(x2), m.phi(x2, 1)
            out[0] += a * m.k * cs * th
            out[1] += a * sn * dth
            out[2] -= a * m.k * sn * ph
            out[3] += a * cs * dph
        return tuple(out)
