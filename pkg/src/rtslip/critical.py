"""Critical viscosity mu_c(k, Xi) for the Navier-slip slab.

mu_c(k, Xi) is the largest value of the boundary/interior quotient

    (xi_minus phi'(-1)^2 + xi_plus phi'(1)^2)
    / int (phi''^2 + 2 k^2 phi'^2 + k^4 phi^2)

over phi in H^2(-1, 1) with phi(+-1) = 0. The form B_{k,0,mu} is coercive
exactly when mu > mu_c(k, Xi).
"""
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import legendre as leg
from scipy import linalg

from .errors import NoExtremalError
from .forms import SlipCoefficients, viscous_matrix

LARGE_K = 20.0


@dataclass(frozen=True, eq=False)
class CriticalViscosityResult:
    value: float
    maximizer_coeffs: np.ndarray
    method: str


def _as_slip(slip):
    if isinstance(slip, SlipCoefficients):
        return slip
    xi_minus, xi_plus = slip
    return SlipCoefficients(xi_minus=float(xi_minus), xi_plus=float(xi_plus))


# Hyperbolic combinations with their small-argument cancellation removed.

def _sinh_minus_x(x):
    """sinh(x) - x."""
    if abs(x) >= 1.0:
        return math.sinh(x) - x
    term, total, n = x**3 / 6.0, 0.0, 1
    while abs(term) > 1e-18 * abs(total) or total == 0.0:
        total += term
        term *= x * x / ((2 * n + 2) * (2 * n + 3))
        n += 1
    return total


def _sinh_minus_x_cosh(x):
    """sinh(x) - x cosh(x), which is negative for x > 0."""
    if abs(x) >= 1.0:
        return math.sinh(x) - x * math.cosh(x)
    # -sum_{n>=1} 2n x^{2n+1} / (2n+1)!
    total, n = 0.0, 1
    power_over_fact = x**3 / 6.0
    while True:
        term = 2 * n * power_over_fact
        total -= term
        if abs(term) <= 1e-18 * abs(total):
            return total
        power_over_fact *= x * x / ((2 * n + 2) * (2 * n + 3))
        n += 1


def _scaled_terms(k):
    """(sinh2k cosh2k - 2k, sinh2k - 2k cosh2k, sinh^2 2k - 4k^2), each over sinh^2 2k."""
    if k > LARGE_K:
        e = math.exp(-4.0 * k)
        one_m = 1.0 - e
        coth = (1.0 + e) / one_m
        inv_s = 2.0 * math.exp(-2.0 * k) / one_m
        four_k2_over_s2 = 16.0 * k * k * e / one_m**2
        return (coth - 2.0 * k * 4.0 * e / one_m**2,
                inv_s * (1.0 - 2.0 * k * coth),
                1.0 - four_k2_over_s2)
    s = math.sinh(2.0 * k)
    s2 = s * s
    return (0.5 * _sinh_minus_x(4.0 * k) / s2,
            _sinh_minus_x_cosh(2.0 * k) / s2,
            _sinh_minus_x(2.0 * k) * (s + 2.0 * k) / s2)


def mu_c_closed_form(k, slip):
    """Exact critical viscosity for wave number k > 0."""
    slip = _as_slip(slip)
    k = float(k)
    if not k > 0:
        raise ValueError(f"mu_c_closed_form needs k > 0 (mu_c is even in k), got {k}")
    if slip.is_zero:
        return 0.0
    total = slip.xi_plus + slip.xi_minus
    diff = slip.xi_plus - slip.xi_minus
    a, d, q = _scaled_terms(k)
    return (a * total + math.sqrt(d * d * total * total + q * diff * diff)) / (4.0 * k)


def mu_c_sup(slip):
    """sup over k > 0 of mu_c(k, Xi), attained as k -> 0."""
    slip = _as_slip(slip)
    p, m = slip.xi_plus, slip.xi_minus
    return (p + m + math.sqrt(p * p - p * m + m * m)) / 3.0


def mu_c_lattice(length, slip):
    """sup of mu_c(k, Xi) over the lattice k in Z / L, i.e. mu_c(1 / L, Xi)."""
    if not length > 0:
        raise ValueError("period length L must be positive")
    return mu_c_closed_form(1.0 / length, slip)


def small_k_coefficient(slip):
    """Coefficient of k^2 in the small-k expansion of mu_c(k, Xi)."""
    slip = _as_slip(slip)
    p, m = slip.xi_plus, slip.xi_minus
    if slip.is_zero:
        return 0.0
    root = math.sqrt(p * p - p * m + m * m)
    return -2.0 / 45.0 * (4.0 * (p + m) + (4 * p * p - p * m + 4 * m * m) / root)


def mu_c_small_k(k, slip):
    """Two-term expansion mu_c^s + c2 k^2; the error is O(k^3)."""
    return mu_c_sup(slip) + small_k_coefficient(slip) * float(k) ** 2


def mu_c_high_k_bound(k, slip):
    """Upper bound sqrt(2 (xi_+^2 + xi_-^2)) / k, valid for every k > 0."""
    slip = _as_slip(slip)
    if not k > 0:
        raise ValueError("k must be positive")
    return math.sqrt(2.0 * (slip.xi_plus**2 + slip.xi_minus**2)) / float(k)


def beta_k_quadratic(k, slip, inv_beta):
    """Left side of the quadratic satisfied by 1/beta = mu_c(k) when xi_+ xi_- > 0.

    Returns ``(value, scale)`` where scale is the sum of term magnitudes.
    """
    slip = _as_slip(slip)
    p, m = slip.xi_plus, slip.xi_minus
    s, c = math.sinh(2 * k), math.cosh(2 * k)
    t0 = (s * s - 4 * k * k) * p * m
    t1 = -2 * k * (s * c - 2 * k) * (p + m) * inv_beta
    t2 = 4 * k * k * (c * c - 1) * inv_beta**2
    return t0 + t1 + t2, abs(t0) + abs(t1) + abs(t2)


def beta_0_quadratic(slip, beta0):
    """xi_- xi_+ beta0^2 - 2 (xi_+ + xi_-) beta0 + 3."""
    slip = _as_slip(slip)
    p, m = slip.xi_plus, slip.xi_minus
    return m * p * beta0**2 - 2 * (p + m) * beta0 + 3.0


def mu_c_numeric(basis, k, slip):
    """Discrete critical viscosity: top eigenvalue of the rank-2 pencil (A, K_visc).

    The returned maximizer is scaled so that the boundary form equals one,
    with phi'(1) >= 0 (phi'(-1) >= 0 when xi_plus = 0).
    """
    slip = _as_slip(slip)
    if not k > 0:
        raise ValueError("k must be positive")
    if slip.is_zero:
        return CriticalViscosityResult(0.0, np.zeros(0), "numeric")
    K = viscous_matrix(basis, k)
    try:
        factor = linalg.cho_factor(K)
    except linalg.LinAlgError as exc:
        raise ArithmeticError("viscous matrix is not positive definite") from exc
    T = np.column_stack([basis.trace_d1_minus, basis.trace_d1_plus])
    Z = linalg.cho_solve(factor, T)
    root_xi = np.sqrt([slip.xi_minus, slip.xi_plus])
    G = root_xi[:, None] * (T.T @ Z) * root_xi[None, :]
    vals, vecs = linalg.eigh(0.5 * (G + G.T))
    value = float(vals[-1])
    x = Z @ (root_xi * vecs[:, -1])
    x = _normalize_boundary(x, T, slip)
    return CriticalViscosityResult(value, x, "numeric")


def _normalize_boundary(x, T, slip):
    dm, dp = T.T @ x
    form = slip.xi_minus * dm * dm + slip.xi_plus * dp * dp
    x = x / math.sqrt(form)
    lead = dp if slip.xi_plus > 0 else dm
    return -x if lead < 0 else x


def rayleigh_quotient(basis, k, slip, trial_coeffs):
    """Boundary form over int(phi''^2 + 2k^2 phi'^2 + k^4 phi^2); k = 0 keeps phi'' only."""
    slip = _as_slip(slip)
    c = np.asarray(trial_coeffs, dtype=float)
    if c.shape != (basis.n_modes,):
        raise ValueError(f"trial must have {basis.n_modes} coefficients")
    if k < 0:
        raise ValueError("k must be nonnegative")
    denom = float(c @ viscous_matrix(basis, k) @ c)
    if not np.any(c) or denom <= 0:
        raise ValueError("trial function must be nonzero")
    dm = c @ basis.trace_d1_minus
    dp = c @ basis.trace_d1_plus
    return float((slip.xi_minus * dm * dm + slip.xi_plus * dp * dp) / denom)


class Extremal:
    """phi(x) = P(x) sinh(kx) + Q(x) cosh(kx) with polynomial P, Q.

    With k = 0 the sinh part drops out and phi = Q is a cubic.
    """

    def __init__(self, k, P, Q):
        self.k = float(k)
        self.P = P if isinstance(P, Polynomial) else Polynomial(P)
        self.Q = Q if isinstance(Q, Polynomial) else Polynomial(Q)

    def __call__(self, x, derivative=0):
        P, Q = self.P, self.Q
        for _ in range(derivative):
            P, Q = P.deriv() + self.k * Q, Q.deriv() + self.k * P
        x = np.asarray(x, dtype=float)
        return P(x) * np.sinh(self.k * x) + Q(x) * np.cosh(self.k * x)

    def scaled(self, factor):
        return Extremal(self.k, self.P * factor, self.Q * factor)

    def boundary_form(self, slip):
        slip = _as_slip(slip)
        dm, dp = self(np.array([-1.0, 1.0]), 1)
        return slip.xi_minus * dm * dm + slip.xi_plus * dp * dp

    def energy(self, n_quad=200):
        """int (phi''^2 + 2k^2 phi'^2 + k^4 phi^2) by Gauss-Legendre quadrature."""
        x, w = leg.leggauss(n_quad)
        k2 = self.k**2
        f = self(x, 2) ** 2 + 2 * k2 * self(x, 1) ** 2 + k2 * k2 * self(x) ** 2
        return float(f @ w)

    def quotient(self, slip, n_quad=200):
        return self.boundary_form(slip) / self.energy(n_quad)


def extremal_closed_form(k, slip):
    """Extremal function of the critical-viscosity quotient, in closed form.

    ``k > 0`` uses the hyperbolic family (A x + B) sinh(kx) + (C x + D) cosh(kx)
    with C = -B tanh k and D = -A tanh k; ``k = 0`` returns the cubic extremal
    of the k -> 0 supremum. The result satisfies the boundary constraint
    xi_- phi'(-1)^2 + xi_+ phi'(1)^2 = 1 with phi'(1) >= 0 (phi'(-1) >= 0
    when xi_plus = 0).
    """
    slip = _as_slip(slip)
    if slip.is_zero:
        raise NoExtremalError("no extremal: both slip coefficients vanish")
    k = float(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    p, m = slip.xi_plus, slip.xi_minus

    if k == 0:
        if m == 0:
            a_lin, b_const = 1.0, 3.0
        elif p == 0:
            a_lin, b_const = 1.0, -3.0
        else:
            beta = 1.0 / mu_c_sup(slip)
            a_lin, b_const = (1 - beta * m) / (3 - beta * m), 1.0
        cubic = Polynomial([-1.0, 0.0, 1.0]) * Polynomial([b_const, a_lin])
        ext = Extremal(0.0, [0.0], cubic.coef)
    else:
        t = math.tanh(k)
        if m == 0:
            A, B = -t * t, 1.0
        elif p == 0:
            A, B = -t * t, -1.0
        else:
            if p == m:
                # the odd part drops out when the walls are symmetric
                A, B = 1.0, 0.0
            else:
                beta_xi = min(p, m) / mu_c_closed_form(k, slip)
                two_k_over_s = 2 * k / math.sinh(2 * k) if k < LARGE_K else 4 * k * math.exp(-2 * k)
                # numerator and denominator of the (B / A) ratio, both divided by sinh 2k
                num = 2 * k / t - beta_xi * (1 + two_k_over_s)
                den = 2 * k * t - beta_xi * (1 - two_k_over_s)
                A, B = den, (num if p < m else -num)
        C, D = -B * t, -A * t
        ext = Extremal(k, [B, A], [D, C])

    ext = ext.scaled(1.0 / math.sqrt(ext.boundary_form(slip)))
    dm, dp = ext(np.array([-1.0, 1.0]), 1)
    lead = dp if p > 0 else dm
    return ext.scaled(-1.0) if lead < 0 else ext
