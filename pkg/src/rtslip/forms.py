"""Matrices of the bilinear form B_{k,lam,mu} in the Chebyshev-difference basis.

    B(u, v) = lam * int rho0 (k^2 u v + u' v')
              + mu * int (u'' v'' + 2 k^2 u' v' + k^4 u v)
              - xi_minus u'(-1) v'(-1) - xi_plus u'(1) v'(1)

The slip conditions mu phi''(+-1) = +-xi_pm phi'(+-1) are natural for this
form; the basis only enforces phi(+-1) = 0.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg


@dataclass(frozen=True)
class SlipCoefficients:
    xi_minus: float = 0.0
    xi_plus: float = 0.0

    def __post_init__(self):
        for name in ("xi_minus", "xi_plus"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be a finite nonnegative number, got {v}")

    @property
    def is_zero(self):
        return self.xi_minus == 0 and self.xi_plus == 0


@dataclass(frozen=True, eq=False)
class AssembledOperators:
    """Dense matrices for one wave number.

    ``K_visc`` is the mu-weighted interior part, ``K_dens`` the lam-weighted
    part, ``M_rho_prime`` the rho0'-weighted mass matrix; the boundary part is
    kept as the two trace vectors ``t_minus`` and ``t_plus``.
    """

    k: float
    K_visc: np.ndarray
    K_dens: np.ndarray
    M_rho_prime: np.ndarray
    t_minus: np.ndarray
    t_plus: np.ndarray
    slip: SlipCoefficients
    profile: object
    basis: object

    @property
    def boundary(self):
        """Dense rank-2 boundary matrix xi_- t_- t_-^T + xi_+ t_+ t_+^T."""
        return (self.slip.xi_minus * np.outer(self.t_minus, self.t_minus)
                + self.slip.xi_plus * np.outer(self.t_plus, self.t_plus))

    def b_matrix(self, lam, mu):
        return lam * self.K_dens + mu * self.K_visc - self.boundary


def _gram(basis, weight, a, b):
    wa = basis.at_nodes(a) * (basis.quad_weights * weight)
    m = wa @ basis.at_nodes(b).T
    return 0.5 * (m + m.T)


def viscous_matrix(basis, k):
    """Gram matrix of int (u'' v'' + 2 k^2 u' v' + k^4 u v); k = 0 gives int u'' v''."""
    one = np.ones_like(basis.quad_nodes)
    k2 = float(k) ** 2
    m = _gram(basis, one, 2, 2)
    if k2:
        m = m + 2 * k2 * _gram(basis, one, 1, 1) + k2 * k2 * _gram(basis, one, 0, 0)
    return m


def assemble(basis, profile, k, slip):
    """Assemble the form matrices for wave number ``k`` (any sign, nonzero)."""
    k = float(k)
    if k == 0 or not np.isfinite(k):
        raise ValueError("wave number k must be finite and nonzero")
    x = basis.quad_nodes
    rho = profile.rho(x)
    k2 = k * k
    K_visc = viscous_matrix(basis, k)
    K_dens = k2 * _gram(basis, rho, 0, 0) + _gram(basis, rho, 1, 1)
    M = _gram(basis, profile.drho(x), 0, 0)
    return AssembledOperators(
        k=k, K_visc=K_visc, K_dens=K_dens, M_rho_prime=M,
        t_minus=basis.trace_d1_minus.copy(), t_plus=basis.trace_d1_plus.copy(),
        slip=slip, profile=profile, basis=basis)


def _check_vec(ops, u, name):
    u = np.asarray(u, dtype=float)
    if u.shape != (ops.basis.n_modes,):
        raise ValueError(f"{name} must have length {ops.basis.n_modes}, got shape {u.shape}")
    return u


def bilinear_value(ops, lam, mu, u, v):
    """B_{k,lam,mu}(u, v) for coefficient vectors u, v."""
    u = _check_vec(ops, u, "u")
    v = _check_vec(ops, v, "v")
    interior = lam * (u @ ops.K_dens @ v) + mu * (u @ ops.K_visc @ v)
    boundary = (ops.slip.xi_minus * (u @ ops.t_minus) * (v @ ops.t_minus)
                + ops.slip.xi_plus * (u @ ops.t_plus) * (v @ ops.t_plus))
    return float(interior - boundary)


def coercivity_margin(ops, lam, mu):
    """Smallest eigenvalue of the B-matrix; positive means discretely coercive."""
    if lam < 0 or mu <= 0:
        raise ValueError("need lam >= 0 and mu > 0")
    return float(linalg.eigvalsh(ops.b_matrix(lam, mu), subset_by_index=[0, 0])[0])
