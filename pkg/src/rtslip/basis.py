"""Chebyshev-difference basis on (-1, 1) with Gauss-Legendre quadrature.

The basis functions are psi_j = T_{j+2} - T_j, j = 0 .. n_modes - 1. Each
vanishes at both endpoints, so the trial space is {phi in H^2 : phi(+-1) = 0}
and every other boundary condition is left to the weak form.
"""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as cheb
from numpy.polynomial import legendre as leg

MAX_ORDER = 4


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Basis values, derivatives and endpoint traces on a quadrature grid.

    Matrices ``basis_values`` and ``basis_d1`` .. ``basis_d4`` have one row per
    basis function and one column per quadrature node.
    """

    n_modes: int
    coeffs: np.ndarray  # (n_modes, n_modes + 2) Chebyshev coefficients
    quad_nodes: np.ndarray
    quad_weights: np.ndarray
    basis_values: np.ndarray
    basis_d1: np.ndarray
    basis_d2: np.ndarray
    basis_d3: np.ndarray
    basis_d4: np.ndarray
    trace_d1_minus: np.ndarray
    trace_d1_plus: np.ndarray
    trace_d2_minus: np.ndarray
    trace_d2_plus: np.ndarray

    def derivative_coeffs(self, order):
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"derivative order must be in 0..{MAX_ORDER}, got {order}")
        return _derivative_coeffs(self.coeffs, order)

    def at_nodes(self, order):
        """Basis derivative of the given order at the quadrature nodes."""
        return (self.basis_values, self.basis_d1, self.basis_d2,
                self.basis_d3, self.basis_d4)[order]

    def integrate(self, values):
        """Quadrature of nodal values (last axis runs over nodes)."""
        return np.asarray(values) @ self.quad_weights

    def __repr__(self):
        return f"SpectralBasis(n_modes={self.n_modes}, n_nodes={self.quad_nodes.size})"


def _derivative_coeffs(coeffs, order):
    if order == 0:
        return coeffs
    return cheb.chebder(coeffs, m=order, axis=1)


def quadrature_size(n_modes):
    """Number of Gauss-Legendre nodes used for a basis of ``n_modes`` functions.

    2 * n_modes nodes, raised to n_modes + 5 where needed so that products of
    two basis functions times a quartic weight are always integrated exactly.
    """
    return max(2 * n_modes, n_modes + 5)


def build_basis(n_modes):
    """Build the basis psi_j = T_{j+2} - T_j for j < n_modes."""
    if int(n_modes) != n_modes or n_modes < 4:
        raise ValueError(f"n_modes must be an integer >= 4, got {n_modes!r}")
    n_modes = int(n_modes)

    coeffs = np.zeros((n_modes, n_modes + 2))
    idx = np.arange(n_modes)
    coeffs[idx, idx + 2] = 1.0
    coeffs[idx, idx] = -1.0

    nodes, weights = leg.leggauss(quadrature_size(n_modes))
    values = [cheb.chebval(nodes, _derivative_coeffs(coeffs, m).T) for m in range(MAX_ORDER + 1)]
    ends = np.array([-1.0, 1.0])
    d1_ends = cheb.chebval(ends, _derivative_coeffs(coeffs, 1).T)
    d2_ends = cheb.chebval(ends, _derivative_coeffs(coeffs, 2).T)

    arrays = dict(
        coeffs=coeffs, quad_nodes=nodes, quad_weights=weights,
        basis_values=values[0], basis_d1=values[1], basis_d2=values[2],
        basis_d3=values[3], basis_d4=values[4],
        trace_d1_minus=d1_ends[:, 0], trace_d1_plus=d1_ends[:, 1],
        trace_d2_minus=d2_ends[:, 0], trace_d2_plus=d2_ends[:, 1],
    )
    for a in arrays.values():
        a.setflags(write=False)
    return SpectralBasis(n_modes=n_modes, **arrays)


def evaluate_expansion(basis, coeffs, points, derivative_order=0):
    """Values of sum_j coeffs[j] * psi_j^(derivative_order) at ``points``."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.n_modes,):
        raise ValueError(
            f"expected {basis.n_modes} coefficients, got shape {coeffs.shape}")
    points = np.asarray(points, dtype=float)
    if np.any(np.abs(points) > 1.0 + 1e-14):
        raise ValueError("evaluation points must lie in [-1, 1]")
    cheb_coeffs = coeffs @ basis.derivative_coeffs(derivative_order)
    return cheb.chebval(points, cheb_coeffs)


def project_polynomial(basis, poly_coeffs):
    """Basis coefficients of a power-series polynomial vanishing at +-1.

    ``poly_coeffs`` are ascending powers. Raises ValueError if the polynomial
    does not vanish at the endpoints or its degree exceeds n_modes + 1.
    """
    c = cheb.poly2cheb(np.asarray(poly_coeffs, dtype=float))
    if c.size > basis.n_modes + 2:
        raise ValueError("polynomial degree too high for this basis")
    c = np.pad(c, (0, basis.n_modes + 2 - c.size))
    # T_{j+2} - T_j telescopes: solve the upper-triangular system from the top
    a = np.zeros(basis.n_modes)
    for j in range(basis.n_modes - 1, -1, -1):
        a[j] = c[j + 2] + (a[j + 2] if j + 2 < basis.n_modes else 0.0)
    residual = c.copy()
    residual[2:] -= a
    residual[:basis.n_modes] += a
    scale = max(1.0, np.max(np.abs(c)))
    if np.max(np.abs(residual)) > 1e-12 * scale:
        raise ValueError("polynomial does not vanish at both endpoints")
    return a
