"""Eigenvalues gamma_n(k, lam, mu) of the compact operator behind the growth problem.

For fixed (k, lam, mu) with B_{k,lam,mu} coercive, gamma_n and phi_n solve

    gamma_n B(phi_n, v) = int rho0' phi_n v   for all v,

i.e. the symmetric-definite pencil (M_rho_prime, B). Eigenvalues are
positive and accumulate only at zero.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .critical import mu_c_closed_form
from .errors import SubcriticalViscosityError
from .forms import coercivity_margin

TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectrumSlice:
    """The ``m`` largest gamma_n at one (k, lam, mu), largest first.

    ``eigenvectors[:, i]`` holds the basis coefficients of phi_{i+1}, scaled
    to unit L^2 norm with phi'(-1) >= 0 (phi(0) >= 0 if phi'(-1) vanishes).
    """

    k: float
    lam: float
    mu: float
    gammas: np.ndarray
    eigenvectors: np.ndarray


def _l2_gram(basis):
    v = basis.basis_values
    return (v * basis.quad_weights) @ v.T


def sign_changes(basis, coeffs):
    """Sign changes of the expansion on the quadrature grid."""
    vals = coeffs @ basis.basis_values
    scale = np.max(np.abs(vals))
    s = np.sign(vals[np.abs(vals) > 1e-10 * scale])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def normalize_modes(basis, vecs):
    """Unit L^2 norm and the deterministic sign convention, column by column."""
    vecs = np.array(vecs, dtype=float, copy=True)
    gram = _l2_gram(basis)
    at_zero = basis.coeffs @ np.array([(-1) ** (j // 2) if j % 2 == 0 else 0
                                       for j in range(basis.n_modes + 2)])
    for i in range(vecs.shape[1]):
        v = vecs[:, i]
        v /= np.sqrt(v @ gram @ v)
        slope = v @ basis.trace_d1_minus
        ref = slope if abs(slope) > 1e-12 * np.max(np.abs(v)) else v @ at_zero
        if ref < 0:
            v *= -1
    return vecs


def gamma_spectrum(ops, lam, mu, m):
    """Largest ``m`` eigenvalues gamma_n(k, lam, mu) with eigenfunctions.

    Raises
    ------
    SubcriticalViscosityError
        If the discrete form B is not positive definite.
    ValueError
        If ``m`` is not in 1 .. n_modes or ``lam < 0``.
    """
    n = ops.basis.n_modes
    if int(m) != m or not 1 <= m <= n:
        raise ValueError(f"m must be an integer in 1..{n}, got {m}")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    m = int(m)
    if mu <= 0 or coercivity_margin(ops, lam, mu) <= 0:
        mu_c = mu_c_closed_form(abs(ops.k), ops.slip)
        raise SubcriticalViscosityError(
            f"mu={mu:g} does not exceed the critical viscosity mu_c={mu_c:.6g} at k={ops.k:g}",
            mu_c=mu_c)
    B = ops.b_matrix(lam, mu)
    # Extra eigenpairs so ties at the cut-off can be ordered deterministically
    extra = min(n, m + 2)
    vals, vecs = linalg.eigh(ops.M_rho_prime, B, subset_by_index=[n - extra, n - 1])
    vals, vecs = vals[::-1], vecs[:, ::-1]
    vecs = normalize_modes(ops.basis, vecs)
    vals, vecs = _tiebreak(ops.basis, vals, vecs)
    return SpectrumSlice(k=ops.k, lam=float(lam), mu=float(mu),
                         gammas=vals[:m].copy(), eigenvectors=vecs[:, :m].copy())


def _tiebreak(basis, vals, vecs):
    order = list(range(vals.size))
    osc = [sign_changes(basis, vecs[:, i]) for i in order]
    # stable insertion sort; neighbours within TIE_TOL compare by oscillation
    for i in range(1, len(order)):
        j = i
        while j > 0:
            a, b = order[j - 1], order[j]
            if abs(vals[a] - vals[b]) <= TIE_TOL * abs(vals[a]) and osc[b] < osc[a]:
                order[j - 1], order[j] = b, a
                j -= 1
            else:
                break
    return vals[order], vecs[:, order]


def psi_identity_residual(ops, slice_):
    """Per pair |gamma B(phi, phi) - int rho0' phi^2| / int rho0' phi^2."""
    B = ops.b_matrix(slice_.lam, slice_.mu)
    out = []
    for g, v in zip(slice_.gammas, slice_.eigenvectors.T):
        rhs = v @ ops.M_rho_prime @ v
        out.append(abs(g * (v @ B @ v) - rhs) / rhs)
    return np.array(out)


def b_orthogonality_defect(ops, slice_):
    """Largest |phi_i^T B phi_j| over i != j (unit L^2 vectors)."""
    V = slice_.eigenvectors
    G = V.T @ ops.b_matrix(slice_.lam, slice_.mu) @ V
    off = G - np.diag(np.diag(G))
    return float(np.max(np.abs(off))) if off.size else 0.0


@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    lambda_grid: tuple
    gamma_table: np.ndarray  # (len(grid), m)
    failures: tuple  # (n, lam_i, lam_next) with n 1-based


def gamma_monotonicity_check(ops, mu, lambda_grid, m):
    """Check gamma_n(lam_i) > gamma_n(lam_{i+1}) for n <= m along an increasing grid."""
    grid = [float(x) for x in lambda_grid]
    if any(x < 0 for x in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be nonnegative and strictly increasing")
    table = np.array([gamma_spectrum(ops, lam, mu, m).gammas for lam in grid])
    failures = []
    for i in range(len(grid) - 1):
        for n in range(m):
            if not table[i, n] > table[i + 1, n]:
                failures.append((n + 1, grid[i], grid[i + 1]))
    return MonotonicityReport(not failures, tuple(grid), table, tuple(failures))
