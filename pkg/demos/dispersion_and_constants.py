"""Dispersion over a periodic lattice and the constants of the nonlinear argument.

Period 2 pi L with L = 1, slip 0.3 on both walls, mu = 1. The maximal growth
rate Lambda over the lattice feeds the constants nu0, m1, m2.
"""
from rtslip.dispersion import Lattice, capital_lambda, nonlinear_constants, sweep
from rtslip.forms import SlipCoefficients
from rtslip.profile import make_profile

profile = make_profile("linear", (2.0, 1.0))
slip = SlipCoefficients(0.3, 0.3)
curve = sweep(profile, 1.0, 1.0, slip, Lattice(1.0, 8), m_modes=3)
for k, row, mc in zip(curve.k_values, curve.lambda_table, curve.mu_c_values):
    print(f"k = {k:4.1f}  mu_c = {mc:.5f}  lambda = {row}")
lam, k_star = capital_lambda(curve)
print(f"Lambda = {lam:.10f} at k = {k_star}")
print(nonlinear_constants(curve, 1.0, slip, 1.0).to_dict())
