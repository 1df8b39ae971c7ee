"""How much viscosity does a slip wall need before the form B becomes coercive?

Prints mu_c(k) for a few slip pairs, next to the numeric Rayleigh quotient
maximum, the long-wave limit mu_c^s and the large-k bound.
"""
import numpy as np

from rtslip.basis import build_basis
from rtslip.critical import (mu_c_closed_form, mu_c_high_k_bound, mu_c_numeric, mu_c_sup,
                             small_k_coefficient)

basis = build_basis(48)
for slip in [(0.3, 0.3), (1.0, 0.0), (2.0, 0.5)]:
    print(f"slip (xi_minus, xi_plus) = {slip}, mu_c^s = {mu_c_sup(slip):.6f}, "
          f"k^2 coefficient = {small_k_coefficient(slip):.6f}")
    print(f"{'k':>6} {'closed form':>14} {'numeric':>14} {'high-k bound':>14}")
    for k in (0.1, 0.5, 1.0, 2.0, 5.0):
        num = mu_c_numeric(basis, k, slip).value
        print(f"{k:6.2f} {mu_c_closed_form(k, slip):14.10f} {num:14.10f} "
              f"{mu_c_high_k_bound(k, slip):14.10f}")
    print()

# mu_c decays like 1/k, so short waves are the easiest to stabilize
ks = np.array([10.0, 20.0, 40.0])
print("k * mu_c(k) for large k:", ks * [mu_c_closed_form(k, (1.0, 1.0)) for k in ks])
