"""Reference values produced by ``oracles.py`` before the solver existed.

Canonical configuration: rho0 = 2 + x2, g = 1, k = 1, mu = 1, no slip.
"""

# gamma_1 .. gamma_5 at lam = 0 (Richardson levels 125/250/500)
GAMMA_LAM0 = (0.0831748227, 0.00846393908, 0.00185684904, 0.000610313459, 0.000254490959)

# lambda_1 by bisection on the finite-difference gamma_1; n = 400 and n = 500
LAMBDA1_FD = (0.07952921896, 0.07952922699)

# mu_c(k=1, Xi=(1,1)) from the lam = 0 finite-difference operator, n = 400/500/600
MU_C_FD = (0.5907842432, 0.5907843870, 0.5907841696)
