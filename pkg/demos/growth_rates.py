"""Growth rates of the canonical linear profile at k = 1.

rho0 = 2 + x2 on (-1, 1), g = mu = 1, no-slip walls. The rates come out of
the fixed point g k^2 gamma_n(lam) = lam, one bisection per mode.
"""
from rtslip.basis import build_basis
from rtslip.forms import SlipCoefficients, assemble
from rtslip.growth import assemble_mode, decay_ratio, growth_sequence
from rtslip.profile import make_profile

profile = make_profile("linear", (2.0, 1.0))
for n in (32, 48, 64):
    ops = assemble(build_basis(n), profile, 1.0, SlipCoefficients())
    print(f"n = {n:2d}: lambda_1 = {growth_sequence(ops, 1.0, 1.0, 1)[0].lambda_n:.13f}")

ops = assemble(build_basis(48), profile, 1.0, SlipCoefficients())
modes = growth_sequence(ops, 1.0, 1.0, 6)
for m in modes:
    print(f"lambda_{m.n} = {m.lambda_n:.6e}  ode residual {m.ode_residual:.1e}  "
          f"bc residual {m.bc_residual:.1e}")
print("ratio lambda_n+1 / lambda_n:", decay_ratio(modes))

amps, _ = assemble_mode(modes[0], n_points=5)
print("phi_1 on five points:", amps.phi)
