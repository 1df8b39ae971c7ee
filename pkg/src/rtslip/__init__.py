"""Linear Rayleigh-Taylor stability of a viscous, incompressible, stratified
fluid in the slab (-1, 1) with Navier-slip walls.

The package computes the critical viscosity mu_c(k, Xi), the growth rates
lambda_n(k) of the linearized problem with their normal modes, dispersion
curves, and the constants that enter the nonlinear instability argument.
"""
from .basis import SpectralBasis, build_basis, evaluate_expansion, project_polynomial
from .critical import (CriticalViscosityResult, Extremal, extremal_closed_form,
                       mu_c_closed_form, mu_c_high_k_bound, mu_c_lattice, mu_c_numeric,
                       mu_c_small_k, mu_c_sup, rayleigh_quotient)
from .dispersion import (DispersionCurve, Grid, Lattice, ModeCombination, NonlinearConstants,
                         capital_lambda, make_mode_combination, maximal_mode_inequality_check,
                         nonlinear_constants, solve_t_delta, sweep)
from .errors import (NoExtremalError, NoRootError, NormalizationError, ProfileError,
                     SubcriticalViscosityError, ThresholdViolationError)
from .forms import AssembledOperators, SlipCoefficients, assemble, bilinear_value, coercivity_margin
from .growth import (GrowthMode, NormalModeField, assemble_mode, growth_sequence,
                     solve_growth_rate, strong_form_residual, verify_characteristic_identity)
from .profile import DensityProfile, lambda_upper_bound, make_profile
from .spectrum import SpectrumSlice, gamma_monotonicity_check, gamma_spectrum

__version__ = "0.1.0"
