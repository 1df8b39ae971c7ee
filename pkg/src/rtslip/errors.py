"""Exception types raised by the solver."""


class ProfileError(ValueError):
    """Density profile violates positivity of rho0 or rho0'."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class SubcriticalViscosityError(ValueError):
    """Viscosity does not exceed the critical value, so the form is not coercive."""

    def __init__(self, message, mu_c=None):
        super().__init__(message)
        self.mu_c = mu_c


class NoRootError(RuntimeError):
    """Characteristic-value bracket could not be established."""


class NoExtremalError(ValueError):
    """No extremal function exists (both slip coefficients vanish)."""


class ThresholdViolationError(ValueError):
    """Viscosity is not above three times the lattice critical viscosity."""


class NormalizationError(ValueError):
    """Mode combination cannot be checked against the normalization condition."""
