"""Equilibrium density profiles rho0(x2) on [-1, 1]."""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar

from .errors import ProfileError

VALIDATION_POINTS = 2001
KINDS = ("linear", "exponential", "polynomial")


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """Validated increasing density profile.

    Attributes
    ----------
    kind : str
        One of ``linear``, ``exponential``, ``polynomial``.
    params : tuple of float
        ``(a, b)`` for linear ``a + b x`` and exponential ``a exp(b x)``;
        ascending power coefficients for polynomial.
    rho_minus, rho_plus : float
        rho0(-1) and rho0(+1).
    l0_inverse : float
        sup norm of rho0'/rho0 on [-1, 1].
    """

    kind: str
    params: tuple
    rho_minus: float = field(init=False)
    rho_plus: float = field(init=False)
    l0_inverse: float = field(init=False)

    def __post_init__(self):
        _validate(self)
        object.__setattr__(self, "rho_minus", float(self.rho(-1.0)))
        object.__setattr__(self, "rho_plus", float(self.rho(1.0)))
        object.__setattr__(self, "l0_inverse", _l0_inverse(self))

    def rho(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            a, b = self.params
            return a + b * x
        if self.kind == "exponential":
            a, b = self.params
            return a * np.exp(b * x)
        return Polynomial(self.params)(x)

    def drho(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return np.full_like(x, self.params[1])
        if self.kind == "exponential":
            a, b = self.params
            return a * b * np.exp(b * x)
        return Polynomial(self.params).deriv()(x)

    def to_dict(self):
        return {"kind": self.kind, "params": [float(p) for p in self.params]}


def _validate(profile):
    if profile.kind not in KINDS:
        raise ValueError(f"unknown profile kind {profile.kind!r}; expected one of {KINDS}")
    if profile.kind in ("linear", "exponential") and len(profile.params) != 2:
        raise ValueError(f"{profile.kind} profile takes two parameters (a, b)")
    if profile.kind == "polynomial" and len(profile.params) < 2:
        raise ValueError("polynomial profile needs at least a linear term")
    if not all(np.isfinite(profile.params)):
        raise ValueError("profile parameters must be finite")

    x = np.linspace(-1.0, 1.0, VALIDATION_POINTS)
    for name, values in (("rho0", profile.rho(x)), ("rho0'", profile.drho(x))):
        bad = np.flatnonzero(values <= 0.0)
        if bad.size:
            x_bad = float(x[bad[0]])
            raise ProfileError(
                f"{name} must be positive on [-1, 1]; {name}({x_bad:g}) = {values[bad[0]]:g}",
                abscissa=x_bad)


def _l0_inverse(profile):
    x = np.linspace(-1.0, 1.0, VALIDATION_POINTS)
    ratio = profile.drho(x) / profile.rho(x)
    i = int(np.argmax(ratio))
    best = float(ratio[i])
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
    res = minimize_scalar(lambda s: -float(profile.drho(s) / profile.rho(s)),
                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    return max(best, -float(res.fun))


def make_profile(kind, params):
    """Build and validate a density profile; raises ProfileError on sign violations."""
    return DensityProfile(kind=str(kind), params=tuple(float(p) for p in params))


def lambda_upper_bound(profile, g):
    """Upper bound sqrt(g / L0) on every characteristic value."""
    if not g > 0:
        raise ValueError(f"gravity must be positive, got {g}")
    return float(np.sqrt(g * profile.l0_inverse))
