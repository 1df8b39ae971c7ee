import dataclasses

import numpy as np
import pytest

import frozen
from rtslip.basis import build_basis
from rtslip.errors import NoRootError, SubcriticalViscosityError
from rtslip.forms import SlipCoefficients, assemble
from rtslip.growth import (assemble_mode, continuity_defect, decay_ratio, growth_sequence,
                           horizontal_momentum_defect, solve_growth_rate, strong_form_residual,
                           verify_characteristic_identity, _f)
from rtslip.profile import make_profile


@pytest.fixture(scope="module")
def canonical_modes(canonical_ops):
    return growth_sequence(canonical_ops, 1.0, 1.0, 8)


@pytest.fixture(scope="module")
def slip_modes(slip_ops):
    return growth_sequence(slip_ops, 1.0, 1.0, 4)


def test_lambda1_against_oracle(canonical_modes):
    assert canonical_modes[0].lambda_n == pytest.approx(np.mean(frozen.LAMBDA1_FD), rel=1e-6)


def test_sequence_properties(canonical_modes):
    lams = [m.lambda_n for m in canonical_modes]
    assert all(a > b > 0 for a, b in zip(lams, lams[1:]))
    assert max(lams) <= 1.0
    assert 0 < decay_ratio(canonical_modes) < 1


def test_residuals(canonical_modes, slip_modes, canonical_ops, slip_ops):
    for modes, ops in ((canonical_modes, canonical_ops), (slip_modes, slip_ops)):
        for m in modes:
            assert m.fixed_point_residual <= 1e-6
            assert m.ode_residual <= 1e-6
            assert m.bc_residual <= 1e-6
            assert verify_characteristic_identity(m, ops) <= 1e-8
            assert continuity_defect(m) <= 1e-9
            assert horizontal_momentum_defect(m) <= 1e-6


def test_root_is_bracketed(canonical_ops, canonical_modes):
    m = canonical_modes[1]
    h = 10 * 1e-10
    assert _f(canonical_ops, 1.0, 1.0, 2, m.lambda_n - h) > 0 > _f(canonical_ops, 1.0, 1.0, 2, m.lambda_n + h)


def test_spectral_convergence(canonical_profile):
    lam = [solve_growth_rate(assemble(build_basis(n), canonical_profile, 1.0, SlipCoefficients()),
                             1.0, 1.0).lambda_n for n in (32, 64)]
    assert lam[0] == pytest.approx(lam[1], rel=1e-8)


def test_identity_is_sensitive_and_homogeneous(canonical_modes, canonical_ops):
    m = canonical_modes[0]
    bumped = dataclasses.replace(m, lambda_n=1.01 * m.lambda_n)
    assert verify_characteristic_identity(bumped, canonical_ops) > 1e-3
    scaled = dataclasses.replace(m, phi_coeffs=-3.0 * m.phi_coeffs)
    assert verify_characteristic_identity(scaled, canonical_ops) == pytest.approx(
        verify_characteristic_identity(m, canonical_ops), abs=1e-15)


def test_slip_boundary_conditions(slip_modes):
    m = slip_modes[0]
    d1 = m.phi(np.array([-1.0, 1.0]), 1)
    d2 = m.phi(np.array([-1.0, 1.0]), 2)
    scale = np.max(np.abs(m.phi(np.linspace(-1, 1, 201), 2)))
    assert abs(d2[1] - 0.3 * d1[1]) <= 1e-6 * scale
    assert abs(d2[0] + 0.3 * d1[0]) <= 1e-6 * scale
    assert strong_form_residual(m) <= 1e-6
    assert strong_form_residual(m, np.linspace(-0.9, 0.9, 50)) <= 1e-6


def test_zero_function_rejected(canonical_modes):
    zero = dataclasses.replace(canonical_modes[0], phi_coeffs=np.zeros(48))
    with pytest.raises(ValueError):
        strong_form_residual(zero)


def test_assemble_mode(canonical_modes, tmp_path):
    m = canonical_modes[0]
    amps, field = assemble_mode(m)
    assert np.allclose(amps.theta, -amps.dphi / m.k)
    assert np.allclose(amps.omega, -amps.phi / m.lambda_n)
    x1 = np.linspace(0, 2 * np.pi, 9)
    for x2 in (-1.0, 1.0):
        sigma, u1, u2, p = field.sample(0.5, x1, np.full_like(x1, x2))
        assert np.allclose(u2, 0.0, atol=1e-12)
    sigma, u1, u2, p = field.sample(0.0, 0.0, 0.3)
    assert u2 == pytest.approx(m.phi(0.3))
    sigma2, *_ = field.sample(2.0, 0.0, 0.3)
    assert sigma2 == pytest.approx(sigma * np.exp(2.0 * m.lambda_n))
    path = tmp_path / "mode.csv"
    amps.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x2,phi,dphi,omega,theta,q" and len(lines) == 202


def test_divergence_free(slip_modes):
    field = slip_modes[0].field(2.0) + slip_modes[1].field(-0.5)
    rng = np.random.default_rng(3)
    x1, x2 = rng.uniform(0, 6, 20), rng.uniform(-1, 1, 20)
    d11, _, _, d22 = field.velocity_gradient(0.1, x1, x2)
    assert np.max(np.abs(d11 + d22)) <= 1e-9


def test_errors(basis48, canonical_profile):
    ops = assemble(basis48, canonical_profile, 1.0, SlipCoefficients(1.0, 1.0))
    with pytest.raises(SubcriticalViscosityError):
        solve_growth_rate(ops, 1.0, 0.5)
    with pytest.raises(ValueError):
        solve_growth_rate(ops, 1.0, 1.0, n=0)
    with pytest.raises(ValueError):
        solve_growth_rate(ops, 1.0, 1.0, tol=0.0)


def test_no_root_error(monkeypatch, canonical_ops):
    import rtslip.growth as growth
    monkeypatch.setattr(growth, "_f", lambda *a: 1.0)
    with pytest.raises(NoRootError):
        growth.solve_growth_rate(canonical_ops, 1.0, 1.0)


def test_exponential_profile_bound():
    prof = make_profile("exponential", (1.0, 2.0))
    ops = assemble(build_basis(32), prof, 3.0, SlipCoefficients(0.5, 0.1))
    modes = growth_sequence(ops, 9.81, 1.0, 3)
    assert modes[0].lambda_n <= np.sqrt(9.81 * 2.0) + 1e-10
    assert all(m.ode_residual <= 1e-6 for m in modes)
