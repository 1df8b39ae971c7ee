import numpy as np
import pytest

import frozen
from rtslip.basis import build_basis
from rtslip.errors import SubcriticalViscosityError
from rtslip.forms import SlipCoefficients, assemble
from rtslip.profile import make_profile
from rtslip.spectrum import (b_orthogonality_defect, gamma_monotonicity_check, gamma_spectrum,
                             psi_identity_residual, sign_changes)


def test_matches_finite_difference_oracle(canonical_profile):
    ops = assemble(build_basis(32), canonical_profile, 1.0, SlipCoefficients())
    sl = gamma_spectrum(ops, 0.0, 1.0, 5)
    np.testing.assert_allclose(sl.gammas, frozen.GAMMA_LAM0, rtol=1e-6)


def test_ordering_and_identities(slip_ops):
    sl = gamma_spectrum(slip_ops, 0.3, 1.0, 10)
    assert np.all(sl.gammas > 0)
    assert np.all(np.diff(sl.gammas) < 0)
    assert np.max(psi_identity_residual(slip_ops, sl)) <= 1e-9
    assert b_orthogonality_defect(slip_ops, sl) <= 1e-9


def test_normalization_and_sign(slip_ops, basis48):
    sl = gamma_spectrum(slip_ops, 0.0, 1.0, 6)
    w, v = basis48.quad_weights, basis48.basis_values
    for c in sl.eigenvectors.T:
        assert w @ (c @ v) ** 2 == pytest.approx(1.0, rel=1e-12)
        assert c @ basis48.trace_d1_minus >= 0


def test_eigenfunctions_oscillate_more_with_index(canonical_ops, basis48):
    sl = gamma_spectrum(canonical_ops, 0.0, 1.0, 5)
    assert [sign_changes(basis48, c) for c in sl.eigenvectors.T] == [0, 1, 2, 3, 4]


@pytest.mark.parametrize("c", [0.5, 2.0, 3.0])
def test_scaling_with_density_gradient(c):
    b = build_basis(32)
    base = gamma_spectrum(assemble(b, make_profile("linear", (5.0, 1.0)), 1.0,
                                   SlipCoefficients()), 0.0, 1.0, 4).gammas
    scaled = gamma_spectrum(assemble(b, make_profile("linear", (5.0, c)), 1.0,
                                     SlipCoefficients()), 0.0, 1.0, 4).gammas
    np.testing.assert_allclose(scaled, c * base, rtol=1e-12)


def test_compactness(canonical_ops):
    sl = gamma_spectrum(canonical_ops, 0.0, 1.0, 46)
    assert sl.gammas[-1] <= 0.01 * sl.gammas[0]


def test_errors(basis48, canonical_profile, canonical_ops):
    ops = assemble(basis48, canonical_profile, 1.0, SlipCoefficients(1.0, 1.0))
    with pytest.raises(SubcriticalViscosityError) as info:
        gamma_spectrum(ops, 0.0, 0.55, 1)
    assert info.value.mu_c == pytest.approx(0.5907842487848955)
    with pytest.raises(ValueError):
        gamma_spectrum(canonical_ops, 0.0, 1.0, 49)
    with pytest.raises(ValueError):
        gamma_spectrum(canonical_ops, -0.1, 1.0, 1)


def test_monotonicity(canonical_ops):
    rep = gamma_monotonicity_check(canonical_ops, 1.0, [0, 0.25, 0.5, 1.0], 5)
    assert rep.passed and rep.gamma_table.shape == (4, 5)
    assert gamma_monotonicity_check(canonical_ops, 1.0, [0.4], 3).passed
    rep = gamma_monotonicity_check(canonical_ops, 1.0, [0, 10], 1)
    assert rep.gamma_table[1, 0] < rep.gamma_table[0, 0]
    with pytest.raises(ValueError):
        gamma_monotonicity_check(canonical_ops, 1.0, [0.5, 0.2], 1)


def test_deterministic(canonical_ops):
    a = gamma_spectrum(canonical_ops, 0.2, 1.0, 4)
    b = gamma_spectrum(canonical_ops, 0.2, 1.0, 4)
    assert np.array_equal(a.gammas, b.gammas)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)
