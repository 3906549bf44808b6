import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pssbounds import bounds, fock, gaussian
from pssbounds.gaussian import StandardFormCM

from oracles import random_local_symplectic


def test_validate_cases():
    assert gaussian.validate(np.eye(4)).ok
    assert gaussian.validate(gaussian.twin_beam_cm(1.0)).ok
    bad = gaussian.validate(np.diag([0.5, 0.5, 1.0, 1.0]))
    assert not bad.ok and bad.min_eigenvalue < 0
    asym = np.eye(4)
    asym[0, 2] = 0.1
    assert not gaussian.validate(asym).ok


def test_as_cm_shape():
    with pytest.raises(ValueError):
        gaussian.as_cm(np.eye(3))


def test_standard_form_fixed_points():
    sf = gaussian.to_standard_form(gaussian.twin_beam_cm(1.0))
    c, s = math.cosh(2), math.sinh(2)
    assert (sf.a1, sf.a2, sf.gamma_x, sf.gamma_p) == pytest.approx((c, c, s, -s), rel=1e-12)
    vac = gaussian.to_standard_form(np.eye(4))
    assert (vac.a1, vac.a2, vac.gamma_x, vac.gamma_p) == pytest.approx((1, 1, 0, 0), abs=1e-15)


def test_standard_form_local_rotation():
    cm = gaussian.twin_beam_cm(0.8)
    t = 0.7
    rot = np.eye(4)
    rot[:2, :2] = [[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]]
    sf = gaussian.to_standard_form(rot @ cm @ rot.T)
    ref = gaussian.to_standard_form(cm)
    np.testing.assert_allclose(
        [sf.a1, sf.a2, sf.gamma_x, sf.gamma_p], [ref.a1, ref.a2, ref.gamma_x, ref.gamma_p], atol=1e-8
    )


def test_local_symplectics_preserve_omega():
    rng = np.random.default_rng(3)
    s = random_local_symplectic(rng)
    np.testing.assert_allclose(s @ gaussian.OMEGA @ s.T, gaussian.OMEGA, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=1.0, max_value=6.0),
    st.floats(min_value=1.0, max_value=6.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=0, max_value=2**31),
)
def test_standard_form_invariance_random(a1, a2, cx, seed):
    # build a physical CM from a thermal product state and a two-mode squeezer
    r = 0.5 * cx
    n1, n2 = a1, a2
    base = np.diag([n1, n1, n2, n2])
    ch, sh = math.cosh(r), math.sinh(r)
    sq = np.array([[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]])
    cm = sq @ base @ sq.T
    rng = np.random.default_rng(seed)
    s = random_local_symplectic(rng)
    ref = gaussian.to_standard_form(cm)
    got = gaussian.to_standard_form(s @ cm @ s.T)
    scale = max(ref.a1, ref.a2)
    np.testing.assert_allclose(
        [got.a1, got.a2, got.gamma_x, got.gamma_p],
        [ref.a1, ref.a2, ref.gamma_x, ref.gamma_p],
        atol=1e-9 * scale * scale,
    )
    assert ref.gamma_x >= abs(ref.gamma_p)


def test_standard_form_positive_gamma_p_sign():
    cm = StandardFormCM(3.0, 2.0, 0.5, 0.3).matrix()
    sf = gaussian.to_standard_form(cm)
    assert sf.gamma_p == pytest.approx(0.3)
    swapped = StandardFormCM(3.0, 2.0, 0.3, 0.5).matrix()
    sf2 = gaussian.to_standard_form(swapped)
    assert (sf2.gamma_x, sf2.gamma_p) == pytest.approx((0.5, 0.3))


def test_standard_form_is_symmetric():
    assert StandardFormCM(2.0, 2.0, 1.5, -1.5).is_symmetric()
    assert not StandardFormCM(2.0, 2.1, 1.5, -1.5).is_symmetric()
    assert not StandardFormCM(2.0, 2.0, 1.5, -1.4).is_symmetric()


def test_symplectic_spectrum_pure_states():
    for cm in (np.eye(4), gaussian.twin_beam_cm(1.3)):
        spec = gaussian.symplectic_spectrum(cm)
        assert (spec.nu_minus, spec.nu_plus) == pytest.approx((1.0, 1.0), abs=1e-9)


def test_symplectic_spectrum_pss_degenerate():
    z = math.tanh(1.0)
    a, g = bounds.cm_diagonal_element(1, z), bounds.cm_cross_element(1, z)
    spec = gaussian.symplectic_spectrum(bounds.pss_cm(1, z))
    nu = math.sqrt(a * a - g * g)
    assert spec.nu_minus == pytest.approx(nu, rel=1e-10)
    assert spec.nu_plus == pytest.approx(nu, rel=1e-10)


def test_symplectic_spectrum_against_determinant_formula():
    sf = StandardFormCM(3.0, 2.0, 1.2, -0.7)
    cm = sf.matrix()
    det_a, det_b, det_c = sf.a1**2, sf.a2**2, sf.gamma_x * sf.gamma_p
    delta = det_a + det_b + 2 * det_c
    disc = math.sqrt(delta * delta - 4 * np.linalg.det(cm))
    expected = (math.sqrt((delta - disc) / 2), math.sqrt((delta + disc) / 2))
    spec = gaussian.symplectic_spectrum(cm)
    assert (spec.nu_minus, spec.nu_plus) == pytest.approx(expected, rel=1e-12)


def test_symplectic_spectrum_rejects_unphysical():
    with pytest.raises(ValueError):
        gaussian.symplectic_spectrum(np.diag([0.5, 0.5, 1.0, 1.0]))


def test_gaussian_ef_symmetric_values():
    r = 1.0
    sf = StandardFormCM(math.cosh(2 * r), math.cosh(2 * r), math.sinh(2 * r), -math.sinh(2 * r))
    exact = fock.exact_entanglement(fock.PssPure(0, math.tanh(r)))
    assert gaussian.gaussian_ef_symmetric(sf) == pytest.approx(exact, abs=1e-9)
    assert gaussian.gaussian_ef_symmetric(StandardFormCM(1, 1, 0, 0)) == 0.0
    assert gaussian.gaussian_ef_symmetric(StandardFormCM(2, 2, 0.5, -0.5)) == 0.0


def test_gaussian_ef_rejects_asymmetric():
    with pytest.raises(gaussian.AsymmetricStateError):
        gaussian.gaussian_ef_symmetric(StandardFormCM(2.0, 3.0, 1.0, -1.0))


def test_gaussian_entropy():
    assert gaussian.gaussian_entropy(np.eye(4)) == 0.0
    assert gaussian.gaussian_entropy(gaussian.twin_beam_cm(2.0)) == pytest.approx(0.0, abs=1e-7)
    thermal = np.diag([3.0, 3.0, 1.0, 1.0])
    assert gaussian.gaussian_entropy(thermal) == pytest.approx(2 * math.log(2), rel=1e-12)
