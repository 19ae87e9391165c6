import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afield import diff
from afield.errors import InvalidStepError
from afield.field import (VACUUM, EHField, Medium, SourceModel, a_from_eh, charge_conservation_residual,
                          complex_charge, eh_from_a, energy_density, energy_law_residual, poynting)
from afield.shock import jump_space_projector
from afield.sources import born_charge, swirl_current

finite = st.floats(-1e3, 1e3, allow_nan=False)
vec = st.tuples(finite, finite, finite)
positive = st.floats(1e-3, 1e3)


def test_medium_speed_and_validation():
    m = Medium(4.0, 0.25)
    assert m.c * np.sqrt(m.epsilon * m.mu) == 1.0
    with pytest.raises(ValueError, match="medium.epsilon must be > 0"):
        Medium(-1.0, 1.0)
    with pytest.raises(ValueError, match="medium.mu must be > 0"):
        Medium(1.0, 0.0)


@pytest.mark.parametrize("E, H, m, expected", [
    ((0, 0, 0), (0, 0, 0), Medium(2.0, 3.0), (0, 0, 0)),
    ((1, 0, 0), (0, 1, 0), VACUUM, (1, 1j, 0)),
    ((1, 0, 0), (0, 0, 0), Medium(4.0, 1.0), (2, 0, 0)),
])
def test_a_from_eh_examples(E, H, m, expected):
    np.testing.assert_allclose(a_from_eh(EHField(np.array(E), np.array(H)), m), expected)


@pytest.mark.parametrize("a, m, E, H", [
    ((1, 1j, 0), VACUUM, (1, 0, 0), (0, 1, 0)),
    ((0, 0, 0), VACUUM, (0, 0, 0), (0, 0, 0)),
    ((2, 0, 0), Medium(4.0, 1.0), (1, 0, 0), (0, 0, 0)),
])
def test_eh_from_a_examples(a, m, E, H):
    f = eh_from_a(np.array(a, dtype=complex), m)
    np.testing.assert_allclose(f.E, E)
    np.testing.assert_allclose(f.H, H)


def test_complex_charge_examples():
    assert complex_charge(0.0) == 0.0
    assert complex_charge(1.0) == 1.0
    # A = x x_hat has div A = 1; with c = 2 the charge is 1/2
    A = lambda p: np.stack([p[:, 0], 0 * p[:, 0], 0 * p[:, 0]], axis=-1).astype(complex)
    m = Medium.from_speed(2.0)
    for x in ([0.1, 0.2, 0.3], [-1.0, 0.5, 2.0]):
        assert complex_charge(diff.divergence(A, x, 1e-3), m) == pytest.approx(0.5, abs=1e-10)


def test_energy_density_examples():
    assert energy_density(np.zeros(3, complex)) == 0.0
    assert energy_density(np.array([1, 1j, 0])) == 1.0


def test_poynting_examples():
    np.testing.assert_allclose(poynting(np.array([1, 1j, 0])), [0, 0, 1])
    np.testing.assert_array_equal(poynting(np.array([1.0, -2.0, 3.0], complex)), 0.0)
    np.testing.assert_array_equal(poynting(1j * np.array([1.0, -2.0, 3.0])), 0.0)


@settings(max_examples=200, deadline=None)
@given(vec, vec, positive, positive)
def test_round_trip_energy_and_poynting(E, H, eps, mu):
    E, H = np.array(E), np.array(H)
    m = Medium(eps, mu)
    a = a_from_eh(EHField(E, H), m)
    back = eh_from_a(a, m)
    np.testing.assert_allclose(back.E, E, rtol=1e-14, atol=1e-12)
    np.testing.assert_allclose(back.H, H, rtol=1e-14, atol=1e-12)
    scale = 1.0 + eps * E @ E + mu * H @ H
    assert abs(energy_density(a) - 0.5 * (eps * E @ E + mu * H @ H)) <= 1e-14 * scale
    ref = np.cross(E, H)
    assert np.max(np.abs(poynting(a, m) - ref)) <= 1e-13 * (1.0 + np.linalg.norm(E) * np.linalg.norm(H))


@settings(max_examples=200, deadline=None)
@given(vec, vec)
def test_cross_with_conjugate_is_imaginary(re, im):
    a = np.array(re) + 1j * np.array(im)
    assert np.all(np.cross(a, np.conj(a)).real == 0.0)


@settings(max_examples=100, deadline=None)
@given(finite, finite, st.floats(-10, 10), st.floats(-10, 10))
def test_complex_charge_is_linear(d1, d2, s1, s2):
    m = Medium(2.0, 0.5)
    lhs = complex_charge(s1 * d1 + s2 * d2, m)
    rhs = s1 * complex_charge(d1, m) + s2 * complex_charge(d2, m)
    assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))


def test_charge_residual_static_and_solenoidal():
    static = SourceModel(rho=lambda y, s: np.exp(-np.sum(y**2, -1)) + 0j,
                         j=lambda y, s: np.zeros(y.shape, complex), support_radius=np.inf)
    assert abs(charge_conservation_residual(static, [0.2, 0.1, 0.0], 0.3, 1e-3)) < 1e-12
    J = swirl_current(1.0, 5, (0.3, 0.2, 1.0))
    sol = SourceModel(rho=lambda y, s: np.zeros(len(y), complex), j=lambda y, s: J(y), support_radius=1.0)
    res = [abs(charge_conservation_residual(sol, [0.2, -0.1, 0.3], 0.0, h)) for h in (2e-3, 1e-3)]
    assert res[1] < 1e-6
    assert 3.5 < res[0] / res[1] < 4.5


def test_charge_residual_born_charge_decays():
    src, _ = born_charge(q=1.0, sigma=0.1)
    x, t = [0.05, -0.03, 0.08], 0.02
    res = [abs(charge_conservation_residual(src, x, t, h)) for h in (4e-3, 2e-3, 1e-3)]
    scale = abs(src.rho(np.array([x]), np.array([1.0]))[0]) / 0.1
    assert res[-1] < 1e-4 * scale
    assert res[2] < res[1] < res[0]
    assert 3.0 < res[0] / res[1] < 5.0


def test_step_validation():
    src = SourceModel.zero()
    with pytest.raises(InvalidStepError):
        charge_conservation_residual(src, [0, 0, 0], 0.0, 0.0)
    with pytest.raises(InvalidStepError):
        charge_conservation_residual(src, [1e3, 0, 0], 0.0, 1e-15)


def _plane_waves(m):
    """Two source-free plane waves of the field equation with admissible polarisations."""
    c = m.c
    dirs = [np.array([0.0, 0.0, 1.0]), np.array([0.6, 0.0, 0.8])]
    ks = [1.3, 2.1]
    amps = [jump_space_projector(d) @ np.array([1.0, 0.4j, 0.2]) for d in dirs]

    def A(pts, t):
        t = np.broadcast_to(np.asarray(t, dtype=float), (len(pts),))
        out = 0
        for d, k, a in zip(dirs, ks, amps):
            out = out + np.exp(1j * k * (pts @ d - c * t))[:, None] * a
        return out

    return A


def test_energy_law_zero_and_plane_wave():
    zero = SourceModel.zero()
    A0 = lambda pts, t: np.zeros((len(pts), 3), complex)
    assert energy_law_residual(A0, zero, VACUUM, [0, 0, 0], 0.0, 1e-3) == 0.0
    m = Medium(2.0, 0.5)
    A = _plane_waves(m)
    x, t = np.array([0.3, -0.2, 0.4]), 0.7
    res = [abs(energy_law_residual(A, zero, m, x, t, h)) for h in (0.04, 0.02, 0.01)]
    order = np.log2(res[0] / res[1]), np.log2(res[1] / res[2])
    assert all(1.8 < o < 2.2 for o in order)
