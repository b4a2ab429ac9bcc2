from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from drlab.model import GroupParams, polar_constant, preset, radius, sphere_area
from drlab.profiles import AbelProfile, bump, gaussian, zero
from drlab.transforms import (
    SpectralFunction,
    abel_forward,
    abel_inverse,
    abel_inverse_even,
    abel_inverse_odd,
    abel_profile_of,
    derivative_stack,
    fourier_line,
    heat_spectral,
    inverse_fourier_line,
    inversion_constant,
    spherical_inverse,
    spherical_transform,
)

HEIS = preset("heis")
REAL_HYP = preset("real-hyp")
GAUSS = gaussian(1.0, 1.0, cutoff=1e-19)


# Fourier transform on the line

def test_fourier_gaussian():
    s = np.linspace(0, 6, 7)
    got = fourier_line(lambda x: np.exp(-x * x), s)
    np.testing.assert_allclose(got, np.sqrt(np.pi) * np.exp(-s * s / 4), atol=1e-10)


def test_fourier_zero():
    assert fourier_line(lambda x: 0.0 * x, 1.3, support=(-1, 1)) == 0


def test_fourier_odd_part_gives_imaginary():
    # g(x) = x e^{-x^2}: F g(s) = -i s sqrt(pi)/2 e^{-s^2/4}
    got = fourier_line(lambda x: x * np.exp(-x * x), 1.0)
    assert got == pytest.approx(-0.5j * math.sqrt(math.pi) * math.exp(-0.25), abs=1e-10)


def test_fourier_roundtrip_bump():
    b = bump(1.0)
    s_max = 200.0

    def G(s):
        return fourier_line(b, s, support=(-1, 1)).real

    t = np.array([0.0, 0.3, 0.7])
    # F^{-1} F b = b, integrand decays super-polynomially beyond s_max
    vals = [integrate.quad(lambda s: G(s) * math.cos(s * ti), 0, s_max, limit=2000)[0] / math.pi
            for ti in t]
    np.testing.assert_allclose(vals, b(t), atol=1e-8)


def test_inverse_fourier_gaussian():
    t = np.array([0.0, 1.0])
    got = inverse_fourier_line(lambda s: np.sqrt(np.pi) * np.exp(-s * s / 4), t)
    np.testing.assert_allclose(got.real, np.exp(-t * t), atol=1e-10)


def test_fourier_nonconvergent_raises():
    with pytest.raises(ValueError):
        fourier_line(lambda x: 1.0 + 0 * x, 0.0)


# forward Abel transform

def _abel_by_quad(f, t, g):
    """Nested adaptive quadrature of the reduced N-integral (independent of the trapezoid rule)."""
    a = math.exp(t)
    hi = f.support[1]
    norm = sphere_area(g.m_v) * (sphere_area(g.m_z) if g.m_z else 1.0) / polar_constant(g)
    if g.m_z == 0:
        val = integrate.quad(lambda x: f(float(radius((x, 0.0, a)))) * x ** (g.m_v - 1),
                             0, 60, limit=400, points=[1, 5, 10])[0]
    else:
        val = integrate.dblquad(
            lambda z, x: f(float(radius((x, z, a)))) * x ** (g.m_v - 1) * z ** (g.m_z - 1),
            0, 60, 0, 2 * math.sqrt(a) * math.cosh(hi / 2) + 1, epsabs=1e-13, epsrel=1e-11)[0]
    return norm * math.exp(-g.Q * t / 2) * val


@pytest.mark.parametrize("t", [0.0, 0.7, -1.5])
def test_abel_forward_matches_nested_quadrature(group, t):
    assert abel_forward(GAUSS, t, group) == pytest.approx(_abel_by_quad(GAUSS, t, group), rel=1e-8)


def test_abel_forward_zero(group):
    assert abel_forward(zero(), 0.5, group, support=5.0) == 0


def test_abel_forward_even(group):
    t = np.linspace(0.1, 4, 9)
    np.testing.assert_allclose(abel_forward(GAUSS, t, group), abel_forward(GAUSS, -t, group),
                               rtol=1e-6)


def test_abel_forward_needs_support():
    f = gaussian()
    f.support = (0.0, math.inf)
    with pytest.raises(ValueError):
        abel_forward(f, 0.0, HEIS)


def test_real_hyp_abel_of_gaussian_closed_form():
    # on (2,0) the inverse formula is a first-order operator, so A f = -∫ 2 sinh(s/2) f'... is
    # cross-checked by applying the inverse to the computed transform at the Gaussian
    F = abel_profile_of(GAUSS, REAL_HYP)
    r = np.linspace(0, 5, 11)
    np.testing.assert_allclose(abel_inverse_even(F, r, REAL_HYP), GAUSS(r), atol=1e-12)


# inverse Abel transform

@pytest.mark.parametrize("name, tol", [("real-hyp", 1e-4), ("heis", 1e-3), ("quat", 1e-3),
                                       ("(2,2)", 1e-4)])
def test_abel_roundtrip(name, tol):
    g = GroupParams(2, 2) if name == "(2,2)" else preset(name)
    F = abel_profile_of(GAUSS, g)
    r = np.linspace(0, 10, 101)
    err = np.max(np.abs(abel_inverse(F, r, g) - GAUSS(r)))
    assert err <= tol
    assert err < 1e-8  # measured headroom


def test_inversion_constant_values():
    # kappa * 2^{-(2 m_v + m_z)/2} * pi^{-(m_v+m_z)/2} (even), pi^{-n/2} (odd)
    g = REAL_HYP
    assert inversion_constant(g) == pytest.approx(polar_constant(g) / 4 / math.pi)
    g = HEIS
    assert inversion_constant(g) == pytest.approx(polar_constant(g) * 2**-2.5 * math.pi**-2)


def test_wrong_branch_raises():
    F = gaussian(cls=AbelProfile)
    with pytest.raises(ValueError):
        abel_inverse_even(F, 1.0, HEIS)
    with pytest.raises(ValueError):
        abel_inverse_odd(F, 1.0, REAL_HYP)


def test_inverse_needs_derivatives():
    F = AbelProfile(func=lambda t: np.exp(-t * t), support=(0, 6))
    with pytest.raises(ValueError, match="order"):
        abel_inverse(F, 1.0, HEIS)


def test_inverse_of_zero(group):
    assert abel_inverse(zero(AbelProfile), 0.5, group) == 0


@pytest.mark.parametrize("h", [4, 7])
def test_inverse_support_of_compact_profile(group, h):
    b = bump(1.0)
    shifted = AbelProfile(jet=lambda t, k: b.jet(t - (h - 1), k) + b.jet(t + (h - 1), k),
                          support=(h - 2, h))
    r = np.linspace(0, h + 2, 200)
    v = abel_inverse(shifted, r, group)
    assert np.all(v[r >= h] == 0)
    if group.even_center:
        assert np.all(v[r <= h - 2] == 0)


def test_derivative_stack_small_argument_consistency():
    F = gaussian(1.0, 0.5, cls=AbelProfile)
    for p, q in [(1, 0), (0, 1), (1, 1), (2, 1)]:
        a = derivative_stack(F, np.array([0.049999]), p, q)[0]
        b = derivative_stack(F, np.array([0.050001]), p, q)[0]
        assert a == pytest.approx(b, rel=1e-6)


def test_derivative_stack_first_order():
    F = gaussian(1.0, 1.0, cls=AbelProfile)
    s = np.array([0.3, 1.0, 2.0])
    np.testing.assert_allclose(derivative_stack(F, s, 0, 1)[0],
                               -F.derivative(s, 1) / np.sinh(s / 2), rtol=1e-13)
    np.testing.assert_allclose(derivative_stack(F, s, 1, 0)[0],
                               -F.derivative(s, 1) / np.sinh(s), rtol=1e-13)


@settings(max_examples=10, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.3, 2))
def test_linearity(a, b, rate):
    g = HEIS
    f1 = gaussian(1.0, 1.0, cls=AbelProfile)
    f2 = gaussian(1.0, rate, cls=AbelProfile)
    f2.support = f1.support = (0.0, max(f1.support[1], f2.support[1]))
    r = np.array([0.0, 0.5, 2.0])
    combo = abel_inverse(f1 * a + f2 * b, r, g)
    np.testing.assert_allclose(combo, a * abel_inverse(f1, r, g) + b * abel_inverse(f2, r, g),
                               rtol=1e-10, atol=1e-12)


# spherical transform

@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 2.0, 0.3j])
def test_two_routes_agree(group, lam):
    res = spherical_transform(GAUSS, lam, group, route="both")
    assert res.agree and res.rel_err < 1e-3
    assert res.rel_err < 1e-10  # measured headroom


def test_spherical_transform_of_zero(group):
    res = spherical_transform(zero(), 1.0, group, route="both")
    assert res.direct == 0 and res.via_abel == 0


def test_spherical_transform_array_and_errors():
    vals = spherical_transform(GAUSS, np.array([0.0, 1.0]), REAL_HYP)
    assert vals.shape == (2,)
    with pytest.raises(ValueError):
        spherical_transform(GAUSS, 1.0, REAL_HYP, route="sideways")


def test_spherical_inverse_heat_roundtrip(group):
    m = heat_spectral(0.5)
    f = spherical_inverse(m, group)
    for lam in (0.0, 0.5, 1.0, 2.0):
        assert spherical_transform(f, lam, group) == pytest.approx(m.func(lam), rel=1e-3)


def test_spherical_inverse_numeric_path():
    m = SpectralFunction(lambda lam: np.exp(-0.5 * np.asarray(lam) ** 2))
    f = spherical_inverse(m, REAL_HYP, abel_support=8.0)
    closed = spherical_inverse(heat_spectral(0.5), REAL_HYP)
    r = np.array([0.0, 1.0, 3.0])
    np.testing.assert_allclose(f(r), closed(r), atol=1e-9)
    with pytest.raises(ValueError):
        spherical_inverse(m, REAL_HYP)


def test_spherical_inverse_zero():
    m = SpectralFunction(lambda lam: 0.0 * np.asarray(lam), zero(AbelProfile))
    f = spherical_inverse(m, REAL_HYP)
    assert np.all(f(np.array([0.0, 1.0])) == 0)


def test_spherical_inverse_finite_propagation():
    # F^{-1} m supported in [-2, 2]: the inverse profile vanishes beyond r = 2.2
    m = SpectralFunction(lambda lam: lam, bump(2.0))
    f = spherical_inverse(m, REAL_HYP)
    r = np.linspace(0, 5, 501)
    v = np.abs(f(r))
    assert np.max(v[r > 2.2]) <= 1e-6 * np.max(v)
