from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drlab.model import GroupParams, preset
from drlab.spherical import (
    SphericalEvaluator,
    check_lemma21_bound,
    check_phi0_bound,
    eigenvalue,
    phi,
    radial_eigen_residual,
    spherical_evaluator,
    taylor_coefficients,
)

REAL_HYP = GroupParams(2, 0)


def jacobi_phi(lam, r, g):
    """Independent oracle: the Jacobi-function form 2F1(Q/2+i lam, Q/2-i lam; n/2; -sinh^2(r/2))."""
    return complex(mp.hyp2f1(g.Q / 2 + 1j * lam, g.Q / 2 - 1j * lam, g.n / 2, -mp.sinh(r / 2) ** 2))


def closed_form(lam, r):
    lam = complex(lam)
    if lam == 0:
        return r / (2 * np.sinh(r / 2))
    return np.sin(lam * r) / (2 * lam * np.sinh(r / 2))


def test_eigenvalue():
    g = preset("heis")
    assert eigenvalue(1.0, g) == pytest.approx(1 + 1)
    assert eigenvalue(1j * g.Q / 2, g) == pytest.approx(0)


def test_taylor_leading_coefficient(any_group):
    E = eigenvalue(0.7, any_group)
    c = taylor_coefficients(E, any_group)
    assert c[0] == 1
    assert c[1] == pytest.approx(-E / (2 * any_group.n))


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 0.3j])
def test_closed_form_real_hyperbolic(lam):
    r = np.linspace(0, 20, 801)[1:]
    err = np.max(np.abs(phi(lam, r, REAL_HYP) - closed_form(lam, r)))
    assert err < 1e-8


def test_closed_form_satisfies_radial_equation():
    r = np.linspace(0.5, 10, 20)
    res = radial_eigen_residual(1.0, r, REAL_HYP, func=lambda x: closed_form(1.0, x))
    assert np.max(res) < 1e-8


@pytest.mark.parametrize("name", ["real-hyp", "heis", "quat"])
@pytest.mark.parametrize("lam", [0.0, 0.7, 2.0, 0.3j, 1 + 0.5j])
def test_matches_jacobi_function_oracle(name, lam):
    g = preset(name)
    for r in (0.5, 3.0, 12.0):
        ref = jacobi_phi(lam, r, g)
        assert abs(complex(phi(lam, r, g)) - ref) <= 1e-8 * abs(ref)


# frozen reference values from the hypergeometric oracle (mpmath, 30 digits)
@pytest.mark.parametrize("name, lam, r, expected", [
    ("heis", 1.0, 2.0, 0.36178616945640802),
    ("heis", 0.5j, 3.0, 0.49483925797520103),
    ("quat", 0.0, 1.0, 0.68355806162971372),
])
def test_frozen_values(name, lam, r, expected):
    assert complex(phi(lam, r, preset(name))).real == pytest.approx(expected, rel=1e-9)


def test_value_at_origin_is_one(any_group):
    for lam in (0.0, 1.3, 0.4j):
        assert phi(lam, 0.0, any_group) == 1


def test_trivial_spherical_function(any_group):
    r = np.linspace(0, 25, 251)
    assert np.max(np.abs(phi(0.5j * any_group.Q, r, any_group) - 1)) < 1e-10


def test_trivial_function_residual_is_zero(any_group):
    res = radial_eigen_residual(0.5j * any_group.Q, np.array([1.0, 5.0]), any_group,
                                func=lambda x: np.ones_like(x))
    # stencil weights sum to zero only up to rounding, amplified by 1/step^2
    assert np.max(res) < 1e-11


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 3), st.floats(-1, 1), st.floats(0.01, 20))
def test_even_in_lambda(re, im, r):
    g = preset("heis")
    lam = complex(re, im)
    ev = SphericalEvaluator(lam, g)
    ev_neg = SphericalEvaluator(-lam, g)
    assert abs(ev(r) - ev_neg(r)) <= 1e-12 * max(1.0, abs(ev(r)))


def test_derivative_vanishes_at_origin(group):
    ev = spherical_evaluator(1.0, group)
    assert abs(ev.derivative(1e-6)) < 1e-5
    h = 1e-5
    fd = (ev(2.0 + h) - ev(2.0 - h)) / (2 * h)
    assert abs(ev.derivative(2.0) - fd) < 1e-8


def test_solver_residual_heis():
    r = np.linspace(0.5, 10, 39)
    assert np.max(radial_eigen_residual(1.0, r, preset("heis"))) < 1e-6


def test_range_errors():
    g = preset("heis")
    ev = SphericalEvaluator(1.0, g, r_max=5.0)
    with pytest.raises(ValueError):
        ev(6.0)
    with pytest.raises(ValueError):
        SphericalEvaluator(10j, g)
    with pytest.raises(ValueError):
        radial_eigen_residual(1.0, np.array([0.01]), g)


def test_phi0_bound_real_hyp_below_one():
    # closed form r/(2 sinh(r/2)) * e^{r/2}/(1+r) <= 1, with ratio -> 1 as r -> 0
    C = check_phi0_bound(REAL_HYP, np.linspace(1e-4, 25, 500))
    assert 0.99 < C <= 1.0 + 1e-9


def test_phi0_bound_heis_stable():
    a = check_phi0_bound(preset("heis"), np.linspace(0, 25, 251)[1:])
    b = check_phi0_bound(preset("heis"), np.linspace(0, 25, 501)[1:])
    assert abs(a - b) / b < 0.05
    assert b == pytest.approx(3.6329, rel=1e-3)


def test_lemma21_trivial_parameter():
    g = preset("heis")
    r = np.linspace(0.1, 25, 200)
    C = check_lemma21_bound(0.5j * g.Q, g, r)
    assert C == pytest.approx(1 / 1.1, rel=1e-9)


@pytest.mark.parametrize("lam", [0.0, 1.0, 0.5j, 1 + 0.25j])
def test_lemma21_stable(group, lam):
    a = check_lemma21_bound(lam, group, np.linspace(0, 25, 251)[1:])
    b = check_lemma21_bound(lam, group, np.linspace(0, 25, 501)[1:])
    assert np.isfinite(b) and max(a, b) / min(a, b) < 2


def test_real_lambda_dominated_by_phi0(group):
    r = np.linspace(0.1, 20, 100)
    assert np.all(np.abs(phi(1.3, r, group)) <= phi(0.0, r, group).real + 1e-10)
