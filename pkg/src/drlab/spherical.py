"""Spherical functions as radial eigenfunctions of the Laplace-Beltrami operator.

``phi_lambda`` solves ``u'' + (A'/A) u' + (lambda**2 + Q**2/4) u = 0`` with
``u(0) = 1``.  Away from the origin the equation is integrated in Liouville
normal form ``w = S**a C**b u`` (``S = sinh(r/2)``, ``C = cosh(r/2)``), which
removes the first-order term; near the origin, a regular singular point, a
Taylor expansion supplies the initial data.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import bernoulli

from .model import GroupParams

__all__ = [
    "SphericalEvaluator",
    "SolverError",
    "spherical_evaluator",
    "phi",
    "eigenvalue",
    "check_phi0_bound",
    "check_lemma21_bound",
    "radial_eigen_residual",
    "log_derivative_A",
]

R_START = 1e-3
TAYLOR_TERMS = 4  # u = sum_{k<4} c_k r^{2k}, degree 6
RTOL = 1e-12
ATOL = 1e-14
MAX_IMAG = 5.0  # supported |Im lambda| beyond Q/2


class SolverError(RuntimeError):
    """The radial ODE integration did not converge."""


def eigenvalue(lam, g: GroupParams) -> complex:
    return complex(lam) ** 2 + g.Q**2 / 4


def log_derivative_A(r, g: GroupParams):
    """``A'(r) / A(r)``."""
    a, b = (g.m_v + g.m_z) / 2, g.m_z / 2
    half = 0.5 * np.asarray(r, dtype=float)
    return a / np.tanh(half) + b * np.tanh(half)


def _log_derivative_series(g: GroupParams, terms: int) -> np.ndarray:
    # r * A'/A = sum_j p_j r^{2j}
    a, b = (g.m_v + g.m_z) / 2, g.m_z / 2
    B = bernoulli(2 * terms)
    p = np.empty(terms)
    for j in range(terms):
        coth_part = 2.0 * B[2 * j] / math.factorial(2 * j)
        tanh_part = 0.0 if j == 0 else 2.0 * (4**j - 1) * B[2 * j] / math.factorial(2 * j)
        p[j] = a * coth_part + b * tanh_part
    return p


def taylor_coefficients(E: complex, g: GroupParams, terms: int = TAYLOR_TERMS) -> np.ndarray:
    """Coefficients ``c_k`` of ``u(r) = sum c_k r^{2k}`` near the origin."""
    p = _log_derivative_series(g, terms)
    c = np.zeros(terms, dtype=complex)
    c[0] = 1.0
    for m in range(1, terms):
        acc = -E * c[m - 1]
        for j in range(1, m):
            acc -= p[j] * c[m - j] * 2 * (m - j)
        c[m] = acc / (2 * m * (2 * m + g.n - 2))
    return c


class SphericalEvaluator:
    """Cached solution of the radial eigen-equation on ``[0, r_max]``.

    Depends on ``lam`` only through ``lam**2``, so ``phi_lambda = phi_{-lambda}``
    holds exactly.
    """

    def __init__(self, lam, g: GroupParams, r_max: float = 30.0):
        lam = complex(lam)
        if abs(lam.imag) > g.Q / 2 + MAX_IMAG:
            raise ValueError(f"|Im lambda| = {abs(lam.imag)} outside supported range "
                             f"<= Q/2 + {MAX_IMAG}")
        self.g = g
        self.lam = lam
        self.E = eigenvalue(lam, g)
        self.r_max = float(r_max)
        self._a = (g.m_v + g.m_z) / 2
        self._b = g.m_z / 2
        self._c = taylor_coefficients(self.E, g)
        if self.r_max > R_START:
            self._sol = self._integrate()
        else:
            self._sol = None

    def _weight(self, r):
        half = 0.5 * r
        return np.sinh(half) ** self._a * np.cosh(half) ** self._b

    def _potential(self, r):
        half = 0.5 * r
        S, C = np.sinh(half), np.cosh(half)
        a, b = self._a, self._b
        lead = 0.5 * a * C / S + 0.5 * b * S / C
        return lead * lead - a / (4 * S * S) + b / (4 * C * C)

    def _series(self, r, derivative: int = 0):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        for k, ck in enumerate(self._c):
            if derivative == 0:
                out = out + ck * r ** (2 * k)
            elif k > 0:
                out = out + ck * 2 * k * r ** (2 * k - 1)
        return out

    def _integrate(self):
        r0 = R_START
        u0, du0 = self._series(r0), self._series(r0, 1)
        half = 0.5 * r0
        wt = self._weight(r0)
        dwt = wt * (0.5 * self._a / np.tanh(half) + 0.5 * self._b * np.tanh(half))
        # rescale so the integrated quantity is O(1) at the start
        w0, dw0 = u0, (du0 * wt + u0 * dwt) / wt
        E = self.E

        def rhs(r, y):
            return [y[1], (self._potential(r) - E) * y[0]]

        sol = solve_ivp(rhs, (r0, self.r_max), [complex(w0), complex(dw0)],
                        method="DOP853", rtol=RTOL, atol=ATOL, dense_output=True)
        if not sol.success:
            raise SolverError(f"radial ODE failed for lambda={self.lam}: {sol.message} "
                              f"(nfev={sol.nfev}, reached r={sol.t[-1]:.4g})")
        self._w_scale = wt
        return sol

    def __call__(self, r):
        """``phi_lambda(r)`` (complex)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < 0) or np.any(r > self.r_max * (1 + 1e-12)):
            raise ValueError(f"r outside [0, r_max={self.r_max}]")
        out = np.empty(r.shape, dtype=complex)
        near = r < R_START
        out[near] = self._series(r[near])
        far = ~near
        if np.any(far):
            rf = r[far]
            w = self._sol.sol(rf)[0]
            out[far] = w * self._w_scale / self._weight(rf)
        return out if out.ndim else out[()]

    def derivative(self, r):
        """``d/dr phi_lambda(r)`` from the dense solution."""
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape, dtype=complex)
        near = r < R_START
        out[near] = self._series(r[near], 1)
        far = ~near
        if np.any(far):
            rf = r[far]
            w, dw = self._sol.sol(rf)
            wt = self._weight(rf)
            lead = 0.5 * self._a / np.tanh(0.5 * rf) + 0.5 * self._b * np.tanh(0.5 * rf)
            out[far] = self._w_scale * (dw - lead * w) / wt
        return out if out.ndim else out[()]


@lru_cache(maxsize=256)
def _cached(lam_sq: complex, m_v: int, m_z: int, r_max: float) -> SphericalEvaluator:
    return SphericalEvaluator(np.sqrt(lam_sq), GroupParams(m_v, m_z), r_max)


def spherical_evaluator(lam, g: GroupParams, r_max: float = 30.0) -> SphericalEvaluator:
    lam = complex(lam)
    # canonical square root so that lambda and -lambda share one cache entry
    key = complex(round((lam * lam).real, 15), round((lam * lam).imag, 15))
    return _cached(key, g.m_v, g.m_z, float(r_max))


def phi(lam, r, g: GroupParams, r_max: float | None = None):
    r_arr = np.asarray(r, dtype=float)
    need = float(np.max(r_arr)) if r_arr.size else 0.0
    return spherical_evaluator(lam, g, max(30.0, need) if r_max is None else r_max)(r)


def _sup_ratio(values, envelope) -> float:
    return float(np.max(np.abs(values) / envelope))


def check_phi0_bound(g: GroupParams, r_grid) -> float:
    """Sup over the grid of ``phi_0(r) / ((1 + r) exp(-Q r / 2))``."""
    r = np.asarray(r_grid, dtype=float)
    env = (1 + r) * np.exp(-0.5 * g.Q * r)
    return _sup_ratio(phi(0.0, r, g).real, env)


def check_lemma21_bound(lam, g: GroupParams, r_grid) -> float:
    """Sup over the grid of ``|phi_lambda(r)| / (exp(|Im lambda| r) (1 + r) exp(-Q r / 2))``."""
    lam = complex(lam)
    r = np.asarray(r_grid, dtype=float)
    env = np.exp((abs(lam.imag) - 0.5 * g.Q) * r) * (1 + r)
    return _sup_ratio(phi(lam, r, g), env)


# 8th-order central difference weights for first and second derivatives
_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def radial_eigen_residual(lam, r, g: GroupParams, func=None, step: float = 0.02):
    """``|u'' + (A'/A) u' + (lam**2 + Q**2/4) u|`` by central differences.

    ``func`` defaults to the cached solver solution; pass a callable to check
    any other candidate (e.g. a closed form).
    """
    u = spherical_evaluator(lam, g) if func is None else func
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r - 4 * step <= 0):
        raise ValueError("residual needs r > 4 * step")
    offsets = np.arange(-4, 5) * step
    vals = np.asarray(u(r[:, None] + offsets[None, :]), dtype=complex)
    d1 = vals @ _D1 / step
    d2 = vals @ _D2 / step**2
    res = np.abs(d2 + log_derivative_A(r, g) * d1 + eigenvalue(lam, g) * vals[:, 4])
    return res

