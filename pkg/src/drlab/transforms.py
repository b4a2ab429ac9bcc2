"""Line Fourier transform, Abel transform and its inverses, spherical transform.

Normalizations
--------------
``abel_forward`` integrates over the nilpotent factor with Lebesgue measure
divided by :func:`drlab.model.polar_constant`, which makes
``spherical_transform`` (``∫ phi_lambda f A dr``) equal to the line Fourier
transform of the Abel transform.  The inversion constants below are the ones
consistent with that normalization.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi, roots_legendre

from . import jets
from .model import GroupParams, density_A, polar_constant, radius, sphere_area
from .profiles import AbelProfile, ChebyshevProfile, DerivativeUnavailable, Profile, RadialProfile
from .spherical import spherical_evaluator

__all__ = [
    "fourier_line",
    "inverse_fourier_line",
    "abel_forward",
    "abel_profile_of",
    "inversion_constant",
    "derivative_stack",
    "abel_inverse",
    "abel_inverse_even",
    "abel_inverse_odd",
    "inverse_abel_profile",
    "spherical_transform",
    "TwoRoutes",
    "SpectralFunction",
    "heat_spectral",
    "spherical_inverse",
    "QuadratureError",
]

SMALL_T = 0.05  # below this, derivative stacks are evaluated from the jet at 0
GJ_NODES = 40
GL_NODES = 16
PANEL_WIDTH = 0.0625


class QuadratureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Fourier transform on the line


def _oscillatory(g: Callable, lo: float, hi: float, s: float, kind: str) -> float:
    if s == 0.0:
        if kind == "sin":
            return 0.0
        res = integrate.quad(g, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-12, full_output=1)
    elif math.isinf(hi) and s < 0.05:
        # QAWF silently returns 0 for tiny frequencies; the integrand is barely oscillatory
        trig = math.cos if kind == "cos" else math.sin
        res = integrate.quad(lambda x: g(x) * trig(s * x), lo, hi, limit=400,
                             epsabs=1e-14, epsrel=1e-12, full_output=1)
    elif math.isinf(hi):
        res = integrate.quad(g, lo, hi, weight=kind, wvar=s, limlst=200, full_output=1)
    else:
        res = integrate.quad(g, lo, hi, weight=kind, wvar=s, limit=400,
                             epsabs=1e-14, epsrel=1e-12, full_output=1)
    if len(res) > 3 and res[-1] and "roundoff" not in str(res[-1]).lower():
        raise ValueError(f"Fourier integral did not converge at s={s}: {res[-1]}")
    return res[0]


def fourier_line(g: Callable, s, support: tuple[float, float] | None = None):
    """``∫ g(r) exp(-i s r) dr`` (no ``2*pi`` factor).

    ``support`` is an interval of the real line containing the support of ``g``;
    without it the integral runs over the whole line and must converge.
    """
    lo, hi = support if support is not None else (-math.inf, math.inf)
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty(s_arr.shape, dtype=complex)
    gv = lambda x: float(g(x))  # noqa: E731
    gm = lambda x: float(g(-x))  # noqa: E731
    for i, si in enumerate(s_arr):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                if lo >= 0 or hi <= 0 or (math.isfinite(lo) and math.isfinite(hi)):
                    c = _oscillatory(gv, lo, hi, si, "cos")
                    sn = _oscillatory(gv, lo, hi, si, "sin")
                else:
                    # split at 0 so infinite tails use the Fourier-integral routine
                    c = _oscillatory(gv, 0, hi, si, "cos") + _oscillatory(gm, 0, -lo, si, "cos")
                    sn = _oscillatory(gv, 0, hi, si, "sin") - _oscillatory(gm, 0, -lo, si, "sin")
            except integrate.IntegrationWarning as exc:
                raise ValueError(f"Fourier integral did not converge at s={si}: {exc}") from None
        out[i] = c - 1j * sn
    return out if np.ndim(s) else out[0]


def inverse_fourier_line(G: Callable, t, support: tuple[float, float] | None = None):
    """``(1 / 2 pi) ∫ G(s) exp(i s t) ds``."""
    t_arr = np.asarray(t, dtype=float)
    return np.conj(fourier_line(lambda x: np.conj(G(x)), t_arr, support)) / (2 * np.pi)


# ---------------------------------------------------------------------------
# Abel transform


def _check_support(f: Profile) -> float:
    hi = f.support[1]
    if not math.isfinite(hi):
        raise ValueError(f"{f.name}: forward Abel transform needs a finite support hint")
    return hi


def abel_forward(f: Callable, t, g: GroupParams, step: float = 0.08,
                 support: float | None = None):
    """Abel transform ``e^{-Qt/2} ∫_N f(X, Z, e^t) dX dZ`` of a radial function.

    Reduced to a 1-D (``m_z = 0``) or 2-D integral over ``(|X|, |Z|)`` and
    evaluated with the trapezoid rule in logarithmic variables, which converges
    geometrically for these analytic, rapidly decaying integrands.  ``f``
    vanishes (numerically) for ``r > support``, defaulting to its hint.
    """
    hi = support if support is not None else _check_support(f)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t_arr.shape)
    norm = sphere_area(g.m_v) * (sphere_area(g.m_z) if g.m_z else 1.0) / polar_constant(g)
    for i, ti in enumerate(t_arr):
        if abs(ti) >= hi:
            continue
        a = math.exp(ti)
        c_hi = math.cosh(0.5 * hi)
        x_hi = 0.25 * math.log(64.0 * a) + 0.5 * math.log(c_hi) + 0.01
        x = np.arange(-37.0 / g.m_v, x_hi + step, step)
        xi = np.exp(x)
        if g.m_z == 0:
            vals = f(radius((xi, 0.0, a))) * xi**g.m_v
            total = vals.sum() * step
        else:
            y_hi = math.log(2.0 * math.sqrt(a) * c_hi) + 0.01
            y = np.arange(-37.0 / g.m_z, y_hi + step, step)
            zeta = np.exp(y)
            total = 0.0
            for chunk in np.array_split(np.arange(xi.size), max(1, xi.size // 64)):
                X = xi[chunk, None]
                vals = f(radius((X, zeta[None, :], a))) * X**g.m_v * zeta[None, :] ** g.m_z
                total += vals.sum()
            total *= step * step
        out[i] = norm * math.exp(-0.5 * g.Q * ti) * total
    return out if np.ndim(t) else out[0]


def abel_profile_of(f: Profile, g: GroupParams, degree: int = 128, step: float = 0.08) -> ChebyshevProfile:
    """Abel transform of ``f`` as an even Chebyshev profile with derivatives."""
    hi = _check_support(f)
    return ChebyshevProfile(lambda t: abel_forward(f, t, g, step=step, support=hi), hi,
                            degree=degree, name=f"abel[{f.name}]")


# ---------------------------------------------------------------------------
# derivative stacks and inverse Abel transform


def inversion_constant(g: GroupParams) -> float:
    base = polar_constant(g) * 2.0 ** (-(2 * g.m_v + g.m_z) / 2)
    if g.even_center:
        return base * math.pi ** (-(g.m_v + g.m_z) / 2)
    return base * math.pi ** (-g.n / 2)


def _apply(J: np.ndarray, s, ops: list[float], at_zero: bool) -> np.ndarray:
    for scale in ops:
        N = jets.deriv(J)
        if at_zero:
            N[0] = 0.0
            S = jets.sinh_affine(np.zeros(J.shape[1:]), scale, N.shape[0] - 1)
            J = -jets.shifted_quotient(N, S)
        else:
            J = -jets.mul(jets.recip(jets.sinh_affine(s, scale, N.shape[0] - 1)), N)
    return J


def derivative_stack(F: Profile, s, p: int, q: int, order: int = 0) -> np.ndarray:
    """Jet of ``(-(1/sinh s) d/ds)^p (-(1/sinh(s/2)) d/ds)^q F`` at ``s >= 0``.

    Returns an array of shape ``(order + 1, *s.shape)``; ``[0]`` holds values.
    For ``s`` below ``SMALL_T`` the result is the Taylor expansion about 0,
    which is regular because ``F`` is even.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("derivative_stack needs s >= 0")
    ops = [0.5] * q + [1.0] * p
    need = p + q + order
    out = np.empty((order + 1,) + s.shape)
    far = s >= SMALL_T
    if np.any(far):
        J = F.jet(s[far], need)
        out[:, far] = _apply(J, s[far], ops, False)
    if np.any(~far):
        K = 2 * len(ops) + order + 12
        J0 = F.jet(np.zeros(1), K)
        J0[1::2] = 0.0
        R = _apply(J0, None, ops, True)  # order K - 2 len(ops)
        sn = s[~far]
        # expand the jet about 0 and re-center at each small s
        for k in range(order + 1):
            dk = R[k:] * np.array([math.comb(j, k) for j in range(k, R.shape[0])])[:, None]
            out[k][~far] = jets.horner(dk, sn)
    return out


def _need_order(F: Profile, k: int) -> None:
    if not F.has_jets or (F.max_order is not None and F.max_order < k):
        raise DerivativeUnavailable(k, F.name)


def abel_inverse_even(F: Profile, r, g: GroupParams):
    """Inverse Abel transform for even ``m_z``: a pure differential operator."""
    if not g.even_center:
        raise ValueError(f"{g}: m_z is odd, use abel_inverse_odd")
    _need_order(F, (g.m_v + g.m_z) // 2)
    r_arr = np.abs(np.atleast_1d(np.asarray(r, dtype=float)))
    out = np.zeros(r_arr.shape)
    lo, hi = F.support
    live = (r_arr <= hi) & (r_arr >= lo)
    if np.any(live):
        vals = derivative_stack(F, r_arr[live], g.m_z // 2, g.m_v // 2)[0]
        out[live] = inversion_constant(g) * vals
    return out if np.ndim(r) else out[0]


def _odd_nodes(r: float, lo: float, hi: float):
    """Nodes/weights for ``∫_r^hi G(s) (cosh s - cosh r)^{-1/2} sinh s ds``."""
    start = max(r, lo)
    parts_s, parts_w = [], []
    if start - r < PANEL_WIDTH:
        # end on the panel grid so no panel straddles a grid point
        b = min(math.ceil((r + 0.5 * PANEL_WIDTH) / PANEL_WIDTH) * PANEL_WIDTH, hi)
        y1 = 2.0 * math.sinh(0.5 * (b + r)) * math.sinh(0.5 * (b - r))
        x, w = _gauss_jacobi()
        y = 0.5 * y1 * (1.0 + x)
        s = 2.0 * np.arcsinh(np.sqrt(math.sinh(0.5 * r) ** 2 + 0.5 * y))
        parts_s.append(s)
        parts_w.append(w * math.sqrt(0.5 * y1))
        a = b
    else:
        a = start
    if hi > a:
        grid = np.arange(math.floor(a / PANEL_WIDTH) + 1, math.ceil(hi / PANEL_WIDTH)) * PANEL_WIDTH
        edges = np.concatenate(([a], grid[(grid > a + 1e-9) & (grid < hi - 1e-9)], [hi]))
        x, w = _gauss_legendre()
        half = 0.5 * np.diff(edges)[:, None]
        s = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half * x[None, :]
        ws = half * w[None, :]
        s, ws = s.ravel(), ws.ravel()
        gap = 2.0 * np.sinh(0.5 * (s + r)) * np.sinh(0.5 * (s - r))
        parts_s.append(s)
        parts_w.append(ws * np.sinh(s) / np.sqrt(gap))
    if not parts_s:
        return np.empty(0), np.empty(0)
    return np.concatenate(parts_s), np.concatenate(parts_w)


_GJ = None
_GL = None


def _gauss_jacobi():
    global _GJ
    if _GJ is None:
        _GJ = roots_jacobi(GJ_NODES, 0.0, -0.5)
    return _GJ


def _gauss_legendre():
    global _GL
    if _GL is None:
        _GL = roots_legendre(GL_NODES)
    return _GL


def abel_inverse_odd(F: Profile, r, g: GroupParams):
    """Inverse Abel transform for odd ``m_z``: a singular integral over ``[r, ∞)``.

    The ``(cosh s - cosh r)^{-1/2}`` endpoint singularity is handled with a
    Gauss-Jacobi rule in ``y = cosh s - cosh r`` on the first panel; the rest
    uses composite Gauss-Legendre panels.  The integral stops at the upper end
    of ``F``'s support hint.
    """
    if g.even_center:
        raise ValueError(f"{g}: m_z is even, use abel_inverse_even")
    p, q = (g.m_z + 1) // 2, g.m_v // 2
    _need_order(F, p + q)
    lo, hi = F.support
    if not math.isfinite(hi):
        raise ValueError(f"{F.name}: odd-branch inversion needs a finite support hint")
    r_arr = np.abs(np.atleast_1d(np.asarray(r, dtype=float)))
    out = np.zeros(r_arr.shape)
    nodes, weights, owner = [], [], []
    for i, ri in enumerate(r_arr):
        if ri >= hi:
            continue
        s, w = _odd_nodes(float(ri), lo, hi)
        nodes.append(s)
        weights.append(w)
        owner.append(np.full(s.size, i))
    if nodes:
        s = np.concatenate(nodes)
        G = derivative_stack(F, s, p, q)[0]
        contrib = np.concatenate(weights) * G
        if not np.all(np.isfinite(contrib)):
            raise QuadratureError(f"{F.name}: non-finite integrand in odd-branch inversion")
        out += np.bincount(np.concatenate(owner), weights=contrib, minlength=r_arr.size)
    out *= inversion_constant(g)
    return out if np.ndim(r) else out[0]


def abel_inverse(F: Profile, r, g: GroupParams):
    if g.even_center:
        return abel_inverse_even(F, r, g)
    return abel_inverse_odd(F, r, g)


def inverse_abel_profile(F: Profile, g: GroupParams, name: str | None = None) -> RadialProfile:
    """Radial profile ``r -> A^{-1} F (r)`` (values only)."""
    lo, hi = F.support
    support = (lo, hi) if g.even_center else (0.0, hi)
    return RadialProfile(func=lambda r: abel_inverse(F, r, g), support=support,
                         name=name or f"abel_inv[{F.name}]")


# ---------------------------------------------------------------------------
# spherical transform


def _panels(lo: float, hi: float, width: float = 0.25, n: int = 20):
    npan = max(1, math.ceil((hi - lo) / width))
    edges = np.linspace(lo, hi, npan + 1)
    x, w = roots_legendre(n)
    half = 0.5 * np.diff(edges)[:, None]
    pts = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half * x[None, :]
    return pts.ravel(), (half * w[None, :]).ravel()


class TwoRoutes(NamedTuple):
    direct: complex
    via_abel: complex
    rel_err: float
    agree: bool


def spherical_transform(f: Profile, lam, g: GroupParams, route: str = "direct",
                        rtol: float = 1e-3, abel_values=None):
    """Spherical transform of a radial profile.

    ``route="direct"`` integrates ``phi_lambda f A`` over the radius,
    ``route="abel"`` takes the line Fourier transform of the Abel transform,
    ``route="both"`` returns :class:`TwoRoutes` (one per lambda for arrays).
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    lo, hi = f.support
    if not math.isfinite(hi):
        raise ValueError(f"{f.name}: spherical transform needs a finite support hint")
    if route not in ("direct", "abel", "both"):
        raise ValueError(f"unknown route {route!r}")
    direct = via = None
    if hi <= 0:
        zeros = np.zeros(lam_arr.shape, dtype=complex)
        direct = via = zeros
    if direct is None and route in ("direct", "both"):
        r, w = _panels(lo, hi)
        base = w * f(r) * density_A(r, g)
        direct = np.array([np.sum(base * spherical_evaluator(l, g, max(30.0, hi))(r))
                           for l in lam_arr])
    if via is None and route in ("abel", "both"):
        t, w = _panels(0.0, hi)
        Af = abel_forward(f, t, g, support=hi) if abel_values is None else abel_values(t)
        via = np.array([2.0 * np.sum(w * Af * np.cos(l * t)) for l in lam_arr])
    if route == "direct":
        return direct if np.ndim(lam) else direct[0]
    if route == "abel":
        return via if np.ndim(lam) else via[0]
    scale = max(np.max(np.abs(direct)), 1e-300)
    res = [TwoRoutes(d, v, 0.0 if d == v else float(abs(d - v) / max(abs(d), abs(v), 1e-300 * scale)),
                     bool(abs(d - v) <= rtol * max(abs(d), abs(v)) or d == v))
           for d, v in zip(direct, via)]
    return res if np.ndim(lam) else res[0]


class SpectralFunction(NamedTuple):
    """An even function of the spectral parameter, optionally with its Abel-side profile.

    ``abel_profile`` is the inverse line Fourier transform of ``func`` (with
    the ``1/(2 pi)``), i.e. the Abel transform of the radial function whose
    spherical transform is ``func``.
    """

    func: Callable
    abel_profile: Profile | None = None
    name: str = "m"


def heat_spectral(time: float) -> SpectralFunction:
    """``lambda -> exp(-time * lambda**2)`` with its closed-form Abel profile."""
    from .profiles import gaussian

    amp = math.sqrt(math.pi / time) / (2 * math.pi)
    prof = gaussian(amp, 1.0 / (4 * time), cls=AbelProfile)
    return SpectralFunction(lambda lam: np.exp(-time * np.asarray(lam) ** 2), prof,
                            f"heat({time:g})")


def spherical_inverse(m, g: GroupParams, abel_support: float | None = None,
                      degree: int = 128) -> RadialProfile:
    """Radial function with spherical transform ``m``, as ``A^{-1} F^{-1} m``.

    Uses ``m.abel_profile`` when available; otherwise ``F^{-1} m`` is computed
    by quadrature on Chebyshev nodes of ``[-abel_support, abel_support]``.
    """
    if isinstance(m, SpectralFunction) and m.abel_profile is not None:
        return inverse_abel_profile(m.abel_profile, g, name=f"Hinv[{m.name}]")
    func = m.func if isinstance(m, SpectralFunction) else m
    if abel_support is None:
        raise ValueError("numerical inversion needs abel_support (where F^{-1} m is negligible)")

    def samples(t):
        # m even: F^{-1} m (t) = (1/pi) ∫_0^∞ m(λ) cos(λ t) dλ
        h = lambda x: float(np.real(func(x)))  # noqa: E731
        return np.array([_oscillatory(h, 0.0, math.inf, float(ti), "cos") / math.pi
                         for ti in np.atleast_1d(t)])

    prof = ChebyshevProfile(samples, abel_support, degree=degree, name="Finv[m]")
    return inverse_abel_profile(prof, g, name="Hinv[m]")
