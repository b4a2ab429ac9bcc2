"""Multipliers of the drift Laplacian: cutoffs, kernel pieces and admissibility checks.

The multiplier ``M`` acts on ``[alpha**2/4, ∞)``; its shifted form
``M_alpha(z) = M(z**2 + alpha**2/4)`` is even in ``z`` and ``hat`` denotes the
line Fourier transform of ``M_alpha`` (no ``2*pi``).  Kernels are obtained on
the Abel side: the Abel transform of the radial kernel of ``P(sqrt L)`` is
``F^{-1} P = hat(P) / (2 pi)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_legendre

from . import jets
from .model import DriftParam, GroupParams, density_A
from .profiles import AbelProfile, Profile, RadialProfile
from .spherical import spherical_evaluator
from .transforms import abel_inverse, derivative_stack, inverse_abel_profile

__all__ = [
    "smooth_step",
    "CutoffFamily",
    "SpectralMultiplier",
    "heat_multiplier",
    "resolvent_exp_multiplier",
    "constant_multiplier",
    "MultiplierContext",
    "parabolic_region_contains",
    "PoleStripResult",
    "IndeterminateError",
    "resolvent_pole_strip_test",
    "horm_seminorm",
    "HormReport",
    "local_symbol",
    "local_multiplier_horm_check",
    "NotInStripClass",
    "strip_class_check",
    "dyadic_piece",
    "kernel_kh",
    "dphhat_bound_check",
    "weighted_l1_norm",
    "local_kernel",
    "full_kernel",
    "default_heat_time",
]


# ---------------------------------------------------------------------------
# cutoff family


def _logistic_jet(gj: np.ndarray) -> np.ndarray:
    out = np.empty_like(gj)
    pos = gj[0] >= 0
    if np.any(pos):
        e = jets.exp(-gj[:, pos])
        e[0] += 1.0
        out[:, pos] = jets.recip(e)
    if np.any(~pos):
        e = jets.exp(gj[:, ~pos])
        d = e.copy()
        d[0] += 1.0
        out[:, ~pos] = jets.mul(e, jets.recip(d))
    return out


def smooth_step(x, order: int = 0, width: float = 0.5) -> np.ndarray:
    """Jet of a C-infinity step rising from 0 at ``-width/2`` to 1 at ``width/2``.

    Built from ``e^{-1/y} / (e^{-1/y} + e^{-1/(1-y)})``, which satisfies
    ``S(x) + S(-x) = 1``.
    """
    x = np.asarray(x, dtype=float)
    y0 = x / width + 0.5
    out = np.zeros((order + 1,) + x.shape)
    out[0][y0 >= 1.0] = 1.0
    # outside this band the step is 0 or 1 to far below double precision
    inside = (y0 > 1.0 / 700) & (y0 < 1.0 - 1.0 / 700)
    out[0][(y0 > 0.5) & ~inside & (y0 < 1.0)] = 1.0
    if np.any(inside):
        y = jets.variable(x[inside], order, 1.0 / width, 0.5)
        one_minus = -y
        one_minus[0] += 1.0
        gj = jets.recip(one_minus) - jets.recip(y)
        out[:, inside] = _logistic_jet(gj)
    return out


@dataclass(frozen=True)
class CutoffFamily:
    """``omega = 1_[-1/2, 1/2] * rho`` with ``rho`` a normalized bump of radius 1/4.

    Concretely ``omega(t) = S(t + 1/2) - S(t - 1/2)`` with ``S`` the smooth step
    of width 1/2, so the integer translates of ``omega`` telescope to 1.
    """

    step_width: float = 0.5

    def __post_init__(self) -> None:
        if not 0 < self.step_width <= 0.5:
            raise ValueError("step width must lie in (0, 1/2]")

    @property
    def omega_support(self) -> float:
        return 0.5 + 0.5 * self.step_width

    def omega_jet(self, t, order: int) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        w = self.step_width
        return smooth_step(t + 0.5, order, w) - smooth_step(t - 0.5, order, w)

    def omega(self, t):
        return self.omega_jet(t, 0)[0]

    def shifted(self, offsets, name: str) -> AbelProfile:
        offsets = tuple(float(o) for o in offsets)
        reach = max(abs(o) for o in offsets) + self.omega_support
        inner = min((abs(o) for o in offsets), default=0.0) - self.omega_support
        lo = max(0.0, inner) if all(o != 0 for o in offsets) and len({abs(o) for o in offsets}) == 1 else 0.0

        def jet(t, order):
            t = np.asarray(t, dtype=float)
            return sum(self.omega_jet(t - o, order) for o in offsets)

        return AbelProfile(jet=jet, support=(lo, reach), name=name)

    def omega_h(self, h: int) -> AbelProfile:
        """``omega(t - h + 1) + omega(t + h - 1)``, supported in ``[h-2, h]`` (and mirror)."""
        if h < 2:
            raise ValueError("omega_h is defined for h >= 2")
        return self.shifted((h - 1, -(h - 1)), f"omega_{h}")

    def eta(self) -> AbelProfile:
        """``omega + omega_2``, supported in ``[-2, 2]``."""
        return self.shifted((0.0, 1.0, -1.0), "eta")

    def partition_sum(self, t, h_range=range(-60, 61)):
        t = np.asarray(t, dtype=float)
        return sum(self.omega(t - h) for h in h_range)


# ---------------------------------------------------------------------------
# multipliers


@dataclass(frozen=True)
class SpectralMultiplier:
    """A test multiplier together with its shifted form and Fourier profile.

    ``M_alpha`` must accept complex arguments (it is also the holomorphic
    extension used by strip checks).  ``hat`` is the even profile of the
    line Fourier transform of ``M_alpha``; ``None`` when not integrable.
    ``singularities`` lists the poles of ``M_alpha`` (empty for entire ones).
    """

    family: str
    M: Callable
    M_alpha: Callable
    hat: Profile | None
    alpha: float
    singularities: tuple[complex, ...] = ()
    params: dict = field(default_factory=dict)

    def M_alpha_derivative(self, z, j: int, radius: float | None = None, nodes: int = 64):
        """``D^j M_alpha(z)`` by the Cauchy integral on a small circle."""
        return cauchy_derivative(self.M_alpha, z, j, radius or self.cauchy_radius(z), nodes)

    def cauchy_radius(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if not self.singularities:
            return np.full(z.shape, 0.1)
        dist = np.min(np.abs(z[..., None] - np.asarray(self.singularities)), axis=-1)
        return np.minimum(0.1, 0.5 * dist)


def default_heat_time(h_max: float) -> float:
    """Heat time for which the Fourier profile at ``h_max`` is about ``1e-50`` of its peak."""
    return h_max**2 / (4 * math.log(1e50))


def heat_multiplier(time: float, alpha: float) -> SpectralMultiplier:
    """``M(lambda) = exp(-time * lambda)``; ``M_alpha`` is a Gaussian."""
    if time <= 0:
        raise ValueError("heat time must be positive")
    pre = math.exp(-time * alpha**2 / 4)
    amp = pre * math.sqrt(math.pi / time)
    rate = 1.0 / (4 * time)
    hi = math.sqrt(745.0 / rate)

    def hat_jet(t, order):
        x = jets.variable(t, order)
        return amp * jets.exp(-rate * jets.mul(x, x))

    hat = AbelProfile(jet=hat_jet, support=(0.0, hi), name=f"heat_hat({time:g})")
    return SpectralMultiplier(
        family="heat",
        M=lambda lam: np.exp(-time * np.asarray(lam)),
        M_alpha=lambda z: pre * np.exp(-time * np.asarray(z) ** 2),
        hat=hat,
        alpha=float(alpha),
        params={"t": time},
    )


def resolvent_exp_multiplier(c: float, alpha: float) -> SpectralMultiplier:
    """``M_alpha(z) = 1 / (z**2 + c**2)``, i.e. ``M(w) = 1 / (w - alpha**2/4 + c**2)``.

    Its Fourier profile is ``(pi / c) exp(-c |t|)``, smooth away from ``t = 0``.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    amp = math.pi / c
    hi = 745.0 / c

    def hat_jet(t, order):
        t = np.asarray(t, dtype=float)
        if np.any(t == 0):
            raise ValueError("exp(-c|t|) is not differentiable at t = 0")
        sgn = np.sign(t)
        base = amp * np.exp(-c * np.abs(t))
        k = np.arange(order + 1).reshape((-1,) + (1,) * t.ndim)
        fact = np.array([math.factorial(i) for i in range(order + 1)]).reshape(k.shape)
        return base * (-c * sgn) ** k / fact

    hat = AbelProfile(func=lambda t: amp * np.exp(-c * np.abs(np.asarray(t))), jet=hat_jet,
                      support=(0.0, hi), name=f"resolvent_hat({c:g})")
    return SpectralMultiplier(
        family="resolvent-exp",
        M=lambda w: 1.0 / (np.asarray(w) - alpha**2 / 4 + c**2),
        M_alpha=lambda z: 1.0 / (np.asarray(z) ** 2 + c**2),
        hat=hat,
        alpha=float(alpha),
        singularities=(1j * c, -1j * c),
        params={"c": c},
    )


def constant_multiplier(value: float, alpha: float) -> SpectralMultiplier:
    return SpectralMultiplier("custom", M=lambda w: value + 0 * np.asarray(w),
                              M_alpha=lambda z: value + 0 * np.asarray(z), hat=None,
                              alpha=float(alpha), params={"value": value})


@dataclass(frozen=True)
class MultiplierContext:
    g: GroupParams
    alpha: float
    p: float
    beta: int = 3

    def __post_init__(self) -> None:
        DriftParam(self.alpha)
        if not (self.p > 1 and self.p != 2 and math.isfinite(self.p)):
            raise ValueError(f"p must lie in (1, ∞) minus {{2}}, got {self.p!r}")
        if int(self.beta) != self.beta or self.beta < 1:
            raise ValueError("beta must be a positive integer")
        if self.beta <= max(2, self.g.n / 2):
            warnings.warn(f"beta={self.beta} <= max(2, n/2) = {max(2, self.g.n / 2)}: "
                          "below the regularity needed for boundedness", stacklevel=2)

    @property
    def W(self) -> float:
        return abs(self.alpha) * abs(1 / self.p - 0.5)

    @property
    def phi_p_star(self) -> float:
        return math.asin(abs(2 / self.p - 1))

    @property
    def weight_lambda(self) -> complex:
        """Spectral parameter of the spherical function carrying the character weight."""
        return 1j * self.alpha * (1 / self.p - 0.5)


# ---------------------------------------------------------------------------
# parabolic region and resolvent poles


def parabolic_region_contains(x, y, ctx: MultiplierContext):
    s2 = math.sin(ctx.phi_p_star) ** 2
    c2 = math.cos(ctx.phi_p_star) ** 2
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return x > y * y / (ctx.alpha**2 * s2) + ctx.alpha**2 / 4 * c2


def _region_margin(x, y, ctx):
    s2 = math.sin(ctx.phi_p_star) ** 2
    c2 = math.cos(ctx.phi_p_star) ** 2
    return x - (y * y / (ctx.alpha**2 * s2) + ctx.alpha**2 / 4 * c2)


class IndeterminateError(ValueError):
    """The point lies within the tolerance band around the region boundary."""


class PoleStripResult(NamedTuple):
    in_region: bool
    poles_in_strip: bool

    @property
    def agree(self) -> bool:
        return self.in_region == self.poles_in_strip


def resolvent_pole_strip_test(w: complex, ctx: MultiplierContext, band: float = 1e-8) -> PoleStripResult:
    """Compare membership of ``w`` in the parabolic region with the pole location of
    ``M_alpha`` for ``M(z) = 1 / (w - z)``: poles at ``z**2 = w - alpha**2/4``."""
    w = complex(w)
    root = np.sqrt(w - ctx.alpha**2 / 4)
    poles_in = abs(root.imag) < ctx.W
    margin = _region_margin(w.real, w.imag, ctx)
    if abs(margin) <= band * (1 + abs(w)) or abs(abs(root.imag) - ctx.W) <= band:
        raise IndeterminateError(f"w={w} lies on the region boundary (margin {margin:.3g})")
    return PoleStripResult(bool(parabolic_region_contains(w.real, w.imag, ctx)), bool(poles_in))


# ---------------------------------------------------------------------------
# Mihlin-Hormander seminorms


def _derivatives_from(M, derivative, v: np.ndarray, jmax: int) -> np.ndarray:
    if derivative is not None:
        return np.array([np.asarray(derivative(v, j)) * np.ones_like(v) for j in range(jmax + 1)])
    if hasattr(M, "jet"):
        J = M.jet(v, jmax)
        fact = np.array([math.factorial(j) for j in range(jmax + 1)])[:, None]
        return J * fact
    raise ValueError(f"derivatives up to order {jmax} are unavailable: pass derivative= "
                     "or an object with a jet method")


def horm_seminorm(M, s0: int, s_inf: int, derivative=None, v_min: float = 1e-6,
                  v_max: float = 1e4, n: int = 400) -> tuple[float, float]:
    """``(max_j sup_{0<v<1} |v^j D^j M|, max_j sup_{v>=1} |v^j D^j M|)`` on log grids."""
    v0 = np.geomspace(v_min, 1.0, n, endpoint=False)
    v1 = np.geomspace(1.0, v_max, n)
    vals = []
    for v, s in ((v0, s0), (v1, s_inf)):
        D = _derivatives_from(M, derivative, v, s)
        powers = v[None, :] ** np.arange(s + 1)[:, None]
        vals.append(float(np.max(np.abs(powers * D))))
    return vals[0], vals[1]


class _JetFunction:
    def __init__(self, jet: Callable):
        self.jet = jet

    def __call__(self, v):
        return self.jet(np.asarray(v, dtype=float), 0)[0]


def local_symbol(M: SpectralMultiplier, cut: CutoffFamily, nodes: int = 2000):
    """``v -> N(sqrt v)`` with ``N = F^{-1}(eta * hat)``, as a jet-capable function."""
    if M.hat is None:
        raise ValueError(f"{M.family}: the Fourier profile of M_alpha is not an integrable "
                         "function; the local symbol is undefined")
    eta = cut.eta()
    T = eta.support[1]
    x, w = roots_legendre(nodes)
    t = 0.5 * T * (x + 1)
    wt = 0.5 * T * w * eta(t) * M.hat(t) / math.pi  # N(λ) = (1/π) ∫_0^T η hat cos(λt) dt

    def n_jet(lam, order):
        phase = lam[..., None] * t
        out = np.empty((order + 1,) + lam.shape)
        tk = np.ones_like(t)
        for k in range(order + 1):
            out[k] = np.cos(phase + 0.5 * k * math.pi) @ (wt * tk) / math.factorial(k)
            tk = tk * t
        return out

    def jet(v, order):
        v = np.asarray(v, dtype=float)
        root = jets.sqrt(jets.variable(v, order))
        return jets.compose(n_jet(root[0], order), root)

    return _JetFunction(jet)


@dataclass
class HormReport:
    val0: float
    val_inf: float
    val0_fine: float
    val_inf_fine: float
    s0: int
    s_inf: int

    @property
    def finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.val0, self.val_inf, self.val0_fine, self.val_inf_fine))

    @property
    def stable(self) -> bool:
        return (self.finite and _within(self.val0, self.val0_fine, 2.0)
                and _within(self.val_inf, self.val_inf_fine, 2.0))


def _within(a: float, b: float, factor: float) -> bool:
    if a == b:
        return True
    if a <= 0 or b <= 0:
        return False
    return max(a, b) / min(a, b) < factor


def local_multiplier_horm_check(M: SpectralMultiplier, ctx: MultiplierContext, s0: int = 2,
                                s_inf: int | None = None, cut: CutoffFamily | None = None,
                                n: int = 400, v_max: float = 1e4) -> HormReport:
    """Seminorms of the local symbol ``v -> (eta^ * M_alpha)(sqrt v)``, on a grid and its doubling."""
    cut = cut or CutoffFamily()
    if s_inf is None:
        s_inf = math.ceil(ctx.g.n / 2) + 1
    N = local_symbol(M, cut)
    coarse = horm_seminorm(N, s0, s_inf, n=n, v_max=v_max)
    fine = horm_seminorm(N, s0, s_inf, n=2 * n, v_max=v_max)
    return HormReport(coarse[0], coarse[1], fine[0], fine[1], s0, s_inf)


# ---------------------------------------------------------------------------
# strip class


def cauchy_derivative(f: Callable, z, j: int, radius, nodes: int = 64):
    z = np.asarray(z, dtype=complex)
    radius = np.broadcast_to(np.asarray(radius, dtype=float), z.shape)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    circle = np.exp(1j * theta)
    vals = f(z[..., None] + radius[..., None] * circle)
    return math.factorial(j) * np.mean(vals * circle ** (-j), axis=-1) / radius**j


class NotInStripClass(ValueError):
    pass


def _rectangle_integral(f: Callable, S: float, y0: float, y1: float) -> complex:
    """Counter-clockwise integral of ``f`` around ``[-S, S] x [y0, y1]``."""
    def edge(path, a, b):
        val, _ = quad(path, a, b, complex_func=True, limit=400, epsabs=1e-13, epsrel=1e-11)
        return val

    bottom = edge(lambda x: f(x + 1j * y0), -S, S)
    top = edge(lambda x: f(x + 1j * y1), -S, S)
    right = 1j * edge(lambda y: f(S + 1j * y), y0, y1)
    left = 1j * edge(lambda y: f(-S + 1j * y), y0, y1)
    return bottom + right - top - left


def strip_class_check(M: SpectralMultiplier, ctx: MultiplierContext, beta: int | None = None,
                      S: float = 50.0, n: int = 2001) -> float:
    """Smallest ``C`` with ``|D^j M_alpha(s ± iW)| <= C (1 + s^2)^{-j/2}`` on the grid.

    Raises :class:`NotInStripClass` when ``M_alpha`` has a singularity in the
    closed strip, either listed by the multiplier or detected by a nonzero
    contour integral over the upper/lower half rectangles.
    """
    beta = ctx.beta if beta is None else beta
    W = ctx.W
    for pole in M.singularities:
        if abs(complex(pole).imag) <= W:
            raise NotInStripClass(f"M_alpha has a pole at {pole} inside |Im z| <= {W:g}")
    with np.errstate(all="ignore"):
        ref = np.max(np.abs(M.M_alpha(np.linspace(-S, S, 201) + 0j))) + 1e-300
        for y0, y1 in ((0.0, W), (-W, 0.0)):
            ci = _rectangle_integral(M.M_alpha, min(S, 20.0), y0, y1)
            if not np.isfinite(ci) or abs(ci) > 1e-8 * ref * max(1.0, W):
                raise NotInStripClass(f"contour integral {ci:.3g} over the strip half "
                                      f"[{y0:g}, {y1:g}] is nonzero")
    s = np.linspace(-S, S, n)
    C = 0.0
    for sign in (1, -1):
        z = s + sign * 1j * W
        rad = M.cauchy_radius(z)
        for j in range(beta + 1):
            if j == 0:
                d = M.M_alpha(z)
            else:
                d = cauchy_derivative(M.M_alpha, z, j, rad)
            if not np.all(np.isfinite(d)):
                raise NotInStripClass("non-finite boundary derivative")
            C = max(C, float(np.max(np.abs(d) * (1 + s * s) ** (j / 2))))
    return C


# ---------------------------------------------------------------------------
# dyadic pieces and kernels


def dyadic_piece(M: SpectralMultiplier, cut: CutoffFamily, h: int) -> AbelProfile:
    """``omega_h * hat``: the Fourier profile of the ``h``-th global piece."""
    if h < 3:
        raise ValueError("global pieces start at h = 3")
    if M.hat is None:
        raise ValueError(f"{M.family}: no Fourier profile")
    piece = cut.omega_h(h) * M.hat
    piece.name = f"P_{h}"
    return piece


def _abel_side(profile: Profile) -> Profile:
    return profile.scaled(1.0 / (2 * math.pi))


def kernel_kh(M: SpectralMultiplier, cut: CutoffFamily, h: int, g: GroupParams) -> RadialProfile:
    """Radial kernel whose spherical transform is the ``h``-th piece ``P_h``."""
    return inverse_abel_profile(_abel_side(dyadic_piece(M, cut, h)), g, name=f"k_{h}")


def local_kernel(M: SpectralMultiplier, cut: CutoffFamily, g: GroupParams) -> RadialProfile:
    """Radial part of the local kernel, from the Abel-side profile ``eta * hat / 2pi``."""
    if M.hat is None:
        raise ValueError(f"{M.family}: no Fourier profile")
    prof = cut.eta() * M.hat
    return inverse_abel_profile(_abel_side(prof), g, name="ell")


def full_kernel(M: SpectralMultiplier, g: GroupParams, support: float | None = None) -> RadialProfile:
    """Radial kernel of ``M_alpha(sqrt L)`` from the whole Fourier profile."""
    prof = _abel_side(M.hat)
    if support is not None:
        prof.support = (0.0, float(support))
    return inverse_abel_profile(prof, g, name="K")


def dphhat_bound_check(M: SpectralMultiplier, cut: CutoffFamily, h: int, ctx: MultiplierContext,
                       pq_list, n: int = 400) -> dict[tuple[int, int], float]:
    """Fitted constants of the derivative-stack bound on ``(h-2, h)``.

    For each ``(p, q)`` returns ``sup |D_z^p D_v^q P_h(s)| / (e^{-(p+q/2)s} s^{-beta} e^{-W s})``.
    """
    piece = dyadic_piece(M, cut, h)
    s = np.linspace(h - 2, h, n + 2)[1:-1]
    out = {}
    for p, q in pq_list:
        if not 1 <= p + q <= ctx.beta:
            raise ValueError(f"need 1 <= p+q <= beta, got p={p}, q={q}")
        vals = derivative_stack(piece, s, p, q)[0]
        log_env = -(p + q / 2) * s - ctx.beta * np.log(s) - ctx.W * s
        out[(p, q)] = float(np.max(np.abs(vals) * np.exp(-log_env)))
    return out


def weighted_l1_norm(k: RadialProfile, ctx: MultiplierContext, g: GroupParams | None = None,
                     panel: float = 0.125, nodes: int = 16) -> float:
    """``∫ phi_{i alpha (1/p - 1/2)}(r) |k(r)| A(r) dr`` over the support of ``k``."""
    g = g or ctx.g
    lo, hi = k.support
    if hi <= lo:
        return 0.0
    npan = max(1, math.ceil((hi - lo) / panel))
    edges = np.linspace(lo, hi, npan + 1)
    x, w = roots_legendre(nodes)
    half = 0.5 * np.diff(edges)[:, None]
    r = ((0.5 * (edges[:-1] + edges[1:]))[:, None] + half * x[None, :]).ravel()
    wr = (half * w[None, :]).ravel()
    weight = spherical_evaluator(ctx.weight_lambda, g, max(30.0, hi))(r).real
    return float(np.sum(wr * weight * np.abs(k(r)) * density_A(r, g)))
