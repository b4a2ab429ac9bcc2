"""Even one-variable profiles with optional exact Taylor jets.

:class:`RadialProfile` lives on the geodesic radius, :class:`AbelProfile` on the
Abel (time) variable.  Both are thin wrappers around a value function, an
optional jet function ``jet(t, order)`` and a support hint ``(lo, hi)`` on
``|t|`` outside of which the profile vanishes or is negligible.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as C

from . import jets

__all__ = [
    "DerivativeUnavailable",
    "Profile",
    "RadialProfile",
    "AbelProfile",
    "ChebyshevProfile",
    "gaussian",
    "zero",
    "bump",
]


class DerivativeUnavailable(ValueError):
    def __init__(self, order: int, name: str = "profile"):
        super().__init__(f"{name} provides no derivatives; order {order} is required")
        self.order = order


class Profile:
    def __init__(self, func: Callable | None = None, jet: Callable | None = None,
                 support: tuple[float, float] = (0.0, math.inf), even: bool = True,
                 max_order: int | None = None, name: str = "profile"):
        if func is None and jet is None:
            raise ValueError("a profile needs a value function or a jet function")
        lo, hi = support
        if lo < 0 or hi < lo:
            raise ValueError(f"bad support hint {support!r}")
        self._func = func
        self._jet = jet
        self.support = (float(lo), float(hi))
        self.even = even
        self.max_order = max_order
        self.name = name

    @property
    def has_jets(self) -> bool:
        return self._jet is not None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self._func is not None:
            return self._func(t)
        return self._jet(t, 0)[0]

    def jet(self, t, order: int) -> np.ndarray:
        if self._jet is None or (self.max_order is not None and order > self.max_order):
            raise DerivativeUnavailable(order, self.name)
        return self._jet(np.asarray(t, dtype=float), order)

    def derivative(self, t, k: int = 1):
        return self.jet(t, k)[k] * math.factorial(k)

    def _new(self, **kw):
        return type(self)(**kw)

    def scaled(self, c: float) -> "Profile":
        f, j = self._func, self._jet
        return self._new(func=None if f is None else (lambda t: c * f(t)),
                         jet=None if j is None else (lambda t, k: c * j(t, k)),
                         support=self.support, even=self.even, max_order=self.max_order,
                         name=f"{c:g}*{self.name}")

    def __mul__(self, other):
        if np.isscalar(other):
            return self.scaled(float(other))
        lo = max(self.support[0], other.support[0])
        hi = min(self.support[1], other.support[1])
        if hi < lo:
            lo = hi = 0.0
        jet = None
        if self.has_jets and other.has_jets:
            a, b = self, other
            jet = lambda t, k: jets.mul(a.jet(t, k), b.jet(t, k))  # noqa: E731
        orders = [p.max_order for p in (self, other) if p.max_order is not None]
        return self._new(func=lambda t: self(t) * other(t), jet=jet, support=(lo, hi),
                         even=self.even and other.even,
                         max_order=min(orders) if orders else None,
                         name=f"{self.name}*{other.name}")

    __rmul__ = __mul__

    def __add__(self, other):
        jet = None
        if self.has_jets and other.has_jets:
            a, b = self, other
            jet = lambda t, k: a.jet(t, k) + b.jet(t, k)  # noqa: E731
        orders = [p.max_order for p in (self, other) if p.max_order is not None]
        support = (min(self.support[0], other.support[0]),
                   max(self.support[1], other.support[1]))
        return self._new(func=lambda t: self(t) + other(t), jet=jet, support=support,
                         even=self.even and other.even,
                         max_order=min(orders) if orders else None,
                         name=f"{self.name}+{other.name}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, support={self.support})"


class RadialProfile(Profile):
    """A radial function ``r -> f(r)`` on the group."""


class AbelProfile(Profile):
    """A function of the Abel variable ``t``."""


class ChebyshevProfile(AbelProfile):
    """Even Chebyshev interpolant of sampled values on ``[-T, T]``, zero outside.

    Used when a profile is only known through samples (e.g. a numerically
    computed Abel transform); jets come from differentiating the series.
    """

    def __init__(self, samples: Callable, T: float, degree: int = 128, name: str = "chebyshev"):
        k = np.arange(degree + 1)
        x = np.cos(np.pi * (k + 0.5) / (degree + 1))
        uniq, inverse = np.unique(np.abs(x), return_inverse=True)
        y = np.asarray(samples(T * uniq), dtype=float)[inverse]
        coef = C.chebfit(x, y, degree)
        coef[1::2] = 0.0
        self.coef = coef
        self.T = float(T)
        self._derivs = [coef]
        super().__init__(func=None, jet=self._cheb_jet, support=(0.0, T), even=True,
                         max_order=None, name=name)

    def _series(self, k: int) -> np.ndarray:
        while len(self._derivs) <= k:
            self._derivs.append(C.chebder(self._derivs[-1]))
        return self._derivs[k]

    def _cheb_jet(self, t, order: int) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = t / self.T
        inside = np.abs(x) <= 1.0
        out = np.zeros((order + 1,) + t.shape)
        xi = x[inside]
        for k in range(order + 1):
            out[k][inside] = C.chebval(xi, self._series(k)) / (self.T**k * math.factorial(k))
        return out

    def __call__(self, t):
        return self._cheb_jet(t, 0)[0]

    @property
    def tail(self) -> float:
        """Relative size of the last coefficients; small means resolved."""
        c = np.abs(self.coef)
        return float(c[-4:].max() / c.max()) if c.max() > 0 else 0.0


def gaussian(amplitude: float = 1.0, rate: float = 1.0, cls=RadialProfile,
             cutoff: float = 1e-30) -> Profile:
    """``amplitude * exp(-rate * t**2)`` with exact jets."""
    hi = math.sqrt(-math.log(cutoff) / rate)

    def jet(t, order):
        x = jets.variable(t, order)
        return amplitude * jets.exp(-rate * jets.mul(x, x))

    return cls(func=lambda t: amplitude * np.exp(-rate * np.asarray(t) ** 2), jet=jet,
               support=(0.0, hi), name=f"gauss({amplitude:g},{rate:g})")


def zero(cls=RadialProfile) -> Profile:
    return cls(func=lambda t: np.zeros(np.shape(t)),
               jet=lambda t, k: np.zeros((k + 1,) + np.shape(t)),
               support=(0.0, 0.0), name="zero")


def bump(radius: float = 1.0, cls=AbelProfile) -> Profile:
    """``exp(-1 / (1 - (t/radius)**2))`` on ``|t| < radius``."""

    def jet(t, order):
        t = np.asarray(t, dtype=float)
        out = np.zeros((order + 1,) + t.shape)
        inside = np.abs(t) < radius * (1 - 1e-3)
        if np.any(inside):
            x = jets.variable(t[inside], order, 1.0 / radius)
            q = jets.recip(1.0 - jets.mul(x, x))
            out[:, inside] = jets.exp(-q)
        return out

    return cls(jet=jet, support=(0.0, radius), name=f"bump({radius:g})")
