"""Group parameters, geodesic radius and Haar densities of a Damek-Ricci space.

Points are stored only through ``(|X|, |Z|, a)``: every quantity in this module
depends on the norms of the two nilpotent components and on the dilation
parameter ``a``, so no explicit ``J_Z`` or Clifford module is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "GroupParams",
    "GroupPoint",
    "DriftParam",
    "PRESETS",
    "preset",
    "ball_image_norm",
    "radius",
    "density_A",
    "log_density_A",
    "modular_delta",
    "character_chi",
    "left_haar_density",
    "right_haar_density",
    "sphere_area",
    "polar_constant",
    "density_bound_constant",
]


@dataclass(frozen=True)
class GroupParams:
    """Dimensions ``(m_v, m_z)`` of the two layers of the nilpotent algebra."""

    m_v: int
    m_z: int
    Q: float = field(init=False)
    n: int = field(init=False)

    def __post_init__(self) -> None:
        if int(self.m_v) != self.m_v or self.m_v <= 0 or self.m_v % 2:
            raise ValueError(f"m_v must be a positive even integer, got {self.m_v!r}")
        if int(self.m_z) != self.m_z or self.m_z < 0:
            raise ValueError(f"m_z must be a nonnegative integer, got {self.m_z!r}")
        object.__setattr__(self, "m_v", int(self.m_v))
        object.__setattr__(self, "m_z", int(self.m_z))
        object.__setattr__(self, "Q", (self.m_v + 2 * self.m_z) / 2)
        object.__setattr__(self, "n", self.m_v + self.m_z + 1)

    @property
    def even_center(self) -> bool:
        """True when the inverse Abel transform is a pure differential operator."""
        return self.m_z % 2 == 0

    def __str__(self) -> str:
        return f"(m_v={self.m_v}, m_z={self.m_z})"


PRESETS: dict[str, GroupParams] = {
    "real-hyp": GroupParams(2, 0),
    "heis": GroupParams(2, 1),
    "quat": GroupParams(4, 3),
}


def preset(name: str) -> GroupParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class GroupPoint:
    x_norm: float
    z_norm: float
    a: float

    def __post_init__(self) -> None:
        if self.x_norm < 0 or self.z_norm < 0:
            raise ValueError("norms must be nonnegative")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a!r}")


@dataclass(frozen=True)
class DriftParam:
    alpha: float

    def __post_init__(self) -> None:
        if self.alpha == 0:
            raise ValueError("the drift parameter alpha must be nonzero")


def _coords(pt):
    if isinstance(pt, GroupPoint):
        return pt.x_norm, pt.z_norm, pt.a
    x, z, a = pt
    return np.asarray(x, float), np.asarray(z, float), np.asarray(a, float)


def _denominator(x, z, a):
    return (1.0 + a + 0.25 * x * x) ** 2 + z * z


def ball_image_norm(pt, g: GroupParams | None = None):
    """Euclidean norm of the Cayley-type image of ``pt`` in the unit ball.

    Evaluates the explicit formula componentwise.  The ``v``-component norm
    uses ``|(c - J_Z) X|^2 = (c^2 + |Z|^2) |X|^2``.  ``pt`` may be a
    :class:`GroupPoint` or a tuple of broadcastable arrays ``(|X|, |Z|, a)``.
    """
    x, z, a = _coords(pt)
    den = _denominator(x, z, a)
    b = a + 0.25 * x * x
    num = den * x * x + 4.0 * z * z + (b * b + z * z - 1.0) ** 2
    return np.sqrt(num) / den


def radius(pt, g: GroupParams | None = None):
    """Geodesic distance to the identity, ``log((1 + R) / (1 - R))`` with ``R`` the ball norm.

    Both ``R^2 = (D - 4a) / D`` and ``1 - R^2 = 4a / D`` are formed without
    cancellation (``D - 4a`` expanded as a sum of squares), so the result is
    accurate near the identity and far from it.
    """
    x, z, a = _coords(pt)
    den = _denominator(x, z, a)
    x2 = x * x
    R = np.sqrt(((1.0 - a) ** 2 + 0.5 * x2 * (1.0 + a) + x2 * x2 / 16.0 + z * z) / den)
    one_minus_sq = 4.0 * a / den
    return np.log1p(R) - np.log(one_minus_sq / (1.0 + R))


def log_density_A(r, g: GroupParams):
    r = np.asarray(r, dtype=float)
    half = 0.5 * r
    with np.errstate(divide="ignore", over="ignore"):
        log_sinh = np.where(half > 20, half - np.log(2.0) + np.log1p(-np.exp(-2 * half)),
                            np.log(np.sinh(half)))
    log_cosh = half + np.log1p(np.exp(-2 * half)) - np.log(2.0)
    return ((g.m_v + 2 * g.m_z) * np.log(2.0)
            + (g.m_v + g.m_z) * log_sinh + g.m_z * log_cosh)


def density_A(r, g: GroupParams, log: bool = False):
    """Radial density of the left Haar measure in geodesic polar coordinates."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("density_A is defined for r >= 0")
    if log:
        return log_density_A(r, g)
    return (2.0 ** (g.m_v + 2 * g.m_z) * np.sinh(0.5 * r) ** (g.m_v + g.m_z)
            * np.cosh(0.5 * r) ** g.m_z)


def modular_delta(pt, g: GroupParams, log: bool = False):
    _, _, a = _coords(pt)
    if log:
        return -g.Q * np.log(a)
    return np.asarray(a, dtype=float) ** (-g.Q)


def character_chi(pt, alpha):
    """Positive character ``a -> a**alpha``."""
    alpha = alpha.alpha if isinstance(alpha, DriftParam) else DriftParam(alpha).alpha
    _, _, a = _coords(pt)
    return np.asarray(a, dtype=float) ** alpha


def left_haar_density(pt, g: GroupParams):
    """Density of the left Haar measure with respect to ``dX dZ da``."""
    _, _, a = _coords(pt)
    return np.asarray(a, dtype=float) ** (-(g.Q + 1))


def right_haar_density(pt, g: GroupParams):
    _, _, a = _coords(pt)
    return 1.0 / np.asarray(a, dtype=float)


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere in ``R^k`` (``k >= 1``)."""
    return float(2.0 * np.exp(0.5 * k * np.log(np.pi) - gammaln(0.5 * k)))


def polar_constant(g: GroupParams) -> float:
    """Ratio between ``dX dZ da``-based integrals of radial functions and ``∫ f A dr``.

    Fixed by the small-ball volume: near the identity the metric is Euclidean
    in ``(X, Z, log a)`` while ``A(r) ~ 2**m_z * r**(n-1)``.
    """
    return sphere_area(g.n) / 2.0**g.m_z


def density_bound_constant(g: GroupParams, r_grid) -> float:
    """Sup over the grid of ``A(r) / ((r / (1 + r))**(n-1) exp(Q r))``."""
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise ValueError("the grid must lie in r > 0")
    log_ratio = log_density_A(r, g) - (g.n - 1) * np.log(r / (1 + r)) - g.Q * r
    return float(np.exp(np.max(log_ratio)))
