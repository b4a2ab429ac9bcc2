"""Truncated Taylor series ("jets") evaluated pointwise over numpy arrays.

A jet of order ``K`` at points ``t`` is an array ``c`` of shape ``(K + 1, *t.shape)``
with ``c[k] = f^{(k)}(t) / k!``.  All derivative stacks in this package are
computed by exact jet arithmetic instead of finite differences.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "variable",
    "constant",
    "mul",
    "recip",
    "exp",
    "sqrt",
    "deriv",
    "sinh_affine",
    "cosh_affine",
    "horner",
    "compose",
    "shifted_quotient",
]


def variable(t, order: int, scale: float = 1.0, shift: float = 0.0) -> np.ndarray:
    """Jet of ``scale * t + shift`` in the variable ``t``."""
    t = np.asarray(t, dtype=float)
    out = np.zeros((order + 1,) + t.shape)
    out[0] = scale * t + shift
    if order >= 1:
        out[1] = scale
    return out


def constant(value, shape, order: int) -> np.ndarray:
    out = np.zeros((order + 1,) + tuple(shape), dtype=np.result_type(value, float))
    out[0] = value
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    order = min(a.shape[0], b.shape[0]) - 1
    out = np.zeros((order + 1,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]),
                   dtype=np.result_type(a, b))
    for k in range(order + 1):
        out[k] = np.sum(a[: k + 1] * b[k::-1], axis=0)
    return out


def recip(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    inv0 = 1.0 / a[0]
    out[0] = inv0
    for k in range(1, a.shape[0]):
        out[k] = -inv0 * np.sum(a[1 : k + 1] * out[k - 1 :: -1][:k], axis=0)
    return out


def exp(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    j = np.arange(1, a.shape[0]).reshape((-1,) + (1,) * (a.ndim - 1))
    for k in range(1, a.shape[0]):
        out[k] = np.sum(j[:k] * a[1 : k + 1] * out[k - 1 :: -1][:k], axis=0) / k
    return out


def sqrt(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[0] = np.sqrt(a[0])
    for k in range(1, a.shape[0]):
        cross = np.sum(out[1:k] * out[k - 1 : 0 : -1], axis=0) if k > 1 else 0.0
        out[k] = (a[k] - cross) / (2.0 * out[0])
    return out


def deriv(a: np.ndarray) -> np.ndarray:
    """Jet of the derivative; the order drops by one."""
    k = np.arange(1, a.shape[0]).reshape((-1,) + (1,) * (a.ndim - 1))
    return a[1:] * k


def _hyperbolic_affine(t, scale: float, order: int, start_with_sinh: bool) -> np.ndarray:
    x = scale * np.asarray(t, dtype=float)
    s, c = np.sinh(x), np.cosh(x)
    out = np.empty((order + 1,) + x.shape)
    for k in range(order + 1):
        use_sinh = (k % 2 == 0) == start_with_sinh
        out[k] = (s if use_sinh else c) * scale**k / math.factorial(k)
    return out


def sinh_affine(t, scale: float, order: int) -> np.ndarray:
    """Jet of ``sinh(scale * t)``."""
    return _hyperbolic_affine(t, scale, order, True)


def cosh_affine(t, scale: float, order: int) -> np.ndarray:
    """Jet of ``cosh(scale * t)``."""
    return _hyperbolic_affine(t, scale, order, False)


def horner(a: np.ndarray, offset) -> np.ndarray:
    """Evaluate the Taylor polynomial stored in ``a`` at ``t + offset``."""
    out = np.zeros(a.shape[1:], dtype=a.dtype) + a[-1]
    for k in range(a.shape[0] - 2, -1, -1):
        out = out * offset + a[k]
    return out


def compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Jet of ``f(g)`` from the jet of ``f`` at ``g(t)`` and the jet of ``g`` at ``t``.

    ``outer[k]`` holds the Taylor coefficients of ``f`` about ``g(t)``; the
    constant term of ``inner`` is ignored.
    """
    delta = inner.copy()
    delta[0] = 0.0
    out = np.zeros(inner.shape, dtype=np.result_type(outer, inner))
    out[0] = outer[-1]
    for k in range(outer.shape[0] - 2, -1, -1):
        out = mul(out, delta)
        out[0] = out[0] + outer[k]
    return out


def shifted_quotient(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """``num / den`` when both vanish at the expansion point (one order is lost)."""
    return mul(num[1:], recip(den[1:]))
