"""Truncated Taylor-series ("jet") arithmetic.

A :class:`Jet` holds normalized Taylor coefficients ``c[j] = f^(j)(x0)/j!``
of a function about a fixed point, truncated at a fixed order.  Arithmetic
and the elementary functions propagate all coefficients exactly (up to
rounding), so derivatives never depend on a step size.
"""

from __future__ import annotations

import math

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, x0: float, order: int) -> Jet:
        c = np.zeros(order + 1)
        c[0] = x0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value: float, order: int) -> Jet:
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self) -> float:
        return float(self.c[0])

    def derivative(self, k: int) -> float:
        return float(self.c[k]) * math.factorial(k)

    def _coerce(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jet orders differ")
            return other
        return Jet.constant(float(other), self.order)

    def __repr__(self) -> str:
        return f"Jet({self.c.tolist()})"

    def __neg__(self) -> Jet:
        return Jet(-self.c)

    def __add__(self, other) -> Jet:
        return Jet(self.c + self._coerce(other).c)

    __radd__ = __add__

    def __sub__(self, other) -> Jet:
        return Jet(self.c - self._coerce(other).c)

    def __rsub__(self, other) -> Jet:
        return Jet(self._coerce(other).c - self.c)

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return Jet(self.c * float(other))
        other = self._coerce(other)
        n = len(self.c)
        return Jet(np.convolve(self.c, other.c)[:n])

    __rmul__ = __mul__

    def __truediv__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return Jet(self.c / float(other))
        b = self._coerce(other).c
        if b[0] == 0.0:
            raise ZeroDivisionError("jet division by a series with zero constant term")
        a = self.c
        q = np.zeros_like(a)
        for k in range(len(a)):
            q[k] = (a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1][:k])) / b[0]
        return Jet(q)

    def __rtruediv__(self, other) -> Jet:
        return self._coerce(other) / self

    def __pow__(self, n: int) -> Jet:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet.constant(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out


def _weighted(x: np.ndarray, y: np.ndarray, k: int) -> float:
    # (1/k) * sum_{j=1..k} j x_j y_{k-j}
    j = np.arange(1, k + 1)
    return float(np.dot(j * x[1 : k + 1], y[k - 1 :: -1][:k])) / k


def exp(x: Jet) -> Jet:
    e = np.zeros_like(x.c)
    e[0] = math.exp(x.c[0])
    for k in range(1, len(e)):
        e[k] = _weighted(x.c, e, k)
    return Jet(e)


def sincos(x: Jet) -> tuple[Jet, Jet]:
    s = np.zeros_like(x.c)
    c = np.zeros_like(x.c)
    s[0], c[0] = math.sin(x.c[0]), math.cos(x.c[0])
    for k in range(1, len(s)):
        s[k] = _weighted(x.c, c, k)
        c[k] = -_weighted(x.c, s, k)
    return Jet(s), Jet(c)


def sin(x: Jet) -> Jet:
    return sincos(x)[0]


def cos(x: Jet) -> Jet:
    return sincos(x)[1]


def sqrt(x: Jet) -> Jet:
    if x.c[0] <= 0.0:
        raise ValueError("sqrt of a jet needs a positive constant term")
    y = np.zeros_like(x.c)
    y[0] = math.sqrt(x.c[0])
    for k in range(1, len(y)):
        acc = float(np.dot(y[1:k], y[k - 1 : 0 : -1])) if k > 1 else 0.0
        y[k] = (x.c[k] - acc) / (2.0 * y[0])
    return Jet(y)
