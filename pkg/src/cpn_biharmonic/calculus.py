"""Truncated bivariate Taylor arithmetic ("jets") and a finite-difference oracle.

A :class:`Jet` carries the Taylor coefficients ``c[i, j] = d^i_u d^j_v f / (i! j!)``
of a (possibly vector-valued, possibly complex) quantity at a parameter point,
truncated at total degree ``order``.  Arithmetic on jets propagates the
coefficients exactly, so partial derivatives come out at machine precision
instead of being differenced.

Coefficients are stored flat, ordered by total degree, so truncating to a lower
order is a slice of the leading rows.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateError, DomainError

__all__ = [
    "Jet",
    "Jet3",
    "as_jet",
    "stack",
    "exp",
    "sin",
    "cos",
    "sqrt",
    "real",
    "imag",
    "conj",
    "herm",
    "re_dot",
    "matvec",
    "expm_action",
    "jet3_eval",
    "fd_oracle",
    "DEFAULT_FD_STEP",
]

DEFAULT_FD_STEP = 1e-4


@lru_cache(maxsize=None)
def _tables(order: int):
    monos = [(i, d - i) for d in range(order + 1) for i in range(d, -1, -1)]
    index = {m: k for k, m in enumerate(monos)}
    size = len(monos)
    prod = np.zeros((size, size, size))
    for p, (a, b) in enumerate(monos):
        for q, (c, d) in enumerate(monos):
            if a + b + c + d <= order:
                prod[index[(a + c, b + d)], p, q] = 1.0
    # derivative maps into the order-1 table: target k <- factor * source
    deriv = []
    for var in (0, 1):
        src, fac = [], []
        for (i, j) in monos:
            if i + j > order - 1:
                break
            if var == 0:
                src.append(index[(i + 1, j)])
                fac.append(i + 1)
            else:
                src.append(index[(i, j + 1)])
                fac.append(j + 1)
        deriv.append((np.array(src, dtype=int), np.array(fac, dtype=float)))
    return monos, index, prod, deriv


def _size(order: int) -> int:
    return (order + 1) * (order + 2) // 2


class Jet:
    """Truncated Taylor expansion in two real variables ``(u, v)``.

    ``coeffs`` has shape ``(M, *shape)`` where ``M`` is the number of monomials of
    total degree ``<= order``.
    """

    __slots__ = ("coeffs", "order")
    __array_priority__ = 100.0

    def __init__(self, coeffs, order: int):
        coeffs = np.asarray(coeffs)
        if coeffs.shape[0] != _size(order):
            raise ValueError(f"expected {_size(order)} coefficient rows for order {order}")
        self.coeffs = coeffs
        self.order = order

    # -- construction -----------------------------------------------------------
    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value)
        c = np.zeros((_size(order),) + value.shape, dtype=np.result_type(value, float))
        c[0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, value: float, var: int, order: int) -> "Jet":
        """Seed for the coordinate ``u`` (``var=0``) or ``v`` (``var=1``)."""
        c = np.zeros(_size(order))
        c[0] = value
        if order >= 1:
            c[1 + var] = 1.0
        return cls(c, order)

    # -- basic accessors ----------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[1:]

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.coeffs[: _size(order)], order)

    def partial(self, i: int, j: int) -> np.ndarray:
        """The partial derivative ``d^i_u d^j_v`` at the expansion point."""
        if i + j > self.order:
            raise ValueError(f"derivative of order {i + j} exceeds jet order {self.order}")
        _, index, _, _ = _tables(self.order)
        return self.coeffs[index[(i, j)]] * (math.factorial(i) * math.factorial(j))

    def d(self, var: int) -> "Jet":
        """Differentiate with respect to ``u`` (0) or ``v`` (1); the order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        src, fac = _tables(self.order)[3][var]
        fac = fac.reshape((-1,) + (1,) * len(self.shape))
        return Jet(self.coeffs[src] * fac, self.order - 1)

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.coeffs[(slice(None),) + key], self.order)

    def __len__(self) -> int:
        return self.shape[0]

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def sum(self, axis: int = -1) -> "Jet":
        if axis < 0:
            axis = len(self.shape) + axis
        return Jet(self.coeffs.sum(axis=axis + 1), self.order)

    def conj(self) -> "Jet":
        return Jet(np.conj(self.coeffs), self.order)

    @property
    def real(self) -> "Jet":
        return Jet(self.coeffs.real, self.order)

    @property
    def imag(self) -> "Jet":
        return Jet(self.coeffs.imag, self.order)

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape}, value={self.value!r})"

    # -- arithmetic -----------------------------------------------------------------
    def _padded(self, ndim: int) -> np.ndarray:
        extra = ndim - len(self.shape)
        if extra <= 0:
            return self.coeffs
        return self.coeffs.reshape(self.coeffs.shape[:1] + (1,) * extra + self.shape)

    def _coerce(self, other):
        if not isinstance(other, Jet):
            other = Jet.constant(other, self.order)
        order = min(self.order, other.order)
        a, b = self.truncate(order), other.truncate(order)
        ndim = max(len(a.shape), len(b.shape))
        return a._padded(ndim), b._padded(ndim), order

    def __add__(self, other):
        a, b, order = self._coerce(other)
        return Jet(a + b, order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs, self.order)

    def __sub__(self, other):
        a, b, order = self._coerce(other)
        return Jet(a - b, order)

    def __rsub__(self, other):
        a, b, order = self._coerce(other)
        return Jet(b - a, order)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            return Jet(self._padded(other.ndim) * other, self.order)
        a, b, order = self._coerce(other)
        prod = _tables(order)[2]
        return Jet(np.einsum("mpq,p...,q...->m...", prod, a, b), order)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        x0 = self.value
        if np.any(x0 == 0):
            raise DegenerateError("reciprocal of a jet with zero value")
        derivs = [(-1) ** k * math.factorial(k) / x0 ** (k + 1) for k in range(self.order + 1)]
        return _compose(self, derivs)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        other = np.asarray(other)
        return Jet(self._padded(other.ndim) / other, self.order)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet.constant(np.ones(self.shape, dtype=self.coeffs.dtype), self.order)
        for _ in range(k):
            out = out * self
        return out


def _compose(x: Jet, derivs: Sequence[np.ndarray]) -> Jet:
    """``f(x)`` given ``f^(k)(x0)`` for ``k = 0..order``; elementwise in ``x``."""
    delta = Jet(x.coeffs.copy(), x.order)
    delta.coeffs[0] = 0
    out = Jet.constant(np.asarray(derivs[0]), x.order)
    power = Jet.constant(np.ones(x.shape, dtype=x.coeffs.dtype), x.order)
    for k in range(1, x.order + 1):
        power = power * delta
        out = out + power * (np.asarray(derivs[k]) / math.factorial(k))
    return out


def as_jet(x, order: int) -> Jet:
    return x if isinstance(x, Jet) else Jet.constant(x, order)


def stack(items: Sequence) -> Jet | np.ndarray:
    """Stack scalars/jets into a vector; returns a plain array if nothing is a jet."""
    jets = [it for it in items if isinstance(it, Jet)]
    if not jets:
        return np.array(items)
    order = min(j.order for j in jets)
    cols = [as_jet(it, order).truncate(order).coeffs for it in items]
    dtype = np.result_type(*cols)
    return Jet(np.stack([c.astype(dtype) for c in cols], axis=-1), order)


def exp(x):
    if isinstance(x, Jet):
        e = np.exp(x.value)
        return _compose(x, [e] * (x.order + 1))
    return np.exp(x)


def sin(x):
    if isinstance(x, Jet):
        s, c = np.sin(x.value), np.cos(x.value)
        cycle = [s, c, -s, -c]
        return _compose(x, [cycle[k % 4] for k in range(x.order + 1)])
    return np.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = np.sin(x.value), np.cos(x.value)
        cycle = [c, -s, -c, s]
        return _compose(x, [cycle[k % 4] for k in range(x.order + 1)])
    return np.cos(x)


def sqrt(x):
    if isinstance(x, Jet):
        x0 = x.value
        if np.any(x0 <= 0):
            raise DegenerateError("square root of a non-positive jet value")
        derivs, coef = [], 1.0
        for k in range(x.order + 1):
            derivs.append(coef * x0 ** (0.5 - k))
            coef *= 0.5 - k
        return _compose(x, derivs)
    return np.sqrt(x)


def real(x):
    return x.real if isinstance(x, Jet) else np.real(x)


def imag(x):
    return x.imag if isinstance(x, Jet) else np.imag(x)


def conj(x):
    return x.conj() if isinstance(x, Jet) else np.conj(x)


def herm(a, b):
    """Hermitian product ``sum a_k conj(b_k)`` over the last axis."""
    if isinstance(a, Jet) or isinstance(b, Jet):
        return (a * conj(b)).sum(-1)
    return np.sum(a * np.conj(b), axis=-1)


def re_dot(a, b):
    """Real inner product of complex vectors (real part of :func:`herm`)."""
    return real(herm(a, b))


def matvec(matrix: np.ndarray, w):
    """Apply a constant matrix to a (jet) vector."""
    if isinstance(w, Jet):
        return Jet(w.coeffs @ np.asarray(matrix).T, w.order)
    return np.asarray(matrix) @ w


def expm_action(generators: Sequence[np.ndarray], params: Sequence, vector: np.ndarray):
    """``exp(sum_k params[k] * generators[k]) @ vector`` for commuting generators.

    ``params`` may be jets; the exponential is split into the constant part
    (``scipy.linalg.expm``) and a nilpotent jet part summed as a finite series,
    which is exact to the jet order.
    """
    from scipy.linalg import expm

    jets = [p for p in params if isinstance(p, Jet)]
    base = sum(np.asarray(g) * (p.value if isinstance(p, Jet) else p) for g, p in zip(generators, params))
    w = expm(base) @ np.asarray(vector)
    if not jets:
        return w
    order = min(j.order for j in jets)
    w = Jet.constant(w.astype(complex), order)
    deltas = []
    for g, p in zip(generators, params):
        if isinstance(p, Jet):
            dp = Jet(p.truncate(order).coeffs.copy(), order)
            dp.coeffs[0] = 0
            deltas.append((np.asarray(g), dp))
    term, total = w, w
    for k in range(1, order + 1):
        nxt = None
        for g, dp in deltas:
            piece = dp * matvec(g, term)
            nxt = piece if nxt is None else nxt + piece
        term = nxt * (1.0 / k)
        total = total + term
    return total


# -- jet evaluation of parameter maps ----------------------------------------------

ParamMap = Callable[[object, object], object]


@dataclass(frozen=True)
class Jet3:
    """All partial derivatives up to order three of a map at one point."""

    value: np.ndarray
    first: tuple  # (d_u, d_v)
    second: tuple  # (d_uu, d_uv, d_vv)
    third: tuple  # (d_uuu, d_uuv, d_uvv, d_vvv)


def eval_jet(f: ParamMap, u: float, v: float, order: int) -> Jet:
    """Evaluate ``f`` on coordinate seeds and return its jet of the given order."""
    try:
        out = f(Jet.variable(u, 0, order), Jet.variable(v, 1, order))
    except (ZeroDivisionError, FloatingPointError) as exc:
        raise DegenerateError(f"map not differentiable at ({u}, {v}): {exc}") from exc
    out = as_jet(out, order)
    if not np.all(np.isfinite(out.coeffs)):
        raise DegenerateError(f"non-finite derivatives at ({u}, {v})")
    return out


def jet3_eval(f: ParamMap, u: float, v: float) -> Jet3:
    j = eval_jet(f, u, v, 3)
    p = j.partial
    return Jet3(
        value=p(0, 0),
        first=(p(1, 0), p(0, 1)),
        second=(p(2, 0), p(1, 1), p(0, 2)),
        third=(p(3, 0), p(2, 1), p(1, 2), p(0, 3)),
    )


def fd_oracle(f: ParamMap, u: float, v: float, order: int, h: float = DEFAULT_FD_STEP) -> dict:
    """Central finite differences (error ``O(h^2)``) of all partials of one order.

    Returns a dict keyed by ``'u'``, ``'v'`` (order 1), ``'uu'``, ``'uv'``, ``'vv'``
    (order 2) or ``'uuu'``, ``'uuv'``, ``'uvv'``, ``'vvv'`` (order 3).
    """
    if order not in (1, 2, 3):
        raise DomainError("finite-difference order must be 1, 2 or 3")
    if h <= 0:
        raise DomainError("finite-difference step must be positive")
    if h < 1e-10:
        warnings.warn(f"finite-difference step h={h:g} is ill-conditioned", RuntimeWarning, stacklevel=2)

    def F(a, b):
        return np.asarray(f(u + a * h, v + b * h), dtype=complex)

    if order == 1:
        return {
            "u": (F(1, 0) - F(-1, 0)) / (2 * h),
            "v": (F(0, 1) - F(0, -1)) / (2 * h),
        }
    if order == 2:
        f0 = F(0, 0)
        return {
            "uu": (F(1, 0) - 2 * f0 + F(-1, 0)) / h**2,
            "uv": (F(1, 1) - F(1, -1) - F(-1, 1) + F(-1, -1)) / (4 * h**2),
            "vv": (F(0, 1) - 2 * f0 + F(0, -1)) / h**2,
        }

    def second_u(b):
        return F(1, b) - 2 * F(0, b) + F(-1, b)

    def second_v(a):
        return F(a, 1) - 2 * F(a, 0) + F(a, -1)

    return {
        "uuu": (F(2, 0) - 2 * F(1, 0) + 2 * F(-1, 0) - F(-2, 0)) / (2 * h**3),
        "uuv": (second_u(1) - second_u(-1)) / (2 * h**3),
        "uvv": (second_v(1) - second_v(-1)) / (2 * h**3),
        "vvv": (F(0, 2) - 2 * F(0, 1) + 2 * F(0, -1) - F(0, -2)) / (2 * h**3),
    }


def fd_derivative(samples: np.ndarray, step: float, axis: int = 0) -> np.ndarray:
    """Fourth-order central first derivative of uniformly sampled data.

    The two samples at each end are left as NaN.
    """
    samples = np.moveaxis(np.asarray(samples), axis, 0)
    out = np.full(samples.shape, np.nan, dtype=samples.dtype)
    out[2:-2] = (samples[:-4] - 8 * samples[1:-3] + 8 * samples[3:-1] - samples[4:]) / (12 * step)
    return np.moveaxis(out, 0, axis)
