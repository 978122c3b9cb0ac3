"""Truncated multivariate Taylor arithmetic ("jets") up to order 3.

A jet of order ``p`` in ``n`` variables stores, for every multi-index
``alpha`` with ``|alpha| <= p``, the Taylor coefficient
``d^alpha f(x0) / alpha!``.  Storage is dense and ordered by total degree,
so the order-``k`` table is always a prefix of the order-``p`` table for
``k <= p`` and truncation is a slice.

Two containers share the same index tables:

* :class:`Jet` -- a scalar jet with the elementary functions needed by the
  expression evaluator.
* :class:`TensorJet` -- an array of jets (trailing axis = Taylor
  coefficients) supporting einsum-style products, partial differentiation
  and matrix inversion.  The curvature engine is written on top of it.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .errors import DomainError, NonFiniteError

MAX_ORDER = 3


class _Table:
    """Multi-index bookkeeping for a fixed (n_vars, order)."""

    def __init__(self, n_vars: int, order: int):
        self.n_vars = n_vars
        self.order = order
        alphas = []
        for deg in range(order + 1):
            for combo in combinations_with_replacement(range(n_vars), deg):
                alpha = [0] * n_vars
                for v in combo:
                    alpha[v] += 1
                alphas.append(tuple(alpha))
        self.alphas = alphas
        self.size = len(alphas)
        self.index = {a: k for k, a in enumerate(alphas)}
        self.degree = np.array([sum(a) for a in alphas])
        self.factorial = np.array(
            [math.prod(math.factorial(e) for e in a) for a in alphas], dtype=float
        )

        I, J, K = [], [], []
        for i, a in enumerate(alphas):
            for j, b in enumerate(alphas):
                if self.degree[i] + self.degree[j] > order:
                    continue
                I.append(i)
                J.append(j)
                K.append(self.index[tuple(x + y for x, y in zip(a, b))])
        self.mul_i = np.array(I, dtype=np.intp)
        self.mul_j = np.array(J, dtype=np.intp)
        self.mul_k = np.array(K, dtype=np.intp)
        scatter = np.zeros((len(K), self.size))
        scatter[np.arange(len(K)), self.mul_k] = 1.0
        self.scatter = scatter

        # partial_i maps this table onto the (order - 1) table
        self.deriv_src = []
        self.deriv_fac = []
        if order > 0:
            lower = _table(n_vars, order - 1)
            for v in range(n_vars):
                src, fac = [], []
                for a in lower.alphas:
                    up = list(a)
                    up[v] += 1
                    src.append(self.index[tuple(up)])
                    fac.append(float(up[v]))
                self.deriv_src.append(np.array(src, dtype=np.intp))
                self.deriv_fac.append(np.array(fac))


@lru_cache(maxsize=None)
def _table(n_vars: int, order: int) -> _Table:
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"jet order must be in 0..{MAX_ORDER}, got {order}")
    if n_vars < 1:
        raise ValueError("n_vars must be positive")
    return _Table(n_vars, order)


def n_coeffs(n_vars: int, order: int) -> int:
    return math.comb(n_vars + order, order)


def _checked(c: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(c)):
        raise NonFiniteError("jet arithmetic produced a non-finite coefficient")
    return c


class Jet:
    """Scalar truncated Taylor expansion at a point."""

    __slots__ = ("c", "n_vars", "order", "_t")

    def __init__(self, c, n_vars: int, order: int):
        self._t = _table(n_vars, order)
        c = np.asarray(c, dtype=float)
        if c.shape != (self._t.size,):
            raise ValueError(
                f"expected {self._t.size} coefficients for n_vars={n_vars}, "
                f"order={order}, got shape {c.shape}"
            )
        self.c = _checked(c)
        self.n_vars = n_vars
        self.order = order

    @classmethod
    def constant(cls, value: float, n_vars: int, order: int) -> "Jet":
        c = np.zeros(_table(n_vars, order).size)
        c[0] = value
        return cls(c, n_vars, order)

    @classmethod
    def variable(cls, index: int, value: float, n_vars: int, order: int) -> "Jet":
        t = _table(n_vars, order)
        c = np.zeros(t.size)
        c[0] = value
        if order >= 1:
            alpha = [0] * n_vars
            alpha[index] = 1
            c[t.index[tuple(alpha)]] = 1.0
        return cls(c, n_vars, order)

    # -- inspection -------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.c[0])

    @property
    def coeffs(self) -> dict:
        return {a: float(v) for a, v in zip(self._t.alphas, self.c)}

    def coeff(self, alpha: Sequence[int]) -> float:
        return float(self.c[self._t.index[tuple(alpha)]])

    def derivative(self, alpha: Sequence[int]) -> float:
        """Partial derivative d^alpha at the expansion point."""
        k = self._t.index[tuple(alpha)]
        return float(self.c[k] * self._t.factorial[k])

    def gradient(self) -> np.ndarray:
        return np.array([self.derivative(_unit(self.n_vars, i)) for i in range(self.n_vars)])

    def hessian(self) -> np.ndarray:
        n = self.n_vars
        h = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                h[i, j] = self.derivative(_unit(n, i, j))
        return h

    def third(self) -> np.ndarray:
        n = self.n_vars
        d = np.empty((n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    d[i, j, k] = self.derivative(_unit(n, i, j, k))
        return d

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        return Jet(self.c[: n_coeffs(self.n_vars, order)], self.n_vars, order)

    def partial(self, var: int) -> "Jet":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        t = self._t
        return Jet(self.c[t.deriv_src[var]] * t.deriv_fac[var], self.n_vars, self.order - 1)

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.n_vars != self.n_vars or other.order != self.order:
                raise ValueError("jet shape mismatch")
            return other
        return Jet.constant(float(other), self.n_vars, self.order)

    def __add__(self, other):
        return Jet(self.c + self._lift(other).c, self.n_vars, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.c - self._lift(other).c, self.n_vars, self.order)

    def __rsub__(self, other):
        return Jet(self._lift(other).c - self.c, self.n_vars, self.order)

    def __neg__(self):
        return Jet(-self.c, self.n_vars, self.order)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * float(other), self.n_vars, self.order)
        other = self._lift(other)
        t = self._t
        c = np.bincount(t.mul_k, weights=self.c[t.mul_i] * other.c[t.mul_j], minlength=t.size)
        return Jet(c, self.n_vars, self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = float(other)
            if other == 0.0:
                raise DomainError("division by zero")
            return Jet(self.c / other, self.n_vars, self.order)
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, exponent):
        return self.power(exponent)

    def __repr__(self):
        return f"Jet(n_vars={self.n_vars}, order={self.order}, value={self.value!r})"

    # -- elementary functions ----------------------------------------------

    def compose(self, derivs: Sequence[float]) -> "Jet":
        """Apply a univariate function given its derivatives at ``self.value``.

        ``derivs[k]`` is the k-th derivative of the outer function at the
        expansion point; entries beyond ``self.order`` are ignored.
        """
        delta = self - self.value
        result = Jet.constant(derivs[0], self.n_vars, self.order)
        power = Jet.constant(1.0, self.n_vars, self.order)
        for k in range(1, self.order + 1):
            power = power * delta
            result = result + power * (derivs[k] / math.factorial(k))
        return result

    def exp(self):
        e = _guard(math.exp, self.value, "exp")
        return self.compose([e] * 4)

    def log(self):
        u = self.value
        if u <= 0.0:
            raise DomainError(f"log of non-positive value {u!r}")
        return self.compose([math.log(u), 1.0 / u, -1.0 / u**2, 2.0 / u**3])

    def sin(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self.compose([s, c, -s, -c])

    def cos(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self.compose([c, -s, -c, s])

    def sinh(self):
        s = _guard(math.sinh, self.value, "sinh")
        c = _guard(math.cosh, self.value, "sinh")
        return self.compose([s, c, s, c])

    def cosh(self):
        s = _guard(math.sinh, self.value, "cosh")
        c = _guard(math.cosh, self.value, "cosh")
        return self.compose([c, s, c, s])

    def sqrt(self):
        u = self.value
        if u < 0.0 or (u == 0.0 and self.order > 0):
            raise DomainError(f"sqrt of non-positive value {u!r}")
        r = math.sqrt(u)
        if self.order == 0:
            return Jet.constant(r, self.n_vars, 0)
        return self.compose([r, 0.5 / r, -0.25 / (r * u), 0.375 / (r * u * u)])

    def reciprocal(self):
        u = self.value
        if u == 0.0:
            raise DomainError("division by zero")
        return self.compose([1.0 / u, -1.0 / u**2, 2.0 / u**3, -6.0 / u**4])

    def power(self, exponent: float) -> "Jet":
        exponent = float(exponent)
        if exponent.is_integer():
            e = int(exponent)
            base = self if e >= 0 else self.reciprocal()
            result = Jet.constant(1.0, self.n_vars, self.order)
            for _ in range(abs(e)):
                result = result * base
            return result
        if self.value <= 0.0:
            raise DomainError(f"non-integer power of non-positive value {self.value!r}")
        return (self.log() * exponent).exp()


def _guard(fn, x, name):
    try:
        y = fn(x)
    except OverflowError:
        raise NonFiniteError(f"{name} overflow at {x!r}") from None
    return y


def _unit(n: int, *vars_: int) -> tuple:
    alpha = [0] * n
    for v in vars_:
        alpha[v] += 1
    return tuple(alpha)


class TensorJet:
    """Array-valued jet; ``data`` has shape ``(*shape, n_coeffs)``."""

    __slots__ = ("data", "n_vars", "order", "_t")

    def __init__(self, data, n_vars: int, order: int):
        self._t = _table(n_vars, order)
        data = np.asarray(data, dtype=float)
        if data.shape[-1:] != (self._t.size,):
            raise ValueError("trailing axis must hold the Taylor coefficients")
        self.data = _checked(data)
        self.n_vars = n_vars
        self.order = order

    @classmethod
    def constant(cls, value, n_vars: int, order: int) -> "TensorJet":
        value = np.asarray(value, dtype=float)
        data = np.zeros(value.shape + (_table(n_vars, order).size,))
        data[..., 0] = value
        return cls(data, n_vars, order)

    @classmethod
    def from_jets(cls, jets) -> "TensorJet":
        """Stack a (nested) sequence of scalar :class:`Jet` objects."""
        arr = np.asarray(jets, dtype=object)
        flat = arr.ravel()
        first = flat[0]
        data = np.stack([j.c for j in flat]).reshape(arr.shape + (first.c.size,))
        return cls(data, first.n_vars, first.order)

    @property
    def shape(self) -> tuple:
        return self.data.shape[:-1]

    @property
    def value(self) -> np.ndarray:
        return self.data[..., 0].copy()

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        return TensorJet(self.data[key + (Ellipsis, slice(None))], self.n_vars, self.order)

    def scalar(self) -> Jet:
        if self.shape != ():
            raise ValueError("not a scalar tensor jet")
        return Jet(self.data, self.n_vars, self.order)

    def derivatives(self, k: int) -> np.ndarray:
        """All k-th partials, derivative axes leading: shape ``(n,)*k + shape``."""
        t = self._t
        n = self.n_vars
        out = np.empty((n,) * k + self.shape)
        for combo in np.ndindex(*((n,) * k)):
            idx = t.index[_unit(n, *combo)]
            out[combo] = self.data[..., idx] * t.factorial[idx]
        return out

    def truncate(self, order: int) -> "TensorJet":
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        return TensorJet(self.data[..., : n_coeffs(self.n_vars, order)], self.n_vars, order)

    def partial(self) -> "TensorJet":
        """Gradient of every entry; new leading axis indexes the variable."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        t = self._t
        parts = [self.data[..., t.deriv_src[v]] * t.deriv_fac[v] for v in range(self.n_vars)]
        return TensorJet(np.stack(parts), self.n_vars, self.order - 1)

    def _same(self, other: "TensorJet"):
        if other.n_vars != self.n_vars or other.order != self.order:
            raise ValueError("jet shape mismatch")

    def __add__(self, other):
        self._same(other)
        return TensorJet(self.data + other.data, self.n_vars, self.order)

    def __sub__(self, other):
        self._same(other)
        return TensorJet(self.data - other.data, self.n_vars, self.order)

    def __neg__(self):
        return TensorJet(-self.data, self.n_vars, self.order)

    def __mul__(self, scalar):
        return TensorJet(self.data * float(scalar), self.n_vars, self.order)

    __rmul__ = __mul__

    def transpose(self, *axes) -> "TensorJet":
        return TensorJet(np.transpose(self.data, axes + (len(axes),)), self.n_vars, self.order)

    def inv(self) -> "TensorJet":
        """Matrix inverse via the truncated Neumann series around the value."""
        g0 = self.value
        if self.shape != (g0.shape[0], g0.shape[0]):
            raise ValueError("inv requires a square matrix jet")
        G0 = TensorJet.constant(np.linalg.inv(g0), self.n_vars, self.order)
        delta = self - TensorJet.constant(g0, self.n_vars, self.order)
        step = -contract("ij,jk->ik", G0, delta)
        term = G0
        result = G0
        for _ in range(self.order):
            term = contract("ij,jk->ik", step, term)
            result = result + term
        return result


_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@lru_cache(maxsize=None)
def _pair_spec(spec: str) -> str:
    free = next(c for c in _LETTERS if c not in spec)
    ins, out = spec.split("->")
    a, b = ins.split(",")
    return f"{a}{free},{b}{free}->{out}{free}"


def contract(spec: str, a: TensorJet, b: TensorJet) -> TensorJet:
    """Truncated-product einsum of two tensor jets.

    ``spec`` is an ordinary two-operand einsum signature over the tensor axes,
    e.g. ``"kl,ijl->kij"``.
    """
    a._same(b)
    t = a._t
    prod = np.einsum(_pair_spec(spec), a.data[..., t.mul_i], b.data[..., t.mul_j])
    return TensorJet(prod @ t.scatter, a.n_vars, a.order)
