"""Truncated multivariate Taylor arithmetic over four coordinates (orders 0-4).

A :class:`Jet` stores the Taylor coefficients ``c[alpha] = d^alpha f / alpha!``
of a scalar at a base point, for all multi-indices ``|alpha| <= order``, in a
dense graded-lexicographic layout.  Arithmetic on jets is arithmetic on
truncated Taylor expansions, so every derivative the geometry needs comes out
of plain function composition -- no symbolic differentiation anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, OrderMismatchError

N_VARS = 4
MAX_ORDER = 4

# |denominator| below SINGULARITY_RTOL * scale is treated as a pole, not Inf.
SINGULARITY_RTOL = 1e-13


def _gen_indices(order: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    for total in range(order + 1):
        block = set()
        for combo in combinations_with_replacement(range(N_VARS), total):
            alpha = [0] * N_VARS
            for v in combo:
                alpha[v] += 1
            block.add(tuple(alpha))
        out.extend(sorted(block, reverse=True))
    return tuple(out)


INDICES: dict[int, tuple[tuple[int, ...], ...]] = {k: _gen_indices(k) for k in range(MAX_ORDER + 1)}
INDEX_POS: dict[int, dict[tuple[int, ...], int]] = {
    k: {alpha: i for i, alpha in enumerate(v)} for k, v in INDICES.items()
}
JET_SIZE: dict[int, int] = {k: len(v) for k, v in INDICES.items()}

_FACTORIALS = {alpha: math.prod(math.factorial(a) for a in alpha) for alpha in INDICES[MAX_ORDER]}


def _build_mul_table(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    idx = INDICES[order]
    pos = INDEX_POS[order]
    ii, jj, kk = [], [], []
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            if sum(a) + sum(b) <= order:
                c = tuple(x + y for x, y in zip(a, b))
                ii.append(i)
                jj.append(j)
                kk.append(pos[c])
    return np.asarray(ii), np.asarray(jj), np.asarray(kk)


_MUL_TABLE = {k: _build_mul_table(k) for k in range(MAX_ORDER + 1)}


def _build_deriv_table(order: int, var: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    src, dst, fac = [], [], []
    for i, alpha in enumerate(INDICES[order]):
        if alpha[var] >= 1 and sum(alpha) <= order:
            beta = list(alpha)
            beta[var] -= 1
            if sum(beta) <= order - 1:
                src.append(i)
                dst.append(INDEX_POS[order - 1][tuple(beta)])
                fac.append(alpha[var])
    return np.asarray(src), np.asarray(dst), np.asarray(fac, dtype=float)


_DERIV_TABLE = {
    (k, v): _build_deriv_table(k, v) for k in range(1, MAX_ORDER + 1) for v in range(N_VARS)
}

# restriction of an order-k coefficient vector to order k-1 (leading block)
_TRUNC = {k: JET_SIZE[k - 1] for k in range(1, MAX_ORDER + 1)}


class Jet:
    """Truncated Taylor expansion of a scalar at a point; immutable value type."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: np.ndarray):
        self.order = order
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(value: float, order: int) -> "Jet":
        c = np.zeros(JET_SIZE[order])
        c[0] = value
        return Jet(order, c)

    @staticmethod
    def variable(var: int, value: float, order: int) -> "Jet":
        c = np.zeros(JET_SIZE[order])
        c[0] = value
        if order >= 1:
            e = tuple(1 if i == var else 0 for i in range(N_VARS))
            c[INDEX_POS[order][e]] = 1.0
        return Jet(order, c)

    # -- basic queries ------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def partial(self, alpha: Sequence[int]) -> float:
        """Return d^alpha f (coefficient times alpha!)."""
        key = tuple(alpha)
        if len(key) != N_VARS or sum(key) > self.order:
            raise IndexError(f"multi-index {key} out of range for order {self.order}")
        return float(self.coeffs[INDEX_POS[self.order][key]]) * _FACTORIALS[key]

    def lower(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise OrderMismatchError(f"cannot raise jet order {self.order} -> {order}")
        return Jet(order, self.coeffs[: JET_SIZE[order]].copy())

    def derivative(self, var: int) -> "Jet":
        """Jet of the partial derivative along coordinate ``var``; order drops by one."""
        if self.order < 1:
            raise OrderMismatchError("cannot differentiate an order-0 jet")
        src, dst, fac = _DERIV_TABLE[(self.order, var)]
        out = np.zeros(JET_SIZE[self.order - 1])
        out[dst] = self.coeffs[src] * fac
        return Jet(self.order - 1, out)

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Jet") -> None:
        if self.order != other.order:
            raise OrderMismatchError(f"jet orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.order, self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0] += float(other)
        return Jet(self.order, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.order, self.coeffs - other.coeffs)
        c = self.coeffs.copy()
        c[0] -= float(other)
        return Jet(self.order, c)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            ii, jj, kk = _MUL_TABLE[self.order]
            out = np.zeros(JET_SIZE[self.order])
            np.add.at(out, kk, self.coeffs[ii] * other.coeffs[jj])
            return Jet(self.order, out)
        return Jet(self.order, self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.order, self.coeffs / float(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def reciprocal(self) -> "Jet":
        b0 = self.value
        if abs(b0) < SINGULARITY_RTOL * max(1.0, self.scale()):
            raise DomainError(f"division by value {b0!r} below singularity tolerance")
        series = [(-1.0) ** k / b0 ** (k + 1) for k in range(self.order + 1)]
        return self.compose_series(series)

    def compose_series(self, series: Sequence[float]) -> "Jet":
        """Horner composition sum_k series[k] * (self - value)^k, truncated."""
        h = Jet(self.order, self.coeffs.copy())
        h.coeffs[0] = 0.0
        acc = Jet.constant(series[self.order], self.order)
        for k in range(self.order - 1, -1, -1):
            acc = acc * h + series[k]
        return acc

    def __pow__(self, exponent):
        return jet_pow_rational(self, exponent)

    def __repr__(self):
        return f"Jet(order={self.order}, value={self.value:.6g})"


# -- module-level operation aliases ------------------------------------------


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_div(a: Jet, b: Jet) -> Jet:
    return a / b


def _pow_real(base: float, r: Fraction) -> float:
    """base**r honouring odd-denominator real roots of negative numbers."""
    if base > 0.0:
        return base ** float(r)
    if base == 0.0:
        if r > 0 and r.denominator == 1:
            return 0.0
        raise DomainError(f"0.0 cannot be raised to power {r}")
    if r.denominator % 2 == 1:
        sign = -1.0 if r.numerator % 2 else 1.0
        return sign * (-base) ** float(r)
    raise DomainError(f"negative base {base!r} with even-denominator exponent {r}")


def jet_pow_rational(a: Jet, exponent) -> Jet:
    """a**exponent for a constant rational exponent (the only power the language allows)."""
    r = exponent if isinstance(exponent, Fraction) else Fraction(exponent)
    if r.denominator == 1 and r >= 0:
        # non-negative integer powers by repeated squaring: total on any base point
        n = int(r)
        result = Jet.constant(1.0, a.order)
        square = a
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result
    v0 = a.value
    if abs(v0) < SINGULARITY_RTOL * max(1.0, a.scale()):
        raise DomainError(f"power {r} at base value {v0!r} below singularity tolerance")
    series = []
    coeff = 1.0
    for k in range(a.order + 1):
        series.append(coeff * _pow_real(v0, r - k))
        coeff *= (float(r) - k) / (k + 1)
    return a.compose_series(series)


def _series_exp(v0: float, order: int) -> list[float]:
    e = math.exp(v0)
    return [e / math.factorial(k) for k in range(order + 1)]


def _series_ln(v0: float, order: int) -> list[float]:
    if v0 <= 0.0:
        raise DomainError(f"ln of non-positive value {v0!r}")
    out = [math.log(v0)]
    for k in range(1, order + 1):
        out.append((-1.0) ** (k + 1) / (k * v0**k))
    return out


def _series_sqrt(v0: float, order: int) -> list[float]:
    if v0 <= 0.0:
        raise DomainError(f"sqrt of non-positive value {v0!r}")
    out = []
    coeff = 1.0
    r = 0.5
    for k in range(order + 1):
        out.append(coeff * v0 ** (r - k))
        coeff *= (r - k) / (k + 1)
    return out


def _series_atan(v0: float, order: int) -> list[float]:
    u = 1.0 + v0 * v0
    derivs = [math.atan(v0), 1.0 / u, -2.0 * v0 / u**2, (6.0 * v0 * v0 - 2.0) / u**3,
              24.0 * v0 * (1.0 - v0 * v0) / u**4]
    return [derivs[k] / math.factorial(k) for k in range(order + 1)]


def _series_sin(v0: float, order: int) -> list[float]:
    return [math.sin(v0 + k * math.pi / 2.0) / math.factorial(k) for k in range(order + 1)]


def _series_cos(v0: float, order: int) -> list[float]:
    return [math.cos(v0 + k * math.pi / 2.0) / math.factorial(k) for k in range(order + 1)]


UNARY_SERIES: dict[str, Callable[[float, int], list[float]]] = {
    "exp": _series_exp,
    "ln": _series_ln,
    "sqrt": _series_sqrt,
    "atan": _series_atan,
    "sin": _series_sin,
    "cos": _series_cos,
}


def jet_compose_unary(fname: str, a: Jet) -> Jet:
    """Compose a supported elementary function with a jet (univariate Taylor recomposition)."""
    try:
        series_fn = UNARY_SERIES[fname]
    except KeyError:
        raise ValueError(f"unsupported unary function {fname!r}") from None
    return a.compose_series(series_fn(a.value, a.order))


def extract_partial(a: Jet, alpha: Sequence[int]) -> float:
    return a.partial(alpha)
