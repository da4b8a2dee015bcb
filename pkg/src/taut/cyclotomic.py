"""Exact arithmetic in cyclotomic fields Q(zeta_m).

A CycNum stores rational coordinates in the power basis 1, z, ..., z^(phi(m)-1)
reduced modulo the m-th cyclotomic polynomial.  Bulk computations elsewhere
work in the group ring Z[Z/m] (integer histograms of exponents) and only
reduce through :func:`reduction_matrix` when values are compared.
"""
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def cyclotomic_poly(m):
    """Integer coefficients of Phi_m, constant term first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bc in enumerate(b):
            a[i + j] -= c * bc
    if any(a[:len(b) - 1]):
        raise ArithmeticError("inexact cyclotomic division")
    return out


def totient(m):
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _reduction_rows(m):
    """Row k holds the reduced coordinates of z^k, k = 0..m-1."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    rows = []
    cur = [1] + [0] * (d - 1) if d else []
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by z and reduce the overflow coefficient
        top = cur[-1] if d else 0
        cur = [0] + cur[:-1] if d else []
        for i in range(d):
            cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def reduction_matrix(m):
    """(m, phi(m)) integer matrix mapping group-ring vectors to coordinates."""
    R = np.array(_reduction_rows(m), dtype=np.int64).reshape(m, totient(m))
    R.setflags(write=False)
    return R


def reduce_group_ring(m, vec):
    """Exact integer coordinates of sum_k vec[k] z^k."""
    rows = _reduction_rows(m)
    d = totient(m)
    out = [0] * d
    for k, c in enumerate(vec):
        c = int(c)
        if c:
            for i, r in enumerate(rows[k]):
                if r:
                    out[i] += c * r
    return out


def lift_exponents(m, new_order):
    if new_order % m:
        raise ValueError(f"order {m} does not divide {new_order}")
    return new_order // m


def format_complex(z, eps=1e-9):
    # float noise from the cos/sin expansion is clamped to zero
    re_, im = z.real, z.imag
    scale = max(1.0, abs(re_), abs(im))
    re_ = 0.0 if abs(re_) < eps * scale else re_
    im = 0.0 if abs(im) < eps * scale else im
    return f"{re_ + 0.0:.12g}{im + 0.0:+.12g}i"


class CycNum:
    """Immutable element of Q(zeta_order)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        order = int(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != totient(order):
            raise ValueError("coefficient vector has the wrong length")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    # construction
    @classmethod
    def rational(cls, r, order=1):
        d = totient(order)
        return cls(order, [Fraction(r)] + [0] * (d - 1))

    @classmethod
    def from_group_ring(cls, order, vec, den=1):
        num = reduce_group_ring(order, vec)
        return cls(order, [Fraction(c, den) for c in num])

    # structure
    def lift(self, new_order):
        step = lift_exponents(self.order, new_order)
        vec = [Fraction(0)] * new_order
        for k, c in enumerate(self.coeffs):
            vec[(k * step) % new_order] += c
        return _from_rational_ring(new_order, vec)

    def _common(self, other):
        if not isinstance(other, CycNum):
            other = CycNum.rational(other)
        if self.order == other.order:
            return self, other
        m = math.lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __eq__(self, other):
        if not isinstance(other, (CycNum, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, (CycNum, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return CycNum(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.order, [x * other for x in self.coeffs])
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._common(other)
        m = a.order
        vec = [Fraction(0)] * m
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        vec[(i + j) % m] += x * y
        return _from_rational_ring(m, vec)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = CycNum.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self):
        """Image under zeta -> zeta^-1 (complex conjugation)."""
        m = self.order
        vec = [Fraction(0)] * m
        for k, c in enumerate(self.coeffs):
            vec[(-k) % m] += c
        return _from_rational_ring(m, vec)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __complex__(self):
        m = self.order
        re = math.fsum(float(c) * math.cos(2 * math.pi * k / m) for k, c in enumerate(self.coeffs))
        im = math.fsum(float(c) * math.sin(2 * math.pi * k / m) for k, c in enumerate(self.coeffs))
        return complex(re, im)

    def __repr__(self):
        return f"CycNum({self.order}, {self.format()})"

    def format(self):
        return format_complex(complex(self))

    def to_json(self):
        return {"order": self.order,
                "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, d):
        return cls(d["order"], [Fraction(n, den) for n, den in d["coeffs"]])


def _from_rational_ring(m, vec):
    rows = _reduction_rows(m)
    d = totient(m)
    out = [Fraction(0)] * d
    for k, c in enumerate(vec):
        if c:
            for i, r in enumerate(rows[k]):
                if r:
                    out[i] += c * r
    return CycNum(m, out)


def cyc_make(order, exponent=0):
    """zeta_order ** exponent."""
    vec = [0] * order
    vec[exponent % order] = 1
    return CycNum.from_group_ring(order, vec)


def cyc_lift(x, new_order):
    return x.lift(new_order)


def cyc_abs2(x):
    """|x|^2 under zeta_m -> exp(2 pi i / m)."""
    n = x * x.conj()
    if n.is_rational():
        return float(n.coeffs[0])
    return abs(complex(n).real)


class ShiftedValue:
    """A value carried by a complex placed in degree -shift."""

    __slots__ = ("value", "shift")

    def __init__(self, value, shift=0):
        self.value = value
        self.shift = int(shift)

    def effective(self):
        return self.value if self.shift % 2 == 0 else -self.value

    def shifted(self, k):
        return ShiftedValue(self.value, self.shift + k)

    def __eq__(self, other):
        if not isinstance(other, ShiftedValue):
            return NotImplemented
        return self.effective() == other.effective()

    __hash__ = None

    def __repr__(self):
        return f"ShiftedValue({self.value!r}, shift={self.shift})"
