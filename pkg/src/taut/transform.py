"""Trace functions on F_q^N and their finite Fourier transforms.

A TraceFn stores each value as a group-ring vector in Z[Z/m] (coefficient of
zeta_m^k in column k) over a common positive denominator.  The stored values
belong to a complex placed with the given shift; the effective trace is
(-1)^shift times the stored value.
"""
import csv
import io
import math
from fractions import Fraction

import numpy as np

from . import budget, kernels
from .checks import CheckReport
from .cyclotomic import CycNum, format_complex, reduction_matrix
from .errors import ConfigError
from .field import field_from_descriptor
from .linalg import (all_points, apply_matrix, identity, inverse, is_invertible,
                     matrix_perm, point_from_index, point_index, transpose)

_SAFE = 2 ** 62


def _lift_data(data, m, M):
    if m == M:
        return data
    if M % m:
        raise ValueError(f"order {m} does not divide {M}")
    out = np.zeros((data.shape[0], M), dtype=data.dtype)
    out[:, :: M // m] = data
    return out


def _canon(data, m, mult=1):
    """Reduced coordinates of every row, multiplied by mult (exact)."""
    R = reduction_matrix(m)
    bound = (int(np.abs(data).max(initial=0)) * int(np.abs(R).max(initial=1))
             * m * abs(mult))
    if bound < _SAFE:
        return (data @ R) * mult
    return (data.astype(object) @ R.astype(object)) * mult


class TraceFn:
    __slots__ = ("field", "dim", "data", "den", "shift")

    def __init__(self, field, dim, data, den=1, shift=0):
        q = field.q
        budget.check(q ** dim, budget.domain_budget(), f"F_{q}^{dim}")
        data = np.array(data, dtype=np.int64)
        if data.ndim != 2 or data.shape[0] != q ** dim:
            raise ConfigError(f"expected {q ** dim} rows, got shape {data.shape}")
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        data.setflags(write=False)
        self.field = field
        self.dim = int(dim)
        self.data = data
        self.den = den
        self.shift = int(shift)

    # construction
    @classmethod
    def zeros(cls, field, dim, order=1, shift=0):
        return cls(field, dim, np.zeros((field.q ** dim, order), np.int64), shift=shift)

    @classmethod
    def delta(cls, field, dim, point=None, shift=0):
        data = np.zeros((field.q ** dim, 1), np.int64)
        data[0 if point is None else point_index(point, field.q), 0] = 1
        return cls(field, dim, data, shift=shift)

    @classmethod
    def constant(cls, field, dim, c=1, shift=0):
        return cls(field, dim, np.full((field.q ** dim, 1), int(c), np.int64), shift=shift)

    @classmethod
    def from_exponents(cls, field, dim, order, exps, mask=None, coeffs=None, shift=0):
        """Value coeffs[i] * zeta_order^exps[i] where mask[i], else 0."""
        n = field.q ** dim
        exps = np.asarray(exps, dtype=np.int64) % order
        if mask is None:
            mask = np.ones(n, dtype=bool)
        if coeffs is None:
            coeffs = np.ones(n, dtype=np.int64)
        data = np.zeros((n, order), np.int64)
        idx = np.flatnonzero(mask)
        np.add.at(data, (idx, exps[idx]), np.asarray(coeffs, dtype=np.int64)[idx])
        return cls(field, dim, data, shift=shift)

    @classmethod
    def from_values(cls, field, dim, values, shift=0):
        """Build from a sequence of CycNum (or rational) values."""
        vals = [v if isinstance(v, CycNum) else CycNum.rational(v) for v in values]
        m = 1
        for v in vals:
            m = math.lcm(m, v.order)
        den = 1
        for v in vals:
            for c in v.coeffs:
                den = math.lcm(den, c.denominator)
        data = np.zeros((len(vals), m), np.int64)
        for i, v in enumerate(vals):
            step = m // v.order
            for k, c in enumerate(v.coeffs):
                if c:
                    data[i, k * step] += int(c * den)
        return cls(field, dim, data, den=den, shift=shift)

    # access
    @property
    def order(self):
        return self.data.shape[1]

    @property
    def npoints(self):
        return self.data.shape[0]

    def _index(self, x):
        return x if isinstance(x, (int, np.integer)) else point_index(x, self.field.q)

    def value(self, x):
        """Stored (unsigned) value at a point or point index."""
        return CycNum.from_group_ring(self.order, self.data[self._index(x)], self.den)

    def effective(self, x):
        v = self.value(x)
        return -v if self.shift % 2 else v

    def values(self):
        return [self.value(i) for i in range(self.npoints)]

    def support(self):
        return np.flatnonzero(np.any(_canon(self.data, self.order) != 0, axis=1))

    def lifted(self, order):
        return TraceFn(self.field, self.dim, _lift_data(self.data, self.order, order),
                       self.den, self.shift)

    def with_shift(self, shift):
        return TraceFn(self.field, self.dim, self.data, self.den, shift)

    # comparison
    def _aligned(self, other):
        if self.field != other.field or self.dim != other.dim:
            raise ConfigError("trace functions live on different spaces")
        M = math.lcm(self.order, other.order)
        return (_lift_data(self.data, self.order, M), _lift_data(other.data, other.order, M), M)

    def mismatches(self, other, effective=True):
        """Point indices where the two functions differ (stored or effective values)."""
        a, b, M = self._aligned(other)
        sa = -1 if effective and self.shift % 2 else 1
        sb = -1 if effective and other.shift % 2 else 1
        ca = _canon(a, M, sa * other.den)
        cb = _canon(b, M, sb * self.den)
        return np.flatnonzero(np.any(ca != cb, axis=1))

    def equals(self, other, effective=True):
        return len(self.mismatches(other, effective)) == 0

    def __eq__(self, other):
        if not isinstance(other, TraceFn):
            return NotImplemented
        return self.shift == other.shift and self.equals(other, effective=False)

    __hash__ = None

    def is_zero(self):
        return not np.any(_canon(self.data, self.order))

    # arithmetic
    def _combine(self, other, sign):
        if self.shift != other.shift:
            raise ConfigError("cannot add functions with different shifts")
        a, b, M = self._aligned(other)
        den = math.lcm(self.den, other.den)
        data = a * (den // self.den) + sign * b * (den // other.den)
        return TraceFn(self.field, self.dim, data, den, self.shift)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return TraceFn(self.field, self.dim, -self.data, self.den, self.shift)

    def scale(self, c):
        c = Fraction(c)
        return TraceFn(self.field, self.dim, self.data * c.numerator,
                       self.den * c.denominator, self.shift)

    def times_root(self, k, order):
        """Multiply every value by zeta_order^k."""
        M = math.lcm(self.order, order)
        data = np.roll(_lift_data(self.data, self.order, M), (k * (M // order)) % M, axis=1)
        return TraceFn(self.field, self.dim, data, self.den, self.shift)

    def conj(self):
        m = self.order
        return TraceFn(self.field, self.dim, self.data[:, (-np.arange(m)) % m], self.den, self.shift)

    def pointwise_mul(self, other):
        a, b, M = self._aligned(other)
        data = kernels.cyclic_rowmul(a, b)
        return TraceFn(self.field, self.dim, data, self.den * other.den, self.shift + other.shift)

    def total(self):
        """Sum of the stored values over all points."""
        return CycNum.from_group_ring(self.order, self.data.sum(axis=0), self.den)

    def reindex(self, perm):
        """x -> f(perm[x]) for an index permutation."""
        return TraceFn(self.field, self.dim, self.data[np.asarray(perm)], self.den, self.shift)

    # export
    def complex_values(self):
        m = self.order
        roots = np.exp(2j * np.pi * np.arange(m) / m)
        return (self.data @ roots) / self.den

    def to_json(self):
        return {"field": self.field.descriptor(), "dim": self.dim, "shift": self.shift,
                "values": [v.to_json() for v in self.values()]}

    @classmethod
    def from_json(cls, d):
        F = field_from_descriptor(d["field"])
        return cls.from_values(F, d["dim"], [CycNum.from_json(v) for v in d["values"]],
                               shift=d.get("shift", 0))

    def to_csv(self, fh=None, effective=True):
        """Rows: index, point (integer encodings), value as a+bi (12 digits)."""
        own = fh is None
        if own:
            fh = io.StringIO()
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "point", "value"])
        z = self.complex_values()
        if effective and self.shift % 2:
            z = -z
        F, q, N = self.field, self.field.q, self.dim
        for i, c in enumerate(z):
            pt = " ".join(str(F.to_int(a)) for a in point_from_index(i, q, N))
            w.writerow([i, pt, format_complex(c)])
        if own:
            return fh.getvalue()
        return None

    def __repr__(self):
        return (f"TraceFn(F_{self.field.q}^{self.dim}, order={self.order}, den={self.den}, "
                f"shift={self.shift})")


class Pairing:
    """<x, xi> = x^T M xi over F_q."""

    def __init__(self, field, dim, matrix=None):
        self.field = field
        self.dim = int(dim)
        M = identity(dim) if matrix is None else tuple(tuple(int(a) for a in r) for r in matrix)
        if len(M) != dim or any(len(r) != dim for r in M):
            raise ConfigError("pairing matrix has the wrong shape")
        if dim and not is_invertible(field, M):
            raise ConfigError("pairing is degenerate")
        self.matrix = M

    @property
    def is_identity(self):
        return self.matrix == identity(self.dim)

    def table(self, twist=1):
        """(q^N, q^N) exponent table Tr(twist * <x, xi>)."""
        F = self.field
        X = all_points(F.q, self.dim)
        MX = apply_matrix(F, self.matrix, X)
        acc = np.zeros((X.shape[0], X.shape[0]), np.int64)
        for j in range(self.dim):
            acc = F.vadd(acc, F.vmul(X[:, j, None], MX[None, :, j]))
        return F.tr[F.vmul(twist, acc)]

    def dual_matrix(self, g):
        """Matrix h with <g x, h xi> = <x, xi>, i.e. M^-1 g^-T M."""
        F = self.field
        from .linalg import mat_mul
        Mi = inverse(F, self.matrix)
        return mat_mul(F, mat_mul(F, Mi, inverse(F, transpose(g))), self.matrix)


def trace_pairing(F, dims):
    """Pairing on a sum of matrix spaces End(F^d): <A, B> = sum Tr(A_l B_l)."""
    N = sum(d * d for d in dims)
    M = [[0] * N for _ in range(N)]
    off = 0
    for d in dims:
        for i in range(d):
            for j in range(d):
                M[off + i * d + j][off + j * d + i] = 1
        off += d * d
    return Pairing(F, N, M)


def fourier(f, psi, pairing=None, direction=1, path="auto"):
    """xi -> sum_x f(x) psi(+-<x, xi>); the shift grows by N."""
    F, N = f.field, f.dim
    if psi.field != F:
        raise ConfigError("additive character and function use different fields")
    if pairing is None:
        pairing = Pairing(F, N)
    if pairing.field != F or pairing.dim != N:
        raise ConfigError("pairing does not match the function's space")
    if direction not in (1, -1):
        raise ConfigError("direction must be +1 or -1")
    twist = psi.twist if direction == 1 else F.neg(psi.twist)
    p, q = F.p, F.q
    M = math.lcm(f.order, p)
    data = _lift_data(f.data, f.order, M)
    step = M // p
    if path == "auto":
        path = "factored" if pairing.is_identity else "naive"
    if path == "factored":
        if not pairing.is_identity:
            raise ConfigError("the factored path needs the identity pairing")
        x = np.arange(q)
        E = F.tr[F.vmul(twist, F.vmul(x[:, None], x[None, :]))]
        arr = data.reshape((q,) * N + (M,))
        for ax in range(N):
            shp = arr.shape
            pre = q ** ax
            arr = kernels.axis_transform(arr.reshape(pre, q, -1, M), E, step).reshape(shp)
        out = arr.reshape(q ** N, M)
    elif path == "naive":
        out = kernels.pair_transform(data, pairing.table(twist), step)
    else:
        raise ConfigError(f"unknown path {path!r}")
    return TraceFn(F, N, out, f.den, f.shift + N)


def fourier_inverse_check(f, psi, pairing=None):
    """FT_{psi^-1}(FT_psi f) = q^N f at every point, exactly."""
    g = fourier(f, psi, pairing)
    h = fourier(g, psi, pairing, direction=-1)
    target = f.scale(f.field.q ** f.dim)
    bad = h.mismatches(target, effective=False)
    witness = None
    if len(bad):
        i = int(bad[0])
        witness = {"point": i, "got": h.value(i).format(), "want": target.value(i).format()}
    return CheckReport("fourier_inversion", not len(bad), f.npoints, witness,
                       {"intermediate_shift": g.shift})


def pullback_linear(f, A):
    """x -> f(A x)."""
    F = f.field
    A = tuple(tuple(int(a) for a in r) for r in A)
    if len(A) != f.dim or not is_invertible(F, A):
        raise ConfigError("pullback needs an invertible N x N matrix")
    return f.reindex(matrix_perm(F, A, F.q, f.dim))


def external_product(f, g):
    """(x, y) -> f(x) g(y); shifts add."""
    if f.field != g.field:
        raise ConfigError("external product needs a common field")
    M = math.lcm(f.order, g.order)
    a = _lift_data(f.data, f.order, M)
    b = _lift_data(g.data, g.order, M)
    out = kernels.cyclic_outer(a, b).reshape(-1, M)
    return TraceFn(f.field, f.dim + g.dim, out, f.den * g.den, f.shift + g.shift)


def bilinear(f, h):
    """sum_x f(x) h(x) on stored values."""
    return f.pointwise_mul(h).total()


def plancherel_check(f, h, psi, pairing=None):
    """sum FT_psi f * FT_{psi^-1} h = q^N sum f h."""
    lhs = bilinear(fourier(f, psi, pairing), fourier(h, psi, pairing, direction=-1))
    rhs = bilinear(f, h) * (f.field.q ** f.dim)
    ok = lhs == rhs
    return CheckReport("plancherel", ok, f.npoints,
                       None if ok else {"lhs": lhs.format(), "rhs": rhs.format()})


def random_root_function(field, dim, order, rng, zero_prob=0.2):
    """Random function with values in {0} U mu_order (for tests and benchmarks)."""
    n = field.q ** dim
    exps = rng.integers(0, order, n)
    mask = rng.random(n) >= zero_prob
    return TraceFn.from_exponents(field, dim, order, exps, mask)


__all__ = ["TraceFn", "Pairing", "trace_pairing", "fourier", "fourier_inverse_check",
           "pullback_linear", "external_product", "bilinear", "plancherel_check",
           "random_root_function"]
