"""Additive, multiplicative and group characters with values in Q(zeta_m).

Characters report values as exponents: ``exponent(x)`` is k with value
zeta_order^k.  Sums over many points are histograms of such exponents.
"""
import math

import numpy as np

from .cyclotomic import CycNum, cyc_make
from .errors import ConfigError


class AddChar:
    """x -> zeta_p^Tr(a x)."""

    def __init__(self, field, twist=1):
        self.field = field
        self.twist = int(twist)

    @property
    def order(self):
        return self.field.p

    @property
    def is_trivial(self):
        return self.twist == 0

    def exponent(self, x):
        F = self.field
        if isinstance(x, np.ndarray):
            return F.tr[F.vmul(self.twist, x)]
        return F.trace(F.mul(self.twist, x))

    def value(self, x):
        return cyc_make(self.order, self.exponent(x))

    def inverse(self):
        return AddChar(self.field, self.field.neg(self.twist))

    def __eq__(self, other):
        return isinstance(other, AddChar) and (self.field, self.twist) == (other.field, other.twist)

    def __hash__(self):
        return hash((self.field, self.twist))

    def __repr__(self):
        return f"AddChar(F_{self.field.q}, twist={self.field.to_int(self.twist)})"

    def describe(self):
        return {"add": {"twist": self.field.to_int(self.twist)}}


class MultChar:
    """gen^j -> zeta_{q-1}^(k j) on F_q^*."""

    def __init__(self, field, exponent):
        self.field = field
        self.k = int(exponent) % (field.q - 1)

    @property
    def order(self):
        n = self.field.q - 1
        return n // math.gcd(self.k, n)

    @property
    def is_trivial(self):
        return self.k == 0

    def exponent(self, x):
        """Exponent of the value in units of zeta_order; x must be nonzero."""
        n = self.field.q - 1
        step = n // self.order
        if isinstance(x, np.ndarray):
            if np.any(x == 0):
                raise ValueError("multiplicative character evaluated at 0")
            return (self.k // step) * (x - 1) % self.order
        if x == 0:
            raise ValueError("multiplicative character evaluated at 0")
        return (self.k // step) * (x - 1) % self.order

    def value(self, x):
        return cyc_make(self.order, self.exponent(x))

    def inverse(self):
        return MultChar(self.field, -self.k)

    def __eq__(self, other):
        return isinstance(other, MultChar) and (self.field, self.k) == (other.field, other.k)

    def __hash__(self):
        return hash((self.field, self.k))

    def __repr__(self):
        return f"MultChar(F_{self.field.q}, k={self.k})"

    def describe(self):
        return {"mult": {"exponent": self.k}}


def quadratic_char(F):
    if F.p == 2:
        raise ConfigError("no quadratic character in characteristic 2")
    return MultChar(F, (F.q - 1) // 2)


class GroupChar:
    """Character of an enumerated group G(F_q).

    The closed form is a vector of exponents, one per abelian coordinate of
    the group (torus coordinates, determinants of GL factors): the value at g
    is prod_i chi_{k_i}(c_i(g)).  ``table`` materialises the exponents over
    the enumerated elements; it is the authoritative source for sums.
    """

    def __init__(self, group, exponents):
        self.group = group
        F = group.field
        n = F.q - 1
        self.ks = tuple(int(k) % n for k in exponents)
        if len(self.ks) != group.ncoords:
            raise ConfigError(
                f"group has {group.ncoords} abelian coordinates, got {len(self.ks)} exponents")
        g = n
        for k in self.ks:
            g = math.gcd(g, k)
        self.order = n // g if g else 1
        self._unit = n // self.order
        self._table = None

    @property
    def field(self):
        return self.group.field

    @property
    def is_trivial(self):
        return all(k == 0 for k in self.ks)

    def exponent(self, g):
        n = self.field.q - 1
        logs = self.group.coord_logs(g)
        return sum(k * l for k, l in zip(self.ks, logs)) % n // self._unit

    def value(self, g):
        return cyc_make(self.order, self.exponent(g))

    @property
    def table(self):
        if self._table is None:
            n = self.field.q - 1
            L = self.group.coord_log_table()
            t = (L @ np.array(self.ks, dtype=np.int64)) % n // self._unit if L.shape[1] else \
                np.zeros(L.shape[0], dtype=np.int64)
            t.setflags(write=False)
            self._table = t
        return self._table

    def inverse(self):
        return GroupChar(self.group, [-k for k in self.ks])

    def factors(self):
        return [MultChar(self.field, k) for k in self.ks]

    def describe(self):
        return {"group": {"factors": [c.describe() for c in self.factors()]}}

    def __repr__(self):
        return f"GroupChar({self.group.kind}, ks={list(self.ks)})"

    def check_multiplicative(self, samples=20000, seed=0):
        """beta(gh) = beta(g) beta(h), beta(e) = 1, beta(g^-1) = beta(g)^-1."""
        G = self.group
        els = G.elements
        t = self.table
        d = self.order
        if self.exponent(G.identity) != 0:
            return False
        n = len(els)
        if n * n <= samples:
            pairs = ((i, j) for i in range(n) for j in range(n))
        else:
            rng = np.random.default_rng(seed)
            pairs = zip(rng.integers(0, n, samples).tolist(), rng.integers(0, n, samples).tolist())
        for i, j in pairs:
            gh = G.mul(els[i], els[j])
            if (t[i] + t[j]) % d != self.exponent(gh):
                return False
        for i, g in enumerate(els[: min(n, samples)]):
            if (t[i] + self.exponent(G.inv(g))) % d:
                return False
        return True


def gauss_sum(chi, psi):
    """-sum_{t in F_q^*} chi(t) psi(t)."""
    if chi.is_trivial or psi.is_trivial:
        raise ConfigError("gauss_sum needs nontrivial characters; use g_const")
    if chi.field != psi.field:
        raise ConfigError("characters live on different fields")
    F = chi.field
    d, p = chi.order, F.p
    m = d * p
    t = np.arange(1, F.q)
    k = (chi.exponent(t) * p + psi.exponent(t) * d) % m
    return -CycNum.from_group_ring(m, np.bincount(k, minlength=m))


def g_const(beta_gm, psi, variant="!"):
    """Frobenius trace of the rank-one constants G_!(beta, psi) / G_*(beta, psi).

    ``beta_gm`` is the restriction of beta to the scaling torus, given as a
    MultChar, or None when it is trivial.
    """
    if psi.is_trivial:
        raise ConfigError("additive character must be nontrivial")
    if variant not in ("!", "*"):
        raise ConfigError(f"unknown variant {variant!r}")
    if beta_gm is None or beta_gm.is_trivial:
        return CycNum.rational(1 if variant == "!" else psi.field.q)
    return gauss_sum(beta_gm, psi)


def char_extend(char, embedding):
    """Pull a character back to the extension field (via norm or trace)."""
    base, ext = embedding.base, embedding.ext
    if char.field != base:
        raise ConfigError("character and embedding use different fields")
    c = embedding.cofactor
    if isinstance(char, MultChar):
        return MultChar(ext, char.k * c)
    if isinstance(char, AddChar):
        return AddChar(ext, embedding(char.twist))
    if isinstance(char, GroupChar):
        return GroupChar(char.group.over(ext), [k * c for k in char.ks])
    raise TypeError(f"cannot extend {char!r}")
