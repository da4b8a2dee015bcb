"""Small finite fields F_{p^f} with exhaustive lookup tables.

Elements are plain ints in the canonical enumeration: index 0 is zero and
index i >= 1 is gen^(i-1).  The polynomial encoding of an element (base-p
digits of its coefficient vector, constant term first) is available through
``to_int``/``from_int`` and is what configs and reports use.
"""
from functools import lru_cache

import numpy as np

from . import budget
from .errors import BudgetError, ConfigError


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# polynomials over F_p: coefficient lists, constant term first

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = [c % p for c in a]
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(_trim(a)) - 1 >= dm:
        a = _trim(a)
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for i, mc in enumerate(m):
            a[i + shift] = (a[i + shift] - c * mc) % p
    return _trim(a)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p) if len(b) > 1 else []
    return a


def is_irreducible(modulus, p):
    """Rabin's test for a polynomial over F_p (coefficients constant-first)."""
    m = _trim([c % p for c in modulus])
    f = len(m) - 1
    if f < 1:
        return False
    if f == 1:
        return True
    m = [c * pow(m[-1], -1, p) % p for c in m]
    x = [0, 1]
    if _psub(_ppowmod(x, p ** f, m, p), x, p):
        return False
    for r in prime_factors(f):
        h = _psub(_ppowmod(x, p ** (f // r), m, p), x, p)
        if len(_pgcd(m, h, p)) != 1:
            return False
    return True


def _digits(a, p, f):
    out = []
    for _ in range(f):
        out.append(a % p)
        a //= p
    return out


def _undigits(d, p):
    a = 0
    for c in reversed(d):
        a = a * p + c
    return a


def default_modulus(p, f):
    """Lexicographically smallest monic irreducible of degree f (by encoding)."""
    for low in range(p ** f):
        m = _digits(low, p, f) + [1]
        if is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")


def _is_primitive(a, m, p, q):
    if a == 0:
        return False
    f = len(m) - 1
    g = _trim(_digits(a, p, f))
    if _ppowmod(g, q - 1, m, p) != [1]:
        return False
    return all(_ppowmod(g, (q - 1) // r, m, p) != [1] for r in prime_factors(q - 1))


class FieldTable:
    """F_q = F_p[x]/(modulus) with log/exp/trace tables.

    Construct with :func:`make_field`; instances are immutable.
    """

    def __init__(self, p, f, modulus, generator):
        q = p ** f
        self.p, self.f, self.q = p, f, q
        self.modulus = tuple(modulus)
        self.generator = generator
        m = list(modulus)
        # multiplication by the generator as an F_p-linear map on digit vectors
        g = _trim(_digits(generator, p, f))
        cols = [_pmod(_pmul(g, [0] * i + [1], p), m, p) for i in range(f)]
        cols = [c + [0] * (f - len(c)) for c in cols]
        poly = np.zeros(q, dtype=np.int64)
        cur = [1] + [0] * (f - 1)
        for k in range(q - 1):
            poly[k + 1] = _undigits(cur, p)
            cur = [sum(cur[i] * cols[i][j] for i in range(f)) % p for j in range(f)]
        if _undigits(cur, p) != 1 or len(set(poly.tolist())) != q:
            raise ConfigError(f"generator {generator} is not primitive")
        index = np.zeros(q, dtype=np.int64)
        index[poly] = np.arange(q)
        self.poly = poly
        self.index = index
        self._pw = p ** np.arange(f, dtype=np.int64)
        self.digits = (poly[:, None] // self._pw) % p
        self.add_table = None
        if q <= 1024:
            dig = (self.digits[:, None, :] + self.digits[None, :, :]) % p
            self.add_table = index[dig @ self._pw]
        ks = np.arange(q)
        acc = np.zeros((q, f), dtype=np.int64)
        for k in range(f):
            acc += self.digits[self.frob(ks, k)]
        acc %= p
        if np.any(acc[:, 1:]):
            raise AssertionError("trace does not land in the prime field")
        self.tr = acc[:, 0].copy()
        for arr in (self.poly, self.index, self.digits, self.tr):
            arr.setflags(write=False)
        if self.add_table is not None:
            self.add_table.setflags(write=False)

    def __repr__(self):
        return f"FieldTable(p={self.p}, f={self.f})"

    def __eq__(self, other):
        return isinstance(other, FieldTable) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        return (self.p, self.f, self.modulus, self.generator)

    @property
    def gen(self):
        """Canonical index of the generator (always 2 unless q == 2)."""
        return 2 if self.q > 2 else 1

    def descriptor(self):
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus),
                "generator_index": int(self.generator)}

    # conversions
    def from_int(self, a):
        if not 0 <= a < self.q:
            raise ConfigError(f"{a} is not an element encoding of F_{self.q}")
        return int(self.index[a])

    def to_int(self, x):
        return int(self.poly[x])

    def log(self, x):
        if x == 0:
            raise ZeroDivisionError("log of zero")
        return x - 1

    def exp(self, k):
        return k % (self.q - 1) + 1

    # scalar arithmetic on canonical indices
    def add(self, x, y):
        if self.add_table is not None:
            return int(self.add_table[x, y])
        return int(self.vadd(np.asarray(x), np.asarray(y)))

    def neg(self, x):
        if x == 0 or self.p == 2:
            return x
        return (x - 1 + (self.q - 1) // 2) % (self.q - 1) + 1

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        return (x + y - 2) % (self.q - 1) + 1

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return (1 - x) % (self.q - 1) + 1

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, k):
        if x == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return (x - 1) * k % (self.q - 1) + 1

    def frob(self, x, k=1):
        """x -> x^(p^k); works on scalars and arrays."""
        e = pow(self.p, k, self.q - 1) if self.q > 2 else 1
        x = np.asarray(x)
        out = np.where(x == 0, 0, (x - 1) * e % max(self.q - 1, 1) + 1)
        return int(out) if out.ndim == 0 else out

    def trace(self, x):
        return int(self.tr[x])

    # vectorised arithmetic on index arrays
    def vadd(self, x, y):
        if self.add_table is not None:
            return self.add_table[x, y]
        d = (self.digits[x] + self.digits[y]) % self.p
        return self.index[d @ self._pw]

    def vneg(self, x):
        if self.p == 2:
            return np.asarray(x)
        x = np.asarray(x)
        return np.where(x == 0, 0, (x - 1 + (self.q - 1) // 2) % (self.q - 1) + 1)

    def vmul(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        return np.where((x == 0) | (y == 0), 0, (x + y - 2) % (self.q - 1) + 1)

    def vpow(self, x, k):
        x = np.asarray(x)
        k = np.asarray(k)
        return np.where(x == 0, np.where(k == 0, 1, 0), (x - 1) * k % (self.q - 1) + 1)


def trace_to_prime(F, x):
    """Absolute trace Tr_{F_q/F_p}(x) as a residue in 0..p-1."""
    return F.trace(x)


@lru_cache(maxsize=None)
def _build(p, f, modulus, generator):
    return FieldTable(p, f, modulus, generator)


def make_field(p, f=1, modulus=None, generator=None, _accept=None):
    """Build F_{p^f}.

    The modulus defaults to the smallest monic irreducible polynomial (by
    integer encoding) and the generator to the smallest primitive element.
    ``_accept`` is an extra predicate on candidate generators, used to make
    extension towers compatible.
    """
    if not is_prime(p):
        raise ConfigError(f"{p} is not prime")
    if f < 1:
        raise ConfigError("degree must be positive")
    q = p ** f
    if q > budget.FIELD_BUDGET:
        raise BudgetError(f"q = {q} exceeds the field budget {budget.FIELD_BUDGET}")
    if modulus is None:
        modulus = default_modulus(p, f)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ConfigError("modulus must be monic of degree f")
        if not is_irreducible(modulus, p):
            raise ConfigError(f"modulus {list(modulus)} is reducible over F_{p}")
    if generator is None:
        if q == 2:
            generator = 1
        else:
            generator = next(a for a in range(1, q)
                             if _is_primitive(a, list(modulus), p, q)
                             and (_accept is None or _accept(a, modulus)))
    elif q > 2 and not _is_primitive(generator, list(modulus), p, q):
        raise ConfigError(f"generator {generator} is not primitive")
    return _build(p, f, tuple(modulus), int(generator))


def field_from_descriptor(d):
    return make_field(int(d["p"]), int(d.get("f", 1)), d.get("modulus"),
                      d.get("generator_index"))


def minimal_polynomial(F, x):
    """Minimal polynomial of x over F_p (coefficients constant-first, residues)."""
    conj = [x]
    while True:
        y = F.frob(conj[-1])
        if y == x:
            break
        conj.append(y)
    # multiply out prod (X - c) with coefficients in F
    coeffs = [1]
    for c in conj:
        nc = F.neg(c)
        new = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            new[i + 1] = F.add(new[i + 1], a)
            new[i] = F.add(new[i], F.mul(a, nc))
        coeffs = new
    out = []
    for a in coeffs:
        v = F.to_int(a)
        if v >= F.p:
            raise AssertionError("minimal polynomial not over F_p")
        out.append(v)
    return out


class FieldEmbedding:
    """F_q -> F_{q^m} sending gen to ext.gen^((q^m-1)/(q-1))."""

    def __init__(self, base, ext, degree):
        self.base, self.ext, self.degree = base, ext, degree
        q, Q = base.q, ext.q
        c = (Q - 1) // (q - 1)
        idx = np.arange(q)
        self.map = np.where(idx == 0, 0, (idx - 1) * c % (Q - 1) + 1)
        self.map.setflags(write=False)
        self._pull = {int(y): i for i, y in enumerate(self.map)}
        self.cofactor = c

    def __call__(self, x):
        return int(self.map[x])

    def pullback(self, y):
        try:
            return self._pull[int(y)]
        except KeyError:
            raise ValueError(f"{y} is not in the image of the base field") from None

    def rel_trace(self, y):
        """Tr_{ext/base}(y) as a base-field element."""
        E, q = self.ext, self.base.q
        acc = 0
        for i in range(self.degree):
            acc = E.add(acc, E.pow(y, q ** i))
        return self.pullback(acc)

    def rel_norm(self, y):
        """N_{ext/base}(y) as a base-field element."""
        if y == 0:
            return 0
        return (y - 1) % (self.base.q - 1) + 1


def extend_field(F, m):
    """Embedding of F into F_{q^m} with a compatible generator."""
    if m < 1:
        raise ConfigError("extension degree must be positive")
    if m == 1:
        return FieldEmbedding(F, F, 1)
    p = F.p
    if F.q ** m > budget.FIELD_BUDGET:
        raise BudgetError(f"q^m = {F.q ** m} exceeds the field budget")
    target = minimal_polynomial(F, F.gen) if F.q > 2 else None
    Q = F.q ** m
    c = (Q - 1) // (F.q - 1)

    def accept(a, modulus):
        if target is None:
            return True
        g = _trim(_digits(a, p, F.f * m))
        h = _ppowmod(g, c, list(modulus), p)
        acc = []
        hp = [1]
        for coef in target:
            acc = _psub(acc, [(-coef * t) % p for t in hp], p) if coef else acc
            hp = _pmod(_pmul(hp, h, p), list(modulus), p)
        return not acc

    ext = make_field(p, F.f * m, _accept=accept)
    return FieldEmbedding(F, ext, m)
