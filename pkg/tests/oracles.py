"""Brute-force reference sums over prime fields.

Everything here works on plain residues mod p with its own discrete logs and
loops; only the final group-ring vector is handed to CycNum for comparison.
"""
import itertools
import math

from taut.cyclotomic import CycNum


def primitive_root(p):
    if p == 2:
        return 1
    for g in range(2, p):
        if len({pow(g, k, p) for k in range(p - 1)}) == p - 1:
            return g
    raise ValueError(p)


def dlog_table(p):
    g = primitive_root(p)
    return {pow(g, k, p): k for k in range(p - 1)}


def det_mod(A, p):
    A = [list(r) for r in A]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            for k in range(c, n):
                A[r][k] = (A[r][k] - f * A[c][k]) % p
    return d % p


def gl_elements(p, n):
    for flat in itertools.product(range(p), repeat=n * n):
        g = [flat[i * n:(i + 1) * n] for i in range(n)]
        if det_mod(g, p):
            yield g


class Sum:
    """Accumulates terms zeta_(p-1)^a * zeta_p^b as a group-ring histogram."""

    def __init__(self, p):
        self.p = p
        self.m = (p - 1) * p if p > 2 else 2
        self.hist = [0] * self.m

    def add(self, mult_exp, add_exp):
        p, m = self.p, self.m
        a = mult_exp * (m // (p - 1)) if p > 2 else 0
        self.hist[(a + add_exp * (m // p)) % m] += 1

    def value(self, sign=1):
        v = CycNum.from_group_ring(self.m, self.hist)
        return v if sign > 0 else -v


def gkz_sum(p, W, ks, x, twist=1):
    """sum_t prod chi_k(t_i) psi(twist * sum_j x_j prod_i t_i^w_ij)."""
    L = dlog_table(p)
    n, N = len(W), len(W[0])
    acc = Sum(p)
    for t in itertools.product(range(1, p), repeat=n):
        arg = 0
        for j in range(N):
            mono = 1
            for i in range(n):
                mono = mono * pow(t[i], W[i][j] % (p - 1), p) % p
            arg += x[j] * mono
        acc.add(sum(k * L[ti] for k, ti in zip(ks, t)), twist * arg % p)
    return acc.value()


def gl_trace_sum(p, m, k, A):
    """sum_{g in GL_m(F_p)} chi_k(det g) psi(sum_ij g_ij a_ji)."""
    L = dlog_table(p)
    acc = Sum(p)
    for g in gl_elements(p, m):
        tr = sum(g[i][j] * A[j][i] for i in range(m) for j in range(m)) % p
        acc.add(k * L[det_mod(g, p)], tr)
    return acc.value()


def torus_gl_sum(p, n, ks, a, b, C, D):
    """sum_{s,t,g} chi1(s) chi2(t) chi3(det g) psi(s^2 a + s t b + s Tr(gC) + t Tr(gD))."""
    L = dlog_table(p)
    acc = Sum(p)
    gls = list(gl_elements(p, n))
    for s in range(1, p):
        for t in range(1, p):
            for g in gls:
                trc = sum(g[i][j] * C[j][i] for i in range(n) for j in range(n))
                trd = sum(g[i][j] * D[j][i] for i in range(n) for j in range(n))
                arg = (s * s * a + s * t * b + s * trc + t * trd) % p
                e = ks[0] * L[s] + ks[1] * L[t] + ks[2] * L[det_mod(g, p)]
                acc.add(e, arg)
    return acc.value()


def gauss_direct(p, k):
    """-sum_t chi_k(t) psi(t) with the smallest primitive root."""
    L = dlog_table(p)
    acc = Sum(p)
    for t in range(1, p):
        acc.add(k * L[t], t)
    return acc.value(-1)


def fourier_direct(F, values, N, twist=1, sign=1):
    """xi -> sum_x f(x) psi(sign * twist * x.xi) over F_q^N, by a double loop."""
    q = F.q
    pts = list(itertools.product(range(q), repeat=N))
    out = []
    for xi in pts:
        acc = CycNum.rational(0)
        for x, fx in zip(pts, values):
            if fx.is_zero():
                continue
            dot = 0
            for a, b in zip(x, xi):
                dot = F.add(dot, F.mul(a, b))
            e = F.trace(F.mul(twist, dot)) * sign % F.p
            acc = acc + fx * CycNum.from_group_ring(F.p, [1 if i == e else 0 for i in range(F.p)])
        out.append(acc)
    return out


def lcm_all(xs):
    m = 1
    for x in xs:
        m = math.lcm(m, x)
    return m
