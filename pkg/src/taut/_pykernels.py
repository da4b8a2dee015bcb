"""Numpy reference implementations of the group-ring kernels.

All arrays hold int64 group-ring coefficients: the last axis indexes the
exponent k of zeta_m^k.
"""
import numpy as np


def axis_transform(data, E, step):
    """out[a, xi, b, (k + step*E[x, xi]) % m] += data[a, x, b, k].

    data has shape (pre, q, post, m); E is the (q, q) exponent table.
    """
    pre, q, post, m = data.shape
    D = np.moveaxis(data, 1, 0)
    out = np.empty_like(D)
    base = np.arange(m)
    for xi in range(q):
        idx = (base[None, :] - step * E[:, xi, None]) % m
        idx = np.broadcast_to(idx[:, None, None, :], D.shape)
        out[xi] = np.take_along_axis(D, idx, axis=3).sum(axis=0)
    return np.ascontiguousarray(np.moveaxis(out, 0, 1))


def pair_transform(data, P, step):
    """out[xi, (k + step*P[x, xi]) % m] += data[x, k] for a dense (n, n) table P."""
    n, m = data.shape
    out = np.empty((P.shape[1], m), dtype=data.dtype)
    base = np.arange(m)
    nz = np.flatnonzero(data.any(axis=1))
    D = data[nz]
    for xi in range(P.shape[1]):
        idx = (base[None, :] - step * P[nz, xi, None]) % m
        out[xi] = np.take_along_axis(D, idx, axis=1).sum(axis=0)
    return out


def cyclic_outer(f, g):
    """out[i, j] = f[i] * g[j] in Z[Z/m]; f is (a, m), g is (b, m)."""
    a, m = f.shape
    out = np.zeros((a, g.shape[0], m), dtype=f.dtype)
    for k in np.flatnonzero(f.any(axis=0)):
        out += f[:, None, k, None] * np.roll(g, k, axis=1)[None, :, :]
    return out


def cyclic_rowmul(f, g):
    """out[i] = f[i] * g[i] in Z[Z/m]."""
    out = np.zeros_like(f)
    for k in np.flatnonzero(f.any(axis=0)):
        out += f[:, k, None] * np.roll(g, k, axis=1)
    return out
