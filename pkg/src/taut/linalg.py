"""Matrices over a FieldTable: tuples of rows of canonical indices."""
import numpy as np

from .errors import ConfigError


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(A):
    return tuple(zip(*A))


def mat_mul(F, A, B):
    Bt = transpose(B)
    out = []
    for row in A:
        r = []
        for col in Bt:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            r.append(acc)
        out.append(tuple(r))
    return tuple(out)


def mat_vec(F, A, x):
    out = []
    for row in A:
        acc = 0
        for a, b in zip(row, x):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return tuple(out)


def _echelon(F, A):
    """Row-reduce a copy of A; returns (rows, det, pivots)."""
    rows = [list(r) for r in A]
    n, ncols = len(rows), len(rows[0]) if rows else 0
    det = 1
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            det = 0
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            det = F.neg(det)
        inv = F.inv(rows[r][c])
        det = F.mul(det, rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = F.neg(rows[i][c])
                rows[i] = [F.add(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows, det, pivots


def det(F, A):
    n = len(A)
    if n == 0:
        return 1
    rows, d, pivots = _echelon(F, A)
    return d if len(pivots) == n else 0


def inverse(F, A):
    n = len(A)
    aug = [tuple(A[i]) + identity(n)[i] for i in range(n)]
    rows, d, pivots = _echelon(F, aug)
    if pivots[:n] != list(range(n)):
        raise ConfigError("matrix is singular")
    return tuple(tuple(r[n:]) for r in rows)


def is_invertible(F, A):
    return det(F, A) != 0


def all_points(q, N):
    """Every point of F_q^N as a (q^N, N) index array, row-major order."""
    if N == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((q,) * N).reshape(N, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def point_index(x, q):
    i = 0
    for c in x:
        i = i * q + int(c)
    return i


def point_from_index(i, q, N):
    out = []
    for _ in range(N):
        out.append(i % q)
        i //= q
    return tuple(reversed(out))


def points_from_indices(idx, q, N):
    """Coordinates of each point index, as a (len(idx), N) array."""
    idx = np.asarray(idx, dtype=np.int64)
    w = q ** np.arange(N - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // w[None, :]) % q


def points_to_index(P, q):
    """Row-major index of each row of P."""
    w = q ** np.arange(P.shape[1] - 1, -1, -1, dtype=np.int64)
    return P @ w


def apply_matrix(F, A, P):
    """Apply A to every row of the point array P (vectorised)."""
    N = len(A)
    out = np.zeros((P.shape[0], N), dtype=np.int64)
    for i, row in enumerate(A):
        acc = np.zeros(P.shape[0], dtype=np.int64)
        for j, a in enumerate(row):
            if a:
                acc = F.vadd(acc, F.vmul(a, P[:, j]))
        out[:, i] = acc
    return out


def matrix_perm(F, A, q, N):
    """Index permutation x -> index(A x) over all of F_q^N."""
    P = all_points(q, N)
    return points_to_index(apply_matrix(F, A, P), q)


def dot_table(F, X, Y):
    """<x, y> = sum_j x_j y_j for point arrays X (a, N) and Y (b, N) -> (a, b)."""
    out = np.zeros((X.shape[0], Y.shape[0]), dtype=np.int64)
    for j in range(X.shape[1]):
        out = F.vadd(out, F.vmul(X[:, j][:, None], Y[:, j][None, :]))
    return out
