"""Finite groups of points (tori, GL_n, products), linear actions, orbits.

Elements are plain tuples: a torus element is a tuple of nonzero field
indices, a GL_n element is a tuple of rows, a product element is a tuple of
factor elements.  The abelian coordinates of a group (torus coordinates and
determinants of GL factors, in factor order) carry every character used here.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import budget
from .checks import CheckReport
from .errors import ConfigError, FiberError
from .linalg import (apply_matrix, det, identity, inverse, mat_mul, mat_vec, matrix_perm,
                     point_from_index, point_index, points_from_indices,
                     points_to_index)
from .transform import TraceFn, _canon, _lift_data


# ---------------------------------------------------------------- groups

class GroupPoints:
    kind = None

    def __init__(self, field):
        self.field = field
        self._elements = None
        self._index = None
        self._logs = None

    @property
    def elements(self):
        if self._elements is None:
            budget.check(self.order, budget.GROUP_BUDGET, f"group {self.kind}")
            els = tuple(self._enumerate())
            if len(els) != self.order:
                raise AssertionError(f"enumerated {len(els)} elements, expected {self.order}")
            self._elements = els
        return self._elements

    def __len__(self):
        return self.order

    def index(self, g):
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index[g]

    def coord_log_table(self):
        if self._logs is None:
            L = np.array([self.coord_logs(g) for g in self.elements], dtype=np.int64)
            L = L.reshape(self.order, self.ncoords)
            L.setflags(write=False)
            self._logs = L
        return self._logs

    def over(self, ext):
        return make_group(ext, self.kind)

    def power(self, g, k):
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, GroupPoints) and self.field == other.field and self.kind == other.kind

    def __hash__(self):
        return hash((self.field, repr(self.kind)))

    def __repr__(self):
        return f"GroupPoints({self.kind}, F_{self.field.q})"

    def check_axioms(self, exhaustive_limit=10 ** 6, samples=20000, seed=0):
        """Closure, identity, inverses, associativity; sampled for large groups."""
        els = self.elements
        n = len(els)
        e = self.identity
        idx = self.index
        checked = 0
        try:
            idx(e)
        except KeyError:
            return CheckReport("group_axioms", False, 0, {"missing_identity": repr(e)})
        for g in els:
            if self.mul(e, g) != g or self.mul(g, e) != g or self.mul(g, self.inv(g)) != e:
                return CheckReport("group_axioms", False, checked, {"element": repr(g)})
            checked += 1
        if n ** 3 <= exhaustive_limit:
            # Cayley table, then associativity on all triples at once
            T = np.empty((n, n), dtype=np.int64)
            for i, a in enumerate(els):
                for j, b in enumerate(els):
                    try:
                        T[i, j] = idx(self.mul(a, b))
                    except KeyError:
                        return CheckReport("group_axioms", False, checked,
                                           {"not_closed": [repr(a), repr(b)]})
            bad = np.argwhere(T[T, :] != T[:, T])
            if bad.size:
                i, j, k = bad[0].tolist()
                return CheckReport("group_axioms", False, checked,
                                   {"not_associative": [repr(els[i]), repr(els[j]), repr(els[k])]})
            checked += n ** 3
            mode = "exhaustive"
        else:
            mode = "sampled"
            rng = np.random.default_rng(seed)
            for i, j, k in rng.integers(0, n, (samples, 3)).tolist():
                a, b, c = els[i], els[j], els[k]
                ab = self.mul(a, b)
                try:
                    idx(ab)
                except KeyError:
                    return CheckReport("group_axioms", False, checked,
                                       {"not_closed": [repr(a), repr(b)]})
                if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                    return CheckReport("group_axioms", False, checked,
                                       {"not_associative": [repr(a), repr(b), repr(c)]})
                checked += 1
        return CheckReport("group_axioms", True, checked, notes={"mode": mode, "order": n})


class Torus(GroupPoints):
    def __init__(self, field, rank):
        super().__init__(field)
        self.rank = int(rank)
        self.kind = {"torus": self.rank}
        self.dim = self.rank
        self.ncoords = self.rank
        self.order = (field.q - 1) ** self.rank
        self.identity = (1,) * self.rank

    def _enumerate(self):
        return itertools.product(range(1, self.field.q), repeat=self.rank)

    def mul(self, a, b):
        F = self.field
        return tuple(F.mul(x, y) for x, y in zip(a, b))

    def inv(self, a):
        return tuple(self.field.inv(x) for x in a)

    def coord_logs(self, g):
        return tuple(x - 1 for x in g)

    def coord_log_table(self):
        if self._logs is None:
            L = np.array(self.elements, dtype=np.int64).reshape(self.order, self.rank) - 1
            L.setflags(write=False)
            self._logs = L
        return self._logs

    def generators(self):
        if self.field.q == 2:
            return []
        g = self.field.gen
        return [tuple(g if i == j else 1 for j in range(self.rank)) for i in range(self.rank)]

    def scalar_matrix(self, g):
        raise ConfigError("torus elements have no standard matrix")


class GL(GroupPoints):
    def __init__(self, field, n):
        super().__init__(field)
        self.n = int(n)
        if self.n < 1:
            raise ConfigError("GL_n needs n >= 1")
        self.kind = {"gl": self.n}
        self.dim = self.n * self.n
        self.ncoords = 1
        q = field.q
        self.order = math.prod(q ** self.n - q ** i for i in range(self.n))
        self.identity = identity(self.n)

    def _enumerate(self):
        # constructive row selection: each new row lies outside the span of the previous ones
        F, n, q = self.field, self.n, self.field.q
        vectors = list(itertools.product(range(q), repeat=n))

        def span(rows):
            out = {(0,) * n}
            for r in rows:
                out = {tuple(F.add(x, F.mul(c, y)) for x, y in zip(s, r))
                       for s in out for c in range(q)}
            return out

        def extend(rows):
            if len(rows) == n:
                yield tuple(rows)
                return
            S = span(rows)
            for v in vectors:
                if v not in S:
                    yield from extend(rows + [v])

        return extend([])

    def mul(self, a, b):
        return mat_mul(self.field, a, b)

    def inv(self, a):
        return inverse(self.field, a)

    def coord_logs(self, g):
        return (det(self.field, g) - 1,)

    def generators(self):
        F, n = self.field, self.n
        gens = []
        if F.q > 2:
            gens.append(tuple(tuple((F.gen if i == 0 else 1) if i == j else 0 for j in range(n))
                              for i in range(n)))
        for i in range(n):
            for j in range(n):
                if i != j:
                    gens.append(tuple(tuple(1 if (r == c or (r, c) == (i, j)) else 0
                                            for c in range(n)) for r in range(n)))
        return gens


class Product(GroupPoints):
    def __init__(self, field, factors):
        super().__init__(field)
        self.factors = tuple(factors)
        if not self.factors:
            raise ConfigError("product of no groups")
        if any(G.field != field for G in self.factors):
            raise ConfigError("product factors use different fields")
        self.kind = {"product": [G.kind for G in self.factors]}
        self.dim = sum(G.dim for G in self.factors)
        self.ncoords = sum(G.ncoords for G in self.factors)
        self.order = math.prod(G.order for G in self.factors)
        self.identity = tuple(G.identity for G in self.factors)

    def _enumerate(self):
        return itertools.product(*(G.elements for G in self.factors))

    def mul(self, a, b):
        return tuple(G.mul(x, y) for G, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(G.inv(x) for G, x in zip(self.factors, a))

    def coord_logs(self, g):
        out = ()
        for G, x in zip(self.factors, g):
            out += tuple(G.coord_logs(x))
        return out

    def coord_log_table(self):
        if self._logs is None:
            blocks = []
            sizes = [G.order for G in self.factors]
            for i, G in enumerate(self.factors):
                L = G.coord_log_table()
                rep_inner = math.prod(sizes[i + 1:])
                rep_outer = math.prod(sizes[:i])
                blocks.append(np.tile(np.repeat(L, rep_inner, axis=0), (rep_outer, 1)))
            T = np.concatenate(blocks, axis=1) if blocks else np.zeros((self.order, 0), np.int64)
            T = np.ascontiguousarray(T, dtype=np.int64)
            T.setflags(write=False)
            self._logs = T
        return self._logs

    def generators(self):
        gens = []
        for i, G in enumerate(self.factors):
            for s in G.generators():
                gens.append(tuple(s if j == i else H.identity for j, H in enumerate(self.factors)))
        return gens


def make_torus(F, n):
    return Torus(F, n)


def make_gl(F, n):
    return GL(F, n)


def product(*groups):
    if len(groups) == 1 and isinstance(groups[0], (list, tuple)):
        groups = groups[0]
    return Product(groups[0].field, groups)


def make_group(F, kind):
    """Build a group from a descriptor {"torus": n} | {"gl": n} | {"product": [...]}."""
    if not isinstance(kind, dict) or len(kind) != 1:
        raise ConfigError(f"bad group descriptor {kind!r}")
    (key, val), = kind.items()
    if key == "torus":
        return Torus(F, _posint(val, "torus rank"))
    if key == "gl":
        return GL(F, _posint(val, "GL size"))
    if key == "product":
        if not isinstance(val, list) or not val:
            raise ConfigError("product descriptor needs a nonempty list")
        return Product(F, [make_group(F, k) for k in val])
    raise ConfigError(f"unknown group kind {key!r}")


def _posint(v, what):
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise ConfigError(f"{what} must be a positive integer, got {v!r}")
    return v


def factors_of(G):
    return G.factors if isinstance(G, Product) else (G,)


def split_element(G, g):
    return g if isinstance(G, Product) else (g,)


# ---------------------------------------------------------------- representations

class MatrixRep:
    """Group homomorphism G -> GL_d(F_q) given by a descriptor.

    Descriptor {"factors": [...]} with one entry per group factor: a torus
    factor takes a list of exponents (scalar prod t_i^a_i), a GL factor takes
    0 (trivial), 1 (standard matrix) or {"det": k}.  At most one GL factor may
    contribute its standard matrix.
    """

    def __init__(self, group, descriptor):
        self.group = group
        self.descriptor = descriptor
        facs = factors_of(group)
        if not isinstance(descriptor, dict) or "factors" not in descriptor:
            raise ConfigError(f"bad representation descriptor {descriptor!r}")
        spec = descriptor["factors"]
        if not isinstance(spec, list) or len(spec) != len(facs):
            raise ConfigError(f"representation needs {len(facs)} factor entries")
        self._spec = []
        self.dim = 1
        self._matrix_factor = None
        for i, (G, s) in enumerate(zip(facs, spec)):
            if isinstance(G, Torus):
                if not isinstance(s, list) or len(s) != G.rank:
                    raise ConfigError(f"torus factor {i} needs {G.rank} exponents")
                self._spec.append(("torus", tuple(int(a) for a in s)))
            else:
                if s == 1:
                    if self._matrix_factor is not None:
                        raise ConfigError("at most one GL factor may act by its matrix")
                    self._matrix_factor = i
                    self.dim = G.n
                    self._spec.append(("std", None))
                elif s == 0:
                    self._spec.append(("det", 0))
                elif isinstance(s, dict) and "det" in s:
                    self._spec.append(("det", int(s["det"])))
                else:
                    raise ConfigError(f"bad GL factor entry {s!r}")

    def scalar(self, g):
        F = self.field
        c = 1
        for (kind, a), G, x in zip(self._spec, factors_of(self.group), split_element(self.group, g)):
            if kind == "torus":
                for t, e in zip(x, a):
                    c = F.mul(c, F.pow(t, e))
            elif kind == "det" and a:
                c = F.mul(c, F.pow(det(F, x), a))
        return c

    @property
    def field(self):
        return self.group.field

    def matrix(self, g):
        F = self.field
        c = self.scalar(g)
        if self._matrix_factor is None:
            return ((c,),)
        A = split_element(self.group, g)[self._matrix_factor]
        return tuple(tuple(F.mul(c, a) for a in row) for row in A)


# ---------------------------------------------------------------- actions

class LinearAction:
    """G acting linearly on F_q^N through matrix(g)."""

    def __init__(self, group, dim, matrix_fn, descriptor):
        self.group = group
        self.dim = int(dim)
        self._matrix_fn = matrix_fn
        self.descriptor = descriptor
        self._images = {}

    @property
    def field(self):
        return self.group.field

    def matrix(self, g):
        return self._matrix_fn(g)

    def apply(self, g, x):
        return mat_vec(self.field, self.matrix(g), x)

    def images(self, v):
        """Point index of g.v for every enumerated g (aligned with group.elements)."""
        key = tuple(v)
        if key not in self._images:
            q = self.field.q
            arr = np.fromiter((point_index(self.apply(g, key), q) for g in self.group.elements),
                              dtype=np.int64, count=self.group.order)
            arr.setflags(write=False)
            self._images[key] = arr
        return self._images[key]

    def over(self, ext):
        return make_action(self.group.over(ext), self.descriptor)

    def check_axioms(self, samples=2000, seed=0):
        """e acts trivially; (gh).x = g.(h.x) on all (or sampled) pairs."""
        G, F = self.group, self.field
        if self.matrix(G.identity) != identity(self.dim):
            return CheckReport("action_axioms", False, 0, {"identity": "acts nontrivially"})
        els = G.elements
        n = len(els)
        if n * n <= samples:
            pairs = itertools.product(range(n), repeat=2)
        else:
            rng = np.random.default_rng(seed)
            pairs = rng.integers(0, n, (samples, 2)).tolist()
        checked = 0
        for i, j in pairs:
            g, h = els[i], els[j]
            if self.matrix(G.mul(g, h)) != mat_mul(F, self.matrix(g), self.matrix(h)):
                return CheckReport("action_axioms", False, checked, {"pair": [repr(g), repr(h)]})
            checked += 1
        return CheckReport("action_axioms", True, checked)


class WeightAction(LinearAction):
    """Torus acting diagonally by monomials in the columns of W (n x N)."""

    def __init__(self, group, W):
        W = tuple(tuple(int(a) for a in row) for row in W)
        if len(W) != group.rank or any(len(r) != len(W[0]) for r in W):
            raise ConfigError(f"weight matrix must have {group.rank} rows of equal length")
        self.weights = W
        N = len(W[0]) if W else 0
        super().__init__(group, N, self._diag, {"weights": [list(r) for r in W]})

    def _diag(self, t):
        F = self.field
        N = self.dim
        out = []
        for j in range(N):
            c = 1
            for i, x in enumerate(t):
                c = F.mul(c, F.pow(x, self.weights[i][j]))
            out.append(tuple(c if k == j else 0 for k in range(N)))
        return tuple(out)

    def images(self, v):
        key = tuple(v)
        if key not in self._images:
            F = self.field
            n = F.q - 1
            L = self.group.coord_log_table()
            W = np.array(self.weights, dtype=np.int64).reshape(self.group.rank, self.dim)
            scal = 1 + (L @ W) % n
            vv = np.array(key, dtype=np.int64)
            coords = F.vmul(scal, vv[None, :])
            arr = points_to_index(coords, F.q)
            arr.setflags(write=False)
            self._images[key] = arr
        return self._images[key]


def weight_action(W, F):
    W = [list(r) for r in W]
    if not W:
        raise ConfigError("weight matrix needs at least one row")
    return WeightAction(Torus(F, len(W)), W)


def _scaled_identity(F, c, N):
    return tuple(tuple(c if i == j else 0 for j in range(N)) for i in range(N))


def _block_kron(F, blocks):
    """Block diagonal matrix with blocks kron(rho, I_d) acting on row-major d x d matrices."""
    N = sum(len(b) ** 2 for b in blocks)
    M = [[0] * N for _ in range(N)]
    off = 0
    for rho in blocks:
        d = len(rho)
        for i in range(d):
            for k in range(d):
                a = rho[i][k]
                if a:
                    for j in range(d):
                        M[off + i * d + j][off + k * d + j] = a
        off += d * d
    return tuple(tuple(r) for r in M)


def make_action(group, desc):
    """Build an action from a descriptor.

    {"weights": W} (torus), {"standard_gl": true} (GL_n), {"scalar": N}
    (rank-one torus by scalars), {"product": [...]} (one action per factor,
    matrices multiplied), {"end_sum": [rep, ...]} (left multiplication on
    a sum of matrix spaces).
    """
    F = group.field
    if not isinstance(desc, dict) or len(desc) != 1:
        raise ConfigError(f"bad action descriptor {desc!r}")
    (key, val), = desc.items()
    if key == "weights":
        if not isinstance(group, Torus):
            raise ConfigError("weight actions need a torus")
        return WeightAction(group, val)
    if key == "standard_gl":
        if not isinstance(group, GL):
            raise ConfigError("standard_gl needs a GL group")
        return LinearAction(group, group.n, lambda g: g, desc)
    if key == "scalar":
        if not isinstance(group, Torus) or group.rank != 1:
            raise ConfigError("scalar action needs a rank-one torus")
        N = _posint(val, "scalar action dimension")
        return LinearAction(group, N, lambda g: _scaled_identity(F, g[0], N), desc)
    if key == "product":
        if not isinstance(group, Product) or len(val) != len(group.factors):
            raise ConfigError("product action needs one descriptor per factor")
        parts = [make_action(G, d) for G, d in zip(group.factors, val)]
        N = parts[0].dim
        if any(a.dim != N for a in parts):
            raise ConfigError("factor actions have different dimensions")

        def matrix(g):
            M = identity(N)
            for a, x in zip(parts, g):
                M = mat_mul(F, M, a.matrix(x))
            return M
        return LinearAction(group, N, matrix, desc)
    if key == "end_sum":
        reps = [MatrixRep(group, r) for r in val]
        if not reps:
            raise ConfigError("end_sum needs at least one representation")
        N = sum(r.dim ** 2 for r in reps)
        act = LinearAction(group, N, lambda g: _block_kron(F, [r.matrix(g) for r in reps]), desc)
        act.reps = reps
        return act
    raise ConfigError(f"unknown action kind {key!r}")


def end_sum_identity(reps):
    """Base vector of an end_sum action: the tuple of identity matrices."""
    v = []
    for r in reps:
        v.extend(identity(r.dim)[i][j] for i in range(r.dim) for j in range(r.dim))
    return tuple(v)


def make_cocharacter(group, desc):
    """lambda -> group element; desc has one entry per factor.

    A torus factor takes exponents (t_i = lambda^c_i); a GL factor takes k
    (lambda^k times the identity).
    """
    facs = factors_of(group)
    if not isinstance(desc, list) or len(desc) != len(facs):
        raise ConfigError(f"cocharacter needs {len(facs)} factor entries")
    parts = []
    for G, d in zip(facs, desc):
        if isinstance(G, Torus):
            if not isinstance(d, list) or len(d) != G.rank:
                raise ConfigError(f"torus factor needs {G.rank} exponents")
            parts.append(("torus", [int(a) for a in d]))
        else:
            if not isinstance(d, int):
                raise ConfigError("GL factor of a cocharacter takes an integer")
            parts.append(("gl", int(d)))
    F = group.field

    def cochar(lam):
        out = []
        for (kind, a), G in zip(parts, facs):
            if kind == "torus":
                out.append(tuple(F.pow(lam, e) for e in a))
            else:
                out.append(_scaled_identity(F, F.pow(lam, a), G.n))
        return tuple(out) if isinstance(group, Product) else out[0]
    return cochar


# ---------------------------------------------------------------- orbits

@dataclass
class OrbitData:
    base: tuple
    base_index: int
    images: np.ndarray
    points: np.ndarray
    fiber_counts: np.ndarray
    stab_count: int

    @property
    def size(self):
        return len(self.points)

    @property
    def uniform(self):
        return bool(np.all(self.fiber_counts == self.stab_count))

    def stabilizer_indices(self):
        return np.flatnonzero(self.images == self.base_index)


def orbit(action, v):
    F = action.field
    v = tuple(int(a) for a in v)
    if len(v) != action.dim:
        raise ConfigError(f"base vector has length {len(v)}, action has dimension {action.dim}")
    imgs = action.images(v)
    pts, counts = np.unique(imgs, return_counts=True)
    b = point_index(v, F.q)
    stab = int(np.count_nonzero(imgs == b))
    data = OrbitData(v, b, imgs, pts, counts, stab)
    if data.size * stab != action.group.order:
        raise AssertionError("orbit-stabilizer count failed")
    return data


def orbit_check(action, v):
    o = orbit(action, v)
    ok = o.uniform and o.size * o.stab_count == action.group.order
    return CheckReport("orbit_stabilizer", ok, o.size,
                       None if ok else {"fiber_counts": sorted(set(o.fiber_counts.tolist()))},
                       {"orbit": o.size, "stabilizer": o.stab_count, "group": action.group.order})


@dataclass
class OrbitWalk:
    """Orbit explored from generators, with beta transported along the walk."""

    points: np.ndarray
    exponents: np.ndarray
    consistent: bool
    witness: dict | None


def orbit_walk(action, v, beta):
    """Breadth-first orbit of v under the group generators.

    exponents[i] is beta(g) (in units of zeta_beta.order) for some g with
    g.v = points[i].  Consistency of every generator edge is equivalent to
    beta being trivial on the stabilizer of v.
    """
    F = action.field
    q, N = F.q, action.dim
    budget.check(q ** N, budget.domain_budget(), f"F_{q}^{N}")
    gens = action.group.generators()
    mats = [action.matrix(s) for s in gens]
    bexp = [beta.exponent(s) for s in gens]
    d = beta.order
    val = np.full(q ** N, -1, dtype=np.int64)
    start = point_index(v, q)
    val[start] = 0
    frontier = np.array([start], dtype=np.int64)
    consistent, witness = True, None
    while frontier.size:
        P = points_from_indices(frontier, q, N)
        nxt = []
        for M, b in zip(mats, bexp):
            Y = points_to_index(apply_matrix(F, M, P), q)
            want = (val[frontier] + b) % d
            fresh = val[Y] < 0
            val[Y[fresh]] = want[fresh]
            bad = np.flatnonzero(val[Y] != want)
            if bad.size and consistent:
                consistent = False
                witness = {"point": int(Y[bad[0]])}
            nxt.append(Y[fresh])
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.zeros(0, np.int64)
    pts = np.flatnonzero(val >= 0)
    return OrbitWalk(pts, val[pts], consistent, witness)


# ---------------------------------------------------------------- pushforward

def _resolve_q(action, v, beta, stabilizer_order, q_subgroup, o):
    """Index array of the enumerated Q(F_q) inside G(F_q)."""
    G = action.group
    stab = o.stabilizer_indices()
    if q_subgroup is not None:
        try:
            Q = np.array(sorted(G.index(tuple(g) if not isinstance(g, tuple) else g)
                                for g in q_subgroup), dtype=np.int64)
        except KeyError as exc:
            raise ConfigError(f"q_subgroup element {exc} is not in the group") from None
        if len(Q) != stabilizer_order:
            raise ConfigError(f"q_subgroup has {len(Q)} elements, stabilizer_order is {stabilizer_order}")
        if not np.all(np.isin(Q, stab)):
            raise ConfigError("q_subgroup is not contained in the stabilizer of v")
        return Q
    if stabilizer_order == 1:
        return np.array([G.index(G.identity)], dtype=np.int64)
    if stabilizer_order == len(stab):
        return stab
    raise ConfigError(
        f"stabilizer_order {stabilizer_order} is neither 1 nor the stabilizer size {len(stab)}; "
        "supply q_subgroup")


def pushforward_char(action, v, beta, stabilizer_order, shift=0, q_subgroup=None):
    """f(x) = (1/stabilizer_order) sum_{g.v = x} beta(g), zero off the orbit.

    beta must be trivial on the configured Q(F_q), which is the identity when
    stabilizer_order is 1, the full stabilizer of v when it matches its size,
    or the explicit q_subgroup.  Violations raise FiberError with a witness.
    """
    G = action.group
    if beta.group != G:
        raise ConfigError("character and action use different groups")
    stabilizer_order = int(stabilizer_order)
    if stabilizer_order < 1:
        raise ConfigError("stabilizer_order must be positive")
    o = orbit(action, v)
    if o.stab_count % stabilizer_order:
        raise ConfigError(f"stabilizer_order {stabilizer_order} does not divide |Stab(v)| = {o.stab_count}")
    Q = _resolve_q(action, v, beta, stabilizer_order, q_subgroup, o)
    table = beta.table
    bad = Q[table[Q] != 0]
    if bad.size:
        g = G.elements[int(bad[0])]
        raise FiberError("beta is not constant on the fiber classes of the orbit map",
                         {"element": repr(g), "beta_exponent": int(table[bad[0]]),
                          "beta_order": beta.order})
    F = action.field
    data = np.zeros((F.q ** action.dim, beta.order), dtype=np.int64)
    np.add.at(data, (o.images, table), 1)
    return TraceFn(F, action.dim, data, den=stabilizer_order, shift=shift)


# ---------------------------------------------------------------- homogeneity

def _twisted_invariance(name, f, mats, exps, d):
    """Check f(M_g x) = zeta_d^{e_g} f(x) for every listed (M_g, e_g)."""
    F = f.field
    M = math.lcm(f.order, d)
    base = _lift_data(f.data, f.order, M)
    step = M // d
    variants = {}
    canon = _canon(base, M)
    checked = 0
    for A, e in zip(mats, exps):
        e = int(e) % d
        if e not in variants:
            variants[e] = _canon(np.roll(base, e * step, axis=1), M)
        perm = matrix_perm(F, A, F.q, f.dim)
        bad = np.flatnonzero(np.any(canon[perm] != variants[e], axis=1))
        checked += 1
        if bad.size:
            x = int(bad[0])
            return CheckReport(name, False, checked,
                               {"point": list(point_from_index(x, F.q, f.dim)),
                                "matrix": [list(r) for r in A], "beta_exponent": e,
                                "beta_order": d})
    return CheckReport(name, True, checked)


def homogeneity_check(f, action, beta):
    """f(g.x) = beta(g) f(x) for every g and x."""
    G = action.group
    mats = [action.matrix(g) for g in G.elements]
    return _twisted_invariance("homogeneity", f, mats, beta.table, beta.order)


def contragredient_check(fhat, action, beta, pairing=None):
    """FT(f)(h_g xi) = beta(g) FT(f)(xi) with h_g = M^-1 g^-T M for the pairing M."""
    from .transform import Pairing
    if pairing is None:
        pairing = Pairing(action.field, action.dim)
    G = action.group
    mats = [pairing.dual_matrix(action.matrix(g)) for g in G.elements]
    return _twisted_invariance("contragredient_homogeneity", fhat, mats, beta.table, beta.order)


__all__ = ["GroupPoints", "Torus", "GL", "Product", "make_torus", "make_gl", "product",
           "make_group", "MatrixRep", "LinearAction", "WeightAction", "weight_action",
           "make_action", "end_sum_identity", "make_cocharacter", "OrbitData", "orbit",
           "orbit_check", "OrbitWalk", "orbit_walk", "pushforward_char", "homogeneity_check",
           "contragredient_check"]
