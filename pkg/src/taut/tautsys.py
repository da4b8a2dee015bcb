"""Tautological and hypergeometric trace functions and their identity checks.

Sign convention: closed-form evaluators (gkz_trace, the inner sums of
remark_sum) return unsigned character sums; signs come from shift parity
only.  taut_bang stores the unsigned orbit sum with shift n + N, so its
effective trace at phi is (-1)^(n+N) sum_g beta(g) psi(<g v, phi>) / |Q(F_q)|.
hyp_trace is the exception: it returns the signed sum, the form in which the
hypergeometric trace is usually written.
"""
import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import budget
from .characters import AddChar, GroupChar, MultChar, char_extend, g_const
from .checks import CheckReport
from .cyclotomic import CycNum, cyc_abs2
from .errors import ConfigError, FiberError, RepresentativeError
from .field import extend_field, field_from_descriptor
from .grouporbit import (contragredient_check, end_sum_identity,
                         homogeneity_check, make_action, make_cocharacter, make_group,
                         orbit, orbit_walk, pushforward_char)
from .linalg import mat_vec, point_from_index, points_from_indices
from .transform import Pairing, TraceFn, fourier, trace_pairing

SIGN_NOTE = ("effective trace = (-1)^shift * stored value; closed forms are unsigned "
             "and receive their sign from the shift")


# ---------------------------------------------------------------- specs

def parse_field(spec, fields=None):
    if isinstance(spec, str):
        if not fields or spec not in fields:
            raise ConfigError(f"unknown field name {spec!r}")
        spec = fields[spec]
    if not isinstance(spec, dict) or "p" not in spec:
        raise ConfigError(f"bad field descriptor {spec!r}")
    return field_from_descriptor(spec)


def parse_element(F, a):
    """Integer encoding (base-p digits) -> canonical index."""
    if not isinstance(a, int) or isinstance(a, bool):
        raise ConfigError(f"field elements are integer encodings, got {a!r}")
    return F.from_int(a)


def parse_point(F, pt, N):
    if not isinstance(pt, (list, tuple)) or len(pt) != N:
        raise ConfigError(f"expected a point with {N} coordinates, got {pt!r}")
    return tuple(parse_element(F, a) for a in pt)


def point_json(F, x):
    return [F.to_int(a) for a in x]


def parse_psi(F, spec):
    if spec is None:
        return AddChar(F, 1)
    if isinstance(spec, dict) and "add" in spec:
        spec = spec["add"]
    if not isinstance(spec, dict) or "twist" not in spec:
        raise ConfigError(f"bad additive character {spec!r}")
    psi = AddChar(F, parse_element(F, spec["twist"]))
    if psi.is_trivial:
        raise ConfigError("additive character must be nontrivial")
    return psi


def parse_mult(F, spec):
    if isinstance(spec, int) and not isinstance(spec, bool):
        return MultChar(F, spec)
    if isinstance(spec, dict) and "mult" in spec and "exponent" in spec["mult"]:
        return MultChar(F, int(spec["mult"]["exponent"]))
    raise ConfigError(f"bad multiplicative character {spec!r}")


def parse_beta(group, spec):
    if spec is None:
        return GroupChar(group, [0] * group.ncoords)
    if isinstance(spec, dict) and "group" in spec:
        spec = spec["group"].get("factors")
    if not isinstance(spec, list):
        raise ConfigError(f"bad group character {spec!r}")
    return GroupChar(group, [parse_mult(group.field, s).k for s in spec])


# ---------------------------------------------------------------- config

class TautConfig:
    """(G, beta, V, v, psi) plus the data needed to count through Q."""

    def __init__(self, group, action, v, beta, psi, dimQ=0, stabilizer="full",
                 q_subgroup=None, scaling=None, proper=False, pairing=None, name=None,
                 spec=None):
        if action.group is not group:
            group = action.group
        self.group = group
        self.action = action
        self.field = group.field
        self.v = tuple(int(a) for a in v)
        if len(self.v) != action.dim:
            raise ConfigError(f"base vector has {len(self.v)} coordinates, V has dimension {action.dim}")
        if beta.group != group:
            raise ConfigError("beta is defined on a different group")
        self.beta = beta
        if psi.field != self.field or psi.is_trivial:
            raise ConfigError("psi must be a nontrivial character of the ground field")
        self.psi = psi
        self.dimQ = int(dimQ)
        if not 0 <= self.dimQ <= group.dim:
            raise ConfigError("dimQ must lie between 0 and dim G")
        if isinstance(stabilizer, str):
            if stabilizer not in ("full", "trivial"):
                raise ConfigError(f"stabilizer must be 'full', 'trivial' or an integer, got {stabilizer!r}")
        elif not isinstance(stabilizer, int) or stabilizer < 1:
            raise ConfigError("stabilizer order must be a positive integer")
        self.stabilizer = stabilizer
        self.q_subgroup = q_subgroup
        self.scaling_spec = scaling
        self.scaling = make_cocharacter(group, scaling) if scaling is not None else None
        self.proper = bool(proper)
        self.pairing = pairing if pairing is not None else Pairing(self.field, action.dim)
        if self.pairing.dim != action.dim:
            raise ConfigError("pairing dimension does not match V")
        self.name = name
        self.spec = spec
        self._orbit = None

    @property
    def n(self):
        return self.group.dim - self.dimQ

    @property
    def N(self):
        return self.action.dim

    @property
    def q(self):
        return self.field.q

    @property
    def orbit(self):
        if self._orbit is None:
            self._orbit = orbit(self.action, self.v)
        return self._orbit

    @property
    def stabilizer_order(self):
        s = self.stabilizer
        if s == "trivial":
            return 1
        if s == "full":
            return self.orbit.stab_count
        return s

    @property
    def stabilizer_mode(self):
        """'full' or 'trivial' (resolving an integer order against the stabilizer)."""
        s = self.stabilizer
        if isinstance(s, str):
            return s
        if s == 1:
            return "trivial"
        if s == self.orbit.stab_count and self.q_subgroup is None:
            return "full"
        return None

    @classmethod
    def from_spec(cls, spec, fields=None, name=None):
        if not isinstance(spec, dict):
            raise ConfigError("configuration must be a JSON object")
        for key in ("field", "group", "action"):
            if key not in spec:
                raise ConfigError(f"configuration is missing {key!r}")
        F = parse_field(spec["field"], fields)
        G = make_group(F, spec["group"])
        action = make_action(G, spec["action"])
        v = spec.get("v")
        if v == "identity" or (v is None and hasattr(action, "reps")):
            if not hasattr(action, "reps"):
                raise ConfigError("v = 'identity' needs an end_sum action")
            v = end_sum_identity(action.reps)
        else:
            v = parse_point(F, v, action.dim)
        pairing = spec.get("pairing", "identity")
        if pairing == "identity":
            P = Pairing(F, action.dim)
        elif pairing == "trace":
            if not hasattr(action, "reps"):
                raise ConfigError("the trace pairing needs an end_sum action")
            P = trace_pairing(F, [r.dim for r in action.reps])
        elif isinstance(pairing, list):
            P = Pairing(F, action.dim, [[parse_element(F, a) for a in row] for row in pairing])
        else:
            raise ConfigError(f"bad pairing {pairing!r}")
        qsub = spec.get("q_subgroup")
        if qsub is not None:
            qsub = [_parse_group_element(G, g) for g in qsub]
        return cls(G, action, v, parse_beta(G, spec.get("beta")), parse_psi(F, spec.get("psi")),
                   dimQ=spec.get("dimQ", 0), stabilizer=spec.get("stabilizer", "full"),
                   q_subgroup=qsub, scaling=spec.get("scaling"), proper=spec.get("proper", False),
                   pairing=P, name=name or spec.get("name"), spec=spec)

    def describe(self):
        F = self.field
        return {
            "field": F.descriptor(), "group": self.group.kind,
            "action": self.action.descriptor, "v": point_json(F, self.v),
            "beta": list(self.beta.ks), "psi_twist": F.to_int(self.psi.twist),
            "dimQ": self.dimQ, "n": self.n, "N": self.N,
            "stabilizer": self.stabilizer, "scaling": self.scaling_spec, "proper": self.proper,
            "pairing": [[F.to_int(a) for a in row] for row in self.pairing.matrix],
        }

    def with_characters(self, beta=None, psi=None):
        return TautConfig(self.group, self.action, self.v, beta or self.beta, psi or self.psi,
                          self.dimQ, self.stabilizer, self.q_subgroup, self.scaling_spec,
                          self.proper, self.pairing, self.name)

    def over(self, emb):
        """The same configuration over the extension field of emb."""
        if emb.base != self.field:
            raise ConfigError("embedding does not start at the configuration's field")
        if emb.degree == 1:
            return self
        mode = self.stabilizer_mode
        if mode is None:
            raise ConfigError("an explicit Q subgroup cannot be carried to an extension")
        E = emb.ext
        action = self.action.over(E)
        G = action.group
        beta = GroupChar(G, [k * emb.cofactor for k in self.beta.ks])
        psi = char_extend(self.psi, emb)
        pairing = Pairing(E, self.N, [[emb(a) for a in row] for row in self.pairing.matrix])
        return TautConfig(G, action, tuple(emb(a) for a in self.v), beta, psi, self.dimQ, mode,
                          None, self.scaling_spec, self.proper, pairing, self.name)


def _parse_group_element(G, g):
    from .grouporbit import GL, Product, Torus

    def conv(H, x):
        if isinstance(H, Torus):
            return tuple(parse_element(G.field, a) for a in x)
        if isinstance(H, GL):
            return tuple(tuple(parse_element(G.field, a) for a in row) for row in x)
        return tuple(conv(K, y) for K, y in zip(H.factors, x))
    if not isinstance(G, (Torus, GL, Product)):
        raise ConfigError("unsupported group")
    return conv(G, g)


# ---------------------------------------------------------------- reports

@dataclass
class IdentityReport:
    case: str
    rows: list = dc_field(default_factory=list)
    notes: dict = dc_field(default_factory=dict)
    checks: list = dc_field(default_factory=list)

    def add(self, phi, lhs, rhs, **extra):
        self.rows.append({"phi": list(phi), "lhs": lhs, "rhs": rhs, "equal": lhs == rhs, **extra})

    @property
    def passed(self):
        return sum(1 for r in self.rows if r["equal"])

    @property
    def failed(self):
        return len(self.rows) - self.passed

    @property
    def ok(self):
        return self.failed == 0 and all(c.ok for c in self.checks)

    def first_counterexample(self):
        for r in self.rows:
            if not r["equal"]:
                return r
        return None

    def summary(self):
        bad = self.first_counterexample()
        return {"passed": self.passed, "failed": self.failed, "ok": self.ok,
                "first_counterexample": _row_json(bad) if bad else None,
                "checks": {c.name: c.ok for c in self.checks}}

    def to_json(self):
        return {"case": self.case, "notes": self.notes, "summary": self.summary(),
                "rows": [_row_json(r) for r in self.rows],
                "checks": [c.to_json() for c in self.checks]}


def _cyc_json(x):
    if isinstance(x, CycNum):
        return {"exact": x.to_json(), "approx": x.format()}
    return x


def _row_json(r):
    return {k: _cyc_json(v) for k, v in r.items()}


# ---------------------------------------------------------------- Fourier routes

def pushforward(cfg):
    return pushforward_char(cfg.action, cfg.v, cfg.beta, cfg.stabilizer_order,
                            shift=cfg.n, q_subgroup=cfg.q_subgroup)


def taut_bang(cfg):
    """Trace function of T_!: Fourier transform of the beta-weighted orbit function."""
    return fourier(pushforward(cfg), cfg.psi, cfg.pairing)


def _scaling_exponent(cfg):
    """s with beta(scaling(lambda)) = zeta_d^(s log lambda); None without a scaling map."""
    if cfg.scaling is None:
        return None
    return cfg.beta.exponent(cfg.scaling(cfg.field.gen)) if cfg.q > 2 else 0


def check_scaling(cfg):
    """scaling(lambda) acts on V as lambda times the identity."""
    if cfg.scaling is None:
        raise ConfigError("configuration has no scaling cocharacter")
    F, N = cfg.field, cfg.N
    for lam in range(1, F.q):
        M = cfg.action.matrix(cfg.scaling(lam))
        want = tuple(tuple(lam if i == j else 0 for j in range(N)) for i in range(N))
        if M != want:
            return CheckReport("scaling", False, lam, {"lambda": F.to_int(lam)})
    return CheckReport("scaling", True, F.q - 1)


def taut_star(cfg):
    """Trace function of T_* for a proper configuration.

    The orbit function changes only at 0: the stalk there picks up the
    punctured-line cohomology (trace 1 - q) over each point of G/P when beta
    is trivial on the scaling torus, and nothing otherwise.
    """
    if not cfg.proper:
        raise ConfigError("T_* is only computed for configurations flagged proper")
    cd = coset_data(cfg)
    f = pushforward(cfg)
    if cd.beta_trivial_on_scaling:
        d = cfg.beta.order
        corr = np.zeros(d, dtype=np.int64)
        np.add.at(corr, cd.rep_exponents, 1)
        data = np.array(f.data)
        M = math.lcm(f.order, d)
        if M != f.order:
            f = f.lifted(M)
            data = np.array(f.data)
        data[0, :: M // d] += (1 - cfg.q) * corr * f.den
        f = TraceFn(f.field, f.dim, data, f.den, f.shift)
    return fourier(f, cfg.psi, cfg.pairing)


# ---------------------------------------------------------------- closed forms

def gkz_trace(W, chis, psi, x):
    """sum_{t in (F_q^*)^n} prod chi_i(t_i) psi(sum_j x_j prod_i t_i^{w_ij}) (unsigned)."""
    F = psi.field
    W = [list(r) for r in W]
    n = len(W)
    if len(chis) != n or n == 0:
        raise ConfigError("need one multiplicative character per row of W")
    N = len(W[0])
    if any(len(r) != N for r in W) or len(x) != N:
        raise ConfigError("point and weight matrix have inconsistent lengths")
    if any(c.field != F for c in chis):
        raise ConfigError("characters use different fields")
    q1 = F.q - 1
    budget.check(q1 ** n, budget.GROUP_BUDGET, f"torus of rank {n}")
    L = np.array(list(itertools.product(range(q1), repeat=n)), dtype=np.int64).reshape(-1, n)
    d = 1
    for c in chis:
        d = math.lcm(d, c.order)
    m = math.lcm(d, F.p)
    chi_exp = np.zeros(len(L), dtype=np.int64)
    for i, c in enumerate(chis):
        chi_exp += c.exponent(L[:, i] + 1) * (m // c.order)
    arg = np.zeros(len(L), dtype=np.int64)
    for j in range(N):
        if x[j]:
            mono = 1 + (L @ np.array([W[i][j] for i in range(n)], dtype=np.int64)) % q1
            arg = F.vadd(arg, F.vmul(x[j], mono))
    k = (chi_exp + psi.exponent(arg) * (m // F.p)) % m
    return CycNum.from_group_ring(m, np.bincount(k, minlength=m))


def gkz_config(F, W, chis, psi, name=None):
    """Torus configuration for the GKZ sum: v = (1, ..., 1), Q trivial."""
    act = make_action(make_group(F, {"torus": len(W)}), {"weights": [list(r) for r in W]})
    beta = GroupChar(act.group, [c.k for c in chis])
    return TautConfig(act.group, act, (1,) * act.dim, beta, psi, dimQ=0, stabilizer="trivial",
                      name=name)


def hyp_trace(reps, beta, psi, A, dimQ=0):
    """(-1)^(n+N) sum_g beta(g) psi(sum_l Tr(rho_l(g) A_l)) over all of G(F_q).

    reps are MatrixRep objects on beta's group; A is a list of square
    matrices (canonical indices) matching the representation sizes.
    """
    G = beta.group
    F = G.field
    if len(A) != len(reps):
        raise ConfigError("need one matrix per representation")
    for r, a in zip(reps, A):
        if r.group != G:
            raise ConfigError("representation and character use different groups")
        if len(a) != r.dim or any(len(row) != r.dim for row in a):
            raise ConfigError("matrix size does not match the representation")
    N = sum(r.dim ** 2 for r in reps)
    n = G.dim - dimQ
    m = math.lcm(beta.order, F.p)
    hist = np.zeros(m, dtype=np.int64)
    sb, sp = m // beta.order, m // F.p
    for i, g in enumerate(G.elements):
        acc = 0
        for r, a in zip(reps, A):
            R = r.matrix(g)
            d = r.dim
            for u in range(d):
                for w in range(d):
                    if R[u][w] and a[w][u]:
                        acc = F.add(acc, F.mul(R[u][w], a[w][u]))
        hist[(int(beta.table[i]) * sb + psi.exponent(acc) * sp) % m] += 1
    val = CycNum.from_group_ring(m, hist)
    return -val if (n + N) % 2 else val


def hyp_config(F, group_kind, reps, beta_ks, psi, name=None):
    """End-space configuration: V = sum End(V_l), v = identities, trace pairing."""
    G = make_group(F, group_kind)
    act = make_action(G, {"end_sum": reps})
    P = trace_pairing(F, [r.dim for r in act.reps])
    return TautConfig(act.group, act, end_sum_identity(act.reps), GroupChar(act.group, beta_ks),
                      psi, dimQ=0, stabilizer="trivial", pairing=P, name=name)


def standard_end_reps():
    """GL_m acting on End(F^m) by left multiplication."""
    return [{"factors": [1]}]


def torus_gl_end_reps():
    """G_m x G_m x GL_n with representations s^2, s t, s g, t g."""
    return [{"factors": [[2, 0], 0]}, {"factors": [[1, 1], 0]},
            {"factors": [[1, 0], 1]}, {"factors": [[0, 1], 1]}]


# ---------------------------------------------------------------- cosets of P

@dataclass
class CosetData:
    """(G/P)(F_q) realised as the orbit of [v] in P(V).

    labels[i] is the projective point of g_i v for every enumerated g_i;
    reps[x] is the first element mapping [v] to x.
    """

    labels: np.ndarray
    points: np.ndarray
    reps: np.ndarray
    image_coords: np.ndarray
    rep_exponents: np.ndarray
    p_order: int
    beta_trivial_on_scaling: bool
    scaling_exponent: int

    @property
    def size(self):
        return len(self.points)


def _projective_labels(F, P):
    """Normalise each nonzero row so its first nonzero coordinate is 1."""
    lead = np.argmax(P != 0, axis=1)
    piv = P[np.arange(len(P)), lead]
    inv = np.where(piv == 0, 0, (-(piv - 1)) % (F.q - 1) + 1)
    Q = np.zeros_like(P)
    for j in range(P.shape[1]):
        Q[:, j] = F.vmul(inv, P[:, j])
    w = F.q ** np.arange(P.shape[1] - 1, -1, -1, dtype=np.int64)
    return Q @ w


def coset_data(cfg):
    if cfg.scaling is None:
        raise ConfigError("coset data needs a scaling cocharacter")
    sc = check_scaling(cfg)
    if not sc.ok:
        raise ConfigError(f"scaling map does not act by scalars: {sc.witness}")
    if cfg.stabilizer_order != cfg.orbit.stab_count:
        raise ConfigError("the theorem route needs Q(F_q) equal to the full stabilizer of v")
    F, N = cfg.field, cfg.N
    o = cfg.orbit
    coords = points_from_indices(o.images, F.q, N)
    labels = _projective_labels(F, coords)
    pts, first = np.unique(labels, return_index=True)
    G = cfg.group
    p_order = G.order // len(pts)
    if p_order != o.stab_count * (F.q - 1):
        raise ConfigError("projective stabilizer is not (scaling) x (stabilizer of v)")
    s = _scaling_exponent(cfg)
    d = cfg.beta.order
    trivial = s % d == 0
    table = cfg.beta.table
    rep_exps = table[first]
    if trivial:
        key = labels * d + table
        if len(np.unique(key)) != len(pts):
            bad = _first_dependent(labels, table)
            raise RepresentativeError("beta_0(g_x) depends on the representative",
                                      {"point_label": int(bad)})
    return CosetData(labels, pts, first, coords, rep_exps, p_order, trivial, int(s))


def _first_dependent(labels, vals):
    seen = {}
    for lab, v in zip(labels.tolist(), vals.tolist()):
        if seen.setdefault(lab, v) != v:
            return lab
    return -1


def _phi_values(cfg, coords, phi):
    """<c, phi> for each row c of coords under the configured pairing."""
    F = cfg.field
    Mphi = mat_vec(F, cfg.pairing.matrix, phi)
    acc = np.zeros(len(coords), dtype=np.int64)
    for j, a in enumerate(Mphi):
        if a:
            acc = F.vadd(acc, F.vmul(a, coords[:, j]))
    return acc


def remark_sum(cfg, phi, variant="*", cd=None):
    """Closed-form trace of T_* or T_! at phi summed over (G/P)(F_q).

    Every representative of every coset is evaluated; disagreement raises
    RepresentativeError.  Returns the effective trace (sign included).
    """
    if variant not in ("*", "!"):
        raise ConfigError(f"unknown variant {variant!r}")
    cd = cd or coset_data(cfg)
    F, q = cfg.field, cfg.q
    phi = tuple(phi)
    d = cfg.beta.order
    sign = -1 if (cfg.n + cfg.N - 1) % 2 else 1
    vals = _phi_values(cfg, cd.image_coords, phi)
    table = cfg.beta.table
    if variant == "!" and cd.beta_trivial_on_scaling:
        in_h = vals == 0
        total = np.bincount(cd.rep_exponents, minlength=d)
        hyper = np.bincount(cd.rep_exponents[in_h[cd.reps]], minlength=d)
        inner = CycNum.from_group_ring(d, total - q * hyper)
        return inner * sign
    # term(g) = beta(scaling(phi(g v)^-1) g) on U_phi
    mask = vals != 0
    logs = np.where(mask, vals - 1, 0)
    terms = (table - cd.scaling_exponent * logs) % d
    lab, t = cd.labels[mask], terms[mask]
    if len(np.unique(lab * d + t)) != len(np.unique(lab)):
        raise RepresentativeError("beta(phi(g_x v)^-1 g_x) depends on the representative",
                                  {"phi": point_json(F, phi),
                                   "point_label": int(_first_dependent(lab, t))})
    in_u = mask[cd.reps]
    inner = CycNum.from_group_ring(d, np.bincount(terms[cd.reps][in_u], minlength=d))
    beta_gm = None if cd.beta_trivial_on_scaling else _scaling_char(cfg, cd)
    return g_const(beta_gm, cfg.psi, variant) * inner * sign


def _scaling_char(cfg, cd):
    """beta restricted to the scaling torus, as a multiplicative character."""
    d = cfg.beta.order
    k = cd.scaling_exponent * ((cfg.q - 1) // d)
    return MultChar(cfg.field, k)


def all_phis(cfg):
    F, N = cfg.field, cfg.N
    return [point_from_index(i, F.q, N) for i in range(F.q ** N)]


def remark_check(cfg, phis=None, variants=("*",)):
    """Fourier route against the closed form at each phi, per variant."""
    phis = all_phis(cfg) if phis is None else [tuple(p) for p in phis]
    cd = coset_data(cfg)
    rep = IdentityReport(cfg.name or "remark", notes=_notes(cfg, cd))
    routes = {}
    for var in variants:
        routes[var] = taut_star(cfg) if var == "*" else taut_bang(cfg)
    for phi in phis:
        for var in variants:
            lhs = routes[var].effective(phi)
            rhs = remark_sum(cfg, phi, var, cd)
            rep.add(point_json(cfg.field, phi), lhs, rhs, variant=var)
    rep.checks.append(CheckReport("representative_independence", True, cd.size,
                                  notes={"cosets": cd.size, "P_order": cd.p_order}))
    return rep


def _notes(cfg, cd=None):
    out = {"sign_convention": SIGN_NOTE, "n": cfg.n, "N": cfg.N, "q": cfg.q,
           "config": cfg.describe()}
    if cd is not None:
        out["G/P points"] = cd.size
        out["beta trivial on scaling"] = cd.beta_trivial_on_scaling
    return out


def triangle_terms(cfg, phi, cd=None):
    """(middle, left) effective traces of the triangle's outer terms at phi."""
    cd = cd or coset_data(cfg)
    if not cd.beta_trivial_on_scaling:
        raise ConfigError("beta does not factor through G/G_m: no beta_0 for the triangle")
    d = cfg.beta.order
    vals = _phi_values(cfg, cd.image_coords, phi)
    in_h = (vals == 0)[cd.reps]
    total = CycNum.from_group_ring(d, np.bincount(cd.rep_exponents, minlength=d))
    hyper = CycNum.from_group_ring(d, np.bincount(cd.rep_exponents[in_h], minlength=d))
    s_mid = -1 if (cfg.n + cfg.N - 1) % 2 else 1
    s_left = -1 if (cfg.n + cfg.N - 3) % 2 else 1
    return total * s_mid, hyper * (cfg.q * s_left)


def validate_beta0(cfg, cd):
    """beta is trivial on P(F_q) (so beta_0 lives on G/P)."""
    if not cd.beta_trivial_on_scaling:
        raise ConfigError("beta does not factor through G/G_m: no beta_0 for the triangle")
    o = cfg.orbit
    table = cfg.beta.table
    bad = o.stabilizer_indices()[table[o.stabilizer_indices()] != 0]
    if bad.size:
        raise FiberError("beta is nontrivial on the stabilizer of v",
                         {"element": repr(cfg.group.elements[int(bad[0])])})


def triangle_check(cfg, phis=None):
    """trace(T_!) = middle - left at every phi."""
    phis = all_phis(cfg) if phis is None else [tuple(p) for p in phis]
    cd = coset_data(cfg)
    validate_beta0(cfg, cd)
    T = taut_bang(cfg)
    rep = IdentityReport(cfg.name or "triangle", notes=_notes(cfg, cd))
    for phi in phis:
        mid, left = triangle_terms(cfg, phi, cd)
        rep.add(point_json(cfg.field, phi), T.effective(phi), mid - left,
                middle=mid, left=left)
    return rep


def verify_theorem(cfg, phis=None):
    """Fourier route against the geometric point count, for T_! and (if proper) T_*."""
    phis = all_phis(cfg) if phis is None else [tuple(p) for p in phis]
    cd = coset_data(cfg)
    rep = IdentityReport(cfg.name or "theorem", notes=_notes(cfg, cd))
    Tb = taut_bang(cfg)
    Ts = taut_star(cfg) if cfg.proper else None
    status = "theorem" if cfg.proper else "conjecture"
    rep.notes["!-route status"] = status
    for phi in phis:
        pj = point_json(cfg.field, phi)
        rep.add(pj, Tb.effective(phi), remark_sum(cfg, phi, "!", cd), variant="!", status=status)
        if Ts is not None:
            rep.add(pj, Ts.effective(phi), remark_sum(cfg, phi, "*", cd), variant="*",
                    status="theorem")
    f = pushforward(cfg)
    rep.checks.append(homogeneity_check(f, cfg.action, cfg.beta))
    return rep


# ---------------------------------------------------------------- route checks

def gkz_check(F, W, chis, psi, points=None, name="gkz"):
    """taut_bang effective trace against the signed GKZ sum at each point."""
    cfg = gkz_config(F, W, chis, psi, name)
    T = taut_bang(cfg)
    sign = -1 if (cfg.n + cfg.N) % 2 else 1
    pts = all_phis(cfg) if points is None else [tuple(p) for p in points]
    rep = IdentityReport(name, notes=_notes(cfg))
    for x in pts:
        rep.add(point_json(F, x), T.effective(x), gkz_trace(W, chis, psi, x) * sign)
    return rep


def hyp_check(cfg, points=None, name="hyp"):
    """taut_bang on an end-space configuration against hyp_trace."""
    if not hasattr(cfg.action, "reps"):
        raise ConfigError("hyp_check needs an end_sum configuration")
    T = taut_bang(cfg)
    F = cfg.field
    reps = cfg.action.reps
    pts = all_phis(cfg) if points is None else [tuple(p) for p in points]
    rep = IdentityReport(name, notes=_notes(cfg))
    for x in pts:
        rep.add(point_json(F, x), T.effective(x), hyp_trace(reps, cfg.beta, cfg.psi,
                                                             split_blocks(x, reps), cfg.dimQ))
    return rep


def split_blocks(x, reps):
    out, off = [], 0
    for r in reps:
        d = r.dim
        out.append([list(x[off + i * d: off + (i + 1) * d]) for i in range(d)])
        off += d * d
    return out


def homogeneity_report(cfg):
    f = pushforward(cfg)
    fh = fourier(f, cfg.psi, cfg.pairing)
    return [homogeneity_check(f, cfg.action, cfg.beta),
            contragredient_check(fh, cfg.action, cfg.beta, cfg.pairing)]


# ---------------------------------------------------------------- weights

def trace_at(cfg, phi):
    """Effective trace of T_! at a single phi by walking the orbit from generators."""
    F = cfg.field
    mode = cfg.stabilizer_mode
    if mode is None:
        raise ConfigError("single-point traces need stabilizer 'full' or 'trivial'")
    walk = orbit_walk(cfg.action, cfg.v, cfg.beta)
    stab = cfg.group.order // len(walk.points)
    if cfg.group.order % len(walk.points):
        raise AssertionError("orbit size does not divide the group order")
    if not walk.consistent:
        if mode == "full":
            raise FiberError("beta is nontrivial on the stabilizer of v", walk.witness)
        return CycNum.rational(0)
    mult = 1 if mode == "full" else stab
    N = cfg.N
    P = points_from_indices(walk.points, F.q, N)
    vals = _phi_values(cfg, P, tuple(phi))
    d = cfg.beta.order
    m = math.lcm(d, F.p)
    k = (walk.exponents * (m // d) + cfg.psi.exponent(vals) * (m // F.p)) % m
    val = CycNum.from_group_ring(m, np.bincount(k, minlength=m) * mult)
    return -val if (cfg.n + cfg.N) % 2 else val


def weight_scan(cfg, phi, m_max, tol=0.15):
    """|trace|^2 over F_{q^m}, m = 1..m_max, and e_m = log_{q^m} |trace|^2."""
    bound = cfg.n + cfg.N
    rows = []
    for m in range(1, m_max + 1):
        if cfg.q ** (m * cfg.N) > budget.domain_budget():
            raise budget.BudgetError(f"q^(mN) = {cfg.q ** (m * cfg.N)} exceeds the point budget")
        emb = extend_field(cfg.field, m)
        cm = cfg.over(emb)
        tr = trace_at(cm, tuple(emb(a) for a in phi))
        a2 = cyc_abs2(tr)
        Q = cfg.q ** m
        if tr.is_zero():
            e = None
        else:
            e = math.log(a2) / math.log(Q)
        rows.append({"m": m, "trace": tr, "abs2": a2, "exponent": e,
                     "ok": e is None or e <= bound + tol})
    return {"bound": bound, "tolerance": tol, "rows": rows,
            "ok": all(r["ok"] for r in rows)}


__all__ = ["TautConfig", "IdentityReport", "taut_bang", "taut_star", "gkz_trace", "gkz_config",
           "hyp_trace", "hyp_config", "standard_end_reps", "torus_gl_end_reps", "coset_data",
           "remark_sum", "remark_check", "triangle_check", "triangle_terms", "verify_theorem",
           "gkz_check", "hyp_check", "homogeneity_report", "trace_at", "weight_scan",
           "check_scaling", "parse_field", "parse_point", "all_phis", "split_blocks"]
