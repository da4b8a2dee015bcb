import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from oracles import gkz_sum
from taut.characters import AddChar, GroupChar, MultChar
from taut.errors import ConfigError
from taut.field import extend_field, make_field
from taut.grouporbit import (contragredient_check, homogeneity_check, orbit_check,
                             pushforward_char, weight_action)
from taut.linalg import inverse, is_invertible, transpose
from taut.tautsys import (TautConfig, all_phis, gkz_config, gkz_trace, remark_sum, taut_bang,
                          triangle_check, verify_theorem)
from taut.transform import (TraceFn, external_product, fourier, fourier_inverse_check,
                            plancherel_check, pullback_linear)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1)]
SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


@st.composite
def root_function(draw, F=None, dim=None):
    if F is None:
        F = make_field(*draw(st.sampled_from(FIELDS)))
    if dim is None:
        dim = draw(st.integers(1, 2 if F.q > 3 else 3))
    order = draw(st.sampled_from([1, 2, 3, 4, 6]))
    n = F.q ** dim
    exps = draw(st.lists(st.integers(0, order - 1), min_size=n, max_size=n))
    mask = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    shift = draw(st.integers(0, 3))
    return TraceFn.from_exponents(F, dim, order, exps, mask, shift=shift)


@st.composite
def nontrivial_psi(draw, F):
    return AddChar(F, draw(st.integers(1, F.q - 1)))


@st.composite
def invertible(draw, F, N):
    A = draw(st.lists(st.lists(st.integers(0, F.q - 1), min_size=N, max_size=N),
                      min_size=N, max_size=N))
    A = tuple(tuple(r) for r in A)
    assume(is_invertible(F, A))
    return A


@SETTINGS
@given(st.data())
def test_inversion_and_plancherel(data):
    f = data.draw(root_function())
    h = data.draw(root_function(F=f.field, dim=f.dim))
    psi = data.draw(nontrivial_psi(f.field))
    assert fourier_inverse_check(f, psi).ok
    assert plancherel_check(f, h, psi).ok


@SETTINGS
@given(st.data())
def test_equivariance(data):
    f = data.draw(root_function())
    F = f.field
    psi = data.draw(nontrivial_psi(F))
    A = data.draw(invertible(F, f.dim))
    assert fourier(pullback_linear(f, A), psi) == pullback_linear(fourier(f, psi),
                                                                  inverse(F, transpose(A)))


@SETTINGS
@given(st.data())
def test_kunneth_and_paths(data):
    f = data.draw(root_function())
    g = data.draw(root_function(F=f.field, dim=1))
    psi = data.draw(nontrivial_psi(f.field))
    assert fourier(external_product(f, g), psi) == external_product(fourier(f, psi),
                                                                    fourier(g, psi))
    a, b = fourier(f, psi, path="factored"), fourier(f, psi, path="naive")
    assert np.array_equal(a.data, b.data)


weights = st.lists(st.lists(st.integers(-2, 3), min_size=1, max_size=3), min_size=1,
                   max_size=2).filter(lambda W: len({len(r) for r in W}) == 1)


@SETTINGS
@given(st.sampled_from([3, 5]), weights, st.data())
def test_pushforward_is_homogeneous(p, W, data):
    F = make_field(p)
    N = len(W[0])
    act = weight_action(W, F)
    v = tuple(data.draw(st.lists(st.integers(1, p - 1), min_size=N, max_size=N)))
    ks = data.draw(st.lists(st.integers(0, p - 2), min_size=len(W), max_size=len(W)))
    beta = GroupChar(act.group, ks)
    assert orbit_check(act, v).ok
    f = pushforward_char(act, v, beta, 1)
    assert homogeneity_check(f, act, beta).ok
    assert contragredient_check(fourier(f, AddChar(F)), act, beta).ok


@SETTINGS
@given(st.sampled_from([3, 5]), weights, st.data())
def test_taut_bang_matches_closed_form(p, W, data):
    F = make_field(p)
    ks = data.draw(st.lists(st.integers(0, p - 2), min_size=len(W), max_size=len(W)))
    cfg = gkz_config(F, W, [MultChar(F, k) for k in ks], AddChar(F))
    T = taut_bang(cfg)
    sign = -1 if (cfg.n + cfg.N) % 2 else 1
    x = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=cfg.N, max_size=cfg.N)))
    assert T.effective(x) == sign * gkz_trace(W, cfg.beta.factors(), cfg.psi, x)
    assert gkz_trace(W, cfg.beta.factors(), cfg.psi, x) == gkz_sum(
        p, W, ks, [F.to_int(a) for a in x])


@SETTINGS
@given(st.sampled_from([3, 5]), weights, st.data())
def test_duality_shadow(p, W, data):
    F = make_field(p)
    ks = data.draw(st.lists(st.integers(0, p - 2), min_size=len(W), max_size=len(W)))
    cfg = gkz_config(F, W, [MultChar(F, k) for k in ks], AddChar(F, data.draw(st.integers(1, p - 1))))
    dual = cfg.with_characters(cfg.beta.inverse(), cfg.psi.inverse())
    T, D = taut_bang(cfg), taut_bang(dual)
    for i in range(T.npoints):
        assert T.effective(i) == D.effective(i).conj()


@SETTINGS
@given(st.sampled_from([3, 5, 7]), st.integers(-2, 3), st.integers(-2, 3), st.data())
def test_triangle_and_theorem_on_scaled_tori(p, a, b, data):
    # second torus coordinate acts by scalars, so it is the scaling cocharacter
    k = data.draw(st.integers(0, p - 2))
    spec = {"field": {"p": p}, "group": {"torus": 2}, "action": {"weights": [[a, b], [1, 1]]},
            "v": [1, 1], "beta": [k, 0], "scaling": [[0, 1]]}
    try:
        cfg = TautConfig.from_spec(spec)
        rep = triangle_check(cfg)
    except ConfigError:
        assume(False)
    assert rep.ok
    assert verify_theorem(cfg).ok
    assert all(r["middle"] == rep.rows[0]["middle"] for r in rep.rows)
    assert all(remark_sum(cfg, phi, "!") == r["rhs"] for phi, r in zip(all_phis(cfg), rep.rows))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (3, 1), (5, 1)]), st.integers(1, 3), st.data())
def test_extension_trace_and_norm(pf, m, data):
    F = make_field(*pf)
    assume(F.q ** m <= 81)
    e = extend_field(F, m)
    E = e.ext
    x, y = (data.draw(st.integers(0, E.q - 1)) for _ in range(2))
    assert e.rel_trace(E.add(x, y)) == F.add(e.rel_trace(x), e.rel_trace(y))
    if x and y:
        assert e.rel_norm(E.mul(x, y)) == F.mul(e.rel_norm(x), e.rel_norm(y))
    assert E.trace(x) == F.trace(e.rel_trace(x))
