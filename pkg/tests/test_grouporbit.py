import itertools

import numpy as np
import pytest

from taut.characters import GroupChar, quadratic_char
from taut.errors import ConfigError, FiberError
from taut.field import make_field
from taut.grouporbit import (homogeneity_check, contragredient_check, make_action, make_gl,
                             make_group, make_torus, orbit, orbit_check, orbit_walk, product,
                             pushforward_char, weight_action)
from taut.transform import TraceFn, fourier
from taut.characters import AddChar

F2, F3, F5 = make_field(2), make_field(3), make_field(5)


def gl_order(q, n):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def test_group_sizes():
    assert len(make_torus(F3, 2)) == 4
    assert len(make_gl(F2, 2)) == 6
    G = make_gl(F3, 2)
    assert len(G) == 48 == (9 - 1) * (9 - 3)
    assert len(set(G.elements)) == 48
    assert len(product(make_gl(F3, 2), make_torus(F3, 1))) == 96


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (3, 3)])
def test_gl_count_matches_formula(p, n):
    G = make_gl(make_field(p), n)
    assert len(G) == gl_order(p, n)


@pytest.mark.parametrize("kind", [{"torus": 2}, {"gl": 2}, {"product": [{"gl": 2}, {"torus": 1}]},
                                  {"product": [{"torus": 2}, {"gl": 1}]}])
def test_group_axioms(kind):
    assert make_group(F3, kind).check_axioms()


def test_weight_action_examples():
    A = weight_action([[1]], F3)
    for t, x in itertools.product(range(1, 3), range(3)):
        assert A.apply((t,), (x,)) == (F3.mul(t, x),)
    A = weight_action([[1, 1]], F3)
    assert A.apply((2,), (1, 1)) == (2, 2)
    assert orbit(A, (1, 1)).size == 2
    A = weight_action([[1, 0], [0, 1]], F3)
    o = orbit(A, (1, 1))
    assert o.size == 4
    assert sorted(o.points.tolist()) == [4, 5, 7, 8]


def test_negative_weights():
    A = weight_action([[1, -1]], F5)
    t = F5.from_int(2)
    x = A.apply((t,), (1, 1))
    assert x == (t, F5.inv(t))


@pytest.mark.parametrize("kind,desc,v", [
    ({"torus": 2}, {"weights": [[1, 0, 2], [0, 1, 1]]}, (1, 1, 1)),
    ({"product": [{"gl": 2}, {"torus": 1}]}, {"product": [{"standard_gl": True}, {"scalar": 2}]},
     (1, 0)),
    ({"gl": 2}, {"end_sum": [{"factors": [1]}]}, (1, 0, 0, 1)),
    ({"torus": 1}, {"weights": [[2]]}, (1,)),
])
def test_orbit_stabilizer_and_action_axioms(kind, desc, v):
    act = make_action(make_group(F3, kind), desc)
    assert act.check_axioms()
    rep = orbit_check(act, v)
    assert rep.ok
    assert rep.notes["orbit"] * rep.notes["stabilizer"] == rep.notes["group"]


def test_pushforward_quadratic_on_line():
    act = weight_action([[1]], F3)
    f = pushforward_char(act, (1,), GroupChar(act.group, [1]), 1)
    assert [f.value(i) for i in range(3)] == [0, 1, -1]


def test_pushforward_trivial_is_orbit_indicator():
    act = weight_action([[1, 1]], F5)
    f = pushforward_char(act, (1, 1), GroupChar(act.group, [0]), 1)
    orb = set(orbit(act, (1, 1)).points.tolist())
    assert all(f.value(i) == (1 if i in orb else 0) for i in range(25))


def test_pushforward_gl2_is_punctured_constant():
    G = make_group(F3, {"product": [{"gl": 2}, {"torus": 1}]})
    act = make_action(G, {"product": [{"standard_gl": True}, {"scalar": 2}]})
    stab = sum(1 for g in G.elements if act.apply(g, (1, 0)) == (1, 0))
    assert stab == 12
    o = orbit(act, (1, 0))
    assert o.uniform and o.stab_count == stab
    f = pushforward_char(act, (1, 0), GroupChar(G, [0, 0]), stab)
    assert f.value(0) == 0
    assert all(f.value(i) == 1 for i in range(1, 9))


def test_fiber_inconsistent_beta_raises_with_witness():
    act = weight_action([[2]], F3)
    with pytest.raises(FiberError) as exc:
        pushforward_char(act, (1,), GroupChar(act.group, [1]), 2)
    assert exc.value.witness["beta_exponent"] == 1
    with pytest.raises(ConfigError):
        pushforward_char(act, (1,), GroupChar(act.group, [1]), 3)


def test_homogeneity_examples():
    act = weight_action([[1, 1]], F5)
    beta = GroupChar(act.group, [1])
    f = pushforward_char(act, (1, 1), beta, 1)
    assert homogeneity_check(f, act, beta).ok
    rep = homogeneity_check(TraceFn.constant(F5, 2), act, beta)
    assert not rep.ok and rep.witness is not None
    assert homogeneity_check(TraceFn.zeros(F5, 2), act, beta).ok
    fh = fourier(f, AddChar(F5))
    assert contragredient_check(fh, act, beta).ok


def test_orbit_walk_agrees_with_enumeration():
    G = make_group(F3, {"product": [{"gl": 2}, {"torus": 1}]})
    act = make_action(G, {"product": [{"standard_gl": True}, {"scalar": 2}]})
    w = orbit_walk(act, (1, 0), GroupChar(G, [0, 0]))
    assert w.consistent
    assert sorted(w.points.tolist()) == sorted(orbit(act, (1, 0)).points.tolist())
    # (diag(l^-1, 1), l) fixes e1, so any beta seeing l or det is inconsistent
    for ks in ([0, 1], [1, 0], [1, 1]):
        w = orbit_walk(act, (1, 0), GroupChar(G, ks))
        assert not w.consistent and w.witness is not None


def test_orbit_walk_transports_beta():
    act = weight_action([[1, 0], [1, 1]], F5)
    beta = GroupChar(act.group, [1, 3])
    w = orbit_walk(act, (1, 1), beta)
    f = pushforward_char(act, (1, 1), beta, 1)
    for pt, e in zip(w.points.tolist(), w.exponents.tolist()):
        hist = np.flatnonzero(f.data[pt])
        assert hist.tolist() == [e]


def test_quadratic_char_unavailable_in_char_two():
    with pytest.raises(ConfigError):
        quadratic_char(F2)


def test_group_budget():
    from taut.errors import BudgetError
    G = make_gl(F5, 4)
    with pytest.raises(BudgetError):
        G.elements
