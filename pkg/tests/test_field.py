import itertools

import pytest

from taut.errors import BudgetError, ConfigError
from taut.field import extend_field, is_irreducible, make_field, trace_to_prime


def mult_order(F, x):
    k, y = 1, x
    while y != 1:
        y = F.mul(y, x)
        k += 1
    return k


def test_prime_field_generator_is_two():
    F = make_field(3)
    assert F.q == 3
    assert F.to_int(F.gen) == 2
    assert mult_order(F, F.gen) == 2


def test_f4_from_conway_modulus():
    F = make_field(2, 2, [1, 1, 1])
    assert F.q == 4
    assert mult_order(F, F.gen) == 3


def test_f25_generator_order_by_powering():
    F = make_field(5, 2)
    assert mult_order(F, F.gen) == 24


@pytest.mark.parametrize("p,f", [(2, 1), (2, 3), (3, 2), (7, 1), (2, 4), (3, 3)])
def test_log_exp_round_trip(p, f):
    F = make_field(p, f)
    for x in range(1, F.q):
        assert F.exp(F.log(x)) == x
        assert F.pow(F.gen, F.log(x)) == x


def test_trace_to_prime_examples():
    assert trace_to_prime(make_field(3), make_field(3).from_int(2)) == 2
    F4 = make_field(2, 2)
    assert trace_to_prime(F4, F4.gen) == F4.to_int(F4.add(F4.gen, F4.mul(F4.gen, F4.gen)))
    assert trace_to_prime(F4, F4.gen) == 1
    assert trace_to_prime(make_field(3, 2), 1) == 2


def test_extension_maps_minus_one_to_gen_power():
    e = extend_field(make_field(3), 2)
    assert e.ext.q == 9
    assert e(make_field(3).from_int(2)) == e.ext.pow(e.ext.gen, 4)
    assert mult_order(e.ext, e(2)) == 2


def test_trivial_extension_is_identity():
    F = make_field(5)
    e = extend_field(F, 1)
    assert e.ext == F
    assert all(e(x) == x for x in range(F.q))


def test_norm_to_f2_is_one():
    e = extend_field(make_field(2), 3)
    E = e.ext
    for x in range(1, 8):
        assert E.pow(x, 7) == 1
        assert e.rel_norm(x) == 1


@pytest.mark.parametrize("p,f,m", [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2), (3, 1, 3),
                                   (5, 1, 2), (2, 1, 4)])
def test_embedding_is_ring_hom_and_tower_trace(p, f, m):
    F = make_field(p, f)
    e = extend_field(F, m)
    E = e.ext
    assert e(F.gen) == E.pow(E.gen, (E.q - 1) // (F.q - 1))
    for x, y in itertools.product(range(F.q), repeat=2):
        assert e(F.add(x, y)) == E.add(e(x), e(y))
        assert e(F.mul(x, y)) == E.mul(e(x), e(y))
    for y in range(E.q):
        assert E.trace(y) == F.trace(e.rel_trace(y))
        n = e.rel_norm(y)
        assert e(n) == E.pow(y, sum(F.q ** i for i in range(m))) if y else n == 0


@pytest.mark.parametrize("p,f", [(2, 2), (3, 2), (2, 3), (5, 2), (3, 3), (3, 4)])
def test_trace_additive_norm_multiplicative(p, f):
    F = make_field(p, f)
    for x, y in itertools.product(range(F.q), repeat=2):
        assert F.trace(F.add(x, y)) == (F.trace(x) + F.trace(y)) % p
    e = extend_field(make_field(p), f)
    for x, y in itertools.product(range(1, F.q), repeat=2):
        assert e.rel_norm(F.mul(x, y)) == make_field(p).mul(e.rel_norm(x), e.rel_norm(y))


@pytest.mark.parametrize("p,f", [(2, 3), (3, 2), (5, 2)])
def test_frobenius_is_automorphism_fixing_prime_field(p, f):
    F = make_field(p, f)
    fixed = [x for x in range(F.q) if F.frob(x) == x]
    assert sorted(F.to_int(x) for x in fixed) == list(range(p))
    for x, y in itertools.product(range(F.q), repeat=2):
        assert F.frob(F.add(x, y)) == F.add(F.frob(x), F.frob(y))
        assert F.frob(F.mul(x, y)) == F.mul(F.frob(x), F.frob(y))


def test_construction_is_deterministic():
    a, b = make_field(3, 3), make_field(3, 3)
    assert a.key == b.key
    assert (a.poly == b.poly).all() and (a.tr == b.tr).all()


def test_rejects_bad_input():
    with pytest.raises(ConfigError):
        make_field(4)
    with pytest.raises(ConfigError):
        make_field(2, 2, [1, 0, 1])
    with pytest.raises(BudgetError):
        make_field(2, 17)
    assert not is_irreducible((1, 0, 1), 2)
