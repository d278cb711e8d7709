"""Field backends: F_p against integer arithmetic, towers against sympy."""

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from spinlab.field import (FieldError, PrimeField, TowerDepthError, adjoin_sqrt, parse_field,
                           rationals)

P = 10007
Fp = PrimeField(P)


@given(st.integers(), st.integers())
def test_fp_ring_ops_match_integers(a, b):
    x, y = Fp(a), Fp(b)
    assert (x + y) == Fp((a + b) % P)
    assert (x - y) == Fp((a - b) % P)
    assert (x * y) == Fp((a * b) % P)
    if b % P:
        assert (x / y) * y == x
        assert y.inverse() == Fp(pow(b, -1, P))


@given(st.integers(min_value=1, max_value=P - 1))
def test_fp_sqrt_agrees_with_euler_criterion(a):
    r = Fp.sqrt(Fp(a))
    if pow(a, (P - 1) // 2, P) == 1:
        assert r is not None and r * r == Fp(a)
    else:
        assert r is None


def test_fp_nonsquare_cannot_be_adjoined():
    F = PrimeField(11)
    nonsq = next(a for a in range(2, 11) if pow(a, 5, 11) != 1)
    with pytest.raises(FieldError):
        adjoin_sqrt(F, nonsq)


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_rationals_match_fraction(a, b):
    Q = rationals()
    assert Q(a) * Q(b) == Q(a * b)
    assert Q(a) + Q(b) == Q(a + b)
    if b:
        assert Q(a) / Q(b) == Q(a / b)


def _to_sympy(K, x, gens):
    """Evaluate a tower element as a sympy expression (independent oracle)."""
    if K.depth == 0:
        return sympy.Rational(x.q.numerator, x.q.denominator)
    return _to_sympy(K.parent, x.a, gens) + _to_sympy(K.parent, x.b, gens) * gens[K.depth - 1]


@given(st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_tower_arithmetic_matches_sympy(cs):
    Q = rationals()
    K1, r2 = adjoin_sqrt(Q, 2)
    K2, r3 = adjoin_sqrt(K1, 3)
    gens = [sympy.sqrt(2), sympy.sqrt(3)]
    x = K2(cs[0]) + r2 * cs[1]
    y = r3 * cs[2] + r2 * r3 * cs[3]
    ex, ey = _to_sympy(K2, x, gens), _to_sympy(K2, y, gens)
    assert sympy.simplify(_to_sympy(K2, x * y, gens) - ex * ey) == 0
    assert sympy.simplify(_to_sympy(K2, x - y, gens) - (ex - ey)) == 0
    if y != 0:
        assert sympy.simplify(_to_sympy(K2, x / y, gens) - ex / ey) == 0


def test_tower_sqrt_finds_nested_roots():
    Q = rationals()
    K, r = adjoin_sqrt(Q, 2)
    a = K(3) + r * 2  # (1 + sqrt 2)^2
    s = K.sqrt(a)
    assert s is not None and s * s == a
    assert K.sqrt(K(3)) is None


def test_adjoin_existing_square_returns_same_field():
    Q = rationals()
    K, r = adjoin_sqrt(Q, Fraction(9, 4))
    assert K is Q and r * r == Q(Fraction(9, 4))


def test_tower_depth_limit():
    K = rationals(max_depth=2)
    K, _ = adjoin_sqrt(K, 2)
    K, _ = adjoin_sqrt(K, 3)
    with pytest.raises(TowerDepthError):
        adjoin_sqrt(K, 5)


@pytest.mark.parametrize("desc", ["fp:101", "qq"])
def test_json_round_trip(desc):
    K = parse_field(desc)
    rng = random.Random(3)
    for _ in range(20):
        a = K.random_element(rng, 1000) / K.random_nonzero(rng, 30)
        assert K.from_json(K.to_json(a)) == a
    assert K.descriptor() == desc


def test_tower_json_round_trip():
    K, r = adjoin_sqrt(rationals(), 5)
    a = K(Fraction(2, 3)) - r * Fraction(7, 2)
    assert K.from_json(K.to_json(a)) == a


def test_parse_field_rejects_garbage():
    with pytest.raises(FieldError):
        parse_field("gf:7")
