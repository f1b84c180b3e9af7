from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dilutetl.rings import DELTA, Poly, Ring, RingError, parse_ring, specialize


def test_integer_arithmetic():
    Z = Ring.integers(0)
    assert Z.add(2, 3) == 5
    assert Z.mul(-4, 6) == -24
    assert Z.neg(7) == -7
    assert Z.is_zero(Z.sub(5, 5))


def test_prime_field_arithmetic():
    F5 = Ring.prime_field(5, 2)
    assert F5.mul(3, 4) == 2
    assert F5.add(4, 4) == 3
    assert F5.eq(7, 2)
    assert F5.delta == 2


def test_prime_field_rejects_composite():
    with pytest.raises(RingError):
        Ring.prime_field(6)
    with pytest.raises(RingError):
        Ring.prime_field(1)


def test_polynomial_identity():
    d = DELTA
    one = Poly.const(1)
    assert (d + one) * (d - one) == d * d - one


def test_polynomial_canonical_form():
    # equal polynomials have identical representations
    a = (DELTA + Poly.const(2)) * (DELTA + Poly.const(3))
    b = DELTA * DELTA + Poly.const(5) * DELTA + Poly.const(6)
    assert a == b and a.terms == b.terms
    assert Poly.from_dict({3: 0, 1: 2}).terms == ((1, 2),)


def test_mixed_ring_operands_rejected():
    Z = Ring.integers(0)
    with pytest.raises(RingError):
        Z.add(1, DELTA)
    Zd = Ring.delta_polynomials()
    with pytest.raises(RingError):
        Zd.mul(Poly.const(1), 2)


def test_specialize_examples():
    d2m1 = DELTA * DELTA - Poly.const(1)
    assert specialize(d2m1, Ring.integers(2)) == 3
    assert specialize(DELTA, Ring.integers(0)) == 0
    assert specialize(DELTA + Poly.const(3), Ring.prime_field(3, 1)) == 1
    assert specialize(d2m1, Ring.rationals(Fraction(1, 2))) == Fraction(-3, 4)


polys = st.dictionaries(st.integers(0, 6), st.integers(-9, 9), max_size=5) \
    .map(Poly.from_dict)


@given(polys, polys)
def test_specialization_is_a_ring_homomorphism(a, b):
    for target in (Ring.integers(2), Ring.integers(-1),
                   Ring.prime_field(5, 3), Ring.rationals(2)):
        assert specialize(a * b, target) == target.mul(
            specialize(a, target), specialize(b, target))
        assert specialize(a + b, target) == target.add(
            specialize(a, target), specialize(b, target))


@given(polys, polys)
def test_polynomial_equality_is_representation_equality(a, b):
    if a == b:
        assert a.terms == b.terms
    else:
        assert a.terms != b.terms


def test_ring_descriptors_round_trip():
    for desc, delta in (("Z", 2), ("Q", -1), ("Fp:7", 3)):
        r = parse_ring(desc, delta)
        assert r.descriptor() == desc
        assert parse_ring(r.descriptor(), r.delta_descriptor()) == r
    assert parse_ring("Z[delta]", "generic").kind == "Zdelta"
    with pytest.raises(RingError):
        parse_ring("R", 0)
    with pytest.raises(RingError):
        parse_ring("Z", "generic")


def test_delta_power():
    Zd = Ring.delta_polynomials()
    assert Zd.delta_power(3) == DELTA * DELTA * DELTA
    assert Ring.integers(2).delta_power(4) == 16
