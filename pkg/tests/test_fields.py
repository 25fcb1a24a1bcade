from itertools import product

import pytest
from hypothesis import given, strategies as st
from sympy import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from tforms.fields import GF, FieldError, build_field, embed, extension, restrict, subfield_elements

ORDERS = (2, 3, 4, 9, 16)


def oracle_mul(F, a, b):
    """Product via sympy's dense F_p[x] arithmetic (descending coefficients)."""
    p = F.p
    desc = lambda e: list(reversed(e.coeffs))  # noqa: E731
    mod = list(reversed(F.modulus))
    r = gf_rem(gf_mul(desc(a), desc(b), p, ZZ), mod, p, ZZ)
    return F.from_coeffs(list(reversed(r)))


def elements(order):
    return st.sampled_from(GF(order).elements())


@pytest.mark.parametrize("order", ORDERS)
def test_multiplication_matches_sympy(order):
    F = GF(order)
    for a, b in product(F.elements(), repeat=2):
        assert a * b == oracle_mul(F, a, b)


@pytest.mark.parametrize("order", ORDERS)
def test_every_nonzero_element_is_invertible(order):
    F = GF(order)
    assert len(F.elements()) == order
    for a in F.nonzero():
        assert a * a.inverse() == F.one


@pytest.mark.parametrize("order", ORDERS)
@given(data=st.data())
def test_field_axioms(order, data):
    a, b, c = (data.draw(elements(order)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a ** order == a


@pytest.mark.parametrize("order", ORDERS)
def test_multiplicative_group_is_cyclic(order):
    F = GF(order)
    orders = set()
    for a in F.nonzero():
        k = 1
        while a ** k != 1:
            k += 1
        orders.add(k)
    assert max(orders) == order - 1


@pytest.mark.parametrize("small,big", [(2, 4), (2, 16), (4, 16), (3, 9)])
def test_embedding_is_a_homomorphism_and_restricts_back(small, big):
    F, E = GF(small), GF(big)
    for a, b in product(F.elements(), repeat=2):
        assert embed(a + b, E) == embed(a, E) + embed(b, E)
        assert embed(a * b, E) == embed(a, E) * embed(b, E)
    for a in F.elements():
        assert restrict(embed(a, E), F) == a
    image = subfield_elements(E, F)
    assert sorted(x.n for x in image) == sorted(x.n for x in E.elements() if x ** small == x)


def test_restrict_rejects_elements_outside_the_subfield():
    F16, F4 = GF(16), GF(4)
    outside = next(x for x in F16.elements() if x ** 4 != x)
    with pytest.raises(FieldError):
        restrict(outside, F4)


def test_f16_generator_is_a_root_of_its_quadratic_over_f4():
    F16 = GF(16)
    g = F16.gen
    a = embed(GF(4).gen, F16)
    assert g * g + g + a == 0


@pytest.mark.parametrize("order", ORDERS)
def test_trace_is_additive_and_onto_prime_field(order):
    F = GF(order)
    traces = {x.trace() for x in F.elements()}
    assert traces == set(range(F.p))
    for a, b in product(F.elements()[:5], repeat=2):
        assert (a + b).trace() == (a.trace() + b.trace()) % F.p


@pytest.mark.parametrize("order", (3, 9))
def test_squares_in_odd_characteristic(order):
    F = GF(order)
    squares = {x * x for x in F.elements()}
    assert len(squares) == (order + 1) // 2
    for a in F.elements():
        assert a.is_square() == (a in squares)
        if a.is_square():
            assert a.sqrt() ** 2 == a


def test_frobenius_fixes_exactly_the_prime_field():
    F = GF(9)
    fixed = [x for x in F.elements() if x.frobenius() == x]
    assert fixed == list(F.elements()[:3])


def test_coercion_and_rendering():
    F4 = GF(4)
    assert F4(5) == 1
    assert F4((0, 1)) == F4.gen
    assert F4.gen.render() == "(0,1)"
    assert GF(3)(-1).render() == "2"
    assert extension(GF(2), 2) is F4


def test_unsupported_fields_are_rejected():
    with pytest.raises(FieldError):
        build_field(4, 1)
    with pytest.raises(FieldError):
        GF(8)
    with pytest.raises(FieldError):
        GF(3)(GF(2).one)
