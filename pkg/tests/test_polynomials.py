import pytest
import sympy
from hypothesis import given, strategies as st

from tforms.polynomials import IntPolynomial, poly_gcd, resultant

T = sympy.Symbol("T")
coeff_lists = st.lists(st.integers(-6, 6), min_size=1, max_size=5).filter(lambda c: any(c))


def resultant_oracle(a, b):
    """lc(a)^deg(b) * det b(companion(a)), the product of b over the roots of a."""
    m = a.degree
    lc = sympy.Rational(a.leading)
    comp = sympy.zeros(m, m)
    for i in range(1, m):
        comp[i, i - 1] = 1
    for i in range(m):
        comp[i, m - 1] = -sympy.Rational(a[i]) / lc
    value = sympy.zeros(m, m)
    for c in reversed(b.coeffs):
        value = value * comp + c * sympy.eye(m)
    return lc ** b.degree * value.det()


def to_sympy(p):
    return sympy.Poly(list(reversed(p.coeffs)) or [0], T)


@given(coeff_lists, coeff_lists)
def test_arithmetic_matches_sympy(a, b):
    A, B = IntPolynomial(a), IntPolynomial(b)
    assert to_sympy(A * B) == to_sympy(A) * to_sympy(B)
    assert to_sympy(A + B) == to_sympy(A) + to_sympy(B)
    assert to_sympy(A - B) == to_sympy(A) - to_sympy(B)


@given(coeff_lists, coeff_lists)
def test_gcd_and_resultant_match_sympy(a, b):
    A, B = IntPolynomial(a), IntPolynomial(b)
    g = to_sympy(poly_gcd(A, B))
    expected = sympy.gcd(to_sympy(A), to_sympy(B))
    assert sympy.Poly(g, T).monic() == sympy.Poly(expected, T).monic()
    if A.degree > 0 and B.degree > 0:
        assert resultant(A, B) == resultant_oracle(A, B)


def test_exact_division_and_its_failure():
    p = IntPolynomial([1, -2, 4, -4, 4])
    q = IntPolynomial([1, -2, 2])
    assert p.exact_divide(q) == IntPolynomial([1, 0, 2])
    with pytest.raises(ArithmeticError):
        p.exact_divide(IntPolynomial([1, 1]))


def test_negated_substitution_and_evaluation():
    P = IntPolynomial([1, -3, 3])
    assert P.substitute_negated() == IntPolynomial([1, 3, 3])
    assert P(1) == 1
    assert P.substitute_negated()(-1) == P(1)


def test_rendering():
    assert IntPolynomial([1, -2, 2]).render() == "1 - 2T + 2T^2"
    assert IntPolynomial([0, 0, -1]).render() == "-T^2"
    assert IntPolynomial([]).render() == "0"


def test_gcd_is_primitive_with_positive_leading_coefficient():
    a = IntPolynomial([-2, 0, 2])   # 2(T - 1)(T + 1)
    b = IntPolynomial([3, -3])      # -3(T - 1)
    assert poly_gcd(a, b) == IntPolynomial([-1, 1])
    with pytest.raises(ValueError):
        poly_gcd(IntPolynomial([]), IntPolynomial([]))
