"""Integer polynomials in T (T = q^-s in the zeta setting)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .linalg import determinant


def _frac_divmod(num, den):
    num = list(num)
    d = len(den) - 1
    quot = [Fraction(0)] * max(len(num) - d, 1)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i] / den[-1]
        if c:
            quot[i - d] = c
            for j, v in enumerate(den):
                num[i - d + j] -= c * v
    num = num[:d]
    while num and num[-1] == 0:
        num.pop()
    return quot, num


class IntPolynomial:
    """Polynomial with integer coefficients, stored in ascending powers of T."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_fractions(cls, coeffs):
        for c in coeffs:
            if Fraction(c).denominator != 1:
                raise ValueError(f"non-integral coefficient {c}")
        return cls(int(c) for c in coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def substitute_negated(self):
        """P(-T)."""
        return IntPolynomial(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def content(self):
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive_part(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no primitive part")
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def divmod_rational(self, other):
        """Quotient and remainder over Q, as Fraction lists (ascending)."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        return _frac_divmod([Fraction(c) for c in self.coeffs],
                            [Fraction(c) for c in other.coeffs])

    def exact_divide(self, other):
        quot, rem = self.divmod_rational(other)
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return IntPolynomial.from_fractions(quot)

    def divides(self, other):
        return not other.divmod_rational(self)[1]

    def to_list(self):
        return list(self.coeffs)

    def render(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    __str__ = render


def poly_gcd(a, b):
    """gcd over Q, scaled to a primitive integer polynomial with positive leading coefficient."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        _, r = _frac_divmod(x, y)
        x, y = y, r
    # clear denominators, then take the primitive part
    den = 1
    for c in x:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial(int(c * den) for c in x).primitive_part()


def resultant(a, b):
    """Resultant via the Sylvester determinant (exact)."""
    m, n = a.degree, b.degree
    if m < 0 or n < 0:
        return 0
    size = m + n
    if size == 0:
        return 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(a.coeffs)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(b.coeffs)) + [0] * (size - n - 1 - i))
    return int(determinant(rows))
