"""Small finite fields F_p[x]/(f) with table-driven arithmetic.

Only the handful of fields needed for the curves over F_2, F_3, F_4 and their
quadratic extensions are supported. Elements are indexed by the integer
``sum(c_i * p**i)`` of their coefficient vector, which also fixes the
canonical element order used everywhere (generator choice, enumeration).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

# (p, degree) -> monic defining polynomial, ascending coefficients over F_p.
# F_16 is F_4[g]/(g^2 + g + a) flattened over F_2: with a = g^2 + g the
# minimal polynomial of g is g^4 + g + 1.
_DEFINING_POLYNOMIALS = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (3, 2): (1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
}

_GENERATOR_LABELS = {
    (2, 1): "1",
    (3, 1): "1",
    (2, 2): "a",
    (3, 2): "b",
    (2, 4): "g",
}


class FieldError(ValueError):
    pass


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _poly_mod(num, den, p):
    """Remainder of num modulo monic den over F_p (ascending coefficient lists)."""
    num = [c % p for c in num]
    d = len(den) - 1
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c:
            for j in range(d + 1):
                num[i - d + j] = (num[i - d + j] - c * den[j]) % p
    return num[:d] if d else [0]


def _has_factor_of_degree(poly, p, k):
    # monic candidates of degree k; exhaustive
    for tail in product(range(p), repeat=k):
        cand = list(tail) + [1]
        if not any(_poly_mod(list(poly), cand, p)):
            return True
    return False


class FieldDescriptor:
    """The field F_p[x]/(modulus) of order p**degree."""

    def __init__(self, p, degree, modulus, label):
        self.p = p
        self.degree = degree
        self.modulus = tuple(modulus)
        self.label = label
        self.order = p ** degree
        if not self._modulus_irreducible():
            raise FieldError(f"defining polynomial {self.modulus} is reducible over F_{p}")
        self._coeffs = [self._to_coeffs(n) for n in range(self.order)]
        index = {c: n for n, c in enumerate(self._coeffs)}
        self._add = [[index[tuple((a + b) % p for a, b in zip(ca, cb))]
                      for cb in self._coeffs] for ca in self._coeffs]
        self._neg = [index[tuple((-a) % p for a in ca)] for ca in self._coeffs]
        self._mul = [[index[self._mul_coeffs(ca, cb)] for cb in self._coeffs]
                     for ca in self._coeffs]
        self._inv = [None] * self.order
        for a in range(1, self.order):
            for b in range(1, self.order):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        self._elements = tuple(FieldElement(self, n) for n in range(self.order))

    def _modulus_irreducible(self):
        if self.degree == 1:
            return True
        return not any(_has_factor_of_degree(self.modulus, self.p, k)
                       for k in range(1, self.degree // 2 + 1))

    def _to_coeffs(self, n):
        out = []
        for _ in range(self.degree):
            n, r = divmod(n, self.p)
            out.append(r)
        return tuple(out)

    def _mul_coeffs(self, ca, cb):
        prod = [0] * (2 * self.degree - 1)
        for i, a in enumerate(ca):
            if a:
                for j, b in enumerate(cb):
                    prod[i + j] += a * b
        return tuple(_poly_mod(prod, self.modulus, self.p)) if self.degree > 1 \
            else (prod[0] % self.p,)

    # element construction -------------------------------------------------

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError(f"element of {value.field} is not in {self}")
            return value
        if isinstance(value, int):
            return self._elements[value % self.p]
        if isinstance(value, (tuple, list)):
            return self.from_coeffs(value)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        if len(coeffs) != self.degree:
            raise FieldError(f"coefficient vector too long for {self}")
        n = 0
        for c in reversed(coeffs):
            n = n * self.p + c % self.p
        return self._elements[n]

    def element(self, n):
        return self._elements[n]

    def elements(self):
        return self._elements

    def nonzero(self):
        return self._elements[1:]

    @property
    def zero(self):
        return self._elements[0]

    @property
    def one(self):
        return self._elements[1]

    @property
    def gen(self):
        return self._elements[self.p] if self.degree > 1 else self.one

    @property
    def characteristic(self):
        return self.p

    def __repr__(self):
        return f"F_{self.order}"

    def __reduce__(self):
        return (build_field, (self.p, self.degree))


class FieldElement:
    """An element of a FieldDescriptor; immutable and hashable."""

    __slots__ = ("field", "n")

    def __init__(self, field, n):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self):
        return self.field._coeffs[self.n]

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError(f"mixing {self.field} and {other.field}")
            return other.n
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.field._elements[self.field._add[self.n][o]]

    __radd__ = __add__

    def __neg__(self):
        return self.field._elements[self.field._neg[self.n]]

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        return f._elements[f._add[self.n][f._neg[o]]]

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.field._elements[self.field._mul[self.n][o]]

    __rmul__ = __mul__

    def inverse(self):
        inv = self.field._inv[self.n]
        if inv is None:
            raise ZeroDivisionError(f"zero has no inverse in {self.field}")
        return self.field._elements[inv]

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * self.field._elements[o].inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.n == other.n
        if isinstance(other, int):
            return self.n == self.field(other).n
        return NotImplemented

    def __hash__(self):
        return hash((self.field.order, self.n))

    def __lt__(self, other):
        return self.n < other.n

    def __bool__(self):
        return self.n != 0

    def frobenius(self, power=1):
        return self ** (self.field.p ** power)

    def trace(self):
        """Absolute trace down to the prime field, returned as an int."""
        acc = self.field.zero
        x = self
        for _ in range(self.field.degree):
            acc = acc + x
            x = x ** self.field.p
        return acc.coeffs[0]

    def is_square(self):
        if self.n == 0 or self.field.p == 2:
            return True
        return self ** ((self.field.order - 1) // 2) == 1

    def sqrt(self):
        """A square root, the smallest in canonical order."""
        for r in self.field.elements():
            if r * r == self:
                return r
        raise ValueError(f"{self} is not a square in {self.field}")

    def render(self):
        if self.field.degree == 1:
            return str(self.n)
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"

    def __repr__(self):
        return self.render()


@lru_cache(maxsize=None)
def build_field(p, k):
    """Build F_{p^k} from the fixed polynomial table."""
    if not isinstance(p, int) or not _is_prime(p):
        raise FieldError(f"characteristic must be prime, got {p!r}")
    if (p, k) not in _DEFINING_POLYNOMIALS:
        raise FieldError(f"unsupported field F_{p}^{k}")
    return FieldDescriptor(p, k, _DEFINING_POLYNOMIALS[(p, k)], _GENERATOR_LABELS[(p, k)])


_ORDERS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 9: (3, 2), 16: (2, 4)}


def GF(order):
    if order not in _ORDERS:
        raise FieldError(f"unsupported field order {order}")
    return build_field(*_ORDERS[order])


def extension(field, k):
    """The degree-k extension of ``field`` inside the supported table."""
    return GF(field.order ** k)


@lru_cache(maxsize=None)
def _embedding_table(sub, big):
    if big.p != sub.p or big.degree % sub.degree:
        raise FieldError(f"{sub} does not embed in {big}")
    if sub.degree == 1:
        images = {e: big(e.n) for e in sub.elements()}
    else:
        # image of the generator: smallest root of its minimal polynomial
        mod = sub.modulus
        root = None
        for r in big.elements():
            acc = big.zero
            for c in reversed(mod):
                acc = acc * r + c
            if acc == 0:
                root = r
                break
        if root is None:
            raise FieldError(f"no root of {mod} in {big}")
        images = {}
        for e in sub.elements():
            acc = big.zero
            for c in reversed(e.coeffs):
                acc = acc * root + c
            images[e] = acc
    for a in sub.elements():
        for b in sub.elements():
            if images[a + b] != images[a] + images[b] or images[a * b] != images[a] * images[b]:
                raise FieldError(f"embedding {sub} -> {big} is not a homomorphism")
    return images


def embed(element, big):
    """Image of ``element`` under the fixed embedding of its field into ``big``."""
    if element.field is big:
        return element
    return _embedding_table(element.field, big)[element]


def restrict(element, sub):
    """Inverse of ``embed``: the element of ``sub`` mapping to ``element``."""
    if element.field is sub:
        return element
    table = _embedding_table(sub, element.field)
    for a, b in table.items():
        if b == element:
            return a
    raise FieldError(f"{element} does not lie in the image of {sub}")


def subfield_elements(big, sub):
    return [embed(e, big) for e in sub.elements()]
