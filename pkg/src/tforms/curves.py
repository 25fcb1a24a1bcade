"""Curve models over F_2, F_3, F_4: point counts, group law, L-polynomials.

The registry holds the projective line and the three elliptic curves of class
number one with a rational point,

    e2: y^2 + y = x^3 + x + 1      over F_2
    e3: y^2     = x^3 - x - 1      over F_3
    e4: y^2 + y = x^3 + a          over F_4 = F_2(a),

plus, for each elliptic curve, the genus-two double cover obtained from
x = z(z + 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .fields import GF, FieldDescriptor, embed, extension, restrict
from .polynomials import IntPolynomial
from .series import DEFAULT_PRECISION, LaurentSeries


class CurveError(ValueError):
    pass


INFINITY = None  # identity of the elliptic group


# --- bivariate polynomials as {(i, j): coeff} -------------------------------

def _bmul(a, b, F):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, F.zero) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _badd(a, b, F):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, F.zero) + v
    return {k: v for k, v in out.items() if v}


def _bscale(a, c):
    return {k: v * c for k, v in a.items() if v * c}


@dataclass(frozen=True, eq=False)
class CurveModel:
    """A plane model F(u, v) = 0 over ``field``.

    ``terms`` maps exponent pairs (i, j) to the coefficient of u^i v^j.
    """

    name: str
    field: FieldDescriptor
    terms: dict
    genus: int
    weierstrass: tuple | None = None
    cover_of: "CurveModel | None" = None
    variables: tuple = ("x", "y")
    description: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def q(self):
        return self.field.order

    @property
    def is_elliptic(self):
        return self.weierstrass is not None

    def evaluate(self, u, v):
        F = u.field
        acc = F.zero
        for (i, j), c in self.terms.items():
            acc = acc + embed(c, F) * u ** i * v ** j
        return acc

    def a_invariants(self, F=None):
        if not self.is_elliptic:
            raise CurveError(f"{self.name} is not an elliptic model")
        F = F or self.field
        return tuple(embed(a, F) for a in self.weierstrass)

    def discriminant(self):
        a1, a2, a3, a4, a6 = self.a_invariants()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __repr__(self):
        return f"CurveModel({self.name} over {self.field})"


def weierstrass_model(name, field, a_invs, description=""):
    F = field
    a1, a2, a3, a4, a6 = (F(a) for a in a_invs)
    terms = {(0, 2): F.one, (1, 1): a1, (0, 1): a3,
             (3, 0): -F.one, (2, 0): -a2, (1, 0): -a4, (0, 0): -a6}
    terms = {k: v for k, v in terms.items() if v}
    curve = CurveModel(name, F, terms, 1, (a1, a2, a3, a4, a6), description=description)
    if curve.discriminant() == 0:
        raise CurveError(f"{name} is singular")
    return curve


@lru_cache(maxsize=None)
def _registry():
    F2, F3, F4 = GF(2), GF(3), GF(4)
    alpha = F4.gen
    p1_models = {q: CurveModel(f"p1_{q}", GF(q), {(0, 1): GF(q).one}, 0,
                               description="projective line (the affine line v = 0)")
                 for q in (2, 3, 4)}
    return {
        "p1": p1_models[2],
        "p1_2": p1_models[2],
        "p1_3": p1_models[3],
        "p1_4": p1_models[4],
        "e2": weierstrass_model("e2", F2, (0, 0, 1, 1, 1), "y^2 + y = x^3 + x + 1"),
        "e3": weierstrass_model("e3", F3, (0, 0, 0, -1, -1), "y^2 = x^3 - x - 1"),
        "e4": weierstrass_model("e4", F4, (0, 0, 1, 0, alpha), "y^2 + y = x^3 + a"),
    }


def curve(name):
    reg = _registry()
    if name not in reg:
        raise CurveError(f"unknown curve {name!r}; known: {sorted(reg)}")
    return reg[name]


def elliptic_curve(q):
    return curve(f"e{q}")


def p1_curve(q):
    return curve(f"p1_{q}")


def genus2_cover(base):
    """The genus-two double cover of ``base`` given by x = z(z + 1), in variables (z, y)."""
    if not base.is_elliptic:
        raise CurveError("the genus-two cover is defined for the elliptic models only")
    if "genus2" in base._cache:
        return base._cache["genus2"]
    F = base.field
    x_sub = {(2, 0): F.one, (1, 0): F.one}          # z^2 + z
    powers = [{(0, 0): F.one}]
    for _ in range(3):
        powers.append(_bmul(powers[-1], x_sub, F))
    terms = {}
    for (i, j), c in base.terms.items():
        mono = _bmul(powers[i], {(0, j): F.one}, F)
        terms = _badd(terms, _bscale(mono, c), F)
    cover = CurveModel(base.name + "~", F, terms, 2, cover_of=base, variables=("z", "y"),
                       description=f"{base.description} with x = z(z + 1)")
    _check_cover_smooth(cover)
    base._cache["genus2"] = cover
    return cover


def _check_cover_smooth(cover):
    F = cover.field
    if F.p == 2:
        # y^2 + y + h(z): the y-derivative is 1, so the affine model is smooth
        if cover.terms.get((0, 1)) != F.one or cover.terms.get((0, 2)) != F.one:
            raise CurveError("unexpected shape for a characteristic-two cover")
        return
    # y^2 = g(z) with g squarefree
    g = [F.zero] * 7
    for (i, j), c in cover.terms.items():
        if j == 0:
            g[i] = -c
    deriv = [g[i] * i for i in range(1, len(g))]
    if _field_poly_gcd_degree(g, deriv) > 0:
        raise CurveError(f"{cover.name}: affine model is singular")


def _field_poly_gcd_degree(a, b):
    def trim(p):
        p = list(p)
        while p and not p[-1]:
            p.pop()
        return p
    a, b = trim(a), trim(b)
    while b:
        a = list(a)
        while len(a) >= len(b):
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, v in enumerate(b):
                a[shift + i] = a[shift + i] - c * v
            a = trim(a)
        a, b = b, a
    return len(a) - 1


# --- local expansion at the point at infinity --------------------------------

def weierstrass_expansion(c, precision=DEFAULT_PRECISION, max_iterations=None):
    """x(t), y(t) in F_q((t)) with t = x/y, solving the Weierstrass equation.

    Writes x = t^-2 w, y = t^-3 w, so that
    w = (1 + a1 t - a2 t^2) + (a3 t^3 w - a4 t^4 w - a6 t^6) / w^2,
    and iterates to a fixed point; every step fixes at least three more terms.
    """
    a1, a2, a3, a4, a6 = c.a_invariants()
    F = c.field
    mono = lambda e, coef: LaurentSeries.monomial(F, e, coef)  # noqa: E731
    head = LaurentSeries.from_terms(F, {0: 1, 1: a1, 2: -a2})
    w = LaurentSeries.constant(F, F.one).with_precision(precision)
    budget = max_iterations or precision
    for _ in range(budget):
        inv_sq = (w * w).inverse()
        nxt = head + (mono(3, a3) * w - mono(4, a4) * w - mono(6, a6)) * inv_sq
        nxt = nxt.with_precision(precision)
        if (nxt - w).is_zero():
            w = nxt
            break
        w = nxt
    else:
        raise CurveError(f"expansion of {c.name} did not converge in {budget} steps")
    return w.shift(-2), w.shift(-3)


# --- points --------------------------------------------------------------------

@dataclass(frozen=True)
class PointSet:
    curve: CurveModel
    k: int
    affine: tuple
    at_infinity: int

    @property
    def count(self):
        return len(self.affine) + self.at_infinity

    @property
    def has_infinity(self):
        return self.at_infinity > 0

    @property
    def field(self):
        return extension(self.curve.field, self.k)


def enumerate_points(c, k):
    """All points of ``c`` over F_{q^k} by exhaustive evaluation."""
    if k not in (1, 2):
        raise CurveError(f"unsupported extension degree {k}")
    key = ("points", k)
    if key in c._cache:
        return c._cache[key]
    F = extension(c.field, k)
    elems = F.elements()
    affine = tuple((u, v) for u in elems for v in elems if c.evaluate(u, v) == 0)
    if c.genus < 2:
        at_inf = 1
    else:
        at_inf = _cover_points_at_infinity(c.cover_of, k)
    pts = PointSet(c, k, affine, at_inf)
    c._cache[key] = pts
    return pts


def _cover_points_at_infinity(base, k):
    """Rational points of the cover lying over the point at infinity of ``base``.

    The cover is z^2 + z = x. Over F_{q^k}((t)) this splits (2 points), stays
    inert (0) or ramifies (1); decided from the expansion of x at infinity.
    """
    F = extension(base.field, k)
    x, _ = weierstrass_expansion(base)
    x = x.map_coefficients(lambda a: embed(a, F), F)
    if F.p == 2:
        return _artin_schreier_places(x)
    disc = x * 4 + 1
    v = disc.valuation()
    if v % 2:
        return 1
    return 2 if disc.leading_coefficient().is_square() else 0


def _artin_schreier_places(g):
    # reduce g modulo {u^2 + u} until no pole is left, or an odd pole shows ramification
    F = g.field
    while True:
        poles = [e for e in g.terms() if e < 0]
        if not poles:
            break
        e = min(poles)
        if e % 2:
            return 1
        s = g.coeff(e).sqrt()
        g = g + LaurentSeries.from_terms(F, {e: s * s}) + LaurentSeries.from_terms(F, {e // 2: s})
    return 2 if g.coeff(0).trace() == 0 else 0


# --- group law ------------------------------------------------------------------

def on_curve(c, P):
    return P is INFINITY or c.evaluate(*P) == 0


def negate(c, P):
    if P is INFINITY:
        return P
    a1, _, a3, _, _ = c.a_invariants(P[0].field)
    x, y = P
    return (x, -y - a1 * x - a3)


def add(c, P, Q):
    """Chord-tangent addition on a general Weierstrass model."""
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    a1, a2, a3, a4, a6 = c.a_invariants(P[0].field)
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return INFINITY
    if x1 != x2:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    else:
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def multiply(c, n, P):
    if n < 0:
        return multiply(c, -n, negate(c, P))
    R = INFINITY
    for _ in range(n):
        R = add(c, R, P)
    return R


def point_order(c, P):
    n, R = 1, P
    while R is not INFINITY:
        R = add(c, R, P)
        n += 1
        if n > 10_000:
            raise CurveError("point order exceeds search bound")
    return n


def frobenius(c, P):
    if P is INFINITY:
        return P
    q = c.field.order
    return (P[0] ** q, P[1] ** q)


def _point_key(P):
    return (-1, -1) if P is INFINITY else (P[0].n, P[1].n)


@dataclass(frozen=True)
class GroupStructure:
    curve: CurveModel
    order: int
    invariants: tuple        # (n,) if cyclic, else (m, n) with m | n
    elements: tuple          # identity first, then canonical order
    generator: tuple | None  # smallest element of full order, if cyclic
    multiples: tuple | None  # multiples[i] == i * generator, if cyclic

    @property
    def is_cyclic(self):
        return self.generator is not None or self.order == 1


def group_structure(pts):
    """Point group of an elliptic point set: order, invariants and, when cyclic,
    the smallest generator with its table of multiples."""
    c = pts.curve
    if not c.is_elliptic or not pts.has_infinity:
        raise CurveError("group structure needs an elliptic point set with identity")
    elements = [INFINITY] + sorted(pts.affine, key=_point_key)
    n = len(elements)
    for P in elements:
        if not on_curve(c, P):
            raise CurveError(f"{P} is not on {c.name}")
    keys = {_point_key(P) for P in elements}
    for P in elements:
        if _point_key(negate(c, P)) not in keys or add(c, P, negate(c, P)) is not INFINITY:
            raise CurveError(f"group law failure: no inverse for {P}")
    orders = {_point_key(P): point_order(c, P) if P is not INFINITY else 1 for P in elements}
    exponent = max(orders.values())
    if n % exponent:
        raise CurveError("group law failure: element order does not divide the group order")
    gen = next((P for P in elements[1:] if orders[_point_key(P)] == n), None)
    multiples = None
    if gen is not None:
        multiples = [INFINITY]
        for _ in range(1, n):
            multiples.append(add(c, multiples[-1], gen))
        for i in range(n):
            for j in range(n):
                if add(c, multiples[i], multiples[j]) != multiples[(i + j) % n]:
                    raise CurveError(f"group law failure at ({i}, {j})")
        multiples = tuple(multiples)
    # elliptic point groups have rank <= 2
    invariants = (n,) if exponent == n else (n // exponent, exponent)
    return GroupStructure(c, n, invariants, tuple(elements), gen, multiples)


# --- zeta numerators -------------------------------------------------------------

@dataclass(frozen=True)
class LPolynomial:
    """Numerator P(T) of a zeta function, normalized by P(0) = 1."""

    poly: IntPolynomial
    curve: str
    convention: str = "numerator of Z(T) with P(0)=1"

    def __eq__(self, other):
        if isinstance(other, LPolynomial):
            return self.poly == other.poly
        if isinstance(other, IntPolynomial):
            return self.poly == other
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def to_list(self):
        return self.poly.to_list()

    def render(self):
        return self.poly.render()


def lpolynomial(c):
    q, g = c.q, c.genus
    if g == 0:
        return LPolynomial(IntPolynomial([1]), c.name)
    n1 = enumerate_points(c, 1).count
    s1 = q + 1 - n1
    if g == 1:
        if s1 * s1 > 4 * q:
            raise CurveError(f"{c.name}: #X(F_q) = {n1} violates the Weil bound")
        return LPolynomial(IntPolynomial([1, -s1, q]), c.name)
    if g == 2:
        n2 = enumerate_points(c, 2).count
        s2 = q * q + 1 - n2
        if s1 * s1 > 16 * q or abs(s2) > 4 * q:
            raise CurveError(f"{c.name}: counts {n1}, {n2} violate the Weil bounds")
        e2, rem = divmod(s1 * s1 - s2, 2)
        if rem:
            raise CurveError(f"{c.name}: inconsistent power sums {s1}, {s2}")
        return LPolynomial(IntPolynomial([1, -s1, e2, -q * s1, q * q]), c.name)
    raise CurveError(f"genus {g} is not supported")


def satisfies_functional_equation(lp, q):
    """P(T) == q^g T^(2g) P(1/(qT))."""
    c = lp.poly.coeffs
    d = len(c) - 1
    if d % 2:
        return False
    g = d // 2
    return all(c[d - i] == q ** (g - i) * c[i] for i in range(d + 1))


def constant_ext_quotient(c):
    """Numerator quotient zeta(F_{q^2} F) / zeta(F) = P(-T)."""
    if not c.is_elliptic:
        raise CurveError("constant extension quotient is defined for elliptic models")
    return LPolynomial(lpolynomial(c).poly.substitute_negated(), c.name + "^(2)/" + c.name)


def genus2_cover_quotient(c):
    cover = genus2_cover(c)
    big = lpolynomial(cover).poly
    small = lpolynomial(c).poly
    try:
        quot = big.exact_divide(small)
    except ArithmeticError as exc:
        raise CurveError(f"{cover.name}: numerator not divisible by that of {c.name}") from exc
    return LPolynomial(quot, cover.name + "/" + c.name)


# --- degree-two places --------------------------------------------------------------

@dataclass(frozen=True)
class DegreeTwoPlace:
    index: int          # i; the vertex t_i, and the place {iQ, -iQ} when the group is cyclic
    ell: object         # x-coordinate, an element of F_q
    point: tuple        # iQ over F_{q^2}
    conjugate: tuple    # -iQ = Frobenius(iQ)

    @property
    def uniformizer(self):
        return f"x - {self.ell.render()}"


def place_representatives(c, group):
    """One point from each pair {P, -P} of non-identity points, in vertex order.

    For a cyclic group these are Q, 2Q, ..., with Q the canonical generator.
    Otherwise the pairs are taken in canonical order of their smaller member.
    """
    if group.multiples is not None:
        return list(group.multiples[1:(group.order - 1) // 2 + 1])
    chosen, seen = [], set()
    for P in group.elements[1:]:
        k = _point_key(P)
        if k in seen:
            continue
        chosen.append(P)
        seen.update({k, _point_key(negate(c, P))})
    return chosen


def degree_two_places(c, group=None):
    """The q places of degree two coming from pairs {P, -P} of points over F_{q^2}."""
    if group is None:
        group = group_structure(enumerate_points(c, 2))
    q = c.q
    if group.order != 2 * q + 1:
        raise CurveError(f"expected {2 * q + 1} points over F_{q * q}, got {group.order}")
    reps = place_representatives(c, group)
    if len(reps) != q:
        raise CurveError(f"expected {q} pairs of points, got {len(reps)}")
    places = []
    for i, P in enumerate(reps, start=1):
        negP = negate(c, P)
        if frobenius(c, P) != negP or P == negP:
            raise CurveError(f"Frobenius orbit of {P} does not have size two")
        ell = restrict(P[0], c.field)
        places.append(DegreeTwoPlace(i, ell, P, negP))
    if len({pl.ell for pl in places}) != q:
        raise CurveError("degree-two places do not have distinct x-coordinates")
    return places


def rh_check(lp):
    """True iff the inverse roots of P have absolute value sqrt(q)."""
    poly = lp.poly if isinstance(lp, LPolynomial) else lp
    if poly.degree == 0:
        return poly[0] == 1
    if poly.degree != 2 or poly[0] != 1:
        raise CurveError(f"rh_check supports qT^2 + aT + 1 only, got {poly}")
    q, a = poly[2], poly[1]
    if q <= 0:
        raise CurveError(f"leading coefficient {q} is not a prime power")
    return a * a <= 4 * q
