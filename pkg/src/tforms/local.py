"""Local expansions at infinity and the Hecke operator at a degree-two place.

Matrices act on the tree through GL_2 of the completion at infinity. A vertex
is a coset Gamma g K Z with Gamma = GL_2(A) acting on the left (A the functions
regular away from infinity) and K Z = GL_2(O) times scalars on the right.
Every coset has a representative <t^n, u> = (t^n u; 0 1) with u determined
modulo t^n O on the right and modulo A on the left.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .curves import CurveError, degree_two_places, weierstrass_expansion
from .graphs import C, T
from .hecke import FormVector, Subspace
from .linalg import nullspace, rref
from .series import DEFAULT_PRECISION, LaurentSeries, PrecisionError


class ReductionError(ValueError):
    pass


@dataclass
class LocalExpansion:
    curve: object
    x: LaurentSeries
    y: LaurentSeries
    precision: int

    @property
    def field(self):
        return self.curve.field

    @property
    def t(self):
        return LaurentSeries.monomial(self.field, 1)

    def residual(self):
        """F(x(t), y(t)), known up to its absolute precision."""
        acc = LaurentSeries.zero(self.field)
        for (i, j), c in self.curve.terms.items():
            acc = acc + (self.x ** i) * (self.y ** j) * c
        return acc

    def check(self):
        problems = []
        if not self.residual().is_zero():
            problems.append(f"curve equation residual {self.residual().render()}")
        if not (self.x / self.y - self.t).is_zero():
            problems.append("x/y differs from t")
        if self.x.valuation() != -2 or self.y.valuation() != -3:
            problems.append(f"valuations ({self.x.valuation()}, {self.y.valuation()}) != (-2, -3)")
        if problems:
            raise CurveError(f"{self.curve.name} expansion: " + "; ".join(problems))
        return self


def expand_at_infinity(c, precision=DEFAULT_PRECISION):
    if not c.is_elliptic:
        raise CurveError(f"{c.name} is not an elliptic model")
    if precision < 8:
        raise ValueError(f"precision {precision} is below the minimum of 8")
    x, y = weierstrass_expansion(c, precision)
    return LocalExpansion(c, x, y, precision).check()


@dataclass(frozen=True)
class AFunction:
    """A polynomial in x and y (degree at most one in y), regular away from infinity."""

    terms: tuple  # sorted ((i, j), coeff) pairs with j in {0, 1}

    @classmethod
    def make(cls, mapping):
        return cls(tuple(sorted((k, v) for k, v in mapping.items() if v)))

    @classmethod
    def constant(cls, c):
        return cls.make({(0, 0): c})

    def pole_order(self):
        return max((2 * i + 3 * j for (i, j), _ in self.terms), default=0)

    def scale(self, c):
        return AFunction.make({k: v * c for k, v in self.terms})

    def expand(self, local):
        acc = LaurentSeries.zero(local.field)
        for (i, j), c in self.terms:
            acc = acc + (local.x ** i) * (local.y ** j) * c
        return acc

    def is_constant(self):
        return all(k == (0, 0) for k, _ in self.terms)

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.terms:
            mono = "*".join(s for s in (("x" if i == 1 else f"x^{i}") if i else "",
                                         "y" if j else "") if s)
            parts.append(mono if (mono and c == 1) else (f"{c.render()}*{mono}" if mono else c.render()))
        return " + ".join(parts)


class AFunctionBasis:
    """The monomials x^i y^j (j <= 1) by pole order at infinity, with their expansions."""

    def __init__(self, local, max_pole=12):
        self.local = local
        self.max_pole = max_pole
        self.by_pole = {}
        for p in range(max_pole + 1):
            for j in (0, 1):
                rest = p - 3 * j
                if rest >= 0 and rest % 2 == 0:
                    self.by_pole[p] = AFunction.make({(rest // 2, j): local.field.one})
        self._series = {p: f.expand(local) for p, f in self.by_pole.items()}
        if 1 in self.by_pole:
            raise ReductionError("a function with a simple pole at infinity")
        for p, s in self._series.items():
            if s.valuation() != -p or s.leading_coefficient() != 1:
                raise ReductionError(f"basis function of pole order {p} has expansion {s.render()}")

    @property
    def pole_orders(self):
        return sorted(self.by_pole)

    def monic(self, pole):
        if pole not in self.by_pole:
            raise ReductionError(f"no function of pole order {pole} in the basis")
        return self.by_pole[pole], self._series[pole]


class LaurentMatrix:
    __slots__ = ("a", "b", "c", "d", "note")

    def __init__(self, a, b, c, d, note=""):
        self.a, self.b, self.c, self.d = a, b, c, d
        self.note = note

    @classmethod
    def of(cls, field, rows, note=""):
        def conv(e):
            return e if isinstance(e, LaurentSeries) else LaurentSeries.constant(field, field(e))
        (a, b), (c, d) = rows
        return cls(conv(a), conv(b), conv(c), conv(d), note)

    @property
    def field(self):
        return self.a.field

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        return LaurentMatrix(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                             self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
                             self.note)

    def equals(self, other):
        """Entrywise equality within the joint precision window."""
        return all((u - v).is_zero() for u, v in zip(self.entries(), other.entries()))

    def render(self):
        return "(" + "; ".join(e.render(4) for e in self.entries()) + ")"


@dataclass
class ResidueField:
    """F_q[y] / (y^2 + s y + p) at the place x = ell; elements are b0 + b1 y."""

    place: object
    s: object
    p: object

    @property
    def order(self):
        return self.s.field.order ** 2

    def elements(self):
        F = self.s.field
        return [(b0, b1) for b1 in F.elements() for b0 in F.elements()]


def residue_field(c, place):
    a1, a2, a3, a4, a6 = c.a_invariants()
    ell = place.ell
    s = a1 * ell + a3
    p = -(ell ** 3 + a2 * ell ** 2 + a4 * ell + a6)
    F = c.field
    roots = [y for y in F.elements() if y * y + s * y + p == 0]
    if roots:
        raise ReductionError(f"x = {ell.render()} splits over F_{F.order}; not a degree-two place")
    return ResidueField(place, s, p)


def phi_p_cosets(c, place, local=None):
    """diag(pi, 1) and (1 b; 0 pi) for b = b0 + b1 y over the residue field, pi = x - ell."""
    local = local or expand_at_infinity(c)
    F = c.field
    kappa = residue_field(c, place)
    pi = local.x - place.ell
    one, zero = LaurentSeries.constant(F, 1), LaurentSeries.zero(F)
    out = [LaurentMatrix(pi, zero, zero, one, f"place {place.index}: m_inf")]
    for b0, b1 in kappa.elements():
        b = local.y * b1 + b0
        out.append(LaurentMatrix(one, b, zero, pi,
                                 f"place {place.index}: m_b, b = {b0.render()} + {b1.render()}*y"))
    if len(out) != F.order ** 2 + 1:
        raise ReductionError("wrong number of cosets")
    return out


@dataclass
class Move:
    side: str  # "left" (an element of GL_2(A)) or "right" (integral unimodular, or scalar)
    matrix: LaurentMatrix
    label: str
    symbolic: tuple = None  # left moves: entries as AFunctions

    def to_json(self):
        return {"side": self.side, "label": self.label}


@dataclass
class StandardVertex:
    vertex: object
    chain: list
    source: LaurentMatrix
    representative: LaurentMatrix = field(repr=False)

    def replay(self):
        m = self.source
        for mv in self.chain:
            m = mv.matrix @ m if mv.side == "left" else m @ mv.matrix
        return m

    def verify(self, local):
        """Replay the chain and check every move lies in the right group."""
        for mv in self.chain:
            if mv.side == "left":
                entries = [f.expand(local) for f in mv.symbolic]
                if not all((e - s).is_zero() for e, s in zip(entries, mv.matrix.entries())):
                    raise ReductionError(f"left move '{mv.label}' does not match its A-entries")
                det = mv.matrix.det()
                if det.is_zero() or set(det.terms()) != {0}:
                    raise ReductionError(f"left move '{mv.label}' has non-constant determinant")
            else:
                m = mv.matrix
                det = m.det()
                scalar = m.b.is_zero() and m.c.is_zero() and (m.a - m.d).is_zero()
                integral = all(e.is_zero() or e.valuation() >= 0 for e in m.entries()) \
                    and det.valuation() == 0
                if not (scalar or integral):
                    raise ReductionError(f"right move '{mv.label}' is neither integral unimodular nor scalar")
        if not self.replay().equals(self.representative):
            raise ReductionError(f"witness chain for {self.vertex} does not replay")
        return True


def canonical_representative(field, vertex, ell=None):
    t = LaurentSeries.monomial(field, 1)
    if vertex.tag == "C":
        return LaurentMatrix.of(field, ((t ** (-vertex.index), 0), (0, 1)))
    if vertex.tag == "T":
        return LaurentMatrix.of(field, ((t ** 2, t ** -1 + t * ell), (0, 1)))
    raise ReductionError(f"no representative for {vertex}")


class _Reducer:
    def __init__(self, m, basis, places):
        self.basis = basis
        self.local = basis.local
        self.F = self.local.field
        self.places = places
        self.m = m
        self.chain = []

    def _t(self, e):
        return LaurentSeries.monomial(self.F, e)

    def right(self, mat, label):
        mat = LaurentMatrix.of(self.F, mat)
        self.chain.append(Move("right", mat, label))
        self.m = self.m @ mat

    def left(self, sym, label):
        series = [f.expand(self.local) for f in sym]
        mat = LaurentMatrix(*series)
        self.chain.append(Move("left", mat, label, tuple(sym)))
        self.m = mat @ self.m

    def iwasawa(self):
        """Right moves bringing m to <t^n, u>; returns n."""
        m = self.m
        if not m.c.is_zero():
            if m.d.is_zero() or m.c.valuation() < m.d.valuation():
                self.right(((0, 1), (1, 0)), "swap columns")
            m = self.m
            self.right(((1, 0), (-(m.c / m.d), 1)), "clear lower-left entry")
            if not self.m.c.is_zero():
                raise ReductionError("lower-left entry did not vanish")
        m = self.m
        k = m.d.valuation()
        unit = m.d.shift(-k)
        if not (unit - 1).is_zero():
            self.right(((1, 0), (0, unit.inverse())), "normalize lower-right unit")
        if k:
            self.right(((self._t(-k), 0), (0, self._t(-k))), f"scalar t^{-k}")
        m = self.m
        n = m.a.valuation()
        unit = m.a.shift(-n)
        if not (unit - 1).is_zero():
            self.right(((unit.inverse(), 0), (0, 1)), "normalize upper-left unit")
        return n

    def drop_integral_tail(self, n):
        u = self.m.b
        tail = u.tail_from(n)
        if tail.is_zero():
            return
        beta = -(tail.shift(-n))
        self.right(((1, beta), (0, 1)), f"drop terms of u from t^{n} on")

    def kill_poles(self, n):
        one = AFunction.constant(self.F.one)
        zero = AFunction.make({})
        while True:
            u = self.m.b
            low = [e for e in u.terms() if e < min(n, -1)]
            if not low:
                break
            e = min(low)
            f, _ = self.basis.monic(-e)
            g = f.scale(-u.coeff(e))
            self.left((one, g, zero, one), f"subtract {(f.scale(u.coeff(e))).render()}")
        if n > 0 and u.coeff(0):
            g = AFunction.constant(-u.coeff(0))
            self.left((one, g, zero, one), f"subtract constant {u.coeff(0).render()}")

    def classify(self, n):
        F = self.F
        u = self.m.b
        if n < 0 or (n == 0 and u.is_zero()):
            return C(-n)
        if n != 2:
            raise ReductionError(f"normal form <t^{n}, {u.render()}> is outside the reduction repertoire")
        cm1, c1 = u.coeff(-1), u.coeff(1)
        one, zero = AFunction.constant(F.one), AFunction.make({})
        if not cm1 and not c1:
            self.left((zero, one, one, zero), "swap rows")
            self.right(((0, 1), (1, 0)), "swap columns")
            self.right(((self._t(-2), 0), (0, self._t(-2))), "scalar t^-2")
            return C(2)
        if not cm1:
            raise ReductionError(f"normal form <t^2, {u.render()}> is outside the reduction repertoire")
        if cm1 != 1:
            self.left((AFunction.constant(cm1.inverse()), zero, zero, one),
                      f"scale row by {cm1.inverse().render()}")
            self.right(((cm1, 0), (0, 1)), f"scale column by {cm1.render()}")
        ell = c1 / cm1
        for pl in self.places:
            if pl.ell == ell:
                return T(pl.index)
        raise ReductionError(f"t^-1 + {ell.render()} t does not match any degree-two place")


def reduce_to_standard(m, basis, places):
    """Reduce a matrix to C(i) or T(i), recording each move."""
    red = _Reducer(m, basis, places)
    try:
        n = red.iwasawa()
        red.drop_integral_tail(n)
        red.kill_poles(n)
        red.drop_integral_tail(n)
        vertex = red.classify(n)
    except PrecisionError as exc:
        raise ReductionError(f"precision exhausted while reducing {m.note}: {exc}") from exc
    ell = None
    if vertex.tag == "T":
        ell = next(pl.ell for pl in places if pl.index == vertex.index)
    rep = canonical_representative(basis.local.field, vertex, ell)
    out = StandardVertex(vertex, red.chain, m, rep)
    out.verify(basis.local)
    return out


@dataclass
class PhiPColumn:
    place: object
    reductions: list

    @property
    def tally(self):
        return Counter(r.vertex for r in self.reductions)

    def tally_json(self):
        return {str(v): n for v, n in sorted(self.tally.items())}


def phi_p_column(c, place, precision=DEFAULT_PRECISION, places=None):
    local = expand_at_infinity(c, precision)
    basis = AFunctionBasis(local)
    places = places or degree_two_places(c)
    cosets = phi_p_cosets(c, place, local)
    return PhiPColumn(place, [reduce_to_standard(m, basis, places) for m in cosets])


@dataclass
class CuspElimination:
    space: Subspace
    conditions: list  # (place index, {vertex: weight})
    violations: list  # (basis vector index, place index, value)


def eliminate_cusp_forms(cusp, columns):
    """Impose sum of weight * f(v) over each Phi_P column on the cusp space.

    A cusp form that is a Hecke eigenform vanishes at c0, so its Phi_P-image
    vanishes there too; that is one linear condition per place.
    """
    conditions, rows, violations = [], [], []
    for col in columns:
        tally = col.tally
        if not any(v.tag == "T" for v in tally):
            raise ReductionError(f"column of place {col.place.index} misses every t-vertex")
        conditions.append((col.place.index, dict(tally)))
        row = []
        for i, b in enumerate(cusp.basis):
            d = b.as_dict()
            val = sum(w * d.get(v, 0) for v, w in tally.items())
            row.append(val)
            if val:
                violations.append((i, col.place.index, val))
        rows.append(row)
    combos = nullspace(rows, cusp.dim) if cusp.dim else []
    forms = []
    for coeffs in combos:
        v = FormVector.zero(cusp.graph, cusp.depth)
        for c, b in zip(coeffs, cusp.basis):
            v = v + b.scale(c)
        forms.append(v)
    if forms:
        forms = [FormVector(cusp.graph, cusp.depth, r) for r in rref([f.values for f in forms])[0]]
    return CuspElimination(Subspace(cusp.graph, cusp.depth, forms), conditions, violations)
