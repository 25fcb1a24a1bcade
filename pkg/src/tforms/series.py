"""Truncated Laurent series over a finite field.

A series is ``t**val * (c_0 + c_1 t + ... + c_{r-1} t**(r-1)) + O(t**(val + r))``
where ``r`` is the relative precision. Exact series (Laurent polynomials)
carry no error term. Reading a coefficient at or beyond the absolute
precision raises ``PrecisionError`` instead of returning a guess.
"""

from __future__ import annotations

from .fields import FieldElement

DEFAULT_PRECISION = 32
_INF = float("inf")


class PrecisionError(ArithmeticError):
    pass


class LaurentSeries:
    __slots__ = ("field", "val", "coeffs", "exact")

    def __init__(self, field, val, coeffs, precision=None):
        """``precision`` is the relative precision; ``None`` means exact."""
        coeffs = [field(c) for c in coeffs]
        exact = precision is None
        if exact:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
        else:
            if precision < len(coeffs):
                coeffs = coeffs[:precision]
            coeffs += [field.zero] * (precision - len(coeffs))
        # strip leading zeros into the valuation
        k = 0
        while k < len(coeffs) and not coeffs[k]:
            k += 1
        if k == len(coeffs):
            absprec = None if exact else val + len(coeffs)
            val = 0 if exact else absprec
            coeffs = []
        else:
            val += k
            coeffs = coeffs[k:]
        self.field = field
        self.val = val
        self.coeffs = tuple(coeffs)
        self.exact = exact

    # constructors ----------------------------------------------------------

    @classmethod
    def monomial(cls, field, exponent, coeff=1):
        return cls(field, exponent, [coeff])

    @classmethod
    def constant(cls, field, c):
        return cls(field, 0, [c])

    @classmethod
    def zero(cls, field, absprec=None):
        if absprec is None:
            return cls(field, 0, [])
        return cls(field, absprec, [], 0)

    @classmethod
    def from_terms(cls, field, terms, absprec=None):
        """Build from ``{exponent: coeff}``; ``absprec=None`` gives an exact series."""
        terms = {e: field(c) for e, c in terms.items() if field(c)}
        if not terms:
            return cls.zero(field, absprec)
        lo = min(terms)
        hi = max(terms) + 1 if absprec is None else absprec
        coeffs = [terms.get(e, field.zero) for e in range(lo, hi)]
        return cls(field, lo, coeffs, None if absprec is None else hi - lo)

    # basic properties --------------------------------------------------------

    @property
    def precision(self):
        """Relative precision (number of known coefficients), ``None`` if exact."""
        return None if self.exact else len(self.coeffs)

    @property
    def absprec(self):
        return None if self.exact else self.val + len(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def valuation(self):
        if self.is_zero():
            raise PrecisionError("valuation of a zero series is not determined")
        return self.val

    def coeff(self, e):
        if not self.exact and e >= self.absprec:
            raise PrecisionError(f"coefficient of t^{e} is beyond precision O(t^{self.absprec})")
        i = e - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def leading_coefficient(self):
        if self.is_zero():
            raise PrecisionError("zero series has no leading coefficient")
        return self.coeffs[0]

    def terms(self):
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c}

    def _cap(self):
        return _INF if self.exact else self.absprec

    # arithmetic ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.field is not self.field:
                raise ValueError(f"series over {self.field} and {other.field}")
            return other
        return LaurentSeries.constant(self.field, self.field(other))

    def __add__(self, other):
        other = self._coerce(other)
        cap = min(self._cap(), other._cap())
        live = [x for x in (self, other) if not x.is_zero()]
        if cap == _INF:
            if not live:
                return LaurentSeries.zero(self.field)
            lo = min(x.val for x in live)
            hi = max(x.val + len(x.coeffs) for x in live)
            return LaurentSeries(self.field, lo, [self.coeff(e) + other.coeff(e) for e in range(lo, hi)])
        lo = min([x.val for x in live] + [cap])
        return LaurentSeries(self.field, lo, [self.coeff(e) + other.coeff(e) for e in range(lo, cap)],
                             cap - lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, self.val, [-c for c in self.coeffs], self.precision) \
            if not self.is_zero() else self

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = self.field(other)
            if self.is_zero():
                return self
            return LaurentSeries(self.field, self.val, [c * a for a in self.coeffs], self.precision)
        other = self._coerce(other)
        if (self.exact and self.is_zero()) or (other.exact and other.is_zero()):
            return LaurentSeries.zero(self.field)
        val = self.val + other.val
        if self.exact and other.exact:
            out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] = out[i + j] + a * b
            return LaurentSeries(self.field, val, out)
        # (a + O(t^Pa))(b + O(t^Pb)) = ab + O(t^min(va + Pb, vb + Pa)); a zero
        # inexact series carries val == absprec, so the same rule applies
        cap = min(self.val + other._cap(), other.val + self._cap())
        n = cap - val
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.field, cap)
        out = [self.field.zero] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j, b in enumerate(other.coeffs[:n - i]):
                    out[i + j] = out[i + j] + a * b
        return LaurentSeries(self.field, val, out, n)

    __rmul__ = __mul__

    def inverse(self, precision=None):
        """Multiplicative inverse; exact inputs are expanded to ``precision`` terms."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of a zero series")
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries(self.field, -self.val, [self.coeffs[0].inverse()])
        n = (precision or DEFAULT_PRECISION) if self.exact else len(self.coeffs)
        a = self.coeffs
        b0 = a[0].inverse()
        b = [b0]
        for k in range(1, n):
            acc = self.field.zero
            for i in range(1, min(k, len(a) - 1) + 1):
                acc = acc + a[i] * b[k - i]
            b.append(-b0 * acc)
        return LaurentSeries(self.field, -self.val, b, n)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse(self.precision)

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries.constant(self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k):
        """Multiply by t**k."""
        if self.is_zero():
            return self if self.exact else LaurentSeries.zero(self.field, self.absprec + k)
        return LaurentSeries(self.field, self.val + k, self.coeffs, self.precision)

    def truncate_below(self, n):
        """The part with exponents < n, returned as an exact Laurent polynomial."""
        if not self.exact and n > self.absprec:
            raise PrecisionError(f"terms up to t^{n - 1} requested, known only to O(t^{self.absprec})")
        return LaurentSeries.from_terms(self.field, {e: c for e, c in self.terms().items() if e < n})

    def tail_from(self, n):
        """The part with exponents >= n (keeps the error term)."""
        terms = {e: c for e, c in self.terms().items() if e >= n}
        return LaurentSeries.from_terms(self.field, terms, absprec=self.absprec)

    def with_precision(self, absprec):
        """Forget everything at or beyond ``t**absprec``."""
        if not self.exact and absprec > self.absprec:
            raise PrecisionError(f"cannot raise precision from {self.absprec} to {absprec}")
        terms = {e: c for e, c in self.terms().items() if e < absprec}
        return LaurentSeries.from_terms(self.field, terms, absprec=absprec)

    def map_coefficients(self, func, field):
        return LaurentSeries(field, self.val, [func(c) for c in self.coeffs], self.precision) \
            if not self.is_zero() else (LaurentSeries.zero(field, self.absprec))

    def __eq__(self, other):
        """Equality within the joint precision window."""
        if not isinstance(other, LaurentSeries):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def render(self, max_terms=8):
        if self.is_zero():
            return "0" if self.exact else f"O(t^{self.absprec})"
        parts = []
        for e, c in list(self.terms().items())[:max_terms]:
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            coef = c.render()
            parts.append(mono if (mono and c == 1) else (f"{coef}*{mono}" if mono else coef))
        if len(self.terms()) > max_terms:
            parts.append("...")
        if not self.exact:
            parts.append(f"O(t^{self.absprec})")
        return " + ".join(parts)

    def __repr__(self):
        return self.render()


def series_invert(s, precision=None):
    return s.inverse(precision)
