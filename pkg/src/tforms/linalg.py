"""Exact linear algebra over Q.

Row reduction is done fraction-free (Bareiss) on integer-scaled rows; Fractions
only appear in back substitution and in the final reduced echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _lcm(a, b):
    return a * b // gcd(a, b)


def _integer_row(row):
    den = 1
    for c in row:
        den = _lcm(den, Fraction(c).denominator)
    return [int(Fraction(c) * den) for c in row]


def echelon_fraction_free(rows, ncols):
    """Bareiss elimination. Returns (integer echelon rows, pivot columns)."""
    m = [_integer_row(r) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise ValueError(f"row of length {len(r)}, expected {ncols}")
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        top = m[r]
        for i in range(r + 1, len(m)):
            row = m[i]
            lead = row[c]
            for j in range(c + 1, ncols):
                num = top[c] * row[j] - lead * top[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("Bareiss step was not exact")
                row[j] = q
            row[c] = 0
            # rows without a pivot in this column are still scaled; keep them exact
        prev = top[c]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols):
    return len(echelon_fraction_free(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}, as reduced-echelon Fraction vectors."""
    if not rows:
        basis = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
        return basis
    ech, pivots = echelon_fraction_free(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in reversed(list(zip(ech, pivots))):
            s = sum((Fraction(row[j]) * x[j] for j in range(p + 1, ncols) if row[j]), Fraction(0))
            x[p] = -s / row[p]
        basis.append(x)
    return rref(basis)[0] if basis else []


def rref(rows):
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(c) for c in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def solve_in_span(basis, vector, coords=None):
    """Coefficients a with sum(a_i basis_i) == vector on ``coords`` (all if None), or None."""
    n = len(vector)
    idx = range(n) if coords is None else coords
    k = len(basis)
    # augmented system: columns are basis vectors, one row per coordinate
    rows = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(vector[j])] for j in idx]
    red, pivots = rref(rows)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        coeffs[p] = row[k]
    return coeffs


def determinant(rows):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [_integer_row(r) for r in rows]
    scale = 1
    for r in rows:
        den = 1
        for c in r:
            den = _lcm(den, Fraction(c).denominator)
        scale *= den
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return Fraction(sign * m[n - 1][n - 1], scale)


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def charpoly(matrix):
    """Monic characteristic polynomial det(xI - M), ascending Fraction coefficients.

    Faddeev-LeVerrier recursion, exact over Q.
    """
    n = len(matrix)
    a = [[Fraction(v) for v in row] for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            m[i][i] += coeffs[n - k + 1]
        m = matmul(a, m)
        coeffs[n - k] = -sum(m[i][i] for i in range(n)) / k
    return coeffs


def integer_roots(coeffs):
    """Integer roots with multiplicity of an integer-coefficient polynomial.

    Returns (roots dict, cofactor coefficients). The cofactor has no integer roots.
    """
    poly = [Fraction(c) for c in coeffs]
    while poly and poly[-1] == 0:
        poly.pop()
    if not poly:
        raise ValueError("zero polynomial")
    roots = {}
    while len(poly) > 1 and poly[0] == 0:
        poly.pop(0)
        roots[0] = roots.get(0, 0) + 1
    changed = True
    while changed and len(poly) > 1:
        changed = False
        const = abs(int(poly[0])) if poly[0].denominator == 1 else None
        if const is None:
            break
        divisors = [d for d in range(1, const + 1) if const % d == 0]
        for d in divisors:
            for r in (d, -d):
                quot, rem = _synthetic_division(poly, r)
                if rem == 0:
                    roots[r] = roots.get(r, 0) + 1
                    poly = quot
                    changed = True
                    break
            if changed:
                break
    return roots, poly


def _synthetic_division(poly, r):
    # poly ascending; divide by (x - r)
    desc = list(reversed(poly))
    out = [desc[0]]
    for c in desc[1:]:
        out.append(c + out[-1] * r)
    rem = out.pop()
    return list(reversed(out)), rem
