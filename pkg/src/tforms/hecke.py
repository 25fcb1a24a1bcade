"""The Hecke operator at infinity on truncated forms, and the toroidal systems it generates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import C, T, Z
from .linalg import charpoly, integer_roots, nullspace, rref


class SolverError(ValueError):
    pass


class FormVector:
    """Exact values of a form on the special vertices and on C(0..depth)."""

    __slots__ = ("graph", "depth", "values")

    def __init__(self, graph, depth, values):
        coords = graph.coordinates(depth)
        values = tuple(Fraction(v) for v in values)
        if len(values) != len(coords):
            raise ValueError(f"{len(values)} values for {len(coords)} coordinates")
        self.graph = graph
        self.depth = depth
        self.values = values

    @classmethod
    def from_dict(cls, graph, depth, mapping):
        extra = set(mapping) - set(graph.coordinates(depth))
        if extra:
            raise KeyError(f"not coordinates at depth {depth}: {sorted(extra)}")
        return cls(graph, depth, [mapping.get(v, 0) for v in graph.coordinates(depth)])

    @classmethod
    def zero(cls, graph, depth):
        return cls(graph, depth, [0] * len(graph.coordinates(depth)))

    @classmethod
    def indicator(cls, graph, depth, vertex):
        return cls.from_dict(graph, depth, {vertex: 1})

    @property
    def coordinates(self):
        return self.graph.coordinates(self.depth)

    def as_dict(self):
        return dict(zip(self.coordinates, self.values))

    def __getitem__(self, v):
        try:
            return self.values[self.coordinates.index(v)]
        except ValueError:
            raise KeyError(f"{v} is outside the window of depth {self.depth}") from None

    def truncated(self, depth):
        if depth > self.depth:
            raise ValueError(f"cannot extend depth {self.depth} to {depth}")
        return FormVector(self.graph, depth, self.values[:len(self.graph.coordinates(depth))])

    def _align(self, other):
        d = min(self.depth, other.depth)
        return self.truncated(d), other.truncated(d)

    def __add__(self, other):
        a, b = self._align(other)
        return FormVector(a.graph, a.depth, [x + y for x, y in zip(a.values, b.values)])

    def __neg__(self):
        return FormVector(self.graph, self.depth, [-x for x in self.values])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return FormVector(self.graph, self.depth, [c * x for x in self.values])

    def is_zero(self):
        return not any(self.values)

    def __eq__(self, other):
        if not isinstance(other, FormVector):
            return NotImplemented
        return self.depth == other.depth and self.values == other.values

    __hash__ = None

    def to_json(self):
        return [str(v) for v in self.values]

    def render(self, ray=None):
        d = self.as_dict()
        fmt = lambda vs: ", ".join(str(d[v]) for v in vs)  # noqa: E731
        ts = [v for v in self.coordinates if v.tag == "T"]
        zs = [v for v in self.coordinates if v.tag == "Z"]
        cs = [v for v in self.coordinates if v.tag == "C"][:ray]
        parts = [fmt(ts)] if ts else []
        if zs:
            parts.append(fmt(zs))
        parts.append(fmt(cs) + (", ..." if ray is not None and ray < self.depth + 1 else ""))
        return "[" + " | ".join(parts) + "]"

    def __repr__(self):
        return f"FormVector{self.render(ray=6)}"


def apply_phi_infty(g, f):
    """(Phi f)(v) = sum of weight(v -> w) f(w); the outermost ray coordinate is consumed."""
    if f.depth < 2:
        raise SolverError(f"depth {f.depth} is exhausted; Phi needs depth at least 2")
    vals = f.as_dict()
    out = []
    for v in g.coordinates(f.depth - 1):
        acc = Fraction(0)
        for w, wt in g.out_arcs(v).items():
            acc += wt * vals[w]
        out.append(acc)
    return FormVector(g, f.depth - 1, out)


def _pull_back(g, functional):
    """Functional f -> sum a_v (Phi f)(v), as coefficients on f."""
    out = {}
    for v, a in functional.items():
        for w, wt in g.out_arcs(v).items():
            out[w] = out.get(w, 0) + a * wt
    return {v: a for v, a in out.items() if a}


@dataclass
class LinearSystem:
    graph: object
    depth: int
    rows: list
    tags: list

    @property
    def coordinates(self):
        return self.graph.coordinates(self.depth)

    def evaluate(self, f):
        """Row values on f; f must cover the system's window."""
        vals = f.truncated(self.depth).values if f.depth >= self.depth else None
        if vals is None:
            raise SolverError(f"form of depth {f.depth} is shorter than the system depth {self.depth}")
        return [sum(a * x for a, x in zip(row, vals)) for row in self.rows]

    def touched_depth(self):
        coords = self.coordinates
        deepest = 0
        for row in self.rows:
            for v, a in zip(coords, row):
                if a and v.tag == "C":
                    deepest = max(deepest, v.index)
        return deepest


def toroidal_system(g, orbit, K, N):
    """Rows k = 0..K: the orbit sum of Phi^k f, written as coefficients on f."""
    if K > N - g.ray_start:
        raise SolverError(f"K = {K} rows need depth at least {K + g.ray_start}, got N = {N}")
    coords = g.coordinates(N)
    index = {v: i for i, v in enumerate(coords)}
    functional = {v: Fraction(m) for v, m in orbit.entries}
    label = ", ".join(f"{m}*{v}" for v, m in orbit.entries)
    rows, tags = [], []
    for k in range(K + 1):
        row = [Fraction(0)] * len(coords)
        for v, a in functional.items():
            if v not in index:
                raise SolverError(f"row {k} reaches {v}, beyond depth {N}")
            row[index[v]] = a
        rows.append(row)
        tags.append(f"Phi^{k} over orbit {{{label}}}")
        functional = _pull_back(g, functional)
    return LinearSystem(g, N, rows, tags)


@dataclass
class Subspace:
    graph: object
    depth: int
    basis: list

    @property
    def dim(self):
        return len(self.basis)

    def pivots(self):
        out = []
        for b in self.basis:
            out.append(next(i for i, x in enumerate(b.values) if x))
        return out

    def coefficients(self, f):
        """Coefficients of f in the echelon basis, read off at the pivots, or None if f is not in the span."""
        f = f.truncated(min(f.depth, self.depth))
        coeffs = [f.values[p] for p in self.pivots()]
        comb = FormVector.zero(self.graph, f.depth)
        for c, b in zip(coeffs, self.basis):
            comb = comb + b.truncated(f.depth).scale(c)
        return coeffs if comb == f else None


def solve_space(system, depth=None):
    """Solutions of the system on the window special + C(0..depth).

    ``depth`` defaults to the deepest ray coordinate any row touches, so the
    unconstrained far ray does not inflate the dimension.
    """
    if depth is None:
        depth = system.touched_depth()
    width = len(system.graph.coordinates(depth))
    rows = []
    for row, tag in zip(system.rows, system.tags):
        if any(row[width:]):
            raise SolverError(f"row '{tag}' reaches beyond depth {depth}")
        rows.append(row[:width])
    basis = nullspace(rows, width)
    return Subspace(system.graph, depth, [FormVector(system.graph, depth, b) for b in basis])


@dataclass
class RecursionCoefficients:
    q: int
    depth: int
    even: dict  # k -> (coefficient of Z0, coefficient of tau)
    odd: dict  # k -> coefficient of Z1
    mismatches: list = field(default_factory=list)

    def lam(self, k):
        return self.even[k][0]

    def mu(self, k):
        return self.even[k][1]

    def nu(self, k):
        return self.odd[k]

    def advance(self, k):
        """Predict C_{k+1} from C_k and C_{k-1} by applying Phi on the tail (k >= 2)."""
        q = self.q
        if k % 2 == 0:
            nu = self.lam(k) * self.nu(1) + self.lam(k) * q + self.mu(k) * q * (q + 1) - q * self.nu(k - 1)
            return nu
        return (self.nu(k) - q * self.lam(k - 1), self.nu(k) - q * self.mu(k - 1))


def recursion_coefficients(g, K):
    """Express C_0..C_K in the free values T_j, Z_0, Z_1 by forward substitution."""
    if not g.special:
        raise SolverError("recursion coefficients need an elliptic graph")
    q = g.q
    params = list(g.special)
    system = toroidal_system(g, _orbit_of(g), K, K + g.ray_start)
    coords = system.coordinates
    expr = {v: [Fraction(int(v == p)) for p in params] for v in params}
    for k, row in enumerate(system.rows):
        ck = C(k)
        lead = row[coords.index(ck)]
        if not lead or any(a for v, a in zip(coords, row) if v.tag == "C" and v.index > k):
            raise SolverError(f"row {k} does not determine C{k}")
        acc = [Fraction(0)] * len(params)
        for v, a in zip(coords, row):
            if a and v != ck:
                acc = [x + a * y for x, y in zip(acc, expr[v])]
        expr[ck] = [-x / lead for x in acc]

    even, odd = {}, {}
    ts = [params.index(T(j)) for j in range(1, q + 1)]
    z0, z1 = params.index(Z(0)), params.index(Z(1))
    for k in range(K + 1):
        e = expr[C(k)]
        if k % 2 == 0:
            tau = e[ts[0]]
            if any(e[i] != tau for i in ts) or e[z1]:
                raise SolverError(f"C{k} = {e} is not in span(Z0, tau)")
            even[k] = (e[z0], tau)
        else:
            if any(e[i] for i in ts) or e[z0]:
                raise SolverError(f"C{k} = {e} is not a multiple of Z1")
            odd[k] = e[z1]
    rec = RecursionCoefficients(q, K, even, odd)
    for k in range(2, K):
        predicted = rec.advance(k)
        actual = odd[k + 1] if k % 2 == 0 else even[k + 1]
        if predicted != actual:
            rec.mismatches.append((k + 1, predicted, actual))
    return rec


def _orbit_of(g):
    from .graphs import torus_orbit
    return torus_orbit(g.q, "elliptic-constant" if g.special else "p1-constant")


@dataclass
class Eigenspace:
    eigenvalue: int
    basis: list
    multiplicity: int


@dataclass
class EigenDecomposition:
    graph: object
    space: Subspace
    matrix: list
    charpoly: list
    spaces: list

    def spectrum(self):
        return [(e.eigenvalue, e.multiplicity) for e in self.spaces]

    def eigenspace(self, value):
        for e in self.spaces:
            if e.eigenvalue == value:
                return e
        raise KeyError(f"{value} is not an eigenvalue")


def eigen_decompose(g, S):
    """Diagonalize Phi on a Phi-stable subspace, exactly and over the integers."""
    n = S.dim
    images = [apply_phi_infty(g, b) for b in S.basis]
    columns = []
    for b, img in zip(S.basis, images):
        coeffs = S.coefficients(img)
        if coeffs is None:
            raise SolverError(f"Phi of basis vector {b!r} leaves the subspace")
        columns.append(coeffs)
    matrix = [[columns[j][i] for j in range(n)] for i in range(n)]
    cp = charpoly(matrix)
    roots, cofactor = integer_roots(cp)
    if len(cofactor) > 1:
        raise SolverError(f"characteristic polynomial {cp} has non-integral roots")
    spaces = []
    for lam in sorted(roots):
        shifted = [[matrix[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        kernel = nullspace(shifted, n)
        if len(kernel) != roots[lam]:
            raise SolverError(f"eigenvalue {lam}: geometric multiplicity {len(kernel)} "
                              f"!= algebraic multiplicity {roots[lam]}")
        vectors = []
        for coeffs in kernel:
            v = FormVector.zero(g, S.depth)
            for c, b in zip(coeffs, S.basis):
                v = v + b.scale(c)
            residual = apply_phi_infty(g, v) - v.scale(lam)
            if not residual.is_zero():
                raise SolverError(f"eigenvector for {lam} has nonzero residual")
            vectors.append(v)
        spaces.append(Eigenspace(lam, _echelon_forms(g, S.depth, vectors), roots[lam]))
    return EigenDecomposition(g, S, matrix, cp, spaces)


def _echelon_forms(g, depth, vectors):
    rows, _ = rref([v.values for v in vectors])
    return [FormVector(g, depth, r) for r in rows]


def cusp_subspace(dec, tail=2):
    """Forms in the 0-eigenspace that vanish on the last ``tail`` ray coordinates."""
    g = dec.graph
    space = dec.eigenspace(0)
    depth = dec.space.depth
    far = [C(i) for i in range(depth - tail + 1, depth + 1)]
    rows = [[b[v] for b in space.basis] for v in far]
    combos = nullspace(rows, len(space.basis))
    forms = []
    for coeffs in combos:
        v = FormVector.zero(g, depth)
        for c, b in zip(coeffs, space.basis):
            v = v + b.scale(c)
        forms.append(v)
    forms = _echelon_forms(g, depth, forms)
    if len(forms) != g.q - 1:
        raise SolverError(f"cusp space has dimension {len(forms)}, expected {g.q - 1}")
    for f in forms:
        d = f.as_dict()
        off = [v for v, x in d.items() if x and v.tag != "T"]
        if off:
            raise SolverError(f"cusp form {f!r} is supported off the t-vertices at {off}")
        support = sorted(x for x in d.values() if x)
        if support != [-1, 1]:
            raise SolverError(f"cusp form {f!r} is not a difference of two t-indicators")
    return Subspace(g, depth, forms)


def residue_form(g, sign, depth):
    """The form constant on the graph (sign +1) or alternating with edge parity (sign -1)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    parity = {C(0): 0}
    frontier = [C(0)]
    last = max(depth, g.ray_start)
    while frontier:
        nxt = []
        for v in frontier:
            for w in g.out_arcs(v):
                if w.tag == "C" and w.index > last:
                    continue
                if w not in parity:
                    parity[w] = 1 - parity[v]
                    nxt.append(w)
                elif parity[w] == parity[v]:
                    raise SolverError("graph is not bipartite")
        frontier = nxt
    return FormVector(g, depth, [sign ** parity[v] for v in g.coordinates(depth)])
