"""The full pipeline per field, with machine-checkable verdicts."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from . import curves, graphs, hecke, local
from .graphs import C, T, Z
from .polynomials import IntPolynomial, poly_gcd, resultant
from .series import DEFAULT_PRECISION

SCHEMA_VERSION = 1
FIELDS = ("p1", "p1_2", "p1_3", "p1_4", "e2", "e3", "e4")

# Published values the computation is compared against. Entries that the
# derivation does not reproduce are reported as discrepancies.
_REFERENCE_LTILDE = {2: [1, 0, 2], 3: [1, 1, 3], 4: [1, 0, 4]}
_REFERENCE_C1_OVER_Z1 = -2
_REFERENCE_C2 = lambda q: (-(q + 1), 0)  # noqa: E731  (Z0, tau) coefficients


class AnalysisError(RuntimeError):
    def __init__(self, stage, detail):
        super().__init__(f"stage '{stage}' failed: {detail}")
        self.stage = stage


def _s(x):
    return str(Fraction(x))


@dataclass
class EisensteinVerdict:
    surviving: list
    excluded: list  # dicts with eigenvalue and reason
    gcd: list
    resultant: int

    def to_json(self):
        return {"surviving": self.surviving, "excluded": self.excluded,
                "gcd_Lq_Ltilde": self.gcd, "resultant_Lq_Ltilde": self.resultant}


def hecke_eigenvalue(poly):
    """qT^2 + aT + 1 vanishes at T = q^-s exactly when q^s + q^(1-s) = -a."""
    if poly.degree != 2 or poly[0] != 1:
        raise ValueError(f"expected qT^2 + aT + 1, got {poly}")
    return -poly[1]


def select_eisenstein(spectrum, P, Lq, Ltilde):
    """Which Eisenstein eigenvalues can carry toroidal forms."""
    values = [lam for lam, _ in spectrum]
    P, Lq, Ltilde = (getattr(p, "poly", p) for p in (P, Lq, Ltilde))
    keep = hecke_eigenvalue(P)
    drop = hecke_eigenvalue(Lq)
    if keep not in values or drop not in values:
        raise ValueError(f"eigenvalues {keep}, {drop} are not both in the spectrum {values}")
    g = poly_gcd(Lq, Ltilde)
    res = resultant(Lq, Ltilde)
    if g != IntPolynomial([1]) or res == 0:
        raise ValueError(f"gcd(Lq, Ltilde) = {g}; the exclusion of {drop} does not go through")
    excluded = [{
        "eigenvalue": drop,
        "reason": "zero of Lq only; Lq and Ltilde are coprime, so the integral over the "
                  "genus-two cover torus does not vanish",
        "witness": {"resultant": res},
    }]
    for lam in values:
        if lam not in (keep, drop):
            excluded.append({
                "eigenvalue": lam,
                "reason": "no zero of P or Lq has this eigenvalue; any non-cuspidal part "
                          "is an Eisenstein series at a non-zero of the zeta function",
                "witness": {"eigenvalue_of_P": keep, "eigenvalue_of_Lq": drop},
            })
    return EisensteinVerdict([keep], excluded, g.to_list(), res)


ADMISSIBLE = lambda q: {0, q, -q, q + 1, -(q + 1)}  # noqa: E731


def rh_verdict(lam, q):
    """Roots u = q^s of u^2 - lam u + q; true iff |u|^2 = q for both."""
    if lam not in ADMISSIBLE(q):
        raise ValueError(f"eigenvalue {lam} is outside the admissible set {sorted(ADMISSIBLE(q))}")
    disc = lam * lam - 4 * q
    if disc < 0:
        re, im2 = Fraction(lam, 2), Fraction(-disc, 4)
        roots = [{"re": _s(re), "im_squared": _s(im2), "im_sign": sign} for sign in (1, -1)]
        verdict = re * re + im2 == q
    elif disc == 0:
        u = Fraction(lam, 2)
        roots = [{"re": _s(u), "im_squared": "0", "im_sign": 0}] * 2
        verdict = u * u == q
    else:
        r = isqrt(disc)
        if r * r == disc:
            roots = [{"re": _s(Fraction(lam + r, 2)), "im_squared": "0", "im_sign": 0},
                     {"re": _s(Fraction(lam - r, 2)), "im_squared": "0", "im_sign": 0}]
        else:
            roots = [{"re": f"({lam}+sqrt({disc}))/2", "im_squared": "0", "im_sign": 0},
                     {"re": f"({lam}-sqrt({disc}))/2", "im_squared": "0", "im_sign": 0}]
        verdict = False
    return {"lambda": lam, "polynomial": [q, -lam, 1], "discriminant": disc,
            "roots": roots, "verdict": bool(verdict)}


@dataclass
class AnalysisReport:
    data: dict = field(default_factory=dict)

    @property
    def checks(self):
        return self.data["checks"]

    @property
    def ok(self):
        return all(self.data["checks"].values())

    def to_json(self):
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def to_markdown(self):
        d = self.data
        out = [f"# Toroidal forms for {d['field']} (q = {d['q']})", ""]
        out.append(f"- points: {d['counts']['k1']} over F_q, {d['counts']['k2']} over F_q^2")
        for k, v in d["lpolys"].items():
            out.append(f"- {k}: {v if v is None else IntPolynomial(v).render()}")
        dims = d["dims"]
        out.append(f"- dim S = {dims['S']}, cusp = {dims['cusp']}, "
                   f"cusp after Phi_P = {dims['cusp_after_phi_p']}, toroidal = {dims['toroidal']}")
        if d["spectrum"]:
            out.append("- spectrum: " + ", ".join(f"{s['lambda']} (x{s['mult']})" for s in d["spectrum"]))
        if d["rh"]:
            out.append(f"- RH check for eigenvalue {d['rh']['lambda']}: {d['rh']['verdict']}")
        out += ["", "## Checks", ""]
        out += [f"- [{'x' if v else ' '}] {k}" for k, v in sorted(d["checks"].items())]
        if d["discrepancies"]:
            out += ["", "## Discrepancies with reference values", ""]
            out += [f"- {x['quantity']}: reference {x['reference']}, derived {x['derived']}"
                    for x in d["discrepancies"]]
        if d["notes"]:
            out += ["", "## Notes", ""] + [f"- {n}" for n in d["notes"]]
        return "\n".join(out) + "\n"


def _precision(precision):
    if precision is not None:
        return precision
    env = os.environ.get("TFORMS_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except AnalysisError:
        raise
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage name
        raise AnalysisError(name, f"{type(exc).__name__}: {exc}") from exc


def _q_of(name):
    if name == "p1":
        return 2
    return int(name.split("_")[1]) if name.startswith("p1_") else int(name[1:])


def default_parameters(name):
    return (64, 63) if name.startswith("p1") else (16, 12)


def run_full_analysis(name, N=None, K=None, precision=None):
    if name not in FIELDS:
        raise ValueError(f"unknown field {name!r}; choose from {', '.join(FIELDS)}")
    dN, dK = default_parameters(name)
    N = dN if N is None else N
    K = dK if K is None else K
    precision = _precision(precision)
    if name.startswith("p1"):
        return _analyze_p1(name, _q_of(name), N, K)
    return _analyze_elliptic(name, N, K, precision)


def _analyze_p1(name, q, N, K):
    g = _stage("graph", graphs.graph_p1, q)
    validation = graphs.validate_graph(g)
    orbit = graphs.torus_orbit(q, "p1-constant")
    system = _stage("toroidal system", hecke.toroidal_system, g, orbit, K, N)
    S = _stage("solve", hecke.solve_space, system)
    forced = all(any(row[i] for row in system.rows) for i in range(K))
    data = {
        "schema_version": SCHEMA_VERSION, "field": name, "q": q,
        "parameters": {"depth": N, "iterations": K},
        "graph": validation.summary(),
        "counts": {"k1": q + 1, "k2": q * q + 1},
        "group": None,
        "lpolys": {"P": [1], "Lq": [1], "Ltilde": None},
        "dims": {"S": S.dim, "cusp": 0, "cusp_after_phi_p": 0, "toroidal": S.dim},
        "spectrum": [], "eisenstein": None, "residues": [], "cusp_elimination": None,
        "rh": None, "toroidal_basis": [],
        "checks": {
            "graph_valid": validation.ok,
            "toroidal_dimension_zero": S.dim == 0,
            "rows_pin_ray": forced,
        },
        "discrepancies": [],
        "notes": ["the zeta function of the projective line has no zeros, so no Eisenstein "
                  "series is toroidal and the toroidal space is zero"],
    }
    return AnalysisReport(data)


def _analyze_elliptic(name, N, K, precision):
    c = curves.curve(name)
    q = c.q
    checks, discrepancies, notes = {}, [], []

    g = _stage("graph", graphs.graph_elliptic, q)
    validation = graphs.validate_graph(g)
    checks["graph_valid"] = validation.ok

    pts1 = _stage("point count", curves.enumerate_points, c, 1)
    pts2 = _stage("point count", curves.enumerate_points, c, 2)
    group = _stage("group structure", curves.group_structure, pts2)
    checks["one_rational_point"] = pts1.count == 1
    checks["order_2q_plus_1"] = pts2.count == 2 * q + 1
    checks["group_cyclic"] = group.is_cyclic

    P = _stage("L-polynomials", curves.lpolynomial, c)
    Lq = _stage("L-polynomials", curves.constant_ext_quotient, c)
    Lt = _stage("L-polynomials", curves.genus2_cover_quotient, c)
    checks["Lq_is_qT2_qT_1"] = Lq.to_list() == [1, q, q]
    checks["Ltilde_matches_reference"] = Lt.to_list() == _REFERENCE_LTILDE[q]
    checks["gcd_Lq_Ltilde_is_1"] = poly_gcd(Lq.poly, Lt.poly) == IntPolynomial([1])

    orbit = graphs.torus_orbit(q, "elliptic-constant")
    system = _stage("toroidal system", hecke.toroidal_system, g, orbit, K, N)
    S = _stage("solve", hecke.solve_space, system)
    S2 = _stage("solve", hecke.solve_space, hecke.toroidal_system(g, orbit, 2 * K, 2 * N))
    checks["dim_S_is_q_plus_2"] = S.dim == q + 2
    checks["dim_S_stable_when_doubled"] = S2.dim == S.dim

    dec = _stage("eigendecomposition", hecke.eigen_decompose, g, S)
    spectrum = dec.spectrum()
    checks["spectrum_0q_plus_minus_q"] = sorted(spectrum) == [(-q, 1), (0, q), (q, 1)]

    rec = _stage("recursion", hecke.recursion_coefficients, g, K)
    checks["recursion_for_k_ge_2_holds"] = not rec.mismatches
    nu1 = rec.nu(1)

    plus = dec.eigenspace(q).basis[0]
    plus = plus.scale(Fraction(q + 1) / plus[T(1)])
    head_ok = (all(plus[T(j)] == q + 1 for j in range(1, q + 1)) and plus[Z(0)] == -q
               and plus[Z(1)] == q and plus[C(0)] == -2 * q * (q + 1))
    checks["plus_eigenform_head"] = head_ok
    checks["plus_eigenform_C1_from_recursion"] = plus[C(1)] == nu1 * plus[Z(1)]
    minus = dec.eigenspace(-q).basis[0]
    minus = minus.scale(Fraction(q + 1) / minus[T(1)])

    if nu1 != _REFERENCE_C1_OVER_Z1:
        discrepancies.append({"quantity": "C1 / Z1", "reference": _s(_REFERENCE_C1_OVER_Z1),
                              "derived": _s(nu1),
                              "note": "the derived value agrees with C1 = -+2q^2 of the +-q eigenforms"})
    c2_ref, c2 = _REFERENCE_C2(q), (rec.lam(2), rec.mu(2))
    if c2 != tuple(Fraction(x) for x in c2_ref):
        discrepancies.append({"quantity": "C2 as (Z0, tau) coefficients",
                              "reference": [_s(x) for x in c2_ref], "derived": [_s(x) for x in c2],
                              "note": "the reference value follows from the reference C1"})
    zero_forms = _zero_forms(g, dec)
    ref_head = ["0", "-1", str(-q)]
    derived_head = [_s(zero_forms[0][Z(0)]), _s(zero_forms[0][Z(1)]), _s(zero_forms[0][C(0)])]
    if derived_head != ref_head:
        discrepancies.append({"quantity": "eigenvalue-0 forms f_k at (Z0, Z1, C0)",
                              "reference": ref_head, "derived": derived_head,
                              "note": "at eigenvalue 0 the equation at t_j forces Z1 = 0, and C0 = -2"})

    cusp = _stage("cusp space", hecke.cusp_subspace, dec)
    checks["cusp_dim_q_minus_1"] = cusp.dim == q - 1
    checks["cusp_supported_on_t"] = all(
        not x for b in cusp.basis for v, x in b.as_dict().items() if v.tag != "T")

    loc = _stage("local expansion", local.expand_at_infinity, c, precision)
    places = _stage("degree-two places", curves.degree_two_places, c, group)
    expansion_ok = loc.residual().is_zero()
    for pl in places:
        pi = loc.x - pl.ell
        A = pi.shift(2)
        head = loc.y / pi
        expansion_ok &= A.valuation() == 0
        expansion_ok &= [head.coeff(e) for e in (-1, 0, 1)] == [c.field.one, c.field.zero, pl.ell]
    checks["local_expansion_identities"] = bool(expansion_ok)

    columns = [_stage("Phi_P reduction", local.phi_p_column, c, pl, precision, places) for pl in places]
    tallies_ok = all(col.tally == {C(2): q + 1, T(col.place.index): q * (q - 1)} for col in columns)
    checks["phi_p_tally"] = tallies_ok
    elim = _stage("cusp elimination", local.eliminate_cusp_forms, cusp, columns)
    checks["cusp_eliminated"] = elim.space.dim == 0
    notes.append("cusp elimination uses a basis of simultaneous Hecke eigenforms of the cusp "
                 "space, which exists by multiplicity one; this step is imported, not computed")

    row0 = hecke.toroidal_system(g, orbit, 0, N)
    residues = []
    for sign in (1, -1):
        r = hecke.residue_form(g, sign, N)
        is_eigen = (hecke.apply_phi_infty(g, r) - r.scale(sign * (q + 1))).is_zero()
        residues.append({"sign": sign, "eigenvalue": sign * (q + 1), "is_eigenform": is_eigen,
                         "violated_row": system.tags[0], "row0_residual": _s(row0.evaluate(r)[0])})
    checks["residues_excluded"] = all(r["is_eigenform"] and r["row0_residual"] == str(1 + 2 * q)
                                      for r in residues)
    ref_minus = hecke.FormVector.from_dict(
        g, N, {**{T(j): 1 for j in range(1, q + 1)}, Z(0): -1, Z(1): 1,
               **{C(i): (-1) ** i for i in range(N + 1)}})
    if not (hecke.apply_phi_infty(g, ref_minus) + ref_minus.scale(q + 1)).is_zero():
        discrepancies.append({"quantity": "alternating residue at (Z0, Z1)",
                              "reference": ["-1", "1"], "derived": ["1", "-1"],
                              "note": "the form must alternate with edge parity; z1 is adjacent to t_j"})

    eis = _stage("Eisenstein selection", select_eisenstein, spectrum, P, Lq, Lt)
    checks["surviving_eigenvalue_is_q"] = eis.surviving == [q]
    toroidal_dim = len(eis.surviving) + elim.space.dim
    checks["toroidal_dimension_one"] = toroidal_dim == 1
    rh = rh_verdict(eis.surviving[0], q)
    checks["rh_verdict"] = rh["verdict"]
    notes.append("E(s) and E(1-s) are linearly dependent; the toroidal line is identified "
                 "by its eigenvalue rather than by a choice of s")

    data = {
        "schema_version": SCHEMA_VERSION, "field": name, "q": q,
        "parameters": {"depth": N, "iterations": K, "precision": precision},
        "graph": validation.summary(),
        "counts": {"k1": pts1.count, "k2": pts2.count},
        "group": {"order": group.order, "invariants": list(group.invariants), "cyclic": group.is_cyclic},
        "lpolys": {"P": P.to_list(), "Lq": Lq.to_list(), "Ltilde": Lt.to_list()},
        "dims": {"S": S.dim, "S_doubled": S2.dim, "cusp": cusp.dim,
                 "cusp_after_phi_p": elim.space.dim, "toroidal": toroidal_dim},
        "spectrum": [{"lambda": lam, "mult": m} for lam, m in spectrum],
        "eigenforms": {
            "plus": plus.render(ray=4), "minus": minus.render(ray=4),
            "zero": [f.render(ray=4) for f in zero_forms],
        },
        "recursion": {"C1_over_Z1": _s(nu1), "C2": [_s(x) for x in c2],
                      "closed_form_mismatches": [str(m) for m in rec.mismatches]},
        "eisenstein": eis.to_json(),
        "residues": residues,
        "phi_p": [{"place": col.place.index, "ell": col.place.ell.render(), "tally": col.tally_json()}
                  for col in columns],
        "cusp_elimination": {
            "conditions": [{"place": p, "weights": {str(v): w for v, w in sorted(wts.items())}}
                           for p, wts in elim.conditions],
            "violations": [{"basis_vector": i, "place": p, "value": _s(v)} for i, p, v in elim.violations],
        },
        "rh": rh,
        "toroidal_basis": [plus.render(ray=4)],
        "checks": checks,
        "discrepancies": discrepancies,
        "notes": notes,
    }
    return AnalysisReport(data)


def _zero_forms(g, dec):
    """The eigenvalue-0 forms f_k with T_j = [j == k], read off the echelon basis."""
    forms = []
    space = dec.eigenspace(0)
    for k in range(1, g.q + 1):
        match = [b for b in space.basis if b[T(k)] == 1 and
                 all(b[T(j)] == 0 for j in range(1, g.q + 1) if j != k)]
        if match:
            forms.append(match[0])
    if len(forms) != g.q:
        raise AnalysisError("eigendecomposition", "eigenvalue-0 space is not indexed by the t_j")
    return forms
