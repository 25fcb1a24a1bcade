import pytest
from hypothesis import given, settings, strategies as st

from tforms import curves
from tforms.curves import DegreeTwoPlace
from tforms.fields import GF
from tforms.graphs import C, T, graph_elliptic
from tforms.hecke import FormVector, Subspace
from tforms.local import (AFunctionBasis, LaurentMatrix, ReductionError, eliminate_cusp_forms,
                          expand_at_infinity, phi_p_column, phi_p_cosets, reduce_to_standard,
                          residue_field)
from tforms.series import LaurentSeries

NAMES = ("e2", "e3", "e4")


def setup(name, precision=32):
    c = curves.curve(name)
    loc = expand_at_infinity(c, precision)
    return c, loc, AFunctionBasis(loc), curves.degree_two_places(c)


@pytest.mark.parametrize("name", NAMES)
def test_expansion_invariants(name):
    c, loc, _, places = setup(name)
    assert loc.x.valuation() == -2 and loc.y.valuation() == -3
    assert loc.residual().is_zero()
    assert loc.residual().absprec >= 26
    assert (loc.x / loc.y - loc.t).is_zero()
    for pl in places:
        pi = loc.x - pl.ell
        assert pi.valuation() == -2
        A = pi.shift(2)
        assert A.valuation() == 0 and A.coeff(0) == 1
        head = loc.y / pi
        assert [head.coeff(e) for e in (-1, 0, 1)] == [1, 0, pl.ell]


def test_expansion_heads():
    _, loc, _, _ = setup("e2", 16)
    assert {e: c.n for e, c in loc.x.truncate_below(8).terms().items()} == {-2: 1, 1: 1, 2: 1, 6: 1, 7: 1}
    _, loc, _, _ = setup("e3", 16)
    assert {e: c.n for e, c in loc.x.truncate_below(8).terms().items()} == {-2: 1, 2: 1, 4: 1, 6: 2}


def test_expansion_precision_floor():
    with pytest.raises(ValueError):
        expand_at_infinity(curves.curve("e2"), 6)


@pytest.mark.parametrize("name", NAMES)
def test_function_basis_has_the_weierstrass_gap(name):
    _, _, basis, _ = setup(name)
    assert basis.pole_orders == [0] + list(range(2, 13))
    with pytest.raises(ReductionError):
        basis.monic(1)


@pytest.mark.parametrize("name", NAMES)
def test_coset_count(name):
    c, loc, _, places = setup(name)
    for pl in places:
        cosets = phi_p_cosets(c, pl, loc)
        assert len(cosets) == c.q ** 2 + 1
        assert cosets[0].a.valuation() == -2


def test_residue_field_needs_a_degree_two_place():
    c = curves.weierstrass_model("split", GF(3), (0, 0, 0, -1, 0))    # y^2 = x^3 - x has (0, 0)
    with pytest.raises(ReductionError):
        residue_field(c, DegreeTwoPlace(1, GF(3)(0), None, None))


@pytest.mark.parametrize("name", NAMES)
def test_phi_p_columns(name):
    c, _, _, places = setup(name)
    q = c.q
    for pl in places:
        col = phi_p_column(c, pl, places=places)
        assert col.tally == {C(2): q + 1, T(pl.index): q * (q - 1)}
        assert sum(col.tally.values()) == q * q + 1


@pytest.mark.parametrize("name", NAMES)
def test_witness_chains_replay(name):
    c, loc, basis, places = setup(name)
    for pl in places:
        for m in phi_p_cosets(c, pl, loc):
            r = reduce_to_standard(m, basis, places)
            assert r.verify(loc)
            assert r.replay().equals(r.representative)


def test_which_cosets_go_where():
    c, loc, basis, places = setup("e3")
    pl = places[1]
    results = [reduce_to_standard(m, basis, places).vertex for m in phi_p_cosets(c, pl, loc)]
    # m_inf, then b = b0 + b1 y with b0 varying fastest
    assert results[0] == C(2)
    assert results[1:4] == [C(2)] * 3
    assert results[4:] == [T(pl.index)] * 6


def integral_unimodular(field):
    """Products of elementary integral matrices, a unit diagonal and maybe a swap."""
    coeff = st.sampled_from(field.elements())
    entry = st.lists(coeff, min_size=1, max_size=3).map(lambda cs: LaurentSeries(field, 0, cs))

    def build(parts):
        b, c, unit, swap = parts
        m = LaurentMatrix.of(field, ((1, b), (0, 1))) @ LaurentMatrix.of(field, ((1, 0), (c, 1)))
        m = m @ LaurentMatrix.of(field, ((unit, 0), (0, 1)))
        return m @ LaurentMatrix.of(field, ((0, 1), (1, 0))) if swap else m
    return st.tuples(entry, entry, st.sampled_from(field.nonzero()), st.booleans()).map(build)


@pytest.mark.parametrize("name", ("e2", "e3"))
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_reduction_is_invariant_under_integral_right_factors(name, data):
    c, loc, basis, places = setup(name)
    k = data.draw(integral_unimodular(c.field))
    assert k.det().valuation() == 0
    pl = places[0]
    m = phi_p_cosets(c, pl, loc)[data.draw(st.integers(0, c.q ** 2))]
    assert reduce_to_standard(m @ k, basis, places).vertex == reduce_to_standard(m, basis, places).vertex


def test_out_of_repertoire_shape_is_an_error():
    c, loc, basis, places = setup("e2")
    F = c.field
    t = LaurentSeries.monomial(F, 1)
    m = LaurentMatrix.of(F, ((t ** 2, t), (0, 1)))      # <t^2, t>: no t^-1 term
    with pytest.raises(ReductionError):
        reduce_to_standard(m, basis, places)


def test_poles_are_removed_with_functions_from_A():
    c, loc, basis, places = setup("e3")
    F = c.field
    # <t^2, t^-1 + ell t> shifted by y^2 x: the A-part must be subtracted away
    pl = places[2]
    shift = (loc.y * loc.y * loc.x)
    u = LaurentSeries.monomial(F, -1) + LaurentSeries.monomial(F, 1, pl.ell) + shift
    m = LaurentMatrix(LaurentSeries.monomial(F, 2), u, LaurentSeries.zero(F), LaurentSeries.constant(F, 1))
    r = reduce_to_standard(m, basis, places)
    assert r.vertex == T(pl.index)
    assert any(mv.side == "left" for mv in r.chain)
    assert r.verify(loc)


def _cusp(q, N=4):
    g = graph_elliptic(q)
    basis = []
    for k in range(1, q):
        basis.append(FormVector.from_dict(g, N, {T(k): 1, T(q): -1}))
    return Subspace(g, N, basis)


@pytest.mark.parametrize("name", NAMES)
def test_cusp_elimination(name):
    c, _, _, places = setup(name)
    cols = [phi_p_column(c, pl, places=places) for pl in places]
    result = eliminate_cusp_forms(_cusp(c.q), cols)
    assert result.space.dim == 0
    assert len(result.conditions) == c.q


def test_a_t1_indicator_violates_the_first_condition():
    c, _, _, places = setup("e2")
    g = graph_elliptic(2)
    synthetic = Subspace(g, 4, [FormVector.indicator(g, 4, T(1))])
    result = eliminate_cusp_forms(synthetic, [phi_p_column(c, places[0], places=places)])
    assert result.violations == [(0, 1, 2)]
    assert result.space.dim == 0


def test_column_without_t_vertex_is_rejected():
    c, _, _, places = setup("e2")
    col = phi_p_column(c, places[0], places=places)
    col.reductions = [r for r in col.reductions if r.vertex.tag == "C"]
    with pytest.raises(ReductionError):
        eliminate_cusp_forms(_cusp(2), [col])
