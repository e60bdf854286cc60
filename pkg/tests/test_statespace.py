from fractions import Fraction as F

import pytest

from corpus import corpus
from lgcy.statespace import (Analysis, BigradedTable, assemble_bundle_cr, assemble_cy,
                             assemble_lg, classify_states, hodge_report, milnor_fiber_dims,
                             narrow_broad_counts, thom_shift_check, verify_correspondence)
from lgcy.symmetry import make_sector

QUINTIC_TABLE = {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1,
                 (3, 0): 1, (2, 1): 101, (1, 2): 101, (0, 3): 1}


def as_int_dict(table):
    return {(int(p), int(q)): h for (p, q), h in table.as_dict().items()}


@pytest.fixture(scope="module")
def quintic_analysis(quintic):
    return Analysis(quintic)


@pytest.fixture(scope="module")
def p123_analysis(p123):
    return Analysis(p123)


def test_cy_quintic(quintic_analysis):
    assert as_int_dict(assemble_cy(quintic_analysis)) == QUINTIC_TABLE


def test_cy_p123(p123_analysis):
    table = assemble_cy(p123_analysis)
    assert as_int_dict(table) == {(0, 0): 4}
    assert sorted(c.sector for c in table.provenance) == ["0@0", "0@0", "0@1/3", "0@2/3"]


def test_cy_mirror_quintic(mirror_quintic):
    table = assemble_cy(Analysis(mirror_quintic))
    assert table[(1, 1)] == 101 and table[(2, 1)] == 1


def test_lg_quintic(quintic_analysis):
    table = assemble_lg(quintic_analysis)
    assert as_int_dict(table) == QUINTIC_TABLE
    narrow = {c.sector: c.p for c in table.provenance if c.kind == "ambient"}
    assert narrow == {"0@1/5": 3, "0@2/5": 2, "0@3/5": 1, "0@4/5": 0}


def test_lg_p123(p123_analysis):
    table = assemble_lg(p123_analysis)
    assert as_int_dict(table) == {(0, 0): 4}
    assert sorted(c.sector for c in table.provenance if c.kind == "ambient") == \
        ["0@1/2", "0@1/4", "0@3/4"]


def test_bundles_quintic(quintic_analysis):
    cy = assemble_bundle_cr(quintic_analysis, "cy")
    lg = assemble_bundle_cr(quintic_analysis, "lg")
    assert as_int_dict(cy) == {(k, k): 1 for k in range(5)}
    assert cy == lg


def test_milnor_fibre_dims(quintic_analysis, p123_analysis):
    a = quintic_analysis
    comp = a.components[0]
    ident = milnor_fiber_dims(a, make_sector(a.model, comp, 0))
    assert ident.dims == {0: 1, 4: 204}
    assert milnor_fiber_dims(a, make_sector(a.model, comp, F(1, 5))).dims == {}
    b = p123_analysis
    fib = milnor_fiber_dims(b, make_sector(b.model, b.components[0], 0))
    assert fib.dims == {0: 1, 2: 1, 3: 1}


def test_thom_shift(quintic_analysis, p123_analysis):
    check = thom_shift_check(quintic_analysis)
    assert check.ok and check.relative[(3, 2)] == 101
    check = thom_shift_check(p123_analysis)
    assert check.ok and check.relative.as_dict() == {(2, 2): 4}


def test_classify(quintic_analysis, p123_analysis):
    assert narrow_broad_counts(assemble_lg(quintic_analysis)) == {"narrow": 4, "broad": 204}
    assert narrow_broad_counts(assemble_lg(p123_analysis)) == {"narrow": 3, "broad": 1}
    labelled = classify_states(assemble_lg(p123_analysis))
    assert {c.sector: c.narrowness for c in labelled.provenance}["0@0"] == "broad"


@pytest.mark.parametrize("m", [m for m in corpus() if m.r == 1][:6],
                         ids=lambda m: f"{m.weights}{m.degrees}")
def test_hypersurface_narrow_means_trivial_fixed_locus(m):
    a = Analysis(m)
    fixed = {s.id: s.n_gamma for s in a.sectors("lg")}
    for c in classify_states(assemble_lg(a)).provenance:
        assert (c.narrowness == "narrow") == (fixed[c.sector] == 0)


def test_verify(quintic_analysis, p123_analysis):
    rep = verify_correspondence(quintic_analysis)
    assert rep.ok and rep.cy.total == 208
    rep = verify_correspondence(p123_analysis)
    assert rep.ok and rep.cy.as_dict() == rep.lg.as_dict() == {(0, 0): 4}
    assert len(rep.certificate) == 6


def test_verify_mirror(mirror_quintic):
    rep = verify_correspondence(Analysis(mirror_quintic))
    assert rep.ok and rep.cy[(1, 1)] == 101 and rep.cy[(2, 1)] == 1


def test_hodge_report(quintic_analysis, p123_analysis):
    assert hodge_report(assemble_cy(quintic_analysis), 3).euler == -200
    assert hodge_report(assemble_cy(p123_analysis), 0).euler == 4
    empty = hodge_report(BigradedTable())
    assert (empty.euler, empty.total, empty.symmetric) == (0, 0, True)


def test_fractional_bidegrees_reported():
    t = BigradedTable()
    from lgcy.statespace import CRClass
    t.add(CRClass("x", "ambient", 0, F(1, 2), F(1, 2)))
    t.add(CRClass("x", "ambient", 0, F(1), F(1)))
    rep = hodge_report(t)
    assert rep.euler == 1 and rep.fractional == [{"p": "1/2", "q": "1/2", "h": 1}]


@pytest.mark.parametrize("m", corpus(), ids=lambda m: f"{m.weights}{m.degrees}")
def test_corpus_correspondence(m):
    a = Analysis(m)
    rep = verify_correspondence(a)
    assert rep.ok, rep.counterexamples
    dim = m.n - m.r - 1
    summary = hodge_report(rep.cy, dim)
    assert summary.symmetric and summary.dual
    assert rep.cy[(0, 0)] >= 1
