"""Package output against the independent reference computations."""

import pytest

from corpus import corpus, describe
from lgcy.jacobian import milnor_hilbert_series
from lgcy.statespace import Analysis, assemble_cy, assemble_lg
from oracles import ci_euler_characteristic, fermat_state_space, milnor_series_sympy

HYPERSURFACES = [m for m in corpus() if m.r == 1]


@pytest.mark.parametrize("m", HYPERSURFACES, ids=describe)
def test_fermat_brute_force(m):
    want = fermat_state_space(m.weights, m.degrees[0], m.generators)
    a = Analysis(m)
    assert assemble_lg(a).as_dict() == want
    assert assemble_cy(a).as_dict() == want


def test_mirror_quintic_brute_force(mirror_quintic):
    want = fermat_state_space(mirror_quintic.weights, 5, mirror_quintic.generators)
    assert want[(1, 1)] == 101 and want[(2, 1)] == 1
    assert assemble_cy(Analysis(mirror_quintic)).as_dict() == want


def test_quintic_series_oracle():
    assert milnor_series_sympy([1] * 5, 5)[5] == 101 == milnor_hilbert_series([1] * 5, 5)[5]


def test_complete_intersection_euler(ci24):
    # smooth (2,4) complete intersection in P^5: chi = 2 (h11 - h21)
    chi = ci_euler_characteristic(5, [2, 4])
    assert chi == -176
    table = assemble_cy(Analysis(ci24))
    assert 2 * (table[(1, 1)] - table[(2, 1)]) == chi


def test_corpus_has_enough_models():
    models = corpus()
    assert len(models) >= 20
    assert sum(1 for m in models if m.generators) >= 10
    assert all(m.n <= 6 and sum(m.weights) == sum(m.degrees) <= 12 for m in models)
