from fractions import Fraction

import pytest

from setlattice import (
    MINUS_INF,
    PLUS_INF,
    NormalOutsideDualCone,
    Workspace,
    inf_family,
    sup_family,
)
from setlattice.extres import residual as ext_residual
from setlattice.kernel import feasible_with, mirror_facets


@pytest.fixture
def orthant():
    return Workspace(2, [(1, 0), (0, 1)], [(-1, 0), (0, -1), (-1, -1)])


@pytest.fixture
def ray_cone():
    # C = cl cone (0,1)^T, the ordering cone of the scalarization-gap example
    return Workspace(2, [(0, 1)])


def test_canonicalize_drops_redundant(orthant):
    s = orthant.upper_set([((-1, 0), -1), ((-1, 0), 0), ((0, -1), -2)])
    assert s.constraints == (((-1, 0), Fraction(-1)), ((0, -1), Fraction(-2)))
    assert s.vertices == ((Fraction(1), Fraction(2)),)
    assert set(s.rays) == {(1, 0), (0, 1)}


def test_canonicalize_detects_empty(ray_cone):
    s = ray_cone.upper_set([((1, 0), -1), ((-1, 0), -1)])
    assert s.is_empty


def test_no_constraints_is_whole_space(orthant):
    assert orthant.upper_set([]).is_whole


def test_normal_outside_dual_cone_rejected(orthant):
    with pytest.raises(NormalOutsideDualCone):
        orthant.upper_set([((1, 0), 3)])


def test_leq_examples(orthant):
    C = orthant.cone_set()
    a = orthant.translated_cone((1, 2))
    assert C.leq(a)
    assert not a.leq(C)
    assert a.leq(orthant.empty_set())
    p = orthant.translated_cone((1, 0))
    q = orthant.translated_cone((0, 1))
    assert not p.leq(q) and not q.leq(p)


def test_inf_family(orthant):
    a = orthant.translated_cone((1, 0))
    b = orthant.translated_cone((0, 1))
    hull = inf_family(orthant, [a, b])
    expected = orthant.upper_set([((-1, 0), 0), ((0, -1), 0), ((-1, -1), -1)])
    assert hull == expected
    assert inf_family(orthant, [a]) == a
    assert inf_family(orthant, []).is_empty


def test_sup_family(orthant):
    a = orthant.translated_cone((1, 0))
    b = orthant.translated_cone((0, 1))
    assert sup_family(orthant, [a, b]) == orthant.translated_cone((1, 1))
    assert sup_family(orthant, [a, orthant.empty_set()]).is_empty
    assert sup_family(orthant, []).is_whole


def test_add(orthant):
    a = orthant.translated_cone((1, 2))
    assert a.add(orthant.cone_set()) == a
    assert a.add(orthant.empty_set()).is_empty
    assert orthant.translated_cone((1, 0)).add(
        orthant.translated_cone((0, 1))
    ) == orthant.translated_cone((1, 1))


def test_scale(orthant):
    a = orthant.translated_cone((1, 2))
    assert a.scale(2) == orthant.translated_cone((2, 4))
    assert orthant.empty_set().scale(0) == orthant.cone_set()
    assert orthant.whole_space().scale(0) == orthant.cone_set()
    assert a.scale(1) == a
    with pytest.raises(Exception):
        a.scale(-1)


def test_residual_examples(orthant, ray_cone):
    a = orthant.translated_cone((1, 2))
    assert a.residual(orthant.cone_set()) == a
    assert a.residual(a) == orthant.cone_set()  # A ÷ A = 0+A
    # the scalarization-gap instance: A ÷ B = ∅ with finite scalar residuals
    A = ray_cone.cone_set()
    B = ray_cone.upper_set([((1, 0), 1), ((-1, 0), 1), ((0, -1), 0)])
    assert A.residual(B).is_empty
    values = {
        z: ext_residual(A.neg_support(z), B.neg_support(z))
        for z in [(1, 0), (-1, 0), (0, -1)]
    }
    assert values[(1, 0)].value == 1
    assert values[(-1, 0)].value == 1
    assert values[(0, -1)].value == 0
    # residuation against the empty / whole elements
    assert a.residual(orthant.empty_set()).is_whole
    assert orthant.empty_set().residual(a).is_empty
    assert orthant.whole_space().residual(a).is_whole


def test_recession(orthant):
    a = orthant.translated_cone((1, 2))
    assert a.recession() == orthant.cone_set()
    assert orthant.empty_set().recession().is_empty
    assert orthant.whole_space().recession().is_whole


def test_support(orthant, ray_cone):
    C = ray_cone.cone_set()
    assert C.support((-1, 0)) == Fraction(0)
    assert ray_cone.empty_set().support((-1, 0)) == MINUS_INF
    assert ray_cone.whole_space().support((-1, 0)) == PLUS_INF
    a = orthant.translated_cone((1, 2))
    assert a.neg_support((-1, -1)).value == 3


def test_contains_point(orthant):
    a = orthant.translated_cone((1, 2))
    assert a.contains_point((1, 2))
    assert a.contains_point((Fraction(3, 2), 5))
    assert not a.contains_point((0, 5))
    assert not orthant.empty_set().contains_point((0, 0))


def test_workspace_one_dimensional():
    w = Workspace(1, [(1,)])
    a = w.translated_cone((Fraction(3, 2),))
    assert a.vertices == ((Fraction(3, 2),),)
    assert a.rays == ((1,),)
    assert a.residual(w.cone_set()) == a
    zero_cone = Workspace(1, [])
    i1 = zero_cone.upper_set([((1,), 1), ((-1,), 1)])
    i2 = zero_cone.upper_set([((1,), Fraction(1, 2)), ((-1,), Fraction(1, 2))])
    assert i2.residual(i1).is_empty
    assert i1.residual(i2) == zero_cone.upper_set(
        [((1,), Fraction(1, 2)), ((-1,), Fraction(1, 2))]
    )


def test_json_round_trip(orthant):
    a = orthant.upper_set([((-1, 0), Fraction(-1, 2)), ((0, -1), -2), ((-1, -2), -3)])
    doc = a.to_json()
    assert orthant.from_json(doc) == a
    assert orthant.from_json(orthant.empty_set().to_json()).is_empty


def test_feasibility_helpers(orthant):
    cone = orthant.cone_set()
    mirrored = mirror_facets(cone)
    # the cone and its mirror meet only at the origin, which is feasible
    assert feasible_with(cone, mirrored)
    # a strictly shifted cone misses the mirrored cone entirely
    assert not feasible_with(orthant.translated_cone((1, 1)), mirrored)


def test_halfplane_and_line_sets(orthant):
    h = orthant.upper_set([((-1, -1), -1)])
    assert len(h.constraints) == 1
    assert h.contains_point((2, -1))
    assert not h.contains_point((0, 0))
    line_ws = Workspace(2, [(1, 0), (-1, 0)])  # C = the x-axis line
    s = line_ws.upper_set([((0, -1), -1)])
    assert s.contains_point((100, 2))
    rec = s.recession()
    assert rec.contains_point((5, 0)) and rec.contains_point((-5, 0))
