import random
from fractions import Fraction

import pytest

from setlattice.instances import (
    heyde_a,
    heyde_b,
    no_solution_line,
    orthant_workspace,
    random_grid,
    random_parampoly,
    random_workspace,
)
from setlattice.kernel import Workspace, inf_family
from setlattice.setfun import ConcavePWL, ParamPolyFunction
from setlattice.vi import (
    BaseOutsideDomain,
    CandidateSpace,
    check_MVI_I,
    check_MVI_M,
    check_SVI_I,
    check_SVI_M,
    check_mvi_M,
    check_mvi_i,
    check_svi_M,
    check_svi_M2,
    check_svi_i,
    enrich_directions,
    enrich_space,
    implication_audit,
    infimizer_check,
    infimum_at_point_check,
    minimal_check,
    solution_check,
)

F = Fraction


@pytest.fixture
def ws():
    return orthant_workspace()


@pytest.fixture
def absdiag(ws):
    pieces = [((1,), 0), ((-1,), 0)]
    return ParamPolyFunction(
        ws, 1, [(-1, 0), (0, -1)], [ConcavePWL(pieces), ConcavePWL(pieces)]
    )


@pytest.fixture
def grid():
    return CandidateSpace.of([(-1,), (F(-1, 2),), (0,), (F(1, 2),), (1,)])


def test_svi_i_at_optimum_and_off_optimum(absdiag, grid, ws):
    assert check_svi_i(absdiag, (0,), grid, ws.directions).holds
    rep = check_svi_i(absdiag, (F(1, 2),), grid, ws.directions)
    assert not rep.holds
    assert any(w["x"] == (F(0),) for w in rep.witnesses)


def test_base_outside_domain(grid, ws):
    f = heyde_a()
    space = CandidateSpace.of([(0, 0), (1, 1)])
    with pytest.raises(BaseOutsideDomain):
        check_svi_i(f, (-1, 0), space, ws.directions)


def test_strict_set_checkers(absdiag, grid, ws):
    assert check_SVI_I(absdiag, (0,), grid).holds
    assert check_MVI_I(absdiag, (0,), grid).holds
    assert check_mvi_i(absdiag, (0,), grid, ws.directions).holds
    rep = check_MVI_I(absdiag, (0,), grid)
    assert rep.notes["membership_form_agrees"]
    assert not check_MVI_I(absdiag, (F(1, 2),), grid).holds


def test_minimality_checkers(absdiag, grid, ws):
    # 0 is the unique minimizer of the diagonal distance function
    assert check_svi_M(absdiag, (0,), grid, ws.directions).holds
    assert check_SVI_M(absdiag, (0,), grid).holds
    assert check_svi_M2(absdiag, (0,), grid, ws.directions).holds
    assert check_mvi_M(absdiag, (0,), grid, ws.directions).holds
    assert check_MVI_M(absdiag, (0,), grid).holds
    assert check_SVI_M(absdiag, (0,), grid).notes["intersection_form_agrees"]
    for name, rep in {
        "svi_M": check_svi_M(absdiag, (F(1, 2),), grid, ws.directions),
        "MVI_M": check_MVI_M(absdiag, (F(1, 2),), grid),
    }.items():
        assert not rep.holds, name


def test_svi_M_whole_space_guard(ws):
    f = ParamPolyFunction(ws, 1, [], [], name="whole")
    space = CandidateSpace.of([(0,), (1,)])
    rep = check_svi_M(f, (0,), space, ws.directions)
    assert rep.holds and rep.notes.get("guard") == "f(x0) = Z"


def test_infimum_conditions_consistent(absdiag, grid, ws):
    rep = infimum_at_point_check(absdiag, (0,), grid, ws.directions)
    assert all(rep.conditions.values()) and rep.consistent
    rep2 = infimum_at_point_check(absdiag, (F(1, 2),), grid, ws.directions)
    assert not rep2.conditions["a"] and rep2.consistent


def test_minimal_conditions_consistent(absdiag, grid, ws):
    rep = minimal_check(absdiag, (0,), grid, ws.directions)
    assert all(rep.conditions.values()) and rep.consistent
    rep2 = minimal_check(absdiag, (F(1, 2),), grid, ws.directions)
    assert not rep2.conditions["a"] and rep2.consistent


def test_heyde_a_every_domain_point_minimal():
    f = heyde_a()
    space = CandidateSpace.of(
        [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (F(1, 2), F(1, 2)), (0, -2), (3, 0)]
    )
    for x in space.points:
        if f.eval(x).is_empty:
            continue
        rep = minimal_check(f, x, space, f.workspace.directions)
        assert rep.conditions["a"], x
        assert rep.consistent


def test_heyde_a_corner_solution():
    f = heyde_a()
    corners = [(1, 1), (1, 2), (2, 1), (2, 2)]
    space = CandidateSpace.of(corners + [(F(3, 2), F(3, 2))])
    rep = solution_check(f, corners, space, f.workspace.directions)
    assert rep.is_solution
    assert rep.infimizer.translation_agrees


def test_heyde_b_only_right_endpoint_minimal():
    f = heyde_b()
    grid = CandidateSpace.of([(F(k, 4),) for k in range(5)])
    minimal = [
        x
        for x in grid.points
        if minimal_check(f, x, grid, f.workspace.directions).conditions["a"]
    ]
    assert minimal == [(F(1),)]


def test_no_solution_line_behaviour():
    f = no_solution_line()
    dirs = f.workspace.directions
    pts = [(F(k),) for k in range(6)]
    space = CandidateSpace.of(pts)
    assert infimizer_check(f, pts, space, dirs).is_infimizer
    assert infimizer_check(f, [(F(4),), (F(5),)], space, dirs).is_infimizer
    assert not infimizer_check(f, [(F(0),), (F(1),)], space, dirs).is_infimizer
    probe = CandidateSpace.of(pts + [(F(6),)])
    minimal = [
        x for x in space.points if minimal_check(f, x, probe, dirs).conditions["a"]
    ]
    assert minimal == []
    assert not solution_check(f, [(F(4),), (F(5),)], probe, dirs).is_solution


def test_dom_f_is_always_an_infimizer(ws, absdiag):
    space = CandidateSpace.of([(-1,), (0,), (2,)])
    rep = infimizer_check(absdiag, list(space.points), space, ws.directions)
    assert rep.is_infimizer


def test_infimizer_corollary_for_singleton():
    """A singleton translation is a plain argument shift; the reported
    strict-Stampacchia verdict must agree with the translated infimum over
    the same enriched probe space."""
    rng = random.Random(88)
    ws = orthant_workspace()
    for _ in range(10):
        f = random_parampoly(rng, ws, 1, with_domain=False)
        pts = random_grid(rng, 1, 5)
        space = CandidateSpace.of(pts)
        hull = inf_family(ws, [f.eval(x) for x in space.points])
        for m in space.points:
            rep = infimizer_check(f, [m], space, ws.directions)
            assert rep.is_infimizer == (f.eval(m) == hull)
            assert rep.translation_agrees
            assert rep.notes.get("corollary_consistent", True)


def test_enrichment_adds_breakpoints(ws, absdiag):
    space = CandidateSpace.of([(-1,), (1,)])
    enriched = enrich_space(absdiag, (F(-1, 2),), space, ws.directions)
    # the kink of |x| at 0 lies between the base and the right candidate
    assert (F(0),) in enriched.points
    dirs = enrich_directions(absdiag, (0,), enriched, ws.directions)
    assert len(dirs) >= len(ws.directions)


def test_audit_no_violations_on_small_random_corpus():
    rng = random.Random(424242)
    checked = 0
    for _ in range(12):
        ws = random_workspace(rng)
        xdim = rng.choice([1, 2])
        f = random_parampoly(rng, ws, xdim, max_normals=2, max_pieces=2)
        pts = random_grid(rng, xdim, 4)
        dom_pts = [x for x in pts if not f.eval(x).is_empty]
        if not dom_pts:
            continue
        x0 = rng.choice(dom_pts)
        audit = implication_audit(f, x0, CandidateSpace.of(pts), ws.directions)
        assert audit.violations == [], audit.matrix_text()
        checked += 1
    assert checked >= 6


def test_audit_on_oracle_is_inconclusive_not_violating():
    f = heyde_b()
    space = CandidateSpace.of([(F(k, 2),) for k in range(3)])
    audit = implication_audit(f, (F(1, 2),), space, f.workspace.directions)
    assert audit.violations == []
    assert not audit.exact


def test_audit_matrix_text(absdiag, ws):
    audit = implication_audit(
        absdiag, (0,), CandidateSpace.of([(-1,), (1,)]), ws.directions
    )
    text = audit.matrix_text()
    assert "implication" in text and "svi_I => SVI_I" in text


def test_one_dimensional_workspace_audit():
    w1 = Workspace(1, [(1,)], [(-1,)])
    f1 = ParamPolyFunction(w1, 1, [(-1,)], [ConcavePWL([((1,), 0), ((-1,), 0)])])
    space = CandidateSpace.of([(-1,), (F(-1, 2),), (0,), (1,)])
    audit = implication_audit(f1, (0,), space, w1.directions)
    assert audit.violations == [] and audit.reports["svi_I"].holds
    off = implication_audit(f1, (1,), space, w1.directions)
    assert off.violations == [] and not off.minimal.conditions["a"]


def test_implication_audit_for_set():
    from setlattice.vi import implication_audit_for_set

    w1 = Workspace(1, [(1,)], [(-1,)])
    f1 = ParamPolyFunction(w1, 1, [(-1,)], [ConcavePWL([((1,), 0), ((-1,), 0)])])
    space = CandidateSpace.of([(-1,), (0,), (1,)])
    # a set containing the minimizer is an infimizer: the translated audit
    # sees the infimum attained at the origin
    audit = implication_audit_for_set(f1, [(-1,), (1,)], space, w1.directions)
    assert audit.violations == []
    assert audit.infimum.conditions["a"]
    bad = implication_audit_for_set(f1, [(1,)], space, w1.directions)
    assert bad.violations == [] and not bad.infimum.conditions["a"]
