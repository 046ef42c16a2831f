import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cdgalab.cdga.build import exterior_algebra, wedge_of_circles
from cdgalab.cdga.ops import change_basis, twisted_betti
from cdgalab.jumploci.aomoto import aomoto, alexander_presentation
from cdgalab.jumploci.minimal import hirsch_tower, one_minimal_stage
from cdgalab.jumploci.resonance import (
    check_rank_loci, in_loci, resonance_member, resonance_rank_loci, twisted_dim,
)
from cdgalab.jumploci.sampling import sample_points
from cdgalab.jumploci.tcone import exp_tangent_cone_report, probe_directions, tangent_cone_hypersurface
from cdgalab.lie.presentation import holonomy, nilpotent_quotient
from cdgalab.polyalg import MultiPoly, parse_poly
from cdgalab.qlinalg import QMatrix, rank
from cdgalab.threemfd import ThreeForm, pd_algebra_from_3form

from helpers import fixture, hirsch_resonance_mismatches, random_cdga, random_vector, tensor_resonance_mismatches
from oracles import free_lie_dims

F = Fraction
EX_FINITE = "(t1+t2)*(t1*t2+1) - 4*t1*t2"


def heisenberg_cohomology():
    return pd_algebra_from_3form(ThreeForm(2, {}))


def test_nonhomogeneous_aomoto_matrices():
    C = aomoto(fixture("ex106.cdga"))
    assert C.nvars == 1
    assert C.dual(2).format() == [["0"], ["x1 - 1"]]
    assert C.dual(1).format() == [["x1", "0"]]


def test_circle_and_torus_complexes():
    assert aomoto(exterior_algebra(["a"])).matrices[0].format() == [["x1"]]
    C = aomoto(fixture("torus2-cohomology.cdga"))
    assert (C.matrices[1] @ C.matrices[0]).is_zero()
    assert C.matrices[0].format() == [["x1"], ["x2"]]


@settings(max_examples=40)
@given(st.randoms(use_true_random=False))
def test_aomoto_squares_to_zero(rng):
    C = aomoto(random_cdga(rng), check=False)
    for a, b in zip(C.matrices, C.matrices[1:]):
        if a.cols and b.rows:
            assert (b @ a).is_zero()


def test_nonhomogeneous_presentation_and_loci():
    A = fixture("ex106.cdga")
    P = alexander_presentation(A)
    assert [p.format() for p in P.fitting_ideal(0)] == ["x1 - 1"]
    members = {w: resonance_member(A, (F(w),), 1, 1) for w in range(-2, 4)}
    assert members == {-2: False, -1: False, 0: True, 1: True, 2: False, 3: False}
    loci = resonance_rank_loci(A, 1, 1)
    assert in_loci(loci, (F(0),)) and in_loci(loci, (F(1),)) and not in_loci(loci, (F(1, 2),))
    # the support of B(A) misses the origin
    assert P.cokernel_dim_at((F(1),)) == 1 and P.cokernel_dim_at((F(2),)) == 0


def test_degree_zero_resonance_is_origin():
    for A in (fixture("heisenberg.cdga"), fixture("ex106.cdga"), exterior_algebra(["a", "b"])):
        n = aomoto(A).nvars
        assert resonance_member(A, (F(0),) * n, 0, 1)
        for p in sample_points(n, 5, seed=3, nonzero=True):
            assert not resonance_member(A, p, 0, 1)


def test_resonance_degree_out_of_range():
    with pytest.raises(ValueError):
        resonance_member(fixture("ex106.cdga"), (F(0),), 5, 1)


def test_torus_and_heisenberg_loci():
    torus = fixture("torus2-cohomology.cdga")
    assert resonance_rank_loci(torus, 1, 1) == [[MultiPoly.variable(1, 2), MultiPoly.variable(0, 2)]]
    assert resonance_rank_loci(heisenberg_cohomology(), 1, 1) == [[]]
    # the minimal model itself only resonates at the origin
    heis = fixture("heisenberg.cdga")
    assert all(not resonance_member(heis, p, 1, 1) for p in sample_points(2, 10, nonzero=True))
    assert resonance_member(heis, (F(0), F(0)), 1, 2)


@pytest.mark.parametrize("name,top", [("heisenberg.cdga", 2), ("ex106.cdga", 2), ("punctured-elliptic.cdga", 2),
                                      ("torus2-cohomology.cdga", 2), ("generalized-heisenberg-q2.cdga", 1)])
def test_rank_loci_agree_with_membership(name, top):
    # degree 2 of the five-dimensional algebra has 10x10 matrices, too many minors for a unit test
    A = fixture(name)
    for i in range(min(A.top_degree, top) + 1):
        for k in (1, 2):
            n = aomoto(A).nvars
            res = check_rank_loci(A, i, k, count=25, seed=5, extra_points=[(F(0),) * n])
            assert not res.disagreements
            assert len(res.rows) >= 25 or n < 2


def test_workers_do_not_change_results():
    A = fixture("punctured-elliptic.cdga")
    one = check_rank_loci(A, 1, 1, count=12, seed=2)
    many = check_rank_loci(A, 1, 1, count=12, seed=2, workers=4)
    assert [(r.point, r.member) for r in one.rows] == [(r.point, r.member) for r in many.rows]


@settings(max_examples=20)
@given(st.randoms(use_true_random=False))
def test_tensor_product_resonance(rng):
    assert tensor_resonance_mismatches(rng) == []


@settings(max_examples=20)
@given(st.randoms(use_true_random=False))
def test_hirsch_resonance(rng):
    assert hirsch_resonance_mismatches(rng) == []


@pytest.mark.parametrize("name", ["heisenberg.cdga", "ex106.cdga", "punctured-elliptic.cdga",
                                  "torus2-cohomology.cdga"])
def test_fitting_ideals_away_from_origin(name):
    A = fixture(name)
    P = alexander_presentation(A)
    n = P.nvars
    points = sample_points(n, 15, seed=9, nonzero=True) + [(F(1),) + (F(0),) * (n - 1)]
    for k in (1, 2):
        fit = P.fitting_ideal(k - 1)
        for p in points:
            vanishes = all(f.evaluate(p) == 0 for f in fit)
            assert vanishes == resonance_member(A, p, 1, k)


def test_pd_algebra_fitting_ideals():
    A = pd_algebra_from_3form(ThreeForm(3, {(0, 1, 2): 1}))
    P = alexander_presentation(A)
    for p in sample_points(3, 8, seed=1, nonzero=True):
        assert P.cokernel_dim_at(p) == twisted_dim(A, p, 1)


def test_isomorphic_algebras_have_same_resonance():
    rng = random.Random(4)
    A = fixture("punctured-elliptic.cdga")
    mats = []
    for i in range(A.top_degree + 1):
        n = A.dim(i)
        while True:
            M = QMatrix.from_rows([random_vector(rng, n) for _ in range(n)], n) if n else QMatrix.zeros(0, 0)
            if rank(M) == n:
                break
        mats.append(M if i else QMatrix.identity(1))
    B, phi = change_basis(A, mats)
    CA = aomoto(A)
    CB = aomoto(B)
    for p in sample_points(CB.nvars, 10, seed=2) + [(F(0),) * CB.nvars]:
        omega_b = CB.omega(p)
        omega_a = phi.apply(1, omega_b)
        for i in range(A.top_degree + 1):
            assert twisted_betti(B, omega_b, i) == twisted_betti(A, omega_a, i)
    assert CA.nvars == CB.nvars


def test_tangent_cones():
    assert tangent_cone_hypersurface(parse_poly(EX_FINITE)).format() == "x1^2 + x2^2"
    assert tangent_cone_hypersurface(parse_poly("t1 - 1")).format() == "x1"
    assert tangent_cone_hypersurface(parse_poly("(t1 - 1)*(t2 - 1)")).format() == "x1*x2"
    assert tangent_cone_hypersurface(parse_poly("t1 + 1")) is None


def test_exp_cone_of_finiteness_example():
    f = parse_poly(EX_FINITE)
    rep = exp_tangent_cone_report(f, [(1, 0), (0, 1), (1, 1), (0, 0)])
    assert rep.accepted == [(0, 0)]
    assert rep.inclusion_holds
    assert rep.rational_components is False
    assert rep.proper_containment
    probe = exp_tangent_cone_report(f, probe_directions(2, 100))
    assert len(probe.verdicts) == 100 and probe.accepted == [(0, 0)]


def test_exp_cone_accepts_subtorus_direction():
    rep = exp_tangent_cone_report(parse_poly("t1*t2 - 1"), [(1, -1), (1, 1)])
    assert rep.accepted == [(1, -1)]
    assert rep.initial_form.format() == "x1 + x2"
    assert rep.proper_containment is None


def test_exp_cone_empty_when_identity_missing():
    rep = exp_tangent_cone_report(parse_poly("t1 + t2"), [(0, 0), (1, 0)])
    assert rep.initial_form is None and rep.accepted == []


@pytest.mark.parametrize("name,s,dims", [
    ("heisenberg.cdga", 2, [2, 1]),
    ("heisenberg.cdga", 4, [2, 1, 0, 0]),
    ("torus2-cohomology.cdga", 3, [2, 0, 0]),
])
def test_minimal_stage(name, s, dims):
    st_ = one_minimal_stage(fixture(name), s)
    assert st_.dims == dims
    assert st_.dims == list(nilpotent_quotient(holonomy(fixture(name)), s, truncate_relations=True).layers)


def test_minimal_stage_of_wedge():
    for s in range(1, 5):
        st_ = one_minimal_stage(wedge_of_circles(2), s)
        assert st_.dims == free_lie_dims(2, s)
    assert hirsch_tower(wedge_of_circles(2), 3).dims == [2, 1, 2]


def test_minimal_stage_of_heisenberg_is_ce():
    st_ = one_minimal_stage(fixture("heisenberg.cdga"), 2)
    assert st_.stage.betti() == (1, 2, 2, 1)
