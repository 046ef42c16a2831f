import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cdgalab.cdga.algebra import DifferentialSquareError
from cdgalab.cdga.build import exterior_algebra, truncated_exterior, wedge_of_circles
from cdgalab.cdga.liealg import JacobiError, LieStructure, chevalley_eilenberg, maurer_cartan_check
from cdgalab.lie import free
from cdgalab.lie.presentation import (
    LiePresentation, PresentationError, evaluate_in, holonomy, nilpotent_quotient,
)
from cdgalab.lie.quadratic import (
    koszul_check, pbw_check, quadratic_algebra_dims, quadratic_data, quadratic_dual, quadratic_dual_dims,
)
from cdgalab.lie.structure import NotNilpotentError, associated_graded, center, lcs_dims

from helpers import fixture, random_cdga, random_lie, small_rational
from oracles import dense_jacobi_holds, free_lie_dims, holonomy_low_layers, sym_dims


def test_lyndon_counts_match_bruteforce():
    assert [len(b) for b in free.lyndon_basis(2, 5)] == free_lie_dims(2, 5) == [2, 1, 2, 3, 6]
    assert [len(b) for b in free.lyndon_basis(3, 3)] == free_lie_dims(3, 3)
    assert [len(b) for b in free.lyndon_basis(1, 4)] == [1, 0, 0, 0]
    assert len(free.lyndon_basis(3, 2)[1]) == 3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_quotient_gives_witt_numbers(n):
    P = LiePresentation([f"x{i + 1}" for i in range(n)], [])
    nq = nilpotent_quotient(P, 6)
    assert nq.layers == [free.witt_number(n, k) for k in range(1, 7)]


def test_witt_formula_against_bruteforce():
    assert [free.witt_number(2, k) for k in range(1, 6)] == free_lie_dims(2, 5)
    assert [free.witt_number(3, k) for k in range(1, 4)] == free_lie_dims(3, 3)


def test_standard_bracketing_has_word_as_leading_term():
    for w in free.lyndon_words(3, 5):
        x = free.expand(w)
        assert min(x) == w and x[w] == 1


def test_heisenberg_presentation_by_hand():
    P = LiePresentation.parse(["x1", "x2", "x3"], ["x3 + [x1,x2]", "[x1,x3]", "[x2,x3]"])
    nq = nilpotent_quotient(P, 4)
    assert nq.layers == [2, 1, 0, 0]
    assert nq.quotient_dims()[:3] == [2, 3, 3]


def test_abelianizing_relations():
    P = LiePresentation.parse(["x1", "x2", "x3"], ["[x1,x2]", "[x1,x3]", "[x2,x3]"])
    assert nilpotent_quotient(P, 4).layers == [3, 0, 0, 0]


def test_relation_degree_above_class():
    P = LiePresentation.parse(["x1", "x2"], ["[x1,[x1,x2]]"])
    with pytest.raises(PresentationError):
        nilpotent_quotient(P, 2)
    assert nilpotent_quotient(P, 2, truncate_relations=True).layers == [2, 1]


def test_holonomy_of_heisenberg():
    P = holonomy(fixture("heisenberg.cdga"))
    assert sorted(P.formatted_relations()) == sorted(["x3 + [x1,x2]", "[x1,x3]", "[x2,x3]"])
    nq = nilpotent_quotient(P, 2)
    assert nq.layers == [2, 1] and nq.dim == 3


def test_holonomy_of_exterior_and_wedge():
    for n in (2, 3):
        assert nilpotent_quotient(holonomy(truncated_exterior([f"a{i}" for i in range(n)], 2)), 3).layers == [n, 0, 0]
        assert nilpotent_quotient(holonomy(wedge_of_circles(n)), 4).layers == free_lie_dims(n, 4)


@settings(max_examples=40)
@given(st.randoms(use_true_random=False))
def test_holonomy_low_layers_match_cokernel(rng):
    A = random_cdga(rng)
    nq = nilpotent_quotient(holonomy(A), 2, truncate_relations=True)
    assert tuple(nq.layers) == holonomy_low_layers(A)


def test_quadratic_dual_of_exterior_is_symmetric():
    for n in (1, 2, 3):
        Q = quadratic_data(exterior_algebra([f"a{i}" for i in range(n)]))
        assert quadratic_dual_dims(Q, 5) == sym_dims(n, 5)


def test_quadratic_dual_of_zero_products_is_tensor_algebra():
    Q = quadratic_data(wedge_of_circles(2))
    assert quadratic_dual_dims(Q, 5) == [2 ** k for k in range(6)]


@settings(max_examples=30)
@given(st.randoms(use_true_random=False))
def test_double_dual(rng):
    Q = quadratic_data(random_cdga(rng))
    assert quadratic_dual(quadratic_dual(Q)).same_relations(Q)
    assert quadratic_algebra_dims(Q, 2)[2] == Q.n ** 2 - len(Q.relation_space())


@pytest.mark.parametrize("A", [wedge_of_circles(2), wedge_of_circles(3),
                               exterior_algebra(["a", "b"]), exterior_algebra(["a", "b", "c"])])
def test_pbw_reciprocal_identity(A):
    rep = pbw_check(A, 6)
    assert rep.ok


def test_pbw_series_for_free_case():
    rep = pbw_check(wedge_of_circles(2), 6)
    assert rep.product == [1, -2, 0, 0, 0, 0, 0]
    assert rep.dual_hilbert == [2 ** k for k in range(7)]


def test_koszul_spot_check():
    series, ok = koszul_check(exterior_algebra(["a", "b", "c"]), 6)
    assert ok and series[0] == 1


def test_pbw_rejects_nonzero_differential():
    with pytest.raises(ValueError):
        pbw_check(fixture("heisenberg.cdga"), 4)


def test_cornulier_centers():
    g = fixture("cornulier.lie")
    z = center(g)
    assert z == [(0, 0, 0, 0, 1)]
    G = associated_graded(g)
    zg = center(G)
    assert len(zg) == 2
    assert {G.names[v.index(1)] for v in zg} == {"e2", "e5"}


def test_center_small_cases():
    assert len(center(LieStructure.abelian(4))) == 4
    heis = LieStructure.from_literals(["e1", "e2", "e3"], {"e1,e2": "e3"})
    assert len(center(heis)) == 1
    assert lcs_dims(associated_graded(heis)) == [2, 1]
    ab = LieStructure.abelian(3)
    assert associated_graded(ab).structure_constants() == {}


def test_non_nilpotent_rejected():
    # sl2-like: [h,e]=2e, [h,f]=-2f, [e,f]=h
    g = LieStructure.from_literals(["h", "e", "f"], {"h,e": "2*e", "h,f": "-2*f", "e,f": "h"})
    with pytest.raises(NotNilpotentError):
        associated_graded(g)


def _perturb(g, rng):
    n = g.dim
    table = {k: list(v) for k, v in g.structure_constants().items()}
    i, j = sorted(rng.sample(range(n), 2))
    row = table.setdefault((i, j), [Fraction(0)] * n)
    row[rng.randrange(n)] += small_rational(rng) or 1
    return LieStructure(g.names, {k: tuple(v) for k, v in table.items()}, check=False)


def _ce_valid(g):
    try:
        chevalley_eilenberg(g)
    except DifferentialSquareError:
        return False
    return True


def _jacobi(g):
    try:
        g.check_jacobi()
    except JacobiError:
        return False
    return True


def test_ce_iff_jacobi_with_perturbations():
    rng = random.Random(11)
    failing = 0
    for _ in range(60):
        g = random_lie(rng, 5)
        if g.dim < 3:
            continue
        h = _perturb(g, rng)
        truth = dense_jacobi_holds(h.dim, h.constant)
        assert _jacobi(h) == truth == _ce_valid(h)
        failing += not truth
    assert failing >= 10


def test_ce_of_heisenberg_is_heisenberg_model():
    heis = LieStructure.from_literals(["e1", "e2", "e3"], {"e1,e2": "e3"})
    assert chevalley_eilenberg(heis).betti() == (1, 2, 2, 1)


@settings(max_examples=30)
@given(st.randoms(use_true_random=False))
def test_maurer_cartan_iff_relations_vanish(rng):
    A = random_cdga(rng)
    if A.dim(1) == 0:
        return
    P = holonomy(A)
    nq = nilpotent_quotient(P, 2, truncate_relations=True)
    g = nq.structure
    canonical = nq.generator_images()
    assert maurer_cartan_check(A, g, canonical)
    for omega in (canonical, [[small_rational(rng) for _ in range(g.dim)] for _ in range(A.dim(1))]):
        preserved = all(not any(evaluate_in(P, r, g, omega)) for r in P.relations)
        assert maurer_cartan_check(A, g, omega) == preserved
