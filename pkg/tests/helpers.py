"""Shared builders for randomized tests."""
from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

from cdgalab.cdga.build import exterior_algebra, wedge_of_circles
from cdgalab.cdga.liealg import chevalley_eilenberg
from cdgalab.cli.modelfile import parse_model
from cdgalab.lie import free
from cdgalab.lie.presentation import LiePresentation, nilpotent_quotient
from cdgalab.threemfd import ThreeForm, pd_algebra_from_3form

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "cdgalab" / "fixtures"


def fixture(name):
    return parse_model(str(FIXTURES / name))[1]


def small_rational(rng, height=3):
    return Fraction(rng.randint(-height, height), rng.randint(1, 2))


def random_presentation(rng, ngens=None):
    n = ngens or rng.randint(2, 3)
    rels = []
    for _ in range(rng.randint(0, 2)):
        r = {}
        for i, j in itertools.combinations(range(n), 2):
            c = rng.randint(-2, 2)
            if c:
                r = free.add(r, free.bracket(free.generator(i), free.generator(j)), c)
        if rng.random() < 0.3:
            i, j = rng.sample(range(n), 2)
            r = free.add(r, free.bracket(free.generator(i), free.bracket(free.generator(i), free.generator(j))))
        if r:
            rels.append(r)
    return LiePresentation([f"x{i + 1}" for i in range(n)], rels)


def random_lie(rng, max_dim=5):
    """A nilpotent Lie algebra: a nilpotent quotient of a random presentation."""
    while True:
        P = random_presentation(rng)
        for cls in (3, 2, 1):
            nq = nilpotent_quotient(P, cls, truncate_relations=True)
            if nq.dim <= max_dim:
                return nq.structure


def random_cdga(rng):
    kind = rng.randrange(5)
    if kind == 0:
        return chevalley_eilenberg(random_lie(rng, 4))
    if kind == 1:
        return pd_algebra_from_3form(ThreeForm.random(rng.randint(0, 4), rng, density=0.7))
    if kind == 2:
        return exterior_algebra([f"a{i + 1}" for i in range(rng.randint(1, 3))])
    if kind == 3:
        return wedge_of_circles(rng.randint(1, 3))
    return fixture(rng.choice(["heisenberg.cdga", "ex106.cdga", "punctured-elliptic.cdga"]))


def random_vector(rng, n, height=3):
    return tuple(small_rational(rng, height) for _ in range(n))


def combination(coeffs, vectors, n):
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        for k, a in enumerate(v):
            out[k] += c * a
    return tuple(out)


def resonant_dims(A, omega):
    """Twisted Betti numbers of ``A`` at a 1-cocycle ``omega``."""
    from cdgalab.cdga.ops import twist, twisted_betti
    mats = twist(A, omega)
    return [twisted_betti(A, omega, i, mats) for i in range(A.top_degree + 1)]


def _h1_point(rng, C):
    # zero, a resonant-looking small point, or a random one
    r = rng.random()
    if r < 0.3:
        return tuple(Fraction(0) for _ in range(C.nvars))
    if r < 0.5:
        return tuple(Fraction(rng.randint(0, 1)) for _ in range(C.nvars))
    return random_vector(rng, C.nvars)


def _embed(T, vec_a=None, vec_b=None):
    _, _, pos = T._cache["tensor"]
    out = [Fraction(0)] * T.dim(1)
    for k, c in enumerate(vec_a or ()):
        out[pos[(1, k, 0, 0)][1]] += c
    for k, c in enumerate(vec_b or ()):
        out[pos[(0, 0, 1, k)][1]] += c
    return tuple(out)


def tensor_resonance_mismatches(rng, points=4):
    """Points where ``R^i_1(A (x) B)`` differs from the union of products of resonance sets."""
    from cdgalab.cdga.ops import tensor
    from cdgalab.jumploci.aomoto import aomoto
    A, B = random_cdga(rng), random_cdga(rng)
    T = tensor(A, B)
    CA, CB = aomoto(A, check=False), aomoto(B, check=False)
    bad = []
    for _ in range(points):
        pa, pb = _h1_point(rng, CA), _h1_point(rng, CB)
        da, db = resonant_dims(A, CA.omega(pa)), resonant_dims(B, CB.omega(pb))
        dt = resonant_dims(T, _embed(T, CA.omega(pa), CB.omega(pb)))
        for i in range(T.top_degree + 1):
            predicted = any(da[p] and db[i - p] for p in range(len(da)) if 0 <= i - p < len(db))
            if predicted != bool(dt[i]):
                bad.append((A.name, B.name, pa, pb, i))
    return bad


def hirsch_resonance_mismatches(rng, points=4):
    """Compare resonance of ``B`` and of a degree-1 Hirsch extension of it.

    With ``[tau] != 0`` the depth-``k`` sets in degree 1 agree for every ``k``;
    with ``tau`` exact, the extension is ``B`` times a circle.
    """
    from cdgalab.cdga.ops import hirsch_extension
    from cdgalab.jumploci.aomoto import aomoto
    while True:
        B = random_cdga(rng)
        if B.top_degree >= 2 and B.dim(1):
            break
    CB = aomoto(B, check=False)
    H2 = B.cohomology(2)
    bad = []
    if H2.betti:
        coeffs = random_vector(rng, H2.betti)
        if not any(coeffs):
            coeffs = (Fraction(1),) + coeffs[1:]
        tau = combination(coeffs, H2.reps, B.dim(2))
        E = hirsch_extension(B, [("e", 1)], [tau])
        for _ in range(points):
            p = _h1_point(rng, CB)
            db = resonant_dims(B, CB.omega(p))[1]
            de = resonant_dims(E, _embed(E, CB.omega(p)))[1]
            for k in (1, 2, 3):
                if (db >= k) != (de >= k):
                    bad.append((B.name, "nonzero", p, k))
    beta = random_vector(rng, B.dim(1))
    tau = B.d(1, beta)
    E = hirsch_extension(B, [("e", 1)], [tau])
    _, _, pos = E._cache["tensor"]
    shift = _embed(E, tuple(-c for c in beta))
    e_index = pos[(0, 0, 1, 0)][1]
    for _ in range(points):
        p = _h1_point(rng, CB)
        t = rng.choice([Fraction(0), small_rational(rng) or Fraction(1)])
        omega = list(_embed(E, CB.omega(p)))
        for k, c in enumerate(shift):
            omega[k] += t * c
        omega[e_index] += t
        db = resonant_dims(B, CB.omega(p)) + [0]
        de = resonant_dims(E, tuple(omega))
        for i in range(1, E.top_degree + 1):
            predicted = t == 0 and bool(db[i - 1] or db[i])
            if predicted != bool(de[i]):
                bad.append((B.name, "exact", p, t, i))
    return bad
