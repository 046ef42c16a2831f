"""Triple Massey products with their indeterminacy.

Sign convention: with ``a-bar = (-1)^{|a|} a``, a defining system for
``<u1, u2, u3>`` (degrees ``p, q, r``) solves

    d a02 = (-1)^p a01 a12,    d a13 = (-1)^q a12 a23

and the product is the class of ``(-1)^p a01 a13 + (-1)^{p+q-1} a02 a23``.
For degree-1 classes this is ``-[a01 a13 + a02 a23]``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cdga.algebra import CohomologyClass, FiniteCdga, sign
from .qlinalg import in_span, row_space_basis


class MasseyUndefinedError(ValueError):
    """``u1 u2`` or ``u2 u3`` is nonzero in cohomology."""


@dataclass
class MasseyResult:
    degrees: tuple
    defined: bool
    representative: Optional[CohomologyClass] = None
    coordinates: tuple = ()
    indeterminacy: list = field(default_factory=list)
    vanishes: bool = False
    cocycle: tuple = ()  # the cocycle produced by the defining system

    def format(self) -> str:
        if not self.defined:
            return "undefined"
        return self.representative.format()


def _perturb(rng, vec, basis, scale=3):
    out = list(vec)
    for b in basis:
        c = Fraction(rng.randint(-scale, scale), rng.randint(1, scale))
        if c:
            for k, x in enumerate(b):
                out[k] += c * x
    return tuple(out)


def _coboundary_basis(A: FiniteCdga, deg: int) -> list:
    if deg <= 0 or A.dim(deg - 1) == 0:
        return []
    return [c for c in A.diff[deg - 1].columns() if any(c)]


def indeterminacy(A: FiniteCdga, u1: CohomologyClass, u3: CohomologyClass, q: int) -> list:
    """Basis (in cohomology coordinates) of ``u1 H^{q+r-1} + H^{p+q-1} u3``."""
    p, r = u1.degree, u3.degree
    out_deg = p + q + r - 1
    if out_deg > A.top_degree:
        return []
    Hout = A.cohomology(out_deg)
    vecs = []
    d1 = q + r - 1
    if 0 <= d1 <= A.top_degree:
        for h in A.cohomology(d1).reps:
            vecs.append(Hout.coordinates(A.multiply(p, u1.representative, d1, h)))
    d2 = p + q - 1
    if 0 <= d2 <= A.top_degree:
        for h in A.cohomology(d2).reps:
            vecs.append(Hout.coordinates(A.multiply(d2, h, r, u3.representative)))
    return row_space_basis([v for v in vecs if any(v)], Hout.betti)


def triple_massey(A: FiniteCdga, u1: CohomologyClass, u2: CohomologyClass, u3: CohomologyClass,
                  seed: Optional[int] = None) -> MasseyResult:
    """Compute ``<u1, u2, u3>``; ``seed`` perturbs every choice made along the way."""
    p, q, r = u1.degree, u2.degree, u3.degree
    out_deg = p + q + r - 1
    rng = random.Random(seed) if seed is not None else None
    a01, a12, a23 = u1.representative, u2.representative, u3.representative
    if rng is not None:
        a01 = _perturb(rng, a01, _coboundary_basis(A, p))
        a12 = _perturb(rng, a12, _coboundary_basis(A, q))
        a23 = _perturb(rng, a23, _coboundary_basis(A, r))

    def solve(x_deg, rhs):
        # rhs lives in degree x_deg + 1
        if x_deg + 1 > A.top_degree:
            return ()
        if not any(rhs):
            prim = tuple(Fraction(0) for _ in range(A.dim(x_deg)))
        else:
            prim = A.cohomology(x_deg + 1).primitive(rhs)
            if prim is None:
                return None
        if rng is not None and x_deg <= A.top_degree:
            kernel = A.cohomology(x_deg).cocycles if A.dim(x_deg) else []
            prim = _perturb(rng, prim, kernel)
        return prim

    rhs02 = tuple(sign(p) * c for c in A.multiply(p, a01, q, a12))
    rhs13 = tuple(sign(q) * c for c in A.multiply(q, a12, r, a23))
    a02 = solve(p + q - 1, rhs02)
    a13 = solve(q + r - 1, rhs13)
    if a02 is None or a13 is None:
        raise MasseyUndefinedError(
            "u1*u2 is nonzero in cohomology" if a02 is None else "u2*u3 is nonzero in cohomology")
    if out_deg > A.top_degree:
        return MasseyResult((p, q, r), True, None, (), [], True)
    t1 = A.multiply(p, a01, q + r - 1, a13) if a13 != () else ()
    t2 = A.multiply(p + q - 1, a02, r, a23) if a02 != () else ()
    n = A.dim(out_deg)
    t1 = t1 or (Fraction(0),) * n
    t2 = t2 or (Fraction(0),) * n
    alpha = tuple(sign(p) * x + sign(p + q - 1) * y for x, y in zip(t1, t2))
    H = A.cohomology(out_deg)
    coords = H.coordinates(alpha)
    indet = indeterminacy(A, u1, u3, q)
    vanishes = in_span(coords, indet, H.betti) if H.betti else True
    rep = CohomologyClass(out_deg, H.representative(coords), A)
    return MasseyResult((p, q, r), True, rep, coords, indet, vanishes, alpha)


@dataclass
class ScanEntry:
    indices: tuple  # ((deg, k), (deg, k), (deg, k)) into the cohomology bases
    result: MasseyResult


def massey_obstruction_scan(A: FiniteCdga, max_degree: int, workers: int = 1) -> list:
    """Every defined, non-vanishing triple of basis classes with output degree ``<= max_degree``."""
    classes = []
    for deg in range(1, A.top_degree + 1):
        for k, c in enumerate(A.cohomology(deg).classes):
            classes.append(((deg, k), c))
    jobs = [(x, y, z) for x, y, z in itertools.product(classes, repeat=3)
            if x[1].degree + y[1].degree + z[1].degree - 1 <= min(max_degree, A.top_degree)]

    def run(job):
        (i1, c1), (i2, c2), (i3, c3) = job
        try:
            res = triple_massey(A, c1, c2, c3)
        except MasseyUndefinedError:
            return None
        if res.vanishes:
            return None
        return ScanEntry((i1, i2, i3), res)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    return [r for r in results if r is not None]
