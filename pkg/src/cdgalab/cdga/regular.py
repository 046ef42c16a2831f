"""q-regular sequences in graded-commutative algebras with zero differential."""
from __future__ import annotations

from typing import Sequence

from ..qlinalg import EchelonSpace, unit_vector
from .algebra import FiniteCdga


class RegularityInputError(ValueError):
    pass


def _quotient_rank_map(H: FiniteCdga, ideal: list, e_deg: int, e, j: int):
    """Injectivity of ``x -> e*x`` from ``(H/I)^j`` to ``(H/I)^{j+deg e}``."""
    src = ideal[j]
    tgt = ideal[j + e_deg] if j + e_deg <= H.top_degree else None
    n = H.dim(j)
    # representatives of the source quotient: non-pivot unit vectors
    piv = set(src.pivots())
    reps = [unit_vector(n, k) for k in range(n) if k not in piv]
    if not reps:
        return True
    if tgt is None:
        return False
    image = EchelonSpace(H.dim(j + e_deg))
    for r in reps:
        v = H.multiply(e_deg, e, j, r)
        red = tgt.reduce({k: c for k, c in enumerate(v) if c})
        if not red or not image.add(red):
            return False
    return True


def regular_sequence_check(H: FiniteCdga, elements: Sequence, q: int) -> bool:
    """Is ``elements`` a q-regular sequence?

    Each ``(degree, vector)`` element must be a non-zero divisor up to degree
    ``q - deg + 2`` in ``H`` modulo the ideal of the previous elements.
    """
    for i in range(H.top_degree):
        if not H.diff[i].is_zero():
            raise RegularityInputError("the algebra must have zero differential")
    checked = []
    for item in elements:
        if isinstance(item, str):
            deg, v = H.element(item)
        else:
            deg, v = item
        if deg <= 0 or deg % 2:
            raise RegularityInputError(f"element of degree {deg} must have positive even degree")
        if len(v) != H.dim(deg):
            raise RegularityInputError("element vector does not match its degree")
        checked.append((deg, tuple(v)))
    ideal = [EchelonSpace(H.dim(j)) for j in range(H.top_degree + 1)]
    for deg, e in checked:
        bound = q - deg + 2
        for j in range(0, min(bound, H.top_degree) + 1):
            if not _quotient_rank_map(H, ideal, deg, e, j):
                return False
        for j in range(H.top_degree + 1 - deg):
            for b in range(H.dim(j)):
                v = H.multiply(deg, e, j, unit_vector(H.dim(j), b))
                ideal[j + deg].add({k: c for k, c in enumerate(v) if c})
    return True
