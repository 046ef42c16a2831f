"""Resonance varieties: exact membership and rank-locus equations."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..cdga.algebra import FiniteCdga
from ..cdga.ops import twisted_betti
from ..polyalg import minors
from .aomoto import AomotoComplex, _dedupe, aomoto
from .sampling import sample_points


def _check_degree(A: FiniteCdga, i: int):
    if not 0 <= i <= A.top_degree:
        raise ValueError(f"degree {i} is outside 0..{A.top_degree}")


def twisted_dim(A: FiniteCdga, point, i: int, C: Optional[AomotoComplex] = None) -> int:
    """``dim H^i(A, d + omega)`` for ``omega`` with H^1 coordinates ``point``."""
    _check_degree(A, i)
    C = C or aomoto(A, check=False)
    if len(point) != C.nvars:
        raise ValueError(f"point has {len(point)} coordinates, expected {C.nvars}")
    return twisted_betti(A, C.omega(point), i)


def resonance_member(A: FiniteCdga, point, i: int, k: int = 1, C: Optional[AomotoComplex] = None) -> bool:
    """Is ``dim H^i(A, d_omega) >= k``?"""
    return twisted_dim(A, point, i, C) >= k


def resonance_rank_loci(A: FiniteCdga, i: int, k: int = 1) -> list:
    """Equations for ``R^i_k(A)`` as a union of zero sets.

    ``omega`` is resonant iff ``rank delta^i + rank delta^{i-1} <= dim A^i - k``.
    Each split ``r + s = dim A^i - k`` contributes the ``(r+1)``-minors of
    ``delta^i`` together with the ``(s+1)``-minors of ``delta^{i-1}``.  An
    empty generator list means the whole space.
    """
    _check_degree(A, i)
    C = aomoto(A, check=False)
    budget = A.dim(i) - k
    if budget < 0:
        return []
    out_map = C.matrices[i]
    in_map = C.matrices[i - 1] if i > 0 else None
    loci = []
    for r in range(budget + 1):
        s = budget - r
        gens = _rank_at_most(out_map, r) + (_rank_at_most(in_map, s) if in_map is not None else [])
        if any(p.is_constant() for p in gens):
            continue
        gens = sorted(_dedupe(gens), key=lambda p: p.sorted_terms())
        if gens not in loci:
            loci.append(gens)
    # a locus containing another one adds nothing
    loci.sort(key=len)
    kept = []
    for g in loci:
        if not any(set(h) <= set(g) for h in kept):
            kept.append(g)
    return kept


def _rank_at_most(M, r: int) -> list:
    if M.rows == 0 or M.cols == 0 or r >= min(M.rows, M.cols):
        return []
    return [p for p in minors(M, r + 1) if not p.is_zero()]


def in_loci(loci: Sequence, point) -> bool:
    return any(all(p.evaluate(point) == 0 for p in gens) for gens in loci)


@dataclass
class SampleRow:
    point: tuple
    member: bool
    equations: bool

    @property
    def agrees(self) -> bool:
        return self.member == self.equations


@dataclass
class LociCheck:
    degree: int
    depth: int
    loci: list
    seed: int
    rows: list = field(default_factory=list)

    @property
    def disagreements(self) -> list:
        return [r for r in self.rows if not r.agrees]


def check_rank_loci(A: FiniteCdga, i: int, k: int = 1, count: int = 25, seed: int = 0,
                    extra_points: Sequence = (), workers: int = 1) -> LociCheck:
    """Compare the equations with exact membership on sampled and given points."""
    loci = resonance_rank_loci(A, i, k)
    C = aomoto(A, check=False)
    extra = [tuple(p) for p in extra_points]
    points = extra + sample_points(C.nvars, count, seed, exclude=extra)

    def run(p):
        return SampleRow(p, resonance_member(A, p, i, k, C), in_loci(loci, p))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, points))
    else:
        rows = [run(p) for p in points]
    return LociCheck(i, k, loci, seed, rows)


def format_loci(loci: Sequence, prefix: str = "x") -> list:
    return [[p.format(prefix=prefix) for p in gens] for gens in loci]
