"""The Aomoto complex of a CDGA over ``S = k[x_1..x_n]`` and the Alexander invariant.

Variables ``x_j`` are dual to the basis ``e_j`` of ``H^1(A) = Z^1(A)`` given
by the cohomology representatives.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from ..cdga.algebra import FiniteCdga
from ..polyalg import MultiPoly, PolyMatrix, minors
from ..qlinalg import complement_basis, rank, unit_vector
from .sampling import random_point


@dataclass
class AomotoComplex:
    algebra: FiniteCdga
    nvars: int
    cocycles: list  # e_1..e_n as vectors in A^1
    matrices: list  # matrices[i]: A^i (x) S -> A^{i+1} (x) S, rows indexed by A^{i+1}

    def dual(self, i: int) -> PolyMatrix:
        """``delta_i: A_i (x) S -> A_{i-1} (x) S``, the transpose of ``delta^{i-1}``."""
        return self.matrices[i - 1].transpose()

    def evaluate(self, point) -> list:
        return [M.evaluate(point) for M in self.matrices]

    def omega(self, point) -> tuple:
        """The 1-cocycle ``sum_j point_j e_j``."""
        n = self.algebra.dim(1)
        out = [Fraction(0)] * n
        for c, e in zip(point, self.cocycles):
            if c:
                for k, a in enumerate(e):
                    out[k] += Fraction(c) * a
        return tuple(out)


def aomoto(A: FiniteCdga, check: bool = True) -> AomotoComplex:
    """``delta^i(a) = sum_j e_j a x_j + d a`` as matrices of polynomials."""
    E = A.cohomology(1).reps if A.top_degree >= 1 else []
    n = len(E)
    mats = []
    for i in range(A.top_degree + 1):
        rows = A.dim(i + 1) if i < A.top_degree else 0
        cols = A.dim(i)
        terms = [[{} for _ in range(cols)] for _ in range(rows)]
        for j, e in enumerate(E):
            L = A.left_mult_matrix(1, e, i)
            exp = tuple(1 if t == j else 0 for t in range(n))
            for r in range(rows):
                for c in range(cols):
                    if L[r, c]:
                        terms[r][c][exp] = terms[r][c].get(exp, 0) + L[r, c]
        if rows:
            D = A.diff[i]
            for r in range(rows):
                for c in range(cols):
                    if D[r, c]:
                        z = (0,) * n
                        terms[r][c][z] = terms[r][c].get(z, 0) + D[r, c]
        data = tuple(tuple(MultiPoly(n, t) for t in row) for row in terms)
        mats.append(PolyMatrix(rows, cols, data, n))
    C = AomotoComplex(A, n, list(E), mats)
    if check:
        for i in range(len(mats) - 1):
            if mats[i + 1].rows and mats[i].cols and not (mats[i + 1] @ mats[i]).is_zero():
                raise ArithmeticError(f"delta^{i + 1} * delta^{i} is not zero")
    return C


@dataclass
class PresentationMatrix:
    """Rows are relations, columns generators, over ``k[x_1..x_n]``."""

    matrix: PolyMatrix
    row_labels: list
    col_labels: list

    @property
    def nvars(self) -> int:
        return self.matrix.nvars

    def cokernel_dim_at(self, point) -> int:
        if not self.matrix.cols:
            return 0
        if not self.matrix.rows:
            return self.matrix.cols
        return self.matrix.cols - rank(self.matrix.evaluate(point))

    def fitting_ideal(self, k: int) -> list:
        """Generators of the ``k``-th Fitting ideal (``[1]`` is the unit ideal, ``[]`` zero)."""
        size = self.matrix.cols - k
        if size <= 0:
            return [MultiPoly.constant(1, self.nvars)]
        if size > self.matrix.rows:
            return []
        return _dedupe(p for p in minors(self.matrix, size) if not p.is_zero())


def _monic(p: MultiPoly) -> MultiPoly:
    _, c = p.leading_term()
    return p if c == 1 else p * (1 / c)


def _dedupe(polys) -> list:
    """Drop repeats up to a nonzero scalar."""
    seen, out = set(), []
    for p in map(_monic, polys):
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _koszul_pairs(n):
    return list(itertools.combinations(range(n), 2))


def alexander_presentation(A: FiniteCdga, verify_points: int = 12, seed: int = 0) -> PresentationMatrix:
    """Block presentation of ``B(A) = H_1(A_* (x) S)``.

    Generators are ``E_2`` (pairs of cocycle basis elements) followed by
    ``U_1``, the dual of a pivot complement ``U^1`` of ``Z^1`` in ``A^1``.
    Relations are the Koszul rows of ``E_3`` followed by one row per basis
    functional ``phi`` of ``A_2``: ``phi(e_i e_j)`` in the ``E_2`` columns
    and ``phi(d u) + sum_j phi(e_j u) x_j`` in the ``U_1`` columns.

    The cokernel dimension is compared with ``H_1`` of the dual Aomoto complex
    at random nonzero rational points, where the two must agree.
    """
    C = aomoto(A)
    n = C.nvars
    E = C.cocycles
    dim1 = A.dim(1)
    U = complement_basis(E, [unit_vector(dim1, k) for k in range(dim1)], dim1)
    pairs = _koszul_pairs(n)
    triples = list(itertools.combinations(range(n), 3))
    pair_index = {p: k for k, p in enumerate(pairs)}
    ncols = len(pairs) + len(U)
    zero = MultiPoly.zero(n)

    def var(j):
        return MultiPoly.variable(j, n)

    rows = []
    for a, b, c in triples:
        row = [zero] * ncols
        row[pair_index[(b, c)]] = var(a)
        row[pair_index[(a, c)]] = -var(b)
        row[pair_index[(a, b)]] = var(c)
        rows.append(row)
    m2 = A.dim(2) if A.top_degree >= 2 else 0
    ee = {p: A.multiply(1, E[p[0]], 1, E[p[1]]) for p in pairs} if m2 else {}
    eu = [[A.multiply(1, E[j], 1, u) for j in range(n)] for u in U] if m2 else []
    du = [A.d(1, u) for u in U] if m2 else []
    for m in range(m2):
        row = [zero] * ncols
        for p, k in pair_index.items():
            row[k] = MultiPoly.constant(ee[p][m], n)
        for t in range(len(U)):
            terms = {}
            if du[t][m]:
                terms[(0,) * n] = du[t][m]
            for j in range(n):
                c = eu[t][j][m]
                if c:
                    terms[tuple(1 if s == j else 0 for s in range(n))] = c
            row[len(pairs) + t] = MultiPoly(n, terms)
        rows.append(row)
    col_labels = [f"E2:{_pair_label(p)}" for p in pairs] + [f"U1:{A.format_element(1, u)}" for u in U]
    row_labels = ([f"E3:{a + 1},{b + 1},{c + 1}" for a, b, c in triples]
                  + [f"A2:{nm}" for nm in (A.names(2) if m2 else ())])
    P = PresentationMatrix(PolyMatrix(len(rows), ncols, tuple(tuple(r) for r in rows), n),
                           row_labels, col_labels)
    if verify_points and n:
        rng = random.Random(seed)
        for _ in range(verify_points):
            p = random_point(rng, n, nonzero=True)
            expected = alexander_rank_at(C, p)
            got = P.cokernel_dim_at(p)
            if got != expected:
                raise ArithmeticError(
                    f"presentation disagrees with H_1 of the dual complex at {p}: {got} != {expected}")
    return P


def _pair_label(p) -> str:
    return f"{p[0] + 1},{p[1] + 1}"


def alexander_rank_at(C: AomotoComplex, point) -> int:
    """``dim ker delta_1(p) - rank delta_2(p)``, the fibre dimension of ``B(A)`` at ``p != 0``."""
    A = C.algebra
    mats = C.evaluate(point)
    r0 = rank(mats[0]) if A.dim(1) else 0
    r1 = rank(mats[1]) if len(mats) > 1 and mats[1].rows and mats[1].cols else 0
    return A.dim(1) - r0 - r1
