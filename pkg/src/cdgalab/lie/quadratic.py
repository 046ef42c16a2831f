"""Quadratic algebras, quadratic duals and the PBW / Koszul series checks.

A quadratic algebra is ``T(V) / <R>`` with ``R`` a subspace of ``V (x) V``.
Tensors of degree ``k`` are dicts keyed by an integer index in base ``n``
(the first tensor factor is the most significant digit).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from ..cdga.algebra import FiniteCdga
from ..qlinalg import EchelonSpace, QMatrix, kernel_basis
from .presentation import holonomy, nilpotent_quotient


@dataclass
class QuadraticData:
    """Generators ``V = k^n`` and a basis of the relation space in ``V (x) V``."""

    n: int
    relations: list  # vectors of length n*n, entry i*n + j is the coefficient of v_i (x) v_j

    def relation_space(self) -> EchelonSpace:
        space = EchelonSpace(self.n * self.n)
        for r in self.relations:
            space.add({k: c for k, c in enumerate(r) if c})
        return space

    def same_relations(self, other: "QuadraticData") -> bool:
        if self.n != other.n:
            return False
        a, b = self.relation_space(), other.relation_space()
        return len(a) == len(b) and all(a.contains(row) for row in b.rows.values())


def quadratic_data(A: FiniteCdga) -> QuadraticData:
    """``V = A^1`` and ``I^2 = ker(V (x) V -> A^2)``, the quadratic closure of ``A``."""
    n, m = A.dim(1), A.dim(2)
    if m == 0:
        return QuadraticData(n, [_unit(n * n, k) for k in range(n * n)])
    cols = [A.basis_product(1, i, 1, j) for i in range(n) for j in range(n)]
    return QuadraticData(n, kernel_basis(QMatrix.from_columns(cols, m)))


def _unit(size: int, k: int) -> tuple:
    out = [Fraction(0)] * size
    out[k] = Fraction(1)
    return tuple(out)


def quadratic_dual(Q: QuadraticData) -> QuadraticData:
    """``A^! = T(V^dual) / <R^perp>`` under the pairing of ``(V^dual)^2`` with ``V^2``."""
    size = Q.n * Q.n
    if not Q.relations:
        return QuadraticData(Q.n, [_unit(size, k) for k in range(size)])
    perp = kernel_basis(QMatrix.from_rows(Q.relations, size))
    return QuadraticData(Q.n, perp)


def quadratic_algebra_dims(Q: QuadraticData, max_degree: int) -> list:
    """``dim (T(V)/<R>)_k`` for ``k = 0..max_degree``.

    The ideal is built degree by degree as ``I_k = I_{k-1} (x) V + V^{k-2} (x) R``.
    """
    n = Q.n
    dims = [1]
    if max_degree >= 1:
        dims.append(n)
    rels = [{k: c for k, c in enumerate(r) if c} for r in Q.relations]
    previous = EchelonSpace(n * n)
    for r in rels:
        previous.add(r)
    if max_degree >= 2:
        dims.append(n * n - len(previous))
    for k in range(3, max_degree + 1):
        size = n ** k
        space = EchelonSpace(size)
        for row in previous.rows.values():
            for j in range(n):
                space.add({idx * n + j: c for idx, c in row.items()})
        shift = n ** 2
        for prefix in range(n ** (k - 2)):
            for r in rels:
                space.add({prefix * shift + idx: c for idx, c in r.items()})
        dims.append(size - len(space))
        previous = space
    return dims[:max_degree + 1]


def quadratic_dual_dims(Q: QuadraticData, max_degree: int) -> list:
    return quadratic_algebra_dims(quadratic_dual(Q), max_degree)


def series_mul(a: Sequence, b: Sequence, N: int) -> list:
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a[:N + 1]):
        if x:
            for j, y in enumerate(b[:N + 1 - i]):
                out[i + j] += x * y
    return out


def one_minus_power(k: int, exponent: int, N: int) -> list:
    """``(1 - t^k)^exponent`` truncated at degree ``N``."""
    out = [Fraction(0)] * (N + 1)
    for m in range(exponent + 1):
        if m * k > N:
            break
        out[m * k] = Fraction((-1) ** m * comb(exponent, m))
    return out


def _is_one(series) -> bool:
    return series[0] == 1 and not any(series[1:])


@dataclass
class PbwReport:
    holonomy_dims: list  # dim h_k for k = 1..N
    product: list  # prod_k (1 - t^k)^{h_k}, truncated
    dual_hilbert: list  # Hilb of the quadratic dual, truncated
    ok: bool


def pbw_check(A: FiniteCdga, max_degree: int) -> PbwReport:
    """Check ``prod (1 - t^k)^{dim h_k} * Hilb(A^!, t) = 1`` up to ``t^N`` for a CGA ``A``."""
    if any(not D.is_zero() for D in A.diff):
        raise ValueError("the PBW identity is checked for algebras with zero differential")
    N = max_degree
    nq = nilpotent_quotient(holonomy(A), N)
    product = [Fraction(1)] + [Fraction(0)] * N
    for k, h in enumerate(nq.layers, start=1):
        product = series_mul(product, one_minus_power(k, h, N), N)
    hilb = [Fraction(d) for d in quadratic_dual_dims(quadratic_data(A), N)]
    return PbwReport(list(nq.layers), product, hilb, _is_one(series_mul(product, hilb, N)))


def koszul_check(A: FiniteCdga, max_degree: int) -> tuple:
    """``Hilb(qA, t) * Hilb(A^!, -t)`` up to ``t^N``; returns ``(series, equals_one)``.

    The identity holds for Koszul algebras; a failure only says ``A`` is not Koszul.
    """
    Q = quadratic_data(A)
    N = max_degree
    a = [Fraction(d) for d in quadratic_algebra_dims(Q, N)]
    b = [Fraction((-1) ** k * d) for k, d in enumerate(quadratic_dual_dims(Q, N))]
    s = series_mul(a, b, N)
    return s, _is_one(s)
