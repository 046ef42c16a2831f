"""Brute-force reference computations, deliberately independent of the engine."""
from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def _word_commutator(x, y):
    out = {}
    for u, a in x.items():
        for v, b in y.items():
            out[u + v] = out.get(u + v, 0) + a * b
            out[v + u] = out.get(v + u, 0) - a * b
    return {w: c for w, c in out.items() if c}


def free_lie_dims(n, max_degree):
    """``dim Lie_k(k^n)`` as the rank of all right-normed commutators in ``T(V)``."""
    dims = []
    for k in range(1, max_degree + 1):
        words = list(itertools.product(range(n), repeat=k))
        index = {w: i for i, w in enumerate(words)}
        rows = []
        for letters in words:
            x = {(letters[-1],): 1}
            for a in reversed(letters[:-1]):
                x = _word_commutator({(a,): 1}, x)
            row = [0] * len(words)
            for w, c in x.items():
                row[index[w]] = c
            rows.append(row)
        dims.append(sympy.Matrix(rows).rank())
    return dims


def sym_dims(n, max_degree):
    """Monomial count in ``n`` commuting variables."""
    return [sum(1 for _ in itertools.combinations_with_replacement(range(n), k)) for k in range(max_degree + 1)]


def dense_jacobi_holds(names_dim, constant):
    """Jacobi via full three-index sums over a callable ``constant(i, j, k)``."""
    n = names_dim

    def br(u, v):
        return [sum(u[i] * v[j] * constant(i, j, k) for i in range(n) for j in range(n)) for k in range(n)]

    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for a, b, c in itertools.product(range(n), repeat=3):
        x, y, z = basis[a], basis[b], basis[c]
        total = [p + q + r for p, q, r in zip(br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))]
        if any(total):
            return False
    return True


def holonomy_low_layers(A):
    """LCS layers 1 and 2 of the holonomy Lie algebra from the cokernel of the dual maps.

    Modulo the third LCS term the relation ideal is spanned by the relations
    themselves and the brackets of generators with their linear parts.
    """
    n = A.dim(1)
    m = A.dim(2) if A.top_degree >= 2 else 0
    pairs = list(itertools.combinations(range(n), 2))
    pidx = {p: k for k, p in enumerate(pairs)}
    rows = []
    linear = []
    for r in range(m):
        lin = [A.diff[1][r, i] for i in range(n)]
        quad = [A.basis_product(1, i, 1, j)[r] for i, j in pairs]
        rows.append(lin + quad)
        linear.append(lin)
    for lin in linear:
        for i in range(n):
            quad = [0] * len(pairs)
            for j, c in enumerate(lin):
                if c and i != j:
                    key = (min(i, j), max(i, j))
                    quad[pidx[key]] += c if i < j else -c
            rows.append([0] * n + quad)
    total = n + len(pairs)
    rank_all = sympy.Matrix(rows).rank() if rows else 0
    rank_lin = sympy.Matrix(linear).rank() if linear else 0
    layer1 = n - rank_lin
    layer2 = total - rank_all - layer1
    return layer1, layer2


def to_sympy(p, symbols):
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, exps):
            term *= s ** e
        expr += term
    return expr


def sympy_matrix(M, symbols):
    return sympy.Matrix(M.rows, M.cols, lambda r, c: to_sympy(M.data[r][c], symbols))
