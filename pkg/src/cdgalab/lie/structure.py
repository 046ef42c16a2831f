"""Centers, lower central series and associated graded Lie algebras."""
from __future__ import annotations

from fractions import Fraction

from ..cdga.liealg import LieError, LieStructure
from ..qlinalg import EchelonSpace, QMatrix, complement_basis, kernel_basis, solve_affine, unit_vector


class NotNilpotentError(LieError):
    pass


def center(g: LieStructure) -> list:
    """Basis of ``{v : [v, e_j] = 0 for all j}``."""
    n = g.dim
    if n == 0:
        return []
    rows = []
    for j in range(n):
        ej = unit_vector(n, j)
        # column i of ad_j is [e_i, e_j]
        cols = [g.bracket(unit_vector(n, i), ej) for i in range(n)]
        rows.extend(QMatrix.from_columns(cols, n).data)
    return kernel_basis(QMatrix.from_rows(rows, n))


def lower_central_series(g: LieStructure, max_steps: int = 0) -> list:
    """Bases of ``gamma_1 = g, gamma_{k+1} = [gamma_k, g]`` until the series stabilizes."""
    n = g.dim
    current = [unit_vector(n, i) for i in range(n)]
    series = [current]
    steps = max_steps or n + 1
    for _ in range(steps):
        if not current:
            break
        space = EchelonSpace(n)
        for u in current:
            us = [(i, a) for i, a in enumerate(u) if a]
            for j in range(n):
                out: dict = {}
                for i, a in us:
                    for k, c in g.sparse.get((i, j), ()):
                        out[k] = out.get(k, 0) + a * c
                if out:
                    space.add(out)
        nxt = []
        for p in space.pivots():
            row = [Fraction(0)] * n
            for k, c in space.rows[p].items():
                row[k] = c
            nxt.append(tuple(row))
        series.append(nxt)
        if len(nxt) == len(current):
            break
        current = nxt
    return series


def lcs_dims(g: LieStructure) -> list:
    """Layer dimensions ``dim gamma_k / gamma_{k+1}``."""
    s = lower_central_series(g)
    return [len(s[k]) - (len(s[k + 1]) if k + 1 < len(s) else 0) for k in range(len(s) - 1)]


def is_nilpotent(g: LieStructure) -> bool:
    return not lower_central_series(g)[-1]


def adapted_basis(g: LieStructure) -> list:
    """Layers ``C_1, C_2, ...`` with ``gamma_k = C_k + gamma_{k+1}``."""
    series = lower_central_series(g)
    if series[-1]:
        raise NotNilpotentError("lower central series stabilizes at a nonzero ideal")
    n = g.dim
    layers = []
    for k in range(len(series) - 1):
        layers.append(complement_basis(series[k + 1], series[k], n))
    return layers


def associated_graded(g: LieStructure, prefix: str = "") -> LieStructure:
    """``gr(g)`` for the lower central series, in a layer-adapted basis.

    A bracket of layers ``i`` and ``j`` is projected to layer ``i + j``; the
    component in deeper layers is dropped.
    """
    layers = adapted_basis(g)
    flat, weight = [], []
    for k, layer in enumerate(layers):
        for v in layer:
            flat.append(v)
            weight.append(k + 1)
    n = g.dim
    M = QMatrix.from_columns(flat, n)
    names = []
    for v, w in zip(flat, weight):
        label = g.format_vector(v)
        names.append(f"{prefix}{label}" if len(label.split()) == 1 else f"({label})")
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            br = g.bracket(flat[a], flat[b])
            if not any(br):
                continue
            coords = solve_affine(M, br)[0]
            target = weight[a] + weight[b]
            proj = tuple(c if weight[k] == target else 0 for k, c in enumerate(coords))
            if any(proj):
                brackets[(a, b)] = proj
    return LieStructure(names, brackets, weights=weight)
