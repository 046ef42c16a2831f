"""Stages of the 1-minimal model, computed two independent ways.

The Lie route takes the Chevalley-Eilenberg algebra of a nilpotent quotient
of the holonomy Lie algebra.  The Hirsch route builds the tower directly:
starting from ``Lambda(H^1)``, each stage adds one degree-1 generator per
basis element of ``V_i = ker(H^2(M_{i-1}) -> H^2(A))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..cdga.algebra import FiniteCdga
from ..cdga.build import semifree
from ..cdga.liealg import chevalley_eilenberg
from ..lie.presentation import NilpotentQuotient, holonomy, nilpotent_quotient
from ..qlinalg import QMatrix, kernel_basis


@dataclass
class HirschTower:
    model: FiniteCdga  # generated in degree 1, truncated at degree 3
    dims: list  # dim V_1, ..., dim V_s
    images: list  # image in A^1 of each generator


def hirsch_tower(A: FiniteCdga, stages: int) -> HirschTower:
    """The tower ``M_1 -> ... -> M_s`` with a CDGA map to ``A``."""
    names, dgen, images = [], {}, []
    for v in A.cohomology(1).reps if A.top_degree >= 1 else []:
        names.append(f"y{len(names) + 1}")
        images.append(v)
    dims = [len(names)]
    M = _build(names, dgen)
    HA = A.cohomology(2) if A.top_degree >= 2 else None
    for _ in range(2, stages + 1):
        new = []
        if M.top_degree >= 2:
            HM = M.cohomology(2)
            phi = [_image_of_degree2(M, A, images, k) for k in range(M.dim(2))]
            cols = []
            for rep in HM.reps:
                target = _combine(phi, rep, A.dim(2)) if A.top_degree >= 2 else ()
                cols.append(HA.coordinates(target) if HA is not None and HA.betti else ())
            if HA is not None and HA.betti and cols:
                kernel = kernel_basis(QMatrix.from_columns(cols, HA.betti))
            else:
                kernel = [tuple(Fraction(int(i == j)) for j in range(HM.betti)) for i in range(HM.betti)]
            for coords in kernel:
                z = HM.representative(coords)
                target = _combine(phi, z, A.dim(2)) if A.top_degree >= 2 else ()
                w = HA.primitive(target) if HA is not None else None
                if w is None:
                    w = tuple(Fraction(0) for _ in range(A.dim(1)))
                new.append((z, w))
        F = M._cache["free"]
        for z, w in new:
            name = f"y{len(names) + 1}"
            dgen[name] = {F.monomials[2][k]: c for k, c in enumerate(z) if c}
            names.append(name)
            images.append(w)
        # monomials were keyed for the old generator count; pad them
        dgen = {nm: {m + (0,) * (len(names) - len(m)): c for m, c in d.items()} for nm, d in dgen.items()}
        dims.append(len(new))
        M = _build(names, dgen)
    return HirschTower(M, dims, images)


def _build(names, dgen) -> FiniteCdga:
    return semifree([(nm, 1) for nm in names], dgen, cap=3, name="hirsch stage")


def _image_of_degree2(M: FiniteCdga, A: FiniteCdga, images, k: int) -> tuple:
    if A.top_degree < 2:
        return ()
    m = M._cache["free"].monomials[2][k]
    i, j = [t for t, e in enumerate(m) if e]
    return A.multiply(1, images[i], 1, images[j])


def _combine(vectors, coeffs, n) -> tuple:
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                out[k] += c * a
    return tuple(out)


@dataclass
class MinimalStage:
    stage: FiniteCdga  # Chevalley-Eilenberg algebra of the nilpotent quotient
    dims: list  # LCS layers of the holonomy quotient
    quotient: NilpotentQuotient
    tower: HirschTower


class StageMismatchError(ArithmeticError):
    pass


def one_minimal_stage(A: FiniteCdga, s: int, cap: Optional[int] = None) -> MinimalStage:
    """Stage ``s`` of the 1-minimal model, with the two constructions compared.

    ``cap`` truncates the Chevalley-Eilenberg algebra; degree 3 is enough to
    compare ``H^1`` and ``H^2``.
    """
    if s < 1:
        raise ValueError("stage must be at least 1")
    nq = nilpotent_quotient(holonomy(A), s, truncate_relations=True)
    tower = hirsch_tower(A, s)
    if list(nq.layers) != tower.dims:
        raise StageMismatchError(
            f"holonomy layers {nq.layers} differ from Hirsch stage dims {tower.dims}")
    CE = chevalley_eilenberg(nq.structure, cap=cap)
    for i in (1, 2):
        if i <= min(CE.top_degree, tower.model.top_degree, 2):
            if CE.cohomology(i).betti != tower.model.cohomology(i).betti:
                raise StageMismatchError(f"H^{i} differs between the two stage-{s} models")
    return MinimalStage(CE, list(nq.layers), nq, tower)
