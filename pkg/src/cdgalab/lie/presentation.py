"""Finitely presented Lie algebras, nilpotent quotients and holonomy Lie algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..cdga.algebra import FiniteCdga
from ..cdga.liealg import LieError, LieStructure
from ..exprparse import ExpressionError, Semantics, format_fraction, parse_expression
from ..qlinalg import EchelonSpace
from . import free
from .structure import lcs_dims


class PresentationError(LieError):
    pass


class LiePresentation:
    """Generators with positive weights and relations given as Lie elements.

    Relations are stored as tensor-algebra dicts (see :mod:`.free`) and
    checked to be Lie polynomials.
    """

    def __init__(self, names: Sequence[str], relations: Sequence[dict],
                 weights: Optional[Sequence[int]] = None):
        self.names = tuple(names)
        self.ngens = len(self.names)
        self.weights = tuple(weights) if weights is not None else (1,) * self.ngens
        if len(self.weights) != self.ngens or any(w < 1 for w in self.weights):
            raise PresentationError("generator weights must be positive, one per generator")
        rels = []
        for r in relations:
            r = {tuple(w): Fraction(c) for w, c in r.items() if c}
            try:
                free.to_lyndon(r)
            except ValueError as exc:
                raise PresentationError(str(exc)) from None
            if r:
                rels.append(r)
        self.relations = rels

    @classmethod
    def parse(cls, names: Sequence[str], relations: Sequence[str], weights=None) -> "LiePresentation":
        index = {nm: i for i, nm in enumerate(names)}
        sem = Semantics(
            name=lambda nm: free.generator(index[nm]),
            add=free.add,
            mul=_no_product,
            scale=lambda c, x: free.scale(x, c),
            bracket=free.bracket,
        )
        rels = []
        for text in relations:
            out = parse_expression(text, sem)
            if isinstance(out, Fraction):
                if out:
                    raise ExpressionError("a relation cannot be a bare number", text)
                continue
            rels.append(out)
        return cls(names, rels, weights)

    def word_weight(self, w) -> int:
        return sum(self.weights[i] for i in w)

    def relation_degree(self, r: dict) -> int:
        return max(self.word_weight(w) for w in r)

    def format_relation(self, r: dict) -> str:
        coords = free.to_lyndon(r)
        items = sorted(coords.items(), key=lambda kv: (self.word_weight(kv[0]), kv[0]))
        return format_lie_combination(items, self.names)

    def formatted_relations(self) -> list:
        return [self.format_relation(r) for r in self.relations]


def _no_product(a, b):
    raise ValueError("use brackets [u,v] instead of products in Lie words")


def format_lie_combination(items, names) -> str:
    parts = []
    for w, c in items:
        label = free.format_tree(free.bracket_tree(w), names)
        mag = abs(c)
        coef = "" if mag == 1 else format_fraction(mag) + "*"
        parts.append(("-" if c < 0 else "+", coef + label))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


@dataclass
class NilpotentQuotient:
    presentation: LiePresentation
    max_class: int
    words: list  # Lyndon words forming the quotient basis
    structure: LieStructure
    layers: list  # dim gamma_k / gamma_{k+1}, k = 1..max_class
    ideal_dims: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.structure.dim

    def quotient_dims(self) -> list:
        """``dim L / gamma_{k+1}`` for ``k = 1..max_class``."""
        out, total = [], 0
        for d in self.layers:
            total += d
            out.append(total)
        return out

    def generator_images(self) -> list:
        """Coordinates of the generators in the quotient basis."""
        return self._gen_images


def nilpotent_quotient(P: LiePresentation, max_class: int, truncate_relations: bool = False) -> NilpotentQuotient:
    """``L / gamma_{N+1} L`` computed inside the weight-``<= N`` free Lie algebra.

    The relation span is closed under bracketing with generators (which gives
    the ideal in the truncation); the quotient basis consists of the Lyndon
    words that are not pivots, with low-weight columns eliminated first.
    Relations of weight above ``N`` are an error unless ``truncate_relations``
    is set, in which case their terms of weight above ``N`` are dropped.
    """
    N = max_class
    if N < 1:
        raise PresentationError("class must be at least 1")
    if not truncate_relations:
        for r in P.relations:
            if P.relation_degree(r) > N:
                raise PresentationError(
                    f"relation {P.format_relation(r)} has degree {P.relation_degree(r)} > {N}")
    words = [w for w in free.lyndon_words(P.ngens, N) if P.word_weight(w) <= N]
    words.sort(key=lambda w: (P.word_weight(w), len(w), w))
    index = {w: k for k, w in enumerate(words)}

    def truncate(x: dict) -> dict:
        return {w: c for w, c in x.items() if P.word_weight(w) <= N}

    def to_vec(x: dict) -> dict:
        return {index[w]: c for w, c in free.to_lyndon(truncate(x)).items()}

    def to_elem(v: dict) -> dict:
        return free.from_lyndon({words[k]: c for k, c in v.items()})

    ideal = EchelonSpace(len(words))
    queue = []
    for r in P.relations:
        v = to_vec(r)
        if ideal.add(v):
            queue.append(v)
    gens = [free.generator(i) for i in range(P.ngens)]
    while queue:
        v = queue.pop()
        x = to_elem(v)
        for g in gens:
            br = truncate(free.bracket(g, x))
            if not br:
                continue
            w = to_vec(br)
            if w and ideal.add(w):
                queue.append(w)
    piv = set(ideal.pivots())
    keep = [k for k in range(len(words)) if k not in piv]
    qindex = {k: t for t, k in enumerate(keep)}

    def quotient_coords(x: dict) -> tuple:
        red = ideal.reduce(to_vec(x)) if x else {}
        out = [Fraction(0)] * len(keep)
        for k, c in red.items():
            out[qindex[k]] = c
        return tuple(out)

    brackets = {}
    exps = [free.expand(words[k]) for k in keep]
    kw = [P.word_weight(words[k]) for k in keep]
    for a in range(len(keep)):
        for b in range(a + 1, len(keep)):
            if kw[a] + kw[b] > N:
                continue
            br = truncate(free.bracket(exps[a], exps[b]))
            if br:
                v = quotient_coords(br)
                if any(v):
                    brackets[(a, b)] = v
    names = [free.format_tree(free.bracket_tree(words[k]), P.names) for k in keep]
    weights = [P.word_weight(words[k]) for k in keep]
    S = LieStructure(names, brackets, weights=weights, check=False)
    layers = lcs_dims(S) if S.dim else []
    layers = (layers + [0] * N)[:N]
    nq = NilpotentQuotient(P, N, [words[k] for k in keep], S, layers)
    nq._gen_images = [quotient_coords(g) for g in gens]
    nq.ideal_dims = {"free": len(words), "ideal": len(ideal)}
    return nq


def evaluate_in(P: LiePresentation, r: dict, g: LieStructure, images: Sequence) -> tuple:
    """Image of a Lie element under ``x_i -> images[i]`` in the Lie algebra ``g``."""
    out = [Fraction(0)] * g.dim
    cache = {}

    def ev(tree):
        if isinstance(tree, int):
            return tuple(images[tree])
        key = tree
        if key not in cache:
            cache[key] = g.bracket(ev(tree[0]), ev(tree[1]))
        return cache[key]

    for w, c in free.to_lyndon(r).items():
        v = ev(free.bracket_tree(w))
        for k, a in enumerate(v):
            out[k] += c * a
    return tuple(out)


def holonomy(A: FiniteCdga, prefix: str = "x") -> LiePresentation:
    """Holonomy presentation: one relation per basis functional of ``A_2``.

    The relation for the functional dual to the ``m``-th basis element of
    ``A^2`` is ``sum_i phi(d a_i) x_i + sum_{i<j} phi(a_i a_j) [x_i, x_j]``.
    """
    n = A.dim(1)
    names = [f"{prefix}{i + 1}" for i in range(n)]
    rels = []
    for m in range(A.dim(2)):
        r: dict = {}
        if A.top_degree >= 2:
            D = A.diff[1]
            for i in range(n):
                c = D[m, i]
                if c:
                    r[(i,)] = r.get((i,), Fraction(0)) + c
        for i in range(n):
            for j in range(i + 1, n):
                c = A.basis_product(1, i, 1, j)[m] if A.dim(2) else 0
                if c:
                    r = free.add(r, free.bracket(free.generator(i), free.generator(j)), c)
        if r:
            rels.append(r)
    return LiePresentation(names, rels)
