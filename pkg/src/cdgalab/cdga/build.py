"""Builders: free graded-commutative algebras and semifree CDGAs.

A semifree description lists generators with degrees, the differential of
each generator, and optionally homogeneous relations generating a dg-ideal.
It is expanded into multiplication tables up to the top degree, which is the
sum of the odd generator degrees unless a cap is given.  Even-degree
generators generate polynomial algebras, so they need an explicit cap.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..exprparse import ExpressionError, Semantics, parse_expression
from ..qlinalg import EchelonSpace, QMatrix, ZERO
from .algebra import (
    CdgaError, DifferentialDegreeError, FiniteCdga, check_axioms, sign,
)


class CapRequiredError(CdgaError):
    axiom = "degree-cap"


class IdealError(CdgaError):
    axiom = "dg-ideal"


class FreeGca:
    """Free graded-commutative algebra on named generators, truncated at ``top``."""

    def __init__(self, names: Sequence[str], degrees: Sequence[int], top: int):
        if len(names) != len(degrees):
            raise ValueError("one degree per generator")
        if any(d < 1 for d in degrees):
            raise ValueError("generators must have positive degree")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.top = top
        self.odd = tuple(d % 2 == 1 for d in degrees)
        self.monomials = self._enumerate()
        self.position = {}
        for deg, mons in enumerate(self.monomials):
            for k, m in enumerate(mons):
                self.position[m] = (deg, k)

    def _enumerate(self) -> list:
        by_degree = [[] for _ in range(self.top + 1)]

        def rec(i, current, deg):
            if i == len(self.names):
                by_degree[deg].append(tuple(current))
                return
            limit = 1 if self.odd[i] else (self.top - deg) // self.degrees[i]
            for e in range(limit + 1):
                nd = deg + e * self.degrees[i]
                if nd > self.top:
                    break
                current.append(e)
                rec(i + 1, current, nd)
                current.pop()

        rec(0, [], 0)
        for mons in by_degree:
            mons.sort(key=self._sort_key)
        return by_degree

    def _sort_key(self, m):
        letters = []
        for i, e in enumerate(m):
            letters.extend([i] * e)
        return tuple(letters)

    def degree(self, m) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomial_name(self, m) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def monomial_product(self, m1, m2):
        """Return ``(sign, monomial)`` or None when the product vanishes."""
        s = 0
        odd_after = 0
        for i in range(len(m1) - 1, -1, -1):
            if self.odd[i]:
                if m1[i] and m2[i]:
                    return None
                if m2[i]:
                    s += odd_after
                if m1[i]:
                    odd_after += 1
        m = tuple(a + b for a, b in zip(m1, m2))
        if self.degree(m) > self.top:
            return None
        return (-1 if s % 2 else 1), m

    def generator(self, i) -> dict:
        m = [0] * len(self.names)
        m[i] = 1
        return {tuple(m): Fraction(1)}

    def multiply(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for m1, c1 in u.items():
            for m2, c2 in v.items():
                r = self.monomial_product(m1, m2)
                if r is None:
                    continue
                s, m = r
                out[m] = out.get(m, ZERO) + s * c1 * c2
        return {m: c for m, c in out.items() if c}

    def parse(self, text: str) -> dict:
        index = {n: i for i, n in enumerate(self.names)}
        unit = (0,) * len(self.names)

        def name(nm):
            return self.generator(index[nm])

        def add(x, y):
            out = dict(x)
            for m, c in y.items():
                out[m] = out.get(m, ZERO) + c
            return {m: c for m, c in out.items() if c}

        def scale(c, x):
            return {m: c * a for m, a in x.items() if c * a}

        sem = Semantics(name=name, add=add, mul=self.multiply, scale=scale,
                        lift=lambda c: {unit: c} if c else {})
        out = parse_expression(str(text), sem)
        if isinstance(out, Fraction):
            return {unit: out} if out else {}
        return out

    def element_degree(self, u: dict) -> Optional[int]:
        degs = {self.degree(m) for m in u}
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop() if degs else None


def semifree(generators: Sequence, differential: dict, relations: Sequence = (),
             cap: Optional[int] = None, name: str = "", check: bool = True) -> FiniteCdga:
    """Expand ``(free algebra / relations, d)`` into a :class:`FiniteCdga`.

    ``generators`` is a list of ``(name, degree)`` pairs; ``differential``
    maps generator names to literals (missing names have ``d = 0``).
    Associativity, graded commutativity and the Leibniz rule hold by
    construction, so only ``d^2 = 0`` and closure of the ideal under ``d`` are
    checked.
    """
    names = [g[0] for g in generators]
    degrees = [int(g[1]) for g in generators]
    if len(set(names)) != len(names):
        raise ValueError("duplicate generator names")
    if cap is None:
        even = [n for n, d in zip(names, degrees) if d % 2 == 0]
        if even:
            raise CapRequiredError(
                f"even-degree generators {', '.join(even)} need an explicit degree cap", tuple(even))
        top = sum(degrees)
    else:
        if cap < 0:
            raise ValueError("degree cap must be non-negative")
        top = cap
    F = FreeGca(names, degrees, top)

    dgen = []
    for i, n in enumerate(names):
        text = differential.get(n, "0")
        try:
            v = F.parse(text) if not isinstance(text, dict) else text
        except ExpressionError:
            raise
        except KeyError as exc:
            raise ValueError(f"unknown generator {exc.args[0]!r} in d({n})") from None
        deg = F.element_degree(v)
        if deg is not None and deg != degrees[i] + 1:
            raise DifferentialDegreeError(f"d({n}) has degree {deg}, expected {degrees[i] + 1}", (n,))
        dgen.append(v)

    dcache: dict = {}

    def d_monomial(m) -> dict:
        if m in dcache:
            return dcache[m]
        letters = []
        for i, e in enumerate(m):
            letters.extend([i] * e)
        out: dict = {}
        prefix = {(0,) * len(m): Fraction(1)}
        prefix_deg = 0
        for pos, i in enumerate(letters):
            rest = [0] * len(m)
            for j in letters[pos + 1:]:
                rest[j] += 1
            suffix = {tuple(rest): Fraction(1)}
            term = F.multiply(F.multiply(prefix, dgen[i]), suffix)
            s = sign(prefix_deg)
            for mm, c in term.items():
                out[mm] = out.get(mm, ZERO) + s * c
            prefix = F.multiply(prefix, F.generator(i))
            prefix_deg += degrees[i]
        out = {mm: c for mm, c in out.items() if c}
        dcache[m] = out
        return out

    def d_elem(u: dict) -> dict:
        out: dict = {}
        for m, c in u.items():
            for mm, a in d_monomial(m).items():
                out[mm] = out.get(mm, ZERO) + c * a
        return {m: c for m, c in out.items() if c}

    # the ideal, degree by degree, in monomial coordinates
    spaces = [EchelonSpace(len(F.monomials[k])) for k in range(top + 1)]
    rels = []
    for r in relations:
        u = F.parse(r) if not isinstance(r, dict) else r
        if u:
            rels.append(u)
    for u in rels:
        deg = F.element_degree(u)
        for k in range(deg, top + 1):
            for m in F.monomials[k - deg]:
                prod = F.multiply(u, {m: Fraction(1)})
                if prod:
                    spaces[k].add({F.position[mm][1]: c for mm, c in prod.items()})

    def coords(u: dict, k: int) -> dict:
        return {F.position[m][1]: c for m, c in u.items()}

    for u in rels:
        du = d_elem(u)
        if du:
            k = F.element_degree(du)
            if not spaces[k].contains(coords(du, k)):
                raise IdealError(f"d({_fmt(F, u)}) is not in the ideal generated by the relations")

    kept = []
    for k in range(top + 1):
        piv = set(spaces[k].pivots())
        kept.append([j for j in range(len(F.monomials[k])) if j not in piv])
    new_index = [{j: t for t, j in enumerate(kept[k])} for k in range(top + 1)]

    def reduce_to_basis(u: dict, k: int) -> tuple:
        red = spaces[k].reduce(coords(u, k)) if len(spaces[k]) else coords(u, k)
        return tuple((new_index[k][j], c) for j, c in sorted(red.items()))

    while top > 0 and not kept[top]:
        top -= 1
    basis = [[F.monomial_name(F.monomials[k][j]) for j in kept[k]] for k in range(top + 1)]
    mult = {}
    for i in range(top + 1):
        for a, ja in enumerate(kept[i]):
            m1 = F.monomials[i][ja]
            for j in range(top + 1 - i):
                for b, jb in enumerate(kept[j]):
                    r = F.monomial_product(m1, F.monomials[j][jb])
                    if r is None:
                        continue
                    s, m = r
                    entries = reduce_to_basis({m: Fraction(s)}, i + j)
                    if entries:
                        mult[(i, a, j, b)] = entries
    diff = []
    for k in range(top + 1):
        rows = len(kept[k + 1]) if k < top else 0
        data = [[ZERO] * len(kept[k]) for _ in range(rows)]
        if k < top:
            for a, ja in enumerate(kept[k]):
                for t, c in reduce_to_basis(d_monomial(F.monomials[k][ja]), k + 1):
                    data[t][a] = c
        diff.append(QMatrix(rows, len(kept[k]), tuple(tuple(r) for r in data)))
    A = FiniteCdga(basis, mult, diff, name=name)
    if check:
        check_axioms(A, structure=False)
    A._cache["free"] = F
    return A


def _fmt(F: FreeGca, u: dict) -> str:
    parts = [f"{c}*{F.monomial_name(m)}" for m, c in sorted(u.items())]
    return " + ".join(parts)


def exterior_algebra(names: Sequence[str], degree: int = 1, name: str = "") -> FiniteCdga:
    """``Lambda(names)`` on odd generators of the given degree with ``d = 0``."""
    return semifree([(n, degree) for n in names], {}, name=name)


def truncated_exterior(names: Sequence[str], top: int, name: str = "") -> FiniteCdga:
    """Exterior algebra on degree-1 generators with everything above ``top`` killed."""
    return semifree([(n, 1) for n in names], {}, cap=top, name=name)


def wedge_of_circles(n: int) -> FiniteCdga:
    """``k + k^n`` in degree 1 with zero products."""
    return truncated_exterior([f"a{i + 1}" for i in range(n)], 1, name=f"wedge of {n} circles")
