"""Finite-dimensional Lie algebras, their Chevalley-Eilenberg CDGAs and flat connections."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..exprparse import ExpressionError, Semantics, parse_expression
from ..qlinalg import ZERO, unit_vector, zero_vector
from .algebra import FiniteCdga
from .build import semifree


class LieError(ValueError):
    pass


class JacobiError(LieError):
    def __init__(self, message, witness=()):
        self.witness = witness
        super().__init__(message)


class LieStructure:
    """Structure constants ``[e_i, e_j] = sum_k c[i][j][k] e_k`` on a named basis."""

    def __init__(self, names: Sequence[str], brackets: dict, weights: Optional[Sequence[int]] = None,
                 check: bool = True):
        self.names = tuple(names)
        self.dim = len(self.names)
        n = self.dim
        table = {}
        for (i, j), v in brackets.items():
            v = tuple(Fraction(c) for c in v)
            if len(v) != n:
                raise LieError("bracket vector has the wrong length")
            if i == j and any(v):
                raise LieError(f"[{self.names[i]},{self.names[i]}] must vanish")
            table[(i, j)] = v
        for (i, j), v in list(table.items()):
            neg = tuple(-c for c in v)
            if (j, i) in table:
                if table[(j, i)] != neg:
                    raise LieError(f"bracket of {self.names[i]} and {self.names[j]} is not antisymmetric")
            else:
                table[(j, i)] = neg
        # sparse: (i, j) -> ((k, c), ...)
        self.sparse = {key: tuple((k, c) for k, c in enumerate(v) if c)
                       for key, v in table.items() if any(v)}
        self.weights = tuple(weights) if weights is not None else None
        if check:
            self.check_jacobi()

    def constant(self, i: int, j: int, k: int) -> Fraction:
        for kk, c in self.sparse.get((i, j), ()):
            if kk == k:
                return c
        return ZERO

    def basis_bracket(self, i: int, j: int) -> tuple:
        out = [ZERO] * self.dim
        for k, c in self.sparse.get((i, j), ()):
            out[k] = c
        return tuple(out)

    @classmethod
    def from_literals(cls, names: Sequence[str], brackets: dict, **kw) -> "LieStructure":
        """``brackets`` maps ``"e1,e3"`` (or a pair) to a linear literal like ``"e4"``."""
        index = {nm: k for k, nm in enumerate(names)}
        table = {}
        for key, value in brackets.items():
            a, b = (s.strip() for s in key.split(",")) if isinstance(key, str) else key
            table[(index[a], index[b])] = parse_linear(value, names)
        return cls(names, table, **kw)

    @classmethod
    def abelian(cls, n: int, prefix: str = "e") -> "LieStructure":
        return cls([f"{prefix}{i + 1}" for i in range(n)], {})

    def bracket(self, u, v) -> tuple:
        out = [ZERO] * self.dim
        us = [(i, a) for i, a in enumerate(u) if a]
        vs = [(j, b) for j, b in enumerate(v) if b]
        for i, a in us:
            for j, b in vs:
                entries = self.sparse.get((i, j))
                if entries:
                    ab = a * b
                    for k, c in entries:
                        out[k] += ab * c
        return tuple(out)

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.dim, i)

    def _bracket_basis_with(self, i: int, entries) -> dict:
        out: dict = {}
        for j, a in entries:
            for k, c in self.sparse.get((i, j), ()):
                out[k] = out.get(k, ZERO) + a * c
        return out

    def check_jacobi(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    total: dict = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, x in self._bracket_basis_with(a, self.sparse.get((b, c), ())).items():
                            total[m] = total.get(m, ZERO) + x
                    if any(total.values()):
                        w = (self.names[i], self.names[j], self.names[k])
                        raise JacobiError(f"Jacobi identity fails on {w}", w)

    def is_abelian(self) -> bool:
        return not self.sparse

    def structure_constants(self) -> dict:
        return {(i, j): self.basis_bracket(i, j) for (i, j) in sorted(self.sparse) if i < j}

    def format_vector(self, v) -> str:
        parts = []
        for nm, c in zip(self.names, v):
            if c:
                coef = "" if abs(c) == 1 else f"{abs(c)}*"
                parts.append(("-" if c < 0 else "+", coef + nm))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, t in parts[1:]:
            out += f" {s} {t}"
        return out

    def __repr__(self):
        return f"<LieStructure dim={self.dim}>"


def parse_linear(text, names) -> tuple:
    index = {nm: k for k, nm in enumerate(names)}
    n = len(names)
    if isinstance(text, dict):
        out = [ZERO] * n
        for nm, c in text.items():
            out[index[nm]] += Fraction(c)
        return tuple(out)

    def name(nm):
        return unit_vector(n, index[nm])

    def mul(a, b):
        raise ExpressionError("Lie structure constants must be linear", str(text))

    out = parse_expression(str(text), Semantics(
        name=name, add=lambda a, b: tuple(x + y for x, y in zip(a, b)), mul=mul,
        scale=lambda c, a: tuple(c * x for x in a)))
    if isinstance(out, Fraction):
        if out:
            raise ExpressionError("bare number in a Lie bracket value", str(text))
        return zero_vector(n)
    return out


def chevalley_eilenberg(g: LieStructure, prefix: str = "a", cap: Optional[int] = None) -> FiniteCdga:
    """``Lambda(g^dual)`` with ``d a_k = sum_{i<j} c_ij^k a_i a_j``.

    The differential squares to zero exactly when Jacobi holds; the check is
    left to the CDGA validator so that a failure is reported as ``d^2 != 0``.
    """
    names = [f"{prefix}{i + 1}" for i in range(g.dim)]
    d: dict = {}
    for (i, j), entries in g.sparse.items():
        if i >= j:
            continue
        mono = [0] * g.dim
        mono[i] = mono[j] = 1
        mono = tuple(mono)
        for k, c in entries:
            target = d.setdefault(names[k], {})
            target[mono] = target.get(mono, ZERO) + c
    return semifree([(nm, 1) for nm in names], d, cap=cap, name="CE")


def maurer_cartan_check(A: FiniteCdga, g: LieStructure, omega) -> bool:
    """Does ``omega`` in ``A^1 (x) g`` satisfy ``d omega + 1/2 [omega, omega] = 0``?

    ``omega[i][k]`` is the coefficient of ``(A^1 basis i) (x) (g basis k)``.
    """
    rows = [tuple(Fraction(c) for c in r) for r in omega]
    if len(rows) != A.dim(1) or any(len(r) != g.dim for r in rows):
        raise ValueError(f"omega must be a {A.dim(1)} x {g.dim} array")
    n2 = A.dim(2)
    # total[m][k]: coefficient of (A^2 basis m) (x) (g basis k)
    total = [[ZERO] * g.dim for _ in range(n2)]
    if A.top_degree >= 1 and n2:
        D = A.diff[1]
        for i, wi in enumerate(rows):
            for m in range(n2):
                c = D[m, i]
                if c:
                    for k, x in enumerate(wi):
                        total[m][k] += c * x
    for i in range(A.dim(1)):
        for j in range(i + 1, A.dim(1)):
            prod = A.basis_product(1, i, 1, j)
            if not any(prod):
                continue
            br = g.bracket(rows[i], rows[j])
            for m, c in enumerate(prod):
                if c:
                    for k, x in enumerate(br):
                        total[m][k] += c * x
    return all(not any(r) for r in total)
