"""Multivariate (Laurent) polynomials over Q and polynomial matrices.

Includes the determinantal machinery used by the jump-loci and 3-manifold
code: minors, Bareiss determinants, Pfaffians, initial forms, the shift
``t -> x + 1`` to the identity of the torus, and the exact test for
``f(exp(lambda x)) == 0``.

Tangent cones are insensitive to multiplication by monomials (those are units
near the identity of the torus), so Laurent inputs are cleared to ordinary
polynomials by the smallest monomial that makes every exponent non-negative.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exprparse import ExpressionError, Semantics, format_fraction, parse_expression
from .qlinalg import QMatrix, q

ZERO = Fraction(0)


def _grlex_key(e):
    return (sum(e), e)


class MultiPoly:
    """Polynomial in ``nvars`` variables; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("nvars", "terms", "laurent", "_hash")

    def __init__(self, nvars: int, terms=None, laurent: bool = False):
        self.nvars = nvars
        self.laurent = laurent
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have length {nvars}")
                if not laurent and any(a < 0 for a in e):
                    raise ValueError("negative exponent in a non-Laurent polynomial")
                c = q(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
            clean = {e: c for e, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, nvars, laurent=False):
        return cls(nvars, {}, laurent)

    @classmethod
    def constant(cls, c, nvars, laurent=False):
        return cls(nvars, {(0,) * nvars: c}, laurent)

    @classmethod
    def variable(cls, i, nvars, laurent=False):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, laurent)

    @classmethod
    def monomial(cls, exps, coeff=1, laurent=False):
        return cls(len(exps), {tuple(exps): coeff}, laurent)

    @classmethod
    def linear_form(cls, coeffs, laurent=False):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms, laurent)

    def _like(self, terms, laurent=None):
        return MultiPoly(self.nvars, terms, self.laurent if laurent is None else laurent)

    # basic protocol -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return MultiPoly.constant(q(other), self.nvars, self.laurent)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, ZERO) + c
        return self._like(t, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = q(other)
            return self._like({e: c * a for e, a in self.terms.items()})
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, ZERO) + c1 * c2
        return self._like(t, self.laurent or other.laurent)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.laurent or len(self.terms) != 1:
                raise ValueError("negative powers need a Laurent monomial")
            (e, c), = self.terms.items()
            return self._like({tuple(-a for a in e): 1 / c}) ** (-k)
        out = MultiPoly.constant(1, self.nvars, self.laurent)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return f"MultiPoly({self.format()!r})"

    # queries ----------------------------------------------------------------
    def sorted_terms(self):
        """Terms in graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return min(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, ZERO)

    def homogeneous_component(self, d: int) -> "MultiPoly":
        return self._like({e: c for e, c in self.terms.items() if sum(e) == d})

    def evaluate(self, point) -> Fraction:
        point = [q(p) for p in point]
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    if a < 0 and x == 0:
                        raise ZeroDivisionError("zero coordinate meets a negative exponent")
                    v *= x ** a
            total += v
        return total

    def leading_term(self):
        e, c = self.sorted_terms()[0]
        return e, c

    def divide_exact(self, other: "MultiPoly") -> "MultiPoly":
        """Return ``self / other``; raises ValueError if the division leaves a remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.laurent or other.laurent:
            raise ValueError("exact division is implemented for ordinary polynomials only")
        le, lc = other.leading_term()
        rem = MultiPoly(self.nvars, self.terms)
        quot: dict = {}
        while rem.terms:
            e, c = rem.leading_term()
            diff = tuple(a - b for a, b in zip(e, le))
            if any(a < 0 for a in diff):
                raise ValueError("division is not exact")
            qc = c / lc
            quot[diff] = quot.get(diff, ZERO) + qc
            rem = rem - MultiPoly(self.nvars, {diff: qc}) * other
        return MultiPoly(self.nvars, quot)

    def clear_laurent(self) -> tuple:
        """Multiply by the minimal monomial making all exponents >= 0.

        Returns ``(polynomial, monomial_exponents)``.
        """
        if not self.terms:
            return MultiPoly(self.nvars), (0,) * self.nvars
        shift = tuple(max(0, -min(e[i] for e in self.terms)) for i in range(self.nvars))
        t = {tuple(a + s for a, s in zip(e, shift)): c for e, c in self.terms.items()}
        return MultiPoly(self.nvars, t), shift

    def format(self, names: Optional[Sequence[str]] = None, prefix: Optional[str] = None) -> str:
        if names is None:
            prefix = prefix or ("t" if self.laurent else "x")
            names = [f"{prefix}{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for name, a in zip(names, e):
                if a == 1:
                    mono.append(name)
                elif a:
                    mono.append(f"{name}^{a}")
            body = "*".join(mono)
            mag = abs(c)
            if not body:
                s = format_fraction(mag)
            elif mag == 1:
                s = body
            else:
                s = f"{format_fraction(mag)}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    __str__ = format


def parse_poly(text: str, nvars: Optional[int] = None, laurent: Optional[bool] = None) -> MultiPoly:
    """Parse a literal such as ``(t1+t2)*(t1*t2+1) - 4*t1*t2``.

    Variables are ``x1..xn`` or ``t1..tn`` (one family per literal).  ``t``
    variables produce a Laurent polynomial unless ``laurent`` says otherwise.
    """
    import re

    names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text))
    prefixes = set()
    max_idx = 0
    for nm in names:
        m = re.fullmatch(r"([xt])([1-9][0-9]*)", nm)
        if not m:
            raise ExpressionError(f"unknown variable {nm!r} (use x1..xn or t1..tn)", text)
        prefixes.add(m.group(1))
        max_idx = max(max_idx, int(m.group(2)))
    if len(prefixes) > 1:
        raise ExpressionError("mixing x and t variables in one polynomial", text)
    n = max_idx if nvars is None else nvars
    if max_idx > n:
        raise ExpressionError(f"variable index {max_idx} exceeds {n} variables", text)
    if laurent is None:
        laurent = prefixes == {"t"}

    def name(nm):
        return MultiPoly.variable(int(nm[1:]) - 1, n, laurent)

    sem = Semantics(
        name=name,
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        scale=lambda c, a: a * c,
        lift=lambda c: MultiPoly.constant(c, n, laurent),
        power=lambda a, k: a ** k,
    )
    out = parse_expression(text, sem)
    if isinstance(out, Fraction):
        out = MultiPoly.constant(out, n, laurent)
    return out


def shift_to_origin(p: MultiPoly) -> MultiPoly:
    """Substitute ``t_i -> x_i + 1`` and expand (Laurent inputs are cleared first)."""
    if p.laurent:
        p, _ = p.clear_laurent()
    n = p.nvars
    shifted = [MultiPoly.variable(i, n) + 1 for i in range(n)]
    out = MultiPoly.zero(n)
    cache: dict = {}
    for e, c in p.terms.items():
        term = MultiPoly.constant(c, n)
        for i, a in enumerate(e):
            if a:
                key = (i, a)
                if key not in cache:
                    cache[key] = shifted[i] ** a
                term = term * cache[key]
        out = out + term
    return out


def initial_form(p: MultiPoly) -> MultiPoly:
    """Lowest-degree homogeneous component of a nonzero ordinary polynomial."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no initial form")
    if p.laurent and any(a < 0 for e in p.terms for a in e):
        raise ValueError("initial forms are defined for ordinary polynomials")
    return MultiPoly(p.nvars, p.homogeneous_component(p.min_degree()).terms)


def exp_direction_vanishes(f: MultiPoly, x) -> bool:
    """True iff ``f(exp(lambda*x_1), ..., exp(lambda*x_n))`` vanishes identically.

    The exponentials ``exp(lambda*s)`` for distinct rational ``s`` are linearly
    independent functions of lambda, so it suffices to group the terms
    ``c_a t^a`` by the exact value ``<a, x>`` and require each group to sum to 0.
    """
    x = [q(v) for v in x]
    if len(x) != f.nvars:
        raise ValueError(f"direction has {len(x)} coordinates, expected {f.nvars}")
    groups: dict = {}
    for e, c in f.terms.items():
        key = sum((a * v for a, v in zip(e, x)), ZERO)
        groups[key] = groups.get(key, ZERO) + c
    return all(v == 0 for v in groups.values())


# ---------------------------------------------------------------------------
# polynomial matrices


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    data: tuple  # tuple of tuples of MultiPoly
    nvars: int = field(default=0)

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("PolyMatrix data does not match its shape")
        for r in self.data:
            for p in r:
                if p.nvars != self.nvars:
                    raise ValueError("entries use inconsistent numbers of variables")

    @classmethod
    def from_rows(cls, rows, nvars: int, cols: Optional[int] = None) -> "PolyMatrix":
        rows = [tuple(_as_poly(p, nvars) for p in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows), nvars)

    @classmethod
    def zeros(cls, rows, cols, nvars):
        z = MultiPoly.zero(nvars)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)), nvars)

    @classmethod
    def from_qmatrix(cls, M: QMatrix, nvars: int) -> "PolyMatrix":
        return cls.from_rows([[MultiPoly.constant(c, nvars) for c in r] for r in M.data], nvars, M.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows,
                          tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)),
                          self.nvars)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        z = MultiPoly.zero(self.nvars)
        data = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                s = z
                for k in range(self.cols):
                    a, b = self.data[i][k], other.data[k][j]
                    if a and b:
                        s = s + a * b
                row.append(s)
            data.append(tuple(row))
        return PolyMatrix(self.rows, other.cols, tuple(data), self.nvars)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols,
                          tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)),
                          self.nvars)

    def __neg__(self):
        return PolyMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data), self.nvars)

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.data for p in r)

    def is_skew(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.data[i][j] == -self.data[j][i]
                   for i in range(self.rows) for j in range(i, self.cols))

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix(len(rows), len(cols),
                          tuple(tuple(self.data[i][j] for j in cols) for i in rows), self.nvars)

    def delete(self, i: int, j: int) -> "PolyMatrix":
        """Drop row ``i`` and column ``j`` (0-based)."""
        return self.submatrix([r for r in range(self.rows) if r != i],
                              [c for c in range(self.cols) if c != j])

    def evaluate(self, point) -> QMatrix:
        return QMatrix(self.rows, self.cols,
                       tuple(tuple(p.evaluate(point) for p in r) for r in self.data))

    def apply(self, v) -> tuple:
        """Multiply by a column vector of polynomials."""
        z = MultiPoly.zero(self.nvars)
        out = []
        for r in self.data:
            s = z
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def format(self, prefix="x") -> list:
        return [[p.format(prefix=prefix) for p in r] for r in self.data]


def _as_poly(p, nvars) -> MultiPoly:
    if isinstance(p, MultiPoly):
        return p
    return MultiPoly.constant(q(p), nvars)


def det(M: PolyMatrix) -> MultiPoly:
    """Determinant by fraction-free (Bareiss) elimination with exact division.

    Matrices up to 4x4 are expanded directly; polynomial division costs more
    than the few products involved there.
    """
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n <= 4:
        return det_cofactor(M)
    a = [list(r) for r in M.data]
    sign = 1
    prev = MultiPoly.constant(1, M.nvars)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(M.nvars)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.divide_exact(prev) if not prev.is_constant() else num * (1 / prev.constant_term())
        prev = a[k][k]
    out = a[n - 1][n - 1]
    return out if sign == 1 else -out


def det_cofactor(M: PolyMatrix) -> MultiPoly:
    """Determinant by cofactor expansion along the first row (reference oracle)."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return MultiPoly.constant(1, M.nvars)
    if n == 1:
        return M.data[0][0]
    total = MultiPoly.zero(M.nvars)
    for j in range(n):
        a = M.data[0][j]
        if a.is_zero():
            continue
        sub = det_cofactor(M.delete(0, j))
        total = total + (a * sub if j % 2 == 0 else -(a * sub))
    return total


def minors(M: PolyMatrix, k: int) -> list:
    """All ``k x k`` minors, ordered lexicographically by (row set, column set)."""
    if k < 0 or k > min(M.rows, M.cols):
        raise ValueError(f"minor size {k} out of range for a {M.rows}x{M.cols} matrix")
    out = []
    for rs in itertools.combinations(range(M.rows), k):
        for cs in itertools.combinations(range(M.cols), k):
            out.append(det(M.submatrix(rs, cs)))
    return out


class PfaffianError(ValueError):
    pass


def pfaffian(M: PolyMatrix) -> MultiPoly:
    """Pfaffian with ``pf([[0, a], [-a, 0]]) = a``, expanded along the first row."""
    if M.rows != M.cols:
        raise PfaffianError("Pfaffian of a non-square matrix")
    if M.rows % 2:
        raise PfaffianError("Pfaffian of an odd-size matrix")
    if not M.is_skew():
        raise PfaffianError("matrix is not skew-symmetric")
    return _pf(M)


def _pf(M: PolyMatrix) -> MultiPoly:
    n = M.rows
    if n == 0:
        return MultiPoly.constant(1, M.nvars)
    total = MultiPoly.zero(M.nvars)
    for j in range(1, n):
        a = M.data[0][j]
        if a.is_zero():
            continue
        keep = [r for r in range(n) if r not in (0, j)]
        sub = _pf(M.submatrix(keep, keep))
        term = a * sub
        total = total + (term if j % 2 == 1 else -term)
    return total
