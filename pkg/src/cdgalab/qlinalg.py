"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries.  Matrices are
dense and immutable; vectors are plain tuples of Fractions.  Pivoting always
takes the first nonzero entry (top-to-bottom, left-to-right) so that every
basis-dependent output is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(q(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def is_zero(v: Sequence[Fraction]) -> bool:
    return not any(v)


def vadd(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v) -> Vector:
    c = q(c)
    return tuple(c * a for a in v)


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def lincomb(coeffs, vectors, n: int) -> Vector:
    """Return sum(c_i * v_i) as a length-``n`` vector."""
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


@dataclass(frozen=True)
class QMatrix:
    """A dense ``rows x cols`` matrix of Fractions, stored row-major."""

    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("QMatrix data does not match its shape")

    @classmethod
    def from_rows(cls, rows, cols: Optional[int] = None) -> "QMatrix":
        rows = [vec(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns, rows: int) -> "QMatrix":
        columns = [vec(c) for c in columns]
        data = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, tuple(self.columns()))

    T = property(transpose)

    def apply(self, v) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} does not match {self.cols} columns")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), ZERO) for r in self.data)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        # row-by-row accumulation that skips zero entries; the CDGA matrices are sparse
        orows = [[(j, b) for j, b in enumerate(r) if b] for r in other.data]
        data = []
        for r in self.data:
            out = [ZERO] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in orows[k]:
                        out[j] += a * b
            data.append(tuple(out))
        return QMatrix(self.rows, other.cols, tuple(data))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return QMatrix(self.rows, self.cols,
                       tuple(vadd(a, b) for a, b in zip(self.data, other.data)))

    def scale(self, c) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(vscale(c, r) for r in self.data))

    def is_zero(self) -> bool:
        return all(is_zero(r) for r in self.data)

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return QMatrix(self.rows, self.cols + other.cols,
                       tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return QMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix(len(rows), len(cols),
                       tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def tolist(self) -> list:
        return [list(r) for r in self.data]


def _as_matrix(M) -> QMatrix:
    if isinstance(M, QMatrix):
        return M
    return QMatrix.from_rows(M)


def _rref_rows(rows: list, ncols: int):
    """In-place RREF on a list of mutable Fraction lists; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            for k in range(c, ncols):
                if prow[k]:
                    prow[k] *= inv
        nz = [k for k in range(c, ncols) if prow[k]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for k in nz:
                        row[k] -= f * prow[k]
        pivots.append(c)
        r += 1
    return pivots


def rref(M) -> tuple:
    """Reduced row-echelon form.

    Returns ``(R, pivots, rank)`` where ``pivots`` lists the pivot columns.
    """
    M = _as_matrix(M)
    rows = [list(r) for r in M.data]
    pivots = _rref_rows(rows, M.cols)
    R = QMatrix(M.rows, M.cols, tuple(tuple(r) for r in rows))
    return R, pivots, len(pivots)


def rank(M) -> int:
    M = _as_matrix(M)
    rows = [list(r) for r in M.data]
    return len(_rref_rows(rows, M.cols))


def _normalize_leading(v: list) -> Vector:
    lead = next((a for a in v if a), None)
    if lead is None or lead == 1:
        return tuple(v)
    return tuple(a / lead for a in v)


def kernel_basis(M) -> list:
    """Basis of ``{v : M v = 0}``; each vector has leading coordinate 1."""
    M = _as_matrix(M)
    R, pivots, _ = rref(M)
    pivset = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivset:
            continue
        v = [ZERO] * M.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R.data[i][f]
        basis.append(_normalize_leading(v))
    return basis


def solve_affine(M, b) -> Optional[tuple]:
    """Solve ``M x = b``.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent.
    """
    M = _as_matrix(M)
    b = vec(b)
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.rows}")
    rows = [list(r) + [bi] for r, bi in zip(M.data, b)]
    pivots = _rref_rows(rows, M.cols + 1)
    if pivots and pivots[-1] == M.cols:
        return None
    x = [ZERO] * M.cols
    for i, p in enumerate(pivots):
        x[p] = rows[i][M.cols]
    return tuple(x), kernel_basis(M)


def row_space_basis(vectors: Sequence, n: int) -> list:
    """RREF basis of the span of ``vectors`` (each of length ``n``)."""
    if not vectors:
        return []
    rows = [list(v) for v in vectors]
    pivots = _rref_rows(rows, n)
    return [tuple(rows[i]) for i in range(len(pivots))]


def span_rank(vectors: Sequence, n: int) -> int:
    if not vectors:
        return 0
    return len(_rref_rows([list(v) for v in vectors], n))


def in_span(v, basis: Sequence, n: int) -> bool:
    return span_rank(list(basis) + [v], n) == span_rank(basis, n)


def inverse(M) -> QMatrix:
    M = _as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("only square matrices can be inverted")
    n = M.rows
    rows = [list(r) + list(unit_vector(n, i)) for i, r in enumerate(M.data)]
    pivots = _rref_rows(rows, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return QMatrix(n, n, tuple(tuple(r[n:]) for r in rows))


def complement_basis(subspace: Sequence, ambient: Sequence, n: int) -> list:
    """Greedily pick vectors of ``ambient`` extending a basis of ``subspace``.

    The returned vectors together with ``subspace`` span the span of both.
    """
    chosen = []
    current = row_space_basis(list(subspace), n)
    r = len(current)
    for w in ambient:
        trial = current + [w]
        rr = span_rank(trial, n)
        if rr > r:
            chosen.append(tuple(w))
            current = row_space_basis(trial, n)
            r = rr
    return chosen


class EchelonSpace:
    """An incrementally grown subspace of ``Q^n`` kept in reduced echelon form.

    Reduction against the stored rows gives canonical coset representatives,
    which is what the quotient computations use.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: dict = {}  # pivot column -> row (dict col -> Fraction)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = {k: c for k, c in v.items() if c}
        # rows are fully reduced, so clearing one pivot never creates another
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if c:
                for k, a in self.rows[p].items():
                    nv = v.get(k, ZERO) - c * a
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; returns False if it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {k: a * inv for k, a in v.items()}
        for q_, row in self.rows.items():
            c = row.get(p)
            if c:
                for k, a in v.items():
                    nv = row.get(k, ZERO) - c * a
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[p] = v
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def pivots(self) -> list:
        return sorted(self.rows)
