"""Finite commutative differential graded algebras.

A :class:`FiniteCdga` is stored by graded bases, a sparse multiplication table
and one differential matrix per degree.  Matrices follow the column
convention: ``diff[i]`` has ``dim A^{i+1}`` rows and ``dim A^i`` columns.
Products that would land above ``top_degree`` are zero; that is what a
finite model means here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..exprparse import ExpressionError, Semantics, format_fraction, parse_expression
from ..qlinalg import (
    QMatrix, ZERO, complement_basis, kernel_basis, rank, solve_affine, unit_vector,
    zero_vector,
)


class CdgaError(ValueError):
    """A violated CDGA axiom; ``witness`` names the basis tuple that shows it."""

    axiom = "cdga"

    def __init__(self, message: str, witness: tuple = ()):
        self.witness = witness
        super().__init__(message)


class ConnectivityError(CdgaError):
    axiom = "connected"


class UnitError(CdgaError):
    axiom = "unit"


class AssociativityError(CdgaError):
    axiom = "associative"


class CommutativityError(CdgaError):
    axiom = "graded-commutative"


class DifferentialDegreeError(CdgaError):
    axiom = "d-degree"


class DifferentialSquareError(CdgaError):
    axiom = "d-squared"


class LeibnizError(CdgaError):
    axiom = "leibniz"


def sign(n: int) -> int:
    return -1 if n % 2 else 1


class FiniteCdga:
    """Finite-dimensional CDGA; build through :func:`validate` or the builders."""

    def __init__(self, basis: Sequence[Sequence[str]], mult: dict, diff: Sequence[QMatrix],
                 name: str = ""):
        self.basis = tuple(tuple(b) for b in basis)
        self.top_degree = len(self.basis) - 1
        self.mult = mult  # (i, a, j, b) -> tuple of (k, coeff), only nonzero products
        self.diff = tuple(diff)
        self.name = name
        self._cache: dict = {}
        if len(self.diff) != len(self.basis):
            raise ValueError("need one differential matrix per degree")
        for i, D in enumerate(self.diff):
            target = self.dim(i + 1)
            if (D.rows, D.cols) != (target, self.dim(i)):
                raise ValueError(f"differential in degree {i} has the wrong shape")

    def dim(self, i: int) -> int:
        if 0 <= i <= self.top_degree:
            return len(self.basis[i])
        return 0

    def dims(self) -> tuple:
        return tuple(len(b) for b in self.basis)

    def total_dim(self) -> int:
        return sum(self.dims())

    def names(self, i: int) -> tuple:
        return self.basis[i] if 0 <= i <= self.top_degree else ()

    def index(self, name: str) -> tuple:
        """Return ``(degree, position)`` of a basis name."""
        lookup = self._cache.get("index")
        if lookup is None:
            lookup = {n: (d, k) for d, b in enumerate(self.basis) for k, n in enumerate(b)}
            self._cache["index"] = lookup
        return lookup[name]

    def unit(self) -> tuple:
        return unit_vector(1, 0)

    # products ---------------------------------------------------------------
    def basis_product(self, i: int, a: int, j: int, b: int) -> tuple:
        """Product of basis elements as a dense vector in degree ``i+j``."""
        n = self.dim(i + j)
        out = [ZERO] * n
        for k, c in self.mult.get((i, a, j, b), ()):
            out[k] += c
        return tuple(out)

    def multiply(self, i: int, u, j: int, v) -> tuple:
        """Product of a degree-``i`` vector ``u`` and a degree-``j`` vector ``v``."""
        n = self.dim(i + j)
        out = [ZERO] * n
        if not n:
            return ()
        for a, ca in enumerate(u):
            if not ca:
                continue
            for b, cb in enumerate(v):
                if not cb:
                    continue
                for k, c in self.mult.get((i, a, j, b), ()):
                    out[k] += ca * cb * c
        return tuple(out)

    def left_mult_matrix(self, i: int, u, j: int) -> QMatrix:
        """Matrix of ``x -> u*x`` from ``A^j`` to ``A^{i+j}``."""
        rows, cols = self.dim(i + j), self.dim(j)
        data = [[ZERO] * cols for _ in range(rows)]
        for a, ca in enumerate(u):
            if not ca:
                continue
            for b in range(cols):
                for k, c in self.mult.get((i, a, j, b), ()):
                    data[k][b] += ca * c
        return QMatrix(rows, cols, tuple(tuple(r) for r in data))

    def right_mult_matrix(self, j: int, v, i: int) -> QMatrix:
        """Matrix of ``x -> x*v`` from ``A^i`` to ``A^{i+j}``."""
        rows, cols = self.dim(i + j), self.dim(i)
        data = [[ZERO] * cols for _ in range(rows)]
        for b, cb in enumerate(v):
            if not cb:
                continue
            for a in range(cols):
                for k, c in self.mult.get((i, a, j, b), ()):
                    data[k][a] += cb * c
        return QMatrix(rows, cols, tuple(tuple(r) for r in data))

    def d(self, i: int, v) -> tuple:
        if i > self.top_degree:
            return ()
        return self.diff[i].apply(tuple(v))

    # formatting and parsing ---------------------------------------------
    def format_element(self, i: int, v) -> str:
        parts = []
        for name, c in zip(self.names(i), v):
            if not c:
                continue
            mag = abs(c)
            coef = "" if mag == 1 else format_fraction(mag) + "*"
            parts.append(("-" if c < 0 else "+", coef + name))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, t in parts[1:]:
            out += f" {s} {t}"
        return out

    def element(self, text: str, degree: Optional[int] = None) -> tuple:
        """Parse an element literal; returns ``(degree, vector)``."""
        return parse_element(self, text, degree)

    def cohomology(self, i: int) -> "Cohomology":
        key = ("H", i)
        if key not in self._cache:
            self._cache[key] = Cohomology(self, i)
        return self._cache[key]

    def betti(self) -> tuple:
        return tuple(self.cohomology(i).betti for i in range(self.top_degree + 1))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FiniteCdga{label} dims={self.dims()}>"


@dataclass(frozen=True)
class Elem:
    """Homogeneous element used while parsing; ``degree`` None means zero."""

    degree: Optional[int]
    coeffs: tuple


def parse_element(A: FiniteCdga, text: str, degree: Optional[int] = None) -> tuple:
    def name(nm):
        d, k = A.index(nm)
        return Elem(d, unit_vector(A.dim(d), k))

    def add(x, y):
        if x.degree is None:
            return y
        if y.degree is None:
            return x
        if x.degree != y.degree:
            raise ExpressionError(f"adding elements of degrees {x.degree} and {y.degree}", text)
        return Elem(x.degree, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))

    def scale(c, x):
        return Elem(x.degree, tuple(c * a for a in x.coeffs))

    def mul(x, y):
        if x.degree is None or y.degree is None:
            return Elem(None, ())
        d = x.degree + y.degree
        if d > A.top_degree:
            return Elem(None, ())
        return Elem(d, A.multiply(x.degree, x.coeffs, y.degree, y.coeffs))

    def lift(c):
        return Elem(0, (Fraction(c),))

    out = parse_expression(text, Semantics(name=name, add=add, mul=mul, scale=scale, lift=lift))
    if isinstance(out, Fraction):
        out = Elem(0, (out,)) if out else Elem(None, ())
    if out.degree is None:
        if degree is None:
            raise ExpressionError("cannot infer the degree of a zero element", text)
        return degree, zero_vector(A.dim(degree))
    if degree is not None and out.degree != degree:
        raise ExpressionError(f"expected an element of degree {degree}, got degree {out.degree}", text)
    return out.degree, out.coeffs


# ---------------------------------------------------------------------------
# cohomology


class Cohomology:
    """``H^i(A)`` with deterministic cocycle representatives.

    Representatives are picked greedily from the kernel basis of ``d^i`` after
    the coboundaries, so the choice only depends on the pivot rule.
    """

    def __init__(self, A: FiniteCdga, i: int):
        if not 0 <= i <= A.top_degree:
            raise ValueError(f"degree {i} is outside 0..{A.top_degree}")
        self.algebra = A
        self.degree = i
        n = A.dim(i)
        self.cocycles = kernel_basis(A.diff[i]) if n else []
        if i > 0 and A.dim(i - 1):
            self.coboundaries = [c for c in A.diff[i - 1].columns() if any(c)]
        else:
            self.coboundaries = []
        self.boundary_rank = rank(QMatrix.from_rows(self.coboundaries, n)) if self.coboundaries else 0
        self.reps = complement_basis(self.coboundaries, self.cocycles, n)
        self.betti = len(self.reps)
        # columns: representatives then coboundary generators
        self._solver = QMatrix.from_columns(self.reps + self.coboundaries, n) if n else None

    @property
    def classes(self) -> list:
        return [CohomologyClass(self.degree, r, self.algebra) for r in self.reps]

    def is_cocycle(self, v) -> bool:
        return not any(self.algebra.d(self.degree, v))

    def coordinates(self, v) -> tuple:
        """Coordinates of the class of a cocycle in the representative basis."""
        if not self.is_cocycle(v):
            raise ValueError("element is not a cocycle")
        if not self.algebra.dim(self.degree):
            return ()
        sol = solve_affine(self._solver, v)
        if sol is None:
            raise ArithmeticError("cocycle not in the span of representatives and coboundaries")
        return sol[0][: self.betti]

    def is_exact(self, v) -> bool:
        return not any(self.coordinates(v))

    def representative(self, coords) -> tuple:
        n = self.algebra.dim(self.degree)
        out = [ZERO] * n
        for c, r in zip(coords, self.reps):
            if c:
                for k, a in enumerate(r):
                    out[k] += c * a
        return tuple(out)

    def primitive(self, v) -> Optional[tuple]:
        """Some ``w`` with ``d w = v``, or None if ``v`` is not exact."""
        i = self.degree
        if i == 0:
            return None if any(v) else ()
        sol = solve_affine(self.algebra.diff[i - 1], v)
        return None if sol is None else sol[0]


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    representative: tuple
    ambient: FiniteCdga

    def __post_init__(self):
        if any(self.ambient.d(self.degree, self.representative)):
            raise ValueError("representative is not a cocycle")

    def coordinates(self) -> tuple:
        return self.ambient.cohomology(self.degree).coordinates(self.representative)

    def __mul__(self, other: "CohomologyClass") -> "CohomologyClass":
        d = self.degree + other.degree
        A = self.ambient
        if d > A.top_degree:
            return CohomologyClass(d, (), A)
        return CohomologyClass(d, A.multiply(self.degree, self.representative,
                                             other.degree, other.representative), A)

    def is_zero(self) -> bool:
        if self.degree > self.ambient.top_degree:
            return True
        return self.ambient.cohomology(self.degree).is_exact(self.representative)

    def format(self) -> str:
        return "[" + self.ambient.format_element(self.degree, self.representative) + "]"


def cohomology(A: FiniteCdga, i: int) -> tuple:
    """``(betti, classes)`` for ``H^i(A)``."""
    H = A.cohomology(i)
    return H.betti, H.classes


# ---------------------------------------------------------------------------
# validation


def check_axioms(A: FiniteCdga, structure: bool = True) -> None:
    """Raise the first violated axiom.

    With ``structure=False`` only connectivity and ``d^2 = 0`` are checked; the
    builders use that for algebras whose product is associative, commutative
    and Leibniz by construction.
    """
    if A.top_degree < 0 or A.dim(0) != 1:
        raise ConnectivityError(f"A^0 must be one-dimensional, got dimension {A.dim(0)}")
    top = A.top_degree
    if structure:
        unit = A.basis[0][0]
        if A.basis_product(0, 0, 0, 0) != (Fraction(1),):
            raise UnitError(f"{unit}*{unit} is not {unit}", (unit, unit))
        for i in range(1, top + 1):
            for a in range(A.dim(i)):
                e = unit_vector(A.dim(i), a)
                if A.basis_product(0, 0, i, a) != e or A.basis_product(i, a, 0, 0) != e:
                    raise UnitError(f"{unit} is not a two-sided unit on {A.basis[i][a]}",
                                    (unit, A.basis[i][a]))
        for i in range(1, top + 1):
            for j in range(i, top + 1 - i):
                s = sign(i * j)
                for a in range(A.dim(i)):
                    for b in range(A.dim(j)):
                        ab = A.basis_product(i, a, j, b)
                        ba = A.basis_product(j, b, i, a)
                        if ab != tuple(s * c for c in ba):
                            raise CommutativityError(
                                f"{A.basis[i][a]}*{A.basis[j][b]} != {'-' if s < 0 else ''}"
                                f"{A.basis[j][b]}*{A.basis[i][a]}", (A.basis[i][a], A.basis[j][b]))
        for i in range(1, top + 1):
            for j in range(1, top + 1 - i):
                for k in range(1, top + 1 - i - j):
                    for a in range(A.dim(i)):
                        for b in range(A.dim(j)):
                            ab = A.basis_product(i, a, j, b)
                            for c in range(A.dim(k)):
                                left = A.multiply(i + j, ab, k, unit_vector(A.dim(k), c))
                                bc = A.basis_product(j, b, k, c)
                                right = A.multiply(i, unit_vector(A.dim(i), a), j + k, bc)
                                if left != right:
                                    w = (A.basis[i][a], A.basis[j][b], A.basis[k][c])
                                    raise AssociativityError(
                                        f"({w[0]}*{w[1]})*{w[2]} != {w[0]}*({w[1]}*{w[2]})", w)
    for i in range(top - 1):
        DD = A.diff[i + 1] @ A.diff[i]
        if not DD.is_zero():
            col = next(c for c in range(DD.cols) if any(DD.column(c)))
            raise DifferentialSquareError(f"d(d({A.basis[i][col]})) != 0", (A.basis[i][col],))
    if A.dim(1) and any(A.diff[0].column(0)):
        raise DifferentialSquareError("d of the unit is nonzero", (A.basis[0][0],))
    if structure:
        for i in range(1, top + 1):
            for j in range(i, top + 1 - i):
                if i + j >= top:
                    continue
                for a in range(A.dim(i)):
                    ea = unit_vector(A.dim(i), a)
                    da = A.d(i, ea)
                    for b in range(A.dim(j)):
                        eb = unit_vector(A.dim(j), b)
                        lhs = A.d(i + j, A.basis_product(i, a, j, b))
                        t1 = A.multiply(i + 1, da, j, eb)
                        t2 = A.multiply(i, ea, j + 1, A.d(j, eb))
                        rhs = tuple(x + sign(i) * y for x, y in zip(t1, t2))
                        if lhs != rhs:
                            w = (A.basis[i][a], A.basis[j][b])
                            raise LeibnizError(f"Leibniz rule fails on {w[0]}*{w[1]}", w)


def axioms_checked(A: FiniteCdga) -> list:
    return ["connected", "unit", "graded-commutative", "associative", "d-squared", "leibniz"]


# ---------------------------------------------------------------------------
# construction from tables


def from_tables(basis: dict, products: dict, differential: dict, name: str = "",
                top_degree: Optional[int] = None) -> FiniteCdga:
    """Assemble a CDGA from named data without checking the axioms.

    ``basis`` maps degree to names; ``products`` maps ``(x, y)`` name pairs to
    element literals (or dicts name -> coefficient) in degree ``|x|+|y|``;
    missing reverse products are filled in by graded commutativity, and
    contradictory pairs raise :class:`CommutativityError`.  ``differential``
    maps names to element literals and may use products.
    """
    if top_degree is None:
        top_degree = max((int(d) for d, names in basis.items() if names), default=0)
    levels = [list(basis.get(d, basis.get(str(d), ()))) for d in range(top_degree + 1)]
    seen = set()
    for d, names in enumerate(levels):
        for nm in names:
            if nm in seen:
                raise ValueError(f"duplicate basis name {nm!r}")
            seen.add(nm)
    if len(levels[0]) != 1:
        raise ConnectivityError(f"A^0 must be one-dimensional, got {len(levels[0])} names")
    where = {nm: (d, k) for d, names in enumerate(levels) for k, nm in enumerate(names)}

    def linear(text, deg, context):
        if isinstance(text, dict):
            out = [ZERO] * len(levels[deg])
            for nm, c in text.items():
                d, k = where[nm]
                if d != deg:
                    raise DifferentialDegreeError(f"{context}: {nm} has degree {d}, expected {deg}")
                out[k] += Fraction(c)
            return tuple(out)
        return _parse_linear(text, levels, where, deg, context)

    mult: dict = {}
    given = {}
    for (x, y), value in products.items():
        if x not in where or y not in where:
            raise ValueError(f"unknown basis name in product {x}*{y}")
        (i, a), (j, b) = where[x], where[y]
        if i + j > top_degree:
            continue
        given[(i, a, j, b)] = linear(value, i + j, f"product {x}*{y}")
    for (i, a, j, b), v in list(given.items()):
        rev = (j, b, i, a)
        s = sign(i * j)
        expect = tuple(s * c for c in v)
        if rev in given:
            if given[rev] != expect:
                raise CommutativityError(
                    f"{levels[i][a]}*{levels[j][b]} and {levels[j][b]}*{levels[i][a]} disagree",
                    (levels[i][a], levels[j][b]))
        else:
            given[rev] = expect
    for i, names in enumerate(levels):
        for a in range(len(names)):
            for key in ((0, 0, i, a), (i, a, 0, 0)):
                if key not in given:
                    given[key] = unit_vector(len(names), a)
    for key, v in given.items():
        entries = tuple((k, c) for k, c in enumerate(v) if c)
        if entries:
            mult[key] = entries

    A0 = FiniteCdga(levels, mult, [QMatrix.zeros(len(levels[i + 1]) if i < top_degree else 0,
                                                  len(levels[i])) for i in range(top_degree + 1)])
    cols = [[zero_vector(len(levels[i + 1]) if i < top_degree else 0) for _ in levels[i]]
            for i in range(top_degree + 1)]
    for nm, value in differential.items():
        if nm not in where:
            raise ValueError(f"unknown basis name {nm!r} in the differential")
        i, a = where[nm]
        if i == top_degree:
            if _nonzero_literal(value):
                raise DifferentialDegreeError(f"d({nm}) must vanish in the top degree", (nm,))
            continue
        if isinstance(value, dict):
            v = linear(value, i + 1, f"d({nm})")
        else:
            try:
                deg, v = parse_element(A0, value, i + 1)
            except ExpressionError as exc:
                if "expected an element of degree" in str(exc):
                    raise DifferentialDegreeError(f"d({nm}) = {value} does not have degree {i + 1}",
                                                  (nm,)) from None
                raise
        cols[i][a] = v
    diff = [QMatrix.from_columns(cols[i], len(levels[i + 1]) if i < top_degree else 0)
            if levels[i] else QMatrix.zeros(len(levels[i + 1]) if i < top_degree else 0, 0)
            for i in range(top_degree + 1)]
    return FiniteCdga(levels, mult, diff, name=name)


def _nonzero_literal(value) -> bool:
    if isinstance(value, dict):
        return any(Fraction(c) for c in value.values())
    return str(value).strip() not in ("0", "")


def _parse_linear(text, levels, where, deg, context) -> tuple:
    def name(nm):
        d, k = where[nm]
        return Elem(d, unit_vector(len(levels[d]), k))

    def add(x, y):
        if x.degree is None:
            return y
        if y.degree is None:
            return x
        if x.degree != y.degree:
            raise ExpressionError(f"{context}: mixed degrees", text)
        return Elem(x.degree, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))

    def mul(x, y):
        raise ExpressionError(f"{context}: table entries must be linear in basis names", text)

    def scale(c, x):
        return Elem(x.degree, tuple(c * a for a in x.coeffs))

    out = parse_expression(str(text), Semantics(name=name, add=add, mul=mul, scale=scale))
    if isinstance(out, Fraction):
        if out:
            if deg == 0:
                return (out,)
            raise DifferentialDegreeError(f"{context}: bare number in degree {deg}")
        return zero_vector(len(levels[deg]))
    if out.degree is None:
        return zero_vector(len(levels[deg]))
    if out.degree != deg:
        raise DifferentialDegreeError(f"{context}: value has degree {out.degree}, expected {deg}")
    return out.coeffs


def validate(raw) -> FiniteCdga:
    """Build a CDGA from a raw description and check every axiom.

    ``raw`` is either a FiniteCdga or a dict with keys ``basis``,
    ``products`` and ``differential`` as accepted by :func:`from_tables`.
    """
    if isinstance(raw, FiniteCdga):
        A = raw
    else:
        products = {}
        for key, value in raw.get("products", {}).items():
            if isinstance(key, str):
                x, y = (s.strip() for s in key.split("*"))
            else:
                x, y = key
            products[(x, y)] = value
        A = from_tables(raw["basis"], products, raw.get("differential", {}),
                        name=raw.get("name", ""), top_degree=raw.get("top_degree"))
    check_axioms(A)
    return A


# ---------------------------------------------------------------------------
# morphisms


class CdgaMorphism:
    """Degree-preserving linear map given by one matrix per degree."""

    def __init__(self, source: FiniteCdga, target: FiniteCdga, matrices: Sequence[QMatrix]):
        self.source = source
        self.target = target
        self.matrices = tuple(matrices)

    def apply(self, i: int, v) -> tuple:
        if i >= len(self.matrices):
            return zero_vector(self.target.dim(i))
        return self.matrices[i].apply(v)

    def is_chain_map(self) -> bool:
        S, T = self.source, self.target
        for i in range(min(S.top_degree, len(self.matrices) - 1)):
            if self.target.dim(i + 1) == 0:
                continue
            lhs = self.matrices[i + 1] @ S.diff[i]
            rhs = T.diff[i] @ self.matrices[i] if T.dim(i) else None
            if rhs is None:
                if not lhs.is_zero():
                    return False
            elif lhs != rhs:
                return False
        return True

    def is_multiplicative(self) -> bool:
        S = self.source
        for (i, a, j, b), entries in S.mult.items():
            if i + j >= len(self.matrices):
                continue
            fa = self.apply(i, unit_vector(S.dim(i), a))
            fb = self.apply(j, unit_vector(S.dim(j), b))
            lhs = self.apply(i + j, S.basis_product(i, a, j, b))
            if lhs != self.target.multiply(i, fa, j, fb):
                return False
        return True

    def cohomology_map(self, i: int) -> QMatrix:
        """Matrix of ``H^i(source) -> H^i(target)`` in representative bases."""
        HS, HT = self.source.cohomology(i), self.target.cohomology(i)
        cols = [HT.coordinates(self.apply(i, r)) for r in HS.reps]
        return QMatrix.from_columns(cols, HT.betti)

    def quasi_iso_degree(self, q: int) -> bool:
        """True iff iso on ``H^{<=q}`` and mono on ``H^{q+1}`` (a q-quasi-isomorphism)."""
        for i in range(q + 2):
            if i > self.source.top_degree and i > self.target.top_degree:
                break
            bs = self.source.cohomology(i).betti if i <= self.source.top_degree else 0
            bt = self.target.cohomology(i).betti if i <= self.target.top_degree else 0
            if bs == 0:
                if i <= q and bt:
                    return False
                continue
            if bt == 0:
                return False
            r = rank(self.cohomology_map(i))
            if r != bs or (i <= q and r != bt):
                return False
        return True


def identity_morphism(A: FiniteCdga) -> CdgaMorphism:
    return CdgaMorphism(A, A, [QMatrix.identity(A.dim(i)) for i in range(A.top_degree + 1)])
