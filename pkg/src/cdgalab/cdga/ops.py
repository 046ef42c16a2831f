"""Standard constructions on finite CDGAs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..qlinalg import (
    QMatrix, ZERO, inverse, rank, row_space_basis, solve_affine, unit_vector, zero_vector,
)
from .algebra import (
    CdgaError, CdgaMorphism, DifferentialDegreeError, FiniteCdga, check_axioms, sign,
)
from .build import exterior_algebra


class HirschError(CdgaError):
    axiom = "hirsch"


def _display(A: FiniteCdga, i: int, v) -> str:
    nz = [k for k, c in enumerate(v) if c]
    if len(nz) == 1 and v[nz[0]] == 1:
        return A.basis[i][nz[0]]
    return "(" + A.format_element(i, v) + ")"


def truncate_above(A: FiniteCdga, top: int) -> FiniteCdga:
    """Quotient ``A / A^{>top}``; the positive-degree tail is a dg-ideal."""
    if top >= A.top_degree:
        return A
    basis = A.basis[: top + 1]
    mult = {k: v for k, v in A.mult.items() if k[0] + k[2] <= top}
    diff = list(A.diff[:top]) + [QMatrix.zeros(0, A.dim(top))]
    return FiniteCdga(basis, mult, diff, name=f"{A.name} / deg>{top}".strip())


def inclusion_into_quotient(A: FiniteCdga, top: int) -> CdgaMorphism:
    B = truncate_above(A, top)
    return CdgaMorphism(A, B, [QMatrix.identity(A.dim(i)) for i in range(top + 1)])


def truncate(A: FiniteCdga, q: int, verify: bool = True) -> FiniteCdga:
    """The q-truncation ``A[q]``.

    Degrees ``<= q`` are kept; degree ``q+1`` becomes ``d A^q`` plus all
    products ``A^i * A^j`` with ``i + j = q + 1`` and ``i, j <= q``.  The
    inclusion into ``A / A^{>q+1}`` is checked to be a q-quasi-isomorphism.
    """
    if q >= A.top_degree or q < 0:
        raise ValueError(f"truncation degree {q} must be below the top degree {A.top_degree}")
    n = A.dim(q + 1)
    gens = [c for c in A.diff[q].columns() if any(c)]
    for i in range(1, q + 1):
        j = q + 1 - i
        if j < 1 or j > q or j < i:
            continue
        for a in range(A.dim(i)):
            for b in range(A.dim(j)):
                v = A.basis_product(i, a, j, b)
                if any(v):
                    gens.append(v)
    W = row_space_basis(gens, n)
    Wmat = QMatrix.from_columns(W, n) if W else None

    def wcoords(v):
        if not any(v):
            return zero_vector(len(W))
        sol = solve_affine(Wmat, v)
        if sol is None:
            raise ArithmeticError("product escaped the truncation span")
        return sol[0]

    basis = [list(A.basis[i]) for i in range(q + 1)]
    if W:
        basis.append([_display(A, q + 1, w) for w in W])
    mult = {k: v for k, v in A.mult.items() if k[0] + k[2] <= q}
    if W:
        for i in range(0, q + 2):
            j = q + 1 - i
            if i > q or j > q:
                continue
            for a in range(A.dim(i)):
                for b in range(A.dim(j)):
                    c = wcoords(A.basis_product(i, a, j, b))
                    entries = tuple((k, x) for k, x in enumerate(c) if x)
                    if entries:
                        mult[(i, a, j, b)] = entries
        for k in range(len(W)):
            mult[(0, 0, q + 1, k)] = ((k, Fraction(1)),)
            mult[(q + 1, k, 0, 0)] = ((k, Fraction(1)),)
    diff = list(A.diff[:q])
    if W:
        diff.append(QMatrix.from_columns([wcoords(c) for c in A.diff[q].columns()], len(W))
                    if A.dim(q) else QMatrix.zeros(len(W), 0))
        diff.append(QMatrix.zeros(0, len(W)))
    else:
        diff.append(QMatrix.zeros(0, A.dim(q)))
    T = FiniteCdga(basis, mult, diff, name=f"{A.name}[{q}]".strip())
    if verify:
        target = truncate_above(A, q + 1)
        mats = [QMatrix.identity(A.dim(i)) for i in range(q + 1)]
        if W:
            mats.append(Wmat)
        f = CdgaMorphism(T, target, mats)
        if not f.is_chain_map() or not f.quasi_iso_degree(q):
            raise ArithmeticError("truncation inclusion is not a q-quasi-isomorphism")
    return T


def tensor(A: FiniteCdga, B: FiniteCdga, name: str = "") -> FiniteCdga:
    """``A (x) B`` with the Koszul sign on products and differentials."""
    top = A.top_degree + B.top_degree
    pos = {}
    basis = [[] for _ in range(top + 1)]
    for n in range(top + 1):
        for p in range(max(0, n - B.top_degree), min(n, A.top_degree) + 1):
            for a, an in enumerate(A.basis[p]):
                for b, bn in enumerate(B.basis[n - p]):
                    pos[(p, a, n - p, b)] = (n, len(basis[n]))
                    if p == 0:
                        label = bn
                    elif n - p == 0:
                        label = an
                    else:
                        label = f"{an}*{bn}"
                    basis[n].append(label)
    while top > 0 and not basis[top]:
        top -= 1
    basis = basis[: top + 1]
    mult: dict = {}
    for (i, a, i2, a2), ea in A.mult.items():
        for (j, b, j2, b2), eb in B.mult.items():
            if i + j + i2 + j2 > top:
                continue
            s = sign(j * i2)
            n1, k1 = pos[(i, a, j, b)]
            n2, k2 = pos[(i2, a2, j2, b2)]
            acc: dict = {}
            for ka, ca in ea:
                for kb, cb in eb:
                    _, k = pos[(i + i2, ka, j + j2, kb)]
                    acc[k] = acc.get(k, ZERO) + s * ca * cb
            entries = tuple((k, c) for k, c in sorted(acc.items()) if c)
            if entries:
                mult[(n1, k1, n2, k2)] = entries
    diff = []
    for n in range(top + 1):
        rows = len(basis[n + 1]) if n < top else 0
        data = [[ZERO] * len(basis[n]) for _ in range(rows)]
        if n < top:
            for (p, a, q_, b), (nn, k) in pos.items():
                if nn != n:
                    continue
                da = A.d(p, unit_vector(A.dim(p), a)) if p < A.top_degree else ()
                for ka, c in enumerate(da):
                    if c:
                        _, r = pos[(p + 1, ka, q_, b)]
                        data[r][k] += c
                db = B.d(q_, unit_vector(B.dim(q_), b)) if q_ < B.top_degree else ()
                s = sign(p)
                for kb, c in enumerate(db):
                    if c:
                        _, r = pos[(p, a, q_ + 1, kb)]
                        data[r][k] += s * c
        diff.append(QMatrix(rows, len(basis[n]), tuple(tuple(r) for r in data)))
    T = FiniteCdga(basis, mult, diff, name=name or f"{A.name} (x) {B.name}".strip())
    T._cache["tensor"] = (A, B, pos)
    return T


def hirsch_extension(A: FiniteCdga, generators: Sequence, images: Sequence,
                     verify: bool = True) -> FiniteCdga:
    """``(A (x) Lambda V, d)`` with ``d t = tau(t)`` for odd-degree generators ``t``.

    ``generators`` are ``(name, degree)`` pairs; ``images`` are cocycles of
    degree ``|t| + 1`` given as vectors or element literals.
    """
    if len(generators) != len(images):
        raise ValueError("one image per generator")
    taus = []
    for (nm, deg), img in zip(generators, images):
        deg = int(deg)
        if deg % 2 == 0:
            raise HirschError(f"generator {nm} has even degree {deg}; only odd degrees are supported",
                              (nm,))
        if isinstance(img, str):
            _, v = A.element(img, deg + 1) if deg + 1 <= A.top_degree else (deg + 1, ())
        else:
            v = tuple(Fraction(c) for c in img)
        if len(v) != A.dim(deg + 1):
            raise DifferentialDegreeError(f"image of {nm} must have degree {deg + 1}", (nm,))
        if any(A.d(deg + 1, v)):
            raise HirschError(f"image of {nm} is not a cocycle", (nm,))
        taus.append(v)
    B = exterior_algebra([g[0] for g in generators], 1) if all(int(g[1]) == 1 for g in generators) \
        else _odd_exterior(generators)
    T = tensor(A, B)
    _, _, pos = T._cache["tensor"]
    F = B._cache["free"]
    gdeg = [int(g[1]) for g in generators]
    diff = [list(map(list, D.data)) for D in T.diff]
    for (p, a, qd, b), (n, k) in pos.items():
        if n >= T.top_degree:
            continue
        m = F.monomials[qd][b]
        letters = [i for i, e in enumerate(m) if e]
        before = 0
        for s_idx, t in enumerate(letters):
            rest = list(m)
            rest[t] = 0
            rest = tuple(rest)
            rdeg = qd - gdeg[t]
            rb = F.position[rest][1]
            s = sign(p) * sign(before)
            prod = A.multiply(p, unit_vector(A.dim(p), a), gdeg[t] + 1, taus[t]) \
                if p + gdeg[t] + 1 <= A.top_degree else ()
            for ka, c in enumerate(prod):
                if c:
                    _, r = pos[(p + gdeg[t] + 1, ka, rdeg, rb)]
                    diff[n][r][k] += s * c
            before += gdeg[t]
    new_diff = [QMatrix(D.rows, D.cols, tuple(tuple(r) for r in rows))
                for D, rows in zip(T.diff, diff)]
    E = FiniteCdga(T.basis, T.mult, new_diff, name=f"{A.name} + Hirsch".strip())
    check_axioms(E, structure=False)
    E._cache["tensor"] = T._cache["tensor"]
    if verify:
        n = min(gdeg) - 1
        inc = hirsch_inclusion(A, E)
        if not inc.quasi_iso_degree(n):
            raise ArithmeticError("Hirsch inclusion is not an n-quasi-isomorphism")
    return E


def _odd_exterior(generators):
    from .build import semifree
    return semifree([(g[0], int(g[1])) for g in generators], {})


def hirsch_inclusion(A: FiniteCdga, E: FiniteCdga) -> CdgaMorphism:
    """The inclusion ``a -> a (x) 1`` into a tensor-shaped extension."""
    _, _, pos = E._cache["tensor"]
    mats = []
    for i in range(A.top_degree + 1):
        cols = []
        for a in range(A.dim(i)):
            _, k = pos[(i, a, 0, 0)]
            cols.append(unit_vector(E.dim(i), k))
        mats.append(QMatrix.from_columns(cols, E.dim(i)))
    return CdgaMorphism(A, E, mats)


def twist(A: FiniteCdga, omega) -> list:
    """Matrices of ``d_omega = d + omega*`` for a 1-cocycle ``omega``."""
    omega = tuple(Fraction(c) for c in omega)
    if len(omega) != A.dim(1):
        raise ValueError("omega must be a degree-1 vector")
    if any(A.d(1, omega)):
        raise CdgaError("omega is not a 1-cocycle")
    mats = []
    for i in range(A.top_degree + 1):
        L = A.left_mult_matrix(1, omega, i)
        mats.append(A.diff[i] + L)
    for i in range(A.top_degree - 1):
        if not (mats[i + 1] @ mats[i]).is_zero():
            raise ArithmeticError("twisted differential does not square to zero")
    return mats


def twisted_betti(A: FiniteCdga, omega, i: int, mats: Optional[list] = None) -> int:
    if not 0 <= i <= A.top_degree:
        raise ValueError(f"degree {i} is outside 0..{A.top_degree}")
    mats = mats if mats is not None else twist(A, omega)
    r_out = rank(mats[i]) if A.dim(i + 1) and A.dim(i) else 0
    r_in = rank(mats[i - 1]) if i > 0 and A.dim(i) and A.dim(i - 1) else 0
    return A.dim(i) - r_out - r_in


@dataclass
class PdVerdict:
    ok: bool
    degree: int
    fundamental: Optional[tuple]
    reason: str = ""

    def __bool__(self):
        return self.ok


def pairing_matrix(A: FiniteCdga, i: int, n: int) -> QMatrix:
    """Rows ``A^i``, columns ``A^{n-i}``, entries the top coefficient of the product."""
    rows, cols = A.dim(i), A.dim(n - i)
    return QMatrix(rows, cols, tuple(
        tuple((A.basis_product(i, a, n - i, b) or (ZERO,))[0] for b in range(cols))
        for a in range(rows)))


def pd_check(A: FiniteCdga, n: int) -> PdVerdict:
    """Is ``A`` an n-dimensional Poincare duality CDGA?"""
    if any(A.dim(i) for i in range(n + 1, A.top_degree + 1)):
        return PdVerdict(False, n, None, f"nonzero elements above degree {n}")
    if A.dim(n) != 1:
        return PdVerdict(False, n, None, f"dim A^{n} = {A.dim(n)}, expected 1")
    for i in range(n + 1):
        if A.dim(i) != A.dim(n - i):
            return PdVerdict(False, n, None, f"dim A^{i} != dim A^{n - i}")
        if A.dim(i) and rank(pairing_matrix(A, i, n)) != A.dim(i):
            return PdVerdict(False, n, None, f"pairing A^{i} x A^{n - i} is degenerate")
    if n > 0 and A.dim(n - 1) and not A.diff[n - 1].is_zero():
        return PdVerdict(False, n, None, f"d A^{n - 1} != 0")
    return PdVerdict(True, n, (Fraction(1),), "")


def change_basis(A: FiniteCdga, matrices: Sequence[QMatrix], prefix: str = "v") -> tuple:
    """Rewrite ``A`` in a new basis.

    ``matrices[i]`` has the new degree-``i`` basis vectors as columns (old
    coordinates).  Returns ``(A_new, phi)`` where ``phi: A_new -> A`` is the
    resulting isomorphism.
    """
    inv = [inverse(M) if M.rows else M for M in matrices]
    basis = [["1"]] + [[f"{prefix}{i}_{k + 1}" for k in range(A.dim(i))]
                       for i in range(1, A.top_degree + 1)]
    cols = [M.columns() for M in matrices]
    mult = {}
    for i in range(A.top_degree + 1):
        for a in range(A.dim(i)):
            for j in range(A.top_degree + 1 - i):
                for b in range(A.dim(j)):
                    v = A.multiply(i, cols[i][a], j, cols[j][b])
                    if any(v):
                        w = inv[i + j].apply(v)
                        entries = tuple((k, c) for k, c in enumerate(w) if c)
                        if entries:
                            mult[(i, a, j, b)] = entries
    diff = []
    for i in range(A.top_degree + 1):
        if i < A.top_degree and A.dim(i) and A.dim(i + 1):
            diff.append(inv[i + 1] @ A.diff[i] @ matrices[i])
        else:
            diff.append(QMatrix.zeros(A.dim(i + 1), A.dim(i)))
    B = FiniteCdga(basis, mult, diff, name=f"{A.name}'")
    return B, CdgaMorphism(B, A, list(matrices))
