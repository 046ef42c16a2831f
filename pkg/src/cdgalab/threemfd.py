"""Closed orientable 3-manifolds through their intersection 3-forms.

A 3-form ``mu`` on ``H^1 = Q^n`` determines the Poincare duality algebra
``1; e_i; e_i^dual; top`` with ``e_i e_j = sum_k mu_ijk e_k^dual`` and
``e_i e_j^dual = delta_ij top``.  From it come the skew matrix of linear forms
``delta_M``, the Pfaffian invariant, the degree-1 resonance variety, and the
formality and finiteness verdicts driven by the Alexander polynomial.

Genericity of an odd-dimensional form (``gamma_c`` of maximal rank for some
``c``) is decided as ``Pf(mu) != 0``: a principal ``2g``-Pfaffian of
``delta_M`` evaluated at ``c`` equals ``+-c_i Pf(mu)(c)``, and ``gamma_c`` is
exactly ``delta_M(c)`` up to sign.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cdga.algebra import FiniteCdga
from .jumploci.resonance import resonance_member
from .jumploci.sampling import random_point, random_rational, sample_points
from .jumploci.tcone import ExpConeReport, exp_tangent_cone_report, probe_directions, rational_points_on_form
from .polyalg import MultiPoly, PolyMatrix, det, pfaffian
from .qlinalg import QMatrix, rank


class ThreeForm:
    """Alternating 3-form on ``Q^n``; coefficients keyed by 0-based ``i < j < k``."""

    def __init__(self, n: int, coeffs: Optional[dict] = None):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self.coeffs = {}
        for key, c in (coeffs or {}).items():
            i, j, k = key
            if not (0 <= i < j < k < n):
                raise ValueError(f"index triple {(i + 1, j + 1, k + 1)} must satisfy 1 <= i < j < k <= {n}")
            c = Fraction(c)
            if c:
                self.coeffs[(i, j, k)] = c

    @classmethod
    def from_rows(cls, n: int, rows: Sequence) -> "ThreeForm":
        """Rows ``[i, j, k, coefficient]`` with 1-based ``i < j < k``."""
        coeffs = {}
        for row in rows:
            if len(row) != 4:
                raise ValueError(f"3-form row {row!r} must have four entries")
            i, j, k, c = row
            key = (int(i) - 1, int(j) - 1, int(k) - 1)
            coeffs[key] = coeffs.get(key, 0) + Fraction(c)
        return cls(n, coeffs)

    @classmethod
    def random(cls, n: int, rng: random.Random, density: float = 1.0) -> "ThreeForm":
        coeffs = {}
        for key in itertools.combinations(range(n), 3):
            if rng.random() < density:
                coeffs[key] = random_rational(rng)
        return cls(n, coeffs)

    def __call__(self, i: int, j: int, k: int) -> Fraction:
        """``mu(e_i, e_j, e_k)`` for arbitrary 0-based indices."""
        if len({i, j, k}) < 3:
            return Fraction(0)
        order = sorted((i, j, k))
        perm = [order.index(t) for t in (i, j, k)]
        inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
        c = self.coeffs.get(tuple(order), Fraction(0))
        return -c if inversions % 2 else c

    def rows(self) -> list:
        return [[i + 1, j + 1, k + 1, c] for (i, j, k), c in sorted(self.coeffs.items())]

    def __eq__(self, other):
        return isinstance(other, ThreeForm) and self.n == other.n and self.coeffs == other.coeffs

    def __repr__(self):
        return f"ThreeForm(n={self.n}, {len(self.coeffs)} terms)"


def pd_algebra_from_3form(mu: ThreeForm) -> FiniteCdga:
    n = mu.n
    basis = [["1"], [f"e{i + 1}" for i in range(n)], [f"e{i + 1}v" for i in range(n)], ["top"]]
    one = ((0, Fraction(1)),)
    mult = {}
    for deg, names in enumerate(basis):
        for a in range(len(names)):
            mult[(0, 0, deg, a)] = ((a, Fraction(1)),)
            mult[(deg, a, 0, 0)] = ((a, Fraction(1)),)
    for i in range(n):
        for j in range(n):
            entries = tuple((k, mu(i, j, k)) for k in range(n) if mu(i, j, k))
            if entries:
                mult[(1, i, 1, j)] = entries
        mult[(1, i, 2, i)] = one
        mult[(2, i, 1, i)] = one
    diff = [QMatrix.zeros(n, 1), QMatrix.zeros(n, n), QMatrix.zeros(1, n), QMatrix.zeros(0, 1)]
    return FiniteCdga(basis, mult, diff, name=f"PD algebra of a 3-form on Q^{n}")


def delta_matrix(mu: ThreeForm) -> PolyMatrix:
    """``delta_M``: row ``k``, column ``i`` holds ``sum_j mu_jik x_j``."""
    n = mu.n
    rows = []
    for k in range(n):
        row = []
        for i in range(n):
            terms = {}
            for j in range(n):
                c = mu(j, i, k)
                if c:
                    terms[tuple(int(t == j) for t in range(n))] = c
            row.append(MultiPoly(n, terms))
        rows.append(tuple(row))
    M = PolyMatrix(n, n, tuple(rows), n)
    if not M.is_skew():
        raise ArithmeticError("delta_M is not skew-symmetric")
    x = [MultiPoly.variable(i, n) for i in range(n)]
    if any(not p.is_zero() for p in M.apply(x)):
        raise ArithmeticError("(x_1, ..., x_n) is not in the kernel of delta_M")
    return M


@dataclass
class PfaffianInvariant:
    pf: Optional[MultiPoly]  # None for even n
    det: MultiPoly


def pfaffian_invariant(mu: ThreeForm) -> PfaffianInvariant:
    """``Pf(mu)`` and ``Det(mu)``, with every minor identity checked exactly."""
    n = mu.n
    if n < 3:
        raise ValueError("the Pfaffian invariant needs n >= 3")
    M = delta_matrix(mu)
    x = [MultiPoly.variable(i, n) for i in range(n)]
    D = det(M.delete(0, 0)).divide_exact(x[0] * x[0])
    for i in range(n):
        for j in range(n):
            expected = x[i] * x[j] * D
            if (i + j) % 2:
                expected = -expected
            if det(M.delete(i, j)) != expected:
                raise ArithmeticError(f"det delta_M({i + 1};{j + 1}) breaks the minor identity")
    if n % 2 == 0:
        if not D.is_zero():
            raise ArithmeticError("Det(mu) is nonzero for even n")
        return PfaffianInvariant(None, D)
    P = pfaffian(M.delete(0, 0)).divide_exact(x[0])
    for i in range(n):
        expected = x[i] * P if i % 2 == 0 else -(x[i] * P)
        if pfaffian(M.delete(i, i)) != expected:
            raise ArithmeticError(f"pf delta_M({i + 1};{i + 1}) breaks the Pfaffian identity")
    if P * P != D:
        raise ArithmeticError("Det(mu) != Pf(mu)^2")
    return PfaffianInvariant(P, D)


def gamma_matrix(mu: ThreeForm, c) -> QMatrix:
    """The 2-form ``gamma_c(a, b) = mu(a, b, c)`` as a skew matrix."""
    n = mu.n
    return QMatrix(n, n, tuple(tuple(sum((mu(a, b, k) * Fraction(c[k]) for k in range(n)), Fraction(0))
                                     for b in range(n)) for a in range(n)))


@dataclass
class Genericity:
    generic: bool
    pf: MultiPoly
    witness: Optional[tuple] = None  # c with rank gamma_c = n - 1


def genericity_test(mu: ThreeForm, seed: int = 0, tries: int = 50) -> Genericity:
    n = mu.n
    if n % 2 == 0 or n < 3:
        raise ValueError("genericity is defined for odd n >= 3")
    P = pfaffian_invariant(mu).pf
    generic = not P.is_zero()
    witness = None
    if generic:
        rng = random.Random(seed)
        for _ in range(tries):
            c = random_point(rng, n, nonzero=True)
            if rank(gamma_matrix(mu, c)) == n - 1:
                witness = c
                break
        if witness is None:
            raise ArithmeticError("Pf(mu) is nonzero but no full-rank gamma_c was found")
    return Genericity(generic, P, witness)


EMPTY, ORIGIN, PFAFFIAN, EVERYTHING = "empty", "origin", "pfaffian", "everything"


@dataclass
class ResonanceVerdict:
    case: str
    pf: Optional[MultiPoly] = None
    note: str = ""
    seed: int = 0
    samples: list = field(default_factory=list)  # (point, predicted, computed)

    def predicts(self, point) -> bool:
        if self.case == EMPTY:
            return False
        if self.case == ORIGIN:
            return not any(point)
        if self.case == PFAFFIAN:
            return self.pf.evaluate(point) == 0
        return True

    @property
    def disagreements(self) -> list:
        return [s for s in self.samples if s[1] != s[2]]

    def describe(self) -> str:
        return {EMPTY: "empty", ORIGIN: "{0}", EVERYTHING: "all of H^1"}.get(
            self.case, f"V({self.pf.format() if self.pf is not None else '?'})")


def resonance_r11(mu: ThreeForm, samples: int = 25, seed: int = 0) -> ResonanceVerdict:
    """The case table for ``R^1_1``, checked against twisted cohomology at sample points."""
    n = mu.n
    note = ""
    pf = None
    if n == 0:
        case = EMPTY
    elif n == 1:
        case = ORIGIN
    elif n == 3 and mu.coeffs:
        case = ORIGIN
    elif n % 2 == 1 and n > 3:
        g = genericity_test(mu, seed)
        if g.generic:
            case, pf = PFAFFIAN, g.pf
        else:
            case = EVERYTHING
            note = "odd n > 3 with a non-generic form falls in the 'otherwise' branch"
    else:
        case = EVERYTHING
    verdict = ResonanceVerdict(case, pf, note, seed)
    A = pd_algebra_from_3form(mu)
    origin = tuple(Fraction(0) for _ in range(n))
    points = [origin] + sample_points(n, samples, seed, exclude=[origin])
    if pf is not None:
        points += rational_points_on_form(pf, tries=10, seed=seed)[:10]
    for p in points:
        verdict.samples.append((p, verdict.predicts(p), resonance_member(A, p, 1, 1)))
    return verdict


@dataclass
class Obstruction:
    name: str
    holds: Optional[bool]  # None: no verdict
    statement: str
    evidence: str = ""
    grade: str = ""  # "exact" or "sampled" for evidence-based verdicts


@dataclass
class ThreeManifoldReport:
    form: ThreeForm
    pf: Optional[MultiPoly]
    det: Optional[MultiPoly]
    generic: Optional[bool]
    resonance: ResonanceVerdict
    alexander: Optional[MultiPoly] = None
    tangent_cone: Optional[ExpConeReport] = None
    obstructions: list = field(default_factory=list)

    @property
    def obstruction_found(self) -> bool:
        return any(o.holds and o.name != "formal" for o in self.obstructions)


def obstruction_report(mu: ThreeForm, alexander: Optional[MultiPoly] = None, probes: int = 100,
                       seed: int = 0, samples: int = 25) -> ThreeManifoldReport:
    n = mu.n
    if alexander is not None and alexander.nvars != n:
        raise ValueError(f"the Alexander polynomial has {alexander.nvars} variables, expected {n}")
    pf = detp = generic = None
    if n >= 3:
        inv = pfaffian_invariant(mu)
        pf, detp = inv.pf, inv.det
        if n % 2:
            generic = not pf.is_zero()
    report = ThreeManifoldReport(mu, pf, detp, generic, resonance_r11(mu, samples, seed), alexander)
    obs = report.obstructions
    if n <= 1:
        space = "S^3" if n == 0 else "S^1 x S^2"
        obs.append(Obstruction("formal", True, f"M is formal with the rational homotopy type of {space}",
                               "first Betti number at most 1"))
        return report
    if alexander is None:
        return report
    nonzero = not alexander.is_zero()
    if n % 2 == 0:
        if nonzero:
            obs.append(Obstruction("not-1-formal", True, "M is not 1-formal",
                                   f"n = {n} is even and the Alexander polynomial is nonzero"))
        else:
            obs.append(Obstruction("not-1-formal", None, "no verdict on 1-formality",
                                   "the Alexander polynomial vanishes, so TC_1(V^1_1) = R^1_1"))
    if nonzero and alexander.evaluate([1] * n) == 0:
        tc = exp_tangent_cone_report(alexander, probe_directions(n, probes, seed), seed)
        report.tangent_cone = tc
        reason = tc.proper_containment
        if reason is None:
            obs.append(Obstruction("no-1-finite-1-model", None, "no finiteness obstruction found",
                                   "every probed tangent-cone direction is exponential"))
        else:
            grade = "exact" if tc.rational_components is False or tc.gap_witnesses else "sampled"
            obs.append(Obstruction("no-1-finite-1-model", True, "M admits no 1-finite 1-model",
                                   f"{reason}; initial form {tc.initial_form.format()}", grade))
    elif nonzero:
        obs.append(Obstruction("no-1-finite-1-model", None, "no finiteness obstruction",
                               "the Alexander polynomial does not vanish at 1, so the tangent cone is empty"))
    return report
