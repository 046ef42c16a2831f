"""Tangent cones and exponential tangent cones of hypersurfaces in the torus.

Only the principal case ``W = V(f)`` is handled: the tangent cone at the
identity is cut out by the initial form of ``f(x + 1)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from ..polyalg import MultiPoly, exp_direction_vanishes, initial_form, shift_to_origin
from .sampling import random_point


def tangent_cone_hypersurface(f: MultiPoly) -> Optional[MultiPoly]:
    """Initial form of ``f`` at ``(1, ..., 1)``; None when ``f(1) != 0`` (empty cone).

    The zero polynomial is returned for ``f = 0``, whose cone is everything.
    """
    if f.is_zero():
        return MultiPoly.zero(f.nvars)
    if f.evaluate([1] * f.nvars) != 0:
        return None
    return initial_form(shift_to_origin(f))


def _to_sympy(g: MultiPoly, symbols):
    expr = sympy.Integer(0)
    for e, c in g.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, a in zip(symbols, e):
            term *= s ** a
        expr += term
    return expr


def rational_components(g: MultiPoly) -> Optional[bool]:
    """For a binary form, whether ``V(g)`` is a union of rational lines.

    Every irreducible factor of a binary form over Q cuts out lines that are
    Galois conjugate, so the lines are rational exactly when all factors are
    linear.  Returns None when there are not exactly two variables.
    """
    if g.nvars != 2:
        return None
    if g.is_zero():
        return True
    x, y = sympy.symbols("x1 x2")
    _, factors = sympy.factor_list(_to_sympy(g, (x, y)), x, y)
    return all(sympy.Poly(f, x, y).total_degree() <= 1 for f, _ in factors)


def rational_points_on_form(g: MultiPoly, tries: int = 20, seed: int = 0) -> list:
    """Nonzero rational zeros of a homogeneous form found on random lines.

    For two variables the search is complete up to scaling; otherwise it is
    a sampled search along lines ``p + s*q``.
    """
    n = g.nvars
    if g.is_zero():
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    s = sympy.Symbol("s")
    found = []
    if n == 2:
        lines = [((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))]
        if g.evaluate((1, 0)) == 0:
            found.append((Fraction(1), Fraction(0)))
    else:
        rng = random.Random(seed)
        lines = [(random_point(rng, n), random_point(rng, n, nonzero=True)) for _ in range(tries)]
    for p, q in lines:
        coords = [sympy.Rational(a.numerator, a.denominator) + s * sympy.Rational(b.numerator, b.denominator)
                  for a, b in zip(p, q)]
        expr = sympy.expand(_to_sympy(g, coords))
        if expr == 0:
            continue
        for root in sympy.Poly(expr, s).ground_roots():
            r = Fraction(int(root.p), int(root.q))
            point = tuple(a + r * b for a, b in zip(p, q))
            if any(point) and point not in found:
                found.append(point)
    return found


@dataclass
class DirectionVerdict:
    direction: tuple
    in_exp_cone: bool
    in_tangent_cone: bool


@dataclass
class ExpConeReport:
    polynomial: MultiPoly
    initial_form: Optional[MultiPoly]  # None: empty cone
    verdicts: list = field(default_factory=list)
    rational_tc_points: list = field(default_factory=list)
    rational_components: Optional[bool] = None

    @property
    def accepted(self) -> list:
        return [v.direction for v in self.verdicts if v.in_exp_cone]

    @property
    def inclusion_holds(self) -> bool:
        """Every direction of the exponential cone lies in the tangent cone."""
        return all(v.in_tangent_cone for v in self.verdicts if v.in_exp_cone)

    @property
    def gap_witnesses(self) -> list:
        """Tested directions in the tangent cone but not in the exponential cone."""
        return [v.direction for v in self.verdicts if v.in_tangent_cone and not v.in_exp_cone]

    @property
    def proper_containment(self) -> Optional[str]:
        """Why the exponential cone is strictly smaller, if that was established."""
        if self.initial_form is None:
            return None
        if self.gap_witnesses:
            return "a rational tangent-cone direction is not an exponential direction"
        missing = [p for p in self.rational_tc_points if not exp_direction_vanishes(self.polynomial, p)]
        if missing:
            return "a rational tangent-cone point is not an exponential direction"
        if self.rational_components is False:
            return "the tangent cone has components not defined over Q"
        return None


def exp_tangent_cone_report(f: MultiPoly, directions: Sequence, seed: int = 0) -> ExpConeReport:
    g = tangent_cone_hypersurface(f)
    report = ExpConeReport(f, g)
    for x in directions:
        x = tuple(Fraction(c) for c in x)
        in_tau = exp_direction_vanishes(f, x)
        in_tc = g is not None and g.evaluate(x) == 0
        report.verdicts.append(DirectionVerdict(x, in_tau, in_tc))
    if g is not None:
        report.rational_tc_points = rational_points_on_form(g, seed=seed)
        report.rational_components = rational_components(g)
    return report


def probe_directions(n: int, count: int, seed: int = 0) -> list:
    """The zero direction, the coordinate axes, then random rational directions."""
    rng = random.Random(seed)
    out = [tuple(Fraction(0) for _ in range(n))]
    out += [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    while len(out) < count:
        p = random_point(rng, n, nonzero=True)
        if p not in out:
            out.append(p)
    return out[:count]
