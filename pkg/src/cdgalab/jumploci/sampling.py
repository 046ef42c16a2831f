"""Deterministic pseudo-random rational points for sampling checks."""
from __future__ import annotations

import random
from fractions import Fraction


def random_rational(rng: random.Random, height: int = 5, denominators: int = 3) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, denominators))


def random_point(rng: random.Random, n: int, nonzero: bool = False, height: int = 5) -> tuple:
    while True:
        p = tuple(random_rational(rng, height) for _ in range(n))
        if not nonzero or any(p):
            return p


def sample_points(n: int, count: int, seed: int = 0, nonzero: bool = False, exclude=()) -> list:
    """``count`` distinct points; the height grows when small values run out."""
    rng = random.Random(seed)
    seen = {tuple(p) for p in exclude}
    out, height, misses = [], 5, 0
    if n == 0:
        return [] if () in seen or not count else [()]
    while len(out) < count:
        p = random_point(rng, n, nonzero, height)
        if p in seen:
            misses += 1
            if misses > 20:
                height, misses = 2 * height, 0
            continue
        seen.add(p)
        out.append(p)
    return out
