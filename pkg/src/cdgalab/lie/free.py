"""Free Lie algebras inside the tensor algebra, with the Lyndon basis.

Lie elements are dicts ``word -> coefficient`` where a word is a tuple of
generator indices.  Each Lyndon word ``w`` has a standard bracketing
``P(w)``; its expansion has ``w`` as lexicographically smallest word with
coefficient 1, which makes expressing a Lie polynomial in the Lyndon basis a
triangular reduction.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

ZERO = Fraction(0)


def lyndon_words(n: int, max_len: int) -> list:
    """All Lyndon words over ``0..n-1`` of length ``<= max_len`` (Duval's algorithm)."""
    if n < 1 or max_len < 1:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()
    return out


def is_lyndon(w: Sequence[int]) -> bool:
    w = tuple(w)
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w: tuple) -> tuple:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def bracket_tree(w: tuple):
    """Nested pairs describing the standard bracketing of a Lyndon word."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (bracket_tree(u), bracket_tree(v))


def format_tree(tree, names: Sequence[str]) -> str:
    if isinstance(tree, int):
        return names[tree]
    return f"[{format_tree(tree[0], names)},{format_tree(tree[1], names)}]"


def add(x: dict, y: dict, c=1) -> dict:
    out = dict(x)
    for w, a in y.items():
        v = out.get(w, ZERO) + c * a
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def scale(x: dict, c) -> dict:
    return {w: c * a for w, a in x.items() if c * a}


def bracket(x: dict, y: dict, max_len: int = 0) -> dict:
    """``xy - yx`` in the tensor algebra, dropping words longer than ``max_len`` if set."""
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            if max_len and len(u) + len(v) > max_len:
                continue
            c = a * b
            uv, vu = u + v, v + u
            out[uv] = out.get(uv, ZERO) + c
            out[vu] = out.get(vu, ZERO) - c
    return {w: c for w, c in out.items() if c}


def generator(i: int) -> dict:
    return {(i,): Fraction(1)}


@lru_cache(maxsize=None)
def _expansion(w: tuple) -> tuple:
    if len(w) == 1:
        return ((w, Fraction(1)),)
    u, v = standard_factorization(w)
    e = bracket(dict(_expansion(u)), dict(_expansion(v)))
    return tuple(sorted(e.items()))


def expand(w: tuple) -> dict:
    """Tensor expansion of the standard bracketing of the Lyndon word ``w``."""
    return dict(_expansion(tuple(w)))


def to_lyndon(x: dict) -> dict:
    """Coordinates of a Lie polynomial in the Lyndon basis; raises if ``x`` is not Lie."""
    x = dict(x)
    out = {}
    while x:
        w = min(x)
        if not is_lyndon(w):
            raise ValueError(f"not a Lie element: smallest word {w} is not Lyndon")
        c = x[w]
        out[w] = c
        x = add(x, expand(w), -c)
    return out


def from_lyndon(coords: dict) -> dict:
    out: dict = {}
    for w, c in coords.items():
        out = add(out, expand(w), c)
    return out


def witt_number(n: int, k: int) -> int:
    """Dimension of the degree-``k`` part of the free Lie algebra on ``n`` generators."""
    total = 0
    for d in range(1, k + 1):
        if k % d == 0:
            total += _mobius(d) * n ** (k // d)
    return total // k


def _mobius(d: int) -> int:
    result = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            result = -result
        p += 1
    if d > 1:
        result = -result
    return result


def lyndon_basis(n: int, max_degree: int) -> list:
    """Per-degree lists (index 0 is degree 1) of standard-bracketed Lyndon words."""
    words = lyndon_words(n, max_degree)
    out = [[] for _ in range(max_degree)]
    for w in sorted(words, key=lambda w: (len(w), w)):
        out[len(w) - 1].append(w)
    return out
