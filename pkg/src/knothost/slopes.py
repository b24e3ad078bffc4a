"""Slope knots K(m, n) on genus-one fiber surfaces.

Coordinates are taken with respect to a fixed symplectic basis of the
fiber's first homology; ``(m, n)`` is used purely as an identifier.
"""

from __future__ import annotations

import functools
import math
from typing import NamedTuple

from .knots import AliasTable, FiberSurface, KnotAtom, Slope


class SlopePair(NamedTuple):
    m: int
    n: int

    @property
    def primitive(self) -> bool:
        return self.m >= 1 and self.n >= 1 and math.gcd(self.m, self.n) == 1


def _check(s: SlopePair) -> None:
    if not s.primitive:
        raise ValueError(f"{tuple(s)} is not a primitive pair of positive integers")


def enumerate_primitive_pairs(bound: int) -> list[SlopePair]:
    """All coprime (m, n) with 1 <= m, n <= bound, lexicographically."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return [
        SlopePair(m, n)
        for m in range(1, bound + 1)
        for n in range(1, bound + 1)
        if math.gcd(m, n) == 1
    ]


def slope_euler(s: SlopePair) -> int:
    """Euler characteristic -m^2 - mn - n^2 + 2m + 2n of the Seifert-algorithm surface."""
    _check(s)
    m, n = s
    return -m * m - m * n - n * n + 2 * m + 2 * n


def slope_genus(s: SlopePair) -> int:
    """Genus (m^2 + n^2 + mn - 2m - 2n + 1) / 2 of K(m, n) on the trefoil fiber."""
    _check(s)
    m, n = s
    numerator = m * m + n * n + m * n - 2 * m - 2 * n + 1
    if numerator % 2:
        raise ArithmeticError(f"odd genus numerator {numerator} for {tuple(s)}")
    return numerator // 2


def is_degenerate(s: SlopePair) -> bool:
    return tuple(s) == (1, 1)


@functools.lru_cache(maxsize=None)
def _assert_monotone(limit: int = 100) -> bool:
    # inverse_genus prunes rows and columns on strict monotonicity; verify it
    # over the raw formula (primitivity plays no role in the inequality).
    def g2(m, n):
        return m * m + n * n + m * n - 2 * m - 2 * n + 1

    for m in range(1, limit + 1):
        for n in range(1, limit + 1):
            if not (g2(m + 1, n) > g2(m, n) and g2(m, n + 1) > g2(m, n)):
                raise AssertionError(f"genus formula not monotone at ({m},{n})")
    return True


def inverse_genus(g: int) -> set[SlopePair]:
    """Every primitive pair whose trefoil-fiber slope knot has genus ``g``.

    The search walks rows m = 1, 2, ... and stops a row as soon as the genus
    exceeds ``g``; the whole search stops once the first entry of a row does.
    Both cutoffs rely on the formula increasing strictly in each coordinate.
    """
    if g < 0:
        raise ValueError("genus must be non-negative")
    _assert_monotone()
    target = 2 * g
    found = set()
    m = 1
    while True:
        def g2(n, m=m):
            return m * m + n * n + m * n - 2 * m - 2 * n + 1

        if g2(1) > target:
            return found
        n = 1
        while g2(n) <= target:
            if g2(n) == target and math.gcd(m, n) == 1:
                found.add(SlopePair(m, n))
            n += 1
        m += 1


def identify_slope_knot(
    fiber: FiberSurface, s: SlopePair, aliases: AliasTable
) -> KnotAtom | None:
    """The known knot type of K(m, n) on ``fiber``, or None when unidentified."""
    _check(s)
    atom = Slope(fiber, s.m, s.n)
    resolved = aliases.resolve(atom)
    return None if resolved == atom else resolved


def atlas_rows(bound: int, aliases: AliasTable, fiber: FiberSurface = FiberSurface.TREFOIL):
    rows = []
    for s in enumerate_primitive_pairs(bound):
        ident = identify_slope_knot(fiber, s, aliases)
        trefoil = fiber is FiberSurface.TREFOIL
        rows.append(
            {
                "m": s.m,
                "n": s.n,
                "genus": slope_genus(s) if trefoil else None,
                "euler": slope_euler(s) if trefoil else None,
                "identified_as": str(ident) if ident is not None else "unidentified",
                "degenerate": trefoil and is_degenerate(s),
            }
        )
    return rows
