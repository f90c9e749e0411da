"""Explicit infinite families of solutions.

Each family has a closed-form list of non-one parts; the rest of the ``n``
parts are ones.  Their largest parts give upper bounds on ``g(n)``, the
smallest possible largest part of a solution with ``n`` parts.
"""

from __future__ import annotations

import enum
import math
from collections import Counter

from .model import CountsVector, Solution, verify_solution


class FamilyKind(enum.Enum):
    TwoBig = "TwoBig"
    ThreeNMinus2 = "ThreeNMinus2"
    ShiuSquare = "ShiuSquare"
    CubeFamily = "CubeFamily"


def cube_family_n(m: int) -> int:
    """``n = m^3 + 3m^2 - 4m``, so that ``n (n + 6m) = m^2 (m-1)(m+1)(m+2)(m+4)``."""
    return m**3 + 3 * m**2 - 4 * m


def printed_cube_family_n(m: int) -> int:
    """The sign variant ``m^3 - 3m^2 - 4m``; kept only to show that it fails."""
    return m**3 - 3 * m**2 - 4 * m


def _parts(kind: FamilyKind, param: int) -> tuple[int, list[int]]:
    """``(n, non-one parts)`` for one family member."""
    if kind is FamilyKind.TwoBig:
        n = param
        return n, [n + 1, 2 * n * n - n]
    if kind is FamilyKind.ThreeNMinus2:
        n = param
        return n, [2 * n, 3 * n - 2]
    if kind is FamilyKind.ShiuSquare:
        m = param
        return m * m, [m, m, m, m + 4]
    if kind is FamilyKind.CubeFamily:
        m = param
        return cube_family_n(m), [m - 1, m, m, m + 1, m + 2, m + 4]
    raise ValueError(f"unknown family {kind!r}")


def _from_parts(n: int, parts: list[int]) -> Solution:
    ones = n - len(parts)
    if ones < 0:
        raise ValueError("more non-one parts than n")
    counter = Counter(parts)
    counter[1] += ones
    nonzero = tuple((v, c) for v, c in sorted(counter.items()) if c)
    return Solution(n, CountsVector(max(counter), nonzero))


def family_solution(kind: FamilyKind, param: int) -> Solution:
    if param < 2:
        raise ValueError(f"{kind.value} needs parameter >= 2, got {param}")
    n, parts = _parts(kind, param)
    sol = _from_parts(n, parts)
    if not verify_solution(sol):
        raise ArithmeticError(f"{kind.value}({param}) does not verify")
    return sol


def printed_cube_candidate(m: int) -> Solution:
    """The six cube-family parts padded with ones to ``m^3 - 3m^2 - 4m`` parts.

    Not a solution in general; e.g. ``m = 5`` gives ``n = 30`` and
    ``30 * 60 = 1800`` against a product of ``37800``.
    """
    return _from_parts(printed_cube_family_n(m), [m - 1, m, m, m + 1, m + 2, m + 4])


def _cube_parameter(n: int) -> int | None:
    """``m >= 2`` with ``cube_family_n(m) == n``; the map is increasing there."""
    lo, hi = 2, 2
    while cube_family_n(hi) < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if cube_family_n(mid) < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if cube_family_n(lo) == n else None


def g_upper_bound_witness(n: int) -> tuple[Solution, int] | None:
    """A family solution with ``n`` parts and the smallest available largest part."""
    if n < 2:
        return None
    candidates = [(FamilyKind.ThreeNMinus2, n)]
    r = math.isqrt(n)
    if r * r == n and r >= 2:
        candidates.append((FamilyKind.ShiuSquare, r))
    m = _cube_parameter(n)
    if m is not None:
        candidates.append((FamilyKind.CubeFamily, m))
    best = min((family_solution(kind, p) for kind, p in candidates), key=lambda s: s.x_n)
    return best, best.x_n
