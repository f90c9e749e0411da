"""Slow independent solvers for cross-checking the enumerator on small inputs.

Neither uses the discriminant or the square test: the first checks the
original equation on explicit multisets, the second looks for ``n`` among
the divisors of the product.
"""

from __future__ import annotations

import itertools
import math

from .model import CountsVector, Instance, Solution, canonical_order

MAX_N = 2000
MAX_PART = 10
MAX_COUNT_CAP = 25


def brute_force_by_multiset(n_max: int, x_max: int) -> list[Solution]:
    """Every solution with ``n <= n_max`` and largest part ``<= x_max``."""
    if not 1 <= n_max <= MAX_N:
        raise ValueError(f"n_max must be in [1, {MAX_N}]")
    if not 1 <= x_max <= MAX_PART:
        raise ValueError(f"x_max must be in [1, {MAX_PART}]")
    found: list[Solution] = []

    for n in range(1, n_max + 1):
        parts: list[int] = []

        def visit(top: int, total: int, product: int) -> None:
            # total = sum of all n parts with the unfilled ones counted as 1
            if n * total == product:
                ones = n - len(parts)
                found.append(Solution(n, CountsVector.from_parts([1] * ones + parts)))
            if len(parts) == n:
                return
            room = n - len(parts)
            for y in range(top, 1, -1):
                new_product = product * y
                # parts come in non-increasing order, so each later one
                # raises the sum by at most y - 1 and the product never drops
                if new_product > n * (total + (y - 1) * room):
                    continue
                parts.append(y)
                visit(y, total + y - 1, new_product)
                parts.pop()

        visit(x_max, n, 1)
    return canonical_order(found)


def _divisors(factors: list[tuple[int, int]]):
    divs = [1]
    for p, e in factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return divs


def brute_force_by_counts(a_cap: int, instance: Instance) -> list[Solution]:
    """Solutions with ``a_i <= a_cap`` for ``2 <= i <= x_n`` and ``a_{x_n} >= 1``."""
    if not 0 <= a_cap <= MAX_COUNT_CAP:
        raise ValueError(f"a_cap must be in [0, {MAX_COUNT_CAP}]")
    x_n = instance.x_n
    if x_n < 2:
        raise ValueError("x_n must be >= 2")
    primes = instance.primes
    vals = instance.valuations
    found: list[Solution] = []
    ranges = [range(a_cap + 1)] * (x_n - 2) + [range(1, a_cap + 1)]
    for counts in itertools.product(*ranges):
        s = sum((i - 1) * a for i, a in enumerate(counts, start=2))
        exps = [sum(vals[i][j] * a for i, a in enumerate(counts, start=2)) for j in range(len(primes))]
        P = math.prod(p**e for p, e in zip(primes, exps))
        used = sum(counts)
        for d in _divisors(list(zip(primes, exps))):
            if d >= used and d * d <= P and d * (d + s) == P:
                found.append(Solution(d, CountsVector.from_list([d - used, *counts])))
    return canonical_order(found)
