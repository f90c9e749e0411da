"""Instances, counts vectors, exponent vectors and solutions.

A solution ``1 <= x_1 <= ... <= x_n`` of ``n(x_1+...+x_n) = x_1...x_n`` is
stored by its counts vector ``a_1..a_{x_n}``, where ``a_i`` is the number of
parts equal to ``i``.  In that form the equation reads

    n * (n + s) = 2^a_2 * 3^a_3 * ... * x_n^a_{x_n},   s = sum (i-1) a_i.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .numerics import p_adic_valuation, primes_up_to

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Instance:
    """A fixed largest part ``x_n`` together with the primes up to it."""

    x_n: int

    def __post_init__(self) -> None:
        if self.x_n < 1:
            raise ValueError(f"x_n must be >= 1, got {self.x_n}")

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return primes_up_to(self.x_n)

    @property
    def k(self) -> int:
        return len(self.primes)

    @cached_property
    def valuations(self) -> dict[int, tuple[int, ...]]:
        """``i -> (nu_{p_1}(i), ..., nu_{p_k}(i))`` for ``2 <= i <= x_n``."""
        return {
            i: tuple(p_adic_valuation(p, i) for p in self.primes)
            for i in range(2, self.x_n + 1)
        }


@lru_cache(maxsize=None)
def make_instance(x_n: int) -> Instance:
    return Instance(x_n)


def _factor_small(i: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= i:
        while i % d == 0:
            out[d] = out.get(d, 0) + 1
            i //= d
        d += 1
    if i > 1:
        out[i] = out.get(i, 0) + 1
    return out


@dataclass(frozen=True)
class CountsVector:
    """Multiplicities of the values ``1..x_n``.

    Only nonzero counts are stored, so family solutions with a huge largest
    part stay cheap; ``a`` materialises the full list on demand.
    """

    x_n: int
    nonzero: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 0
        for value, count in self.nonzero:
            if not 1 <= value <= self.x_n:
                raise ValueError(f"value {value} outside [1, {self.x_n}]")
            if value <= last:
                raise ValueError("nonzero entries must be strictly increasing")
            if count <= 0:
                raise ValueError("stored counts must be positive")
            last = value
        if not self.nonzero or self.nonzero[-1][0] != self.x_n:
            raise ValueError("a_{x_n} must be >= 1")

    @classmethod
    def from_list(cls, a: Sequence[int]) -> "CountsVector":
        """Build from ``[a_1, ..., a_{x_n}]``; ``x_n = len(a)``."""
        if any(c < 0 for c in a):
            raise ValueError("counts must be nonnegative")
        return cls(len(a), tuple((i, c) for i, c in enumerate(a, start=1) if c))

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "CountsVector":
        counter = Counter(parts)
        if not counter or min(counter) < 1:
            raise ValueError("parts must be positive integers")
        return cls(max(counter), tuple(sorted(counter.items())))

    @property
    def instance(self) -> Instance:
        return make_instance(self.x_n)

    @property
    def a(self) -> list[int]:
        out = [0] * self.x_n
        for value, count in self.nonzero:
            out[value - 1] = count
        return out

    def count(self, value: int) -> int:
        for v, c in self.nonzero:
            if v == value:
                return c
        return 0

    @property
    def total(self) -> int:
        return sum(c for _, c in self.nonzero)

    @property
    def non_one_total(self) -> int:
        return sum(c for v, c in self.nonzero if v >= 2)


@dataclass(frozen=True)
class ExponentVector:
    instance: Instance
    b: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.b)

    def value(self) -> int:
        return math.prod(p**e for p, e in zip(self.instance.primes, self.b))


@dataclass(frozen=True)
class Solution:
    n: int
    counts: CountsVector

    @classmethod
    def from_tuple(cls, row: Sequence[int]) -> "Solution":
        """``[n, a_1, ..., a_{x_n}]`` as printed in solution lists."""
        return cls(int(row[0]), CountsVector.from_list([int(v) for v in row[1:]]))

    @property
    def x_n(self) -> int:
        return self.counts.x_n

    def as_tuple(self) -> tuple[int, ...]:
        return (self.n, *self.counts.a)

    def sort_key(self) -> tuple:
        return (self.x_n, self.n, tuple(self.counts.a))

    def to_json(self) -> str:
        return json.dumps(
            {"schema_version": SCHEMA_VERSION, "x_n": self.x_n, "n": str(self.n), "a": self.counts.a},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "Solution":
        obj = json.loads(line)
        if not isinstance(obj, dict):
            raise ValueError("expected a JSON object")
        version = obj.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {version}")
        x_n, a = obj["x_n"], obj["a"]
        if not isinstance(a, list) or len(a) != x_n:
            raise ValueError(f"'a' must be a list of length x_n={x_n}")
        if not isinstance(obj["n"], str) or not obj["n"].isdigit():
            raise ValueError("'n' must be a decimal string")
        return cls(int(obj["n"]), CountsVector.from_list([int(v) for v in a]))


def canonical_order(solutions: Iterable[Solution]) -> list[Solution]:
    """Deterministic ordering: by ``x_n``, then ``n``, then counts."""
    return sorted(set(solutions), key=Solution.sort_key)


def counts_to_exponents(c: CountsVector) -> ExponentVector:
    """Prime exponents of ``prod_{i>=2} i^{a_i}``.

    ``b_j = sum_i nu_{p_j}(i) * a_i``.
    """
    inst = c.instance
    index = {p: j for j, p in enumerate(inst.primes)}
    b = [0] * inst.k
    for value, count in c.nonzero:
        if value < 2:
            continue
        for p, e in _factor_small(value).items():
            b[index[p]] += e * count
    return ExponentVector(inst, tuple(b))


def weighted_sum(c: CountsVector) -> int:
    """``s = sum_{i>=2} (i - 1) a_i``."""
    return sum((v - 1) * cnt for v, cnt in c.nonzero)


def counts_product(c: CountsVector) -> int:
    return math.prod(v**cnt for v, cnt in c.nonzero if v >= 2)


def verify_solution(sol: Solution) -> bool:
    c = sol.counts
    if sol.n < 1 or c.total != sol.n or c.count(c.x_n) < 1:
        return False
    return sol.n * (sol.n + weighted_sum(c)) == counts_product(c)


def expand_solution(sol: Solution) -> list[int]:
    if not verify_solution(sol):
        raise ValueError(f"not a solution: {sol.as_tuple()}")
    out: list[int] = []
    for value, count in sol.counts.nonzero:
        out.extend([value] * count)
    return out
