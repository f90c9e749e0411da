"""Exhaustive search over counts vectors for a fixed largest part.

For a counts assignment ``(a_2, ..., a_{x_n})`` put ``s = sum (i-1) a_i`` and
``P = prod i^{a_i}``.  Then ``n`` solves ``n^2 + s n - P = 0``, so a solution
exists iff ``s^2 + 4P = t^2`` and it is ``n = (t - s) / 2``; it is admissible
iff ``a_1 = n - sum a_i >= 0``.  The loop nest is bounded by the total bound
on ``b = sum Omega(i) a_i`` and the per-prime bounds on ``b_j``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

from .model import CountsVector, Instance, Solution, canonical_order, make_instance
from .numerics import is_perfect_square
from .reducer import BoundSet

log = logging.getLogger(__name__)

# hand-written loop order of the published x_n = 10 search
PAPER_ORDER_10 = (10, 7, 5, 9, 6, 3, 8, 4, 2)


@dataclass(frozen=True)
class SearchSpace:
    instance: Instance
    bounds: BoundSet
    order: str = "weight"
    # restriction of the outermost loop; None means its full range
    outer_values: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.bounds.instance.x_n != self.instance.x_n:
            raise ValueError("bounds belong to a different instance")
        if self.order not in ("weight", "paper"):
            raise ValueError(f"unknown loop order {self.order!r}")
        if self.order == "paper" and self.instance.x_n != 10:
            raise ValueError("order='paper' exists only for x_n = 10")

    @property
    def weight_table(self) -> dict[int, tuple[tuple[int, ...], int]]:
        """``i -> (valuation vector, Omega(i))``."""
        return {i: (v, sum(v)) for i, v in self.instance.valuations.items()}

    def caps(self) -> tuple[int, ...]:
        """Capacities: the total bound, then one per odd prime."""
        return (self.bounds.total_bound, *self.bounds.prime_caps()[1:])


@dataclass(frozen=True)
class LoopVar:
    value: int
    lower: int
    weights: tuple[int, ...]  # per constraint, aligned with SearchSpace.caps()
    valuation: tuple[int, ...]

    @property
    def s_weight(self) -> int:
        return self.value - 1

    def limit(self, remaining: Sequence[int]) -> int:
        return min(r // w for r, w in zip(remaining, self.weights) if w)


@dataclass(frozen=True)
class LoopPlan:
    variables: tuple[LoopVar, ...]
    caps: tuple[int, ...]
    cap_names: tuple[str, ...]

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(v.value for v in self.variables)

    def outer_range(self) -> range:
        first = self.variables[0]
        return range(first.lower, first.limit(self.caps) + 1)

    def describe(self) -> list[str]:
        """Loop headers with their residual-capacity limits, outermost first."""
        lines = []
        for depth, var in enumerate(self.variables):
            terms = []
            for c, w in enumerate(var.weights):
                if not w:
                    continue
                expr = self.cap_names[c]
                for prev in self.variables[:depth]:
                    pw = prev.weights[c]
                    if pw:
                        expr += f"-{pw if pw > 1 else ''}a{prev.value}"
                if w > 1:
                    expr = f"floor(({expr})/{w})" if "-" in expr else f"floor({expr}/{w})"
                terms.append(expr)
            limit = terms[0] if len(terms) == 1 else f"min({', '.join(terms)})"
            lines.append(f"for a{var.value} := {var.lower} to {limit}")
        return lines


def loop_plan(space: SearchSpace) -> LoopPlan:
    """Loop order and per-variable weights.

    ``a_{x_n}`` (the only variable with lower limit 1) is outermost, the rest
    follow by descending ``Omega(i)`` with ties broken by descending ``i``.
    """
    inst = space.instance
    table = space.weight_table
    x_n = inst.x_n
    if space.order == "paper":
        order = PAPER_ORDER_10
    else:
        rest = sorted((i for i in table if i != x_n), key=lambda i: (-table[i][1], -i))
        order = (x_n, *rest)
    variables = []
    for i in order:
        valuation, omega = table[i]
        variables.append(LoopVar(i, 1 if i == x_n else 0, (omega, *valuation[1:]), valuation))
    names = ("B1", *(f"B{j}" for j in range(2, inst.k + 1)))
    return LoopPlan(tuple(variables), space.caps(), names)


def partition_work(space: SearchSpace, shards: int) -> list[SearchSpace]:
    """Split the outermost loop range round-robin into ``shards`` slices."""
    if shards < 1:
        raise ValueError("shards must be >= 1")
    if shards == 1:
        return [space]
    values = outer_values(space)
    return [replace(space, outer_values=tuple(values[i::shards])) for i in range(shards)]


def outer_values(space: SearchSpace) -> list[int]:
    """Values of the outermost loop variable covered by ``space``."""
    full = loop_plan(space).outer_range()
    if space.outer_values is None:
        return list(full)
    return [v for v in space.outer_values if v in full]


def _solution_from_counts(inst: Instance, counts: dict[int, int]) -> Solution | None:
    """Exact discriminant test for one leaf."""
    s = 0
    P = 1
    total = 0
    for i, a in counts.items():
        s += (i - 1) * a
        P *= i**a
        total += a
    discr = s * s + 4 * P
    t = is_perfect_square(discr)
    if t is None:
        return None
    assert (t - s) % 2 == 0, "t and s must have equal parity"
    n = (t - s) // 2
    assert n >= 1
    a1 = n - total
    if a1 < 0:
        return None
    full = [a1] + [counts.get(i, 0) for i in range(2, inst.x_n + 1)]
    return Solution(n, CountsVector.from_list(full))


def _scan_python(plan: LoopPlan, inst: Instance, outer: int, stats: list[int]) -> list[Solution]:
    variables = plan.variables
    nv = len(variables)
    assignment = [0] * nv
    found: list[Solution] = []
    first = variables[0]
    remaining = [c - outer * w for c, w in zip(plan.caps, first.weights)]
    if min(remaining) < 0:
        return found
    assignment[0] = outer
    order = plan.order

    def leaf(s: int, P: int, nonone: int) -> None:
        stats[0] += 1
        t = is_perfect_square(s * s + 4 * P)
        if t is None:
            return
        assert (t - s) % 2 == 0, "t and s must have equal parity"
        n = (t - s) // 2
        if n >= nonone:
            found.append(_solution_from_counts(inst, dict(zip(order, assignment))))

    def descend(depth: int, rem: list[int], s: int, P: int, nonone: int) -> None:
        var = variables[depth]
        hi = var.limit(rem)
        if depth == nv - 1:
            P *= var.value**var.lower
            s += var.s_weight * var.lower
            for a in range(var.lower, hi + 1):
                assignment[depth] = a
                leaf(s, P, nonone + a)
                P *= var.value
                s += var.s_weight
            return
        for a in range(var.lower, hi + 1):
            assignment[depth] = a
            descend(
                depth + 1,
                [r - a * w for r, w in zip(rem, var.weights)],
                s + a * var.s_weight,
                P * var.value**a,
                nonone + a,
            )

    s0, P0 = outer * first.s_weight, first.value**outer
    if nv == 1:
        leaf(s0, P0, outer)
    else:
        descend(1, remaining, s0, P0, outer)
    return found


class _NumbaScanner:
    def __init__(self, plan: LoopPlan, inst: Instance):
        import numpy as np

        from . import _kernel

        self._np = np
        self._kernel = _kernel
        self.plan = plan
        self.inst = inst
        vs = plan.variables
        self.wc = np.array([v.weights for v in vs], dtype=np.int64)
        self.vb = np.array([v.valuation for v in vs], dtype=np.int64)
        self.sw = np.array([v.s_weight for v in vs], dtype=np.int64)
        self.lo = np.array([v.lower for v in vs], dtype=np.int64)
        self.vals = np.array([v.value for v in vs], dtype=np.int64)
        self.caps = np.array(plan.caps, dtype=np.int64)
        self.mods = np.array(_kernel.MODULI, dtype=np.int64)
        self.powtab = _kernel.power_tables(inst.primes, max(plan.caps))
        self.qrtab = _kernel.residue_tables()

    def __call__(self, outer: int, stats: list[int]) -> list[Solution]:
        np = self._np
        size = 1 << 16
        while True:
            out = np.zeros((size, len(self.plan.variables)), dtype=np.int64)
            counter = np.zeros(1, dtype=np.int64)
            count = self._kernel.scan(
                self.wc, self.vb, self.sw, self.lo, self.vals, self.caps, outer,
                self.mods, self.powtab, self.qrtab, out, counter,
            )
            if count >= 0:
                break
            size *= 4
        stats[0] += int(counter[0])
        found = []
        for row in out[:count]:
            counts = {v: int(a) for v, a in zip(self.plan.order, row)}
            sol = _solution_from_counts(self.inst, counts)
            if sol is not None:
                found.append(sol)
        return found


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def make_scanner(space: SearchSpace, backend: str = "auto") -> Callable[[int, list[int]], list[Solution]]:
    plan = loop_plan(space)
    if backend == "auto":
        backend = "numba" if numba_available() else "python"
    if backend == "numba":
        return _NumbaScanner(plan, space.instance)
    if backend == "python":
        return lambda outer, stats: _scan_python(plan, space.instance, outer, stats)
    raise ValueError(f"unknown backend {backend!r}")


def enumerate_solutions(
    space: SearchSpace,
    backend: str = "auto",
    skip: Iterable[int] = (),
    on_unit: Callable[[int, list[Solution], int], None] | None = None,
) -> list[Solution]:
    """All solutions inside ``space``, canonically ordered.

    ``skip`` lists outer-loop values already done (resumed runs);
    ``on_unit(value, solutions, leaves)`` is called after each outer value.
    """
    if space.instance.x_n < 3:
        raise ValueError("use enumerate_trivial for x_n < 3")
    scanner = make_scanner(space, backend)
    done = set(skip)
    found: list[Solution] = []
    for outer in outer_values(space):
        if outer in done:
            continue
        stats = [0]
        unit = scanner(outer, stats)
        log.debug("x_n=%d outer=%d leaves=%d solutions=%d", space.instance.x_n, outer, stats[0], len(unit))
        found.extend(unit)
        if on_unit is not None:
            on_unit(outer, unit, stats[0])
    return canonical_order(found)


def enumerate_trivial(x_n: int) -> list[Solution]:
    """Solutions with largest part 1 or 2.

    ``x_n = 1`` forces ``n^2 = n``.  For ``x_n = 2`` both ``n`` and ``n + a_2``
    are powers of two with ``a_2 <= n``, hence ``a_2 = n = 2^u`` and
    ``2u + 1 = 2^u``, which holds only for ``u = 0``: the single solution
    ``n = 1, x_1 = 2``.
    """
    if x_n == 1:
        return [Solution.from_tuple([1, 1])]
    if x_n == 2:
        found = []
        # 2^u outgrows 2u + 1 from u = 3 on
        for u in range(8):
            n = 2**u
            if 2 * u + 1 == n:
                found.append(Solution.from_tuple([n, 0, n]))
        return found
    raise ValueError("enumerate_trivial covers x_n in {1, 2} only")


def search_space(x_n: int, bounds: BoundSet, order: str = "weight") -> SearchSpace:
    return SearchSpace(make_instance(x_n), bounds, order)
