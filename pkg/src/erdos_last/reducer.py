"""Shrinking the Baker bound with LLL (de Weger / Smart reduction).

For ``b >= 17`` the linear form ``L = sum_i x_i log p_i`` with
``x_i = b_i' - b_i''`` satisfies

    |L| < 46 (x_n - 1) exp(-(log 2 / 2.1) b)            (total bound)
    |L| < 2 (x_n - 1) B exp(-(log p_j / 2) b_j)         (exponent of p_j)

and the reduction lemma turns a lattice lower bound ``C1`` into a new bound
``H`` on ``b`` (resp. ``b_j``).  Every bound is clamped below at 16: the case
``b <= 16`` is outside the inequality but is covered by the enumeration.

Two modes are provided.  ``"paper"`` pins the scales ``C`` and the constants
to the published tables and replays that schedule.  ``"auto"`` picks ``C``
itself, replaces the factor ``x_n - 1`` by the sharper ``weight_ratio``, takes
the Gram-Schmidt minimum of the reduced basis as the lattice lower bound and
only uses per-coordinate bounds that are provably valid.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import iv

from .lll import LatticeBasis, gram_schmidt_lower_bound, lll_reduce, shortest_vector_lower_bound
from .model import Instance
from .numerics import certified_floor_scaled_log, interval_bounds, iv_digits

FLOOR_CUTOFF = 16
MAX_ITERATIONS = 10
MAX_ESCALATIONS = 5
# decades scanned above the smallest admissible C in auto mode
AUTO_C_SCAN = 8

# Published schedule, keyed by k = pi(x_n).
PAPER_B0 = {2: 44 * 10**9, 3: 16 * 10**12, 4: 4 * 10**15}
PAPER_GROUP_XMAX = {2: 4, 3: 6, 4: 10}
PAPER_TOTAL_C = {
    2: (10**23, 10**5, 10**4),
    3: (10**42, 10**10, 5 * 10**8),
    4: (10**67, 10**14, 2 * 10**12),
}
PAPER_PRIME_C = {
    2: {3: (10**4, 10**4)},
    3: {3: (5 * 10**7, 5 * 10**6), 5: (5 * 10**7, 5 * 10**6)},
    4: {3: (2 * 10**12, 2 * 10**10), 5: (2 * 10**12, 7 * 10**9), 7: (2 * 10**12, 5 * 10**9)},
}
PAPER_FINAL = {2: (33, (18,)), 3: (60, (32, 21)), 4: (87, (49, 31, 25))}
PAPER_INTERMEDIATE_TOTAL = {2: (97, 37), 3: (219, 66), 4: (372, 101)}
PAPER_INTERMEDIATE_PRIME = {2: (20,), 3: (35, 24), 4: (54, 37, 30)}


class ReductionError(RuntimeError):
    """The reduction lemma precondition could not be met."""


@dataclass(frozen=True)
class LogRatio:
    """The constant ``log(p) / divisor``."""

    p: int
    divisor: Fraction

    def interval(self):
        return iv.log(iv.mpf(self.p)) / iv.mpf(self.divisor.numerator) * self.divisor.denominator

    def __str__(self) -> str:
        return f"log({self.p})/{self.divisor}"


@dataclass(frozen=True)
class ReductionConfig:
    X: tuple[int, ...]
    C: int
    C2: Fraction
    C3: LogRatio
    q: int = 1

    def __post_init__(self) -> None:
        if self.q != 1:
            raise ValueError("only q = 1 is supported")
        if self.C < self.X0**self.m:
            raise ValueError(f"C = {self.C} is below X0^m = {self.X0 ** self.m}")

    @property
    def m(self) -> int:
        return len(self.X)

    @property
    def X0(self) -> int:
        return max(self.X)

    @property
    def S(self) -> Fraction:
        return Fraction(sum(x * x for x in self.X[:-1]))

    @property
    def T(self) -> Fraction:
        return Fraction(1, 2) + Fraction(sum(self.X), 2)


@dataclass(frozen=True)
class IterationRecord:
    stage: str
    C: int
    X: tuple[int, ...]
    C2: str
    C3: str
    C1_squared: str
    S: str
    T: str
    precondition: bool
    H_upper: str | None
    new_bound: int | None
    escalations: int = 0


@dataclass(frozen=True)
class BoundSet:
    instance: Instance
    total_bound: int
    per_prime: tuple[int, ...] = ()
    floor_cutoff: int = FLOOR_CUTOFF
    mode: str = "auto"
    provenance: tuple[IterationRecord, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.total_bound < self.floor_cutoff:
            raise ValueError("total bound below the floor cutoff")
        if any(b > self.total_bound for b in self.per_prime):
            raise ValueError("per-prime bound exceeds the total bound")

    def prime_caps(self) -> tuple[int, ...]:
        """Caps on ``(b_1, ..., b_k)``; ``b_1`` is capped by the total."""
        caps = (self.total_bound, *self.per_prime)
        return caps + (self.total_bound,) * (self.instance.k - len(caps))

    def to_dict(self) -> dict:
        return {
            "x_n": self.instance.x_n,
            "primes": list(self.instance.primes),
            "mode": self.mode,
            "total_bound": self.total_bound,
            "per_prime": {str(p): b for p, b in zip(self.instance.primes[1:], self.per_prime)},
            "floor_cutoff": self.floor_cutoff,
            "provenance": [asdict(r) for r in self.provenance],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def build_lattice(instance: Instance, C: int, m: int | None = None) -> LatticeBasis:
    """Identity block on top, ``floor(C log p_i)`` in the last row."""
    if C < 10:
        raise ValueError("C must be at least 10")
    primes = instance.primes[: m or instance.k]
    m = len(primes)
    last = [certified_floor_scaled_log(p, C) for p in primes]
    columns = []
    for i in range(m):
        col = [0] * m
        if i < m - 1:
            col[i] = 1
        col[m - 1] = last[i]
        columns.append(col)
    return LatticeBasis.from_columns(columns)


def lemma3_new_bound(cfg: ReductionConfig, C1_squared: Fraction) -> tuple[int, Fraction] | None:
    """Floor of the upper endpoint of the new bound ``H``, with that endpoint.

    Returns ``None`` when ``C1^2 <= T^2 + S``; a larger ``C`` is needed then.
    """
    S, T = cfg.S, cfg.T
    if C1_squared <= T * T + S:
        return None
    with iv_digits(len(str(cfg.C)) + 40):
        c1sq = iv.mpf(C1_squared.numerator) / C1_squared.denominator
        inner = iv.sqrt(c1sq - iv.mpf(S.numerator) / S.denominator) - (
            iv.mpf(T.numerator) / T.denominator
        )
        scale = iv.mpf(cfg.C) * cfg.C2.numerator / cfg.C2.denominator
        h = (iv.log(scale) - iv.log(inner)) / cfg.C3.interval()
        upper = interval_bounds(h)[1]
    return math.floor(upper), upper


def _apply(instance: Instance, cfg: ReductionConfig, stage: str, escalations: int = 0, gso: bool = False):
    reduced = lll_reduce(build_lattice(instance, cfg.C, cfg.m))
    c1sq = gram_schmidt_lower_bound(reduced) if gso else shortest_vector_lower_bound(reduced)
    result = lemma3_new_bound(cfg, c1sq)
    record = IterationRecord(
        stage=stage,
        C=cfg.C,
        X=cfg.X,
        C2=str(cfg.C2),
        C3=str(cfg.C3),
        C1_squared=str(c1sq),
        S=str(cfg.S),
        T=str(cfg.T),
        precondition=result is not None,
        H_upper=None if result is None else f"{float(result[1]):.6f}",
        new_bound=None if result is None else result[0],
        escalations=escalations,
    )
    return (None if result is None else result[0]), record


def _apply_pinned(instance, X, C, C2, C3, stage, log):
    """Pinned ``C``; if the precondition fails, retry one decade up at a time."""
    for escalation in range(MAX_ESCALATIONS + 1):
        cfg = ReductionConfig(tuple(X), C * 10**escalation, C2, C3)
        h, record = _apply(instance, cfg, stage, escalation)
        log.append(record)
        if h is not None:
            return h
    raise ReductionError(f"{stage}: precondition fails for C = {C} .. {cfg.C}")


def _auto_scales(X0: int, m: int):
    """Candidate scales ``d * 10^e >= X0^m`` in increasing order."""
    floor_c = X0**m
    e = max(1, len(str(floor_c)) - 1)
    for exponent in range(e, e + AUTO_C_SCAN + 1):
        for mantissa in range(1, 10):
            C = mantissa * 10**exponent
            if C >= max(floor_c, 10):
                yield C


def _apply_auto(instance, X, C2, C3, stage, log):
    """Try every candidate scale and keep the smallest resulting bound."""
    best, best_record = None, None
    for C in _auto_scales(max(X), len(X)):
        h, record = _apply(instance, ReductionConfig(tuple(X), C, C2, C3), stage, gso=True)
        if h is not None and (best is None or h < best):
            best, best_record = h, record
    if best is None:
        raise ReductionError(f"{stage}: precondition never holds for X0 = {max(X)}")
    log.append(best_record)
    return best


def weight_ratio(instance: Instance) -> Fraction:
    """Smallest ``rho`` with ``s <= rho * b`` for every counts vector.

    ``s = sum (i-1) a_i`` and ``b = sum Omega(i) a_i``, so the maximum of
    ``(i-1)/Omega(i)`` over ``2 <= i <= x_n`` works; it never exceeds
    ``x_n - 1``.
    """
    return max(Fraction(i - 1, sum(v)) for i, v in instance.valuations.items())


def _check_mode(instance: Instance, mode: str) -> None:
    if mode not in ("auto", "paper"):
        raise ValueError(f"unknown mode {mode!r}")
    if instance.x_n < 3:
        raise ValueError("reduction needs x_n >= 3")
    if mode == "paper" and instance.k not in PAPER_TOTAL_C:
        raise ValueError("replay mode is only available for 3 <= x_n <= 10")


def reduce_total_bound(instance: Instance, B0: int | None = None, mode: str = "auto") -> BoundSet:
    """Iterate the reduction lemma on the bound for ``b = b_1 + ... + b_k``."""
    _check_mode(instance, mode)
    k = instance.k
    C3 = LogRatio(2, Fraction(21, 10))
    log: list[IterationRecord] = []
    if mode == "paper":
        C2 = Fraction(46 * (PAPER_GROUP_XMAX[k] - 1))
        bound = PAPER_B0[k] if B0 is None else B0
        for step, C in enumerate(PAPER_TOTAL_C[k]):
            bound = _apply_pinned(instance, [bound] * k, C, C2, C3, f"total#{step + 1}", log)
    else:
        if B0 is None:
            raise ValueError("auto mode needs the Baker bound B0")
        C2 = 46 * weight_ratio(instance)
        bound = B0
        for step in range(MAX_ITERATIONS):
            if bound <= FLOOR_CUTOFF:
                break
            h = _apply_auto(instance, [bound] * k, C2, C3, f"total#{step + 1}", log)
            if bound - h < 1:
                break
            bound = h
    return BoundSet(instance, max(bound, FLOOR_CUTOFF), mode=mode, provenance=tuple(log))


def reduce_per_prime_bounds(instance: Instance, bs: BoundSet, mode: str | None = None) -> BoundSet:
    """Sharper bounds on each ``b_j`` for the odd primes ``p_j``.

    In paper mode the replay uses the published schedule of two steps per
    prime, with the current bound as every ``X_i`` and ``C2 = 2 (x_n - 1) X0``.
    Auto mode keeps ``X_1`` at the total bound, uses each exponent's own bound
    for ``X_j`` and ``C2 = 2 rho B`` (see ``weight_ratio``), and sweeps all
    primes until no bound improves.
    """
    mode = mode or bs.mode
    _check_mode(instance, mode)
    k = instance.k
    total = bs.total_bound
    log = list(bs.provenance)
    primes = instance.primes
    if mode == "paper":
        xmax = PAPER_GROUP_XMAX[k]
        per_prime = []
        for j in range(1, k):
            p = primes[j]
            bound = total
            for step, C in enumerate(PAPER_PRIME_C[k][p]):
                C2 = Fraction(2 * (xmax - 1) * bound)
                bound = _apply_pinned(
                    instance, [bound] * k, C, C2, LogRatio(p, Fraction(2)), f"b{j + 1}(p={p})#{step + 1}", log
                )
            per_prime.append(min(max(bound, FLOOR_CUTOFF), total))
    else:
        C2 = 2 * weight_ratio(instance) * total
        per_prime = [total] * (k - 1)
        for sweep in range(MAX_ITERATIONS):
            improved = False
            for j in range(1, k):
                if per_prime[j - 1] <= FLOOR_CUTOFF:
                    continue
                X = [total, *per_prime]
                p = primes[j]
                h = _apply_auto(instance, X, C2, LogRatio(p, Fraction(2)), f"b{j + 1}(p={p})#{sweep + 1}", log)
                h = max(h, FLOOR_CUTOFF)
                if h < per_prime[j - 1]:
                    per_prime[j - 1] = h
                    improved = True
            if not improved:
                break
    return BoundSet(instance, total, tuple(per_prime), mode=mode, provenance=tuple(log))


def reduce_bounds(instance: Instance, B0: int | None = None, mode: str = "auto") -> BoundSet:
    """Total bound followed by the per-prime bounds."""
    return reduce_per_prime_bounds(instance, reduce_total_bound(instance, B0, mode), mode)


def relaxed(bs: BoundSet, slack: int) -> BoundSet:
    """The same instance with every bound raised by ``slack``."""
    total = bs.total_bound + slack
    return BoundSet(bs.instance, total, tuple(min(b + slack, total) for b in bs.per_prime), mode=bs.mode)


def manual_bounds(instance: Instance, total: int, per_prime: Sequence[int] = ()) -> BoundSet:
    return BoundSet(instance, total, tuple(per_prime), mode="manual")
