"""Initial Baker-type bound on ``b = b_1 + ... + b_k``.

Matveev's lower bound for ``|p_1^{e_1} ... p_k^{e_k} - 1|`` (rational primes,
field degree 1, heights ``log p_j``) combined with the trivial upper bound
``(x_n - 1) b / 2^{b/2}`` gives an inequality of the shape

    b < K * (1 + log b) + 2 log((x_n - 1) b) / log 2.

Every real quantity is evaluated as an ``mpmath.iv`` enclosure and the upper
endpoint is used, so the bound errs on the large side only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .model import Instance
from .numerics import interval_bounds, iv_digits

DEFAULT_DIGITS = 40

# Table values the computed bound must not exceed, keyed by k.
PUBLISHED_B0 = {2: 44 * 10**9, 3: 16 * 10**12, 4: 4 * 10**15}


@dataclass(frozen=True)
class BakerBound:
    instance: Instance
    B0: int
    # upper endpoint of the right-hand side at b = B0; B0 < rhs_at_B0
    rhs_at_B0: Fraction

    @property
    def published(self) -> int | None:
        return PUBLISHED_B0.get(self.instance.k)


def _matveev_interval(l: int, D: int):
    c = iv.mpf(14) / 10 * iv.mpf(30) ** (l + 3) * iv.mpf(l) ** iv.mpf(4.5) * D**2
    if D != 1:
        c = c * (1 + iv.log(iv.mpf(D)))
    return c


def matveev_constant(l: int, D: int = 1, digits: int = DEFAULT_DIGITS) -> tuple[Fraction, Fraction]:
    """Enclosure of ``1.4 * 30^(l+3) * l^4.5 * D^2 * (1 + log D)``."""
    if l < 1 or D < 1:
        raise ValueError("l and D must be positive")
    with iv_digits(digits):
        return interval_bounds(_matveev_interval(l, D))


def _rhs_interval(instance: Instance, b: int):
    primes = instance.primes
    k = len(primes)
    lead = 2 * _matveev_interval(k, 1)
    for p in primes[1:]:
        lead = lead * iv.log(iv.mpf(p))
    tail = 2 * iv.log(iv.mpf((instance.x_n - 1) * b)) / iv.log(iv.mpf(primes[0]))
    return lead * (1 + iv.log(iv.mpf(b))) + tail


def theorem2_rhs(instance: Instance, b: int, digits: int = DEFAULT_DIGITS) -> Fraction:
    """Certified upper value of the right-hand side at integer ``b >= 1``."""
    if b < 1:
        raise ValueError("b must be >= 1")
    if instance.x_n < 3:
        raise ValueError("the Baker bound needs x_n >= 3")
    with iv_digits(digits):
        return interval_bounds(_rhs_interval(instance, b))[1]


def baker_bound(instance: Instance, digits: int = DEFAULT_DIGITS) -> BakerBound:
    """Largest integer ``B0`` with ``B0 < rhs(B0)``.

    The right-hand side grows like ``log b`` so the set of integers satisfying
    the inequality is an initial segment; find its end by doubling and then
    bisection.
    """
    if instance.x_n < 3:
        raise ValueError("the Baker bound needs x_n >= 3")
    lo = 2
    if not lo < theorem2_rhs(instance, lo, digits):
        raise ArithmeticError("inequality already fails at b = 2")
    hi = lo
    while hi < theorem2_rhs(instance, hi, digits):
        lo, hi = hi, hi * 2
    # lo satisfies the inequality, hi does not
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid < theorem2_rhs(instance, mid, digits):
            lo = mid
        else:
            hi = mid
    return BakerBound(instance, lo, theorem2_rhs(instance, lo, digits))
