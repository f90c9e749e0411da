"""Exact integer helpers and certified floors of scaled logarithms."""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

# Moduli for the quadratic-residue pre-filter.  Together they reject about
# 99% of non-squares before an isqrt is attempted.
QR_FILTER_MODULI = (64, 63, 65, 11)


class PrecisionError(ArithmeticError):
    """Raised when an interval evaluation cannot decide a floor."""


def _residue_table(modulus: int) -> tuple[bool, ...]:
    table = [False] * modulus
    for r in range(modulus):
        table[r * r % modulus] = True
    return tuple(table)


_QR_TABLES = tuple((m, _residue_table(m)) for m in QR_FILTER_MODULI)


def integer_sqrt(m: int) -> int:
    if m < 0:
        raise ValueError(f"integer_sqrt of negative number {m}")
    return math.isqrt(m)


def is_perfect_square(m: int) -> int | None:
    """Return the nonnegative square root of ``m`` or ``None``."""
    if m < 0:
        return None
    for modulus, table in _QR_TABLES:
        if not table[m % modulus]:
            return None
    r = math.isqrt(m)
    return r if r * r == m else None


def p_adic_valuation(p: int, m: int) -> int:
    if m == 0:
        raise ValueError("valuation of zero is undefined")
    m = abs(m)
    u = 0
    while m % p == 0:
        m //= p
        u += 1
    return u


@lru_cache(maxsize=64)
def primes_up_to(x: int) -> tuple[int, ...]:
    if x < 2:
        return ()
    sieve = bytearray([1]) * (x + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(x) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, x + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@contextmanager
def iv_digits(digits: int):
    """Temporarily set the decimal precision of ``mpmath.iv``."""
    saved = iv.prec
    iv.dps = digits
    try:
        yield
    finally:
        iv.prec = saved


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of an mpmath number or degenerate interval."""
    raw = x._mpi_[0] if hasattr(x, "_mpi_") else x._mpf_
    sign, man, exp, _ = raw
    if not man and exp:
        raise ValueError("cannot convert inf/nan to a fraction")
    value = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -value if sign else value


def interval_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an ``mpmath.iv`` interval."""
    return mpf_to_fraction(x.a), mpf_to_fraction(x.b)


@dataclass(frozen=True)
class ScaledLog:
    """``value == floor(scale * log(base_p))`` with provenance.

    ``scale_exponent`` is set when ``scale`` is an exact power of ten.
    """

    value: int
    base_p: int
    scale: int
    certified: bool
    scale_exponent: int | None = None


def _floor_at(p: int, scale: int, digits: int) -> tuple[int, int]:
    with iv_digits(digits):
        enclosure = iv.log(iv.mpf(p)) * scale
        lo, hi = interval_bounds(enclosure)
    return math.floor(lo), math.floor(hi)


def floor_scaled_log(p: int, scale: int, precision_digits: int | None = None) -> ScaledLog:
    """Certified ``floor(scale * log p)`` for an arbitrary integer scale.

    The interval enclosure is evaluated at ``precision_digits`` and again
    with ten more digits; both must pin down the same floor.
    """
    if scale < 1:
        raise ValueError("scale must be positive")
    if precision_digits is None:
        precision_digits = len(str(scale)) + 20
    lo1, hi1 = _floor_at(p, scale, precision_digits)
    lo2, hi2 = _floor_at(p, scale, precision_digits + 10)
    certified = lo1 == hi1 == lo2 == hi2
    exponent = None
    digits = str(scale)
    if digits[0] == "1" and set(digits[1:]) <= {"0"}:
        exponent = len(digits) - 1
    return ScaledLog(value=lo2, base_p=p, scale=scale, certified=certified, scale_exponent=exponent)


def scaled_log(p: int, scale_exponent: int, precision_digits: int | None = None) -> ScaledLog:
    """Certified ``floor(10**scale_exponent * log p)``.

    Raises PrecisionError when the floor cannot be decided at the requested
    precision; the caller should retry with more digits.
    """
    if scale_exponent < 1:
        raise ValueError("scale_exponent must be >= 1")
    if precision_digits is None:
        precision_digits = scale_exponent + 20
    if precision_digits < scale_exponent + 15:
        raise ValueError("precision_digits must be at least scale_exponent + 15")
    result = floor_scaled_log(p, 10**scale_exponent, precision_digits)
    if not result.certified:
        raise PrecisionError(
            f"floor(10^{scale_exponent} log {p}) undecided at {precision_digits} digits"
        )
    return result


def certified_floor_scaled_log(p: int, scale: int, precision_digits: int | None = None) -> int:
    """Floor of ``scale * log p``, doubling precision until certified."""
    digits = precision_digits or len(str(scale)) + 20
    for _ in range(8):
        result = floor_scaled_log(p, scale, digits)
        if result.certified:
            return result.value
        digits *= 2
    raise PrecisionError(f"floor({scale} log {p}) undecided up to {digits} digits")
