"""Independent reference computations shared by the tests."""

from __future__ import annotations


def fixed_point_log(p: int, digits: int) -> int:
    """``floor(log(p) * 10**digits)`` up to +-1, from integer arithmetic only.

    Uses ``log p = 2 atanh((p-1)/(p+1))`` with 30 guard digits.
    """
    guard = 30
    one = 10 ** (digits + guard)
    u = (p - 1) * one // (p + 1)
    u2 = u * u // one
    term = u
    total = 0
    k = 1
    while term:
        total += term // k
        term = term * u2 // one
        k += 2
    return (2 * total) // 10**guard


# Published solution lists for largest parts 3 and 4, as (n, a_1, ..., a_{x_n}).
SOLUTIONS_3 = [
    (1, 0, 0, 1),
    (3, 0, 0, 3),
    (9, 4, 1, 4),
    (36, 27, 6, 3),
    (81, 71, 5, 5),
]
SOLUTIONS_4 = [
    (1, 0, 0, 0, 1),
    (2, 0, 0, 0, 2),
    (4, 1, 0, 1, 2),
    (8, 2, 5, 0, 1),
    (8, 4, 0, 2, 2),
    (16, 10, 2, 3, 1),
    (24, 17, 3, 3, 1),
    (48, 41, 2, 1, 4),
    (64, 57, 0, 4, 3),
    (128, 116, 9, 2, 1),
    (144, 134, 3, 6, 1),
]
COUNTS = {3: 5, 4: 11, 5: 34, 6: 57, 7: 160, 8: 172, 9: 330, 10: 613}
MAX_N = {3: 81, 4: 144, 5: 32768, 6: 32768, 7: 279936, 8: 279936, 9: 354294, 10: 367416}
