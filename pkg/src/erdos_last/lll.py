"""Exact LLL reduction (delta = 3/4) with integral Gram-Schmidt data.

Follows the all-integer formulation (Cohen, Algorithm 2.6.7): instead of the
rational coefficients mu_{i,j} and squared lengths |b_i*|^2 it carries

    d_i = prod_{j<=i} |b_j*|^2          (d_0 = 1)
    lam_{i,j} = d_{j} * mu_{i,j}        (j < i)

which are integers for an integer basis.  No floating point is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Vector = tuple[int, ...]


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    a = [list(r) for r in rows]
    m = len(a)
    if any(len(r) != m for r in a):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for i in range(k + 1, m):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if m else 1


@dataclass(frozen=True)
class LatticeBasis:
    """Square integer basis; ``columns[j]`` is the j-th basis vector."""

    columns: tuple[Vector, ...]

    def __post_init__(self) -> None:
        m = len(self.columns)
        if m == 0 or any(len(c) != m for c in self.columns):
            raise ValueError("basis must be a nonempty square matrix")
        if determinant(self.columns) == 0:
            raise ValueError("basis is rank deficient")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "LatticeBasis":
        return cls(tuple(tuple(int(x) for x in c) for c in columns))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "LatticeBasis":
        return cls.from_columns(list(zip(*rows)))

    @property
    def dim(self) -> int:
        return len(self.columns)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in zip(*self.columns)]

    def determinant(self) -> int:
        return determinant(self.columns)


@dataclass(frozen=True)
class ReducedBasis:
    """Reduced basis and the unimodular ``transform`` from the input.

    ``transform[i][j]`` is the coefficient of input column ``i`` in output
    column ``j``.
    """

    basis: LatticeBasis
    transform: tuple[Vector, ...]

    @property
    def first(self) -> Vector:
        return self.basis.columns[0]


def _round_div(num: int, den: int) -> int:
    """Nearest integer to ``num/den`` for ``den > 0`` (ties round up)."""
    return (2 * num + den) // (2 * den)


def lll_reduce(basis: LatticeBasis) -> ReducedBasis:
    b = [list(c) for c in basis.columns]
    m = len(b)
    h = [[int(i == j) for j in range(m)] for i in range(m)]  # h[k] = coeffs of b[k]
    d = [0] * (m + 1)  # d[i+1] <-> d_i of vector i (0-based); d[0] = 1
    d[0] = 1
    lam = [[0] * m for _ in range(m)]

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_div(lam[k][l], d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            h[k] = [x - q * y for x, y in zip(h[k], h[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        h[k], h[k - 1] = h[k - 1], h[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        new_d = (d[k - 1] * d[k + 1] + lk * lk) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lk * t) // d[k]
            lam[i][k - 1] = (new_d * t + lk * lam[i][k]) // d[k + 1]
        d[k] = new_d

    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("basis is rank deficient")
    k, kmax = 1, 0
    while k < m:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
            if d[k + 1] == 0:
                raise ValueError("basis is rank deficient")
        red(k, k - 1)
        # Lovasz condition with delta = 3/4, scaled to integers
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1

    reduced = LatticeBasis(tuple(tuple(v) for v in b))
    transform = tuple(tuple(h[j][i] for j in range(m)) for i in range(m))
    return ReducedBasis(reduced, transform)


def gram_schmidt(columns: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact ``mu`` coefficients and squared lengths ``|b_i*|^2``."""
    m = len(columns)
    star: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * m for _ in range(m)]
    for i, col in enumerate(columns):
        v = [Fraction(x) for x in col]
        for j in range(i):
            mu[i][j] = Fraction(_dot(col, star[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(sum(x * x for x in v))
    return mu, norms


def is_lll_reduced(columns: Sequence[Sequence[int]]) -> bool:
    mu, norms = gram_schmidt(columns)
    m = len(columns)
    for i in range(m):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for i in range(1, m):
        if norms[i] + mu[i][i - 1] ** 2 * norms[i - 1] < Fraction(3, 4) * norms[i - 1]:
            return False
    return True


def shortest_vector_lower_bound(rb: ReducedBasis) -> Fraction:
    """``C1^2 = |b_1|^2 / 2^(m-1)``, a lower bound on every nonzero squared length."""
    first = rb.first
    return Fraction(_dot(first, first), 2 ** (rb.basis.dim - 1))


def gram_schmidt_lower_bound(rb: ReducedBasis) -> Fraction:
    """``min_i |b_i*|^2``, also a lower bound on every nonzero squared length.

    For a reduced basis this is never smaller than the bound above.
    """
    _, norms = gram_schmidt(rb.basis.columns)
    return max(min(norms), shortest_vector_lower_bound(rb))
