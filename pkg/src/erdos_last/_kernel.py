"""Compiled leaf scan for the enumerator.

The kernel walks the loop nest below one fixed outer value and keeps every
leaf whose discriminant ``s^2 + 4P`` is a quadratic residue modulo each of a
few composite moduli.  ``P`` is only known modulo those moduli here; the
survivors (about 1e-5 of all leaves) are checked exactly by the caller.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Products of primes >= 11.  Moduli sharing a prime with P are useless: once
# P is divisible by a high power of that prime, s^2 + 4P is a residue
# whenever s^2 is.  Each prime keeps roughly half of the leaves.
M0 = 11 * 13 * 17 * 19
MODULI = (M0, 23 * 29 * 31, 37 * 41 * 43, 47 * 53 * 59, 61 * 67 * 71, 73 * 79 * 83)


def residue_tables() -> np.ndarray:
    width = max(MODULI)
    table = np.zeros((len(MODULI), width), dtype=np.uint8)
    for row, m in enumerate(MODULI):
        r = np.arange(m, dtype=np.int64)
        table[row, (r * r) % m] = 1
    return table


def power_tables(primes: tuple[int, ...], max_exp: int) -> np.ndarray:
    out = np.zeros((len(MODULI), len(primes), max_exp + 1), dtype=np.int64)
    for row, m in enumerate(MODULI):
        for j, p in enumerate(primes):
            v = 1
            for e in range(max_exp + 1):
                out[row, j, e] = v
                v = v * p % m
    return out


@njit(cache=True, error_model="numpy")
def _passes(bvec, s, mods, powtab, qrtab, first):
    k = bvec.shape[0]
    for row in range(first, mods.shape[0]):
        m = mods[row]
        r = 1
        for j in range(k):
            r = r * powtab[row, j, bvec[j]] % m
        if qrtab[row, (s * s + 4 * r) % m] == 0:
            return False
    return True


@njit(cache=True, error_model="numpy")
def scan(wc, vb, sw, lo, vals, caps, outer, mods, powtab, qrtab, out, stats):
    """Scan all leaves with the outermost variable fixed to ``outer``.

    wc: (nv, nc) constraint weights, vb: (nv, k) prime valuations,
    sw: (nv,) weights in ``s``, lo: (nv,) lower limits, vals: (nv,) the
    value ``i`` each variable counts, caps: (nc,) capacities.
    Survivors are written to ``out`` in loop order.  Returns the number of
    survivors, or -1 if ``out`` overflowed.  ``stats[0]`` counts leaves.
    """
    nv, nc = wc.shape
    k = vb.shape[1]
    m0 = M0
    qr0 = qrtab[0]
    a = np.zeros(nv, dtype=np.int64)
    rem = np.zeros((nv + 1, nc), dtype=np.int64)
    bvec = np.zeros((nv + 1, k), dtype=np.int64)
    svec = np.zeros(nv + 1, dtype=np.int64)
    leaf_b = np.zeros(k, dtype=np.int64)
    count = 0
    leaves = 0

    a[0] = outer
    for c in range(nc):
        rem[1, c] = caps[c] - outer * wc[0, c]
        if rem[1, c] < 0:
            return 0
    for j in range(k):
        bvec[1, j] = outer * vb[0, j]
    svec[1] = outer * sw[0]

    if nv == 1:
        stats[0] += 1
        if _passes(bvec[1], svec[1], mods, powtab, qrtab, 0):
            out[0, 0] = outer
            return 1
        return 0

    last = nv - 1
    level = 1
    a[1] = lo[1] - 1
    while level >= 1:
        if level == last:
            # innermost loop: residue of P modulo the first modulus is
            # updated by one multiplication per step
            lim = -1
            for c in range(nc):
                w = wc[last, c]
                if w > 0:
                    q = rem[last, c] // w
                    if lim < 0 or q < lim:
                        lim = q
            if lim >= lo[last]:
                r0 = 1
                for j in range(k):
                    leaf_b[j] = bvec[last, j] + lo[last] * vb[last, j]
                    r0 = r0 * powtab[0, j, leaf_b[j]] % m0
                step = vals[last] % m0
                s = svec[last] + lo[last] * sw[last]
                sm = s % m0
                dsm = sw[last] % m0
                leaves += lim + 1 - lo[last]
                for v in range(lo[last], lim + 1):
                    if qr0[(sm * sm + 4 * r0) % m0] != 0:
                        for j in range(k):
                            leaf_b[j] = bvec[last, j] + v * vb[last, j]
                        if _passes(leaf_b, s, mods, powtab, qrtab, 1):
                            if count >= out.shape[0]:
                                stats[0] += leaves
                                return -1
                            for t in range(last):
                                out[count, t] = a[t]
                            out[count, last] = v
                            count += 1
                    r0 = r0 * step % m0
                    s += sw[last]
                    sm += dsm
                    if sm >= m0:
                        sm -= m0
            level -= 1
            continue

        a[level] += 1
        ok = True
        for c in range(nc):
            if a[level] * wc[level, c] > rem[level, c]:
                ok = False
                break
        if not ok:
            level -= 1
            continue
        for c in range(nc):
            rem[level + 1, c] = rem[level, c] - a[level] * wc[level, c]
        for j in range(k):
            bvec[level + 1, j] = bvec[level, j] + a[level] * vb[level, j]
        svec[level + 1] = svec[level] + a[level] * sw[level]
        level += 1
        if level < last:
            a[level] = lo[level] - 1
    stats[0] += leaves
    return count
