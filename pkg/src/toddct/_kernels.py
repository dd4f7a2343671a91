"""Compiled inner loops for the quadratic (schoolbook) paths.

Everything here works on int64 arrays of canonical residues, p < 2**31,
so a product of two residues stays below 2**62 and a sum of up to 2**31
reduced terms stays below 2**63.  The recursions are the literal
coefficient recursions; they serve as oracles for the Newton paths and
as the measured quadratic baseline in benchmarks.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def conv_trunc(a, b, n, p):
    """First n coefficients of the product of polynomials a and b mod p."""
    out = np.zeros(n, dtype=np.int64)
    la = min(len(a), n)
    for i in range(la):
        ai = a[i]
        if ai == 0:
            continue
        hi = min(n - i, len(b))
        for j in range(hi):
            out[i + j] += ai * b[j] % p
            if out[i + j] >= 0x4000000000000000:
                out[i + j] %= p
    for i in range(n):
        out[i] %= p
    return out


@njit(cache=True)
def inv_table(n, p):
    """inv[i] = i^{-1} mod p for 1 <= i < n (slot 0 unused)."""
    inv = np.ones(n, dtype=np.int64)
    for i in range(2, n):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    return inv


@njit(cache=True)
def div_schoolbook(h, f, n, p, f0inv):
    """g with f*g = h mod s^n, one coefficient at a time.

    g_0 = h_0 / f_0 and g_i = f_0^{-1} (h_i - sum_{k<i} f_{i-k} g_k);
    h and f must already be padded to length >= n.
    """
    g = np.zeros(n, dtype=np.int64)
    g[0] = h[0] * f0inv % p
    for i in range(1, n):
        acc = 0
        for k in range(i):
            acc += f[i - k] * g[k] % p
        g[i] = (h[i] - acc) % p * f0inv % p
    return g


@njit(cache=True)
def exp_schoolbook(h, n, p, invs):
    """f = exp(h) mod s^n via f_m = (1/m) sum_{i=1}^{m} i h_i f_{m-i}.

    h padded to length >= n, h_0 = 0; invs[m] = m^{-1} mod p for m < n.
    """
    f = np.zeros(n, dtype=np.int64)
    ih = np.zeros(n, dtype=np.int64)
    f[0] = 1
    for i in range(1, n):
        ih[i] = i * h[i] % p
    for m in range(1, n):
        acc = 0
        for i in range(1, m + 1):
            acc += ih[i] * f[m - i] % p
        f[m] = acc % p * invs[m] % p
    return f


@njit(cache=True)
def log_schoolbook(f, n, p, invs):
    """h = log(f) mod s^n via h_k = f_k - (1/k) sum_{i<k} i h_i f_{k-i}.

    f padded to length >= n, f_0 = 1.
    """
    h = np.zeros(n, dtype=np.int64)
    ih = np.zeros(n, dtype=np.int64)
    if n > 1:
        h[1] = f[1] % p
        ih[1] = h[1]
    for k in range(2, n):
        acc = 0
        for i in range(1, k):
            acc += ih[i] * f[k - i] % p
        h[k] = (f[k] - acc % p * invs[k]) % p
        ih[k] = k * h[k] % p
    return h
