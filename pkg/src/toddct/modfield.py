"""Prime fields with number-theoretic transforms, CRT, rational recovery.

A FieldCtx bundles a word-sized prime p with precomputed 2-power roots of
unity so polynomial products mod p can run through an iterative NTT.  The
default primes all satisfy p = 1 mod 2^21 or better, giving transform
lengths far beyond anything the series layer asks for.  Primes without
enough 2-adic headroom still work: multiplication falls back to compiled
schoolbook convolution and only loses the quasi-linear growth.

Multi-prime runs are reassembled with crt_reconstruct, and rational
outputs are recovered from a residue r mod p whenever numerator and
denominator both fit under floor(sqrt(p/2)).
"""

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import _kernels
from .errors import (DuplicatePrime, NoFFTSupport, NotPrime,
                     ReconstructionFailed, UnsuitablePrime)

# NTT-friendly primes, ordered by descending 2-adic valuation of p - 1 and
# then descending value.  Multi-prime defaults take a prefix of this list.
PRIMES = (
    469762049,   # 7   * 2^26 + 1
    167772161,   # 5   * 2^25 + 1
    754974721,   # 45  * 2^24 + 1
    998244353,   # 119 * 2^23 + 1
    897581057,   # 107 * 2^23 + 1
    880803841,   # 105 * 2^23 + 1
    645922817,   # 77  * 2^23 + 1
    595591169,   # 71  * 2^23 + 1
    1004535809,  # 479 * 2^21 + 1
)

# Below this transform exponent an NTT buys nothing over the compiled
# schoolbook kernel, so such fields run schoolbook-only.
_NTT_MIN_LOG2 = 8

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldCtx:
    """Arithmetic context for Z_p.  Immutable once built; the internal
    twiddle/bit-reversal tables are filled lazily but idempotently, so a
    ctx can be shared across concurrent workers."""

    __slots__ = ("p", "max_log2", "roots", "use_ntt",
                 "_tw", "_rev", "_invtab")

    def __init__(self, p: int):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        v = 0
        m = p - 1
        while m % 2 == 0:
            m //= 2
            v += 1
        self.max_log2 = v
        self.roots = self._build_roots()
        self.use_ntt = v >= _NTT_MIN_LOG2 and p < 2 ** 31
        self._tw = {}
        self._rev = {}
        self._invtab = np.ones(2, dtype=np.int64)

    def _build_roots(self):
        p, v = self.p, self.max_log2
        if p == 2:
            return {}
        g = 2
        while pow(g, (p - 1) // 2, p) == 1:
            g += 1
        roots = {}
        r = pow(g, (p - 1) >> v, p)
        for k in range(v, 0, -1):
            roots[k] = r
            r = r * r % p
        return roots

    # -- scalar helpers -----------------------------------------------------

    def reduce(self, x) -> int:
        """Canonical residue of an int or Fraction."""
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise UnsuitablePrime(
                    f"denominator of {x} vanishes mod {self.p}")
            return x.numerator % self.p * pow(den, self.p - 2, self.p) % self.p
        return x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(x, self.p - 2, self.p)

    def inverse_table(self, n: int):
        """Array with entry i = i^{-1} mod p for 1 <= i < n (entry 0 unused)."""
        if n > self.p:
            raise ValueError("inverse table would hit a multiple of p")
        if len(self._invtab) < n:
            size = min(max(n, 2 * len(self._invtab)), self.p)
            if self.p < 2 ** 31:
                self._invtab = _kernels.inv_table(size, self.p)
            else:
                tab = [1] * size
                for i in range(2, size):
                    tab[i] = (self.p - (self.p // i) * tab[self.p % i] % self.p) % self.p
                self._invtab = np.array(tab, dtype=object)
        return self._invtab

    # -- NTT ----------------------------------------------------------------

    def _bitrev(self, n: int):
        cached = self._rev.get(n)
        if cached is None:
            k = n.bit_length() - 1
            j = np.arange(n, dtype=np.int64)
            rev = np.zeros(n, dtype=np.int64)
            for _ in range(k):
                rev = (rev << 1) | (j & 1)
                j >>= 1
            cached = self._rev[n] = rev
        return cached

    def _twiddles(self, length: int, invert: bool):
        key = (length, invert)
        cached = self._tw.get(key)
        if cached is None:
            p = self.p
            w = self.roots[length.bit_length() - 1]
            if invert:
                w = pow(w, p - 2, p)
            half = length >> 1
            arr = np.ones(1, dtype=np.int64)
            cur = w
            while len(arr) < half:
                arr = np.concatenate([arr, arr * cur % p])
                cur = cur * cur % p
            cached = self._tw[key] = arr
        return cached

    def ntt(self, a, invert: bool = False):
        """Length-preserving transform of an int64 residue array whose
        length is a power of two within this field's capacity."""
        p = self.p
        n = len(a)
        k = n.bit_length() - 1
        if n != 1 << k or k > self.max_log2:
            raise NoFFTSupport(
                f"length {n} transform unavailable mod {p} "
                f"(capacity 2^{self.max_log2})")
        a = a[self._bitrev(n)]
        length = 2
        while length <= n:
            half = length >> 1
            tw = self._twiddles(length, invert)
            m = a.reshape(-1, length)
            u = m[:, :half]
            v = m[:, half:] * tw % p
            lo = (u + v) % p
            hi = (u - v) % p
            m[:, :half] = lo
            m[:, half:] = hi
            length <<= 1
        if invert:
            a = a * pow(n, p - 2, p) % p
        return a

    # -- multiplication ------------------------------------------------------

    def mul(self, a, b, d: int):
        """First d coefficients of the polynomial product a*b mod p.

        Dispatches to the NTT when the field supports the required
        transform length; tiny operands and low-headroom fields use the
        compiled schoolbook convolution, which returns bit-identical
        coefficients.
        """
        a = np.asarray(a, dtype=np.int64)[:d]
        b = np.asarray(b, dtype=np.int64)[:d]
        la, lb = len(a), len(b)
        if d <= 0 or la == 0 or lb == 0:
            return np.zeros(max(d, 0), dtype=np.int64)
        plen = min(la + lb - 1, d)
        if min(la, lb) <= 16 or not self.use_ntt:
            if self.p < 2 ** 31:
                out = _kernels.conv_trunc(a, b, plen, self.p)
            else:
                out = _conv_bigp(a, b, plen, self.p)
            return _pad(out, d)
        n = 1 << (la + lb - 2).bit_length()
        if n.bit_length() - 1 > self.max_log2:
            raise NoFFTSupport(
                f"product needs a length-{n} transform, capacity is "
                f"2^{self.max_log2} mod {self.p}")
        fa = np.zeros(n, dtype=np.int64)
        fa[:la] = a
        fb = np.zeros(n, dtype=np.int64)
        fb[:lb] = b
        fa = self.ntt(fa)
        fb = self.ntt(fb)
        out = self.ntt(fa * fb % self.p, invert=True)
        return _pad(out[:plen], d)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, max_log2={self.max_log2})"


def _pad(arr, d):
    if len(arr) == d:
        return arr
    out = np.zeros(d, dtype=np.int64)
    out[:len(arr)] = arr[:d]
    return out


def _conv_bigp(a, b, n, p):
    out = [0] * n
    for i, ai in enumerate(a.tolist()):
        if ai == 0:
            continue
        for j, bj in enumerate(b.tolist()[:n - i]):
            out[i + j] = (out[i + j] + ai * bj) % p
    return np.array(out, dtype=np.int64)


_field_cache: dict = {}


def make_field(p: int, min_log2: int | None = None) -> FieldCtx:
    """Build (or fetch) the context for Z_p.

    min_log2 demands NTT support up to length 2^min_log2 and raises
    NoFFTSupport when p - 1 lacks the 2-adic headroom.
    """
    ctx = _field_cache.get(p)
    if ctx is None:
        ctx = FieldCtx(p)
        _field_cache[p] = ctx
    if min_log2 is not None and ctx.max_log2 < min_log2:
        raise NoFFTSupport(
            f"p={p} supports transforms only up to 2^{ctx.max_log2}, "
            f"2^{min_log2} requested")
    return ctx


def default_primes(k: int = 3) -> tuple:
    if k > len(PRIMES):
        raise ValueError(f"only {len(PRIMES)} stock primes available")
    return PRIMES[:k]


def poly_mul(ctx: FieldCtx, a, b, d: int):
    """Truncated product of coefficient sequences, as ctx.mul."""
    return ctx.mul(a, b, d)


def crt_reconstruct(residues, centered: bool = False) -> int:
    """Combine [(value, prime), ...] into the unique integer mod the
    product of the primes; centered=True picks the representative in
    (-P/2, P/2]."""
    seen = set()
    x, mod = 0, 1
    for value, prime in residues:
        if prime in seen:
            raise DuplicatePrime(f"prime {prime} listed twice")
        seen.add(prime)
        # solve x' = x (mod mod), x' = value (mod prime)
        t = (value - x) % prime * pow(mod % prime, prime - 2, prime) % prime
        x += mod * t
        mod *= prime
    if centered and x > mod // 2:
        x -= mod
    return x


def _rat_recon(v: int, m: int):
    """Smallest rational num/den with den*v = num mod m and
    |num|, den <= floor(sqrt(m/2)), or None."""
    bound = isqrt(m // 2)
    r0, r1 = m, v % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0:
        return None
    num = r1 if t1 > 0 else -r1
    den = abs(t1)
    if den > bound or gcd(num, den) != 1:
        return None
    if (den * v - num) % m != 0:
        return None
    return num, den


def rational_reconstruct(r: int, ctx: FieldCtx):
    """Recover num/den from a single-prime residue, or None when no
    candidate fits under floor(sqrt(p/2))."""
    return _rat_recon(r, ctx.p)


def crt_rational(residues) -> Fraction:
    """CRT a residue list and lift to an exact rational.

    Raises ReconstructionFailed when no small rational matches, which
    usually means the prime set is too small for the answer's height.
    """
    residues = list(residues)
    mod = 1
    for _, prime in residues:
        mod *= prime
    v = crt_reconstruct(residues)
    pair = _rat_recon(v, mod)
    if pair is None:
        raise ReconstructionFailed(
            "rational reconstruction failed; add primes")
    return Fraction(pair[0], pair[1])
