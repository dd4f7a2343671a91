"""Truncated power series f(s) mod s^d over Z_p.

Two routes exist for every nontrivial operation.  The fast route runs
inverse, logarithm and exponential through Newton iteration on top of
NTT products: inversion doubles precision per step, log(f) integrates
f'/f, and exp(h) iterates phi <- phi * (1 - log(phi) + h), reusing the
lower half at every doubling.  The schoolbook route evaluates the
defining coefficient recursions directly and exists as an independently
coded oracle and as the quadratic baseline for benchmarks.

Unless a caller passes exact powers of two, the Newton drivers double
capped at the target length; products pad to powers of two internally.
Integration divides by the coefficient index, so truncation length is
limited by the characteristic (d < p for the public ops).
"""

import numpy as np

from . import _kernels
from .errors import (CharTooSmall, ConstantTermNotOne, ConstantTermNotZero,
                     NotInvertibleConstantTerm, ResourceError,
                     ValidationError)
from .modfield import FieldCtx, make_field

MAX_SERIES_LEN = 1 << 26


def _next_pow2(n: int) -> int:
    return 1 << max(n - 1, 0).bit_length()


def _as_residues(ctx, coeffs, d=None):
    arr = np.asarray(coeffs, dtype=np.int64)
    if arr.ndim != 1:
        raise ValidationError("coefficients must be one-dimensional")
    arr = arr % ctx.p
    if d is not None:
        if len(arr) < d:
            arr = np.concatenate([arr, np.zeros(d - len(arr), dtype=np.int64)])
        else:
            arr = arr[:d].copy()
    return arr


# ---------------------------------------------------------------------------
# raw-array drivers (shared with the multivariate layer)
# ---------------------------------------------------------------------------

def deriv_arr(ctx, f, n_out):
    out = np.zeros(n_out, dtype=np.int64)
    m = min(n_out, len(f) - 1)
    if m > 0:
        out[:m] = np.arange(1, m + 1, dtype=np.int64) * f[1:m + 1] % ctx.p
    return out


def integrate_arr(ctx, f, n_out, c0=1):
    if n_out > ctx.p:
        raise CharTooSmall(
            f"integration to length {n_out} divides by multiples of {ctx.p}")
    out = np.zeros(n_out, dtype=np.int64)
    out[0] = c0 % ctx.p
    m = min(n_out - 1, len(f))
    if m > 0:
        invs = ctx.inverse_table(n_out)
        out[1:m + 1] = f[:m] * invs[1:m + 1] % ctx.p
    return out


def inv_arr(ctx, f, n):
    """Newton inverse of the coefficient array f, mod s^n."""
    f0 = int(f[0]) if len(f) else 0
    if f0 == 0:
        raise NotInvertibleConstantTerm("constant term is 0 mod p")
    p = ctx.p
    f = f[:n]
    if f0 != 1:
        f0i = ctx.inv(f0)
        f = f * f0i % p
    g = np.ones(1, dtype=np.int64)
    m = 1
    while m < n:
        m = min(2 * m, n)
        g2 = ctx.mul(g, g, m)
        fg2 = ctx.mul(f, g2, m)
        gg = np.zeros(m, dtype=np.int64)
        gg[:len(g)] = g
        g = (2 * gg - fg2) % p
    if len(g) < n:
        g = np.concatenate([g, np.zeros(n - len(g), dtype=np.int64)])
    if f0 != 1:
        g = g * f0i % p
    return g


def log_arr(ctx, f, n):
    """log of a unit series (constant term 1), mod s^n."""
    if len(f) == 0 or int(f[0]) != 1:
        raise ConstantTermNotOne("log needs constant term 1")
    if n > ctx.p:
        raise CharTooSmall(f"log to length {n} needs characteristic > {n - 1}")
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    fp = deriv_arr(ctx, f, n - 1)
    fi = inv_arr(ctx, f, n - 1)
    q = ctx.mul(fp, fi, n - 1)
    return integrate_arr(ctx, q, n, 0)


def exp_arr(ctx, h, n):
    """exp of a series with zero constant term, mod s^n."""
    if len(h) and int(h[0]) != 0:
        raise ConstantTermNotZero("exp needs constant term 0")
    if n > ctx.p:
        raise CharTooSmall(f"exp to length {n} needs characteristic > {n - 1}")
    p = ctx.p
    phi = np.ones(1, dtype=np.int64)
    m = 1
    while m < n:
        m = min(2 * m, n)
        w = -log_arr(ctx, phi, m) % p
        hm = min(m, len(h))
        w[:hm] = (w[:hm] + h[:hm]) % p
        w[0] = (w[0] + 1) % p
        phi = ctx.mul(phi, w, m)
    return phi


# ---------------------------------------------------------------------------
# the series type and its public operations
# ---------------------------------------------------------------------------

class TruncSeries:
    """Coefficients c_0..c_{d-1} of a series mod s^d, stored as canonical
    residues in an int64 array.  Treat instances as immutable."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs, d: int | None = None):
        if ctx.p >= 2 ** 31:
            raise ValidationError("series arithmetic expects word-sized p < 2^31")
        self.ctx = ctx
        self.coeffs = _as_residues(ctx, coeffs, d)
        if len(self.coeffs) == 0:
            raise ValidationError("truncation length must be at least 1")

    @property
    def d(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zeros(cls, ctx, d):
        return cls(ctx, np.zeros(d, dtype=np.int64))

    @classmethod
    def one(cls, ctx, d):
        c = np.zeros(d, dtype=np.int64)
        c[0] = 1 % ctx.p
        return cls(ctx, c)

    def __eq__(self, other):
        return (isinstance(other, TruncSeries) and self.ctx.p == other.ctx.p
                and self.d == other.d
                and bool(np.array_equal(self.coeffs, other.coeffs)))

    def __repr__(self):
        head = ", ".join(str(int(c)) for c in self.coeffs[:6])
        tail = ", ..." if self.d > 6 else ""
        return f"TruncSeries(p={self.ctx.p}, d={self.d}, [{head}{tail}])"

    def to_list(self):
        return [int(c) for c in self.coeffs]

    # small conveniences; the module-level functions are the real API
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__


def _check_pair(f, g):
    if f.ctx.p != g.ctx.p or f.d != g.d:
        raise ValidationError("series must share prime and truncation")


def add(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    _check_pair(f, g)
    return TruncSeries(f.ctx, (f.coeffs + g.coeffs) % f.ctx.p)


def sub(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    _check_pair(f, g)
    return TruncSeries(f.ctx, (f.coeffs - g.coeffs) % f.ctx.p)


def negate(f: TruncSeries) -> TruncSeries:
    return TruncSeries(f.ctx, -f.coeffs % f.ctx.p)


def scale(f: TruncSeries, c) -> TruncSeries:
    return TruncSeries(f.ctx, f.coeffs * f.ctx.reduce(c) % f.ctx.p)


def deriv(f: TruncSeries) -> TruncSeries:
    """Formal derivative, truncation d-1 (or [0] when d = 1)."""
    if f.d == 1:
        return TruncSeries.zeros(f.ctx, 1)
    return TruncSeries(f.ctx, deriv_arr(f.ctx, f.coeffs, f.d - 1))


def integrate(f: TruncSeries, c0=1) -> TruncSeries:
    """Formal antiderivative with chosen constant term, truncation d+1."""
    if f.d + 1 > f.ctx.p:
        raise CharTooSmall(f"integrating to length {f.d + 1} mod {f.ctx.p}")
    return TruncSeries(f.ctx, integrate_arr(f.ctx, f.coeffs, f.d + 1, f.ctx.reduce(c0)))


def mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    _check_pair(f, g)
    return TruncSeries(f.ctx, f.ctx.mul(f.coeffs, g.coeffs, f.d))


def mul_schoolbook(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    _check_pair(f, g)
    out = _kernels.conv_trunc(f.coeffs, g.coeffs, f.d, f.ctx.p)
    return TruncSeries(f.ctx, out, f.d)


def inv(f: TruncSeries) -> TruncSeries:
    return TruncSeries(f.ctx, inv_arr(f.ctx, f.coeffs, f.d))


def inv_schoolbook(f: TruncSeries) -> TruncSeries:
    one = np.zeros(f.d, dtype=np.int64)
    one[0] = 1
    return _div_schoolbook_arrs(f.ctx, one, f.coeffs, f.d)


def div(h: TruncSeries, f: TruncSeries) -> TruncSeries:
    """h / f as mul(h, inv(f))."""
    _check_pair(h, f)
    return mul(h, inv(f))


def div_schoolbook(h: TruncSeries, f: TruncSeries) -> TruncSeries:
    _check_pair(h, f)
    return _div_schoolbook_arrs(h.ctx, h.coeffs, f.coeffs, h.d)


def _div_schoolbook_arrs(ctx, h, f, d):
    f0 = int(f[0]) if len(f) else 0
    if f0 == 0:
        raise NotInvertibleConstantTerm("constant term is 0 mod p")
    hh = _as_residues(ctx, h, d)
    ff = _as_residues(ctx, f, d)
    out = _kernels.div_schoolbook(hh, ff, d, ctx.p, ctx.inv(f0))
    return TruncSeries(ctx, out)


def _check_exp_log(f, want_zero):
    c0 = int(f.coeffs[0])
    if want_zero and c0 != 0:
        raise ConstantTermNotZero("exp needs constant term 0")
    if not want_zero and c0 != 1:
        raise ConstantTermNotOne("log needs constant term 1")
    if f.d >= f.ctx.p:
        raise CharTooSmall(f"truncation {f.d} needs characteristic > {f.d}")


def log(f: TruncSeries) -> TruncSeries:
    _check_exp_log(f, want_zero=False)
    out = log_arr(f.ctx, f.coeffs, f.d)
    assert int(out[0]) == 0
    return TruncSeries(f.ctx, out)


def log_schoolbook(f: TruncSeries) -> TruncSeries:
    _check_exp_log(f, want_zero=False)
    invs = f.ctx.inverse_table(f.d) if f.d > 1 else np.ones(1, dtype=np.int64)
    out = _kernels.log_schoolbook(f.coeffs, f.d, f.ctx.p, invs)
    return TruncSeries(f.ctx, out)


def exp(h: TruncSeries) -> TruncSeries:
    _check_exp_log(h, want_zero=True)
    out = exp_arr(h.ctx, h.coeffs, h.d)
    assert int(out[0]) == 1 % h.ctx.p
    return TruncSeries(h.ctx, out, h.d)


def exp_schoolbook(h: TruncSeries) -> TruncSeries:
    _check_exp_log(h, want_zero=True)
    invs = h.ctx.inverse_table(h.d) if h.d > 1 else np.ones(1, dtype=np.int64)
    out = _kernels.exp_schoolbook(h.coeffs, h.d, h.ctx.p, invs)
    return TruncSeries(h.ctx, out)


# ---------------------------------------------------------------------------
# reciprocal prefix sums
# ---------------------------------------------------------------------------

def coeff_reciprocal_prefix(ctx: FieldCtx, exponents, K: int) -> int:
    """Sum of coefficients 0..K of 1 / prod_j (1 - q^{b_j}) mod p.

    Equivalently the coefficient of q^K in the same product with an extra
    1/(1-q); exponents must be positive.  K < 0 gives 0.
    """
    if K < 0:
        return 0
    if K + 1 > MAX_SERIES_LEN:
        raise ResourceError(f"prefix length {K + 1} exceeds cap {MAX_SERIES_LEN}")
    exps = [int(b) for b in exponents]
    if any(b <= 0 for b in exps):
        raise ValidationError("reciprocal exponents must be positive")
    arr = np.zeros(K + 1, dtype=np.int64)
    arr[0] = 1
    for b in exps:
        if b <= K:
            arr[b:] = (arr[b:] - arr[:-b]) % ctx.p
    g = inv_arr(ctx, arr, K + 1)
    return int(g.sum() % ctx.p)


# ---------------------------------------------------------------------------
# one-line text serialization
# ---------------------------------------------------------------------------

def to_text(f: TruncSeries) -> str:
    """"d p c_0 c_1 ... c_{d-1}" on a single line."""
    return " ".join([str(f.d), str(f.ctx.p)] + [str(int(c)) for c in f.coeffs])


def from_text(line: str) -> TruncSeries:
    parts = line.split()
    if len(parts) < 2:
        raise ValidationError("series line needs at least 'd p'")
    try:
        d, p = int(parts[0]), int(parts[1])
        coeffs = [int(x) for x in parts[2:]]
    except ValueError as e:
        raise ValidationError(f"bad series line: {e}") from None
    if len(coeffs) != d:
        raise ValidationError(f"expected {d} coefficients, got {len(coeffs)}")
    return TruncSeries(make_field(p), coeffs, d)
