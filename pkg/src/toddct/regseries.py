"""Regular multivariate series and their Kronecker substitutions.

A series f(s, y_1..y_r) truncated mod s^d is *regular* when the
coefficient of s^n has total y-degree at most n.  The dense storage here
makes that structural: row n holds exactly the monomials of degree <= n
in degree-lexicographic order, so at most C(d+r, r+1) residues in total.

Regularity is what makes the variable-collapsing maps invertible:

    gamma_y :  y_i -> y_1^(d^(i-1))   (i >= 2)
    gamma_s :  s   -> y_1^(d^r)
    gamma_bar = gamma_s . gamma_y

Under gamma_bar the coefficient of s^n lands in the disjoint column
window [n*d^r, (n+1)*d^r) with offsets that decompose uniquely in base-d
digits, so multiplying or inverting the packed univariate image computes
the multivariate result.  Logarithms never integrate through gamma_bar
(the packed indices reach d^(r+1), far past the characteristic); instead
reg_log differentiates in s, divides through the packed image, and
integrates back row by row, dividing only by indices below d.  reg_exp
runs the Newton iteration phi <- phi(1 - log phi + h) on packed rows.
"""

from math import comb

import numpy as np

from .errors import (CharTooSmall, ConstantTermNotOne, ConstantTermNotZero,
                     NotRegular, ValidationError)
from .modfield import FieldCtx
from .series import exp_arr, inv_arr, log_arr

MAX_VARS = 8

_mono_cache: dict = {}
_pack_cache: dict = {}


def monomials_upto(r: int, n: int):
    """Exponent tuples of total degree <= n in deglex order, plus an
    index lookup table."""
    key = (r, n)
    cached = _mono_cache.get(key)
    if cached is not None:
        return cached
    if r == 0:
        monos = [()]
    else:
        monos = []
        for deg in range(n + 1):
            level = []

            def _fill(prefix, left, slots):
                if slots == 1:
                    level.append(prefix + (left,))
                    return
                for e in range(left + 1):
                    _fill(prefix + (e,), left - e, slots - 1)

            _fill((), deg, r)
            level.sort()
            monos.extend(level)
    index = {e: i for i, e in enumerate(monos)}
    cached = _mono_cache[key] = (monos, index)
    return cached


def _pack_cols(r: int, base: int, n: int):
    """Packed column index for every monomial of degree <= n (deglex)."""
    key = (r, base, n)
    cached = _pack_cache.get(key)
    if cached is None:
        monos, _ = monomials_upto(r, n)
        weights = [base ** i for i in range(r)]
        cached = _pack_cache[key] = np.array(
            [sum(e[i] * weights[i] for i in range(r)) for e in monos],
            dtype=np.int64)
    return cached


class RegularSeries:
    """Rows of dense deglex coefficients; row n covers monomials of total
    degree <= n.  Treat instances as immutable."""

    __slots__ = ("ctx", "r", "rows")

    def __init__(self, ctx: FieldCtx, r: int, rows):
        if not 0 <= r <= MAX_VARS:
            raise ValidationError(f"number of y-variables must be in 0..{MAX_VARS}")
        if len(rows) == 0:
            raise ValidationError("need at least one s-coefficient")
        self.ctx = ctx
        self.r = r
        fixed = []
        for n, row in enumerate(rows):
            want = comb(n + r, r)
            arr = np.asarray(row, dtype=np.int64) % ctx.p
            if len(arr) != want:
                raise NotRegular(
                    f"row {n} stores {len(arr)} coefficients, expected {want}")
            fixed.append(arr)
        self.rows = fixed

    @property
    def d(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, ctx, r, d):
        return cls(ctx, r, [np.zeros(comb(n + r, r), dtype=np.int64)
                            for n in range(d)])

    @classmethod
    def one(cls, ctx, r, d):
        out = cls.zeros(ctx, r, d)
        out.rows[0][0] = 1 % ctx.p
        return out

    @classmethod
    def from_dicts(cls, ctx, r, dicts):
        """Build from one {exponent tuple: coefficient} mapping per row."""
        rows = []
        for n, dct in enumerate(dicts):
            _, index = monomials_upto(r, n)
            row = np.zeros(comb(n + r, r), dtype=np.int64)
            for e, c in dct.items():
                if len(e) != r or sum(e) > n:
                    raise NotRegular(f"monomial {e} invalid in row {n}")
                row[index[e]] = ctx.reduce(c)
            rows.append(row)
        return cls(ctx, r, rows)

    def row_dict(self, n: int) -> dict:
        monos, _ = monomials_upto(self.r, n)
        row = self.rows[n]
        return {monos[i]: int(row[i]) for i in range(len(row)) if row[i]}

    def coeff(self, n: int, e: tuple) -> int:
        _, index = monomials_upto(self.r, n)
        i = index.get(tuple(e))
        if i is None:
            return 0
        return int(self.rows[n][i])

    def truncated(self, d: int) -> "RegularSeries":
        if d > self.d:
            raise ValidationError("cannot extend truncation")
        return RegularSeries(self.ctx, self.r, [row.copy() for row in self.rows[:d]])

    def __eq__(self, other):
        return (isinstance(other, RegularSeries) and self.ctx.p == other.ctx.p
                and self.r == other.r and self.d == other.d
                and all(np.array_equal(a, b)
                        for a, b in zip(self.rows, other.rows)))

    def __add__(self, other):
        return reg_add(self, other)

    def __sub__(self, other):
        return reg_add(self, other, negate=True)

    def __repr__(self):
        return f"RegularSeries(p={self.ctx.p}, r={self.r}, d={self.d})"


def _check_pair(f, g):
    if f.ctx.p != g.ctx.p or f.r != g.r or f.d != g.d:
        raise ValidationError("series must share prime, variables, truncation")


def reg_add(f: RegularSeries, g: RegularSeries, negate: bool = False):
    _check_pair(f, g)
    sign = -1 if negate else 1
    rows = [(a + sign * b) % f.ctx.p for a, b in zip(f.rows, g.rows)]
    return RegularSeries(f.ctx, f.r, rows)


# ---------------------------------------------------------------------------
# Kronecker images
# ---------------------------------------------------------------------------

class KroneckerImage:
    """Packed view of a RegularSeries.

    kind "gamma_y": data is a (d, d^r) matrix; row n is the univariate
    y_1-polynomial that the coefficient of s^n collapsed to.
    kind "gamma_bar": data is the flat length-d^(r+1) y_1-polynomial with
    s collapsed as well.  base records the digit base d.
    """

    __slots__ = ("kind", "ctx", "r", "base", "data")

    def __init__(self, kind, ctx, r, base, data):
        if kind not in ("gamma_y", "gamma_bar"):
            raise ValidationError(f"unknown Kronecker image kind {kind!r}")
        self.kind = kind
        self.ctx = ctx
        self.r = r
        self.base = base
        self.data = data


def _to_matrix(f: RegularSeries):
    d, r = f.d, f.r
    width = d ** r
    mat = np.zeros((d, width), dtype=np.int64)
    for n in range(d):
        mat[n, _pack_cols(r, d, n)] = f.rows[n]
    return mat


def _from_matrix(ctx, mat, r: int, base: int, d: int) -> RegularSeries:
    """Invert the packing via base-d digit positions, rejecting columns
    that no regular monomial can produce."""
    rows = []
    for n in range(d):
        cols = _pack_cols(r, base, n)
        vals = mat[n, cols]
        if np.count_nonzero(mat[n]) != np.count_nonzero(vals):
            raise NotRegular(f"row {n} of unpacked image has stray columns")
        rows.append(vals)
    return RegularSeries(ctx, r, rows)


def gamma_y(f: RegularSeries) -> KroneckerImage:
    return KroneckerImage("gamma_y", f.ctx, f.r, f.d, _to_matrix(f))


def gamma_s(img: KroneckerImage) -> KroneckerImage:
    if img.kind != "gamma_y":
        raise ValidationError("gamma_s applies to a gamma_y image")
    return KroneckerImage("gamma_bar", img.ctx, img.r, img.base,
                          img.data.reshape(-1))


def gamma_bar(f: RegularSeries) -> KroneckerImage:
    return gamma_s(gamma_y(f))


def un_gamma(img: KroneckerImage) -> RegularSeries:
    base, r = img.base, img.r
    if img.kind == "gamma_bar":
        mat = img.data.reshape(base, base ** r)
    else:
        mat = img.data
    return _from_matrix(img.ctx, mat, r, base, base)


# ---------------------------------------------------------------------------
# arithmetic through the packed image
# ---------------------------------------------------------------------------

def reg_mul(f: RegularSeries, g: RegularSeries) -> RegularSeries:
    _check_pair(f, g)
    d, r = f.d, f.r
    width = d ** r
    flat = f.ctx.mul(_to_matrix(f).reshape(-1), _to_matrix(g).reshape(-1),
                     d * width)
    return _from_matrix(f.ctx, flat.reshape(d, width), r, d, d)


def reg_inv(f: RegularSeries) -> RegularSeries:
    d, r = f.d, f.r
    width = d ** r
    flat = inv_arr(f.ctx, _to_matrix(f).reshape(-1), d * width)
    return _from_matrix(f.ctx, flat.reshape(d, width), r, d, d)


def _log_matrix(ctx, mat, m: int, width: int):
    """log of a packed regular matrix (rows of mat, possibly fewer than
    m) to s-truncation m.  Differentiate in s, divide in the flat image,
    integrate in s; divisions stay below the row count."""
    p = ctx.p
    src_rows = mat.shape[0]
    out = np.zeros((m, width), dtype=np.int64)
    if m == 1:
        return out
    flat = mat.reshape(-1)
    fi = inv_arr(ctx, flat, (m - 1) * width)
    nrows = min(src_rows - 1, m - 1)
    der = np.zeros((m - 1, width), dtype=np.int64)
    for n in range(nrows):
        der[n] = (n + 1) * mat[n + 1] % p
    q = ctx.mul(der.reshape(-1), fi, (m - 1) * width).reshape(m - 1, width)
    invs = ctx.inverse_table(m)
    for n in range(1, m):
        out[n] = q[n - 1] * invs[n] % p
    return out


def reg_log(f: RegularSeries) -> RegularSeries:
    if int(f.rows[0][0]) != 1:
        raise ConstantTermNotOne("reg_log needs constant term 1")
    ctx, d, r = f.ctx, f.d, f.r
    if d > ctx.p:
        raise CharTooSmall(f"truncation {d} too long mod {ctx.p}")
    if r == 0:
        col = np.array([int(row[0]) for row in f.rows], dtype=np.int64)
        out = log_arr(ctx, col, d)
        return RegularSeries(ctx, 0, out.reshape(d, 1))
    width = d ** r
    out = _log_matrix(ctx, _to_matrix(f), d, width)
    return _from_matrix(ctx, out, r, d, d)


def reg_exp(h: RegularSeries) -> RegularSeries:
    if int(h.rows[0][0]) != 0:
        raise ConstantTermNotZero("reg_exp needs constant term 0")
    ctx, d, r = h.ctx, h.d, h.r
    if d > ctx.p:
        raise CharTooSmall(f"truncation {d} too long mod {ctx.p}")
    if r == 0:
        col = np.array([int(row[0]) for row in h.rows], dtype=np.int64)
        out = exp_arr(ctx, col, d)
        return RegularSeries(ctx, 0, out.reshape(d, 1))
    p = ctx.p
    width = d ** r
    hmat = _to_matrix(h)
    phi = np.zeros((1, width), dtype=np.int64)
    phi[0, 0] = 1
    m = 1
    while m < d:
        m2 = min(2 * m, d)
        w = -_log_matrix(ctx, phi, m2, width) % p
        w += hmat[:m2]
        w %= p
        w[0, 0] = (w[0, 0] + 1) % p
        phi = ctx.mul(phi.reshape(-1), w.reshape(-1),
                      m2 * width).reshape(m2, width)
        m = m2
    return _from_matrix(ctx, phi, r, d, d)
