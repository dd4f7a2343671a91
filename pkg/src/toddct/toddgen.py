"""Power sums, the Todd base series, and generalized Todd sequences.

The pipeline: a multiset B enters through its power sums p_n(B), pulled
out of -log prod(1 - b*s); the base series h(s) = ln(s/(e^s - 1)) and
h(s,y) = -ln(1 - y(e^s - 1)) are built by log of assembled exponential
series; sums of shifted copies sum(h(b*s)) reduce to coefficient-wise
scaling by p_n(B); and the generalized Todd sequence is exp of the
assembled combination.
"""

from fractions import Fraction
from math import comb

import numpy as np

from .errors import CharTooSmall, UnsuitablePrime, ValidationError
from .modfield import FieldCtx
from .regseries import RegularSeries, monomials_upto, reg_exp, reg_log
from .series import TruncSeries, exp_arr, log_arr


class MultiSetZ:
    """Multiset of exact integers or rationals, order-insensitive.

    Zero entries are allowed at construction; call sites that need units
    mod p (the B_0 role) run check_units.
    """

    __slots__ = ("elements",)

    def __init__(self, elements=()):
        elems = []
        for e in elements:
            if isinstance(e, Fraction):
                elems.append(e if e.denominator > 1 else int(e))
            elif isinstance(e, int):
                elems.append(e)
            else:
                raise ValidationError(f"multiset entry {e!r} is not exact")
        self.elements = tuple(sorted(elems, key=Fraction))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, MultiSetZ) and self.elements == other.elements

    def __repr__(self):
        return f"MultiSetZ({list(self.elements)!r})"

    def residues(self, ctx: FieldCtx) -> np.ndarray:
        return np.array([ctx.reduce(e) for e in self.elements], dtype=np.int64)

    def check_units(self, ctx: FieldCtx, role: str):
        for e in self.elements:
            if ctx.reduce(e) == 0:
                raise UnsuitablePrime(
                    f"{role} entry {e} vanishes mod {ctx.p}")

    def p1(self):
        """Exact first power sum."""
        return sum(self.elements, Fraction(0))

    def squared(self) -> "MultiSetZ":
        return MultiSetZ([e * e for e in self.elements])


class TDescriptor:
    """What the group variable t_i stands for: a fixed rational value
    (never 1) or a power t^m of the single surviving variable (m != 0).
    """

    __slots__ = ("kind", "value")

    def __init__(self, kind, value):
        if kind == "numeric":
            value = Fraction(value)
            if value == 1:
                raise ValidationError("numeric t_i must differ from 1")
        elif kind == "monomial":
            value = int(value)
            if value == 0:
                raise ValidationError("monomial t_i needs a nonzero exponent")
        else:
            raise ValidationError(f"unknown t descriptor kind {kind!r}")
        self.kind = kind
        self.value = value

    def __repr__(self):
        return f"TDescriptor({self.kind!r}, {self.value!r})"

    def __eq__(self, other):
        return (isinstance(other, TDescriptor) and self.kind == other.kind
                and self.value == other.value)


class GToddSpec:
    """Data of a generalized Todd sequence: exact shift a, the plain
    pair (B_0, B̄_0), and per-variable triples (B_i, B̄_i, t_i)."""

    __slots__ = ("a", "B0", "B0bar", "pairs", "d")

    def __init__(self, a, B0, B0bar, pairs, d):
        self.a = Fraction(a)
        self.B0 = B0 if isinstance(B0, MultiSetZ) else MultiSetZ(B0)
        self.B0bar = B0bar if isinstance(B0bar, MultiSetZ) else MultiSetZ(B0bar)
        fixed = []
        for B, Bbar, t in pairs:
            fixed.append((B if isinstance(B, MultiSetZ) else MultiSetZ(B),
                          Bbar if isinstance(Bbar, MultiSetZ) else MultiSetZ(Bbar),
                          t))
        self.pairs = fixed
        if d < 1:
            raise ValidationError("need at least one output coefficient")
        self.d = d

    @property
    def r(self):
        return len(self.pairs)


def power_sums(ctx: FieldCtx, B: MultiSetZ, d: int) -> np.ndarray:
    """p_1(B)..p_{d-1}(B) mod p, via -log of prod(1 - b*s) mod s^d.

    The product is taken over a balanced tree with every intermediate
    truncated to d terms, which both caps factor degrees (the block
    splitting) and keeps the tree cheap.
    """
    if d < 1:
        raise ValidationError("d must be positive")
    out = np.zeros(max(d - 1, 0), dtype=np.int64)
    if d == 1 or len(B) == 0:
        return out
    p = ctx.p
    if d > p:
        raise CharTooSmall(f"power sums need d <= p, got d={d}, p={p}")
    polys = [np.array([1, (-b) % p], dtype=np.int64) for b in B.residues(ctx)]
    while len(polys) > 1:
        nxt = []
        for i in range(0, len(polys) - 1, 2):
            nxt.append(ctx.mul(polys[i], polys[i + 1], d))
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    prod = polys[0]
    if len(prod) < d:
        prod = np.concatenate([prod, np.zeros(d - len(prod), dtype=np.int64)])
    lg = log_arr(ctx, prod, d)
    ns = np.arange(1, d, dtype=np.int64)
    out[:] = (-(ns * lg[1:d]) % p)
    return out


def _inv_factorials(ctx: FieldCtx, top: int) -> np.ndarray:
    """1/0!, 1/1!, ..., 1/top! mod p; needs top < p."""
    p = ctx.p
    if top >= p:
        raise CharTooSmall(f"factorial {top}! vanishes mod {p}")
    fact = 1
    facts = np.empty(top + 1, dtype=np.int64)
    facts[0] = 1
    for k in range(1, top + 1):
        fact = fact * k % p
        facts[k] = fact
    inv = np.empty(top + 1, dtype=np.int64)
    inv[top] = ctx.inv(fact)
    for k in range(top, 0, -1):
        inv[k - 1] = inv[k] * k % p
    return inv


def build_h(ctx: FieldCtx, d: int) -> TruncSeries:
    """h(s) = ln(s/(e^s - 1)) mod s^d: minus the log of the assembled
    series (e^s - 1)/s = sum s^n/(n+1)!."""
    if d < 1:
        raise ValidationError("d must be positive")
    if d >= ctx.p:
        raise CharTooSmall(f"need d < p, got d={d}, p={ctx.p}")
    invf = _inv_factorials(ctx, d)
    g = invf[1:d + 1].copy()
    h = (-log_arr(ctx, g, d)) % ctx.p
    return TruncSeries(ctx, h)


def build_hy(ctx: FieldCtx, d: int) -> RegularSeries:
    """h(s,y) = -ln(1 - y(e^s - 1)) mod s^d as a one-variable regular
    series; coefficient of s^n is a degree-n polynomial in y."""
    if d < 1:
        raise ValidationError("d must be positive")
    if d >= ctx.p:
        raise CharTooSmall(f"need d < p, got d={d}, p={ctx.p}")
    p = ctx.p
    invf = _inv_factorials(ctx, d)
    base = RegularSeries.from_dicts(
        ctx, 1,
        [{(0,): 1}] + [{(1,): (-invf[n]) % p} for n in range(1, d)])
    lg = reg_log(base)
    rows = [(-row) % p for row in lg.rows]
    return RegularSeries(ctx, 1, rows)


def sum_similar(h, B: MultiSetZ):
    """sum over b in B of h(b*s): scale coefficient n by p_n(B); the
    constant row scales by |B|."""
    if isinstance(h, TruncSeries):
        ctx = h.ctx
        d = h.d
        ps = power_sums(ctx, B, d)
        out = h.coeffs.copy()
        out[0] = out[0] * (len(B) % ctx.p) % ctx.p
        if d > 1:
            out[1:] = out[1:] * ps % ctx.p
        return TruncSeries(ctx, out)
    if isinstance(h, RegularSeries):
        ctx = h.ctx
        d = h.d
        ps = power_sums(ctx, B, d)
        rows = [h.rows[0] * (len(B) % ctx.p) % ctx.p]
        for n in range(1, d):
            rows.append(h.rows[n] * ps[n - 1] % ctx.p)
        return RegularSeries(ctx, h.r, rows)
    raise ValidationError(f"cannot scale {type(h).__name__}")


def gtodd(ctx: FieldCtx, spec: GToddSpec) -> RegularSeries:
    """The sequence gtd_0..gtd_{d-1}: exponential of

        a*s + sum_{B_0} h(bs) - sum_{B̄_0} h(bs)
            + sum_i [ sum_{B_i} h(bs, y_i) - sum_{B̄_i} h(bs, y_i) ].
    """
    d, r = spec.d, spec.r
    p = ctx.p
    if d >= p:
        raise CharTooSmall(f"need d < p, got d={d}, p={p}")
    h = build_h(ctx, d).coeffs
    dp0 = power_sums(ctx, spec.B0, d)
    dp0 = (dp0 - power_sums(ctx, spec.B0bar, d)) % p
    scalar = np.zeros(d, dtype=np.int64)
    if d > 1:
        scalar[1:] = h[1:] * dp0 % p
        scalar[1] = (scalar[1] + ctx.reduce(spec.a)) % p
    pair_data = []
    if r:
        hy = build_hy(ctx, d)
        for B, Bbar, _t in spec.pairs:
            dps = (power_sums(ctx, B, d) - power_sums(ctx, Bbar, d)) % p
            pair_data.append(dps)
    rows = []
    for n in range(d):
        row = np.zeros(comb(n + r, r), dtype=np.int64)
        row[0] = scalar[n]
        if r and n >= 1:
            _, index = monomials_upto(r, n)
            for i, dps in enumerate(pair_data):
                hyrow = hy.rows[n]
                for k in range(1, n + 1):
                    c = int(hyrow[k])
                    if c:
                        e = tuple(k if j == i else 0 for j in range(r))
                        row[index[e]] = (row[index[e]] + dps[n - 1] * c) % p
        rows.append(row)
    H = RegularSeries(ctx, r, rows)
    return reg_exp(H)


def todd_r0_shift(B0: MultiSetZ, B0bar: MultiSetZ) -> Fraction:
    """The exact shift a that makes e^{as} prod f(bs)/prod f(bs) even."""
    return Fraction(B0.p1() - B0bar.p1(), 2)


def todd_r0(ctx: FieldCtx, a_mode: str, B0: MultiSetZ, B0bar: MultiSetZ,
            d: int) -> TruncSeries:
    """Todd sequence for r = 0 with the automatic even-making shift
    a = (p_1(B_0) - p_1(B̄_0))/2.

    The shifted log H(s) is an even series, so only coefficients of
    s̄ = s^2 are stored and exponentiated, at half length; odd output
    coefficients are zero by construction.
    """
    if a_mode != "auto":
        raise ValidationError(f"unsupported a_mode {a_mode!r}")
    if d < 1:
        raise ValidationError("d must be positive")
    p = ctx.p
    if d >= p:
        raise CharTooSmall(f"need d < p, got d={d}, p={p}")
    dprime = (d + 1) // 2
    h = build_h(ctx, d).coeffs
    dps2 = (power_sums(ctx, B0.squared(), dprime)
            - power_sums(ctx, B0bar.squared(), dprime)) % p
    hbar = np.zeros(dprime, dtype=np.int64)
    for n in range(1, dprime):
        hbar[n] = h[2 * n] * dps2[n - 1] % p
    fbar = exp_arr(ctx, hbar, dprime)
    out = np.zeros(d, dtype=np.int64)
    out[0::2] = fbar
    return TruncSeries(ctx, out)
