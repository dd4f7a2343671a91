"""Limits of short sums of rational functions at z = 1.

A short sum encodes sum_i num_i(t, z) / prod_j (1 - t^{c_ij} z^{b_ij});
the quantity of interest is its limit as every slack variable z_j goes
to 1, keeping at most one surviving variable t.  The route: substitute
z_j -> e^{gamma_j s} for a random vector gamma that keeps every
degenerating factor's exponent nonzero, which turns each term into a
constant-term-in-s problem of generalized Todd type.

With a surviving t the per-term answers are simple rational terms
eps * t^a / prod(1 - t^{b_j}); combine_rational adds them over a common
denominator and reduces, which is how Ehrhart series come out.
"""

import json
import random

import numpy as np

from .ctgtodd import (GToddConstantTermProblem, SimpleRationalTerm,
                      ct_gtodd)
from .errors import (DegreeOverflow, NoValidGamma, ParseError,
                     ValidationError)
from .series import inv_arr
from .toddgen import TDescriptor

COMBINE_CAP = 4096
GAMMA_ATTEMPTS = 20


class ShortSumTerm:
    """num: list of (coeff, t-exponent, z-exponent tuple); den: list of
    (t-exponent, z-exponent tuple), each standing for 1 - t^c z^beta."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = [(int(c), int(t), tuple(int(e) for e in z))
                    for c, t, z in num]
        self.den = [(int(t), tuple(int(e) for e in z)) for t, z in den]


class ShortSum:
    """m surviving variables (0 or 1), n slack variables, term list."""

    __slots__ = ("m", "n", "terms")

    def __init__(self, m, n, terms):
        if m not in (0, 1):
            raise ValidationError("only 0 or 1 surviving variables")
        if n < 0:
            raise ValidationError("negative slack variable count")
        self.m = m
        self.n = n
        self.terms = list(terms)

    @property
    def n_factors(self):
        """Largest denominator length over the terms."""
        return max((len(t.den) for t in self.terms), default=0)


def _field(obj, key, where, default=None):
    if key in obj:
        return obj[key]
    if default is not None:
        return default
    raise ParseError(f"{where}: missing field {key!r}")


def parse_shortsum(source) -> ShortSum:
    """Build a ShortSum from a JSON string (or an already-decoded dict).

    {"t_vars": 0|1, "z_vars": n,
     "terms": [{"num": [{"c": int, "t": int, "z": [int x n]}],
                "den": [{"t": int, "z": [int x n]}]}]}

    "t" defaults to 0.  Rejects t exponents when t_vars is 0 and the
    degenerate factor 1 - t^0 z^0.
    """
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as e:
            raise ParseError(f"not valid JSON: {e}") from None
    else:
        obj = source
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    m = _field(obj, "t_vars", "top level")
    n = _field(obj, "z_vars", "top level")
    raw_terms = _field(obj, "terms", "top level")
    if m not in (0, 1):
        raise ParseError(f"t_vars must be 0 or 1, got {m!r}")
    if not isinstance(n, int) or n < 0:
        raise ParseError(f"z_vars must be a nonnegative integer, got {n!r}")
    if not isinstance(raw_terms, list):
        raise ParseError("terms must be a list")
    terms = []
    for i, rt in enumerate(raw_terms):
        where = f"terms[{i}]"
        num = []
        for j, mono in enumerate(_field(rt, "num", where)):
            c = _field(mono, "c", f"{where}.num[{j}]")
            t = mono.get("t", 0)
            z = _field(mono, "z", f"{where}.num[{j}]", default=[])
            if not isinstance(c, int) or not isinstance(t, int):
                raise ParseError(f"{where}.num[{j}]: c and t must be ints")
            if len(z) != n:
                raise ParseError(
                    f"{where}.num[{j}]: z has length {len(z)}, expected {n}")
            if m == 0 and t != 0:
                raise ParseError(
                    f"{where}.num[{j}]: t exponent with t_vars = 0")
            num.append((c, t, z))
        den = []
        for j, fac in enumerate(_field(rt, "den", where)):
            t = fac.get("t", 0)
            z = _field(fac, "z", f"{where}.den[{j}]", default=[])
            if not isinstance(t, int):
                raise ParseError(f"{where}.den[{j}]: t must be an int")
            if len(z) != n:
                raise ParseError(
                    f"{where}.den[{j}]: z has length {len(z)}, expected {n}")
            if m == 0 and t != 0:
                raise ParseError(
                    f"{where}.den[{j}]: t exponent with t_vars = 0")
            if t == 0 and not any(z):
                raise ParseError(f"{where}.den[{j}]: factor 1 - t^0 z^0")
            den.append((t, z))
        terms.append(ShortSumTerm(num, den))
    return ShortSum(m, n, terms)


def shortsum_to_json(ss: ShortSum) -> str:
    terms = []
    for t in ss.terms:
        terms.append({
            "num": [{"c": c, "t": te, "z": list(z)} for c, te, z in t.num],
            "den": [{"t": te, "z": list(z)} for te, z in t.den],
        })
    return json.dumps({"t_vars": ss.m, "z_vars": ss.n, "terms": terms},
                      indent=1)


class GammaVector:
    __slots__ = ("entries", "seed")

    def __init__(self, entries, seed):
        self.entries = tuple(int(v) for v in entries)
        self.seed = seed

    def dot(self, z) -> int:
        return sum(g * e for g, e in zip(self.entries, z))


def pick_gamma(shortsum: ShortSum, ctx, seed, attempts=GAMMA_ATTEMPTS):
    """Random z-substitution exponents, rejected until every denominator
    factor that degenerates at z = 1 (trivial t-part) keeps a nonzero
    exponent mod p."""
    critical = set()
    for term in shortsum.terms:
        for t, z in term.den:
            if t == 0:
                critical.add(z)
    rng = random.Random(seed)
    p = ctx.p
    for _ in range(attempts):
        entries = tuple(rng.randrange(p) for _ in range(shortsum.n))
        gamma = GammaVector(entries, seed)
        if all(gamma.dot(z) % p for z in critical):
            return gamma
    raise NoValidGamma(
        f"no valid substitution vector in {attempts} attempts mod {p}")


def _term_problems(term: ShortSumTerm, gamma: GammaVector, p: int):
    """Split one short-sum term into CT problems, one per numerator
    t-exponent, sharing the denominator classification."""
    B0 = []
    groups = {}
    for t, z in term.den:
        b = gamma.dot(z)
        if t == 0:
            if b % p == 0:
                raise NoValidGamma(
                    f"substitution vector is not valid mod {p}")
            B0.append(b)
        else:
            groups.setdefault(t, []).append(b)
    pairs = [(B, (), TDescriptor("monomial", c))
             for c, B in sorted(groups.items())]
    by_shift = {}
    for c, t, z in term.num:
        by_shift.setdefault(t, []).append((c, gamma.dot(z)))
    out = []
    for shift, L in sorted(by_shift.items()):
        out.append(GToddConstantTermProblem(L, B0, (), pairs, t_shift=shift))
    return out


def solve_basic(shortsum: ShortSum, gamma: GammaVector, ctx):
    """Evaluate the limit at z = 1.  Returns a residue when there is no
    surviving variable, else a normalized SimpleRationalTerm list."""
    p = ctx.p
    if shortsum.m == 0:
        total = 0
        for term in shortsum.terms:
            for prob in _term_problems(term, gamma, p):
                res = ct_gtodd(prob, p)
                total = (total + res.scalar) % p
        return total
    out = []
    for term in shortsum.terms:
        for prob in _term_problems(term, gamma, p):
            res = ct_gtodd(prob, p)
            if res.is_scalar:
                if res.scalar:
                    out.append(SimpleRationalTerm(res.scalar, 0, ()))
                continue
            for t in res.terms:
                out.append(t.normalize(ctx))
    return out


# ---------------------------------------------------------------------------
# dense polynomial helpers over Z_p
# ---------------------------------------------------------------------------


def poly_trim(f):
    f = np.asarray(f, dtype=np.int64)
    nz = np.nonzero(f)[0]
    if len(nz) == 0:
        return np.zeros(1, dtype=np.int64)
    return f[:nz[-1] + 1].copy()


def poly_mul(ctx, f, g):
    n = len(f) + len(g) - 1
    return poly_trim(ctx.mul(f, g, n))


def poly_divmod(ctx, f, g):
    """(quotient, remainder) with deg r < deg g; g nonzero."""
    f = poly_trim(f)
    g = poly_trim(g)
    if len(g) == 1 and g[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    p = ctx.p
    lead_inv = ctx.inv(int(g[-1]))
    dg = len(g) - 1
    r = f % p
    if len(r) < len(g):
        return np.zeros(1, dtype=np.int64), poly_trim(r)
    q = np.zeros(len(r) - dg, dtype=np.int64)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] % p
        if c == 0:
            continue
        c = c * lead_inv % p
        q[i - dg] = c
        r[i - dg:i + 1] = (r[i - dg:i + 1] - c * g) % p
    return poly_trim(q), poly_trim(r)


def poly_gcd(ctx, f, g):
    """Monic gcd by the Euclidean algorithm."""
    a, b = poly_trim(f), poly_trim(g)
    while not (len(b) == 1 and b[0] == 0):
        _, r = poly_divmod(ctx, a, b)
        a, b = b, r
    if len(a) == 1 and a[0] == 0:
        return a
    return a * ctx.inv(int(a[-1])) % ctx.p


def _one_minus_tb(b: int):
    f = np.zeros(b + 1, dtype=np.int64)
    f[0] = 1
    f[b] = -1
    return f


class RationalFunctionT:
    """t^offset * num(t)/den(t) over Z_p, gcd-reduced, den(0) = 1.

    den_factors lists (b, multiplicity) with den = residual *
    prod (1 - t^b)^multiplicity, extracted greedily from large b down,
    for display purposes only.
    """

    __slots__ = ("ctx", "num", "den", "offset", "den_factors", "den_residual")

    def __init__(self, ctx, num, den, offset=0):
        p = ctx.p
        num = poly_trim(np.asarray(num, dtype=np.int64) % p)
        den = poly_trim(np.asarray(den, dtype=np.int64) % p)
        if len(den) == 1 and den[0] == 0:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(ctx, num, den)
        if len(g) > 1:
            num, _ = poly_divmod(ctx, num, g)
            den, _ = poly_divmod(ctx, den, g)
        if len(num) == 1 and num[0] == 0:
            den = np.ones(1, dtype=np.int64)
            offset = 0
        else:
            # move pure powers of t into the offset
            tn = int(np.nonzero(num)[0][0])
            td = int(np.nonzero(den)[0][0])
            offset += tn - td
            num = poly_trim(num[tn:])
            den = poly_trim(den[td:])
        c = int(den[0])
        if c != 1:
            ci = ctx.inv(c)
            num = num * ci % p
            den = den * ci % p
        self.ctx = ctx
        self.num = num
        self.den = den
        self.offset = int(offset)
        self.den_factors, self.den_residual = self._factor_den()

    def _factor_den(self):
        ctx = self.ctx
        rem = self.den.copy()
        factors = []
        for b in range(len(rem) - 1, 0, -1):
            fb = _one_minus_tb(b)
            mult = 0
            while len(rem) > b:
                q, r = poly_divmod(ctx, rem, fb)
                if len(r) == 1 and r[0] == 0:
                    rem = q
                    mult += 1
                else:
                    break
            if mult:
                factors.append((b, mult))
        factors.sort()
        return factors, rem

    def is_zero(self):
        return len(self.num) == 1 and self.num[0] == 0

    def key(self):
        return (tuple(int(v) for v in self.num),
                tuple(int(v) for v in self.den), self.offset)

    def __eq__(self, other):
        return (isinstance(other, RationalFunctionT)
                and self.ctx.p == other.ctx.p and self.key() == other.key())

    def coefficients(self, K: int):
        """First K + 1 series coefficients; needs offset >= 0."""
        if self.offset < 0:
            raise ValidationError("Laurent part present, no power series")
        n = K + 1
        inv = inv_arr(self.ctx, self.den, n)
        ser = self.ctx.mul(self.num, inv, n)
        if self.offset:
            ser = np.concatenate(
                [np.zeros(min(self.offset, n), dtype=np.int64),
                 ser[:max(n - self.offset, 0)]])
        return ser

    def __str__(self):
        num = _poly_str(self.num)
        parts = []
        if self.offset:
            parts.append(f"t^{self.offset}" if self.offset != 1 else "t")
        parts.append(f"({num})" if len(self.num) > 1 else num)
        top = " * ".join(parts)
        if len(self.den) == 1:
            return top
        bot = []
        for b, mult in self.den_factors:
            base = f"(1-t^{b})" if b > 1 else "(1-t)"
            bot.append(f"{base}^{mult}" if mult > 1 else base)
        if len(self.den_residual) > 1:
            bot.append(f"({_poly_str(self.den_residual)})")
        return f"{top} / {''.join(bot)}"


def _poly_str(f):
    parts = []
    for i, c in enumerate(f):
        c = int(c)
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "t" if i == 1 else f"t^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    if not parts:
        return "0"
    return " + ".join(parts)


def combine_rational(terms, ctx, cap=COMBINE_CAP) -> RationalFunctionT:
    """Sum normalized simple rational terms over a common denominator.

    The common denominator takes each exponent b to its largest
    multiplicity across terms; degrees beyond cap raise DegreeOverflow.
    Negative t-exponents a are absorbed into the offset.
    """
    p = ctx.p
    if not terms:
        return RationalFunctionT(ctx, [0], [1])
    norm = [t.normalize(ctx) for t in terms]
    mult = {}
    for t in norm:
        seen = {}
        for b in t.b:
            seen[b] = seen.get(b, 0) + 1
        for b, m in seen.items():
            mult[b] = max(mult.get(b, 0), m)
    deg_den = sum(b * m for b, m in mult.items())
    shift = min((t.a for t in norm), default=0)
    if shift > 0:
        shift = 0
    deg_num_max = deg_den + max(t.a - shift for t in norm)
    if deg_den > cap or deg_num_max > cap:
        raise DegreeOverflow(
            f"combined degree {max(deg_den, deg_num_max)} exceeds cap {cap}")
    den = np.ones(1, dtype=np.int64)
    for b, m in sorted(mult.items()):
        for _ in range(m):
            den = poly_mul(ctx, den, _one_minus_tb(b))
    num = np.zeros(1, dtype=np.int64)
    for t in norm:
        part = den
        for b in t.b:
            part, r = poly_divmod(ctx, part, _one_minus_tb(b))
            assert len(r) == 1 and r[0] == 0
        part = part * (t.eps % p) % p
        ext = np.zeros(t.a - shift + len(part), dtype=np.int64)
        ext[t.a - shift:] = part
        if len(ext) > len(num):
            num, ext = ext, num
        num[:len(ext)] = (num[:len(ext)] + ext) % p
    return RationalFunctionT(ctx, num, den, offset=shift)


def ehrhart_series(shortsum: ShortSum, ctx, seed) -> RationalFunctionT:
    """pick_gamma, solve each term, combine: the generating function of
    lattice-point counts as a reduced rational function of t."""
    if shortsum.m != 1:
        raise ValidationError("series assembly needs one surviving variable")
    gamma = pick_gamma(shortsum, ctx, seed)
    terms = solve_basic(shortsum, gamma, ctx)
    return combine_rational(terms, ctx)
