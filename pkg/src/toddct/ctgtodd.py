"""Constant term in s of functions of generalized Todd type.

The target has the shape

    G(s) = L(e^s) * prod_{B̄_0}(1-e^{bs}) / prod_{B_0}(1-e^{bs})
           * prod_i [ prod_{B̄_i}(1-e^{bs} t_i) / prod_{B_i}(1-e^{bs} t_i) ]

with L a Laurent combination of exponentials.  After factoring out the
pole order d, the constant term is A * sum E_n F_{d-n} where A collects
signs and leading coefficients, E is the shifted numerator series, and F
is a generalized Todd sequence, regular in the y_i = t_i/(1-t_i).

Results are residues when every t_i is a number, or lists of simple
rational terms eps * t^a / prod(1-t^{b_j}) when some t_i is a power of
the surviving variable t.
"""

from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import UnsuitablePrime, ValidationError, ZeroExponentFactor
from .modfield import make_field
from .regseries import monomials_upto
from .toddgen import (GToddSpec, MultiSetZ, TDescriptor, _inv_factorials,
                      gtodd, todd_r0, todd_r0_shift)


class SimpleRationalTerm:
    """eps * t^a / prod_j (1 - t^{b_j}); eps is a residue, exponents are
    signed integers (b entries nonzero)."""

    __slots__ = ("eps", "a", "b")

    def __init__(self, eps, a, b=()):
        self.eps = int(eps)
        self.a = int(a)
        self.b = tuple(int(v) for v in b)
        if any(v == 0 for v in self.b):
            raise ZeroExponentFactor("denominator factor 1 - t^0 vanishes")

    def normalize(self, ctx) -> "SimpleRationalTerm":
        """Rewrite every 1/(1-t^{-b}) as -t^b/(1-t^b) so all denominator
        exponents are positive."""
        eps, a = self.eps, self.a
        out = []
        for v in self.b:
            if v < 0:
                eps = (-eps) % ctx.p
                a += -v
                out.append(-v)
            else:
                out.append(v)
        return SimpleRationalTerm(eps, a, sorted(out))

    def __eq__(self, other):
        return (isinstance(other, SimpleRationalTerm)
                and (self.eps, self.a, tuple(sorted(self.b)))
                == (other.eps, other.a, tuple(sorted(other.b))))

    def __repr__(self):
        return f"SimpleRationalTerm({self.eps}, {self.a}, {self.b})"


class CTResult:
    """Either a single residue (no surviving t) or a term list."""

    __slots__ = ("scalar", "terms")

    def __init__(self, scalar=None, terms=None):
        if (scalar is None) == (terms is None):
            raise ValidationError("exactly one of scalar/terms")
        self.scalar = scalar
        self.terms = terms

    @property
    def is_scalar(self):
        return self.scalar is not None


class GToddConstantTermProblem:
    """L as exact (coefficient, exponent) pairs, the pole sets B_0/B̄_0,
    per-variable triples (B_i, B̄_i, t_i), and an outer t^{t_shift}
    multiplier carried through untouched by the constant term in s."""

    __slots__ = ("L", "B0", "B0bar", "pairs", "t_shift")

    def __init__(self, L, B0, B0bar=(), pairs=(), t_shift=0):
        fixed = []
        for coeff, expo in L:
            fixed.append((Fraction(coeff), Fraction(expo)))
        if not fixed:
            raise ValidationError("L needs at least one monomial")
        self.L = fixed
        self.B0 = B0 if isinstance(B0, MultiSetZ) else MultiSetZ(B0)
        self.B0bar = (B0bar if isinstance(B0bar, MultiSetZ)
                      else MultiSetZ(B0bar))
        ps = []
        for B, Bbar, t in pairs:
            if not isinstance(t, TDescriptor):
                raise ValidationError("pair needs a TDescriptor")
            ps.append((B if isinstance(B, MultiSetZ) else MultiSetZ(B),
                       Bbar if isinstance(Bbar, MultiSetZ) else MultiSetZ(Bbar),
                       t))
        self.pairs = ps
        self.t_shift = int(t_shift)

    @property
    def r(self):
        return len(self.pairs)


def orders(problem) -> tuple:
    """(d0, d1, d): d1 = |B_0| - |B̄_0|; d0 = order of L(e^s), found over
    exact rationals; d = d1 - d0.  d0 is None (and d negative) when
    L(e^s) vanishes to order beyond d1."""
    d1 = len(problem.B0) - len(problem.B0bar)
    d0 = None
    for n in range(max(d1, 0) + 1):
        c = sum(l * a ** n for l, a in problem.L)
        if c != 0:
            d0 = n
            break
    d = d1 - d0 if d0 is not None else -1
    return d0, d1, d


def build_E(ctx, problem, d0: int, d: int, a_shift=Fraction(0)) -> np.ndarray:
    """Series of e^{-a_shift*s} L(e^s) / s^{d0} mod s^{d+1}:
    E_n = sum_i l_i (a_i - a_shift)^{n+d0} / (n+d0)!."""
    p = ctx.p
    invf = _inv_factorials(ctx, d0 + d)
    E = np.zeros(d + 1, dtype=np.int64)
    for l, a in problem.L:
        lr = ctx.reduce(l)
        ar = ctx.reduce(a - a_shift)
        pw = pow(int(ar), d0, p)
        for n in range(d + 1):
            E[n] = (E[n] + lr * pw % p * invf[n + d0]) % p
            pw = pw * ar % p
    return E


def build_A(ctx, problem):
    """The s-free prefactor.  Returns (scalar, sym) where scalar folds
    the sign, the B_0/B̄_0 leading coefficients, and the (1-t_i) powers
    for numeric t_i; sym lists, per pair, the exponent of the symbolic
    (1-t^{m_i}) power still to be applied (None for numeric pairs)."""
    p = ctx.p
    problem.B0.check_units(ctx, "B_0")
    problem.B0bar.check_units(ctx, "B̄_0")
    scalar = 1
    for b in problem.B0bar.residues(ctx):
        scalar = scalar * int(b) % p
    for b in problem.B0.residues(ctx):
        scalar = scalar * ctx.inv(int(b)) % p
    if (len(problem.B0) + len(problem.B0bar)) % 2:
        scalar = (-scalar) % p
    sym = []
    for B, Bbar, t in problem.pairs:
        e = len(Bbar) - len(B)
        if t.kind == "numeric":
            base = ctx.reduce(1 - t.value)
            if e >= 0:
                scalar = scalar * pow(base, e, p) % p
            else:
                if base == 0:
                    raise UnsuitablePrime(
                        f"1 - t_i vanishes mod {p} for t_i = {t.value}")
                scalar = scalar * pow(ctx.inv(base), -e, p) % p
            sym.append(None)
        else:
            sym.append(e)
    return scalar, sym


def _binomial_factor(m: int, n: int, p: int):
    """(1 - t^m)^n expanded: list of (coefficient, t-exponent)."""
    return [((-1) ** j * comb(n, j) % p, m * j) for j in range(n + 1)]


def ct_gtodd(problem: GToddConstantTermProblem, p: int) -> CTResult:
    """Constant term in s of the generalized-Todd-type function, mod p.

    p must exceed d1 = |B_0| - |B̄_0| and no B_0/B̄_0 entry may vanish
    mod p.  The trivial case (pole order <= 0) evaluates at s = 0.
    """
    ctx = make_field(p)
    d0, d1, d = orders(problem)
    if p <= d1:
        raise UnsuitablePrime(f"need p > {d1}, got {p}")
    symbolic = problem.t_shift != 0 or any(
        t.kind == "monomial" for _, _, t in problem.pairs)
    if d < 0:
        return CTResult(terms=[]) if symbolic else CTResult(scalar=0)
    A_scalar, sym = build_A(ctx, problem)
    r = problem.r
    # collapsed y-polynomial C(y) = sum_n E_n F_{d-n}
    if d == 0:
        C = {(0,) * r: int(build_E(ctx, problem, d0, 0)[0])}
    elif r == 0:
        a_shift = todd_r0_shift(problem.B0, problem.B0bar)
        E = build_E(ctx, problem, d0, d, a_shift)
        F = todd_r0(ctx, "auto", problem.B0, problem.B0bar, d + 1).coeffs
        C = {(): int((E * F[::-1] % p).sum() % p)}
    else:
        E = build_E(ctx, problem, d0, d)
        spec = GToddSpec(0, problem.B0, problem.B0bar, problem.pairs, d + 1)
        F = gtodd(ctx, spec)
        C = {}
        for mrow in range(d + 1):
            w = int(E[d - mrow])
            if w == 0:
                continue
            monos, _ = monomials_upto(r, mrow)
            row = F.rows[mrow]
            for idx in np.nonzero(row)[0]:
                e = monos[idx]
                C[e] = (C.get(e, 0) + w * int(row[idx])) % p
    # substitute y_i = t_i/(1-t_i) and attach the prefactor
    y_num = []
    for B, Bbar, t in problem.pairs:
        if t.kind == "numeric":
            y_num.append(ctx.reduce(t.value / (1 - t.value)))
        else:
            y_num.append(None)
    terms = []
    for e, c in C.items():
        eps = A_scalar * c % p
        if eps == 0:
            continue
        a = problem.t_shift
        bfac = []
        numer = []
        for i, (B, Bbar, t) in enumerate(problem.pairs):
            ei = e[i]
            if t.kind == "numeric":
                eps = eps * pow(int(y_num[i]), ei, p) % p
            else:
                m = t.value
                a += m * ei
                net = ei - sym[i]
                if net > 0:
                    bfac.extend([m] * net)
                elif net < 0:
                    numer.append(_binomial_factor(m, -net, p))
        expanded = [(eps, a)]
        for poly in numer:
            expanded = [(c1 * c2 % p, a1 + a2)
                        for c1, a1 in expanded for c2, a2 in poly]
        for c_, a_ in expanded:
            if c_:
                terms.append(SimpleRationalTerm(c_, a_, bfac))
    if not symbolic:
        total = 0
        for t in terms:
            total = (total + t.eps) % p
        return CTResult(scalar=total)
    return CTResult(terms=terms)
