"""Integer linear programming by binary search on series prefix counts.

For a bounded P, substituting y_k -> y_k t^{c_k} into its lattice-point
generating function and taking the limit at y = 1 leaves
g(t) = sum_{x in P cap Z^n} t^{c.x}.  The optimum of c.x is then the
extreme exponent of g, found from its normalized short-sum form via a
truncated-series probe, doubling on prefix counts, and binary search.
Prefix counts are true nonnegative integers, so a residue is declared
zero only when it vanishes under two independent primes.
"""

import numpy as np

from .ctgtodd import SimpleRationalTerm
from .errors import (EmptySum, ResourceError, SearchSpaceTooLarge,
                     Unbounded, ValidationError)
from .mpa import ShortSum, ShortSumTerm, pick_gamma, solve_basic
from .series import MAX_SERIES_LEN, coeff_reciprocal_prefix

DEFAULT_K0 = 1 << 16
BRUTE_NODE_CAP = 10 ** 7
PREFIX_DP_CUTOFF = 10 ** 5


class CostSpecializedSum:
    """Normalized simple rational terms whose sum is g(t) = sum t^{c.x},
    kept per prime."""

    __slots__ = ("terms", "ctx", "_rec_cache")

    def __init__(self, terms, ctx):
        self.terms = list(terms)
        self.ctx = ctx
        self._rec_cache = {}

    def reciprocal(self, b, length):
        """Series of 1/prod_j (1 - t^{b_j}) mod t^length, cached."""
        cached = self._rec_cache.get(b)
        if cached is None or len(cached) < length:
            cached = _reciprocal_series(self.ctx, b, length)
            self._rec_cache[b] = cached
        return cached[:length]


class ILPInstance:
    """One-row knapsack: optimize c.x over a.x = b (or <= b), x >= 0."""

    __slots__ = ("a", "b", "c", "relation")

    def __init__(self, a, b, c, relation="eq"):
        self.a = tuple(int(v) for v in a)
        self.b = int(b)
        self.c = tuple(int(v) for v in c)
        if relation not in ("eq", "le"):
            raise ValidationError("relation must be 'eq' or 'le'")
        if len(self.a) != len(self.c):
            raise ValidationError("a and c disagree on dimension")
        if any(v <= 0 for v in self.a):
            raise ValidationError("weights must be positive")
        if self.b < 0:
            raise ValidationError("negative right-hand side")
        self.relation = relation


def _reciprocal_series(ctx, b, length):
    p = ctx.p
    arr = np.zeros(length, dtype=np.int64)
    arr[0] = 1
    for bj in b:
        # divide by (1 - t^bj): strided running sums
        for r in range(min(bj, length)):
            lane = arr[r::bj]
            np.cumsum(lane, out=lane)
            lane %= p
    return arr


def specialize_cost(shortsum: ShortSum, c, ctx, seed) -> CostSpecializedSum:
    """Apply y_k -> y_k t^{c_k} to a z-only short sum, then run the
    z -> 1 limit; the result is the normalized term list of g(t)."""
    if shortsum.m != 0:
        raise ValidationError("cost specialization expects a z-only input")
    if len(c) != shortsum.n:
        raise ValidationError(
            f"cost has {len(c)} entries, short sum has {shortsum.n}")
    c = [int(v) for v in c]
    derived = []
    for term in shortsum.terms:
        num = [(coeff, sum(ci * ui for ci, ui in zip(c, u)), u)
               for coeff, _, u in term.num]
        den = [(sum(ci * bi for ci, bi in zip(c, beta)), beta)
               for _, beta in term.den]
        derived.append(ShortSumTerm(num, den))
    spec = ShortSum(1, shortsum.n, derived)
    gamma = pick_gamma(spec, ctx, seed)
    return CostSpecializedSum(solve_basic(spec, gamma, ctx), ctx)


def normalize_term(term: SimpleRationalTerm, ctx) -> SimpleRationalTerm:
    """Normal form with every denominator exponent positive."""
    return term.normalize(ctx)


def min_order(s: CostSpecializedSum) -> int:
    """Lower bound m = min over terms of the t-order a_i."""
    if not s.terms:
        raise EmptySum("no terms: the feasible set is empty")
    return min(t.a for t in s.terms)


def series_probe(s: CostSpecializedSum, m: int, k0: int = DEFAULT_K0):
    """Least n < k0 with [t^n] t^{-m} g(t) nonzero mod p, else None."""
    if k0 < 1:
        raise ValidationError("probe window must be positive")
    if k0 > MAX_SERIES_LEN:
        raise ResourceError(f"probe window {k0} exceeds {MAX_SERIES_LEN}")
    p = s.ctx.p
    G = np.zeros(k0, dtype=np.int64)
    for t in s.terms:
        off = t.a - m
        ell = k0 - off
        if ell <= 0:
            continue
        rec = s.reciprocal(t.b, ell)
        G[off:] = (G[off:] + t.eps * rec) % p
    nz = np.nonzero(G)[0]
    return None if len(nz) == 0 else int(nz[0])


def prefix_count(s: CostSpecializedSum, m: int, k: int) -> int:
    """Number of exponents <= m + k, mod p: per term the prefix sum of
    the denominator reciprocal up to K = k - (a - m)."""
    ctx = s.ctx
    total = 0
    for t in s.terms:
        K = k - (t.a - m)
        if K < 0:
            continue
        if K < PREFIX_DP_CUTOFF:
            rec = s.reciprocal(t.b + (1,), K + 1)
            val = int(rec[K])
        else:
            val = coeff_reciprocal_prefix(ctx, t.b, K)
        total = (total + t.eps * val) % ctx.p
    return total


def _is_zero(replicas, m, k, exact):
    """Two-prime zero test of the prefix count at k; exact mode insists
    the CRT lift vanish, which is the same test stated differently."""
    vals = [prefix_count(s, m, k) for s in replicas]
    if exact:
        from .modfield import crt_reconstruct
        lifted = crt_reconstruct(
            [(v, s.ctx.p) for v, s in zip(vals, replicas)])
        return lifted == 0
    return all(v == 0 for v in vals)


def bsct_solve(problem, ctxs, cost=None, mode="min", k0=DEFAULT_K0,
               seed=0, exact=False, ub=None) -> int:
    """Optimum of c.x over the encoded feasible set.

    problem: a z-only ShortSum (cost required), an ILPInstance (desk
    scale, routed through exhaustive enumeration), or a pre-built list
    of per-prime CostSpecializedSum replicas.  ctxs supplies two field
    contexts with distinct primes.  ub bounds the doubling phase; None
    uses the series resource cap.
    """
    if mode not in ("min", "max"):
        raise ValidationError("mode must be 'min' or 'max'")
    flip = mode == "max"
    if isinstance(problem, ILPInstance):
        shortsum = points_to_shortsum(
            enumerate_feasible(problem), len(problem.a))
        cost = problem.c
    elif isinstance(problem, ShortSum):
        if cost is None:
            raise ValidationError("a short-sum problem needs a cost vector")
        shortsum = problem
    else:
        replicas = list(problem)
        if flip:
            raise ValidationError(
                "pre-specialized replicas already fix the sign; use min")
        return _bsct_min(replicas, k0, exact, ub)
    use_cost = [-v for v in cost] if flip else list(cost)
    replicas = [specialize_cost(shortsum, use_cost, ctx, seed + i)
                for i, ctx in enumerate(ctxs)]
    val = _bsct_min(replicas, k0, exact, ub)
    return -val if flip else val


def _bsct_min(replicas, k0, exact, ub):
    # a term can drop from one replica when its coefficient is a
    # multiple of that prime, so the order bound is the overall min
    orders_ = [min_order(s) for s in replicas if s.terms]
    if not orders_:
        raise EmptySum("no terms: the feasible set is empty")
    m = min(orders_)
    probes = [series_probe(s, m, k0) for s in replicas]
    found = [v for v in probes if v is not None]
    if found:
        return m + min(found)
    limit = MAX_SERIES_LEN - 1 if ub is None else min(ub, MAX_SERIES_LEN - 1)
    lo = k0 - 1  # largest k with a known zero prefix
    k = k0
    while True:
        k *= 2
        if k > limit:
            raise Unbounded(
                f"no nonzero coefficient up to t^{limit}; "
                f"the problem looks unbounded or needs a larger bound")
        if not _is_zero(replicas, m, k, exact):
            break
        lo = k
    hi = k
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if _is_zero(replicas, m, mid, exact):
            lo = mid
        else:
            hi = mid
    return m + hi


def enumerate_feasible(instance: ILPInstance):
    """All nonnegative integer solutions, by bounded recursion.  The
    traversal is capped at 10^7 nodes."""
    a, b = instance.a, instance.b
    eq = instance.relation == "eq"
    out = []
    nodes = 0
    x = [0] * len(a)

    def rec(i, rem):
        nonlocal nodes
        nodes += 1
        if nodes > BRUTE_NODE_CAP:
            raise SearchSpaceTooLarge(
                f"enumeration exceeded {BRUTE_NODE_CAP} nodes")
        if i == len(a) - 1:
            q, r = divmod(rem, a[i])
            if eq:
                if r == 0:
                    x[i] = q
                    out.append(tuple(x))
            else:
                nodes += q + 1
                if nodes > BRUTE_NODE_CAP:
                    raise SearchSpaceTooLarge(
                        f"enumeration exceeded {BRUTE_NODE_CAP} nodes")
                for v in range(q + 1):
                    x[i] = v
                    out.append(tuple(x))
            x[i] = 0
            return
        for v in range(rem // a[i] + 1):
            x[i] = v
            rec(i + 1, rem - v * a[i])
        x[i] = 0

    if len(a) == 0:
        return [()] if (not eq or b == 0) else []
    rec(0, b)
    return out


def points_to_shortsum(points, k) -> ShortSum:
    """Finite point set as a denominator-free short sum in k variables."""
    if not points:
        return ShortSum(0, k, [])
    term = ShortSumTerm([(1, 0, tuple(pt)) for pt in points], [])
    return ShortSum(0, k, [term])


def brute_knapsack(instance: ILPInstance, mode="max"):
    """(optimum, an optimizing vector), or None when infeasible.  Dynamic
    program over right-hand sides; the table is capped at 10^7 cells."""
    if mode not in ("min", "max"):
        raise ValidationError("mode must be 'min' or 'max'")
    a, b, c = instance.a, instance.b, instance.c
    if (b + 1) * max(len(a), 1) > BRUTE_NODE_CAP:
        raise SearchSpaceTooLarge(
            f"DP table would exceed {BRUTE_NODE_CAP} cells")
    better = (lambda u, v: u > v) if mode == "max" else (lambda u, v: u < v)
    best = [None] * (b + 1)
    choice = [None] * (b + 1)
    best[0] = 0
    for idx, w in enumerate(a):
        for r in range(w, b + 1):
            if best[r - w] is None:
                continue
            cand = best[r - w] + c[idx]
            if best[r] is None or better(cand, best[r]):
                best[r] = cand
                choice[r] = idx
    targets = range(b + 1) if instance.relation == "le" else (b,)
    opt, opt_r = None, None
    for r in targets:
        if best[r] is not None and (opt is None or better(best[r], opt)):
            opt, opt_r = best[r], r
    if opt is None:
        return None
    vec = [0] * len(a)
    r = opt_r
    while r > 0:
        idx = choice[r]
        vec[idx] += 1
        r -= a[idx]
    return opt, tuple(vec)
