"""Constant terms of generalized Todd type, scalar and symbolic."""

import random
from fractions import Fraction
from math import comb

import pytest

from oracles import brute_ct
from toddct.ctgtodd import (CTResult, GToddConstantTermProblem,
                            SimpleRationalTerm, build_A, build_E, ct_gtodd,
                            orders)
from toddct.errors import UnsuitablePrime, ZeroExponentFactor
from toddct.modfield import crt_rational, make_field
from toddct.toddgen import MultiSetZ, TDescriptor

PRIMES = [469762049, 167772161, 754974721]
CTX = make_field(PRIMES[0])


def ct_rational(problem, primes=PRIMES):
    vals = []
    for p in primes:
        res = ct_gtodd(problem, p)
        assert res.is_scalar
        vals.append((res.scalar, p))
    return crt_rational(vals)


class TestOrders:
    def test_double_pole(self):
        assert orders(GToddConstantTermProblem([(1, 0)], (1, 1))) == (0, 2, 2)

    def test_numerator_kills_one_pole(self):
        prob = GToddConstantTermProblem([(-1, 0), (1, 1)], (1,))
        assert orders(prob) == (1, 1, 0)

    def test_trivial_when_numerator_vanishes_deep(self):
        prob = GToddConstantTermProblem([(-1, 0), (1, 1)], ())
        d0, d1, d = orders(prob)
        assert (d0, d1, d) == (None, 0, -1)

    def test_exact_fractions(self):
        # 1/10 + 2/10 - 3/10 must cancel exactly, not in floats
        prob = GToddConstantTermProblem(
            [(Fraction(1, 10), 0), (Fraction(2, 10), 1),
             (Fraction(-3, 10), 2)], (1, 1))
        assert orders(prob)[0] == 1


class TestBuildE:
    def test_kappa_squared(self):
        prob = GToddConstantTermProblem([(1, 2)], (1, 1))
        E = build_E(CTX, prob, 0, 2)
        # e^{2s} = 1 + 2s + 2s^2 + ...
        assert list(E) == [1, 2, 2]

    def test_kappa_minus_one(self):
        prob = GToddConstantTermProblem([(-1, 0), (1, 1)], (1,))
        E = build_E(CTX, prob, 1, 1)
        assert list(E) == [1, CTX.inv(2)]

    def test_shifted(self):
        # e^{-s} * e^{2s} = e^s
        prob = GToddConstantTermProblem([(1, 2)], (1, 1))
        E = build_E(CTX, prob, 0, 3, a_shift=Fraction(1))
        assert list(E) == [1, 1, CTX.inv(2), CTX.inv(6)]


class TestBuildA:
    def test_unit_pair(self):
        scalar, sym = build_A(CTX, GToddConstantTermProblem([(1, 0)], (1, 1)))
        assert scalar == 1 and sym == []

    def test_sign_of_negative_entry(self):
        scalar, _ = build_A(CTX, GToddConstantTermProblem([(1, 0)], (1, -1)))
        assert scalar == CTX.p - 1

    def test_vanishing_entry_rejected(self):
        ctx = make_field(5)
        with pytest.raises(UnsuitablePrime):
            build_A(ctx, GToddConstantTermProblem([(1, 0)], (5,)))
        with pytest.raises(UnsuitablePrime):
            build_A(ctx, GToddConstantTermProblem([(1, 0)], (1,), (10,)))

    def test_numeric_t_folded_in(self):
        pair = (MultiSetZ([1]), MultiSetZ(), TDescriptor("numeric", 3))
        prob = GToddConstantTermProblem([(1, 0)], (1,), (), [pair])
        scalar, sym = build_A(CTX, prob)
        # one pole from B_0 (sign -1) and (1-3)^{-1} from the pair
        assert sym == [None]
        assert scalar == (-CTX.inv(-2)) % CTX.p

    def test_numeric_t_unit_rejected_for_pole(self):
        ctx = make_field(7)
        pair = (MultiSetZ([1]), MultiSetZ(), TDescriptor("numeric", 8))
        prob = GToddConstantTermProblem([(1, 0)], (1,), (), [pair])
        with pytest.raises(UnsuitablePrime):
            build_A(ctx, prob)

    def test_symbolic_exponent_reported(self):
        pair = (MultiSetZ([1, 2]), MultiSetZ([3]), TDescriptor("monomial", 2))
        prob = GToddConstantTermProblem([(1, 0)], (1,), (), [pair])
        _, sym = build_A(CTX, prob)
        assert sym == [-1]


class TestScalarCT:
    def test_double_pole_value(self):
        prob = GToddConstantTermProblem(L=[(1, 0)], B0=(1, 1))
        assert ct_rational(prob) == Fraction(5, 12)

    def test_mixed_sign_pair(self):
        for n in (0, 1, 2, 5, 11):
            prob = GToddConstantTermProblem(L=[(2, n)], B0=(-1, 1))
            assert ct_rational(prob) == Fraction(1, 6) - n * n

    def test_negative_pair(self):
        for n in (0, 1, 3, 7):
            prob = GToddConstantTermProblem(L=[(1, 2 * n)], B0=(-1, -1))
            assert ct_rational(prob) == Fraction(5, 12) + 2 * n + 2 * n * n

    def test_three_pieces_sum_to_square_count(self):
        for n in (0, 1, 2, 3, 10):
            s = (ct_rational(GToddConstantTermProblem([(1, 0)], (1, 1)))
                 + ct_rational(GToddConstantTermProblem([(2, n)], (-1, 1)))
                 + ct_rational(GToddConstantTermProblem([(1, 2 * n)],
                                                        (-1, -1))))
            assert s == (n + 1) ** 2

    def test_reduced_pole(self):
        prob = GToddConstantTermProblem(L=[(-1, 0), (1, 1)], B0=(1,))
        assert ct_rational(prob) == brute_ct([(-1, 0), (1, 1)], (1,))

    def test_trivial_zero(self):
        prob = GToddConstantTermProblem(L=[(-1, 0), (1, 1)], B0=())
        res = ct_gtodd(prob, PRIMES[0])
        assert res.is_scalar and res.scalar == 0

    def test_random_r0_against_expansion(self):
        rng = random.Random(7)
        for trial in range(40):
            nl = rng.randint(1, 3)
            L = [(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                  Fraction(rng.randint(-5, 5), rng.randint(1, 2)))
                 for _ in range(nl)]
            if all(l == 0 for l, _ in L):
                L[0] = (Fraction(1), L[0][1])
            B0 = tuple(rng.choice([-3, -2, -1, 1, 2, 3])
                       for _ in range(rng.randint(1, 5)))
            B0bar = tuple(rng.choice([-2, -1, 1, 2])
                          for _ in range(rng.randint(0, 3)))
            prob = GToddConstantTermProblem(L, B0, B0bar)
            assert ct_rational(prob) == brute_ct(L, B0, B0bar)

    def test_random_numeric_t(self):
        rng = random.Random(8)
        for trial in range(30):
            L = [(rng.randint(1, 3), rng.randint(-2, 2))]
            B0 = tuple(rng.choice([-2, -1, 1, 2])
                       for _ in range(rng.randint(1, 4)))
            r = rng.randint(1, 2)
            pairs, oracle_pairs = [], []
            for _ in range(r):
                t = Fraction(rng.choice([-3, -2, 2, 3, 5]),
                             rng.choice([1, 7]))
                B = tuple(rng.randint(-2, 2)
                          for _ in range(rng.randint(0, 2)))
                Bbar = tuple(rng.randint(-2, 2)
                             for _ in range(rng.randint(0, 2)))
                pairs.append((B, Bbar, TDescriptor("numeric", t)))
                oracle_pairs.append((B, Bbar, t))
            prob = GToddConstantTermProblem(L, B0, (), pairs)
            want = brute_ct(L, B0, (), oracle_pairs)
            assert ct_rational(prob) == want


def eval_terms(terms, t0, ctx):
    tot = 0
    for term in terms:
        v = term.eps * pow(t0, term.a, ctx.p) % ctx.p
        for b in term.b:
            v = v * ctx.inv((1 - pow(t0, b, ctx.p)) % ctx.p) % ctx.p
        tot = (tot + v) % ctx.p
    return tot


class TestSymbolicCT:
    def test_matches_numeric_evaluation(self):
        rng = random.Random(9)
        p = PRIMES[0]
        ctx = make_field(p)
        checked = 0
        for trial in range(25):
            L = [(rng.randint(1, 2), rng.randint(0, 2))]
            B0 = tuple(rng.choice([-2, -1, 1, 2])
                       for _ in range(rng.randint(1, 4)))
            r = rng.randint(1, 2)
            sym_pairs, t0s = [], []
            for _ in range(r):
                m = rng.choice([-2, -1, 1, 2, 3])
                B = tuple(rng.randint(-2, 2)
                          for _ in range(rng.randint(0, 2)))
                Bbar = tuple(rng.randint(-2, 2)
                             for _ in range(rng.randint(0, 2)))
                sym_pairs.append((B, Bbar, TDescriptor("monomial", m)))
                t0s.append(rng.randint(2, 50))
            shift = rng.randint(-3, 3)
            prob = GToddConstantTermProblem(L, B0, (), sym_pairs,
                                            t_shift=shift)
            res = ct_gtodd(prob, p)
            assert not res.is_scalar
            # all pair variables collapse to the same t, so a single
            # evaluation point suffices
            t0 = t0s[0]
            num_pairs = []
            ok = True
            for (B, Bbar, td) in sym_pairs:
                tv = Fraction(t0) ** td.value
                if tv == 1:
                    ok = False
                    break
                num_pairs.append((B, Bbar, TDescriptor("numeric", tv)))
            if not ok:
                continue
            want = ct_gtodd(GToddConstantTermProblem(L, B0, (), num_pairs),
                            p).scalar
            want = want * pow(t0, shift, p) % p
            got = eval_terms([t.normalize(ctx) for t in res.terms], t0, ctx)
            assert got == want
            checked += 1
        assert checked >= 15

    def test_term_count_bound(self):
        # with every B̄_i empty the term count stays within the number of
        # y-monomials of degree <= d
        rng = random.Random(10)
        p = PRIMES[0]
        for trial in range(10):
            B0 = tuple(rng.choice([-1, 1]) for _ in range(rng.randint(1, 4)))
            r = rng.randint(1, 2)
            pairs = [((), (), TDescriptor("monomial", rng.choice([1, 2])))
                     for _ in range(r)]
            prob = GToddConstantTermProblem([(1, 0)], B0, (), pairs)
            _, _, d = orders(prob)
            res = ct_gtodd(prob, p)
            assert len(res.terms) <= comb(max(d, 0) + r, r)

    def test_trivial_symbolic_is_empty(self):
        pair = ((), (), TDescriptor("monomial", 1))
        prob = GToddConstantTermProblem([(-1, 0), (1, 1)], (), (), [pair])
        res = ct_gtodd(prob, PRIMES[0])
        assert not res.is_scalar and res.terms == []


class TestErrors:
    def test_unsuitable_prime_divides_b(self):
        with pytest.raises(UnsuitablePrime):
            ct_gtodd(GToddConstantTermProblem([(1, 0)], (7,)), 7)

    def test_unsuitable_prime_too_small(self):
        with pytest.raises(UnsuitablePrime):
            ct_gtodd(GToddConstantTermProblem([(1, 0)], (1, 1, 1, 1, 1)), 5)

    def test_zero_exponent_factor(self):
        with pytest.raises(ZeroExponentFactor):
            SimpleRationalTerm(1, 0, (3, 0))

    def test_normalize(self):
        p = PRIMES[0]
        ctx = make_field(p)
        t = SimpleRationalTerm(3, 1, (-2,))
        assert t.normalize(ctx) == SimpleRationalTerm(p - 3, 3, (2,))
        u = SimpleRationalTerm(4, 2, (1, 3))
        assert u.normalize(ctx) == u
