"""Generalized Todd polynomial assembly and the even r = 0 fast path."""

import random
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from oracles import (cny, q_mul, rows_from_regular, rows_inv, todd_coeffs)
from toddct.errors import UnsuitablePrime, ValidationError
from toddct.modfield import crt_rational, default_primes, make_field
from toddct.toddgen import (GToddSpec, MultiSetZ, TDescriptor, build_h,
                            build_hy, gtodd, power_sums, sum_similar,
                            todd_r0, todd_r0_shift)

CTXS = [make_field(p) for p in default_primes(3)]
CTX = CTXS[0]


def crt_series(vals_per_ctx):
    cols = list(zip(*vals_per_ctx))
    return [crt_rational([(int(v), c.p) for v, c in zip(col, CTXS)])
            for col in cols]


class TestMultiSet:
    def test_sorted_and_len(self):
        B = MultiSetZ([3, -1, 3, Fraction(1, 2)])
        assert list(B) == sorted([3, -1, 3, Fraction(1, 2)])
        assert len(B) == 4

    def test_p1_exact(self):
        assert MultiSetZ([1, 2, 3]).p1() == 6
        assert MultiSetZ([Fraction(1, 2), Fraction(1, 3)]).p1() == Fraction(5, 6)

    def test_squared(self):
        assert MultiSetZ([2, -3]).squared() == MultiSetZ([4, 9])

    def test_check_units(self):
        ctx = make_field(7)
        MultiSetZ([1, 2]).check_units(ctx, "B")
        with pytest.raises(UnsuitablePrime):
            MultiSetZ([14]).check_units(ctx, "B")


class TestPowerSums:
    def test_small_example(self):
        ps = power_sums(CTX, MultiSetZ([1, 2, 3]), 4)
        assert ps[0] == 6 and ps[1] == 14 and ps[2] == 36

    def test_singleton(self):
        ps = power_sums(CTX, MultiSetZ([5]), 8)
        for n in range(1, 8):
            assert ps[n - 1] == pow(5, n, CTX.p)

    def test_matches_direct_summation(self):
        rng = random.Random(11)
        elems = [rng.randrange(-40, 40) for _ in range(5000)]
        ps = power_sums(CTX, MultiSetZ(elems), 16)
        for n in range(1, 16):
            direct = sum(pow(e, n, CTX.p) for e in elems) % CTX.p
            assert ps[n - 1] == direct

    def test_scaling_law(self):
        ps1 = power_sums(CTX, MultiSetZ([3, 7, -2]), 8)
        ps3 = power_sums(CTX, MultiSetZ([9, 21, -6]), 8)
        for n in range(1, 8):
            assert ps3[n - 1] == ps1[n - 1] * pow(3, n, CTX.p) % CTX.p


class TestBuildH:
    def test_rational_coefficients(self):
        hs = [build_h(c, 6).coeffs for c in CTXS]
        rat = crt_series(hs)
        assert rat[:5] == [0, Fraction(-1, 2), Fraction(-1, 24), 0,
                           Fraction(1, 2880)]

    def test_hy_stirling(self):
        hy = build_hy(CTX, 8)
        assert hy.row_dict(0) == {}
        for n in range(1, 8):
            want = {(k,): CTX.reduce(v) for k, v in cny(n).items()}
            assert hy.row_dict(n) == want


class TestSumSimilar:
    def test_single_unit_is_identity(self):
        h = build_h(CTX, 20)
        out = sum_similar(h, MultiSetZ([1]))
        assert np.array_equal(out.coeffs, h.coeffs)

    def test_plus_minus_pair_kills_odd(self):
        h = build_h(CTX, 24)
        out = sum_similar(h, MultiSetZ([1, -1]))
        assert not out.coeffs[1::2].any()

    def test_matches_direct_substitution(self):
        rng = random.Random(13)
        d = 32
        h = build_h(CTX, d)
        for _ in range(5):
            elems = [rng.randrange(-30, 30) for _ in range(50)]
            got = sum_similar(h, MultiSetZ(elems))
            direct = np.zeros(d, dtype=np.int64)
            for b in elems:
                bb = b % CTX.p
                pw = 1
                for n in range(d):
                    direct[n] = (direct[n] + h.coeffs[n] * pw) % CTX.p
                    pw = pw * bb % CTX.p
            assert np.array_equal(got.coeffs, direct)


class TestGTodd:
    def test_classic_todd(self):
        vals = []
        for c in CTXS:
            spec = GToddSpec(0, MultiSetZ([1]), MultiSetZ(), [], 5)
            g = gtodd(c, spec)
            vals.append([g.coeff(n, ()) for n in range(5)])
        assert crt_series(vals) == todd_coeffs(5)

    def test_empty_spec_is_one(self):
        g = gtodd(CTX, GToddSpec(0, MultiSetZ(), MultiSetZ(), [], 6))
        assert [g.coeff(n, ()) for n in range(6)] == [1, 0, 0, 0, 0, 0]

    def test_single_group_geometric(self):
        # B_1 = {1}: the result is 1/(1 - y(e^s - 1))
        d = 8
        spec = GToddSpec(0, MultiSetZ(), MultiSetZ(),
                         [(MultiSetZ([1]), MultiSetZ(),
                           TDescriptor("monomial", 1))], d)
        g = gtodd(CTX, spec)
        invf = [1]
        f = 1
        for k in range(1, d):
            f = f * k % CTX.p
            invf.append(pow(f, CTX.p - 2, CTX.p))
        naive = [{(0,): 1}] + [{(1,): (-invf[n]) % CTX.p}
                               for n in range(1, d)]
        assert rows_from_regular(g) == rows_inv(naive, CTX.p)

    def test_r_property(self):
        spec = GToddSpec(0, MultiSetZ([1]), MultiSetZ(), [], 4)
        assert spec.r == 0
        pairs = [(MultiSetZ([1]), MultiSetZ(), TDescriptor("monomial", 1)),
                 (MultiSetZ([2]), MultiSetZ(), TDescriptor("numeric", 2))]
        assert GToddSpec(0, MultiSetZ(), MultiSetZ(), pairs, 4).r == 2


class TestToddR0:
    def test_unit_is_shifted_todd(self):
        # B_0 = {1} with the automatic shift 1/2 gives e^{s/2} s/(e^s - 1)
        d = 10
        vals = [todd_r0(c, "auto", MultiSetZ([1]), MultiSetZ(), d).coeffs
                for c in CTXS]
        rat = crt_series(vals)
        exact_e = [Fraction(1, 2 ** n * factorial(n)) for n in range(d)]
        assert rat == q_mul(exact_e, todd_coeffs(d), d)
        assert all(v == 0 for v in rat[1::2])

    def test_matching_multisets_cancel(self):
        out = todd_r0(CTX, "auto", MultiSetZ([2, 5]), MultiSetZ([5, 2]), 12)
        assert out.coeffs[0] == 1 and not out.coeffs[1:].any()

    def test_shift_value(self):
        a = todd_r0_shift(MultiSetZ([1, 2, 3]), MultiSetZ([4]))
        assert a == Fraction(6 - 4, 2) == 1
        assert todd_r0_shift(MultiSetZ([2]), MultiSetZ([1])) == Fraction(1, 2)

    def test_only_auto_mode(self):
        with pytest.raises(ValidationError):
            todd_r0(CTX, "manual", MultiSetZ([1]), MultiSetZ(), 4)

    def test_agrees_with_general_assembly(self):
        rng = random.Random(19)
        d = 64
        for trial in range(20):
            B0 = MultiSetZ([rng.randrange(1, 60) * rng.choice([1, -1])
                            for _ in range(rng.randrange(1, 6))])
            B0b = MultiSetZ([rng.randrange(1, 60) * rng.choice([1, -1])
                             for _ in range(rng.randrange(0, 4))])
            a = todd_r0_shift(B0, B0b)
            for c in CTXS[:2]:
                fast = todd_r0(c, "auto", B0, B0b, d)
                gen = gtodd(c, GToddSpec(a, B0, B0b, [], d))
                gen_col = np.array([gen.coeff(n, ()) for n in range(d)],
                                   dtype=np.int64)
                assert np.array_equal(fast.coeffs, gen_col)

    def test_odd_coefficients_vanish(self):
        rng = random.Random(29)
        for _ in range(10):
            B0 = MultiSetZ([rng.randrange(1, 30) * rng.choice([1, -1])
                            for _ in range(rng.randrange(1, 5))])
            out = todd_r0(CTX, "auto", B0, MultiSetZ(), 48)
            assert not out.coeffs[1::2].any()
