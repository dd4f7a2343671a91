"""Univariate truncated series: G1 ops, Newton fast paths vs schoolbook."""

import random

import numpy as np
import pytest

from toddct.errors import (CharTooSmall, ConstantTermNotOne,
                           ConstantTermNotZero, NotInvertibleConstantTerm,
                           ValidationError)
from toddct.modfield import make_field
from toddct.series import (TruncSeries, add, coeff_reciprocal_prefix, deriv,
                           div, div_schoolbook, exp, exp_schoolbook,
                           from_text, integrate, inv, inv_schoolbook, log,
                           log_schoolbook, mul, mul_schoolbook, negate, scale,
                           to_text)


def rand_series(ctx, d, rng, first=None):
    arr = np.array([rng.randrange(ctx.p) for _ in range(d)], dtype=np.int64)
    if first is not None:
        arr[0] = first
    return TruncSeries(ctx, arr)


class TestG1:
    def test_deriv_power_rule(self, ctx):
        # the derivative of a mod-s^3 series is known mod s^2
        f = TruncSeries(ctx, [1, 1, 1])
        assert deriv(f).to_list() == [1, 2]

    def test_integrate_inverts_deriv(self, ctx):
        # deriv drops one known coefficient, integrate restores it
        rng = random.Random(1)
        for d in (2, 17, 64):
            f = rand_series(ctx, d, rng)
            assert integrate(deriv(f), c0=int(f.coeffs[0])) == f

    def test_integrate_deriv_constant(self, ctx):
        f = TruncSeries(ctx, [9])
        out = integrate(deriv(f), c0=9)
        assert out.to_list()[: 1] == [9]

    def test_add_negate(self, ctx):
        rng = random.Random(2)
        f = rand_series(ctx, 20, rng)
        assert add(f, negate(f)) == TruncSeries.zeros(ctx, 20)

    def test_scale(self, ctx):
        f = TruncSeries(ctx, [1, 2, 3])
        assert scale(f, -1) == negate(f)

    def test_integrate_char_too_small(self):
        small = make_field(7)
        f = TruncSeries(small, [1, 2, 3, 4, 5, 6, 0, 1])
        with pytest.raises(CharTooSmall):
            integrate(f)

    def test_mismatched_operands(self, ctx, ctx2):
        f = TruncSeries(ctx, [1, 2])
        with pytest.raises(ValidationError):
            add(f, TruncSeries(ctx, [1, 2, 3]))
        with pytest.raises(ValidationError):
            add(f, TruncSeries(ctx2, [1, 2]))


class TestMul:
    def test_binomial_square(self, ctx):
        f = TruncSeries(ctx, [1, 1, 0])
        assert mul(f, f).to_list() == [1, 2, 1]

    def test_mul_inv_is_one(self, ctx):
        rng = random.Random(3)
        f = rand_series(ctx, 128, rng, first=1)
        assert mul(f, inv(f)) == TruncSeries.one(ctx, 128)

    def test_matches_schoolbook(self, ctx):
        rng = random.Random(4)
        for _ in range(10):
            f = rand_series(ctx, 256, rng)
            g = rand_series(ctx, 256, rng)
            assert mul(f, g) == mul_schoolbook(f, g)


class TestInv:
    def test_geometric_series(self, ctx):
        f = TruncSeries(ctx, [1, ctx.p - 1, 0, 0])
        assert inv(f).to_list() == [1, 1, 1, 1]

    def test_involution(self, ctx):
        rng = random.Random(5)
        f = rand_series(ctx, 100, rng, first=1)
        assert inv(inv(f)) == f

    def test_newton_equals_schoolbook(self, ctx):
        rng = random.Random(6)
        for _ in range(5):
            f = rand_series(ctx, 1024, rng, first=rng.randrange(1, ctx.p))
            assert inv(f) == inv_schoolbook(f)

    def test_zero_constant_rejected(self, ctx):
        with pytest.raises(NotInvertibleConstantTerm):
            inv(TruncSeries(ctx, [0, 1, 1]))

    def test_div(self, ctx):
        rng = random.Random(7)
        h = rand_series(ctx, 64, rng)
        f = rand_series(ctx, 64, rng, first=2)
        q = div(h, f)
        assert mul(q, f) == h
        assert q == div_schoolbook(h, f)


class TestLog:
    def test_geometric_log(self, ctx):
        f = inv(TruncSeries(ctx, [1, ctx.p - 1, 0, 0]))
        want = [0, 1, ctx.inv(2), ctx.inv(3)]
        assert log(f).to_list() == want

    def test_log_of_one(self, ctx):
        assert log(TruncSeries.one(ctx, 8)) == TruncSeries.zeros(ctx, 8)

    def test_log_is_additive(self, ctx):
        rng = random.Random(8)
        f = rand_series(ctx, 80, rng, first=1)
        g = rand_series(ctx, 80, rng, first=1)
        assert log(mul(f, g)) == add(log(f), log(g))

    def test_constant_term_checked(self, ctx):
        with pytest.raises(ConstantTermNotOne):
            log(TruncSeries(ctx, [2, 1]))

    def test_char_too_small(self):
        small = make_field(5)
        with pytest.raises(CharTooSmall):
            log(TruncSeries(small, [1, 1, 1, 1, 1, 1]))


class TestExp:
    def test_exp_s(self, ctx):
        got = exp(TruncSeries(ctx, [0, 1, 0]))
        assert got.to_list() == [1, 1, (ctx.p + 1) // 2]

    def test_exp_log_roundtrip(self, ctx):
        rng = random.Random(9)
        f = rand_series(ctx, 200, rng, first=1)
        assert exp(log(f)) == f
        h = rand_series(ctx, 200, rng, first=0)
        assert log(exp(h)) == h

    def test_exp_is_multiplicative(self, ctx):
        rng = random.Random(10)
        h1 = rand_series(ctx, 96, rng, first=0)
        h2 = rand_series(ctx, 96, rng, first=0)
        assert exp(add(h1, h2)) == mul(exp(h1), exp(h2))

    def test_constant_term_checked(self, ctx):
        with pytest.raises(ConstantTermNotZero):
            exp(TruncSeries(ctx, [1, 1]))

    def test_fast_equals_schoolbook_2048(self, ctx):
        rng = random.Random(11)
        h = rand_series(ctx, 2048, rng, first=0)
        assert exp(h) == exp_schoolbook(h)

    def test_non_power_of_two_lengths(self, ctx):
        rng = random.Random(12)
        for d in (1, 2, 3, 5, 100, 257):
            f = rand_series(ctx, d, rng, first=1)
            assert inv(f) == inv_schoolbook(f)
            assert log(f) == log_schoolbook(f)
            h = rand_series(ctx, d, rng, first=0)
            assert exp(h) == exp_schoolbook(h)


class TestReciprocalPrefix:
    def test_all_ones(self, ctx):
        assert coeff_reciprocal_prefix(ctx, (1,), 5) == 6

    def test_two_three(self, ctx):
        # solutions of 2x + 3y <= 6: (0,0..2),(1,0,1),(2,0,1),(3,0) -> 7
        assert coeff_reciprocal_prefix(ctx, (2, 3), 6) == 7

    def test_empty_product(self, ctx):
        assert coeff_reciprocal_prefix(ctx, (), 0) == 1

    def test_matches_dp(self, ctx):
        rng = random.Random(14)
        for _ in range(20):
            bs = tuple(rng.randrange(1, 9) for _ in range(rng.randrange(1, 4)))
            K = rng.randrange(0, 60)
            counts = [0] * (K + 1)
            counts[0] = 1
            for b in bs:
                for c in range(b, K + 1):
                    counts[c] += counts[c - b]
            want = sum(counts) % ctx.p
            assert coeff_reciprocal_prefix(ctx, bs, K) == want


class TestText:
    def test_roundtrip(self, ctx):
        rng = random.Random(15)
        f = rand_series(ctx, 9, rng)
        line = to_text(f)
        assert line.split()[:2] == ["9", str(ctx.p)]
        assert from_text(line) == f

    def test_bad_line(self):
        with pytest.raises(ValidationError):
            from_text("3")
        with pytest.raises(ValidationError):
            from_text("2 997 one two")
