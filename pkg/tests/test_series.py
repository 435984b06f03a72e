"""Series-core tests: window soundness, kernel identities, s-basis expansion."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dtflop.series import (
    GaussianRational,
    I_UNIT,
    LaurentSeries,
    SBasisForm,
    SeriesError,
    binom_series,
    exp_coeff_series,
    kernel,
    kernel_power,
)

from oracles import long_division, s_kernel_dict

F = Fraction


def series(d, lo=None, hi=None):
    if lo is None:
        lo = min((e for e, c in d.items() if c), default=0)
    return LaurentSeries({e: F(c) for e, c in d.items()}, lo, hi)


class TestAdd:
    def test_additive_inverse(self):
        q = LaurentSeries.monomial(1)
        assert (q + q.scale(-1)).is_zero()

    def test_disjoint_support(self):
        a = series({0: 1, 1: 1})
        b = series({2: 1})
        assert a + b == series({0: 1, 1: 1, 2: 1})

    def test_window_forced_to_min(self):
        a = series({0: 1}, 0, 5)
        b = series({0: 1}, 0, 3)
        assert (a + b).hi == 3
        assert (a + b).lo == 0

    def test_lo_is_min(self):
        a = series({-2: 1}, -2, 5)
        b = series({0: 1}, 0, 8)
        c = a + b
        assert c.lo == -2 and c.hi == 5


class TestMul:
    def test_difference_of_squares(self):
        a = series({0: 1, 1: -1})
        b = series({0: 1, 1: 1})
        assert a * b == series({0: 1, 2: -1})

    def test_laurent_cancellation(self):
        assert LaurentSeries.monomial(-1) * LaurentSeries.monomial(1) == LaurentSeries.one()

    def test_kernel_times_inverse_kernel(self):
        # s_1 * (sum_k k(-q)^k truncated at q^10) = 1 + O(q^10) tail
        s1 = kernel(1)
        inv = kernel_power(0, 1, hi=10)
        prod = s1 * inv
        assert prod.coeff(0) == 1
        for e in range(-1, 9):
            if e != 0:
                assert prod.coeff(e) == 0

    def test_window_rule_uses_order(self):
        # a known on [0,10] with order 2 lets the partner's window stretch
        a = series({2: 1}, 0, 10)
        b = series({0: 1, 1: 5}, 0, 4)
        assert (a * b).hi == min(10 + 0, 4 + 2)

    def test_zero_times_anything_is_exact_zero(self):
        z = LaurentSeries.exact({})
        a = series({0: 1, 3: 2}, 0, 7)
        assert (z * a).is_zero()
        assert (z * a).hi is None


class TestInverse:
    def test_geometric(self):
        inv = series({0: 1, 1: -1}, 0, 8).inverse()
        assert inv == series({e: 1 for e in range(9)}, 0, 8)

    def test_monomial(self):
        assert LaurentSeries.monomial(1).inverse(hi=5).coeff(-1) == 1

    def test_kernel_inverse_by_long_division(self):
        # invert(s_1) through q^12 must match the independent long division
        got = kernel(1).inverse(hi=12)
        want = long_division({0: F(1)}, s_kernel_dict(1, 12), -1, 12)
        for e in range(-1, 13):
            assert got.coeff(e) == want.get(e, 0)
        # ... and multiplying back gives 1
        back = kernel(1) * got
        assert back.coeff(0) == 1
        assert all(back.coeff(e) == 0 for e in range(1, 10))

    def test_zero_inverse_rejected(self):
        with pytest.raises(SeriesError):
            LaurentSeries.zero(0, 5).inverse()

    def test_polynomial_inverse_needs_target(self):
        with pytest.raises(SeriesError):
            series({0: 1, 1: 1}).inverse()


class TestKernelPower:
    def test_g1_is_one(self):
        for r in (1, 2, 3):
            assert kernel_power(1, r) == LaurentSeries.one()

    def test_g2_r1_is_the_kernel(self):
        # (-q)^{-1} - 2 + (-q)
        assert kernel(1) == series({-1: -1, 0: -2, 1: -1})

    def test_g0_r1(self):
        got = kernel_power(0, 1, hi=6)
        assert got == series({1: -1, 2: 2, 3: -3, 4: 4, 5: -5, 6: 6}, 1, 6)

    def test_lowest_exponents(self):
        for g in range(-4, 0):
            for r in (1, 2, 3):
                ks = kernel_power(g, r, hi=40)
                assert ks.order() == r * (1 - g)

    def test_symmetry_for_positive_genus(self):
        # q -> 1/q invariance of s_r^{g-1}, g >= 1
        for g in range(1, 6):
            for r in (1, 2, 3):
                ks = kernel_power(g, r)
                assert ks.reflect() == ks

    def test_inverse_pairs(self):
        # s_r^{g-1} * s_r^{(2-g)-1} = 1 within a shared window
        for g in range(-5, 6):
            for r in (1, 2, 3):
                slack = r * (abs(g - 1) + abs(1 - g))
                a = kernel_power(g, r, hi=30 + slack)
                b = kernel_power(2 - g, r, hi=30 + slack)
                prod = a * b
                assert prod.matches(LaurentSeries.one(), require=(-10, 30))


class TestSBasis:
    def test_unit(self):
        f = SBasisForm({1: 1})
        assert f.expand(8) == LaurentSeries.one().truncate(8)

    def test_negated_g0(self):
        f = SBasisForm({0: -1})
        got = f.expand(5)
        assert got.matches(series({1: 1, 2: -2, 3: 3, 4: -4, 5: 5}))

    def test_one_plus_q_squared(self):
        f = SBasisForm({1: 1}, one_plus_q_power=2)
        assert f.expand(6).matches(series({0: 1, 1: 2, 2: 1}))

    def test_linearity(self):
        a = SBasisForm({2: F(3), 0: F(-1, 2)})
        b = SBasisForm({2: F(-1), -1: F(5)})
        lhs = (
            a.expand(12)
            + b.expand(12)
        )
        merged = {}
        for g, c in a.terms.items():
            merged[g] = merged.get(g, 0) + c
        for g, c in b.terms.items():
            merged[g] = merged.get(g, 0) + c
        rhs = SBasisForm(merged).expand(12)
        assert lhs.matches(rhs)

    def test_expand_agrees_with_series_arithmetic(self):
        f = SBasisForm({3: F(2), 0: F(1, 3)}, r=2, one_plus_q_power=1)
        direct = f.expand(14)
        rebuilt = (
            kernel_power(3, 2, hi=20).scale(F(2))
            + kernel_power(0, 2, hi=20).scale(F(1, 3))
        ) * binom_series(1)
        assert direct.matches(rebuilt)


coeffs = st.integers(min_value=-6, max_value=6)
exps = st.integers(min_value=-4, max_value=8)


def random_series(draw):
    d = draw(st.dictionaries(exps, coeffs, max_size=5))
    return LaurentSeries({e: F(c) for e, c in d.items() if c}, -4, 12)


@st.composite
def series_strategy(draw):
    return random_series(draw)


class TestRingLaws:
    @settings(max_examples=120, deadline=None)
    @given(series_strategy(), series_strategy(), series_strategy())
    def test_associativity_and_distributivity(self, a, b, c):
        lhs = (a * b) * c
        rhs = a * (b * c)
        assert lhs.matches(rhs)
        assert ((a + b) * c).matches(a * c + b * c)

    @settings(max_examples=120, deadline=None)
    @given(series_strategy(), series_strategy())
    def test_commutativity(self, a, b):
        assert (a * b).matches(b * a)
        assert (a + b).matches(b + a)

    @settings(max_examples=80, deadline=None)
    @given(series_strategy())
    def test_inverse_roundtrip(self, a):
        if a.order() is None:
            return
        inv = a.inverse()
        prod = a * inv
        assert prod.coeff(0) == 1
        hi = prod.hi if prod.hi is not None else 6
        for e in range(prod.lo, hi + 1):
            if e != 0:
                assert prod.coeff(e) == 0


class TestGaussianRationals:
    def test_i_squared(self):
        u = LaurentSeries.exact({1: I_UNIT})
        assert (u * u) == LaurentSeries.exact({2: GaussianRational(-1)})

    def test_exp_iu_parity(self):
        e = exp_coeff_series(I_UNIT, 8)
        for k, c in e.coeffs.items():
            if k % 2 == 0:
                assert c.is_real()
            else:
                assert c.re == 0

    def test_exp_times_conjugate_is_one(self):
        e = exp_coeff_series(I_UNIT, 8)
        ebar = exp_coeff_series(-I_UNIT, 8)
        prod = e * ebar
        assert prod.coeff(0) == GaussianRational(1)
        for k in range(1, 9):
            assert prod.coeff(k) == GaussianRational(0)

    def test_field_ops(self):
        a = GaussianRational(F(1, 2), F(3))
        b = GaussianRational(F(-2), F(1, 5))
        assert (a * b) / b == a
        assert a - a == GaussianRational(0)
        assert 1 / I_UNIT == -I_UNIT
