"""Exact scalar layer: canonical forms, sign analysis, serialization."""

import decimal
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linserlab.errors import InvalidComparisonError, InvalidScalarError
from linserlab.scalars import (QuadExt, RadicalSum, canonicalize,
                               format_quadext, format_rat, int_nth_root,
                               nth_root_bounds, parse_quadext, parse_rat,
                               quad_compare, quadratic_roots, sqrt_rat,
                               squarefree_factor)

GOLDEN_SIGMA = QuadExt(F(-1, 2), F(1, 2), 5)          # (sqrt(5)-1)/2
GOLDEN_VOLUME = QuadExt(F(-7, 2), F(5, 2), 5)         # (5 sqrt(5)-7)/2


class TestCanonicalize:
    def test_square_extraction(self):
        v = QuadExt(0, 1, 8)
        assert (v.rational_part, v.radical_coefficient, v.discriminant) == (0, 2, 2)

    def test_zero_radical_normalizes_discriminant(self):
        v = QuadExt(3, 0, 5)
        assert (v.rational_part, v.radical_coefficient, v.discriminant) == (3, 0, 1)

    def test_golden_volume_is_fixed_point(self):
        assert canonicalize(GOLDEN_VOLUME) == GOLDEN_VOLUME
        assert GOLDEN_VOLUME.discriminant == 5

    def test_idempotent(self):
        rng = random.Random(11)
        for _ in range(200):
            v = QuadExt(F(rng.randint(-9, 9), rng.randint(1, 9)),
                        F(rng.randint(-9, 9), rng.randint(1, 9)),
                        rng.randint(1, 60))
            assert canonicalize(v) == v

    def test_nonpositive_discriminant_rejected(self):
        with pytest.raises(InvalidScalarError):
            QuadExt(1, 1, 0)
        with pytest.raises(InvalidScalarError):
            QuadExt(1, 1, -5)

    def test_rational_folds_into_rational_part(self):
        v = QuadExt(2, 3, 4)  # 2 + 3*sqrt(4) = 8
        assert v.is_rational and v.rational_value() == 8


class TestCompare:
    def test_sqrt5_beats_two(self):
        assert quad_compare(QuadExt(0, 1, 5), QuadExt(2)) > 0

    def test_golden_conjugate_positive(self):
        assert quad_compare(GOLDEN_SIGMA, QuadExt(0)) > 0

    def test_golden_volume_above_two(self):
        assert quad_compare(GOLDEN_VOLUME, QuadExt(2)) > 0

    def test_incompatible_discriminants(self):
        with pytest.raises(InvalidComparisonError):
            quad_compare(QuadExt(0, 1, 2), QuadExt(0, 1, 3))

    def test_rational_mixes_with_any_radical(self):
        assert QuadExt(0, 1, 7) > F(5, 2)
        assert QuadExt(0, 1, 7) < 3

    def test_agrees_with_high_precision_decimal(self):
        # sanity cross-check of the sign logic, not its definition
        rng = random.Random(5)
        decimal.getcontext().prec = 60
        for _ in range(10 ** 4):
            a = F(rng.randint(-50, 50), rng.randint(1, 12))
            b = F(rng.randint(-50, 50), rng.randint(1, 12))
            d = rng.randint(2, 80)
            v = QuadExt(a, b, d)
            ca, cb = v.rational_part, v.radical_coefficient
            approx = (decimal.Decimal(ca.numerator) / ca.denominator
                      + (decimal.Decimal(cb.numerator) / cb.denominator)
                      * decimal.Decimal(v.discriminant).sqrt())
            got = v.sign()
            # 60-digit evaluation never lands exactly on a nonzero value's 0
            if got == 0:
                assert abs(approx) < decimal.Decimal("1e-40")
            else:
                assert got == (1 if approx > 0 else -1)


class TestArithmetic:
    def test_golden_identity(self):
        # sigma^2 + sigma = 1 certifies the quadratic relation
        assert GOLDEN_SIGMA * GOLDEN_SIGMA + GOLDEN_SIGMA == QuadExt(1)

    def test_volume_from_sigma(self):
        assert 5 * GOLDEN_SIGMA - 1 == GOLDEN_VOLUME

    def test_division_roundtrip(self):
        v = QuadExt(F(3, 7), F(-2, 5), 13)
        w = QuadExt(F(1, 2), F(4, 3), 13)
        assert (v / w) * w == v

    def test_mixing_radicals_raises(self):
        with pytest.raises(InvalidScalarError):
            QuadExt(0, 1, 2) + QuadExt(0, 1, 3)

    @given(st.fractions(), st.fractions(), st.fractions())
    @settings(max_examples=200)
    def test_rational_field_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c

    @given(st.fractions(min_value=-20, max_value=20),
           st.fractions(min_value=-20, max_value=20),
           st.integers(min_value=2, max_value=40))
    @settings(max_examples=150)
    def test_quadext_ring_laws(self, a, b, d):
        x = QuadExt(a, b, d)
        y = QuadExt(b, a, d)
        z = QuadExt(1, -1, d)
        assert (x + y) * z == x * z + y * z
        assert x * y == y * x


class TestSerialization:
    def test_format_examples(self):
        assert format_rat(F(7)) == "7"
        assert format_rat(F(-7, 2)) == "-7/2"
        assert format_quadext(GOLDEN_VOLUME) == "-7/2 + 5/2*sqrt(5)"
        assert format_quadext(QuadExt(0, -2, 3)) == "0 - 2*sqrt(3)"

    def test_round_trip(self):
        rng = random.Random(3)
        for _ in range(300):
            v = QuadExt(F(rng.randint(-30, 30), rng.randint(1, 10)),
                        F(rng.randint(-30, 30), rng.randint(1, 10)),
                        rng.randint(1, 50))
            assert parse_quadext(format_quadext(v)) == v

    def test_parse_rat(self):
        assert parse_rat("7") == 7
        assert parse_rat("-7/2") == F(-7, 2)
        with pytest.raises(InvalidScalarError):
            parse_rat("seven")


class TestHelpers:
    def test_squarefree_factor(self):
        assert squarefree_factor(8) == (2, 2)
        assert squarefree_factor(1) == (1, 1)
        assert squarefree_factor(360) == (6, 10)

    def test_int_nth_root(self):
        for n in (0, 1, 7, 26, 27, 28, 10 ** 12):
            r = int_nth_root(n, 3)
            assert r ** 3 <= n < (r + 1) ** 3

    def test_sqrt_rat(self):
        assert sqrt_rat(F(9, 4)) == F(3, 2)
        v = sqrt_rat(F(5))
        assert v * v == QuadExt(5)

    def test_quadratic_roots_golden(self):
        # 1 - s - s^2 = 0 has the golden conjugate as its positive root
        lo, hi = quadratic_roots(F(-1), F(-1), F(1))
        assert hi == GOLDEN_SIGMA  # larger root is (sqrt(5)-1)/2 > 0 > -phi
        assert lo == QuadExt(F(-1, 2), F(-1, 2), 5)

    def test_nth_root_bounds_certify(self):
        for v, k in ((F(2), 2), (F(7), 3), (GOLDEN_VOLUME, 3), (F(1, 7), 2)):
            lo, hi = nth_root_bounds(v, k)
            assert lo <= hi
            assert lo ** k <= (v if not isinstance(v, QuadExt) else v.bounds()[1])
            assert hi - lo <= F(2, 10 ** 17)


class TestRadicalSum:
    def test_zero_detection(self):
        s = RadicalSum.from_scalar(QuadExt(0, 1, 2)) - RadicalSum({2: 1})
        assert s.is_zero()
        t = RadicalSum({2: 1}) + RadicalSum({3: -1})
        assert not t.is_zero()

    def test_product_reduces_radicals(self):
        s = RadicalSum({2: 1}) * RadicalSum({8: 1})  # sqrt(2)*2*sqrt(2) = 4
        assert s == RadicalSum({1: 4})

    def test_linear_combination_across_fields(self):
        a = RadicalSum.from_scalar(QuadExt(1, 1, 5))
        b = RadicalSum.from_scalar(QuadExt(-1, 2, 7))
        c = a + b
        assert c.terms == {5: F(1), 7: F(2)}
