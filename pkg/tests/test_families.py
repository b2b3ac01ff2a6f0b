"""Multigraded monomial-ideal families: containment, orders, cones, scans."""

import math
import random
from fractions import Fraction as F

import pytest

from linserlab.engine import asymptotic_order
from linserlab.errors import (InvalidModelError, LabError, ModelFormatError,
                              NotEffectiveError, UnsupportedChartError)
from linserlab.families import (MonomialIdeal, MonomialIdealFamily, OrdSample,
                                asymptotic_ord0, chart_weight_for_ray,
                                check_ample_indices, cones_estimate,
                                family_from_toric, linear_threshold_family,
                                parse_family_text, principal_family,
                                regularity_scan, table_family,
                                threshold_ideal, verify_multiplicativity)
from linserlab.models import preset


def square_family():
    """rule(m) = (x^(m^2)): fails multiplicativity at m = l = 1."""
    def rule(mv):
        m = mv[0]
        if m < 0:
            return MonomialIdeal.zero(1)
        if m == 0:
            return MonomialIdeal.unit(1)
        return MonomialIdeal(1, [(m * m,)])
    return MonomialIdealFamily(1, 1, rule, name="m^2")


def norm_ceiling_family():
    """rule(m) = {|alpha| >= ceil(|m|_2)}: multiplicative but curved."""
    def rule(mv):
        n2 = sum(x * x for x in mv)
        level = math.isqrt(n2)
        if level * level < n2:
            level += 1
        return threshold_ideal(2, (1, 1), level)
    return MonomialIdealFamily(2, 2, rule, name="norm-ceiling")


class TestMonomialIdeal:
    def test_generator_reduction(self):
        ideal = MonomialIdeal(2, [(2, 0), (2, 1), (0, 3), (1, 3)])
        assert ideal.gens == ((0, 3), (2, 0))

    def test_membership_and_order(self):
        ideal = MonomialIdeal(2, [(2, 0), (0, 3)])
        assert ideal.contains((2, 5)) and not ideal.contains((1, 2))
        assert ideal.order() == 2
        assert ideal.order((1, 0)) == 0  # weighted: (0,3) has x-degree 0

    def test_zero_and_unit(self):
        assert MonomialIdeal.zero(2).is_zero
        assert MonomialIdeal.unit(2).is_unit
        with pytest.raises(NotEffectiveError):
            MonomialIdeal.zero(2).order()

    def test_threshold_generators_minimal(self):
        ideal = threshold_ideal(2, (1, 1), 3)
        assert all(sum(g) == 3 for g in ideal.gens)
        assert len(ideal.gens) == 4
        weighted = threshold_ideal(2, (1, 2), 4)
        assert all(g[0] + 2 * g[1] in (4, 5) for g in weighted.gens)

    def test_rule_zero_index_must_be_unit(self):
        with pytest.raises(InvalidModelError):
            MonomialIdealFamily(1, 1, lambda mv: MonomialIdeal.zero(1))


class TestMultiplicativity:
    def test_threshold_passes(self):
        fam = linear_threshold_family(1, 2, [2])
        rep = verify_multiplicativity(fam, [(m,) for m in range(-2, 5)])
        assert rep.passed and rep.pairs_checked > 0

    def test_principal_passes(self):
        fam = principal_family(1, 2, [(1, 1)])
        assert verify_multiplicativity(fam, 3).passed

    def test_square_counterexample_fails(self):
        rep = verify_multiplicativity(square_family(), [(0,), (1,), (2,)])
        assert not rep.passed
        assert ((1,), (1,), (2,)) in rep.violations

    def test_toric_family_passes(self):
        fam = family_from_toric(preset("blowup_pd", 2).toric, (0, 3))
        box = [(a, b) for a in range(0, 3) for b in range(-2, 2)]
        assert verify_multiplicativity(fam, box).passed

    def test_norm_ceiling_passes(self):
        assert verify_multiplicativity(norm_ceiling_family(), 2).passed

    def test_report_text(self):
        rep = verify_multiplicativity(square_family(), [(0,), (1,)])
        assert "violation" in rep.to_text() or not rep.passed


class TestAsymptoticOrd:
    def test_threshold_constant(self):
        fam = linear_threshold_family(1, 2, [2])
        est = asymptotic_ord0(fam, (1,), 5)
        assert est.value == 2
        assert all(v == 2 for _, v in est.sequence)

    def test_principal_direction(self):
        fam = principal_family(1, 2, [(1, 1)])
        assert asymptotic_ord0(fam, (1,), 4).value == 2

    def test_not_effective(self):
        fam = principal_family(1, 2, [(1, 1)])
        with pytest.raises(NotEffectiveError):
            asymptotic_ord0(fam, (-1,), 5)

    def test_bracket_nonincreasing(self):
        fam = norm_ceiling_family()
        est = asymptotic_ord0(fam, (1, 1), 12)
        bracket = [v for _, v in est.bracket]
        assert all(b <= a for a, b in zip(bracket, bracket[1:]))

    def test_homogeneous_in_direction(self):
        fam = norm_ceiling_family()
        coarse = asymptotic_ord0(fam, (2, 2), 6).value
        fine = asymptotic_ord0(fam, (1, 1), 12).value
        assert fine <= coarse  # doubled depth sees every doubled-direction level

    def test_subadditive_across_directions(self):
        fam = linear_threshold_family(2, 2, [1, 2])
        a = asymptotic_ord0(fam, (2, 1), 6).value
        b = asymptotic_ord0(fam, (1, 3), 6).value
        c = asymptotic_ord0(fam, (3, 4), 6).value
        assert c <= a + b


class TestToricCrossChecks:
    def test_ord_matches_engine_on_examples(self):
        b2 = preset("blowup_pd", 2)
        fam = family_from_toric(b2.toric, (0, 3))
        assert asymptotic_ord0(fam, (1, 1), 3).value == \
            asymptotic_order(b2, 3, (1, 1)) == 1
        assert asymptotic_ord0(fam, (2, -1), 3).value == 0

    def test_ord_matches_engine_on_random_classes(self):
        b2 = preset("blowup_pd", 2)
        fam = family_from_toric(b2.toric, (0, 3))
        rng = random.Random(17)
        done = 0
        while done < 50:
            c1 = rng.randint(1, 6)
            c2 = rng.randint(-5, 5)
            if not b2.big_test((c1, c2)):
                continue
            got = asymptotic_ord0(fam, (c1, c2), 3).value
            want = asymptotic_order(b2, 3, (c1, c2))
            assert got == want
            done += 1

    def test_weighted_variant_matches_too(self):
        b2 = preset("blowup_pd", 2)
        weight = chart_weight_for_ray(b2.toric, (0, 3), 3)
        fam = family_from_toric(b2.toric, (0, 3), weight=weight)
        assert asymptotic_ord0(fam, (1, 1), 2).value == 1
        assert asymptotic_ord0(fam, (3, -2), 2).value == 0

    def test_unit_and_zero_ideals(self):
        p2 = preset("projective_space", 2)
        fam = family_from_toric(p2, (0, 1))
        assert fam.ideal((1,)).is_unit      # hyperplane series is base-point free
        assert fam.ideal((3,)).is_unit
        assert fam.ideal((-1,)).is_zero

    def test_non_smooth_chart_rejected(self):
        from linserlab.models import ToricModel
        b2 = preset("blowup_pd", 2).toric
        with pytest.raises(UnsupportedChartError):
            family_from_toric(b2, (0, 0))  # repeated ray
        weighted = ToricModel(2, [(1, 0), (0, 1), (-1, -2)], [(1, 0, 0)],
                              name="weighted-plane")
        with pytest.raises(UnsupportedChartError):
            family_from_toric(weighted, (0, 2))  # determinant -2


class TestConesEstimate:
    def test_quadrant_rule(self):
        def rule(mv):
            if mv[0] >= 0 and mv[1] >= 0:
                return MonomialIdeal.unit(2)
            if mv[0] + mv[1] < 0:
                return MonomialIdeal.zero(2)
            return MonomialIdeal(2, [(1, 0)])
        fam = MonomialIdealFamily(2, 2, rule, name="quadrant")
        nef, psef = cones_estimate(fam, 3)
        assert nef.contains((1, 1)) and nef.contains((1, 0))
        assert not nef.contains((-1, 0))
        assert psef.contains((1, -1)) and not psef.contains((-1, -1))

    def test_blowup_base_ideal_cones(self):
        fam = family_from_toric(preset("blowup_pd", 2).toric, (0, 3))
        nef, psef = cones_estimate(fam, [(a, b) for a in range(-3, 4)
                                         for b in range(-3, 4)])
        # nef cone spanned by h and h - e
        assert nef.contains((1, 0)) and nef.contains((1, -1))
        assert not nef.contains((1, 1)) and not nef.contains((1, -2))
        # psef cone spanned by h - e and e
        assert psef.contains((0, 1)) and psef.contains((1, -1))
        assert not psef.contains((-1, 0))

    def test_ample_indices_check(self):
        fam = family_from_toric(preset("blowup_pd", 2).toric, (0, 3))
        assert check_ample_indices(fam, 2)
        assert not check_ample_indices(norm_ceiling_family(), 2)


class TestRegularityScan:
    def test_linear_family_flat(self):
        fam = linear_threshold_family(2, 2, [1, 2])
        scan = regularity_scan(fam, (2, 1), (1, 0), (0, 1), steps=4, depth=3)
        assert scan.piecewise_linear
        assert scan.max_second_difference == 0
        assert all(isinstance(s, OrdSample) for s in scan.samples)

    def test_toric_family_single_crease(self):
        fam = family_from_toric(preset("blowup_pd", 2).toric, (0, 3))
        scan = regularity_scan(fam, (3, -2), (0, 1), (1, 0), steps=5, depth=2)
        assert not scan.piecewise_linear  # crease along the ray of h
        assert all(p[1] == 0 for p in scan.crease_points)
        assert scan.max_second_difference == 1

    def test_norm_ceiling_curved_everywhere(self):
        fam = norm_ceiling_family()
        scan = regularity_scan(fam, (2, 2), (1, 0), (0, 1), steps=5, depth=24,
                               require_ample_indices=False)
        interior = [(i, j) for i in range(1, 4) for j in range(1, 4)]
        creased = set()
        for p in scan.crease_points:
            creased.add((p[0] - 2, p[1] - 2))
        assert len(creased.intersection(set(interior))) == len(interior)

    def test_ample_indices_guard(self):
        fam = norm_ceiling_family()
        with pytest.raises(LabError):
            regularity_scan(fam, (2, 2), (1, 0), (0, 1), steps=3, depth=4)


class TestFamilyLanguage:
    def test_threshold_text(self):
        fam = parse_family_text("family rank 2 vars 2\nrule threshold m1+2m2\n")
        assert asymptotic_ord0(fam, (1, 1), 2).value == 3

    def test_weighted_text(self):
        fam = parse_family_text(
            "family rank 1 vars 2\nrule weighted 1,3 2m1\n")
        assert fam.weight == (1, 3)
        assert asymptotic_ord0(fam, (1,), 3).value == 2

    def test_table_text(self):
        text = """family rank 1 vars 2
rule table
entry 0 unit
entry 1 gens 1,0;0,2
entry 2 gens 2,0
"""
        fam = parse_family_text(text)
        assert fam.ideal((1,)).gens == ((0, 2), (1, 0))
        assert fam.ideal((5,)).is_zero

    def test_toric_text(self):
        fam = parse_family_text(
            "family rank 2 vars 2\nrule toric blowup2 0,3\n")
        assert asymptotic_ord0(fam, (1, 1), 2).value == 1

    @pytest.mark.parametrize("text,line", [
        ("rule threshold m1\n", 1),
        ("family rank 2 vars 2\nrule threshold q1\n", 2),
        ("family rank 2 vars 2\nrule weighted 1 m1\n", 2),
        ("family rank 2 vars 2\nentry 0,0 unit\n", 2),
        ("family rank 2 vars 2\n", 2),
    ])
    def test_malformed_family_lines(self, text, line):
        with pytest.raises(ModelFormatError) as err:
            parse_family_text(text)
        assert err.value.line == line
