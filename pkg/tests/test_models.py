"""Model catalog: presets, divisor/class algebra, positivity, file format."""

import random
from fractions import Fraction as F

import pytest

from linserlab.errors import (ConfigError, InvalidModelError, ModelFormatError,
                              UnsupportedClassError)
from linserlab.models import (NSClass, SurfaceModel, blowup_surface,
                              cutkosky, hirzebruch, parse_model_text, preset,
                              projective_space, resolve_model, split_ruled)
from linserlab.polyhedra import euclidean_volume, normalized_volume


class TestPresets:
    def test_blowup_plane_fan(self):
        b2 = preset("blowup_pd", 2)
        assert b2.toric.rays == ((1, 0), (0, 1), (-1, -1), (1, 1))
        assert b2.toric.rho == 2

    def test_golden_b_not_nef(self):
        ck = preset("cutkosky_golden")
        assert ck.q(ck.b) == -2
        assert not ck.base_nef(ck.b)
        assert ck.base_ample(ck.a)

    def test_split_ruled_degrees(self):
        assert split_ruled(2).summand_degrees == (-1, 1)
        assert split_ruled(5).summand_degrees == (-4, 1)
        with pytest.raises(InvalidModelError):
            split_ruled(1)

    def test_invalid_cutkosky_rejected(self):
        with pytest.raises(InvalidModelError):
            cutkosky((1, 1, 0), (1, 1, 0))  # b must fail the nef test
        with pytest.raises(InvalidModelError):
            cutkosky((1, 2, -1), (1, 1, 0))  # a must be ample

    def test_surface_signature_enforced(self):
        with pytest.raises(InvalidModelError):
            SurfaceModel(((1, 0), (0, 1)), [], (1, 1))  # positive definite

    def test_resolver(self):
        assert resolve_model("blowup3").dim == 3
        assert resolve_model("projective_space(2)").dim == 2
        assert resolve_model("split_ruled(3)").summand_degrees == (-2, 1)
        with pytest.raises(ConfigError):
            resolve_model("no_such_model")


class TestToricPolytopes:
    def test_hyperplane_class_gives_simplex(self):
        p2 = projective_space(2)
        poly = p2.polytope_of_class((1,))
        assert set(poly.vertices) == {(0, 0), (1, 0), (0, 1)}

    def test_twohminuse_truncated(self):
        b2 = preset("blowup_pd", 2)
        poly = b2.toric.polytope_of_class((2, -1))
        assert euclidean_volume(poly) == F(3, 2)
        assert normalized_volume(poly) == 3

    def test_negative_class_empty(self):
        b2 = preset("blowup_pd", 2)
        assert b2.toric.polytope_of_class((-1, 0)).is_empty


class TestClassAlgebra:
    def test_basis_divisor_round_trip(self):
        b2 = preset("blowup_pd", 2).toric
        h = b2.class_of_divisor((0, 0, 1, 0))
        assert h == NSClass((1, 0))
        for cls in ((1, 0), (2, -1), (-1, 3)):
            div = b2.divisor_of_class(cls)
            assert b2.class_of_divisor(div) == NSClass(cls)

    def test_principal_shift_invariance(self):
        b2 = preset("blowup_pd", 2).toric
        rng = random.Random(2)
        for _ in range(30):
            div = [rng.randint(-4, 4) for _ in range(4)]
            u = [rng.randint(-5, 5) for _ in range(2)]
            shifted = [a + s for a, s in zip(div, b2.principal_divisor(u))]
            assert b2.class_of_divisor(div) == b2.class_of_divisor(shifted)

    def test_hirzebruch_one_matches_blowup(self):
        # F_1 and the blown-up plane are the same surface; the fibre class
        # has the same invariants in both presentations
        f1 = hirzebruch(1)
        fibre = f1.class_of_divisor((1, 0, 0, 0))
        poly = f1.polytope_of_class(fibre)
        assert normalized_volume(poly) == 0  # fibre is not big
        assert f1.nef_test(fibre)

    def test_hirzebruch_nef_cone(self):
        f2 = hirzebruch(2)
        # nef cone spanned by the fibre and s_minus + 2 fibre
        assert f2.nef_test((1, 0))
        assert f2.nef_test((2, 1))      # s_- + 2f
        assert not f2.nef_test((1, 1))  # s_- + f pairs -1 with s_-
        assert not f2.nef_test((0, 1))  # s_- itself


class TestPositivity:
    def test_blowup_chambers(self):
        b2 = preset("blowup_pd", 2)
        assert b2.nef_test((1, -1))          # h - e
        assert not b2.nef_test((1, 1))       # h + e pairs -1 with e
        assert b2.toric.nef_test((1, -1))
        assert not b2.toric.nef_test((1, 1))
        assert b2.psef_test((1, 1)) and b2.toric.psef_test((1, 1))
        assert not b2.psef_test((-1, 0))
        assert b2.nef_test((0, 0))

    def test_nef_implies_psef_toric(self):
        b2 = preset("blowup_pd", 2).toric
        rng = random.Random(9)
        for _ in range(40):
            xi = (F(rng.randint(-8, 8), 2), F(rng.randint(-8, 8), 2))
            if b2.nef_test(xi):
                assert b2.psef_test(xi)

    def test_cutkosky_nef_cone_convex(self):
        ck = preset("cutkosky_golden")
        rng = random.Random(4)
        found = 0
        while found < 25:
            u = NSClass([rng.randint(-3, 3) for _ in range(3)])
            v = NSClass([rng.randint(-3, 3) for _ in range(3)])
            if ck.base_nef(u) and ck.base_nef(v):
                found += 1
                assert ck.base_nef(u + v)

    def test_surface_positivity(self):
        bs = blowup_surface()
        assert bs.nef_test((1, 0)) and not bs.nef_test((0, 1))
        assert bs.psef_test((1, 1)) and bs.psef_test((1, -1))
        assert not bs.psef_test((-1, 0)) and not bs.psef_test((1, -2))
        assert bs.big_test((1, 1)) and not bs.big_test((1, -1))

    def test_cutkosky_class_lengths(self):
        ck = preset("cutkosky_golden")
        with pytest.raises(UnsupportedClassError):
            ck.nef_test((1, 0, 0, 0))


TORIC_FILE = """# blown-up plane
model toric
dim 2
ray 1 0
ray 0 1
ray -1 -1
ray 1 1
basis 2 3
ample 2 -1
"""

SURFACE_FILE = """model surface
gram 0 0 1
gram 0 1 0
gram 1 1 -1
curve 0 1
ample 2 -1
"""

CUTKOSKY_FILE = """model cutkosky
gram 0 0 0
gram 0 1 1
gram 0 2 1
gram 1 1 0
gram 1 2 1
gram 2 2 0
a 1 1 0
b 1 2 -1
"""


class TestModelFiles:
    def test_toric_round_trip(self):
        m = parse_model_text(TORIC_FILE)
        assert m.rho == 2
        assert normalized_volume(m.polytope_of_class((2, -1))) == 3

    def test_surface_file(self):
        m = parse_model_text(SURFACE_FILE)
        assert m.q((1, 0)) == 1 and m.q((0, 1)) == -1

    def test_cutkosky_file(self):
        m = parse_model_text(CUTKOSKY_FILE)
        assert m.q((1, 2, -1)) == -2

    def test_split_ruled_file(self):
        m = parse_model_text("model split_ruled -1 1\n")
        assert m.summand_degrees == (-1, 1)

    @pytest.mark.parametrize("text,line", [
        ("ray 1 0\n", 1),                                  # before model
        ("model toric\ndim 2\nray 1 0\nray x 1\n", 4),     # bad integer
        ("model toric\ndim 2\nray 1 0\nbasis 5\n", 4),     # basis range
        ("model surface\ngram 0 0 1\ncurve 1 0\nample 1 0\nmodel toric\n", 5),
        ("model frobenius\n", 1),                          # unknown kind
        ("model toric\ndim 2\nwhat 1\n", 3),               # unknown directive
    ])
    def test_malformed_files_cite_lines(self, text, line):
        with pytest.raises(ModelFormatError) as err:
            parse_model_text(text)
        assert err.value.line == line

    def test_missing_sections_rejected(self):
        with pytest.raises(ModelFormatError):
            parse_model_text("model toric\ndim 2\n")
        with pytest.raises(ModelFormatError):
            parse_model_text("model surface\ngram 0 0 1\ncurve 1 0\n")

    def test_file_resolution(self, tmp_path):
        path = tmp_path / "m.model"
        path.write_text(TORIC_FILE)
        m = resolve_model(str(path))
        assert m.rho == 2
