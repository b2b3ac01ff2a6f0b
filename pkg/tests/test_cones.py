"""Cone membership, including quadratic-irrational boundary rays."""

from fractions import Fraction as F

import pytest

from linserlab.cones import PolyCone, cone_contains
from linserlab.errors import InvalidModelError
from linserlab.scalars import QuadExt


class TestRationalCones:
    def test_first_quadrant(self):
        c = PolyCone(2, [(1, 0), (0, 1)])
        assert c.strictly_contains((1, 1))
        assert c.contains((1, 0)) and not c.strictly_contains((1, 0))
        assert not c.contains((-1, 1))

    def test_lower_dimensional_cone(self):
        c = PolyCone(3, [(1, 0, 0), (0, 1, 0)])
        assert c.contains((2, 3, 0))
        assert not c.contains((2, 3, 1))
        assert not c.strictly_contains((1, 1, 0))

    def test_halfplane(self):
        c = PolyCone(2, [(1, 0), (-1, 0), (0, 1)])
        assert c.contains((-5, 0)) and c.strictly_contains((0, 1))
        assert not c.contains((0, -1))

    def test_zero_generator_rejected(self):
        with pytest.raises(InvalidModelError):
            PolyCone(2, [(0, 0)])

    def test_one_dimensional(self):
        ray = PolyCone(1, [(2,)])
        assert ray.contains((3,)) and not ray.contains((-1,))
        assert ray.strictly_contains((1,)) and not ray.strictly_contains((0,))


class TestQuadraticBoundary:
    def test_golden_slice_cone(self):
        # slice of {q >= 0} along the plane spanned by a and b-a: the cone
        # between the two roots of 1 - s - s^2
        sigma = QuadExt(F(-1, 2), F(1, 2), 5)
        sigma_minus = QuadExt(F(-1, 2), F(-1, 2), 5)
        cone = PolyCone(2, [(F(1), sigma), (F(1), sigma_minus)])
        boundary = (F(1), sigma)
        assert cone.contains(boundary)
        assert not cone.strictly_contains(boundary)
        assert cone.strictly_contains((F(1), F(0)))
        just_outside = (F(1), sigma + F(1, 10 ** 9))
        assert not cone.contains(just_outside)

    def test_helper_wrapper(self):
        c = PolyCone(2, [(1, 0), (1, 1)])
        assert cone_contains(c, (2, 1))
        assert cone_contains(c, (2, 1), strict=True)
        assert not cone_contains(c, (1, 1), strict=True)
