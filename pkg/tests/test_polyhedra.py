"""Polyhedral layer: vertex enumeration, counting, volumes, faces, hulls."""

import math
import random
from fractions import Fraction as F

import pytest

from linserlab.errors import (BudgetExceededError, InvalidOperandsError,
                              NotAFaceError, UnboundedPolytopeError)
from linserlab.polyhedra import (build_polytope, euclidean_volume,
                                 hull_of_lattice_points, is_newton_region,
                                 minkowski_sum, normalized_volume)


def unit_simplex(d):
    ineqs = [(tuple(1 if i == j else 0 for i in range(d)), 0) for j in range(d)]
    ineqs.append((tuple(-1 for _ in range(d)), 1))
    return build_polytope(d, ineqs)


def truncated_simplex():
    """Divisor polytope of 2h - e on the blown-up plane."""
    return build_polytope(2, [((1, 0), 0), ((0, 1), 0),
                              ((-1, -1), 2), ((1, 1), -1)])


class TestBuild:
    def test_unit_simplex_vertices(self):
        p = unit_simplex(2)
        assert set(p.vertices) == {(0, 0), (1, 0), (0, 1)}
        assert p.is_bounded and p.is_full_dimensional

    def test_contradictory_is_empty(self):
        p = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1),
                               ((1, 1), -2)])
        assert p.is_empty

    def test_truncated_simplex_four_vertices(self):
        p = truncated_simplex()
        assert len(p.vertices) == 4
        assert set(p.vertices) == {(1, 0), (0, 1), (2, 0), (0, 2)}

    def test_unbounded_flagged(self):
        p = build_polytope(2, [((1, 0), 0), ((0, 1), 0)])
        assert not p.is_bounded and not p.is_empty
        with pytest.raises(UnboundedPolytopeError):
            euclidean_volume(p)
        with pytest.raises(UnboundedPolytopeError):
            build_polytope(2, [((1, 0), 0)], require_bounded=True)

    def test_lower_dimensional(self):
        p = build_polytope(2, [((1, 0), 0), ((-1, 0), 0), ((0, 1), 0),
                               ((0, -1), 1)])
        assert p.affine_dim == 1 and euclidean_volume(p) == 0


class TestCounting:
    def test_simplex_counts(self):
        assert unit_simplex(2).lattice_point_count(3) == 10
        assert unit_simplex(3).lattice_point_count(4) == 35

    def test_truncated_band_count(self):
        # {0<=u, u1+u2 <= 2m, u1+u2 >= m} at m=5: sum of k+1 for k=5..10
        p = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-1, -1), 2),
                               ((1, 1), -1)])
        assert p.lattice_point_count(5) == sum(k + 1 for k in range(5, 11))

    def test_monotone_in_scale(self):
        p = truncated_simplex()
        counts = [p.lattice_point_count(m) for m in range(1, 9)]
        assert all(b >= a for a, b in zip(counts, counts[1:]))

    def test_budget_guard(self):
        big = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-1, -1), 2000)])
        with pytest.raises(BudgetExceededError):
            big.lattice_point_count(1000)

    def test_ehrhart_leading_term(self):
        # d! count(P, m) / m^d approaches the normalized volume like K/m
        for poly in (unit_simplex(2), unit_simplex(3), truncated_simplex()):
            d = poly.dim
            vol = normalized_volume(poly)
            errs = []
            for m in (4, 8, 16, 32):
                approx = F(math.factorial(d) * poly.lattice_point_count(m), m ** d)
                errs.append(abs(approx - vol) * m)
            bound = 2 * max(errs[0], F(1))
            assert all(e <= bound for e in errs)


class TestVolume:
    def test_examples(self):
        assert euclidean_volume(unit_simplex(2)) == F(1, 2)
        cube = build_polytope(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0),
                                  ((-1, 0, 0), 1), ((0, -1, 0), 1), ((0, 0, -1), 1)])
        assert euclidean_volume(cube) == 1
        assert euclidean_volume(truncated_simplex()) == F(3, 2)
        assert normalized_volume(truncated_simplex()) == 3  # 2^2 - 1^2

    def test_4d_cross_polytope(self):
        ineqs = []
        for signs in range(16):
            n = tuple(1 if signs >> k & 1 else -1 for k in range(4))
            ineqs.append((n, 1))
        p = build_polytope(4, ineqs)
        assert euclidean_volume(p) == F(2, 3)  # 2^d / d!

    def test_translation_invariance(self):
        rng = random.Random(7)
        base = truncated_simplex()
        for _ in range(10):
            w = [rng.randint(-5, 5) for _ in range(2)]
            shifted = build_polytope(2, [
                (n, a - sum(wi * ni for wi, ni in zip(w, n)))
                for n, a in base.inequalities])
            assert euclidean_volume(shifted) == euclidean_volume(base)
            assert shifted.lattice_point_count(3) == base.lattice_point_count(3)


class TestFace:
    def test_simplex_edge(self):
        p = unit_simplex(2)
        f = p.face((-1, -1), 1)  # the hyperplane u1+u2 = 1
        assert f.dim == 1 and not f.is_empty
        assert normalized_volume(f) == 1
        assert f.lattice_point_count(1) == 2

    def test_truncated_inner_edge(self):
        f = truncated_simplex().face((1, 1), -1)
        assert f.lattice_point_count(1) == 2

    def test_missing_contact_empty(self):
        f = unit_simplex(2).face((1, 0), F(1, 2))  # u1 = -1/2 misses
        assert f.is_empty

    def test_cutting_raises(self):
        with pytest.raises(NotAFaceError):
            unit_simplex(2).face((1, 0), F(-1, 2))  # u1 = 1/2 cuts interior

    def test_face_of_face(self):
        p = unit_simplex(3)
        f = p.face((-1, -1, -1), 1)      # triangle u1+u2+u3 = 1
        assert f.dim == 2 and normalized_volume(f) == 1
        # an edge of that triangle is again a face, with 2 lattice points
        edges = [f.face(n, a) for n, a in f.inequalities]
        edges = [e for e in edges if not e.is_empty]
        assert any(e.lattice_point_count(1) == 2 for e in edges)

    def test_irrational_level_face_has_no_lattice_points(self):
        p = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-2, -2), 3)])
        f = p.face((-2, -2), 3)  # u1+u2 = 3/2
        assert not f.is_empty
        assert f.lattice_point_count(1) == 0


class TestHull:
    def test_lattice_simplex_is_its_own_hull(self):
        p = unit_simplex(2)
        for m in (1, 3, 7):
            h = hull_of_lattice_points(p, m)
            assert normalized_volume(h) == m ** 2

    def test_half_interval(self):
        p = build_polytope(1, [((1,), 0), ((-2,), 1)])  # [0, 1/2]
        h = hull_of_lattice_points(p, 1)
        assert h.vertices == ((F(0),),)

    def test_shrunk_triangle(self):
        p = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-2, -2), 3)])
        h1 = hull_of_lattice_points(p, 1)   # hull of {0, e1, e2}
        assert euclidean_volume(h1) == F(1, 2)
        h2 = hull_of_lattice_points(p, 2)   # 2P is the full lattice triangle
        assert euclidean_volume(h2) == F(9, 2)

    def test_3d_shrunk_cube(self):
        ineqs = [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0),
                 ((-2, 0, 0), 3), ((0, -2, 0), 3), ((0, 0, -2), 3)]
        p = build_polytope(3, ineqs)  # cube of side 3/2
        h = hull_of_lattice_points(p, 1)
        assert euclidean_volume(h) == 1

    def test_empty_when_no_lattice_points(self):
        p = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-4, -4), 1),
                               ((4, 4), 0)])
        shrunk = build_polytope(2, [((3, 0), -1), ((0, 3), -1), ((-3, -3), 2)])
        h = hull_of_lattice_points(shrunk, 1)
        assert h.is_empty


class TestMinkowski:
    def test_simplex_doubling(self):
        p = unit_simplex(2)
        s = minkowski_sum(p, p)
        assert euclidean_volume(s) == 4 * euclidean_volume(p)

    def test_newton_region_merge(self):
        n2 = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), -2)])
        n3 = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), -3)])
        assert is_newton_region(n2)
        s = minkowski_sum(n2, n3)
        offsets = {n: a for n, a in s.inequalities}
        assert offsets[(1, 1)] == -5

    def test_mixed_raises(self):
        p = unit_simplex(2)
        n = build_polytope(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), -2)])
        with pytest.raises(InvalidOperandsError):
            minkowski_sum(p, n)

    def test_vertex_sum_oracle(self):
        rng = random.Random(13)
        p = truncated_simplex()
        q = unit_simplex(2)
        s = minkowski_sum(p, q)
        # the sum contains every translate P + q0, q0 a vertex of Q
        for q0 in q.vertices:
            for v in p.vertices:
                assert s.contains(tuple(a + b for a, b in zip(v, q0)))
        # brute-force hull of pairwise sums has the same volume
        direct = [tuple(a + b for a, b in zip(u, v))
                  for u in p.vertices for v in q.vertices]
        for _ in range(20):
            # random convex combinations of sums stay inside
            i = rng.randrange(len(direct))
            j = rng.randrange(len(direct))
            lam = F(rng.randint(0, 8), 8)
            mid = tuple(lam * a + (1 - lam) * b
                        for a, b in zip(direct[i], direct[j]))
            assert s.contains(mid)
