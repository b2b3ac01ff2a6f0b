"""Exact polyhedral geometry in ambient dimension <= 4.

Polytopes are stored by inequality systems {u : <u, n_i> >= -a_i} with
integer normals n_i and rational offsets a_i.  Vertices are enumerated by
exact intersection of inequality subsets, which is adequate (and fully
exact) at the dimensions this package works in.  Lattice-point counts sum
closed intervals along the last coordinate instead of scanning boxes.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from . import _linalg
from .errors import (BudgetExceededError, InvalidOperandsError,
                     InvalidScalarError, NotAFaceError, UnboundedPolytopeError)
from .scalars import rat

DEFAULT_BUDGET = 10 ** 6

_BOUNDED_CACHE: dict = {}
_NEWTON_CACHE: dict = {}


def _normalize_ineq(normal, offset):
    n = tuple(normal)
    for v in n:
        if not isinstance(v, int):
            raise InvalidScalarError(f"inequality normals must be integers, got {v!r}")
    return n, rat(offset)


def _primitive(vec):
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g <= 1:
        return tuple(vec)
    return tuple(v // g for v in vec)


class LatticePolytope:
    """Rational polytope (or Newton-type polyhedron) with exact queries.

    Not constructed directly; use :func:`build_polytope` or the factory
    methods.  Immutable after construction.
    """

    __slots__ = ("dim", "inequalities", "vertices", "bounded", "_empty",
                 "_affine_dim", "lattice_aligned")

    def __init__(self, dim, inequalities, vertices, bounded, empty,
                 lattice_aligned=True):
        self.dim = dim
        self.inequalities = tuple(inequalities)
        self.vertices = tuple(tuple(v) for v in vertices)
        self.bounded = bounded
        self._empty = empty
        self._affine_dim = None
        # False for face charts whose affine hull misses the ambient
        # lattice: volumes stay exact, lattice counts are 0 by fiat.
        self.lattice_aligned = lattice_aligned

    @classmethod
    def empty_polytope(cls, dim):
        return cls(dim, [], [], True, True)

    @classmethod
    def point_polytope(cls, dim, integral=True):
        """Zero-dimensional polytope (used by face() at dim 0)."""
        return cls(dim, [], [()] if dim == 0 else [], True, False,
                   lattice_aligned=integral)

    # -- status -----------------------------------------------------------

    @property
    def is_empty(self):
        return self._empty

    @property
    def is_bounded(self):
        return self.bounded

    @property
    def affine_dim(self):
        if self._affine_dim is None:
            if self._empty:
                self._affine_dim = -1
            elif self.dim == 0:
                self._affine_dim = 0
            else:
                self._require_bounded()
                self._affine_dim = _linalg.affine_rank(self.vertices)
        return self._affine_dim

    @property
    def is_full_dimensional(self):
        return not self._empty and self.affine_dim == self.dim

    def _require_bounded(self):
        if not self.bounded:
            raise UnboundedPolytopeError(
                "operation requires a bounded polytope")

    # -- basic queries ----------------------------------------------------

    def contains(self, point) -> bool:
        if self._empty:
            return False
        pt = [rat(x) for x in point]
        return all(sum(c * x for c, x in zip(n, pt)) >= -a
                   for n, a in self.inequalities)

    def support_min(self, normal) -> Fraction:
        """min over the polytope of <u, normal> (bounded, nonempty)."""
        self._require_bounded()
        if self._empty:
            raise InvalidOperandsError("support of an empty polytope")
        if self.dim == 0:
            return Fraction(0)
        return min(sum(c * x for c, x in zip(normal, v)) for v in self.vertices)

    def support_max(self, normal) -> Fraction:
        return -self.support_min([-c for c in normal])

    def scaled(self, m) -> "LatticePolytope":
        """The dilate m*P, via offset scaling."""
        m = rat(m)
        if m <= 0:
            raise InvalidOperandsError("scale must be positive")
        return LatticePolytope(
            self.dim, [(n, a * m) for n, a in self.inequalities],
            [tuple(m * x for x in v) for v in self.vertices],
            self.bounded, self._empty, self.lattice_aligned)

    # -- lattice points ---------------------------------------------------

    def _int_system(self, m):
        """Inequalities as integer data: <u, n> * den >= -num * m."""
        out = []
        for n, a in self.inequalities:
            am = a * m
            out.append((n, am.denominator, -am.numerator))
        return out

    def _box(self, m):
        lo, hi = [], []
        for k in range(self.dim):
            vs = [m * v[k] for v in self.vertices]
            lo.append(math.ceil(min(vs)))
            hi.append(math.floor(max(vs)))
        return lo, hi

    def _lattice_iter(self, m, budget, materialize):
        """Count or list integer points of m * P."""
        self._require_bounded()
        if self._empty or not self.lattice_aligned:
            return [] if materialize else 0
        if self.dim == 0:
            return [()] if materialize else 1
        if not (isinstance(m, int) and m >= 1):
            raise InvalidOperandsError(f"scale must be a positive integer, got {m!r}")
        budget = DEFAULT_BUDGET if budget is None else budget
        lo, hi = self._box(m)
        count_box = 1
        for l, h in zip(lo, hi):
            count_box *= max(0, h - l + 1)
        if count_box > budget:
            raise BudgetExceededError(
                f"candidate box has {count_box} points, budget {budget}")
        system = self._int_system(m)
        d = self.dim
        prefix_ranges = [range(lo[k], hi[k] + 1) for k in range(d - 1)]
        total = 0
        points = [] if materialize else None
        for prefix in itertools.product(*prefix_ranges):
            lo_d, hi_d = lo[d - 1], hi[d - 1]
            ok = True
            for n, den, bound in system:
                partial = den * sum(c * x for c, x in zip(n[:-1], prefix))
                c_last = den * n[d - 1]
                rhs = bound - partial
                if c_last > 0:
                    lo_d = max(lo_d, -(-rhs // c_last))  # ceil division
                elif c_last < 0:
                    hi_d = min(hi_d, rhs // c_last)       # floor for negative
                elif partial < bound:
                    ok = False
                    break
            if not ok or lo_d > hi_d:
                continue
            if materialize:
                for last in range(lo_d, hi_d + 1):
                    points.append(prefix + (last,))
            total += hi_d - lo_d + 1
        return points if materialize else total

    def lattice_point_count(self, m=1, budget=None) -> int:
        return self._lattice_iter(m, budget, materialize=False)

    def lattice_points(self, m=1, budget=None) -> list:
        return self._lattice_iter(m, budget, materialize=True)

    # -- faces ------------------------------------------------------------

    def face(self, normal, offset) -> "LatticePolytope":
        """P intersected with the hyperplane <u, normal> = -offset, written
        in the hyperplane's own affine lattice coordinates.

        When the hyperplane contains no ambient lattice point, the chart
        cannot be lattice-aligned: the face's volume is still exact (it is
        normalized to the hyperplane's direction lattice) but its lattice
        counts are reported as 0.
        """
        self._require_bounded()
        n, a = _normalize_ineq(normal, offset)
        if all(c == 0 for c in n):
            raise InvalidOperandsError("face normal must be nonzero")
        if self._empty:
            return LatticePolytope.empty_polytope(self.dim - 1)
        level = -a
        values = [sum(c * x for c, x in zip(n, v)) for v in self.vertices]
        mn, mx = min(values), max(values)
        if level < mn or level > mx:
            return LatticePolytope.empty_polytope(self.dim - 1)
        if mn < level < mx:
            raise NotAFaceError(
                f"hyperplane <u,{n}> = {level} cuts the interior")
        if self.dim == 1:
            point = next(v for v, val in zip(self.vertices, values) if val == level)
            return LatticePolytope.point_polytope(0, integral=all(
                Fraction(x).denominator == 1 for x in point))
        basis = _linalg.integer_kernel_basis(n)
        origin = _linalg.integer_point_on_hyperplane(n, level)
        aligned = origin is not None
        if origin is None:
            k = next(i for i, c in enumerate(n) if c != 0)
            origin = tuple(level / n[k] if i == k else Fraction(0)
                           for i in range(self.dim))
        new_ineqs = []
        for ni, ai in self.inequalities:
            new_n = tuple(sum(w * c for w, c in zip(b, ni)) for b in basis)
            shift = sum(rat(o) * c for o, c in zip(origin, ni))
            new_a = ai + shift
            if all(c == 0 for c in new_n):
                continue  # holds identically on the affine hull
            new_ineqs.append((new_n, new_a))
        out = build_polytope(self.dim - 1, new_ineqs)
        if not aligned:
            out = LatticePolytope(out.dim, out.inequalities, out.vertices,
                                  out.bounded, out.is_empty,
                                  lattice_aligned=False)
        return out

    def __repr__(self):
        status = "empty" if self._empty else (
            "bounded" if self.bounded else "unbounded")
        return (f"LatticePolytope(dim={self.dim}, {len(self.inequalities)} "
                f"inequalities, {status})")


def _normals_positively_span(dim, normals) -> bool:
    """True iff the recession cone {<u, n_i> >= 0} is the origin."""
    key = (dim, frozenset(normals))
    hit = _BOUNDED_CACHE.get(key)
    if hit is not None:
        return hit
    rows = [list(n) for n in normals]
    bounded = True
    for k in range(dim):
        for sign in (1, -1):
            eq = [[Fraction(1 if i == k else 0) for i in range(dim)]]
            if _linalg.system_feasible(rows, [Fraction(0)] * len(rows),
                                       eq, [Fraction(sign)]):
                bounded = False
                break
        if not bounded:
            break
    _BOUNDED_CACHE[key] = bounded
    return bounded


def build_polytope(dim, inequalities, require_bounded=False) -> LatticePolytope:
    """Polytope from an inequality system; flags empty/unbounded status.

    Vertices are computed by exact enumeration over inequality subsets.
    """
    if not (1 <= dim <= 4):
        raise InvalidOperandsError(f"ambient dimension must be 1..4, got {dim}")
    cleaned = {}
    empty_now = False
    for normal, offset in inequalities:
        n, a = _normalize_ineq(normal, offset)
        if len(n) != dim:
            raise InvalidOperandsError(
                f"normal {n} has wrong length for dimension {dim}")
        if all(c == 0 for c in n):
            if a < 0:
                empty_now = True
            continue
        if n in cleaned:
            cleaned[n] = min(cleaned[n], a)
        else:
            cleaned[n] = a
    ineqs = [(n, cleaned[n]) for n in cleaned]
    if empty_now:
        return LatticePolytope.empty_polytope(dim)
    if not ineqs:
        if require_bounded:
            raise UnboundedPolytopeError("no inequalities: whole space")
        return LatticePolytope(dim, [], [], False, False)

    bounded = _normals_positively_span(dim, [n for n, _ in ineqs])
    if not bounded:
        if require_bounded:
            raise UnboundedPolytopeError("inequality system has nonzero recession cone")
        feasible = _linalg.system_feasible(
            [list(n) for n, _ in ineqs], [-a for _, a in ineqs])
        return LatticePolytope(dim, ineqs, [], False, not feasible)

    vertices = _enumerate_vertices(dim, ineqs)
    return LatticePolytope(dim, ineqs, vertices, True, not vertices)


def _enumerate_vertices(dim, ineqs):
    found = set()
    rows_all = [[Fraction(c) for c in n] for n, _ in ineqs]
    rhs_all = [-a for _, a in ineqs]
    for subset in itertools.combinations(range(len(ineqs)), dim):
        rows = [rows_all[i] for i in subset]
        rhs = [rhs_all[i] for i in subset]
        sol = _linalg.solve_square(rows, rhs)
        if sol is None:
            continue
        if all(sum(c * x for c, x in zip(rows_all[i], sol)) >= rhs_all[i]
               for i in range(len(ineqs))):
            found.add(tuple(sol))
    return sorted(found)


def euclidean_volume(poly: LatticePolytope) -> Fraction:
    """Exact Euclidean volume; 0 for lower-dimensional polytopes."""
    poly._require_bounded()
    if poly.is_empty:
        return Fraction(0)
    if poly.dim == 0:
        return Fraction(1)
    if poly.affine_dim < poly.dim:
        return Fraction(0)
    d = poly.dim
    total = Fraction(0)
    for simplex in _triangulate(poly):
        v0 = simplex[0]
        rows = [[x - y for x, y in zip(v, v0)] for v in simplex[1:]]
        total += abs(_det(rows))
    return total / math.factorial(d)


def normalized_volume(poly: LatticePolytope) -> Fraction:
    """Lattice-normalized volume: dim! times the Euclidean volume."""
    return math.factorial(poly.dim) * euclidean_volume(poly)


def _det(rows):
    n = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def _triangulate(poly: LatticePolytope):
    """Pulling triangulation from the face lattice; returns d-simplices."""
    verts = list(poly.vertices)
    tight = []
    for n, a in poly.inequalities:
        level = -a
        tight.append(frozenset(
            v for v in verts if sum(c * x for c, x in zip(n, v)) == level))

    def recurse(vset, k):
        vlist = sorted(vset)
        if k == 0:
            return [[vlist[0]]]
        v0 = vlist[0]
        seen = set()
        out = []
        for t in tight:
            sub = vset & t
            if not sub or v0 in sub or sub in seen:
                continue
            seen.add(sub)
            if _linalg.affine_rank(sorted(sub)) == k - 1:
                for s in recurse(sub, k - 1):
                    out.append([v0] + s)
        return out

    return recurse(frozenset(verts), poly.dim)


# -- hulls and sums --------------------------------------------------------

_HULL_COST_CAP = 3_000_000


def _hull_of_points(dim, points) -> LatticePolytope:
    pts = sorted(set(tuple(rat(x) for x in p) for p in points))
    if not pts:
        return LatticePolytope.empty_polytope(dim)
    ar = _linalg.affine_rank(pts)
    if dim == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        return build_polytope(1, [((1,), -lo), ((-1,), hi)])
    if ar == 0:
        ineqs = []
        for k in range(dim):
            e = tuple(1 if i == k else 0 for i in range(dim))
            ineqs.append((e, -pts[0][k]))
            ineqs.append((tuple(-c for c in e), pts[0][k]))
        return build_polytope(dim, ineqs)
    if dim == 2:
        return _hull_2d(pts)
    if ar < dim:
        raise InvalidOperandsError(
            "lower-dimensional hulls are only supported in ambient dim <= 2")
    n_pts = len(pts)
    if math.comb(n_pts, dim) * n_pts > _HULL_COST_CAP:
        raise BudgetExceededError(
            f"hull of {n_pts} points in dim {dim} exceeds the facet-search cap")
    ineqs = set()
    for subset in itertools.combinations(pts, dim):
        normal = _hyperplane_normal(subset)
        if normal is None:
            continue
        level = sum(c * x for c, x in zip(normal, subset[0]))
        lo = hi = False
        for p in pts:
            val = sum(c * x for c, x in zip(normal, p))
            if val < level:
                lo = True
            elif val > level:
                hi = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if not hi:
            normal = tuple(-c for c in normal)
            level = -level
        # all points satisfy <p, normal> >= level
        g = _primitive(normal)
        scale = Fraction(g[next(i for i, c in enumerate(normal) if c != 0)],
                         normal[next(i for i, c in enumerate(normal) if c != 0)])
        ineqs.add((g, -(level * scale)))
    return build_polytope(dim, sorted(ineqs))


def _hyperplane_normal(points):
    """Integer normal of the affine span of dim points in dim coords, or
    None when they are affinely dependent."""
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    d = len(p0)
    normal = []
    cols = list(range(d))
    for j in range(d):
        sub = [[row[c] for c in cols if c != j] for row in diffs]
        normal.append((-1) ** j * _det(sub))
    if all(c == 0 for c in normal):
        return None
    den = 1
    for c in normal:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return tuple(int(c * den) for c in normal)


def _hull_2d(pts) -> LatticePolytope:
    pts = sorted(pts)
    if _linalg.affine_rank(pts) == 1:
        p0, p1 = pts[0], pts[-1]
        dx, dy = p1[0] - p0[0], p1[1] - p0[1]
        den = math.lcm(Fraction(dx).denominator, Fraction(dy).denominator)
        g = _primitive((int(dx * den), int(dy * den)))
        n_line = (-g[1], g[0])
        c = n_line[0] * p0[0] + n_line[1] * p0[1]
        lo = min(g[0] * p[0] + g[1] * p[1] for p in pts)
        hi = max(g[0] * p[0] + g[1] * p[1] for p in pts)
        return build_polytope(2, [
            (n_line, -c), (tuple(-v for v in n_line), c),
            (g, -lo), (tuple(-v for v in g), hi)])

    def half(sequence):
        chain = []
        for p in sequence:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    ineqs = []
    for i, p in enumerate(hull):
        q = hull[(i + 1) % len(hull)]
        dx, dy = q[0] - p[0], q[1] - p[1]
        den = math.lcm(Fraction(dx).denominator, Fraction(dy).denominator)
        edge = (int(dx * den), int(dy * den))
        inward = _primitive((-edge[1], edge[0]))
        c = inward[0] * p[0] + inward[1] * p[1]
        ineqs.append((inward, -c))
    return build_polytope(2, ineqs)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_of_lattice_points(poly: LatticePolytope, m=1, budget=None) -> LatticePolytope:
    """Convex hull of the integer points of m * P (the moving polytope)."""
    poly._require_bounded()
    if poly.is_empty:
        return LatticePolytope.empty_polytope(poly.dim)
    scaled = poly.scaled(m)
    if scaled.vertices and all(Fraction(x).denominator == 1
                               for v in scaled.vertices for x in v):
        return scaled  # already a lattice polytope: it is its own hull
    pts = poly.lattice_points(m, budget)
    if not pts:
        return LatticePolytope.empty_polytope(poly.dim)
    return _hull_of_points(poly.dim, pts)


def is_newton_region(poly: LatticePolytope) -> bool:
    """Upward-closed unbounded region whose recession cone is the positive
    orthant (the shape of a monomial-ideal exponent region)."""
    if poly.bounded or poly.is_empty:
        return False
    key = (poly.dim, frozenset(n for n, _ in poly.inequalities))
    hit = _NEWTON_CACHE.get(key)
    if hit is not None:
        return hit
    ok = all(all(c >= 0 for c in n) for n, _ in poly.inequalities)
    if ok:
        rows = [list(n) for n, _ in poly.inequalities]
        for k in range(poly.dim):
            eq = [[Fraction(1 if i == k else 0) for i in range(poly.dim)]]
            if _linalg.system_feasible(rows, [Fraction(0)] * len(rows),
                                       eq, [Fraction(-1)]):
                ok = False
                break
    _NEWTON_CACHE[key] = ok
    return ok


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    """Exact Minkowski sum; bounded polytopes use vertex sums, Newton-type
    regions with identical normal systems merge offsets."""
    if p.dim != q.dim:
        raise InvalidOperandsError("mixed ambient dimensions")
    if p.is_empty or q.is_empty:
        return LatticePolytope.empty_polytope(p.dim)
    if p.bounded and q.bounded:
        sums = [tuple(a + b for a, b in zip(u, v))
                for u in p.vertices for v in q.vertices]
        return _hull_of_points(p.dim, sums)
    if p.bounded != q.bounded:
        raise InvalidOperandsError("cannot sum bounded with unbounded regions")
    if not (is_newton_region(p) and is_newton_region(q)):
        raise InvalidOperandsError("unbounded summands must be Newton regions")
    pn = {n: a for n, a in p.inequalities}
    qn = {n: a for n, a in q.inequalities}
    if set(pn) != set(qn):
        raise InvalidOperandsError(
            "Newton-region sum requires identical inequality normals")
    merged = [(n, pn[n] + qn[n]) for n in sorted(pn)]
    return build_polytope(p.dim, merged)
