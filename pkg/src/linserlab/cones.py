"""Polyhedral cones with exact membership, over the rationals or a real
quadratic field.

Generators may have Fraction or QuadExt coordinates; all tests reduce to
sign decisions in the corresponding ordered field, so boundary cases (for
instance a ray hitting the cone wall at a quadratic irrationality) are
decided exactly.
"""

from __future__ import annotations

from fractions import Fraction

from . import _linalg
from .errors import InvalidModelError, InvalidOperandsError
from .scalars import QuadExt, rat


def _coerce_coord(x):
    if isinstance(x, QuadExt):
        return x
    return rat(x)


def _kernel_vector(rows, dim):
    """One nonzero kernel vector of a (dim-1) x dim matrix of rank dim-1."""
    a = [list(r) for r in rows]
    m = len(a)
    pivots = {}
    r = 0
    for col in range(dim):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col]
        a[r] = [v / inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots[col] = r
        r += 1
    free = next((c for c in range(dim) if c not in pivots), None)
    if free is None:
        return None
    vec = [Fraction(0)] * dim
    vec[free] = Fraction(1)
    for col, row in pivots.items():
        vec[col] = -a[row][free]
    return vec


class PolyCone:
    """Cone spanned by finitely many generators, with exact membership and
    a strict-interior variant."""

    def __init__(self, dim, generators, provenance=None):
        self.dim = dim
        gens = []
        for g in generators:
            g = tuple(_coerce_coord(x) for x in g)
            if len(g) != dim:
                raise InvalidOperandsError(f"generator {g} has wrong length")
            if all(x == 0 for x in g):
                raise InvalidModelError("cone generators must be nonzero")
            gens.append(g)
        self.generators = tuple(gens)
        self.provenance = provenance
        self._facets = None

    def contains(self, v) -> bool:
        v = [_coerce_coord(x) for x in v]
        if len(v) != self.dim:
            raise InvalidOperandsError("vector has wrong length")
        if not self.generators:
            return all(x == 0 for x in v)
        return _linalg.cone_member(self.generators, v)

    def is_full_dimensional(self) -> bool:
        return bool(self.generators) and \
            _linalg.rank([list(g) for g in self.generators]) == self.dim

    def facet_normals(self):
        """Inward normals of the facets of a full-dimensional cone."""
        if self._facets is not None:
            return self._facets
        if not self.is_full_dimensional():
            raise InvalidOperandsError("facet normals need a full-dimensional cone")
        import itertools
        d = self.dim
        found = []
        if d == 1:
            pos = any(g[0] > 0 for g in self.generators)
            neg = any(g[0] < 0 for g in self.generators)
            if pos and not neg:
                found = [(Fraction(1),)]
            elif neg and not pos:
                found = [(Fraction(-1),)]
            else:
                found = []  # the whole line
        else:
            seen = set()
            for subset in itertools.combinations(self.generators, d - 1):
                rows = [list(g) for g in subset]
                if _linalg.rank(rows) != d - 1:
                    continue
                normal = _kernel_vector(rows, d)
                if normal is None:
                    continue
                vals = [sum(n * x for n, x in zip(normal, g))
                        for g in self.generators]
                if all(v >= 0 for v in vals):
                    pass
                elif all(v <= 0 for v in vals):
                    normal = [-n for n in normal]
                else:
                    continue
                key = _direction_key(normal)
                if key not in seen:
                    seen.add(key)
                    found.append(tuple(normal))
        self._facets = found
        return found

    def strictly_contains(self, v) -> bool:
        """Membership in the topological interior (ambient space)."""
        v = [_coerce_coord(x) for x in v]
        if not self.is_full_dimensional():
            return False
        if not self.contains(v):
            return False
        return all(sum(n * x for n, x in zip(f, v)) > 0
                   for f in self.facet_normals())

    def __repr__(self):
        return f"PolyCone(dim={self.dim}, {len(self.generators)} generators)"


def _direction_key(vec):
    """Canonical key identifying a vector up to positive scaling."""
    pivot = next((x for x in vec if x != 0), None)
    if pivot is None:
        return tuple(vec)
    scale = pivot if pivot > 0 else -pivot
    return tuple(x / scale for x in vec)


def cone_contains(cone: PolyCone, v, strict=False) -> bool:
    """Exact cone membership; strict=True tests the interior."""
    return cone.strictly_contains(v) if strict else cone.contains(v)
