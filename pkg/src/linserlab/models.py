"""The variety catalog: model types, named presets, text-file ingestion.

Each model carries exactly what is needed to (a) evaluate closed-form
asymptotic invariants of divisor classes and (b) count sections exactly at
finite level m.  Models are immutable and all queries are pure.

Divisor-class coordinates are always rational vectors in a fixed basis of
the model's Neron-Severi space.  On the blow-up of projective space the
basis is (h, e) with e the exceptional class, so the class written
x*h - y*e has coordinates (x, -y).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from . import _linalg
from .errors import (InvalidModelError, InvalidOperandsError, ConfigError,
                     ModelFormatError, UnsupportedClassError)
from .polyhedra import LatticePolytope, build_polytope
from .scalars import parse_rat, rat


class NSClass:
    """A point of the model's Neron-Severi space in basis coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(rat(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("NSClass is immutable")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other):
        other = as_class(other)
        if len(other) != len(self):
            raise InvalidOperandsError("class length mismatch")
        return NSClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        other = as_class(other)
        if len(other) != len(self):
            raise InvalidOperandsError("class length mismatch")
        return NSClass(a - b for a, b in zip(self.coords, other.coords))

    def __mul__(self, scalar):
        return NSClass(rat(scalar) * c for c in self.coords)

    __rmul__ = __mul__

    def __neg__(self):
        return NSClass(-c for c in self.coords)

    def __eq__(self, other):
        if isinstance(other, NSClass):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def __repr__(self):
        return f"NSClass({', '.join(str(c) for c in self.coords)})"


def as_class(x) -> NSClass:
    return x if isinstance(x, NSClass) else NSClass(x)


class ToricModel:
    """Complete toric data: primitive rays, a divisor basis of N^1, and the
    principal relations a_i -> a_i + <u, v_i>."""

    def __init__(self, dim, rays, basis_divisors, ample=None, name="toric"):
        self.dim = dim
        self.rays = tuple(tuple(int(c) for c in r) for r in rays)
        self.name = name
        n = len(self.rays)
        if not (1 <= dim <= 4):
            raise InvalidModelError(f"toric dimension must be 1..4, got {dim}")
        for r in self.rays:
            if len(r) != dim:
                raise InvalidModelError(f"ray {r} has wrong dimension")
            if all(c == 0 for c in r):
                raise InvalidModelError("zero ray")
            g = 0
            for c in r:
                g = math.gcd(g, c)
            if g != 1:
                raise InvalidModelError(f"ray {r} is not primitive")
        if len(set(self.rays)) != n:
            raise InvalidModelError("duplicate rays")
        if _linalg.rank([[Fraction(c) for c in r] for r in self.rays]) != dim:
            raise InvalidModelError("rays do not span the ambient space")
        from .polyhedra import _normals_positively_span
        if not _normals_positively_span(dim, self.rays):
            raise InvalidModelError(
                "rays do not positively span: divisor polytopes would be unbounded")
        self.rho = n - dim
        basis = [tuple(int(c) for c in b) for b in basis_divisors]
        if len(basis) != self.rho or any(len(b) != n for b in basis):
            raise InvalidModelError(
                f"need {self.rho} basis divisors with {n} ray coefficients")
        self.basis_divisors = tuple(basis)
        # columns: basis divisors then principal generators (<e_j, v_i>)_i
        cols = [list(b) for b in basis]
        for j in range(dim):
            cols.append([r[j] for r in self.rays])
        mat = [[Fraction(cols[c][i]) for c in range(n)] for i in range(n)]
        if _linalg.rank(mat) != n:
            raise InvalidModelError(
                "basis divisors do not descend to a basis of N^1")
        self._quotient_matrix = mat
        self.ample = as_class(ample) if ample is not None else None
        if self.ample is not None and len(self.ample) != self.rho:
            raise InvalidModelError("ample class has wrong length")
        self._poly_cache: dict = {}

    # -- divisor/class algebra -------------------------------------------

    def principal_divisor(self, u):
        u = [rat(c) for c in u]
        return tuple(sum(ui * vi for ui, vi in zip(u, r)) for r in self.rays)

    def class_of_divisor(self, divisor) -> NSClass:
        a = [rat(c) for c in divisor]
        if len(a) != len(self.rays):
            raise InvalidOperandsError("divisor has wrong number of ray coefficients")
        sol = _linalg.solve_square(self._quotient_matrix, a)
        return NSClass(sol[:self.rho])

    def divisor_of_class(self, xi) -> tuple:
        xi = as_class(xi)
        if len(xi) != self.rho:
            raise InvalidOperandsError(
                f"class has {len(xi)} coordinates, expected {self.rho}")
        n = len(self.rays)
        return tuple(sum(c * b[i] for c, b in zip(xi.coords, self.basis_divisors))
                     for i in range(n))

    # -- polytopes ---------------------------------------------------------

    def toric_polytope(self, divisor) -> LatticePolytope:
        a = [rat(c) for c in divisor]
        return build_polytope(self.dim, list(zip(self.rays, a)))

    def polytope_of_class(self, xi) -> LatticePolytope:
        xi = as_class(xi)
        hit = self._poly_cache.get(xi.coords)
        if hit is None:
            hit = self.toric_polytope(self.divisor_of_class(xi))
            if len(self._poly_cache) < 20000:
                self._poly_cache[xi.coords] = hit
        return hit

    # -- positivity --------------------------------------------------------

    def nef_test(self, xi) -> bool:
        """Nef iff the polytope is nonempty and its support function
        reproduces every divisor offset (no asymptotic fixed part)."""
        div = self.divisor_of_class(as_class(xi))
        poly = self.polytope_of_class(xi)
        if poly.is_empty:
            return False
        return all(poly.support_min(rayv) == -a
                   for rayv, a in zip(self.rays, div))

    def psef_test(self, xi) -> bool:
        return not self.polytope_of_class(xi).is_empty

    def big_test(self, xi) -> bool:
        return self.polytope_of_class(xi).is_full_dimensional

    def __repr__(self):
        return f"ToricModel({self.name}, dim={self.dim}, rho={self.rho})"


class SurfaceModel:
    """Projective surface described by its intersection form, the finitely
    many relevant negative curves, and an ample reference class."""

    def __init__(self, gram, negative_curves, ample, name="surface"):
        self.name = name
        self.dim = 2
        rows = [tuple(rat(v) for v in row) for row in gram]
        self.rho = len(rows)
        if any(len(r) != self.rho for r in rows):
            raise InvalidModelError("gram matrix is not square")
        for i in range(self.rho):
            for j in range(self.rho):
                if rows[i][j] != rows[j][i]:
                    raise InvalidModelError("gram matrix is not symmetric")
        self.gram = tuple(rows)
        pos, neg, zero = _linalg.symmetric_signature(rows)
        if (pos, neg, zero) != (1, self.rho - 1, 0):
            raise InvalidModelError(
                f"intersection form must have signature (1,{self.rho - 1}), "
                f"got ({pos},{neg}) with {zero} null directions")
        self.negative_curves = tuple(as_class(c) for c in negative_curves)
        self.ample = as_class(ample)
        if len(self.ample) != self.rho:
            raise InvalidModelError("ample class has wrong length")
        if self.q(self.ample) <= 0:
            raise InvalidModelError("ample reference must have positive square")
        for c in self.negative_curves:
            if len(c) != self.rho:
                raise InvalidModelError("curve class has wrong length")
            if self.q(c) >= 0:
                raise InvalidModelError(
                    f"listed curve {c} has non-negative self-intersection")
            if self.pair(self.ample, c) <= 0:
                raise InvalidModelError(
                    "ample reference must pair positively with every curve")

    def pair(self, x, y) -> Fraction:
        x, y = as_class(x), as_class(y)
        return sum(x[i] * self.gram[i][j] * y[j]
                   for i in range(self.rho) for j in range(self.rho))

    def q(self, x) -> Fraction:
        return self.pair(x, x)

    def nef_test(self, xi) -> bool:
        xi = as_class(xi)
        if self.q(xi) < 0 or self.pair(xi, self.ample) < 0:
            return False
        return all(self.pair(xi, c) >= 0 for c in self.negative_curves)

    def zariski_parts(self, xi):
        """Iterative decomposition xi = P + N; returns (P, support index
        list, coefficient list) or None when xi is not pseudoeffective."""
        xi = as_class(xi)
        support: list[int] = []
        current = xi
        while True:
            bad = next((j for j, c in enumerate(self.negative_curves)
                        if j not in support and self.pair(current, c) < 0), None)
            if bad is None:
                break
            support.append(bad)
            support.sort()
            rows = [[self.pair(self.negative_curves[i], self.negative_curves[j])
                     for j in support] for i in support]
            rhs = [self.pair(xi, self.negative_curves[i]) for i in support]
            if not _linalg.is_negative_definite(rows):
                return None
            sol = _linalg.solve_square(rows, rhs)
            current = xi - sum((t * self.negative_curves[i] for t, i in
                                zip(sol, support)), NSClass([0] * self.rho))
        coeffs = []
        if support:
            rows = [[self.pair(self.negative_curves[i], self.negative_curves[j])
                     for j in support] for i in support]
            rhs = [self.pair(xi, self.negative_curves[i]) for i in support]
            coeffs = _linalg.solve_square(rows, rhs)
        kept = [(i, t) for i, t in zip(support, coeffs) if t != 0]
        if any(t < 0 for _, t in kept):
            return None
        if not self.nef_test(current):
            return None
        return current, [i for i, _ in kept], [t for _, t in kept]

    def psef_test(self, xi) -> bool:
        return self.zariski_parts(xi) is not None

    def big_test(self, xi) -> bool:
        parts = self.zariski_parts(xi)
        return parts is not None and self.q(parts[0]) > 0

    def __repr__(self):
        return f"SurfaceModel({self.name}, rho={self.rho})"


class CutkoskyModel:
    """Projective bundle over an abelian surface with Picard number 3.

    ``gram`` is the intersection form q on the base surface, where the nef
    and pseudoeffective cones coincide with the circular cone {q >= 0,
    pairing with the ample class >= 0}.  ``a`` is ample, ``b`` is not nef.
    Total-space classes are written (s, c1, c2, c3): s times the tautological
    class plus the pullback of c; plain length-3 input means s = 1.
    """

    def __init__(self, gram, a, b, name="cutkosky"):
        self.name = name
        self.dim = 3
        self.rho = 4
        rows = [tuple(int(v) for v in row) for row in gram]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise InvalidModelError("cutkosky gram must be 3x3")
        for i in range(3):
            for j in range(3):
                if rows[i][j] != rows[j][i]:
                    raise InvalidModelError("gram matrix is not symmetric")
        self.gram = rows
        pos, neg, zero = _linalg.symmetric_signature(rows)
        if (pos, neg, zero) != (1, 2, 0):
            raise InvalidModelError(
                f"base intersection form must have signature (1,2), got ({pos},{neg})")
        self.a = as_class(a)
        self.b = as_class(b)
        if len(self.a) != 3 or len(self.b) != 3:
            raise InvalidModelError("a and b must be classes on the base (length 3)")
        if self.q(self.a) <= 0:
            raise InvalidModelError("a must be ample: q(a) > 0 required")
        if self.base_nef(self.b):
            raise InvalidModelError("b must not be nef")

    def pair(self, x, y) -> Fraction:
        x, y = as_class(x), as_class(y)
        return sum(x[i] * self.gram[i][j] * y[j]
                   for i in range(3) for j in range(3))

    def q(self, x) -> Fraction:
        return self.pair(x, x)

    def base_nef(self, xi) -> bool:
        xi = as_class(xi)
        return self.q(xi) >= 0 and self.pair(xi, self.a) >= 0

    def base_ample(self, xi) -> bool:
        xi = as_class(xi)
        return self.q(xi) > 0 and self.pair(xi, self.a) > 0

    def split_class(self, xi):
        """Normalize a class to (s, twist) with s the tautological multiple."""
        xi = as_class(xi)
        if len(xi) == 3:
            return Fraction(1), xi
        if len(xi) == 4:
            return xi[0], NSClass(xi.coords[1:])
        raise UnsupportedClassError(
            f"cutkosky classes have 3 or 4 coordinates, got {len(xi)}")

    def nef_test(self, xi) -> bool:
        """Nef test on the base surface for length-3 classes."""
        xi = as_class(xi)
        if len(xi) == 3:
            return self.base_nef(xi)
        raise UnsupportedClassError(
            "nef test on the total space is not part of the supported chart")

    def psef_test(self, xi) -> bool:
        return self.nef_test(xi)

    def __repr__(self):
        return f"CutkoskyModel({self.name})"


class SplitRuledModel:
    """P(O(d1 p) + O(d2 p)) over an elliptic curve; classes are (x, y) in
    the basis (tautological class, fibre class)."""

    def __init__(self, d1, d2, name="split_ruled"):
        if not (isinstance(d1, int) and isinstance(d2, int)):
            raise InvalidModelError("summand degrees must be integers")
        self.summand_degrees = (d1, d2)
        self.d_low, self.d_high = min(d1, d2), max(d1, d2)
        self.dim = 2
        self.rho = 2
        self.name = name

    def __repr__(self):
        return f"SplitRuledModel{self.summand_degrees}"


class BlowupPdModel:
    """Blow-up of d-dimensional projective space at a point, carrying both
    the fan realization and the closed-form invariant tables.

    Classes use the basis (h, e); the class x*h - y*e has coords (x, -y).
    """

    def __init__(self, d, name=None):
        if not (2 <= d <= 4):
            raise InvalidModelError(f"blow-up dimension must be 2..4, got {d}")
        self.dim = d
        self.rho = 2
        self.name = name or f"blowup_pd({d})"
        rays = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        rays.append(tuple(-1 for _ in range(d)))
        rays.append(tuple(1 for _ in range(d)))
        n = len(rays)
        basis = [tuple(1 if i == d else 0 for i in range(n)),      # H
                 tuple(1 if i == d + 1 else 0 for i in range(n))]  # E
        self.toric = ToricModel(d, rays, basis, ample=(2, -1),
                                name=self.name + ":toric")
        self.hyperplane_ray = d
        self.exceptional_ray = d + 1
        self.ample = NSClass((2, -1))

    def xy(self, xi):
        """Translate basis coordinates (c_h, c_e) to the chamber chart
        (x, y) with xi = x*h - y*e."""
        xi = as_class(xi)
        if len(xi) != 2:
            raise UnsupportedClassError("blow-up classes have 2 coordinates")
        return xi[0], -xi[1]

    def nef_test(self, xi) -> bool:
        x, y = self.xy(xi)
        return 0 <= y <= x

    def psef_test(self, xi) -> bool:
        x, y = self.xy(xi)
        return x >= 0 and y <= x

    def big_test(self, xi) -> bool:
        x, y = self.xy(xi)
        return x > 0 and y < x

    def __repr__(self):
        return f"BlowupPdModel(d={self.dim})"


Model = ToricModel | SurfaceModel | CutkoskyModel | SplitRuledModel | BlowupPdModel


def nef_test(model, xi) -> bool:
    return model.nef_test(as_class(xi))


def psef_test(model, xi) -> bool:
    return model.psef_test(as_class(xi))


# -- presets ----------------------------------------------------------------

_GOLDEN_GRAM = ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def projective_space(d):
    rays = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    rays.append(tuple(-1 for _ in range(d)))
    basis = [tuple(1 if i == d else 0 for i in range(d + 1))]
    return ToricModel(d, rays, basis, ample=(1,), name=f"projective_space({d})")


def blowup_pd(d):
    return BlowupPdModel(d)


def hirzebruch(n):
    if not isinstance(n, int) or n < 0:
        raise InvalidModelError("hirzebruch parameter must be a nonnegative integer")
    rays = [(1, 0), (0, 1), (-1, n), (0, -1)]
    basis = [(1, 0, 0, 0), (0, 1, 0, 0)]  # (fibre, negative section)
    return ToricModel(2, rays, basis, ample=(n + 1, 1), name=f"hirzebruch({n})")


def cutkosky(a, b):
    return CutkoskyModel(_GOLDEN_GRAM, a, b, name="cutkosky")


def cutkosky_golden():
    return CutkoskyModel(_GOLDEN_GRAM, (1, 1, 0), (1, 2, -1), name="cutkosky_golden")


def split_ruled(a):
    if not isinstance(a, int) or a <= 1:
        raise InvalidModelError("split_ruled parameter must be an integer > 1")
    return SplitRuledModel(1 - a, 1, name=f"split_ruled({a})")


def blowup_surface():
    """Bl_p P^2 presented as a SurfaceModel (gram diag(1,-1), curve e)."""
    return SurfaceModel(((1, 0), (0, -1)), [(0, 1)], (2, -1),
                        name="blowup_surface")


def surface(gram, curves, ample):
    return SurfaceModel(gram, curves, ample)


_PRESET_ALIASES = {
    "blowup2": "blowup_pd(2)",
    "blowup3": "blowup_pd(3)",
    "blowup4": "blowup_pd(4)",
    "p2": "projective_space(2)",
    "p3": "projective_space(3)",
}

_PRESETS = {
    "projective_space": projective_space,
    "blowup_pd": blowup_pd,
    "hirzebruch": hirzebruch,
    "cutkosky_golden": cutkosky_golden,
    "split_ruled": split_ruled,
    "blowup_surface": blowup_surface,
}


def preset(name, *args):
    """Named model factory; see _PRESETS for the catalog."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    return _PRESETS[name](*args)


def resolve_model(spec: str):
    """Resolve a CLI --model value: a file path or a preset name like
    'blowup_pd(3)' / 'blowup3' / 'cutkosky_golden'."""
    import os
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return parse_model_text(fh.read())
    name = _PRESET_ALIASES.get(spec, spec)
    m = re.fullmatch(r"([a-z_0-9]+)\s*(?:\(\s*([-0-9,\s]*)\s*\))?", name.strip())
    if not m:
        raise ConfigError(f"cannot parse model spec {spec!r}")
    base, argstr = m.group(1), m.group(2)
    args = []
    if argstr:
        args = [int(tok) for tok in argstr.replace(" ", "").split(",") if tok]
    if base not in _PRESETS:
        raise ConfigError(f"unknown model {spec!r} (not a file, not a preset)")
    try:
        return _PRESETS[base](*args)
    except TypeError as exc:
        raise ConfigError(f"bad arguments for preset {base}: {exc}") from None


# -- model file format -------------------------------------------------------

def parse_model_text(text: str):
    """Parse the line-oriented model format (one model per file).

    Kinds: toric (dim/ray/basis/ample), surface (gram/curve/ample),
    cutkosky (gram/a/b), split_ruled d1 d2.  '#' starts a comment.
    Raises ModelFormatError with a 1-based line number on any problem.
    """
    lines = text.splitlines()
    kind = None
    kind_line = 0
    params: dict = {}
    split_args = None
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        key = toks[0]
        if key == "model":
            if kind is not None:
                raise ModelFormatError(num, "multiple 'model' sections; one model per file")
            if len(toks) < 2:
                raise ModelFormatError(num, "missing model kind")
            kind = toks[1]
            kind_line = num
            if kind not in ("toric", "surface", "cutkosky", "split_ruled"):
                raise ModelFormatError(num, f"unknown model kind {kind!r}")
            if kind == "split_ruled":
                if len(toks) != 4:
                    raise ModelFormatError(num, "split_ruled needs two summand degrees")
                split_args = _ints(toks[2:4], num)
            continue
        if kind is None:
            raise ModelFormatError(num, "content before 'model' line")
        if key == "dim":
            if kind != "toric" or len(toks) != 2:
                raise ModelFormatError(num, "dim takes one integer and only for toric")
            params["dim"] = _ints(toks[1:], num)[0]
        elif key == "ray":
            if kind != "toric":
                raise ModelFormatError(num, "ray lines only appear in toric models")
            params.setdefault("rays", []).append(tuple(_ints(toks[1:], num)))
        elif key == "basis":
            if kind != "toric":
                raise ModelFormatError(num, "basis lines only appear in toric models")
            params["basis"] = _ints(toks[1:], num)
        elif key == "gram":
            if kind not in ("surface", "cutkosky"):
                raise ModelFormatError(num, "gram lines only appear in surface/cutkosky models")
            if len(toks) != 4:
                raise ModelFormatError(num, "gram takes: row col value")
            r, c = _ints(toks[1:3], num)
            params.setdefault("gram", {})[(r, c)] = _rat(toks[3], num)
        elif key == "curve":
            if kind != "surface":
                raise ModelFormatError(num, "curve lines only appear in surface models")
            params.setdefault("curves", []).append(tuple(_rats(toks[1:], num)))
        elif key == "ample":
            params["ample"] = tuple(_rats(toks[1:], num))
        elif key in ("a", "b"):
            if kind != "cutkosky":
                raise ModelFormatError(num, f"{key!r} lines only appear in cutkosky models")
            params[key] = tuple(_rats(toks[1:], num))
        else:
            raise ModelFormatError(num, f"unknown directive {key!r}")

    if kind is None:
        raise ModelFormatError(max(1, len(lines)), "no 'model' line found")
    end = max(1, len(lines))
    try:
        if kind == "toric":
            if "dim" not in params:
                raise ModelFormatError(end, "toric model needs a dim line")
            rays = params.get("rays", [])
            if not rays:
                raise ModelFormatError(end, "toric model needs ray lines")
            if "basis" not in params:
                raise ModelFormatError(end, "toric model needs a basis line")
            n = len(rays)
            basis = []
            for idx in params["basis"]:
                if not (0 <= idx < n):
                    raise ModelFormatError(end, f"basis ray index {idx} out of range")
                basis.append(tuple(1 if i == idx else 0 for i in range(n)))
            return ToricModel(params["dim"], rays, basis,
                              ample=params.get("ample"), name="toric-file")
        if kind == "surface":
            gram = _gram_from_entries(params.get("gram", {}), end)
            if "curves" not in params:
                raise ModelFormatError(end, "surface model needs curve lines")
            if "ample" not in params:
                raise ModelFormatError(end, "surface model needs an ample line")
            return SurfaceModel(gram, params["curves"], params["ample"],
                                name="surface-file")
        if kind == "cutkosky":
            gram = _gram_from_entries(params.get("gram", {}), end, size=3)
            if "a" not in params or "b" not in params:
                raise ModelFormatError(end, "cutkosky model needs a and b lines")
            return CutkoskyModel([[int(v) for v in row] for row in gram],
                                 params["a"], params["b"], name="cutkosky-file")
        return SplitRuledModel(split_args[0], split_args[1], name="split_ruled-file")
    except InvalidModelError as exc:
        raise ModelFormatError(kind_line, f"invalid model: {exc}") from exc


def _gram_from_entries(entries, line, size=None):
    if not entries:
        raise ModelFormatError(line, "missing gram entries")
    n = size or (max(max(r, c) for r, c in entries) + 1)
    gram = [[None] * n for _ in range(n)]
    for (r, c), v in entries.items():
        if not (0 <= r < n and 0 <= c < n):
            raise ModelFormatError(line, f"gram index ({r},{c}) out of range")
        gram[r][c] = v
        if gram[c][r] is None:
            gram[c][r] = v
    for r in range(n):
        for c in range(n):
            if gram[r][c] is None:
                raise ModelFormatError(line, f"gram entry ({r},{c}) missing")
    return gram


def _ints(tokens, line):
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise ModelFormatError(line, f"expected integer, got {t!r}") from None
    return out


def _rat(token, line):
    try:
        return parse_rat(token)
    except Exception:
        raise ModelFormatError(line, f"expected rational, got {token!r}") from None


def _rats(tokens, line):
    return [_rat(t, line) for t in tokens]
