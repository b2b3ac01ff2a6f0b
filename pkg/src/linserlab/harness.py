"""Cross-cutting verification of the structural theorems on every model.

Each check is deterministic given (model, seed), collects violations as
data, and renders to plain text or machine-readable records.  Inequalities
involving d-th roots are certified: both sides are bracketed by directed
rational bounds before comparison, so a pass is a proof up to the stated
tolerance, not a floating-point accident.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ._linalg import affine_rank
from .engine import volume
from .errors import LabError, UnsupportedModelError
from .models import (BlowupPdModel, CutkoskyModel, NSClass, SplitRuledModel,
                     SurfaceModel, ToricModel, as_class)
from .scalars import QuadExt, RadicalSum, int_nth_root, nth_root_bounds, rat


@dataclass(frozen=True)
class PropertyReport:
    property_name: str
    model_name: str
    samples: int
    violations: tuple
    worst_margin: object = None
    detail: str = ""
    records: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_text(self) -> str:
        status = "pass" if self.passed else "FAIL"
        head = (f"{self.property_name} on {self.model_name}: {status} "
                f"({self.samples} samples, {len(self.violations)} violations)")
        lines = [head]
        if self.detail:
            lines.append(f"  {self.detail}")
        if self.worst_margin is not None:
            lines.append(f"  worst margin: {self.worst_margin}")
        for v in self.violations[:10]:
            lines.append(f"  violation: {v}")
        return "\n".join(lines)

    def to_records(self):
        return [{"property": self.property_name, "model": self.model_name,
                 **r} for r in self.records]


def _model_name(model):
    return getattr(model, "name", type(model).__name__)


# -- samplers -----------------------------------------------------------------

def _sample_fraction(rng, lo, hi):
    den = rng.choice((1, 2, 4, 8))
    return Fraction(rng.randint(lo * den, hi * den), den)


def sample_big_class(model, rng, bound=4):
    """Rejection sampler for big classes; deterministic given the rng."""
    for _ in range(10000):
        if isinstance(model, (BlowupPdModel, SurfaceModel)):
            xi = NSClass([_sample_fraction(rng, 0, bound),
                          _sample_fraction(rng, -bound, bound)])
            if model.big_test(xi):
                return xi
        elif isinstance(model, ToricModel):
            xi = NSClass([_sample_fraction(rng, -bound, bound)
                          for _ in range(model.rho)])
            if model.big_test(xi):
                return xi
        elif isinstance(model, CutkoskyModel):
            c = NSClass([_sample_fraction(rng, -bound, bound) for _ in range(3)])
            if model.base_ample(model.a + c):
                s = Fraction(rng.randint(1, 3))
                return NSClass((s,) + tuple(s * x for x in c.coords))
        elif isinstance(model, SplitRuledModel):
            x = _sample_fraction(rng, 1, bound)
            y = _sample_fraction(rng, -bound, bound)
            if model.d_high * x + y > 0:
                return NSClass([x, y])
        else:
            raise UnsupportedModelError(f"no sampler for {type(model).__name__}")
    raise LabError("rejection sampler failed to find a big class")


def sample_psef_class(model: SurfaceModel, rng, bound=6):
    for _ in range(10000):
        xi = NSClass([_sample_fraction(rng, -bound, bound)
                      for _ in range(model.rho)])
        if model.psef_test(xi):
            return xi
    raise LabError("rejection sampler failed to find a psef class")


# -- homogeneity ----------------------------------------------------------------

def check_homogeneity(model, scalars=(2, 3, Fraction(1, 2), Fraction(5, 3)),
                      n=50, seed=0) -> PropertyReport:
    """vol(a xi) = a^d vol(xi), exactly, on closed-form paths."""
    rng = random.Random(seed)
    d = model.dim
    violations = []
    records = []
    for _ in range(n):
        xi = sample_big_class(model, rng)
        base = volume(model, xi).value
        for a in scalars:
            a = rat(a)
            scaled = volume(model, a * xi).value
            expected = a ** d * base
            ok = scaled == expected
            records.append({"class": str(xi), "scalar": str(a), "ok": ok})
            if not ok:
                violations.append((str(xi), str(a), str(scaled), str(expected)))
    return PropertyReport("homogeneity", _model_name(model), n,
                          tuple(violations), None,
                          f"scalars {tuple(str(rat(s)) for s in scalars)}",
                          tuple(records))


# -- log-concavity ----------------------------------------------------------------

def _rational_dth_root(x: Fraction, d: int):
    if x < 0:
        return None
    rn = int_nth_root(x.numerator, d)
    rd = int_nth_root(x.denominator, d)
    if rn ** d == x.numerator and rd ** d == x.denominator:
        return Fraction(rn, rd)
    return None


def _exact_equality_case(vsum, va, vb, d) -> bool:
    """Recognize vb = rho^d va and vsum = (1+rho)^d va with rational rho,
    proving the concavity margin is exactly zero."""
    from .errors import InvalidScalarError
    try:
        if isinstance(va, QuadExt) or isinstance(vb, QuadExt):
            qa = va if isinstance(va, QuadExt) else QuadExt(rat(va))
            qb = vb if isinstance(vb, QuadExt) else QuadExt(rat(vb))
            ratio = qb / qa
            if not ratio.is_rational:
                return False
            ratio = ratio.rational_value()
        else:
            ratio = rat(vb) / rat(va)
    except (ZeroDivisionError, InvalidScalarError):
        return False
    rho = _rational_dth_root(ratio, d)
    if rho is None:
        return False
    return vsum == (1 + rho) ** d * va


def check_log_concavity(model, n=1000, seed=0, tol=Fraction(1, 10 ** 9)) -> PropertyReport:
    """vol(xi + xi')^(1/d) >= vol(xi)^(1/d) + vol(xi')^(1/d), certified.

    d-th roots are bracketed with directed rounding; proportional pairs are
    recognized and their margin recorded as exactly zero.
    """
    rng = random.Random(seed)
    d = model.dim
    violations = []
    worst = None
    exact_zero = 0
    for k in range(n):
        xi = sample_big_class(model, rng)
        if k % 5 == 0:
            ratio = rat(rng.choice((1, 2, Fraction(1, 2), 3)))
            eta = ratio * xi  # exercise the equality case
        else:
            eta = sample_big_class(model, rng)
        vsum = volume(model, xi + eta).value
        va = volume(model, xi).value
        vb = volume(model, eta).value
        if _exact_equality_case(vsum, va, vb, d):
            exact_zero += 1
            continue
        lo_s, hi_s = nth_root_bounds(vsum, d)
        lo_a, hi_a = nth_root_bounds(va, d)
        lo_b, hi_b = nth_root_bounds(vb, d)
        margin_lo = lo_s - hi_a - hi_b
        scale = max(Fraction(1), hi_s)
        if margin_lo < -tol * scale:
            violations.append((str(xi), str(eta), float(margin_lo)))
        if worst is None or margin_lo < worst:
            worst = margin_lo
    return PropertyReport("log_concavity", _model_name(model), n,
                          tuple(violations), float(worst) if worst is not None else 0.0,
                          f"certified with relative tolerance {tol}; "
                          f"{exact_zero} proportional pairs at margin exactly 0")


# -- numerical invariance -----------------------------------------------------------

def check_numerical_invariance(model, n=50, seed=0, max_level=12) -> PropertyReport:
    """Divisor lifts differing by a principal shift give identical
    polytopal invariants: volume, section counts, ray orders (exact)."""
    toric = model.toric if isinstance(model, BlowupPdModel) else model
    if not isinstance(toric, ToricModel):
        raise UnsupportedModelError("numerical invariance check needs a toric model")
    rng = random.Random(seed)
    from .polyhedra import normalized_volume
    violations = []
    for _ in range(n):
        coeffs = [rng.randint(-3, 5) for _ in range(len(toric.rays))]
        u = [rng.randint(-4, 4) for _ in range(toric.dim)]
        shift = toric.principal_divisor(u)
        lifted = [c + s for c, s in zip(coeffs, shift)]
        p0 = toric.toric_polytope(coeffs)
        p1 = toric.toric_polytope(lifted)
        same_class = toric.class_of_divisor(coeffs) == toric.class_of_divisor(lifted)
        vol_eq = normalized_volume(p0) == normalized_volume(p1)
        count_eq = True
        if not p0.is_empty and not p1.is_empty:
            for m in (1, max_level):
                if p0.lattice_point_count(m) != p1.lattice_point_count(m):
                    count_eq = False
        else:
            count_eq = p0.is_empty == p1.is_empty
        ord_eq = True
        if p0.is_full_dimensional:
            for i, ray in enumerate(toric.rays):
                o0 = p0.support_min(ray) + coeffs[i]
                o1 = p1.support_min(ray) + lifted[i]
                if o0 != o1:
                    ord_eq = False
        if not (same_class and vol_eq and count_eq and ord_eq):
            violations.append((tuple(coeffs), tuple(u), same_class, vol_eq,
                               count_eq, ord_eq))
    return PropertyReport("numerical_invariance", _model_name(model), n,
                          tuple(violations), None,
                          "volume, counts and ray orders under principal shifts")


# -- Lipschitz estimate ---------------------------------------------------------------

def _scalar_bounds(v):
    if isinstance(v, QuadExt):
        return v.bounds(30)
    v = rat(v)
    return v, v


def _sup_norm(xi):
    return max(abs(c) for c in as_class(xi).coords)


def check_lipschitz(model, origin, dir1, dir2, steps=9, span=Fraction(2)) -> PropertyReport:
    """Grid estimate of the volume's Lipschitz constant normalized by
    max(|xi|,|xi'|)^(d-1) |xi - xi'|; two refinement levels must agree
    within 20 percent."""
    origin = as_class(origin)
    dir1 = as_class(dir1)
    dir2 = as_class(dir2)
    d = model.dim

    def estimate(level_steps):
        step = span / level_steps
        grid = {}
        for i in range(level_steps + 1):
            for j in range(level_steps + 1):
                xi = origin + (i * step) * dir1 + (j * step) * dir2
                try:
                    grid[(i, j)] = (xi, volume(model, xi).value)
                except LabError:
                    grid[(i, j)] = (xi, None)
        best = Fraction(0)
        for (i, j), (xi, v) in grid.items():
            for di, dj in ((1, 0), (0, 1)):
                other = grid.get((i + di, j + dj))
                if other is None:
                    continue
                eta, w = other
                if v is None or w is None:
                    continue
                lo_v, hi_v = _scalar_bounds(v)
                lo_w, hi_w = _scalar_bounds(w)
                dv = max(abs(hi_v - lo_w), abs(hi_w - lo_v))
                norm = max(_sup_norm(xi), _sup_norm(eta))
                dist = _sup_norm(xi - eta)
                if norm == 0 or dist == 0:
                    continue
                ratio = dv / (norm ** (d - 1) * dist)
                best = max(best, ratio)
        return best

    c1 = estimate(steps)
    c2 = estimate(2 * steps)
    stable = abs(c1 - c2) <= Fraction(1, 5) * max(c1, c2, Fraction(1, 10 ** 9))
    violations = () if stable else ((float(c1), float(c2)),)
    return PropertyReport("lipschitz", _model_name(model),
                          (steps + 1) ** 2 + (2 * steps + 1) ** 2,
                          violations, float(max(c1, c2)),
                          f"estimates {float(c1):.6g} (coarse) vs "
                          f"{float(c2):.6g} (fine)")


# -- chamber fitting -------------------------------------------------------------------

@dataclass(frozen=True)
class Chamber:
    key: str
    points: tuple
    polynomial: dict | None
    fit_ok: bool

    def polynomial_text(self, names=("s", "t")):
        if self.polynomial is None:
            return "(no consistent polynomial)"
        if not self.polynomial:
            return "0"
        parts = []
        for (a, b), coeff in sorted(self.polynomial.items()):
            mono = []
            if a:
                mono.append(f"{names[0]}^{a}" if a > 1 else names[0])
            if b:
                mono.append(f"{names[1]}^{b}" if b > 1 else names[1])
            body = "*".join(mono) if mono else "1"
            parts.append(f"({coeff})*{body}")
        return " + ".join(parts)


@dataclass(frozen=True)
class ChamberFitReport:
    model_name: str
    degree: int
    chambers: tuple
    walls: tuple
    piecewise_polynomial: bool

    def to_text(self):
        lines = [f"chamber fit on {self.model_name}: {len(self.chambers)} chambers, "
                 f"{'piecewise polynomial' if self.piecewise_polynomial else 'FIT FAILURE'}"]
        for ch in self.chambers:
            lines.append(f"  [{len(ch.points)} pts] {ch.key}: "
                         f"{ch.polynomial_text()}" if ch.fit_ok else
                         f"  [{len(ch.points)} pts] {ch.key}: no degree-"
                         f"{self.degree} polynomial fits (certified)")
        if self.walls:
            lines.append(f"  {len(self.walls)} wall segments detected")
        return "\n".join(lines)


def _combinatorial_key(model, xi):
    """Chamber discriminant: toric polytope normal fan, surface Zariski
    support, or the bundle-model chart."""
    if isinstance(model, (ToricModel, BlowupPdModel)):
        toric = model.toric if isinstance(model, BlowupPdModel) else model
        poly = toric.polytope_of_class(xi)
        if not poly.is_full_dimensional:
            return "degenerate"
        facet_idx = []
        tight_sets = []
        for idx, (nrm, off) in enumerate(poly.inequalities):
            level = -off
            s = frozenset(v for v in poly.vertices
                          if sum(c * x for c, x in zip(nrm, v)) == level)
            if s and affine_rank(sorted(s)) == poly.dim - 1:
                facet_idx.append(idx)
                tight_sets.append((idx, s))
        vertex_types = set()
        for v in poly.vertices:
            vertex_types.add(frozenset(i for i, s in tight_sets if v in s))
        return "fan:" + repr(sorted(sorted(t) for t in vertex_types))
    if isinstance(model, SurfaceModel):
        parts = model.zariski_parts(xi)
        if parts is None:
            return "outside"
        return "support:" + repr(tuple(parts[1]))
    if isinstance(model, CutkoskyModel):
        try:
            volume(model, xi)
            return "bundle-chart"
        except LabError:
            return "outside-chart"
    raise UnsupportedModelError("no chamber key for this model type")


def chamber_fit(model, origin, dir1, dir2, steps=8, degree=None,
                span=Fraction(2), s_values=None, t_values=None) -> ChamberFitReport:
    """Group a 2D grid of classes by combinatorial type and interpolate an
    exact polynomial of the given degree per group.

    The grid is origin + s*dir1 + t*dir2 over s in s_values, t in t_values
    (defaulting to steps+1 equispaced values spanning [0, span]).  A group
    where no polynomial matches all members is reported as a fit failure,
    certified via exact rank computations; values living in several
    quadratic fields are handled by formal radical sums.
    """
    origin = as_class(origin)
    dir1 = as_class(dir1)
    dir2 = as_class(dir2)
    if degree is None:
        degree = model.dim
    if s_values is None:
        s_values = [i * span / steps for i in range(steps + 1)]
    if t_values is None:
        t_values = [j * span / steps for j in range(steps + 1)]
    s_values = [rat(s) for s in s_values]
    t_values = [rat(t) for t in t_values]
    groups: dict = {}
    grid_keys = {}
    for i, s in enumerate(s_values):
        for j, t in enumerate(t_values):
            xi = origin + s * dir1 + t * dir2
            key = _combinatorial_key(model, xi)
            grid_keys[(i, j)] = key
            if key == "outside-chart":
                continue
            value = volume(model, xi).value if key != "outside" else Fraction(0)
            groups.setdefault(key, []).append(((s, t), value))
    chambers = []
    all_ok = True
    exps = [(a, b) for a in range(degree + 1) for b in range(degree + 1 - a)]
    for key in sorted(groups):
        pts = groups[key]
        poly, ok = _exact_poly_fit(pts, exps)
        if not ok:
            all_ok = False
        chambers.append(Chamber(key, tuple(p for p, _ in pts), poly, ok))
    walls = []
    for (i, j), key in sorted(grid_keys.items()):
        for di, dj in ((1, 0), (0, 1)):
            nb = grid_keys.get((i + di, j + dj))
            if nb is not None and nb != key:
                walls.append(((s_values[i], t_values[j]),
                              (s_values[min(i + di, len(s_values) - 1)],
                               t_values[min(j + dj, len(t_values) - 1)])))
    return ChamberFitReport(_model_name(model), degree, tuple(chambers),
                            tuple(walls), all_ok)


def _exact_poly_fit(samples, exps):
    """Interpolate value = sum coeff_e * s^a t^b over all samples, exactly.

    Returns (polynomial dict, ok).  The coefficient matrix is rational;
    values may be rational or mixed quadratic irrationals (RadicalSum).
    """
    rational = all(not isinstance(v, QuadExt) or v.is_rational
                   for _, v in samples)
    rows = []
    for (s, t), v in samples:
        mono = [s ** a * t ** b for a, b in exps]
        if rational:
            val = v.rational_value() if isinstance(v, QuadExt) else rat(v)
        else:
            val = RadicalSum.from_scalar(v)
        rows.append((mono, val))
    ncols = len(exps)
    work = [list(m) + [val] for m, val in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(work)) if work[k][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][col]
        work[r] = [x / inv for x in work[r][:ncols]] + [work[r][ncols] * (Fraction(1) / inv)]
        for k in range(len(work)):
            if k != r and work[k][col] != 0:
                f = work[k][col]
                work[k] = ([x - f * y for x, y in zip(work[k][:ncols], work[r][:ncols])]
                           + [work[k][ncols] - f * work[r][ncols]])
        pivots.append((col, r))
        r += 1
    for k in range(len(work)):
        if all(x == 0 for x in work[k][:ncols]):
            residual = work[k][ncols]
            bad = (not residual.is_zero()) if isinstance(residual, RadicalSum) \
                else residual != 0
            if bad:
                return None, False
    poly = {}
    for col, row in pivots:
        coeff = work[row][ncols]
        if isinstance(coeff, RadicalSum):
            if not coeff.is_zero():
                poly[exps[col]] = coeff
        elif coeff != 0:
            poly[exps[col]] = coeff
    return poly, True
