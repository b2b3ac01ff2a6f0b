"""Invariant calculators.

Every invariant has two routes wherever the catalog allows it: a closed
form (exact rational or quadratic-field value) and a section-counting
oracle whose normalized counts converge to the same number.  Closed forms
carry provenance ``closed_form``; oracle values carry the largest level
used and the observed error trend.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (InvalidModelError, InvalidOperandsError, LabError,
                     NotBigError, NotPseudoeffectiveError,
                     UnsupportedClassError, UnsupportedModelError)
from .models import (BlowupPdModel, CutkoskyModel, NSClass, SplitRuledModel,
                     SurfaceModel, ToricModel, as_class)
from .polyhedra import (euclidean_volume, hull_of_lattice_points,
                        normalized_volume)
from .scalars import QuadExt, quadratic_roots, rat


@dataclass(frozen=True)
class VolumeResult:
    """A volume value together with how it was obtained."""
    value: object
    provenance: str               # "closed_form" | "oracle_extrapolated"
    detail: str = ""
    sequence: tuple = ()          # ((m, Fraction), ...) for oracle results
    largest_m: int | None = None
    error_estimate: object | None = None

    def as_float(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: NSClass
    negative: NSClass
    support: tuple
    coefficients: tuple

    @property
    def parts(self):
        return self.positive, self.negative


@dataclass(frozen=True)
class HhatVector:
    """Asymptotic cohomology values indexed 0..dim."""
    values: tuple

    def __post_init__(self):
        for v in self.values:
            if v < 0:
                raise InvalidModelError("asymptotic cohomology must be nonnegative")

    def __getitem__(self, i):
        return self.values[i]

    def higher_vanish(self) -> bool:
        return all(v == 0 for v in self.values[1:])


# -- elementary counting helpers ---------------------------------------------

def elliptic_section_count(n: int) -> int:
    """h^0 of a degree-n point bundle on an elliptic curve."""
    if n >= 1:
        return n
    return 1 if n == 0 else 0


def monomial_window_count(a: int, c: int, d: int) -> int:
    """Number of monomials in d variables of total degree k with c <= k <= a."""
    if a < 0 or c > a:
        return 0
    c = max(c, 0)
    total = math.comb(a + d, d)
    if c > 0:
        total -= math.comb(c - 1 + d, d)
    return total


# -- section counts ------------------------------------------------------------

def section_count(model, divisor, m: int, budget=None) -> int:
    """Exact h^0 of the m-th multiple of an integral divisor.

    Divisor data is model specific: ray coefficients for toric models,
    class coordinates for the blow-up and split-ruled models, and
    (s, c1, c2, c3) or a bare twist (c1, c2, c3) for the bundle model.
    """
    if not (isinstance(m, int) and m >= 1):
        raise InvalidOperandsError(f"level must be a positive integer, got {m!r}")
    if isinstance(model, ToricModel):
        coeffs = [rat(c) for c in divisor]
        if any(c.denominator != 1 for c in coeffs):
            raise InvalidOperandsError("toric section counts need integral divisors")
        poly = model.toric_polytope(coeffs)
        if poly.is_empty:
            return 0
        return poly.lattice_point_count(m, budget)
    if isinstance(model, BlowupPdModel):
        xi = as_class(divisor)
        if not xi.is_integral():
            raise InvalidOperandsError("blow-up section counts need integral classes")
        x, y = model.xy(xi)
        a, c = int(m * x), int(m * y)
        return monomial_window_count(a, c, model.dim)
    if isinstance(model, CutkoskyModel):
        return _cutkosky_section_count(model, divisor, m)
    if isinstance(model, SplitRuledModel):
        xi = as_class(divisor)
        if not xi.is_integral():
            raise InvalidOperandsError("split-ruled section counts need integral classes")
        x, y = int(xi[0]), int(xi[1])
        if x < 0:
            return 0
        d1, d2 = model.summand_degrees
        return sum(elliptic_section_count(d1 * i + d2 * (m * x - i) + m * y)
                   for i in range(m * x + 1))
    raise UnsupportedModelError(f"no section count for {type(model).__name__}")


def _cutkosky_section_count(model: CutkoskyModel, divisor, m: int) -> int:
    s, c = model.split_class(as_class(divisor))
    if s.denominator != 1 or not c.is_integral():
        raise InvalidOperandsError("bundle section counts need integral classes")
    s = int(s)
    if s < 0:
        return 0
    total = Fraction(0)
    mc = m * c
    for t in range(m * s + 1):
        v = (m * s - t) * model.a + t * model.b + mc
        if model.base_ample(v):
            total += model.q(v) / 2
    if total.denominator != 1:
        raise InvalidModelError(
            "intersection form is not even: section count is fractional")
    return int(total)


# -- volume --------------------------------------------------------------------

def volume(model, xi) -> VolumeResult:
    """Closed-form volume of a divisor class on any catalog model."""
    xi = as_class(xi)
    if isinstance(model, ToricModel):
        poly = model.polytope_of_class(xi)
        return VolumeResult(normalized_volume(poly), "closed_form",
                            "lattice volume of the divisor polytope")
    if isinstance(model, BlowupPdModel):
        return _blowup_volume(model, xi)
    if isinstance(model, SurfaceModel):
        parts = model.zariski_parts(xi)
        if parts is None:
            return VolumeResult(Fraction(0), "closed_form",
                                "outside the pseudoeffective cone")
        p, support, _ = parts
        return VolumeResult(model.q(p), "closed_form",
                            f"square of the positive part, support {tuple(support)}")
    if isinstance(model, CutkoskyModel):
        return _cutkosky_volume(model, xi)
    if isinstance(model, SplitRuledModel):
        return _split_ruled_volume(model, xi)
    raise UnsupportedModelError(f"no volume formula for {type(model).__name__}")


def _blowup_volume(model: BlowupPdModel, xi) -> VolumeResult:
    x, y = model.xy(xi)
    d = model.dim
    if x > 0 and 0 <= y <= x:
        return VolumeResult(x ** d - y ** d, "closed_form", "nef chamber")
    if x >= 0 and y <= 0:
        return VolumeResult(x ** d, "closed_form", "exceptional-fixed chamber")
    return VolumeResult(Fraction(0), "closed_form", "outside the big cone")


def _split_ruled_volume(model: SplitRuledModel, xi) -> VolumeResult:
    xi = as_class(xi)
    if len(xi) != 2:
        raise UnsupportedClassError("split-ruled classes have 2 coordinates")
    x, y = xi[0], xi[1]
    lo, hi = model.d_low, model.d_high
    if x <= 0 or hi * x + y <= 0:
        return VolumeResult(Fraction(0), "closed_form", "outside the big cone")
    if lo * x + y >= 0:
        value = x * ((lo + hi) * x + 2 * y)
        return VolumeResult(value, "closed_form", "nef chamber")
    value = (hi * x + y) ** 2 / Fraction(hi - lo)
    return VolumeResult(value, "closed_form", "destabilized chamber")


def _cutkosky_volume(model: CutkoskyModel, xi) -> VolumeResult:
    s, c = model.split_class(as_class(xi))
    if s == 0:
        return VolumeResult(QuadExt(0), "closed_form",
                            "pullback class: no tautological part")
    if s < 0:
        return VolumeResult(QuadExt(0), "closed_form", "no sections")
    twist = (Fraction(1) / s) * c
    sigma = nef_threshold(model, twist)
    start = model.a + twist
    dirn = model.b - model.a
    q0 = model.q(start)
    b0 = model.pair(start, dirn)
    q2 = model.q(dirn)
    integral = (QuadExt(3 * q0) * sigma + QuadExt(3 * b0) * sigma * sigma
                + QuadExt(q2) * sigma * sigma * sigma)
    value = QuadExt(s ** 3) * integral
    return VolumeResult(value, "closed_form",
                        f"integral of the base form up to the nef threshold; "
                        f"threshold {sigma}")


def nef_threshold(model: CutkoskyModel, twist) -> QuadExt:
    """Largest s in [0, 1] such that (1-s) a + s b + twist is nef, exactly.

    Root of an explicit rational quadratic; requires a + twist nef.
    """
    if not isinstance(model, CutkoskyModel):
        raise UnsupportedModelError("nef threshold is a bundle-model operation")
    c = as_class(twist)
    if len(c) != 3:
        raise UnsupportedClassError("twist must be a base class (3 coordinates)")
    start = model.a + c
    if not model.base_nef(start):
        raise UnsupportedClassError(
            "a + twist is not nef: outside the chamber the formula covers")
    dirn = model.b - model.a
    q0 = model.q(start)
    b0 = model.pair(start, dirn)
    q2 = model.q(dirn)
    one = QuadExt(1)
    zero = QuadExt(0)

    # quadratic constraint f(s) = q2 s^2 + 2 b0 s + q0 >= 0, f(0) >= 0
    if q2 == 0:
        if b0 >= 0:
            sigma_f = one
        else:
            sigma_f = QuadExt(min(Fraction(1), -q0 / (2 * b0)))
    elif q2 < 0:
        _, r_hi = quadratic_roots(q2, 2 * b0, q0)
        sigma_f = r_hi if r_hi < 1 else one
    else:
        roots = quadratic_roots(q2, 2 * b0, q0)
        if roots is None or roots[0] == roots[1]:
            sigma_f = one
        else:
            r_lo, r_hi = roots
            if r_hi <= 0 or r_lo >= 1:
                sigma_f = one
            else:
                sigma_f = r_lo if r_lo > 0 else zero

    # linear constraint g(s) = pair(start, a) + s * pair(dir, a) >= 0
    g0 = model.pair(start, model.a)
    slope = model.pair(dirn, model.a)
    if slope >= 0:
        sigma_g = one
    else:
        sigma_g = QuadExt(min(Fraction(1), g0 / (-slope)))
    return sigma_f if sigma_f <= sigma_g else sigma_g


# -- counting oracle -----------------------------------------------------------

def volume_by_counting(model, divisor, schedule, budget=None) -> VolumeResult:
    """Normalized section counts d! h^0(m)/m^d along an increasing schedule.

    The returned value is the count at the largest level; the whole
    sequence and the gap of the last two terms come along for trend
    inspection.
    """
    ms = list(schedule)
    if not ms or any(not isinstance(m, int) or m < 1 for m in ms):
        raise InvalidOperandsError("schedule must be positive integers")
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise InvalidOperandsError("schedule must be strictly increasing")
    d = model.dim
    fact = math.factorial(d)
    seq = []
    for m in ms:
        h0 = section_count(model, divisor, m, budget)
        seq.append((m, Fraction(fact * h0, m ** d)))
    err = abs(seq[-1][1] - seq[-2][1]) if len(seq) >= 2 else None
    return VolumeResult(seq[-1][1], "oracle_extrapolated",
                        f"normalized section count at m={ms[-1]}",
                        sequence=tuple(seq), largest_m=ms[-1],
                        error_estimate=err)


def geometric_schedule(limit: int, start: int = 1) -> list:
    """Doubling schedule start, 2*start, ... capped and ending at limit."""
    out = []
    m = start
    while m < limit:
        out.append(m)
        m *= 2
    out.append(limit)
    return out


# -- Zariski decomposition -----------------------------------------------------

def zariski(model: SurfaceModel, xi) -> ZariskiDecomposition:
    """Decomposition xi = P + N with P nef, P . N = 0, N supported on a
    negative-definite curve configuration; errors when xi is not psef."""
    if not isinstance(model, SurfaceModel):
        raise UnsupportedModelError("zariski decomposition needs a surface model")
    xi = as_class(xi)
    parts = model.zariski_parts(xi)
    if parts is None:
        raise NotPseudoeffectiveError(f"{xi} is not pseudoeffective")
    p, support, coeffs = parts
    n = xi - p
    # invariant audit (cheap, catches inconsistent curve data)
    for i in support:
        if model.pair(p, model.negative_curves[i]) != 0:
            raise InvalidModelError("positive part not orthogonal to support")
    if model.pair(p, n) != 0:
        raise InvalidModelError("positive and negative parts not orthogonal")
    if any(t <= 0 for t in coeffs):
        raise InvalidModelError("negative part has nonpositive multiplicities")
    if support:
        gram = [[model.pair(model.negative_curves[i], model.negative_curves[j])
                 for j in support] for i in support]
        from ._linalg import is_negative_definite
        if not is_negative_definite(gram):
            raise InvalidModelError("support gram matrix is not negative definite")
    if not model.nef_test(p):
        raise InvalidModelError("positive part fails the nef test")
    return ZariskiDecomposition(p, n, tuple(support), tuple(coeffs))


# -- asymptotic cohomology -----------------------------------------------------

def asymptotic_cohomology(model, xi) -> HhatVector:
    """Vector of asymptotic cohomology values, indexed 0..dim.

    Supported on the bundle model's base abelian surface (sign of the
    intersection form decides which single entry is nonzero) and on the
    blow-up model's nef and big chambers.
    """
    xi = as_class(xi)
    if isinstance(model, CutkoskyModel):
        if len(xi) != 3:
            raise UnsupportedClassError("base classes have 3 coordinates")
        q = model.q(xi)
        vals = [Fraction(0)] * 3
        if q > 0:
            if model.pair(xi, model.a) > 0:
                vals[0] = q
            else:
                vals[2] = q
        elif q < 0:
            vals[1] = -q
        return HhatVector(tuple(vals))
    if isinstance(model, BlowupPdModel):
        x, y = model.xy(xi)
        d = model.dim
        vals = [Fraction(0)] * (d + 1)
        if x >= 0 and y <= 0:
            vals[0] = x ** d
            vals[d - 1] = (-1) ** d * y ** d
        elif x >= 0 and 0 <= y <= x:
            vals[0] = x ** d - y ** d
        else:
            raise UnsupportedClassError(
                "asymptotic cohomology is tabulated only on x >= 0, y <= x")
        return HhatVector(tuple(vals))
    raise UnsupportedModelError(
        f"no asymptotic cohomology table for {type(model).__name__}")


def ampleness_probe(model, xi, radius, samples: int = 2) -> bool:
    """One-sided amplitude test: all higher asymptotic cohomology vanishes
    on a deterministic grid in the radius-ball around the class.

    True certifies vanishing on the sampled set only; false is conclusive.
    """
    xi = as_class(xi)
    radius = rat(radius)
    if radius <= 0 or samples < 1:
        raise InvalidOperandsError("radius must be positive, samples >= 1")
    if isinstance(model, CutkoskyModel):
        rho = 3
    elif isinstance(model, BlowupPdModel):
        rho = 2
    else:
        raise UnsupportedModelError("probe needs a cohomology-tabulated model")
    step = radius / samples
    offsets = range(-samples, samples + 1)
    for combo in itertools.product(offsets, repeat=rho):
        shifted = xi + NSClass([k * step for k in combo])
        if not asymptotic_cohomology(model, shifted).higher_vanish():
            return False
    return True


# -- order functions and restricted volume --------------------------------------

def _toric_of(model):
    if isinstance(model, ToricModel):
        return model
    if isinstance(model, BlowupPdModel):
        return model.toric
    raise UnsupportedModelError("operation needs a toric realization")


def asymptotic_order(model, valuation, xi) -> Fraction:
    """Asymptotic vanishing order of the class along a ray divisor (toric)
    or a listed curve (surface).  Defined on the big cone only."""
    xi = as_class(xi)
    if isinstance(model, SurfaceModel):
        parts = model.zariski_parts(xi)
        if parts is None or model.q(parts[0]) <= 0:
            raise NotBigError(f"{xi} is not big")
        _, support, coeffs = parts
        for i, t in zip(support, coeffs):
            if i == valuation:
                return t
        if not (0 <= valuation < len(model.negative_curves)):
            raise InvalidOperandsError(f"no curve with index {valuation}")
        return Fraction(0)
    toric = _toric_of(model)
    if not (0 <= valuation < len(toric.rays)):
        raise InvalidOperandsError(f"no ray with index {valuation}")
    poly = toric.polytope_of_class(xi)
    if not poly.is_full_dimensional:
        raise NotBigError(f"{xi} is not big")
    div = toric.divisor_of_class(xi)
    ray = toric.rays[valuation]
    return poly.support_min(ray) + div[valuation]


def restricted_volume(model, ray_index, xi) -> Fraction:
    """Restricted volume of the class to the ray's invariant divisor: zero
    when the divisor sits in the asymptotic base locus, else the
    lattice-normalized volume of the corresponding polytope face."""
    xi = as_class(xi)
    toric = _toric_of(model)
    order = asymptotic_order(model, ray_index, xi)
    if order > 0:
        return Fraction(0)
    div = toric.divisor_of_class(xi)
    poly = toric.polytope_of_class(xi)
    face = poly.face(toric.rays[ray_index], div[ray_index])
    return math.factorial(toric.dim - 1) * euclidean_volume(face)


def augmented_base_locus_probe(model, xi, epsilons=(Fraction(1, 64), Fraction(1, 128))):
    """Ray indices whose divisors lie in the augmented base locus, probed
    by perturbing against the model's ample reference at two shrinking
    epsilon values (both must agree), then cross-validated by the decay of
    the restricted volume along a sampled approach."""
    xi = as_class(xi)
    toric = _toric_of(model)
    ample = model.ample
    if ample is None:
        raise InvalidModelError("model carries no ample reference class")
    poly = toric.polytope_of_class(xi)
    if not poly.is_full_dimensional:
        raise NotBigError(f"{xi} is not big")
    hits = []
    for i in range(len(toric.rays)):
        flags = []
        for eps in epsilons:
            shifted = xi - rat(eps) * ample
            flags.append(asymptotic_order(model, i, shifted) > 0)
        if flags[0] != flags[-1] or len(set(flags)) > 1:
            raise LabError(
                f"epsilon grid disagreement on ray {i}: refine the epsilons")
        if flags[0]:
            hits.append(i)
    # cross-validation: restricted volume must decay along an approach path
    for i in hits:
        values = []
        for delta in (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)):
            values.append(restricted_volume(model, i, xi + delta * ample))
        if any(b > a for a, b in zip(values, values[1:])):
            raise LabError(
                f"restricted volume does not decay towards ray {i}: "
                "augmented-base-locus probe is inconsistent")
    return tuple(hits)


# -- approximation sweeps --------------------------------------------------------

def fujita_sweep(model, divisor, schedule, budget=None, force_hull=False):
    """Normalized volumes of the moving parts along a level schedule.

    Toric models: the moving polytope (hull of the lattice points of the
    dilated divisor polytope), never exceeding the volume.  The bundle
    model: normalized section counts as the growth proxy.
    Returns a list of (m, Fraction) pairs.
    """
    ms = list(schedule)
    if not ms or any(not isinstance(m, int) or m < 1 for m in ms):
        raise InvalidOperandsError("schedule must be positive integers")
    if isinstance(model, CutkoskyModel):
        rows = []
        for m in ms:
            h0 = section_count(model, divisor, m, budget)
            rows.append((m, Fraction(math.factorial(model.dim) * h0, m ** model.dim)))
        return rows
    toric = _toric_of(model)
    if isinstance(model, BlowupPdModel):
        poly = toric.polytope_of_class(as_class(divisor))
    else:
        poly = model.toric_polytope([rat(c) for c in divisor])
    if not poly.is_full_dimensional:
        raise NotBigError("sweep needs a big divisor")
    target = normalized_volume(poly)
    d = toric.dim
    rows = []
    for m in ms:
        moving = hull_of_lattice_points(poly, m, budget)
        if moving.is_empty:
            value = Fraction(0)
        else:
            value = normalized_volume(moving) / Fraction(m ** d)
        if value > target:
            raise InvalidModelError(
                "moving-part volume exceeded the total volume: inconsistent data")
        rows.append((m, value))
    return rows


# -- comparison helper ------------------------------------------------------------

def relative_gap(x, y):
    """Symmetric relative difference |x-y| / max(|x|, |y|), exactly.

    Zero when both vanish.  Works for Fraction and (same-field) QuadExt
    operands; the result supports exact comparison against tolerances.
    """
    def _abs(v):
        return -v if v < 0 else v

    dx = _abs(x - y)
    mx = max(_abs(x), _abs(y))
    if mx == 0:
        return Fraction(0)
    return dx / mx
