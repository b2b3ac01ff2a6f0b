"""Multigraded families of monomial ideals as Newton-region rules.

A family is a total rule from integer index vectors to monomial ideals
(zero, unit, or a finite reduced generator list) satisfying the product
containment a_m * a_l inside a_{m+l}.  The rule abstraction keeps index
ranges unbounded; a table constructor covers small boxes, and toric models
induce families through their base ideals restricted to a smooth chart.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .cones import PolyCone
from .errors import (InvalidModelError, InvalidOperandsError, LabError,
                     ModelFormatError, NotEffectiveError,
                     UnsupportedChartError)
from .models import ToricModel, as_class
from .scalars import rat


class MonomialIdeal:
    """Zero ideal, unit ideal, or a reduced list of generator exponents."""

    __slots__ = ("nvars", "gens")

    def __init__(self, nvars, gens):
        self.nvars = nvars
        if gens is None:
            self.gens = None
            return
        cleaned = set()
        for g in gens:
            g = tuple(int(x) for x in g)
            if len(g) != nvars or any(x < 0 for x in g):
                raise InvalidOperandsError(f"bad generator exponent {g}")
            cleaned.add(g)
        reduced = []
        for g in sorted(cleaned):
            if not any(all(h[i] <= g[i] for i in range(nvars))
                       for h in cleaned if h != g):
                reduced.append(g)
        self.gens = tuple(reduced)

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, None)

    @classmethod
    def unit(cls, nvars):
        return cls(nvars, [tuple(0 for _ in range(nvars))])

    @property
    def is_zero(self):
        return self.gens is None

    @property
    def is_unit(self):
        return self.gens is not None and tuple(0 for _ in range(self.nvars)) in self.gens

    def contains(self, alpha) -> bool:
        """Membership of the monomial with exponent alpha."""
        if self.gens is None:
            return False
        alpha = tuple(int(x) for x in alpha)
        return any(all(g[i] <= alpha[i] for i in range(self.nvars))
                   for g in self.gens)

    def order(self, weight=None) -> int:
        """Minimal weighted degree of a member monomial."""
        if self.gens is None:
            raise NotEffectiveError("order of the zero ideal")
        if weight is None:
            weight = (1,) * self.nvars
        return min(sum(w * a for w, a in zip(weight, g)) for g in self.gens)

    def __eq__(self, other):
        if isinstance(other, MonomialIdeal):
            return self.nvars == other.nvars and self.gens == other.gens
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.gens))

    def __repr__(self):
        if self.gens is None:
            return "MonomialIdeal(0)"
        if self.is_unit:
            return "MonomialIdeal(1)"
        return f"MonomialIdeal{self.gens}"


def threshold_ideal(nvars, weight, level) -> MonomialIdeal:
    """Ideal of monomials with weighted degree >= level (unit when <= 0)."""
    level = int(level)
    if level <= 0:
        return MonomialIdeal.unit(nvars)
    gens = []
    caps = []
    wmax = max(weight)
    for w in weight:
        if w <= 0:
            raise InvalidOperandsError("threshold weights must be positive")
        caps.append((level + wmax - 1) // w + 1)
    for alpha in itertools.product(*(range(c + 1) for c in caps)):
        deg = sum(w * a for w, a in zip(weight, alpha))
        if deg < level:
            continue
        if all(a == 0 or deg - w < level for a, w in zip(alpha, weight)):
            gens.append(alpha)
    return MonomialIdeal(nvars, gens)


class MonomialIdealFamily:
    """Rule m -> monomial ideal with the product-containment discipline.

    ``weight`` fixes the monomial valuation used by the order functions:
    order = min over generators of <weight, exponent> (total degree when
    omitted).
    """

    def __init__(self, rank, nvars, rule, weight=None, name="family"):
        self.rank = rank
        self.nvars = nvars
        self.rule = rule
        self.weight = tuple(int(w) for w in (weight or (1,) * nvars))
        if len(self.weight) != nvars or any(w < 0 for w in self.weight):
            raise InvalidOperandsError("weight must be a nonnegative integer vector")
        self.name = name
        self._cache: dict = {}
        origin = self.ideal(tuple(0 for _ in range(rank)))
        if not origin.is_unit:
            raise InvalidModelError("rule at the zero index must be the unit ideal")

    def ideal(self, mvec) -> MonomialIdeal:
        mvec = tuple(int(x) for x in mvec)
        if len(mvec) != self.rank:
            raise InvalidOperandsError(f"index {mvec} has wrong rank")
        hit = self._cache.get(mvec)
        if hit is None:
            hit = self.rule(mvec)
            if not isinstance(hit, MonomialIdeal) or hit.nvars != self.nvars:
                raise InvalidModelError("rule returned a malformed ideal")
            if len(self._cache) < 100000:
                self._cache[mvec] = hit
        return hit

    def __repr__(self):
        return f"MonomialIdealFamily({self.name}, rank={self.rank}, vars={self.nvars})"


def table_family(rank, nvars, entries, weight=None, name="table") -> MonomialIdealFamily:
    """Family backed by an explicit finite table; indices outside the table
    give the zero ideal (the zero index defaults to the unit ideal)."""
    table = {tuple(int(x) for x in k): v for k, v in entries.items()}
    origin = tuple(0 for _ in range(rank))
    table.setdefault(origin, MonomialIdeal.unit(nvars))

    def rule(mvec):
        return table.get(mvec, MonomialIdeal.zero(nvars))

    return MonomialIdealFamily(rank, nvars, rule, weight=weight, name=name)


def linear_threshold_family(rank, nvars, coefficients, weight=None,
                            name="threshold") -> MonomialIdealFamily:
    """Family m -> {alpha : <weight, alpha> >= <coefficients, m>}."""
    coeffs = tuple(int(c) for c in coefficients)
    if len(coeffs) != rank:
        raise InvalidOperandsError("threshold form has wrong rank")
    w = tuple(int(x) for x in (weight or (1,) * nvars))

    def rule(mvec):
        level = sum(c * m for c, m in zip(coeffs, mvec))
        return threshold_ideal(nvars, w, level)

    return MonomialIdealFamily(rank, nvars, rule, weight=weight, name=name)


def principal_family(rank, nvars, exponent_per_index, name="principal") -> MonomialIdealFamily:
    """Family m -> principal ideal (x^(m . E)) for a matrix E of exponent
    rows per index; zero ideal when any exponent would go negative."""
    rows = [tuple(int(x) for x in r) for r in exponent_per_index]
    if len(rows) != rank or any(len(r) != nvars for r in rows):
        raise InvalidOperandsError("need one exponent row per index coordinate")

    def rule(mvec):
        exp = tuple(sum(m * r[i] for m, r in zip(mvec, rows))
                    for i in range(nvars))
        if any(e < 0 for e in exp):
            return MonomialIdeal.zero(nvars)
        return MonomialIdeal(nvars, [exp])

    return MonomialIdealFamily(rank, nvars, rule, name=name)


# -- verification -------------------------------------------------------------

@dataclass(frozen=True)
class MultiplicativityReport:
    family_name: str
    box: tuple
    pairs_checked: int
    violations: tuple

    @property
    def passed(self):
        return not self.violations

    def to_text(self):
        head = (f"multiplicativity {self.family_name}: "
                f"{self.pairs_checked} pairs, "
                f"{len(self.violations)} violations")
        lines = [head]
        for m, l, alpha in self.violations[:20]:
            lines.append(f"  a_{m} * a_{l} has generator sum {alpha} "
                         f"outside a_{tuple(x + y for x, y in zip(m, l))}")
        return "\n".join(lines)


def expand_box(box, rank):
    """Accepts an iterable of index vectors or an integer bound B meaning
    the cube [-B..B]^rank."""
    if isinstance(box, int):
        rng = range(-box, box + 1)
        return [tuple(v) for v in itertools.product(rng, repeat=rank)]
    return [tuple(int(x) for x in v) for v in box]


def verify_multiplicativity(family: MonomialIdealFamily, box) -> MultiplicativityReport:
    """Check a_m * a_l inside a_{m+l} for all pairs of indices in the box.

    Violations are returned as data (index pair and the offending exponent),
    never raised.
    """
    points = expand_box(box, family.rank)
    violations = []
    pairs = 0
    for mv in points:
        a_m = family.ideal(mv)
        if a_m.is_zero:
            continue
        for lv in points:
            a_l = family.ideal(lv)
            if a_l.is_zero:
                continue
            pairs += 1
            target = family.ideal(tuple(x + y for x, y in zip(mv, lv)))
            for g1 in a_m.gens:
                for g2 in a_l.gens:
                    s = tuple(x + y for x, y in zip(g1, g2))
                    if not target.contains(s):
                        violations.append((mv, lv, s))
                        break
                else:
                    continue
                break
    return MultiplicativityReport(family.name, ("box", len(points)),
                                  pairs, tuple(violations))


# -- asymptotic order ----------------------------------------------------------

@dataclass(frozen=True)
class OrdSample:
    point: tuple
    value: Fraction
    depth: int

    def __post_init__(self):
        if self.value < 0:
            raise InvalidModelError("asymptotic orders are nonnegative")


@dataclass(frozen=True)
class OrdEstimate:
    direction: tuple
    depth: int
    sequence: tuple          # ((k, ord_k / k), ...) for nonzero levels
    value: Fraction          # min of the sequence: certified upper bound

    @property
    def bracket(self):
        """Min-so-far sequence; nonincreasing for multiplicative families."""
        out = []
        best = None
        for k, v in self.sequence:
            best = v if best is None else min(best, v)
            out.append((k, best))
        return tuple(out)


def asymptotic_ord0(family: MonomialIdealFamily, direction, depth: int) -> OrdEstimate:
    """Certified upper bound for the asymptotic order along a direction:
    min over k <= depth of ord(a_{k m}) / k.

    Subadditivity (guaranteed by multiplicativity) makes the minimum both a
    bound and the limit value as depth grows.
    """
    direction = tuple(int(x) for x in direction)
    if depth < 1:
        raise InvalidOperandsError("depth must be >= 1")
    seq = []
    for k in range(1, depth + 1):
        ideal = family.ideal(tuple(k * x for x in direction))
        if ideal.is_zero:
            continue
        seq.append((k, Fraction(ideal.order(family.weight), k)))
    if not seq:
        raise NotEffectiveError(
            f"all multiples of {direction} up to depth {depth} give the zero ideal")
    value = min(v for _, v in seq)
    return OrdEstimate(direction, depth, tuple(seq), value)


# -- cones ----------------------------------------------------------------------

def cones_estimate(family: MonomialIdealFamily, box):
    """Inner approximations of the nef cone (unit-ideal directions) and the
    pseudoeffective cone (nonzero-ideal directions) from a finite box."""
    points = expand_box(box, family.rank)
    nef_gens = []
    psef_gens = []
    for mv in points:
        if all(x == 0 for x in mv):
            continue
        ideal = family.ideal(mv)
        if ideal.is_zero:
            continue
        psef_gens.append(mv)
        if ideal.is_unit:
            nef_gens.append(mv)
    provenance = f"inner approximation from {len(points)} box indices"
    nef = PolyCone(family.rank, _primitive_dirs(nef_gens), provenance=provenance)
    psef = PolyCone(family.rank, _primitive_dirs(psef_gens), provenance=provenance)
    return nef, psef


def _primitive_dirs(vectors):
    seen = set()
    out = []
    for v in vectors:
        g = 0
        for x in v:
            g = math.gcd(g, x)
        if g == 0:
            continue
        p = tuple(x // g for x in v)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def check_ample_indices(family: MonomialIdealFamily, box) -> bool:
    """The box must contain rank-many linearly independent unit-ideal
    directions for the big-cone machinery to make sense."""
    from ._linalg import rank as mat_rank
    units = []
    for mv in expand_box(box, family.rank):
        if any(mv) and family.ideal(mv).is_unit:
            units.append([Fraction(x) for x in mv])
    return bool(units) and mat_rank(units) == family.rank


# -- toric-induced families ------------------------------------------------------

def family_from_toric(model: ToricModel, chart, weight=None, budget=None,
                      name=None) -> MonomialIdealFamily:
    """Base-ideal family of the model's divisor classes restricted to a
    smooth torus-fixed chart.

    ``chart`` lists the ray indices of a maximal smooth cone; rule(m) is
    generated by the chart exponents <u, w_j> + a_j of the lattice points u
    of the divisor polytope (zero ideal when there are no sections, unit
    ideal when some section is a chart unit).
    """
    chart = tuple(int(i) for i in chart)
    d = model.dim
    if len(chart) != d or len(set(chart)) != d:
        raise UnsupportedChartError(f"chart needs {d} distinct ray indices")
    for i in chart:
        if not (0 <= i < len(model.rays)):
            raise UnsupportedChartError(f"ray index {i} out of range")
    rays = [model.rays[i] for i in chart]
    from .polyhedra import _det
    det = _det([[Fraction(c) for c in r] for r in rays])
    if abs(det) != 1:
        raise UnsupportedChartError(
            f"chart cone {chart} is not smooth (determinant {det})")

    def rule(mvec):
        divisor = model.divisor_of_class(as_class(mvec))
        poly = model.toric_polytope(divisor)
        if poly.is_empty:
            return MonomialIdeal.zero(d)
        pts = poly.lattice_points(1, budget)
        if not pts:
            return MonomialIdeal.zero(d)
        gens = []
        for u in pts:
            exp = tuple(int(sum(c * x for c, x in zip(rays[j], u)) + divisor[chart[j]])
                        for j in range(d))
            gens.append(exp)
        return MonomialIdeal(d, gens)

    return MonomialIdealFamily(model.rho, d, rule, weight=weight,
                               name=name or f"{model.name}:chart{chart}")


def chart_weight_for_ray(model: ToricModel, chart, ray_index):
    """Weight vector picking out the chart coordinate of the given ray, so
    the family order function computes the order along that ray divisor."""
    chart = tuple(int(i) for i in chart)
    if ray_index not in chart:
        raise UnsupportedChartError("ray does not belong to the chart")
    return tuple(1 if i == ray_index else 0 for i in chart)


# -- regularity scan --------------------------------------------------------------

@dataclass(frozen=True)
class RegularityReport:
    samples: tuple             # OrdSample grid, row-major
    shape: tuple
    max_second_difference: Fraction
    crease_points: tuple       # grid points where a second difference is nonzero
    piecewise_linear: bool

    def to_text(self):
        lines = [f"regularity scan {self.shape[0]}x{self.shape[1]}: "
                 f"max |second difference| = {self.max_second_difference}"
                 f" ({'piecewise linear' if self.piecewise_linear else 'curved'})"]
        if self.crease_points:
            lines.append(f"  creases at {len(self.crease_points)} grid points")
        return "\n".join(lines)


def regularity_scan(family: MonomialIdealFamily, origin, dir1, dir2,
                    steps: int, depth: int, require_ample_indices=True) -> RegularityReport:
    """Evaluate the asymptotic order on a 2D affine grid and report finite
    differences; creases locate piecewise-linear chamber walls, and
    persistent nonzero second differences flag non-polyhedral behavior.

    Grid points must stay inside the family's big cone (rational points are
    cleared to integer directions via homogeneity).
    """
    origin = tuple(rat(x) for x in origin)
    dir1 = tuple(rat(x) for x in dir1)
    dir2 = tuple(rat(x) for x in dir2)
    if steps < 3:
        raise InvalidOperandsError("need at least a 3x3 grid for second differences")
    if require_ample_indices:
        probe_box = 2
        if not check_ample_indices(family, probe_box):
            raise LabError(
                "family fails the ample-indices condition on the probe box; "
                "big-cone order functions are not meaningful")

    values = []
    samples = []
    for i in range(steps):
        row = []
        for j in range(steps):
            p = tuple(o + i * a + j * b for o, a, b in zip(origin, dir1, dir2))
            scale = 1
            for c in p:
                scale = scale * c.denominator // math.gcd(scale, c.denominator)
            direction = tuple(int(c * scale) for c in p)
            est = asymptotic_ord0(family, direction, depth)
            v = est.value / scale
            row.append(v)
            samples.append(OrdSample(p, v, depth))
        values.append(row)

    max_d2 = Fraction(0)
    creases = set()
    for i in range(steps):
        for j in range(steps):
            for di, dj in ((1, 0), (0, 1)):
                ia, ja = i - di, j - dj
                ib, jb = i + di, j + dj
                if 0 <= ia and ib < steps and 0 <= ja and jb < steps:
                    d2 = values[ib][jb] - 2 * values[i][j] + values[ia][ja]
                    if d2 != 0:
                        creases.add(tuple(
                            o + i * a + j * b
                            for o, a, b in zip(origin, dir1, dir2)))
                        if abs(d2) > max_d2:
                            max_d2 = abs(d2)
    return RegularityReport(tuple(samples), (steps, steps), max_d2,
                            tuple(sorted(creases)), max_d2 == 0)


# -- family mini-language ----------------------------------------------------------

_TERM_RE = re.compile(r"([+-]?\s*\d*)\s*\*?\s*m(\d+)")


def _parse_linear_form(text, rank, line):
    coeffs = [0] * rank
    cleaned = text.replace(" ", "")
    pos = 0
    for match in _TERM_RE.finditer(cleaned):
        if match.start() != pos:
            raise ModelFormatError(line, f"cannot parse linear form {text!r}")
        pos = match.end()
        raw, idx = match.group(1), int(match.group(2))
        raw = raw.replace(" ", "")
        if raw in ("", "+"):
            c = 1
        elif raw == "-":
            c = -1
        else:
            c = int(raw)
        if not (1 <= idx <= rank):
            raise ModelFormatError(line, f"index m{idx} out of rank {rank}")
        coeffs[idx - 1] += c
    if pos != len(cleaned):
        raise ModelFormatError(line, f"cannot parse linear form {text!r}")
    return coeffs


def parse_family_text(text: str, model_loader=None) -> MonomialIdealFamily:
    """Parse the family mini-language.

    Lines: ``family rank R vars D``, then one rule line:
    ``rule threshold <linear form in m1..mR>``,
    ``rule weighted <w1,..,wD> <linear form>``,
    ``rule table`` followed by ``entry m1,m2 zero|unit|gens a,b;c,d``,
    ``rule toric <model> <chart i,j,...>``.
    """
    from .models import resolve_model
    loader = model_loader or resolve_model
    rank = nvars = None
    rule_kind = None
    rule_args = None
    table_entries = {}
    weight = None
    lines = text.splitlines()
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "family":
            if len(toks) != 5 or toks[1] != "rank" or toks[3] != "vars":
                raise ModelFormatError(num, "expected: family rank R vars D")
            try:
                rank, nvars = int(toks[2]), int(toks[4])
            except ValueError:
                raise ModelFormatError(num, "rank and vars must be integers") from None
        elif toks[0] == "rule":
            if rank is None:
                raise ModelFormatError(num, "rule before family declaration")
            if rule_kind is not None:
                raise ModelFormatError(num, "multiple rule lines")
            if len(toks) < 2:
                raise ModelFormatError(num, "missing rule kind")
            rule_kind = toks[1]
            if rule_kind == "threshold":
                rule_args = _parse_linear_form(" ".join(toks[2:]), rank, num)
            elif rule_kind == "weighted":
                if len(toks) < 4:
                    raise ModelFormatError(num, "weighted rule needs weights and a form")
                try:
                    weight = tuple(int(w) for w in toks[2].split(","))
                except ValueError:
                    raise ModelFormatError(num, "bad weight vector") from None
                if len(weight) != nvars:
                    raise ModelFormatError(num, f"weight needs {nvars} entries")
                rule_args = _parse_linear_form(" ".join(toks[3:]), rank, num)
            elif rule_kind == "table":
                rule_args = table_entries
            elif rule_kind == "toric":
                if len(toks) != 4:
                    raise ModelFormatError(num, "toric rule needs: model chart")
                rule_args = (toks[2], toks[3])
            else:
                raise ModelFormatError(num, f"unknown rule kind {rule_kind!r}")
        elif toks[0] == "entry":
            if rule_kind != "table":
                raise ModelFormatError(num, "entry lines only follow a table rule")
            if len(toks) < 3:
                raise ModelFormatError(num, "entry needs an index and a value")
            try:
                idx = tuple(int(x) for x in toks[1].split(","))
            except ValueError:
                raise ModelFormatError(num, "bad entry index") from None
            if len(idx) != rank:
                raise ModelFormatError(num, f"entry index needs {rank} coordinates")
            kind = toks[2]
            if kind == "zero":
                table_entries[idx] = MonomialIdeal.zero(nvars)
            elif kind == "unit":
                table_entries[idx] = MonomialIdeal.unit(nvars)
            elif kind == "gens":
                gens = []
                for chunk in " ".join(toks[3:]).split(";"):
                    chunk = chunk.strip()
                    if not chunk:
                        continue
                    try:
                        gens.append(tuple(int(x) for x in chunk.split(",")))
                    except ValueError:
                        raise ModelFormatError(num, f"bad generator {chunk!r}") from None
                table_entries[idx] = MonomialIdeal(nvars, gens)
            else:
                raise ModelFormatError(num, f"unknown entry kind {kind!r}")
        elif toks[0] == "weight":
            try:
                weight = tuple(int(w) for w in toks[1].split(","))
            except (IndexError, ValueError):
                raise ModelFormatError(num, "bad weight line") from None
        else:
            raise ModelFormatError(num, f"unknown directive {toks[0]!r}")

    end = max(1, len(lines))
    if rank is None:
        raise ModelFormatError(end, "missing family declaration")
    if rule_kind is None:
        raise ModelFormatError(end, "missing rule line")
    if rule_kind == "threshold":
        return linear_threshold_family(rank, nvars, rule_args, name="threshold-file")
    if rule_kind == "weighted":
        return linear_threshold_family(rank, nvars, rule_args, weight=weight,
                                       name="weighted-file")
    if rule_kind == "table":
        return table_family(rank, nvars, table_entries, weight=weight,
                            name="table-file")
    model = loader(rule_args[0])
    if not isinstance(model, ToricModel):
        from .models import BlowupPdModel
        if isinstance(model, BlowupPdModel):
            model = model.toric
        else:
            raise ModelFormatError(end, "toric rule needs a toric model")
    chart = tuple(int(x) for x in rule_args[1].split(","))
    fam = family_from_toric(model, chart, weight=weight)
    if fam.rank != rank or fam.nvars != nvars:
        raise ModelFormatError(end, "family declaration does not match the toric rule")
    return fam
