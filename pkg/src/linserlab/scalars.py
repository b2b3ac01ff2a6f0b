"""Exact scalar arithmetic: rationals and real quadratic irrationalities.

Every invariant in this package is computed without floating point.
Rationals are stdlib ``fractions.Fraction`` (re-exported as ``Rat``).
Irrational values such as (5*sqrt(5) - 7)/2 live in :class:`QuadExt`,
an element a + b*sqrt(d) of a real quadratic field with square-free d.
Comparisons are decided by exact sign analysis; floats appear only in
diagnostic output.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InvalidComparisonError, InvalidScalarError

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints, strings and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        raise InvalidScalarError(f"refusing to coerce float {x!r}; pass a Fraction or string")
    raise InvalidScalarError(f"cannot coerce {x!r} to a rational")


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidScalarError(f"bad rational literal {s!r}") from exc


def squarefree_factor(n: int) -> tuple[int, int]:
    """Write n = s*s*f with f square-free; returns (s, f).  Requires n >= 1."""
    if n < 1:
        raise InvalidScalarError(f"squarefree_factor needs a positive integer, got {n}")
    s, f = 1, 1
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    return s, f * m


def int_nth_root(n: int, k: int) -> int:
    """floor(n**(1/k)) for n >= 0, k >= 1, exactly."""
    if n < 0 or k < 1:
        raise InvalidScalarError("int_nth_root needs n >= 0 and k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


class QuadExt:
    """Element a + b*sqrt(d) of a real quadratic field, stored canonically.

    ``d`` is a positive square-free integer; rationals carry d = 1 and b = 0.
    Values with the same d form an ordered field: +, -, *, /, comparisons are
    all exact.  Mixing two genuinely irrational values with different d raises
    (single-radical representation by design).
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=1):
        a = rat(a)
        b = rat(b)
        if not isinstance(d, int):
            raise InvalidScalarError(f"discriminant must be an integer, got {d!r}")
        if d <= 0:
            raise InvalidScalarError(f"discriminant must be positive, got {d}")
        s, f = squarefree_factor(d)
        b *= s
        d = f
        if b == 0:
            d = 1
        if d == 1:
            a += b
            b = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt values are immutable")

    # spec field aliases
    @property
    def rational_part(self) -> Fraction:
        return self.a

    @property
    def radical_coefficient(self) -> Fraction:
        return self.b

    @property
    def discriminant(self) -> int:
        return self.d

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational_value(self) -> Fraction:
        if self.b != 0:
            raise InvalidScalarError(f"{self} is irrational")
        return self.a

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        return QuadExt(rat(x))

    def _join(self, other: "QuadExt") -> int:
        """Common discriminant of two operands, or raise."""
        if self.b == 0:
            return other.d
        if other.b == 0:
            return self.d
        if self.d != other.d:
            raise InvalidScalarError(
                f"incompatible radicals sqrt({self.d}) and sqrt({other.d})")
        return self.d

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except InvalidScalarError:
            return NotImplemented
        d = self._join(other)
        return QuadExt(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except InvalidScalarError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except InvalidScalarError:
            return NotImplemented
        d = self._join(other)
        return QuadExt(self.a * other.a + self.b * other.b * d,
                       self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        d = self._join(other)
        norm = other.a * other.a - other.b * other.b * d
        if norm == 0:
            # a^2 = b^2 d with d square-free forces a = b = 0
            raise ZeroDivisionError("division by zero QuadExt")
        inv = QuadExt(other.a / norm, -other.b / norm, d)
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = QuadExt(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons ------------------------------------------------------

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = a * a, b * b * d
        if lhs == rhs:
            return 0
        if a > 0:  # b < 0
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def _cmp(self, other) -> int:
        try:
            diff = self - self._coerce(other)
        except InvalidScalarError as exc:
            raise InvalidComparisonError(str(exc)) from None
        if diff is NotImplemented:
            raise InvalidComparisonError(f"cannot compare {self!r} with {other!r}")
        return diff.sign()

    def __eq__(self, other):
        if isinstance(other, (QuadExt, Fraction, int)):
            try:
                return self._cmp(other) == 0
            except InvalidComparisonError:
                return False
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- output -----------------------------------------------------------

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def bounds(self, digits: int = 30) -> tuple[Fraction, Fraction]:
        """Rational lo <= self <= hi with hi - lo <= |b| * 10**-digits."""
        if self.b == 0:
            return self.a, self.a
        scale = 10 ** digits
        s = math.isqrt(self.d * scale * scale)
        lo_r, hi_r = Fraction(s, scale), Fraction(s + 1, scale)
        if self.b > 0:
            return self.a + self.b * lo_r, self.a + self.b * hi_r
        return self.a + self.b * hi_r, self.a + self.b * lo_r

    def __repr__(self):
        return f"QuadExt({self.a!r}, {self.b!r}, {self.d})"

    def __str__(self):
        return format_quadext(self)


def canonicalize(value: QuadExt) -> QuadExt:
    """Return the canonical representative (idempotent; construction already
    canonicalizes, so this is the identity on QuadExt inputs)."""
    if not isinstance(value, QuadExt):
        return QuadExt(rat(value))
    return QuadExt(value.a, value.b, value.d)


def quad_compare(x, y) -> int:
    """Exact three-way comparison: -1, 0 or +1."""
    return QuadExt._coerce(x)._cmp(y)


def sqrt_rat(x: Fraction) -> QuadExt:
    """Exact square root of a nonnegative rational as a QuadExt."""
    x = rat(x)
    if x < 0:
        raise InvalidScalarError(f"sqrt of negative rational {x}")
    if x == 0:
        return QuadExt(0)
    # sqrt(p/q) = sqrt(p*q)/q
    m = x.numerator * x.denominator
    s, f = squarefree_factor(m)
    return QuadExt(0, Fraction(s, x.denominator), f)


def quadratic_roots(a2: Fraction, a1: Fraction, a0: Fraction):
    """Real roots of a2 t^2 + a1 t + a0 = 0 (a2 != 0) as a sorted pair of
    QuadExt, or None when the discriminant is negative."""
    a2, a1, a0 = rat(a2), rat(a1), rat(a0)
    if a2 == 0:
        raise InvalidScalarError("leading coefficient is zero")
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        return None
    root = sqrt_rat(disc)
    r1 = (QuadExt(-a1) - root) / QuadExt(2 * a2)
    r2 = (QuadExt(-a1) + root) / QuadExt(2 * a2)
    return (r1, r2) if r1 <= r2 else (r2, r1)


def format_quadext(x: QuadExt) -> str:
    if x.b == 0:
        return format_rat(x.a)
    b = x.b
    if b > 0:
        return f"{format_rat(x.a)} + {format_rat(b)}*sqrt({x.d})"
    return f"{format_rat(x.a)} - {format_rat(-b)}*sqrt({x.d})"


def parse_quadext(s: str) -> QuadExt:
    """Parse 'p/q', 'p/q + r/s*sqrt(D)' or 'p/q - r/s*sqrt(D)' exactly."""
    text = s.strip()
    if "sqrt" not in text:
        return QuadExt(parse_rat(text))
    head, _, tail = text.partition("sqrt")
    tail = tail.strip()
    if not (tail.startswith("(") and tail.endswith(")")):
        raise InvalidScalarError(f"bad quadratic literal {s!r}")
    try:
        d = int(tail[1:-1])
    except ValueError as exc:
        raise InvalidScalarError(f"bad discriminant in {s!r}") from exc
    head = head.strip()
    if not head.endswith("*"):
        raise InvalidScalarError(f"bad quadratic literal {s!r}")
    head = head[:-1].rstrip()
    # split off the radical coefficient: scan for the last top-level +/- sign
    split = -1
    for i in range(len(head) - 1, 0, -1):
        if head[i] in "+-" and head[i - 1] == " ":
            split = i
            break
    if split < 0:
        a = Fraction(0)
        b = parse_rat(head)
    else:
        a = parse_rat(head[:split])
        sign = -1 if head[split] == "-" else 1
        b = sign * parse_rat(head[split + 1:])
    return QuadExt(a, b, d)


def parse_scalar(s: str):
    """Parse either a Rat or a QuadExt; returns Fraction when rational."""
    v = parse_quadext(s)
    return v.a if v.b == 0 else v


def format_scalar(x) -> str:
    if isinstance(x, QuadExt):
        return format_quadext(x)
    return format_rat(rat(x))


def scalar_float(x) -> float:
    return float(x) if not isinstance(x, QuadExt) else float(x)


class RadicalSum:
    """Formal finite sum of rational multiples of sqrt(d) over square-free d.

    By linear independence of square roots of distinct square-free integers
    over the rationals, the represented real number is zero iff every stored
    coefficient is zero, which makes exact rank computations possible on
    value columns mixing several quadratic fields (chamber fitting).
    Supports +, -, and multiplication; no division by irrational sums.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for d, c in terms.items():
                c = rat(c)
                if c != 0:
                    self.terms[d] = self.terms.get(d, Fraction(0)) + c
            self.terms = {d: c for d, c in self.terms.items() if c != 0}

    @classmethod
    def from_scalar(cls, x) -> "RadicalSum":
        if isinstance(x, RadicalSum):
            return x
        if isinstance(x, QuadExt):
            out = {}
            if x.a != 0:
                out[1] = x.a
            if x.b != 0:
                out[x.d] = x.b
            return cls(out)
        return cls({1: rat(x)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = RadicalSum.from_scalar(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, Fraction(0)) + c
        return RadicalSum(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-RadicalSum.from_scalar(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RadicalSum.from_scalar(other)
        out = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                s, f = squarefree_factor(d1 * d2)
                out[f] = out.get(f, Fraction(0)) + c1 * c2 * s
        return RadicalSum(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __float__(self):
        return sum(float(c) * math.sqrt(d) for d, c in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "RadicalSum(0)"
        parts = [f"{c}*sqrt({d})" if d != 1 else str(c)
                 for d, c in sorted(self.terms.items())]
        return "RadicalSum(" + " + ".join(parts) + ")"


def nth_root_bounds(value, k: int, digits: int = 18) -> tuple[Fraction, Fraction]:
    """Certified rational bracket [lo, hi] around value**(1/k), value >= 0.

    Bracket width is at most 2 * 10**-digits for rational inputs and only
    slightly wider for QuadExt (the radical itself is bracketed first).
    """
    if k < 1:
        raise InvalidScalarError("root order must be >= 1")
    if isinstance(value, QuadExt):
        vlo, vhi = value.bounds(digits=2 * digits)
    else:
        vlo = vhi = rat(value)
    if vlo < 0:
        if vhi < 0:
            raise InvalidScalarError(f"nth_root_bounds of negative value {value}")
        vlo = Fraction(0)
    scale = 10 ** digits

    def _floor_root(x: Fraction) -> Fraction:
        n = (x * scale ** k).numerator // (x * scale ** k).denominator
        return Fraction(int_nth_root(n, k), scale)

    lo = _floor_root(vlo)
    hi_candidate = _floor_root(vhi)
    hi = hi_candidate + Fraction(1, scale)
    return lo, hi
