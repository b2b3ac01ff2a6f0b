"""Exact linear algebra over ordered fields (Fraction, QuadExt).

Small dense routines only; every matrix in this package has at most a
handful of rows.  All functions are pure and never touch floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InvalidModelError

_ZERO = Fraction(0)


def solve_square(rows, rhs):
    """Solve the square system rows * x = rhs; None when singular.

    Entries may be any field elements supporting +,-,*,/ and == 0 tests
    against Fraction(0).
    """
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def rank(rows) -> int:
    if not rows:
        return 0
    a = [list(r) for r in rows]
    m, n = len(a), len(a[0])
    rk = 0
    for col in range(n):
        piv = next((r for r in range(rk, m) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = a[rk][col]
        a[rk] = [v / inv for v in a[rk]]
        for r in range(m):
            if r != rk and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        rk += 1
        if rk == m:
            break
    return rk


def affine_rank(points) -> int:
    """Dimension of the affine hull of the given points (-1 if empty)."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in pts[1:]]
    return rank(diffs)


def integer_kernel_basis(normal) -> list[tuple[int, ...]]:
    """Basis of the lattice {w in Z^d : <w, normal> = 0} for integer normal.

    Returned as d-1 integer vectors (normal must be nonzero).
    """
    n = list(normal)
    d = len(n)
    rows = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    vals = n[:]
    # Sweep nonzero positions down to a single one using unimodular row ops.
    while True:
        nz = [i for i in range(d) if vals[i] != 0]
        if len(nz) <= 1:
            break
        i, j = nz[0], nz[1]
        g, x, y = _egcd(vals[i], vals[j])
        ri = [x * a + y * b for a, b in zip(rows[i], rows[j])]
        rj = [(-vals[j] // g) * a + (vals[i] // g) * b
              for a, b in zip(rows[i], rows[j])]
        rows[i], rows[j] = ri, rj
        vals[i], vals[j] = g, 0
    nz = [i for i in range(d) if vals[i] != 0]
    if not nz:
        raise InvalidModelError("zero normal vector has no hyperplane")
    pivot = nz[0]
    return [tuple(rows[i]) for i in range(d) if i != pivot]


def integer_point_on_hyperplane(normal, offset):
    """Integer u with <u, normal> = offset, or None when none exists.

    offset may be a Fraction; non-integers and non-multiples of gcd(normal)
    have no integer solutions.
    """
    off = Fraction(offset)
    if off.denominator != 1:
        return None
    target = off.numerator
    n = list(normal)
    d = len(n)
    g = 0
    for v in n:
        g = gcd(g, v)
    if g == 0 or target % g != 0:
        return None
    # combine coordinates by extended gcd
    coeffs = [0] * d
    cur_g = 0
    cur_comb = [0] * d
    for i in range(d):
        if n[i] == 0:
            continue
        if cur_g == 0:
            cur_g = abs(n[i])
            cur_comb = [0] * d
            cur_comb[i] = 1 if n[i] > 0 else -1
        else:
            g2, x, y = _egcd(cur_g, n[i])
            cur_comb = [x * c for c in cur_comb]
            cur_comb[i] += y
            cur_g = g2
    scale = target // cur_g
    return tuple(scale * c for c in cur_comb)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def symmetric_signature(matrix) -> tuple[int, int, int]:
    """Signature (n_plus, n_minus, n_zero) of a rational symmetric matrix,
    computed by exact congruence diagonalization."""
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    for i, row in enumerate(a):
        if len(row) != n:
            raise InvalidModelError("signature needs a square matrix")
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise InvalidModelError("matrix is not symmetric")
    pos = neg = zero = 0
    idx = list(range(n))

    def _swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                _swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                # make the diagonal nonzero: row/col k += row/col j
                for t in range(n):
                    a[k][t] += a[j][t]
                for t in range(n):
                    a[t][k] += a[t][j]
        p = a[k][k]
        if p == 0:
            zero += 1
            continue
        if p > 0:
            pos += 1
        else:
            neg += 1
        for r in range(k + 1, n):
            if a[r][k] != 0:
                f = a[r][k] / p
                for t in range(n):
                    a[r][t] -= f * a[k][t]
                for t in range(n):
                    a[t][r] -= f * a[t][k]
    del idx
    return pos, neg, zero


def is_negative_definite(matrix) -> bool:
    n = len(matrix)
    pos, neg, zero = symmetric_signature(matrix)
    return neg == n and pos == 0 and zero == 0


def lp_feasible_point(eq_rows, eq_rhs, nvars):
    """Feasible x >= 0 with eq_rows * x = eq_rhs, or None.

    Phase-1 simplex with Bland's rule; exact arithmetic over any ordered
    field closed under the entries (Fraction, QuadExt).
    """
    m = len(eq_rows)
    rows = [list(r) for r in eq_rows]
    rhs = list(eq_rhs)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    # tableau columns: nvars structural + m artificial + rhs
    tab = []
    for i in range(m):
        art = [_ZERO] * m
        art[i] = Fraction(1)
        tab.append(rows[i] + art + [rhs[i]])
    basis = [nvars + i for i in range(m)]
    total = nvars + m
    # Phase-1 objective: minimize the sum of artificials.  Reduced costs for
    # the (basic) artificial columns start at 0; artificials never re-enter.
    cost = [_ZERO] * (total + 1)
    for i in range(m):
        for j in range(nvars):
            cost[j] = cost[j] - tab[i][j]
        cost[total] = cost[total] - tab[i][total]

    while True:
        enter = next((j for j in range(nvars) if cost[j] < 0), None)  # Bland
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][total] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return None  # unbounded phase-1: cannot happen, defensive
        _, leave = best
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter

    if cost[total] != 0:  # optimum of phase-1 is -cost[total]
        return None
    x = [_ZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = tab[i][total]
        elif tab[i][total] != 0:
            return None  # artificial variable stuck at positive level
    return x


def cone_member(generators, v) -> bool:
    """Exact membership of v in the cone spanned by the generators."""
    gens = [list(g) for g in generators]
    if not gens:
        return all(c == 0 for c in v)
    d = len(gens[0])
    eq_rows = [[g[i] for g in gens] for i in range(d)]
    return lp_feasible_point(eq_rows, list(v), len(gens)) is not None


def system_feasible(ge_rows, ge_rhs, eq_rows=(), eq_rhs=()) -> bool:
    """Feasibility of {u free : ge_rows*u >= ge_rhs, eq_rows*u = eq_rhs}."""
    ge_rows = [list(r) for r in ge_rows]
    eq_rows = [list(r) for r in eq_rows]
    if not ge_rows and not eq_rows:
        return True
    d = len(ge_rows[0]) if ge_rows else len(eq_rows[0])
    rows = []
    rhs = []
    for r, b in zip(ge_rows, ge_rhs):
        # <u, r> - s = b, s >= 0, u = p - q
        rows.append([x for x in r] + [-x for x in r])
        rhs.append(b)
    slack_count = len(ge_rows)
    for r, b in zip(eq_rows, eq_rhs):
        rows.append([x for x in r] + [-x for x in r])
        rhs.append(b)
    nvars = 2 * d + slack_count
    full = []
    for i, row in enumerate(rows):
        s = [_ZERO] * slack_count
        if i < slack_count:
            s[i] = Fraction(-1)
        full.append(row + s)
    return lp_feasible_point(full, rhs, nvars) is not None
