"""Exact integer matrices and sublattices of Z^n.

Matrices are plain tuples of tuples of Python ints; nothing here ever touches
floating point.  Sublattices are kept in row Hermite normal form so that two
lattices are equal exactly when their stored bases are equal.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("matrix rows have different lengths")
    return m


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return ()
    bt = list(zip(*b)) if b else []
    if len(a[0]) != len(b):
        raise ValueError("incompatible shapes")
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def transpose(m: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(c) for c in zip(*m))


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``.  Pivots of
    ``h`` are positive and entries above a pivot lie in ``[0, pivot)``; zero
    rows are moved to the bottom.
    """
    a = [list(r) for r in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    u = [list(r) for r in identity(nrows)]
    piv_row = 0
    pivots = []
    for col in range(ncols):
        if piv_row == nrows:
            break
        for i in range(piv_row + 1, nrows):
            if a[i][col] == 0:
                continue
            p, q = a[piv_row][col], a[i][col]
            g, x, y = _xgcd(p, q)
            s, t = p // g, q // g
            # [[x, y], [-t, s]] has determinant 1
            ra, rb = a[piv_row], a[i]
            a[piv_row] = [x * e + y * f for e, f in zip(ra, rb)]
            a[i] = [-t * e + s * f for e, f in zip(ra, rb)]
            ua, ub = u[piv_row], u[i]
            u[piv_row] = [x * e + y * f for e, f in zip(ua, ub)]
            u[i] = [-t * e + s * f for e, f in zip(ua, ub)]
        if a[piv_row][col] == 0:
            continue
        if a[piv_row][col] < 0:
            a[piv_row] = [-e for e in a[piv_row]]
            u[piv_row] = [-e for e in u[piv_row]]
        p = a[piv_row][col]
        for i in range(piv_row):
            q = a[i][col] // p
            if q:
                a[i] = [e - q * f for e, f in zip(a[i], a[piv_row])]
                u[i] = [e - q * f for e, f in zip(u[i], u[piv_row])]
        pivots.append(col)
        piv_row += 1
    return as_matrix(a), as_matrix(u)


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(s, u, v)`` with ``u @ m @ v == s``.

    The diagonal of ``s`` is nonnegative and each entry divides the next.
    """
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if a else 0
    u = [list(r) for r in identity(nr)]
    v = [list(r) for r in identity(nc)]

    def row_op(i, j, x, y, z, w):
        # rows (i, j) <- [[x, y], [z, w]] @ rows (i, j)
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * e + y * f for e, f in zip(ri, rj)]
            mat[j] = [z * e + w * f for e, f in zip(ri, rj)]

    def col_op(i, j, x, y, z, w):
        # cols (i, j) <- cols (i, j) @ [[x, z], [y, w]]
        for mat in (a, v):
            for r in mat:
                e, f = r[i], r[j]
                r[i] = x * e + y * f
                r[j] = z * e + w * f

    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        if i0 != t:
            row_op(t, i0, 0, 1, 1, 0)
        if j0 != t:
            col_op(t, j0, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t] and a[i][t] % a[t][t] == 0:
                    row_op(t, i, 1, 0, -(a[i][t] // a[t][t]), 1)
                elif a[i][t]:
                    g, x, y = _xgcd(a[t][t], a[i][t])
                    s_, q_ = a[t][t] // g, a[i][t] // g
                    row_op(t, i, x, y, -q_, s_)
            for j in range(t + 1, nc):
                if a[t][j] and a[t][j] % a[t][t] == 0:
                    col_op(t, j, 1, 0, -(a[t][j] // a[t][t]), 1)
                    done = False
                elif a[t][j]:
                    g, x, y = _xgcd(a[t][t], a[t][j])
                    s_, q_ = a[t][t] // g, a[t][j] // g
                    col_op(t, j, x, y, -q_, s_)
                    done = False
            if any(a[i][t] for i in range(t + 1, nr)):
                continue
            if not done:
                continue
            p = a[t][t]
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % p), None)
            if bad is None:
                break
            # enforce divisibility: add offending row to pivot row
            row_op(t, bad[0], 1, 1, 0, 1)
        if a[t][t] < 0:
            for mat in (a, u):
                mat[t] = [-e for e in mat[t]]
        t += 1
    return as_matrix(a), as_matrix(u), as_matrix(v)


def smith_diagonal(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors of ``m``."""
    s, _, _ = smith_normal_form(m)
    return tuple(s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i])


def rank(m: Sequence[Sequence[int]]) -> int:
    if not m:
        return 0
    h, _ = hermite_normal_form(m)
    return sum(1 for r in h if any(r))


def _int_row_reduce(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduction: each pivot column is zero outside its pivot row."""
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        pv = pr[c]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f != 0:
                row = [pv * x - f * y for x, y in zip(rows[i], pr)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                rows[i] = [x // g for x in row] if g > 1 else row
        piv_cols.append(c)
        r += 1
    return rows[:r], piv_cols


def rational_nullspace(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Primitive integer basis of the right kernel ``{x : m x = 0}``."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    rows, piv_cols = _int_row_reduce([[int(x) for x in r] for r in m], ncols)
    pivset = set(piv_cols)
    basis = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        # x[fc] = 1, x[pc] = -rows[i][fc] / rows[i][pc]
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in zip(rows, piv_cols):
            if row[fc]:
                vec[pc] = Fraction(-row[fc], row[pc])
        basis.append(primitive(vec))
    return basis


def primitive(vec: Iterable) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector in the same direction."""
    vec = list(vec)
    if all(type(x) is int for x in vec):
        g = 0
        for x in vec:
            g = gcd(g, x)
        return tuple(vec) if g in (0, 1) else tuple(x // g for x in vec)
    vec = [Fraction(x) for x in vec]
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^n stored by its row-HNF basis (zero rows dropped)."""

    ambient_rank: int
    basis: IntMatrix

    @classmethod
    def from_generators(cls, gens: Iterable[Iterable[int]], ambient_rank: int) -> "Sublattice":
        gens = [tuple(int(x) for x in g) for g in gens]
        if any(len(g) != ambient_rank for g in gens):
            raise ValueError("generator of wrong length")
        if not gens:
            return cls(ambient_rank, ())
        h, _ = hermite_normal_form(gens)
        return cls(ambient_rank, tuple(r for r in h if any(r)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def permuted(self, perm: Sequence[int]) -> "Sublattice":
        """Image under the coordinate map sending coordinate ``i`` to ``perm[i]``."""
        gens = []
        for r in self.basis:
            w = [0] * self.ambient_rank
            for i, x in enumerate(r):
                w[perm[i]] = x
            gens.append(w)
        return Sublattice.from_generators(gens, self.ambient_rank)


def span_of_differences(points: Sequence[Sequence[int]]) -> Sublattice:
    """The lattice generated by all differences of the given points."""
    if not points:
        raise ValueError("need at least one point")
    p0 = points[0]
    n = len(p0)
    return Sublattice.from_generators(
        [[a - b for a, b in zip(p, p0)] for p in points[1:]], n)


def contains(lat: Sublattice, v: Sequence[int]) -> bool:
    if len(v) != lat.ambient_rank:
        raise ValueError("vector has wrong length")
    w = [int(x) for x in v]
    for row in lat.basis:
        c = next(j for j, x in enumerate(row) if x)
        q, r = divmod(w[c], row[c])
        if r:
            return False
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return not any(w)


def coordinates_in(lat: Sublattice, v: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coefficients of ``v`` with respect to ``lat.basis`` (None if v is not in lat)."""
    w = [int(x) for x in v]
    coeffs = []
    for row in lat.basis:
        c = next(j for j, x in enumerate(row) if x)
        q, r = divmod(w[c], row[c])
        if r:
            return None
        coeffs.append(q)
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return tuple(coeffs) if not any(w) else None


def index_in_saturation(lat: Sublattice) -> int:
    """Index of ``lat`` in (lat tensor Q) intersected with Z^n."""
    if lat.rank == 0:
        return 1
    out = 1
    for x in smith_diagonal(lat.basis):
        out *= x
    return out


def saturation(lat: Sublattice) -> Sublattice:
    """(lat tensor Q) intersected with Z^n."""
    if lat.rank == 0:
        return lat
    # the kernel of the kernel is the saturated span
    ker = rational_nullspace(lat.basis, lat.ambient_rank)
    if not ker:
        return Sublattice.from_generators(identity(lat.ambient_rank), lat.ambient_rank)
    return Sublattice.from_generators(rational_nullspace(ker, lat.ambient_rank), lat.ambient_rank)


def _column_invariants(lat: Sublattice) -> list[int]:
    # gcd of the image of the projection to each coordinate
    out = []
    for j in range(lat.ambient_rank):
        g = 0
        for r in lat.basis:
            g = gcd(g, r[j])
        out.append(g)
    return out


def equal_up_to_coordinate_permutation(l1: Sublattice, l2: Sublattice) -> bool:
    """True iff some permutation of coordinates carries ``l1`` onto ``l2``."""
    if l1.ambient_rank != l2.ambient_rank:
        raise ValueError("ambient ranks differ")
    if l1.rank != l2.rank:
        return False
    if l1.rank and smith_diagonal(l1.basis) != smith_diagonal(l2.basis):
        return False
    inv1, inv2 = _column_invariants(l1), _column_invariants(l2)
    if sorted(inv1) != sorted(inv2):
        return False
    n = l1.ambient_rank
    target = l2
    # coordinate i of l1 may only go to coordinates of l2 with the same invariant
    choices = [[j for j in range(n) if inv2[j] == inv1[i]] for i in range(n)]
    perm = [None] * n
    used = [False] * n

    def search(i):
        if i == n:
            return l1.permuted(perm) == target
        for j in choices[i]:
            if not used[j]:
                used[j] = True
                perm[i] = j
                if search(i + 1):
                    return True
                used[j] = False
        return False

    return search(0)


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer solution ``x`` of ``a x = b`` (None if there is none)."""
    nr = len(a)
    nc = len(a[0]) if a else 0
    if nr == 0:
        return tuple([0] * nc)
    s, u, v = smith_normal_form(a)
    ub = [sum(x * y for x, y in zip(row, b)) for row in u]
    y = [0] * nc
    for i in range(nr):
        d = s[i][i] if i < nc else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            q, r = divmod(ub[i], d)
            if r:
                return None
            y[i] = q
    return tuple(sum(v[i][j] * y[j] for j in range(nc)) for i in range(nc))


def solve_rational(a: Sequence[Sequence[int]], b: Sequence) -> tuple[Fraction, ...] | None:
    """A rational solution of ``a x = b`` lying in the row space of ``a``."""
    nr = len(a)
    nc = len(a[0]) if a else 0
    if nr == 0:
        return tuple([Fraction(0)] * nc)
    # x = a^T y with (a a^T) y = b, solved by least-norm elimination
    at = transpose(a)
    g = [[Fraction(sum(x * y for x, y in zip(r1, r2))) for r2 in a] for r1 in a]
    rhs = [Fraction(x) for x in b]
    aug = [g[i] + [rhs[i]] for i in range(nr)]
    piv = []
    r = 0
    for c in range(nr):
        p = next((i for i in range(r, nr) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(nr):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * yv for x, yv in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    if any(aug[i][nr] != 0 for i in range(r, nr)):
        return None
    y = [Fraction(0)] * nr
    for i, c in enumerate(piv):
        y[c] = aug[i][nr]
    x = tuple(sum(at[j][i] * y[i] for i in range(nr)) for j in range(nc))
    if any(sum(Fraction(ai) * xi for ai, xi in zip(row, x)) != Fraction(bi) for row, bi in zip(a, b)):
        return None
    return x


def permutations_preserving(invariants: Sequence) -> Iterable[tuple[int, ...]]:
    """All permutations of range(n) mapping each index to one with equal invariant."""
    n = len(invariants)
    for p in itertools.permutations(range(n)):
        if all(invariants[i] == invariants[p[i]] for i in range(n)):
            yield p


def rref_primitive(rows: Sequence[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical basis of the rational row space: reduced echelon rows scaled to primitive integers."""
    if not rows:
        return ()
    work, piv = _int_row_reduce([[int(x) for x in r] for r in rows], ncols)
    out = []
    for row, c in zip(work, piv):
        v = primitive(row)
        out.append(v if v[c] > 0 else tuple(-x for x in v))
    return tuple(out)
