"""Cayley structures: affine maps from a face of a configuration to a dilated simplex.

A structure on a face ``tau`` is stored as an integer matrix with one row per
point of ``tau`` (in the face's index order) and one column per vertex of the
simplex.  Column ``i`` is the coordinate functional ``e_i* o pi`` read as a
value vector over ``tau``.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Sequence

from ._kernels import multisets_summing_to
from .lattice import (
    Sublattice,
    equal_up_to_coordinate_permutation,
    hermite_normal_form,
    rank,
    rational_nullspace,
    smith_normal_form,
    solve_integer,
    solve_rational,
    span_of_differences,
)
from .polyhedra import Face, dot

Row = tuple[int, ...]


class DomainError(ValueError):
    """Raised when an operation's preconditions fail on valid data."""


def _is_affine(points: Sequence[Sequence[int]], column: Sequence[int]) -> bool:
    """Do the values extend to an affine function on the affine span of the points?"""
    p0 = points[0]
    rows = [[Fraction(a - b) for a, b in zip(p, p0)] + [Fraction(c - column[0])]
            for p, c in zip(points, column)]
    # reduce the difference rows and check the value column never becomes a lone pivot
    ncols = len(p0)
    r = 0
    for c in range(ncols + 1):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        if c == ncols:
            return False
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return True


@dataclass(frozen=True)
class WeakCayleyStructure:
    face: Face
    values: tuple[Row, ...]

    def __post_init__(self):
        vals = tuple(tuple(int(x) for x in r) for r in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(self.face.indices):
            raise DomainError("one row per point of the face is required")
        if len({len(r) for r in vals}) != 1 or len(vals[0]) < 2:
            raise DomainError("rows must have a common length of at least two")
        if any(x < 0 for r in vals for x in r):
            raise DomainError("values must be nonnegative")
        if len({sum(r) for r in vals}) != 1:
            raise DomainError("rows must have a common sum (the degree)")
        if len(set(vals)) == 1:
            raise DomainError("map is constant")
        pts = self.face.points
        for col in self.columns:
            if not _is_affine(pts, col):
                raise DomainError("values are not affine-linear on the face")

    @property
    def length(self) -> int:
        return len(self.values[0]) - 1

    @property
    def degree(self) -> int:
        return sum(self.values[0])

    @property
    def columns(self) -> tuple[Row, ...]:
        return tuple(zip(*self.values))

    @property
    def image(self) -> tuple[Row, ...]:
        """The image set pi(tau), sorted."""
        return tuple(sorted(set(self.values)))

    def value_at(self, point_index: int) -> Row:
        return self.values[self.face.indices.index(point_index)]

    def mapping(self) -> dict:
        return {self.face.config.points[i]: r for i, r in zip(self.face.indices, self.values)}

    @cached_property
    def canonical_values(self) -> tuple[Row, ...]:
        cols = sorted(self.columns, reverse=True)
        return tuple(zip(*cols))

    def canonical(self):
        return type(self)(self.face, self.canonical_values)

    def equivalent(self, other: "WeakCayleyStructure") -> bool:
        return self.face == other.face and self.canonical_values == other.canonical_values

    @property
    def class_hash(self) -> str:
        """Stable short hash of the equivalence class (face indices plus canonical matrix)."""
        text = repr((self.face.indices, self.canonical_values))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def restrict(self, sub: Face) -> "WeakCayleyStructure | None":
        """Restriction to a subface; None when the restriction is constant."""
        pos = {j: k for k, j in enumerate(self.face.indices)}
        rows = tuple(self.values[pos[i]] for i in sub.indices)
        if len(set(rows)) == 1:
            return None
        return WeakCayleyStructure(sub, rows)

    def compose(self, phi: Sequence[int], new_length: int) -> "WeakCayleyStructure":
        """Compose with the simplex map sending e_i to e_{phi[i]}."""
        rows = []
        for r in self.values:
            w = [0] * (new_length + 1)
            for i, x in enumerate(r):
                w[phi[i]] += x
            rows.append(tuple(w))
        if len(set(rows)) == 1:
            return None
        return WeakCayleyStructure(self.face, tuple(rows))


class CayleyStructure(WeakCayleyStructure):
    """A weak structure that is basepoint-free and concise."""

    def __post_init__(self):
        super().__post_init__()
        info = classify_weak(self)
        if info["basepoints"]:
            raise DomainError("structure has basepoints")
        if not info["concise"]:
            raise DomainError("structure is not concise")

    @classmethod
    def from_weak(cls, w: WeakCayleyStructure) -> "CayleyStructure":
        return cls(w.face, w.values)


def classify_weak(w: WeakCayleyStructure) -> dict:
    cols = w.columns
    return {
        "basepoints": tuple(i for i, c in enumerate(cols) if min(c) > 0),
        "concise": all(any(c) for c in cols),
    }


def resolution(w: WeakCayleyStructure) -> WeakCayleyStructure:
    mins = [min(c) for c in w.columns]
    if not any(mins):
        return w
    rows = tuple(tuple(x - m for x, m in zip(r, mins)) for r in w.values)
    return WeakCayleyStructure(w.face, rows)


def concision(w: WeakCayleyStructure) -> WeakCayleyStructure:
    keep = [i for i, c in enumerate(w.columns) if any(c)]
    if len(keep) == len(w.columns):
        return w
    rows = tuple(tuple(r[i] for i in keep) for r in w.values)
    return WeakCayleyStructure(w.face, rows)


def normalize(w: WeakCayleyStructure) -> CayleyStructure:
    """concision o resolution, returned as a Cayley structure."""
    return CayleyStructure.from_weak(concision(resolution(w)))


# ---------------------------------------------------------------- image-set predicates

def image_lattice(image: Sequence[Row]) -> Sublattice:
    return span_of_differences(list(image))


def _image_dim(image) -> int:
    return image_lattice(image).rank


def set_is_primitive(image: Sequence[Row]) -> bool:
    image = sorted(set(tuple(r) for r in image))
    ell = len(image[0]) - 1
    lat = image_lattice(image)
    if lat.rank == 1:
        if ell > 1:
            return False
        g = 0
        for x in lat.basis[0]:
            g = gcd(g, x)
        return g == 1
    return True


def set_is_cuspidal(image: Sequence[Row]) -> bool:
    image = sorted(set(tuple(r) for r in image))
    ell = len(image[0]) - 1
    for i in range(ell + 1):
        for v in image:
            if v[i] == 0 and all(w[i] > 1 for w in image if w != v):
                return True
    return False


def nodal_case1(image: Sequence[Row]) -> bool:
    image = sorted(set(tuple(r) for r in image))
    ell = len(image[0]) - 1
    for i, j in itertools.combinations(range(ell + 1), 2):
        for v in image:
            if v[i] == 0 and v[j] == 0 and all(w[i] > 0 and w[j] > 0 for w in image if w != v):
                return True
    return False


TABLE1_GENERATORS = (
    ((1, 1, -1, -1, 0, 0), (1, 1, 0, 0, -1, -1)),
    ((2, -1, -1, 0, 0), (2, 0, 0, -1, -1)),
    ((2, -2, 0, 0), (2, 0, -1, -1)),
    ((2, -2, 0), (2, 0, -2)),
    ((2, -2, 0), (2, -1, -1)),
)


def table1_lattices() -> tuple[Sublattice, ...]:
    return tuple(Sublattice.from_generators(g, len(g[0])) for g in TABLE1_GENERATORS)


def table1_case(lat: Sublattice) -> int | None:
    """1-based Table 1 case matched by ``lat`` up to coordinate permutation, or None."""
    for k, t in enumerate(table1_lattices(), start=1):
        if t.ambient_rank == lat.ambient_rank and equal_up_to_coordinate_permutation(lat, t):
            return k
    return None


def has_unit_difference(lat: Sublattice) -> bool:
    n = lat.ambient_rank
    for i, j in itertools.combinations(range(n), 2):
        v = [0] * n
        v[i], v[j] = 1, -1
        if lat.__contains__(v):
            return True
    return False


def nodal_case2(image: Sequence[Row]) -> bool:
    image = sorted(set(tuple(r) for r in image))
    lat = image_lattice(image)
    if lat.rank != 2 or has_unit_difference(lat):
        return False
    return table1_case(lat) is None


def set_is_nodal(image: Sequence[Row]) -> bool:
    return nodal_case1(image) or nodal_case2(image)


def _require_primitive(pi: WeakCayleyStructure):
    if not is_primitive(pi):
        raise DomainError("structure is imprimitive")


def is_primitive(pi: WeakCayleyStructure) -> bool:
    return set_is_primitive(pi.image)


def is_cuspidal(pi: WeakCayleyStructure) -> bool:
    _require_primitive(pi)
    return set_is_cuspidal(pi.image)


def is_nodal(pi: WeakCayleyStructure) -> bool:
    _require_primitive(pi)
    return set_is_nodal(pi.image)


def is_smooth(pi: WeakCayleyStructure) -> bool:
    _require_primitive(pi)
    return not set_is_cuspidal(pi.image) and not set_is_nodal(pi.image)


def classify(pi: WeakCayleyStructure) -> dict:
    """Full classification record of a structure's image set."""
    image = pi.image
    prim = set_is_primitive(image)
    out = {"primitive": prim, "cuspidal": None, "nodal": None, "nodal_case": None, "smooth": None}
    if prim:
        c1, c2 = nodal_case1(image), nodal_case2(image)
        out["cuspidal"] = set_is_cuspidal(image)
        out["nodal"] = c1 or c2
        out["nodal_case"] = 1 if c1 else (2 if c2 else None)
        out["smooth"] = not out["cuspidal"] and not out["nodal"]
    return out


def reduction(pi: CayleyStructure) -> tuple[CayleyStructure, int]:
    """Reduction and multiplicity; a primitive structure is its own reduction."""
    if is_primitive(pi):
        return pi, 1
    lat = image_lattice(pi.image)
    g = lat.basis[0]
    c = next(j for j, x in enumerate(g) if x)
    b0 = pi.image[0]
    s = [(r[c] - b0[c]) // g[c] for r in pi.values]
    lo, hi = min(s), max(s)
    dprime = hi - lo
    if pi.degree % dprime:
        raise DomainError("degree is not a multiple of the reduced degree")
    rows = tuple((hi - x, x - lo) for x in s)
    return CayleyStructure(pi.face, rows), pi.degree // dprime


# ---------------------------------------------------------------- enumeration

def affine_functionals(face: Face, d: int) -> list[Row]:
    """Non-constant affine integer functionals on the face with values in [0, d] attaining 0.

    Each functional is returned as its value vector over the face's points.
    """
    pts = face.points
    k = face.dim
    if k == 0:
        return []
    # choose an affine basis among the points
    basis = [0]
    p0 = pts[0]
    for idx in range(1, len(pts)):
        cand = basis + [idx]
        if rank([[a - b for a, b in zip(pts[i], p0)] for i in cand[1:]]) == len(cand) - 1:
            basis = cand
            if len(basis) == k + 1:
                break
    # affine coordinates of every point with respect to the basis
    diffs = [[a - b for a, b in zip(pts[i], p0)] for i in basis[1:]]
    coords = []
    for p in pts:
        rhs = [a - b for a, b in zip(p, p0)]
        # solve sum_j lam_j diffs[j] = rhs
        lam = _solve_combination(diffs, rhs)
        coords.append((1 - sum(lam),) + tuple(lam))
    out = []
    for vals in itertools.product(range(d + 1), repeat=k + 1):
        if len(set(vals)) == 1:
            continue
        col = []
        ok = True
        for lam in coords:
            x = sum(l * v for l, v in zip(lam, vals))
            if x.denominator != 1 or x < 0 or x > d:
                ok = False
                break
            col.append(int(x))
        if ok and min(col) == 0:
            out.append(tuple(col))
    return sorted(set(out), reverse=True)


def _solve_combination(vectors, rhs) -> tuple[Fraction, ...]:
    """Coefficients expressing rhs in terms of linearly independent vectors."""
    m = len(vectors)
    n = len(rhs)
    rows = [[Fraction(vectors[j][i]) for j in range(m)] + [Fraction(rhs[i])] for i in range(n)]
    r = 0
    piv = []
    for c in range(m):
        p = next(i for i in range(r, n) if rows[i][c] != 0)
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(rows[i][m] != 0 for i in range(r, n)):
        raise ValueError("point outside the affine span")
    return tuple(rows[i][m] for i in range(m))


def enumerate_cayley_structures(face: Face, d: int, max_length: int | None = None) -> list[CayleyStructure]:
    """One canonical representative per equivalence class, all lengths."""
    if d < 1:
        raise DomainError("degree must be positive")
    gens = affine_functionals(face, d)
    target = tuple([d] * len(face.indices))
    size = -1 if max_length is None else max_length + 1
    out = []
    for combo in multisets_summing_to(gens, target, size):
        cols = sorted((gens[i] for i in combo), reverse=True)
        rows = tuple(zip(*cols))
        out.append(CayleyStructure(face, rows))
    out.sort(key=lambda p: (p.length, p.canonical_values))
    return out


# ---------------------------------------------------------------- pi star

@dataclass(frozen=True)
class PiStar:
    """Images pi*(e_i*) as vectors of the ambient dual (rational if needed).

    The vectors are determined modulo ``annihilator`` (functionals vanishing on
    the lattice of the face); they are stored in a canonical reduced form.
    """

    vectors: tuple[tuple, ...]
    annihilator: tuple[tuple[int, ...], ...]

    def __getitem__(self, i):
        return self.vectors[i]

    def integral(self, i) -> tuple[int, ...]:
        """Primitive positive integer multiple of pi*(e_i*) (for use as a direction)."""
        from .lattice import primitive
        return primitive(self.vectors[i])


@lru_cache(maxsize=4096)
def pi_star(pi: WeakCayleyStructure) -> PiStar:
    pts = pi.face.points
    n = len(pts[0])
    p0 = pts[0]
    A = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    ann = rational_nullspace(A, n) if A else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    ann_h = []
    if ann:
        h, _ = hermite_normal_form(ann)
        ann_h = [r for r in h if any(r)]
    vecs = []
    for col in pi.columns:
        b = [c - col[0] for c in col[1:]]
        w = solve_integer(A, b) if A else tuple([0] * n)
        if w is not None:
            w = list(w)
            for row in ann_h:
                c = next(j for j, x in enumerate(row) if x)
                q = w[c] // row[c]
                if q:
                    w = [x - q * y for x, y in zip(w, row)]
            vecs.append(tuple(int(x) for x in w))
        else:
            wr = solve_rational(A, b)
            vecs.append(tuple(x if x.denominator != 1 else int(x) for x in wr))
    return PiStar(tuple(vecs), tuple(tuple(r) for r in ann_h))


# ---------------------------------------------------------------- stabilizers

def _cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen:
            continue
        c = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = perm[j]
        out.append(tuple(c))
    return out


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(len(c) for c in _cycles(perm)))


def _valid_cycle_type(perm) -> bool:
    ct = cycle_type(perm)
    if ct.count(1) != 2 or len(ct) < 3:
        return False
    rest = [x for x in ct if x != 1]
    return len(set(rest)) == 1


def stabilizer_candidates(pi: WeakCayleyStructure) -> list[tuple[int, ...]]:
    """Non-identity permutations sigma with pi o sigma = pi and cycle type (1,1,k,...,k)."""
    if pi.length == 1:
        raise DomainError("for length one the stabilizer is a one-dimensional torus")
    cols = pi.columns
    groups: dict = {}
    for i, c in enumerate(cols):
        groups.setdefault(c, []).append(i)
    blocks = [g for g in groups.values()]
    out = []
    per_block = [list(itertools.permutations(b)) for b in blocks]
    for choice in itertools.product(*per_block):
        perm = list(range(len(cols)))
        for b, img in zip(blocks, choice):
            for src, dst in zip(b, img):
                perm[src] = dst
        perm = tuple(perm)
        if perm == tuple(range(len(cols))):
            continue
        if _valid_cycle_type(perm):
            out.append(perm)
    return sorted(out)


def stabilizer_sublattice(pi: WeakCayleyStructure, sigma: Sequence[int] | None = None,
                          second: Sequence[int] | None = None) -> Sublattice:
    """Finite-index sublattice of the face lattice dual to the stabilizer quotient.

    ``sigma=None`` (the trivial stabilizer) returns the face lattice itself.
    With ``second`` given (a Klein four-group), the two kernels are intersected.
    """
    m_tau = span_of_differences(pi.face.points)
    if sigma is None:
        return m_tau
    lat = _kernel_mod(pi, sigma, m_tau)
    if second is not None:
        lat = _intersect(lat, _kernel_mod(pi, second, m_tau))
    return lat


def _kernel_mod(pi, sigma, m_tau: Sublattice) -> Sublattice:
    sigma = tuple(sigma)
    if sigma not in set(stabilizer_candidates(pi)):
        raise DomainError("permutation is not a stabilizer candidate")
    cyc = _cycles(sigma)
    fixed = sorted(c[0] for c in cyc if len(c) == 1)
    k = max(len(c) for c in cyc)
    b = fixed[1]
    # the functional u - v -> pi(u)_b - pi(v)_b evaluated on the basis of M_tau
    w = pi_star(pi)[b]
    vals = []
    for row in m_tau.basis:
        x = sum(Fraction(a) * Fraction(c) for a, c in zip(w, row))
        vals.append(int(x) % k)
    rel = _kernel_of_mod_map(vals, k)
    out = []
    for coeffs in rel:
        out.append([sum(c * m_tau.basis[i][j] for i, c in enumerate(coeffs))
                    for j in range(m_tau.ambient_rank)])
    return Sublattice.from_generators(out, m_tau.ambient_rank)


def _kernel_of_mod_map(vals: list[int], k: int) -> list[list[int]]:
    """Generators of {x in Z^r : sum vals_i x_i = 0 mod k}."""
    r = len(vals)
    # kernel of [vals | k] over Z, projected to the first r coordinates
    mat = [list(vals) + [k]]
    s, u, v = smith_normal_form(mat)
    nz = 1 if s[0][0] else 0
    gens = []
    for j in range(nz, r + 1):
        gens.append([v[i][j] for i in range(r)])
    return gens


def _intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    """Intersection of two sublattices of the same ambient lattice."""
    n = a.ambient_rank
    # x = sum s_i a_i = sum t_j b_j  <=>  [A; -B]^T (s, t) = 0
    rows = list(a.basis) + [tuple(-x for x in r) for r in b.basis]
    mat = [list(r) for r in rows]
    s, u, v = smith_normal_form([list(c) for c in zip(*mat)])
    r = sum(1 for i in range(min(len(s), len(s[0]))) if s[i][i])
    gens = []
    ra = len(a.basis)
    for j in range(r, len(rows)):
        coeffs = [v[i][j] for i in range(len(rows))]
        gens.append([sum(coeffs[i] * a.basis[i][c] for i in range(ra)) for c in range(n)])
    return Sublattice.from_generators(gens, n)
