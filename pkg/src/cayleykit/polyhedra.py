"""Exact polyhedral geometry: cones, fans, point configurations and polytopes.

Everything is computed with the double description method over the integers.
Cones live in a fixed ambient space Q^n and carry both representations:

* V: extreme rays plus a lineality basis,
* H: facet normals ``a`` (meaning ``a.x >= 0``) plus equations.

Both are normalized so that two cones describing the same set have identical
stored data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .lattice import (
    _int_row_reduce,
    primitive,
    rank,
    rational_nullspace,
    rref_primitive,
    span_of_differences,
)

Vector = tuple[int, ...]


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _prim(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _independent_rows(rows: list[Vector], k: int) -> list[int]:
    """Indices of a maximal linearly independent subset of ``rows`` (greedy)."""
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    chosen = []
    for idx, r in enumerate(rows):
        w = [Fraction(x) for x in r]
        for b, p in zip(basis, pivots):
            if w[p]:
                f = w[p] / b[p]
                w = [x - f * y for x, y in zip(w, b)]
        p = next((j for j, x in enumerate(w) if x), None)
        if p is None:
            continue
        basis.append(w)
        pivots.append(p)
        chosen.append(idx)
        if len(chosen) == k:
            break
    return chosen


def _inverse_columns(m: list[Vector]) -> list[Vector]:
    """Primitive integer vectors r_j with m r_j a positive multiple of e_j."""
    k = len(m)
    aug = [[int(x) for x in row] + [int(i == j) for j in range(k)] for i, row in enumerate(m)]
    rows, piv = _int_row_reduce(aug, k)
    # row i reads p_i x_i = (right block); clear the pivots with their lcm
    L = 1
    for i in range(k):
        p = abs(rows[i][i])
        L = L * p // gcd(L, p)
    return [primitive([rows[i][k + j] * (L // rows[i][i]) for i in range(k)]) for j in range(k)]


def double_description(ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]],
                       n: int) -> tuple[list[Vector], list[Vector]]:
    """Generators of ``{x in Q^n : a.x >= 0 (a in ineqs), e.x = 0 (e in eqs)}``.

    Returns ``(rays, lineality)``.  The rays are primitive, extreme and
    orthogonal to the lineality space, so they are uniquely determined.
    """
    A = tuple(tuple(int(x) for x in a) for a in ineqs)
    E = tuple(tuple(int(x) for x in e) for e in eqs)
    rays, lin = _double_description(A, E, n)
    return list(rays), list(lin)


@lru_cache(maxsize=65536)
def _double_description(A: tuple, E: tuple, n: int) -> tuple[tuple, tuple]:
    A = [a for a in A if any(a)]
    E = [e for e in E if any(e)]
    lin = rational_nullspace(A + E, n) if (A or E) else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    comp = E + lin
    if comp:
        B = rational_nullspace(comp, n)
    else:
        B = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    k = len(B)
    if k == 0:
        return (), tuple(tuple(v) for v in lin)
    # constraints in the coordinates y of W = span(B), where x = sum y_j B_j
    cons = []
    seen = set()
    for a in A:
        row = _prim(tuple(dot(a, b) for b in B))
        if any(row) and row not in seen:
            seen.add(row)
            cons.append(row)
    init = _independent_rows(cons, k)
    assert len(init) == k, "restricted system is not pointed"
    order = init + [i for i in range(len(cons)) if i not in set(init)]
    cons = [cons[i] for i in order]
    rays = _inverse_columns(cons[:k])
    full = (1 << k) - 1
    masks = [full & ~(1 << j) for j in range(k)]
    for c in range(k, len(cons)):
        a = cons[c]
        vals = [dot(a, r) for r in rays]
        if all(v >= 0 for v in vals):
            bit = 1 << c
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            continue
        new_rays, new_masks = [], []
        pos, neg = [], []
        for r, m, v in zip(rays, masks, vals):
            if v > 0:
                new_rays.append(r)
                new_masks.append(m)
                pos.append((r, m, v))
            elif v == 0:
                new_rays.append(r)
                new_masks.append(m | (1 << c))
            else:
                neg.append((r, m, v))
        for rp, mp, vp in pos:
            for rn, mn, vn in neg:
                common = mp & mn
                if bin(common).count("1") < k - 2:
                    continue
                adjacent = True
                for r, m in zip(rays, masks):
                    if r is rp or r is rn:
                        continue
                    if m & common == common:
                        adjacent = False
                        break
                if adjacent:
                    w = _prim(tuple(vp * x - vn * y for x, y in zip(rn, rp)))
                    new_rays.append(w)
                    new_masks.append(common | (1 << c))
        rays, masks = new_rays, new_masks
    out = []
    for r in rays:
        x = _prim(tuple(sum(r[j] * B[j][i] for j in range(k)) for i in range(n)))
        out.append(x)
    return tuple(sorted(set(out))), tuple(tuple(v) for v in lin)


class Cone:
    """A rational polyhedral cone in Q^n with synchronized V- and H-descriptions."""

    __slots__ = ("ambient_rank", "rays", "lineality", "facets", "equations", "_key")

    def __init__(self, ambient_rank, rays, lineality, facets, equations):
        self.ambient_rank = ambient_rank
        self.rays = tuple(sorted(rays))
        self.lineality = rref_primitive(lineality, ambient_rank)
        self.facets = tuple(sorted(facets))
        self.equations = rref_primitive(equations, ambient_rank)
        self._key = (self.lineality, self.rays)

    @classmethod
    def from_generators(cls, n: int, rays: Iterable[Sequence[int]],
                        lineality: Iterable[Sequence[int]] = ()) -> "Cone":
        rays = [tuple(r) for r in rays]
        lineality = [tuple(v) for v in lineality]
        facets, eqs = double_description(rays, lineality, n)
        r, lin = double_description(facets, eqs, n)
        return cls(n, r, lin, facets, eqs)

    @classmethod
    def from_inequalities(cls, n: int, ineqs: Iterable[Sequence[int]],
                          eqs: Iterable[Sequence[int]] = ()) -> "Cone":
        r, lin = double_description(ineqs, eqs, n)
        facets, equations = double_description(r, lin, n)
        return cls(n, r, lin, facets, equations)

    @classmethod
    def whole_space(cls, n: int) -> "Cone":
        return cls.from_inequalities(n, [])

    # -- basic queries
    def __eq__(self, other):
        return isinstance(other, Cone) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Cone(rays={list(self.rays)}, lineality={list(self.lineality)})"

    @property
    def key(self):
        return self._key

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def generators(self) -> list[Vector]:
        """Rays together with both signs of each lineality vector."""
        out = list(self.rays)
        for v in self.lineality:
            out.append(v)
            out.append(tuple(-x for x in v))
        return out

    def contains(self, x: Sequence) -> bool:
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(a, x) >= 0 for a in self.facets))

    def contains_relint(self, x: Sequence) -> bool:
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(a, x) > 0 for a in self.facets))

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def interior_point(self) -> Vector:
        """A lattice point in the relative interior (sum of the rays)."""
        s = [0] * self.ambient_rank
        for r in self.rays:
            s = [a + b for a, b in zip(s, r)]
        return tuple(s)

    def intersect(self, other: "Cone") -> "Cone":
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient ranks differ")
        return Cone.from_inequalities(self.ambient_rank,
                                      self.facets + other.facets,
                                      self.equations + other.equations)

    def face_with(self, tight: Iterable[Sequence[int]]) -> "Cone":
        return Cone.from_inequalities(self.ambient_rank, self.facets,
                                      list(self.equations) + [tuple(a) for a in tight])

    def smallest_face_containing(self, other: "Cone") -> "Cone":
        gens = other.generators
        tight = [a for a in self.facets if all(dot(a, g) == 0 for g in gens)]
        return self.face_with(tight)

    def is_face(self, other: "Cone") -> bool:
        """True iff ``other`` is a face of this cone."""
        if not self.contains_cone(other):
            return False
        return self.smallest_face_containing(other) == other

    def faces(self) -> list["Cone"]:
        """All nonempty faces, including the cone itself."""
        seen = {self.key: self}
        stack = [self]
        while stack:
            c = stack.pop()
            for a in c.facets:
                f = c.face_with([a])
                if f.key not in seen:
                    seen[f.key] = f
                    stack.append(f)
        return sorted(seen.values(), key=lambda c: (c.dim, c.key))

    def facet_cones(self) -> list["Cone"]:
        return [self.face_with([a]) for a in self.facets]

    def project(self, matrix: Sequence[Sequence[int]]) -> "Cone":
        """Image under the linear map x -> matrix . x."""
        m = len(matrix)
        img = lambda v: tuple(dot(row, v) for row in matrix)
        return Cone.from_generators(m, [img(r) for r in self.rays],
                                    [img(v) for v in self.lineality])


class Fan:
    """A fan given by its maximal cones; all cones share the fan's lineality."""

    def __init__(self, ambient_rank: int, maximal_cones: Iterable[Cone]):
        self.ambient_rank = ambient_rank
        cones = {c.key: c for c in maximal_cones}
        # drop cones contained in others
        keep = []
        vals = sorted(cones.values(), key=lambda c: (-c.dim, c.key))
        for c in vals:
            if not any(d.dim > c.dim and d.is_face(c) for d in keep):
                keep.append(c)
        self.maximal_cones = tuple(sorted(keep, key=lambda c: c.key))

    def __repr__(self):
        return f"Fan(n={self.ambient_rank}, {len(self.maximal_cones)} maximal cones)"

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.ambient_rank == other.ambient_rank
                and set(c.key for c in self.maximal_cones) == set(c.key for c in other.maximal_cones))

    def __hash__(self):
        return hash(frozenset(c.key for c in self.maximal_cones))

    @property
    def lineality(self) -> tuple[Vector, ...]:
        if not self.maximal_cones:
            return ()
        return self.maximal_cones[0].lineality

    @cached_property
    def cones(self) -> list[Cone]:
        seen = {}
        for c in self.maximal_cones:
            for f in c.faces():
                seen.setdefault(f.key, f)
        return sorted(seen.values(), key=lambda c: (c.dim, c.key))

    @property
    def rays(self) -> list[Vector]:
        out = set()
        for c in self.maximal_cones:
            out.update(c.rays)
        return sorted(out)

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]

    def is_valid(self) -> bool:
        """Pairwise intersections of maximal cones are faces of both."""
        ms = self.maximal_cones
        lin = ms[0].lineality if ms else ()
        if any(c.lineality != lin for c in ms):
            return False
        for a, b in combinations(ms, 2):
            i = a.intersect(b)
            if not (a.is_face(i) and b.is_face(i)):
                return False
        return True

    def is_complete(self) -> bool:
        """Every maximal cone is full dimensional and every wall lies in exactly two of them."""
        n = self.ambient_rank
        if not self.maximal_cones:
            return False
        if any(c.dim != n for c in self.maximal_cones):
            return False
        count: dict = {}
        for c in self.maximal_cones:
            for f in c.facet_cones():
                count[f.key] = count.get(f.key, 0) + 1
        return all(v == 2 for v in count.values())

    def cone_containing(self, v: Sequence[int]) -> Cone | None:
        """The cone whose relative interior contains v."""
        for c in sorted(self.cones, key=lambda c: c.dim):
            if c.contains_relint(v):
                return c
        return None

    def project(self, matrix: Sequence[Sequence[int]]) -> "Fan":
        return Fan(len(matrix), [c.project(matrix) for c in self.maximal_cones])

    def refines(self, other: "Fan") -> bool:
        """Every maximal cone of self lies in some maximal cone of other."""
        return all(any(o.contains_cone(c) for o in other.maximal_cones)
                   for c in self.maximal_cones)


def common_refinement(f1: Fan, f2: Fan) -> Fan:
    if f1.ambient_rank != f2.ambient_rank:
        raise ValueError("fans live in different ambient spaces")
    top = max((c.dim for c in f1.maximal_cones), default=0)
    top = min(top, max((c.dim for c in f2.maximal_cones), default=0))
    out = []
    for a in f1.maximal_cones:
        for b in f2.maximal_cones:
            c = a.intersect(b)
            if c.dim == top:
                out.append(c)
    return Fan(f1.ambient_rank, out)


# ---------------------------------------------------------------- configurations

@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[Vector, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        if not pts:
            raise ValueError("configuration is empty")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("points have different lengths")
        if len(set(pts)) != len(pts):
            raise ValueError("points are not distinct")
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != len(pts):
                raise ValueError("label count does not match point count")
            object.__setattr__(self, "labels", labels)

    @property
    def ambient_rank(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    @cached_property
    def full_face(self) -> "Face":
        return Face(self, tuple(range(len(self.points))), _affine_dim(self.points), None)

    @cached_property
    def faces(self) -> tuple["Face", ...]:
        return tuple(_enumerate_faces(self))


def _affine_dim(points: Sequence[Vector]) -> int:
    return span_of_differences(points).rank


@dataclass(frozen=True)
class Face:
    """A face of a point configuration, recorded by the indices of its points."""

    config: PointConfiguration = field(repr=False)
    indices: tuple[int, ...]
    dim: int
    witness: tuple[Vector, int] | None = field(default=None, compare=False)

    @property
    def points(self) -> tuple[Vector, ...]:
        return tuple(self.config.points[i] for i in self.indices)

    def __len__(self):
        return len(self.indices)

    def label(self) -> str:
        return "".join(self.config.label(i) for i in self.indices) if self.config.labels else \
            "{" + ",".join(map(str, self.indices)) + "}"

    def is_subface_of(self, other: "Face") -> bool:
        return set(self.indices) <= set(other.indices)

    def subfaces(self) -> list["Face"]:
        """Faces of the configuration contained in this face (faces of faces are faces)."""
        s = set(self.indices)
        return [f for f in self.config.faces if set(f.indices) <= s]

    @property
    def lattice(self):
        return span_of_differences(self.points)


def _enumerate_faces(cfg: PointConfiguration) -> list[Face]:
    pts = cfg.points
    n = cfg.ambient_rank
    npts = len(pts)
    full = tuple(range(npts))
    if npts == 1:
        return [Face(cfg, full, 0, None)]
    homog = [(1,) + p for p in pts]
    facets, _ = double_description(homog, [], n + 1)
    facet_sets = {}
    for a in facets:
        tight = frozenset(i for i, h in enumerate(homog) if dot(a, h) == 0)
        if tight:
            facet_sets.setdefault(tight, []).append(a)
    # close facet point sets under intersection
    sets = {frozenset(full)}
    frontier = set(facet_sets)
    sets |= frontier
    while frontier:
        new = set()
        for s in frontier:
            for t in facet_sets:
                u = s & t
                if u and u not in sets:
                    new.add(u)
        sets |= new
        frontier = new
    faces = []
    for s in sets:
        idx = tuple(sorted(s))
        d = _affine_dim([pts[i] for i in idx])
        if len(idx) == npts:
            faces.append(Face(cfg, idx, d, None))
            continue
        w = [0] * (n + 1)
        for t, normals in facet_sets.items():
            if s <= t:
                for a in normals:
                    w = [x + y for x, y in zip(w, a)]
        faces.append(Face(cfg, idx, d, (tuple(w[1:]), -w[0])))
    faces.sort(key=lambda f: (f.dim, f.indices))
    return faces


def enumerate_faces(cfg: PointConfiguration) -> list[Face]:
    return list(cfg.faces)


def minimizing_face(face: Face, v: Sequence[int]) -> Face:
    """Subface of ``face`` on which the functional v attains its minimum."""
    vals = [dot(v, face.config.points[i]) for i in face.indices]
    m = min(vals)
    idx = tuple(i for i, x in zip(face.indices, vals) if x == m)
    if len(idx) == len(face.config.points):
        return face.config.full_face
    for f in face.config.faces:
        if f.indices == idx:
            return Face(face.config, idx, f.dim, (tuple(v), m))
    return Face(face.config, idx, _affine_dim([face.config.points[i] for i in idx]), (tuple(v), m))


def normal_cone(points: Sequence[Vector], face_idx: Sequence[int]) -> Cone:
    """Inner normal cone of the subset ``face_idx`` of ``points`` in the ambient dual."""
    n = len(points[0])
    sub = set(face_idx)
    u0 = points[face_idx[0]]
    eqs = [tuple(a - b for a, b in zip(points[i], u0)) for i in face_idx[1:]]
    ineqs = [tuple(a - b for a, b in zip(points[i], u0)) for i in range(len(points)) if i not in sub]
    # differences of all points span the lineality's annihilator
    return Cone.from_inequalities(n, ineqs, eqs)


def face_cone(face: Face, within: Face | None = None) -> Cone:
    """Cone of the inner normal fan of ``within`` (default: the whole configuration) at ``face``."""
    within = within or face.config.full_face
    pts = [face.config.points[i] for i in within.indices]
    pos = {j: k for k, j in enumerate(within.indices)}
    return normal_cone(pts, [pos[i] for i in face.indices])


def normal_fan(cfg_or_face) -> Fan:
    """Inner normal fan in the ambient dual; its lineality is the annihilator of the lattice span."""
    face = cfg_or_face.full_face if isinstance(cfg_or_face, PointConfiguration) else cfg_or_face
    verts = [f for f in face.subfaces() if f.dim == 0]
    return Fan(face.config.ambient_rank, [face_cone(v, face) for v in verts])


def edge_lattice_length(edge: Face) -> int:
    if edge.dim != 1:
        raise ValueError("edge_lattice_length needs a one-dimensional face")
    pts = edge.points
    lat = span_of_differences(pts)
    g = lat.basis[0]
    # endpoints are the extreme values of the coordinate along g
    vals = sorted(pts, key=lambda p: dot(p, g))
    diff = [a - b for a, b in zip(vals[-1], vals[0])]
    c = next(j for j, x in enumerate(g) if x)
    return abs(diff[c] // g[c])


def edge_endpoints(edge: Face) -> tuple[Vector, Vector]:
    pts = edge.points
    g = span_of_differences(pts).basis[0]
    vals = sorted(pts, key=lambda p: dot(p, g))
    return vals[0], vals[-1]


# ---------------------------------------------------------------- polytopes

@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many lattice points; facets are (normal, offset) with normal.x >= offset."""

    ambient_rank: int
    vertices: tuple[Vector, ...]
    facets: tuple[tuple[Vector, int], ...] = field(compare=False, default=())
    equations: tuple[tuple[Vector, int], ...] = field(compare=False, default=())

    @property
    def dim(self) -> int:
        return _affine_dim(self.vertices)

    def contains(self, x: Sequence[int]) -> bool:
        return (all(dot(a, x) == b for a, b in self.equations)
                and all(dot(a, x) >= b for a, b in self.facets))


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    pts = sorted(set(tuple(int(x) for x in p) for p in points))
    if not pts:
        raise ValueError("convex hull of nothing")
    n = len(pts[0])
    homog = [(1,) + p for p in pts]
    cone = Cone.from_generators(n + 1, homog)
    verts = []
    for r in cone.rays:
        assert r[0] > 0
        verts.append(tuple(x // r[0] for x in r[1:]))
    if not verts:
        # single point: the cone is a ray, handled by DD as a ray
        verts = [pts[0]]
    # the cone over a single point has the facet x0 >= 0, which bounds nothing
    facets = tuple(sorted((tuple(a[1:]), -a[0]) for a in cone.facets
                          if any(dot(a, (1,) + v) == 0 for v in verts)))
    eqs = tuple((tuple(e[1:]), -e[0]) for e in cone.equations)
    return LatticePolytope(n, tuple(sorted(verts)), facets, eqs)


def normal_fan_of_polytope(p: LatticePolytope) -> Fan:
    verts = list(p.vertices)
    if len(verts) == 1:
        return Fan(p.ambient_rank, [Cone.whole_space(p.ambient_rank)])
    return Fan(p.ambient_rank, [normal_cone(verts, [i]) for i in range(len(verts))])
