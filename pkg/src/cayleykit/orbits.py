"""Torus-orbit degenerations of the curves attached to a Cayley structure.

Vectors ``v`` are one-parameter subgroups, written in the ambient dual
coordinates; functionals vanishing on the lattice of the face act trivially
and show up as lineality in every fan built here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cayley import (
    CayleyStructure,
    DomainError,
    WeakCayleyStructure,
    classify_weak,
    concision,
    is_primitive,
    pi_star,
    reduction,
    resolution,
)
from .lattice import primitive, smith_normal_form
from .polyhedra import (
    Cone,
    Face,
    Fan,
    LatticePolytope,
    common_refinement,
    convex_hull,
    dot,
    edge_endpoints,
    edge_lattice_length,
    face_cone,
    minimizing_face,
    normal_fan_of_polytope,
)


def edge_label(edge: Face) -> str:
    cfg = edge.config
    if cfg.labels:
        return "".join(sorted(cfg.label(i) for i in edge.indices if _is_endpoint(edge, i)))
    return "-".join(str(i) for i in edge.indices)


def _is_endpoint(edge: Face, i: int) -> bool:
    a, b = edge_endpoints(edge)
    return edge.config.points[i] in (a, b)


@dataclass(frozen=True)
class EdgeCycle:
    """Formal nonnegative integer combination of edges of a face."""

    terms: tuple[tuple[Face, int], ...]

    @classmethod
    def from_dict(cls, d: dict) -> "EdgeCycle":
        items = sorted(((f, m) for f, m in d.items() if m), key=lambda t: t[0].indices)
        return cls(tuple(items))

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.terms)

    def labels(self) -> dict[str, int]:
        return {edge_label(f): m for f, m in self.terms}

    def __str__(self):
        parts = []
        for f, m in self.terms:
            parts.append(edge_label(f) if m == 1 else f"{m}*{edge_label(f)}")
        return " + ".join(parts) if parts else "0"

    def __add__(self, other: "EdgeCycle") -> "EdgeCycle":
        d = self.as_dict()
        for f, m in other.terms:
            d[f] = d.get(f, 0) + m
        return EdgeCycle.from_dict(d)


@dataclass(frozen=True)
class FactoredTorusElement:
    """Product of cocharacters evaluated at nonzero rationals; the empty product is the identity."""

    factors: tuple[tuple[Fraction, tuple], ...] = ()

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def evaluate(self, m: Sequence[int]) -> Fraction:
        """Value of the character m."""
        out = Fraction(1)
        for s, c in self.factors:
            e = sum(Fraction(a) * Fraction(b) for a, b in zip(m, c))
            if e.denominator != 1:
                raise ValueError("character does not pair integrally with the cocharacter")
            out *= Fraction(s) ** int(e)
        return out


IDENTITY = FactoredTorusElement()


@dataclass(frozen=True)
class InteriorTerm:
    structure: CayleyStructure
    multiplicity: int


@dataclass(frozen=True)
class BoundaryTerm:
    face: Face
    index: int
    structure: CayleyStructure
    multiplicity: int
    translate: FactoredTorusElement | None  # None means symbolic (forms not supplied)


@dataclass(frozen=True)
class LimitCycle:
    interior: InteriorTerm | None
    boundary: tuple[BoundaryTerm, ...]
    generic: bool
    interior_valid_for_generic_f_only: bool = False

    @property
    def degree(self) -> int:
        total = 0
        if self.interior:
            total += self.interior.multiplicity * self.interior.structure.degree
        for b in self.boundary:
            total += b.multiplicity * b.structure.degree
        return total


# ---------------------------------------------------------------- helpers

def _direction(pi: WeakCayleyStructure, i: int) -> tuple[int, ...]:
    return pi_star(pi).integral(i)


def _column_on(pi: WeakCayleyStructure, face: Face, i: int) -> list[int]:
    pos = {j: k for k, j in enumerate(pi.face.indices)}
    return [pi.values[pos[u]][i] for u in face.indices]


def is_i_face(pi: WeakCayleyStructure, face: Face, i: int) -> bool:
    return len(set(_column_on(pi, face, i))) > 1


def _subfaces(pi: WeakCayleyStructure) -> list[Face]:
    return pi.face.subfaces()


def i_face_fan(pi: WeakCayleyStructure, i: int) -> list[tuple[Face, Cone]]:
    """Cones of the inner normal fan of the face whose faces are i-faces, with those faces."""
    if not 0 <= i <= pi.length:
        raise IndexError("coordinate index out of range")
    out = []
    for f in _subfaces(pi):
        if is_i_face(pi, f, i):
            out.append((f, face_cone(f, pi.face)))
    return out


def _ray_hits_relint(cone: Cone, v: Sequence[int], w: Sequence[int]) -> bool:
    """Is there t > 0 with v + t w in the relative interior of the cone?"""
    lo = Fraction(0)
    lo_strict = True
    hi = None
    hi_strict = True
    fixed = None
    for e in cone.equations:
        ev, ew = dot(e, v), dot(e, w)
        if ew == 0:
            if ev != 0:
                return False
            continue
        t = Fraction(-ev, ew)
        if fixed is not None and fixed != t:
            return False
        fixed = t
    for a in cone.facets:
        av, aw = dot(a, v), dot(a, w)
        # need av + t aw > 0
        if aw == 0:
            if av <= 0:
                return False
        elif aw > 0:
            t = Fraction(-av, aw)
            if t > lo or (t == lo and not lo_strict):
                lo, lo_strict = t, True
            elif t == lo:
                lo_strict = True
        else:
            t = Fraction(-av, aw)
            if hi is None or t < hi:
                hi, hi_strict = t, True
    if fixed is not None:
        if fixed <= 0:
            return False
        if fixed <= lo or (hi is not None and fixed >= hi):
            return False
        return True
    if hi is None:
        return True
    return hi > lo


def sigma_i_v(pi: WeakCayleyStructure, i: int, v: Sequence[int]) -> list[tuple[Face, Cone]]:
    w = _direction(pi, i)
    return [(f, c) for f, c in i_face_fan(pi, i) if _ray_hits_relint(c, v, w)]


def mult_i(pi: WeakCayleyStructure, i: int, edge: Face) -> int:
    if edge.dim != 1:
        raise DomainError("mult_i is defined on edges")
    col = _column_on(pi, edge, i)
    if len(set(col)) == 1:
        return 0
    num = max(col) - min(col)
    L = edge_lattice_length(edge)
    if num % L:
        raise ArithmeticError("difference is not a multiple of the lattice length")
    return num // L


def _edges(pi: WeakCayleyStructure) -> list[Face]:
    return [f for f in _subfaces(pi) if f.dim == 1]


class _PhiData:
    """Precomputed regions sigma_eps - R_{>=0} w_i for all i and all i-edges eps."""

    def __init__(self, pi: WeakCayleyStructure):
        self.pi = pi
        n = pi.face.config.ambient_rank
        self.n = n
        self.regions = []  # (edge, multiplicity, region cone)
        for i in range(pi.length + 1):
            w = _direction(pi, i)
            negw = tuple(-x for x in w)
            for e in _edges(pi):
                m = mult_i(pi, i, e)
                if not m:
                    continue
                sigma = face_cone(e, pi.face)
                region = Cone.from_generators(n, list(sigma.rays) + [negw], sigma.lineality)
                self.regions.append((e, m, region))

    def value(self, v: Sequence[int]) -> EdgeCycle:
        d: dict = {}
        for e, m, region in self.regions:
            if region.contains(v):
                d[e] = d.get(e, 0) + m
        return EdgeCycle.from_dict(d)


@lru_cache(maxsize=256)
def _phi_data(pi: WeakCayleyStructure) -> _PhiData:
    return _PhiData(pi)


def phi_value(pi: WeakCayleyStructure, v: Sequence[int]) -> EdgeCycle:
    return _phi_data(pi).value(v)


def mu(cycle: EdgeCycle) -> tuple[int, ...]:
    """Sum over edges of multiplicity times lattice length times the sum of the endpoints."""
    out = None
    for e, m in cycle.terms:
        a, b = edge_endpoints(e)
        L = edge_lattice_length(e)
        term = [m * L * (x + y) for x, y in zip(a, b)]
        out = term if out is None else [p + q for p, q in zip(out, term)]
    if out is None:
        return ()
    return tuple(out)


# ---------------------------------------------------------------- limits

def wedge(f, g) -> Fraction:
    """f(1,0) g(0,1) - g(1,0) f(0,1) for linear binary forms."""
    return f.evaluate(1, 0) * g.evaluate(0, 1) - g.evaluate(1, 0) * f.evaluate(0, 1)


def translate_t(pi: WeakCayleyStructure, i: int, forms=None) -> FactoredTorusElement | None:
    if pi.length == 1:
        return IDENTITY
    if forms is None:
        return None
    ps = pi_star(pi)
    factors = []
    for j in range(pi.length + 1):
        if j == i:
            continue
        factors.append((Fraction(wedge(forms[j], forms[i])), tuple(ps[j])))
    return FactoredTorusElement(tuple(factors))


def _red_res(w: WeakCayleyStructure) -> tuple[CayleyStructure, int]:
    base = concision(resolution(w))
    c = CayleyStructure(base.face, base.values)
    return reduction(c)


def limit_cycle(pi: CayleyStructure, v: Sequence[int], forms=None) -> LimitCycle:
    if not is_primitive(pi):
        raise DomainError("limit cycles are computed for primitive structures")
    v = tuple(int(x) for x in v)
    tv = minimizing_face(pi.face, v)
    restricted = pi.restrict(tv)
    interior = None
    if restricted is not None:
        red, m = _red_res(restricted)
        interior = InteriorTerm(red, m)
        bps = classify_weak(restricted)["basepoints"]
    else:
        row = pi.values[pi.face.indices.index(tv.indices[0])]
        bps = tuple(i for i, x in enumerate(row) if x > 0)
    boundary = []
    generic = tv.dim == 0
    for i in bps:
        t = translate_t(pi, i, forms)
        for f, cone in sigma_i_v(pi, i, v):
            if cone.dim != pi.face.config.ambient_rank - 1:
                generic = False
            col = _column_on(pi, f, i)
            rows = tuple((x, pi.degree - x) for x in col)
            red, m = _red_res(WeakCayleyStructure(f, rows))
            boundary.append(BoundaryTerm(f, i, red, m, t))
    boundary.sort(key=lambda b: (b.index, b.face.indices))
    return LimitCycle(interior, tuple(boundary), generic,
                      interior_valid_for_generic_f_only=interior is not None)


# ---------------------------------------------------------------- the fan Sigma_pi

def _canonical_hyperplane(a: Sequence[int]) -> tuple[int, ...]:
    a = primitive(a)
    k = next(j for j, x in enumerate(a) if x)
    return a if a[k] > 0 else tuple(-x for x in a)


def _split(cell: Cone, h: tuple[int, ...]):
    vals = [dot(h, g) for g in cell.generators]
    if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
        return None
    neg = tuple(-x for x in h)
    return (Cone.from_inequalities(cell.ambient_rank, list(cell.facets) + [h], cell.equations),
            Cone.from_inequalities(cell.ambient_rank, list(cell.facets) + [neg], cell.equations))


def arrangement_cells(n: int, hyperplanes: Sequence[Sequence[int]]) -> list[Cone]:
    """Full-dimensional cells of a central hyperplane arrangement."""
    cells = [Cone.whole_space(n)]
    for h in hyperplanes:
        nxt = []
        for c in cells:
            s = _split(c, tuple(h))
            if s is None:
                nxt.append(c)
            else:
                nxt.extend(s)
        cells = nxt
    return cells


@dataclass
class SigmaPi:
    """The fan Sigma_pi with the value of phi on each maximal cone."""

    fan: Fan
    phi: dict = field(default_factory=dict)  # cone key -> EdgeCycle

    def phi_of(self, cone: Cone) -> EdgeCycle:
        return self.phi[cone.key]


def sigma_pi(pi: CayleyStructure) -> SigmaPi:
    if not is_primitive(pi):
        raise DomainError("Sigma_pi is defined for primitive structures")
    data = _phi_data(pi)
    n = data.n
    hyps = []
    seen = set()
    for _, _, region in data.regions:
        for a in list(region.facets) + list(region.equations):
            h = _canonical_hyperplane(a)
            if h not in seen:
                seen.add(h)
                hyps.append(h)
    hyps.sort()
    cells = arrangement_cells(n, hyps)
    points = [c.interior_point() for c in cells]
    signs = [tuple(1 if dot(h, p) > 0 else -1 for h in hyps) for p in points]
    values = [data.value(p) for p in points]
    by_sign = {s: k for k, s in enumerate(signs)}
    parent = list(range(len(cells)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, s in enumerate(signs):
        for j in range(len(hyps)):
            t = s[:j] + (-s[j],) + s[j + 1:]
            other = by_sign.get(t)
            if other is not None and values[other] == values[k]:
                a, b = find(k), find(other)
                if a != b:
                    parent[a] = b
    groups: dict = {}
    for k in range(len(cells)):
        groups.setdefault(find(k), []).append(k)
    cones = []
    phi = {}
    for members in groups.values():
        gens = []
        lin = cells[members[0]].lineality
        for k in members:
            gens.extend(cells[k].rays)
        c = Cone.from_generators(n, gens, lin)
        cones.append(c)
        phi[c.key] = values[members[0]]
    fan = Fan(n, cones)
    return SigmaPi(fan, {c.key: phi[c.key] for c in fan.maximal_cones})


def build_sigma_pi(pi: CayleyStructure) -> Fan:
    return sigma_pi(pi).fan


def chow_polytope(pi: CayleyStructure) -> LatticePolytope:
    sp = sigma_pi(pi)
    pts = [mu(sp.phi_of(c)) for c in sp.fan.maximal_cones]
    return convex_hull(pts)


def conic_matroid_polytope(pi: CayleyStructure) -> LatticePolytope:
    if pi.degree != 2:
        raise DomainError("the conic matroid polytope needs degree two")
    pts = pi.face.points
    vals = pi.values
    out = set()
    k = len(pts)
    for a in range(k):
        for b in range(a + 1, k):
            if vals[a] == vals[b]:
                continue
            for c in range(b + 1, k):
                if vals[c] == vals[a] or vals[c] == vals[b]:
                    continue
                out.add(tuple(x + y + z for x, y, z in zip(pts[a], pts[b], pts[c])))
    if not out:
        raise DomainError("image has fewer than three points")
    return convex_hull(out)


def quotient_map(vectors: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    """Integer matrix P whose kernel is the rational span of ``vectors`` and whose image is saturated."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    s, u, v = smith_normal_form(vecs)
    k = sum(1 for i in range(min(len(s), n)) if s[i][i])
    return tuple(tuple(v[r][c] for r in range(n)) for c in range(k, n))


def project_along_lineality(fan: Fan) -> Fan:
    """Image of the fan in the quotient by its lineality space."""
    return fan.project(quotient_map(fan.lineality, fan.ambient_rank))


def conic_hilbert_fan(pi: CayleyStructure, project: bool = True) -> Fan:
    if pi.degree != 2:
        raise DomainError("the conic Hilbert fan needs degree two")
    base = build_sigma_pi(pi)
    other = normal_fan_of_polytope(conic_matroid_polytope(pi))
    fan = common_refinement(base, other)
    if project and pi.length == 1:
        fan = project_along_lineality(fan)
    return fan
