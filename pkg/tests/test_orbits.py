import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleykit.cayley import DomainError
from cayleykit.catalog import (
    face_by_points,
    fano,
    fano_nine,
    fano_pi,
    fano_pi_prime,
    image_structure,
    p3_structure,
    segment_identity,
    structure_from_functional,
)
from cayleykit.oracle import BinaryForm
from cayleykit.orbits import (
    EdgeCycle,
    conic_hilbert_fan,
    conic_matroid_polytope,
    chow_polytope,
    edge_label,
    i_face_fan,
    limit_cycle,
    mu,
    mult_i,
    phi_value,
    project_along_lineality,
    sigma_i_v,
    sigma_pi,
    translate_t,
    _PhiData,
)
from cayleykit.polyhedra import edge_lattice_length, normal_fan_of_polytope

FIG8_CHOW = [(2, 2, -2), (0, 2, -2), (3, 1, -1), (3, 0, 0), (2, -1, 1), (0, -2, 2),
             (-2, -2, 2), (-3, -1, 1), (-3, 0, 0), (-2, 1, -1)]


def _edge(*pts):
    return face_by_points(fano(), pts)


def _labels(cycle):
    return frozenset(cycle.labels().items())


def _lab(*pairs):
    return frozenset(pairs)


# ---------------------------------------------------------------- i-faces and ray tracing

def test_i_face_fan_excludes_flat_edges():
    faces = {edge_label(f) for f, _ in i_face_fan(fano_pi(), 0) if f.dim == 1}
    for flat in ("23", "56", "1A", "1B", "4A", "4B"):
        assert flat not in faces
    assert len(faces) == 18 - 6


def test_i_face_fan_contains_rays():
    rays = {c.rays[0] for f, c in i_face_fan(fano_pi(), 0) if c.dim == 1}
    assert (-1, 0, -1) in rays and (-1, 1, -1) in rays


def test_i_face_fan_segment():
    for i in (0, 1):
        cones = i_face_fan(segment_identity(), i)
        assert len(cones) == 1 and cones[0][1].dim == 0
    with pytest.raises(IndexError):
        i_face_fan(segment_identity(), 2)


def test_sigma_i_v_example():
    hits = sigma_i_v(fano_pi(), 0, (-1, -1, -1))
    rays = sorted(c.rays[0] for _, c in hits)
    assert all(c.dim == 1 for _, c in hits)
    assert rays == [(-1, 0, -1), (-1, 1, -1)]


def test_sigma_i_v_needs_positive_t():
    pi = fano_pi()
    # v on the ray (-1,0,-1) itself: t = 0 is excluded, and moving along (0,1,0) leaves the ray
    hits = sigma_i_v(pi, 0, (-1, 0, -1))
    assert all(c.rays != ((-1, 0, -1),) for _, c in hits)


def test_mult_i_examples():
    e = _edge((1, 1, 0), (0, 0, -1))
    assert edge_label(e) == "2B"
    assert mult_i(fano_pi(), 0, e) == 1
    assert mult_i(fano_pi_prime(), 0, e) == 2
    assert mult_i(fano_pi(), 0, _edge((1, 0, 0), (0, 0, 1))) == 0
    with pytest.raises(DomainError):
        mult_i(fano_pi(), 0, fano().full_face)


# ---------------------------------------------------------------- phi

def test_phi_values_pi_prime():
    sp = sigma_pi(fano_pi_prime())
    got = Counter(_labels(sp.phi_of(c)) for c in sp.fan.maximal_cones)
    want = Counter([_lab(("2B", 2)), _lab(("3B", 2)), _lab(("34", 1), ("4B", 1)), _lab(("34", 1), ("45", 1)),
                    _lab(("45", 1), ("4A", 1)), _lab(("5A", 2)), _lab(("6A", 2)), _lab(("16", 1), ("1A", 1)),
                    _lab(("12", 1), ("16", 1)), _lab(("12", 1), ("1B", 1))])
    assert got == want


def test_phi_values_pi():
    sp = sigma_pi(fano_pi())
    got = {_labels(sp.phi_of(c)) for c in sp.fan.maximal_cones}
    want = {_lab(("2B", 1), ("6B", 1)), _lab(("3B", 1), ("5B", 1)), _lab(("2A", 1), ("6A", 1)),
            _lab(("3A", 1), ("5A", 1)), _lab(("12", 1), ("16", 1)), _lab(("34", 1), ("45", 1))}
    assert got == want


def test_phi_segment_origin():
    # both coordinates contribute the edge once at v = 0
    c = phi_value(segment_identity(), (0,))
    assert c.total == 2 and len(c.terms) == 1


# ---------------------------------------------------------------- limits

def test_limit_example():
    lc = limit_cycle(fano_pi(), (-1, -1, -1))
    assert lc.interior is None
    assert lc.degree == 2
    assert not lc.generic
    faces = {b.face.indices for b in lc.boundary}
    want = {face_by_points(fano(), pts).indices for pts in
            ([(1, 1, 0), (0, 0, 1), (1, 0, 0)], [(0, 0, 1), (1, 0, 0), (0, -1, 0)])}
    assert faces == want
    for b in lc.boundary:
        assert b.index == 0 and b.multiplicity == 1 and b.translate.is_identity
        assert b.structure.length == 1 and b.structure.degree == 1


def test_limit_segment():
    lc = limit_cycle(segment_identity(), (1,))
    assert lc.interior is None and len(lc.boundary) == 1
    b = lc.boundary[0]
    assert b.face == segment_identity().face and b.multiplicity == 1 and lc.degree == 1


def test_limit_mirror():
    lc = limit_cycle(fano_pi(), (1, 1, 1))
    assert lc.interior is None and lc.degree == 2
    faces = {b.face.indices for b in lc.boundary}
    # the hexagon symmetry u -> -u swaps the two vertices (1,1,0) and (-1,-1,0)
    want = {face_by_points(fano(), pts).indices for pts in
            ([(-1, -1, 0), (0, 0, -1), (-1, 0, 0)], [(0, 0, -1), (-1, 0, 0), (0, 1, 0)])}
    assert faces == want
    assert all(b.index == 1 for b in lc.boundary)


def test_limit_interior_term():
    lc = limit_cycle(fano_pi(), (1, 0, 0))
    assert lc.interior is not None and lc.interior_valid_for_generic_f_only
    assert lc.degree == 2


def test_limit_rejects_imprimitive():
    with pytest.raises(DomainError):
        limit_cycle(image_structure(((0, 2), (2, 0))), (1, 0))


def test_translate_with_forms():
    pi = image_structure(((1, 1, 0), (0, 1, 1), (1, 0, 1)))
    forms = [BinaryForm((0, 1)), BinaryForm((1, 0)), BinaryForm((1, -2))]
    assert translate_t(pi, 0) is None
    t = translate_t(pi, 0, forms)
    assert not t.is_identity and len(t.factors) == 2
    assert translate_t(fano_pi(), 0, forms).is_identity


# ---------------------------------------------------------------- Sigma_pi

def test_sigma_pi_fano():
    fan = sigma_pi(fano_pi()).fan
    assert len(fan.maximal_cones) == 6
    assert fan.lineality == ((0, 1, 0),)
    proj = project_along_lineality(fan)
    rays = {tuple(abs(x) for x in r) for r in proj.rays}
    assert len(proj.rays) == 6
    assert sorted(map(tuple, (sorted(map(abs, r)) for r in proj.rays))) == \
        sorted([(0, 1), (0, 1), (1, 1), (1, 1), (1, 1), (1, 1)])
    assert rays


def test_sigma_pi_prime():
    fan = sigma_pi(fano_pi_prime()).fan
    assert len(fan.maximal_cones) == 10
    assert fan.lineality == ((0, 1, 1),)


def test_sigma_pi_p3():
    fan = sigma_pi(p3_structure()).fan
    assert len(fan.maximal_cones) == 6
    assert fan.lineality == ((1, 1, 1, 1),)
    # modulo the all-ones lineality the rays are +-e_i*
    assert len(fan.rays) == 8
    for r in fan.rays:
        counts = sorted(Counter(r).values())
        assert counts == [1, 3]


def test_chow_polytope_pi_prime():
    p = chow_polytope(fano_pi_prime())
    assert sorted(p.vertices) == sorted(FIG8_CHOW)
    two_2b = EdgeCycle.from_dict({_edge((1, 1, 0), (0, 0, -1)): 2})
    assert mu(two_2b) == (2, 2, -2)


def test_chow_of_torus_fixed_line():
    pi = image_structure(((0, 1), (1, 0)))
    assert chow_polytope(pi).vertices == (mu(EdgeCycle.from_dict({pi.face: 1})),)


def test_matroid_polytope_pi():
    p = conic_matroid_polytope(fano_pi())
    assert sorted(p.vertices) == sorted([(2, 0, 0), (-2, 0, 0), (1, 0, 1), (1, 0, -1), (-1, 0, 1), (-1, 0, -1)])


def test_matroid_polytope_p3():
    p = conic_matroid_polytope(p3_structure())
    want = [tuple(int(i in s) for i in range(4)) for s in itertools.combinations(range(4), 3)]
    assert sorted(p.vertices) == sorted(want)


def test_matroid_rejects_degree():
    cfg_pi = structure_from_functional(fano(), (0, 1, 0), offset=1)
    assert cfg_pi.degree == 2
    with pytest.raises(DomainError):
        conic_matroid_polytope(image_structure(((3, 0), (2, 1), (0, 3))))
    with pytest.raises(DomainError):
        conic_hilbert_fan(image_structure(((3, 0), (2, 1), (0, 3))))


def test_conic_fan_p3():
    fan = conic_hilbert_fan(p3_structure())
    assert len(fan.maximal_cones) == 12
    base = sigma_pi(p3_structure()).fan
    assert fan.refines(base)
    for c in base.maximal_cones:
        inside = [m for m in fan.maximal_cones if all(c.contains(r) for r in m.rays)]
        assert len(inside) == 2


@pytest.mark.parametrize("make", [fano_pi, fano_pi_prime])
def test_conic_fan_equals_sigma_pi(make):
    pi = make()
    assert conic_hilbert_fan(pi) == project_along_lineality(sigma_pi(pi).fan)
    assert conic_hilbert_fan(pi, project=False) == sigma_pi(pi).fan


# ---------------------------------------------------------------- invariants

def _walls(pi):
    """Hyperplanes bounding the regions that define phi; off these phi is locally constant."""
    out = set()
    for _, _, region in _PhiData(pi).regions:
        out.update(region.facets)
        out.update(region.equations)
    return out


def _generic_points(cone, walls, rng, tries=200, want=3):
    gens = list(cone.rays) + list(cone.lineality) + [tuple(-x for x in v) for v in cone.lineality]
    out = []
    for _ in range(tries):
        p = [0] * cone.ambient_rank
        for g in gens:
            c = rng.randint(1, 40)
            p = [a + c * b for a, b in zip(p, g)]
        p = tuple(p)
        if cone.contains_relint(p) and all(sum(a * b for a, b in zip(h, p)) for h in walls):
            out.append(p)
            if len(out) == want:
                break
    return out


STRUCTURES = fano_nine() + [fano_pi_prime(), p3_structure(),
                            image_structure(((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0))),
                            image_structure(((0, 0, 3), (2, 1, 0), (1, 2, 0)))]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(range(len(STRUCTURES))), st.lists(st.integers(-7, 7), min_size=4, max_size=4))
def test_limit_conserves_degree_and_matches_phi(k, raw):
    pi = STRUCTURES[k]
    v = tuple(raw[:pi.face.config.ambient_rank])
    lc = limit_cycle(pi, v)
    assert lc.degree == pi.degree
    if lc.generic:
        assert lc.interior is None
        support = {}
        for b in lc.boundary:
            support[b.face] = support.get(b.face, 0) + b.multiplicity
            # each component is the torus-fixed line of the edge, of degree L(edge)
            assert b.structure.degree == edge_lattice_length(b.face)
        assert support == phi_value(pi, v).as_dict()


@pytest.mark.parametrize("k", range(len(STRUCTURES)))
def test_sigma_pi_fan_and_chow(k):
    pi = STRUCTURES[k]
    sp = sigma_pi(pi)
    fan = sp.fan
    assert fan.is_valid() and fan.is_complete()
    values = [sp.phi_of(c) for c in fan.maximal_cones]
    assert len(set(values)) == len(values)
    rng = random.Random(k)
    walls = _walls(pi)
    for c, val in zip(fan.maximal_cones, values):
        samples = _generic_points(c, walls, rng)
        assert len(samples) >= 2
        for p in samples:
            assert phi_value(pi, p) == val
    chow = chow_polytope(pi)
    assert len(chow.vertices) == len(fan.maximal_cones)
    assert normal_fan_of_polytope(chow) == fan


@pytest.mark.parametrize("k", [i for i, p in enumerate(STRUCTURES) if p.degree == 2])
def test_conic_fan_refines(k):
    pi = STRUCTURES[k]
    assert conic_hilbert_fan(pi, project=False).refines(sigma_pi(pi).fan)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.sampled_from(range(18)), st.integers(0, 4)),
       st.dictionaries(st.sampled_from(range(18)), st.integers(0, 4)))
def test_mu_additive(a, b):
    edges = [f for f in fano().faces if f.dim == 1]
    ca = EdgeCycle.from_dict({edges[i]: m for i, m in a.items()})
    cb = EdgeCycle.from_dict({edges[i]: m for i, m in b.items()})
    total = mu(ca + cb)
    parts = [mu(ca), mu(cb)]
    parts = [p if p else (0, 0, 0) for p in parts]
    assert (total or (0, 0, 0)) == tuple(x + y for x, y in zip(*parts))
