import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleykit.catalog import (
    FIG4_SETS,
    TABLE1_REALIZATIONS,
    face_by_points,
    fano,
    fano_nine,
    fano_pi,
    fano_pi_double_prime,
    fano_pi_prime,
    fano_tau,
    image_structure,
    p3_structure,
    simplex,
)
from cayleykit.cayley import (
    CayleyStructure,
    DomainError,
    WeakCayleyStructure,
    classify,
    classify_weak,
    concision,
    cycle_type,
    enumerate_cayley_structures,
    has_unit_difference,
    is_cuspidal,
    is_nodal,
    is_primitive,
    is_smooth,
    nodal_case1,
    normalize,
    pi_star,
    reduction,
    resolution,
    stabilizer_candidates,
    stabilizer_sublattice,
    table1_case,
)
from cayleykit.lattice import Sublattice, span_of_differences
from cayleykit.polyhedra import PointConfiguration


def _index_in(sub: Sublattice, sup: Sublattice) -> int:
    """[sup : sub] for full-rank sub inside sup, via Gram determinants (independent of the Smith code)."""
    a = sympy.Matrix(sub.basis)
    b = sympy.Matrix(sup.basis)
    return int(sympy.sqrt((a * a.T).det() / (b * b.T).det()))


# ---------------------------------------------------------------- brute-force enumeration oracle

def _affine_columns(points, d):
    """Value vectors in {0..d}^points that are affine, decided by the affine dependencies of the points."""
    homog = sympy.Matrix([[1, *p] for p in points]).T
    deps = homog.nullspace()
    out = []
    for col in itertools.product(range(d + 1), repeat=len(points)):
        if min(col) != 0 or len(set(col)) == 1:
            continue
        if all(sum(c * x for c, x in zip(dep, col)) == 0 for dep in deps):
            out.append(col)
    return out


def brute_force_classes(face, d):
    cols = _affine_columns(face.points, d)
    classes = set()
    for size in range(2, len(face) * d + 1):
        for combo in itertools.combinations_with_replacement(cols, size):
            if all(sum(c[k] for c in combo) == d for k in range(len(face))):
                classes.add(tuple(zip(*sorted(combo, reverse=True))))
    return classes


SMALL_CONFIGS = [
    PointConfiguration(((0,), (1,))),
    PointConfiguration(((0,), (1,), (2,))),
    PointConfiguration(((0, 0), (1, 0), (0, 1))),
    PointConfiguration(((0, 0), (1, 0), (0, 1), (1, 1))),
    PointConfiguration(((0, 0), (2, 0), (0, 1), (1, 1))),
]


@pytest.mark.parametrize("cfg", SMALL_CONFIGS)
@pytest.mark.parametrize("d", [1, 2])
def test_enumeration_matches_brute_force(cfg, d):
    for face in cfg.faces:
        if face.dim == 0:
            continue
        got = {p.canonical_values for p in enumerate_cayley_structures(face, d)}
        assert got == brute_force_classes(face, d)


@pytest.mark.parametrize("cfg", SMALL_CONFIGS + [fano(), simplex(2)])
def test_enumerated_structures_are_canonical(cfg):
    for p in enumerate_cayley_structures(cfg.full_face, 2):
        assert p.canonical_values == p.values
        for col in p.columns:
            assert min(col) == 0 and len(set(col)) > 1


# ---------------------------------------------------------------- restriction, resolution and concision on the Fano structure

def _pi_on_tau():
    return fano_pi().restrict(fano_tau())


def test_classify_weak_restriction():
    w = _pi_on_tau()
    # the value at (0,-1,0) is (0,2), so column 0 attains 0 and only index 1 is a basepoint
    assert classify_weak(w) == {"basepoints": (1,), "concise": True}


def _pi2_on_tau_prime():
    tau_p = face_by_points(fano(), [(0, -1, 0), (0, 0, 1)])
    return fano_pi_double_prime().restrict(tau_p)


def test_classify_weak_not_concise():
    w = _pi2_on_tau_prime()
    info = classify_weak(w)
    assert info["basepoints"] == () and not info["concise"]
    assert classify_weak(fano_pi()) == {"basepoints": (), "concise": True}


def test_resolution():
    r = resolution(_pi_on_tau())
    assert r.degree == 1
    m = r.mapping()
    assert m[(1, 0, 0)] == (1, 0) and m[(0, 0, 1)] == (1, 0) and m[(0, -1, 0)] == (0, 1)
    assert resolution(r) == r
    w = _pi2_on_tau_prime()
    assert resolution(w) == w


def test_concision():
    c = concision(_pi2_on_tau_prime())
    assert c.length == 3
    m = c.mapping()
    # up to relabelling the simplex vertices
    assert sorted(m[(0, -1, 0)]) == [0, 0, 1, 1]
    assert sorted(m[(0, 0, 1)]) == [0, 0, 1, 1]
    assert tuple(a + b for a, b in zip(m[(0, -1, 0)], m[(0, 0, 1)])) == (1, 1, 1, 1)
    assert concision(c) == c


def test_single_zero_column_dropped():
    cfg = PointConfiguration(((0,), (1,)))
    w = WeakCayleyStructure(cfg.full_face, ((1, 0, 1), (0, 0, 2)))
    c = concision(w)
    assert c.values == ((1, 1), (0, 2))


def test_reduction():
    red, m = reduction(CayleyStructure.from_weak(concision(_pi2_on_tau_prime())))
    assert red.degree == 1 and m == 2
    p = fano_pi()
    assert reduction(p) == (p, 1)
    two = image_structure(((0, 2), (2, 0)))
    red, m = reduction(two)
    assert red.degree == 1 and m == 2


# ---------------------------------------------------------------- classification

def test_primitive_examples():
    assert not is_primitive(image_structure(FIG4_SETS["imprimitive"]))
    assert is_primitive(fano_pi())
    assert not is_primitive(image_structure(((0, 2), (2, 0))))


def test_cuspidal_examples():
    assert is_cuspidal(image_structure(FIG4_SETS["cuspidal"]))
    rnc = image_structure(tuple((3 - i, i) for i in range(4)))
    assert not is_cuspidal(rnc)
    assert not is_cuspidal(image_structure(((2, 0, 0), (0, 2, 0), (0, 0, 2))))


def test_nodal_examples():
    assert classify(image_structure(FIG4_SETS["nodal_case_1"]))["nodal_case"] == 1
    assert classify(image_structure(FIG4_SETS["nodal_case_2"]))["nodal_case"] == 2
    assert not is_nodal(image_structure(((2, 0, 0), (0, 2, 0), (0, 0, 2))))


def test_smooth_examples():
    assert all(is_smooth(p) for p in fano_nine())
    assert not is_smooth(image_structure(FIG4_SETS["cuspidal"]))
    assert is_smooth(image_structure(((2, 0, 0), (0, 2, 0), (0, 0, 2))))


def test_predicates_reject_imprimitive():
    p = image_structure(FIG4_SETS["imprimitive"])
    for f in (is_cuspidal, is_nodal, is_smooth):
        with pytest.raises(DomainError):
            f(p)


@pytest.mark.parametrize("k", range(5))
def test_table1_realizations(k):
    p = image_structure(TABLE1_REALIZATIONS[k])
    assert table1_case(span_of_differences(p.image)) == k + 1
    assert is_primitive(p) and is_smooth(p)


def test_classification_depends_only_on_image():
    # the same image reached from the Fano configuration and from the image itself
    p = fano_pi()
    q = image_structure(p.image)
    assert classify(p) == classify(q)


def _simplex_points(ell, d):
    return [v for v in itertools.product(range(d + 1), repeat=ell + 1) if sum(v) == d]


@pytest.mark.parametrize("ell, d", [(2, 2), (2, 3), (3, 2), (4, 2), (5, 2)])
def test_nodal_case2_iff_not_table1(ell, d):
    seen = set()
    for triple in itertools.combinations(_simplex_points(ell, d), 3):
        try:
            p = image_structure(triple)
        except DomainError:
            continue  # not concise or has a basepoint
        if not is_primitive(p):
            continue
        lat = span_of_differences(p.image)
        if lat.rank != 2 or has_unit_difference(lat) or nodal_case1(p.image):
            continue
        assert is_nodal(p) == (table1_case(lat) is None)
        seen.add(is_nodal(p))
    assert seen, "no instance reached the rank-two case"


# ---------------------------------------------------------------- pi*

def test_pi_star_examples():
    assert tuple(pi_star(fano_pi())[0]) == (0, 1, 0)
    assert tuple(pi_star(fano_pi())[1]) == (0, -1, 0)
    assert tuple(pi_star(fano_pi_prime())[0]) == (0, 1, 1)


@pytest.mark.parametrize("cfg", [fano(), simplex(3), PointConfiguration(((0, 0), (2, 0), (0, 1), (1, 1)))])
def test_pi_star_identity(cfg):
    for face in cfg.faces:
        if face.dim == 0:
            continue
        for p in enumerate_cayley_structures(face, 2)[:40]:
            ps = pi_star(p)
            pts = face.points
            for i in range(p.length + 1):
                for a in range(len(pts)):
                    diff = [x - y for x, y in zip(pts[a], pts[0])]
                    val = sum(x * y for x, y in zip(ps[i], diff))
                    assert val == p.values[a][i] - p.values[0][i]


# ---------------------------------------------------------------- stabilizers

def test_stabilizer_candidates_p3():
    pi = p3_structure()
    cands = stabilizer_candidates(pi)
    sigma = (0, 5, 6, 7, 4, 1, 2, 3)
    assert sigma in cands
    assert cycle_type(sigma) == (1, 1, 2, 2, 2)
    assert (4, 5, 6, 7, 0, 1, 2, 3) not in cands
    for s in cands:
        rows = {tuple(r[s[i]] for i in range(len(r))) for r in pi.values}
        assert rows == set(pi.values)


def test_stabilizer_candidates_trivial():
    assert stabilizer_candidates(image_structure(((2, 0, 0), (0, 2, 0), (0, 1, 1)))) == []
    with pytest.raises(DomainError):
        stabilizer_candidates(fano_pi())


def test_stabilizer_sublattice_p3():
    pi = p3_structure()
    m_tau = pi.face.lattice
    assert stabilizer_sublattice(pi, None) == m_tau
    sub = stabilizer_sublattice(pi, (0, 5, 6, 7, 4, 1, 2, 3))
    assert all(v in m_tau for v in sub.basis)
    assert _index_in(sub, m_tau) == 2


def test_stabilizer_sublattice_index_divides_order():
    cfg = PointConfiguration(((0,), (1,)))
    for face in [cfg.full_face, simplex(2).full_face]:
        for p in enumerate_cayley_structures(face, 3):
            if p.length < 2:
                continue
            for s in stabilizer_candidates(p):
                k = max(cycle_type(s))
                sub = stabilizer_sublattice(p, s)
                assert k % _index_in(sub, p.face.lattice) == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_CONFIGS[2:]), st.integers(1, 2), st.data())
def test_normalize_gives_cayley_structure(cfg, d, data):
    structs = enumerate_cayley_structures(cfg.full_face, d)
    p = data.draw(st.sampled_from(structs))
    face = data.draw(st.sampled_from([f for f in cfg.faces if f.dim >= 1]))
    w = p.restrict(face)
    if w is None:
        return
    n = normalize(w)
    assert classify_weak(n) == {"basepoints": (), "concise": True}
    assert resolution(resolution(w)) == resolution(w)
    assert concision(concision(w)) == concision(w)
