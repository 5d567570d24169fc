import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleykit.lattice import (
    Sublattice,
    contains,
    det,
    equal_up_to_coordinate_permutation,
    hermite_normal_form,
    identity,
    index_in_saturation,
    matmul,
    smith_normal_form,
    solve_integer,
    span_of_differences,
)

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def _sympy_det(m):
    return int(sympy.Matrix(m).det())


def _is_row_hnf(h):
    last = -1
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        assert p > last
        assert row[p] > 0
        last = p
    return True


def brute_contains(basis, v, box=4):
    """Search small integer combinations of the basis (independent oracle)."""
    for coeffs in itertools.product(range(-box, box + 1), repeat=len(basis)):
        w = [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(len(v))]
        if w == list(v):
            return True
    return False


# ---------------------------------------------------------------- HNF

def test_hnf_identity():
    h, u = hermite_normal_form(identity(2))
    assert h == identity(2) and u == identity(2)


def test_hnf_already_reduced():
    h, u = hermite_normal_form([(3, 0, -3), (0, 3, -3)])
    assert h == ((3, 0, -3), (0, 3, -3))
    assert matmul(u, [(3, 0, -3), (0, 3, -3)]) == h
    assert abs(_sympy_det(u)) == 1


def test_hnf_small_example():
    # the reduced form has the entry above the pivot 2 taken mod 2, so (1,3) becomes (1,1)
    m = [(2, 4), (1, 3)]
    h, u = hermite_normal_form(m)
    assert h == ((1, 1), (0, 2))
    assert matmul(u, m) == h
    assert abs(_sympy_det(u)) == 1
    # same lattice as the unreduced basis {(1,3),(0,2)}
    assert Sublattice.from_generators([(1, 3), (0, 2)], 2) == Sublattice.from_generators(m, 2)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_properties(m):
    h, u = hermite_normal_form(m)
    assert matmul(u, m) == h
    assert abs(_sympy_det(u)) == 1
    assert _is_row_hnf(h)


# ---------------------------------------------------------------- SNF

def test_snf_identity():
    s, u, v = smith_normal_form(identity(3))
    assert s == identity(3)


@pytest.mark.parametrize("m, diag", [
    ([(2, -2, 0), (2, 0, -2)], (2, 2)),
    ([(3, 0, -3), (0, 3, -3)], (3, 3)),
])
def test_snf_examples(m, diag):
    s, u, v = smith_normal_form(m)
    assert tuple(s[i][i] for i in range(2)) == diag
    assert matmul(matmul(u, m), v) == s


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_properties(m):
    s, u, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == s
    assert abs(_sympy_det(u)) == 1 and abs(_sympy_det(v)) == 1
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    for i in range(len(s)):
        for j in range(len(s[0])):
            if i != j:
                assert s[i][j] == 0
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # the elementary divisors agree with sympy's
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf
    ref = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i] != 0)
    assert sorted(nz) == ref_diag


def test_det_matches_sympy():
    m = [(2, 1, 0), (1, 3, 5), (-2, 4, 1)]
    assert det(m) == _sympy_det(m)


# ---------------------------------------------------------------- sublattices

def test_span_of_differences_examples():
    assert span_of_differences([(0, 0, 3), (1, 2, 0)]) == Sublattice.from_generators([(1, 2, -3)], 3)
    assert span_of_differences([(4, 5)]).rank == 0
    assert span_of_differences([(2, 0, 0), (0, 2, 0), (0, 0, 2)]) == \
        Sublattice.from_generators([(2, -2, 0), (2, 0, -2)], 3)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(small_ints, small_ints, small_ints), min_size=1, max_size=5),
       st.tuples(small_ints, small_ints, small_ints))
def test_span_translation_invariant(points, shift):
    moved = [tuple(a + b for a, b in zip(p, shift)) for p in points]
    lat = span_of_differences(points)
    assert lat == span_of_differences(moved)
    assert lat.rank == sympy.Matrix([[a - b for a, b in zip(p, points[0])] for p in points]).rank()


def test_contains_examples():
    lat = Sublattice.from_generators([(2, -2, 0), (2, 0, -2)], 3)
    assert not contains(lat, (1, -1, 0))
    assert contains(lat, (2, -2, 0))
    assert not contains(Sublattice.from_generators([(3, 0, -3), (0, 3, -3)], 3), (1, 0, -1))


@settings(max_examples=120, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=2),
       st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_contains_agrees_with_brute_force(basis, coeffs):
    lat = Sublattice.from_generators(basis, 3)
    # a genuine member
    v = [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(3)]
    assert contains(lat, v)
    # a perturbed vector, decided by a small-box search over an integral basis
    w = [v[0] + 1, v[1], v[2]]
    assert contains(lat, w) == brute_contains(lat.basis, w, box=12)


def test_equal_up_to_permutation_examples():
    t4 = Sublattice.from_generators([(2, -2, 0), (2, 0, -2)], 3)
    swapped = Sublattice.from_generators([(-2, 2, 0), (0, 2, -2)], 3)
    t5 = Sublattice.from_generators([(2, -2, 0), (2, -1, -1)], 3)
    threes = Sublattice.from_generators([(3, 0, -3), (0, 3, -3)], 3)
    assert equal_up_to_coordinate_permutation(t4, swapped)
    assert not equal_up_to_coordinate_permutation(t4, t5)
    assert not equal_up_to_coordinate_permutation(threes, t4)


def _brute_perm_equal(a, b):
    return any(a.permuted(p) == b for p in itertools.permutations(range(a.ambient_rank)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=2),
       st.permutations(range(3)), st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                                            min_size=1, max_size=2))
def test_permutation_equivalence_relation(gens, perm, other):
    a = Sublattice.from_generators(gens, 3)
    b = a.permuted(perm)
    c = Sublattice.from_generators(other, 3)
    assert equal_up_to_coordinate_permutation(a, a)
    assert equal_up_to_coordinate_permutation(a, b)
    assert equal_up_to_coordinate_permutation(b, a)
    assert equal_up_to_coordinate_permutation(a, c) == _brute_perm_equal(a, c)
    if equal_up_to_coordinate_permutation(a, c):
        assert equal_up_to_coordinate_permutation(b, c)


def test_index_in_saturation():
    assert index_in_saturation(Sublattice.from_generators([(1, -1, 0), (0, 1, -1)], 3)) == 1
    assert index_in_saturation(Sublattice.from_generators([(2, -2, 0), (2, 0, -2)], 3)) == 4
    # Smith diagonal of {(2,-1,-1,0,0),(2,0,0,-1,-1)} is (1,1): already saturated
    assert index_in_saturation(Sublattice.from_generators([(2, -1, -1, 0, 0), (2, 0, 0, -1, -1)], 5)) == 1


def test_solve_integer():
    assert solve_integer([(2, 0), (0, 3)], (4, 9)) == (2, 3)
    assert solve_integer([(2, 0), (0, 3)], (1, 0)) is None
