"""Named configurations and structures used in examples, tests and the CLI."""
from __future__ import annotations

from .cayley import CayleyStructure
from .polyhedra import Face, PointConfiguration

# the singular Fano threefold: hexagon in the plane z = 0, its centre, and two apexes
FANO_POINTS = ((-1, -1, 0), (0, -1, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
               (-1, 0, 0), (0, 0, 0), (0, 0, 1), (0, 0, -1))
FANO_LABELS = ("5", "6", "1", "2", "3", "4", "O", "A", "B")


def fano() -> PointConfiguration:
    return PointConfiguration(FANO_POINTS, FANO_LABELS)


def fano_length_one(kind: int, c: int) -> tuple[int, int, int]:
    """Linear part w of the structure u -> (1 + w.u, 1 - w.u) from the family of nine."""
    base = [(1, 0, 0), (0, 1, 0), (1, -1, 0)][kind]
    return (base[0], base[1], c)


def structure_from_functional(cfg: PointConfiguration, w, offset: int = 1) -> CayleyStructure:
    rows = []
    for p in cfg.points:
        x = sum(a * b for a, b in zip(w, p))
        rows.append((offset + x, offset - x))
    return CayleyStructure(cfg.full_face, tuple(rows))


def fano_nine() -> list[CayleyStructure]:
    cfg = fano()
    return [structure_from_functional(cfg, fano_length_one(k, c))
            for k in range(3) for c in (-1, 0, 1)]


def fano_pi() -> CayleyStructure:
    return structure_from_functional(fano(), (0, 1, 0))


def fano_pi_prime() -> CayleyStructure:
    return structure_from_functional(fano(), (0, 1, 1))


def face_by_points(cfg: PointConfiguration, pts) -> Face:
    idx = tuple(sorted(cfg.points.index(tuple(p)) for p in pts))
    for f in cfg.faces:
        if f.indices == idx:
            return f
    raise ValueError("not a face")


def fano_tau() -> Face:
    return face_by_points(fano(), [(1, 0, 0), (0, -1, 0), (0, 0, 1)])


def _on_face(face: Face, assignment: dict) -> CayleyStructure:
    rows = tuple(assignment[face.config.points[i]] for i in face.indices)
    return CayleyStructure(face, rows)


def fano_pi_double_prime() -> CayleyStructure:
    """The length five degree two structure on tau."""
    return _on_face(fano_tau(), {
        (0, -1, 0): (0, 0, 0, 0, 1, 1),
        (1, 0, 0): (0, 0, 1, 1, 0, 0),
        (0, 0, 1): (1, 1, 0, 0, 0, 0),
    })


def fano_pi_triple_prime() -> CayleyStructure:
    return _on_face(fano_tau(), {
        (1, 0, 0): (1, 1),
        (0, -1, 0): (0, 2),
        (0, 0, 1): (2, 0),
    })


def simplex(ell: int) -> PointConfiguration:
    """Vertices of the unimodular simplex Delta_ell(1) in Z^(ell+1)."""
    return PointConfiguration(tuple(tuple(int(i == j) for j in range(ell + 1)) for i in range(ell + 1)))


def simplex_maximal(ell: int, d: int) -> CayleyStructure:
    """e_j -> e_{jd} + ... + e_{jd+d-1}."""
    cfg = simplex(ell)
    rows = []
    for j in range(ell + 1):
        r = [0] * ((ell + 1) * d)
        for k in range(d):
            r[j * d + k] = 1
        rows.append(tuple(r))
    return CayleyStructure(cfg.full_face, tuple(rows))


def p3_structure() -> CayleyStructure:
    """e_i -> e_i + e_{i+4} on the vertices of Delta_3(1)."""
    return simplex_maximal_interleaved(3, 2)


def simplex_maximal_interleaved(ell: int, d: int) -> CayleyStructure:
    """e_i -> e_i + e_{i+(ell+1)} + ...; equivalent to :func:`simplex_maximal`."""
    cfg = simplex(ell)
    n = ell + 1
    rows = []
    for i in range(n):
        r = [0] * (n * d)
        for k in range(d):
            r[i + k * n] = 1
        rows.append(tuple(r))
    return CayleyStructure(cfg.full_face, tuple(rows))


def segment() -> PointConfiguration:
    return PointConfiguration(((0,), (1,)))


def segment_identity() -> CayleyStructure:
    """u -> (u, 1 - u) on {0, 1}."""
    return CayleyStructure(segment().full_face, ((0, 1), (1, 0)))


def image_structure(image) -> CayleyStructure:
    """The inclusion of an image set B into the simplex, as a structure on B itself."""
    pts = tuple(sorted(set(tuple(p) for p in image)))
    cfg = PointConfiguration(pts)
    return CayleyStructure(cfg.full_face, pts)


FIG4_SETS = {
    "imprimitive": ((0, 0, 3), (1, 2, 0)),
    "cuspidal": ((0, 0, 3), (1, 2, 0), (1, 0, 2)),
    "nodal_case_1": ((0, 0, 3), (1, 2, 0), (2, 1, 0)),
    "nodal_case_2": ((0, 0, 3), (3, 0, 0), (0, 3, 0)),
}

TABLE1_REALIZATIONS = (
    ((1, 1, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0), (0, 0, 0, 0, 1, 1)),
    ((2, 0, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 0, 1, 1)),
    ((2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 1, 1)),
    ((2, 0, 0), (0, 2, 0), (0, 0, 2)),
    ((2, 0, 0), (0, 2, 0), (0, 1, 1)),
)
