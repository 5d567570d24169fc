"""The partial order on Cayley structures and the census of maximal smooth primitive classes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ._kernels import assign_columns
from .cayley import (
    CayleyStructure,
    WeakCayleyStructure,
    enumerate_cayley_structures,
    is_primitive,
    is_smooth,
)
from .polyhedra import PointConfiguration


def is_leq(lower: WeakCayleyStructure, upper: WeakCayleyStructure) -> bool:
    """Is ``lower`` obtained from ``upper`` by restricting to a face and merging coordinates?"""
    if lower.degree != upper.degree:
        return False
    if not lower.face.is_subface_of(upper.face):
        return False
    if lower.length > upper.length:
        return False
    pos = {j: k for k, j in enumerate(upper.face.indices)}
    rows = [upper.values[pos[i]] for i in lower.face.indices]
    sources = list(zip(*rows))
    return assign_columns(sources, lower.columns)


def structures_on_all_faces(cfg: PointConfiguration, d: int,
                            max_length: int | None = None) -> list[CayleyStructure]:
    out = []
    for face in cfg.faces:
        if face.dim >= 1:
            out.extend(enumerate_cayley_structures(face, d, max_length))
    return out


def _smooth_primitive(p: CayleyStructure) -> bool:
    return is_primitive(p) and is_smooth(p)


def maximal_elements(structures: Iterable[CayleyStructure]) -> list[CayleyStructure]:
    """Maxima of the partial order within the given collection of canonical representatives."""
    items = list(structures)
    # a strictly larger element has at least as many points and at least the same length
    order = sorted(range(len(items)), key=lambda i: (-len(items[i].face), -items[i].length))
    out = []
    for i in order:
        p = items[i]
        dominated = False
        for j in order:
            if j == i:
                continue
            q = items[j]
            if len(q.face) < len(p.face) or q.length < p.length:
                continue
            if q.face == p.face and q.length == p.length:
                # equal length and face: comparable only if equivalent, and classes are distinct
                continue
            if is_leq(p, q):
                dominated = True
                break
        if not dominated:
            out.append(p)
    out.sort(key=lambda p: (p.face.dim, p.face.indices, p.length, p.canonical_values))
    return out


def maximal_structures(cfg: PointConfiguration, d: int, filter: str = "smooth_primitive") -> list[CayleyStructure]:
    allp = structures_on_all_faces(cfg, d)
    if filter == "smooth_primitive":
        allp = [p for p in allp if _smooth_primitive(p)]
    elif filter != "all":
        raise ValueError(f"unknown filter {filter!r}")
    return maximal_elements(allp)


@dataclass(frozen=True)
class CensusEntry:
    structure: CayleyStructure
    face_dim: int
    component_dim: int


def hilbert_census(cfg: PointConfiguration, d: int) -> list[CensusEntry]:
    out = []
    for p in maximal_structures(cfg, d, "smooth_primitive"):
        out.append(CensusEntry(p, p.face.dim, p.length - 2 + p.face.dim))
    return out
