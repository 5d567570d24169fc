"""JSON documents with exact numbers.

Every integer and rational is written as a decimal string ("3", "-1/2"), so
documents round-trip without loss.  ``encode_*`` functions produce plain
dicts and lists; ``decode_*`` functions rebuild the in-memory objects.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cayley import CayleyStructure, WeakCayleyStructure
from .polyhedra import Cone, Face, Fan, LatticePolytope, PointConfiguration

FORMAT_VERSION = "1"


class MalformedInput(ValueError):
    """The input document does not have the expected shape."""


# ---------------------------------------------------------------- numbers

def num(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(int(x))


def parse_num(s, where: str = "value") -> Fraction:
    if isinstance(s, bool):
        raise MalformedInput(f"{where}: expected a number, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise MalformedInput(f"{where}: expected a number string, got {s!r}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise MalformedInput(f"{where}: cannot parse {s!r} as a rational") from None


def parse_int(s, where: str = "value") -> int:
    q = parse_num(s, where)
    if q.denominator != 1:
        raise MalformedInput(f"{where}: expected an integer, got {s!r}")
    return int(q)


def vec(v) -> list[str]:
    return [num(x) for x in v]


def parse_vec(v, where: str = "vector") -> tuple[int, ...]:
    if not isinstance(v, list):
        raise MalformedInput(f"{where}: expected a list")
    return tuple(parse_int(x, f"{where}[{k}]") for k, x in enumerate(v))


def parse_qvec(v, where: str = "vector") -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise MalformedInput(f"{where}: expected a list")
    return tuple(parse_num(x, f"{where}[{k}]") for k, x in enumerate(v))


# ---------------------------------------------------------------- objects

def encode_configuration(cfg: PointConfiguration) -> dict:
    out: dict[str, Any] = {"points": [vec(p) for p in cfg.points]}
    if cfg.labels:
        out["labels"] = list(cfg.labels)
    return out


def decode_configuration(doc: dict) -> PointConfiguration:
    if not isinstance(doc, dict) or "points" not in doc:
        raise MalformedInput("missing field 'points'")
    pts = doc["points"]
    if not isinstance(pts, list) or not pts:
        raise MalformedInput("points: expected a nonempty list")
    points = tuple(parse_vec(p, f"points[{k}]") for k, p in enumerate(pts))
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise MalformedInput("labels: expected a list of strings")
    try:
        return PointConfiguration(points, tuple(labels) if labels is not None else None)
    except ValueError as e:
        raise MalformedInput(f"points: {e}") from None


def encode_face(face: Face) -> dict:
    return {"indices": vec(face.indices), "dim": num(face.dim), "label": face.label()}


def decode_face(doc: dict, cfg: PointConfiguration) -> Face:
    idx = tuple(sorted(parse_vec(doc.get("indices"), "face.indices")))
    for f in cfg.faces:
        if f.indices == idx:
            return f
    raise MalformedInput(f"face.indices: {list(idx)} is not a face of the configuration")


def encode_structure(pi: WeakCayleyStructure) -> dict:
    """Canonical representative and class hash."""
    return {
        "face": encode_face(pi.face),
        "length": num(pi.length),
        "degree": num(pi.degree),
        "values": [vec(r) for r in pi.canonical_values],
        "hash": pi.class_hash,
    }


def decode_structure(doc: dict, cfg: PointConfiguration, cls=CayleyStructure) -> WeakCayleyStructure:
    if not isinstance(doc, dict) or "face" not in doc or "values" not in doc:
        raise MalformedInput("structure: needs 'face' and 'values'")
    face = decode_face(doc["face"], cfg)
    rows = doc["values"]
    if not isinstance(rows, list):
        raise MalformedInput("structure.values: expected a list of rows")
    values = tuple(parse_vec(r, f"structure.values[{k}]") for k, r in enumerate(rows))
    return cls(face, values)


def encode_cone(c: Cone) -> dict:
    return {"dim": num(c.dim), "rays": [vec(r) for r in c.rays],
            "lineality": [vec(r) for r in c.lineality]}


def decode_cone(doc: dict, n: int) -> Cone:
    return Cone.from_generators(n, [parse_vec(r) for r in doc["rays"]],
                                [parse_vec(r) for r in doc["lineality"]])


def encode_fan(f: Fan) -> dict:
    return {
        "ambient_rank": num(f.ambient_rank),
        "lineality": [vec(r) for r in f.lineality],
        "rays": [vec(r) for r in sorted(f.rays)],
        "maximal_cones": [encode_cone(c) for c in sorted(f.maximal_cones, key=lambda c: c.key)],
    }


def decode_fan(doc: dict) -> Fan:
    n = parse_int(doc["ambient_rank"])
    return Fan(n, [decode_cone(c, n) for c in doc["maximal_cones"]])


def encode_polytope(p: LatticePolytope) -> dict:
    return {
        "ambient_rank": num(p.ambient_rank),
        "vertices": [vec(v) for v in p.vertices],
        "facets": [{"normal": vec(a), "offset": num(b)} for a, b in p.facets],
        "equations": [{"normal": vec(a), "offset": num(b)} for a, b in p.equations],
    }


def decode_polytope(doc: dict) -> LatticePolytope:
    return LatticePolytope(
        parse_int(doc["ambient_rank"]),
        tuple(parse_vec(v) for v in doc["vertices"]),
        tuple((parse_vec(x["normal"]), parse_int(x["offset"])) for x in doc["facets"]),
        tuple((parse_vec(x["normal"]), parse_int(x["offset"])) for x in doc["equations"]),
    )


# ---------------------------------------------------------------- documents

def dumps(doc: dict) -> str:
    out = {"format_version": FORMAT_VERSION}
    out.update(doc)
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be an object")
    if "format_version" not in doc:
        raise MalformedInput("missing field 'format_version'")
    if str(doc["format_version"]) != FORMAT_VERSION:
        raise MalformedInput(f"unsupported format_version {doc['format_version']!r}")
    return doc
