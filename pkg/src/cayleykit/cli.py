"""``cayley`` command-line tool.

Exit status: 0 on success, 1 when the mathematics rejects the request, 2 when
the input cannot be read.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import orbits, oracle, order
from .cayley import CayleyStructure, DomainError, classify
from .polyhedra import PointConfiguration
from .serialize import (
    MalformedInput,
    decode_configuration,
    decode_structure,
    dumps,
    encode_configuration,
    encode_face,
    encode_fan,
    encode_polytope,
    encode_structure,
    loads,
    num,
    parse_int,
    parse_vec,
    vec,
)
from .svg import emit_svg

COMMANDS = ("faces", "enumerate", "census", "classify", "limit", "fan", "chow", "conics", "verify")


class Job:
    def __init__(self, args, doc: dict):
        self.command = args.command
        self.doc = doc
        self.cfg: PointConfiguration = decode_configuration(doc)
        self.degree = args.degree
        if self.degree is None and "degree" in doc:
            self.degree = parse_int(doc["degree"], "degree")
        self.v = _parse_v(args.v) if args.v is not None else (
            parse_vec(doc["v"], "v") if "v" in doc else None)
        self.seed = args.seed
        self.selector = args.structure
        self.svg = args.svg
        self.projection = None
        if "projection" in doc:
            rows = doc["projection"]
            if not isinstance(rows, list):
                raise MalformedInput("projection: expected a list of rows")
            self.projection = tuple(parse_vec(r, f"projection[{k}]") for k, r in enumerate(rows))

    def need_degree(self) -> int:
        if self.degree is None:
            raise MalformedInput("--degree is required for this command")
        if self.degree < 1:
            raise MalformedInput("--degree must be positive")
        return self.degree

    def structure(self) -> CayleyStructure:
        """The structure named in the document, or selected by hash or index from the enumeration."""
        if "structure" in self.doc and self.selector is None:
            return decode_structure(self.doc["structure"], self.cfg)
        if self.selector is None:
            raise MalformedInput("a structure is required: give --structure or a 'structure' field")
        pool = order.structures_on_all_faces(self.cfg, self.need_degree())
        sel = self.selector
        if sel.isdigit() and len(sel) < 16:
            k = int(sel)
            if k >= len(pool):
                raise DomainError(f"structure index {k} out of range ({len(pool)} structures)")
            return pool[k]
        for p in pool:
            if p.class_hash == sel:
                return p
        raise DomainError(f"no structure with hash {sel}")


def _parse_v(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise MalformedInput(f"--v: cannot parse {text!r} as integers") from None


def _check_dim(job: Job, v):
    if len(v) != job.cfg.ambient_rank:
        raise MalformedInput(f"--v has {len(v)} entries, expected {job.cfg.ambient_rank}")


# ---------------------------------------------------------------- commands

def cmd_faces(job: Job) -> dict:
    faces = sorted(job.cfg.faces, key=lambda f: (f.dim, f.indices))
    return {"command": "faces", "configuration": encode_configuration(job.cfg),
            "faces": [encode_face(f) for f in faces]}


def _classified(p) -> dict:
    out = encode_structure(p)
    out["classification"] = {k: (None if v is None else (num(v) if isinstance(v, int) and not isinstance(v, bool) else v))
                             for k, v in classify(p).items()}
    return out


def cmd_enumerate(job: Job) -> dict:
    d = job.need_degree()
    items = []
    for p in order.structures_on_all_faces(job.cfg, d):
        items.append(_classified(p))
    return {"command": "enumerate", "degree": num(d), "count": num(len(items)), "structures": items}


def cmd_census(job: Job) -> dict:
    d = job.need_degree()
    entries = order.hilbert_census(job.cfg, d)
    out = []
    for e in entries:
        item = encode_structure(e.structure)
        item["face_dim"] = num(e.face_dim)
        item["component_dim"] = num(e.component_dim)
        out.append(item)
    return {"command": "census", "degree": num(d), "count": num(len(out)), "components": out}


def cmd_classify(job: Job) -> dict:
    return {"command": "classify", "structure": _classified(job.structure())}


def _cycle(c: orbits.EdgeCycle) -> list:
    return [{"edge": encode_face(f), "multiplicity": num(m)} for f, m in c.terms]


def _translate(t) -> dict | str:
    if t is None:
        return "symbolic"
    return {"factors": [{"scalar": num(s), "cocharacter": [num(x) for x in c]} for s, c in t.factors]}


def cmd_limit(job: Job) -> dict:
    pi = job.structure()
    if job.v is None:
        raise MalformedInput("--v is required for limit")
    _check_dim(job, job.v)
    lc = orbits.limit_cycle(pi, job.v)
    interior = None
    if lc.interior:
        interior = {"structure": encode_structure(lc.interior.structure),
                    "multiplicity": num(lc.interior.multiplicity)}
    return {
        "command": "limit",
        "structure": encode_structure(pi),
        "v": vec(job.v),
        "generic": lc.generic,
        "interior": interior,
        "interior_valid_for_generic_f_only": lc.interior_valid_for_generic_f_only,
        "boundary": [{"face": encode_face(b.face), "index": num(b.index),
                      "structure": encode_structure(b.structure),
                      "multiplicity": num(b.multiplicity),
                      "translate": _translate(b.translate)} for b in lc.boundary],
        "degree": num(lc.degree),
    }


def cmd_fan(job: Job) -> dict:
    pi = job.structure()
    sp = orbits.sigma_pi(pi)
    cones = []
    for c in sorted(sp.fan.maximal_cones, key=lambda c: c.key):
        cones.append({"rays": [vec(r) for r in c.rays], "phi": _cycle(sp.phi_of(c)),
                      "phi_text": str(sp.phi_of(c))})
    if job.svg:
        labels = {c.key: str(sp.phi_of(c)) for c in sp.fan.maximal_cones}
        _emit(job, sp.fan, labels)
    return {"command": "fan", "structure": encode_structure(pi), "fan": encode_fan(sp.fan), "regions": cones}


def cmd_chow(job: Job) -> dict:
    pi = job.structure()
    p = orbits.chow_polytope(pi)
    if job.svg:
        _emit(job, p)
    return {"command": "chow", "structure": encode_structure(pi), "polytope": encode_polytope(p)}


def cmd_conics(job: Job) -> dict:
    pi = job.structure()
    if pi.degree != 2:
        raise DomainError("conics needs a degree two structure")
    m = orbits.conic_matroid_polytope(pi)
    fan = orbits.conic_hilbert_fan(pi, project=False)
    if job.svg:
        _emit(job, fan)
    out = {"command": "conics", "structure": encode_structure(pi),
           "matroid_polytope": encode_polytope(m), "fan": encode_fan(fan)}
    if pi.length == 1:
        out["projected_fan"] = encode_fan(orbits.project_along_lineality(fan))
    return out


def cmd_verify(job: Job) -> dict:
    pi = job.structure()
    seeds = (job.seed, job.seed + 1, job.seed + 2)
    a = oracle.verify(pi, seeds=seeds)

    def _v(x):
        return {"seed": num(x.seed), "image_degree": num(x.image_degree), "cusp": x.cusp, "node": x.node}

    return {"command": "verify", "structure": encode_structure(pi),
            "expected": {"image_degree": num(a.expected[0]), "cusp": a.expected[1], "node": a.expected[2]},
            "verdicts": [_v(x) for x in a.verdicts], "agree": a.agree}


def _emit(job: Job, obj, labels=None):
    proj = job.projection
    n = obj.ambient_rank
    if proj is None and n > 2:
        if hasattr(obj, "lineality") and obj.lineality and n - len(obj.lineality) == 2:
            proj = orbits.quotient_map(obj.lineality, n)
        else:
            raise DomainError("a 'projection' field is needed to draw in dimension above two")
    emit_svg(obj, job.svg, proj, labels)


HANDLERS = {
    "faces": cmd_faces, "enumerate": cmd_enumerate, "census": cmd_census, "classify": cmd_classify,
    "limit": cmd_limit, "fan": cmd_fan, "chow": cmd_chow, "conics": cmd_conics, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cayley", description="Cayley structures and torus-orbit degenerations.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="input JSON document")
    ap.add_argument("--degree", type=int)
    ap.add_argument("--v", help="one-parameter subgroup, e.g. \"-1,-1,-1\"")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--structure", help="class hash or enumeration index")
    ap.add_argument("--svg", help="write a picture to this path")
    ap.add_argument("--output", help="write the result here instead of stdout")
    return ap


def _join_vectors(argv: list[str]) -> list[str]:
    """Let ``--v -1,0,2`` through; argparse would read the value as an option."""
    out = []
    k = 0
    while k < len(argv):
        if argv[k] == "--v" and k + 1 < len(argv):
            out.append("--v=" + argv[k + 1])
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_join_vectors(argv))
    try:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise MalformedInput(f"cannot read {args.input}: {e.strerror}") from None
        job = Job(args, loads(text))
        result = HANDLERS[job.command](job)
    except MalformedInput as e:
        print(f"cayley: malformed input: {e}", file=sys.stderr)
        return 2
    except DomainError as e:
        print(f"cayley: {e}", file=sys.stderr)
        return 1
    text = dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
