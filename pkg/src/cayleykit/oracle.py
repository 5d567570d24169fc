"""Exact curve oracle: build the parametrized curve of a Cayley structure and test it directly.

Everything is over the rationals.  Polynomials are handled with sympy; node
detection works in exact residue fields Q[s]/(h) and never extracts roots.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Sequence

import sympy as sp

from .cayley import DomainError, WeakCayleyStructure, is_cuspidal, is_nodal, is_primitive, reduction
from .cayley import CayleyStructure

MAX_DEGREE = 4
MAX_POINTS = 8

S, T = sp.symbols("s t")


class OracleLimitError(DomainError):
    """Input is larger than the oracle is built for."""


@dataclass(frozen=True)
class BinaryForm:
    """sum_k coeffs[k] * y0^(degree-k) * y1^k."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, y0, y1) -> Fraction:
        d = self.degree
        return sum((c * Fraction(y0) ** (d - k) * Fraction(y1) ** k for k, c in enumerate(self.coeffs)),
                   Fraction(0))

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(tuple(out))

    def __pow__(self, k: int) -> "BinaryForm":
        out = BinaryForm((1,))
        for _ in range(k):
            out = out * self
        return out

    def scaled(self, c) -> "BinaryForm":
        return BinaryForm(tuple(Fraction(c) * x for x in self.coeffs))

    def root(self) -> tuple[Fraction, Fraction]:
        """Projective root (y0 : y1) of a linear form, normalized."""
        if self.degree != 1:
            raise ValueError("root() needs a linear form")
        a, b = self.coeffs  # a*y0 + b*y1
        if b == 0:
            return (Fraction(0), Fraction(1))
        return (Fraction(1), -a / b)

    def __str__(self):
        d = self.degree
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*y0^{d - k}*y1^{k}")
        return " + ".join(parts) or "0"


Y0 = BinaryForm((1, 0))
Y1 = BinaryForm((0, 1))


def wedge(f: BinaryForm, g: BinaryForm) -> Fraction:
    return f.evaluate(1, 0) * g.evaluate(0, 1) - g.evaluate(1, 0) * f.evaluate(0, 1)


def random_forms(ell: int, seed: int) -> tuple[BinaryForm, ...]:
    """y1, y0, then y0 - c*y1 with distinct random nonzero rationals c."""
    rng = random.Random(seed)
    forms = [Y1, Y0]
    used = set()
    while len(forms) < ell + 1:
        c = Fraction(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 10 ** 4))
        if c == 0 or c in used:
            continue
        used.add(c)
        forms.append(BinaryForm((1, -c)))
    return tuple(forms[:ell + 1])


@dataclass(frozen=True)
class CurveParametrization:
    forms: tuple[BinaryForm, ...]  # one per point of the face, in face order
    marked_points: tuple[tuple[Fraction, Fraction], ...]
    degree: int


def build_parametrization(pi: WeakCayleyStructure, f: Sequence[BinaryForm]) -> CurveParametrization:
    if len(f) != pi.length + 1:
        raise DomainError("need one linear form per coordinate")
    if any(g.degree != 1 or g.is_zero for g in f):
        raise DomainError("forms must be nonzero and linear")
    for i in range(len(f)):
        for j in range(i + 1, len(f)):
            if wedge(f[i], f[j]) == 0:
                raise DomainError("forms have a repeated root")
    F = []
    for row in pi.values:
        out = BinaryForm((1,))
        for g, e in zip(f, row):
            out = out * g ** e
        F.append(out)
    marks = tuple(g.root() for g in f)
    for p in marks:
        if all(h.evaluate(*p) == 0 for h in F):
            raise DomainError("parametrization has a basepoint")
    return CurveParametrization(tuple(F), marks, pi.degree)


def boundary_intersection(c: CurveParametrization) -> set[tuple[Fraction, Fraction]]:
    """Parameters where some coordinate form vanishes."""
    out = set()
    for h in c.forms:
        out.update(_projective_roots(h))
    return out


def _projective_roots(h: BinaryForm) -> set:
    """Rational projective roots of a binary form that splits into linear factors over Q."""
    roots = set()
    coeffs = list(h.coeffs)
    if not any(coeffs):
        raise ValueError("zero form")
    # (1:0) is a root iff the y0^d coefficient vanishes; the chart y1 = 1 sees all others
    if coeffs[0] == 0:
        roots.add((Fraction(1), Fraction(0)))
    if len(coeffs) > 1:
        x = sp.Symbol("x")
        d = len(coeffs) - 1
        poly = sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * x ** (d - k)
                           for k, c in enumerate(coeffs)), x)
        if poly.degree() > 0:
            for r in sp.roots(poly, filter="Q"):
                roots.add(_normalize_point(Fraction(int(r.p), int(r.q)), Fraction(1)))
    return {_normalize_point(*p) for p in roots}


def _normalize_point(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    if b == 0:
        return (Fraction(0), Fraction(1)) if a == 0 else (Fraction(1), Fraction(0))
    if a == 0:
        return (Fraction(0), Fraction(1))
    return (Fraction(1), b / a)


# ---------------------------------------------------------------- affine chart

def _q(x: Fraction):
    return sp.Rational(x.numerator, x.denominator)


def _lmul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _chart_polys(forms: Sequence[BinaryForm], c: Fraction, var) -> list[sp.Poly]:
    """Forms restricted to y = (1 + c*var, var); the point at infinity is (c : 1)."""
    # coefficient lists, lowest degree first
    y0 = [Fraction(1), Fraction(c)]
    out = []
    for h in forms:
        d = h.degree
        acc = [Fraction(0)] * (d + 1)
        p0 = [Fraction(1)]
        powers0 = [p0]
        for _ in range(d):
            powers0.append(_lmul(powers0[-1], y0))
        for k, a in enumerate(h.coeffs):
            if a:
                # y0^(d-k) * var^k
                for i, x in enumerate(powers0[d - k]):
                    acc[i + k] += a * x
        out.append(sp.Poly([_q(x) for x in reversed(acc)], var, domain="QQ"))
    return out


def _reversed(p: sp.Poly, d: int) -> sp.Poly:
    """s^d p(1/s)."""
    coeffs = p.all_coeffs()[::-1]
    coeffs = coeffs + [0] * (d + 1 - len(coeffs))
    return sp.Poly(coeffs, p.gen, domain="QQ")


def _bivariate(p: sp.Poly, var) -> sp.Poly:
    """p in the given variable, as a polynomial in the generators (T, S)."""
    idx = 1 if var == S else 0
    terms = {}
    for (e,), c in p.terms():
        key = (0, e) if idx else (e, 0)
        terms[key] = c
    return sp.Poly.from_dict(terms, T, S, domain="QQ")


def _gcd_all(polys) -> sp.Poly:
    g = None
    for p in polys:
        if p.is_zero:
            continue
        g = p if g is None else sp.gcd(g, p)
        if g.degree() == 0:
            break
    return g


def _fiber_degree(P: list[sp.Poly], t0) -> int:
    vals = [p.eval(t0) for p in P]
    u0 = next(k for k, v in enumerate(vals) if v != 0)
    eqs = [P[u] * vals[u0] - P[u0] * vals[u] for u in range(len(P)) if u != u0]
    g = _gcd_all(eqs)
    if g is None:
        raise DomainError("constant map")
    return g.degree()


def _dedupe(forms: Sequence[BinaryForm]) -> list[BinaryForm]:
    out = []
    for h in forms:
        if h not in out:
            out.append(h)
    return out


def map_degree(c: CurveParametrization, seed: int = 0) -> int:
    """Cardinality of a generic fiber of the parametrization."""
    rng = random.Random(seed * 7919 + 1)
    forms = _dedupe(c.forms)
    if len(forms) < 2:
        raise DomainError("constant map")
    for _ in range(20):
        chart = Fraction(rng.randint(-997, 997), rng.randint(1, 97))
        P = _chart_polys(forms, chart, S)
        t0 = sp.Rational(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 10 ** 4))
        if any(p.eval(t0) == 0 for p in P) or any(p.degree() < c.degree for p in P):
            continue
        return _fiber_degree(P, t0)
    raise DomainError("could not find a generic sample point")


def _require_birational(c: CurveParametrization, seed: int):
    if map_degree(c, seed) != 1:
        raise DomainError("parametrization is not birational")


def _chart_for(c: CurveParametrization, rng) -> tuple[Fraction, list[BinaryForm]]:
    forms = _dedupe(c.forms)
    while True:
        chart = Fraction(rng.randint(-997, 997), rng.randint(1, 97))
        # keep the point at infinity away from the marked points
        if all(m != _normalize_point(chart, Fraction(1)) for m in c.marked_points):
            return chart, forms


def has_cusp(c: CurveParametrization, seed: int = 0, _checked: bool = False) -> bool:
    """A ramification point of the birational map, detected by the gcd of all Wronskians."""
    if not _checked:
        _require_birational(c, seed)
    rng = random.Random(seed * 104729 + 3)
    chart, forms = _chart_for(c, rng)
    P = _chart_polys(forms, chart, S)
    D = [p.diff(S) for p in P]
    w = [P[u] * D[v] - P[v] * D[u] for u in range(len(P)) for v in range(u + 1, len(P))]
    g = _gcd_all(w)
    if g is not None and g.degree() > 0:
        return True
    # the chart's point at infinity: compare against the reversed chart
    Pr = [_reversed(p, c.degree) for p in P]
    Dr = [p.diff(S) for p in Pr]
    vals = [(p.eval(0), q.eval(0)) for p, q in zip(Pr, Dr)]
    return all(a * d - b * cc == 0 for (a, b) in vals for (cc, d) in vals)


# ---------------------------------------------------------------- node detection

class _ResidueField:
    """Q[s]/(h) for an irreducible h."""

    def __init__(self, h: sp.Poly):
        self.h = h

    def red(self, a: sp.Poly) -> sp.Poly:
        return a.rem(self.h)

    def inv(self, a: sp.Poly) -> sp.Poly:
        s_, t_, g = sp.gcdex(a, self.h)
        # s_*a + t_*h = g with g constant
        return self.red(s_ * sp.Poly(1 / g.as_expr(), S, domain="QQ"))


def _kpoly_from(p: sp.Poly, K: _ResidueField) -> list[sp.Poly]:
    """Bivariate p(t, s) as a list of coefficients in K, highest power of t first, normalized."""
    d = p.degree(T)
    buckets: dict = {}
    for (et, es), c in p.terms():
        buckets.setdefault(d - et, {})[(es,)] = c
    coeffs = [sp.Poly.from_dict(buckets[k], S, domain="QQ") if k in buckets else sp.Poly(0, S, domain="QQ")
              for k in range(d + 1)]
    coeffs = [K.red(c) for c in coeffs]
    while coeffs and coeffs[0].is_zero:
        coeffs.pop(0)
    return coeffs


def _krem(a: list, b: list, K: _ResidueField) -> list:
    a = list(a)
    lead_inv = K.inv(b[0])
    while len(a) >= len(b) and a:
        q = K.red(a[0] * lead_inv)
        for k in range(len(b)):
            a[k] = K.red(a[k] - q * b[k])
        a.pop(0)
        while a and a[0].is_zero:
            a.pop(0)
    return a


def _kgcd(a: list, b: list, K: _ResidueField) -> list:
    while b:
        a, b = b, _krem(a, b, K)
    return a


def _strip_root(a: list, K: _ResidueField) -> list:
    """Divide out every factor (t - alpha), alpha the class of s."""
    alpha = K.red(sp.Poly(S, S, domain="QQ"))
    while len(a) > 1:
        # Horner: evaluate at alpha and keep the quotient
        q = [a[0]]
        for c in a[1:]:
            q.append(K.red(c + q[-1] * alpha))
        if not q[-1].is_zero:
            break
        a = q[:-1]
    return a


def has_node(c: CurveParametrization, seed: int = 0, _checked: bool = False) -> bool:
    """Two distinct parameters with the same image, decided exactly."""
    if not _checked:
        _require_birational(c, seed)
    rng = random.Random(seed * 15485863 + 5)
    chart, forms = _chart_for(c, rng)
    Ps = _chart_polys(forms, chart, S)
    bs = [_bivariate(p, S) for p in Ps]
    bt = [_bivariate(p, T) for p in Ps]
    diag = sp.Poly.from_dict({(0, 1): 1, (1, 0): -1}, T, S, domain="QQ")
    N = []
    for u in range(len(Ps)):
        for v in range(u + 1, len(Ps)):
            m = bs[u] * bt[v] - bs[v] * bt[u]
            q, r = sp.div(m, diag)
            assert r.is_zero
            if not q.is_zero:
                N.append(q)
    if not N:
        return False
    # pairs with one parameter at the chart's point at infinity
    lead = [p.LC() if p.degree() == c.degree else 0 for p in Ps]
    inf_eqs = [Ps[u] * lead[v] - Ps[v] * lead[u] for u in range(len(Ps)) for v in range(u + 1, len(Ps))]
    g = _gcd_all(inf_eqs)
    if g is not None and g.degree() > 0:
        return True
    # finite pairs: project the common zeros to the s-axis through a resultant
    for _ in range(10):
        a = [rng.randint(-50, 50) for _ in N]
        b = [rng.randint(-50, 50) for _ in N]
        A = sum((n * x for x, n in zip(a, N)), sp.Poly(0, T, S, domain="QQ"))
        B = sum((n * x for x, n in zip(b, N)), sp.Poly(0, T, S, domain="QQ"))
        if A.is_zero or B.is_zero:
            continue
        # the first generator is T, so this eliminates T
        R = A.resultant(B)
        R = R if isinstance(R, sp.Poly) else sp.Poly(R, S, domain="QQ")
        if R.is_zero:
            continue
        break
    else:
        # all combinations share a factor: fall back to the gcd structure directly
        raise DomainError("degenerate elimination")
    if R.degree() == 0:
        return False
    for h, _ in sp.factor_list(R)[1]:
        h = sp.Poly(h, S, domain="QQ")
        if h.degree() == 0:
            continue
        K = _ResidueField(h)
        g = None
        for n in N:
            kp = _kpoly_from(n, K)
            if not kp:
                continue
            g = kp if g is None else _kgcd(g, kp, K)
            if g is not None and len(g) == 1:
                break
        if g is None:
            # every minor vanishes identically at s = alpha; not possible for a birational map
            return True
        if len(_strip_root(g, K)) > 1:
            return True
    return False


# ---------------------------------------------------------------- verification against the criteria

def _check_limits(pi: WeakCayleyStructure):
    if pi.degree > MAX_DEGREE:
        raise OracleLimitError(f"degree {pi.degree} exceeds the oracle bound {MAX_DEGREE}")
    if len(pi.face) > MAX_POINTS:
        raise OracleLimitError(f"{len(pi.face)} points exceed the oracle bound {MAX_POINTS}")


@dataclass(frozen=True)
class OracleVerdict:
    seed: int
    image_degree: int
    cusp: bool | None  # None when the map is not birational
    node: bool | None


@lru_cache(maxsize=None)
def _verdict_for_image(image: tuple, seed: int) -> OracleVerdict:
    ell = len(image[0]) - 1
    cfg_rows = image
    f = random_forms(ell, seed)
    F = []
    for row in cfg_rows:
        out = BinaryForm((1,))
        for g, e in zip(f, row):
            out = out * g ** e
        F.append(out)
    d = sum(image[0])
    c = CurveParametrization(tuple(F), tuple(g.root() for g in f), d)
    k = map_degree(c, seed)
    if k != 1:
        return OracleVerdict(seed, d // k, None, None)
    return OracleVerdict(seed, d, has_cusp(c, seed, True), has_node(c, seed, True))


def canonical_image(image) -> tuple:
    """Smallest sorted form of the image set over all permutations of the simplex coordinates.

    Verdicts for generic forms do not depend on which form goes with which
    coordinate, so the cache is shared across a permutation class.
    """
    rows = [tuple(r) for r in image]
    best = None
    for perm in permutations(range(len(rows[0]))):
        cand = tuple(sorted(tuple(r[i] for i in perm) for r in rows))
        if best is None or cand < best:
            best = cand
    return best


def oracle_verdict(pi: WeakCayleyStructure, seed: int) -> OracleVerdict:
    _check_limits(pi)
    return _verdict_for_image(canonical_image(pi.image), seed)


@dataclass(frozen=True)
class Agreement:
    structure: WeakCayleyStructure
    expected: tuple
    verdicts: tuple[OracleVerdict, ...]
    agree: bool
    seeds_used: int


def _expected(pi: CayleyStructure) -> tuple:
    if is_primitive(pi):
        return (pi.degree, is_cuspidal(pi), is_nodal(pi))
    red, _ = reduction(pi)
    return (red.degree, None, None)


def verify(pi: CayleyStructure, seeds: Sequence[int] = (0, 1, 2), max_seeds: int = 9) -> Agreement:
    """Compare the oracle with the combinatorial predictions on a majority of seeds.

    Any disagreement triggers further seeds, up to ``max_seeds`` in total.
    """
    exp = _expected(pi)
    seeds = list(seeds)
    verdicts = [oracle_verdict(pi, s) for s in seeds]
    hits = lambda: sum(1 for v in verdicts if (v.image_degree, v.cusp, v.node) == exp)
    nxt = max(seeds) + 1 if seeds else 0
    while hits() < len(verdicts) and len(verdicts) < max_seeds:
        verdicts.append(oracle_verdict(pi, nxt))
        nxt += 1
    ok = 2 * hits() > len(verdicts)
    return Agreement(pi, exp, tuple(verdicts), ok, len(verdicts))
