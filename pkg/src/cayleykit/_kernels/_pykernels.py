"""Pure-Python versions of the hot loops.  Semantics match ``_ckernels`` exactly."""
from __future__ import annotations


def _check_generators(gens, target):
    for g in gens:
        if len(g) != len(target):
            raise ValueError("generator and target lengths differ")
        if any(x < 0 for x in g) or not any(g):
            raise ValueError("generators must be nonzero and nonnegative")


def multisets_summing_to(gens, target, max_size=-1):
    """All non-decreasing index tuples ``(i1 <= i2 <= ...)`` with ``sum gens[i] == target``.

    ``gens`` are nonnegative integer vectors; ``max_size < 0`` means unbounded.
    Output is in lexicographic order of the index tuples.
    """
    gens = [tuple(g) for g in gens]
    _check_generators(gens, target)
    n = len(target)
    m = len(gens)
    out = []
    resid = list(target)
    chosen = []
    # last generator index that is positive on each coordinate
    last = [max((i for i in range(m) if gens[i][j] > 0), default=-1) for j in range(n)]

    def rec(start):
        if not any(resid):
            out.append(tuple(chosen))
            return
        if max_size >= 0 and len(chosen) >= max_size:
            return
        # every coordinate with positive residual must be covered by some later generator
        for j in range(n):
            if resid[j] and last[j] < start:
                return
        for i in range(start, m):
            g = gens[i]
            ok = True
            for j in range(n):
                if g[j] > resid[j]:
                    ok = False
                    break
            if not ok:
                continue
            for j in range(n):
                resid[j] -= g[j]
            chosen.append(i)
            rec(i)
            chosen.pop()
            for j in range(n):
                resid[j] += g[j]

    rec(0)
    return out


def assign_columns(sources, targets):
    """Is there a map phi from source columns to target columns with column sums matching?

    Every source column must be assigned; the targets must be hit exactly.
    Zero source columns are assigned freely.
    """
    sources = [tuple(s) for s in sources if any(s)]
    targets = [list(t) for t in targets]
    if not targets:
        return not sources
    n = len(targets[0])
    tot_s = [sum(s[j] for s in sources) for j in range(n)]
    tot_t = [sum(t[j] for t in targets) for j in range(n)]
    if tot_s != tot_t:
        return False
    order = sorted(range(len(sources)), key=lambda i: (-sum(sources[i]), sources[i]))
    srcs = [sources[i] for i in order]
    resid = targets

    def rec(k):
        if k == len(srcs):
            return not any(any(r) for r in resid)
        s = srcs[k]
        tried = set()
        for r in resid:
            key = tuple(r)
            if key in tried:
                continue
            tried.add(key)
            if all(a <= b for a, b in zip(s, r)):
                for j in range(n):
                    r[j] -= s[j]
                if rec(k + 1):
                    for j in range(n):
                        r[j] += s[j]
                    return True
                for j in range(n):
                    r[j] += s[j]
        return False

    return rec(0)
