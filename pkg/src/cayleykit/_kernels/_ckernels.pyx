# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops; see ``_pykernels`` for the reference semantics."""
from libc.stdlib cimport malloc, free


def _check_generators(gens, target):
    for g in gens:
        if len(g) != len(target):
            raise ValueError("generator and target lengths differ")
        if any(x < 0 for x in g) or not any(g):
            raise ValueError("generators must be nonzero and nonnegative")


cdef void _rec_multisets(long long *gens, int m, int n, long long *resid, int *last,
                         int *chosen, int depth, int start, int max_size, list out):
    cdef int i, j
    cdef bint ok, done = True
    for j in range(n):
        if resid[j] != 0:
            done = False
            break
    if done:
        out.append(tuple([chosen[k] for k in range(depth)]))
        return
    if max_size >= 0 and depth >= max_size:
        return
    for j in range(n):
        if resid[j] != 0 and last[j] < start:
            return
    for i in range(start, m):
        ok = True
        for j in range(n):
            if gens[i * n + j] > resid[j]:
                ok = False
                break
        if not ok:
            continue
        for j in range(n):
            resid[j] -= gens[i * n + j]
        chosen[depth] = i
        _rec_multisets(gens, m, n, resid, last, chosen, depth + 1, i, max_size, out)
        for j in range(n):
            resid[j] += gens[i * n + j]


def multisets_summing_to(gens, target, int max_size=-1):
    gens = [tuple(g) for g in gens]
    _check_generators(gens, target)
    cdef int m = len(gens)
    cdef int n = len(target)
    cdef int i, j
    cdef long long total = 0
    cdef long long *cg = <long long *> malloc(max(1, m * n) * sizeof(long long))
    cdef long long *resid = <long long *> malloc(max(1, n) * sizeof(long long))
    cdef int *last = <int *> malloc(max(1, n) * sizeof(int))
    cdef int *chosen
    out = []
    try:
        for j in range(n):
            resid[j] = target[j]
            total += target[j]
            last[j] = -1
        for i in range(m):
            for j in range(n):
                cg[i * n + j] = gens[i][j]
                if gens[i][j] > 0:
                    last[j] = i
        # depth is bounded by the total weight since every generator is nonzero
        chosen = <int *> malloc((total + 1) * sizeof(int))
        try:
            _rec_multisets(cg, m, n, resid, last, chosen, 0, 0, max_size, out)
        finally:
            free(chosen)
    finally:
        free(cg)
        free(resid)
        free(last)
    return out


cdef bint _rec_assign(long long *src, int ns, long long *resid, int nt, int n, int k):
    cdef int t, t2, j
    cdef bint ok, dup
    if k == ns:
        for j in range(nt * n):
            if resid[j] != 0:
                return False
        return True
    for t in range(nt):
        # skip targets whose residual equals an earlier one
        dup = False
        for t2 in range(t):
            dup = True
            for j in range(n):
                if resid[t2 * n + j] != resid[t * n + j]:
                    dup = False
                    break
            if dup:
                break
        if dup:
            continue
        ok = True
        for j in range(n):
            if src[k * n + j] > resid[t * n + j]:
                ok = False
                break
        if not ok:
            continue
        for j in range(n):
            resid[t * n + j] -= src[k * n + j]
        if _rec_assign(src, ns, resid, nt, n, k + 1):
            for j in range(n):
                resid[t * n + j] += src[k * n + j]
            return True
        for j in range(n):
            resid[t * n + j] += src[k * n + j]
    return False


def assign_columns(sources, targets):
    sources = [tuple(s) for s in sources if any(s)]
    targets = [tuple(t) for t in targets]
    if not targets:
        return not sources
    cdef int n = len(targets[0])
    cdef int ns = len(sources)
    cdef int nt = len(targets)
    cdef int i, j
    tot_s = [sum(s[j] for s in sources) for j in range(n)]
    tot_t = [sum(t[j] for t in targets) for j in range(n)]
    if tot_s != tot_t:
        return False
    order = sorted(range(ns), key=lambda i: (-sum(sources[i]), sources[i]))
    cdef long long *src = <long long *> malloc(max(1, ns * n) * sizeof(long long))
    cdef long long *resid = <long long *> malloc(max(1, nt * n) * sizeof(long long))
    try:
        for i in range(ns):
            for j in range(n):
                src[i * n + j] = sources[order[i]][j]
        for i in range(nt):
            for j in range(n):
                resid[i * n + j] = targets[i][j]
        return _rec_assign(src, ns, resid, nt, n, 0)
    finally:
        free(src)
        free(resid)
