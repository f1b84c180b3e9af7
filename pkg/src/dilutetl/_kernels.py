"""Hot numeric kernels: batch diagram gluing and exact echelon ranks.

Each kernel is written once, against numpy arrays with plain loops.  By
default the implementations are compiled with numba's ``@njit``; setting
the environment variable ``DILUTETL_NO_JIT=1`` (or running without numba
installed) selects the uncompiled Python path instead.
``benchmarks/bench_kernels.py`` times the two paths against each other.

Conventions:

* A diagram on two columns of n vertices is passed as its *column
  pairing*: an int8 array of length 2n where indices 0..n-1 are the left
  column top to bottom, indices n..2n-1 the right column top to bottom,
  entry -1 marks an isolated vertex and any other entry is the partner
  index.
* Sparse matrices are passed in CSC form (indptr, rowidx, values);
  repeated row indices within a column accumulate.
* Integer echelon works in int64 with an overflow guard: whenever a
  combination could reach 2^62 the kernel bails out with rank -1 and the
  caller retries with arbitrary-precision Python integers.
"""

from __future__ import annotations

import os
from math import gcd

import numpy as np

_LIM = 1 << 30  # guarded values keep int64 combinations below 2^62

NO_JIT = os.environ.get("DILUTETL_NO_JIT", "") == "1"

if not NO_JIT:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NO_JIT = True

if NO_JIT:
    def _compile(f):
        return f
else:
    def _compile(f):
        return _njit(cache=True)(f)


# ---------------------------------------------------------------------------
# batch diagram multiplication


def _multiply_all_impl(P, outkey, outa):
    """Glue every ordered pair of diagrams in P along the middle column.

    P is (N, 2n) of column pairings.  outa[i, j] receives the loop
    count, -1 meaning the product is zero; outkey[i, j] receives the
    product's column pairing packed little-endian in base 2n+2 with
    digits pairing+1 (see pack_pairing / unpack_pairing).  Walk vertices
    are numbered 0..n-1 left outer, n..2n-1 middle, 2n..3n-1 right
    outer.  Every component is scanned even after the product is known
    to be zero, so the loop count is deterministic.
    """
    N, two_n = P.shape
    n = two_n // 2
    visited = np.zeros(3 * n, np.int64)
    ea = np.zeros(2 * n, np.int64)
    eb = np.zeros(2 * n, np.int64)
    pairing = np.zeros(2 * n, np.int64)
    base = two_n + 2
    stamp = 0
    for i in range(N):
        c1 = P[i]
        for j in range(N):
            c2 = P[j]
            stamp += 1
            dead = False
            alpha = 0
            ne = 0
            # paths out of left outer vertices
            for s in range(n):
                if c1[s] < 0 or visited[s] == stamp:
                    continue
                visited[s] = stamp
                cur = int(c1[s])
                via = 1
                while n <= cur < 2 * n:
                    visited[cur] = stamp
                    if via == 1:
                        t = c2[cur - n]
                        via = 2
                        cur = n + t if t >= 0 else -1
                    else:
                        t = c1[cur]
                        via = 1
                        cur = int(t)
                    if cur < 0:
                        dead = True
                        break
                if cur >= 0:
                    visited[cur] = stamp
                    ea[ne] = s
                    eb[ne] = cur if cur < n else cur - n  # right outer k -> n+k
                    ne += 1
            # paths out of right outer vertices not seen from the left
            for s in range(n):
                v = 2 * n + s
                if c2[n + s] < 0 or visited[v] == stamp:
                    continue
                visited[v] = stamp
                t = c2[n + s]
                if t >= n:
                    cur = 2 * n + (t - n)
                else:
                    cur = n + int(t)
                via = 2
                while n <= cur < 2 * n:
                    visited[cur] = stamp
                    if via == 2:
                        t = c1[cur]
                        via = 1
                        cur = int(t)
                    else:
                        t = c2[cur - n]
                        via = 2
                        cur = n + t if t >= 0 else -1
                    if cur < 0:
                        dead = True
                        break
                if cur >= 0:
                    visited[cur] = stamp
                    ea[ne] = n + s
                    eb[ne] = cur if cur < n else cur - n
                    ne += 1
            # leftover middle components: stranded paths kill the product,
            # closed loops feed alpha
            for m in range(n, 2 * n):
                if visited[m] == stamp:
                    continue
                d1 = c1[m] >= 0
                d2 = c2[m - n] >= 0
                if not d1 and not d2:
                    visited[m] = stamp
                    continue
                if d1 and d2:
                    continue  # handled in the loop sweep below
                dead = True
                visited[m] = stamp
                if d1:
                    cur = int(c1[m])
                    via = 1
                else:
                    cur = n + int(c2[m - n])
                    via = 2
                while n <= cur < 2 * n and visited[cur] != stamp:
                    visited[cur] = stamp
                    if via == 1:
                        t = c2[cur - n]
                        via = 2
                        cur = n + t if t >= 0 else -1
                    else:
                        t = c1[cur]
                        via = 1
                        cur = int(t)
                    if cur < 0:
                        break
            for m in range(n, 2 * n):
                if visited[m] == stamp:
                    continue
                alpha += 1
                visited[m] = stamp
                cur = int(c1[m])
                via = 1
                while cur != m:
                    visited[cur] = stamp
                    if via == 1:
                        cur = n + int(c2[cur - n])
                        via = 2
                    else:
                        cur = int(c1[cur])
                        via = 1
            if dead:
                outa[i, j] = -1
                outkey[i, j] = -1
            else:
                outa[i, j] = alpha
                for t in range(two_n):
                    pairing[t] = -1
                for e in range(ne):
                    a, b = ea[e], eb[e]
                    pairing[a] = b
                    pairing[b] = a
                key = 0
                for t in range(two_n - 1, -1, -1):
                    key = key * base + (pairing[t] + 1)
                outkey[i, j] = key
    return None


# ---------------------------------------------------------------------------
# echelon ranks


def _fp_rank_impl(indptr, rowidx, vals, nrows, ncols, p):
    """Rank over F_p of a CSC matrix by insertion echelon.

    Echelon rows are stored dense and normalized to leading entry one.
    """
    cap = nrows if nrows < ncols else ncols
    ech = np.zeros((cap, nrows), np.int64)
    pivot_at = np.full(nrows, -1, np.int64)
    v = np.zeros(nrows, np.int64)
    rank = 0
    for c in range(ncols):
        lo, hi = indptr[c], indptr[c + 1]
        if lo == hi or rank == cap:
            continue
        first = nrows
        for t in range(lo, hi):
            r = rowidx[t]
            v[r] = (v[r] + vals[t]) % p
            if r < first:
                first = r
        pos = first
        while pos < nrows:
            if v[pos] == 0:
                pos += 1
                continue
            pr = pivot_at[pos]
            if pr < 0:
                inv = 1  # modular inverse by Fermat
                base = v[pos] % p
                e = p - 2
                while e:
                    if e & 1:
                        inv = inv * base % p
                    base = base * base % p
                    e >>= 1
                for t in range(pos, nrows):
                    ech[rank, t] = v[t] * inv % p
                    v[t] = 0
                pivot_at[pos] = rank
                rank += 1
                break
            f = v[pos]
            for t in range(pos, nrows):
                if ech[pr, t] != 0:
                    v[t] = (v[t] - f * ech[pr, t]) % p
            pos += 1
    return rank


def _int_rank_impl(indptr, rowidx, vals, nrows, ncols):
    """Rank over Q of an integer CSC matrix, exact int64 echelon.

    Returns -1 if the overflow guard trips; the caller then reruns the
    computation with Python integers.
    """
    cap = nrows if nrows < ncols else ncols
    ech = np.zeros((cap, nrows), np.int64)
    rmax = np.zeros(cap, np.int64)
    pivot_at = np.full(nrows, -1, np.int64)
    v = np.zeros(nrows, np.int64)
    rank = 0
    for c in range(ncols):
        lo, hi = indptr[c], indptr[c + 1]
        if lo == hi or rank == cap:
            continue
        first = nrows
        for t in range(lo, hi):
            r = rowidx[t]
            v[r] += vals[t]
            if r < first:
                first = r
        vmax = 0
        for t in range(first, nrows):
            a = v[t] if v[t] >= 0 else -v[t]
            if a > vmax:
                vmax = a
        pos = first
        while pos < nrows:
            if v[pos] == 0:
                pos += 1
                continue
            pr = pivot_at[pos]
            if pr < 0:
                g = 0
                for t in range(pos, nrows):
                    a = v[t] if v[t] >= 0 else -v[t]
                    while a:
                        g, a = a, g % a
                if g > 1:
                    for t in range(pos, nrows):
                        v[t] //= g
                nm = 0
                for t in range(pos, nrows):
                    ech[rank, t] = v[t]
                    a = v[t] if v[t] >= 0 else -v[t]
                    if a > nm:
                        nm = a
                    v[t] = 0
                rmax[rank] = nm
                pivot_at[pos] = rank
                rank += 1
                break
            if vmax > _LIM or rmax[pr] > _LIM:
                return -1
            a = ech[pr, pos]
            b = v[pos]
            if b % a == 0:
                f = b // a
                nm = 0
                for t in range(pos, nrows):
                    v[t] -= f * ech[pr, t]
                    w = v[t] if v[t] >= 0 else -v[t]
                    if w > nm:
                        nm = w
                vmax = nm
            else:
                x0, x1 = 1, 0
                y0, y1 = 0, 1
                g, h = b, a
                while h:
                    q = g // h
                    x0, x1 = x1, x0 - q * x1
                    y0, y1 = y1, y0 - q * y1
                    g, h = h, g - q * h
                if g < 0:
                    x0, y0, g = -x0, -y0, -g
                # new pivot row x0*v + y0*row has value g at pos;
                # a/g * v - b/g * row clears the column entry
                bg = b // g
                ag = a // g
                nm_row = 0
                nm_v = 0
                for t in range(pos, nrows):
                    vv = v[t]
                    rr = ech[pr, t]
                    nr = x0 * vv + y0 * rr
                    nv = ag * vv - bg * rr
                    ech[pr, t] = nr
                    v[t] = nv
                    w = nr if nr >= 0 else -nr
                    if w > nm_row:
                        nm_row = w
                    w = nv if nv >= 0 else -nv
                    if w > nm_v:
                        nm_v = w
                rmax[pr] = nm_row
                vmax = nm_v
                if nm_row > _LIM or nm_v > _LIM:
                    return -1
            pos += 1
    return rank


_multiply_all_jit = _compile(_multiply_all_impl)
_fp_rank_jit = _compile(_fp_rank_impl)
_int_rank_jit = _compile(_int_rank_impl)


# ---------------------------------------------------------------------------
# wrappers


def pack_pairing(pairing, base: int) -> int:
    key = 0
    for t in range(len(pairing) - 1, -1, -1):
        key = key * base + (pairing[t] + 1)
    return key


def unpack_pairing(key: int, two_n: int) -> tuple[int, ...]:
    base = two_n + 2
    out = []
    for _ in range(two_n):
        key, d = divmod(key, base)
        out.append(d - 1)
    return tuple(out)


def multiply_all(P: np.ndarray):
    """All pairwise products of the diagrams with column pairings P.

    Returns (keys (N, N) int64, loops (N, N) int8).  loops == -1 marks
    an annihilated product; otherwise the key packs the product's column
    pairing (unpack with unpack_pairing).
    """
    P = np.ascontiguousarray(P, dtype=np.int8)
    N, two_n = P.shape
    outkey = np.full((N, N), -1, np.int64)
    outa = np.full((N, N), -1, np.int8)
    _multiply_all_jit(P, outkey, outa)
    return outkey, outa


def _sorted_csc(indptr, rowidx, vals, ncols):
    """Permute columns sparsest-first; keeps echelon fill-in low."""
    counts = np.diff(indptr)
    order = np.argsort(counts, kind="stable")
    colrank = np.empty(ncols, np.int64)
    colrank[order] = np.arange(ncols)
    colid = np.repeat(np.arange(ncols), counts)
    perm = np.argsort(colrank[colid], kind="stable")
    new_indptr = np.zeros(ncols + 1, np.int64)
    new_indptr[1:] = np.cumsum(counts[order])
    return new_indptr, rowidx[perm], vals[perm]


def fp_rank(indptr, rowidx, vals, nrows: int, p: int) -> int:
    """Exact rank of an integer CSC matrix over F_p."""
    ncols = len(indptr) - 1
    if ncols == 0 or nrows == 0:
        return 0
    indptr = np.asarray(indptr, np.int64)
    rowidx = np.asarray(rowidx, np.int64)
    vals = np.asarray([x % p for x in vals], np.int64)
    sp = _sorted_csc(indptr, rowidx, vals, ncols)
    return int(_fp_rank_jit(sp[0], sp[1], sp[2], nrows, ncols, p))


def int_rank(indptr, rowidx, vals, nrows: int) -> int:
    """Exact rank over Q of an integer CSC matrix."""
    ncols = len(indptr) - 1
    if ncols == 0 or nrows == 0:
        return 0
    indptr = np.asarray(indptr, np.int64)
    rowidx = np.asarray(rowidx, np.int64)
    vals = list(vals)
    if all(-_LIM <= x <= _LIM for x in vals):
        sp = _sorted_csc(indptr, rowidx, np.asarray(vals, np.int64), ncols)
        r = int(_int_rank_jit(sp[0], sp[1], sp[2], nrows, ncols))
        if r >= 0:
            return r
    return _int_rank_py(indptr, rowidx, vals, ncols)


def _int_rank_py(indptr, rowidx, vals, ncols):
    """Arbitrary-precision fallback for int_rank (dict-row echelon)."""
    pivot_rows: dict[int, dict[int, int]] = {}
    cols = []
    for c in range(ncols):
        col: dict[int, int] = {}
        for t in range(int(indptr[c]), int(indptr[c + 1])):
            r = int(rowidx[t])
            col[r] = col.get(r, 0) + int(vals[t])
        col = {r: x for r, x in col.items() if x}
        if col:
            cols.append(col)
    cols.sort(key=len)
    rank = 0
    for v in cols:
        while v:
            pos = min(v)
            row = pivot_rows.get(pos)
            if row is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                if g > 1:
                    v = {r: x // g for r, x in v.items()}
                pivot_rows[pos] = v
                rank += 1
                break
            a = row[pos]
            b = v[pos]
            if b % a == 0:
                f = b // a
                for r, x in row.items():
                    nv = v.get(r, 0) - f * x
                    if nv:
                        v[r] = nv
                    else:
                        v.pop(r, None)
            else:
                g0, x0, y0 = _xgcd(a, b)
                ag, bg = a // g0, b // g0
                new_row: dict[int, int] = {}
                new_v: dict[int, int] = {}
                for r in set(row) | set(v):
                    rr = row.get(r, 0)
                    vv = v.get(r, 0)
                    nr = y0 * rr + x0 * vv
                    nv = ag * vv - bg * rr
                    if nr:
                        new_row[r] = nr
                    if nv:
                        new_v[r] = nv
                pivot_rows[pos] = new_row
                v = new_v
    return rank


def _xgcd(a: int, b: int):
    """g = gcd(a, b) > 0 with x*b + y*a = g (note the operand order)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    g, h = b, a
    while h:
        q = g // h
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
        g, h = h, g - q * h
    if g < 0:
        x0, y0, g = -x0, -y0, -g
    return g, x0, y0
