"""Exact rank computations.

Small matrices are reduced directly (fraction-free over Z for rational input,
modular for prime fields).  Large matrices over Q are first reduced modulo a
word-size prime; the modular rank never exceeds the rational rank, and the
homology engine upgrades it to an exact value with the chain-complex bound
rank(d_{q+1}) <= dim C_q - rank(d_q) (see homology.complex_homology).
"""
from fractions import Fraction
from math import gcd, lcm

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

WORD_PRIME = 2147483647  # 2^31 - 1


class ColumnMatrix:
    """Compressed columns: column j occupies idx/val[ptr[j]:ptr[j+1]].

    ptr and idx are int64 arrays.  val is an int64 array when every entry is
    a machine integer, otherwise a list of ints/Fractions (field residues
    for prime fields).
    """

    def __init__(self, nrows, ptr, idx, val, field):
        self.nrows = nrows
        self.ptr = np.asarray(ptr, dtype=np.int64)
        self.idx = np.asarray(idx, dtype=np.int64)
        self.val = _pack_values(val)
        self.field = field
        self.ncols = len(self.ptr) - 1

    @classmethod
    def from_dicts(cls, nrows, cols, field):
        ptr, idx, val = [0], [], []
        for col in cols:
            for r in sorted(col):
                idx.append(r)
                val.append(col[r])
            ptr.append(len(idx))
        return cls(nrows, ptr, idx, val, field)

    def nnz(self):
        return len(self.idx)

    def column(self, j):
        a, b = int(self.ptr[j]), int(self.ptr[j + 1])
        vals = self.val[a:b]
        if isinstance(vals, np.ndarray):
            vals = vals.tolist()
        return dict(zip(self.idx[a:b].tolist(), vals))

    def dicts(self):
        return [self.column(j) for j in range(self.ncols)]

    def integer_scaled(self):
        """A rational multiple with integer entries (same rank, same kernel)."""
        if isinstance(self.val, np.ndarray):
            return self.val
        den = 1
        for v in self.val:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        if den == 1:
            return [int(v) for v in self.val]
        return [int(v * den) for v in self.val]

    def arrays(self):
        return self.ptr, self.idx


def _pack_values(val):
    if isinstance(val, np.ndarray):
        return val.astype(np.int64)
    val = list(val)
    if all(type(v) is int and -(1 << 62) < v < (1 << 62) for v in val):
        return np.asarray(val, dtype=np.int64)
    return val


def _int_columns(cm):
    vals = cm.integer_scaled()
    if isinstance(vals, np.ndarray):
        vals = vals.tolist()
    ptr, idx = cm.ptr.tolist(), cm.idx.tolist()
    cols = []
    for j in range(cm.ncols):
        a, b = ptr[j], ptr[j + 1]
        cols.append({r: v for r, v in zip(idx[a:b], vals[a:b]) if v})
    return cols


def rank_python(cm):
    """Exact rank by sparse elimination (fraction-free over Z for Q)."""
    f = cm.field
    if f.p is not None:
        return _rank_mod_python(_int_columns(cm), f.p)
    return _rank_int(_int_columns(cm))


def _content_free(v):
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return {k: x // g for k, x in v.items()}
    return v


def _rank_int(cols):
    pivots = {}
    rank = 0
    for v in cols:
        v = dict(v)
        while v:
            lead = min(v)
            w = pivots.get(lead)
            if w is None:
                pivots[lead] = _content_free(v)
                rank += 1
                break
            a, c = w[lead], v[lead]
            g = gcd(a, c)
            a, c = a // g, c // g
            out = {}
            for k, x in v.items():
                out[k] = a * x
            for k, x in w.items():
                y = out.get(k, 0) - c * x
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
            v = _content_free(out)
    return rank


def _rank_mod_python(cols, p):
    pivots = {}
    rank = 0
    for v in cols:
        v = {k: x % p for k, x in v.items() if x % p}
        while v:
            lead = min(v)
            w = pivots.get(lead)
            if w is None:
                inv = pow(v[lead], -1, p)
                pivots[lead] = {k: x * inv % p for k, x in v.items()}
                rank += 1
                break
            c = v[lead]
            for k, x in w.items():
                y = (v.get(k, 0) - c * x) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return rank


def reduce_mod(cm, p):
    """Integer-scaled entries reduced mod p as an int64 array."""
    vals = cm.integer_scaled()
    if isinstance(vals, np.ndarray):
        return vals % p
    return np.asarray([v % p for v in vals], dtype=np.int64)


if numba is not None:
    @numba.njit(cache=True)
    def _heap_push(heap, hs, x):
        heap[hs] = x
        i = hs
        hs += 1
        while i > 0:
            par = (i - 1) >> 1
            if heap[par] > heap[i]:
                t = heap[par]
                heap[par] = heap[i]
                heap[i] = t
                i = par
            else:
                break
        return hs

    @numba.njit(cache=True)
    def _heap_pop(heap, hs):
        r = heap[0]
        hs -= 1
        heap[0] = heap[hs]
        i = 0
        while True:
            left = 2 * i + 1
            m = i
            if left < hs and heap[left] < heap[m]:
                m = left
            if left + 1 < hs and heap[left + 1] < heap[m]:
                m = left + 1
            if m == i:
                break
            t = heap[m]
            heap[m] = heap[i]
            heap[i] = t
            i = m
        return r, hs

    @numba.njit(cache=True)
    def _rank_mod_kernel(ptr, idx, val, nrows, p, stop):
        """Incremental column echelon form mod p; returns early once rank == stop."""
        ncols = len(ptr) - 1
        pstart = np.full(nrows, -1, np.int64)
        plen = np.zeros(nrows, np.int64)
        cap = 1 << 16
        pidx = np.empty(cap, np.int64)
        pval = np.empty(cap, np.int64)
        used = 0
        acc = np.zeros(nrows, np.int64)
        mark = np.zeros(nrows, np.bool_)
        heap = np.empty(nrows + 1, np.int64)
        rank = 0
        if stop <= 0:
            return 0
        for c in range(ncols):
            hs = 0
            for t in range(ptr[c], ptr[c + 1]):
                r = idx[t]
                acc[r] = (acc[r] + val[t]) % p
                if not mark[r]:
                    mark[r] = True
                    hs = _heap_push(heap, hs, r)
            while hs > 0:
                r, hs = _heap_pop(heap, hs)
                mark[r] = False
                v = acc[r]
                if v == 0:
                    continue
                if pstart[r] >= 0:
                    acc[r] = 0
                    s = pstart[r]
                    for t in range(s, s + plen[r]):
                        k = pidx[t]
                        acc[k] = (acc[k] - v * pval[t]) % p
                        if not mark[k]:
                            mark[k] = True
                            hs = _heap_push(heap, hs, k)
                else:
                    inv = 1
                    b = v
                    e = p - 2
                    while e > 0:
                        if e & 1:
                            inv = inv * b % p
                        b = b * b % p
                        e >>= 1
                    acc[r] = 0
                    need = used + hs
                    if need > cap:
                        while need > cap:
                            cap *= 2
                        ni = np.empty(cap, np.int64)
                        nv = np.empty(cap, np.int64)
                        ni[:used] = pidx[:used]
                        nv[:used] = pval[:used]
                        pidx = ni
                        pval = nv
                    pstart[r] = used
                    cnt = 0
                    for q in range(hs):
                        k = heap[q]
                        mark[k] = False
                        if acc[k] != 0:
                            pidx[used] = k
                            pval[used] = acc[k] * inv % p
                            used += 1
                            cnt += 1
                            acc[k] = 0
                    plen[r] = cnt
                    hs = 0
                    rank += 1
                    if rank >= stop:
                        return rank
                    break
        return rank

    @numba.njit(cache=True)
    def _compose_kernel(aptr, aidx, aval, bptr, bidx, bval, nrows):
        """First column j with (A B)[:, j] != 0 over Z, or -1.  Entries must be small."""
        acc = np.zeros(nrows, np.int64)
        touched = np.empty(nrows + 1, np.int64)
        flag = np.zeros(nrows, np.bool_)
        for j in range(len(bptr) - 1):
            nt = 0
            for t in range(bptr[j], bptr[j + 1]):
                k = bidx[t]
                c = bval[t]
                for s in range(aptr[k], aptr[k + 1]):
                    r = aidx[s]
                    acc[r] += c * aval[s]
                    if not flag[r]:
                        flag[r] = True
                        touched[nt] = r
                        nt += 1
            bad = False
            for q in range(nt):
                r = touched[q]
                if acc[r] != 0:
                    bad = True
                acc[r] = 0
                flag[r] = False
            if bad:
                return j
        return -1


if numba is not None:
    @numba.njit(cache=True)
    def _compose_kernel_mod(aptr, aidx, aval, bptr, bidx, bval, nrows, p):
        acc = np.zeros(nrows, np.int64)
        touched = np.empty(nrows + 1, np.int64)
        flag = np.zeros(nrows, np.bool_)
        for j in range(len(bptr) - 1):
            nt = 0
            for t in range(bptr[j], bptr[j + 1]):
                k = bidx[t]
                c = bval[t]
                for s in range(aptr[k], aptr[k + 1]):
                    r = aidx[s]
                    acc[r] = (acc[r] + c * aval[s]) % p
                    if not flag[r]:
                        flag[r] = True
                        touched[nt] = r
                        nt += 1
            bad = False
            for q in range(nt):
                r = touched[q]
                if acc[r] != 0:
                    bad = True
                acc[r] = 0
                flag[r] = False
            if bad:
                return j
        return -1


def rank_modular(cm, p=WORD_PRIME, stop=None):
    """Rank of the (integer-scaled) matrix modulo p; stops once it reaches `stop`."""
    if stop is None:
        stop = min(cm.nrows, cm.ncols)
    if cm.ncols == 0 or cm.nrows == 0:
        return 0
    if numba is None or p >= 3037000499:
        return min(_rank_mod_python(_int_columns(cm), p), stop)
    ptr, idx = cm.arrays()
    return int(_rank_mod_kernel(ptr, idx, reduce_mod(cm, p), cm.nrows, p, stop))


def rank_exact(cm):
    """Exact rank over the matrix's own field (no certificate needed)."""
    f = cm.field
    if f.p is not None and numba is not None and f.p < 3037000499 and cm.nnz() > 2000:
        return rank_modular(cm, f.p)
    return rank_python(cm)


def first_nonzero_product(a, b):
    """Exact check of a @ b == 0; returns the first offending column of b or None."""
    if a.ncols != b.nrows:
        raise ValueError("shape mismatch in composition check")
    if b.ncols == 0 or a.nrows == 0 or a.nnz() == 0 or b.nnz() == 0:
        return None
    f = a.field
    if numba is not None and isinstance(a.val, np.ndarray) and isinstance(b.val, np.ndarray):
        av, bv = a.val, b.val
        if f.p is not None:
            av, bv = av % f.p, bv % f.p
        big = int(np.abs(av).max()) * int(np.abs(bv).max())
        fan = int(np.diff(a.ptr).max()) * int(np.diff(b.ptr).max())
        if big * max(fan, 1) < (1 << 62):
            j = int(_compose_kernel(a.ptr, a.idx, av, b.ptr, b.idx, bv, a.nrows)) \
                if f.p is None else _compose_mod(a, b, av, bv, f.p)
            return None if j < 0 else j
    acols = a.dicts()
    for j in range(b.ncols):
        acc = {}
        for k, c in b.column(j).items():
            for r, v in acols[k].items():
                x = f.reduce(acc.get(r, 0) + c * v)
                if x:
                    acc[r] = x
                else:
                    acc.pop(r, None)
        if acc:
            return j
    return None


def _compose_mod(a, b, av, bv, p):
    # products are accumulated exactly and reduced at the end of each column
    j = int(_compose_kernel_mod(a.ptr, a.idx, av, b.ptr, b.idx, bv, a.nrows, p))
    return j


def rref_columns(vectors, field):
    """Reduced echelon basis of the span of sparse vectors (dicts).

    Returns (basis, pivots): basis[i] has a 1 at row pivots[i] and zeros at
    every other pivot row.  Deterministic: pivots are the least rows.
    """
    f = field
    piv = {}
    for v in vectors:
        v = {k: f.reduce(x) for k, x in v.items() if f.reduce(x)}
        for r in sorted(k for k in v if k in piv):
            c = v.get(r)
            if not c:
                continue
            for k, x in piv[r].items():
                y = f.reduce(v.get(k, 0) - c * x)
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        if not v:
            continue
        lead = min(v)
        inv = f.inv(v[lead])
        w = {k: f.reduce(x * inv) for k, x in v.items()}
        for u in piv.values():
            c = u.get(lead)
            if c:
                for k, x in w.items():
                    y = f.reduce(u.get(k, 0) - c * x)
                    if y:
                        u[k] = y
                    else:
                        u.pop(k, None)
        piv[lead] = w
    order = list(piv)
    pivots = sorted(order)
    return [piv[r] for r in pivots], pivots
