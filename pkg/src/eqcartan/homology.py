"""Homology dimensions of the twisted complexes.

Chains are graded by the suspended total degree |a_0| + sum(|a_i| + 1); a
chain u^j c with u-power j has degree deg(c) - 2j.  All differentials lower
this degree by one, so a complex is handled one degree at a time.

Truncation.  Only chain lengths n <= n_max are materialized.  Let s be the
least suspended degree of a non-unit basis element and m the least degree of
any basis element.  When s >= 1 every chain of length > n_max has degree at
least m + (n_max + 1)s, so the brutal truncation to degrees
<= q_cut = m + (n_max + 1)s - 1 - 2*u_max is an honest subcomplex, and its
homology is exact below q_cut.
"""
from array import array
from dataclasses import dataclass, field as dfield

import numpy as np

from . import chains as ch
from .algebra import crossed_product
from .group import class_representatives
from .linalg import (ColumnMatrix, first_nonzero_product, rank_modular, rank_python,
                     rref_columns, WORD_PRIME)

# direct exact elimination below this many nonzeros
DIRECT_NNZ = 20000


class NotAComplex(Exception):
    """Consecutive differentials do not compose to zero."""

    def __init__(self, degree, witness):
        super().__init__(f"d o d != 0 out of degree {degree}, first offending basis element {witness}")
        self.degree = degree
        self.witness = witness


COEFFICIENTS = ("hochschild", "cyclic", "periodic", "negative")


@dataclass(frozen=True)
class CoefficientW:
    """W as a window of retained u-powers [lo, hi] (deg u = -2).

    hochschild: k[u]/uk[u], window [0, 0].  cyclic: k[u, u^-1]/uk[u], window
    [-J, 0].  negative: k[u] cut to [0, J].  periodic: k[u, u^-1] cut to [-J, J].
    """
    choice: str
    lo: int = 0
    hi: int = 0

    def __post_init__(self):
        if self.choice not in COEFFICIENTS:
            raise ValueError(f"unknown coefficients {self.choice!r}")
        if self.lo > self.hi:
            raise ValueError("empty u-window")
        shape = {"hochschild": self.lo == 0 and self.hi == 0,
                 "cyclic": self.hi == 0 and self.lo <= 0,
                 "negative": self.lo == 0 and self.hi >= 0,
                 "periodic": self.lo <= 0 <= self.hi}
        if not shape[self.choice]:
            raise ValueError(f"u-window [{self.lo}, {self.hi}] does not fit {self.choice}")

    @classmethod
    def make(cls, choice, window=None, n_max=None):
        """Window J from the command line; cyclic defaults to J = n_max."""
        if choice == "hochschild":
            return cls(choice)
        if window is None:
            if choice == "cyclic" and n_max is not None:
                window = n_max
            else:
                raise ValueError(f"{choice} coefficients need an explicit u-window")
        if window < 0:
            raise ValueError("empty u-window")
        if choice == "cyclic":
            return cls(choice, -window, 0)
        if choice == "negative":
            return cls(choice, 0, window)
        return cls(choice, -window, window)

    @property
    def window(self):
        return [self.lo, self.hi]

    @property
    def approximate(self):
        return self.choice != "hochschild"


DEGREE_NOTE = ("degree = |a_0| + sum_i (|a_i| + 1) - 2j for u^j a_0[a_1|...|a_n]; "
               "for a trivially graded algebra this is the chain length n")


@dataclass
class HomologyTable:
    sector: str
    coefficients: str
    u_window: list
    n_max: int
    dims: dict
    valid: dict
    convention_hash: str
    invariants: bool = False
    ranks: dict = dfield(default_factory=dict)
    # True when every degree above the listed ones is valid with dimension 0
    complete_above: bool = False

    @property
    def valid_degrees(self):
        return [q for q in sorted(self.dims) if self.valid[q]]

    @property
    def label(self):
        if self.coefficients == "hochschild":
            return "exact"
        return "u-window approximation"

    def dim(self, q):
        return self.dims.get(q, 0)

    def to_json(self):
        return {
            "sector": self.sector,
            "coefficients": self.coefficients,
            "u_window": list(self.u_window),
            "n_max": self.n_max,
            "invariants": self.invariants,
            "label": self.label,
            "valid_degrees": self.valid_degrees,
            "dims": [{"degree": q, "dim": self.dims[q], "valid": self.valid[q]}
                     for q in sorted(self.dims)],
            "convention_hash": self.convention_hash,
            "complete_above": self.complete_above,
            "degree_note": DEGREE_NOTE,
        }

    def text(self):
        lines = [f"sector {self.sector}  coefficients {self.coefficients}  "
                 f"u-window {self.u_window}  n_max {self.n_max}  ({self.label})"]
        for q in sorted(self.dims):
            mark = "" if self.valid[q] else "  (outside validity window)"
            lines.append(f"  H_{q} = {self.dims[q]}{mark}")
        return "\n".join(lines)


# ---- generic graded complexes ----------------------------------------------

class GradedComplex:
    """dims[q] = dim C_q and diffs[q]: C_q -> C_{q-1} as a ColumnMatrix.

    describe(q, j) names basis element j of degree q (used for witnesses).
    """

    def __init__(self, field, dims, diffs, describe=None):
        self.field = field
        self.dims = dims
        self.diffs = diffs
        self.describe = describe or (lambda q, j: [q, j])

    def diff(self, q):
        m = self.diffs.get(q)
        if m is None:
            m = ColumnMatrix(self.dims.get(q - 1, 0), [0] * (self.dims.get(q, 0) + 1),
                             [], [], self.field)
        return m


def check_complex(cx):
    for q in sorted(cx.dims):
        if q - 1 not in cx.dims or q not in cx.diffs or q - 1 not in cx.diffs:
            continue
        j = first_nonzero_product(cx.diffs[q - 1], cx.diffs[q])
        if j is not None:
            raise NotAComplex(q, cx.describe(q, j))


def complex_homology(cx, degrees=None):
    """Exact dim H_q for each q in `degrees` (default: every degree).

    Returns (dims, ranks) where ranks[q] = (rank of C_q -> C_{q-1}, method).
    Ranks are computed upward in degree.  A large rank is first computed
    modulo a word prime with an early stop at the chain-complex bound
    dim C_{q-1} - rank(C_{q-1} -> C_{q-2}); modular ranks never exceed
    rational ones, so reaching the bound certifies the exact value.  Otherwise
    it is recomputed by exact elimination.
    """
    check_complex(cx)
    qs = sorted(cx.dims)
    if degrees is None:
        degrees = qs
    ranks = {}
    for q in qs:
        m = cx.diff(q)
        if m.nnz() == 0:
            ranks[q] = (0, "zero")
            continue
        below = ranks.get(q - 1, (0, ""))[0]
        upper = cx.dims.get(q - 1, 0) - below
        ranks[q] = _certified_rank(m, upper)
    dims = {}
    for q in degrees:
        r_out = ranks.get(q, (0, ""))[0]
        r_in = ranks.get(q + 1, (0, ""))[0]
        dims[q] = cx.dims.get(q, 0) - r_out - r_in
    return dims, ranks


def _certified_rank(m, upper):
    f = m.field
    if f.p is not None:
        return rank_modular(m, f.p) if m.nnz() > DIRECT_NNZ else rank_python(m), "exact"
    if m.nnz() <= DIRECT_NNZ:
        return rank_python(m), "exact"
    r = rank_modular(m, WORD_PRIME, stop=upper)
    if r >= upper:
        return r, "bound"
    return rank_python(m), "exact"


def operators_complex(ops):
    """GradedComplex from SparseOperators d_k: C_k -> C_{k-1} graded by position k."""
    field = ops[0].source.algebra.field if ops else None
    dims, diffs = {}, {}
    for k, op in enumerate(ops, start=1):
        dims[k] = op.source.dim
        dims[k - 1] = op.target.dim
        diffs[k] = ColumnMatrix.from_dicts(op.target.dim, op.matrix.cols, op.matrix.field)
        field = op.matrix.field
    return GradedComplex(field, dims, diffs)


# ---- truncation --------------------------------------------------------------

def truncation(A, n_max, W):
    """(q_cut, valid(q)) for the chain-length truncation at n_max.

    q_cut is None when no degree cut yields a subcomplex.
    """
    nonunit_p = [A.degrees[i] + 1 for i in A.nonunit]
    a0min = min(A.degrees)
    if not nonunit_p:
        if W.choice == "cyclic":
            return None, lambda q: q < a0min + 2 * (-W.lo) + 1
        return None, lambda q: W.choice == "hochschild"
    s = min(nonunit_p)
    if s <= 0:
        if W.choice != "hochschild":
            raise ValueError("a basis element of degree <= -1 leaves no finite truncation "
                             "of the mixed complex; only Hochschild coefficients are supported")
        return None, lambda q: False
    q_cut = a0min + (n_max + 1) * s - 1 - 2 * W.hi
    if W.choice in ("negative", "periodic"):
        return q_cut, lambda q: False
    if W.choice == "cyclic":
        bound = a0min + 2 * (-W.lo) + 1
        return q_cut, lambda q: q < q_cut and q < bound
    return q_cut, lambda q: q < q_cut


def chain_degrees(A, n):
    """Degrees of the basis of the normalized C_n in index order."""
    deg = np.asarray(A.degrees, dtype=np.int64)
    p = deg[A.nonunit] + 1 if A.nonunit else np.zeros(0, np.int64)
    out = deg
    for _ in range(n):
        out = np.add.outer(out, p).ravel()
    return out


def _split(field, deg, ptr, idx, val, q_cut, describe_global):
    """Cut a global column-compressed differential into per-degree blocks."""
    if len(deg) == 0:
        return GradedComplex(field, {}, {})
    qs = sorted(set(np.unique(deg).tolist()))
    if q_cut is not None:
        qs = [q for q in qs if q <= q_cut]
    pos = {}
    members = {}
    for q in qs:
        ids = np.flatnonzero(deg == q)
        members[q] = ids
        rowmap = np.full(len(deg), -1, np.int64)
        rowmap[ids] = np.arange(len(ids))
        pos[q] = rowmap
    dims = {q: len(members[q]) for q in qs}
    diffs = {}
    ptr = np.asarray(ptr, dtype=np.int64)
    idx = np.asarray(idx, dtype=np.int64)
    arr = isinstance(val, np.ndarray)
    for q in qs:
        cols = members[q]
        starts, ends = ptr[cols], ptr[cols + 1]
        lens = ends - starts
        nptr = np.zeros(len(cols) + 1, np.int64)
        np.cumsum(lens, out=nptr[1:])
        total = int(nptr[-1])
        at = np.repeat(starts - nptr[:-1], lens) + np.arange(total, dtype=np.int64)
        rows = idx[at]
        if total and not np.all(deg[rows] == q - 1):
            raise ValueError(f"differential out of degree {q} is not of degree -1")
        if q - 1 not in pos:
            if total:
                raise ValueError(f"differential out of degree {q} leaves the truncated complex")
            diffs[q] = ColumnMatrix(0, nptr, [], [], field)
            continue
        nrows = dims[q - 1]
        vals = val[at] if arr else [val[i] for i in at.tolist()]
        diffs[q] = ColumnMatrix(nrows, nptr, pos[q - 1][rows], vals, field)

    def describe(q, j):
        return describe_global(int(members[q][j]))
    return GradedComplex(field, dims, diffs, describe)


# ---- path 1: small complexes through SparseOperators -------------------------

def _restrict(op, src_basis, tgt_basis, tgt_pivots, field):
    """Matrix of op on spans: op(src_basis[j]) expressed in tgt_basis."""
    f = field
    cols = []
    m = op.matrix
    for v in src_basis:
        acc = {}
        for k, c in v.items():
            for r, x in m.cols[k].items():
                y = f.reduce(acc.get(r, 0) + c * x)
                if y:
                    acc[r] = y
                else:
                    acc.pop(r, None)
        cols.append({i: acc[r] for i, r in enumerate(tgt_pivots) if r in acc})
    return cols


def _unit_vectors(dim):
    return [{i: 1} for i in range(dim)]


class _Sector:
    """Bases of C_n (full or centralizer invariants) for one twisted sector."""

    def __init__(self, A, act, g, n_max, invariants):
        self.A = A
        self.act = act
        self.g = g
        self.bases = []
        self.pivots = []
        self.spaces = []
        for n in range(n_max + 1):
            sp = ch.ChainSpace(A, n, g)
            self.spaces.append(sp)
            if invariants and act is not None:
                P = ch.averaging_projector(act, g, n)
                basis, piv = rref_columns(P.matrix.cols, A.field)
            else:
                basis, piv = _unit_vectors(sp.dim), list(range(sp.dim))
            self.bases.append(basis)
            self.pivots.append(piv)

    def degrees(self, n):
        full = chain_degrees(self.A, n)
        return full[np.asarray(self.pivots[n], dtype=np.int64)] if self.pivots[n] else \
            np.zeros(0, np.int64)


def _path1(A, act, g, n_max, W, conv, invariants):
    f = A.field
    sec = _Sector(A, act, g, n_max, invariants)
    gg = g if act is not None else 0
    js = list(range(W.lo, W.hi + 1))
    pieces = [(j, n) for j in js for n in range(n_max + 1)]
    offset, at = {}, 0
    for key in pieces:
        offset[key] = at
        at += len(sec.bases[key[1]])
    deg = np.zeros(at, np.int64)
    for (j, n) in pieces:
        o = offset[(j, n)]
        deg[o:o + len(sec.bases[n])] = sec.degrees(n) - 2 * j
    blocks = {}
    for n in range(n_max + 1):
        tgt = []
        if n >= 1:
            b = ch.op_b_g(A, act, gg, n, conv)
            tgt.append((0, -1, _restrict(b, sec.bases[n], sec.bases[n - 1], sec.pivots[n - 1], f)))
        if A.has_differential():
            d = ch.op_d(A, gg, n, conv, act)
            tgt.append((0, 0, _restrict(d, sec.bases[n], sec.bases[n], sec.pivots[n], f)))
        if W.hi > W.lo and n < n_max:
            B = ch.op_B_g(A, act, gg, n, conv)
            tgt.append((1, 1, _restrict(B, sec.bases[n], sec.bases[n + 1], sec.pivots[n + 1], f)))
        blocks[n] = tgt
    ptr, idx, val = [0], [], []
    owner = []
    for (j, n) in pieces:
        for c in range(len(sec.bases[n])):
            acc = {}
            for dj, dn, cols in blocks[n]:
                key = (j + dj, n + dn)
                if key not in offset:
                    continue
                o = offset[key]
                for r, x in cols[c].items():
                    acc[o + r] = x
            for r in sorted(acc):
                idx.append(r)
                val.append(acc[r])
            ptr.append(len(idx))
            owner.append((j, n, c))

    def describe(i):
        j, n, c = owner[i]
        t = sec.spaces[n].tuple_at(sec.pivots[n][c])
        return {"u_power": j, "n": n, "tuple": sec.spaces[n].label(t),
                "invariant": bool(invariants and act is not None)}
    return deg, ptr, idx, ColumnMatrix(0, [0], [], val, f).val, describe


# ---- path 2: streamed Hochschild complex --------------------------------------

def _path2(A, act, g, n_max, conv, q_cut):
    f = A.field
    ctx = ch._ctx(A, act, g if act is not None else None)
    spaces = [ch.ChainSpace(A, n, g if act is not None else 0) for n in range(n_max + 1)]
    offs, at = [], 0
    for sp in spaces:
        offs.append(at)
        at += sp.dim
    deg = np.concatenate([chain_degrees(A, n) for n in range(n_max + 1)])
    ptr, idx, val = array("q", [0]), array("q"), []
    has_d = A.has_differential()
    b_terms, d_terms = ch.b_terms, ch.d_terms
    reduce = f.reduce
    degs = A.degrees
    p = [x + 1 for x in degs]
    for n, sp in enumerate(spaces):
        below = spaces[n - 1] if n else None
        index = sp.index
        bindex = below.index if below is not None else None
        o, ob = offs[n], offs[n - 1] if n else 0
        for t in sp.iter_tuples():
            if q_cut is not None and degs[t[0]] + sum(p[x] for x in t[1:]) > q_cut:
                ptr.append(len(idx))
                continue
            acc = {}
            if n:
                for u, c in b_terms(ctx, conv, t):
                    i = bindex(u)
                    if i >= 0:
                        i += ob
                        acc[i] = acc.get(i, 0) + c
            if has_d:
                for u, c in d_terms(ctx, conv, t):
                    i = index(u)
                    if i >= 0:
                        i += o
                        acc[i] = acc.get(i, 0) + c
            for i in sorted(acc):
                x = reduce(acc[i])
                if x:
                    idx.append(i)
                    val.append(x)
            ptr.append(len(idx))

    def describe(i):
        n = max(k for k in range(n_max + 1) if offs[k] <= i)
        t = spaces[n].tuple_at(i - offs[n])
        return {"u_power": 0, "n": n, "tuple": spaces[n].label(t), "invariant": False}
    return (deg, np.frombuffer(ptr, dtype=np.int64), np.frombuffer(idx, dtype=np.int64),
            ColumnMatrix(0, [0], [], val, f).val, describe)


# ---- public entry points -----------------------------------------------------

def _sector_name(act, g):
    if act is None:
        return "e"
    return act.group.names[g]


def _table(A, act, g, n_max, W, conv, invariants, stream):
    conv = conv or ch.default_convention()
    q_cut, valid = truncation(A, n_max, W)
    if stream:
        deg, ptr, idx, val, describe = _path2(A, act, g, n_max, conv, q_cut)
    else:
        deg, ptr, idx, val, describe = _path1(A, act, g, n_max, W, conv, invariants)
    cx = _split(A.field, deg, ptr, idx, val, q_cut, describe)
    dims, ranks = complex_homology(cx)
    if dims:
        top = q_cut if q_cut is not None else max(dims)
        for q in range(min(A.degrees) - 2 * W.hi, top + 1):
            dims.setdefault(q, 0)
        dims = {q: dims[q] for q in sorted(dims)}
    return HomologyTable(
        sector=_sector_name(act, g), coefficients=W.choice, u_window=W.window,
        n_max=n_max, dims=dims, valid={q: bool(valid(q)) for q in dims},
        convention_hash=conv.digest(), invariants=bool(invariants and act is not None),
        ranks=ranks, complete_above=not A.nonunit and W.choice == "hochschild")


def twisted_hochschild(A, act=None, g=0, n_max=3, convention=None):
    """Homology of (C(A)_g, b^g + d) on the full twisted sector (streamed)."""
    return _table(A, act, g, n_max, CoefficientW("hochschild"), convention, False, True)


def invariant_subcomplex(A, act, g, n_max, convention=None):
    """Centralizer-invariant subcomplex of sector g as a GradedComplex
    (Hochschild differential), together with the invariant bases per length."""
    conv = convention or ch.default_convention()
    W = CoefficientW("hochschild")
    q_cut, _ = truncation(A, n_max, W)
    deg, ptr, idx, val, describe = _path1(A, act, g, n_max, W, conv, True)
    return _split(A.field, deg, ptr, idx, val, q_cut, describe)


def invariant_bases(act, g, n):
    """Deterministic RREF basis of the image of the averaging projector on C_n."""
    P = ch.averaging_projector(act, g, n)
    return rref_columns(P.matrix.cols, act.algebra.field)


def mixed_homology(A, act=None, g=0, W=None, n_max=3, convention=None, invariants=False):
    """Homology of the windowed total complex with differential b^g + d + uB^g."""
    W = W or CoefficientW("hochschild")
    return _table(A, act, g, n_max, W, convention, invariants, False)


@dataclass
class DecompositionReport:
    lhs: HomologyTable
    rhs: dict
    degrees: list
    rows: list
    coefficients: str

    @property
    def agrees(self):
        return all(r["lhs"] == r["rhs"] for r in self.rows)

    def to_json(self):
        return {"coefficients": self.coefficients,
                "degrees": self.degrees,
                "agrees": self.agrees,
                "rows": self.rows,
                "lhs": self.lhs.to_json(),
                "rhs": {k: v.to_json() for k, v in self.rhs.items()}}

    def text(self):
        reps = list(self.rhs)
        head = "degree  crossed-product  " + "  ".join(f"[{r}]" for r in reps) + "  sum  ok"
        lines = [head]
        for row in self.rows:
            parts = "  ".join(str(row["sectors"][r]) for r in reps)
            ok = "yes" if row["lhs"] == row["rhs"] else "NO"
            lines.append(f"{row['degree']:>6}  {row['lhs']:>15}  {parts}  {row['rhs']}  {ok}")
        lines.append("agreement" if self.agrees else "MISMATCH")
        return "\n".join(lines)


def check_decomposition(A, act, n_max=3, convention=None, W=None):
    """Crossed product homology against the sum over class representatives of
    centralizer-invariant twisted sectors, degree by degree in the common window."""
    W = W or CoefficientW("hochschild")
    conv = convention or ch.default_convention()
    AG = crossed_product(A, act)
    if W.choice == "hochschild":
        lhs = twisted_hochschild(AG, None, 0, n_max, conv)
    else:
        lhs = mixed_homology(AG, None, 0, W, n_max, conv)
    lhs.sector = "crossed-product"
    rhs = {}
    G = act.group
    for g in class_representatives(G):
        rhs[G.names[g]] = mixed_homology(A, act, g, W, n_max, conv, invariants=True)
    degrees = [q for q in sorted(lhs.dims) if _window_ok(lhs, rhs, q)]
    rows = []
    for q in degrees:
        parts = {k: t.dim(q) for k, t in rhs.items()}
        rows.append({"degree": q, "lhs": lhs.dim(q), "rhs": sum(parts.values()),
                     "sectors": parts})
    return DecompositionReport(lhs, rhs, degrees, rows, W.choice)


def _window_ok(lhs, rhs, q):
    return lhs.valid.get(q, lhs.complete_above) and \
        all(t.valid.get(q, t.complete_above) for t in rhs.values())
