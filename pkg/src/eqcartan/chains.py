"""Twisted normalized chain spaces C_n(A)_g = A ⊗ Ā^{⊗n} and the operators d, b^g, B^g, t_g.

Slot i of a chain carries the suspended degree p_i = |a_i| + 1; the total
degree of a chain is |a_0| + p_1 + ... + p_n.
"""
from dataclasses import dataclass, asdict, replace
import hashlib
import itertools
import json

from .sparse import Matrix, vec_add


class ChainSpace:
    """Basis of C_n(A)_g in lexicographic order of index tuples.

    normalized=True: slots 1..n range over non-unit basis elements.
    normalized=False: every slot ranges over the whole basis.
    """

    def __init__(self, A, n, g=0, normalized=True):
        if n < 0:
            raise ValueError("chain length must be >= 0")
        self.algebra = A
        self.n = n
        self.g = g
        self.normalized = normalized
        if normalized:
            self.radix = A.dim - 1
            self.pos = [-1] * A.dim
            for k, i in enumerate(A.nonunit):
                self.pos[i] = k
            self.slot = A.nonunit
        else:
            self.radix = A.dim
            self.pos = list(range(A.dim))
            self.slot = list(range(A.dim))
        self.dim = A.dim * self.radix ** n
        self._basis = None

    def key(self):
        return (self.algebra.digest(), self.n, self.normalized)

    def same_shape(self, other):
        return self.key() == other.key()

    def iter_tuples(self):
        return itertools.product(range(self.algebra.dim), *([self.slot] * self.n))

    @property
    def basis(self):
        if self._basis is None:
            self._basis = list(self.iter_tuples())
        return self._basis

    def index(self, t):
        """Index of a tuple, or -1 if it is degenerate in a normalized space."""
        pos, m = self.pos, self.radix
        idx = t[0]
        for x in t[1:]:
            q = pos[x]
            if q < 0:
                return -1
            idx = idx * m + q
        return idx

    def tuple_at(self, idx):
        out = []
        for _ in range(self.n):
            idx, r = divmod(idx, self.radix)
            out.append(self.slot[r])
        out.append(idx)
        return tuple(reversed(out))

    def degree(self, t):
        d = self.algebra.degrees
        return d[t[0]] + sum(d[x] + 1 for x in t[1:])

    def label(self, t):
        return [self.algebra.names[i] for i in t]

    def __repr__(self):
        kind = "normalized" if self.normalized else "unnormalized"
        return f"ChainSpace(n={self.n}, g={self.g}, dim={self.dim}, {kind})"


class SparseOperator:
    def __init__(self, source, target, matrix, degree):
        self.source = source
        self.target = target
        self.matrix = matrix
        self.degree = degree

    @property
    def parity(self):
        return self.degree % 2

    def _check(self, other):
        if not (self.source.same_shape(other.source) and self.target.same_shape(other.target)):
            raise ValueError("operators act between different chain spaces")

    def __add__(self, other):
        self._check(other)
        return SparseOperator(self.source, self.target, self.matrix + other.matrix,
                              self.degree if self.degree == other.degree else None)

    def __sub__(self, other):
        self._check(other)
        return SparseOperator(self.source, self.target, self.matrix - other.matrix,
                              self.degree if self.degree == other.degree else None)

    def __neg__(self):
        return SparseOperator(self.source, self.target, -self.matrix, self.degree)

    def scale(self, c):
        return SparseOperator(self.source, self.target, self.matrix.scale(c), self.degree)

    def __matmul__(self, other):
        if not self.source.same_shape(other.target):
            raise ValueError("cannot compose: target/source mismatch")
        deg = None if self.degree is None or other.degree is None else self.degree + other.degree
        return SparseOperator(other.source, self.target, self.matrix @ other.matrix, deg)

    def is_zero(self):
        return self.matrix.is_zero()

    def __eq__(self, other):
        return (isinstance(other, SparseOperator) and self.source.same_shape(other.source)
                and self.target.same_shape(other.target) and self.matrix == other.matrix)

    def respects_degree(self):
        if self.degree is None:
            return True
        src, tgt = self.source, self.target
        for j, col in enumerate(self.matrix.cols):
            if not col:
                continue
            dj = src.degree(src.tuple_at(j))
            for i in col:
                if tgt.degree(tgt.tuple_at(i)) - dj != self.degree:
                    return False
        return True

    def column(self, j):
        """Column j as [(target tuple labels, coefficient string)]."""
        f = self.matrix.field
        col = self.matrix.cols[j]
        return [(self.target.label(self.target.tuple_at(i)), f.format(col[i])) for i in sorted(col)]

    def __repr__(self):
        return f"SparseOperator({self.source} -> {self.target}, degree={self.degree})"


def zero_operator(source, target, degree):
    return SparseOperator(source, target, Matrix.zero(target.dim, source.dim, source.algebra.field),
                          degree)


def identity_operator(space):
    return SparseOperator(space, space, Matrix.identity(space.dim, space.algebra.field), 0)


@dataclass(frozen=True)
class SignConvention:
    """Switches for the ambiguous exponent groupings.

    b_trailing_one: the k-th face of b carries sum_{i<=k} p_i, plus 1 if set.
    b_cyclic: 'R1' reads the cyclic exponent as |a_n| + p_n (sum_{i<n} p_i + 1),
        'R2' as |a_n| + p_n sum_{i<n} p_i + 1.
    B_eps: 'inclusive' uses (sum_{i<=k} p_i)(sum_{i>=k} p_i), 'exclusive'
        uses (sum_{i<=k} p_i)(sum_{i>k} p_i).
    d_start: first slot differentiated by the internal differential (0 or 1).
    t_sign: 'suspended' uses p_n sum_{i<n} p_i, 'unsuspended' |a_n| sum_{i<n} |a_i|.
    """
    b_trailing_one: bool = True
    b_cyclic: str = "R1"
    B_eps: str = "inclusive"
    d_start: int = 1
    t_sign: str = "unsuspended"

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, obj):
        conv = cls(**obj)
        conv.check()
        return conv

    def check(self):
        if self.b_cyclic not in ("R1", "R2") or self.B_eps not in ("inclusive", "exclusive") \
                or self.d_start not in (0, 1) or self.t_sign not in ("suspended", "unsuspended") \
                or not isinstance(self.b_trailing_one, bool):
            raise ValueError(f"invalid sign convention {self}")

    def digest(self):
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def with_(self, **kw):
        return replace(self, **kw)


SWITCHES = {
    "b_trailing_one": (True, False),
    "b_cyclic": ("R1", "R2"),
    "B_eps": ("inclusive", "exclusive"),
    "d_start": (1, 0),
    "t_sign": ("unsuspended", "suspended"),
}


def convention_family(restrict=None):
    """All conventions, the literal reading of the printed formulas first.

    restrict: optional dict switch -> allowed values.
    """
    keys = list(SWITCHES)
    choices = [restrict.get(k, SWITCHES[k]) if restrict else SWITCHES[k] for k in keys]
    return [SignConvention(**dict(zip(keys, vals))) for vals in itertools.product(*choices)]


_DEFAULT = None


def default_convention():
    """The convention pinned by the shipped certificate."""
    global _DEFAULT
    if _DEFAULT is None:
        from .certificate import load_shipped_certificate
        _DEFAULT = load_shipped_certificate().convention
    return _DEFAULT


def sign_eps(k, degrees, grouping="inclusive"):
    """Parity of (sum_{i<=k} (|a_i|+1)) * (sum_{i>=k} (|a_i|+1)); 'exclusive' uses i > k."""
    p = [d + 1 for d in degrees]
    left = sum(p[:k + 1])
    right = sum(p[k:]) if grouping == "inclusive" else sum(p[k + 1:])
    return (left * right) % 2


# ---- assembly helpers -------------------------------------------------------

class _Ctx:
    """Per (algebra, action, twist) lookup tables."""

    def __init__(self, A, act, g):
        self.A = A
        self.deg = A.degrees
        self.p = [d + 1 for d in A.degrees]
        self.unit = A.unit
        self.field = A.field
        n = A.dim
        self.mul = [[list(A.mul(i, j).items()) for j in range(n)] for i in range(n)]
        self.diff = [list(A.diff[i].items()) for i in range(n)]
        if act is None or g is None:
            self.ginv = [[(i, 1)] for i in range(n)]
            self.twisted = False
        else:
            h = act.group.inverse(g)
            self.ginv = [list(act.rho[h][i].items()) for i in range(n)]
            self.twisted = not act.acts_trivially(h)


_CTX = {}


def _ctx(A, act, g):
    key = (A.digest(), act.digest() if act is not None else None, g)
    c = _CTX.get(key)
    if c is None:
        c = _CTX[key] = _Ctx(A, act, g)
    return c


def _apply_all(vecs):
    """Expand a tensor word of linear combinations into (tuple, coeff) terms."""
    terms = [((), 1)]
    for v in vecs:
        terms = [(t + (r,), c * w) for t, c in terms for r, w in v]
    return terms


def assemble(src, tgt, column_fn, degree):
    """Build a SparseOperator from column_fn(tuple) -> iterable of (tuple, coeff).

    Output tuples are projected onto tgt (degenerate tuples dropped when tgt is
    normalized) only after column_fn has produced them.
    """
    f = src.algebra.field
    cols = []
    index = tgt.index
    for t in src.iter_tuples():
        acc = {}
        for u, c in column_fn(t):
            i = index(u)
            if i < 0:
                continue
            x = f.reduce(acc.get(i, 0) + c)
            if x:
                acc[i] = x
            else:
                acc.pop(i, None)
        cols.append(acc)
    return SparseOperator(src, tgt, Matrix(tgt.dim, src.dim, cols, f), degree)


_OPS = {}


def _cached(key, build):
    op = _OPS.get(key)
    if op is None:
        op = _OPS[key] = build()
    return op


def clear_cache():
    _OPS.clear()
    _CTX.clear()


def _key(name, A, act, g, n, conv, normalized=True):
    return (name, A.digest(), act.digest() if act is not None else None, g, n,
            conv.digest() if conv is not None else None, normalized)


# ---- the operators ---------------------------------------------------------

def b_terms(ctx, conv, t):
    """Raw terms of b^g on a tuple (before projection)."""
    p, mul = ctx.p, ctx.mul
    n = len(t) - 1
    out = []
    s = 0
    extra = 1 if conv.b_trailing_one else 0
    for k in range(n):
        s += p[t[k]]
        sg = -1 if (s + extra) % 2 else 1
        head, tail = t[:k], t[k + 2:]
        for r, c in mul[t[k]][t[k + 1]]:
            out.append((head + (r,) + tail, sg * c))
    if n >= 1:
        an = t[n]
        s_prev = s  # sum_{i<n} p_i
        if conv.b_cyclic == "R1":
            e = ctx.deg[an] + p[an] * (s_prev + 1)
        else:
            e = ctx.deg[an] + p[an] * s_prev + 1
        sg = -1 if e % 2 else 1
        mid = t[1:n]
        for r1, c1 in ctx.ginv[an]:
            for r, c2 in mul[r1][t[0]]:
                out.append(((r,) + mid, sg * c1 * c2))
    return out


def op_b_g(A, act=None, g=0, n=1, convention=None):
    conv = convention or default_convention()
    if act is None:
        g = None

    def build():
        src = ChainSpace(A, n, g)
        if n == 0:
            return zero_operator(src, _ZeroSpace(A, g), -1)
        ctx = _ctx(A, act, g)
        return assemble(src, ChainSpace(A, n - 1, g), lambda t: b_terms(ctx, conv, t), -1)
    return _cached(_key("b", A, act, g, n, conv), build)


class _ZeroSpace(ChainSpace):
    """The zero space below C_0."""

    def __init__(self, A, g):
        self.algebra = A
        self.n = -1
        self.g = g
        self.normalized = True
        self.dim = 0
        self.radix = 0
        self.pos = []
        self.slot = []
        self._basis = []

    def key(self):
        return (self.algebra.digest(), -1, True)

    def iter_tuples(self):
        return iter(())


def d_terms(ctx, conv, t):
    p, diff = ctx.p, ctx.diff
    out = []
    s = 0
    for i, a in enumerate(t):
        if i >= conv.d_start and diff[a]:
            sg = -1 if (s + 1) % 2 else 1
            head, tail = t[:i], t[i + 1:]
            for r, c in diff[a]:
                out.append((head + (r,) + tail, sg * c))
        s += p[a]
    return out


def op_d(A, g=0, n=0, convention=None, act=None):
    conv = convention or default_convention()

    def build():
        ctx = _ctx(A, None, None)
        sp = ChainSpace(A, n, g)
        return assemble(sp, sp, lambda t: d_terms(ctx, conv, t), -1)
    return _cached(_key("d", A, None, g, n, conv), build)


def B_terms(ctx, conv, t):
    if t[0] == ctx.unit:
        return []
    p = ctx.p
    n = len(t) - 1
    ps = [p[x] for x in t]
    total = sum(ps)
    out = []
    left = 0
    for k in range(n + 1):
        left += ps[k]
        right = total - left if conv.B_eps == "exclusive" else total - left + ps[k]
        sg = -1 if (left * right) % 2 else 1
        rotated = [ctx.ginv[x] for x in t[k + 1:]]
        for word, c in _apply_all(rotated):
            out.append(((ctx.unit,) + word + t[:k + 1], sg * c))
    return out


def op_B_g(A, act=None, g=0, n=0, convention=None):
    conv = convention or default_convention()
    if act is None:
        g = None

    def build():
        ctx = _ctx(A, act, g)
        return assemble(ChainSpace(A, n, g), ChainSpace(A, n + 1, g),
                        lambda t: B_terms(ctx, conv, t), 1)
    return _cached(_key("B", A, act, g, n, conv), build)


def t_terms(ctx, conv, t):
    n = len(t) - 1
    an = t[n]
    if conv.t_sign == "suspended":
        e = ctx.p[an] * sum(ctx.p[x] for x in t[:n])
    else:
        e = ctx.deg[an] * sum(ctx.deg[x] for x in t[:n])
    sg = -1 if e % 2 else 1
    rest = t[:n]
    return [((r,) + rest, sg * c) for r, c in ctx.ginv[an]]


def op_t_g(A, act=None, g=0, n=0, convention=None, normalized=False):
    """Twisted cyclic rotation.  It is assembled on unnormalized chains by
    default, since it does not preserve the degenerate subspace."""
    conv = convention or default_convention()
    if act is None:
        g = None

    def build():
        ctx = _ctx(A, act, g)
        sp = ChainSpace(A, n, g, normalized)
        return assemble(sp, sp, lambda t: t_terms(ctx, conv, t), 0)
    return _cached(_key("t", A, act, g, n, conv, normalized), build)


def sector_action(act, g, h, n, normalized=True):
    """u_g a_0 ⊗ ... ⊗ a_n -> u_g h(a_0) ⊗ ... ⊗ h(a_n), for h commuting with g."""
    G = act.group
    if G.mul(h, g) != G.mul(g, h):
        raise ValueError(f"{G.names[h]} is not in the centralizer of {G.names[g]}")
    A = act.algebra

    def build():
        cols = [list(act.rho[h][i].items()) for i in range(A.dim)]
        sp = ChainSpace(A, n, g, normalized)
        return assemble(sp, sp, lambda t: _apply_all([cols[x] for x in t]), 0)
    return _cached(("sector", A.digest(), act.digest(), g, h, n, normalized), build)


def averaging_projector(act, g, n, normalized=True):
    """(1/|Z(g)|) sum over the centralizer of sector_action(h)."""
    from .group import centralizer
    A = act.algebra
    f = A.field
    cent = centralizer(act.group, g)
    if not f.order_invertible(len(cent)):
        raise ValueError("centralizer order is not invertible")
    total = None
    for h in cent:
        op = sector_action(act, g, h, n, normalized)
        total = op if total is None else total + op
    return total.scale(f.inv(f.from_int(len(cent))))


def inclusion(A, n, g=0):
    """Normalized chains -> unnormalized chains."""
    src = ChainSpace(A, n, g, True)
    return assemble(src, ChainSpace(A, n, g, False), lambda t: [(t, 1)], 0)


def projection(A, n, g=0):
    """Unnormalized chains -> normalized chains (degenerate tuples go to zero)."""
    return assemble(ChainSpace(A, n, g, False), ChainSpace(A, n, g, True), lambda t: [(t, 1)], 0)


def unit_insertion(A, n, g=0):
    """Unnormalized s_0: (a_0, ..., a_n) -> (e, a_0, ..., a_n)."""
    e = A.unit
    return assemble(ChainSpace(A, n, g, False), ChainSpace(A, n + 1, g, False),
                    lambda t: [((e,) + t, 1)], 1)
