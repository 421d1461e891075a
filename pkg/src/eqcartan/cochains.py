"""Hochschild cochains, the Gerstenhaber operations, and the operators L_D, ι_D, S_D.

A cochain of arity d and map degree m has total degree |D| = m + d.  Signs use
the suspended degrees p = |a| + 1 together with the internal sign
sigma(a_1..a_d) = sum_j (d - j) p_j, which converts D into the shifted map
s D (s^{-1})^{⊗d}.
"""
import hashlib
import itertools
import random
import json

from .chains import ChainSpace, SparseOperator, assemble, _apply_all, _ctx, _cached, zero_operator
from .sparse import vec_add


class Cochain:
    """values: dict over index tuples (all basis elements allowed) -> {k: c}."""

    def __init__(self, A, arity, map_degree, values=None):
        self.algebra = A
        self.arity = arity
        self.map_degree = map_degree
        f = A.field
        vals = {}
        for args, vec in (values or {}).items():
            vec = {k: f.reduce(c) for k, c in vec.items() if f.reduce(c)}
            if vec:
                vals[tuple(args)] = vec
        self.values = vals
        self._digest = None

    @property
    def total_degree(self):
        return self.map_degree + self.arity

    @property
    def parity(self):
        """Parity of the shifted map, |D| + 1."""
        return (self.total_degree + 1) % 2

    def __call__(self, args):
        return self.values.get(tuple(args), {})

    def is_zero(self):
        return not self.values

    def is_normalized(self):
        u = self.algebra.unit
        return all(u not in args for args in self.values)

    def degree_violations(self):
        deg = self.algebra.degrees
        out = []
        for args, vec in sorted(self.values.items()):
            want = sum(deg[a] for a in args) + self.map_degree
            if any(deg[k] != want for k in vec):
                out.append([self.algebra.names[a] for a in args])
        return out

    def __eq__(self, other):
        if isinstance(other, Cochain) and self.is_zero() and other.is_zero():
            return True
        return (isinstance(other, Cochain) and self.arity == other.arity
                and self.algebra.digest() == other.algebra.digest()
                and self.values == other.values
                and (self.is_zero() or self.map_degree == other.map_degree))

    def __add__(self, other):
        return combine([(1, self), (1, other)])

    def __sub__(self, other):
        return combine([(1, self), (-1, other)])

    def scale(self, c):
        return combine([(c, self)])

    def digest(self):
        if self._digest is None:
            f = self.algebra.field
            obj = [self.arity, self.map_degree, self.algebra.digest(),
                   sorted((list(a), sorted((k, f.format(c)) for k, c in v.items()))
                          for a, v in self.values.items())]
            self._digest = hashlib.sha256(json.dumps(obj).encode()).hexdigest()[:16]
        return self._digest

    def to_json(self):
        A = self.algebra
        f = A.field
        vals = []
        for args in sorted(self.values):
            vec = self.values[args]
            vals.append({"args": [A.names[a] for a in args],
                         "result": [{"basis": A.names[k], "coeff": f.format(vec[k])} for k in sorted(vec)]})
        return {"arity": self.arity, "map_degree": self.map_degree, "values": vals}

    def __repr__(self):
        return f"Cochain(arity={self.arity}, map_degree={self.map_degree}, {len(self.values)} values)"


def combine(terms):
    """Linear combination sum c_i D_i of cochains of equal arity and degree."""
    terms = [(c, D) for c, D in terms]
    A = terms[0][1].algebra
    f = A.field
    # zero terms carry no arity or degree information
    nonzero = [D for _, D in terms if not D.is_zero()]
    if len({D.arity for D in nonzero}) > 1 or len({D.map_degree for D in nonzero}) > 1:
        raise ValueError("cannot add cochains of different arity or degree")
    ref = nonzero[0] if nonzero else terms[0][1]
    vals = {}
    for c, D in terms:
        for args, vec in D.values.items():
            vec_add(vals.setdefault(args, {}), vec, c, f)
    vals = {a: v for a, v in vals.items() if v}
    return Cochain(A, ref.arity, ref.map_degree, vals)


def from_function(A, arity, map_degree, fn):
    vals = {}
    for args in itertools.product(range(A.dim), repeat=arity):
        v = fn(args)
        if v:
            vals[args] = dict(v)
    return Cochain(A, arity, map_degree, vals)


def m2(A):
    """The product as an arity-2 cochain (not normalized: m2(e, a) = a)."""
    return from_function(A, 2, 0, lambda args: A.mul(*args))


def m1(A):
    """The differential as an arity-1 cochain of map degree -1."""
    return from_function(A, 1, -1, lambda args: A.diff[args[0]])


def identity_cochain(A):
    return from_function(A, 1, 0, lambda args: {args[0]: 1} if args[0] != A.unit else {})


def constant_cochain(A, vec, degree):
    """Arity-0 cochain with value vec (homogeneous of the given degree)."""
    return Cochain(A, 0, degree, {(): dict(vec)})


def zero_cochain(A, arity, map_degree=0):
    return Cochain(A, arity, map_degree, {})


def _p(A, i):
    return A.degrees[i] + 1


def _sigma(A, args):
    d = len(args)
    return sum((d - 1 - j) * (A.degrees[a] + 1) for j, a in enumerate(args)) % 2


def _out_degree(D, args):
    return sum(D.algebra.degrees[a] for a in args) + D.map_degree


def delta(D):
    """Hochschild coboundary; delta(D) = [m2, D]."""
    A = D.algebra
    f = A.field
    d, m = D.arity, D.map_degree
    deg = A.degrees
    D_tot = D.total_degree

    def fn(a):
        acc = {}
        # a_1 D(a_2, ..., a_{d+1})
        sg = -1 if (m * (deg[a[0]] + 1)) % 2 else 1
        vec_add(acc, A.mulv({a[0]: 1}, D(a[1:])), sg, f)
        for j in range(1, d + 1):
            sg = -1 if (m + j) % 2 else 1
            prod = A.mul(a[j - 1], a[j])
            for r, c in prod.items():
                vec_add(acc, D(a[:j - 1] + (r,) + a[j + 1:]), sg * c, f)
        sg = -1 if (D_tot + 1) % 2 else 1
        vec_add(acc, A.mulv(D(a[:d]), {a[d]: 1}), sg, f)
        return acc
    return from_function(A, d + 1, m, fn)


def cup(D, E):
    """(D ⌣ E)(a_1..a_{d+e}) = (-1)^{|E| sum_{i<=d} p_i} D(a_1..a_d) E(a_{d+1}..a_{d+e})."""
    A = D.algebra
    d = D.arity

    def fn(a):
        sg = -1 if (E.total_degree * sum(_p(A, x) for x in a[:d])) % 2 else 1
        v = A.mulv(D(a[:d]), E(a[d:]))
        return {k: sg * c for k, c in v.items()}
    return from_function(A, d + E.arity, D.map_degree + E.map_degree, fn)


def circle(D, E):
    """Insertion of E into D, summed over the d slots, with Koszul signs.

    (D∘E)(a) = sum_j (-1)^{(|E|+1) sum_{i<=j} p_i + internal} D(a_1..a_j, E(a_{j+1}..a_{j+e}), ...)
    where the internal sign converts to and from the shifted maps.
    """
    A = D.algebra
    f = A.field
    d, e = D.arity, E.arity
    if d == 0:
        return zero_cochain(A, max(e - 1, 0), D.map_degree + E.map_degree)
    N = d + e - 1
    qE = E.parity

    def fn(a):
        acc = {}
        base = _sigma(A, a)
        s = 0
        for j in range(d):
            inner = a[j:j + e]
            ev = E(inner)
            if ev:
                cdeg = _out_degree(E, inner)
                sg_e = _sigma(A, inner)
                for r, c in ev.items():
                    args = a[:j] + (r,) + a[j + e:]
                    # p of the inserted element is cdeg + 1, independent of r
                    sd = sum((d - 1 - i) * ((cdeg if i == j else A.degrees[x]) + 1)
                             for i, x in enumerate(args)) % 2
                    ex = base + qE * s + sg_e + sd
                    vec_add(acc, D(args), -c if ex % 2 else c, f)
            if j < len(a):
                s += _p(A, a[j])
        return acc
    return from_function(A, N, D.map_degree + E.map_degree, fn)


def bracket(D, E):
    """[D, E] = D∘E - (-1)^{(|D|+1)(|E|+1)} E∘D."""
    sg = -1 if (D.parity * E.parity) % 2 else 1
    x, y = circle(D, E), circle(E, D)
    if x.is_zero() and y.is_zero():
        return x
    if x.is_zero():
        return y.scale(-sg)
    if y.is_zero():
        return x
    return combine([(1, x), (-sg, y)])


def apply_group(act, h, D):
    """h ∘ D ∘ (h^{-1})^{⊗d}."""
    A = D.algebra
    G = act.group
    hinv = G.inverse(h)
    f = A.field

    def fn(args):
        acc = {}
        for word, c in _apply_all([list(act.rho[hinv][x].items()) for x in args]):
            vec_add(acc, act.apply(h, D(word)), c, f)
        return acc
    return from_function(A, D.arity, D.map_degree, fn)


def average(D, act):
    """Reynolds average over G; the result is G-equivariant."""
    f = D.algebra.field
    G = act.group
    inv = f.inv(f.from_int(G.order))
    return combine([(inv, apply_group(act, h, D)) for h in range(G.order)])


def is_equivariant(D, act):
    return all(apply_group(act, h, D) == D for h in range(act.group.order))


def normalize_cochain(D):
    u = D.algebra.unit
    return Cochain(D.algebra, D.arity, D.map_degree,
                   {a: v for a, v in D.values.items() if u not in a})


def random_cochain(A, arity, map_degree, rng, lo=-3, hi=3):
    """Normalized homogeneous cochain with small integer coefficients."""
    vals = {}
    for args in itertools.product(A.nonunit, repeat=arity):
        want = sum(A.degrees[a] for a in args) + map_degree
        targets = [k for k in range(A.dim) if A.degrees[k] == want]
        vec = {}
        for k in targets:
            c = rng.randint(lo, hi)
            if c:
                vec[k] = c
        if vec:
            vals[args] = vec
    return Cochain(A, arity, map_degree, vals)


def sample_cochains(A, act, k, seed, equivariant=True, arities=(0, 1, 2), degrees=(-1, 0, 1)):
    """k seeded random normalized cochains (arity, map degree drawn from the given sets).

    With equivariant=True each sample is averaged over the group; samples that
    average to zero (or are zero) are redrawn.
    """
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < k:
        tries += 1
        if tries > 200 * max(k, 1):
            raise ValueError("could not draw nonzero cochains; the algebra may be too small")
        arity = rng.choice(list(arities))
        md = rng.choice(list(degrees))
        D = random_cochain(A, arity, md, rng)
        if equivariant and act is not None:
            D = normalize_cochain(average(D, act))
        if not D.is_zero():
            out.append(D)
    return out


# ---- operators on twisted chains -------------------------------------------

def _lie_terms(D, ctx, t, interior_only):
    A = D.algebra
    p = ctx.p
    n = len(t) - 1
    d = D.arity
    q = D.parity
    out = []
    # interior windows a_{k+1..k+d}, k = 0..n-d
    pre = A.degrees[t[0]]
    for k in range(0, n - d + 1):
        window = t[k + 1:k + 1 + d]
        sig = _sigma(A, window)
        ex = q * pre + sig
        head, tail = t[:k + 1], t[k + 1 + d:]
        for r, v in D(window).items():
            out.append((head + (r,) + tail, -v if ex % 2 else v))
        if k + 1 <= n:
            pre += p[t[k + 1]]
    if interior_only or d == 0 or d > n + 1:
        return out
    ps = [p[x] for x in t]
    total = sum(ps)
    for r_ in range(0, min(d - 1, n) + 1):
        k = n - r_
        left = sum(ps[:k + 1])
        eps = left * (total - left)
        rot = [ctx.ginv[x] for x in t[k + 1:]] + [[(x, 1)] for x in t[:k + 1]]
        window, rest = rot[:d], rot[d:]
        # degrees are unchanged by the twist, so read them off the original slots
        wdeg = [A.degrees[x] for x in (t[k + 1:] + t[:k + 1])[:d]]
        sig = sum((d - 1 - j) * (w + 1) for j, w in enumerate(wdeg)) % 2
        ex = D.total_degree + 1 + eps + sig
        base = -1 if ex % 2 else 1
        for word, c in _apply_all(window):
            val = D(word)
            if not val:
                continue
            for tailw, c2 in _apply_all(rest):
                for r, v in val.items():
                    out.append(((r,) + tailw, base * c * c2 * v))
    return out


def _cochain_key(name, D, act, g, n, flag=None):
    return (name, D.digest(), act.digest() if act is not None else None, g, n, flag)


def lie_derivative(D, act=None, g=0, n=0, interior_only=False):
    """L_D^g : C_n -> C_{n-d+1}; interior_only gives the interior-insertion part alone."""
    A = D.algebra
    if act is None:
        g = None
    d = D.arity
    deg = D.map_degree + 1 - d

    def build():
        src = ChainSpace(A, n, g)
        if n - d + 1 < 0:
            return None
        return assemble(src, ChainSpace(A, n - d + 1, g),
                        lambda t: _lie_terms(D, _ctx(A, act, g), t, interior_only), deg)
    return _cached(_cochain_key("L", D, act, g, n, interior_only), build)


def _iota_terms(D, t):
    A = D.algebra
    d = D.arity
    window = t[1:1 + d]
    ex = D.total_degree * A.degrees[t[0]] + _sigma(A, window)
    val = A.mulv({t[0]: 1}, D(window))
    tail = t[1 + d:]
    return [((r,) + tail, -v if ex % 2 else v) for r, v in val.items()]


def contraction(D, act=None, g=0, n=0):
    """ι_D : C_n -> C_{n-d}; None when n < d (the zero map)."""
    A = D.algebra
    if act is None:
        g = None
    d = D.arity

    def build():
        if n < d:
            return None
        return assemble(ChainSpace(A, n, g), ChainSpace(A, n - d, g),
                        lambda t: _iota_terms(D, t), D.map_degree - d)
    return _cached(_cochain_key("iota", D, act, g, n), build)


def _S_terms(D, ctx, t):
    A = D.algebra
    p = ctx.p
    n = len(t) - 1
    d = D.arity
    q = D.parity
    ps = [p[x] for x in t]
    total = sum(ps)
    e = A.unit
    out = []
    for j in range(0, n - d + 1):
        window = t[j + 1:j + 1 + d]
        val = D(window)
        if not val:
            continue
        sig = _sigma(A, window)
        front = A.degrees[t[0]] + sum(ps[1:j + 1])
        for k in range(j + d, n + 1):
            left = sum(ps[:k + 1])
            right = total - left
            ex = q * (right + front) + left * right + 1 + sig
            sg = -1 if ex % 2 else 1
            rotated = [ctx.ginv[x] for x in t[k + 1:]]
            mid_head = t[:j + 1]
            mid_tail = t[j + 1 + d:k + 1]
            for word, c in _apply_all(rotated):
                for r, v in val.items():
                    out.append(((e,) + word + mid_head + (r,) + mid_tail, sg * c * v))
    return out


def suspension(D, act=None, g=0, n=0):
    """S_D^g : C_n -> C_{n-d+2}; None when n < d (the zero map)."""
    A = D.algebra
    if act is None:
        g = None
    d = D.arity

    def build():
        if n < d:
            return None
        return assemble(ChainSpace(A, n, g), ChainSpace(A, n - d + 2, g),
                        lambda t: _S_terms(D, _ctx(A, act, g), t), D.map_degree + 2 - d)
    return _cached(_cochain_key("S", D, act, g, n), build)
