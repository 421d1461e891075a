"""Finite groups by multiplication table and their actions on DG algebras."""
from .algebra import StructuralError, Violation
from .sparse import vec_add


class OrderNotInvertible(ValueError):
    pass


class ActionError(ValueError):
    def __init__(self, report):
        super().__init__("invalid group action: " + "; ".join(v.axiom for v in report))
        self.report = report


class FiniteGroup:
    def __init__(self, names, table, identity):
        names = list(names)
        n = len(names)
        if len(set(names)) != n:
            raise StructuralError("group element names are not unique")
        if isinstance(identity, str):
            if identity not in names:
                raise StructuralError(f"identity {identity!r} is not a group element")
            identity = names.index(identity)
        if len(table) != n or any(len(row) != n for row in table):
            raise StructuralError("multiplication table has the wrong shape")
        for row in table:
            for x in row:
                if not (isinstance(x, int) and 0 <= x < n):
                    raise StructuralError(f"table entry {x!r} out of range")
        self.names = names
        self.table = [list(r) for r in table]
        self.identity = identity
        self.order = n
        self.index = {s: i for i, s in enumerate(names)}
        self._inv = None

    def mul(self, h, k):
        return self.table[h][k]

    def inverse(self, h):
        if self._inv is None:
            inv = [None] * self.order
            for a in range(self.order):
                for b in range(self.order):
                    if self.table[a][b] == self.identity:
                        inv[a] = b
                        break
            self._inv = inv
        return self._inv[h]

    def is_abelian(self):
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(self.order))

    def to_json(self):
        return {"elements": list(self.names),
                "table": [[self.names[x] for x in row] for row in self.table],
                "identity": self.names[self.identity]}


def validate_group(G):
    out = []
    n, t, e, names = G.order, G.table, G.identity, G.names
    for a in range(n):
        if t[e][a] != a or t[a][e] != a:
            out.append(Violation("group-identity", (names[a],), "e*h = h*e = h fails"))
    for a in range(n):
        if not any(t[a][b] == e and t[b][a] == e for b in range(n)):
            out.append(Violation("group-inverse", (names[a],), "no two-sided inverse"))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if t[t[a][b]][c] != t[a][t[b][c]]:
                    out.append(Violation("group-associativity", (names[a], names[b], names[c]),
                                         "(hk)l != h(kl)"))
    return out


def conjugacy_classes(G):
    """Classes in order of their least element; representative = least index."""
    seen = set()
    classes = []
    for g in range(G.order):
        if g in seen:
            continue
        cls = sorted({G.mul(G.mul(h, g), G.inverse(h)) for h in range(G.order)})
        seen.update(cls)
        classes.append(cls)
    return classes


def class_representatives(G):
    return [c[0] for c in conjugacy_classes(G)]


def centralizer(G, g):
    return [h for h in range(G.order) if G.mul(h, g) == G.mul(g, h)]


class GroupAction:
    """rho[h] is a list of columns: rho[h][i] = h(a_i) as {k: c}."""

    def __init__(self, group, algebra, rho):
        if len(rho) != group.order:
            raise StructuralError("need one matrix per group element")
        n = algebra.dim
        f = algebra.field
        clean = []
        for mat in rho:
            if len(mat) != n:
                raise StructuralError("action matrix has the wrong size")
            cols = []
            for col in mat:
                c2 = {}
                for k, c in col.items():
                    if not (isinstance(k, int) and 0 <= k < n):
                        raise StructuralError(f"action index {k!r} out of range")
                    c = f.reduce(c)
                    if c:
                        c2[k] = c
                cols.append(c2)
            clean.append(cols)
        self.group = group
        self.algebra = algebra
        self.rho = clean

    @classmethod
    def trivial(cls, group, algebra):
        ident = [{i: 1} for i in range(algebra.dim)]
        return cls(group, algebra, [list(ident) for _ in range(group.order)])

    def apply(self, h, vec):
        acc = {}
        f = self.algebra.field
        for i, c in vec.items():
            vec_add(acc, self.rho[h][i], c, f)
        return acc

    def acts_trivially(self, h):
        return all(self.rho[h][i] == {i: 1} for i in range(self.algebra.dim))

    def is_trivial(self):
        return all(self.acts_trivially(h) for h in range(self.group.order))

    def digest(self):
        import hashlib
        import json
        f = self.algebra.field
        obj = [[sorted((k, f.format(c)) for k, c in col.items()) for col in m] for m in self.rho]
        text = json.dumps([self.group.to_json(), self.algebra.digest(), obj], sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def validate_action(act):
    """Violations with witnesses; raises OrderNotInvertible when |G| = 0 in k."""
    A, G = act.algebra, act.group
    f = A.field
    if not f.order_invertible(G.order):
        raise OrderNotInvertible(f"|G| = {G.order} is not invertible in F_{f.p}")
    out = validate_group(G)
    if out:
        return out
    names, gn = A.names, G.names
    n = A.dim
    ident = [{i: 1} for i in range(n)]
    if act.rho[G.identity] != ident:
        out.append(Violation("identity-acts-trivially", (gn[G.identity],), "rho(e) != id"))
    for h in range(G.order):
        r = act.rho[h]
        if r[A.unit] != {A.unit: 1}:
            out.append(Violation("unital", (gn[h],), "h(e) != e"))
        for i in range(n):
            if any(A.degrees[k] != A.degrees[i] for k in r[i]):
                out.append(Violation("degree-preserving", (gn[h], names[i]), "h changes degree"))
        for i in range(n):
            for j in range(n):
                lhs = act.apply(h, A.mul(i, j))
                rhs = A.mulv(r[i], r[j])
                if lhs != rhs:
                    out.append(Violation("multiplicative", (gn[h], names[i], names[j]),
                                         "h(ab) != h(a)h(b)"))
        for i in range(n):
            if act.apply(h, A.diff[i]) != A.dv(r[i]):
                out.append(Violation("commutes-with-d", (gn[h], names[i]), "h(da) != d(ha)"))
        hinv = G.inverse(h)
        for i in range(n):
            if act.apply(h, act.rho[hinv][i]) != {i: 1}:
                out.append(Violation("invertible", (gn[h], names[i]), "rho(h) rho(h^-1) != id"))
                break
    for h in range(G.order):
        for k in range(G.order):
            hk = G.mul(h, k)
            for i in range(n):
                if act.apply(h, act.rho[k][i]) != act.rho[hk][i]:
                    out.append(Violation("homomorphism", (gn[h], gn[k], names[i]),
                                         "rho(h)rho(k) != rho(hk)"))
                    break
    return out
