"""Finite-dimensional DG algebras given by structure constants."""
from dataclasses import dataclass
import hashlib
import json

from .scalars import QQ
from .sparse import vec_add


class StructuralError(ValueError):
    """Malformed input tables (bad indices, missing unit, ...)."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_json(self):
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


class DGAlgebra:
    """Graded basis + unit + products + differential (degree -1).

    products: dict (i, j) -> {k: c} for non-unit i, j.  Products with the
    unit are implied by the unit law and may not be given.
    differential: dict i -> {k: c}; missing entries are zero.
    """

    def __init__(self, names, degrees, unit, products, differential=None, field=QQ):
        names = list(names)
        degrees = [int(d) for d in degrees]
        if len(names) != len(degrees):
            raise StructuralError("names and degrees have different lengths")
        if len(set(names)) != len(names):
            raise StructuralError("basis names are not unique")
        if isinstance(unit, str):
            if unit not in names:
                raise StructuralError(f"unit {unit!r} is not a basis element")
            unit = names.index(unit)
        if not 0 <= unit < len(names):
            raise StructuralError("unit index out of range")
        if degrees[unit] != 0:
            raise StructuralError("unit must have degree 0")
        n = len(names)
        self.names = names
        self.degrees = degrees
        self.unit = unit
        self.field = field
        self.dim = n
        self.index = {s: i for i, s in enumerate(names)}

        def check_vec(vec, where):
            out = {}
            for k, c in vec.items():
                if not (isinstance(k, int) and 0 <= k < n):
                    raise StructuralError(f"basis index {k!r} out of range in {where}")
                c = field.reduce(c)
                if c:
                    out[k] = c
            return out

        mu = {}
        for (i, j), vec in products.items():
            if not (0 <= i < n and 0 <= j < n):
                raise StructuralError(f"product index ({i}, {j}) out of range")
            if i == unit or j == unit:
                raise StructuralError("products with the unit are implied and cannot be given")
            mu[(i, j)] = check_vec(vec, f"product ({names[i]}, {names[j]})")
        for i in range(n):
            mu[(unit, i)] = {i: 1}
            mu[(i, unit)] = {i: 1}
        self.mu = mu
        diff = [{} for _ in range(n)]
        for i, vec in (differential or {}).items():
            if not 0 <= i < n:
                raise StructuralError(f"differential index {i} out of range")
            diff[i] = check_vec(vec, f"differential of {names[i]}")
        self.diff = diff
        self.nonunit = [i for i in range(n) if i != unit]
        self._hash = None

    def mul(self, i, j):
        return self.mu.get((i, j), {})

    def mulv(self, v, w):
        f = self.field
        acc = {}
        for i, a in v.items():
            for j, b in w.items():
                vec_add(acc, self.mul(i, j), a * b, f)
        return acc

    def dv(self, v):
        acc = {}
        for i, a in v.items():
            vec_add(acc, self.diff[i], a, self.field)
        return acc

    def is_trivially_graded(self):
        return all(d == 0 for d in self.degrees)

    def has_differential(self):
        return any(self.diff)

    def is_commutative(self):
        # graded commutativity is not what we want here: plain ab = ba on the basis
        return all(self.mul(i, j) == self.mul(j, i) for i in range(self.dim) for j in range(self.dim))

    def to_json(self):
        f = self.field
        prods = []
        for i in self.nonunit:
            for j in self.nonunit:
                vec = self.mul(i, j)
                prods.append({"left": self.names[i], "right": self.names[j],
                              "result": [{"basis": self.names[k], "coeff": f.format(vec[k])}
                                         for k in sorted(vec)]})
        diff = []
        for i in range(self.dim):
            if self.diff[i]:
                diff.append({"on": self.names[i],
                             "result": [{"basis": self.names[k], "coeff": f.format(self.diff[i][k])}
                                        for k in sorted(self.diff[i])]})
        return {"field": f.to_json(),
                "basis": [{"name": s, "degree": d} for s, d in zip(self.names, self.degrees)],
                "unit": self.names[self.unit], "products": prods, "differential": diff}

    def digest(self):
        if self._hash is None:
            text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
            self._hash = hashlib.sha256(text.encode()).hexdigest()[:16]
        return self._hash

    def __repr__(self):
        return f"DGAlgebra({self.names}, degrees={self.degrees})"


def validate_dg_algebra(A):
    """List of Violation, in a fixed order; empty iff A is a DG algebra."""
    f = A.field
    n = A.dim
    names = A.names
    out = []
    e = A.unit
    for i in range(n):
        if A.mul(e, i) != {i: 1} or A.mul(i, e) != {i: 1}:
            out.append(Violation("unit", (names[i],), "e*a = a*e = a fails"))
    for i in range(n):
        for j in range(n):
            target = A.degrees[i] + A.degrees[j]
            bad = [k for k in A.mul(i, j) if A.degrees[k] != target]
            if bad:
                out.append(Violation("degree", (names[i], names[j]),
                                     f"product has a term {names[bad[0]]} of degree "
                                     f"{A.degrees[bad[0]]}, expected {target}"))
    for i in range(n):
        for j in range(n):
            ij = A.mul(i, j)
            for k in range(n):
                left = A.mulv(ij, {k: 1})
                right = A.mulv({i: 1}, A.mul(j, k))
                if left != right:
                    out.append(Violation("associativity", (names[i], names[j], names[k]),
                                         "(ab)c != a(bc)"))
    for i in range(n):
        bad = [k for k in A.diff[i] if A.degrees[k] != A.degrees[i] - 1]
        if bad:
            out.append(Violation("differential-degree", (names[i],),
                                 f"d({names[i]}) has a term of degree {A.degrees[bad[0]]}"))
    if A.diff[e]:
        out.append(Violation("differential-unit", (names[e],), "d(e) != 0"))
    for i in range(n):
        if A.dv(A.diff[i]):
            out.append(Violation("d-squared", (names[i],), "d(d(a)) != 0"))
    for i in range(n):
        for j in range(n):
            lhs = A.dv(A.mul(i, j))
            rhs = A.mulv(A.diff[i], {j: 1})
            vec_add(rhs, A.mulv({i: 1}, A.diff[j]), (-1) ** (A.degrees[i] % 2), f)
            if lhs != rhs:
                out.append(Violation("leibniz", (names[i], names[j]),
                                     "d(ab) != d(a)b + (-1)^|a| a d(b)"))
    return out


def crossed_product(A, act):
    """A ⋊ G with basis a_i u_h (i outer, h inner) and (a u_h)(b u_k) = a h(b) u_{hk}."""
    from .group import validate_action, ActionError
    report = validate_action(act)
    if report:
        raise ActionError(report)
    G = act.group
    m = G.order
    f = A.field

    def idx(i, h):
        return i * m + h

    names = [f"{a}|{g}" for a in A.names for g in G.names]
    degrees = [d for d in A.degrees for _ in range(m)]
    unit = idx(A.unit, G.identity)
    prods = {}
    for i in range(A.dim):
        for h in range(m):
            x = idx(i, h)
            if x == unit:
                continue
            for j in range(A.dim):
                hb = act.rho[h][j]
                for k in range(m):
                    y = idx(j, k)
                    if y == unit:
                        continue
                    prod = A.mulv({i: 1}, hb)
                    hk = G.table[h][k]
                    prods[(x, y)] = {idx(r, hk): c for r, c in prod.items()}
    diff = {}
    for i in range(A.dim):
        for h in range(m):
            if A.diff[i]:
                diff[idx(i, h)] = {idx(r, h): c for r, c in A.diff[i].items()}
    return DGAlgebra(names, degrees, unit, prods, diff, f)
