"""The builtin example corpus shipped with the package."""
from importlib import resources

ALGEBRAS = ["field", "dual", "exterior", "acyclic", "triangular"]
GROUPS = ["trivial", "z2", "z2_neg", "z2_neg_xy", "z3", "s3", "s3_sign"]

# (algebra, group) pairs used by the acceptance suites
PAIRS = [
    ("field", "trivial"), ("field", "z2"), ("field", "z3"), ("field", "s3"),
    ("dual", "trivial"), ("dual", "z2_neg"),
    ("exterior", "trivial"), ("exterior", "z2_neg"), ("exterior", "z3"),
    ("acyclic", "trivial"), ("acyclic", "z2_neg_xy"),
    ("triangular", "trivial"), ("triangular", "s3_sign"),
]

# probes for the sign search: a trivially graded noncommutative algebra, an
# odd generator, a nonzero differential, all with nontrivial twists
PROBES = [("triangular", "s3_sign"), ("exterior", "z2_neg"), ("acyclic", "z2_neg_xy"),
          ("dual", "z2_neg")]


def builtin_text(name):
    """name is 'algebras/<x>', 'groups/<x>', or a bare algebra/group name."""
    if "/" not in name:
        if name in ALGEBRAS:
            name = "algebras/" + name
        elif name in GROUPS:
            name = "groups/" + name
        else:
            from .io import ParseError
            raise ParseError(f"unknown builtin {name!r}")
    kind, base = name.split("/", 1)
    path = resources.files("eqcartan").joinpath("data", kind, base + ".json")
    try:
        return path.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError):
        from .io import ParseError
        raise ParseError(f"unknown builtin {name!r}") from None


def algebra(name):
    from .io import algebra_from_json, loads
    return algebra_from_json(loads(builtin_text("algebras/" + name)))


def action(alg_name, group_name):
    from .io import group_from_json, loads
    A = algebra(alg_name)
    return group_from_json(loads(builtin_text("groups/" + group_name)), A)


def pair(alg_name, group_name):
    act = action(alg_name, group_name)
    return act.algebra, act


def pairs():
    return [(a, g) + pair(a, g) for a, g in PAIRS]


def matrix_algebra(k):
    """M_k(Q) with basis e (the identity) and E_ij except E_kk, trivially graded."""
    from .algebra import DGAlgebra
    units = [(i, j) for i in range(k) for j in range(k)]
    keep = [u for u in units if u != (k - 1, k - 1)]
    names = ["e"] + [f"E{i + 1}{j + 1}" for i, j in keep]
    idx = {u: t + 1 for t, u in enumerate(keep)}

    def expand(u):
        # E_kk = e - sum_{i<k} E_ii
        if u != (k - 1, k - 1):
            return {idx[u]: 1}
        out = {0: 1}
        for i in range(k - 1):
            out[idx[(i, i)]] = -1
        return out
    prods = {}
    for a in keep:
        for b in keep:
            prods[(idx[a], idx[b])] = expand((a[0], b[1])) if a[1] == b[0] else {}
    return DGAlgebra(names, [0] * len(names), 0, prods, {})
