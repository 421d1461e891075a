"""Identity-driven resolution of the sign convention, and its certificate."""
from importlib import resources
import json

from . import chains as ch
from .sparse import Matrix

IDENTITIES = ["b²", "d²", "bd+db", "B²", "mixed", "dB+Bd", "paracyclic", "norm"]


class ConventionError(RuntimeError):
    def __init__(self, message, survivors):
        super().__init__(message)
        self.survivors = survivors


class Certificate:
    def __init__(self, convention, data):
        self.convention = convention
        self.data = data

    def to_json(self):
        return self.data

    def text(self):
        from .io import dumps
        return dumps(self.data)


def _first_witness(op):
    j = op.matrix.first_nonzero_column()
    return op.source.label(op.source.tuple_at(j))


def _norm_operator(A, act, g, n, conv):
    """π s_0 (sum_r t_g^r) ι on C_n: the norm formula for B."""
    t = ch.op_t_g(A, act, g, n, conv)
    f = A.field
    total = Matrix.identity(t.source.dim, f)
    power = Matrix.identity(t.source.dim, f)
    for _ in range(n):
        power = t.matrix @ power
        total = total + power
    N = ch.SparseOperator(t.source, t.target, total, 0)
    return ch.projection(A, n + 1, g) @ ch.unit_insertion(A, n, g) @ N @ ch.inclusion(A, n, g)


def check_convention(conv, probes, n_max=3, identities=None):
    """None if conv satisfies every identity on every probe; otherwise the
    first failure as a dict (identity, probe, sector, n, witness)."""
    wanted = set(identities or IDENTITIES)
    for pname, A, act in probes:
        G = act.group
        hasd = A.has_differential()
        for g in range(G.order):
            sector = G.names[g]
            ginv = G.inverse(g)
            for n in range(0, n_max + 1):
                b = ch.op_b_g(A, act, g, n, conv) if n >= 1 else None
                d = ch.op_d(A, g, n, conv)
                B = ch.op_B_g(A, act, g, n, conv)
                checks = []
                if n >= 2:
                    checks.append(("b²", lambda: ch.op_b_g(A, act, g, n - 1, conv) @ b))
                checks.append(("d²", lambda: d @ d))
                if n >= 1:
                    checks.append(("bd+db", lambda: b @ d + ch.op_d(A, g, n - 1, conv) @ b))
                checks.append(("B²", lambda: ch.op_B_g(A, act, g, n + 1, conv) @ B))

                def mixed():
                    m = ch.op_b_g(A, act, g, n + 1, conv) @ B
                    if n >= 1:
                        m = m + ch.op_B_g(A, act, g, n - 1, conv) @ b
                    T = ch.sector_action(act, g, ginv, n)
                    return m - (T - ch.identity_operator(T.source))
                checks.append(("mixed", mixed))
                if hasd:
                    checks.append(("dB+Bd", lambda: ch.op_d(A, g, n + 1, conv) @ B + B @ d))

                def paracyclic():
                    t = ch.op_t_g(A, act, g, n, conv)
                    T = ch.sector_action(act, g, ginv, n, normalized=False)
                    return ch.SparseOperator(t.source, t.target, t.matrix.power(n + 1), 0) - T
                checks.append(("paracyclic", paracyclic))
                checks.append(("norm", lambda: B - _norm_operator(A, act, g, n, conv)))
                for name, fn in checks:
                    if name not in wanted:
                        continue
                    op = fn()
                    if not op.is_zero():
                        return {"identity": name, "probe": pname, "sector": sector, "n": n,
                                "witness": _first_witness(op)}
    return None


def check_probe_set(probes):
    kinds = {"trivially-graded-noncommutative": False, "odd-generator": False, "twist": False}
    for _, A, act in probes:
        if A.is_trivially_graded() and not A.is_commutative():
            kinds["trivially-graded-noncommutative"] = True
        if any(d % 2 for d in A.degrees):
            kinds["odd-generator"] = True
        if not act.is_trivial():
            kinds["twist"] = True
    missing = [k for k, v in kinds.items() if not v]
    if missing:
        raise ValueError("probe set lacks: " + ", ".join(missing))


def resolve_signs(probes, family=None, n_max=3, identities=None):
    """Search the convention family; returns (convention, Certificate).

    probes: list of (name, algebra, action).  Raises ConventionError unless
    exactly one candidate survives.
    """
    check_probe_set(probes)
    family = family if family is not None else ch.convention_family()
    records = []
    survivors = []
    for conv in family:
        fail = check_convention(conv, probes, n_max, identities)
        rec = {"convention": conv.to_json(), "hash": conv.digest()}
        if fail is None:
            rec["status"] = "survives"
            survivors.append(conv)
        else:
            rec["status"] = "eliminated"
            rec["eliminated_by"] = fail
        records.append(rec)
    if not survivors:
        raise ConventionError("conventions exhausted: no candidate satisfies the identity suite", [])
    if len(survivors) > 1:
        raise ConventionError(f"{len(survivors)} conventions survive; enlarge the probe set",
                              [c.to_json() for c in survivors])
    conv = survivors[0]
    data = {
        "convention": conv.to_json(),
        "convention_hash": conv.digest(),
        "identities": [i for i in IDENTITIES if i in set(identities or IDENTITIES)],
        "identity_forms": {
            "mixed": "b B + B b = T_g - 1, T_g = action of g^-1 on every slot",
            "paracyclic": "t_g^(n+1) = action of g^-1 on unnormalized chains",
            "norm": "B = projection . unit insertion . (sum_r t_g^r) . inclusion",
        },
        "n_max": n_max,
        "probes": [p[0] for p in probes],
        "candidates": records,
    }
    return conv, Certificate(conv, data)


def builtin_probes():
    from . import corpus
    out = []
    for a, g in corpus.PROBES:
        A, act = corpus.pair(a, g)
        out.append((f"{a}+{g}", A, act))
    return out


def certificate_from_json(obj):
    conv = ch.SignConvention.from_json(obj["convention"])
    if conv.digest() != obj.get("convention_hash"):
        raise ValueError("certificate hash does not match its convention")
    return Certificate(conv, obj)


def load_certificate(path):
    from .io import load
    return certificate_from_json(load(path))


def load_shipped_certificate():
    path = resources.files("eqcartan").joinpath("data", "convention.json")
    try:
        text = path.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError):
        raise RuntimeError("no convention certificate is shipped; run `eqcartan resolve-signs`") from None
    return certificate_from_json(json.loads(text))
