"""JSON input formats for algebras, groups with actions, and cochains."""
import json

from .algebra import DGAlgebra, StructuralError
from .group import FiniteGroup, GroupAction
from .scalars import ScalarParseError, field_from_json


class ParseError(ValueError):
    pass


def _reject_float(text):
    raise ParseError(f"floating point number {text!r} is not allowed; use an exact string")


def _reject_constant(text):
    raise ParseError(f"non-finite constant {text} is not allowed")


def loads(text):
    try:
        return json.loads(text, parse_float=_reject_float, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def load(path):
    from . import corpus
    if isinstance(path, str) and path.startswith("builtin:"):
        return loads(corpus.builtin_text(path[len("builtin:"):]))
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)


def dumps(obj):
    """Canonical, byte-stable JSON."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ParseError(f"{where}: {key!r} must be an integer")
    elif not isinstance(val, kind):
        raise ParseError(f"{where}: {key!r} has the wrong type")
    return val


def _vector(items, index, field, where):
    if not isinstance(items, list):
        raise ParseError(f"{where}: result must be a list")
    vec = {}
    for term in items:
        name = _need(term, "basis", str, where)
        if name not in index:
            raise ParseError(f"{where}: unknown basis element {name!r}")
        if "coeff" not in term:
            raise ParseError(f"{where}: missing key 'coeff'")
        try:
            c = field.parse(term["coeff"])
        except ScalarParseError as exc:
            raise ParseError(f"{where}: {exc}") from None
        k = index[name]
        vec[k] = field.reduce(vec.get(k, 0) + c)
    return {k: c for k, c in vec.items() if c}


def algebra_from_json(obj):
    if not isinstance(obj, dict):
        raise ParseError("algebra file must be a JSON object")
    try:
        field = field_from_json(_need(obj, "field", dict, "algebra"))
    except ScalarParseError as exc:
        raise ParseError(str(exc)) from None
    basis = _need(obj, "basis", list, "algebra")
    names, degrees = [], []
    for b in basis:
        names.append(_need(b, "name", str, "basis"))
        degrees.append(_need(b, "degree", int, "basis"))
    if len(set(names)) != len(names):
        raise ParseError("basis names are not unique")
    index = {s: i for i, s in enumerate(names)}
    unit = _need(obj, "unit", str, "algebra")
    if unit not in index:
        raise ParseError(f"unit {unit!r} is not a basis element")
    u = index[unit]
    prods = {}
    for entry in _need(obj, "products", list, "algebra"):
        left = _need(entry, "left", str, "product")
        right = _need(entry, "right", str, "product")
        if left not in index or right not in index:
            raise ParseError(f"product ({left}, {right}): unknown basis element")
        i, j = index[left], index[right]
        if i == u or j == u:
            raise ParseError(f"product ({left}, {right}): products with the unit are implied")
        if (i, j) in prods:
            raise ParseError(f"product ({left}, {right}) given twice")
        prods[(i, j)] = _vector(_need(entry, "result", list, "product"), index, field,
                                f"product ({left}, {right})")
    missing = [(a, b) for a in range(len(names)) for b in range(len(names))
               if a != u and b != u and (a, b) not in prods]
    if missing:
        a, b = missing[0]
        raise ParseError(f"product ({names[a]}, {names[b]}) is not given")
    diff = {}
    for entry in obj.get("differential", []):
        on = _need(entry, "on", str, "differential")
        if on not in index:
            raise ParseError(f"differential: unknown basis element {on!r}")
        if index[on] in diff:
            raise ParseError(f"differential of {on} given twice")
        diff[index[on]] = _vector(_need(entry, "result", list, "differential"), index, field,
                                  f"differential of {on}")
    try:
        return DGAlgebra(names, degrees, u, prods, diff, field)
    except StructuralError as exc:
        raise ParseError(str(exc)) from None


def group_from_json(obj, algebra):
    """Parse a group file; returns the GroupAction on `algebra`."""
    if not isinstance(obj, dict):
        raise ParseError("group file must be a JSON object")
    elements = _need(obj, "elements", list, "group")
    if not elements or not all(isinstance(x, str) for x in elements):
        raise ParseError("group: elements must be a non-empty list of names")
    if len(set(elements)) != len(elements):
        raise ParseError("group: element names are not unique")
    gi = {s: i for i, s in enumerate(elements)}
    table = _need(obj, "table", list, "group")
    if len(table) != len(elements):
        raise ParseError("group: table has the wrong number of rows")
    rows = []
    for row in table:
        if not isinstance(row, list) or len(row) != len(elements):
            raise ParseError("group: table row has the wrong length")
        out = []
        for x in row:
            if not isinstance(x, str) or x not in gi:
                raise ParseError(f"group: unknown table entry {x!r}")
            out.append(gi[x])
        rows.append(out)
    ident = _need(obj, "identity", str, "group")
    if ident not in gi:
        raise ParseError(f"group: identity {ident!r} is not an element")
    G = FiniteGroup(elements, rows, gi[ident])
    A = algebra
    rho = [[{i: 1} for i in range(A.dim)] for _ in elements]
    action = obj.get("action", {})
    if not isinstance(action, dict):
        raise ParseError("group: action must be an object")
    for gname, entries in action.items():
        if gname not in gi:
            raise ParseError(f"action: unknown group element {gname!r}")
        if not isinstance(entries, list):
            raise ParseError(f"action of {gname}: must be a list")
        seen = set()
        for entry in entries:
            on = _need(entry, "on", str, f"action of {gname}")
            if on not in A.index:
                raise ParseError(f"action of {gname}: unknown basis element {on!r}")
            if on in seen:
                raise ParseError(f"action of {gname} on {on} given twice")
            seen.add(on)
            rho[gi[gname]][A.index[on]] = _vector(_need(entry, "result", list, "action"), A.index,
                                                  A.field, f"action of {gname} on {on}")
        if gi[gname] == G.identity and any(rho[G.identity][i] != {i: 1} for i in range(A.dim)):
            raise ParseError("action: the identity element must act as the identity")
    return GroupAction(G, A, rho)


def cochain_from_json(obj, algebra):
    from .cochains import Cochain
    if not isinstance(obj, dict):
        raise ParseError("cochain file must be a JSON object")
    arity = _need(obj, "arity", int, "cochain")
    mdeg = _need(obj, "map_degree", int, "cochain")
    if arity < 0:
        raise ParseError("cochain: arity must be >= 0")
    A = algebra
    values = {}
    for entry in _need(obj, "values", list, "cochain"):
        args = _need(entry, "args", list, "cochain value")
        if len(args) != arity:
            raise ParseError(f"cochain value {args}: expected {arity} arguments")
        idx = []
        for a in args:
            if not isinstance(a, str) or a not in A.index:
                raise ParseError(f"cochain value: unknown argument {a!r}")
            if A.index[a] == A.unit:
                raise ParseError("cochain arguments must be non-unit basis elements")
            idx.append(A.index[a])
        key = tuple(idx)
        if key in values:
            raise ParseError(f"cochain value {args} given twice")
        values[key] = _vector(_need(entry, "result", list, "cochain value"), A.index, A.field,
                              f"cochain value {args}")
    D = Cochain(A, arity, mdeg, values)
    bad = D.degree_violations()
    if bad:
        raise ParseError(f"cochain value {bad[0]} is not of degree sum|a| + map_degree")
    return D
