"""Homology of twisted sectors, invariant subcomplexes and windowed mixed complexes."""
import pytest

from oracles import KoszulEngine, loday_hochschild_dims
from eqcartan import cartan, chains as ch, cochains as co, corpus, homology as H
from eqcartan.algebra import DGAlgebra
from eqcartan.group import centralizer
from eqcartan.linalg import ColumnMatrix
from eqcartan.scalars import Field


def _valid(table):
    return [table.dims[q] for q in table.valid_degrees]


def test_ground_field_concentrated_in_degree_0():
    for gname in ["trivial", "z2", "z3", "s3"]:
        A, act = corpus.pair("field", gname)
        for g in cartan.sectors(act):
            t = H.twisted_hochschild(A, act, g, 3)
            assert t.dims == {0: 1} and t.valid == {0: True}


def test_dual_numbers_pattern():
    A = corpus.algebra("dual")
    t = H.twisted_hochschild(A, None, 0, 5)
    assert t.valid_degrees == [0, 1, 2, 3, 4]
    assert _valid(t) == [2, 1, 1, 1, 1]
    want = loday_hochschild_dims(A.names, A.mul, 5)
    assert _valid(t) == [want[q] for q in range(5)]


def test_dual_numbers_char_2():
    # over F_2 every face of b cancels in pairs, so b = 0 and H_n = C_n
    F = Field(2)
    A = DGAlgebra(["e", "x"], [0, 0], 0, {(1, 1): {}}, {}, F)
    t = H.twisted_hochschild(A, None, 0, 5)
    assert _valid(t) == [2, 2, 2, 2, 2]


def test_acyclic_is_quasi_isomorphic_to_field():
    A = corpus.algebra("acyclic")
    k = corpus.algebra("field")
    t = H.twisted_hochschild(A, None, 0, 4)
    tk = H.twisted_hochschild(k, None, 0, 4)
    assert t.valid_degrees
    for q in t.valid_degrees:
        assert t.dims[q] == tk.dim(q)


def test_trivial_group_invariants_are_everything():
    for name in ["exterior", "triangular", "acyclic"]:
        A, act = corpus.pair(name, "trivial")
        full = H.twisted_hochschild(A, None, 0, 3)
        inv = H.mixed_homology(A, act, 0, None, 3, invariants=True)
        assert inv.dims == full.dims and inv.valid == full.valid


def test_projector_image_dimension():
    A, act = corpus.pair("exterior", "z2_neg")
    x = A.index["x"]
    for n in range(4):
        basis, pivots = H.invariant_bases(act, 0, n)
        even = [t for t in ch.ChainSpace(A, n).basis if sum(1 for a in t if a == x) % 2 == 0]
        assert len(basis) == len(even)


@pytest.mark.parametrize("a,gn", corpus.PAIRS)
def test_mixed_hochschild_equals_streamed(a, gn):
    A, act = corpus.pair(a, gn)
    for g in cartan.sectors(act):
        t1 = H.twisted_hochschild(A, act, g, 3)
        t2 = H.mixed_homology(A, act, g, H.CoefficientW("hochschild"), 3)
        assert t1.dims == t2.dims and t1.valid == t2.valid


def test_cyclic_ground_field():
    A = corpus.algebra("field")
    W = H.CoefficientW.make("cyclic", 3)
    t = H.mixed_homology(A, None, 0, W, 3)
    assert t.label == "u-window approximation"
    assert [t.dims[q] for q in t.valid_degrees] == [1, 0, 1, 0, 1, 0, 1]
    assert t.valid_degrees == list(range(7))


def test_cyclic_default_window():
    assert H.CoefficientW.make("cyclic", None, 4).window == [-4, 0]
    for choice in ["periodic", "negative"]:
        with pytest.raises(ValueError, match="u-window"):
            H.CoefficientW.make(choice, None, 4)
    with pytest.raises(ValueError):
        H.CoefficientW("cyclic", 0, 2)
    with pytest.raises(ValueError):
        H.CoefficientW("bogus")


@pytest.mark.parametrize("a,gn", [("exterior", "z2_neg"), ("dual", "trivial"), ("triangular", "trivial")])
def test_window_stability(a, gn):
    """Enlarging the u-window never changes a degree that was already valid."""
    A, act = corpus.pair(a, gn)
    for g in cartan.sectors(act):
        small = H.mixed_homology(A, act, g, H.CoefficientW.make("cyclic", 1), 3, invariants=True)
        big = H.mixed_homology(A, act, g, H.CoefficientW.make("cyclic", 3), 3, invariants=True)
        assert small.valid_degrees
        for q in small.valid_degrees:
            assert big.valid[q] and big.dims[q] == small.dims[q]


def test_periodic_and_negative_have_no_valid_degrees():
    A = corpus.algebra("exterior")
    for choice in ["periodic", "negative"]:
        t = H.mixed_homology(A, None, 0, H.CoefficientW.make(choice, 2), 3)
        assert t.valid_degrees == [] and t.label == "u-window approximation"


def test_truncation_cut_is_a_subcomplex():
    # the table reports zero-filled degrees down to min degree - 2 hi
    A = corpus.algebra("exterior")
    q_cut, valid = H.truncation(A, 3, H.CoefficientW("hochschild"))
    assert q_cut == 0 + 4 * 2 - 1
    assert valid(q_cut - 1) and not valid(q_cut)
    t = H.twisted_hochschild(A, None, 0, 3)
    assert max(t.dims) == q_cut and not t.valid[q_cut]


def test_negative_degree_generator_rejected_for_mixed():
    A = DGAlgebra(["e", "z"], [0, -1], 0, {(1, 1): {}}, {})
    with pytest.raises(ValueError):
        H.mixed_homology(A, None, 0, H.CoefficientW.make("cyclic", 2), 3)
    t = H.twisted_hochschild(A, None, 0, 2)
    assert t.valid_degrees == []


def _oracle_complex(A, act, g, n_max):
    """Graded complex (by total degree) from the Koszul engine's b = -L_m2."""
    K = KoszulEngine(A, act, g)
    M = co.m2(A)
    spaces = [ch.ChainSpace(A, n, g) for n in range(n_max + 1)]
    deg = {}
    pos = {}
    for sp in spaces:
        for t in sp.basis:
            q = sp.degree(t)
            pos[t] = (q, deg.get(q, 0))
            deg[q] = deg.get(q, 0) + 1
    cols = {q: [None] * m for q, m in deg.items()}
    for sp in spaces:
        for t in sp.basis:
            q, j = pos[t]
            out = K.L(M, t) if sp.n else {}
            cols[q][j] = {pos[u][1]: -c for u, c in out.items()}
    diffs = {q: ColumnMatrix.from_dicts(deg.get(q - 1, 0), cols[q], A.field) for q in deg}
    return H.GradedComplex(A.field, deg, diffs)


@pytest.mark.parametrize("a,gn", [("exterior", "trivial"), ("exterior", "z2_neg"), ("dual", "z2_neg")])
def test_against_koszul_engine_complex(a, gn):
    A, act = corpus.pair(a, gn)
    for g in cartan.sectors(act):
        ours = H.twisted_hochschild(A, act, g, 4)
        cx = _oracle_complex(A, act, g, 4)
        dims, _ = H.complex_homology(cx)
        for q in ours.valid_degrees:
            assert ours.dims[q] == dims.get(q, 0), (a, gn, g, q)


def test_decomposition_trivial_group():
    A, act = corpus.pair("exterior", "trivial")
    rep = H.check_decomposition(A, act, 3)
    assert rep.agrees and rep.degrees


@pytest.mark.parametrize("a,gn", [("exterior", "z2_neg"), ("dual", "z2_neg"), ("field", "s3")])
def test_decomposition(a, gn):
    A, act = corpus.pair(a, gn)
    rep = H.check_decomposition(A, act, 3)
    assert rep.agrees, rep.text()
    assert rep.degrees == [0, 1, 2]
    assert set(rep.rhs) == {act.group.names[g] for g in cartan.sectors(act)}


def test_decomposition_cyclic():
    A, act = corpus.pair("exterior", "z2_neg")
    rep = H.check_decomposition(A, act, 3, W=H.CoefficientW.make("cyclic", 3))
    assert rep.agrees and rep.degrees


def test_group_algebra_sector_count():
    # k[S_3] has HH_0 = number of conjugacy classes
    A, act = corpus.pair("field", "s3")
    rep = H.check_decomposition(A, act, 2)
    assert rep.rows[0]["lhs"] == 3
    for g in cartan.sectors(act):
        assert len(centralizer(act.group, g)) in (6, 2, 3)


def test_table_json_and_text():
    A, act = corpus.pair("exterior", "z2_neg")
    t = H.mixed_homology(A, act, 1, None, 3, invariants=True)
    obj = t.to_json()
    assert obj["sector"] == "s" and obj["invariants"] is True
    assert obj["convention_hash"] == ch.default_convention().digest()
    assert [d["degree"] for d in obj["dims"]] == sorted(t.dims)
    assert "H_0" in t.text()
