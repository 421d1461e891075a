"""Exact and certified ranks, composition checks, echelon bases."""
from fractions import Fraction
import random

import pytest

from oracles import _rank
from eqcartan import homology as H
from eqcartan.linalg import (WORD_PRIME, ColumnMatrix, first_nonzero_product, rank_exact,
                             rank_modular, rank_python, rref_columns)
from eqcartan.scalars import QQ, Field


def _random_cols(rng, nrows, ncols, density=0.3, lo=-3, hi=3, rank=None):
    if rank is None:
        return [{r: rng.randint(lo, hi) or 1 for r in range(nrows) if rng.random() < density}
                for _ in range(ncols)]
    # a product of random nrows x rank and rank x ncols integer matrices
    left = [[rng.randint(lo, hi) for _ in range(rank)] for _ in range(nrows)]
    cols = []
    for _ in range(ncols):
        w = [rng.randint(lo, hi) for _ in range(rank)]
        col = {r: sum(left[r][k] * w[k] for k in range(rank)) for r in range(nrows)}
        cols.append({r: v for r, v in col.items() if v})
    return cols


def _oracle_rank(cols, p=None):
    if p is None:
        return _rank(cols)
    # Gaussian elimination mod p on dense rows
    rows = [dict(c) for c in cols]
    pivots = {}
    rank = 0
    for r in rows:
        r = {k: v % p for k, v in r.items() if v % p}
        while r:
            lead = min(r)
            if lead not in pivots:
                pivots[lead] = r
                rank += 1
                break
            pv = pivots[lead]
            c = r[lead] * pow(pv[lead], -1, p) % p
            for k, v in pv.items():
                x = (r.get(k, 0) - c * v) % p
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
    return rank


@pytest.mark.parametrize("seed", range(8))
def test_rank_agrees_with_oracle(seed):
    rng = random.Random(seed)
    nrows, ncols = rng.randint(1, 25), rng.randint(1, 25)
    cols = _random_cols(rng, nrows, ncols, rank=rng.randint(0, min(nrows, ncols)))
    cm = ColumnMatrix.from_dicts(nrows, cols, QQ)
    r = _oracle_rank(cols)
    assert rank_python(cm) == r
    assert rank_exact(cm) == r
    assert rank_modular(cm) == r


def test_rank_rational_entries():
    cols = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: Fraction(3, 2), 1: 1}, {1: Fraction(2, 7)}]
    cm = ColumnMatrix.from_dicts(2, cols, QQ)
    assert rank_python(cm) == 2
    cols = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: Fraction(3, 2), 1: 1}]
    assert rank_python(ColumnMatrix.from_dicts(2, cols, QQ)) == 1


def test_rank_large_integers():
    big = 1 << 80
    cols = [{0: big, 1: 1}, {0: 2 * big, 1: 2}, {0: 1, 1: big}]
    cm = ColumnMatrix.from_dicts(2, cols, QQ)
    assert not hasattr(cm.val, "dtype")
    assert rank_python(cm) == 2


@pytest.mark.parametrize("p", [2, 3, 7])
def test_rank_prime_field(p):
    rng = random.Random(p)
    for _ in range(5):
        cols = _random_cols(rng, 12, 15, density=0.4)
        cm = ColumnMatrix.from_dicts(12, [{k: v % p for k, v in c.items() if v % p} for c in cols],
                                     Field(p))
        assert rank_python(cm) == _oracle_rank(cols, p)
        assert rank_modular(cm, p) == _oracle_rank(cols, p)


def test_modular_rank_drops_only_below_rational():
    # [[p, 0], [0, 1]] has rank 2 over Q and rank 1 mod p
    cols = [{0: WORD_PRIME}, {1: 1}]
    cm = ColumnMatrix.from_dicts(2, cols, QQ)
    assert rank_modular(cm) == 1
    assert rank_python(cm) == 2


def test_modular_rank_early_stop():
    rng = random.Random(5)
    cols = _random_cols(rng, 30, 30, density=0.5)
    cm = ColumnMatrix.from_dicts(30, cols, QQ)
    full = rank_modular(cm)
    assert rank_modular(cm, stop=3) == 3 <= full


def test_certified_rank_paths(monkeypatch):
    rng = random.Random(9)
    cols = _random_cols(rng, 20, 20, rank=7)
    cm = ColumnMatrix.from_dicts(20, cols, QQ)
    monkeypatch.setattr(H, "DIRECT_NNZ", 0)
    # the bound is reached: certified without exact elimination
    assert H._certified_rank(cm, 7) == (7, "bound")
    # the bound is not reached: exact fallback
    assert H._certified_rank(cm, 12) == (7, "exact")
    # a prime that divides a minor cannot fool the certificate
    bad = ColumnMatrix.from_dicts(2, [{0: WORD_PRIME}, {1: 1}], QQ)
    assert H._certified_rank(bad, 2) == (2, "exact")


def test_composition_check():
    a = ColumnMatrix.from_dicts(1, [{0: 1}, {0: 1}], QQ)
    b = ColumnMatrix.from_dicts(2, [{0: 1, 1: -1}, {0: 1}], QQ)
    assert first_nonzero_product(a, b) == 1
    b0 = ColumnMatrix.from_dicts(2, [{0: 1, 1: -1}], QQ)
    assert first_nonzero_product(a, b0) is None
    with pytest.raises(ValueError):
        first_nonzero_product(b, b0.__class__.from_dicts(3, [{}], QQ))


def test_composition_check_random_agrees():
    rng = random.Random(3)
    for trial in range(20):
        p = None if trial % 2 else 5
        f = QQ if p is None else Field(p)
        n, m, k = 6, 7, 8
        A = _random_cols(rng, n, m, density=0.3)
        B = _random_cols(rng, m, k, density=0.3)
        if p:
            A = [{r: v % p for r, v in c.items() if v % p} for c in A]
            B = [{r: v % p for r, v in c.items() if v % p} for c in B]
        first = None
        for j, col in enumerate(B):
            acc = {}
            for r, c in col.items():
                for i, v in A[r].items():
                    acc[i] = acc.get(i, 0) + c * v
            if any((v % p if p else v) for v in acc.values()):
                first = j
                break
        got = first_nonzero_product(ColumnMatrix.from_dicts(n, A, f), ColumnMatrix.from_dicts(m, B, f))
        assert got == first


def test_rref_basis():
    vecs = [{0: 2, 1: 4}, {0: 1, 1: 2}, {1: 1, 2: 1}, {0: 1, 2: -2}]
    basis, pivots = rref_columns(vecs, QQ)
    assert pivots == [0, 1]
    assert basis[0] == {0: 1, 2: -2} and basis[1] == {1: 1, 2: 1}
    # each basis vector is 1 at its own pivot and zero at the others
    for i, b in enumerate(basis):
        assert b[pivots[i]] == 1
        assert all(b.get(p, 0) == 0 for k, p in enumerate(pivots) if k != i)


def test_rref_deterministic_and_order_free():
    rng = random.Random(1)
    vecs = _random_cols(rng, 10, 6, rank=4)
    b1 = rref_columns(vecs, QQ)
    b2 = rref_columns(list(reversed(vecs)), QQ)
    assert b1 == b2
    assert len(b1[0]) == 4


def test_complex_homology_examples():
    # zero differentials: H = C
    cx = H.GradedComplex(QQ, {0: 2, 1: 3}, {})
    assert H.complex_homology(cx)[0] == {0: 2, 1: 3}
    # k --1--> k is acyclic
    cx = H.GradedComplex(QQ, {0: 1, 1: 1}, {1: ColumnMatrix.from_dicts(1, [{0: 1}], QQ)})
    assert H.complex_homology(cx)[0] == {0: 0, 1: 0}


def test_not_a_complex():
    d1 = ColumnMatrix.from_dicts(1, [{0: 1}], QQ)
    d2 = ColumnMatrix.from_dicts(1, [{0: 1}], QQ)
    cx = H.GradedComplex(QQ, {0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})
    with pytest.raises(H.NotAComplex) as exc:
        H.complex_homology(cx)
    assert exc.value.degree == 2
