import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retrodict.anf import (
    ANFSyntaxError,
    Formula,
    MissingVariableError,
    and_,
    conjoin,
    evaluate,
    min_degree_monomial,
    mobius,
    monomial,
    not_,
    one,
    parse,
    to_text,
    truth_table,
    var,
    xor,
    zero,
)

N_VARS = 5


def brute_table(f: Formula, n: int) -> list[int]:
    # reference evaluation: one assignment dict per point, no vectorization
    out = []
    for x in range(1 << n):
        bits = {i: (x >> i) & 1 for i in range(n)}
        v = 0
        for m in f.terms:
            v ^= all(bits[i] for i in range(n) if m >> i & 1)
        out.append(int(v))
    return out


formulas = st.frozensets(st.integers(0, (1 << N_VARS) - 1), max_size=12).map(Formula)


def test_constants_and_variables():
    assert str(zero()) == "0"
    assert str(one()) == "1"
    assert str(var(3)) == "x3"


def test_xor_examples():
    f = parse("x0 + x1")
    assert xor(f, f) == zero()
    assert str(xor(one(), var(1))) == "1 + x1"
    assert xor(parse("x0 + x1"), parse("x1 + x0x1")) == parse("x0 + x0x1")
    assert brute_table(parse("x0 + x0x1"), 2) == [a ^ (a & b) for b in (0, 1) for a in (0, 1)]


def test_and_examples():
    f = parse("1 + x2 + x0x3")
    assert and_(f, one()) == f
    assert and_(var(0), xor(one(), var(0))) == zero()
    chained = conjoin([var(0), var(1), not_(var(2)), not_(var(3))])
    assert chained == parse("x0x1 + x0x1x3 + x0x1x2 + x0x1x2x3")


def test_not_examples():
    assert not_(zero()) == one()
    assert str(not_(var(0))) == "1 + x0"
    f = parse("x1 + x0x2")
    assert not_(not_(f)) == f


def test_evaluate():
    assert evaluate(parse("x0 + x0x1"), {0: 1, 1: 1}) == 0
    assert evaluate(one(), {}) == 1
    u5 = parse("x0x2 + x0x2x3 + x0x1x2 + x0x1x2x3")
    assert [evaluate(u5, x) for x in range(16)] == [int(x == 5) for x in range(16)]


def test_evaluate_requires_total_assignment():
    with pytest.raises(MissingVariableError):
        evaluate(parse("x0x3"), {0: 1})


def test_mobius_examples():
    assert mobius([0] * 8) == zero()
    assert mobius([0, 1, 1, 0]) == parse("x0 + x1")
    assert mobius([x & 1 for x in range(64)]) == var(0)
    with pytest.raises(ValueError):
        mobius([0, 1, 1])


def test_min_degree_monomial():
    assert min_degree_monomial(parse("x0x2 + x0x2x3 + x0x1x2 + x0x1x2x3")) == monomial(0, 2)
    assert min_degree_monomial(parse("1 + x3 + x0x1")) == 0
    assert min_degree_monomial(parse("x0 + x1")) == monomial(0)
    with pytest.raises(ValueError):
        min_degree_monomial(zero())


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("1 + x0x1", "1 + x0x1"),
        ("x2x0", "x0x2"),
        ("x1 + x0 + 1", "1 + x0 + x1"),
        ("x0 + x0", "0"),
        ("x3x3", "x3"),
        ("0", "0"),
        ("x10x2 + x9", "x9 + x2x10"),
    ],
)
def test_parse_print(text, canonical):
    assert to_text(parse(text)) == canonical
    assert parse(to_text(parse(text))) == parse(text)


@pytest.mark.parametrize("text", ["", "x", "+ x0", "x0 +", "x0 + + x1", "0 + x1", "x0 1", "y0", "x0 * x1"])
def test_parse_errors(text):
    with pytest.raises(ANFSyntaxError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(ANFSyntaxError) as exc:
        parse("x0 + x1 ? x2")
    assert exc.value.pos == 8


@settings(max_examples=200, deadline=None)
@given(formulas, formulas)
def test_canonicality(f, g):
    assert (brute_table(f, N_VARS) == brute_table(g, N_VARS)) == (f == g)


@settings(max_examples=150, deadline=None)
@given(formulas, formulas, formulas)
def test_ring_laws(f, g, h):
    assert xor(xor(f, g), h) == xor(f, xor(g, h))
    assert xor(f, g) == xor(g, f)
    assert xor(f, zero()) == f
    assert xor(f, f) == zero()
    assert and_(and_(f, g), h) == and_(f, and_(g, h))
    assert and_(f, g) == and_(g, f)
    assert and_(f, one()) == f
    assert and_(f, f) == f
    assert and_(f, xor(g, h)) == xor(and_(f, g), and_(f, h))


@settings(max_examples=150, deadline=None)
@given(formulas, formulas)
def test_and_matches_pointwise_product(f, g):
    expected = [a & b for a, b in zip(brute_table(f, N_VARS), brute_table(g, N_VARS))]
    assert brute_table(and_(f, g), N_VARS) == expected


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=256, max_size=256))
def test_mobius_inverse(table):
    f = mobius(table)
    assert brute_table(f, 8) == table
    assert truth_table(f, 8).astype(int).tolist() == table


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 7)), max_size=12))
def test_linear_closure(ops):
    f = zero()
    for negate, i in ops:
        f = xor(f, var(i))
        if negate:
            f = not_(f)
    assert f.degree <= 1


def test_conjoin_dense_and_sparse_paths_agree():
    # a product of many two-term factors takes the dense path; chain and_ is sparse
    factors = [not_(var(i)) for i in range(12)] + [parse("x0 + x3x5 + x11")]
    dense = conjoin(factors)
    sparse = factors[0]
    for f in factors[1:]:
        sparse = Formula(frozenset(_pairwise(sparse.terms, f.terms)))
    assert dense == sparse


def _pairwise(a, b):
    acc = set()
    for m, k in itertools.product(a, b):
        acc ^= {m | k}
    return acc


def test_large_grover_conjunction():
    f = conjoin(not_(var(i)) for i in range(16))
    assert len(f) == 1 << 16
    assert truth_table(f, 16).nonzero()[0].tolist() == [0]


def test_wide_monomials():
    # variable indices far beyond a machine word
    f = conjoin(var(i) for i in range(0, 1000, 7))
    assert f.degree == len(range(0, 1000, 7))
    assert evaluate(f, (1 << 1000) - 1) == 1
    assert parse(to_text(f)) == f


def test_truth_table_rejects_small_n():
    with pytest.raises(ValueError):
        truth_table(var(5), 3)
    assert np.array_equal(truth_table(one(), 2), np.ones(4, dtype=bool))
