from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import zq
from nquasi.core import Permutation, QTable, RetractSpec, permute_args, retract, validate
from nquasi.decompose import evaluate_tree, find_factorization, is_complete
from nquasi.errors import FalsificationError, HypothesisError, PreconditionError
from nquasi.gen import random_latin_hypercube, random_tree_composition
from nquasi.prime import (
    InvariancePair,
    aut_reduce,
    canon_decompose,
    canon_substitute,
    check_n1_retracts,
    find_frame,
    find_invariance_pairs,
    is_invariance,
    lemma2_decompose,
)
from oracles import canon_slots_naive, invariance_pairs_naive, points


def extend(E: QTable, *ops: QTable) -> QTable:
    """``(...(E(x1, x2, x3) op1 x4) op2 x5 ...)``; plain addition when ``ops`` is empty."""
    q = E.q
    a = E.array
    for op in ops or (None, None):
        o = np.add.outer(np.arange(q), np.arange(q)) % q if op is None else op.array
        a = o[a[..., None], np.arange(q)]
    return QTable(a)


# ---------------------------------------------------------------- canon


def test_canon_output_slot(loop5):
    # D = (x1 * x2) + x3: the extension is absorbed at the output, h(u, w) = u - w
    D = QTable((loop5.array[..., None] + np.arange(5)) % 5)
    res = canon_decompose(D)
    assert res.i == 0 and res.fixed_coord == 3
    assert res.h == QTable.from_function(2, 5, lambda u, w: (u - w) % 5)
    assert res.retract == loop5


def test_canon_argument_slot(loop5):
    # D = x1 * (x2 + x3): slot 0 fails, slot 2 of F = loop5 works with h = addition
    D = QTable(loop5.array[:, (np.arange(5)[:, None] + np.arange(5)) % 5])
    res = canon_decompose(D)
    assert res.i == 2
    assert res.h == zq(5, 2)


def test_canon_irreducible_has_none(irr3_q5, irr3_q4):
    for D in (irr3_q5, irr3_q4):
        for c in (1, 2, 3):
            assert canon_decompose(D, c) is None
            assert canon_slots_naive(D, c, 0) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(2, 3), st.integers(0, 10**6), st.integers(0, 3))
def test_canon_matches_naive_and_rebuilds(q, n, seed, v):
    v %= q
    D = random_tree_composition(q, n, seed)[0] if seed % 2 else random_latin_hypercube(q, n, seed)
    for c in range(1, n + 1):
        res = canon_decompose(D, c, v)
        slots = canon_slots_naive(D, c, v)
        if res is None:
            assert slots == []
        else:
            assert res.i == slots[0]
            assert res.fixed_value == v
            assert (res.h.array[:, v] == np.arange(q)).all()
            assert canon_substitute(res, (n, q)) == D


def test_canon_preconditions():
    with pytest.raises(PreconditionError):
        canon_decompose(zq(3, 1))
    with pytest.raises(PreconditionError):
        canon_decompose(zq(3, 3), 4)
    with pytest.raises(PreconditionError):
        canon_decompose(zq(3, 3), 1, 3)


# ---------------------------------------------------------------- invariance pairs


def test_invariance_pairs_z3():
    pairs = find_invariance_pairs(zq(3, 3), 1, 2)
    got = {(p.mu.image, p.nu.image) for p in pairs}
    assert got == {((1, 2, 0), (2, 0, 1)), ((2, 0, 1), (1, 2, 0))}
    assert all(p.cycle_types_match for p in pairs)


@pytest.mark.parametrize("q,n", [(3, 3), (5, 4), (5, 3)])
def test_invariance_pair_count_for_cyclic_groups(q, n):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                assert len(find_invariance_pairs(zq(q, n), i, j)) == q - 1


def test_invariance_pairs_irreducible_is_empty(irr3_q5):
    for i in range(4):
        for j in range(4):
            if i != j:
                assert find_invariance_pairs(irr3_q5, i, j) == []


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_invariance_pairs_match_naive_and_swap(q, seed):
    f = random_tree_composition(q, 3, seed)[0] if seed % 2 else random_latin_hypercube(q, 3, seed)
    for i, j in [(1, 2), (0, 3), (2, 0)]:
        pairs = find_invariance_pairs(f, i, j)
        assert {(p.mu.image, p.nu.image) for p in pairs} == invariance_pairs_naive(f, i, j)
        back = find_invariance_pairs(f, j, i)
        assert {p.swapped() for p in pairs} == set(back)
        for p in pairs:
            assert is_invariance(f, i, j, p.mu, p.nu)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_cycle_types_match_at_prime_order(seed):
    f = random_tree_composition(5, 3, seed)[0]
    for p in find_invariance_pairs(f, 1, 2):
        assert p.cycle_types_match


# ---------------------------------------------------------------- aut_reduce


@pytest.mark.parametrize("q,n", [(3, 3), (5, 4)])
def test_aut_reduce_groups(q, n):
    f = zq(q, n)
    for pair in find_invariance_pairs(f, 1, 2):
        red = aut_reduce(f, pair)
        assert evaluate_tree(red.tree) == f
        g = f.array
        for x in points(n, q):
            inner = red.gamma.inverse()(int(red.alpha.array[x[0], x[1]]))
            assert int(red.beta.array[(inner,) + x[2:]]) == int(g[x])
        for v in range(q):
            assert red.tau[v](v) == 0


def test_aut_reduce_moves_coordinates():
    f = permute_args(extend(random_tree_composition(5, 3, 2)[0]), (4, 2, 5, 1, 3))
    for pair in find_invariance_pairs(f, 3, 5):
        red = aut_reduce(f, pair)
        assert evaluate_tree(red.tree) == f


def test_aut_reduce_rejections():
    f = zq(4, 3)
    pairs = find_invariance_pairs(f, 1, 2)
    assert pairs
    with pytest.raises(HypothesisError):
        aut_reduce(f, pairs[0])
    z = zq(3, 3)
    with pytest.raises(PreconditionError):
        aut_reduce(z, InvariancePair((1, 2), Permutation((1, 0, 2)), Permutation((1, 0, 2))))
    with pytest.raises(PreconditionError):
        aut_reduce(z, InvariancePair((0, 1), Permutation.shift(3, 1), Permutation.shift(3, 2)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_pairs_imply_reducible(seed):
    f = random_latin_hypercube(5, 3, seed)
    pairs = find_invariance_pairs(f, 1, 2)
    if pairs:
        assert find_factorization(f) is not None
        assert evaluate_tree(aut_reduce(f, pairs[0]).tree) == f


# ---------------------------------------------------------------- lemma 2


def test_lemma2_same_slot(irr3_q5):
    C = extend(irr3_q5)
    res = lemma2_decompose(C)
    assert res.status == "decomposed" and res.branch == "same-slot"
    assert evaluate_tree(res.tree) == C
    assert res.frame == RetractSpec({4: 0, 5: 0})
    assert res.mode == "exhaustive"


def test_lemma2_different_slots(irr3_q5, loop5):
    # E(x1 * x4, x2, x3) + x5
    a = irr3_q5.array
    q = 5
    x = [np.arange(q).reshape((1,) * k + (q,) + (1,) * (4 - k)) for k in range(5)]
    C = QTable((a[loop5.array[x[0], x[3]], x[1], x[2]] + x[4]) % q)
    res = lemma2_decompose(C)
    assert res.status == "decomposed" and res.branch == "different-slots"
    assert evaluate_tree(res.tree) == C
    assert is_complete(res.tree) is False      # E stays an irreducible leaf


def test_lemma2_permuted_frame(irr3_q5):
    C = permute_args(extend(irr3_q5), (5, 1, 4, 2, 3))
    res = lemma2_decompose(C)
    assert res.status == "decomposed"
    assert evaluate_tree(res.tree) == C


def test_lemma2_hypothesis_failures(irr3_q4):
    res = lemma2_decompose(zq(5, 5))
    assert res.status == "hypothesis-failed" and res.tree is None
    res = lemma2_decompose(extend(irr3_q4))
    assert res.status == "hypothesis-failed" and "prime" in res.message
    with pytest.raises(PreconditionError):
        lemma2_decompose(zq(5, 4))


def test_lemma2_nested_core(irr3_q5):
    # E(E(x1, x2, x3), x4, x5): the outer merge is ternary
    a = irr3_q5.array
    q = 5
    x = [np.arange(q).reshape((1,) * k + (q,) + (1,) * (4 - k)) for k in range(5)]
    C = QTable(a[a[x[0], x[1], x[2]], x[3], x[4]])
    assert check_n1_retracts(C)[0] is None
    res = lemma2_decompose(C)
    assert res.status == "decomposed" and res.branch == "same-slot"
    assert evaluate_tree(res.tree) == C


def test_lemma2_irreducible_n1_retract():
    D = random_latin_hypercube(5, 4, 3)
    assert find_factorization(D) is None
    C = QTable((D.array[..., None] + np.arange(5)) % 5)
    assert find_frame(C) is not None
    res = lemma2_decompose(C)
    assert res.status == "hypothesis-failed" and res.tree is None
    assert find_factorization(retract(C, res.witness)) is None


def test_lemma2_sampled_mode(irr3_q5):
    res = lemma2_decompose(extend(irr3_q5), exhaustive=False, samples=40, seed=1)
    assert res.mode == "sampled" and res.checked == 40
    assert res.status == "decomposed"


def test_lemma2_threads_agree(irr3_q5):
    C = extend(irr3_q5)
    a = lemma2_decompose(C, workers=1)
    b = lemma2_decompose(C, workers=4)
    assert a.to_json() == b.to_json()


def test_falsification_error_carries_report():
    err = FalsificationError("x", report={"k": 1})
    assert err.report == {"k": 1}
    assert validate(zq(5, 2))
