from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nquasi.core import QTable, validate
from nquasi.decompose import decompose_fully, find_factorization, is_complete, retract_specs
from nquasi.core import retract
from nquasi.errors import BudgetError, PreconditionError
from nquasi.gen import (
    GroupTable,
    cyclic_group,
    enumerate_all,
    group_iterated,
    is_associative,
    loops,
    random_latin_hypercube,
    random_tree_composition,
    s3_group,
)
from nquasi.resources import fixture, manifest
from oracles import binary_quasigroups, naive_count, points, s3_iterated_value, value


def test_group_iterated_examples():
    parity = group_iterated(cyclic_group(2), 5)
    for x in points(5, 2):
        assert value(parity, x) == sum(x) % 2
    z = group_iterated(cyclic_group(3), 3)
    assert z == QTable.from_function(3, 3, lambda a, b, c: (a + b + c) % 3)


def test_s3_against_permutation_composition():
    f = group_iterated(s3_group(), 3)
    for x in points(3, 6):
        assert value(f, x) == s3_iterated_value(x)
    assert not (f.array == f.array.transpose(1, 0, 2)).all()


def test_group_table_checks():
    with pytest.raises(PreconditionError):
        GroupTable(fixture("loop5"))      # loop but not associative
    with pytest.raises(PreconditionError):
        GroupTable(QTable.from_function(2, 3, lambda x, y: (x + y + 1) % 3))


@pytest.mark.parametrize("q,n,count", [(2, 2, 2), (3, 2, 12), (2, 3, 2), (1, 3, 1)])
def test_enumeration_counts(q, n, count):
    ts = list(enumerate_all(q, n))
    assert len(ts) == count
    assert len(set(ts)) == count
    assert [t.values for t in ts] == sorted(t.values for t in ts)


def test_enumeration_counts_against_naive():
    for q, n in [(2, 2), (2, 3), (3, 2)]:
        assert len(list(enumerate_all(q, n))) == naive_count(q, n)


def test_enumeration_order3_arity3():
    ts = list(enumerate_all(3, 3))
    assert len(ts) == 24
    assert all(validate(t) for t in ts)


def test_enumeration_guard():
    with pytest.raises(BudgetError):
        next(enumerate_all(5, 4))


def test_loops_are_normalized_squares():
    for q in (3, 4, 5):
        ls = list(loops(q))
        oracle = [s for s in binary_quasigroups(q) if s[0] == tuple(range(q)) and all(r[0] == k for k, r in enumerate(s))]
        assert len(ls) == len(oracle)
    assert len(list(loops(5))) == 56


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 10**6))
def test_random_hypercube_valid_and_deterministic(q, n, seed):
    if q**n > 5**4:
        n = 3
    t = random_latin_hypercube(q, n, seed)
    assert validate(t)
    assert random_latin_hypercube(q, n, seed) == t


def test_random_hypercube_budget(monkeypatch):
    monkeypatch.setenv("NQUASI_CELL_BUDGET", "100")
    with pytest.raises(BudgetError):
        random_latin_hypercube(5, 3, 0)


def test_random_hypercube_seed_varies():
    tables = {random_latin_hypercube(4, 3, s) for s in range(10)}
    assert len(tables) > 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(2, 5), st.integers(0, 10**6))
def test_tree_composition_completely_reducible(q, n, seed):
    if q == 4 and n == 5:
        n = 4
    f, spec = random_tree_composition(q, n, seed)
    assert validate(f)
    assert is_complete(decompose_fully(f))
    for m in range(3, n):
        for s in retract_specs(n, q, m, "principal"):
            assert find_factorization(retract(f, s)) is not None
    g, spec2 = random_tree_composition(q, n, seed)
    assert g == f and spec2 == spec


def test_tree_composition_order2_is_parity_class():
    pars = set(enumerate_all(2, 4))
    for seed in range(10):
        assert random_tree_composition(2, 4, seed)[0] in pars


def test_fixture_manifest_verdicts():
    man = manifest()
    for name, entry in man.items():
        t = fixture(name)
        assert (t.n, t.q) == (entry["n"], entry["q"])
        assert validate(t)
        if entry["reducible"] is not None:
            assert (find_factorization(t) is not None) == entry["reducible"]
        if "seed" in entry:
            assert random_latin_hypercube(entry["q"], entry["n"], entry["seed"]) == t
            for s in range(entry["seed"]):
                assert find_factorization(random_latin_hypercube(entry["q"], entry["n"], s)) is not None
    assert not is_associative(fixture("loop5"))
    for q in (2, 3, 5):
        assert fixture(f"z{q}") == cyclic_group(q).table
    assert fixture("s3") == s3_group().table
    a = fixture("loop5").array
    assert (a[0] == np.arange(5)).all() and (a[:, 0] == np.arange(5)).all()
