from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import zq
from nquasi.core import QTable, RetractSpec, retract, validate
from nquasi.decompose import (
    ALL,
    PRINCIPAL,
    Leaf,
    Node,
    decompose_fully,
    evaluate_tree,
    factor_through_subset,
    find_factorization,
    find_irreducible_retract,
    is_complete,
    is_reducible,
    reindex_tree,
    retract_specs,
    spectrum,
    substitute,
    tree_apply_isotopy,
    tree_from_json,
    tree_to_json,
    verify_theorem,
)
from nquasi.core import Isotopy, Permutation, apply_isotopy
from nquasi.errors import PreconditionError
from nquasi.gen import enumerate_all, random_latin_hypercube, random_tree_composition
from oracles import points, reducible_by_search, value


def embed(E: QTable, extra: int) -> QTable:
    """``E(x1, x2, x3) + x4 + ... `` over Z_q."""
    q = E.q
    a = E.array
    for _ in range(extra):
        a = (a[..., None] + np.arange(q)) % q
    return QTable(a)


# ---------------------------------------------------------------- factorization


def test_factor_example_sum():
    f = zq(3, 5)
    fac = factor_through_subset(f, (1, 2))
    assert fac is not None
    assert fac.inner == zq(3, 2)
    assert evaluate_tree(fac.node()) == f


def test_factor_binary_rejected():
    with pytest.raises(PreconditionError):
        factor_through_subset(zq(3, 2), (1, 2))
    with pytest.raises(PreconditionError):
        factor_through_subset(zq(3, 3), (1, 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_factor_random_order3_matches_brute_force(seed):
    f = random_latin_hypercube(3, 5, seed)
    fac = factor_through_subset(f, (1, 2))
    # every order-3 quasigroup is a sum up to isotopy, so S = {1, 2} must work
    assert fac is not None
    for x in points(5, 3):
        g = value(fac.inner, x[:2])
        assert value(fac.outer, (g,) + x[2:]) == value(f, x)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(3, 4), st.integers(0, 10**6))
def test_factorization_soundness(q, n, seed):
    f = random_latin_hypercube(q, n, seed)
    for s in itertools.combinations(range(1, n + 1), 2):
        fac = factor_through_subset(f, s)
        if fac is not None:
            assert validate(fac.inner) and validate(fac.outer)
            assert evaluate_tree(fac.node()) == f


@pytest.mark.parametrize("q", [2, 3])
def test_factorization_completeness_small(q):
    for f in enumerate_all(q, 3):
        assert (is_reducible(f) is not None) == reducible_by_search(f)


def test_is_reducible_examples(irr3_q4):
    assert is_reducible(zq(2, 5)) is not None
    assert is_reducible(zq(5, 2)) is None
    assert is_reducible(irr3_q4) is None


def test_threads_do_not_change_the_answer():
    f = embed(random_latin_hypercube(4, 3, 4), 2)
    a = find_factorization(f, workers=1)
    b = find_factorization(f, workers=4)
    assert a == b


# ---------------------------------------------------------------- trees


def test_decompose_fully_examples(irr3_q4):
    tree = decompose_fully(zq(3, 5))
    assert is_complete(tree)
    assert evaluate_tree(tree) == zq(3, 5)
    leaf = decompose_fully(irr3_q4)
    assert isinstance(leaf, Leaf) and leaf.irreducible


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(3, 5), st.integers(0, 10**6))
def test_decompose_fully_round_trip(q, n, seed):
    if q == 4 and n == 5:
        n = 4
    f, _ = random_tree_composition(q, n, seed)
    tree = decompose_fully(f)
    assert is_complete(tree)
    assert evaluate_tree(tree) == f


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(3, 4), st.integers(0, 10**6))
def test_decompose_any_table_round_trip(q, n, seed):
    f = random_latin_hypercube(q, n, seed)
    assert evaluate_tree(decompose_fully(f)) == f


def test_node_invariants():
    a, b = Leaf(zq(3, 2)), Leaf(zq(3, 2))
    with pytest.raises(PreconditionError):
        Node(a, b, (1, 2), 2)                 # m must be <= n - 1
    with pytest.raises(PreconditionError):
        Node(a, b, (1, 1, 2), 2)
    with pytest.raises(PreconditionError):
        Node(Leaf(zq(2, 2)), b, (1, 2, 3), 2)


def test_tree_json_round_trip():
    f, _ = random_tree_composition(3, 5, 3)
    tree = decompose_fully(f)
    assert tree_from_json(tree_to_json(tree)) == tree


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_tree_transforms(seed):
    rng = np.random.default_rng(seed)
    f, spec = random_tree_composition(3, 5, seed)
    tree = spec.tree
    iso = Isotopy(tuple(Permutation(tuple(rng.permutation(3))) for _ in range(6)))
    assert evaluate_tree(tree_apply_isotopy(tree, iso)) == apply_isotopy(f, iso)
    pos = [int(p) + 1 for p in rng.permutation(5)]
    re = evaluate_tree(reindex_tree(tree, pos))
    for y in itertools.islice(points(5, 3), 50):
        x = tuple(y[pos[j] - 1] for j in range(5))
        assert value(re, y) == value(f, x)


def test_substitute():
    outer = Leaf(zq(3, 3))
    inner = Leaf(QTable.from_function(2, 3, lambda a, b: (a + 2 * b) % 3))
    node = substitute(outer, 2, inner, (4, 1), (2, 0, 3))
    f = evaluate_tree(node)
    for x in points(4, 3):
        assert value(f, x) == (x[1] + (x[3] + 2 * x[0]) + x[2]) % 3


# ---------------------------------------------------------------- spectrum


def test_retract_specs_counts():
    assert len(list(retract_specs(5, 3, 3, PRINCIPAL))) == 10 * 9
    assert len(list(retract_specs(5, 3, 3, ALL))) == 15 * 9
    assert all(s.principal for s in retract_specs(4, 2, 2, PRINCIPAL))


def test_spectrum_examples(irr3_q4):
    assert spectrum(zq(3, 5)).kappa == 2
    rep = spectrum(embed(irr3_q4, 1))
    assert rep.kappa >= 3
    assert rep.census[3]["irreducible"] >= 1
    with pytest.raises(PreconditionError):
        spectrum(zq(3, 2))


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**6))
def test_spectrum_principal_below_all(q, seed):
    f = random_latin_hypercube(q, 4 if q < 5 else 3, seed)
    assert spectrum(f, PRINCIPAL).kappa <= spectrum(f, ALL).kappa


def test_spectrum_witness_is_irreducible(irr3_q4):
    f = embed(irr3_q4, 2)
    rep = spectrum(f, PRINCIPAL)
    assert rep.kappa == 3
    assert find_factorization(retract(f, rep.witness)) is None


# ---------------------------------------------------------------- theorem


def test_verify_theorem_examples(irr3_q4):
    assert verify_theorem(zq(3, 5)).general == "VACUOUS"
    rep = verify_theorem(irr3_q4)
    assert rep.status == "PASS" and rep.general == "PASS"
    assert rep.prime == "OPEN"            # composite order: reported, not asserted
    assert verify_theorem(zq(3, 2)).general == "NOT_APPLICABLE"


def test_verify_theorem_prime_order_irreducible(irr3_q5):
    rep = verify_theorem(irr3_q5)
    assert rep.status == "PASS" and rep.prime == "PASS"
    f = random_latin_hypercube(5, 5, 0)
    rep = verify_theorem(f)
    assert rep.status == "PASS"
    if not rep.reducible:
        assert rep.prime == "PASS"
        assert find_factorization(retract(f, rep.witness_n1)) is None


def test_irreducible_retract_search_binary():
    assert find_irreducible_retract(zq(3, 3), 2) == RetractSpec({0: 0}, 1)
