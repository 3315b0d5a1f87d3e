"""Permutable reducibility by exhaustive subset factorization.

An n-quasigroup ``f`` is reducible when

    f(x_1, ..., x_n) = h(g(x_s1, ..., x_sm), x_rest...)

for some proper subset ``S = {s1..sm}`` with ``2 <= m <= n-1``.  For a fixed
``S`` the candidate ``g`` is forced up to a relabeling: it can always be
taken as the principal retract ``f(x_S, 0, ..., 0)``, so testing one subset
is a single vectorized pass over the table.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

from .core import (
    Isotopy,
    Permutation,
    QTable,
    RetractSpec,
    apply_isotopy,
    check_budget,
    is_prime,
    retract,
)
from .errors import PreconditionError

# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class Leaf:
    table: QTable
    irreducible: bool = False

    @property
    def arity(self) -> int:
        return self.table.n

    @property
    def q(self) -> int:
        return self.table.q


@dataclass(frozen=True)
class Node:
    """``f(x) = outer(inner(x_sigma(1..m)), x_sigma(m+1..n))``."""

    outer: "Tree"
    inner: "Tree"
    sigma: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise PreconditionError(f"sigma {self.sigma} is not a permutation of 1..{n}")
        if not 2 <= self.m <= n - 1:
            raise PreconditionError(f"inner arity m={self.m} outside 2..{n - 1}")
        if self.inner.arity != self.m or self.outer.arity != n - self.m + 1:
            raise PreconditionError("subtree arities do not match the node")
        if self.inner.q != self.outer.q:
            raise PreconditionError("subtrees have different orders")

    @property
    def arity(self) -> int:
        return len(self.sigma)

    @property
    def q(self) -> int:
        return self.inner.q


Tree = Union[Leaf, Node]


def evaluate_tree(tree: Tree) -> QTable:
    if isinstance(tree, Leaf):
        return tree.table
    q, n = tree.q, tree.arity
    inner = evaluate_tree(tree.inner).array.reshape(-1)
    outer = evaluate_tree(tree.outer).array.reshape(q, -1)
    full = outer[inner].reshape((q,) * n)
    # axes of `full` are x_sigma(1), ..., x_sigma(n)
    axes = np.argsort(np.asarray(tree.sigma))
    return QTable(full.transpose(axes))


def leaves(tree: Tree) -> Iterator[Leaf]:
    if isinstance(tree, Leaf):
        yield tree
    else:
        yield from leaves(tree.outer)
        yield from leaves(tree.inner)


def is_complete(tree: Tree) -> bool:
    """All leaves binary or smaller."""
    return all(leaf.arity <= 2 for leaf in leaves(tree))


def tree_to_json(tree: Tree) -> dict:
    if isinstance(tree, Leaf):
        return {"kind": "leaf", "irreducible": tree.irreducible, "table": tree.table.to_json()}
    return {
        "kind": "node",
        "m": tree.m,
        "sigma": list(tree.sigma),
        "outer": tree_to_json(tree.outer),
        "inner": tree_to_json(tree.inner),
    }


def tree_from_json(obj: dict) -> Tree:
    if obj["kind"] == "leaf":
        return Leaf(QTable.from_json(obj["table"]), bool(obj.get("irreducible", False)))
    return Node(tree_from_json(obj["outer"]), tree_from_json(obj["inner"]), tuple(obj["sigma"]), int(obj["m"]))


def reindex_tree(tree: Tree, pos: Sequence[int]) -> Tree:
    """Tree ``T'`` with ``T'(y) = T(x)`` where ``x_j = y_{pos[j-1]}``."""
    if isinstance(tree, Leaf):
        inv = np.argsort(np.asarray(pos))
        return Leaf(QTable(tree.table.array.transpose(inv)), tree.irreducible)
    return Node(tree.outer, tree.inner, tuple(pos[s - 1] for s in tree.sigma), tree.m)


def tree_apply_isotopy(tree: Tree, iso: Isotopy) -> Tree:
    """Tree for ``apply_isotopy(evaluate_tree(tree), iso)``, pushed into the leaves."""
    if isinstance(tree, Leaf):
        return Leaf(apply_isotopy(tree.table, iso), tree.irreducible)
    ident = Permutation.identity(tree.q)
    inner_iso = Isotopy((ident, *(iso.perms[s] for s in tree.sigma[: tree.m])))
    outer_iso = Isotopy((iso.perms[0], ident, *(iso.perms[s] for s in tree.sigma[tree.m:])))
    return Node(tree_apply_isotopy(tree.outer, outer_iso), tree_apply_isotopy(tree.inner, inner_iso), tree.sigma, tree.m)


def substitute(outer: Tree, slot: int, inner: Tree, inner_coords: Sequence[int], outer_coords: Sequence[int]) -> Node:
    """Node for ``F(x) = outer(..., inner(x_inner_coords) at slot, ...)``.

    ``outer_coords[k]`` is the global coordinate feeding argument ``k+1`` of
    ``outer``; the entry at ``slot`` (1-based) is ignored.
    """
    rest = [c for k, c in enumerate(outer_coords, start=1) if k != slot]
    pos = [1 if k == slot else 2 + rest.index(c) for k, c in enumerate(outer_coords, start=1)]
    return Node(reindex_tree(outer, pos), inner, tuple(inner_coords) + tuple(rest), len(inner_coords))


# ---------------------------------------------------------------------------
# factorization


@dataclass(frozen=True)
class Factorization:
    subset: tuple[int, ...]
    inner: QTable   # over the subset, ascending
    outer: QTable   # over (slot, complement ascending)

    @property
    def sigma(self) -> tuple[int, ...]:
        n = self.inner.n + self.outer.n - 1
        return self.subset + tuple(c for c in range(1, n + 1) if c not in self.subset)

    def node(self) -> Node:
        return Node(Leaf(self.outer), Leaf(self.inner), self.sigma, len(self.subset))


def _factor_array(a: np.ndarray, subset: tuple[int, ...]):
    n, q = a.ndim, a.shape[0]
    m = len(subset)
    rest = [c for c in range(1, n + 1) if c not in subset]
    mat = a.transpose([c - 1 for c in subset] + [c - 1 for c in rest]).reshape(q**m, -1)
    g0 = mat[:, 0]
    # first row index per g0 value = lexicographically least preimage
    vals, rep = np.unique(g0, return_index=True)
    if len(vals) != q:
        return None
    h = mat[rep]
    if not (h[g0] == mat).all():
        return None
    return g0.reshape((q,) * m), h.reshape((q,) * (n - m + 1))


def factor_through_subset(table: QTable, subset: Sequence[int]) -> Factorization | None:
    """Factor ``f`` as ``h(g(x_S), x_rest)`` if possible.

    ``g`` is the principal retract ``f(x_S, 0...)``; ``h(v, rest)`` reads
    ``f`` at the least preimage of ``v``.
    """
    s = tuple(sorted(int(c) for c in subset))
    n = table.n
    if len(set(s)) != len(s) or not all(1 <= c <= n for c in s):
        raise PreconditionError(f"bad coordinate subset {subset} for arity {n}")
    if not 2 <= len(s) <= n - 1:
        raise PreconditionError(f"subset size {len(s)} outside 2..{n - 1}")
    res = _factor_array(table.array, s)
    if res is None:
        return None
    return Factorization(s, QTable(res[0]), QTable(res[1]))


def subsets(n: int) -> Iterator[tuple[int, ...]]:
    """Proper subsets of size 2..n-1, by size then lexicographically."""
    for m in range(2, n):
        yield from itertools.combinations(range(1, n + 1), m)


@lru_cache(maxsize=1 << 16)
def _reducible_cached(table: QTable) -> Factorization | None:
    for s in subsets(table.n):
        f = factor_through_subset(table, s)
        if f is not None:
            return f
    return None


def find_factorization(table: QTable, workers: int = 1) -> Factorization | None:
    if table.n <= 2:
        return None
    if workers <= 1:
        return _reducible_cached(table)
    subs = list(subsets(table.n))
    with ThreadPoolExecutor(workers) as ex:
        # map preserves submission order, so the first subset in canonical order wins
        for f in ex.map(lambda s: factor_through_subset(table, s), subs):
            if f is not None:
                return f
    return None


def is_reducible(table: QTable, workers: int = 1) -> Node | None:
    """One-level decomposition, or None for irreducible tables.

    Arity <= 2 is irreducible by definition.
    """
    _check_analysable(table)
    f = find_factorization(table, workers)
    return None if f is None else f.node()


def decompose_fully(table: QTable, workers: int = 1) -> Tree:
    """Recursively factor until every leaf is binary (or smaller) or irreducible."""
    _check_analysable(table)
    f = find_factorization(table, workers)
    if f is None:
        return Leaf(table, irreducible=table.n >= 3)
    return Node(decompose_fully(f.outer, workers), decompose_fully(f.inner, workers), f.sigma, len(f.subset))


def _check_analysable(table: QTable) -> None:
    if table.q < 2:
        raise PreconditionError("order-1 tables are degenerate and not analysed")


# ---------------------------------------------------------------------------
# retract spectrum

PRINCIPAL = "principal"
ALL = "all"


def retract_specs(n: int, q: int, arity: int, retract_class: str = ALL) -> Iterator[RetractSpec]:
    """All retracts of the given arity, deterministic order.

    In ``all`` mode the output coordinate may be fixed; the retract is then
    solved for its smallest free coordinate.  Reducibility is invariant
    under conjugation, so one solve target per fixing set covers the
    retracts of every conjugate.
    """
    if retract_class not in (PRINCIPAL, ALL):
        raise PreconditionError(f"unknown retract class {retract_class!r}")
    lo = 1 if retract_class == PRINCIPAL else 0
    nfix = n - arity
    for coords in itertools.combinations(range(lo, n + 1), nfix):
        solve_for = 0 if 0 not in coords else min(c for c in range(n + 1) if c not in coords)
        for vals in itertools.product(range(q), repeat=nfix):
            yield RetractSpec(dict(zip(coords, vals)), solve_for)


@dataclass
class SpectrumReport:
    kappa: int
    witness: RetractSpec | None
    census: dict[int, dict[str, int]] = field(default_factory=dict)
    retract_class: str = ALL

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "retract_class": self.retract_class,
            "witness": None if self.witness is None else [self.witness.to_json()],
            "census": {str(k): v for k, v in sorted(self.census.items())},
        }


def _map(fn, items, workers: int):
    if workers <= 1:
        return map(fn, items)
    ex = ThreadPoolExecutor(workers)
    try:
        return list(ex.map(fn, items))
    finally:
        ex.shutdown()


def spectrum(table: QTable, retract_class: str = ALL, budget: int | None = None, workers: int = 1) -> SpectrumReport:
    """Maximum arity of an irreducible proper retract, with a per-arity census."""
    n, q = table.n, table.q
    if n < 3:
        raise PreconditionError("spectrum needs arity >= 3")
    _check_analysable(table)
    check_budget(n, q, budget)
    kappa, witness = 2, None
    census = {}
    for arity in range(n - 1, 1, -1):
        specs = list(retract_specs(n, q, arity, retract_class))
        if arity == 2:
            census[2] = {"reducible": 0, "irreducible": len(specs)}
            if witness is None and specs:
                witness = specs[0]
            continue
        verdicts = list(_map(lambda s: find_factorization(retract(table, s)) is None, specs, workers))
        irr = sum(verdicts)
        census[arity] = {"reducible": len(specs) - irr, "irreducible": irr}
        if irr and witness is None:
            kappa = arity
            witness = specs[verdicts.index(True)]
    return SpectrumReport(kappa, witness, census, retract_class)


def find_irreducible_retract(table: QTable, arity: int, retract_class: str = ALL) -> RetractSpec | None:
    """First irreducible retract of the given arity in canonical order."""
    if arity <= 2:
        return next(retract_specs(table.n, table.q, arity, retract_class), None)
    for spec in retract_specs(table.n, table.q, arity, retract_class):
        if find_factorization(retract(table, spec)) is None:
            return spec
    return None


# ---------------------------------------------------------------------------
# theorem check

PASS, FAIL, VACUOUS, OPEN, NOT_APPLICABLE = "PASS", "FAIL", "VACUOUS", "OPEN", "NOT_APPLICABLE"


@dataclass
class TheoremReport:
    n: int
    q: int
    reducible: bool
    general: str                      # irreducible (n-1)- or (n-2)-retract exists
    prime: str                        # irreducible (n-1)-retract exists, prime q
    witness_n1: RetractSpec | None = None
    witness_n2: RetractSpec | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return FAIL if FAIL in (self.general, self.prime) else PASS

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "n": self.n,
            "q": self.q,
            "reducible": self.reducible,
            "general_claim": self.general,
            "prime_claim": self.prime,
            "witness_n_minus_1": None if self.witness_n1 is None else self.witness_n1.to_json(),
            "witness_n_minus_2": None if self.witness_n2 is None else self.witness_n2.to_json(),
            "notes": self.notes,
        }


def verify_theorem(table: QTable, budget: int | None = None) -> TheoremReport:
    """Check the irreducible-retract theorem on one table.

    The prime-order claim is asserted for ``n >= 5`` and trivially holds for
    ``n = 3``.  For ``n = 4`` with prime order, and for composite orders, the
    existence of an irreducible (n-1)-retract is only reported (status
    ``OPEN``), never asserted.  Arity 1 and 2 give ``NOT_APPLICABLE``.
    """
    n, q = table.n, table.q
    _check_analysable(table)
    check_budget(n, q, budget)
    if n < 3:
        return TheoremReport(n, q, False, NOT_APPLICABLE, NOT_APPLICABLE,
                             notes=["arity below 3: retracts of arity n-1 and n-2 are degenerate"])
    if find_factorization(table) is not None:
        return TheoremReport(n, q, True, VACUOUS, VACUOUS)
    w1 = find_irreducible_retract(table, n - 1)
    w2 = None if w1 is not None else find_irreducible_retract(table, n - 2)
    general = PASS if (w1 is not None or w2 is not None) else FAIL
    report = TheoremReport(n, q, False, general, NOT_APPLICABLE, w1, w2)
    if is_prime(q) and (n >= 5 or n == 3):
        report.prime = PASS if w1 is not None else FAIL
    else:
        report.prime = OPEN
        report.notes.append(
            f"irreducible (n-1)-retract {'found' if w1 is not None else 'absent'}; "
            f"claim not asserted for n={n}, q={q}"
        )
    return report
