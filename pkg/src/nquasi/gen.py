"""Construction of quasigroup tables.

Random generators take a seed or a ``numpy.random.Generator`` and are
pure: the same seed gives the same bytes.  ``random_latin_hypercube`` is a
randomized backtracking search and does not sample uniformly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import QTable, check_budget
from .decompose import Leaf, Node, Tree, evaluate_tree
from .errors import BudgetError, PreconditionError


@dataclass(frozen=True)
class GroupTable:
    """Binary group table with identity 0."""

    table: QTable
    name: str = ""

    def __post_init__(self):
        t = self.table
        if t.n != 2:
            raise PreconditionError("a group table is binary")
        a = t.array
        ident = np.arange(t.q)
        if not ((a[0] == ident).all() and (a[:, 0] == ident).all()):
            raise PreconditionError("0 is not the identity")
        if not (a[a, :] == a[:, a]).all():
            raise PreconditionError("table is not associative")

    @property
    def q(self) -> int:
        return self.table.q


def cyclic_group(q: int) -> GroupTable:
    return GroupTable(QTable.from_function(2, q, lambda x, y: (x + y) % q), f"Z{q}")


def s3_elements() -> list[tuple[int, ...]]:
    """Permutations of {0,1,2} in lexicographic order; index 0 is the identity."""
    return list(itertools.permutations(range(3)))


def s3_group() -> GroupTable:
    """S3 with product ``(a*b)(p) = a(b(p))``."""
    els = s3_elements()
    index = {p: k for k, p in enumerate(els)}

    def mul(x, y):
        a, b = els[x], els[y]
        return index[tuple(a[b[p]] for p in range(3))]

    return GroupTable(QTable.from_function(2, 6, mul), "S3")


def group_iterated(group: GroupTable, n: int) -> QTable:
    """``x1 * x2 * ... * xn``, left-associated."""
    if n < 1:
        raise PreconditionError("n >= 1 required")
    mul = group.table.array
    acc = np.arange(group.q)
    for _ in range(n - 1):
        acc = mul[acc[..., None], np.arange(group.q)]
    return QTable(acc)


# ---------------------------------------------------------------------------
# backtracking search over Latin hypercubes


class _Geometry:
    """Cell/line incidence of a q^n hypercube.

    ``nbr[c]`` lists the other cells on the n lines through cell ``c``;
    ``lines[c, k]`` is the id of the line along axis ``k`` through ``c``;
    ``line_cells[l]`` lists the q cells of line ``l``.
    """

    def __init__(self, q: int, n: int):
        self.q, self.n = q, n
        size = q**n
        idx = np.arange(size).reshape((q,) * n)
        per_axis = [np.moveaxis(idx, axis, -1).reshape(-1, q) for axis in range(n)]
        self.line_cells = np.concatenate(per_axis).astype(np.int64)
        self.lines = np.empty((size, n), dtype=np.int64)
        nbr = np.empty((size, n, q - 1), dtype=np.int64)
        for axis, rows in enumerate(per_axis):
            for r, row in enumerate(rows):
                self.lines[row, axis] = axis * len(rows) + r
                for k, c in enumerate(row):
                    nbr[c, axis] = np.delete(row, k)
        self.nbr = nbr.reshape(size, -1)


_GEOMETRY: dict[tuple[int, int], _Geometry] = {}


def _geometry(q: int, n: int) -> _Geometry:
    if (q, n) not in _GEOMETRY:
        _GEOMETRY[(q, n)] = _Geometry(q, n)
    return _GEOMETRY[(q, n)]


def _lex_solutions(q: int, n: int) -> Iterator[np.ndarray]:
    """All Latin hypercubes, cells in row-major order, values ascending."""
    geo = _geometry(q, n)
    size = q**n
    nbr = geo.nbr
    val = np.full(size, -1, dtype=np.int64)
    dom = np.full(size, (1 << q) - 1, dtype=np.int64)
    trail: list[np.ndarray | None] = [None] * size
    nxt = [0] * size             # next value to try at each cell
    cell = 0
    while cell >= 0:
        if trail[cell] is not None:
            dom[trail[cell]] |= 1 << val[cell]
            val[cell] = -1
            trail[cell] = None
        v = nxt[cell]
        while v < q and not dom[cell] >> v & 1:
            v += 1
        if v == q:
            nxt[cell] = 0
            cell -= 1
            continue
        nxt[cell] = v + 1
        ns = nbr[cell]
        hit = ns[(ns > cell) & (dom[ns] >> v & 1).astype(bool)]
        dom[hit] &= ~(1 << v)
        val[cell] = v
        trail[cell] = hit
        if (dom[hit] == 0).any():
            continue
        if cell == size - 1:
            yield val.copy()
            continue
        cell += 1


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_latin_hypercube(q: int, n: int, seed=0, budget: int | None = None, max_restarts: int = 200) -> QTable:
    """Random n-quasigroup of order q by randomized backtracking.

    Most-constrained cell first with a random tie-break, values in random
    order, forward checking plus line-support pruning.  A run that exceeds
    its node limit restarts with fresh draws from the same generator and
    a 1.5x larger limit, so the result depends on the seed only.
    Practical for q <= 5; larger orders may exhaust ``max_restarts``.
    """
    if q < 1 or n < 1:
        raise PreconditionError("q >= 1 and n >= 1 required")
    check_budget(n, q, budget)
    rng = _rng(seed)
    if q == 1:
        return QTable(np.zeros((1,) * n, dtype=np.intp))
    from ._kernel import fill_random

    geo = _geometry(q, n)
    size = q**n
    out = np.empty(size, dtype=np.int64)
    limit = 3.0 * size
    for _ in range(max_restarts):
        prio = rng.permutation(size).astype(np.int64)
        valrank = rng.random((size, q)).argsort(axis=1).astype(np.int64)
        status = fill_random(q, geo.nbr, geo.lines, geo.line_cells, prio, valrank, int(limit), out)
        if status == 1:
            return QTable(out.reshape((q,) * n))
        limit = min(limit * 1.5, 1000.0 * size)
    raise BudgetError(f"no Latin hypercube found for q={q}, n={n} within {max_restarts} restarts")


ENUM_MAX_CELLS = 256
ENUM_MAX_TABLES = 200_000


def enumerate_all(q: int, n: int, max_tables: int = ENUM_MAX_TABLES) -> Iterator[QTable]:
    """Every n-quasigroup of order q, lexicographic by value sequence."""
    if q < 1 or n < 1:
        raise PreconditionError("q >= 1 and n >= 1 required")
    if q**n > ENUM_MAX_CELLS:
        raise BudgetError(f"enumeration of q^n = {q**n} cells exceeds {ENUM_MAX_CELLS}")
    if q == 1:
        yield QTable(np.zeros((1,) * n, dtype=np.intp))
        return
    for count, sol in enumerate(_lex_solutions(q, n), start=1):
        if count > max_tables:
            raise BudgetError(f"more than {max_tables} tables for q={q}, n={n}")
        yield QTable(sol.reshape((q,) * n))


# ---------------------------------------------------------------------------
# random completely reducible compositions


@dataclass(frozen=True)
class TreeSpec:
    tree: Tree
    seed: object = None


def _random_tree(q: int, k: int, rng: np.random.Generator) -> Tree:
    if k == 2:
        return Leaf(random_latin_hypercube(q, 2, rng))
    m = int(rng.integers(2, k))          # inner arity in 2..k-1
    inner = _random_tree(q, m, rng)
    outer = _random_tree(q, k - m + 1, rng)
    sigma = tuple(int(s) + 1 for s in rng.permutation(k))
    return Node(outer, inner, sigma, m)


def random_tree_composition(q: int, n: int, seed=0) -> tuple[QTable, TreeSpec]:
    """Random superposition of binary quasigroups (completely reducible).

    Shape: the inner arity at each node is uniform on 2..k-1; every node
    gets a uniformly random coordinate permutation.
    """
    if q < 2 or n < 2:
        raise PreconditionError("q >= 2 and n >= 2 required")
    rng = _rng(seed)
    tree = _random_tree(q, n, rng)
    return evaluate_tree(tree), TreeSpec(tree, seed if not isinstance(seed, np.random.Generator) else None)


def loops(q: int) -> Iterator[QTable]:
    """Binary loops with identity 0 (normalized Latin squares), lexicographic."""
    for t in enumerate_all(q, 2, max_tables=10**7) if q <= 4 else _loops_direct(q):
        a = t.array
        if (a[0] == np.arange(q)).all() and (a[:, 0] == np.arange(q)).all():
            yield t


def _loops_direct(q: int) -> Iterator[QTable]:
    # fill the (q-1)x(q-1) interior row by row with permutations
    base = list(range(q))

    def rows(prefix):
        r = len(prefix) + 1
        if r == q:
            yield prefix
            return
        for p in itertools.permutations([v for v in base if v != r]):
            row = (r,) + p
            if all(row[c] != prev[c] for prev in [tuple(base)] + prefix for c in range(q)):
                yield from rows(prefix + [row])

    for body in rows([]):
        yield QTable(np.array([base] + body))


def is_associative(table: QTable) -> bool:
    a = table.array
    return bool((a[a, :] == a[:, a]).all())


def is_commutative(table: QTable) -> bool:
    a = table.array
    return bool((a == a.T).all())
