"""Finite n-ary quasigroup tables.

A table of arity ``n`` and order ``q`` is stored as a read-only numpy array
of shape ``(q,) * n`` in C order, so the flat value sequence is row-major
with the last argument varying fastest.  Coordinates follow the predicate
form ``f<x0, x1, ..., xn>``: coordinate 0 is the output, 1..n are the
arguments.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetError, PreconditionError, TableFormatError

DEFAULT_CELL_BUDGET = 10**6
BUDGET_ENV = "NQUASI_CELL_BUDGET"


def cell_budget() -> int:
    """Maximum ``q**n`` accepted by the analysis operations."""
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_CELL_BUDGET


def check_budget(n: int, q: int, budget: int | None = None) -> None:
    limit = cell_budget() if budget is None else budget
    if q**n > limit:
        raise BudgetError(f"q^n = {q}^{n} = {q**n} exceeds the cell budget {limit}")


class QTable:
    """Immutable value table of an n-ary operation on {0, ..., q-1}.

    Construction checks structure only (shape and symbol range); use
    :func:`validate` for the Latin property.
    """

    __slots__ = ("_a", "_key")

    def __init__(self, array: np.ndarray | Sequence):
        a = np.array(array, dtype=np.intp, copy=True)
        if a.ndim == 0:
            raise TableFormatError("a table needs arity >= 1")
        q = a.shape[0]
        if q < 1 or any(s != q for s in a.shape):
            raise TableFormatError(f"table shape {a.shape} is not a hypercube")
        if a.size and (a.min() < 0 or a.max() >= q):
            raise TableFormatError(f"symbol out of range 0..{q - 1}")
        a.setflags(write=False)
        self._a = a
        self._key = None

    @classmethod
    def from_values(cls, n: int, q: int, values: Iterable[int]) -> QTable:
        vals = list(values)
        if n < 1 or q < 1:
            raise TableFormatError(f"need n >= 1 and q >= 1, got n={n}, q={q}")
        if len(vals) != q**n:
            raise TableFormatError(f"expected {q**n} values for n={n}, q={q}, got {len(vals)}")
        bad = [v for v in vals if not 0 <= v < q]
        if bad:
            raise TableFormatError(f"symbol {bad[0]} out of range 0..{q - 1}")
        return cls(np.asarray(vals, dtype=np.intp).reshape((q,) * n))

    @classmethod
    def from_function(cls, n: int, q: int, fn) -> QTable:
        vals = [fn(*args) for args in itertools.product(range(q), repeat=n)]
        return cls.from_values(n, q, vals)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return self._a.ndim

    arity = n

    @property
    def q(self) -> int:
        return self._a.shape[0]

    order = q

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self._a.reshape(-1))

    def key(self) -> tuple[int, int, bytes]:
        """Memoization key: ``(n, q, raw value bytes)``."""
        if self._key is None:
            self._key = (self.n, self.q, self._a.astype(np.int16).tobytes())
        return self._key

    def __call__(self, *args: int) -> int:
        return int(self._a[args])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QTable):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"QTable(n={self.n}, q={self.q})"

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "values": list(self.values)}

    @classmethod
    def from_json(cls, obj: Mapping) -> QTable:
        return cls.from_values(int(obj["n"]), int(obj["q"]), obj["values"])


# ---------------------------------------------------------------------------
# permutations and isotopies


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0, ..., q-1} given by its image sequence."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", img)
        if sorted(img) != list(range(len(img))):
            raise PreconditionError(f"{img} is not a permutation")

    @classmethod
    def identity(cls, q: int) -> Permutation:
        return cls(tuple(range(q)))

    @classmethod
    def transposition(cls, q: int, a: int, b: int) -> Permutation:
        img = list(range(q))
        img[a], img[b] = img[b], img[a]
        return cls(tuple(img))

    @classmethod
    def shift(cls, q: int, k: int) -> Permutation:
        return cls(tuple((x + k) % q for x in range(q)))

    @property
    def q(self) -> int:
        return len(self.image)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.intp)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, other: Permutation) -> Permutation:
        """``self o other``: apply ``other`` first."""
        return Permutation(tuple(self.image[x] for x in other.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.q
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(tuple(inv))

    def power(self, k: int) -> Permutation:
        p = Permutation.identity(self.q)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            p = base.compose(p)
        return p

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.image))

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * self.q
        lengths = []
        for start in range(self.q):
            if seen[start]:
                continue
            length, x = 0, start
            while not seen[x]:
                seen[x] = True
                x = self.image[x]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths))


@dataclass(frozen=True)
class CoordPerm:
    """Bijection of the argument coordinates {1, ..., n}; ``image[k-1] = sigma(k)``."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", img)
        if sorted(img) != list(range(1, len(img) + 1)):
            raise PreconditionError(f"{img} is not a permutation of 1..{len(img)}")

    @classmethod
    def identity(cls, n: int) -> CoordPerm:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, k: int) -> int:
        return self.image[k - 1]

    def inverse(self) -> CoordPerm:
        inv = [0] * self.n
        for k, v in enumerate(self.image, start=1):
            inv[v - 1] = k
        return CoordPerm(tuple(inv))


@dataclass(frozen=True)
class Isotopy:
    """Symbol relabelings ``(tau_0, ..., tau_n)``, one per predicate coordinate."""

    perms: tuple[Permutation, ...]

    def __post_init__(self):
        perms = tuple(p if isinstance(p, Permutation) else Permutation(tuple(p)) for p in self.perms)
        object.__setattr__(self, "perms", perms)
        if not perms:
            raise PreconditionError("an isotopy needs at least one permutation")
        if len({p.q for p in perms}) != 1:
            raise PreconditionError("isotopy permutations act on different orders")

    @classmethod
    def identity(cls, n: int, q: int) -> Isotopy:
        return cls(tuple(Permutation.identity(q) for _ in range(n + 1)))

    @property
    def n(self) -> int:
        return len(self.perms) - 1

    @property
    def q(self) -> int:
        return self.perms[0].q

    def inverse(self) -> Isotopy:
        return Isotopy(tuple(p.inverse() for p in self.perms))

    def then(self, other: Isotopy) -> Isotopy:
        """The isotopy equal to applying ``self`` and then ``other``."""
        return Isotopy(tuple(a.compose(b) for a, b in zip(self.perms, other.perms)))

    @property
    def is_identity(self) -> bool:
        return all(p.is_identity for p in self.perms)

    def to_json(self) -> list[list[int]]:
        return [list(p.image) for p in self.perms]


# ---------------------------------------------------------------------------
# retract specs


@dataclass(frozen=True)
class RetractSpec:
    """Which predicate coordinates are fixed, and which one becomes the output.

    ``fixings`` maps a coordinate in {0..n} to a symbol.  With no fixings
    and ``solve_for != 0`` the result is a conjugate (an inverse) of the
    table.
    """

    fixings: tuple[tuple[int, int], ...] = ()
    solve_for: int = 0

    def __init__(self, fixings: Mapping[int, int] | Iterable[tuple[int, int]] = (), solve_for: int = 0):
        items = fixings.items() if isinstance(fixings, Mapping) else fixings
        pairs = tuple(sorted((int(c), int(v)) for c, v in items))
        object.__setattr__(self, "fixings", pairs)
        object.__setattr__(self, "solve_for", int(solve_for))
        if len({c for c, _ in pairs}) != len(pairs):
            raise PreconditionError("a coordinate is fixed twice")

    @property
    def fixed(self) -> dict[int, int]:
        return dict(self.fixings)

    @property
    def principal(self) -> bool:
        return self.solve_for == 0 and 0 not in self.fixed

    def arity(self, n: int) -> int:
        return n - len(self.fixings)

    def inputs(self, n: int) -> list[int]:
        """Free predicate coordinates that become arguments, ascending."""
        fixed = self.fixed
        return [c for c in range(n + 1) if c not in fixed and c != self.solve_for]

    def check(self, n: int, q: int) -> None:
        fixed = self.fixed
        if not 0 <= self.solve_for <= n:
            raise PreconditionError(f"solve_for {self.solve_for} outside 0..{n}")
        if self.solve_for in fixed:
            raise PreconditionError("solve_for coordinate is fixed")
        for c, v in self.fixings:
            if not 0 <= c <= n:
                raise PreconditionError(f"fixed coordinate {c} outside 0..{n}")
            if not 0 <= v < q:
                raise PreconditionError(f"fixed symbol {v} outside 0..{q - 1}")
        if len(fixed) >= n:
            raise PreconditionError(f"fixing {len(fixed)} of {n + 1} coordinates leaves arity < 1")

    def to_json(self) -> dict:
        return {"fixings": {str(c): v for c, v in self.fixings}, "solve_for": self.solve_for}


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class Validation:
    ok: bool
    coordinate: int | None = None
    line: tuple[int, ...] | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(table: QTable) -> Validation:
    """Check the Latin property along every argument direction.

    Reports the first line (lowest coordinate, then lexicographically
    least position of the other arguments) that is not a permutation.
    """
    a, n, q = table.array, table.n, table.q
    target = np.arange(q)
    for axis in range(n):
        ok = (np.sort(a, axis=axis) == target.reshape([q if k == axis else 1 for k in range(n)])).all(axis=axis)
        if not ok.all():
            line = tuple(int(v) for v in np.argwhere(~ok)[0])
            return Validation(
                False, axis + 1, line,
                f"coordinate {axis + 1} is not a permutation on the line with other arguments {line}",
            )
    return Validation(True)


def unique_completion(table: QTable) -> bool:
    """Predicate formulation of the Latin property.

    True iff for every coordinate of ``<x0, ..., xn>`` and every choice of
    the other n values there is exactly one completing symbol.
    """
    a, q = table.array, table.q
    onehot = a[..., None] == np.arange(q)
    return all((onehot.sum(axis=axis) == 1).all() for axis in range(table.n))


class QuasigroupCorrupt(PreconditionError):
    """A lookup found zero or several completions: the table is not Latin."""


def _check_args(table: QTable, args: Sequence[int]) -> tuple[int, ...]:
    if len(args) != table.n:
        raise PreconditionError(f"expected {table.n} arguments, got {len(args)}")
    for x in args:
        if not 0 <= x < table.q:
            raise PreconditionError(f"argument {x} outside 0..{table.q - 1}")
    return tuple(int(x) for x in args)


def evaluate(table: QTable, args: Sequence[int]) -> int:
    return int(table.array[_check_args(table, args)])


def solve(table: QTable, known: Mapping[int, int], target: int) -> int:
    """The unique symbol at ``target`` completing ``table<x0, ..., xn>``.

    ``known`` must give every predicate coordinate except ``target``.
    """
    n = table.n
    if set(known) | {target} != set(range(n + 1)) or target in known:
        raise PreconditionError("exactly one predicate coordinate must be unknown")
    if target == 0:
        return evaluate(table, [known[c] for c in range(1, n + 1)])
    idx = tuple(slice(None) if c == target else known[c] for c in range(1, n + 1))
    hits = np.flatnonzero(table.array[idx] == known[0])
    if len(hits) != 1:
        raise QuasigroupCorrupt(f"{len(hits)} completions at coordinate {target}; table is not Latin")
    return int(hits[0])


def conjugate_array(table: QTable, k: int) -> np.ndarray:
    """Array whose axes are the coordinates of ``range(n+1)`` minus ``k``,
    in predicate order with coordinate 0 in place of ``k``; values are ``x_k``.

    Axis ``k-1`` of the result is indexed by ``x0``.
    """
    if k == 0:
        return table.array
    return np.argsort(table.array, axis=k - 1, kind="stable")


def retract(table: QTable, spec: RetractSpec) -> QTable:
    """Fix coordinates of the predicate and solve for ``spec.solve_for``.

    Free argument coordinates keep ascending original order.
    """
    n = table.n
    spec.check(n, table.q)
    coords = list(range(1, n + 1))
    a = table.array
    if spec.solve_for:
        a = conjugate_array(table, spec.solve_for)
        coords[spec.solve_for - 1] = 0
    fixed = spec.fixed
    a = a[tuple(fixed.get(c, slice(None)) for c in coords)]
    remaining = [c for c in coords if c not in fixed]
    a = a.transpose(sorted(range(len(remaining)), key=remaining.__getitem__))
    return QTable(a)


def conjugate(table: QTable, k: int) -> QTable:
    return retract(table, RetractSpec({}, k))


def apply_isotopy(table: QTable, iso: Isotopy) -> QTable:
    """``f(x) = tau_0^{-1} g(tau_1 x_1, ..., tau_n x_n)`` for ``g = table``."""
    if iso.n != table.n or iso.q != table.q:
        raise PreconditionError(f"isotopy of shape (n={iso.n}, q={iso.q}) for table (n={table.n}, q={table.q})")
    moved = table.array[np.ix_(*(p.array for p in iso.perms[1:]))]
    return QTable(iso.perms[0].inverse().array[moved])


def unary_section(table: QTable, i: int) -> np.ndarray:
    """``x -> f(0, ..., x, ..., 0)`` with ``x`` at argument ``i``."""
    return table.array[tuple(slice(None) if k == i - 1 else 0 for k in range(table.n))]


def is_normalized(table: QTable) -> bool:
    ident = np.arange(table.q)
    return all((unary_section(table, i) == ident).all() for i in range(1, table.n + 1))


def normalize(table: QTable) -> tuple[QTable, Isotopy]:
    """Isotope to a table with ``g(0, ..., x, ..., 0) = x`` in every position.

    Returns ``(g, iso)`` with ``apply_isotopy(table, iso) == g``.  The output
    permutation is the transposition of ``f(0, ..., 0)`` and 0; each input
    permutation inverts the corresponding unary section.
    """
    n, q = table.n, table.q
    tau0 = Permutation.transposition(q, int(table.array[(0,) * n]), 0)
    step = apply_isotopy(table, Isotopy((tau0,) + tuple(Permutation.identity(q) for _ in range(n))))
    taus = [Permutation(tuple(unary_section(step, i))).inverse() for i in range(1, n + 1)]
    iso = Isotopy((tau0, *taus))
    return apply_isotopy(table, iso), iso


def permute_args(table: QTable, order: Sequence[int]) -> QTable:
    """Table ``g`` with ``g(y_1, ..., y_n) = f(x)`` where ``x_{order[k]} = y_{k+1}``.

    ``order`` lists 1-based argument coordinates of ``table``.
    """
    return QTable(table.array.transpose([c - 1 for c in order]))


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))
