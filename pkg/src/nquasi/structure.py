"""Zero-base-point structure of a normalized n-quasigroup.

For a normalized table (all unary sections are the identity) every
retract obtained by zeroing all but a few arguments is a loop-like object
with identity 0, and its shape can be read off directly:

* ``f|i(jk)``: the ternary zero-retract on ``i, j, k`` is ``x_i * (x_j . x_k)``;
* ``f|i[jk]``: ``f|i(jk)`` holds and neither ``f|j(ik)`` nor ``f|k(ij)`` does;
* ``f|a*c*b``: the ternary zero-retract in the order ``a, c, b`` is an
  iterated group product.

On top of that sit the pre-inner/inner pair search and the completely
reducible companion ``phi_f`` that agrees with ``f`` on all tuples with at
most three nonzero entries.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    Isotopy,
    QTable,
    RetractSpec,
    is_normalized,
    normalize,
    retract,
)
from .decompose import (
    Leaf,
    Tree,
    decompose_fully,
    evaluate_tree,
    factor_through_subset,
    find_factorization,
    is_complete,
    retract_specs,
    substitute,
    tree_apply_isotopy,
    PRINCIPAL,
)
from .errors import FalsificationError, HypothesisError, PreconditionError


def _require_normalized(f: QTable) -> None:
    if f.q < 2:
        raise PreconditionError("order-1 tables are degenerate and not analysed")
    if not is_normalized(f):
        raise PreconditionError("table is not normalized; apply normalize() first")


def _distinct(f: QTable, idx: Sequence[int]) -> tuple[int, ...]:
    idx = tuple(int(i) for i in idx)
    if len(set(idx)) != len(idx) or not all(1 <= i <= f.n for i in idx):
        raise PreconditionError(f"indices {idx} must be distinct coordinates in 1..{f.n}")
    return idx


def zero_retract(f: QTable, coords: Sequence[int]) -> np.ndarray:
    """Array of ``f`` with all arguments outside ``coords`` set to 0, axes in ``coords`` order."""
    a = f.array[tuple(slice(None) if c in coords else 0 for c in range(1, f.n + 1))]
    asc = sorted(coords)
    return a.transpose([asc.index(c) for c in coords])


def zero_spec(n: int, coords: Sequence[int]) -> RetractSpec:
    return RetractSpec({c: 0 for c in range(1, n + 1) if c not in coords})


def binary_at(f: QTable, i: int, j: int) -> QTable:
    """Binary zero-retract on coordinates ``i, j`` (a loop with identity 0)."""
    _require_normalized(f)
    _distinct(f, (i, j))
    return QTable(zero_retract(f, (i, j)))


def _assoc(op: np.ndarray) -> bool:
    return bool((op[op, :] == op[:, op]).all())


def _comm(op: np.ndarray) -> bool:
    return bool((op == op.T).all())


# ---------------------------------------------------------------------------
# triples


@dataclass(frozen=True)
class Orientation:
    """Whether ``t(x_o, x_p, x_r) = x_o * (x_p . x_r)``; ``*`` outer, ``.`` inner."""

    outer_index: int
    pair: tuple[int, int]
    holds: bool
    outer_op: QTable | None = None
    inner_op: QTable | None = None

    @property
    def star_equals_outer(self) -> bool:
        return self.holds and self.outer_op == self.inner_op

    @property
    def outer_associative(self) -> bool:
        return self.holds and _assoc(self.outer_op.array)

    @property
    def outer_commutative(self) -> bool:
        return self.holds and _comm(self.outer_op.array)

    def to_json(self) -> dict:
        out = {"outer": self.outer_index, "pair": list(self.pair), "holds": self.holds}
        if self.holds:
            out.update(
                outer_op=self.outer_op.to_json(),
                inner_op=self.inner_op.to_json(),
                star_equals_outer=self.star_equals_outer,
                outer_associative=self.outer_associative,
                outer_commutative=self.outer_commutative,
            )
        return out


def _orientation(t: np.ndarray, outer: int, pair: tuple[int, int]) -> Orientation:
    # t has axes (outer, pair[0], pair[1])
    star = t[:, :, 0]
    if not (star == t[:, 0, :]).all():
        return Orientation(outer, pair, False)
    inner = t[0]
    q = t.shape[0]
    if not (star[np.arange(q)[:, None, None], inner[None, :, :]] == t).all():
        return Orientation(outer, pair, False)
    return Orientation(outer, pair, True, QTable(star), QTable(inner))


@dataclass(frozen=True)
class TripleClass:
    indices: tuple[int, int, int]
    forms: tuple[Orientation, Orientation, Orientation]

    def form(self, outer: int) -> Orientation:
        return self.forms[self.indices.index(outer)]

    def holds(self, outer: int) -> bool:
        return self.form(outer).holds

    def bracket(self, outer: int) -> bool:
        """``f|o[pr]`` by the orientation test: only the ``o`` orientation holds."""
        return self.holds(outer) and sum(f.holds for f in self.forms) == 1

    def hat_bracket(self, outer: int) -> bool:
        """Alternative reading: ``*`` differs from ``.`` and from its reversal, or
        ``*`` is not associative."""
        f = self.form(outer)
        if not f.holds:
            return False
        star, inner = f.outer_op.array, f.inner_op.array
        same = (star == inner).all() or (star == inner.T).all()
        return bool(not same or not _assoc(star))

    @property
    def any_holds(self) -> bool:
        return any(f.holds for f in self.forms)

    # named accessors for (i, j, k) = indices
    @property
    def holds_i_jk(self) -> bool:
        return self.forms[0].holds

    @property
    def holds_j_ik(self) -> bool:
        return self.forms[1].holds

    @property
    def holds_k_ij(self) -> bool:
        return self.forms[2].holds

    @property
    def bracket_i_jk(self) -> bool:
        return self.bracket(self.indices[0])

    @property
    def bracket_j_ik(self) -> bool:
        return self.bracket(self.indices[1])

    @property
    def bracket_k_ij(self) -> bool:
        return self.bracket(self.indices[2])

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "forms": [f.to_json() for f in self.forms],
            "brackets": [self.bracket(o) for o in self.indices],
        }


def classify_triple(f: QTable, i: int, j: int, k: int) -> TripleClass:
    _require_normalized(f)
    if f.n < 3:
        raise PreconditionError("need arity >= 3")
    idx = _distinct(f, (i, j, k))
    forms = []
    for o in idx:
        p, r = (c for c in idx if c != o)
        forms.append(_orientation(zero_retract(f, (o, p, r)), o, (p, r)))
    return TripleClass(idx, tuple(forms))


def chain_op(f: QTable, a: int, c: int, b: int) -> QTable | None:
    """The group ``*`` with ``f|a*c*b``, or None."""
    t = zero_retract(f, (a, c, b))
    op = t[:, :, 0]
    if not _assoc(op) or not (op[op[:, :, None], np.arange(f.q)] == t).all():
        return None
    return QTable(op)


# ---------------------------------------------------------------------------
# quadruples


@dataclass(frozen=True)
class QuadClass:
    indices: tuple[int, int, int, int]
    nested: tuple[tuple[int, int, tuple[int, int]], ...]     # a(b(cd))
    paired: tuple[tuple[tuple[int, int], tuple[int, int]], ...]  # (ab)(cd)

    def has_nested(self, a: int, b: int, c: int, d: int) -> bool:
        return (a, b, tuple(sorted((c, d)))) in self.nested

    def has_paired(self, a: int, b: int, c: int, d: int) -> bool:
        p = tuple(sorted([tuple(sorted((a, b))), tuple(sorted((c, d)))]))
        return p in self.paired

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "nested": [[a, b, list(cd)] for a, b, cd in self.nested],
            "paired": [[list(x), list(y)] for x, y in self.paired],
        }


def classify_quadruple(f: QTable, i1: int, i2: int, i3: int, i4: int) -> QuadClass:
    """All shapes ``a(b(cd))`` and ``(ab)(cd)`` of the 4-ary zero-retract."""
    _require_normalized(f)
    if f.n < 4:
        raise PreconditionError("need arity >= 4")
    idx = _distinct(f, (i1, i2, i3, i4))
    w = QTable(zero_retract(f, idx))          # argument k+1 of w is idx[k]
    pos = {c: k + 1 for k, c in enumerate(idx)}
    nested, paired = [], []
    for c, d in itertools.combinations(idx, 2):
        fac = factor_through_subset(w, (pos[c], pos[d]))
        if fac is None:
            continue
        rest = [x for x in idx if x not in (c, d)]      # outer args: slot, rest[0], rest[1]
        for b in rest:
            a = rest[0] if b == rest[1] else rest[1]
            if factor_through_subset(fac.outer, (1, 2 + rest.index(b))) is not None:
                nested.append((a, b, tuple(sorted((c, d)))))
        if idx[0] in (c, d):
            continue
        if factor_through_subset(w, (pos[rest[0]], pos[rest[1]])) is not None:
            paired.append(tuple(sorted([tuple(sorted((c, d))), tuple(sorted(rest))])))
    if not nested and not paired:
        raise HypothesisError(
            f"4-retract on {idx} has no a(b(cd)) or (ab)(cd) shape",
            witness=zero_spec(f.n, idx),
        )
    return QuadClass(idx, tuple(sorted(nested)), tuple(sorted(set(paired))))


# ---------------------------------------------------------------------------
# four-coordinate checks


@dataclass
class PropDReport:
    indices: tuple[int, int, int, int]
    a_hypothesis: bool
    a_conclusion: bool | None
    b_hypothesis: bool
    b_conclusion: bool | None
    # j, k, l all pairwise interchangeable: the only setting where (a) is seen to fail
    jkl_commutative: bool = False

    @property
    def status(self) -> str:
        if self.a_conclusion is False or self.b_conclusion is False:
            return "FAIL"
        if not self.a_hypothesis and not self.b_hypothesis:
            return "VACUOUS"
        return "PASS"

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "status": self.status,
            "a": {"hypothesis": self.a_hypothesis, "conclusion": self.a_conclusion},
            "b": {"hypothesis": self.b_hypothesis, "conclusion": self.b_conclusion},
            "jkl_commutative": self.jkl_commutative,
        }


def check_prop_d(f: QTable, i: int, j: int, k: int, l: int) -> PropDReport:
    """(a) ``f|i[jk]`` and ``f|j(kl)`` give ``i(j(kl))``, ``f|i[jl]`` and ``f|i(kl)``.
    (b) ``f|i*j*l`` and ``f|j*k*l`` with the same non-commutative group give
    ``f|i*j*k*l``.

    (a) is false as stated when ``j, k, l`` carry an abelian group (all three
    orientations hold): ``x2 * (x1 + x4) + x3`` with ``*`` a non-associative
    loop satisfies the hypotheses but not the conclusions. Such failures are
    reported as FAIL with ``jkl_commutative`` set.
    """
    _require_normalized(f)
    i, j, k, l = _distinct(f, (i, j, k, l))
    t_ijk = classify_triple(f, i, j, k)
    t_jkl = classify_triple(f, j, k, l)
    hyp_a = t_ijk.bracket(i) and t_jkl.holds(j)
    concl_a = None
    if hyp_a:
        quad = classify_quadruple(f, i, j, k, l)
        concl_a = (
            quad.has_nested(i, j, k, l)
            and classify_triple(f, i, j, l).bracket(i)
            and classify_triple(f, i, k, l).holds(i)
        )
    op1, op2 = chain_op(f, i, j, l), chain_op(f, j, k, l)
    hyp_b = op1 is not None and op1 == op2 and not _comm(op1.array)
    concl_b = None
    if hyp_b:
        op = op1.array
        w = zero_retract(f, (i, j, k, l))
        g = op[op[op[:, :, None], np.arange(f.q)][..., None], np.arange(f.q)]
        concl_b = bool((g == w).all())
    comm = all(t_jkl.holds(c) for c in (j, k, l))
    return PropDReport((i, j, k, l), hyp_a, concl_a, hyp_b, concl_b, comm)


# ---------------------------------------------------------------------------
# inner pairs


class _Calc:
    """Memoized triple classifications for one table."""

    def __init__(self, f: QTable):
        self.f = f
        self._triples: dict[tuple[int, int, int], TripleClass] = {}
        self._chains: dict[tuple[int, int, int], QTable | None] = {}

    def triple(self, a: int, b: int, c: int) -> TripleClass:
        key = tuple(sorted((a, b, c)))
        if key not in self._triples:
            t = classify_triple(self.f, *key)
            if not t.any_holds:
                raise HypothesisError(
                    f"principal 3-retract on {key} is irreducible",
                    witness=zero_spec(self.f.n, key),
                )
            self._triples[key] = t
        return self._triples[key]

    def holds(self, o: int, p: int, r: int) -> bool:
        return self.triple(o, p, r).holds(o)

    def bracket(self, o: int, p: int, r: int) -> bool:
        return self.triple(o, p, r).bracket(o)

    def chain(self, a: int, c: int, b: int) -> QTable | None:
        key = (a, c, b)
        if key not in self._chains:
            self._chains[key] = chain_op(self.f, a, c, b)
        return self._chains[key]

    def others(self, *exclude: int) -> list[int]:
        return [c for c in range(1, self.f.n + 1) if c not in exclude]

    def is_inner(self, a: int, b: int) -> bool:
        return all(self.holds(c, a, b) for c in self.others(a, b))

    def is_pre_inner(self, a: int, b: int) -> bool:
        return all(self.holds(c, a, b) or self.chain(a, c, b) is not None for c in self.others(a, b))


@dataclass
class ChainState:
    b: int
    a_seq: list[int]
    d_seq: list[int] = field(default_factory=list)
    status: str = "searching"          # pre-inner-found | inner-found | diagnostic
    events: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"b": self.b, "a_seq": self.a_seq, "d_seq": self.d_seq, "status": self.status, "events": self.events}


@dataclass
class InnerPair:
    pair: tuple[int, int]
    op: QTable                 # binary_at(f, *pair)
    chain: ChainState
    diagnostics: list[ChainState] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "op": self.op.to_json(),
            "chain": self.chain.to_json(),
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }


def _chain_ok(calc: _Calc, b: int, seq: list[int]) -> bool:
    return len(set(seq) | {b}) == len(seq) + 1 and all(
        calc.bracket(seq[t], seq[t + 1], b) for t in range(len(seq) - 1)
    )


def _run_chain(calc: _Calc, b: int, a1: int) -> ChainState:
    st = ChainState(b, [a1])
    n = calc.f.n
    seen = set()
    for _ in range(4 * n * n):
        state = (st.b, tuple(st.a_seq))
        if state in seen:
            st.status = "diagnostic"
            st.events.append(f"state {state} repeated")
            return st
        seen.add(state)
        extended = True
        while extended:
            extended = False
            aL = st.a_seq[-1]
            for c in calc.others(st.b, *st.a_seq):
                if calc.bracket(aL, c, st.b):
                    st.a_seq.append(c)
                    st.events.append(f"extend a_{len(st.a_seq)}={c}")
                    extended = True
                    break
            if extended:
                continue
            for c in calc.others(st.b, *st.a_seq):
                if calc.bracket(st.b, aL, c):
                    st.events.append(f"rewrite b={st.b}->{c}")
                    st.a_seq = st.a_seq[:-1] + [st.b, aL]
                    st.b = c
                    st.d_seq = []
                    extended = True
                    break
        aL = st.a_seq[-1]
        if not _chain_ok(calc, st.b, st.a_seq):
            st.status = "diagnostic"
            st.events.append("chain condition violated")
            return st
        if not calc.is_pre_inner(st.b, aL):
            st.status = "diagnostic"
            st.events.append(f"maximal chain end {{{st.b},{aL}}} is not pre-inner")
            return st
        if calc.is_inner(st.b, aL):
            st.status = "inner-found"
            return st
        st.status = "pre-inner-found"
        d = next(
            (c for c in calc.others(st.b, aL)
             if (op := calc.chain(aL, c, st.b)) is not None and not _comm(op.array)),
            None,
        )
        if d is None or d in st.d_seq:
            st.status = "diagnostic"
            st.events.append(f"no fresh d for pre-inner pair {{{st.b},{aL}}}")
            return st
        st.d_seq.append(d)
        st.a_seq[-1] = d
        st.events.append(f"replace a_L by d_{len(st.d_seq)}={d}")
    st.status = "diagnostic"
    st.events.append("iteration cap reached")
    return st


def zero_hypothesis_witness(f: QTable, arities=(3, 4)) -> RetractSpec | None:
    """First irreducible principal zero-retract of the given arities."""
    for m in arities:
        if m >= f.n:
            continue
        for coords in itertools.combinations(range(1, f.n + 1), m):
            if find_factorization(QTable(zero_retract(f, coords))) is None:
                return zero_spec(f.n, coords)
    return None


def find_inner_pair(f: QTable, start: tuple[int, int] | None = None, check: bool = True) -> InnerPair:
    """Inner pair ``{a, b}`` (``f|c(ab)`` for every other ``c``) by the chain search.

    Starts are tried as ``(b, a_1)`` in ascending order unless ``start`` is
    given; the first start ending in a verified inner pair wins.  Stalled
    starts are kept in ``diagnostics``.
    """
    _require_normalized(f)
    if f.n < 4:
        raise PreconditionError("need arity >= 4")
    if check:
        w = zero_hypothesis_witness(f)
        if w is not None:
            raise HypothesisError("an irreducible principal 3- or 4-retract exists", witness=w)
    calc = _Calc(f)
    starts = [start] if start else [(b, a) for b in range(1, f.n + 1) for a in calc.others(b)]
    diagnostics = []
    for b, a1 in starts:
        st = _run_chain(calc, b, a1)
        if st.status == "inner-found":
            pair = tuple(sorted((st.b, st.a_seq[-1])))
            if not calc.is_inner(*pair):
                raise FalsificationError("returned pair is not inner", report=st)
            return InnerPair(pair, binary_at(f, *pair), st, diagnostics)
        diagnostics.append(st)
    raise FalsificationError("chain search stalled from every start", report=diagnostics)


# ---------------------------------------------------------------------------
# phi_f


def low_weight_mask(n: int, q: int, max_nonzero: int = 3) -> np.ndarray:
    nz = sum(
        (np.arange(q) != 0).reshape([q if k == axis else 1 for k in range(n)]).astype(int)
        for axis in range(n)
    )
    return np.broadcast_to(nz, (q,) * n) <= max_nonzero


def build_phi_tree(f: QTable, check: bool = True) -> Tree:
    """Completely reducible superposition agreeing with ``f`` on low-weight tuples.

    Merges an inner pair ``{a, b}`` into ``x_a * x_b`` and recurses on the
    retract with ``x_b = 0``; at arity 4 the table itself is decomposed.
    """
    _require_normalized(f)
    n = f.n
    if n < 4:
        raise PreconditionError("need arity >= 4")
    if n == 4:
        tree = decompose_fully(f)
        if not is_complete(tree):
            raise HypothesisError("4-ary base case is not completely reducible",
                                  witness=RetractSpec({}, 0))
        return tree
    ip = find_inner_pair(f, check=check)
    a, b = ip.pair
    qcoords = [c for c in range(1, n + 1) if c != b]
    sub = retract(f, RetractSpec({b: 0}))
    tree_q = build_phi_tree(sub, check=False)
    return substitute(tree_q, qcoords.index(a) + 1, Leaf(ip.op), (a, b), qcoords)


def build_phi(f: QTable, check: bool = True) -> QTable:
    tree = build_phi_tree(f, check)
    phi = evaluate_tree(tree)
    if not is_complete(tree):
        raise FalsificationError("phi_f is not completely reducible", report=tree)
    mask = low_weight_mask(f.n, f.q)
    if not (phi.array[mask] == f.array[mask]).all():
        raise FalsificationError("phi_f disagrees with f on a tuple with <= 3 nonzero entries",
                                 report={"f": f, "phi": phi})
    return phi


@dataclass
class Prop24Report:
    status: str                 # PASS | HYPOTHESIS_FAILED | FAIL
    failed: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status, "failed": self.failed}


def prop24_check(q4: QTable, g4: QTable) -> Prop24Report:
    """Two reducible 4-quasigroups agreeing on the four zero hyperplanes coincide."""
    if q4.n != 4 or g4.n != 4:
        raise PreconditionError("prop24 needs two arity-4 tables")
    if q4.q != g4.q:
        raise PreconditionError("tables have different orders")
    failed = []
    for p in range(4):
        idx = tuple(0 if k == p else slice(None) for k in range(4))
        if not (q4.array[idx] == g4.array[idx]).all():
            failed.append(f"hyperplane x{p + 1}=0 differs")
    for name, t in (("first", q4), ("second", g4)):
        if find_factorization(t) is None:
            failed.append(f"{name} table is irreducible")
    if failed:
        return Prop24Report("HYPOTHESIS_FAILED", failed)
    return Prop24Report("PASS" if q4 == g4 else "FAIL")


# ---------------------------------------------------------------------------
# decomposition from reducible 3- and 4-retracts


@dataclass
class Lemma1Result:
    status: str                           # decomposed | hypothesis-failed
    tree: Tree | None = None
    witness: RetractSpec | None = None
    mode: str = "exhaustive"
    checked: int = 0
    normalization: Isotopy | None = None

    def to_json(self) -> dict:
        from .decompose import tree_to_json

        return {
            "status": self.status,
            "hypothesis_check": {"mode": self.mode, "retracts_checked": self.checked},
            "witness": None if self.witness is None else self.witness.to_json(),
            "tree": None if self.tree is None else tree_to_json(self.tree),
        }


EXHAUSTIVE_LIMIT = 20_000


def lemma1_hypothesis_witness(
    f: QTable, exhaustive: bool | None = None, samples: int = 2000, seed: int = 0,
) -> tuple[RetractSpec | None, str, int]:
    """First irreducible principal 3- or 4-retract of ``f``.

    Zero fixings are always checked; other fixings exhaustively when the
    total count is at most ``EXHAUSTIVE_LIMIT`` (or ``exhaustive=True``),
    otherwise ``samples`` random ones.
    """
    n, q = f.n, f.q
    checked = 0
    for m in (3, 4):
        for coords in itertools.combinations(range(1, n + 1), m):
            checked += 1
            spec = zero_spec(n, coords)
            if find_factorization(retract(f, spec)) is None:
                return spec, "exhaustive", checked
    total = sum(math.comb(n, m) * q ** (n - m) for m in (3, 4))
    if exhaustive is None:
        exhaustive = total <= EXHAUSTIVE_LIMIT
    if exhaustive:
        specs = (s for m in (3, 4) for s in retract_specs(n, q, m, PRINCIPAL))
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        specs = (_random_principal(n, q, int(rng.choice((3, 4))), rng) for _ in range(samples))
        mode = "sampled"
    for spec in specs:
        checked += 1
        if find_factorization(retract(f, spec)) is None:
            return spec, mode, checked
    return None, mode, checked


def _random_principal(n: int, q: int, m: int, rng: np.random.Generator) -> RetractSpec:
    coords = sorted(int(c) + 1 for c in rng.choice(n, size=n - m, replace=False))
    return RetractSpec({c: int(rng.integers(q)) for c in coords})


def lemma1_decompose(f: QTable, exhaustive: bool | None = None, samples: int = 2000, seed: int = 0) -> Lemma1Result:
    """Decompose ``f`` (arity >= 5) when all principal 3-/4-retracts are reducible.

    Normalizes, builds ``phi`` from the inner-pair recursion, checks
    ``phi == f`` everywhere, and returns phi's tree mapped back through the
    normalization isotopy.
    """
    if f.n < 5:
        raise PreconditionError("lemma1_decompose needs arity >= 5")
    if f.q < 2:
        raise PreconditionError("order-1 tables are degenerate and not analysed")
    witness, mode, checked = lemma1_hypothesis_witness(f, exhaustive, samples, seed)
    if witness is not None:
        return Lemma1Result("hypothesis-failed", witness=witness, mode=mode, checked=checked)
    g, iso = normalize(f)
    tree = build_phi_tree(g, check=False)
    phi = evaluate_tree(tree)
    if phi != g:
        raise FalsificationError("phi_f differs from f although the hypotheses hold",
                                 report={"f": f, "phi": phi})
    back = tree_apply_isotopy(tree, iso.inverse())
    if evaluate_tree(back) != f:
        raise FalsificationError("recompiled tree does not evaluate to f", report=back)
    return Lemma1Result("decomposed", tree=back, mode=mode, checked=checked, normalization=iso)
