"""Decomposition machinery for quasigroups of prime order.

* ``canon_decompose``: a reducible ``D`` whose retract ``F`` (one argument
  fixed) is irreducible satisfies ``D<x> = F<..., h(x_i, x_e), ...>`` for one
  predicate slot ``i`` of ``F`` and a binary ``h`` with ``h(x, v) = x``.
* ``find_invariance_pairs`` / ``aut_reduce``: a nontrivial pair
  ``(mu, nu)`` with ``f<.., mu x_i, .., nu x_j, ..> = f<..>`` forces a
  one-level decomposition ``beta(gamma^-1 alpha(x, y), z)`` at prime order.
* ``lemma2_decompose``: an n-quasigroup (n >= 5, prime order) with an
  irreducible (n-2)-retract and only reducible (n-1)-retracts is reducible;
  the pipeline builds the decomposition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Isotopy,
    Permutation,
    QTable,
    RetractSpec,
    apply_isotopy,
    conjugate,
    is_prime,
    permute_args,
    retract,
    validate,
)
from .decompose import (
    ALL,
    PRINCIPAL,
    Leaf,
    Node,
    Tree,
    _map,
    decompose_fully,
    evaluate_tree,
    find_factorization,
    reindex_tree,
    retract_specs,
    substitute,
    tree_apply_isotopy,
    tree_to_json,
)
from .errors import BudgetError, FalsificationError, HypothesisError, PreconditionError

INVARIANCE_MAX_ORDER = 7


def _solved(table: QTable, k: int) -> np.ndarray:
    """Predicate solved for coordinate ``k``; axes are the other coordinates ascending."""
    return table.array if k == 0 else conjugate(table, k).array


def _predicate_grids(table: QTable) -> list[np.ndarray]:
    """Values of predicate coordinates 0..n over the argument grid."""
    return [table.array, *np.indices(table.array.shape, dtype=np.intp)]


# ---------------------------------------------------------------------------
# one-coordinate extension


@dataclass(frozen=True)
class CanonResult:
    """``D<x> = F<..., h(x_i, x_e), ...>`` with ``F`` = ``D`` at ``x_e = v``.

    ``i`` counts the predicate slots of ``F``: 0 is the output, ``k >= 1``
    the k-th remaining argument of ``D``.
    """

    i: int
    h: QTable
    fixed_coord: int
    fixed_value: int
    retract: QTable

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "h": self.h.to_json(),
            "fixed_coord": self.fixed_coord,
            "fixed_value": self.fixed_value,
        }


def _force_binary(keys_a: np.ndarray, keys_b: np.ndarray, vals: np.ndarray, q: int) -> np.ndarray | None:
    h = np.full((q, q), -1, dtype=np.intp)
    h[keys_a, keys_b] = vals
    if (h < 0).any() or not (h[keys_a, keys_b] == vals).all():
        return None
    return h


def canon_decompose(D: QTable, fixed_coord: int | None = None, fixed_value: int = 0) -> CanonResult | None:
    """First slot ``i`` (0, 1, ... in order) of ``F``'s predicate admitting a consistent ``h``.

    ``h`` is forced pointwise from every point of ``D`` and then checked for
    consistency, the Latin property and ``h(x, fixed_value) = x``.
    """
    n, q = D.n, D.q
    c = n if fixed_coord is None else int(fixed_coord)
    if n < 2:
        raise PreconditionError("canon_decompose needs arity >= 2")
    if not 1 <= c <= n or not 0 <= fixed_value < q:
        raise PreconditionError(f"bad fixing x{c}={fixed_value} for arity {n}, order {q}")
    F = retract(D, RetractSpec({c: fixed_value}))
    pc = [0] + [d for d in range(1, n + 1) if d != c]      # slot k of F is coordinate pc[k] of D
    grids = _predicate_grids(D)
    ident = np.arange(q)
    for i, t in enumerate(pc):
        Fs = _solved(F, i)
        u = Fs[tuple(grids[s] for s in pc if s != t)]
        h = _force_binary(grids[t].ravel(), grids[c].ravel(), u.ravel(), q)
        if h is None or not (h[:, fixed_value] == ident).all():
            continue
        ht = QTable(h)
        if validate(ht):
            return CanonResult(i, ht, c, fixed_value, F)
    return None


def canon_substitute(res: CanonResult, D_shape: tuple[int, int]) -> QTable:
    """Rebuild ``D`` from ``F`` and ``h`` (the identity the result promises)."""
    n, q = D_shape
    c = res.fixed_coord
    pc = [0] + [d for d in range(1, n + 1) if d != c]
    t = pc[res.i]
    grids = list(np.indices((q,) * n, dtype=np.intp))
    if t == 0:
        # h(x0, x_c) = F(rest): x0 is the solution of h for its first argument
        Hs = np.argsort(res.h.array, axis=0, kind="stable")
        Fv = res.retract.array[tuple(grids[d - 1] for d in pc[1:])]
        return QTable(Hs[Fv, grids[c - 1]])
    args = [grids[d - 1] if d != t else res.h.array[grids[t - 1], grids[c - 1]] for d in pc[1:]]
    return QTable(res.retract.array[tuple(args)])


# ---------------------------------------------------------------------------
# invariance pairs


@dataclass(frozen=True)
class InvariancePair:
    coords: tuple[int, int]
    mu: Permutation
    nu: Permutation

    @property
    def cycle_types_match(self) -> bool:
        return self.mu.cycle_type() == self.nu.cycle_type()

    def swapped(self) -> InvariancePair:
        return InvariancePair((self.coords[1], self.coords[0]), self.nu, self.mu)

    def to_json(self) -> dict:
        return {"coords": list(self.coords), "mu": list(self.mu.image), "nu": list(self.nu.image)}


def is_invariance(f: QTable, i: int, j: int, mu: Permutation, nu: Permutation) -> bool:
    """``f<.., mu x_i, .., nu x_j, ..> = f<..>`` on every point."""
    S = _solved(f, j)
    axis = [k for k in range(f.n + 1) if k != j].index(i)
    return bool((nu.array[S] == np.take(S, mu.array, axis=axis)).all())


def find_invariance_pairs(f: QTable, i: int, j: int) -> list[InvariancePair]:
    """All non-identity ``(mu, nu)`` leaving ``f`` invariant at predicate slots ``i, j``.

    Every ``mu`` is tried (lexicographic order); ``nu`` is forced from the
    table solved for ``j`` and checked globally.  Works at any order up to
    ``INVARIANCE_MAX_ORDER``; only the reduction needs a prime order.
    """
    n, q = f.n, f.q
    if n < 2:
        raise PreconditionError("need arity >= 2")
    i, j = int(i), int(j)
    if i == j or not (0 <= i <= n and 0 <= j <= n):
        raise PreconditionError(f"coordinates {i}, {j} must be distinct in 0..{n}")
    if q > INVARIANCE_MAX_ORDER:
        raise BudgetError(f"enumerating {q}! permutations exceeds the order limit {INVARIANCE_MAX_ORDER}")
    S = _solved(f, j)
    axis = [k for k in range(n + 1) if k != j].index(i)
    flat = S.ravel()
    out = []
    for img in itertools.permutations(range(q)):
        mu = np.asarray(img, dtype=np.intp)
        if (mu == np.arange(q)).all():
            continue
        target = np.take(S, mu, axis=axis).ravel()
        nu = _force_unary(flat, target, q)
        if nu is not None:
            out.append(InvariancePair((i, j), Permutation(tuple(img)), Permutation(tuple(nu))))
    return out


def _force_unary(keys: np.ndarray, vals: np.ndarray, q: int) -> np.ndarray | None:
    nu = np.full(q, -1, dtype=np.intp)
    nu[keys] = vals
    if (nu < 0).any() or not (nu[keys] == vals).all() or len(set(nu.tolist())) != q:
        return None
    return nu


@dataclass
class AutReduction:
    """``f(x, y, z) = beta(gamma^-1 alpha(x, y), z)`` at argument coordinates ``i, j``."""

    pair: InvariancePair
    alpha: QTable
    beta: QTable
    gamma: Permutation
    rho: list[Permutation]
    tau: list[Permutation]
    tree: Node

    @property
    def inner(self) -> QTable:
        return self.tree.inner.table

    def to_json(self) -> dict:
        return {
            "pair": self.pair.to_json(),
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "gamma": list(self.gamma.image),
            "rho": [list(p.image) for p in self.rho],
            "tau": [list(p.image) for p in self.tau],
            "tree": tree_to_json(self.tree),
        }


def aut_reduce(f: QTable, pair: InvariancePair) -> AutReduction:
    """One-level decomposition of a prime-order ``f`` from an invariance pair.

    The pair must sit on argument coordinates; they are moved to positions
    1 and 2 before ``alpha``, ``beta`` and ``gamma`` are read off.
    """
    n, q = f.n, f.q
    if not is_prime(q):
        raise HypothesisError(f"order {q} is not prime", witness={"q": q})
    if n < 3:
        raise PreconditionError("aut_reduce needs arity >= 3")
    i, j = pair.coords
    if min(i, j) < 1 or max(i, j) > n or i == j:
        raise PreconditionError(f"pair coordinates {pair.coords} must be distinct arguments in 1..{n}")
    if pair.mu.is_identity and pair.nu.is_identity:
        raise PreconditionError("identity pair")
    if not is_invariance(f, i, j, pair.mu, pair.nu):
        raise PreconditionError("pair does not leave the table invariant")
    if pair.mu.cycle_type() != (q,) or pair.nu.cycle_type() != (q,):
        raise FalsificationError(
            "invariance permutations at prime order are not single q-cycles",
            report={"pair": pair.to_json(), "table": f.to_json()},
        )
    rest = [c for c in range(1, n + 1) if c not in (i, j)]
    g = permute_args(f, (i, j, *rest)).array
    zeros = (0,) * (n - 2)
    alpha = g[(slice(None), slice(None)) + zeros]
    beta = g[:, 0]
    gamma = Permutation(tuple(g[(slice(None), 0) + zeros]))
    rho, tau = [], []
    for v in range(q):
        k = next(k for k in range(q) if pair.nu.power(k)(v) == 0)
        rho.append(pair.mu.power(k))
        tau.append(pair.nu.power(k))
        moved = g[rho[-1].array][:, tau[-1].array]
        if not (moved == g).all():
            raise FalsificationError("transitivity step fails", report={"v": v, "table": f.to_json()})
    inner = gamma.inverse().array[alpha]
    rebuilt = beta.reshape(q, -1)[inner.ravel()].reshape(g.shape)
    if not (rebuilt == g).all():
        raise FalsificationError(
            "beta(gamma^-1 alpha(x, y), z) differs from f",
            report={"pair": pair.to_json(), "table": f.to_json()},
        )
    tree = Node(Leaf(QTable(beta)), Leaf(QTable(inner)), (i, j, *rest), 2)
    if evaluate_tree(tree) != f:
        raise FalsificationError("reduction tree does not evaluate to f", report=tree_to_json(tree))
    return AutReduction(pair, QTable(alpha), QTable(beta), gamma, rho, tau, tree)


# ---------------------------------------------------------------------------
# (n-2)-retract pipeline


@dataclass
class Lemma2Result:
    status: str                              # decomposed | hypothesis-failed | unsupported-frame
    tree: Tree | None = None
    witness: object = None
    message: str = ""
    frame: RetractSpec | None = None
    order: tuple[int, ...] = ()
    branch: str = ""
    i_b: list[int] = field(default_factory=list)
    h_b: list[QTable] = field(default_factory=list)
    j_a: list[int] = field(default_factory=list)
    g_a: list[QTable] = field(default_factory=list)
    mode: str = "exhaustive"
    checked: int = 0

    def to_json(self) -> dict:
        w = self.witness
        return {
            "status": self.status,
            "message": self.message,
            "frame": None if self.frame is None else self.frame.to_json(),
            "order": list(self.order),
            "branch": self.branch,
            "hypothesis_check": {"mode": self.mode, "retracts_checked": self.checked},
            "i_b": self.i_b,
            "h_b": [h.to_json() for h in self.h_b],
            "j_a": self.j_a,
            "g_a": [g.to_json() for g in self.g_a],
            "witness": w.to_json() if hasattr(w, "to_json") else w,
            "tree": None if self.tree is None else tree_to_json(self.tree),
        }


N1_EXHAUSTIVE_LIMIT = 5_000


def find_frame(C: QTable, retract_class: str = PRINCIPAL) -> RetractSpec | None:
    """First irreducible (n-2)-retract: fixing pairs lexicographic, values ascending."""
    for spec in retract_specs(C.n, C.q, C.n - 2, retract_class):
        if find_factorization(retract(C, spec)) is None:
            return spec
    return None


def check_n1_retracts(
    C: QTable, exhaustive: bool | None = None, samples: int = 500, seed: int = 0, workers: int = 1,
) -> tuple[RetractSpec | None, str, int]:
    """First irreducible (n-1)-retract of any class, or None."""
    n, q = C.n, C.q
    total = (n + 1) * q
    if exhaustive is None:
        exhaustive = total <= N1_EXHAUSTIVE_LIMIT
    if exhaustive:
        specs = list(retract_specs(n, q, n - 1, ALL))
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        specs = []
        for _ in range(samples):
            c = int(rng.integers(n + 1))
            specs.append(RetractSpec({c: int(rng.integers(q))}, 0 if c else 1))
        mode = "sampled"
    verdicts = list(_map(lambda s: find_factorization(retract(C, s)) is None, specs, workers))
    if any(verdicts):
        k = verdicts.index(True)
        return specs[k], mode, k + 1
    return None, mode, len(specs)


def _to_frame(C: QTable, frame: RetractSpec) -> tuple[QTable, tuple[int, ...], Isotopy]:
    """Move the frame to the last two arguments with fixing values 0."""
    (p1, a0), (p2, b0) = frame.fixings
    order = tuple(c for c in range(1, C.n + 1) if c not in (p1, p2)) + (p1, p2)
    C1 = permute_args(C, order)
    ident = Permutation.identity(C.q)
    perms = [ident] * (C.n + 1)
    perms[C.n - 1] = Permutation.transposition(C.q, 0, a0)
    perms[C.n] = Permutation.transposition(C.q, 0, b0)
    iso = Isotopy(tuple(perms))
    return apply_isotopy(C1, iso), order, iso


def _solve_first(t: QTable) -> QTable:
    """``K`` with ``t(K(w, rest), rest) = w``."""
    return QTable(np.argsort(t.array, axis=0, kind="stable"))


def lemma2_decompose(
    C: QTable, exhaustive: bool | None = None, samples: int = 500, seed: int = 0, workers: int = 1,
) -> Lemma2Result:
    """Decompose ``C`` from an irreducible (n-2)-retract when all (n-1)-retracts are reducible.

    The first irreducible principal (n-2)-retract fixes the frame
    ``E = C<.., 0, 0>`` after a coordinate permutation and isotopy.  Each
    ``A_b = C<.., y, b>`` and ``B_a = C<.., a, z>`` is split by
    ``canon_decompose``; equal slots give a ternary merge map, different
    slots give two binary merges.  A ``g_a`` depending on ``a`` raises a
    falsification report.
    """
    n, q = C.n, C.q
    if n < 5:
        raise PreconditionError("lemma2_decompose needs arity >= 5")
    if not is_prime(q):
        return Lemma2Result("hypothesis-failed", witness={"q": q}, message=f"order {q} is not prime")
    frame = find_frame(C)
    if frame is None:
        other = find_frame(C, ALL)
        if other is not None:
            return Lemma2Result(
                "unsupported-frame", witness=other, frame=other,
                message="the only irreducible (n-2)-retracts fix the output coordinate",
            )
        return Lemma2Result("hypothesis-failed", message="no irreducible (n-2)-retract")
    w, mode, checked = check_n1_retracts(C, exhaustive, samples, seed, workers)
    if w is not None:
        return Lemma2Result("hypothesis-failed", witness=w, frame=frame, mode=mode, checked=checked,
                            message="an (n-1)-retract is irreducible")
    Cf, order, iso = _to_frame(C, frame)
    m = n - 2
    E = retract(Cf, RetractSpec({n - 1: 0, n: 0}))

    A = list(_map(lambda b: canon_decompose(retract(Cf, RetractSpec({n: b})), n - 1, 0), range(q), workers))
    B = list(_map(lambda a: canon_decompose(retract(Cf, RetractSpec({n - 1: a})), n - 1, 0), range(q), workers))
    res = Lemma2Result("decomposed", frame=frame, order=order, mode=mode, checked=checked)

    def fail(msg, **extra):
        raise FalsificationError(msg, report={"C": C.to_json(), "frame": frame.to_json(), **extra})

    if any(r is None for r in A + B):
        fail("a one-coordinate extension has no canonical split",
             missing_b=[b for b, r in enumerate(A) if r is None],
             missing_a=[a for a, r in enumerate(B) if r is None])
    res.i_b, res.h_b = [r.i for r in A], [r.h for r in A]
    res.j_a, res.g_a = [r.i for r in B], [r.h for r in B]
    if len(set(res.i_b)) != 1:
        fail("split slot of A_b depends on b", i_b=res.i_b)
    if len(set(res.j_a)) != 1:
        fail("split slot of B_a depends on a", j_a=res.j_a)
    P, Q = res.i_b[0], res.j_a[0]
    hz = np.stack([h.array for h in res.h_b])          # hz[z, x, y] = h_z(x, y)
    g0 = res.g_a[0].array
    box = np.arange(q)
    E_leaf = Leaf(E, irreducible=True)
    base = tuple(range(1, m + 1))

    if P == Q:
        res.branch = "same-slot"
        f3a = g0[hz[box[None, None, :], box[:, None, None], box[None, :, None]], box[None, None, :]]
        f3 = QTable(f3a)
        if not validate(f3):
            fail("merge map g_0(h_z(x, y), z) is not a ternary quasigroup", f3=f3.to_json())
        if P >= 1:
            tree = substitute(E_leaf, P, decompose_fully(f3), (P, n - 1, n), base)
        else:
            K = _solve_first(f3)
            tree = Node(decompose_fully(K), E_leaf, base + (n - 1, n), m)
    else:
        if any(g != res.g_a[0] for g in res.g_a):
            a = next(a for a, g in enumerate(res.g_a) if g != res.g_a[0])
            ga = res.g_a[a].array
            pairs = []
            for b in range(q):
                r0 = Permutation(tuple(hz[0][:, a]))
                rb = Permutation(tuple(hz[b][:, a]))
                sb = Permutation(tuple(g0[:, b]))
                tb = Permutation(tuple(ga[:, b]))
                pairs.append(InvariancePair((P, Q), rb.inverse().compose(r0), sb.inverse().compose(tb)))
            found = find_invariance_pairs(E, P, Q) if q <= INVARIANCE_MAX_ORDER else []
            fail(
                "g_a depends on a with different split slots (excluded case)",
                a=a, pairs=[p.to_json() for p in pairs],
                pairs_valid=[is_invariance(E, P, Q, p.mu, p.nu) for p in pairs],
                E_invariance_pairs=[p.to_json() for p in found],
            )
        res.branch = "different-slots"
        h0, g = res.h_b[0], res.g_a[0]
        if P >= 1 and Q >= 1:
            t1 = substitute(E_leaf, P, Leaf(h0), (P, n - 1), base)
            tree = substitute(t1, Q, Leaf(g), (Q, n), tuple(range(1, n)))
        elif P == 0:
            t1 = substitute(E_leaf, Q, Leaf(g), (Q, m + 1), base)     # z as coordinate m+1
            tree = Node(Leaf(_solve_first(h0)), t1, base + (n, n - 1), n - 1)
        else:
            t1 = substitute(E_leaf, P, Leaf(h0), (P, m + 1), base)    # y as coordinate m+1
            tree = Node(Leaf(_solve_first(g)), t1, base + (n - 1, n), n - 1)

    if evaluate_tree(tree) != Cf:
        fail("assembled tree does not evaluate to the framed table", tree=tree_to_json(tree))
    back = reindex_tree(tree_apply_isotopy(tree, iso.inverse()), order)
    if evaluate_tree(back) != C:
        fail("recompiled tree does not evaluate to C", tree=tree_to_json(back))
    res.tree = back
    return res
