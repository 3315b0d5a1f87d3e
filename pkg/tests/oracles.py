"""Independent reference implementations used only by the tests.

Everything here is pure-Python loops over explicit points; nothing reuses
the vectorized code paths under test.
"""
from __future__ import annotations

import itertools


def points(n: int, q: int):
    return itertools.product(range(q), repeat=n)


def value(table, x) -> int:
    return int(table.array[tuple(x)])


def is_latin_naive(values: tuple[int, ...], n: int, q: int) -> bool:
    """Latin check on a flat row-major value sequence."""
    def at(x):
        idx = 0
        for c in x:
            idx = idx * q + c
        return values[idx]

    for axis in range(n):
        for rest in points(n - 1, q):
            seen = {at(rest[:axis] + (v,) + rest[axis:]) for v in range(q)}
            if len(seen) != q:
                return False
    return True


def naive_count(q: int, n: int) -> int:
    """Latin hypercubes by trying every value sequence."""
    return sum(is_latin_naive(v, n, q) for v in itertools.product(range(q), repeat=q**n))


def binary_quasigroups(q: int) -> list[tuple[tuple[int, ...], ...]]:
    """All Latin squares as row tuples, by stacking permutations."""
    perms = list(itertools.permutations(range(q)))
    out = []

    def extend(rows):
        if len(rows) == q:
            out.append(tuple(rows))
            return
        for p in perms:
            if all(p[c] != r[c] for r in rows for c in range(q)):
                extend(rows + [p])

    extend([])
    return out


def reducible_by_search(table) -> bool:
    """Ternary ``f``: is there a 2-subset S and binary h, g with
    ``f = h(g(x_S), x_rest)``?"""
    q = table.q
    assert table.n == 3
    squares = binary_quasigroups(q)
    for s in itertools.combinations(range(3), 2):
        r = [k for k in range(3) if k not in s][0]
        for g in squares:
            for h in squares:
                if all(value(table, x) == h[g[x[s[0]]][x[s[1]]]][x[r]] for x in points(3, q)):
                    return True
    return False


def compose_perm(a, b):
    """``(a b)(p) = a(b(p))`` on tuples."""
    return tuple(a[b[p]] for p in range(len(a)))


def s3_iterated_value(x) -> int:
    els = list(itertools.permutations(range(3)))
    acc = els[0]
    for k in x:
        acc = compose_perm(acc, els[k])
    return els.index(acc)


def zero_retract_value(table, coords, vals) -> int:
    x = [0] * table.n
    for c, v in zip(coords, vals):
        x[c - 1] = v
    return value(table, x)


def orientation_holds(table, o: int, p: int, r: int) -> bool:
    """``t(x_o, x_p, x_r) = x_o * (x_p . x_r)`` for some binary *, ., by
    reading * and . off the zero lines."""
    q = table.q

    def t(a, b, c):
        return zero_retract_value(table, (o, p, r), (a, b, c))

    for a in range(q):
        for b in range(q):
            if t(a, b, 0) != t(a, 0, b):
                return False
    return all(t(a, b, c) == t(a, t(0, b, c), 0) for a in range(q) for b in range(q) for c in range(q))


def count_nonzero_agreement(f, g, max_nonzero: int = 3) -> tuple[int, int]:
    agree = total = 0
    for x in points(f.n, f.q):
        if sum(v != 0 for v in x) <= max_nonzero:
            total += 1
            agree += value(f, x) == value(g, x)
    return agree, total


def predicate_points(table):
    """All ``(x0, x1, ..., xn)`` with ``x0 = table(x1, ..., xn)``."""
    for x in points(table.n, table.q):
        yield (value(table, x),) + x


def canon_slots_naive(D, c: int, v: int) -> list[int]:
    """Slots ``i`` of ``F = D<x_c = v>`` for which some ``h`` with ``h(x, v) = x`` makes
    ``D<x> = F<x with slot i replaced by h(x_i, x_c)>``; found by trying every ``h`` row by row."""
    q, n = D.q, D.n
    pred = list(predicate_points(D))
    fset = {p[:c] + p[c + 1:] for p in pred if p[c] == v}
    slots = [0] + [d for d in range(1, n + 1) if d != c]
    ok = []
    for i, t in enumerate(slots):
        h = {}
        good = True
        for p in pred:
            rest = tuple(p[s] for s in slots)
            # the unique u with rest[i] := u lying in F's predicate
            us = [u for u in range(q) if rest[:i] + (u,) + rest[i + 1:] in fset]
            key = (p[t], p[c])
            if len(us) != 1 or h.setdefault(key, us[0]) != us[0]:
                good = False
                break
        if good and all(h[(x, v)] == x for x in range(q)):
            cols = [[h[(a, b)] for a in range(q)] for b in range(q)]
            rows = [[h[(a, b)] for b in range(q)] for a in range(q)]
            if all(len(set(r)) == q for r in cols + rows):
                ok.append(i)
    return ok


def invariance_pairs_naive(table, i: int, j: int) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Non-identity ``(mu, nu)`` preserving the predicate at slots ``i, j``, by trying all pairs."""
    q = table.q
    pred = set(predicate_points(table))
    perms = list(itertools.permutations(range(q)))
    out = set()
    for mu in perms:
        for nu in perms:
            if mu == nu == tuple(range(q)):
                continue
            if all(tuple(mu[a] if k == i else nu[a] if k == j else a for k, a in enumerate(p)) in pred for p in pred):
                out.add((mu, nu))
    return out
