"""Compiled backtracking kernel for random Latin hypercube search.

All randomness comes in through ``prio`` (cell tie-break) and ``valrank``
(value order per cell), drawn by the caller from a seeded generator.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _choose(val, dom, prio, q):
    best, bestcnt, bestprio = -1, q + 1, 1 << 62
    for c in range(val.shape[0]):
        if val[c] >= 0:
            continue
        k = _popcount(dom[c])
        if k < bestcnt or (k == bestcnt and prio[c] < bestprio):
            best, bestcnt, bestprio = c, k, prio[c]
    return best


@njit(cache=True)
def _hidden_single(support, placed, line_cells, val, dom):
    """First (cell, value) forced because the value has one cell left in a line."""
    nl, q = support.shape
    for ln in range(nl):
        for v in range(q):
            if support[ln, v] == 1 and not placed[ln, v]:
                for t in range(q):
                    c = line_cells[ln, t]
                    if val[c] < 0 and (dom[c] >> v) & 1:
                        return c, v
    return -1, -1


@njit(cache=True)
def _assign(c, v, depth, dom, val, support, placed, nbr, lines, trail_hit, trail_nhit, trail_old, q):
    ok = True
    old = dom[c]
    trail_old[depth] = old
    n = lines.shape[1]
    for u in range(q):
        if u != v and (old >> u) & 1:
            for k in range(n):
                support[lines[c, k], u] -= 1
                if support[lines[c, k], u] == 0:
                    ok = False
    bit = 1 << v
    nh = 0
    for t in range(nbr.shape[1]):
        h = nbr[c, t]
        if val[h] < 0 and dom[h] & bit:
            dom[h] &= ~bit
            trail_hit[depth, nh] = h
            nh += 1
            if dom[h] == 0:
                ok = False
            for k in range(n):
                support[lines[h, k], v] -= 1
                if support[lines[h, k], v] == 0:
                    ok = False
    trail_nhit[depth] = nh
    dom[c] = bit
    val[c] = v
    for k in range(n):
        placed[lines[c, k], v] = True
    return ok


@njit(cache=True)
def _undo(c, v, depth, dom, val, support, placed, lines, trail_hit, trail_nhit, trail_old, q):
    n = lines.shape[1]
    bit = 1 << v
    for t in range(trail_nhit[depth]):
        h = trail_hit[depth, t]
        dom[h] |= bit
        for k in range(n):
            support[lines[h, k], v] += 1
    old = trail_old[depth]
    for u in range(q):
        if u != v and (old >> u) & 1:
            for k in range(n):
                support[lines[c, k], u] += 1
    dom[c] = old
    val[c] = -1
    for k in range(n):
        placed[lines[c, k], v] = False


@njit(cache=True)
def fill_random(q, nbr, lines, line_cells, prio, valrank, node_limit, out):
    """Most-constrained-cell search.  Returns 1 on success (``out`` filled),
    0 if the space is exhausted, -1 when ``node_limit`` is hit."""
    size = nbr.shape[0]
    dom = np.full(size, (1 << q) - 1, np.int64)
    val = np.full(size, -1, np.int64)
    nlines = line_cells.shape[0]
    support = np.full((nlines, q), q, np.int64)
    placed = np.zeros((nlines, q), np.bool_)
    full = (1 << q) - 1
    stack_cell = np.empty(size, np.int64)
    stack_tried = np.zeros(size, np.int64)
    stack_val = np.full(size, -1, np.int64)
    trail_hit = np.empty((size, nbr.shape[1]), np.int64)
    trail_nhit = np.zeros(size, np.int64)
    trail_old = np.zeros(size, np.int64)
    nodes = 0
    depth = 0
    stack_cell[0] = _choose(val, dom, prio, q)
    while depth >= 0:
        c = stack_cell[depth]
        if stack_val[depth] >= 0:
            _undo(c, stack_val[depth], depth, dom, val, support, placed, lines, trail_hit, trail_nhit, trail_old, q)
            stack_val[depth] = -1
        pick, rank = -1, q + 1
        for v in range(q):
            if (dom[c] >> v) & 1 and not (stack_tried[depth] >> v) & 1 and valrank[c, v] < rank:
                pick, rank = v, valrank[c, v]
        if pick < 0:
            stack_tried[depth] = 0
            depth -= 1
            continue
        stack_tried[depth] |= 1 << pick
        ok = _assign(c, pick, depth, dom, val, support, placed, nbr, lines, trail_hit, trail_nhit, trail_old, q)
        stack_val[depth] = pick
        nodes += 1
        if nodes > node_limit:
            return -1
        if not ok:
            continue
        nxt = _choose(val, dom, prio, q)
        if nxt < 0:
            out[:] = val
            return 1
        tried = 0
        if _popcount(dom[nxt]) > 1:
            hc, hv = _hidden_single(support, placed, line_cells, val, dom)
            if hc >= 0:
                nxt, tried = hc, full & ~(1 << hv)
        depth += 1
        stack_cell[depth] = nxt
        stack_tried[depth] = tried
        stack_val[depth] = -1
    return 0
