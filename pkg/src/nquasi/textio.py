"""Table and permutation text formats.

Table format::

    n q
    v v v ...      # q^n symbols, row-major, last argument fastest

``#`` starts a comment running to the end of the line.  The writer puts
one innermost row (q symbols) per line.  Several tables in one stream are
separated by blank lines.
"""
from __future__ import annotations

from typing import Iterator

from .core import Isotopy, Permutation, QTable
from .errors import TableFormatError


def _tokens(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        out.extend(line.split("#", 1)[0].split())
    return out


def _ints(tokens: list[str]) -> list[int]:
    try:
        return [int(t, 10) for t in tokens]
    except ValueError as exc:
        raise TableFormatError(f"non-decimal token: {exc}") from None


def parse_table(text: str) -> QTable:
    nums = _ints(_tokens(text))
    if len(nums) < 2:
        raise TableFormatError("missing 'n q' header")
    n, q = nums[0], nums[1]
    if n < 1 or q < 1:
        raise TableFormatError(f"bad header n={n} q={q}")
    return QTable.from_values(n, q, nums[2:])


def format_table(table: QTable) -> str:
    q = table.q
    vals = table.values
    rows = [" ".join(map(str, vals[k:k + q])) for k in range(0, len(vals), q)]
    return f"{table.n} {q}\n" + "\n".join(rows) + "\n"


def parse_tables(text: str) -> Iterator[QTable]:
    """Tables from a stream; each starts at its own header."""
    nums = _ints(_tokens(text))
    pos = 0
    while pos < len(nums):
        if pos + 2 > len(nums):
            raise TableFormatError("truncated header")
        n, q = nums[pos], nums[pos + 1]
        if n < 1 or q < 1:
            raise TableFormatError(f"bad header n={n} q={q}")
        end = pos + 2 + q**n
        if end > len(nums):
            raise TableFormatError("truncated table")
        yield QTable.from_values(n, q, nums[pos + 2:end])
        pos = end


def format_tables(tables) -> Iterator[str]:
    for k, t in enumerate(tables):
        yield ("\n" if k else "") + format_table(t)


def parse_isotopy(text: str) -> Isotopy:
    """One permutation image per non-empty line: tau_0 first, then tau_1..tau_n."""
    perms = []
    for line in text.splitlines():
        toks = line.split("#", 1)[0].split()
        if toks:
            try:
                perms.append(Permutation(tuple(_ints(toks))))
            except ValueError as exc:
                raise TableFormatError(str(exc)) from None
    if not perms:
        raise TableFormatError("empty permutation file")
    try:
        return Isotopy(tuple(perms))
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None


def format_isotopy(iso: Isotopy) -> str:
    return "".join(" ".join(map(str, p.image)) + "\n" for p in iso.perms)


def render_tree(tree) -> tuple[str, list]:
    """Expression such as ``L1(L2(x1, x3), x2)`` and the leaves in label order.

    Leaves flagged irreducible get a trailing ``!`` in the expression.
    """
    from .decompose import Leaf

    found: list = []

    def go(t, names):
        if isinstance(t, Leaf):
            found.append(t)
            mark = "!" if t.irreducible else ""
            return f"L{len(found)}{mark}({', '.join(names)})"
        # outer first so labels follow reading order
        outer = go(t.outer, ["\0"] + [names[s - 1] for s in t.sigma[t.m:]])
        return outer.replace("\0", go(t.inner, [names[s - 1] for s in t.sigma[: t.m]]), 1)

    expr = go(tree, [f"x{k}" for k in range(1, tree.arity + 1)])
    return expr, found
