"""Regenerate src/nquasi/fixtures and its manifest.

Irreducible fixtures come from the smallest seed (scanning upward) whose
random Latin hypercube has no factorization.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from nquasi.core import QTable, validate
from nquasi.decompose import find_factorization
from nquasi.gen import cyclic_group, is_associative, loops, random_latin_hypercube, s3_group
from nquasi.structure import classify_triple
from nquasi.textio import format_table

OUT = Path(__file__).resolve().parents[1] / "src" / "nquasi" / "fixtures"


def first_irreducible(q: int, n: int) -> tuple[int, QTable]:
    seed = 0
    while True:
        t = random_latin_hypercube(q, n, seed)
        if find_factorization(t) is None:
            return seed, t
        seed += 1


def bracket_loop() -> tuple[int, QTable]:
    """First non-associative order-5 loop L with x + L(y, z) satisfying only 1(23)."""
    add = cyclic_group(5).table.array
    for k, loop in enumerate(loops(5)):
        if is_associative(loop):
            continue
        s = loop.array
        f = QTable(add[np.arange(5)[:, None, None], s[None, :, :]])
        if classify_triple(f, 1, 2, 3).bracket(1):
            return k, loop
    raise RuntimeError("no bracket loop of order 5")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    entries = {}

    def put(name, table, **meta):
        assert validate(table)
        (OUT / f"{name}.qg").write_text(format_table(table), encoding="utf-8")
        entries[name] = {
            "n": table.n,
            "q": table.q,
            "valid": True,
            "reducible": None if table.n < 3 else find_factorization(table) is not None,
            **meta,
        }

    for q in (2, 3, 5):
        put(f"z{q}", cyclic_group(q).table, generator="cyclic_group", description=f"Z{q} addition")
    put("s3", s3_group().table, generator="s3_group",
        description="S3, elements are permutations of (0,1,2) in lexicographic order, (ab)(p) = a(b(p))")
    k, loop = bracket_loop()
    put("loop5", loop, generator="loops(5)", index=k,
        description="non-associative order-5 loop; x + loop(y, z) has only the 1(23) orientation")
    for q in (4, 5):
        seed, t = first_irreducible(q, 3)
        put(f"irr3_q{q}", t, generator="random_latin_hypercube", seed=seed,
            description=f"smallest seed giving an irreducible ternary quasigroup of order {q}")
    (OUT / "manifest.json").write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(json.dumps(entries, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
