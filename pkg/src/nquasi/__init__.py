"""Finite n-ary quasigroups (Latin hypercubes): retracts, isotopy,
reducibility, and constructive decomposition."""
from __future__ import annotations

from .core import (
    CoordPerm,
    Isotopy,
    Permutation,
    QTable,
    RetractSpec,
    apply_isotopy,
    conjugate,
    evaluate,
    normalize,
    permute_args,
    retract,
    solve,
    validate,
)
from .decompose import (
    Leaf,
    Node,
    decompose_fully,
    evaluate_tree,
    is_reducible,
    spectrum,
    verify_theorem,
)
from .errors import (
    BudgetError,
    FalsificationError,
    HypothesisError,
    PreconditionError,
    QuasigroupError,
    TableFormatError,
)
from .gen import (
    cyclic_group,
    enumerate_all,
    group_iterated,
    random_latin_hypercube,
    random_tree_composition,
    s3_group,
)
from .prime import aut_reduce, canon_decompose, find_invariance_pairs, lemma2_decompose
from .structure import (
    build_phi,
    check_prop_d,
    classify_quadruple,
    classify_triple,
    find_inner_pair,
    lemma1_decompose,
    prop24_check,
)
from .textio import format_table, parse_table

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CoordPerm",
    "FalsificationError",
    "HypothesisError",
    "Isotopy",
    "Leaf",
    "Node",
    "Permutation",
    "PreconditionError",
    "QTable",
    "QuasigroupError",
    "RetractSpec",
    "TableFormatError",
    "apply_isotopy",
    "aut_reduce",
    "build_phi",
    "canon_decompose",
    "check_prop_d",
    "classify_quadruple",
    "classify_triple",
    "conjugate",
    "cyclic_group",
    "decompose_fully",
    "enumerate_all",
    "evaluate",
    "evaluate_tree",
    "find_inner_pair",
    "find_invariance_pairs",
    "format_table",
    "group_iterated",
    "is_reducible",
    "lemma1_decompose",
    "lemma2_decompose",
    "normalize",
    "parse_table",
    "permute_args",
    "prop24_check",
    "random_latin_hypercube",
    "random_tree_composition",
    "retract",
    "s3_group",
    "solve",
    "spectrum",
    "validate",
    "verify_theorem",
]
