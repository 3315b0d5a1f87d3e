"""Exception hierarchy.

The CLI maps these onto exit codes, so the split matters: a
``HypothesisError`` means the input does not satisfy the premises of a
lemma, a ``FalsificationError`` means the premises held and the
conclusion did not (a bug or a counterexample).
"""
from __future__ import annotations

from typing import Any


class QuasigroupError(Exception):
    """Base class for all package errors."""


class TableFormatError(QuasigroupError, ValueError):
    """Structurally malformed table: wrong length, symbol out of range, bad text."""


class PreconditionError(QuasigroupError, ValueError):
    """Arguments violate an operation's precondition (arity, order, indices)."""


class BudgetError(QuasigroupError):
    """The requested computation exceeds the configured desk-scale budget."""


class HypothesisError(QuasigroupError):
    """The input does not satisfy the hypotheses of a lemma or proposition.

    ``witness`` carries whatever shows the failure, usually a retract spec
    and the offending table.
    """

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class FalsificationError(QuasigroupError):
    """Hypotheses held but a claimed conclusion failed on a concrete table."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
