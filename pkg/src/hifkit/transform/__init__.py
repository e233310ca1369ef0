"""Proof transformations on HIF derivations."""

from .atomize import atomize_axioms, identity
from .base import Budget, BudgetExceeded, TransformError, TransformReport, close
from .cm import cm_normalize, has_axiom_premise
from .cut import CutTrace, cut_eliminate, reduce_cut
from .midseq import is_midhypersequent, midhypersequent
from .orleft import replace_or_left
from .tt import prune_weakened_variable, tt_eliminate, tt_reduce

__all__ = [
    "atomize_axioms", "identity", "Budget", "BudgetExceeded", "TransformError",
    "TransformReport", "close", "cm_normalize", "has_axiom_premise", "CutTrace",
    "cut_eliminate", "reduce_cut", "is_midhypersequent", "midhypersequent",
    "replace_or_left", "prune_weakened_variable", "tt_eliminate", "tt_reduce",
]
