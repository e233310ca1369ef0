"""hifkit: the hypersequent calculus HIF for first-order Gödel logic.

Modules: ``syntax`` (terms, formulas, hypersequents, parser), ``semantics``
(exact [0,1] evaluation and a propositional decision procedure),
``calculus`` (rule instances and configurations), ``proof`` (derivations,
checker, proof scripts), ``transform`` (cut and density elimination,
midhypersequents, cm-normalization) and ``cli``.
"""

from .calculus import HIF, HIF_MINUS, HIF_STAR, CalculusConfig, RuleName
from .proof import Derivation, check_derivation, format_script, parse_script, stats
from .syntax import parse_formula, parse_hypersequent, parse_sequent

__version__ = "0.1.0"

__all__ = [
    "HIF", "HIF_MINUS", "HIF_STAR", "CalculusConfig", "RuleName", "Derivation",
    "check_derivation", "format_script", "parse_script", "stats", "parse_formula",
    "parse_hypersequent", "parse_sequent", "__version__",
]
