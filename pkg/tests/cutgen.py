"""Splicing cuts into cut-free derivations without changing their end hypersequent.

A node deriving ``G | c`` is replaced by a cut between the node and a cut-free
derivation of ``A => A`` built from atomic axioms, where A is a formula of c.  The
identity derivation ends in inferences on A, so the cut has principal cases to reduce.
"""

import random

from hifkit.calculus import Aux, RuleName as R
from hifkit.proof import Derivation, infer
from hifkit.syntax import Sequent
from hifkit.transform.atomize import identity
from hifkit.transform.base import NameSupply, derivation_symbols, ew
from hifkit.transform.cut import _replace


def _side(h, c):
    comps = list(h.components)
    comps.remove(c)
    return comps


def splice_cut(root, node, comp, formula, supply):
    side = _side(node.conclusion, comp)
    ident = ew(identity(formula, supply), side)
    a_seq = Sequent((formula,), formula)
    if comp.succedent == formula:
        cut = infer(R.CUT, [node, ident], [[comp], [a_seq]], Aux(formula=formula))
    else:
        cut = infer(R.CUT, [ident, node], [[a_seq], [comp]], Aux(formula=formula))
    assert cut.conclusion == node.conclusion
    return _replace(root, node, cut)


def with_cuts(d: Derivation, count: int, seed: int) -> Derivation:
    """``d`` with ``count`` cuts spliced in at pseudo-random positions."""
    rng = random.Random(seed)
    root = d.root
    supply = NameSupply(derivation_symbols(root))
    for _ in range(count):
        nodes = list(root.distinct())
        node = rng.choice(nodes)
        comps = [c for c in node.conclusion if c.antecedent or c.succedent is not None]
        comp = rng.choice(comps)
        formula = rng.choice(list(comp.formulas()))
        root = splice_cut(root, node, comp, formula, supply)
    return Derivation(root, d.name, d.config.with_(allow_cut=True), d.notes)
