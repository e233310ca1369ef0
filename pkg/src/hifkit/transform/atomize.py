"""Replacing axioms on compound formulas by derivations from atomic axioms."""

from __future__ import annotations

from typing import Optional

from ..calculus import Aux, RuleName as R
from ..proof import Derivation, Node, infer, stats
from ..syntax import (
    And, Exists, Forall, FreeVar, Impl, Neg, Or, Sequent, is_atomic, substitute,
)
from .base import NameSupply, TransformReport, derivation_symbols


def identity(f, supply: NameSupply) -> Node:
    """A cut-free derivation of ``f => f`` whose axioms are atomic."""
    if is_atomic(f):
        return infer(R.AXIOM, [], [], Aux(formula=f))
    if isinstance(f, Neg):
        b = identity(f.sub, supply)
        s = Sequent((f.sub,), f.sub)
        n = infer(R.NEG_L, [b], [[s]], Aux(formula=f))
        return infer(R.NEG_R, [n], [[Sequent((f.sub, f), None)]], Aux(formula=f))
    if isinstance(f, And):
        left = infer(R.AND_L1, [identity(f.left, supply)], [[Sequent((f.left,), f.left)]], Aux(formula=f))
        right = infer(R.AND_L2, [identity(f.right, supply)], [[Sequent((f.right,), f.right)]],
                      Aux(formula=f))
        return infer(R.AND_R, [left, right], [[Sequent((f,), f.left)], [Sequent((f,), f.right)]],
                     Aux(formula=f))
    if isinstance(f, Or):
        left = infer(R.OR_R1, [identity(f.left, supply)], [[Sequent((f.left,), f.left)]], Aux(formula=f))
        right = infer(R.OR_R2, [identity(f.right, supply)], [[Sequent((f.right,), f.right)]],
                      Aux(formula=f))
        return infer(R.OR_L, [left, right], [[Sequent((f.left,), f)], [Sequent((f.right,), f)]],
                     Aux(formula=f))
    if isinstance(f, Impl):
        n = infer(R.IMPL_L, [identity(f.left, supply), identity(f.right, supply)],
                  [[Sequent((f.left,), f.left)], [Sequent((f.right,), f.right)]], Aux(formula=f))
        return infer(R.IMPL_R, [n], [[n.conclusion[0]]], Aux(formula=f))
    if isinstance(f, (Forall, Exists)):
        v = supply.fresh("a")
        inst = substitute(f.body, FreeVar(v))
        base = identity(inst, supply)
        s = Sequent((inst,), inst)
        if isinstance(f, Forall):
            n = infer(R.FORALL_L, [base], [[s]], Aux(formula=f, term=FreeVar(v)))
            return infer(R.FORALL_R, [n], [[Sequent((f,), inst)]], Aux(formula=f, eigen=v))
        n = infer(R.EXISTS_R, [base], [[s]], Aux(formula=f, term=FreeVar(v)))
        return infer(R.EXISTS_L, [n], [[Sequent((inst,), f)]], Aux(formula=f, eigen=v))
    raise TypeError(f"not a formula: {f!r}")


def atomize_axioms(d: Derivation, report: Optional[TransformReport] = None) -> Derivation:
    """Expand every axiom on a compound formula into a derivation from atomic axioms."""
    supply = NameSupply(derivation_symbols(d.root))
    memo: dict[int, Node] = {}
    for n in d.root.distinct():
        if n.rule is R.AXIOM and not is_atomic(n.aux.formula or n.conclusion[0].succedent):
            memo[id(n)] = identity(n.conclusion[0].succedent, supply)
            continue
        kids = [memo[id(c)] for c in n.children]
        memo[id(n)] = n if all(k is c for k, c in zip(kids, n.children)) else n.with_children(kids)
    out = Derivation(memo[id(d.root)], d.name, d.config, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.output_config = d.config.name
    return out
