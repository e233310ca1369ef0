"""Replacing (∨⇒) by the two-conclusion rule (∨⇒′) followed by external contraction."""

from __future__ import annotations

from typing import Optional

from ..calculus import Aux, RuleName as R
from ..proof import Derivation, Node, infer, stats
from ..syntax import Sequent
from .base import TransformReport, ew


def or_left_prime_derived(left: Node, lact: Sequent, right: Node, ract: Sequent, f) -> Node:
    """(∨⇒′) derived in HIF: cm of the two premises, then two (∨⇒) steps."""
    moved1, moved2 = (f.left,), (f.right,)
    m = infer(R.CM, [left, right], [[lact], [ract]], Aux(parts=(moved1, moved2)))
    # m: G | B, Γ => Δ1 | A, Γ => Δ2
    b_gamma = Sequent(_swap(lact.antecedent, f.left, f.right), lact.succedent)
    a_gamma = Sequent(_swap(ract.antecedent, f.right, f.left), ract.succedent)
    l1 = ew(left, [a_gamma])
    n = infer(R.OR_L, [l1, m], [[lact], [b_gamma]], Aux(formula=f))
    top = Sequent(_swap(lact.antecedent, f.left, f), lact.succedent)
    r1 = ew(right, [top])
    return infer(R.OR_L, [n, r1], [[a_gamma], [ract]], Aux(formula=f))


def _swap(items, old, new):
    out = list(items)
    out.remove(old)
    out.append(new)
    return tuple(out)


def replace_or_left(d: Derivation, native: Optional[bool] = None,
                    report: Optional[TransformReport] = None) -> Derivation:
    """Replace each (∨⇒) by (∨⇒′) and (ec).

    With ``native`` (the default when the configuration does not forbid it) the output
    uses the OrL-Prime rule; otherwise each (∨⇒′) is spelled out by its cut-free
    derivation from (cm) and (∨⇒), so (∨⇒) occurs only inside those templates.
    """
    if native is None:
        native = True
    memo: dict[int, Node] = {}
    for n in d.root.distinct():
        kids = [memo[id(c)] for c in n.children]
        if n.rule is R.OR_L:
            f = n.aux.formula
            lact = n.children[0].conclusion[n.active[0][0]]
            ract = n.children[1].conclusion[n.active[1][0]]
            if native:
                m = infer(R.OR_L_PRIME, kids, [[lact], [ract]], Aux(formula=f))
            else:
                m = or_left_prime_derived(kids[0], lact, kids[1], ract, f)
            c = n.conclusion[n.active[-1][0]]
            memo[id(n)] = infer(R.EC, [m], [[c, c]])
        else:
            memo[id(n)] = n if all(k is c for k, c in zip(kids, n.children)) else n.with_children(kids)
    cfg = d.config.with_(allow_or_prime=True) if native else d.config
    out = Derivation(memo[id(d.root)], d.name, cfg, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.output_config = cfg.name
        report.extra["native"] = native
    return out
