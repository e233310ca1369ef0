"""Normalizing communication so that every cm has an axiom p => p as a premise.

Each cm on ``Γ1, Γ1' => A1`` and ``Γ2, Γ2' => A2`` is rebuilt from the split
pieces ``Γ1' => A1`` and ``Γ2' => A2``: three cm's against fresh atoms p and q
and one cut on q give ``Γ2' => p | p => A1 | Γ1' => q | q => A2``, two density
steps eliminate p and q, and the remaining pieces are weakened and contracted
into the original conclusion.
"""

from __future__ import annotations

from typing import Optional

from ..calculus import Aux, RuleName as R
from ..proof import Derivation, Node, axiom, infer, stats
from ..syntax import Prop, Sequent
from .base import NameSupply, TransformReport, close, derivation_symbols, ew, full_aux


def _padded_axiom(atom: Prop, side: list[Sequent]) -> Node:
    return ew(axiom(atom), side)


def _side(n: Node, active: Sequent) -> list[Sequent]:
    comps = list(n.conclusion.components)
    comps.remove(active)
    return comps


def _cm_axiom(atom: Prop, n: Node, active: Sequent, moved: tuple) -> Node:
    """cm of ``atom => atom`` with ``active``: yields ``moved => atom | atom, rest => succ``."""
    ax = _padded_axiom(atom, _side(n, active))
    return infer(R.CM, [ax, n], [[Sequent((atom,), atom)], [active]], Aux(parts=((atom,), moved)))


def normalize_cm_node(n: Node, left: Node, right: Node, supply: NameSupply) -> Node:
    """The replacement for one cm node whose premises are now ``left`` and ``right``."""
    aux = full_aux(n)
    moved1, moved2 = aux.parts
    s1 = n.children[0].conclusion[n.active[0][0]]
    s2 = n.children[1].conclusion[n.active[1][0]]
    a1, a2 = s1.succedent, s2.succedent
    p, q = Prop(supply.fresh("p")), Prop(supply.fresh("q"))

    # left: G | Γ1 => A1 | Γ1' => A1, then Γ1' => p | p => A1, then Γ1' => q | q => p
    ln = infer(R.SPLIT, [left], [[s1]], Aux(parts=(tuple(moved1),)))
    ln = _cm_axiom(p, ln, Sequent(tuple(moved1), a1), tuple(moved1))
    ln = _cm_axiom(q, ln, Sequent(tuple(moved1), p), tuple(moved1))
    # right: G | Γ2 => A2 | Γ2' => A2, then Γ2' => q | q => A2
    rn = infer(R.SPLIT, [right], [[s2]], Aux(parts=(tuple(moved2),)))
    rn = _cm_axiom(q, rn, Sequent(tuple(moved2), a2), tuple(moved2))
    # cut Γ2' => q against q => p
    cut_l, cut_r = Sequent(tuple(moved2), q), Sequent((q,), p)
    side_l, side_r = _side(rn, cut_l), _side(ln, cut_r)
    rn = ew(rn, _multiset_minus(side_r, side_l))
    ln = ew(ln, _multiset_minus(side_l, side_r))
    m = infer(R.CUT, [rn, ln], [[cut_l], [cut_r]], Aux(formula=q))
    m = infer(R.TT, [m], [[Sequent(tuple(moved2), p), Sequent((p,), a1)]], Aux(eigen=p.name))
    m = infer(R.TT, [m], [[Sequent(tuple(moved1), q), Sequent((q,), a2)]], Aux(eigen=q.name))
    return close(m, n.conclusion)


def _multiset_minus(a: list, b: list) -> list:
    out = list(a)
    for x in b:
        if x in out:
            out.remove(x)
    return out


def cm_normalize(d: Derivation, report: Optional[TransformReport] = None) -> Derivation:
    """Replace every cm so that each cm in the result has a propositional axiom premise."""
    supply = NameSupply(derivation_symbols(d.root))
    memo: dict[int, Node] = {}
    for n in d.root.distinct():
        kids = [memo[id(c)] for c in n.children]
        if n.rule is R.CM:
            memo[id(n)] = normalize_cm_node(n, kids[0], kids[1], supply)
        else:
            memo[id(n)] = n if all(k is c for k, c in zip(kids, n.children)) else n.with_children(kids)
    cfg = d.config.with_(allow_split=True, allow_tt=True, allow_cut=True)
    out = Derivation(memo[id(d.root)], d.name, cfg, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.output_config = cfg.name
    return out


def has_axiom_premise(n: Node) -> bool:
    """Some premise of cm node ``n`` is ``p => p`` for a propositional variable, up to
    external weakening."""
    for c in n.children:
        while c.rule is R.EW:
            c = c.children[0]
        if c.rule is R.AXIOM and isinstance(c.conclusion[0].succedent, Prop):
            return True
    return False
