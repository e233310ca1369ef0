"""Midhypersequent extraction for prenex end hypersequents.

After cut elimination, atomic axioms and (∨⇒′), quantifier inferences are
permuted below the propositional inferences that follow them.  A step moves one
quantifier inference Q below the nearest propositional inference P when only
structural inferences lie between; the quantified occurrence is tracked
through those inferences with its instance in place, and context or side
mismatches that this creates are repaired by weakening, to be contracted away
once Q is reapplied under P.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

from ..calculus import Aux, LOGICAL_PROPOSITIONAL, QUANTIFIER_RULES, RuleName as R
from ..proof import Derivation, Node, infer, number_nodes, stats
from ..syntax import Sequent, is_prenex, is_quantifier_free
from .atomize import atomize_axioms
from .base import (
    Budget, DEFAULT_BUDGET, NameSupply, TransformError, TransformReport, close,
    derivation_symbols, drop_formulas, ew, freshen, full_aux,
)
from .cut import _replace, cut_eliminate
from .orleft import replace_or_left

STRUCTURAL = {R.IW_L, R.IW_R, R.IC_L, R.EW, R.EC, R.CM, R.TT}
PROPOSITIONAL = LOGICAL_PROPOSITIONAL - {R.OR_L, R.OR_L_STAR}
QUANTIFIER = QUANTIFIER_RULES - {R.EXISTS_L_STAR}
ADDITIVE = {R.AND_R, R.OR_L_PRIME}


class Unsupported(TransformError):
    """A permutation shape the procedure does not handle; another pair is tried."""


def _minus(a, b) -> list:
    return list((Counter(a) - Counter(b)).elements())


def _side(n: Node, act) -> list[Sequent]:
    return _minus(n.conclusion.components, act)


# ------------------------------------------------------------------ tracking

def _flow(c: Node, k: int, j: int, f, succ: bool) -> list[int]:
    """Conclusion indices of ``c`` that carry the tracked occurrence from premise k, index j."""
    act = c.active[k]
    cact = c.active[-1]
    if j not in act:
        psides = [i for i in range(len(c.children[k].conclusion)) if i not in act]
        csides = [i for i in range(len(c.conclusion)) if i not in cact]
        return [csides[psides.index(j)]]
    if c.rule is R.CM:
        moved = full_aux(c).parts[k]
        return [cact[1 - k] if (not succ and f in moved) else cact[k]]
    if c.rule is R.OR_L_PRIME:
        return [cact[k]] if succ else [cact[0], cact[1]]
    if len(cact) != 1:
        raise Unsupported(f"cannot follow an occurrence through {c.rule.value}")
    return [cact[0]]


def _pad_context(kids, acts, k, aux_formulas):
    """Weaken the two active antecedents of an additive rule to a common context."""
    o = 1 - k
    ctx = [_minus(acts[m][0].antecedent, [aux_formulas[m]]) for m in (0, 1)]
    for m, other in ((k, o), (o, k)):
        for g in _minus(ctx[other], ctx[m]):
            s = acts[m][0]
            kids[m] = infer(R.IW_L, [kids[m]], [[s]], Aux(formula=g))
            acts[m] = [Sequent(s.antecedent + (g,), s.succedent)]


def _pad_sides(kids, acts):
    sides = [_side(kid, a) for kid, a in zip(kids, acts)]
    union = Counter()
    for s in sides:
        union |= Counter(s)
    for m, s in enumerate(sides):
        extra = list((union - Counter(s)).elements())
        if extra:
            kids[m] = ew(kids[m], extra)


def _rebuild(c: Node, k: int, cur: Node, j: int, t: Sequent, f, fi, succ: bool):
    """Reapply ``c`` with premise k replaced by ``cur``, in which the tracked component
    ``t`` (orig. index j) holds ``fi`` in place of ``f``.  Returns the new node and the
    tracked (orig. conclusion index, value) pairs."""
    child = c.children[k]
    aux = full_aux(c)
    kids = list(c.children)
    kids[k] = cur
    acts = [[ch.conclusion[i] for i in c.active[m]] for m, ch in enumerate(c.children)]
    acts[k] = [t if i == j else child.conclusion[i] for i in c.active[k]]
    here = j in c.active[k]
    rule = c.rule
    if here and rule is R.IC_L and aux.formula == f and not succ:
        if Counter(t.antecedent)[f] < 2:
            return cur, [(c.active[-1][0], t)]
    if here and rule is R.EC:
        if succ:
            # postpone the contraction: the untracked copy travels on as a side
            return cur, [(c.active[-1][0], t)]
        o = c.active[k][1] if c.active[k][0] == j else c.active[k][0]
        other = acts[k][c.active[k].index(o)]
        n = cur
        for g in _minus(t.antecedent, other.antecedent):
            n = infer(R.IW_L, [n], [[other]], Aux(formula=g))
            other = Sequent(other.antecedent + (g,), other.succedent)
        for g in _minus(other.antecedent, t.antecedent):
            n = infer(R.IW_L, [n], [[t]], Aux(formula=g))
            t = Sequent(t.antecedent + (g,), t.succedent)
        kids[k] = n
        acts[k] = [t, t]
    if here and rule is R.CM and not succ and f in aux.parts[k]:
        parts = list(aux.parts)
        moved = list(parts[k])
        moved.remove(f)
        parts[k] = tuple(moved) + (fi,)
        aux = Aux(aux.formula, aux.term, aux.eigen, tuple(parts), aux.component)
    if rule is R.SPLIT:
        raise Unsupported("split")
    if len(kids) == 2:
        if here and rule in ADDITIVE and not succ:
            if rule is R.AND_R:
                _pad_context(kids, acts, k, [None, None])
            else:
                _pad_context(kids, acts, k, [aux.formula.left, aux.formula.right])
        _pad_sides(kids, acts)
    new = infer(rule, kids, acts, aux)
    out = []
    for i in _flow(c, k, j, f, succ):
        if here:
            out.append((i, new.conclusion[new.active[-1][c.active[-1].index(i)]]))
        else:
            out.append((i, t))
    return new, out


def _instance(q: Node):
    prem = q.children[0].conclusion[q.active[0][0]]
    conc = q.conclusion[q.active[-1][0]]
    if q.rule in (R.FORALL_R, R.EXISTS_R):
        return prem.succedent, True, prem
    (fi,) = _minus(prem.antecedent, _minus(conc.antecedent, [q.aux.formula]))
    return fi, False, prem


def permute(root: Node, chain: list[tuple[Node, int]], q: Node) -> Node:
    """Move quantifier inference ``q`` below the last node of ``chain``.

    ``chain`` lists (node, index of the premise leading up to q) from just below q
    down to the propositional inference P."""
    aux = full_aux(q)
    f = aux.formula
    fi, succ, t = _instance(q)
    cur = q.children[0]
    tracked = [(q.active[-1][0], t)]
    for pos, (c, k) in enumerate(chain):
        if len(tracked) != 1:
            raise Unsupported("occurrence split before the propositional inference")
        j, t = tracked[0]
        cur, tracked = _rebuild(c, k, cur, j, t, f, fi, succ)
    if len(tracked) > 1 and q.rule in (R.FORALL_R, R.EXISTS_L):
        raise Unsupported("eigenvariable inference would be duplicated")
    for _, t in tracked:
        cur = infer(q.rule, [cur], [[t]], aux)
    p = chain[-1][0]
    try:
        return _replace(root, p, close(cur, p.conclusion))
    except TransformError as e:
        raise Unsupported(str(e)) from e


# ------------------------------------------------------------------ search

def _candidates(root: Node):
    for p in root.distinct():
        if p.rule not in PROPOSITIONAL:
            continue
        for k, ch in enumerate(p.children):
            stack = [(ch, [(p, k)])]
            while stack:
                n, chain = stack.pop()
                if n.rule in QUANTIFIER:
                    yield n, list(reversed(chain))
                elif n.rule in STRUCTURAL:
                    for m, g in enumerate(n.children):
                        stack.append((g, chain + [(n, m)]))


def order(root: Node) -> int:
    return stats(root).order


def is_midhypersequent(root: Node, target: Node) -> bool:
    return target in _midnodes(root, all_nodes=True)


def _free(s: Sequent) -> bool:
    return all(is_quantifier_free(g) for g in s.formulas())


def _midnodes(root: Node, all_nodes: bool = False, require_free: bool = True) -> list[Node]:
    quant_above: dict[int, bool] = {}
    for n in root.distinct():
        quant_above[id(n)] = n.rule in QUANTIFIER_RULES or any(quant_above[id(c)] for c in n.children)
    prop_below: dict[int, bool] = {id(root): False}
    order_ = list(root.distinct())
    for n in reversed(order_):          # parents before children
        for c in n.children:
            flag = prop_below[id(n)] or n.rule in LOGICAL_PROPOSITIONAL
            prop_below[id(c)] = prop_below.get(id(c), False) or flag
    ok = {id(n) for n in order_
          if not quant_above[id(n)] and not prop_below[id(n)]
          and (not require_free or all(_free(s) for s in n.conclusion))}
    if all_nodes:
        return [n for n in order_ if id(n) in ok]
    lowest = set(ok)
    for n in order_:
        if id(n) in ok:
            for c in n.children:
                lowest.discard(id(c))
    return [n for n in order_ if id(n) in lowest]


def sink_weakenings(root: Node) -> Node:
    """Move weakenings of quantified formulas below the candidate midhypersequents."""
    done: set[int] = set()
    while True:
        for x in _midnodes(root, require_free=False):
            if id(x) in done or all(_free(s) for s in x.conclusion):
                continue
            req = {i: ([g for g in s.antecedent if not is_quantifier_free(g)],
                       s.succedent is not None and not is_quantifier_free(s.succedent))
                   for i, s in enumerate(x.conclusion)}
            y = drop_formulas(x, req)
            if y is None:
                done.add(id(x))
                continue
            new = close(y, x.conclusion)
            done.add(id(new))
            root = _replace(root, x, new)
            break
        else:
            return root


def midhypersequent(d: Derivation, budget: int = DEFAULT_BUDGET,
                    report: Optional[TransformReport] = None) -> tuple[Derivation, list[int]]:
    """A derivation in which no propositional inference follows a quantifier inference,
    with the script ids of its midhypersequents."""
    for s in d.conclusion:
        for g in s.formulas():
            if not is_prenex(g):
                raise TransformError(f"end hypersequent is not prenex: {g}")
    bud = Budget(budget)
    cur = cut_eliminate(d, budget) if any(n.rule is R.CUT for n in d.root.distinct()) else d
    cur = replace_or_left(atomize_axioms(cur), native=True)
    root = freshen(cur.root, NameSupply(derivation_symbols(cur.root)))
    steps = 0
    while order(root) > 0:
        reasons = set()
        for q, chain in _candidates(root):
            try:
                root = permute(root, chain, q)
                break
            except Unsupported as e:
                reasons.add(str(e))
        else:
            raise TransformError("no permutable quantifier inference left; order stays positive"
                                 + (f" ({'; '.join(sorted(reasons))})" if reasons else ""))
        steps += 1
        bud.spend()
    root = sink_weakenings(root)
    out = Derivation(root, d.name, cur.config, d.notes)
    ids = number_nodes(root)
    mids = [ids[id(n)] for n in _midnodes(root)]
    if report is not None:
        report.output_stats = stats(out)
        report.steps = steps
        report.budget = budget
        report.output_config = cur.config.name
        report.extra["midhypersequents"] = mids
    return out, mids
