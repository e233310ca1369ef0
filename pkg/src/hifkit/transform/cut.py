"""Cut reduction and cut elimination.

``reduce_cut`` removes one cut between a derivation of ``G | Γ => A`` and one of
``G | Π => Λ``; the result derives ``G | Γ, Π* => Λ`` where ``Π*`` drops every
occurrence of ``A``.  The recursion first permutes the left derivation until its
last inference introduces ``A`` on the right (or it is an axiom), then permutes
the right derivation, tracking every component whose antecedent still carries
ancestors of the cut formula, until ``A`` is principal on both sides; there the
cut is replaced by cuts on immediate subformulas.

Each recursive call is recorded with its measure ⟨degree, ec-count, length⟩ and
with its contraction count next to the sum of its inputs' counts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..calculus import HIF, Aux, RuleName, conclusion_components, locate, match_instance
from ..proof import Derivation, Node, check_derivation, infer, stats
from ..syntax import (
    Formula, FreeVar, Hypersequent, Sequent, Forall, Exists, Neg, And, Or, Impl,
    degree, substitute,
)
from .base import (
    Budget, BudgetExceeded, NameSupply, TransformError, TransformReport, close,
    derivation_symbols, depth, drop_contractions, ec_count, ew, freshen, full_aux, prune_shared, subst_in_node,
    subst_sequent, DEFAULT_BUDGET,
)

R = RuleName

RIGHT_INTRO = {R.NEG_R, R.OR_R1, R.OR_R2, R.AND_R, R.IMPL_R, R.FORALL_R, R.EXISTS_R}
LEFT_INTRO = {R.NEG_L, R.OR_L, R.AND_L1, R.AND_L2, R.IMPL_L, R.FORALL_L, R.EXISTS_L}
UNSUPPORTED = {R.CUT, R.SPLIT, R.OR_L_PRIME, R.OR_L_STAR, R.EXISTS_L_STAR}


@dataclass
class MeasureStep:
    measure: tuple          # (degree, ec-count, length) of this call
    parent: Optional[tuple]  # measure of the calling invocation (None at the top)

    @property
    def decreasing(self) -> bool:
        return self.parent is None or self.measure < self.parent


@dataclass
class CutTrace:
    steps: list = field(default_factory=list)       # MeasureStep per recursive call
    ec_checks: list = field(default_factory=list)   # per reduce_cut: (ec of result, ec sum of inputs)
    lemma_ec_checks: list = field(default_factory=list)   # same, per recursive call

    @property
    def decreasing(self) -> bool:
        return all(s.decreasing for s in self.steps)

    @property
    def ec_bound_holds(self) -> bool:
        return all(a <= b for a, b in self.ec_checks)


class _Ctx:
    def __init__(self, budget: Budget, trace: CutTrace):
        self.budget = budget
        self.trace = trace
        self.stack: list[tuple] = []


# ------------------------------------------------------------------ helpers

def _strip(seq: Sequent, a: Formula) -> list:
    return [f for f in seq.antecedent if f != a]


def _tr(seq: Sequent, gamma: Sequence[Formula], a: Formula) -> Sequent:
    return Sequent(tuple(gamma) + tuple(_strip(seq, a)), seq.succedent)


def _side(h: Hypersequent, comp: Sequent) -> list[Sequent]:
    rest = list(h.components)
    rest.remove(comp)
    return rest


def _side_indices(h: Hypersequent, active: Sequence[int]) -> list[int]:
    drop = set(active)
    return [i for i in range(len(h)) if i not in drop]


def _target(gam: Node, L: Sequence[Sequent], a: Formula, dl: Node, T: Sequence[int]) -> Hypersequent:
    comps = list(gam.conclusion.components)
    for l in L:
        comps.remove(l)
    tracked = set(T)
    for l in L:
        for i, c in enumerate(dl.conclusion.components):
            comps.append(_tr(c, l.antecedent, a) if i in tracked else c)
    return Hypersequent(tuple(comps))


def _active_values(n: Node) -> list[list[Sequent]]:
    return [[c.conclusion[i] for i in n.active[k]] for k, c in enumerate(n.children)]


# ------------------------------------------------------------------ lemma

def _lemma(ctx: _Ctx, gam: Node, L: Sequence[Sequent], a: Formula, dl: Node,
           T: Sequence[int]) -> Node:
    """Cut every component in ``L`` (each ``Γ_l => a`` in ``gam``) against the components
    ``T`` of ``dl``; each ``l`` contributes its own copy of ``dl``'s conclusion."""
    # each extra tracked copy stands for a contraction that has not been unfolded yet
    m = (degree(a), ec_count(gam) + ec_count(dl) + max(len(L) - 1, 0), depth(gam) + depth(dl))
    ctx.trace.steps.append(MeasureStep(m, ctx.stack[-1] if ctx.stack else None))
    ctx.budget.spend()
    ctx.stack.append(m)
    try:
        out = drop_contractions(_lemma_body(ctx, gam, list(L), a, dl, tuple(T)))
    finally:
        ctx.stack.pop()
    ctx.trace.lemma_ec_checks.append((ec_count(out), ec_count(gam) + ec_count(dl)))
    return out


def _lemma_body(ctx, gam, L, a, dl, T):
    target = _target(gam, L, a, dl, T)
    live = [i for i in T if a in dl.conclusion[i].antecedent]
    if not L:
        return gam
    if not live:
        rest = list(gam.conclusion.components)
        for l in L:
            rest.remove(l)
        return close(ew(dl, rest, ctx.budget), target, ctx.budget)
    if gam.rule is R.AXIOM:
        return close(dl, target, ctx.budget)
    if dl.rule is R.AXIOM:
        # the tracked component is A => A itself
        return close(gam, target, ctx.budget)
    active_vals = [gam.conclusion[i] for i in gam.active[-1]]
    if len(L) == 1 and L[0] in active_vals and gam.rule in RIGHT_INTRO:
        return _right(ctx, gam, L[0], a, dl, T, target)
    return _left(ctx, gam, L, a, dl, T, target)


# --------------------------------------------------------------- left side

def _minus(items, remove):
    out = list(items)
    for x in remove:
        out.remove(x)
    return out


def _left(ctx, gam, L, a, dl, T, target):
    rule = gam.rule
    if len(T) != 1:  # pragma: no cover - left permutations only see one tracked component
        raise TransformError("left permutation with several tracked components")
    conc_active = [gam.conclusion[i] for i in gam.active[-1]]
    pending = list(L)
    tracked_conc = []
    for c in conc_active:
        if c in pending:
            pending.remove(c)
            tracked_conc.append(c)
    prem_active = _active_values(gam)
    if not tracked_conc:
        # every tracked component is a side component: permute the inference down
        aux = full_aux(gam)
        outs = [_lemma(ctx, c, L, a, dl, T) for c in gam.children]
        node = infer(rule, _pad_sides(ctx, outs, prem_active), prem_active, aux)
        ctx.budget.spend()
        return close(node, target, ctx.budget)
    if rule in UNSUPPORTED:
        raise TransformError(f"cut reduction does not handle {rule.value}")
    rest = pending              # tracked components untouched by this inference
    if rule is R.EW or rule is R.IW_R:
        # the cut formula (or its whole component) was introduced by weakening
        out = _lemma(ctx, gam.children[0], rest, a, dl, T)
        return close(out, target, ctx.budget)
    if rule is R.EC:
        # follow both contracted copies
        c = tracked_conc[0]
        out = _lemma(ctx, gam.children[0], rest + [c, c], a, dl, T)
        return close(out, target, ctx.budget)
    aux = full_aux(gam)
    if rule in RIGHT_INTRO:
        # principal here, but other tracked components still wait in the side:
        # cut those in the premises first, then hand the rebuilt inference on
        outs = [_lemma(ctx, c, rest, a, dl, T) for c in gam.children]
        g2 = infer(rule, _pad_sides(ctx, outs, prem_active), prem_active, aux)
        ctx.budget.spend()
        out = _lemma(ctx, g2, tracked_conc, a, dl, T)
        return close(out, target, ctx.budget)

    dcomp = dl.conclusion[T[0]]
    pi_star, lam = _strip(dcomp, a), dcomp.succedent
    anc = _ancestors_left(rule, gam, tracked_conc, prem_active, conc_active, aux)
    outs, new_active = [], []
    for k, child in enumerate(gam.children):
        acts = list(prem_active[k])
        mine = [acts[j] for j in anc.get(k, [])]
        outs.append(_lemma(ctx, child, rest + mine, a, dl, T))
        for j in anc.get(k, []):
            acts[j] = Sequent(acts[j].antecedent + tuple(pi_star), lam)
        new_active.append(acts)
    node = infer(rule, _pad_sides(ctx, outs, new_active), new_active, aux)
    ctx.budget.spend()
    return close(node, target, ctx.budget)


def _pad_sides(ctx, outs, actives):
    """Externally weaken premises so that all side hypersequents coincide."""
    if len(outs) < 2:
        return outs
    sides = [Counter(_minus(o.conclusion.components, acts)) for o, acts in zip(outs, actives)]
    union = Counter()
    for sd in sides:
        union |= sd
    return [ew(o, list((union - sd).elements()), ctx.budget) for o, sd in zip(outs, sides)]


def _ancestors_left(rule, gam, tracked_conc, prem_active, conc_active, aux) -> dict[int, list]:
    """premise index -> positions of active premise components whose succedents are
    ancestors of the tracked cut formulas."""
    if rule in (R.IW_L, R.IC_L, R.AND_L1, R.AND_L2, R.FORALL_L, R.EXISTS_L):
        return {0: [0]}
    if rule is R.OR_L:
        return {0: [0], 1: [0]}
    if rule is R.IMPL_L:
        return {1: [0]}
    if rule is R.TT:
        a0, a1 = prem_active[0]
        return {0: [1] if _is_tt_left(a0, a1, gam.conclusion) else [0]}
    if rule is R.CM:
        c = conclusion_components(rule, prem_active, aux)
        out = {}
        todo = list(tracked_conc)
        for k in (0, 1):
            if c[k] in todo:
                todo.remove(c[k])
                out[k] = [0]
        return out
    raise TransformError(f"cut reduction cannot permute {rule.value} on the left")


def _is_tt_left(s: Sequent, other: Sequent, conclusion: Hypersequent) -> bool:
    """``s`` is the component Φ => p of a tt inference."""
    from ..syntax import Prop, occurs
    p = s.succedent
    return isinstance(p, Prop) and p in other.antecedent and not occurs(p.name, conclusion)


# -------------------------------------------------------------- right side

def _right(ctx, gam, gcomp, a, dl, T, target):
    rule = dl.rule
    if rule in UNSUPPORTED:
        raise TransformError(f"cut reduction does not handle {rule.value}")
    tracked = set(T)
    conc_idx = list(dl.active[-1])
    conc_active = [dl.conclusion[i] for i in conc_idx]
    prem_active = _active_values(dl)
    aux = full_aux(dl)
    gamma = gcomp.antecedent
    hit = any(i in tracked for i in conc_idx)

    # tracked sets for each premise
    conc_side = _side_indices(dl.conclusion, conc_idx)
    T_k, act_tracked = [], []
    for k, child in enumerate(dl.children):
        pside = _side_indices(child.conclusion, dl.active[k])
        mapped = [ps for cs, ps in zip(conc_side, pside) if cs in tracked]
        flags = [hit and a in s.antecedent for s in prem_active[k]]
        mapped += [i for i, f in zip(dl.active[k], flags) if f]
        T_k.append(mapped)
        act_tracked.append(flags)

    if hit and rule in LEFT_INTRO and aux.formula == a and \
            any(conc_idx[0] == i for i in tracked):
        return _principal(ctx, gam, gcomp, a, dl, T_k, act_tracked, prem_active, aux, target)

    if hit and rule in (R.IW_L, R.IC_L) and aux.formula == a:
        out = _lemma(ctx, gam, [gcomp], a, dl.children[0], T_k[0])
        return close(out, target, ctx.budget)

    outs = [_lemma(ctx, gam, [gcomp], a, c, T_k[k]) for k, c in enumerate(dl.children)]
    new_active = []
    for k in range(len(outs)):
        acts = []
        for s, f in zip(prem_active[k], act_tracked[k]):
            acts.append(_tr(s, gamma, a) if f else s)
        new_active.append(acts)

    if not hit:
        node = infer(rule, outs, new_active, aux)
    elif rule is R.EW:
        c = conc_active[0]
        comp = _tr(c, gamma, a) if conc_idx[0] in tracked else c
        node = infer(R.EW, outs, [[]], Aux(component=comp))
    elif rule is R.CM:
        node = _right_cm(ctx, outs, new_active, act_tracked, prem_active, conc_idx, tracked,
                         aux, gamma, a, lambda i: dl.conclusion[i])
    else:
        # put back occurrences of the cut formula the inference consumes
        need = _consumed(rule, aux, prem_active)
        for k, wanted in need.items():
            for j, f in wanted:
                if f == a and act_tracked[k][j]:
                    outs[k] = infer(R.IW_L, [outs[k]], [[new_active[k][j]]], Aux(formula=a))
                    s = new_active[k][j]
                    new_active[k][j] = Sequent(s.antecedent + (a,), s.succedent)
                    ctx.budget.spend()
        node = infer(rule, outs, new_active, aux)
    ctx.budget.spend()
    return close(node, target, ctx.budget)


def _consumed(rule, aux, prem_active) -> dict[int, list]:
    """premise index -> [(active position, antecedent formula removed by the rule)]"""
    f = aux.formula
    if rule is R.NEG_R:
        return {0: [(0, f.sub)]}
    if rule is R.IMPL_R:
        return {0: [(0, f.left)]}
    if rule is R.AND_L1:
        return {0: [(0, f.left)]}
    if rule is R.AND_L2:
        return {0: [(0, f.right)]}
    if rule is R.OR_L:
        return {0: [(0, f.left)], 1: [(0, f.right)]}
    if rule is R.IMPL_L:
        return {1: [(0, f.right)]}
    if rule is R.FORALL_L:
        return {0: [(0, substitute(f.body, aux.term) if aux.term is not None else f.body)]}
    if rule is R.EXISTS_L:
        return {0: [(0, substitute(f.body, FreeVar(aux.eigen)))]}
    return {}


def _right_cm(ctx, outs, new_active, act_tracked, prem_active, conc_idx, tracked, aux, gamma, a,
              ctx_value):
    moved1, moved2 = aux.parts
    first = conclusion_components(R.CM, prem_active, aux)[0]
    i1, i2 = conc_idx if ctx_value(conc_idx[0]) == first else conc_idx[::-1]
    c1_in = i1 in tracked
    c2_in = i2 in tracked
    p1_tr, p2_tr = act_tracked[0][0], act_tracked[1][0]
    m1 = [f for f in moved1 if f != a] if p1_tr else list(moved1)
    m2 = [f for f in moved2 if f != a] if p2_tr else list(moved2)
    # where the conclusion order is (c2, c1) the parts were computed for that order
    if p1_tr and not c1_in and c2_in:
        m1 += list(gamma)
    if p2_tr and not c2_in and c1_in:
        m2 += list(gamma)
    return infer(R.CM, outs, new_active, Aux(parts=(tuple(m1), tuple(m2))))


def _principal(ctx, gam, gcomp, a, dl, T_k, act_tracked, prem_active, aux, target):
    gamma = gcomp.antecedent
    rule = dl.rule
    g_aux = full_aux(gam)

    def premise_out(k):
        o = _lemma(ctx, gam, [gcomp], a, dl.children[k], T_k[k])
        s = prem_active[k][0]
        return o, (_tr(s, gamma, a) if act_tracked[k][0] else s)

    g1 = gam.children[0]
    g1comp = g1.conclusion[gam.active[0][0]]
    if isinstance(a, Neg):
        o, q = premise_out(0)
        sub = _lemma(ctx, o, [q], a.sub, g1, (locate(g1.conclusion, [g1comp])[0],))
    elif isinstance(a, Or):
        k = 0 if gam.rule is R.OR_R1 else 1
        o, q = premise_out(k)
        part = a.left if k == 0 else a.right
        sub = _lemma(ctx, g1, [g1comp], part, o, (locate(o.conclusion, [q])[0],))
    elif isinstance(a, And):
        k = 0 if rule is R.AND_L1 else 1
        part = a.left if k == 0 else a.right
        gk = gam.children[k]
        gkcomp = gk.conclusion[gam.active[k][0]]
        o, q = premise_out(0)
        sub = _lemma(ctx, gk, [gkcomp], part, o, (locate(o.conclusion, [q])[0],))
    elif isinstance(a, Impl):
        o1, q1 = premise_out(0)
        o2, q2 = premise_out(1)
        s1 = _lemma(ctx, o1, [q1], a.left, g1, (locate(g1.conclusion, [g1comp])[0],))
        r = Sequent(q1.antecedent + tuple(f for f in g1comp.antecedent if f != a.left),
                    g1comp.succedent)
        sub = _lemma(ctx, s1, [r], a.right, o2, (locate(o2.conclusion, [q2])[0],))
    elif isinstance(a, Forall):
        eig = g_aux.eigen
        t = aux.term
        inst = substitute(a.body, t) if t is not None else a.body
        g1t = subst_in_node(g1, eig, t) if (eig is not None and t is not None) else g1
        g1tcomp = Sequent(g1comp.antecedent, inst)
        o, q = premise_out(0)
        sub = _lemma(ctx, g1t, [g1tcomp], inst, o, (locate(o.conclusion, [q])[0],))
    elif isinstance(a, Exists):
        t = g_aux.term
        inst = g1comp.succedent
        o, q = premise_out(0)
        if t is not None:
            o = subst_in_node(o, aux.eigen, t)
            q = subst_sequent(q, aux.eigen, t)
        sub = _lemma(ctx, g1, [g1comp], inst, o, (locate(o.conclusion, [q])[0],))
    else:  # pragma: no cover
        raise TransformError(f"no principal reduction for {a}")
    return close(sub, target, ctx.budget)


# ------------------------------------------------------------------ public

def _union_max(a: Sequence[Sequent], b: Sequence[Sequent]) -> list[Sequent]:
    ca, cb = Counter(a), Counter(b)
    return list((ca | cb).elements())


def reduce_cut(gamma: Node | Derivation, delta: Node | Derivation, cut_formula: Formula,
               gamma_component: Optional[Sequent] = None,
               delta_component: Optional[Sequent] = None,
               budget: int | Budget = DEFAULT_BUDGET,
               trace: Optional[CutTrace] = None,
               supply: Optional[NameSupply] = None, check: bool = True) -> Node:
    """Eliminate a single cut on ``cut_formula``.

    ``gamma`` derives ``G | Γ => A`` and ``delta`` derives ``G' | Π => Λ``; the result
    derives ``G ∪ G' | Γ, Π* => Λ`` (shared side components appear once).
    """
    g = gamma.root if isinstance(gamma, Derivation) else gamma
    d = delta.root if isinstance(delta, Derivation) else delta
    a = cut_formula
    if check:
        for label, node in (("left", g), ("right", d)):
            if check_derivation(node, HIF) or any(n.rule in UNSUPPORTED for n in node.distinct()):
                raise TransformError(f"{label} derivation is not a cut-free HIF derivation")
    if gamma_component is None:
        gamma_component = next((c for c in g.conclusion if c.succedent == a), None)
    if delta_component is None:
        delta_component = next((c for c in d.conclusion if a in c.antecedent), None)
    if gamma_component is None or gamma_component.succedent != a:
        raise TransformError("left derivation has no component with the cut formula as succedent")
    if delta_component is None or a not in delta_component.antecedent:
        raise TransformError("right derivation has no component containing the cut formula")
    if not isinstance(budget, Budget):
        budget = Budget(budget)
    trace = trace if trace is not None else CutTrace()
    if supply is None:
        supply = NameSupply(derivation_symbols(g) | derivation_symbols(d))
    g = freshen(g, supply)
    d = freshen(d, supply)
    ctx = _Ctx(budget, trace)
    ec_in = ec_count(g) + ec_count(d)
    side = _union_max(_side(g.conclusion, gamma_component), _side(d.conclusion, delta_component))
    g, d = prune_shared(g, [gamma_component], d, [delta_component])
    ti = locate(d.conclusion, [delta_component])
    out = _lemma(ctx, g, [gamma_component], a, d, ti)
    comp = Sequent(gamma_component.antecedent + tuple(_strip(delta_component, a)),
                   delta_component.succedent)
    goal = Hypersequent(tuple(side) + (comp,))
    result = drop_contractions(close(out, goal, budget))
    # a premise that already weakens to the conclusion is kept when it is cheaper
    for premise in (g, d):
        try:
            alt = close(premise, goal, budget)
        except TransformError:
            continue
        if ec_count(alt) < ec_count(result):
            result = alt
    trace.ec_checks.append((ec_count(result), ec_in))
    return result


def first_uppermost_cut(root: Node) -> Optional[Node]:
    for n in root.distinct():
        if n.rule is R.CUT:
            return n
    return None


def _replace(root: Node, old: Node, new: Node) -> Node:
    memo: dict[int, Node] = {}
    for n in root.distinct():
        if n is old:
            memo[id(n)] = new
            continue
        kids = [memo[id(c)] for c in n.children]
        if all(k is c for k, c in zip(kids, n.children)):
            memo[id(n)] = n
        else:
            memo[id(n)] = n.with_children(kids)
    return memo[id(root)]


def cut_eliminate(d: Derivation, budget: int = DEFAULT_BUDGET,
                  report: Optional[TransformReport] = None) -> Derivation:
    """Remove all cuts, uppermost first and leftmost among the uppermost."""
    if check_derivation(d):
        raise TransformError("input derivation does not check")
    if any(n.rule in UNSUPPORTED - {R.CUT} for n in d.root.distinct()):
        raise TransformError("cut elimination supports HIF and HIF* rules only")
    bud = Budget(budget)
    trace = CutTrace()
    supply = NameSupply(derivation_symbols(d.root))
    root = d.root
    cuts = 0
    while True:
        c = first_uppermost_cut(root)
        if c is None:
            break
        cuts += 1
        left, right = c.children
        lcomp = left.conclusion[c.active[0][0]]
        rcomp = right.conclusion[c.active[1][0]]
        res = reduce_cut(left, right, lcomp.succedent, lcomp, rcomp, bud, trace, supply, check=False)
        res = close(res, c.conclusion, bud)
        root = _replace(root, c, res)
    cfg = d.config.with_(allow_cut=False) if hasattr(d.config, "with_") else d.config
    out = Derivation(root, d.name, cfg, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.steps = bud.used
        report.budget = budget
        report.measure_trace = [(s.measure, s.parent) for s in trace.steps]
        report.ec_checks = list(trace.ec_checks)
        report.output_config = cfg.name
        report.extra["cuts_eliminated"] = cuts
        report.extra["measure_trace.decreasing"] = trace.decreasing
    return out
