"""Eliminating the density rule (tt).

A derivation of ``G | Φ1 => p | ... | p, Ψ1 => Σ1 | ...`` is turned into one of
``G | Φ1, ..., Φn, Ψ1 => Σ1 | ...`` by recursion on the derivation, handled case
by case on its last inference.  Components are classified by where the
eigenvariable p occurs:

* ``G``: no p;
* ``R``: ``Φ => p`` with Φ free of p;
* ``L``: p only in the antecedent;
* ``B``: p on both sides (only above the inference that separates them).

The transformed hypersequent drops the R components and adds the union of
their antecedents to every L component (when there is no L component, the R
components lose their p instead).  B components are kept; such hypersequents are
derivable from ``p => p`` by weakening.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

from ..calculus import Aux, HIF_STAR, RuleError, RuleName as R
from ..proof import Derivation, Node, axiom, infer, stats
from ..syntax import (
    Formula, FreeVar, Hypersequent, Impl, Neg, Or, Prop, Sequent, occurs,
)
from .base import (
    Budget, DEFAULT_BUDGET, TransformError, TransformReport, close, drop_formulas, ew,
    full_aux, prune_component,
)

G_, R_, L_, B_ = "G", "R", "L", "B"


class _IllFormed(TransformError):
    """p occurs inside a compound formula."""


def _kind(s: Sequent, p: Prop) -> str:
    for g in s.formulas():
        if g != p and occurs(p.name, g):
            raise _IllFormed(f"{p} occurs inside {g}")
    left = p in s.antecedent
    right = s.succedent == p
    if left and right:
        return B_
    return R_ if right else L_ if left else G_


def _no_p(items, p):
    return tuple(g for g in items if g != p)


class _Shape:
    """Classification of a hypersequent and its transformed form."""

    def __init__(self, h: Hypersequent, p: Prop):
        self.h = h
        self.p = p
        self.kinds = [_kind(s, p) for s in h]
        self.phi = tuple(g for s, k in zip(h, self.kinds) if k == R_ for g in s.antecedent)
        self.m = self.kinds.count(L_)
        self.n = self.kinds.count(R_)

    def star_l(self, s: Sequent) -> Sequent:
        return Sequent(self.phi + _no_p(s.antecedent, self.p), s.succedent)

    def image(self, i: int) -> list[Sequent]:
        """Components of the transformed hypersequent that stand for component i."""
        s, k = self.h[i], self.kinds[i]
        if k in (G_, B_):
            return [s]
        if k == L_:
            return [self.star_l(s)]
        if self.m == 0:
            return [Sequent(s.antecedent, None)]
        return [self.star_l(t) for t, kk in zip(self.h, self.kinds) if kk == L_]

    def target(self) -> Hypersequent:
        out = []
        for i, k in enumerate(self.kinds):
            if k == R_ and self.m > 0:
                continue
            out.append(self.image(i)[0])
        return Hypersequent(tuple(out))

    @property
    def has_p(self) -> bool:
        return any(k != G_ for k in self.kinds)


def _sides(n: Node, act: list[Sequent]) -> Counter:
    return Counter(n.conclusion.components) - Counter(act)


def _apply(rule: R, kids: list[Node], acts: list[list[Sequent]], aux: Aux) -> Node:
    """``rule`` on ``kids``, padding the side hypersequents by external weakening."""
    kids = list(kids)
    if len(kids) > 1:
        sides = [_sides(k, a) for k, a in zip(kids, acts)]
        union = Counter()
        for s in sides:
            union |= s
        kids = [ew(k, list((union - s).elements())) for k, s in zip(kids, sides)]
    return infer(rule, kids, acts, aux)


# ------------------------------------------------------------ implication chains

def _chain_formula(psi: tuple, sigma: Optional[Formula]) -> Formula:
    """``P1 -> (P2 -> ... -> Σ)``; with empty Σ the last step is a negation."""
    if sigma is None:
        *rest, last = psi
        f: Formula = Neg(last)
        psi = tuple(rest)
    else:
        f = sigma
    for g in reversed(psi):
        f = Impl(g, f)
    return f


def _fold_right(node: Node, comp: Sequent, psi: tuple, sigma) -> tuple[Node, Sequent]:
    """From ``Γ, Ψ => Σ`` derive ``Γ => Q`` with Q the chain formula of Ψ, Σ."""
    ante = list(comp.antecedent)
    psi = list(psi)
    if sigma is None:
        last = psi.pop()
        node = infer(R.NEG_R, [node], [[comp]], Aux(formula=Neg(last)))
        ante.remove(last)
        comp = Sequent(tuple(ante), Neg(last))
    for g in reversed(psi):
        f = Impl(g, comp.succedent)
        node = infer(R.IMPL_R, [node], [[comp]], Aux(formula=f))
        ante.remove(g)
        comp = Sequent(tuple(ante), f)
    return node, comp


def _unfold(psi: tuple, sigma) -> Node:
    """A cut-free derivation of ``Q, Ψ => Σ``."""
    psi = tuple(psi)
    if sigma is None:
        *rest, last = psi
        node = infer(R.NEG_L, [axiom(last)], [[Sequent((last,), last)]], Aux(formula=Neg(last)))
        cur, tail = node.conclusion[0], Neg(last)
        psi = tuple(rest)
    else:
        node, tail = axiom(sigma), sigma
        cur = node.conclusion[0]
    for g in reversed(psi):
        f = Impl(g, tail)
        node = infer(R.IMPL_L, [axiom(g), node], [[Sequent((g,), g)], [cur]], Aux(formula=f))
        cur = Sequent(tuple(_drop_one(cur.antecedent, tail)) + (f, g), cur.succedent)
        tail = f
    return node


def _drop_one(items, f):
    out = list(items)
    out.remove(f)
    return out


def _or_chain(qs: list[Formula], j: int) -> list[tuple[R, Formula]]:
    """Or-R steps lifting ``Q_j`` into ``Q_0 | (Q_1 | ...)``."""
    tails = [qs[-1]]
    for q in reversed(qs[:-1]):
        tails.insert(0, Or(q, tails[0]))
    steps = []
    if j < len(qs) - 1:
        steps.append((R.OR_R1, tails[j]))
    for i in range(j - 1, -1, -1):
        steps.append((R.OR_R2, tails[i]))
    return steps


def _delta(q: Formula, rest: Formula) -> Node:
    """``q|rest => q  |  q|rest => rest`` from cm and two (∨⇒)."""
    f = Or(q, rest)
    m = infer(R.CM, [axiom(rest), axiom(q)], [[Sequent((rest,), rest)], [Sequent((q,), q)]],
              Aux(parts=((rest,), (q,))))
    # m: q => rest | rest => q
    n = _apply(R.OR_L, [m, axiom(rest)], [[Sequent((q,), rest)], [Sequent((rest,), rest)]],
               Aux(formula=f))
    return _apply(R.OR_L, [axiom(q), n], [[Sequent((q,), q)], [Sequent((rest,), q)]],
                  Aux(formula=f))


# ------------------------------------------------------------------ reducer

class _Reducer:
    def __init__(self, p: Prop, stars: bool, budget: Budget):
        self.p = p
        self.stars = stars
        self.budget = budget
        self.memo: dict[int, Node] = {}
        self.cuts_added = 0

    def reduce(self, n: Node) -> Node:
        key = id(n)
        if key not in self.memo:
            self.memo[key] = self._reduce(n)
            self.budget.spend()
        return self.memo[key]

    # -- dispatch

    def _reduce(self, n: Node) -> Node:
        shape = _Shape(n.conclusion, self.p)
        target = shape.target()
        if not shape.has_p:
            return n
        if B_ in shape.kinds:
            return close(axiom(self.p), target)
        if shape.m == 0 or shape.n == 0:
            # p only on one side: every occurrence comes from a weakening
            req = {i: ([g for g in s.antecedent if g == self.p], s.succedent == self.p)
                   for i, s in enumerate(n.conclusion)}
            pruned = drop_formulas(n, req)
            if pruned is not None:
                return close(pruned, target)
        kids = [self.reduce(c) for c in n.children]
        for k in kids:
            try:
                return close(k, target)
            except TransformError:
                pass
        shapes = [_Shape(c.conclusion, self.p) for c in n.children]
        try:
            if n.rule is R.CUT and full_aux(n).formula == self.p:
                return self._cut_on_p(n, kids, shapes, target)
            if n.rule in (R.OR_L, R.EXISTS_L):
                act = n.active[0][0]
                if shapes[0].kinds[act] == R_ and shapes[0].m >= 2:
                    return self._disjunctive(n, kids, shapes, target)
            return self._commute(n, kids, shapes, target)
        except RuleError as e:
            raise TransformError(f"tt reduction failed at {n.rule.value}: {e}") from e

    # -- generic commutation, once per transformed component when needed

    def _commute(self, n: Node, kids, shapes, target) -> Node:
        if n.rule in (R.OR_L_STAR, R.EXISTS_L_STAR, R.SPLIT, R.OR_L_PRIME, R.TT):
            raise TransformError(f"tt reduction does not handle {n.rule.value} here")
        aux = full_aux(n)
        images = [[shapes[k].image(i) for i in n.active[k]] for k in range(len(kids))]
        if n.rule is R.CM:
            aux = self._cm_parts(n, shapes, aux)
        multi = [(k, a) for k, imgs in enumerate(images) for a, img in enumerate(imgs)
                 if len(img) > 1]
        if len(multi) > 1:
            raise TransformError("several premises need repeated application")
        acts = [[img[0] for img in imgs] for imgs in images]
        if not multi:
            return close(_apply(n.rule, kids, acts, aux), target)
        if n.rule in (R.EXISTS_L, R.FORALL_R):
            raise TransformError("eigenvariable inference cannot be repeated")
        (k, a), = multi
        cur = list(kids)
        for v in images[k][a]:
            acts[k][a] = v
            cur[k] = _apply(n.rule, cur, acts, aux)
            cur = [cur[k] if m == k else kids[m] for m in range(len(kids))]
        return close(cur[k], target)

    def _cm_parts(self, n: Node, shapes, aux: Aux) -> Aux:
        """Move parts for cm between transformed premises: p's go, and the added Φ
        travels with the half whose conclusion component keeps a p."""
        p = self.p
        parts = []
        for k in (0, 1):
            s = n.children[k].conclusion[n.active[k][0]]
            moved = list(aux.parts[k])
            keep = list((Counter(s.antecedent) - Counter(moved)).elements())
            new = [g for g in moved if g != p]
            if shapes[k].kinds[n.active[k][0]] == L_ and p not in keep:
                new += list(shapes[k].phi)
            parts.append(tuple(new))
        return Aux(aux.formula, aux.term, aux.eigen, tuple(parts), aux.component)

    # -- cut on p: one cm per L component

    def _cut_on_p(self, n: Node, kids, shapes, target) -> Node:
        left, right = kids
        gamma = n.children[0].conclusion[n.active[0][0]]
        w = shapes[1].image(n.active[1][0])[0]
        phi_side = shapes[1].phi
        cur = left
        for v in shapes[0].image(n.active[0][0]):
            cur = _apply(R.CM, [cur, right], [[v], [w]],
                         Aux(parts=(tuple(gamma.antecedent), tuple(phi_side))))
        return close(cur, target)

    # -- (∨⇒) or (∃⇒) on a Φ shared by several components

    def _disjunctive(self, n: Node, kids, shapes, target) -> Node:
        aux = full_aux(n)
        conc_shape = _Shape(n.conclusion, self.p)
        lcomps = [s for s, k in zip(n.conclusion, conc_shape.kinds) if k == L_]
        lists = [[sh.star_l(s) for s in lcomps] for sh in shapes]
        if self.stars:
            rule = R.OR_L_STAR if n.rule is R.OR_L else R.EXISTS_L_STAR
            return close(_apply(rule, kids, lists, aux), target)
        p = self.p
        pieces = [(_no_p(s.antecedent, p), s.succedent) for s in lcomps]
        distinct = []
        for pc in pieces:
            if pc not in distinct and (pc[0] or pc[1] is not None):
                distinct.append(pc)
        qs = [_chain_formula(psi, sigma) for psi, sigma in distinct]
        q_all = None
        if qs:
            q_all = qs[-1]
            for q in reversed(qs[:-1]):
                q_all = Or(q, q_all)
        branches = []
        for kid, sh, lst in zip(kids, shapes, lists):
            node = kid
            base = None
            for s, v in zip(lcomps, lst):
                psi, sigma = _no_p(s.antecedent, p), s.succedent
                if (psi, sigma) in distinct:
                    node, c = _fold_right(node, v, psi, sigma)
                    for rule, f in _or_chain(qs, distinct.index((psi, sigma))):
                        node = infer(rule, [node], [[c]], Aux(formula=f))
                        c = Sequent(c.antecedent, f)
                else:
                    c = v
                    if q_all is not None:
                        node = infer(R.IW_R, [node], [[c]], Aux(formula=q_all))
                        c = Sequent(c.antecedent, q_all)
                base = c
            while Counter(node.conclusion.components)[base] > 1:
                node = infer(R.EC, [node], [[base, base]])
            branches.append((node, base))
        if n.rule is R.OR_L:
            k = _apply(R.OR_L, [b[0] for b in branches], [[b[1]] for b in branches], aux)
        else:
            k = infer(R.EXISTS_L, [branches[0][0]], [[branches[0][1]]], aux)
        gamma = Sequent(tuple(_drop_one(branches[0][1].antecedent, _side_principal(n, aux)))
                        + (aux.formula,), q_all)
        if q_all is None:
            return close(k, target)
        cur, comp = k, gamma
        for i in range(len(qs) - 1):
            rest = comp.succedent.right
            d = _delta(qs[i], rest)
            d1 = _apply(R.CUT, [cur, d], [[comp], [Sequent((comp.succedent,), qs[i])]],
                        Aux(formula=comp.succedent))
            d2 = _apply(R.CUT, [cur, d1], [[comp], [Sequent((comp.succedent,), rest)]],
                        Aux(formula=comp.succedent))
            self.cuts_added += 2
            cur = d2
            comp = Sequent(gamma.antecedent, rest)
        for (psi, sigma), q in zip(distinct, qs):
            e = _unfold(psi, sigma)
            cur = _apply(R.CUT, [cur, e], [[Sequent(gamma.antecedent, q)], [e.conclusion[0]]],
                         Aux(formula=q))
            self.cuts_added += 1
        return close(cur, target)


def _side_principal(n: Node, aux: Aux) -> Formula:
    """The formula the premise has in place of the principal formula."""
    if n.rule is R.OR_L:
        return aux.formula.left
    from ..syntax import substitute
    return substitute(aux.formula.body, FreeVar(aux.eigen))


# ------------------------------------------------------------------ public API

def _eigen_prop(n: Node) -> Prop:
    a, _ = n.active[0]
    return n.children[0].conclusion[a].succedent


def prune_weakened_variable(d: Derivation, p: str, keep: Optional[set[int]] = None,
                            report: Optional[TransformReport] = None) -> Derivation:
    """Delete the occurrences of propositional variable ``p`` from the end hypersequent.

    ``p`` must occur only on left sides or only on right sides, and only as an atom;
    then every occurrence goes back to a weakening and those weakenings are removed.
    Components whose index is not in ``keep`` are dropped as well when they were
    introduced by external weakening."""
    pv = Prop(p)
    h = d.conclusion
    left = any(pv in s.antecedent for s in h)
    right = any(s.succedent == pv for s in h)
    for s in h:
        for g in s.formulas():
            if g != pv and occurs(p, g):
                raise TransformError(f"{p} occurs inside the compound formula {g}")
    if left and right:
        raise TransformError(f"{p} occurs on both sides of the end hypersequent")
    req = {i: ([g for g in s.antecedent if g == pv], s.succedent == pv) for i, s in enumerate(h)}
    node = drop_formulas(d.root, req)
    if node is None:
        raise TransformError(f"an occurrence of {p} does not come from a weakening")
    if keep is not None:
        # indices refer to the original end hypersequent; map them through the deletion
        reduced = [Sequent(tuple(g for g in s.antecedent if g != pv),
                           None if s.succedent == pv else s.succedent) for s in h]
        for i, s in enumerate(reduced):
            if i in keep:
                continue
            pruned = prune_component(node, s)
            if pruned is None:
                raise TransformError(f"component {i} ({s}) cannot be dropped")
            node = pruned
    out = Derivation(node, d.name, d.config, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.output_config = d.config.name
    return out


def tt_reduce(d: Derivation, p: str, stars: bool = False, budget: int = DEFAULT_BUDGET,
              report: Optional[TransformReport] = None) -> Derivation:
    """From a tt-free derivation of ``G | Φi => p ... | p, Ψj => Σj ...`` build one of
    ``G | Φ1, ..., Φn, Ψj => Σj ...``."""
    pv = Prop(p)
    shape = _Shape(d.conclusion, pv)
    if B_ in shape.kinds:
        raise TransformError(f"{p} occurs on both sides of one component")
    if any(n.rule is R.TT for n in d.root.distinct()):
        raise TransformError("input derivation contains tt")
    red = _Reducer(pv, stars, Budget(budget))
    node = red.reduce(d.root)
    cfg = HIF_STAR.with_(allow_star_rules=True) if stars else HIF_STAR
    if red.cuts_added and not cfg.allow_cut:  # pragma: no cover - presets allow cut
        raise TransformError("reduction needs cuts")
    out = Derivation(node, d.name, cfg, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.steps = len(red.memo)
        report.output_config = cfg.name
        report.cuts_introduced = red.cuts_added
    return out


def _uppermost_tt(root: Node) -> Optional[Node]:
    has_tt: dict[int, bool] = {}
    found = None
    for n in root.distinct():
        below = any(has_tt[id(c)] for c in n.children)
        if n.rule is R.TT and not below and found is None:
            found = n
        has_tt[id(n)] = below or n.rule is R.TT
    return found


def _well_formed(node: Node, p: Prop) -> bool:
    try:
        for n in node.distinct():
            for s in n.conclusion:
                _kind(s, p)
    except _IllFormed:
        return False
    return True


def tt_eliminate(d: Derivation, stars: Optional[bool] = None, budget: int = DEFAULT_BUDGET,
                 report: Optional[TransformReport] = None) -> Derivation:
    """Remove every tt, uppermost first.

    With ``stars`` (default: the input configuration's setting) the disjunctive
    cases use OrL-Star and ExistsL-Star, so a cut-free input stays cut-free;
    otherwise those cases introduce cuts."""
    from .cut import _replace, cut_eliminate
    if stars is None:
        stars = d.config.allow_star_rules
    bud = Budget(budget)
    root = d.root
    steps = cuts = 0
    while True:
        t = _uppermost_tt(root)
        if t is None:
            break
        p = _eigen_prop(t)
        premise = t.children[0]
        if not _well_formed(premise, p):
            # p sits inside a cut formula; remove the cuts above this tt first
            premise = cut_eliminate(Derivation(premise, d.name, d.config.with_(allow_star_rules=stars)),
                                    budget).root
        red = _Reducer(p, stars, bud)
        new = red.reduce(premise)
        if new.conclusion != t.conclusion:
            new = close(new, t.conclusion)
        root = _replace(root, t, new)
        steps += 1
        cuts += red.cuts_added
    cfg = HIF_STAR.with_(allow_star_rules=True) if stars else HIF_STAR
    if d.config.allow_split:
        cfg = cfg.with_(allow_split=True)
    out = Derivation(root, d.name, cfg, d.notes)
    if report is not None:
        report.output_stats = stats(out)
        report.steps = steps
        report.budget = budget
        report.output_config = cfg.name
        report.cuts_introduced = cuts
    return out
