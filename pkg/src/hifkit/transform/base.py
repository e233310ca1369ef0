"""Shared machinery for proof transformations.

Structural closure (deriving a target hypersequent from a node by internal and
external weakening/contraction), eigenvariable freshening, free-variable
substitution in derivations, budgets and reports.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..calculus import (
    EIGEN_RULES, NO_AUX, Aux, RuleName, conclusion_components, locate, match_instance,
)
from ..calculus import RuleError
from ..proof import Node, ProofStats, infer
from ..syntax import (
    Atom, Formula, FreeVar, Func, Hypersequent, Neg, Prop, Sequent, Term, _Binary, _Quant,
    all_symbols, rename_in_sequent,
)

R = RuleName
DEFAULT_BUDGET = 10**6


class TransformError(RuntimeError):
    pass


class BudgetExceeded(TransformError):
    pass


class Budget:
    """Counts constructed nodes; raises once ``limit`` is passed."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"step budget of {self.limit} exceeded")


@dataclass
class TransformReport:
    kind: str
    input_stats: ProofStats
    output_stats: Optional[ProofStats] = None
    steps: int = 0
    budget: int = DEFAULT_BUDGET
    measure_trace: list = field(default_factory=list)
    ec_checks: list = field(default_factory=list)
    cuts_introduced: int = 0
    output_config: str = ""
    extra: dict = field(default_factory=dict)

    def to_text(self) -> str:
        s_in, s_out = self.input_stats, self.output_stats
        lines = [f"kind = {self.kind}", f"steps = {self.steps}", f"budget = {self.budget}"]
        for label, st in (("input", s_in), ("output", s_out)):
            if st is None:
                continue
            lines.append(f"{label}.length = {st.length}")
            lines.append(f"{label}.nodes = {st.nodes}")
            lines.append(f"{label}.order = {st.order}")
            for r in RuleName:
                if st.count(r):
                    lines.append(f"{label}.count.{r.value} = {st.count(r)}")
        lines.append(f"measure_trace.length = {len(self.measure_trace)}")
        if self.ec_checks:
            ok = sum(1 for c in self.ec_checks if c[0] <= c[1])
            lines.append(f"ec_bound.holds = {ok}/{len(self.ec_checks)}")
        lines.append(f"cuts_introduced = {self.cuts_introduced}")
        lines.append(f"output.config = {self.output_config}")
        for k, v in sorted(self.extra.items()):
            lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------- counting

def ec_count(node: Node) -> int:
    memo = _ec_memo
    total = memo.get(id(node))
    if total is not None and memo_owner.get(id(node)) is node:
        return total
    per: dict[int, int] = {}
    for n in node.distinct():
        per[id(n)] = (n.rule is R.EC) + sum(per[id(c)] for c in n.children)
    total = per[id(node)]
    memo[id(node)] = total
    memo_owner[id(node)] = node
    return total


def depth(node: Node) -> int:
    d = _depth_memo.get(id(node))
    if d is not None and memo_owner.get(("d", id(node))) is node:
        return d
    d = node.depth()
    _depth_memo[id(node)] = d
    memo_owner[("d", id(node))] = node
    return d


_ec_memo: dict = {}
_depth_memo: dict = {}
memo_owner: dict = {}


def clear_memo() -> None:
    _ec_memo.clear()
    _depth_memo.clear()
    memo_owner.clear()


# ------------------------------------------------------------ building

def ew(node: Node, comps: Iterable[Sequent], budget: Budget | None = None) -> Node:
    for c in comps:
        node = infer(R.EW, [node], [[]], Aux(component=c))
        if budget:
            budget.spend()
    return node


def fits(src: Sequent, dst: Sequent) -> bool:
    """``dst`` is reachable from ``src`` by internal weakening and contraction."""
    if src.succedent is not None and src.succedent != dst.succedent:
        return False
    return set(src.antecedent) <= set(dst.antecedent)


def _adjust_component(node: Node, cur: Sequent, dst: Sequent, budget: Budget | None) -> Node:
    have = Counter(cur.antecedent)
    want = Counter(dst.antecedent)
    for f in sorted(have):
        for _ in range(have[f] - want[f]):
            node = infer(R.IC_L, [node], [[cur]], Aux(formula=f))
            cur = Sequent(tuple(_minus_one(cur.antecedent, f)), cur.succedent)
            if budget:
                budget.spend()
    for f in sorted(want):
        for _ in range(want[f] - have.get(f, 0)):
            node = infer(R.IW_L, [node], [[cur]], Aux(formula=f))
            cur = Sequent(cur.antecedent + (f,), cur.succedent)
            if budget:
                budget.spend()
    if cur.succedent is None and dst.succedent is not None:
        node = infer(R.IW_R, [node], [[cur]], Aux(formula=dst.succedent))
        if budget:
            budget.spend()
    return node


def _minus_one(items, f):
    out = list(items)
    out.remove(f)
    return out


def _match(src: list[Sequent], dst: list[Sequent]) -> list[int]:
    """Assign each source component a target; maximise distinct targets covered."""
    cand = [[j for j, t in enumerate(dst) if fits(s, t)] for s in src]
    for i, c in enumerate(cand):
        if not c:
            raise TransformError(f"cannot reach any target component from {src[i]}")
    # exact matches first, then augmenting paths for the rest
    owner: dict[int, int] = {}
    assign = [-1] * len(src)
    for i, s in enumerate(src):
        for j in cand[i]:
            if j not in owner and dst[j] == s:
                owner[j] = i
                assign[i] = j
                break

    def augment(i, seen):
        for j in cand[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = i
                assign[i] = j
                return True
        return False

    for i in range(len(src)):
        if assign[i] < 0:
            augment(i, set())
    for i in range(len(src)):
        if assign[i] < 0:
            assign[i] = cand[i][0]
    return assign


def close(node: Node, target: Hypersequent, budget: Budget | None = None) -> Node:
    """Derive ``target`` from ``node``'s conclusion using only structural rules."""
    if node.conclusion == target:
        return node
    src = list(node.conclusion.components)
    dst = list(target.components)
    assign = _match(src, dst)
    for s, j in zip(src, assign):
        if s != dst[j]:
            node = _adjust_component(node, s, dst[j], budget)
    images = Counter(assign)
    for j, k in images.items():
        for _ in range(k - 1):
            node = infer(R.EC, [node], [[dst[j], dst[j]]])
            if budget:
                budget.spend()
    missing = [dst[j] for j in range(len(dst)) if j not in images]
    node = ew(node, missing, budget)
    if node.conclusion != target:  # pragma: no cover - defensive
        raise TransformError(f"closure failed: {node.conclusion} vs {target}")
    return node


# ----------------------------------------------------- symbol management

class NameSupply:
    """Fresh readable names (a1, a2, ... / p1, p2, ...) avoiding a used set."""

    def __init__(self, used: Iterable[str] = ()):
        self.used = set(used)
        self.counters: dict[str, int] = {}

    def fresh(self, prefix: str) -> str:
        k = self.counters.get(prefix, 0)
        while True:
            k += 1
            name = f"{prefix}{k}"
            if name not in self.used:
                self.counters[prefix] = k
                self.used.add(name)
                return name

    def reserve(self, names: Iterable[str]) -> None:
        self.used |= set(names)


def derivation_symbols(node: Node) -> set[str]:
    out: set[str] = set()
    for n in node.distinct():
        out |= all_symbols(n.conclusion)
        if n.aux.eigen:
            out.add(n.aux.eigen)
    return out


def _map_term(t: Term, tmap) -> Term:
    if isinstance(t, FreeVar):
        return tmap(t)
    if isinstance(t, Func):
        return Func(t.name, tuple(_map_term(a, tmap) for a in t.args))
    return t


def _map_formula(f: Formula, tmap, pmap) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_map_term(a, tmap) for a in f.args))
    if isinstance(f, Prop):
        return pmap(f)
    if isinstance(f, Neg):
        return Neg(_map_formula(f.sub, tmap, pmap))
    if isinstance(f, _Binary):
        return type(f)(_map_formula(f.left, tmap, pmap), _map_formula(f.right, tmap, pmap))
    if isinstance(f, _Quant):
        return type(f)(_map_formula(f.body, tmap, pmap), f.hint)
    return f


def map_node(node: Node, tmap=lambda t: t, pmap=lambda p: p, emap=lambda e: e) -> Node:
    """Apply a symbol map to every formula of a derivation, re-locating active indices
    because canonical component order may change."""
    fm = lambda f: _map_formula(f, tmap, pmap)
    sm = lambda s: Sequent(tuple(fm(g) for g in s.antecedent),
                           None if s.succedent is None else fm(s.succedent))
    memo: dict[int, Node] = {}
    for n in node.distinct():
        kids = tuple(memo[id(c)] for c in n.children)
        h = Hypersequent(tuple(sm(c) for c in n.conclusion.components))
        aux = n.aux
        if aux is not NO_AUX:
            aux = Aux(
                fm(aux.formula) if aux.formula is not None else None,
                _map_term(aux.term, tmap) if aux.term is not None else None,
                emap(aux.eigen) if aux.eigen is not None else None,
                None if aux.parts is None else tuple(tuple(fm(g) for g in p) for p in aux.parts),
                None if aux.component is None else sm(aux.component),
            )
        active = []
        for k, kid in enumerate(kids):
            old = n.children[k].conclusion
            active.append(locate(kid.conclusion, [sm(old[i]) for i in n.active[k]]))
        active.append(locate(h, [sm(n.conclusion[i]) for i in n.active[-1]]))
        memo[id(n)] = Node(n.rule, h, kids, tuple(active), aux)
    return memo[id(node)]


def rename_in_node(node: Node, old: str, new: str) -> Node:
    """Consistently rename a free or propositional variable throughout a derivation."""
    return map_node(
        node,
        tmap=lambda t: FreeVar(new) if t.name == old else t,
        pmap=lambda p: Prop(new) if p.name == old else p,
        emap=lambda e: new if e == old else e,
    )


def subst_in_node(node: Node, name: str, term: Term) -> Node:
    """Replace the free variable ``name`` by ``term`` throughout a derivation.

    The caller guarantees that ``term`` shares no variable with eigenvariables of ``node``.
    """
    return map_node(node, tmap=lambda t: term if t.name == name else t)


def subst_formula(f: Formula, name: str, term: Term) -> Formula:
    return _map_formula(f, lambda t: term if t.name == name else t, lambda p: p)


def subst_sequent(s: Sequent, name: str, term: Term) -> Sequent:
    return Sequent(tuple(subst_formula(g, name, term) for g in s.antecedent),
                   None if s.succedent is None else subst_formula(s.succedent, name, term))


def eigenvariable(n: Node) -> Optional[str]:
    """The eigenvariable of an eigenvariable inference (None when vacuous)."""
    if n.aux.eigen is not None:
        return n.aux.eigen
    if n.rule not in EIGEN_RULES:
        return None
    prem = n.children[0].conclusion
    if n.rule is R.TT:
        a, b = (prem[i] for i in n.active[0])
        for s in (a, b):
            if isinstance(s.succedent, Prop) and s.succedent in (b.antecedent if s is a else a.antecedent):
                return s.succedent.name
        return None
    conc = n.conclusion[n.active[-1][0]]
    pc = prem[n.active[0][0]]
    if n.rule is R.FORALL_R:
        ok, t = match_instance(conc.succedent.body, pc.succedent)
        return t.name if ok and isinstance(t, FreeVar) else None
    for f in (Counter(conc.antecedent) - Counter(pc.antecedent)):
        if isinstance(f, _Quant):
            for g in Counter(pc.antecedent) - Counter(conc.antecedent):
                ok, t = match_instance(f.body, g)
                if ok and isinstance(t, FreeVar):
                    return t.name
    return None


def freshen(node: Node, supply: NameSupply) -> Node:
    """Give every eigenvariable inference its own fresh eigenvariable."""

    def go(n: Node) -> Node:
        if n.rule in EIGEN_RULES:
            old = eigenvariable(n)
            if old is not None:
                new = supply.fresh("p" if n.rule is R.TT else "a")
                kids = tuple(rename_in_node(c, old, new) for c in n.children)
                active = tuple(
                    locate(kid.conclusion,
                           [rename_in_sequent(c.conclusion[i], old, new) for i in n.active[k]])
                    for k, (c, kid) in enumerate(zip(n.children, kids))
                ) + (n.active[-1],)
                aux = n.aux
                if aux.eigen is not None:
                    aux = Aux(aux.formula, aux.term, new, aux.parts, aux.component)
                n = Node(n.rule, n.conclusion, kids, active, aux)
        return n.with_children([go(c) for c in n.children])

    return go(node)


# -------------------------------------------------------------- aux recovery

def _diff(a, b) -> list:
    return list((Counter(a) - Counter(b)).elements())


def full_aux(n: Node) -> Aux:
    """Recover an aux record from which the node's conclusion can be rebuilt forward."""
    rule = n.rule
    P = [[c.conclusion[i] for i in n.active[k]] for k, c in enumerate(n.children)]
    C = [n.conclusion[i] for i in n.active[-1]]
    p = P[0][0] if P and P[0] else None
    c = C[0]
    if rule is R.AXIOM:
        aux = Aux(formula=c.succedent)
    elif rule is R.EW:
        aux = Aux(component=c)
    elif rule in (R.EC, R.TT):
        aux = NO_AUX
    elif rule is R.IW_L:
        aux = Aux(formula=_diff(c.antecedent, p.antecedent)[0])
    elif rule is R.IW_R:
        aux = Aux(formula=c.succedent)
    elif rule is R.IC_L:
        aux = Aux(formula=_diff(p.antecedent, c.antecedent)[0])
    elif rule in (R.NEG_R, R.OR_R1, R.OR_R2, R.AND_R, R.IMPL_R):
        aux = Aux(formula=c.succedent)
    elif rule is R.EXISTS_R:
        aux = Aux(formula=c.succedent, term=match_instance(c.succedent.body, p.succedent)[1])
    elif rule is R.FORALL_R:
        aux = Aux(formula=c.succedent, eigen=eigenvariable(n))
    elif rule is R.CUT:
        aux = Aux(formula=p.succedent)
    elif rule is R.IMPL_L:
        aux = Aux(formula=_diff(c.antecedent, list(p.antecedent) + list(P[1][0].antecedent))[0])
    elif rule in (R.NEG_L, R.AND_L1, R.AND_L2, R.OR_L, R.OR_L_PRIME, R.OR_L_STAR):
        aux = Aux(formula=_diff(c.antecedent, p.antecedent)[0])
    elif rule is R.FORALL_L:
        f = _diff(c.antecedent, p.antecedent)[0]
        t = None
        for g in _diff(p.antecedent, c.antecedent):
            ok, t = match_instance(f.body, g)
            if ok:
                break
        aux = Aux(formula=f, term=t)
    elif rule in (R.EXISTS_L, R.EXISTS_L_STAR):
        f = _diff(c.antecedent, p.antecedent)[0]
        e = eigenvariable(n)
        if e is None:  # vacuous quantifier: any variable not in the conclusion works
            e = "_v"
        aux = Aux(formula=f, eigen=e)
    elif rule is R.CM:
        q = P[1][0]
        for c1, c2 in ((C[0], C[1]), (C[1], C[0])):
            if c1.succedent != p.succedent or c2.succedent != q.succedent:
                continue
            p1, k1 = Counter(p.antecedent), Counter(c1.antecedent)
            theta1 = Counter({f: min(p1[f], k1[f]) for f in p1})
            moved1 = sorted((p1 - theta1).elements())
            moved2 = sorted((k1 - theta1).elements())
            aux = Aux(parts=(tuple(moved1), tuple(moved2)))
            if _rebuilds(rule, P, C, aux):
                return aux
        raise TransformError("cannot recover cm parts")
    elif rule is R.SPLIT:
        for c1 in C:
            aux = Aux(parts=(tuple(c1.antecedent),))
            if _rebuilds(rule, P, C, aux):
                return aux
        raise TransformError("cannot recover split parts")
    else:  # pragma: no cover
        raise TransformError(f"no aux recovery for {rule}")
    if not _rebuilds(rule, P, C, aux):
        raise TransformError(f"aux recovery failed for {rule.value}")
    return aux


def _rebuilds(rule, P, C, aux) -> bool:
    try:
        return sorted(conclusion_components(rule, P, aux)) == sorted(C)
    except Exception:
        return False


def side_of(h: Hypersequent, comps: Sequence[Sequent]) -> list[Sequent]:
    rest = list(h.components)
    for c in comps:
        rest.remove(c)
    return rest


# ------------------------------------------------------------ pruning

def prune_component(node: Node, comp: Sequent) -> Optional[Node]:
    """A derivation of ``node``'s conclusion minus one copy of ``comp``, obtained by
    deleting the external weakening that introduced it; None if it was not weakened in."""
    h = node.conclusion.components
    for i, c in enumerate(h):
        if c == comp and (i == 0 or h[i - 1] != comp or not node.active or i in node.active[-1]):
            p = _prune_at(node, i)
            if p is not None:
                return p
    return None


def _prune_at(node: Node, i: int) -> Optional[Node]:
    act = node.active[-1] if node.active else ()
    if i in act:
        if node.rule is R.EW:
            return node.children[0]
        if node.rule is R.EC:
            child = node.children[0]
            j1, j2 = node.active[0]
            once = _prune_at(child, j2)
            if once is None:
                return None
            return prune_component(once, child.conclusion[j1])
        return None
    if not node.children:
        return None
    comp = node.conclusion[i]
    kids = []
    for p, c in enumerate(node.children):
        for k in range(len(c.conclusion)):
            if k in node.active[p] or c.conclusion[k] != comp:
                continue
            pruned = _prune_at(c, k)
            if pruned is not None:
                kids.append(pruned)
                break
        else:
            return None
    acts = [[c.conclusion[k] for k in node.active[p]] for p, c in enumerate(node.children)]
    return infer(node.rule, kids, acts, full_aux(node))


def prune_shared(keep: Node, keep_out: Sequence[Sequent], other: Node,
                 other_out: Sequence[Sequent]) -> tuple[Node, Node]:
    """Remove weakened-in side components of one derivation that the other also has,
    so that combining them does not duplicate those components."""
    s1 = Counter(keep.conclusion.components) - Counter(keep_out)
    s2 = Counter(other.conclusion.components) - Counter(other_out)
    for comp in list((s1 & s2).elements()):
        p = prune_component(other, comp)
        if p is not None:
            other = p
            continue
        p = prune_component(keep, comp)
        if p is not None:
            keep = p
    return keep, other


def drop_contractions(root: Node) -> Node:
    """Remove external contractions whose merged component was weakened in on one side."""
    memo: dict[int, Node] = {}
    for n in root.distinct():
        kids = [memo[id(c)] for c in n.children]
        new = n if all(k is c for k, c in zip(kids, n.children)) else n.with_children(kids)
        if new.rule is R.EC:
            for j in new.active[0]:
                p = _prune_at(new.children[0], j)
                if p is not None:
                    new = p
                    break
        memo[id(n)] = new
    return memo[id(root)]


# ------------------------------------------------------- dropping weakened formulas

_PRINCIPAL_SUCC = {R.NEG_R, R.OR_R1, R.OR_R2, R.AND_R, R.IMPL_R, R.FORALL_R, R.EXISTS_R, R.IW_R}


def _reduce(s: Sequent, req) -> Sequent:
    drop, succ = req
    rest = Counter(s.antecedent) - Counter(drop)
    return Sequent(tuple(rest.elements()), None if succ else s.succedent)


def _sub(bag, part) -> bool:
    return not (Counter(part) - Counter(bag))


def _split_between(items, first, second):
    """Assign each item to ``first`` while available, else ``second``; None if neither."""
    a, b = Counter(first), Counter(second)
    out1, out2 = [], []
    for g in items:
        if a[g] > 0:
            a[g] -= 1
            out1.append(g)
        elif b[g] > 0:
            b[g] -= 1
            out2.append(g)
        else:
            return None
    return out1, out2


def _merge(reqs: dict, i: int, drop, succ: bool) -> None:
    d0, s0 = reqs.get(i, ((), False))
    reqs[i] = (tuple(d0) + tuple(drop), s0 or succ)


def drop_formulas(node: Node, req: dict) -> Optional[Node]:
    """A derivation of ``node``'s conclusion with formula occurrences removed.

    ``req`` maps a component index to ``(antecedent formulas, drop succedent?)``.  Only
    occurrences that were introduced by weakening can be removed; otherwise None."""
    req = {i: (tuple(d), bool(s)) for i, (d, s) in req.items() if d or s}
    if not req:
        return node
    n = node
    rule = n.rule
    cact = n.active[-1] if n.active else ()
    kreq: list[dict] = [dict() for _ in n.children]
    aux = full_aux(n) if n.children else n.aux
    # side components
    for i, r in req.items():
        if i in cact:
            continue
        pos = [x for x in range(len(n.conclusion)) if x not in cact].index(i)
        for m, c in enumerate(n.children):
            psides = [x for x in range(len(c.conclusion)) if x not in n.active[m]]
            _merge(kreq[m], psides[pos], *r)
    act = {cact.index(i): r for i, r in req.items() if i in cact}
    if not act:
        kids = []
        for m, c in enumerate(n.children):
            k = drop_formulas(c, kreq[m])
            if k is None:
                return None
            kids.append(k)
        return _reinfer(n, kids, kreq, aux, req)
    if rule in (R.AXIOM, R.SPLIT, R.CUT, R.OR_L_STAR, R.EXISTS_L_STAR):
        return None
    if rule is R.OR_L_PRIME:
        r0, r1 = act.get(0, ((), False)), act.get(1, ((), False))
        if Counter(r0[0]) != Counter(r1[0]):
            return None
        _merge(kreq[0], n.active[0][0], r0[0], r0[1])
        _merge(kreq[1], n.active[1][0], r1[0], r1[1])
        return _finish(n, kreq, aux, req)
    if rule is R.CM:
        parts = [list(aux.parts[0]), list(aux.parts[1])]
        for q, (dq, sq) in act.items():
            # component q holds keep_q + moved_{1-q}
            prem_q = n.children[q].conclusion[n.active[q][0]]
            keep_q = list((Counter(prem_q.antecedent) - Counter(parts[q])).elements())
            split = _split_between(dq, keep_q, parts[1 - q])
            if split is None:
                return None
            from_keep, from_moved = split
            _merge(kreq[q], n.active[q][0], from_keep, sq)
            _merge(kreq[1 - q], n.active[1 - q][0], from_moved, False)
            for g in from_moved:
                parts[1 - q].remove(g)
        aux = Aux(aux.formula, aux.term, aux.eigen, (tuple(parts[0]), tuple(parts[1])), aux.component)
        return _finish(n, kreq, aux, req)
    if len(act) != 1:
        return None
    (d, s), = act.values()
    c = n.conclusion[cact[0]]
    if s and rule in _PRINCIPAL_SUCC:
        if rule is R.IW_R:
            _merge(kreq[0], n.active[0][0], d, False)
            return drop_formulas(n.children[0], kreq[0])
        return None
    f = aux.formula
    if rule is R.IW_L:
        d = list(d)
        if f in d:
            d.remove(f)
            _merge(kreq[0], n.active[0][0], d, s)
            return drop_formulas(n.children[0], kreq[0])
        _merge(kreq[0], n.active[0][0], d, s)
        return _finish(n, kreq, aux, req)
    if rule is R.IC_L:
        d = list(d)
        if f in d:
            d.append(f)
            _merge(kreq[0], n.active[0][0], d, s)
            return drop_formulas(n.children[0], kreq[0])
        _merge(kreq[0], n.active[0][0], d, s)
        return _finish(n, kreq, aux, req)
    if rule is R.EW:
        child = drop_formulas(n.children[0], kreq[0])
        if child is None:
            return None
        return infer(R.EW, [child], [[]], Aux(component=_reduce(c, (d, s))))
    if rule is R.EC:
        for j in n.active[0]:
            _merge(kreq[0], j, d, s)
        return _finish(n, kreq, aux, req)
    if rule is R.TT:
        a_i, b_i = n.active[0]
        a, b = n.children[0].conclusion[a_i], n.children[0].conclusion[b_i]
        psi = list((Counter(b.antecedent) - Counter([a.succedent])).elements())
        split = _split_between(d, a.antecedent, psi)
        if split is None:
            return None
        _merge(kreq[0], a_i, split[0], False)
        _merge(kreq[0], b_i, split[1], s)
        return _finish(n, kreq, aux, req)
    if rule is R.IMPL_L:
        g1 = n.children[0].conclusion[n.active[0][0]].antecedent
        g2 = list((Counter(n.children[1].conclusion[n.active[1][0]].antecedent) - Counter([f.right])).elements())
        split = _split_between(d, g2, g1)
        if split is None:
            return None
        _merge(kreq[1], n.active[1][0], split[0], s)
        _merge(kreq[0], n.active[0][0], split[1], False)
        return _finish(n, kreq, aux, req)
    principal = [f] if rule in (R.NEG_L, R.AND_L1, R.AND_L2, R.OR_L, R.FORALL_L, R.EXISTS_L) else []
    context = list((Counter(c.antecedent) - Counter(principal)).elements())
    if not _sub(context, d):
        return None
    for m in range(len(n.children)):
        _merge(kreq[m], n.active[m][0], d, s)
    return _finish(n, kreq, aux, req)


def _finish(n: Node, kreq: list[dict], aux: Aux, req: dict) -> Optional[Node]:
    kids = []
    for m, c in enumerate(n.children):
        k = drop_formulas(c, kreq[m])
        if k is None:
            return None
        kids.append(k)
    return _reinfer(n, kids, kreq, aux, req)


def _reinfer(n: Node, kids, kreq, aux: Aux, req: dict) -> Optional[Node]:
    acts = []
    for m, c in enumerate(n.children):
        acts.append([_reduce(c.conclusion[i], kreq[m][i]) if i in kreq[m] else c.conclusion[i]
                     for i in n.active[m]])
    try:
        new = infer(n.rule, kids, acts, aux)
    except RuleError:
        return None
    want = Hypersequent(tuple(_reduce(s, req[i]) if i in req else s
                              for i, s in enumerate(n.conclusion.components)))
    return new if new.conclusion == want else None
