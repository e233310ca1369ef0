"""HIF rule catalog and single-step rule-instance checking."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .syntax import (
    And, Atom, BoundVar, Exists, Forall, FreeVar, Func, Hypersequent, Impl, Neg, Or, Prop,
    Sequent, Formula, Term, _Binary, _Quant, multiset_minus, occurs, substitute,
)


class RuleName(str, enum.Enum):
    AXIOM = "Axiom"
    IW_L = "IW-L"
    IW_R = "IW-R"
    IC_L = "IC-L"
    EW = "EW"
    EC = "EC"
    NEG_L = "Neg-L"
    NEG_R = "Neg-R"
    OR_L = "Or-L"
    OR_R1 = "Or-R1"
    OR_R2 = "Or-R2"
    AND_L1 = "And-L1"
    AND_L2 = "And-L2"
    AND_R = "And-R"
    IMPL_L = "Impl-L"
    IMPL_R = "Impl-R"
    FORALL_L = "Forall-L"
    FORALL_R = "Forall-R"
    EXISTS_L = "Exists-L"
    EXISTS_R = "Exists-R"
    CUT = "Cut"
    CM = "Cm"
    TT = "Tt"
    SPLIT = "Split"
    OR_L_PRIME = "OrL-Prime"
    OR_L_STAR = "OrL-Star"
    EXISTS_L_STAR = "ExistsL-Star"

    def __str__(self):
        return self.value

    @classmethod
    def lookup(cls, name: str) -> "RuleName":
        for r in cls:
            if r.value.lower() == name.lower():
                return r
        raise KeyError(f"unknown rule {name!r}")


R = RuleName

# (number of premises, active components per premise, active components in conclusion)
# None = variable (star rules)
_SHAPE = {
    R.AXIOM: (0, (), 1),
    R.IW_L: (1, (1,), 1), R.IW_R: (1, (1,), 1), R.IC_L: (1, (1,), 1),
    R.EW: (1, (0,), 1), R.EC: (1, (2,), 1),
    R.NEG_L: (1, (1,), 1), R.NEG_R: (1, (1,), 1),
    R.OR_L: (2, (1, 1), 1), R.OR_R1: (1, (1,), 1), R.OR_R2: (1, (1,), 1),
    R.AND_L1: (1, (1,), 1), R.AND_L2: (1, (1,), 1), R.AND_R: (2, (1, 1), 1),
    R.IMPL_L: (2, (1, 1), 1), R.IMPL_R: (1, (1,), 1),
    R.FORALL_L: (1, (1,), 1), R.FORALL_R: (1, (1,), 1),
    R.EXISTS_L: (1, (1,), 1), R.EXISTS_R: (1, (1,), 1),
    R.CUT: (2, (1, 1), 1), R.CM: (2, (1, 1), 2), R.TT: (1, (2,), 1),
    R.SPLIT: (1, (1,), 2), R.OR_L_PRIME: (2, (1, 1), 2),
    R.OR_L_STAR: (2, None, None), R.EXISTS_L_STAR: (1, None, None),
}

DESCRIPTIONS = {
    R.AXIOM: "A => A",
    R.IW_L: "G | Γ => Δ  /  G | A, Γ => Δ",
    R.IW_R: "G | Γ =>  /  G | Γ => A",
    R.IC_L: "G | A, A, Γ => Δ  /  G | A, Γ => Δ",
    R.EW: "G  /  G | Γ => Δ",
    R.EC: "G | Γ => Δ | Γ => Δ  /  G | Γ => Δ",
    R.NEG_L: "G | Γ => A  /  G | ~A, Γ =>",
    R.NEG_R: "G | A, Γ =>  /  G | Γ => ~A",
    R.OR_L: "G | A, Γ => Δ ;  G | B, Γ => Δ  /  G | A|B, Γ => Δ",
    R.OR_R1: "G | Γ => A  /  G | Γ => A|B",
    R.OR_R2: "G | Γ => B  /  G | Γ => A|B",
    R.AND_L1: "G | A, Γ => Δ  /  G | A&B, Γ => Δ",
    R.AND_L2: "G | B, Γ => Δ  /  G | A&B, Γ => Δ",
    R.AND_R: "G | Γ => A ;  G | Γ => B  /  G | Γ => A&B",
    R.IMPL_L: "G | Γ1 => A ;  G | B, Γ2 => Δ  /  G | A->B, Γ1, Γ2 => Δ",
    R.IMPL_R: "G | A, Γ => B  /  G | Γ => A->B",
    R.FORALL_L: "G | A(t), Γ => Δ  /  G | forall x.A(x), Γ => Δ",
    R.FORALL_R: "G | Γ => A(a)  /  G | Γ => forall x.A(x)   (a eigenvariable)",
    R.EXISTS_L: "G | A(a), Γ => Δ  /  G | exists x.A(x), Γ => Δ   (a eigenvariable)",
    R.EXISTS_R: "G | Γ => A(t)  /  G | Γ => exists x.A(x)",
    R.CUT: "G | Γ => A ;  G | A, Π => Λ  /  G | Γ, Π => Λ",
    R.CM: "G | Θ1, Θ1' => Ξ1 ;  G | Θ2, Θ2' => Ξ2  /  G | Θ1, Θ2' => Ξ1 | Θ1', Θ2 => Ξ2",
    R.TT: "G | Φ => p | p, Ψ => Σ  /  G | Φ, Ψ => Σ   (p eigenvariable)",
    R.SPLIT: "G | Γ, Γ' => Δ  /  G | Γ => Δ | Γ' => Δ",
    R.OR_L_PRIME: "G | A, Γ => Δ1 ;  G | B, Γ => Δ2  /  G | A|B, Γ => Δ1 | A|B, Γ => Δ2",
    R.OR_L_STAR: "G | A, Γi => Δi (i=1..n) ;  G | B, Γi => Δi  /  G | A|B, Γi => Δi",
    R.EXISTS_L_STAR: "G | A(a), Γi => Δi (i=1..n)  /  G | exists x.A(x), Γi => Δi",
}

LOGICAL_PROPOSITIONAL = frozenset({
    R.NEG_L, R.NEG_R, R.OR_L, R.OR_R1, R.OR_R2, R.AND_L1, R.AND_L2, R.AND_R,
    R.IMPL_L, R.IMPL_R, R.OR_L_PRIME, R.OR_L_STAR,
})
QUANTIFIER_RULES = frozenset({
    R.FORALL_L, R.FORALL_R, R.EXISTS_L, R.EXISTS_R, R.EXISTS_L_STAR,
})
STRUCTURAL_RULES = frozenset({R.IW_L, R.IW_R, R.IC_L, R.EW, R.EC, R.CM, R.SPLIT, R.TT, R.CUT})
EIGEN_RULES = frozenset({R.FORALL_R, R.EXISTS_L, R.EXISTS_L_STAR, R.TT})


# ----------------------------------------------------------------- config

@dataclass(frozen=True)
class CalculusConfig:
    allow_cut: bool = True
    allow_tt: bool = True
    allow_split: bool = False
    allow_or_prime: bool = False
    allow_star_rules: bool = False

    def enabled(self, rule: RuleName) -> bool:
        if rule is R.CUT:
            return self.allow_cut
        if rule is R.TT:
            return self.allow_tt
        if rule is R.SPLIT:
            return self.allow_split
        if rule is R.OR_L_PRIME:
            return self.allow_or_prime
        if rule in (R.OR_L_STAR, R.EXISTS_L_STAR):
            return self.allow_star_rules
        return True

    def with_(self, **kw) -> "CalculusConfig":
        return replace(self, **kw)

    @property
    def name(self) -> str:
        for key, cfg in PRESETS.items():
            if cfg == self:
                return key
        flags = [k for k in ("cut", "tt", "split", "or_prime", "star_rules")
                 if getattr(self, "allow_" + k)]
        return f"custom({','.join(flags)})"

    @classmethod
    def parse(cls, text: str) -> "CalculusConfig":
        text = text.strip().lower()
        if text in PRESETS:
            return PRESETS[text]
        if text.startswith("custom(") and text.endswith(")"):
            flags = {f.strip().replace("-", "_") for f in text[7:-1].split(",") if f.strip()}
            known = {"cut", "tt", "split", "or_prime", "star_rules", "stars"}
            bad = flags - known
            if bad:
                raise ValueError(f"unknown config flags: {sorted(bad)}")
            return cls(
                allow_cut="cut" in flags, allow_tt="tt" in flags,
                allow_split="split" in flags, allow_or_prime="or_prime" in flags,
                allow_star_rules=bool(flags & {"star_rules", "stars"}),
            )
        raise ValueError(f"unknown config {text!r}")


HIF = CalculusConfig(True, True)
HIF_MINUS = CalculusConfig(False, True)
HIF_STAR = CalculusConfig(True, False)
PRESETS = {"hif": HIF, "hif-minus": HIF_MINUS, "hif-star": HIF_STAR}


def rule_catalog(config: CalculusConfig) -> list[tuple[RuleName, Optional[int], str]]:
    return [(r, _SHAPE[r][0], DESCRIPTIONS[r]) for r in RuleName if config.enabled(r)]


# ----------------------------------------------------------------- errors

class RuleError(Exception):
    pass


class RuleDisabled(RuleError):
    pass


class SideMismatch(RuleError):
    pass


class ShapeMismatch(RuleError):
    pass


class EigenvariableViolation(RuleError):
    pass


class ArityMismatch(RuleError):
    pass


# --------------------------------------------------------------- instance

@dataclass(frozen=True)
class Aux:
    formula: Optional[Formula] = None     # principal, weakened, or cut formula
    term: Optional[Term] = None
    eigen: Optional[str] = None
    parts: Optional[tuple] = None         # apply_rule only: moved/split multisets
    component: Optional[Sequent] = None   # apply_rule only: EW component


NO_AUX = Aux()


@dataclass(frozen=True)
class RuleInstance:
    rule: RuleName
    premises: tuple
    conclusion: Hypersequent
    active: tuple          # one index tuple per premise, then the conclusion's
    aux: Aux = NO_AUX


def _counter(fs) -> Counter:
    return Counter(fs)


def match_instance(body: Formula, target: Formula) -> tuple[bool, Optional[Term]]:
    """Find t with substitute(body, t) == target.  Returns (matched, t); t is None
    when the bound variable does not occur."""
    found: list = []

    def mt(a, b, depth) -> bool:
        if isinstance(a, BoundVar) and a.index == depth:
            if any(isinstance(x, BoundVar) for x in _walk_term(b)):
                return False
            if found:
                return found[0] == b
            found.append(b)
            return True
        if isinstance(a, BoundVar):
            idx = a.index - 1 if a.index > depth else a.index
            return isinstance(b, BoundVar) and b.index == idx
        if isinstance(a, Func):
            return (isinstance(b, Func) and a.name == b.name and len(a.args) == len(b.args)
                    and all(mt(x, y, depth) for x, y in zip(a.args, b.args)))
        return a == b

    def mf(a, b, depth) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, Atom):
            return (a.pred == b.pred and len(a.args) == len(b.args)
                    and all(mt(x, y, depth) for x, y in zip(a.args, b.args)))
        if isinstance(a, Neg):
            return mf(a.sub, b.sub, depth)
        if isinstance(a, _Binary):
            return mf(a.left, b.left, depth) and mf(a.right, b.right, depth)
        if isinstance(a, _Quant):
            return mf(a.body, b.body, depth + 1)
        return a == b

    ok = mf(body, target, 0)
    return ok, (found[0] if ok and found else None)


def _walk_term(t):
    yield t
    if isinstance(t, Func):
        for a in t.args:
            yield from _walk_term(a)


def _require(cond: bool, msg: str, exc=ShapeMismatch):
    if not cond:
        raise exc(msg)


def _same_ctx(s: Sequent, t: Sequent) -> bool:
    return s.antecedent == t.antecedent


def _principal_candidates(fs, cls, aux: Aux):
    if aux.formula is not None:
        return [aux.formula] if isinstance(aux.formula, cls) and aux.formula in fs else []
    seen = []
    for f in fs:
        if isinstance(f, cls) and f not in seen:
            seen.append(f)
    return seen


def _left_one(prem: Sequent, conc: Sequent, new_ante: Formula, principal: Formula) -> bool:
    """prem = new_ante, Γ => Δ and conc = principal, Γ => Δ."""
    if prem.succedent != conc.succedent:
        return False
    g1 = multiset_minus(prem.antecedent, [new_ante])
    g2 = multiset_minus(conc.antecedent, [principal])
    return g1 is not None and g2 is not None and sorted(g1) == sorted(g2)


_SUCC_PRINCIPAL = frozenset({R.NEG_R, R.OR_R1, R.OR_R2, R.AND_R, R.IMPL_R, R.FORALL_R, R.EXISTS_R})


def _check_shape(rule: RuleName, P: list[list[Sequent]], C: list[Sequent], aux: Aux,
                 conclusion: Hypersequent) -> None:
    if rule is R.AXIOM:
        c = C[0]
        _require(len(c.antecedent) == 1 and c.succedent == c.antecedent[0],
                 "axiom must be A => A")
        return
    if rule is R.EW:
        return
    if rule is R.EC:
        _require(P[0][0] == P[0][1] == C[0], "ec needs two copies of the conclusion component")
        return
    if rule is R.CM:
        p1, p2 = P[0][0], P[1][0]
        c1, c2 = C
        _require(c1.succedent == p1.succedent and c2.succedent == p2.succedent,
                 "cm succedents do not match")
        _require(_counter(c1.antecedent) + _counter(c2.antecedent)
                 == _counter(p1.antecedent) + _counter(p2.antecedent),
                 "cm antecedents are not a recombination of the premises")
        return
    if rule is R.SPLIT:
        p = P[0][0]
        c1, c2 = C
        _require(c1.succedent == p.succedent == c2.succedent, "split succedents differ")
        _require(_counter(c1.antecedent) + _counter(c2.antecedent) == _counter(p.antecedent),
                 "split antecedents do not partition the premise")
        return
    if rule is R.TT:
        a, b = P[0]
        c = C[0]
        _require(isinstance(a.succedent, Prop), "tt: first active premise must be Φ => p")
        pv = a.succedent
        if aux.eigen is not None:
            _require(pv.name == aux.eigen, "tt: eigenvariable differs from annotation")
        psi = multiset_minus(b.antecedent, [pv])
        _require(psi is not None, "tt: second active premise lacks p on the left")
        _require(c.succedent == b.succedent, "tt: succedent mismatch")
        _require(sorted(list(a.antecedent) + psi) == list(c.antecedent), "tt: Φ, Ψ mismatch")
        _require(not occurs(pv.name, conclusion),
                 f"tt: {pv.name} occurs in the conclusion", EigenvariableViolation)
        return
    if rule is R.CUT:
        p1, p2 = P[0][0], P[1][0]
        c = C[0]
        a = p1.succedent
        _require(a is not None, "cut: left premise has empty succedent")
        if aux.formula is not None:
            _require(aux.formula == a, "cut formula annotation mismatch")
        pi = multiset_minus(p2.antecedent, [a])
        _require(pi is not None, "cut: right premise lacks the cut formula")
        _require(c.succedent == p2.succedent, "cut: succedent mismatch")
        _require(sorted(list(p1.antecedent) + pi) == list(c.antecedent), "cut: context mismatch")
        return
    if rule is R.OR_L_PRIME:
        p1, p2 = P[0][0], P[1][0]
        c1, c2 = C
        for f in _principal_candidates(c1.antecedent, Or, aux):
            if (_left_one(p1, c1, f.left, f) and _left_one(p2, c2, f.right, f)
                    and multiset_minus(c1.antecedent, [f]) is not None
                    and c1.antecedent == c2.antecedent):
                return
        raise ShapeMismatch("OrL-Prime shape mismatch")
    if rule is R.OR_L_STAR:
        _require(len(P[0]) == len(P[1]) == len(C) >= 1, "OrL-Star: active counts differ",
                 ArityMismatch)
        for f in _principal_candidates(C[0].antecedent, Or, aux):
            if all(_left_one(a, c, f.left, f) and _left_one(b, c, f.right, f)
                   for a, b, c in zip(P[0], P[1], C)):
                return
        raise ShapeMismatch("OrL-Star shape mismatch")
    if rule is R.EXISTS_L_STAR:
        _require(len(P[0]) == len(C) >= 1, "ExistsL-Star: active counts differ", ArityMismatch)
        for f in _principal_candidates(C[0].antecedent, Exists, aux):
            eig = _eigen_for(f.body, P[0][0].antecedent, aux)
            if eig is None:
                continue
            inst = substitute(f.body, FreeVar(eig))
            if all(_left_one(a, c, inst, f) for a, c in zip(P[0], C)):
                _require(not occurs(eig, conclusion),
                         f"eigenvariable {eig} occurs in the conclusion", EigenvariableViolation)
                return
        raise ShapeMismatch("ExistsL-Star shape mismatch")

    # single active component in premise(s) and conclusion
    c = C[0]
    p = P[0][0]
    if rule in _SUCC_PRINCIPAL and aux.formula is not None:
        _require(aux.formula == c.succedent, f"{rule}: principal formula annotation mismatch")
    if rule is R.IW_L:
        extra = multiset_minus(c.antecedent, p.antecedent)
        _require(extra is not None and len(extra) == 1 and c.succedent == p.succedent,
                 "iw-l: conclusion must add exactly one antecedent formula")
        if aux.formula is not None:
            _require(extra[0] == aux.formula, "iw-l: weakened formula mismatch")
    elif rule is R.IW_R:
        _require(p.succedent is None and c.succedent is not None and _same_ctx(p, c),
                 "iw-r: premise succedent must be empty and contexts equal")
        if aux.formula is not None:
            _require(c.succedent == aux.formula, "iw-r: weakened formula mismatch")
    elif rule is R.IC_L:
        extra = multiset_minus(p.antecedent, c.antecedent)
        _require(extra is not None and len(extra) == 1 and extra[0] in c.antecedent
                 and c.succedent == p.succedent, "ic-l: premise must have one extra copy")
    elif rule is R.NEG_L:
        _require(c.succedent is None and p.succedent is not None
                 and sorted(list(p.antecedent) + [Neg(p.succedent)]) == list(c.antecedent),
                 "neg-l shape mismatch")
    elif rule is R.NEG_R:
        _require(isinstance(c.succedent, Neg) and p.succedent is None
                 and sorted(list(c.antecedent) + [c.succedent.sub]) == list(p.antecedent),
                 "neg-r shape mismatch")
    elif rule in (R.OR_R1, R.OR_R2):
        _require(isinstance(c.succedent, Or) and _same_ctx(p, c), "or-r shape mismatch")
        want = c.succedent.left if rule is R.OR_R1 else c.succedent.right
        _require(p.succedent == want, "or-r disjunct mismatch")
    elif rule in (R.AND_L1, R.AND_L2):
        for f in _principal_candidates(c.antecedent, And, aux):
            if _left_one(p, c, f.left if rule is R.AND_L1 else f.right, f):
                return
        raise ShapeMismatch("and-l shape mismatch")
    elif rule is R.IMPL_R:
        _require(isinstance(c.succedent, Impl) and p.succedent == c.succedent.right
                 and sorted(list(c.antecedent) + [c.succedent.left]) == list(p.antecedent),
                 "impl-r shape mismatch")
    elif rule is R.OR_L:
        q = P[1][0]
        for f in _principal_candidates(c.antecedent, Or, aux):
            if _left_one(p, c, f.left, f) and _left_one(q, c, f.right, f):
                return
        raise ShapeMismatch("or-l shape mismatch")
    elif rule is R.AND_R:
        q = P[1][0]
        _require(isinstance(c.succedent, And) and _same_ctx(p, c) and _same_ctx(q, c)
                 and p.succedent == c.succedent.left and q.succedent == c.succedent.right,
                 "and-r shape mismatch")
    elif rule is R.IMPL_L:
        q = P[1][0]
        for f in _principal_candidates(c.antecedent, Impl, aux):
            if p.succedent != f.left or q.succedent != c.succedent:
                continue
            g2 = multiset_minus(q.antecedent, [f.right])
            if g2 is None:
                continue
            if sorted([f] + list(p.antecedent) + g2) == list(c.antecedent):
                return
        raise ShapeMismatch("impl-l shape mismatch")
    elif rule is R.FORALL_L:
        for f in _principal_candidates(c.antecedent, Forall, aux):
            rest = multiset_minus(c.antecedent, [f])
            if p.succedent != c.succedent:
                continue
            for g in set(p.antecedent):
                ok, t = match_instance(f.body, g)
                if not ok or (aux.term is not None and t is not None and t != aux.term):
                    continue
                if sorted(multiset_minus(p.antecedent, [g])) == sorted(rest):
                    return
        raise ShapeMismatch("forall-l shape mismatch")
    elif rule is R.EXISTS_R:
        _require(isinstance(c.succedent, Exists) and _same_ctx(p, c) and p.succedent is not None,
                 "exists-r shape mismatch")
        ok, t = match_instance(c.succedent.body, p.succedent)
        _require(ok and (aux.term is None or t is None or t == aux.term),
                 "exists-r instance mismatch")
    elif rule is R.FORALL_R:
        _require(isinstance(c.succedent, Forall) and _same_ctx(p, c) and p.succedent is not None,
                 "forall-r shape mismatch")
        eig = _eigen_for(c.succedent.body, [p.succedent], aux)
        _require(eig is not None, "forall-r: premise is not an instance at a free variable")
        _require(not occurs(eig, conclusion), f"eigenvariable {eig} occurs in the conclusion",
                 EigenvariableViolation)
    elif rule is R.EXISTS_L:
        for f in _principal_candidates(c.antecedent, Exists, aux):
            eig = _eigen_for(f.body, p.antecedent, aux)
            if eig is None:
                continue
            if _left_one(p, c, substitute(f.body, FreeVar(eig)), f):
                _require(not occurs(eig, conclusion),
                         f"eigenvariable {eig} occurs in the conclusion", EigenvariableViolation)
                return
        raise ShapeMismatch("exists-l shape mismatch")
    else:  # pragma: no cover
        raise ShapeMismatch(f"unhandled rule {rule}")


def _eigen_for(body: Formula, candidates, aux: Aux) -> Optional[str]:
    if aux.eigen is not None:
        inst = substitute(body, FreeVar(aux.eigen))
        return aux.eigen if inst in candidates else None
    for g in candidates:
        ok, t = match_instance(body, g)
        if ok and isinstance(t, FreeVar):
            return t.name
    return None


def check_instance(inst: RuleInstance, config: CalculusConfig) -> None:
    """Raise a :class:`RuleError` unless ``inst`` is a correct instance under ``config``."""
    rule = inst.rule
    if not config.enabled(rule):
        raise RuleDisabled(f"{rule} is disabled in {config.name}")
    npre, pcounts, ccount = _SHAPE[rule]
    if len(inst.premises) != npre or len(inst.active) != npre + 1:
        raise ArityMismatch(f"{rule} expects {npre} premises")
    for k, idx in enumerate(inst.active):
        h = inst.conclusion if k == npre else inst.premises[k]
        if len(set(idx)) != len(idx) or any(not 0 <= i < len(h) for i in idx):
            raise ArityMismatch(f"bad active indices {idx} for {h}")
    if pcounts is not None:
        if tuple(len(a) for a in inst.active[:npre]) != pcounts or len(inst.active[-1]) != ccount:
            raise ArityMismatch(f"{rule}: wrong number of active components")
    else:
        n = len(inst.active[-1])
        if n < 1 or any(len(a) != n for a in inst.active[:npre]):
            raise ArityMismatch(f"{rule}: active component counts differ")
    if rule is R.AXIOM:
        if len(inst.conclusion) != 1:
            raise ShapeMismatch("axiom hypersequent has exactly one component")
    else:
        side = sorted(_side(inst.conclusion, inst.active[-1]))
        for k in range(npre):
            if sorted(_side(inst.premises[k], inst.active[k])) != side:
                raise SideMismatch(f"side hypersequent of premise {k + 1} differs from conclusion")
    P = [[inst.premises[k][i] for i in inst.active[k]] for k in range(npre)]
    C = [inst.conclusion[i] for i in inst.active[-1]]
    _check_shape(rule, P, C, inst.aux, inst.conclusion)


def _side(h: Hypersequent, idx) -> list[Sequent]:
    drop = set(idx)
    return [c for i, c in enumerate(h.components) if i not in drop]


def instance_ok(inst: RuleInstance, config: CalculusConfig) -> bool:
    try:
        check_instance(inst, config)
    except RuleError:
        return False
    return True


# ------------------------------------------------------------ forward use

def locate(h: Hypersequent, sequents: Sequence[Sequent]) -> tuple[int, ...]:
    """Distinct indices in ``h`` holding ``sequents`` (first free match each)."""
    used: list[int] = []
    for s in sequents:
        for i, c in enumerate(h.components):
            if i not in used and c == s:
                used.append(i)
                break
        else:
            raise ShapeMismatch(f"component {s} not found in {h}")
    return tuple(used)


def _seq(ante, succ=None) -> Sequent:
    return Sequent(tuple(ante), succ)


def conclusion_components(rule: RuleName, P: list[list[Sequent]], aux: Aux) -> list[Sequent]:
    """Active conclusion components produced from the active premise components."""
    f = aux.formula
    if rule is R.AXIOM:
        return [_seq([f], f)]
    if rule is R.EW:
        _require(aux.component is not None, "ew needs aux.component")
        return [aux.component]
    if rule is R.EC:
        _require(P[0][0] == P[0][1], "ec: components differ")
        return [P[0][0]]
    p = P[0][0] if P and P[0] else None
    if rule is R.IW_L:
        return [_seq(list(p.antecedent) + [f], p.succedent)]
    if rule is R.IW_R:
        _require(p.succedent is None, "iw-r: succedent not empty")
        return [_seq(p.antecedent, f)]
    if rule is R.IC_L:
        rest = multiset_minus(p.antecedent, [f])
        _require(rest is not None and f in rest, "ic-l: fewer than two copies")
        return [_seq(rest, p.succedent)]
    if rule is R.NEG_L:
        return [_seq(list(p.antecedent) + [Neg(p.succedent)], None)]
    if rule is R.NEG_R:
        rest = multiset_minus(p.antecedent, [f.sub])
        _require(rest is not None, "neg-r: missing formula")
        return [_seq(rest, f)]
    if rule in (R.OR_R1, R.OR_R2, R.EXISTS_R):
        return [_seq(p.antecedent, f)]
    if rule is R.AND_R:
        return [_seq(p.antecedent, And(p.succedent, P[1][0].succedent))]
    if rule is R.IMPL_R:
        rest = multiset_minus(p.antecedent, [f.left])
        _require(rest is not None, "impl-r: missing antecedent")
        return [_seq(rest, f)]
    if rule in (R.AND_L1, R.AND_L2):
        sub = f.left if rule is R.AND_L1 else f.right
        rest = multiset_minus(p.antecedent, [sub])
        _require(rest is not None, "and-l: missing formula")
        return [_seq(rest + [f], p.succedent)]
    if rule is R.OR_L:
        rest = multiset_minus(p.antecedent, [f.left])
        _require(rest is not None, "or-l: missing formula")
        return [_seq(rest + [f], p.succedent)]
    if rule is R.IMPL_L:
        q = P[1][0]
        g2 = multiset_minus(q.antecedent, [f.right])
        _require(g2 is not None, "impl-l: missing formula")
        return [_seq([f] + list(p.antecedent) + g2, q.succedent)]
    if rule is R.FORALL_L:
        t = aux.term
        inst = substitute(f.body, t) if t is not None else None
        if inst is None:
            for g in p.antecedent:
                ok, _ = match_instance(f.body, g)
                if ok:
                    inst = g
                    break
        rest = multiset_minus(p.antecedent, [inst])
        _require(rest is not None, "forall-l: instance not found")
        return [_seq(rest + [f], p.succedent)]
    if rule is R.FORALL_R:
        return [_seq(p.antecedent, f)]
    if rule is R.EXISTS_L:
        inst = substitute(f.body, FreeVar(aux.eigen))
        rest = multiset_minus(p.antecedent, [inst])
        _require(rest is not None, "exists-l: instance not found")
        return [_seq(rest + [f], p.succedent)]
    if rule is R.CUT:
        q = P[1][0]
        a = p.succedent
        pi = multiset_minus(q.antecedent, [a])
        _require(pi is not None, "cut: right premise lacks cut formula")
        return [_seq(list(p.antecedent) + pi, q.succedent)]
    if rule is R.CM:
        # parts = (Θ1', Θ2'): the formulas each premise hands to the other side
        q = P[1][0]
        moved1, moved2 = aux.parts
        keep1 = multiset_minus(p.antecedent, moved1)
        keep2 = multiset_minus(q.antecedent, moved2)
        _require(keep1 is not None and keep2 is not None, "cm: moved formulas not present")
        return [_seq(keep1 + list(moved2), p.succedent), _seq(list(moved1) + keep2, q.succedent)]
    if rule is R.SPLIT:
        (part,) = aux.parts
        rest = multiset_minus(p.antecedent, part)
        _require(rest is not None, "split: part not present")
        return [_seq(part, p.succedent), _seq(rest, p.succedent)]
    if rule is R.TT:
        a, b = P[0]
        pv = a.succedent
        psi = multiset_minus(b.antecedent, [pv])
        _require(psi is not None, "tt: missing p")
        return [_seq(list(a.antecedent) + psi, b.succedent)]
    if rule is R.OR_L_PRIME:
        q = P[1][0]
        rest1 = multiset_minus(p.antecedent, [f.left])
        _require(rest1 is not None, "or-l': missing formula")
        return [_seq(rest1 + [f], p.succedent), _seq(rest1 + [f], q.succedent)]
    if rule is R.OR_L_STAR:
        out = []
        for a in P[0]:
            rest = multiset_minus(a.antecedent, [f.left])
            _require(rest is not None, "or-l*: missing formula")
            out.append(_seq(rest + [f], a.succedent))
        return out
    if rule is R.EXISTS_L_STAR:
        inst = substitute(f.body, FreeVar(aux.eigen))
        out = []
        for a in P[0]:
            rest = multiset_minus(a.antecedent, [inst])
            _require(rest is not None, "exists-l*: missing instance")
            out.append(_seq(rest + [f], a.succedent))
        return out
    raise ShapeMismatch(f"unhandled rule {rule}")  # pragma: no cover


def build_instance(rule: RuleName, premises: Sequence[Hypersequent], active: Sequence[Sequence[int]],
                   aux: Aux = NO_AUX) -> RuleInstance:
    """Assemble the instance whose conclusion is determined by premises, actives and aux."""
    premises = tuple(premises)
    npre = _SHAPE[rule][0]
    if len(premises) != npre or len(active) != npre:
        raise ArityMismatch(f"{rule} expects {npre} premises")
    P = [[premises[k][i] for i in active[k]] for k in range(npre)]
    comps = conclusion_components(rule, P, aux)
    if npre:
        side = _side(premises[0], active[0])
    else:
        side = []
    conclusion = Hypersequent(tuple(side) + tuple(comps))
    cidx = locate(conclusion, comps)
    return RuleInstance(rule, premises, conclusion, tuple(tuple(a) for a in active) + (cidx,), aux)


def apply_rule(rule: RuleName, premises: Sequence[Hypersequent], aux: Aux = NO_AUX,
               active: Sequence[Sequence[int]] = (), config: CalculusConfig | None = None
               ) -> Hypersequent:
    """Forward constructor: the conclusion of ``rule`` applied to ``premises``."""
    inst = build_instance(rule, premises, active, aux)
    check_instance(inst, config or CalculusConfig(True, True, True, True, True))
    return inst.conclusion
