"""Seeded random derivations, built forward from axioms.

Every inference is produced by the forward constructor and re-checked, so the
generator only ever yields correct derivations.  It is used by the test-suite
and by ``hifkit selftest``.
"""

from __future__ import annotations

import random
from typing import Callable, Optional

from .calculus import HIF, HIF_STAR, Aux, CalculusConfig, RuleError, RuleName, check_instance
from .proof import Derivation, Node, axiom, infer
from .syntax import (
    And, Atom, Exists, Forall, Formula, FreeVar, Impl, Neg, Or, Prop, Sequent,
    abstract, formula_terms, free_vars, occurs,
)

R = RuleName

_ATOMS = ("A", "B", "C", "D")
_PREDS = ("P", "Q")
_VARS = ("a", "b")


class _Gen:
    def __init__(self, rng: random.Random, config: CalculusConfig, quantifiers: bool,
                 max_nodes: int):
        self.rng = rng
        self.config = config
        self.quantifiers = quantifiers
        self.max_nodes = max_nodes
        self.pool: list[Node] = []
        self.sizes: dict[int, int] = {}
        self.tt_count = 0

    # ---------------------------------------------------------- formulas
    def atom(self) -> Formula:
        if self.quantifiers and self.rng.random() < 0.5:
            return Atom(self.rng.choice(_PREDS), (FreeVar(self.rng.choice(_VARS)),))
        return Atom(self.rng.choice(_ATOMS))

    def formula(self, depth: int = 1) -> Formula:
        if depth <= 0 or self.rng.random() < 0.5:
            return self.atom()
        k = self.rng.randrange(4)
        if k == 0:
            return Neg(self.formula(depth - 1))
        cls = (And, Or, Impl)[k - 1]
        return cls(self.formula(depth - 1), self.formula(depth - 1))

    # ---------------------------------------------------------- pool
    def add(self, n: Optional[Node]) -> Optional[Node]:
        if n is None:
            return None
        size = 1 + sum(self.sizes.get(id(c), c.size()) for c in n.children)
        if size > self.max_nodes:
            return None
        try:
            check_instance(n.instance(), self.config)
        except RuleError:
            return None
        self.sizes[id(n)] = size
        self.pool.append(n)
        return n

    def pick(self) -> Node:
        # favour recent (larger) derivations
        k = len(self.pool)
        i = min(k - 1, int(k * (1 - self.rng.random() ** 2)))
        return self.pool[i]

    def comp(self, n: Node) -> Sequent:
        return self.rng.choice(n.conclusion.components)

    # ---------------------------------------------------------- helpers
    def pad(self, n1: Node, c1: Sequent, n2: Node, c2: Sequent) -> tuple[Node, Node]:
        """Weaken both derivations so their side hypersequents coincide."""
        s1 = list(n1.conclusion.components)
        s1.remove(c1)
        s2 = list(n2.conclusion.components)
        s2.remove(c2)
        for s in list(s1):
            if s in s2:
                s2.remove(s)
                s1.remove(s)
        for s in s2:
            n1 = infer(R.EW, [n1], [[]], Aux(component=s))
        for s in s1:
            n2 = infer(R.EW, [n2], [[]], Aux(component=s))
        return n1, n2

    def weaken_to(self, n: Node, c: Sequent, ante) -> tuple[Node, Sequent]:
        have = list(c.antecedent)
        for f in ante:
            if f in have:
                have.remove(f)
            else:
                n = infer(R.IW_L, [n], [[c]], Aux(formula=f))
                c = Sequent(c.antecedent + (f,), c.succedent)
        return n, c

    # ---------------------------------------------------------- steps
    def step(self) -> Optional[Node]:
        rng = self.rng
        if not self.pool or rng.random() < 0.12:
            return axiom(self.atom() if rng.random() < 0.7 else self.formula(1))
        n = self.pick()
        c = self.comp(n)
        choices = [self.s_iwl, self.s_iwr, self.s_icl, self.s_ew, self.s_ec, self.s_negl,
                   self.s_negr, self.s_orr, self.s_andl, self.s_implr, self.s_andr,
                   self.s_orl, self.s_impll, self.s_cm]
        if self.config.allow_cut:
            choices += [self.s_cut, self.s_cut]
        if self.config.allow_tt:
            choices.append(self.s_tt)
        if self.quantifiers:
            choices += [self.s_forallr, self.s_foralll, self.s_existsr, self.s_existsl] * 2
        fn = rng.choice(choices)
        try:
            return fn(n, c)
        except (RuleError, ValueError, IndexError):
            return None

    def s_iwl(self, n, c):
        return infer(R.IW_L, [n], [[c]], Aux(formula=self.formula(1)))

    def s_iwr(self, n, c):
        if c.succedent is not None:
            return None
        return infer(R.IW_R, [n], [[c]], Aux(formula=self.formula(1)))

    def s_icl(self, n, c):
        dup = [f for f in set(c.antecedent) if c.antecedent.count(f) > 1]
        if not dup:
            return None
        return infer(R.IC_L, [n], [[c]], Aux(formula=self.rng.choice(sorted(dup))))

    def s_ew(self, n, c):
        other = self.comp(self.pick())
        return infer(R.EW, [n], [[]], Aux(component=other))

    def s_ec(self, n, c):
        if n.conclusion.components.count(c) < 2:
            # make a duplicate first
            n = infer(R.EW, [n], [[]], Aux(component=c))
            n = self.add(n)
            if n is None:
                return None
        return infer(R.EC, [n], [[c, c]])

    def s_negl(self, n, c):
        if c.succedent is None:
            return None
        return infer(R.NEG_L, [n], [[c]], Aux(formula=Neg(c.succedent)))

    def s_negr(self, n, c):
        if c.succedent is not None or not c.antecedent:
            return None
        f = self.rng.choice(c.antecedent)
        return infer(R.NEG_R, [n], [[c]], Aux(formula=Neg(f)))

    def s_orr(self, n, c):
        if c.succedent is None:
            return None
        x = self.formula(1)
        if self.rng.random() < 0.5:
            return infer(R.OR_R1, [n], [[c]], Aux(formula=Or(c.succedent, x)))
        return infer(R.OR_R2, [n], [[c]], Aux(formula=Or(x, c.succedent)))

    def s_andl(self, n, c):
        if not c.antecedent:
            return None
        f = self.rng.choice(c.antecedent)
        x = self.formula(1)
        if self.rng.random() < 0.5:
            return infer(R.AND_L1, [n], [[c]], Aux(formula=And(f, x)))
        return infer(R.AND_L2, [n], [[c]], Aux(formula=And(x, f)))

    def s_implr(self, n, c):
        if c.succedent is None:
            return None
        if c.antecedent and self.rng.random() < 0.8:
            f = self.rng.choice(c.antecedent)
        else:
            f = self.formula(1)
            n = infer(R.IW_L, [n], [[c]], Aux(formula=f))
            c = Sequent(c.antecedent + (f,), c.succedent)
        return infer(R.IMPL_R, [n], [[c]], Aux(formula=Impl(f, c.succedent)))

    def _second(self, want: Callable[[Sequent], bool]):
        for _ in range(8):
            m = self.pick()
            cands = [s for s in m.conclusion.components if want(s)]
            if cands:
                return m, self.rng.choice(cands)
        return None, None

    def s_andr(self, n, c):
        if c.succedent is None:
            return None
        m, d = self._second(lambda s: s.succedent is not None)
        if m is None:
            return None
        n, c = self.weaken_to(n, c, d.antecedent)
        m, d = self.weaken_to(m, d, c.antecedent)
        n, m = self.pad(n, c, m, d)
        return infer(R.AND_R, [n, m], [[c], [d]], Aux(formula=And(c.succedent, d.succedent)))

    def s_orl(self, n, c):
        if not c.antecedent:
            return None
        b = self.rng.choice(c.antecedent)
        m, d = self._second(lambda s: bool(s.antecedent) and s.succedent == c.succedent)
        if m is None:
            return None
        e = self.rng.choice(d.antecedent)
        rest_c = list(c.antecedent)
        rest_c.remove(b)
        rest_d = list(d.antecedent)
        rest_d.remove(e)
        n, c = self.weaken_to(n, c, [b] + rest_d)
        m, d = self.weaken_to(m, d, [e] + rest_c)
        n, m = self.pad(n, c, m, d)
        return infer(R.OR_L, [n, m], [[c], [d]], Aux(formula=Or(b, e)))

    def s_impll(self, n, c):
        if c.succedent is None:
            return None
        m, d = self._second(lambda s: bool(s.antecedent))
        if m is None:
            return None
        e = self.rng.choice(d.antecedent)
        n, m = self.pad(n, c, m, d)
        return infer(R.IMPL_L, [n, m], [[c], [d]], Aux(formula=Impl(c.succedent, e)))

    def s_cm(self, n, c):
        m, d = self._second(lambda s: True)
        n, m = self.pad(n, c, m, d)
        moved1 = tuple(f for f in c.antecedent if self.rng.random() < 0.5)
        moved2 = tuple(f for f in d.antecedent if self.rng.random() < 0.5)
        return infer(R.CM, [n, m], [[c], [d]], Aux(parts=(moved1, moved2)))

    def s_cut(self, n, c):
        if not c.antecedent:
            return None
        a = self.rng.choice(c.antecedent)
        left = [(m, s) for m in self.pool[-60:] for s in m.conclusion.components if s.succedent == a]
        if left and self.rng.random() < 0.8:
            m, d = self.rng.choice(left)
        else:
            m = axiom(a)
            d = m.conclusion[0]
        m, n = self.pad(m, d, n, c)
        return infer(R.CUT, [m, n], [[d], [c]], Aux(formula=a))

    def s_tt(self, n, c):
        # Φ => p | p, Ψ => Σ built from two axioms by communication, then weakened
        k = 1
        while occurs(f"t{k}", n.conclusion):
            k += 1
        p = Prop(f"t{k}")
        b = c.succedent if c.succedent is not None else self.atom()
        g = infer(R.CM, [axiom(p), axiom(b)], [[Sequent((p,), p)], [Sequent((b,), b)]],
                  Aux(parts=((p,), (b,))))
        left, right = Sequent((b,), p), Sequent((p,), b)
        for f in self.rng.sample(list(c.antecedent), k=min(2, len(c.antecedent))):
            tgt = left if self.rng.random() < 0.5 else right
            g = infer(R.IW_L, [g], [[tgt]], Aux(formula=f))
            if tgt is left:
                left = Sequent(left.antecedent + (f,), p)
            else:
                right = Sequent(right.antecedent + (f,), b)
        self.tt_count += 1
        return infer(R.TT, [g], [[left, right]])

    # ------------------------------------------------------- quantifiers
    def s_forallr(self, n, c):
        if c.succedent is None:
            return None
        vs = sorted(free_vars(c.succedent))
        rest = list(n.conclusion.components)
        rest.remove(c)
        ok = [v for v in vs if not any(occurs(v, f) for f in c.antecedent)
              and not any(occurs(v, s) for s in rest)]
        if not ok:
            return None
        v = self.rng.choice(ok)
        f = Forall(abstract(c.succedent, FreeVar(v)), "x")
        return infer(R.FORALL_R, [n], [[c]], Aux(formula=f, eigen=v))

    def s_foralll(self, n, c):
        cands = [f for f in c.antecedent if free_vars(f)]
        if not cands:
            return None
        g = self.rng.choice(cands)
        v = self.rng.choice(sorted(free_vars(g)))
        f = Forall(abstract(g, FreeVar(v)), "x")
        return infer(R.FORALL_L, [n], [[c]], Aux(formula=f, term=FreeVar(v)))

    def s_existsr(self, n, c):
        if c.succedent is None or not free_vars(c.succedent):
            return None
        v = self.rng.choice(sorted(free_vars(c.succedent)))
        f = Exists(abstract(c.succedent, FreeVar(v)), "x")
        return infer(R.EXISTS_R, [n], [[c]], Aux(formula=f, term=FreeVar(v)))

    def s_existsl(self, n, c):
        cands = [f for f in c.antecedent if free_vars(f)]
        if not cands:
            return None
        g = self.rng.choice(cands)
        v = self.rng.choice(sorted(free_vars(g)))
        rest_seq = list(c.antecedent)
        rest_seq.remove(g)
        rest = list(n.conclusion.components)
        rest.remove(c)
        if any(occurs(v, f) for f in rest_seq) or any(occurs(v, s) for s in rest) or \
                (c.succedent is not None and occurs(v, c.succedent)):
            return None
        f = Exists(abstract(g, FreeVar(v)), "x")
        return infer(R.EXISTS_L, [n], [[c]], Aux(formula=f, eigen=v))


def random_derivation(seed: int, config: CalculusConfig = HIF, *, max_nodes: int = 40,
                      steps: int = 60, quantifiers: bool = False, min_cuts: int = 0,
                      min_tt: int = 0) -> Derivation:
    """A correct random derivation with at most ``max_nodes`` inference nodes."""
    rng = random.Random(seed)
    for attempt in range(200):
        g = _Gen(rng, config, quantifiers, max_nodes)
        for _ in range(steps):
            g.add(g.step())
        if not g.pool:
            continue
        best = max(g.pool, key=lambda n: (
            _count(n, R.CUT) >= min_cuts and _count(n, R.TT) >= min_tt, g.sizes[id(n)]))
        if _count(best, R.CUT) >= min_cuts and _count(best, R.TT) >= min_tt:
            return Derivation(best, f"random-{seed}", config)
    raise RuntimeError("could not generate a derivation with the requested features")


def _count(n: Node, rule: RuleName) -> int:
    return sum(1 for m in n.walk() if m.rule is rule)
