"""Golden derivations: the worked examples plus hand-built exercises and demos."""

from __future__ import annotations

from typing import Callable

from .calculus import HIF, HIF_MINUS, Aux, CalculusConfig, RuleName
from .proof import Derivation, Node, axiom, infer
from .syntax import FreeVar, parse_formula, parse_sequent, parse_term

R = RuleName
F = parse_formula
S = parse_sequent


def _ax(text: str) -> Node:
    return axiom(F(text))


def _ew(child: Node, component: str) -> Node:
    return infer(R.EW, [child], [[]], Aux(component=S(component)))


def _cm(left: Node, lact: str, lmoved: str, right: Node, ract: str, rmoved: str) -> Node:
    moved1 = tuple(F(x) for x in lmoved.split(",") if x.strip())
    moved2 = tuple(F(x) for x in rmoved.split(",") if x.strip())
    return infer(R.CM, [left, right], [[S(lact)], [S(ract)]], Aux(parts=(moved1, moved2)))


def _one(rule: RuleName, child: Node, act: str, formula: str | None = None, **kw) -> Node:
    aux = Aux(formula=F(formula) if formula else None, **kw)
    return infer(rule, [child], [[S(act)]], aux)


def _two(rule: RuleName, left: Node, lact: str, right: Node, ract: str,
         formula: str | None = None) -> Node:
    return infer(rule, [left, right], [[S(lact)], [S(ract)]],
                 Aux(formula=F(formula) if formula else None))


def _ec(child: Node, act: str) -> Node:
    return infer(R.EC, [child], [[S(act), S(act)]])


def fixture_d() -> Derivation:
    n = _cm(_ax("A"), "A => A", "A", _ax("B"), "B => B", "B")      # A => B | B => A
    n = _one(R.IMPL_R, n, "A => B", "A -> B")
    n = _one(R.IMPL_R, n, "B => A", "B -> A")
    n = _one(R.OR_R1, n, "=> A -> B", "(A -> B) | (B -> A)")
    n = _one(R.OR_R2, n, "=> B -> A", "(A -> B) | (B -> A)")
    n = _ec(n, "=> (A -> B) | (B -> A)")
    return Derivation(n, "D", HIF_MINUS)


def fixture_or_forall() -> Derivation:
    a = FreeVar("a")
    left = _cm(_ax("A(a)"), "A(a) => A(a)", "A(a)", _ax("B"), "B => B", "B")  # B => A(a) | A(a) => B
    weak = _ew(_ax("B"), "B => A(a)")                                       # B => A(a) | B => B
    n = _two(R.OR_L, weak, "B => B", left, "A(a) => B", "B | A(a)")
    weak2 = _ew(_ax("A(a)"), "B | A(a) => B")
    n = _two(R.OR_L, n, "B => A(a)", weak2, "A(a) => A(a)", "B | A(a)")
    n = _one(R.FORALL_L, n, "B | A(a) => B", "forall x. B | A(x)", term=a)
    n = _one(R.FORALL_L, n, "B | A(a) => A(a)", "forall x. B | A(x)", term=a)
    n = _one(R.FORALL_R, n, "forall x. B | A(x) => A(a)", "forall x. A(x)", eigen="a")
    n = _one(R.OR_R2, n, "forall x. B | A(x) => forall x. A(x)", "B | forall x. A(x)")
    n = _one(R.OR_R1, n, "forall x. B | A(x) => B", "B | forall x. A(x)")
    n = _ec(n, "forall x. B | A(x) => B | forall x. A(x)")
    return Derivation(n, "or-forall", HIF_MINUS, (
        "Or-L premises are listed left-disjunct first; the figure draws them in the other order.",
    ))


def fixture_forall_impl() -> Derivation:
    a = FreeVar("a")
    n = _cm(_ax("A(a)"), "A(a) => A(a)", "A(a)", _ax("D"), "D => D", "D")   # D => A(a) | A(a) => D
    n = _one(R.IMPL_R, n, "A(a) => D", "A(a) -> D")
    n = _one(R.EXISTS_R, n, "=> A(a) -> D", "exists x. A(x) -> D", term=a)
    n = _one(R.FORALL_R, n, "D => A(a)", "forall x. A(x)", eigen="a")
    weak = _ew(_ax("C"), "=> exists x. A(x) -> D")
    n = _two(R.IMPL_L, n, "D => forall x. A(x)", weak, "C => C", "(forall x. A(x)) -> C")
    n = _one(R.IMPL_R, n, "(forall x. A(x)) -> C, D => C", "D -> C")
    n = _one(R.IW_L, n, "=> exists x. A(x) -> D", "(forall x. A(x)) -> C")
    goal = "(exists x. A(x) -> D) | (D -> C)"
    n = _one(R.OR_R1, n, "(forall x. A(x)) -> C => exists x. A(x) -> D", goal)
    n = _one(R.OR_R2, n, "(forall x. A(x)) -> C => D -> C", goal)
    n = _ec(n, f"(forall x. A(x)) -> C => {goal}")
    return Derivation(n, "forall-impl", HIF_MINUS, (
        "The double inference line hides an internal weakening, made explicit as IW-L.",
        "Figure caption reads 'derivation on of'; the inference tree is transcribed as drawn.",
    ))


def fixture_ax1() -> Derivation:
    n = _two(R.IMPL_L, _ax("A"), "A => A", _ax("B"), "B => B", "A -> B")   # A -> B, A => B
    n = _cm(n, "A -> B, A => B", "A -> B", _ax("A"), "A => A", "A")         # A, A => B | A -> B => A
    n = _one(R.IC_L, n, "A, A => B", "A")
    weak = _ew(_ax("B"), "A => B")
    n = _two(R.IMPL_L, n, "A -> B => A", weak, "B => B", "A -> B")          # A => B | A->B, A->B => B
    n = _one(R.IC_L, n, "A -> B, A -> B => B", "A -> B")
    n = _one(R.IMPL_R, n, "A => B", "A -> B")
    n = _one(R.IMPL_R, n, "A -> B => B", "(A -> B) -> B")
    goal = "(A -> B) | ((A -> B) -> B)"
    n = _one(R.OR_R1, n, "=> A -> B", goal)
    n = _one(R.OR_R2, n, "=> (A -> B) -> B", goal)
    n = _ec(n, "=> " + goal)
    return Derivation(n, "ax1", HIF_MINUS)


def fixture_ax2() -> Derivation:
    x = "(A -> B) -> B"
    n = _cm(_ax("A"), "A => A", "A", _ax("B"), "B => B", "B")              # A => B | B => A
    n = _one(R.IMPL_R, n, "A => B", "A -> B")
    weak = _ew(_ax("B"), "B => A")
    n = _two(R.IMPL_L, n, "=> A -> B", weak, "B => B", x)                 # B => A | X => B
    n = _one(R.IW_L, n, "B => A", x)
    n = _one(R.IMPL_R, n, f"{x}, B => A", "B -> A")
    goal = "(B -> A) | B"
    n = _one(R.OR_R1, n, f"{x} => B -> A", goal)
    n = _one(R.OR_R2, n, f"{x} => B", goal)
    n = _ec(n, f"{x} => {goal}")
    return Derivation(n, "ax2", HIF_MINUS)


def fixture_ax3() -> Derivation:
    y = "(A & B) -> C"
    n = _cm(_ax("A"), "A => A", "A", _ax("B"), "B => B", "B")              # A => B | B => A
    n = _two(R.AND_R, _ew(_ax("A"), "B => A"), "A => A", n, "A => B")      # A => A&B | B => A
    n = _two(R.AND_R, n, "B => A", _ew(_ax("B"), "A => A & B"), "B => B")   # A => A&B | B => A&B
    n = _two(R.IMPL_L, n, "A => A & B", _ew(_ax("C"), "B => A & B"), "C => C", y)
    n = _two(R.IMPL_L, n, "B => A & B", _ew(_ax("C"), f"{y}, A => C"), "C => C", y)
    n = _one(R.IMPL_R, n, f"{y}, A => C", "A -> C")
    n = _one(R.IMPL_R, n, f"{y}, B => C", "B -> C")
    goal = "(A -> C) | (B -> C)"
    n = _one(R.OR_R1, n, f"{y} => A -> C", goal)
    n = _one(R.OR_R2, n, f"{y} => B -> C", goal)
    n = _ec(n, f"{y} => {goal}")
    return Derivation(n, "ax3", HIF_MINUS)


def _or_split(a: str, b: str) -> Node:
    """A|B => A || A|B => B."""
    n = _cm(_ax(a), f"{a} => {a}", a, _ax(b), f"{b} => {b}", b)           # b => a | a => b
    n = _two(R.OR_L, _ew(_ax(a), f"{a} => {b}"), f"{a} => {a}", n, f"{b} => {a}", f"{a} | {b}")
    n = _two(R.OR_L, n, f"{a} => {b}", _ew(_ax(b), f"{a} | {b} => {a}"), f"{b} => {b}",
             f"{a} | {b}")
    return n


def fixture_ax4() -> Derivation:
    z = "A -> (B | C)"
    n = _or_split("B", "C")                                               # B|C => B | B|C => C
    n = _two(R.IMPL_L, _ew(_ax("A"), "B | C => C"), "A => A", n, "B | C => B", z)
    n = _two(R.IMPL_L, _ew(_ax("A"), f"{z}, A => B"), "A => A", n, "B | C => C", z)
    n = _one(R.IMPL_R, n, f"{z}, A => B", "A -> B")
    n = _one(R.IMPL_R, n, f"{z}, A => C", "A -> C")
    goal = "(A -> B) | (A -> C)"
    n = _one(R.OR_R1, n, f"{z} => A -> B", goal)
    n = _one(R.OR_R2, n, f"{z} => A -> C", goal)
    n = _ec(n, f"{z} => {goal}")
    return Derivation(n, "ax4", HIF_MINUS)


def fixture_interderiv_1() -> Derivation:
    return Derivation(_or_split("A", "B"), "interderiv-1", HIF_MINUS)


def fixture_interderiv_2() -> Derivation:
    n = _two(R.IMPL_L, _ax("A"), "A => A", _ax("B"), "B => B", "A -> B")
    return Derivation(n, "interderiv-2", HIF_MINUS)


def fixture_interderiv_3() -> Derivation:
    return Derivation(_one(R.AND_L1, _ax("A"), "A => A", "A & B"), "interderiv-3", HIF_MINUS)


def fixture_interderiv_4() -> Derivation:
    return Derivation(_one(R.OR_R1, _ax("A"), "A => A", "A | B"), "interderiv-4", HIF_MINUS)


def fixture_tt_demo() -> Derivation:
    """A & B => A | C through the density rule on a fresh p."""
    n = _cm(_ax("A"), "A => A", "A", _ax("p"), "p => p", "p")              # p => A | A => p
    n = _one(R.AND_L1, n, "A => p", "A & B")
    n = _one(R.OR_R1, n, "p => A", "A | C")
    n = infer(R.TT, [n], [[S("A & B => p"), S("p => A | C")]], Aux(eigen="p"))
    return Derivation(n, "tt-demo", HIF_MINUS)


def fixture_split_cm_demo() -> Derivation:
    from .transform.cm import cm_normalize

    n = _cm(_ax("A"), "A => A", "A", _ax("B"), "B => B", "B")
    return cm_normalize(Derivation(n, "split-cm-demo", HIF))


def fixture_prenex_demo() -> Derivation:
    """Prenex end hypersequent; Forall-R sits above Or-L and Or-R."""
    a = FreeVar("a")

    def branch(side: str) -> Node:
        n = _ax("P(a)")
        n = _one(R.FORALL_L, n, "P(a) => P(a)", "forall x. P(x)", term=a)
        n = _one(R.IW_L, n, "forall x. P(x) => P(a)", side)
        n = _one(R.OR_R1, n, f"{side}, forall x. P(x) => P(a)", "P(a) | Q")
        return _one(R.FORALL_R, n, f"{side}, forall x. P(x) => P(a) | Q",
                    "forall x. P(x) | Q", eigen="a")

    n = _two(R.OR_L, branch("B"), "B, forall x. P(x) => forall x. P(x) | Q",
             branch("C"), "C, forall x. P(x) => forall x. P(x) | Q", "B | C")
    return Derivation(n, "prenex-demo", HIF_MINUS)


def fixture_forall_rename() -> Derivation:
    """forall x. P(x) => forall y. P(y) via Forall-L then Forall-R."""
    n = _one(R.FORALL_L, _ax("P(a)"), "P(a) => P(a)", "forall x. P(x)", term=FreeVar("a"))
    n = _one(R.FORALL_R, n, "forall x. P(x) => P(a)", "forall y. P(y)", eigen="a")
    return Derivation(n, "forall-rename", HIF_MINUS)


FIXTURES: dict[str, Callable[[], Derivation]] = {
    "D": fixture_d,
    "or-forall": fixture_or_forall,
    "forall-impl": fixture_forall_impl,
    "ax1": fixture_ax1,
    "ax2": fixture_ax2,
    "ax3": fixture_ax3,
    "ax4": fixture_ax4,
    "interderiv-1": fixture_interderiv_1,
    "interderiv-2": fixture_interderiv_2,
    "interderiv-3": fixture_interderiv_3,
    "interderiv-4": fixture_interderiv_4,
    "tt-demo": fixture_tt_demo,
    "split-cm-demo": fixture_split_cm_demo,
    "prenex-demo": fixture_prenex_demo,
    "forall-rename": fixture_forall_rename,
}

PROPOSITIONAL = ("D", "ax1", "ax2", "ax3", "ax4",
                 "interderiv-1", "interderiv-2", "interderiv-3", "interderiv-4")


def fixture(name: str) -> Derivation:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def fixture_config(name: str) -> CalculusConfig:
    return fixture(name).config
