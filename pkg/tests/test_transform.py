import pytest

from hifkit.calculus import HIF, HIF_MINUS, HIF_STAR, Aux, QUANTIFIER_RULES, RuleName as R
from hifkit.fixtures import FIXTURES, PROPOSITIONAL, fixture
from hifkit.proof import Derivation, axiom, check_derivation, infer, stats
from hifkit.randproof import random_derivation
from hifkit.semantics import (
    VALID, decide_propositional_hypersequent, sample_interpretations, satisfies,
    schema_of_hypersequents,
)
from hifkit.syntax import Prop, is_quantifier_free, occurs, parse_formula, parse_hypersequent, parse_sequent
from hifkit.transform import (
    BudgetExceeded, CutTrace, TransformError, TransformReport, atomize_axioms, cm_normalize,
    cut_eliminate, has_axiom_premise, identity, is_midhypersequent, midhypersequent,
    prune_weakened_variable, replace_or_left, reduce_cut, tt_eliminate, tt_reduce,
)
from hifkit.transform.base import NameSupply

import tt_cases
from cutgen import with_cuts

F = parse_formula
H = parse_hypersequent

QUANTIFIED = [n for n in FIXTURES if n not in PROPOSITIONAL and n != "split-cm-demo"]


def ok(d, root=None):
    assert check_derivation(d) == []
    if root is not None:
        assert d.conclusion == root


def count(d, rule):
    return stats(d).count(rule)


def sampled_valid(h, n=60):
    schema = schema_of_hypersequents([h], 2)
    return all(satisfies(i, h) for i in sample_interpretations(schema, 3, n, 8))


# ---------------------------------------------------------------- atomic axioms

def test_identity_of_conjunction_uses_atomic_axioms():
    n = identity(F("A & B"), NameSupply())
    ok(n, H("A & B => A & B"))
    leaves = [m for m in n.distinct() if m.rule is R.AXIOM]
    assert {m.conclusion for m in leaves} == {H("A => A"), H("B => B")}


def test_identity_of_quantified_formula():
    n = identity(F("forall x. exists y. R(x, y)"), NameSupply())
    ok(n, H("forall x. exists y. R(x, y) => forall x. exists y. R(x, y)"))


def test_atomize_keeps_atomic_axioms():
    d = Derivation(axiom(F("P(a)")))
    assert atomize_axioms(d).root is d.root
    d = fixture("D")
    assert atomize_axioms(d).root is d.root


@pytest.mark.parametrize("name", list(FIXTURES))
def test_atomize_fixtures(name):
    d = fixture(name)
    out = atomize_axioms(d)
    ok(out, d.conclusion)
    for n in out.root.distinct():
        if n.rule is R.AXIOM:
            f = n.conclusion[0].succedent
            assert not any(isinstance(f, c) for c in (type(F("A & B")), type(F("A | B")),
                                                     type(F("A -> B")), type(F("~A"))))


# ---------------------------------------------------------------- single cut

def test_reduce_cut_conjunction_example():
    # A & B => A  cut with  A => A | C  on A
    g = infer(R.AND_L1, [axiom(F("A"))], [[parse_sequent("A => A")]], Aux(formula=F("A & B")))
    d = infer(R.OR_R1, [axiom(F("A"))], [[parse_sequent("A => A")]], Aux(formula=F("A | C")))
    tr = CutTrace()
    out = reduce_cut(g, d, F("A"), trace=tr)
    ok(out, H("A & B => A | C"))
    assert count(out, R.CUT) == 0
    assert tr.decreasing and tr.ec_bound_holds


def test_reduce_cut_with_axiom_is_weakening():
    g = axiom(F("A -> B"))
    d = infer(R.IW_L, [axiom(F("C"))], [[parse_sequent("C => C")]], Aux(formula=F("A -> B")))
    out = reduce_cut(g, d, F("A -> B"))
    ok(out, H("A -> B, C => C"))


def test_reduce_cut_implication_principal():
    # the cut on A -> B between => A -> B || B => A and A, A -> B => B
    n4 = fixture("D").root.children[0].children[0].children[0].children[0]
    assert n4.conclusion == H("=> A -> B || B => A")
    dl = infer(R.IMPL_L, [axiom(F("A")), axiom(F("B"))],
               [[parse_sequent("A => A")], [parse_sequent("B => B")]], Aux(formula=F("A -> B")))
    tr = CutTrace()
    out = reduce_cut(n4, dl, F("A -> B"), trace=tr)
    ok(out, H("A => B || B => A"))
    assert tr.decreasing
    assert tr.ec_checks == [(0, 0)]


def test_reduce_cut_rejects_wrong_formula():
    with pytest.raises(TransformError):
        reduce_cut(axiom(F("A")), axiom(F("B")), F("A"))


def test_budget_is_enforced():
    d = with_cuts(fixture("D"), 2, seed=7)
    rep = TransformReport("cut-elim", stats(d))
    cut_eliminate(d, report=rep)
    assert rep.steps > 3
    with pytest.raises(BudgetExceeded):
        cut_eliminate(d, budget=3)


# ---------------------------------------------------------------- cut elimination

def _eliminated(d):
    rep = TransformReport("cut-elim", stats(d))
    out = cut_eliminate(d, report=rep)
    ok(out, d.conclusion)
    assert count(out, R.CUT) == 0
    assert all(p is None or m < p for m, p in rep.measure_trace)
    return out, rep


@pytest.mark.parametrize("name", [n for n in FIXTURES if n != "split-cm-demo"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_cut_elimination_on_spliced_fixtures(name, k):
    d = with_cuts(fixture(name), k, seed=100 * k)
    assert count(d, R.CUT) == k
    _, rep = _eliminated(d)
    assert rep.extra["cuts_eliminated"] >= k
    assert all(a <= b for a, b in rep.ec_checks)


def test_cut_free_input_is_unchanged():
    d = fixture("D")
    out = cut_eliminate(d)
    assert out.root is d.root


def test_stacked_cuts():
    d = with_cuts(fixture("D"), 2, seed=7)
    _, rep = _eliminated(d)
    assert len(rep.measure_trace) > 2
    assert rep.extra["measure_trace.decreasing"] is True


@pytest.mark.parametrize("seed", range(0, 40, 3))
def test_cut_elimination_on_random_derivations(seed):
    d = random_derivation(seed, HIF_STAR, min_cuts=1, quantifiers=bool(seed % 2))
    assert count(d, R.CUT) >= 1
    out, _ = _eliminated(d)
    assert out.config.allow_cut is False


def test_cut_elimination_rejects_bad_input():
    d = fixture("D")
    bad = Derivation(d.root, d.name, HIF.with_(allow_split=True))
    with pytest.raises(TransformError):
        cut_eliminate(Derivation(fixture("split-cm-demo").root, "x", bad.config))


def test_report_text():
    d = with_cuts(fixture("ax1"), 1, seed=3)
    rep = TransformReport("cut-elim", stats(d))
    cut_eliminate(d, report=rep)
    text = rep.to_text()
    assert "kind = cut-elim" in text
    assert f"measure_trace.length = {len(rep.measure_trace)}" in text
    assert "output.count.Cut" not in text


# ---------------------------------------------------------------- (∨⇒′)

@pytest.mark.parametrize("native", [True, False])
def test_replace_or_left(native):
    d = fixture("or-forall")
    assert count(d, R.OR_L) > 0
    out = replace_or_left(d, native=native)
    ok(out, d.conclusion)
    if native:
        assert count(out, R.OR_L) == 0
        assert count(out, R.OR_L_PRIME) == count(d, R.OR_L)
    else:
        assert count(out, R.OR_L_PRIME) == 0
        # each template adds a cm; templates copy their premises, so counts only grow
        assert count(out, R.CM) > count(d, R.CM) and count(out, R.OR_L) > 0


@pytest.mark.parametrize("name", PROPOSITIONAL)
def test_replace_or_left_on_fixtures(name):
    d = fixture(name)
    ok(replace_or_left(d), d.conclusion)


# ---------------------------------------------------------------- midhypersequent

def _structural_predicate(root, mid):
    """No quantifier inference at or above ``mid``, no propositional one below it."""
    above = list(mid.distinct())
    if any(n.rule in QUANTIFIER_RULES for n in above):
        return False
    if not all(is_quantifier_free(g) for s in mid.conclusion for g in s.formulas()):
        return False
    inside = {id(n) for n in above}
    for n in root.distinct():
        if id(n) not in inside and n.rule in (R.NEG_L, R.NEG_R, R.OR_L, R.OR_R1, R.OR_R2, R.AND_L1,
                                               R.AND_L2, R.AND_R, R.IMPL_L, R.IMPL_R, R.OR_L_PRIME):
            return False
    return True


def _by_id(root, ids):
    from hifkit.proof import number_nodes
    nums = number_nodes(root)
    return [n for n in root.distinct() if nums[id(n)] in ids]


def test_midhypersequent_prenex_demo():
    d = fixture("prenex-demo")
    assert stats(d).order > 0
    out, mids = midhypersequent(d)
    ok(out, d.conclusion)
    assert stats(out).order == 0
    assert mids
    for m in _by_id(out.root, mids):
        assert _structural_predicate(out.root, m)
        assert is_midhypersequent(out.root, m)


def test_midhypersequent_renaming():
    d = fixture("forall-rename")
    assert d.conclusion == H("forall x. P(x) => forall y. P(y)")
    out, mids = midhypersequent(d)
    [mid] = _by_id(out.root, mids)
    # eigenvariables are renamed apart, so the instance is P(v) => P(v) for a fresh v
    [c] = mid.conclusion
    assert c.antecedent == (c.succedent,) and c.succedent.pred == "P"
    assert _structural_predicate(out.root, mid)


def test_midhypersequent_propositional_proof():
    d = fixture("D")
    out, mids = midhypersequent(d)
    ok(out, d.conclusion)
    assert _by_id(out.root, mids)[0].conclusion == d.conclusion


def test_midhypersequent_needs_prenex():
    with pytest.raises(TransformError):
        midhypersequent(fixture("or-forall"))


# ---------------------------------------------------------------- density elimination

def test_prune_weakened_variable():
    n = infer(R.IW_L, [axiom(F("C"))], [[parse_sequent("C => C")]], Aux(formula=F("p")))
    n = infer(R.EW, [n], [[]], Aux(component=parse_sequent("A, p => B")))
    out = prune_weakened_variable(Derivation(n), "p")
    ok(out, H("A => B || C => C"))
    assert not occurs("p", out.conclusion)


def test_prune_rejects_both_sides():
    n = infer(R.EW, [axiom(F("A"))], [[]], Aux(component=parse_sequent("p => p")))
    with pytest.raises(TransformError):
        prune_weakened_variable(Derivation(n), "p")


def test_prune_rejects_derived_occurrence():
    n = infer(R.EW, [axiom(F("p"))], [[]], Aux(component=parse_sequent("A =>")))
    with pytest.raises(TransformError):
        prune_weakened_variable(Derivation(n), "p")


def test_prune_rejects_compound_occurrence():
    with pytest.raises(TransformError):
        prune_weakened_variable(Derivation(axiom(F("p & A"))), "p")


def test_tt_reduce_communication():
    # cm of p => p and A => A gives A => p || p => A; eliminating p yields A => A
    tt = fixture("tt-demo")
    premise = tt.root.children[0]
    out = tt_reduce(Derivation(premise, "x", HIF_MINUS), tt.root.aux.eigen)
    ok(out, tt.root.conclusion)


def test_tt_reduce_left_only():
    # no p-right component: every p-left occurrence was weakened in
    n = infer(R.IW_L, [axiom(F("A"))], [[parse_sequent("A => A")]], Aux(formula=F("p")))
    out = tt_reduce(Derivation(n, "x", HIF_MINUS), "p")
    ok(out, H("A => A"))


def test_tt_reduce_rejects_tt_inside():
    with pytest.raises(TransformError):
        tt_reduce(fixture("tt-demo"), "q")


def test_tt_eliminate_demo():
    d = fixture("tt-demo")
    out = tt_eliminate(d)
    ok(out, d.conclusion)
    assert count(out, R.TT) == 0


def test_tt_free_input_unchanged():
    d = fixture("D")
    out = tt_eliminate(d)
    assert out.root is d.root and count(out, R.TT) == 0


@pytest.mark.parametrize("case", tt_cases.CASES, ids=lambda c: c.__name__)
@pytest.mark.parametrize("stars", [False, True])
def test_tt_cases(case, stars):
    d = case()
    ok(d)
    rep = TransformReport("tt-elim", stats(d))
    out = tt_eliminate(d, stars=stars, report=rep)
    ok(out, d.conclusion)
    assert count(out, R.TT) == 0
    if stars and count(d, R.CUT) == 0:
        assert count(out, R.CUT) == 0
    if case.__name__ == "or_left_shared" and not stars:
        assert rep.cuts_introduced > 0


@pytest.mark.parametrize("seed", range(0, 60, 6))
def test_tt_eliminate_random(seed):
    d = random_derivation(seed, HIF, min_tt=1)
    if count(d, R.TT) == 0:
        pytest.skip("generator found no tt")
    out = tt_eliminate(d)
    ok(out, d.conclusion)
    assert count(out, R.TT) == 0


# ---------------------------------------------------------------- cm-normalization

def _all_cm_have_axiom_premise(d):
    return all(has_axiom_premise(n) for n in d.root.distinct() if n.rule is R.CM)


def test_cm_normalize_linearity_proof():
    d = fixture("D")
    out = cm_normalize(d)
    ok(out, d.conclusion)
    assert out.config.allow_split
    assert count(out, R.CM) > 0 and _all_cm_have_axiom_premise(out)


def test_cm_free_input_unchanged():
    d = fixture("interderiv-2")
    assert count(d, R.CM) == 0
    assert cm_normalize(d).root is d.root


def test_cm_normalize_nested():
    d = fixture("split-cm-demo")
    out = cm_normalize(d)
    ok(out, d.conclusion)
    assert _all_cm_have_axiom_premise(out)


def test_has_axiom_premise():
    d = fixture("D")
    cm = next(n for n in d.root.distinct() if n.rule is R.CM)
    assert not has_axiom_premise(cm)   # premises A => A with A a nullary atom, not a variable
    p = Prop("p")
    n = infer(R.CM, [axiom(p), axiom(F("A"))], [[parse_sequent("p => p")], [parse_sequent("A => A")]],
              Aux(parts=((p,), (F("A"),))))
    assert has_axiom_premise(n)


# ---------------------------------------------------------------- semantic preservation

@pytest.mark.parametrize("name", PROPOSITIONAL)
def test_outputs_stay_valid(name):
    d = fixture(name)
    for out in (cm_normalize(d), replace_or_left(d), tt_eliminate(d),
                cut_eliminate(with_cuts(d, 1, seed=5))):
        assert decide_propositional_hypersequent(out.conclusion) is VALID


@pytest.mark.parametrize("name", QUANTIFIED)
def test_quantified_outputs_sample_valid(name):
    d = fixture(name)
    out = cut_eliminate(with_cuts(d, 1, seed=9))
    ok(out, d.conclusion)
    assert sampled_valid(out.conclusion)
