import pytest

from hifkit.calculus import (
    HIF, HIF_MINUS, HIF_STAR, ArityMismatch, Aux, CalculusConfig, EigenvariableViolation,
    RuleDisabled, RuleInstance, RuleName as R, ShapeMismatch, SideMismatch, apply_rule,
    build_instance, check_instance, instance_ok, locate, rule_catalog,
)
from hifkit.proof import Node
from hifkit.randproof import random_derivation
from hifkit.semantics import sample_interpretations, satisfies, schema_of_hypersequents
from hifkit.syntax import Hypersequent, parse_formula, parse_hypersequent, parse_sequent

ALL = CalculusConfig(True, True, True, True, True)


def H(text):
    return parse_hypersequent(text)


def act(h, *texts):
    return locate(h, [parse_sequent(t) for t in texts])


def inst(rule, premises, pact, conclusion, cact, **aux):
    prem = tuple(H(p) for p in premises)
    conc = H(conclusion)
    active = tuple(act(h, *a) for h, a in zip(prem, pact)) + (act(conc, *cact),)
    return RuleInstance(rule, prem, conc, active, Aux(**aux))


# ---------------------------------------------------------------- presets

def test_presets():
    assert HIF.allow_cut and HIF.allow_tt
    assert not HIF_MINUS.allow_cut and HIF_MINUS.allow_tt
    assert HIF_STAR.allow_cut and not HIF_STAR.allow_tt
    assert HIF.name == "hif" and HIF_MINUS.name == "hif-minus" and HIF_STAR.name == "hif-star"
    assert CalculusConfig.parse("custom(cut,tt,split)") == HIF.with_(allow_split=True)
    assert CalculusConfig.parse(HIF.with_(allow_split=True).name) == HIF.with_(allow_split=True)
    with pytest.raises(ValueError):
        CalculusConfig.parse("custom(bogus)")


def test_catalog():
    names = lambda cfg: {r for r, _, _ in rule_catalog(cfg)}
    assert {R.CUT, R.TT} <= names(HIF)
    assert R.TT not in names(HIF_STAR)
    assert R.CUT not in names(HIF_MINUS)
    stars = names(HIF.with_(allow_star_rules=True))
    assert {R.OR_L_STAR, R.EXISTS_L_STAR} <= stars
    assert not {R.OR_L_STAR, R.EXISTS_L_STAR, R.SPLIT, R.OR_L_PRIME} & names(HIF)


def test_rule_names_are_case_insensitive():
    assert R.lookup("orl-prime") is R.OR_L_PRIME
    with pytest.raises(KeyError):
        R.lookup("Weakening")


# ---------------------------------------------------------------- checking

def test_communication_gives_linearity_components():
    i = inst(R.CM, ["A => A", "B => B"], [["A => A"], ["B => B"]],
             "A => B || B => A", ["B => A", "A => B"])
    check_instance(i, HIF)


def test_communication_wrong_recombination():
    i = inst(R.CM, ["A => A", "B => B"], [["A => A"], ["B => B"]],
             "A => A || A => B", ["A => A", "A => B"])
    with pytest.raises(ShapeMismatch):
        check_instance(i, HIF)


def test_tt_eigenvariable():
    ok = inst(R.TT, ["A => p || p, B => C"], [["A => p", "p, B => C"]], "A, B => C", ["A, B => C"],
              eigen="p")
    check_instance(ok, HIF)
    bad = inst(R.TT, ["A => p || p, B => p | C"], [["A => p", "p, B => p | C"]],
               "A, B => p | C", ["A, B => p | C"], eigen="p")
    with pytest.raises(EigenvariableViolation):
        check_instance(bad, HIF)


def test_forall_right_eigenvariable():
    ok = inst(R.FORALL_R, ["B => P(a)"], [["B => P(a)"]], "B => forall x. P(x)",
              ["B => forall x. P(x)"], eigen="a")
    check_instance(ok, HIF)
    bad = inst(R.FORALL_R, ["P(a) => P(a)"], [["P(a) => P(a)"]], "P(a) => forall x. P(x)",
               ["P(a) => forall x. P(x)"], eigen="a")
    with pytest.raises(EigenvariableViolation):
        check_instance(bad, HIF)


def test_cut_disabled_in_minus():
    i = inst(R.CUT, ["A => B", "B => C"], [["A => B"], ["B => C"]], "A => C", ["A => C"],
             formula=parse_formula("B"))
    check_instance(i, HIF)
    with pytest.raises(RuleDisabled):
        check_instance(i, HIF_MINUS)


def test_side_mismatch():
    i = inst(R.IW_L, ["A => A || C =>"], [["A => A"]], "A, B => A || D =>", ["A, B => A"],
             formula=parse_formula("B"))
    with pytest.raises(SideMismatch):
        check_instance(i, HIF)


def test_arity_mismatch():
    i = RuleInstance(R.CUT, (H("A => B"),), H("A => B"), ((0,), (0,)))
    with pytest.raises(ArityMismatch):
        check_instance(i, HIF)


def test_axiom_shape():
    check_instance(RuleInstance(R.AXIOM, (), H("A => A"), ((0,),)), HIF)
    with pytest.raises(ShapeMismatch):
        check_instance(RuleInstance(R.AXIOM, (), H("A => B"), ((0,),)), HIF)


def test_impl_left_splits_context():
    i = inst(R.IMPL_L, ["C => A", "B, D => E"], [["C => A"], ["B, D => E"]],
             "A -> B, C, D => E", ["A -> B, C, D => E"], formula=parse_formula("A -> B"))
    check_instance(i, HIF)


def test_iw_right_needs_empty_succedent():
    i = inst(R.IW_R, ["A => B"], [["A => B"]], "A => C", ["A => C"], formula=parse_formula("C"))
    assert not instance_ok(i, HIF)


# ---------------------------------------------------------------- forward use

def test_apply_external_weakening():
    out = apply_rule(R.EW, [H("A => A")], Aux(component=parse_sequent("B =>")), [()])
    assert out == H("A => A || B =>")


def test_apply_forall_left():
    out = apply_rule(R.FORALL_L, [H("P(a) => Q")], Aux(formula=parse_formula("forall x. P(x)"),
                                                       term=parse_formula("P(a)").args[0]), [(0,)])
    assert out == H("forall x. P(x) => Q")


def test_apply_split():
    A, B = parse_formula("A"), parse_formula("B")
    out = apply_rule(R.SPLIT, [H("A, B => C")], Aux(parts=((A,),)), [(0,)])
    assert out == H("A => C || B => C")
    with pytest.raises(RuleDisabled):
        apply_rule(R.SPLIT, [H("A, B => C")], Aux(parts=((A,),)), [(0,)], config=HIF)


def test_apply_cm():
    A, B = parse_formula("A"), parse_formula("B")
    out = apply_rule(R.CM, [H("A => A"), H("B => B")], Aux(parts=((A,), (B,))), [(0,), (0,)])
    assert out == H("A => B || B => A")


# ---------------------------------------------------------------- properties

def _instances(n_seeds):
    for seed in range(n_seeds):
        d = random_derivation(seed, HIF, quantifiers=bool(seed % 2))
        for n in d.root.distinct():
            yield n


def test_generated_instances_check_and_rebuild():
    for n in _instances(40):
        check_instance(n.instance(), ALL)
        if n.rule is R.AXIOM:
            continue
        prem = [c.conclusion for c in n.children]
        rebuilt = build_instance(n.rule, prem, n.active[:-1], n.aux)
        assert rebuilt.conclusion == n.conclusion


def test_local_soundness_sampled():
    skip = {R.FORALL_R, R.EXISTS_L, R.TT}
    seen = set()
    for n in _instances(40):
        if n.rule in skip:
            continue
        seen.add(n.rule)
        hs = [c.conclusion for c in n.children] + [n.conclusion]
        schema = schema_of_hypersequents(hs, 2)
        for i in sample_interpretations(schema, 11, 20, 6):
            if all(satisfies(i, c.conclusion) for c in n.children):
                assert satisfies(i, n.conclusion), n.rule
    assert R.CM in seen and R.CUT in seen


def _with_side(i, extra):
    """The same instance with ``extra`` added to the side of every hypersequent."""
    def grow(h, idx):
        g = Hypersequent(h.components + (extra,))
        return g, locate(g, [h[k] for k in idx])
    pairs = [grow(h, idx) for h, idx in zip(i.premises, i.active)]
    conc, cact = grow(i.conclusion, i.active[-1])
    return RuleInstance(i.rule, tuple(p for p, _ in pairs), conc,
                        tuple(a for _, a in pairs) + (cact,), i.aux)


def test_shared_side_context_is_irrelevant():
    extra = parse_sequent("Zz, A => B")
    n_checked = 0
    for n in _instances(20):
        if n.rule is R.AXIOM:
            continue
        assert instance_ok(_with_side(n.instance(), extra), ALL)
        n_checked += 1
    assert n_checked > 50


def test_tampered_instances_fail():
    bad = 0
    for n in _instances(10):
        if n.rule in (R.AXIOM, R.EW):
            continue
        i = n.instance()
        extra = parse_sequent("Zz => Zz")
        conc = Hypersequent(i.conclusion.components + (extra,))
        cact = locate(conc, [i.conclusion[k] for k in i.active[-1]])
        assert not instance_ok(RuleInstance(i.rule, i.premises, conc, i.active[:-1] + (cact,), i.aux), ALL)
        bad += 1
    assert bad > 0


def test_node_instance_uses_children():
    n = Node(R.AXIOM, H("A => A"), (), ((0,),))
    assert n.instance().premises == ()
