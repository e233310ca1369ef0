import pytest
from hypothesis import given, settings, strategies as st

from hifkit.calculus import HIF, HIF_MINUS, LOGICAL_PROPOSITIONAL, QUANTIFIER_RULES, RuleName as R
from hifkit.calculus import Aux, EigenvariableViolation
from hifkit.fixtures import FIXTURES, PROPOSITIONAL, fixture
from hifkit.proof import (
    Derivation, Node, ScriptError, StructuralMismatch, axiom, check_derivation, format_script,
    infer, parse_script, stats,
)
from hifkit.randproof import random_derivation
from hifkit.semantics import (
    VALID, decide_propositional_hypersequent, sample_interpretations, satisfies,
    schema_of_hypersequents,
)
from hifkit.syntax import parse_formula, parse_hypersequent, parse_sequent


# ---------------------------------------------------------------- fixtures

@pytest.mark.parametrize("name", list(FIXTURES))
def test_fixture_checks(name):
    d = fixture(name)
    assert check_derivation(d) == []
    h = d.conclusion
    for i in sample_interpretations(schema_of_hypersequents([h], 3), 1, 100, 12):
        assert satisfies(i, h)


@pytest.mark.parametrize("name", PROPOSITIONAL)
def test_propositional_fixtures_are_valid(name):
    assert decide_propositional_hypersequent(fixture(name).conclusion) is VALID


@pytest.mark.parametrize("name, root", [
    ("D", "=> (A -> B) | (B -> A)"),
    ("or-forall", "forall x.(B | A(x)) => B | forall x. A(x)"),
    ("forall-impl", "(forall x. A(x)) -> C => (exists x.(A(x) -> D)) | (D -> C)"),
    ("interderiv-1", "A | B => A || A | B => B"),
])
def test_fixture_roots(name, root):
    assert fixture(name).conclusion == parse_hypersequent(root)


def test_paper_figures_use_no_cut():
    for name in ("D", "or-forall", "forall-impl", "ax1", "ax2", "ax3", "ax4"):
        d = fixture(name)
        assert d.config == HIF_MINUS
        assert stats(d).count(R.CUT) == 0


def test_special_fixtures():
    assert fixture("tt-demo").root.rule is R.TT
    assert stats(fixture("split-cm-demo")).count(R.SPLIT) > 0
    pd = fixture("prenex-demo")
    assert stats(pd).order > 0


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixture("nope")


# ---------------------------------------------------------------- stats

def test_stats_of_linearity_proof():
    s = stats(fixture("D"))
    assert (s.count(R.CM), s.count(R.EC), s.count(R.CUT), s.count(R.TT)) == (1, 1, 0, 0)
    assert s.order == 0
    assert s.nodes == sum(s.counts.values()) == 8
    assert s.length == 7


def test_stats_of_or_forall_proof():
    s = stats(fixture("or-forall"))
    assert (s.count(R.FORALL_R), s.count(R.FORALL_L), s.count(R.CM)) == (1, 2, 1)
    # two Or-R nodes sit below each of the three quantifier inferences
    assert s.order == 6


def test_stats_of_axiom():
    s = stats(axiom(parse_formula("A")))
    assert s.length == 1 and s.nodes == 1 and s.counts == {R.AXIOM: 1} and s.order == 0


def _order_by_paths(root):
    """Sum over quantifier nodes of propositional nodes on the path to the root."""
    total = 0

    def walk(n, below):
        nonlocal total
        if n.rule in QUANTIFIER_RULES:
            total += below
        for c in n.children:
            walk(c, below + (n.rule in LOGICAL_PROPOSITIONAL))
    walk(root, 0)
    return total


def test_order_matches_path_oracle():
    for seed in range(30):
        d = random_derivation(seed, HIF, quantifiers=True)
        assert stats(d).order == _order_by_paths(d.root)
        assert stats(d).length == d.root.depth()


# ---------------------------------------------------------------- checking failures

def test_eigenvariable_reuse_is_reported():
    text = format_script(fixture("or-forall"))
    # keep P(a) in the conclusion of Forall-R: the eigenvariable now occurs below
    bad = text.replace(":: forall x. B | A(x) => B || forall x. B | A(x) => forall x. A(x)",
                       ":: forall x. B | A(x) => B || forall x. B | A(x), A(a) => forall x. A(x)")
    assert bad != text
    errs = check_derivation(parse_script(bad))
    assert errs and errs[0][0] == 12


def test_eigen_violation_class():
    ax = axiom(parse_formula("P(a)"))
    n = infer(R.IW_L, [ax], [[parse_sequent("P(a) => P(a)")]], Aux(formula=parse_formula("Q")))
    try:
        bad = infer(R.FORALL_R, [n], [[parse_sequent("P(a), Q => P(a)")]],
                    Aux(formula=parse_formula("forall x. P(x)"), eigen="a"))
    except EigenvariableViolation:
        return
    errs = check_derivation(bad)
    assert isinstance(errs[-1][1], EigenvariableViolation)


def test_declared_premise_mismatch():
    ax = axiom(parse_formula("A"))
    n = Node(R.EC, parse_hypersequent("A => A"), (ax,), ((0, 0), (0,)),
             premises=(parse_hypersequent("A => A || A => A"),))
    errs = check_derivation(n)
    assert len(errs) == 1 and isinstance(errs[0][1], StructuralMismatch)


def test_all_failures_reported():
    text = format_script(fixture("D"))
    bad = text.replace("formula=A -> B}", "formula=B -> A}").replace("EC [7]", "EW [7]")
    errs = check_derivation(parse_script(bad))
    assert [k for k, _ in errs] == [4, 8]


def test_config_override():
    d = random_derivation(2, HIF, min_cuts=1)
    assert check_derivation(d) == []
    assert check_derivation(d, HIF_MINUS)


# ---------------------------------------------------------------- script format

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 5), st.booleans())
def test_script_round_trip(seed, quantifiers):
    d = random_derivation(seed, HIF, quantifiers=quantifiers)
    text = format_script(d)
    e = parse_script(text)
    assert format_script(e) == text
    assert e.conclusion == d.conclusion
    assert check_derivation(e) == []


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fixture_scripts_round_trip(name):
    text = format_script(fixture(name))
    assert format_script(parse_script(text)) == text


def test_comments_and_blank_lines():
    text = format_script(fixture("D"))
    noisy = "# header comment\n\n" + text.replace("\n3:", "  # trailing\n\n3:")
    assert format_script(parse_script(noisy)) == text


def test_shared_premises_are_accepted():
    text = """proof share config hif
1: Axiom [] {active=c:0; formula=A} :: A => A
2: EW [1] {active=p1:/c:0} :: A => A || A => A
3: EC [2] {active=p1:0,1/c:0} :: A => A
qed 3
"""
    assert check_derivation(parse_script(text)) == []


@pytest.mark.parametrize("text, msg", [
    ("", "empty"),
    ("proof x\n", "expected"),
    ("proof x config hif\n1: Axiom [] {active=c:0; formula=A} :: A => A\n", "qed"),
    ("proof x config hif\n1: EC [2] :: A => A\nqed 1\n", "not defined"),
    ("proof x config hif\n1: Frob [] :: A => A\nqed 1\n", "unknown rule"),
    ("proof x config hif\n1: Axiom [] :: A => \nqed 1\n", None),
    ("proof x config nope\n", "unknown config"),
    ("proof x config hif\n1: Axiom [] {active=c:0; formula=A} :: A => A\n1: Axiom [] {active=c:0; formula=A} :: A => A\nqed 1\n",
     "duplicate"),
])
def test_script_errors(text, msg):
    try:
        d = parse_script(text)
    except ScriptError as e:
        if msg:
            assert msg in str(e)
        return
    assert msg is None and check_derivation(d)


def test_script_error_line_numbers():
    with pytest.raises(ScriptError) as e:
        parse_script("proof x config hif\n\n1: Axiom [] :: A => (\nqed 1\n")
    assert "3" in str(e.value)


def test_derivation_defaults():
    d = Derivation(axiom(parse_formula("A")))
    assert d.config == HIF and d.name == "proof"
