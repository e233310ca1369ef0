import pytest
from hypothesis import given, settings

from hifkit.syntax import (
    And, Atom, BOTTOM, BoundVar, Exists, Forall, FreeVar, Func, Impl, Or, Prop, Sequent, SyntaxError_,
    TOP, abstract, degree, free_vars, hyper, is_prenex, is_quantifier_free, occurs,
    parse_formula, parse_hypersequent, parse_sequent, print_formula, print_hypersequent, seq,
    substitute,
)

from strategies import formulas, hypersequents, terms

A, B = Atom("A"), Atom("B")
a = FreeVar("a")


def P(*args):
    return Atom("P", args)


# ---------------------------------------------------------------- parsing

def test_parse_linearity_axiom():
    assert parse_formula("(A -> B) | (B -> A)") == Or(Impl(A, B), Impl(B, A))


def test_parse_constants():
    assert parse_formula("T") == TOP
    assert parse_formula("F") == BOTTOM


def test_quantifier_scope_and_binder():
    f = parse_formula("forall x. (B | A(x))")
    assert f == Forall(Or(B, Atom("A", (BoundVar(0),))))
    assert parse_formula("forall x. B | A(x)") == f


def test_lowercase_is_propositional_variable():
    assert parse_formula("p -> A") == Impl(Prop("p"), A)


def test_precedence_and_associativity():
    assert parse_formula("~A & B | A -> B -> A") == \
        Impl(Or(And(parse_formula("~A"), B), A), Impl(B, A))


def test_hypersequent_components():
    h = parse_hypersequent("A => B || B => A")
    assert len(h) == 2
    assert set(h.components) == {seq([A], B), seq([B], A)}


def test_empty_sequent():
    h = parse_hypersequent("=>")
    assert h == hyper(Sequent())
    assert h[0].antecedent == () and h[0].succedent is None


def test_antecedent_multiplicity():
    s = parse_sequent("A, A => B")
    assert s.antecedent == (A, A)
    assert s != parse_sequent("A => B")


def test_comments_are_ignored():
    assert parse_hypersequent("A => B  # note") == parse_hypersequent("A => B")


@pytest.mark.parametrize("text, pos", [
    ("P(a) & P(a,b)", 7),
    ("A => B, C", 6),
    ("(A", 2),
    ("A &", 3),
])
def test_errors_carry_position(text, pos):
    with pytest.raises(SyntaxError_) as e:
        parse_hypersequent(text)
    assert e.value.pos == pos


# ---------------------------------------------------------------- properties

@settings(max_examples=300)
@given(formulas)
def test_formula_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@settings(max_examples=200)
@given(hypersequents)
def test_hypersequent_round_trip(h):
    assert parse_hypersequent(print_hypersequent(h)) == h


def test_alpha_invariance():
    assert parse_formula("forall x. P(x)") == parse_formula("forall y. P(y)")
    assert parse_formula("forall x. exists y. R(x,y)") == parse_formula("forall u. exists v. R(u,v)")
    assert parse_formula("forall x. exists y. R(x,y)") != parse_formula("forall x. exists y. R(y,x)")


@given(hypersequents)
def test_component_order_is_irrelevant(h):
    assert hyper(*reversed(h.components)) == h


def test_antecedent_order_is_irrelevant():
    assert parse_sequent("A, B, A => B") == parse_sequent("B, A, A => B")
    assert parse_sequent("A, B => B") != parse_sequent("A, B, B => B")


# ---------------------------------------------------------------- substitution

def test_substitute_simple():
    assert substitute(parse_formula("forall x. P(x)").body, a) == P(a)


def test_substitute_under_disjunction():
    body = parse_formula("forall x. (B | A(x))").body
    assert substitute(body, a) == Or(B, Atom("A", (a,)))


def test_substitute_repeated_variable():
    fa = Func("f", (a,))
    body = parse_formula("forall x. R(x,x)").body
    assert substitute(body, fa) == Atom("R", (fa, fa))


def test_substitute_inside_nested_binder():
    body = parse_formula("forall x. exists y. R(x,y)").body
    assert substitute(body, a) == parse_formula("exists y. R(a,y)")


@given(formulas, terms)
def test_substitute_keeps_term_free(f, t):
    body = abstract(f, FreeVar("v"))
    out = substitute(body, t)
    for v in free_vars(Atom("P", (t,))):
        if occurs("v", f):
            assert v in free_vars(out)


@given(formulas)
def test_abstract_then_substitute_is_identity(f):
    assert substitute(abstract(f, a), a) == f


# ---------------------------------------------------------------- measures

@pytest.mark.parametrize("text, d", [
    ("P(a)", 0), ("p", 0), ("T", 0),
    ("(A -> B) | (B -> A)", 3),
    ("forall x. (B | A(x))", 2),
    ("~~A", 2),
])
def test_degree(text, d):
    assert degree(parse_formula(text)) == d


@pytest.mark.parametrize("sym, text, expected", [
    ("p", "A => p", True),
    ("a", "P(b) => Q", False),
    ("p", "=> forall x. P(x)", False),
    ("a", "=> forall x. R(x, f(a))", True),
])
def test_occurs(sym, text, expected):
    assert occurs(sym, parse_hypersequent(text)) is expected


@pytest.mark.parametrize("text, expected", [
    ("forall x. exists y. R(x,y)", True),
    ("forall x. P(x)", True),
    ("(forall x. P(x)) -> Q", False),
    ("A & B", True),
])
def test_is_prenex(text, expected):
    assert is_prenex(parse_formula(text)) is expected


def test_quantifier_free():
    assert is_quantifier_free(parse_formula("P(a) -> A"))
    assert not is_quantifier_free(parse_formula("A -> exists x. P(x)"))


def test_exists_differs_from_forall():
    body = parse_formula("forall x. P(x)").body
    assert Forall(body) != Exists(body)
