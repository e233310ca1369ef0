"""Hypothesis strategies for random syntax."""

from hypothesis import strategies as st

from hifkit.syntax import (
    And, Atom, BOTTOM, Const, Exists, Forall, FreeVar, Func, Hypersequent, Impl, Neg, Or,
    Prop, Sequent, TOP, abstract,
)

terms = st.recursive(
    st.sampled_from([FreeVar("a"), FreeVar("b"), Const("c")]),
    lambda sub: sub.map(lambda t: Func("f", (t,))),
    max_leaves=3,
)

atoms = st.one_of(
    st.sampled_from([Atom("A"), Atom("B"), Prop("p"), Prop("q"), TOP, BOTTOM]),
    terms.map(lambda t: Atom("P", (t,))),
    st.tuples(terms, terms).map(lambda ts: Atom("R", ts)),
)


def _extend(sub):
    def quant(cls):
        return st.tuples(sub, st.sampled_from(["a", "b"]), st.sampled_from(["x", "y"])).map(
            lambda t: cls(abstract(t[0], FreeVar(t[1])), t[2]))
    return st.one_of(
        sub.map(Neg),
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
        st.tuples(sub, sub).map(lambda t: Impl(*t)),
        quant(Forall),
        quant(Exists),
    )


formulas = st.recursive(atoms, _extend, max_leaves=8)

sequents = st.builds(
    Sequent,
    st.lists(formulas, max_size=3).map(tuple),
    st.one_of(st.none(), formulas),
)

hypersequents = st.lists(sequents, min_size=1, max_size=3).map(lambda cs: Hypersequent(tuple(cs)))
