"""Random propositional formulas over A, B, C and a plain-dict evaluator for them."""

from fractions import Fraction as Fr

from hifkit.syntax import And, Atom, BOTTOM, Impl, Neg, Or, TOP

A, B, C = Atom("A"), Atom("B"), Atom("C")


# A separate evaluator over plain dicts, used as an oracle for the library's one.
def oracle(f, v):
    if isinstance(f, Atom):
        return v[f.pred]
    if f is TOP or f == TOP:
        return Fr(1)
    if f == BOTTOM:
        return Fr(0)
    if isinstance(f, Neg):
        return Fr(1) if oracle(f.sub, v) == 0 else Fr(0)
    x, y = oracle(f.left, v), oracle(f.right, v)
    if isinstance(f, And):
        return min(x, y)
    if isinstance(f, Or):
        return max(x, y)
    return Fr(1) if x <= y else y


def random_prop_formula(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([A, B, C, A, B, BOTTOM])
    k = rng.randrange(4)
    if k == 0:
        return Neg(random_prop_formula(rng, depth - 1))
    cls = (And, Or, Impl)[k - 1]
    return cls(random_prop_formula(rng, depth - 1), random_prop_formula(rng, depth - 1))
