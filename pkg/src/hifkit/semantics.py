"""Exact-rational Goedel semantics over finite domains."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from . import kernel
from .syntax import (
    BOTTOM, TOP, And, Atom, Bottom, BoundVar, Const, Exists, Forall, FreeVar, Func,
    Hypersequent, Impl, Neg, Or, Prop, Sequent, Top, Formula, Term, hs_formulas,
    subformulas, formula_terms,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class SemanticsError(ValueError):
    pass


class UninterpretedSymbol(SemanticsError):
    pass


@dataclass(frozen=True)
class Interpretation:
    domain: tuple
    pred_table: dict = field(default_factory=dict)
    prop_table: dict = field(default_factory=dict)
    func_table: dict = field(default_factory=dict)
    freevar_env: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise SemanticsError("empty domain")
        for v in list(self.pred_table.values()) + list(self.prop_table.values()):
            if not ZERO <= v <= ONE:
                raise SemanticsError(f"value {v} outside [0,1]")

    def with_prop(self, name: str, value: Fraction) -> "Interpretation":
        props = dict(self.prop_table)
        props[name] = Fraction(value)
        return Interpretation(self.domain, self.pred_table, props, self.func_table, self.freevar_env)

    # model literal format
    def to_text(self) -> str:
        lines = ["domain " + " ".join(self.domain)]
        for (p, args), v in sorted(self.pred_table.items()):
            lines.append(f"pred {p}{_args(args)} = {_frac(v)}")
        for p, v in sorted(self.prop_table.items()):
            lines.append(f"prop {p} = {_frac(v)}")
        for (f, args), d in sorted(self.func_table.items()):
            lines.append(f"func {f}({','.join(args)}) = {d}")
        for a, d in sorted(self.freevar_env.items()):
            lines.append(f"var {a} = {d}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Countermodel:
    interpretation: Interpretation
    value: Fraction


class _Valid:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "VALID"

    def __bool__(self):
        return True


VALID = _Valid()
Verdict = Union[_Valid, Countermodel]


def _args(args: tuple) -> str:
    return f"({','.join(args)})" if args else ""


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


_LINE = re.compile(
    r"^(?:(?P<kw>pred|prop|func|var)\s+(?P<name>[A-Za-z_][A-Za-z0-9_']*)"
    r"(?:\((?P<args>[^)]*)\))?\s*=\s*(?P<val>\S+)|domain\s+(?P<dom>.+))$"
)


def parse_model(text: str) -> Interpretation:
    """Parse the ``domain/pred/prop/func/var`` model literal format."""
    domain = None
    preds, props, funcs, env = {}, {}, {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise SemanticsError(f"line {lineno}: cannot parse {raw!r}")
        if m.group("dom"):
            domain = tuple(m.group("dom").split())
            continue
        kw, name, val = m.group("kw"), m.group("name"), m.group("val")
        args = tuple(a.strip() for a in (m.group("args") or "").split(",") if a.strip())
        if kw in ("pred", "prop"):
            try:
                value = Fraction(val)
            except ValueError:
                raise SemanticsError(f"line {lineno}: bad rational {val!r}") from None
            if not ZERO <= value <= ONE:
                raise SemanticsError(f"line {lineno}: value {val} outside [0,1]")
            if kw == "pred":
                preds[(name, args)] = value
            else:
                props[name] = value
        elif kw == "func":
            funcs[(name, args)] = val
        else:
            env[name] = val
    if domain is None:
        raise SemanticsError("missing domain line")
    for d in list(funcs.values()) + list(env.values()):
        if d not in domain:
            raise SemanticsError(f"element {d!r} not in domain")
    return Interpretation(domain, preds, props, funcs, env)


# ------------------------------------------------------------ evaluation

def eval_term(i: Interpretation, t: Term, env: tuple = ()) -> str:
    if isinstance(t, FreeVar):
        try:
            return i.freevar_env[t.name]
        except KeyError:
            raise UninterpretedSymbol(f"free variable {t.name}") from None
    if isinstance(t, BoundVar):
        return env[t.index]
    if isinstance(t, Const):
        key = (t.name, ())
    else:
        key = (t.name, tuple(eval_term(i, a, env) for a in t.args))
    try:
        return i.func_table[key]
    except KeyError:
        raise UninterpretedSymbol(f"function {t.name} at {key[1]}") from None


def eval_formula(i: Interpretation, f: Formula, env: tuple = ()) -> Fraction:
    """Truth value of ``f`` under ``i``; ``env`` holds domain elements for bound variables."""
    if isinstance(f, Atom):
        key = (f.pred, tuple(eval_term(i, a, env) for a in f.args))
        try:
            return i.pred_table[key]
        except KeyError:
            if not f.args and f.pred in i.prop_table:     # "prop A = v" for a nullary atom
                return i.prop_table[f.pred]
            raise UninterpretedSymbol(f"predicate {f.pred} at {key[1]}") from None
    if isinstance(f, Prop):
        try:
            return i.prop_table[f.name]
        except KeyError:
            raise UninterpretedSymbol(f"propositional variable {f.name}") from None
    if isinstance(f, Top):
        return ONE
    if isinstance(f, Bottom):
        return ZERO
    if isinstance(f, Neg):
        return ZERO if eval_formula(i, f.sub, env) != 0 else ONE
    if isinstance(f, And):
        return min(eval_formula(i, f.left, env), eval_formula(i, f.right, env))
    if isinstance(f, Or):
        return max(eval_formula(i, f.left, env), eval_formula(i, f.right, env))
    if isinstance(f, Impl):
        b = eval_formula(i, f.left, env)
        c = eval_formula(i, f.right, env)
        return c if b > c else ONE
    if isinstance(f, Forall):
        return min(eval_formula(i, f.body, (d,) + env) for d in i.domain)
    if isinstance(f, Exists):
        return max(eval_formula(i, f.body, (d,) + env) for d in i.domain)
    raise TypeError(f"not a formula: {f!r}")


def _fold(cls, items: list, empty: Formula) -> Formula:
    if not items:
        return empty
    out = items[0]
    for g in items[1:]:
        out = cls(out, g)
    return out


def translate_sequent(s: Sequent) -> Formula:
    ante = _fold(And, list(s.antecedent), TOP)
    succ = BOTTOM if s.succedent is None else s.succedent
    return Impl(ante, succ)


def translate(h: Hypersequent) -> Formula:
    """Disjunction over components of (conjunction of antecedent -> succedent)."""
    return _fold(Or, [translate_sequent(c) for c in h.components], BOTTOM)


def eval_antecedent(i: Interpretation, formulas: Iterable[Formula]) -> Fraction:
    return min((eval_formula(i, f) for f in formulas), default=ONE)


def eval_sequent(i: Interpretation, s: Sequent) -> Fraction:
    a = eval_antecedent(i, s.antecedent)
    c = ZERO if s.succedent is None else eval_formula(i, s.succedent)
    return c if a > c else ONE


def sequent_holds(i: Interpretation, s: Sequent) -> bool:
    return eval_sequent(i, s) == ONE


def satisfies(i: Interpretation, h: Hypersequent) -> bool:
    return eval_formula(i, translate(h)) == ONE


# -------------------------------------------------- propositional decision

def propositional_letters(f: Formula) -> list[str]:
    """Sorted propositional letters (propositional variables and nullary atoms)."""
    names = set()
    for g in subformulas(f):
        if isinstance(g, (Forall, Exists)):
            raise SemanticsError("not propositional: quantifier")
        if isinstance(g, Atom):
            if g.args:
                raise SemanticsError(f"not propositional: predicate {g.pred} has arguments")
            names.add(("A", g.pred))
        elif isinstance(g, Prop):
            names.add(("p", g.name))
    return sorted(names)


def compile_program(f: Formula, letters: list, top: int) -> list[int]:
    """Flat postfix program over integer chain levels ``0..top``."""
    index = {k: n for n, k in enumerate(letters)}
    out: list[int] = []

    def go(g):
        if isinstance(g, Atom):
            out.extend((kernel.OP_VAR, index[("A", g.pred)]))
        elif isinstance(g, Prop):
            out.extend((kernel.OP_VAR, index[("p", g.name)]))
        elif isinstance(g, Top):
            out.extend((kernel.OP_CONST, top))
        elif isinstance(g, Bottom):
            out.extend((kernel.OP_CONST, 0))
        elif isinstance(g, Neg):
            go(g.sub)
            out.extend((kernel.OP_NEG, 0))
        else:
            go(g.left)
            go(g.right)
            op = {And: kernel.OP_AND, Or: kernel.OP_OR, Impl: kernel.OP_IMPL}[type(g)]
            out.extend((op, 0))

    go(f)
    return out


def _letters_interpretation(letters, values) -> Interpretation:
    preds, props = {}, {}
    for (kind, name), v in zip(letters, values):
        if kind == "A":
            preds[(name, ())] = v
        else:
            props[name] = v
    return Interpretation(("d0",), preds, props)


def decide_propositional(f: Formula) -> Verdict:
    """Decide validity of a propositional formula over the (n+2)-element chain.

    Assignments are enumerated with values ``k/(n+1)`` in lexicographic order of
    the sorted letters (last letter varying fastest); the first falsifying one is
    returned.
    """
    letters = propositional_letters(f)
    n = len(letters)
    top = n + 1
    program = compile_program(f, letters, top)
    idx = kernel.first_falsifying(program, n, top)
    if idx < 0:
        return VALID
    levels = []
    for _ in range(n):
        idx, r = divmod(idx, top + 1)
        levels.append(r)
    levels.reverse()
    values = [Fraction(k, top) for k in levels]
    interp = _letters_interpretation(letters, values)
    return Countermodel(interp, eval_formula(interp, f))


def decide_propositional_hypersequent(h: Hypersequent) -> Verdict:
    return decide_propositional(translate(h))


# --------------------------------------------------------------- sampling

@dataclass(frozen=True)
class Schema:
    """Symbols to interpret: name -> arity maps plus a domain size."""

    domain_size: int = 1
    preds: tuple = ()      # (name, arity) pairs
    props: tuple = ()
    funcs: tuple = ()      # (name, arity) pairs; arity 0 = constant
    freevars: tuple = ()

    def merge(self, other: "Schema") -> "Schema":
        return Schema(
            max(self.domain_size, other.domain_size),
            tuple(sorted(set(self.preds) | set(other.preds))),
            tuple(sorted(set(self.props) | set(other.props))),
            tuple(sorted(set(self.funcs) | set(other.funcs))),
            tuple(sorted(set(self.freevars) | set(other.freevars))),
        )


def schema_of(formulas: Iterable[Formula], domain_size: int = 1) -> Schema:
    preds, props, funcs, fvs = set(), set(), set(), set()
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, Atom):
                preds.add((g.pred, len(g.args)))
            elif isinstance(g, Prop):
                props.add(g.name)
        for t in formula_terms(f):
            if isinstance(t, FreeVar):
                fvs.add(t.name)
            elif isinstance(t, Const):
                funcs.add((t.name, 0))
            elif isinstance(t, Func):
                funcs.add((t.name, len(t.args)))
    return Schema(domain_size, tuple(sorted(preds)), tuple(sorted(props)),
                  tuple(sorted(funcs)), tuple(sorted(fvs)))


def schema_of_hypersequents(hs: Iterable[Hypersequent], domain_size: int = 1) -> Schema:
    return schema_of((f for h in hs for f in hs_formulas(h)), domain_size)


def _tuples(domain: tuple, arity: int):
    if arity == 0:
        yield ()
        return
    for d in domain:
        for rest in _tuples(domain, arity - 1):
            yield (d,) + rest


def sample_interpretations(schema: Schema, seed: int, count: int, grid: int) -> list[Interpretation]:
    """Reproducible random interpretations with values in ``{0, 1/grid, ..., 1}``."""
    if schema.domain_size < 1:
        raise SemanticsError("empty domain")
    if grid < 1:
        raise SemanticsError("grid must be >= 1")
    rng = random.Random(seed)
    domain = tuple(f"d{k}" for k in range(1, schema.domain_size + 1))
    out = []
    for _ in range(count):
        preds = {}
        for name, ar in schema.preds:
            for args in _tuples(domain, ar):
                preds[(name, args)] = Fraction(rng.randint(0, grid), grid)
        props = {p: Fraction(rng.randint(0, grid), grid) for p in schema.props}
        funcs = {}
        for name, ar in schema.funcs:
            for args in _tuples(domain, ar):
                funcs[(name, args)] = rng.choice(domain)
        env = {a: rng.choice(domain) for a in schema.freevars}
        out.append(Interpretation(domain, preds, props, funcs, env))
    return out


# ---------------------------------------------------------------- density

def density_witness(i: Interpretation, phi: Iterable[Formula], psi: Iterable[Formula],
                    sigma: Optional[Formula], p: str) -> Interpretation:
    """Extend ``i`` with ``p`` at the midpoint between min(Phi, Psi) and Sigma.

    Requires min(Phi, Psi) > Sigma; the result falsifies both ``Phi => p`` and
    ``p, Psi => Sigma``.
    """
    r1 = eval_antecedent(i, list(phi) + list(psi))
    r2 = ZERO if sigma is None else eval_formula(i, sigma)
    if not r1 > r2:
        raise SemanticsError(f"density precondition violated: {r1} <= {r2}")
    return i.with_prop(p, (r1 + r2) / 2)
