"""Terms, formulas, sequents and hypersequents.

Bound variables are stored as binder indices (index 0 = innermost enclosing
quantifier), so alpha-equivalent formulas are equal objects.  Every node
carries a precomputed sort key; multisets are stored as tuples sorted by
that key, which gives deterministic equality, hashing and printing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


class SyntaxError_(ValueError):
    """Raised for malformed formula or hypersequent text."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


ParseError = SyntaxError_


class _Node:
    __slots__ = ()
    _key: tuple

    def __eq__(self, other):
        return isinstance(other, _Node) and self._key == other._key

    def __ne__(self, other):
        return not self.__eq__(other)

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __hash__(self):
        return hash(self._key)


# ---------------------------------------------------------------- terms

@dataclass(frozen=True, eq=False)
class FreeVar(_Node):
    name: str
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (0, self.name))


@dataclass(frozen=True, eq=False)
class BoundVar(_Node):
    index: int
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (1, self.index))


@dataclass(frozen=True, eq=False)
class Const(_Node):
    name: str
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (2, self.name))


@dataclass(frozen=True, eq=False)
class Func(_Node):
    name: str
    args: tuple
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_key", (3, self.name, tuple(a._key for a in self.args)))


Term = Union[FreeVar, BoundVar, Const, Func]


# ------------------------------------------------------------- formulas

@dataclass(frozen=True, eq=False)
class Atom(_Node):
    pred: str
    args: tuple = ()
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_key", (0, self.pred, tuple(a._key for a in self.args)))


@dataclass(frozen=True, eq=False)
class Prop(_Node):
    name: str
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (1, self.name))


@dataclass(frozen=True, eq=False)
class Top(_Node):
    _key: tuple = field(init=False, repr=False, default=(2,))


@dataclass(frozen=True, eq=False)
class Bottom(_Node):
    _key: tuple = field(init=False, repr=False, default=(3,))


@dataclass(frozen=True, eq=False)
class Neg(_Node):
    sub: "Formula"
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (4, self.sub._key))


@dataclass(frozen=True, eq=False)
class _Binary(_Node):
    left: "Formula"
    right: "Formula"
    _key: tuple = field(init=False, repr=False)
    TAG = -1

    def __post_init__(self):
        object.__setattr__(self, "_key", (self.TAG, self.left._key, self.right._key))


class And(_Binary):
    TAG = 5


class Or(_Binary):
    TAG = 6


class Impl(_Binary):
    TAG = 7


@dataclass(frozen=True, eq=False)
class _Quant(_Node):
    body: "Formula"
    hint: str = "x"
    _key: tuple = field(init=False, repr=False)
    TAG = -1

    def __post_init__(self):
        object.__setattr__(self, "_key", (self.TAG, self.body._key))


class Forall(_Quant):
    TAG = 8


class Exists(_Quant):
    TAG = 9


Formula = Union[Atom, Prop, Top, Bottom, Neg, And, Or, Impl, Forall, Exists]

TOP = Top()
BOTTOM = Bottom()

CONNECTIVES = (Neg, And, Or, Impl)
QUANTIFIERS = (Forall, Exists)


# ------------------------------------------------------ sequents etc.

@dataclass(frozen=True, eq=False)
class Sequent(_Node):
    antecedent: tuple = ()
    succedent: Optional["Formula"] = None
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        ante = tuple(sorted(self.antecedent))
        object.__setattr__(self, "antecedent", ante)
        succ = () if self.succedent is None else (self.succedent._key,)
        object.__setattr__(self, "_key", (tuple(f._key for f in ante), succ))

    def formulas(self) -> Iterator["Formula"]:
        yield from self.antecedent
        if self.succedent is not None:
            yield self.succedent

    def __str__(self):
        return print_sequent(self)


@dataclass(frozen=True, eq=False)
class Hypersequent(_Node):
    components: tuple = ()
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        comps = tuple(sorted(self.components))
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_key", tuple(c._key for c in comps))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __str__(self):
        return print_hypersequent(self)


def seq(antecedent: Iterable[Formula] = (), succedent: Formula | None = None) -> Sequent:
    return Sequent(tuple(antecedent), succedent)


def hyper(*components: Sequent) -> Hypersequent:
    return Hypersequent(tuple(components))


def remove_indices(h: Hypersequent, indices: Iterable[int]) -> list[Sequent]:
    """Components of ``h`` not at the given positions (the side hypersequent)."""
    drop = set(indices)
    return [c for i, c in enumerate(h.components) if i not in drop]


def multiset_minus(items: Iterable, remove: Iterable) -> Optional[list]:
    """Multiset difference; None if ``remove`` is not contained in ``items``."""
    rest = list(items)
    for r in remove:
        try:
            rest.remove(r)
        except ValueError:
            return None
    return rest


def index_of(h: Hypersequent, s: Sequent, skip: Iterable[int] = ()) -> int:
    taken = set(skip)
    for i, c in enumerate(h.components):
        if i not in taken and c == s:
            return i
    raise ValueError(f"component {s} not in {h}")


# -------------------------------------------------- binding operations

def _shift_term(t: Term, depth: int, term: Term) -> Term:
    if isinstance(t, BoundVar):
        if t.index == depth:
            return term
        if t.index > depth:
            return BoundVar(t.index - 1)
        return t
    if isinstance(t, Func):
        return Func(t.name, tuple(_shift_term(a, depth, term) for a in t.args))
    return t


def _inst(f: Formula, depth: int, term: Term) -> Formula:
    if isinstance(f, Atom):
        if not f.args:
            return f
        return Atom(f.pred, tuple(_shift_term(a, depth, term) for a in f.args))
    if isinstance(f, Neg):
        return Neg(_inst(f.sub, depth, term))
    if isinstance(f, _Binary):
        return type(f)(_inst(f.left, depth, term), _inst(f.right, depth, term))
    if isinstance(f, _Quant):
        return type(f)(_inst(f.body, depth + 1, term), f.hint)
    return f


def substitute(body: Formula, term: Term) -> Formula:
    """Instantiate the outermost binder of ``body`` (a quantifier scope) with ``term``."""
    assert not any(isinstance(t, BoundVar) for t in _term_nodes(term)), "term has bound variables"
    return _inst(body, 0, term)


def _abs_term(t: Term, depth: int, target: Term) -> Term:
    if t == target:
        return BoundVar(depth)
    if isinstance(t, Func):
        return Func(t.name, tuple(_abs_term(a, depth, target) for a in t.args))
    return t


def _abs(f: Formula, depth: int, target: Term) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_abs_term(a, depth, target) for a in f.args))
    if isinstance(f, Neg):
        return Neg(_abs(f.sub, depth, target))
    if isinstance(f, _Binary):
        return type(f)(_abs(f.left, depth, target), _abs(f.right, depth, target))
    if isinstance(f, _Quant):
        return type(f)(_abs(f.body, depth + 1, target), f.hint)
    return f


def abstract(f: Formula, target: Term) -> Formula:
    """Inverse of :func:`substitute`: replace ``target`` by the outermost bound variable."""
    return _abs(f, 0, target)


def _term_nodes(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Func):
        for a in t.args:
            yield from _term_nodes(a)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Neg):
        yield from subformulas(f.sub)
    elif isinstance(f, _Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, _Quant):
        yield from subformulas(f.body)


def formula_terms(f: Formula) -> Iterator[Term]:
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                yield from _term_nodes(a)


def free_vars(f: Formula) -> set[str]:
    return {t.name for t in formula_terms(f) if isinstance(t, FreeVar)}


def prop_vars(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def symbols(f: Formula) -> set[str]:
    """Names of free variables and propositional variables occurring in ``f``."""
    return free_vars(f) | prop_vars(f)


def hs_formulas(h: Hypersequent) -> Iterator[Formula]:
    for c in h.components:
        yield from c.formulas()


def occurs(symbol: str, h: Hypersequent | Sequent | Formula) -> bool:
    """True iff the free variable or propositional variable ``symbol`` occurs in ``h``."""
    if isinstance(h, Hypersequent):
        fs = hs_formulas(h)
    elif isinstance(h, Sequent):
        fs = h.formulas()
    else:
        fs = [h]
    return any(symbol in symbols(f) for f in fs)


def all_symbols(h: Hypersequent) -> set[str]:
    out: set[str] = set()
    for f in hs_formulas(h):
        out |= symbols(f)
        out |= {t.name for t in formula_terms(f) if isinstance(t, (Const, Func))}
    return out


def degree(f: Formula) -> int:
    """Number of connective and quantifier nodes in ``f``."""
    return sum(1 for g in subformulas(f) if isinstance(g, (Neg, _Binary, _Quant)))


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, _Quant) for g in subformulas(f))


def is_prenex(f: Formula) -> bool:
    while isinstance(f, _Quant):
        f = f.body
    return is_quantifier_free(f)


def is_atomic(f: Formula) -> bool:
    return isinstance(f, (Atom, Prop, Top, Bottom))


def rename_symbol(f: Formula, old: str, new: str) -> Formula:
    """Rename a free variable or propositional variable throughout ``f``."""

    def term(t):
        if isinstance(t, FreeVar) and t.name == old:
            return FreeVar(new)
        if isinstance(t, Func):
            return Func(t.name, tuple(term(a) for a in t.args))
        return t

    def go(g):
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(term(a) for a in g.args))
        if isinstance(g, Prop):
            return Prop(new) if g.name == old else g
        if isinstance(g, Neg):
            return Neg(go(g.sub))
        if isinstance(g, _Binary):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, _Quant):
            return type(g)(go(g.body), g.hint)
        return g

    return go(f)


def rename_in_sequent(s: Sequent, old: str, new: str) -> Sequent:
    succ = None if s.succedent is None else rename_symbol(s.succedent, old, new)
    return Sequent(tuple(rename_symbol(f, old, new) for f in s.antecedent), succ)


def rename_in_hypersequent(h: Hypersequent, old: str, new: str) -> Hypersequent:
    return Hypersequent(tuple(rename_in_sequent(c, old, new) for c in h.components))


# ------------------------------------------------------------- printing

_PREC = {Impl: 1, Or: 2, And: 3}
_BINOP = {Impl: "->", Or: "|", And: "&"}
_NAME_POOL = ("x", "y", "z", "u", "v", "w")


def _binder_name(hint: str, used: set[str]) -> str:
    if hint and hint not in used and re.fullmatch(r"[a-z][A-Za-z0-9_]*", hint):
        return hint
    for n in _NAME_POOL:
        if n not in used:
            return n
    i = 1
    while f"x{i}" in used:
        i += 1
    return f"x{i}"


def print_term(t: Term, names: tuple = ()) -> str:
    if isinstance(t, FreeVar):
        return t.name
    if isinstance(t, BoundVar):
        return names[t.index] if t.index < len(names) else f"?{t.index}"
    if isinstance(t, Const):
        return f"{t.name}()"
    return f"{t.name}({','.join(print_term(a, names) for a in t.args)})"


def print_formula(f: Formula) -> str:
    taken = set(symbols(f)) | {t.name for t in formula_terms(f) if isinstance(t, (Const, Func))}
    return _pf(f, (), taken, 0, True)


def _pf(f, names: tuple, taken: set, ctx: int, tail: bool) -> str:
    # ctx: binding strength required by the surrounding position
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({','.join(print_term(a, names) for a in f.args)})"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Neg):
        return "~" + _pf(f.sub, names, taken, 4, tail)
    if isinstance(f, _Binary):
        p = _PREC[type(f)]
        if isinstance(f, Impl):
            lctx, rctx = p + 1, p
        else:
            lctx, rctx = p, p + 1
        paren = p < ctx
        inner_tail = tail or paren
        s = (f"{_pf(f.left, names, taken, lctx, False)} {_BINOP[type(f)]} "
             f"{_pf(f.right, names, taken, rctx, inner_tail)}")
        return f"({s})" if paren else s
    if isinstance(f, _Quant):
        name = _binder_name(f.hint, taken | set(names))
        kw = "forall" if isinstance(f, Forall) else "exists"
        s = f"{kw} {name}. {_pf(f.body, (name,) + names, taken, 0, True)}"
        return s if tail else f"({s})"
    raise TypeError(f"not a formula: {f!r}")


def print_sequent(s: Sequent) -> str:
    ante = ", ".join(print_formula(f) for f in s.antecedent)
    succ = "" if s.succedent is None else print_formula(s.succedent)
    return " ".join(x for x in (ante, "=>", succ) if x)


def print_hypersequent(h: Hypersequent) -> str:
    return " || ".join(print_sequent(c) for c in h.components)


# -------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>\|\||=>|->|[~&|().,])|(?P<bad>\S))"
)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = _strip_comments(text)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group("bad"):
            raise SyntaxError_(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.arity: dict[tuple[str, str], int] = {}

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.next()
        if t[1] != value:
            raise SyntaxError_(f"expected {value!r}, got {t[1] or 'end of input'!r}", t[2])
        return t

    def at(self, value: str) -> bool:
        return self.peek()[1] == value and self.peek()[0] == "op"

    def _check_arity(self, kind: str, name: str, n: int, pos: int):
        prev = self.arity.setdefault((kind, name), n)
        if prev != n:
            raise SyntaxError_(f"arity mismatch for {name}: {n} vs {prev}", pos)

    # formula := impl
    def formula(self, scope: tuple) -> Formula:
        left = self.disj(scope)
        if self.at("->"):
            self.next()
            return Impl(left, self.formula(scope))
        return left

    def disj(self, scope):
        left = self.conj(scope)
        while self.at("|"):
            self.next()
            left = Or(left, self.conj(scope))
        return left

    def conj(self, scope):
        left = self.unary(scope)
        while self.at("&"):
            self.next()
            left = And(left, self.unary(scope))
        return left

    def unary(self, scope):
        kind, val, pos = self.peek()
        if kind == "op" and val == "~":
            self.next()
            return Neg(self.unary(scope))
        if kind == "id" and val in ("forall", "exists"):
            self.next()
            k2, name, p2 = self.next()
            if k2 != "id" or not name[0].islower():
                raise SyntaxError_("expected bound variable name", p2)
            self.expect(".")
            body = self.formula((name,) + scope)
            cls = Forall if val == "forall" else Exists
            return cls(body, name)
        return self.atom(scope)

    def atom(self, scope):
        kind, val, pos = self.next()
        if kind == "op" and val == "(":
            f = self.formula(scope)
            self.expect(")")
            return f
        if kind != "id":
            raise SyntaxError_(f"unexpected {val or 'end of input'!r}", pos)
        if val == "T":
            return TOP
        if val == "F":
            return BOTTOM
        if val[0].isupper():
            args = ()
            if self.at("("):
                self.next()
                args = self.term_list(scope)
            self._check_arity("pred", val, len(args), pos)
            return Atom(val, args)
        if val in scope:
            raise SyntaxError_(f"bound variable {val!r} used as a formula", pos)
        return Prop(val)

    def term_list(self, scope) -> tuple:
        args = []
        if self.at(")"):
            self.next()
            return ()
        args.append(self.term(scope))
        while self.at(","):
            self.next()
            args.append(self.term(scope))
        self.expect(")")
        return tuple(args)

    def term(self, scope) -> Term:
        kind, val, pos = self.next()
        if kind != "id" or not val[0].islower():
            raise SyntaxError_(f"expected term, got {val or 'end of input'!r}", pos)
        if self.at("("):
            self.next()
            args = self.term_list(scope)
            self._check_arity("func", val, len(args), pos)
            return Const(val) if not args else Func(val, args)
        if val in scope:
            return BoundVar(scope.index(val))
        return FreeVar(val)

    def sequent(self) -> Sequent:
        ante = []
        if not self.at("=>"):
            ante.append(self.formula(()))
            while self.at(","):
                self.next()
                ante.append(self.formula(()))
        self.expect("=>")
        succ = None
        kind, val, pos = self.peek()
        if not (kind == "eof" or (kind == "op" and val in ("||", ")"))):
            succ = self.formula(())
            if self.at(","):
                raise SyntaxError_("more than one succedent formula", self.peek()[2])
        return Sequent(tuple(ante), succ)

    def hypersequent(self) -> Hypersequent:
        comps = [self.sequent()]
        while self.at("||"):
            self.next()
            comps.append(self.sequent())
        return Hypersequent(tuple(comps))

    def done(self):
        kind, val, pos = self.peek()
        if kind != "eof":
            raise SyntaxError_(f"trailing input {val!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula(())
    p.done()
    return f


def parse_hypersequent(text: str) -> Hypersequent:
    p = _Parser(text)
    h = p.hypersequent()
    p.done()
    return h


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    s = p.sequent()
    p.done()
    return s


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term(())
    p.done()
    return t


# pretty __str__ for formulas and terms
for _cls in (Atom, Prop, Top, Bottom, Neg, And, Or, Impl, Forall, Exists):
    _cls.__str__ = print_formula  # type: ignore[assignment]
for _cls in (FreeVar, BoundVar, Const, Func):
    _cls.__str__ = print_term  # type: ignore[assignment]
