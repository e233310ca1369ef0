"""Derivation trees, whole-proof checking, statistics and the proof script format."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .calculus import (
    HIF, NO_AUX, QUANTIFIER_RULES, LOGICAL_PROPOSITIONAL, Aux, CalculusConfig, RuleError,
    RuleInstance, RuleName, build_instance, check_instance, locate,
)
from .syntax import (
    Hypersequent, Sequent, Formula, SyntaxError_, parse_formula, parse_hypersequent,
    parse_term, print_formula, print_term,
)

R = RuleName


class StructuralMismatch(RuleError):
    """A declared premise differs from the conclusion of the child node."""


class ScriptError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, eq=False)
class Node:
    rule: RuleName
    conclusion: Hypersequent
    children: tuple = ()
    active: tuple = ()           # per child index tuple, then the conclusion's
    aux: Aux = NO_AUX
    premises: Optional[tuple] = None   # declared premises; None = children's conclusions

    def instance(self) -> RuleInstance:
        prem = self.premises if self.premises is not None else tuple(c.conclusion for c in self.children)
        return RuleInstance(self.rule, prem, self.conclusion, self.active, self.aux)

    def walk(self) -> Iterator["Node"]:
        """Post-order traversal."""
        stack = [(self, False)]
        while stack:
            n, done = stack.pop()
            if done:
                yield n
                continue
            stack.append((n, True))
            for c in reversed(n.children):
                stack.append((c, False))

    def distinct(self) -> Iterator["Node"]:
        """Post-order traversal visiting each shared subproof once."""
        seen: set[int] = set()
        stack = [(self, False)]
        while stack:
            n, done = stack.pop()
            if done:
                if id(n) not in seen:
                    seen.add(id(n))
                    yield n
                continue
            if id(n) in seen:
                continue
            stack.append((n, True))
            for c in reversed(n.children):
                if id(c) not in seen:
                    stack.append((c, False))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def depth(self) -> int:
        memo: dict[int, int] = {}
        for n in self.distinct():
            memo[id(n)] = 1 + max((memo[id(c)] for c in n.children), default=0)
        return memo[id(self)]

    def with_children(self, children: Sequence["Node"]) -> "Node":
        return Node(self.rule, self.conclusion, tuple(children), self.active, self.aux)


@dataclass(frozen=True)
class Derivation:
    root: Node
    name: str = "proof"
    config: CalculusConfig = HIF
    notes: tuple = ()

    @property
    def conclusion(self) -> Hypersequent:
        return self.root.conclusion

    def nodes(self) -> list[Node]:
        return list(self.root.walk())


# ------------------------------------------------------------ construction

def axiom(f: Formula) -> Node:
    inst = build_instance(R.AXIOM, (), (), Aux(formula=f))
    return Node(R.AXIOM, inst.conclusion, (), inst.active, inst.aux)


def infer(rule: RuleName, children: Sequence[Node], actives: Sequence[Sequence[Sequent]],
          aux: Aux = NO_AUX) -> Node:
    """Build a node from children, naming each child's active components by value."""
    children = tuple(children)
    idx = [locate(c.conclusion, a) for c, a in zip(children, actives)]
    inst = build_instance(rule, [c.conclusion for c in children], idx, aux)
    return Node(rule, inst.conclusion, children, inst.active, inst.aux)


def node_from_conclusion(rule: RuleName, children: Sequence[Node], conclusion: Hypersequent,
                         actives: Sequence[Sequence[Sequent]], conc_active: Sequence[Sequent],
                         aux: Aux = NO_AUX) -> Node:
    children = tuple(children)
    idx = tuple(locate(c.conclusion, a) for c, a in zip(children, actives))
    return Node(rule, conclusion, children, idx + (locate(conclusion, conc_active),), aux)


# ---------------------------------------------------------------- checking

def number_nodes(root: Node) -> dict[int, int]:
    """Map id(node) -> script id (post-order, from 1; shared subproofs numbered once)."""
    return {id(n): k for k, n in enumerate(root.distinct(), 1)}


def check_derivation(d: Derivation | Node, config: CalculusConfig | None = None
                     ) -> list[tuple[int, RuleError]]:
    """All failures as (node id, error); an empty list means the derivation checks."""
    if isinstance(d, Derivation):
        root, cfg = d.root, config or d.config
    else:
        root, cfg = d, config or HIF
    errors = []
    for k, n in enumerate(root.distinct(), 1):
        try:
            if n.premises is not None:
                if len(n.premises) != len(n.children):
                    raise StructuralMismatch("declared premises do not match children")
                for j, (p, c) in enumerate(zip(n.premises, n.children), 1):
                    if p != c.conclusion:
                        raise StructuralMismatch(f"premise {j} differs from child conclusion")
            check_instance(n.instance(), cfg)
        except RuleError as e:
            errors.append((k, e))
    return errors


def checks(d: Derivation | Node, config: CalculusConfig | None = None) -> bool:
    return not check_derivation(d, config)


# ------------------------------------------------------------------- stats

@dataclass(frozen=True)
class ProofStats:
    length: int
    counts: dict
    order: int
    nodes: int

    def count(self, rule: RuleName) -> int:
        return self.counts.get(rule, 0)


def _tree_stats(root: Node) -> tuple[Counter, int]:
    # rule counts of the unfolded tree, and the sum over quantifier inferences of the
    # propositional inferences strictly below them
    counts: dict[int, Counter] = {}
    quants: dict[int, int] = {}
    order: dict[int, int] = {}
    for n in root.distinct():
        c = Counter({n.rule: 1})
        q = 1 if n.rule in QUANTIFIER_RULES else 0
        o = 0
        prop = n.rule in LOGICAL_PROPOSITIONAL
        for k in n.children:
            c.update(counts[id(k)])
            q += quants[id(k)]
            o += order[id(k)] + (quants[id(k)] if prop else 0)
        counts[id(n)], quants[id(n)], order[id(n)] = c, q, o
    return counts[id(root)], order[id(root)]


def stats(d: Derivation | Node) -> ProofStats:
    root = d.root if isinstance(d, Derivation) else d
    counts, order = _tree_stats(root)
    return ProofStats(root.depth(), dict(counts), order, sum(counts.values()))


# ---------------------------------------------------------- script format

_HEAD = re.compile(r"^proof\s+(\S+)\s+config\s+(\S+)\s*$")
_LINE = re.compile(
    r"^(?P<id>\d+)\s*:\s*(?P<rule>[A-Za-z][A-Za-z0-9-]*)\s*"
    r"\[(?P<prem>[^\]]*)\]\s*(?:\{(?P<aux>[^}]*)\})?\s*::\s*(?P<hs>.*)$"
)
_QED = re.compile(r"^qed\s+(\d+)\s*$")


def _parse_active(text: str, npre: int, lineno: int) -> tuple:
    out: dict[str, tuple] = {}
    for part in text.split("/"):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise ScriptError(f"bad active annotation {part!r}", lineno)
        key, vals = part.split(":", 1)
        try:
            out[key.strip()] = tuple(int(v) for v in vals.split(",") if v.strip())
        except ValueError:
            raise ScriptError(f"bad active indices {vals!r}", lineno) from None
    return tuple(out.get(f"p{k}", ()) for k in range(1, npre + 1)) + (out.get("c", ()),)


def _fmt_active(active: tuple) -> str:
    parts = [f"p{k}:{','.join(map(str, a))}" for k, a in enumerate(active[:-1], 1)]
    parts.append(f"c:{','.join(map(str, active[-1]))}")
    return "/".join(parts)


def parse_script(text: str, config: CalculusConfig | None = None) -> Derivation:
    """Parse a ``.hpf`` proof script; shared premises are expanded into a tree."""
    name, cfg, root_id = None, None, None
    nodes: dict[int, Node] = {}
    notes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            if stripped.startswith("#!"):
                notes.append(stripped[2:].strip())
            continue
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if name is None:
            m = _HEAD.match(line)
            if not m:
                raise ScriptError("expected 'proof <name> config <config>'", lineno)
            name = m.group(1)
            try:
                cfg = CalculusConfig.parse(m.group(2))
            except ValueError as e:
                raise ScriptError(str(e), lineno) from None
            continue
        m = _QED.match(line)
        if m:
            root_id = int(m.group(1))
            continue
        m = _LINE.match(line)
        if not m:
            raise ScriptError(f"cannot parse {raw.strip()!r}", lineno)
        nid = int(m.group("id"))
        if nid < 1 or nid in nodes:
            raise ScriptError(f"bad or duplicate id {nid}", lineno)
        try:
            rule = RuleName.lookup(m.group("rule"))
        except KeyError as e:
            raise ScriptError(str(e), lineno) from None
        prem_ids = [int(x) for x in m.group("prem").split(",") if x.strip()]
        for p in prem_ids:
            if p not in nodes:
                raise ScriptError(f"premise {p} is not defined before use", lineno)
        try:
            conclusion = parse_hypersequent(m.group("hs"))
            aux, active = _parse_aux(m.group("aux") or "", len(prem_ids), lineno)
        except SyntaxError_ as e:
            raise ScriptError(str(e), lineno) from None
        nodes[nid] = Node(rule, conclusion, tuple(nodes[p] for p in prem_ids), active, aux)
    if name is None:
        raise ScriptError("empty script")
    if root_id is None:
        raise ScriptError("missing 'qed <root-id>'")
    if root_id not in nodes:
        raise ScriptError(f"qed refers to unknown id {root_id}")
    return Derivation(nodes[root_id], name, config or cfg, tuple(notes))


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_aux(text: str, npre: int, lineno: int) -> tuple[Aux, tuple]:
    kw = {}
    active = None
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ScriptError(f"bad aux item {item!r}", lineno)
        key, val = (s.strip() for s in item.split("=", 1))
        if key == "active":
            active = _parse_active(val, npre, lineno)
        elif key == "formula":
            kw["formula"] = parse_formula(val)
        elif key == "term":
            kw["term"] = parse_term(val)
        elif key == "eigen":
            kw["eigen"] = val
        else:
            raise ScriptError(f"unknown aux key {key!r}", lineno)
    if active is None:
        raise ScriptError("missing active=... annotation", lineno)
    return Aux(**kw), active


def format_script(d: Derivation) -> str:
    """Canonical serialization: post-order ids, canonical multiset order, no comments."""
    ids = number_nodes(d.root)
    lines = [f"proof {d.name} config {d.config.name}"]
    for n in d.root.distinct():
        prem = ",".join(str(ids[id(c)]) for c in n.children)
        aux = [f"active={_fmt_active(n.active)}"]
        if n.aux.formula is not None:
            aux.append(f"formula={print_formula(n.aux.formula)}")
        if n.aux.term is not None:
            aux.append(f"term={print_term(n.aux.term)}")
        if n.aux.eigen is not None:
            aux.append(f"eigen={n.aux.eigen}")
        lines.append(f"{ids[id(n)]}: {n.rule.value} [{prem}] {{{'; '.join(aux)}}} :: {n.conclusion}")
    lines.append(f"qed {ids[id(d.root)]}")
    return "\n".join(lines) + "\n"
