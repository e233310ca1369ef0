"""Command-line front end.

Exit codes: 0 on success, 1 on a domain failure (a check fails, a countermodel is
found, a transform cannot finish), 2 on usage, file or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import kernel
from .calculus import CalculusConfig, RuleName as R
from .fixtures import FIXTURES, fixture
from .proof import Derivation, ScriptError, check_derivation, format_script, parse_script, stats
from .semantics import (
    Countermodel, SemanticsError, decide_propositional, eval_formula, parse_model,
    sample_interpretations, satisfies, schema_of_hypersequents, translate, translate_sequent,
)
from .syntax import SyntaxError_, hyper, parse_formula, parse_hypersequent, seq
from .transform import (
    TransformError, TransformReport, atomize_axioms, cm_normalize, cut_eliminate,
    midhypersequent, replace_or_left, tt_eliminate,
)

KINDS = ("cut-elim", "tt-elim", "midseq", "cm-normalize", "atomize", "or-prime")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _config(args) -> Optional[CalculusConfig]:
    if getattr(args, "config", None) is None:
        return None
    try:
        return CalculusConfig.parse(args.config)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(args) -> Derivation:
    return parse_script(_read(args.file), _config(args))


def _write(text: str, out: Optional[str], stdout) -> None:
    if out is None:
        stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot write {out}: {e.strerror or e}") from None


def _parse_claim(text: str):
    """A formula, or a hypersequent when the text is not a single formula."""
    try:
        return hyper(seq((), parse_formula(text)))
    except SyntaxError_:
        return parse_hypersequent(text)


# ------------------------------------------------------------------ commands

def cmd_check(args, out, err) -> int:
    d = _load(args)
    problems = check_derivation(d)
    if not problems:
        out.write(f"OK {d.name} ({d.config.name}, {stats(d).nodes} nodes)\n")
        return 0
    for nid, msg in problems:
        err.write(f"node {nid}: {msg}\n")
    out.write(f"FAILED {d.name}: {len(problems)} bad node(s)\n")
    return 1


def cmd_stats(args, out, err) -> int:
    d = _load(args)
    st = stats(d)
    lines = [f"name = {d.name}", f"config = {d.config.name}", f"length = {st.length}",
             f"nodes = {st.nodes}", f"order = {st.order}"]
    lines += [f"count.{r.value} = {st.count(r)}" for r in R if st.count(r)]
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_eval(args, out, err) -> int:
    text = _read(args.file)
    try:
        h = parse_script(text).root.conclusion
    except ScriptError:
        h = _parse_claim(text.strip())
    i = parse_model(_read(args.model))
    for s in h:
        out.write(f"{s} : {eval_formula(i, translate_sequent(s))}\n")
    ok = satisfies(i, h)
    out.write("SATISFIED\n" if ok else "FALSIFIED\n")
    return 0 if ok else 1


def cmd_decide(args, out, err) -> int:
    h = _parse_claim(args.text)
    try:
        verdict = decide_propositional(translate(h))
    except SemanticsError:
        verdict = None
    if verdict is not None:
        if isinstance(verdict, Countermodel):
            out.write(f"COUNTERMODEL value={verdict.value}\n")
            out.write(verdict.interpretation.to_text())
            return 1
        out.write("VALID\n")
        return 0
    # first-order: search sampled interpretations
    schema = schema_of_hypersequents([h], args.domain)
    for i in sample_interpretations(schema, args.seed, args.samples, args.grid):
        if not satisfies(i, h):
            out.write("COUNTERMODEL\n")
            out.write(i.to_text())
            return 1
    out.write(f"UNKNOWN no countermodel among {args.samples} sampled interpretations\n")
    return 0


def cmd_transform(args, out, err) -> int:
    d = _load(args)
    bad = check_derivation(d)
    if bad:
        for nid, msg in bad:
            err.write(f"node {nid}: {msg}\n")
        return 1
    rep = TransformReport(args.kind, stats(d), budget=args.budget)
    try:
        if args.kind == "cut-elim":
            res = cut_eliminate(d, args.budget, rep)
        elif args.kind == "tt-elim":
            res = tt_eliminate(d, True if args.stars else None, args.budget, rep)
        elif args.kind == "midseq":
            res, _ = midhypersequent(d, args.budget, rep)
        elif args.kind == "cm-normalize":
            res = cm_normalize(d, rep)
        elif args.kind == "atomize":
            res = atomize_axioms(d, rep)
        else:
            res = replace_or_left(d, None, rep)
    except TransformError as e:
        err.write(f"transform failed: {e}\n")
        return 1
    _write(format_script(res), args.out, out)
    err.write(rep.to_text())
    return 0


def cmd_fixtures(args, out, err) -> int:
    if args.action == "list":
        for name in FIXTURES:
            d = fixture(name)
            out.write(f"{name}\t{d.config.name}\t{d.root.conclusion}\n")
        return 0
    if args.name is None:
        raise UsageError("fixtures emit needs a NAME or 'all'")
    if args.name == "all":
        if args.out is None:
            out.write("".join(format_script(fixture(n)) + "\n" for n in FIXTURES))
            return 0
        target = Path(args.out)
        target.mkdir(parents=True, exist_ok=True)
        for n in FIXTURES:
            (target / f"{n}.hpf").write_text(format_script(fixture(n)), encoding="utf-8")
        return 0
    if args.name not in FIXTURES:
        raise UsageError(f"unknown fixture {args.name!r}")
    _write(format_script(fixture(args.name)), args.out, out)
    return 0


def cmd_selftest(args, out, err) -> int:
    from .randproof import random_derivation
    from .calculus import HIF, HIF_STAR
    seed = args.seed
    results = []

    def suite(name, fn):
        try:
            ok, detail = fn()
        except Exception as e:  # noqa: BLE001 - any crash is a failure of the suite
            ok, detail = False, f"{type(e).__name__}: {e}"
        results.append(ok)
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")

    def fixtures_check():
        bad = [n for n in FIXTURES if check_derivation(fixture(n))]
        return not bad, f"{len(FIXTURES) - len(bad)}/{len(FIXTURES)} fixtures check"

    def round_trip():
        ds = [random_derivation(seed + k, HIF) for k in range(10)]
        same = sum(format_script(parse_script(format_script(d))) == format_script(d) for d in ds)
        return same == len(ds), f"{same}/{len(ds)} scripts round-trip"

    def soundness():
        bad = 0
        for k in range(10):
            d = random_derivation(seed + k, HIF, quantifiers=bool(k % 2))
            h = d.root.conclusion
            schema = schema_of_hypersequents([h], 2)
            bad += sum(not satisfies(i, h) for i in sample_interpretations(schema, seed, 50, 8))
        return bad == 0, f"{bad} violations over 10 derivations x 50 interpretations"

    def cut_elim():
        d = random_derivation(seed, HIF_STAR, min_cuts=1)
        r = cut_eliminate(d)
        ok = not check_derivation(r) and stats(r).count(R.CUT) == 0 \
            and r.root.conclusion == d.root.conclusion
        return ok, f"{stats(d).count(R.CUT)} cut(s) removed"

    def tt_elim():
        d = random_derivation(seed, HIF, min_tt=1)
        r = tt_eliminate(d)
        ok = not check_derivation(r) and stats(r).count(R.TT) == 0 \
            and r.root.conclusion == d.root.conclusion
        return ok, f"{stats(d).count(R.TT)} tt removed"

    suite("fixtures", fixtures_check)
    suite("round-trip", round_trip)
    suite("soundness", soundness)
    suite("cut-elimination", cut_elim)
    suite("tt-elimination", tt_elim)
    out.write(f"kernel backend = {kernel.BACKEND}\n")
    return 0 if all(results) else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hifkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp):
        sp.add_argument("--config", help="hif, hif-minus, hif-star or custom(flag,...)")
        return sp

    sp = with_config(sub.add_parser("check", help="check a proof script"))
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_check)

    sp = with_config(sub.add_parser("stats", help="print proof statistics"))
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_stats)

    sp = sub.add_parser("eval", help="evaluate a script's end hypersequent or a formula file")
    sp.add_argument("file")
    sp.add_argument("model")
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("decide", help="decide validity of a formula or hypersequent")
    sp.add_argument("text")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--grid", type=int, default=12)
    sp.add_argument("--domain", type=int, default=3, help="domain size for first-order sampling")
    sp.set_defaults(fn=cmd_decide)

    sp = with_config(sub.add_parser("transform", help="transform a proof script"))
    sp.add_argument("file")
    sp.add_argument("--kind", required=True, choices=KINDS)
    sp.add_argument("--budget", type=int, default=10 ** 6)
    sp.add_argument("--stars", action="store_true", help="use the star rules in tt-elim")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_transform)

    sp = sub.add_parser("fixtures", help="list or emit the built-in fixtures")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_fixtures)

    sp = sub.add_parser("selftest", help="run the invariant suites")
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.fn(args, out, err)
    except (UsageError, ScriptError, SyntaxError_, SemanticsError) as e:
        err.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
