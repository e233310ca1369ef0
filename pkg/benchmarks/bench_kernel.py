"""Compare the compiled chain kernel with its pure-Python fallback.

Usage: python3 benchmarks/bench_kernel.py [--letters 3 4 5] [--formulas 20] [--repeat 3]

Each formula is a random propositional formula over the given number of
letters; the timed call counts all falsifying assignments on the
(n+2)-element chain, which is the exhaustive search the decider runs on
valid inputs.
"""

import argparse
import random
import time

from hifkit import _chain_py
from hifkit.semantics import compile_program, propositional_letters
from hifkit.syntax import And, Atom, Impl, Neg, Or


def formula(rng, letters, depth):
    if depth == 0 or rng.random() < 0.2:
        return rng.choice(letters)
    k = rng.randrange(4)
    if k == 0:
        return Neg(formula(rng, letters, depth - 1))
    return (And, Or, Impl)[k - 1](formula(rng, letters, depth - 1), formula(rng, letters, depth - 1))


def workload(n, count, seed):
    rng = random.Random(seed)
    atoms = [Atom(chr(ord("A") + i)) for i in range(n)]
    out = []
    while len(out) < count:
        f = formula(rng, atoms, 6)
        letters = propositional_letters(f)
        if len(letters) == n:
            out.append((compile_program(f, letters, n + 1), n, n + 1))
    return out


def timed(impl, programs, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for prog, n, top in programs:
            impl.count_falsifying(prog, n, top)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--letters", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--formulas", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    try:
        from hifkit import _chain as compiled
    except ImportError:
        compiled = None
        print("compiled extension not built; timing the fallback only")
    print(f"{'letters':>7} {'assignments':>11} {'python s':>10} {'compiled s':>10} {'speedup':>8}")
    for n in args.letters:
        programs = workload(n, args.formulas, args.seed)
        py = timed(_chain_py, programs, args.repeat)
        line = f"{n:>7} {(n + 2) ** n:>11} {py:>10.4f}"
        if compiled is not None:
            c = timed(compiled, programs, args.repeat)
            line += f" {c:>10.4f} {py / c:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
