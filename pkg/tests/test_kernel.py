import random

import pytest

from hifkit import _chain_py, kernel
from hifkit.semantics import compile_program, propositional_letters
from hifkit.syntax import Atom

from propgen import random_prop_formula

compiled = pytest.importorskip("hifkit._chain")


def _programs(n, seed=0):
    rng = random.Random(seed)
    for _ in range(n):
        f = random_prop_formula(rng, 5)
        letters = propositional_letters(f)
        top = len(letters) + 1
        yield compile_program(f, letters, top), len(letters), top


def test_backend_name():
    assert kernel.BACKEND in ("compiled", "python")


def test_backends_agree():
    for program, n, top in _programs(150):
        assert compiled.first_falsifying(program, n, top) == _chain_py.first_falsifying(program, n, top)
        assert compiled.count_falsifying(program, n, top) == _chain_py.count_falsifying(program, n, top)
        values = [top // 2] * n
        assert compiled.run_program(program, values, top) == _chain_py.run_program(program, values, top)


def test_excluded_middle_on_three_element_chain():
    # A | ~A over 0 < 1 < 2 fails exactly at the middle value
    from hifkit.syntax import Neg, Or
    a = Atom("A")
    prog = compile_program(Or(a, Neg(a)), [("A", "A")], 2)
    for impl in (compiled, _chain_py):
        assert impl.first_falsifying(prog, 1, 2) == 1
        assert impl.count_falsifying(prog, 1, 2) == 1
