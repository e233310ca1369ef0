"""Pure-Python chain enumeration kernel (fallback for ``_chain``).

A propositional formula is compiled to a flat postfix program of
``(opcode, argument)`` pairs.  Truth values are integer levels ``0..top``
of a finite chain; only their order matters for Goedel connectives.
"""

OP_VAR = 0
OP_CONST = 1
OP_NEG = 2
OP_AND = 3
OP_OR = 4
OP_IMPL = 5


def run_program(program, values, top):
    stack = []
    push = stack.append
    pop = stack.pop
    for i in range(0, len(program), 2):
        op = program[i]
        if op == OP_VAR:
            push(values[program[i + 1]])
        elif op == OP_CONST:
            push(program[i + 1])
        elif op == OP_NEG:
            push(top if pop() == 0 else 0)
        else:
            b = pop()
            a = pop()
            if op == OP_AND:
                push(a if a < b else b)
            elif op == OP_OR:
                push(a if a > b else b)
            else:
                push(b if a > b else top)
    return stack[0]


def first_falsifying(program, nvars, top):
    """Index of the first assignment (base ``top+1``, last variable fastest)
    whose value is below ``top``; -1 if every assignment evaluates to ``top``."""
    base = top + 1
    values = [0] * nvars
    total = base ** nvars
    for idx in range(total):
        if run_program(program, values, top) != top:
            return idx
        # increment odometer
        j = nvars - 1
        while j >= 0:
            values[j] += 1
            if values[j] < base:
                break
            values[j] = 0
            j -= 1
    return -1


def count_falsifying(program, nvars, top):
    base = top + 1
    values = [0] * nvars
    n = 0
    for _ in range(base ** nvars):
        if run_program(program, values, top) != top:
            n += 1
        j = nvars - 1
        while j >= 0:
            values[j] += 1
            if values[j] < base:
                break
            values[j] = 0
            j -= 1
    return n
