# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chain enumeration kernel; same contract as ``_chain_py``."""

from libc.stdlib cimport malloc, free

cdef enum:
    OP_VAR = 0
    OP_CONST = 1
    OP_NEG = 2
    OP_AND = 3
    OP_OR = 4
    OP_IMPL = 5


cdef inline long _run(long* prog, Py_ssize_t plen, long* values, long* stack, long top) nogil:
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t sp = 0
    cdef long op, a, b
    while i < plen:
        op = prog[i]
        if op == OP_VAR:
            stack[sp] = values[prog[i + 1]]
            sp += 1
        elif op == OP_CONST:
            stack[sp] = prog[i + 1]
            sp += 1
        elif op == OP_NEG:
            stack[sp - 1] = top if stack[sp - 1] == 0 else 0
        else:
            b = stack[sp - 1]
            a = stack[sp - 2]
            sp -= 1
            if op == OP_AND:
                stack[sp - 1] = a if a < b else b
            elif op == OP_OR:
                stack[sp - 1] = a if a > b else b
            else:
                stack[sp - 1] = b if a > b else top
        i += 2
    return stack[0]


cdef long _scan(list program, long nvars, long top, bint count_all) except -2:
    cdef Py_ssize_t plen = len(program)
    cdef long* prog = <long*> malloc(max(plen, 1) * sizeof(long))
    cdef long* values = <long*> malloc(max(nvars, 1) * sizeof(long))
    cdef long* stack = <long*> malloc(max(plen, 1) * sizeof(long))
    cdef long base = top + 1
    cdef long long idx = 0
    cdef long long total = 1
    cdef long found = -1
    cdef long n = 0
    cdef long j
    cdef Py_ssize_t k
    if prog == NULL or values == NULL or stack == NULL:
        free(prog); free(values); free(stack)
        raise MemoryError()
    try:
        for k in range(plen):
            prog[k] = program[k]
        for k in range(nvars):
            values[k] = 0
            total *= base
        with nogil:
            while idx < total:
                if _run(prog, plen, values, stack, top) != top:
                    if not count_all:
                        found = idx
                        break
                    n += 1
                j = nvars - 1
                while j >= 0:
                    values[j] += 1
                    if values[j] < base:
                        break
                    values[j] = 0
                    j -= 1
                idx += 1
    finally:
        free(prog)
        free(values)
        free(stack)
    return n if count_all else found


def run_program(program, values, long top):
    cdef list prog = list(program)
    cdef list vals = list(values)
    cdef Py_ssize_t plen = len(prog)
    cdef long* p = <long*> malloc(max(plen, 1) * sizeof(long))
    cdef long* v = <long*> malloc(max(len(vals), 1) * sizeof(long))
    cdef long* st = <long*> malloc(max(plen, 1) * sizeof(long))
    cdef Py_ssize_t k
    try:
        for k in range(plen):
            p[k] = prog[k]
        for k in range(len(vals)):
            v[k] = vals[k]
        return _run(p, plen, v, st, top)
    finally:
        free(p); free(v); free(st)


def first_falsifying(program, long nvars, long top):
    return _scan(list(program), nvars, top, False)


def count_falsifying(program, long nvars, long top):
    return _scan(list(program), nvars, top, True)
