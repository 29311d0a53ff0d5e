"""Slow, obviously-correct measure implementations used as test oracles.

Everything here works from the definitions over explicit input tuples
and Fractions, sharing no code with the package beyond the truth table.
"""

from fractions import Fraction
from itertools import combinations, product


def inputs(n):
    """All inputs in index order: coordinate 1 is the least significant bit."""
    return [tuple(reversed(t)) for t in product((0, 1), repeat=n)]


def value(f, x):
    return f.table >> sum(b << i for i, b in enumerate(x)) & 1


def flip(x, block):
    return tuple(1 - b if i + 1 in block else b for i, b in enumerate(x))


def subsets(n):
    for r in range(n + 1):
        yield from (frozenset(c) for c in combinations(range(1, n + 1), r))


def mobius(f):
    """a_S = sum over T subset of S of (-1)^{|S|-|T|} f(1_T)."""
    n = f.arity
    out = {}
    for S in subsets(n):
        total = 0
        for T in subsets(n):
            if T <= S:
                x = tuple(1 if i + 1 in T else 0 for i in range(n))
                total += (-1) ** (len(S) - len(T)) * value(f, x)
        if total:
            out[S] = total
    return out


def fourier(f, signed=False):
    n = f.arity
    out = {}
    for S in subsets(n):
        acc = Fraction(0)
        for x in inputs(n):
            fx = (-1) ** value(f, x) if signed else value(f, x)
            acc += fx * (-1) ** sum(x[i - 1] for i in S)
        acc /= 2**n
        if acc:
            out[S] = acc
    return out


def degree(f):
    return max((len(S) for S in mobius(f)), default=0)


def degree_in(f, i):
    return max((len(S) for S in mobius(f) if i in S), default=None)


def influence(f, i):
    xs = inputs(f.arity)
    return Fraction(sum(value(f, x) != value(f, flip(x, {i})) for x in xs), len(xs))


def sensitivity_at(f, x):
    return sum(value(f, x) != value(f, flip(x, {i})) for i in range(1, f.arity + 1))


def sensitivity(f):
    return max((sensitivity_at(f, x) for x in inputs(f.arity)), default=0)


def block_sensitivity_at(f, x):
    n = f.arity
    sens = [B for B in subsets(n) if B and value(f, flip(x, B)) != value(f, x)]

    def best(free, start):
        top = 0
        for k in range(start, len(sens)):
            if sens[k] <= free:
                top = max(top, 1 + best(free - sens[k], k + 1))
        return top

    return best(frozenset(range(1, n + 1)), 0)


def block_sensitivity(f):
    return max((block_sensitivity_at(f, x) for x in inputs(f.arity)), default=0)


def s_index(f, i):
    """max over x with f(x^i) != f(x) of s_x + s_{x^i}; None if i is irrelevant."""
    vals = [sensitivity_at(f, x) + sensitivity_at(f, flip(x, {i}))
            for x in inputs(f.arity) if value(f, x) != value(f, flip(x, {i}))]
    return max(vals) if vals else None


def w_measure(f):
    return sum((Fraction(1, 2**d) for d in (degree_in(f, i) for i in range(1, f.arity + 1)) if d is not None),
               Fraction(0))
