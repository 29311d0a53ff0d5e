"""Truth-table Boolean functions.

Coordinates are 1-based, as in ``x_1 .. x_n``. Input ``x`` sits at table
index ``sum(x_i * 2**(i-1))``, so ``x_1`` is the least significant bit. The
table itself is stored as a Python int whose bit ``k`` is ``f`` at index
``k``. Subsets of coordinates are passed around either as iterables of
coordinates or, internally, as bitmasks with bit ``i-1`` for coordinate ``i``.
Arity 0 is allowed so that a total restriction is still a function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_ARITY = 20


def mask_of(coords: Iterable[int]) -> int:
    m = 0
    for i in coords:
        m |= 1 << (i - 1)
    return m


def coords_of(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class BooleanFunction:
    arity: int
    table: int

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_ARITY:
            raise ValueError(f"arity must be in [0, {MAX_ARITY}], got {self.arity}")
        if not 0 <= self.table < 1 << (1 << self.arity):
            raise ValueError("table does not fit in 2^arity bits")

    @property
    def size(self) -> int:
        return 1 << self.arity

    def value_at(self, index: int) -> int:
        return self.table >> index & 1

    def index_of(self, x: Sequence[int]) -> int:
        if len(x) != self.arity:
            raise ValueError(f"input has length {len(x)}, expected {self.arity}")
        idx = 0
        for i, b in enumerate(x):
            if b not in (0, 1):
                raise ValueError(f"input bits must be 0/1, got {b!r}")
            idx |= b << i
        return idx

    def input_at(self, index: int) -> tuple[int, ...]:
        return tuple(index >> i & 1 for i in range(self.arity))

    def __call__(self, *x: int) -> int:
        if len(x) == 1 and not isinstance(x[0], int):
            x = tuple(x[0])
        return self.value_at(self.index_of(x))

    def bits(self) -> str:
        return "".join(str(self.table >> k & 1) for k in range(self.size))

    def to_array(self) -> np.ndarray:
        return np.array([self.table >> k & 1 for k in range(self.size)], dtype=np.int64)

    def is_constant(self) -> bool:
        return self.table == 0 or self.table == (1 << self.size) - 1

    def negate(self) -> "BooleanFunction":
        return BooleanFunction(self.arity, self.table ^ ((1 << self.size) - 1))

    def __str__(self) -> str:
        return to_text(self)


# -- construction and text format -------------------------------------------


def from_bits(n: int, bits: Sequence[int] | str) -> BooleanFunction:
    """Build from a bit sequence listed in index order (``bits[k] = f(index k)``)."""
    if len(bits) != 1 << n:
        raise ValueError(f"need {1 << n} bits for arity {n}, got {len(bits)}")
    table = 0
    for k, b in enumerate(bits):
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"bit {k} is {b!r}, expected 0 or 1")
        table |= b << k
    return BooleanFunction(n, table)


def from_array(n: int, arr: np.ndarray) -> BooleanFunction:
    return BooleanFunction(n, int.from_bytes(np.packbits(np.asarray(arr, dtype=np.uint8), bitorder="little").tobytes(), "little"))


def parse(text: str) -> BooleanFunction:
    """Parse ``"n:BITSTRING"`` or ``"n:0xHEX"``.

    The hex form encodes the table integer (bit ``k`` = ``f`` at index ``k``)
    most significant nibble first.
    """
    head, sep, body = text.strip().partition(":")
    if not sep:
        raise ValueError(f"expected 'n:BITS', got {text!r}")
    try:
        n = int(head)
    except ValueError:
        raise ValueError(f"bad arity {head!r}") from None
    if not 0 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be in [0, {MAX_ARITY}], got {n}")
    body = body.strip()
    if body[:2].lower() == "0x":
        digits = body[2:]
        if not digits or any(c not in "0123456789abcdefABCDEF" for c in digits):
            raise ValueError(f"bad hex table {body!r}")
        if len(digits) != hex_width(n):
            raise ValueError(f"hex table for arity {n} needs {hex_width(n)} digits, got {len(digits)}")
        table = int(digits, 16)
        if table >> (1 << n):
            raise ValueError("hex table has bits beyond 2^n")
        return BooleanFunction(n, table)
    if any(c not in "01" for c in body):
        raise ValueError(f"bad bit string {body!r}")
    return from_bits(n, body)


def hex_width(n: int) -> int:
    return max(1, (1 << n) // 4)


def to_text(f: BooleanFunction) -> str:
    return f"{f.arity}:{f.bits()}"


def to_hex(f: BooleanFunction) -> str:
    return f"{f.arity}:0x{f.table:0{hex_width(f.arity)}x}"


def evaluate(f: BooleanFunction, x: Sequence[int]) -> int:
    return f.value_at(f.index_of(x))


def flip_block(x: Sequence[int], block: Iterable[int]) -> tuple[int, ...]:
    y = list(x)
    for i in block:
        if not 1 <= i <= len(y):
            raise ValueError(f"coordinate {i} outside [1, {len(y)}]")
        y[i - 1] ^= 1
    return tuple(y)


# -- common functions -------------------------------------------------------


def from_predicate(n: int, pred) -> BooleanFunction:
    table = 0
    for idx in range(1 << n):
        if pred(tuple(idx >> i & 1 for i in range(n))):
            table |= 1 << idx
    return BooleanFunction(n, table)


def constant(n: int, value: int) -> BooleanFunction:
    return BooleanFunction(n, (1 << (1 << n)) - 1 if value else 0)


def dictator(n: int = 1, i: int = 1) -> BooleanFunction:
    return from_predicate(n, lambda x: x[i - 1])


def and_(n: int) -> BooleanFunction:
    return BooleanFunction(n, 1 << ((1 << n) - 1))


def or_(n: int) -> BooleanFunction:
    return BooleanFunction(n, (1 << (1 << n)) - 2)


def parity(n: int) -> BooleanFunction:
    return from_predicate(n, lambda x: sum(x) % 2)


def majority(n: int) -> BooleanFunction:
    return from_predicate(n, lambda x: 2 * sum(x) > n)


def tribes(width: int, count: int) -> BooleanFunction:
    """OR of ``count`` disjoint ANDs of ``width`` variables each."""
    return compose_blockwise(or_(count), and_(width))


# -- restriction ------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    values: Mapping[int, int]

    def __post_init__(self):
        if any(v not in (0, 1) for v in self.values.values()):
            raise ValueError("assignment values must be 0/1")
        object.__setattr__(self, "values", dict(sorted(self.values.items())))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.values)

    def __hash__(self):
        return hash(tuple(self.values.items()))


def assignments(coords: Iterable[int]) -> Iterator[Assignment]:
    """All ``2^|H|`` assignments to ``coords``, in index order."""
    coords = sorted(coords)
    for a in range(1 << len(coords)):
        yield Assignment({c: a >> k & 1 for k, c in enumerate(coords)})


def restrict(f: BooleanFunction, alpha: Assignment | Mapping[int, int]) -> BooleanFunction:
    """Fix the coordinates in ``alpha``; survivors are renumbered densely in order.

    Fixing every coordinate leaves an arity-0 constant.
    """
    values = alpha.values if isinstance(alpha, Assignment) else alpha
    for i in values:
        if not 1 <= i <= f.arity:
            raise ValueError(f"coordinate {i} outside [1, {f.arity}]")
    fixed_mask = mask_of(values)
    fixed_bits = mask_of(i for i, v in values.items() if v)
    return restrict_bits(f, fixed_mask, fixed_bits)


@lru_cache(maxsize=4096)
def _scatter(n: int, fixed_mask: int) -> tuple[int, ...]:
    free = [i for i in range(n) if not fixed_mask >> i & 1]
    out = []
    for y in range(1 << len(free)):
        idx = 0
        for k, i in enumerate(free):
            if y >> k & 1:
                idx |= 1 << i
        out.append(idx)
    return tuple(out)


def restrict_bits(f: BooleanFunction, fixed_mask: int, fixed_bits: int) -> BooleanFunction:
    """:func:`restrict` with the assignment given as two bitmasks."""
    scatter = _scatter(f.arity, fixed_mask)
    src = f.table
    base = fixed_bits & fixed_mask
    table = 0
    for y, idx in enumerate(scatter):
        if src >> (base | idx) & 1:
            table |= 1 << y
    return BooleanFunction(f.arity - fixed_mask.bit_count(), table)


# -- expansions -------------------------------------------------------------


class _SubsetCoeffs:
    """Dense coefficient vector indexed by coordinate-subset bitmask."""

    def __init__(self, arity: int, coeffs: Sequence):
        self.arity = arity
        self._c = tuple(coeffs)

    def __getitem__(self, subset) -> object:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return self._c[mask]

    def by_mask(self) -> tuple:
        return self._c

    def items(self) -> Iterator[tuple[frozenset[int], object]]:
        """Nonzero coefficients as (subset, value)."""
        for mask, v in enumerate(self._c):
            if v:
                yield coords_of(mask), v

    def as_dict(self) -> dict[frozenset[int], object]:
        return dict(self.items())

    def degree(self) -> int:
        return max((mask.bit_count() for mask, v in enumerate(self._c) if v), default=0)

    def __eq__(self, other):
        return type(other) is type(self) and self.arity == other.arity and self._c == other._c

    def __hash__(self):
        return hash((self.arity, self._c))

    def __repr__(self):
        body = ", ".join(f"{sorted(s)}: {v}" for s, v in self.items())
        return f"{type(self).__name__}(arity={self.arity}, {{{body}}})"


class MultilinearCoeffs(_SubsetCoeffs):
    """Integer coefficients ``a_S`` of the unique multilinear polynomial over {0,1}^n."""

    def evaluate(self, x: Sequence[int]) -> int:
        xm = mask_of(i + 1 for i, b in enumerate(x) if b)
        return sum(v for mask, v in enumerate(self._c) if v and mask & xm == mask)


class FourierCoeffs(_SubsetCoeffs):
    """Rational ``f^(S) = E[f(x) * (-1)^(sum_{i in S} x_i)]``: 0 maps to +1, 1 to -1."""


def _butterfly(arr: np.ndarray, n: int, op) -> np.ndarray:
    arr = arr.copy()
    for i in range(n):
        v = arr.reshape(-1, 2, 1 << i)
        op(v[:, 0, :], v[:, 1, :])
    return arr


def _mobius_step(lo, hi):
    hi -= lo


def _walsh_step(lo, hi):
    a = lo.copy()
    lo += hi
    hi[...] = a - hi


@lru_cache(maxsize=1 << 18)
def mobius_expand(f: BooleanFunction) -> MultilinearCoeffs:
    """Subset Mobius transform of the truth table: ``a_S = sum_{T <= S} (-1)^{|S-T|} f(T)``."""
    coeffs = _butterfly(f.to_array(), f.arity, _mobius_step)
    return MultilinearCoeffs(f.arity, (int(c) for c in coeffs))


@lru_cache(maxsize=1 << 16)
def fourier_expand(f: BooleanFunction, signed: bool = False) -> FourierCoeffs:
    """Walsh coefficients of ``f`` as a 0/1-valued function.

    With ``signed=True`` the coefficients are those of ``(-1)^f(x)`` instead,
    the +-1 encoding in which ``Inf[f] = sum |S| F^(S)^2`` holds verbatim.
    The two are related by ``F^(S) = -2 f^(S)`` for nonempty ``S``.
    """
    arr = f.to_array()
    if signed:
        arr = 1 - 2 * arr
    raw = _butterfly(arr, f.arity, _walsh_step)
    return FourierCoeffs(f.arity, (Fraction(int(c), f.size) for c in raw))


# -- composition ------------------------------------------------------------


def compose_blockwise(outer: BooleanFunction, inner: BooleanFunction) -> BooleanFunction:
    """``outer(inner(x^(1)), ..., inner(x^(b)))``; block ``j`` holds coordinates ``(j-1)m+1 .. jm``."""
    b, m = outer.arity, inner.arity
    n = b * m
    if n > MAX_ARITY:
        raise ValueError(f"composed arity {n} exceeds {MAX_ARITY}")
    low = (1 << m) - 1
    table = 0
    for idx in range(1 << n):
        y = 0
        for j in range(b):
            y |= inner.value_at(idx >> (j * m) & low) << j
        if outer.value_at(y):
            table |= 1 << idx
    return BooleanFunction(n, table)


def decision_tree_complete(d: int) -> BooleanFunction:
    """Complete depth-``d`` decision tree querying a fresh variable at every node.

    Nodes are numbered heap-style from 1 and node ``v`` queries ``x_v``;
    on 1 go to ``2v``, on 0 to ``2v+1``. A leaf outputs the last bit read,
    so depth 2 is ``x_1 ? x_2 : x_3``.
    """
    if d < 1:
        raise ValueError("depth must be >= 1")
    n = (1 << d) - 1
    if n > MAX_ARITY:
        raise ValueError(f"depth {d} needs {n} variables, over the {MAX_ARITY} limit")

    def run(x):
        v, bit = 1, 0
        while v <= n:
            bit = x[v - 1]
            v = 2 * v if bit else 2 * v + 1
        return bit

    return from_predicate(n, run)
