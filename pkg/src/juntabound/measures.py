"""Exact complexity measures of truth-table functions.

Everything here is computed from the whole truth table, so cost grows like
``2^n`` or worse. Block sensitivity is the expensive one: for each input it
packs minimal sensitive blocks exactly, which is ``O(3^n)`` per input in the
worst case; it refuses arities above :data:`BS_ARITY_LIMIT`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .boolfn import BooleanFunction, coords_of, mask_of, mobius_expand

BS_ARITY_LIMIT = 12
REPORT_ARITY_LIMIT = 12


class ArityLimitError(ValueError):
    """The requested measure is not offered at this arity."""


# -- degree -----------------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def degree_profile(f: BooleanFunction) -> tuple[int, tuple[int | None, ...]]:
    """``(deg f, (deg_1 f, ..., deg_n f))`` with ``None`` for irrelevant coordinates."""
    per = [0] * f.arity
    deg = 0
    for mask, a in enumerate(mobius_expand(f).by_mask()):
        if a:
            k = mask.bit_count()
            deg = max(deg, k)
            m = mask
            while m:
                low = m & -m
                i = low.bit_length() - 1
                if k > per[i]:
                    per[i] = k
                m ^= low
    return deg, tuple(d if d else None for d in per)


def degree(f: BooleanFunction) -> int:
    return degree_profile(f)[0]


def degree_in_var(f: BooleanFunction, i: int) -> int | None:
    """Largest monomial degree containing ``x_i``; ``None`` when ``x_i`` is irrelevant."""
    _check_coord(f, i)
    return degree_profile(f)[1][i - 1]


def relevant(f: BooleanFunction) -> frozenset[int]:
    return frozenset(i + 1 for i, d in enumerate(degree_profile(f)[1]) if d is not None)


def _check_coord(f: BooleanFunction, i: int) -> None:
    if not 1 <= i <= f.arity:
        raise ValueError(f"coordinate {i} outside [1, {f.arity}]")


# -- influence --------------------------------------------------------------


@lru_cache(maxsize=64)
def _zero_bit_mask(n: int, i: int) -> int:
    """Bitmask over table indices whose bit ``i`` (0-based) is clear."""
    return sum(1 << idx for idx in range(1 << n) if not idx >> i & 1)


def _edge_count(f: BooleanFunction, i: int) -> int:
    """Number of edges in direction ``i`` (1-based) on which ``f`` changes."""
    s = 1 << (i - 1)
    return ((f.table ^ (f.table >> s)) & _zero_bit_mask(f.arity, i - 1)).bit_count()


def influence(f: BooleanFunction, i: int) -> Fraction:
    _check_coord(f, i)
    return Fraction(2 * _edge_count(f, i), f.size)


def total_influence(f: BooleanFunction) -> Fraction:
    return Fraction(2 * sum(_edge_count(f, i) for i in range(1, f.arity + 1)), f.size)


# -- sensitivity ------------------------------------------------------------


@lru_cache(maxsize=1 << 17)
def sensitivity_vector(f: BooleanFunction) -> tuple[int, ...]:
    """``s_x(f)`` for every table index ``x``."""
    arr = f.to_array()
    idx = np.arange(f.size)
    s = np.zeros(f.size, dtype=np.int64)
    for i in range(f.arity):
        s += arr != arr[idx ^ (1 << i)]
    return tuple(int(v) for v in s)


def sensitivity_at(f: BooleanFunction, x: Sequence[int]) -> int:
    return sensitivity_vector(f)[f.index_of(x)]


def sensitivity(f: BooleanFunction) -> int:
    return max(sensitivity_vector(f))


@lru_cache(maxsize=1 << 17)
def s_profile(f: BooleanFunction) -> tuple[int | None, ...]:
    """``s_i(f)`` for each coordinate, ``None`` where ``x_i`` is irrelevant."""
    sv = sensitivity_vector(f)
    out = []
    for i in range(f.arity):
        bit = 1 << i
        best = None
        for x in range(f.size):
            if f.value_at(x) != f.value_at(x ^ bit):
                v = sv[x] + sv[x ^ bit]
                if best is None or v > best:
                    best = v
        out.append(best)
    return tuple(out)


def s_index(f: BooleanFunction, i: int) -> int | None:
    """``max s_x(f) + s_{x^i}(f)`` over inputs ``x`` sensitive at ``i``; ``None`` if ``x_i`` is irrelevant."""
    _check_coord(f, i)
    return s_profile(f)[i - 1]


def s_measure(f: BooleanFunction) -> Fraction:
    return sum((Fraction(1, 2**s) for s in s_profile(f) if s is not None), Fraction(0))


def w_numerator(f: BooleanFunction, scale: int) -> int:
    """``W(f) * 2^scale`` as an integer; needs ``scale >= deg f``."""
    return sum(1 << (scale - d) for d in degree_profile(f)[1] if d is not None)


def w_measure(f: BooleanFunction) -> Fraction:
    return Fraction(w_numerator(f, f.arity), 1 << f.arity)


# -- set packing ------------------------------------------------------------


def max_packing(blocks: Sequence[int], universe: int) -> list[int]:
    """A maximum family of pairwise disjoint bitmasks from ``blocks`` inside ``universe``.

    Branches on the lowest free coordinate: leave it uncovered, or cover it
    with a block whose lowest coordinate it is. Memoized on the free set.
    Ties keep the first family found, so the result depends only on the
    order of ``blocks``.
    """
    by_low: dict[int, list[int]] = {}
    reach = 0
    for B in blocks:
        if B and B & ~universe == 0:
            by_low.setdefault(B & -B, []).append(B)
            reach |= B
    universe = reach
    memo: dict[int, tuple[int, int]] = {}

    def best(free: int) -> int:
        if free == 0:
            return 0
        hit = memo.get(free)
        if hit is not None:
            return hit[0]
        low = free & -free
        top, choice = best(free ^ low), 0
        for B in by_low.get(low, ()):
            if B & ~free == 0:
                v = 1 + best(free & ~B)
                if v > top:
                    top, choice = v, B
        memo[free] = (top, choice)
        return top

    best(universe)
    out = []
    free = universe
    while free:
        _, choice = memo.get(free, (0, 0))
        low = free & -free
        if choice:
            out.append(choice)
            free &= ~choice
        else:
            free ^= low
    return out


# -- block sensitivity ------------------------------------------------------


@dataclass(frozen=True)
class BlockCollection:
    """Disjoint blocks claimed sensitive for ``f`` at ``base_input``."""

    blocks: tuple[frozenset[int], ...]
    base_input: tuple[int, ...]

    def is_valid(self, f: BooleanFunction) -> bool:
        if len(self.base_input) != f.arity:
            return False
        seen = 0
        x = f.index_of(self.base_input)
        fx = f.value_at(x)
        for B in self.blocks:
            if not B or any(not 1 <= i <= f.arity for i in B):
                return False
            m = mask_of(B)
            if m & seen:
                return False
            seen |= m
            if f.value_at(x ^ m) == fx:
                return False
        return True

    def __len__(self) -> int:
        return len(self.blocks)


@lru_cache(maxsize=16)
def _xor_grid(n: int) -> np.ndarray:
    a = np.arange(1 << n)
    return np.bitwise_xor.outer(a, a)


def minimal_sensitive_blocks(f: BooleanFunction) -> list[list[int]]:
    """Per input index, the minimal sensitive blocks as bitmasks (ascending).

    Any sensitive block contains a minimal one, so packing minimal blocks
    loses nothing.
    """
    n = f.arity
    arr = f.to_array().astype(bool)
    sens = arr[_xor_grid(n)] != arr[:, None]
    covered = sens.copy()
    for i in range(n):
        v = covered.reshape(f.size, -1, 2, 1 << i)
        v[:, :, 1, :] |= v[:, :, 0, :]
    strict = np.zeros_like(sens)
    for i in range(n):
        s = strict.reshape(f.size, -1, 2, 1 << i)
        c = covered.reshape(f.size, -1, 2, 1 << i)
        s[:, :, 1, :] |= c[:, :, 0, :]
    minimal = sens & ~strict
    return [np.flatnonzero(row).tolist() for row in minimal]


def _bs_limit(f: BooleanFunction) -> None:
    if f.arity > BS_ARITY_LIMIT:
        raise ArityLimitError(f"block sensitivity is limited to arity <= {BS_ARITY_LIMIT}, got {f.arity}")


@lru_cache(maxsize=1 << 18)
def _bs_search(f: BooleanFunction) -> tuple[int, int, tuple[int, ...]]:
    """(bs, base index, block masks) for the first input attaining the maximum."""
    _bs_limit(f)
    if f.is_constant():
        return 0, 0, ()
    best = (-1, 0, ())
    full = f.size - 1
    for x, blocks in enumerate(minimal_sensitive_blocks(f)):
        packing = max_packing(blocks, full)
        if len(packing) > best[0]:
            best = (len(packing), x, tuple(packing))
            if best[0] == f.arity:
                break
    return best


def block_sensitivity_at(f: BooleanFunction, x: Sequence[int]) -> int:
    _bs_limit(f)
    idx = f.index_of(x)
    if f.is_constant():
        return 0
    return len(max_packing(minimal_sensitive_blocks(f)[idx], f.size - 1))


def block_sensitivity(f: BooleanFunction, witness: bool = False):
    """``bs(f)``; with ``witness=True`` returns ``(bs, BlockCollection)``."""
    bs, x, masks = _bs_search(f)
    if not witness:
        return bs
    blocks = tuple(sorted((coords_of(m) for m in masks), key=sorted))
    return bs, BlockCollection(blocks, f.input_at(x))


# -- top-degree monomials ---------------------------------------------------


@dataclass(frozen=True)
class TopMonomials:
    """Disjoint degree-``deg f`` monomials.

    ``monomials`` is a maximum family (largest possible count ``ell``);
    ``greedy`` is a maximal family built by scanning monomials in order.
    Being maximum, ``monomials`` is itself maximal, so its support meets
    every top-degree monomial.
    """

    ell: int
    support: frozenset[int]
    monomials: tuple[frozenset[int], ...]
    greedy: tuple[frozenset[int], ...]


def top_monomial_masks(f: BooleanFunction) -> list[int]:
    d = degree(f)
    if d == 0:
        return []
    return [m for m, a in enumerate(mobius_expand(f).by_mask()) if a and m.bit_count() == d]


@lru_cache(maxsize=1 << 17)
def max_disjoint_top_monomials(f: BooleanFunction) -> TopMonomials:
    tops = top_monomial_masks(f)
    if not tops:
        return TopMonomials(0, frozenset(), (), ())
    best = max_packing(tops, f.size - 1)
    greedy, used = [], 0
    for m in tops:
        if not m & used:
            greedy.append(m)
            used |= m
    support = 0
    for m in best:
        support |= m
    key = lambda s: sorted(s)  # noqa: E731
    return TopMonomials(
        len(best),
        coords_of(support),
        tuple(sorted((coords_of(m) for m in best), key=key)),
        tuple(coords_of(m) for m in greedy),
    )


# -- full report ------------------------------------------------------------


@dataclass(frozen=True)
class MeasureReport:
    arity: int
    degree: int
    deg_i: dict[int, int]
    relevant: frozenset[int]
    influence_i: dict[int, Fraction]
    total_influence: Fraction
    sensitivity: int
    block_sensitivity: int
    bs_witness: BlockCollection
    w_value: Fraction
    s_value: Fraction
    s_index: dict[int, int]


def measure_report(f: BooleanFunction) -> MeasureReport:
    if f.arity > REPORT_ARITY_LIMIT:
        raise ArityLimitError(f"full reports are limited to arity <= {REPORT_ARITY_LIMIT}, got {f.arity}")
    deg, per = degree_profile(f)
    rel = relevant(f)
    bs, wit = block_sensitivity(f, witness=True)
    return MeasureReport(
        arity=f.arity,
        degree=deg,
        deg_i={i + 1: d for i, d in enumerate(per) if d is not None},
        relevant=rel,
        influence_i={i: influence(f, i) for i in range(1, f.arity + 1)},
        total_influence=total_influence(f),
        sensitivity=sensitivity(f),
        block_sensitivity=bs,
        bs_witness=wit,
        w_value=w_measure(f),
        s_value=s_measure(f),
        s_index={i + 1: s for i, s in enumerate(s_profile(f)) if s is not None},
    )
