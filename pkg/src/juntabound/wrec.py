"""Certified upper bounds on W(b, d) and on the limit W*.

``W(b, d)`` is the largest value of ``W(f) = sum_{i relevant} 2^-deg_i(f)``
over functions of degree ``d`` with block sensitivity at most ``b``.
Restricting a maximum family of ``l`` disjoint top-degree monomials costs
``l * d * 2^-d`` and leaves functions of degree ``d - k`` (some ``k >= 1``)
with block sensitivity at most ``b - l``; :func:`w_table` turns that into a
table of exact upper bounds. A degree-``d`` function also has
``W(f) <= Inf(f)/2 <= d/2``, applied at every entry when enabled.

The tail ``sum_{r > D} r^3 2^-r`` closes the gap from depth ``D`` to the
limit, and ``2^d`` times a bound on ``W`` bounds the number of relevant
variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .rational import ceil_decimal

# Block-sensitivity caps b(d) for d = 1..14, as certified by the lp module.
# tests/test_acceptance.py recomputes them from scratch.
KNOWN_LP_CAPS = {1: 1, 2: 3, 3: 6, 4: 10, 5: 15, 6: 21, 7: 29, 8: 38, 9: 47, 10: 58, 11: 71, 12: 84, 13: 99, 14: 114}

WORST, LP = "worst", "lp"

TAIL_TOTAL = Fraction(26)  # sum_{r>=0} r^3 / 2^r


@dataclass(frozen=True)
class BsCapTable:
    """Upper bound on ``bs`` for each degree: ``d^2``, or LP caps where known."""

    mode: str = WORST
    lp_caps: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in (WORST, LP):
            raise ValueError(f"unknown cap mode {self.mode!r}")
        for d, b in self.lp_caps.items():
            if not 0 <= b <= d * d:
                raise ValueError(f"cap {b} for degree {d} exceeds d^2")

    @classmethod
    def worst(cls) -> "BsCapTable":
        return cls(WORST)

    @classmethod
    def lp(cls, caps: Mapping[int, int] | None = None) -> "BsCapTable":
        return cls(LP, dict(KNOWN_LP_CAPS if caps is None else caps))

    def __call__(self, d: int) -> int:
        if self.mode == LP and d in self.lp_caps:
            return self.lp_caps[d]
        return d * d

    def __hash__(self):
        return hash((self.mode, tuple(sorted(self.lp_caps.items()))))


@dataclass(frozen=True)
class WBoundTable:
    depth: int
    caps: BsCapTable
    use_half_degree: bool
    rows: tuple[tuple[Fraction, ...], ...]  # rows[d][b], 0 <= b <= caps(d)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        """``W[b, d]`` with ``b`` clamped to ``caps(d)``."""
        b, d = key
        if b < 0:
            raise ValueError("b must be >= 0")
        row = self.rows[d]
        return row[min(b, len(row) - 1)]

    def head(self, d: int) -> Fraction:
        """Bound on ``W_d``, i.e. the entry at the largest admissible ``b``."""
        return self.rows[d][-1]

    def heads(self) -> list[Fraction]:
        return [row[-1] for row in self.rows]


def _child_best(rows, caps: BsCapTable, d: int, x: int) -> Fraction:
    """``max_{1<=k<=d} W[min(x, cap(d-k))][d-k]``."""
    best = Fraction(0)
    for k in range(1, d + 1):
        row = rows[d - k]
        v = row[min(x, len(row) - 1)]
        if v > best:
            best = v
    return best


def w_table(depth: int, caps: BsCapTable, use_half_degree: bool = True, naive: bool = False) -> WBoundTable:
    """Upper bounds on ``W(b, d)`` for ``0 <= d <= depth`` and ``0 <= b <= caps(d)``.

    Each entry is ``max over 1<=l<=b, 1<=k<=d`` of
    ``l*d*2^-d + W[min(b-l, cap(d-k))][d-k]``, optionally capped at ``d/2``.

    The default path uses ``R(b) = c + max(M(b-1), R(b-1))`` with
    ``c = d 2^-d`` and ``M`` the best child at budget ``b-1``, which is the
    same maximum unrolled over ``l``. ``naive=True`` evaluates the double
    maximum literally (cubic per row; for cross-checks).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    rows: list[tuple[Fraction, ...]] = [(Fraction(0),)]
    for d in range(1, depth + 1):
        cap = caps(d)
        c = Fraction(d, 2**d)
        half = Fraction(d, 2)
        child = [_child_best(rows, caps, d, x) for x in range(cap)]
        row = [Fraction(0)]
        running = None
        for b in range(1, cap + 1):
            if naive:
                r = max(l * c + _child_best(rows, caps, d, b - l) for l in range(1, b + 1))
            else:
                running = c + (child[b - 1] if running is None else max(child[b - 1], running))
                r = running
            row.append(min(r, half) if use_half_degree else r)
        rows.append(tuple(row))
    return WBoundTable(depth, caps, use_half_degree, tuple(rows))


@lru_cache(maxsize=None)
def _partial(m: int) -> Fraction:
    return sum((Fraction(r**3, 2**r) for r in range(m)), Fraction(0))


def tail_sum(m: int) -> Fraction:
    """``sum_{r >= m} r^3 2^-r`` exactly, as 26 minus the partial sum."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return TAIL_TOTAL - _partial(m)


@dataclass(frozen=True)
class WStarResult:
    depth: int
    mode: str
    use_half_degree: bool
    head: Fraction
    tail: Fraction

    @property
    def total(self) -> Fraction:
        return self.head + self.tail

    def record(self, digits: int = 6) -> dict:
        from .rational import frac_str

        return {
            "depth": self.depth,
            "caps": self.mode,
            "half_degree": self.use_half_degree,
            "head": frac_str(self.head),
            "tail": frac_str(self.tail),
            "total": frac_str(self.total),
            "head_decimal": ceil_decimal(self.head, digits),
            "tail_decimal": ceil_decimal(self.tail, digits),
            "total_decimal": ceil_decimal(self.total, digits),
        }


def w_star_bound(depth: int, caps: BsCapTable, use_half_degree: bool = True,
                 table: WBoundTable | None = None) -> WStarResult:
    """``W* <= W(cap(D), D) + sum_{r > D} r^3 2^-r``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if table is None or table.depth < depth:
        table = w_table(depth, caps, use_half_degree)
    return WStarResult(depth, caps.mode, use_half_degree, table.head(depth), tail_sum(depth + 1))


def half_degree_baseline(depth: int) -> tuple[Fraction, int]:
    """Best of ``d/2 + sum_{r > d} r^3 2^-r`` over ``1 <= d <= depth``, and the minimizing ``d``.

    This is the earlier argument: ``W_d <= d/2`` up to some degree, then
    ``W_r <= r^3 2^-r + W_{r-1}`` (from ``|H| <= d * bs <= d^3``) beyond it.
    The smallest minimizer wins ties.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    best, arg = None, None
    for d in range(1, depth + 1):
        v = Fraction(d, 2) + tail_sum(d + 1)
        if best is None or v < best:
            best, arg = v, d
    return best, arg


def junta_bound(d: int, caps: BsCapTable, use_half_degree: bool = True, star_depth: int = 30) -> Fraction:
    """Certified upper bound on the number of relevant variables of a degree-``d`` function.

    ``|R(f)| <= 2^d W(f)``, and ``W(f)`` is at most both the table head at
    ``d`` and the ``W*`` bound at ``star_depth``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    table = w_table(max(d, star_depth), caps, use_half_degree)
    star = w_star_bound(star_depth, caps, use_half_degree, table=table).total
    return 2**d * min(table.head(d), star)
