"""Exact feasibility of the moment system that caps block sensitivity.

A degree-``d`` Boolean function with block sensitivity ``b`` yields a
univariate polynomial ``p(t) = p_1 t + ... + p_d t^d`` with

    p(1) = 1,   0 <= p(k) <= 1  for 2 <= k <= b-1,   p(b) = tau

for some ``tau`` in {0, 1}. If neither choice of ``tau`` is feasible, no such
function exists, so the largest feasible ``b`` bounds ``bs`` for degree ``d``.

Every verdict carries a proof object that can be checked without the solver:
a rational witness ``p`` when feasible, a Farkas certificate when not.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .boolfn import BooleanFunction
from .measures import BlockCollection
from .rational import frac_str, parse_frac

LP_DMAX = 14

EQ, LE, GE = "=", "<=", ">="


@dataclass(frozen=True)
class Row:
    coeffs: tuple[int, ...]
    sense: str
    rhs: int

    def holds(self, p: Sequence[Fraction]) -> bool:
        v = sum(a * x for a, x in zip(self.coeffs, p))
        if self.sense == EQ:
            return v == self.rhs
        if self.sense == LE:
            return v <= self.rhs
        return v >= self.rhs


@dataclass(frozen=True)
class MomentSystem:
    d: int
    b: int
    tau: int
    rows: tuple[Row, ...]


@dataclass(frozen=True)
class LpOutcome:
    """Verdict for one (d, b, tau).

    ``witness`` is set iff feasible; otherwise ``certificate`` holds one
    multiplier per row of the system.
    """

    d: int
    b: int
    tau: int
    feasible: bool
    witness: tuple[Fraction, ...] | None = None
    certificate: tuple[Fraction, ...] | None = None

    def to_record(self) -> dict:
        rec = {"d": self.d, "b": self.b, "tau": self.tau}
        if self.feasible:
            rec["status"] = "feasible"
            rec["witness"] = [frac_str(x) for x in self.witness]
        else:
            rec["status"] = "infeasible"
            rec["certificate"] = [frac_str(x) for x in self.certificate]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "LpOutcome":
        d, b, tau = int(rec["d"]), int(rec["b"]), int(rec["tau"])
        status = rec["status"]
        if status == "feasible":
            return cls(d, b, tau, True, witness=tuple(parse_frac(s) for s in rec["witness"]))
        if status == "infeasible":
            return cls(d, b, tau, False, certificate=tuple(parse_frac(s) for s in rec["certificate"]))
        raise ValueError(f"unknown status {status!r}")


def moments(d: int, t: int) -> tuple[int, ...]:
    """``(t, t^2, ..., t^d)`` as exact integers."""
    return tuple(t**j for j in range(1, d + 1))


def build_system(d: int, b: int, tau: int) -> MomentSystem:
    if d < 1:
        raise ValueError("d must be >= 1")
    if b < 2:
        raise ValueError("b must be >= 2")
    if tau not in (0, 1):
        raise ValueError("tau must be 0 or 1")
    rows = [Row(moments(d, 1), EQ, 1)]
    for k in range(2, b):
        m = moments(d, k)
        rows.append(Row(m, GE, 0))
        rows.append(Row(m, LE, 1))
    rows.append(Row(moments(d, b), EQ, tau))
    return MomentSystem(d, b, tau, tuple(rows))


def check_witness(sys: MomentSystem, p: Sequence[Fraction]) -> bool:
    if len(p) != sys.d:
        raise ValueError(f"witness has length {len(p)}, expected {sys.d}")
    return all(row.holds(p) for row in sys.rows)


def check_certificate(sys: MomentSystem, cert: Sequence[Fraction]) -> bool:
    """Check a Farkas certificate for infeasibility.

    ``cert[r]`` multiplies row ``r`` as written. Sign conditions: >= 0 on
    ``<=`` rows, <= 0 on ``>=`` rows, free on equalities. The combination
    must cancel every coefficient and leave a negative right-hand side, i.e.
    the system implies ``0 <= negative``.
    """
    if len(cert) != len(sys.rows):
        raise ValueError(f"certificate has length {len(cert)}, expected {len(sys.rows)}")
    for lam, row in zip(cert, sys.rows):
        if row.sense == LE and lam < 0:
            return False
        if row.sense == GE and lam > 0:
            return False
    for j in range(sys.d):
        if sum(lam * row.coeffs[j] for lam, row in zip(cert, sys.rows)) != 0:
            return False
    return sum(lam * row.rhs for lam, row in zip(cert, sys.rows)) < 0


def check_outcome(out: LpOutcome) -> bool:
    sys = build_system(out.d, out.b, out.tau)
    if out.feasible:
        return out.witness is not None and check_witness(sys, out.witness)
    return out.certificate is not None and check_certificate(sys, out.certificate)


# -- solver -----------------------------------------------------------------
#
# The primal system  {A p (sense) c}  is rewritten as  G p <= h. By Farkas it
# is infeasible iff  y >= 0, G^T y = 0, h^T y = -1  is feasible. We run a
# phase-I simplex on that second system (d+1 equality rows, one column per
# inequality side). A zero phase-I optimum gives the certificate directly; a
# positive optimum gives, through the simplex multipliers, the primal witness.


def _dual_columns(sys: MomentSystem) -> list[tuple[int, int, tuple[int, ...], int]]:
    """(row index, sign, g, h) for every column of the alternative system."""
    cols = []
    for r, row in enumerate(sys.rows):
        sides = {LE: (1,), GE: (-1,), EQ: (1, -1)}[row.sense]
        for s in sides:
            cols.append((r, s, tuple(s * a for a in row.coeffs), s * row.rhs))
    return cols


def _phase_one(cols: list[tuple[int, ...]], rhs: list[int]):
    """Minimize the sum of artificials for ``A y = rhs, y >= 0`` (rhs >= 0).

    Revised simplex over exact integers: the basis inverse is kept as
    ``adj / det`` and updated by fraction-free (Bareiss) elimination, so
    every division is exact. Entering column: most negative reduced cost,
    lowest index on ties. Leaving row: lexicographic ratio test on
    ``[x_B | B^-1]``, which cannot cycle. Artificials never re-enter.

    Returns ``(optimum, y, pi)`` with ``pi`` the simplex multipliers of the
    final basis.
    """
    m, n = len(rhs), len(cols)
    adj = [[int(i == k) for k in range(m)] for i in range(m)]
    det = 1
    basis = [n + i for i in range(m)]  # n + i is artificial i

    while True:
        # pi = c_B adj / det, c_B = 1 on artificials
        num_pi = [sum(adj[r][k] for r in range(m) if basis[r] >= n) for k in range(m)]
        sgn = 1 if det > 0 else -1
        enter, steepest = None, 0
        for j, col in enumerate(cols):
            # reduced cost of j is -(num_pi . A_j) / det
            v = sgn * sum(p * a for p, a in zip(num_pi, col) if a)
            if v > steepest:
                enter, steepest = j, v
        if enter is None:
            break
        col = cols[enter]
        w = [sum(q * a for q, a in zip(row, col) if a) for row in adj]
        leave, best = None, None
        for i in range(m):
            if w[i] * sgn > 0:
                xb = sum(q * r for q, r in zip(adj[i], rhs) if r)
                key = [Fraction(xb, w[i])] + [Fraction(q, w[i]) for q in adj[i]]
                if best is None or key < best:
                    leave, best = i, key
        if leave is None:  # phase I is bounded below by 0
            raise RuntimeError("unbounded phase-I problem")
        wr = w[leave]
        prow = adj[leave]
        for i in range(m):
            if i != leave:
                wi = w[i]
                adj[i] = [(q * wr - wi * pq) // det for q, pq in zip(adj[i], prow)]
        det, basis[leave] = wr, enter
    xb = [Fraction(sum(q * r for q, r in zip(row, rhs)), det) for row in adj]
    y = [Fraction(0)] * n
    optimum = Fraction(0)
    for i, j in enumerate(basis):
        if j < n:
            y[j] = xb[i]
        else:
            optimum += xb[i]
    pi = [Fraction(sum(adj[r][k] for r in range(m) if basis[r] >= n), det) for k in range(m)]
    return optimum, y, pi


def solve_feasibility(sys: MomentSystem) -> LpOutcome:
    d = sys.d
    cols = _dual_columns(sys)
    # rows 0..d-1: sum_j y_j g_j = 0; row d, negated so its rhs is +1: -sum_j y_j h_j = 1
    columns = [tuple(c[2]) + (-c[3],) for c in cols]
    rhs = [0] * d + [1]
    flip = [1] * d + [-1]
    optimum, y, pi = _phase_one(columns, rhs)
    if optimum == 0:
        cert = [Fraction(0)] * len(sys.rows)
        for (r, s, _, _), v in zip(cols, y):
            cert[r] += s * v
        out = LpOutcome(sys.d, sys.b, sys.tau, False, certificate=tuple(cert))
    else:
        z = [p * s for p, s in zip(pi, flip)]
        t = z[-1]
        witness = tuple(v / -t for v in z[:d])
        out = LpOutcome(sys.d, sys.b, sys.tau, True, witness=witness)
    if not check_outcome(out):
        raise RuntimeError(f"solver produced an invalid proof for d={sys.d} b={sys.b} tau={sys.tau}")
    return out


def solve(d: int, b: int, tau: int) -> LpOutcome:
    return solve_feasibility(build_system(d, b, tau))


# -- block-sensitivity caps -------------------------------------------------


@dataclass(frozen=True)
class BsBoundEntry:
    d: int
    b: int
    outcomes: tuple[LpOutcome, ...] = field(repr=False)

    def witness(self) -> LpOutcome | None:
        """A feasible outcome at ``b``; None when ``b == 1`` (feasible by convention)."""
        return next((o for o in self.outcomes if o.b == self.b and o.feasible), None)


@dataclass(frozen=True)
class BsBoundTable:
    entries: dict[int, BsBoundEntry]

    def __getitem__(self, d: int) -> int:
        return self.entries[d].b

    def caps(self) -> dict[int, int]:
        return {d: e.b for d, e in sorted(self.entries.items())}

    def records(self) -> list[dict]:
        return [o.to_record() for d in sorted(self.entries) for o in self.entries[d].outcomes]


def _scan_items(d: int) -> list[tuple[int, int, int]]:
    return [(d, b, tau) for b in range(2, d * d + 1) for tau in (0, 1)]


def _solve_item(item: tuple[int, int, int]) -> LpOutcome:
    return solve(*item)


def _entry(d: int, outcomes: Iterable[LpOutcome]) -> BsBoundEntry:
    outcomes = tuple(outcomes)
    feasible = [o.b for o in outcomes if o.feasible]
    return BsBoundEntry(d, max(feasible, default=1), outcomes)


def bs_upper_bound(d: int) -> tuple[int, BsBoundEntry]:
    """Largest ``b`` in ``[1, d^2]`` whose moment system is feasible for some tau.

    Every ``b`` is tried; feasibility is not assumed monotone in ``b``.
    """
    if not 1 <= d:
        raise ValueError("d must be >= 1")
    entry = _entry(d, (_solve_item(it) for it in _scan_items(d)))
    return entry.b, entry


def bs_table(dmax: int, jobs: int = 1) -> BsBoundTable:
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    items = [it for d in range(1, dmax + 1) for it in _scan_items(d)]
    if jobs > 1:
        # largest systems first so the pool stays busy; results are re-keyed below
        order = sorted(items, key=lambda it: (-it[0] * it[1], it))
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            solved = dict(zip(order, ex.map(_solve_item, order, chunksize=4)))
        results = [solved[it] for it in items]
    else:
        results = [_solve_item(it) for it in items]
    by_d: dict[int, list[LpOutcome]] = {d: [] for d in range(1, dmax + 1)}
    for out in results:
        by_d[out.d].append(out)
    return BsBoundTable({d: _entry(d, outs) for d, outs in by_d.items()})


def table_from_records(records: Iterable[dict], dmax: int) -> BsBoundTable:
    """Rebuild a table from persisted records, re-checking every proof."""
    by_d: dict[int, list[LpOutcome]] = {d: [] for d in range(1, dmax + 1)}
    for rec in records:
        out = LpOutcome.from_record(rec)
        if not check_outcome(out):
            raise ValueError(f"record d={out.d} b={out.b} tau={out.tau} does not verify")
        if out.d in by_d:
            by_d[out.d].append(out)
    for d, outs in by_d.items():
        have = {(o.b, o.tau) for o in outs}
        missing = [it for it in _scan_items(d) if it[1:] not in have]
        if missing:
            raise ValueError(f"records for d={d} are incomplete ({len(missing)} missing)")
    return BsBoundTable({d: _entry(d, sorted(outs, key=lambda o: (o.b, o.tau))) for d, outs in by_d.items()})


def write_records(path, records: Iterable[dict]) -> int:
    n = 0
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
            n += 1
    return n


def read_records(path) -> list[dict]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            if not isinstance(rec, dict) or not {"d", "b", "tau", "status"} <= rec.keys():
                raise ValueError(f"line {lineno}: missing fields")
            out.append(rec)
    return out


def c0_ratios(caps: dict[int, int]) -> tuple[dict[int, Fraction], Fraction | None]:
    """``b(d)/d^2`` per degree, and the maximum over ``d >= 4``."""
    if not caps:
        raise ValueError("empty table")
    ratios = {d: Fraction(b, d * d) for d, b in sorted(caps.items())}
    tail = [r for d, r in ratios.items() if d >= 4]
    return ratios, max(tail) if tail else None


# -- the reduction from a real function to the moment system ----------------


def symmetrize_profile(g: BooleanFunction) -> tuple[Fraction, ...]:
    """Average of ``g`` over each Hamming-weight layer, weights 0..n."""
    n = g.arity
    ones = [0] * (n + 1)
    total = [0] * (n + 1)
    for idx in range(1 << n):
        w = idx.bit_count()
        total[w] += 1
        ones[w] += g.value_at(idx)
    return tuple(Fraction(o, t) for o, t in zip(ones, total))


def collapse_blocks(f: BooleanFunction, blocks: BlockCollection) -> BooleanFunction:
    """Collapse sensitive blocks of ``f`` at ``blocks.base_input`` into single variables.

    The result ``g`` has ``g(0) = 0`` and ``g(e_j) = 1``: variable ``j`` flips
    block ``j`` of the base input, and ``g`` is complemented when
    ``f(base) = 1``.
    """
    if not blocks.is_valid(f):
        raise ValueError("blocks are not disjoint sensitive blocks of f at the base input")
    base = f.index_of(blocks.base_input)
    masks = [sum(1 << (i - 1) for i in B) for B in blocks.blocks]
    flip = f.value_at(base)
    k = len(masks)
    table = 0
    for y in range(1 << k):
        x = base
        for j in range(k):
            if y >> j & 1:
                x ^= masks[j]
        if f.value_at(x) ^ flip:
            table |= 1 << y
    return BooleanFunction(k, table)
