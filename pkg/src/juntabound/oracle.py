"""Brute-force verification of every inequality the junta bound rests on.

Each ``check_*`` function looks at one function and returns ``True`` (holds),
``False`` (counterexample) or ``None`` (vacuous, e.g. fewer than two relevant
variables). :func:`run_suite` runs them all over every function of a given
arity; any counterexample means a bug, since the statements are theorems.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from . import lp
from .boolfn import (
    BooleanFunction,
    compose_blockwise,
    fourier_expand,
    mask_of,
    restrict_bits,
    to_text,
)
from .measures import (
    block_sensitivity,
    degree,
    degree_profile,
    influence,
    max_disjoint_top_monomials,
    relevant,
    s_profile,
    sensitivity,
    total_influence,
    w_measure,
    w_numerator,
)
from .wrec import BsCapTable, WBoundTable, w_table

EXHAUSTIVE_LIMIT = 4
TENSOR_ARITY_LIMIT = 9

CHECKS = (
    "influence_lower_bound",
    "degree_split",
    "averaging",
    "monomial_fixing",
    "sensitivity_split",
    "fourier_influence",
    "parseval",
    "fourier_degree",
    "inf_le_deg",
    "w_le_half_inf",
    "ell_le_bs",
    "bs_le_deg_sq",
    "bs_witness",
    "bs_le_lp_cap",
    "w_le_table",
    "junta_le_deg_bs_4s",
    "junta_le_ns",
)


def enumerate_functions(n: int) -> Iterator[BooleanFunction]:
    """Every function on ``n`` variables, by increasing table integer."""
    if not 0 <= n <= EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_LIMIT}")
    for t in range(1 << (1 << n)):
        yield BooleanFunction(n, t)


def _restrict_one(f: BooleanFunction, j: int, v: int) -> BooleanFunction:
    bit = 1 << (j - 1)
    return restrict_bits(f, bit, bit if v else 0)


def _pair_terms(f: BooleanFunction, profile) -> bool | None:
    """Shared body of the degree split and its sensitivity analogue.

    For relevant ``i != j``: ``2^-m_i(f) <= 2^-m_i(f_0)/2 + 2^-m_i(f_1)/2``,
    where ``m`` is ``profile`` and a term is 0 when ``i`` is irrelevant after
    fixing ``x_j``.
    """
    top = profile(f)
    rel = [i + 1 for i, v in enumerate(top) if v is not None]
    if len(rel) < 2:
        return None
    # deg_i <= n and s_i <= 2n, so scaling by 2^(2n+2) keeps every term integral
    K = 2 * f.arity + 2
    for j in rel:
        halves = [profile(_restrict_one(f, j, v)) for v in (0, 1)]
        for i in rel:
            if i == j:
                continue
            k = i - 1 if i < j else i - 2  # position of x_i once x_j is gone
            rhs = sum(1 << (K - h[k] - 1) for h in halves if h[k] is not None)
            if 1 << (K - top[i - 1]) > rhs:
                return False
    return True


def check_degree_split(f: BooleanFunction) -> bool | None:
    return _pair_terms(f, lambda g: degree_profile(g)[1])


def check_sensitivity_split(f: BooleanFunction) -> bool | None:
    return _pair_terms(f, s_profile)


def verify_degree_split(f: BooleanFunction) -> bool:
    return check_degree_split(f) is not False


def verify_sensitivity_split(f: BooleanFunction) -> bool:
    return check_sensitivity_split(f) is not False


def verify_averaging(f: BooleanFunction, H: Iterable[int]) -> bool:
    """``W(f) <= |H| 2^-d + mean over assignments a to H of W(f_a)``.

    Every coordinate in ``H`` must have ``deg_i(f) = deg(f)``.
    """
    H = frozenset(H)
    d, per = degree_profile(f)
    for i in H:
        if not 1 <= i <= f.arity or per[i - 1] != d:
            raise ValueError(f"coordinate {i} does not have full degree {d}")
    return _averaging(f, mask_of(H), d)


def _averaging(f: BooleanFunction, hmask: int, d: int) -> bool:
    # all W values are dyadic with denominator dividing 2^n; compare numerators
    n, h = f.arity, hmask.bit_count()
    rest = sum(w_numerator(restrict_bits(f, hmask, a), n) for a in _submasks(hmask))
    return w_numerator(f, n) << h <= (h << (n - d + h)) + rest


def _submasks(mask: int) -> list[int]:
    out, s = [], mask
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    return out[::-1]


def check_averaging(f: BooleanFunction) -> bool | None:
    """The averaging bound for every nonempty set of full-degree coordinates."""
    d, per = degree_profile(f)
    if d == 0:
        return None
    full = mask_of(i + 1 for i, v in enumerate(per) if v == d)
    return all(_averaging(f, H, d) for H in _submasks(full) if H)


def _collections(f: BooleanFunction) -> list[tuple[int, ...]]:
    top = max_disjoint_top_monomials(f)
    families = set()
    for fam in (top.monomials, top.greedy):
        masks = [mask_of(m) for m in fam]
        for r in range(1, len(masks) + 1):
            families.update(itertools.combinations(masks, r))
    return sorted(families)


def check_monomial_fixing(f: BooleanFunction) -> bool | None:
    """Fixing ``l`` disjoint top monomials in any way drops ``bs`` by ``l``."""
    if degree(f) == 0:
        return None
    bs = block_sensitivity(f)
    for fam in _collections(f):
        union = 0
        for m in fam:
            union |= m
        for a in _submasks(union):
            if block_sensitivity(restrict_bits(f, union, a)) > bs - len(fam):
                return False
    return True


def verify_monomial_fixing(f: BooleanFunction) -> bool:
    return check_monomial_fixing(f) is not False


def consistency_failures(f: BooleanFunction, wtable: WBoundTable, bstable: Mapping[int, int]) -> list[str]:
    """Names of the table/size checks that fail for ``f`` (degree >= 1)."""
    d = degree(f)
    bs = block_sensitivity(f)
    r = len(relevant(f))
    s = sensitivity(f)
    bad = []
    if w_measure(f) > wtable[bs, d]:
        bad.append("w_le_table")
    if bs > bstable[d]:
        bad.append("bs_le_lp_cap")
    if r > d * bs * 4**s:
        bad.append("junta_le_deg_bs_4s")
    if r > Fraction(d, 2) * 2**d:
        bad.append("junta_le_ns")
    return bad


def verify_consistency(f: BooleanFunction, wtable: WBoundTable, bstable: Mapping[int, int]) -> bool:
    if degree(f) == 0:
        return True
    return not consistency_failures(f, wtable, bstable)


def verify_tensorization(f: BooleanFunction, g: BooleanFunction) -> bool:
    """``deg(f o g) = deg f * deg g`` and, for nonconstant parts, ``bs(f o g) >= max(bs f, bs g)``."""
    if f.arity * g.arity > TENSOR_ARITY_LIMIT:
        raise ValueError(f"composed arity {f.arity * g.arity} exceeds {TENSOR_ARITY_LIMIT}")
    h = compose_blockwise(f, g)
    if degree(h) != degree(f) * degree(g):
        return False
    if f.is_constant() or g.is_constant():
        return True
    return block_sensitivity(h) >= max(block_sensitivity(f), block_sensitivity(g))


def _local_checks(f: BooleanFunction) -> dict[str, bool | None]:
    d, per = degree_profile(f)
    rel = [i + 1 for i, v in enumerate(per) if v is not None]
    inf = total_influence(f)
    fc = fourier_expand(f)
    out: dict[str, bool | None] = {}
    out["influence_lower_bound"] = all(influence(f, i) >= Fraction(2, 2 ** per[i - 1]) for i in rel) if rel else None
    out["degree_split"] = check_degree_split(f)
    out["averaging"] = check_averaging(f)
    out["monomial_fixing"] = check_monomial_fixing(f)
    out["sensitivity_split"] = check_sensitivity_split(f)
    signed = fourier_expand(f, signed=True)
    out["fourier_influence"] = inf == sum((len(S) * c * c for S, c in signed.items()), Fraction(0))
    mean = Fraction(f.table.bit_count(), f.size)
    out["parseval"] = sum((c * c for _, c in fc.items()), Fraction(0)) == mean
    out["fourier_degree"] = fc.degree() == d
    out["inf_le_deg"] = inf <= d
    out["w_le_half_inf"] = w_measure(f) <= inf / 2
    bs, wit = block_sensitivity(f, witness=True)
    out["ell_le_bs"] = max_disjoint_top_monomials(f).ell <= bs if d else None
    out["bs_le_deg_sq"] = bs <= d * d
    out["bs_witness"] = wit.is_valid(f) and len(wit) == bs if bs else None
    return out


@dataclass
class SuiteReport:
    arity: int
    functions_checked: int = 0
    checks: dict[str, int] = field(default_factory=lambda: dict.fromkeys(CHECKS, 0))
    vacuous: dict[str, int] = field(default_factory=lambda: dict.fromkeys(CHECKS, 0))
    counterexamples: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        out = SuiteReport(self.arity, self.functions_checked + other.functions_checked)
        out.checks = {k: self.checks.get(k, 0) + other.checks.get(k, 0) for k in self.checks.keys() | other.checks.keys()}
        out.vacuous = {k: self.vacuous.get(k, 0) + other.vacuous.get(k, 0) for k in self.vacuous.keys() | other.vacuous.keys()}
        out.checks = {k: out.checks[k] for k in sorted(out.checks, key=_check_order)}
        out.vacuous = {k: out.vacuous[k] for k in sorted(out.vacuous, key=_check_order)}
        out.counterexamples = sorted(self.counterexamples + other.counterexamples)
        return out

    def record(self) -> dict:
        return {
            "arity": self.arity,
            "functions_checked": self.functions_checked,
            "checks": dict(self.checks),
            "vacuous": dict(self.vacuous),
            "counterexamples": [{"function": t, "check": c, "details": d} for t, c, d in self.counterexamples],
        }


def _check_order(name: str) -> tuple[int, str]:
    return (CHECKS.index(name) if name in CHECKS else len(CHECKS), name)


def _tally(report: SuiteReport, f: BooleanFunction, name: str, result: bool | None, details: str = "") -> None:
    report.checks[name] = report.checks.get(name, 0) + (result is not False)
    if result is None:
        report.vacuous[name] = report.vacuous.get(name, 0) + 1
    elif result is False:
        report.counterexamples.append((to_text(f), name, details))


def check_function(f: BooleanFunction, wtables: Sequence[WBoundTable], bstable: Mapping[int, int],
                   report: SuiteReport) -> None:
    for name, result in _local_checks(f).items():
        _tally(report, f, name, result)
    if degree(f) == 0:
        for name in ("bs_le_lp_cap", "w_le_table", "junta_le_deg_bs_4s", "junta_le_ns"):
            _tally(report, f, name, None)
        return
    failed: dict[str, list[str]] = {}
    for wt in wtables:
        for name in consistency_failures(f, wt, bstable):
            failed.setdefault(name, []).append(f"caps={wt.caps.mode}")
    for name in ("bs_le_lp_cap", "w_le_table", "junta_le_deg_bs_4s", "junta_le_ns"):
        _tally(report, f, name, name not in failed, ", ".join(sorted(set(failed.get(name, [])))))


def _run_chunk(args) -> SuiteReport:
    n, lo, hi, wtables, bstable = args
    report = SuiteReport(n)
    for t in range(lo, hi):
        check_function(BooleanFunction(n, t), wtables, bstable, report)
        report.functions_checked += 1
    return report


def default_tables(n: int) -> tuple[tuple[WBoundTable, ...], dict[int, int]]:
    """W tables in both cap modes and freshly solved LP caps, up to degree ``n``."""
    dmax = max(n, 1)
    caps = lp.bs_table(dmax).caps()
    return (w_table(dmax, BsCapTable.worst()), w_table(dmax, BsCapTable.lp(caps))), caps


def run_suite(n: int, wtables: Sequence[WBoundTable] | WBoundTable | None = None,
              bstable: Mapping[int, int] | None = None, jobs: int = 1) -> SuiteReport:
    """All checks over all ``2^(2^n)`` functions of arity ``n``.

    The report is identical for any ``jobs``: work is split into fixed
    chunks and merged in chunk order.
    """
    if not 0 <= n <= EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive suite is limited to n <= {EXHAUSTIVE_LIMIT}")
    if wtables is None or bstable is None:
        dw, dc = default_tables(n)
        wtables = dw if wtables is None else wtables
        bstable = dc if bstable is None else bstable
    if isinstance(wtables, WBoundTable):
        wtables = (wtables,)
    wtables = tuple(wtables)
    bstable = dict(bstable) if not hasattr(bstable, "entries") else bstable.caps()
    total = 1 << (1 << n)
    step = max(1, min(4096, total // 16))
    chunks = [(n, lo, min(lo + step, total), wtables, bstable) for lo in range(0, total, step)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run_chunk, chunks))
    else:
        parts = [_run_chunk(c) for c in chunks]
    report = SuiteReport(n)
    for part in parts:
        report = report.merge(part)
    return report


def run_tensor_suite(max_arity: int = 2) -> SuiteReport:
    """Composition checks over all pairs of functions with arity in ``1..max_arity``."""
    funcs = [f for k in range(1, max_arity + 1) for f in enumerate_functions(k)]
    report = SuiteReport(max_arity)
    report.checks = {"tensor_degree": 0, "tensor_bs": 0}
    report.vacuous = {"tensor_degree": 0, "tensor_bs": 0}
    for f, g in itertools.product(funcs, funcs):
        h = compose_blockwise(f, g)
        pair = f"{to_text(f)} o {to_text(g)}"
        ok = degree(h) == degree(f) * degree(g)
        report.checks["tensor_degree"] += ok
        if not ok:
            report.counterexamples.append((pair, "tensor_degree", f"deg {degree(h)}"))
        if f.is_constant() or g.is_constant():
            report.checks["tensor_bs"] += 1
            report.vacuous["tensor_bs"] += 1
        elif block_sensitivity(h) >= max(block_sensitivity(f), block_sensitivity(g)):
            report.checks["tensor_bs"] += 1
        else:
            report.counterexamples.append((pair, "tensor_bs", f"bs {block_sensitivity(h)}"))
        report.functions_checked += 1
    return report

