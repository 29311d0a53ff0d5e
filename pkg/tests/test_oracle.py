from fractions import Fraction

import pytest
from hypothesis import given

from conftest import functions
from juntabound.boolfn import (
    BooleanFunction, and_, constant, decision_tree_complete, dictator, or_, parity, tribes,
)
from juntabound.measures import influence
from juntabound.oracle import (
    CHECKS, SuiteReport, check_averaging, check_degree_split, check_monomial_fixing,
    check_sensitivity_split, consistency_failures, enumerate_functions, run_suite, run_tensor_suite,
    verify_averaging, verify_consistency, verify_degree_split, verify_monomial_fixing,
    verify_sensitivity_split, verify_tensorization,
)
from juntabound.wrec import KNOWN_LP_CAPS, BsCapTable, w_table

LP_W = w_table(4, BsCapTable.lp())
WORST_W = w_table(4, BsCapTable.worst())


def test_enumeration():
    assert [sum(1 for _ in enumerate_functions(n)) for n in range(4)] == [2, 4, 16, 256]
    fs = list(enumerate_functions(2))
    assert len(set(fs)) == 16 and fs[0] == constant(2, 0) and fs[-1] == constant(2, 1)
    with pytest.raises(ValueError):
        list(enumerate_functions(5))


def test_degree_split_examples():
    assert check_degree_split(parity(2)) is True
    assert check_degree_split(and_(2)) is True
    assert check_degree_split(dictator(3, 2)) is None
    assert check_degree_split(constant(2, 1)) is None
    assert verify_degree_split(dictator(1))


def test_sensitivity_split_examples():
    assert check_sensitivity_split(parity(2)) is True
    assert check_sensitivity_split(and_(2)) is True
    assert check_sensitivity_split(dictator(2, 1)) is None
    assert verify_sensitivity_split(constant(1, 0))


def test_averaging_examples():
    assert verify_averaging(and_(2), {1, 2})
    assert verify_averaging(parity(2), {1})
    assert verify_averaging(tribes(2, 2), set())
    with pytest.raises(ValueError):
        verify_averaging(dictator(2, 1), {2})  # x_2 is irrelevant
    assert check_averaging(constant(2, 0)) is None


def test_monomial_fixing_examples():
    assert verify_monomial_fixing(tribes(2, 2))
    assert verify_monomial_fixing(and_(3))
    assert check_monomial_fixing(constant(3, 0)) is None


def test_consistency_examples():
    bs_caps = dict(KNOWN_LP_CAPS)
    for f in (parity(4), dictator(1), decision_tree_complete(2)):
        assert consistency_failures(f, LP_W, bs_caps) == []
        assert verify_consistency(f, WORST_W, bs_caps)
    assert LP_W[1, 1] == Fraction(1, 2)
    assert verify_consistency(constant(2, 0), LP_W, bs_caps)


def test_consistency_flags_bad_tables():
    # pretend degree-2 functions have bs <= 1
    assert consistency_failures(parity(2), LP_W, {**KNOWN_LP_CAPS, 2: 1}) == ["bs_le_lp_cap"]
    tiny = w_table(4, BsCapTable.lp({2: 0}))
    assert "w_le_table" in consistency_failures(parity(2), tiny, KNOWN_LP_CAPS)


def test_tensorization_examples():
    assert verify_tensorization(or_(2), and_(2))
    assert verify_tensorization(parity(2), parity(2))
    assert verify_tensorization(dictator(1), tribes(2, 2))
    assert verify_tensorization(constant(2, 1), and_(2))
    with pytest.raises(ValueError):
        verify_tensorization(and_(2), and_(5))


def test_influence_tight_for_and():
    for d in range(1, 5):
        assert all(influence(and_(d), i) == Fraction(2, 2**d) for i in range(1, d + 1))


@given(functions(max_arity=4))
def test_every_local_check_passes(f):
    assert verify_degree_split(f) and verify_sensitivity_split(f) and verify_monomial_fixing(f)
    assert check_averaging(f) is not False
    if f.arity:
        assert verify_consistency(f, LP_W, KNOWN_LP_CAPS)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_suite_small_arities(n):
    rep = run_suite(n, (WORST_W, LP_W), KNOWN_LP_CAPS)
    assert rep.ok and rep.counterexamples == []
    assert rep.functions_checked == 2 ** (2**n)
    assert set(rep.checks) == set(CHECKS)
    assert all(rep.checks[c] == rep.functions_checked for c in CHECKS)


def test_suite_is_schedule_independent():
    serial = run_suite(3, (WORST_W, LP_W), KNOWN_LP_CAPS)
    parallel = run_suite(3, (WORST_W, LP_W), KNOWN_LP_CAPS, jobs=3)
    assert serial.record() == parallel.record()


def test_suite_reports_counterexamples():
    bad = run_suite(2, (LP_W,), {1: 1, 2: 1})
    assert not bad.ok
    names = {c for _, c, _ in bad.counterexamples}
    assert names == {"bs_le_lp_cap"}
    assert ("2:0110", "bs_le_lp_cap", "caps=lp") in bad.counterexamples
    assert bad.checks["bs_le_lp_cap"] + len(bad.counterexamples) == 16


def test_report_merge_is_associative():
    parts = [run_suite(1, (LP_W,), KNOWN_LP_CAPS) for _ in range(3)]
    a, b, c = parts
    assert a.merge(b).merge(c).record() == a.merge(b.merge(c)).record()
    assert SuiteReport(1).merge(a).record()["checks"] == a.record()["checks"]


def test_tensor_suite():
    rep = run_tensor_suite(2)
    assert rep.ok
    assert rep.functions_checked == 20 * 20
    assert rep.checks["tensor_degree"] == 400
