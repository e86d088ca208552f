import random

import pytest
from hypothesis import given, settings, strategies as st

from ptltl.core import TRUE, Const, Count, Event, ForallP, History, Pred, Rel, Sort, Var
from ptltl.dp import DPChecker, check_dp, closure, supports
from ptltl.errors import EmptyHistoryError, EngineCapabilityError
from ptltl.evaluate import Evaluator, check, eval_at
from ptltl.parser import parse_formula
from ptltl.testkit import SIGNATURE, gen_qbf, parse_qbf, random_formula, random_history

from conftest import load_history, load_policy

INT = Sort.INT


def test_atomic_lookup():
    h = History([[Event("p", (1,))]])
    assert check_dp(h, Pred("p", (Const(1),))) is True


def test_qbf_single_session():
    inst = gen_qbf(parse_qbf("A x1. E x2. A x3. (x1 | !x2) & (!x2 | x3)"))
    assert check_dp(inst.history, inst.formula) is True


@pytest.mark.parametrize("name, expected", [
    ("ook_created_then_open.hist", True),
    ("ook_connect_first.hist", False),
])
def test_one_out_of_k_pair(name, expected):
    doc = load_policy("one_out_of_k.ptltl")
    h = load_history(name, doc)
    assert check_dp(h, doc.formula) is expected is check(h, doc.formula).value


def test_closure_is_distinct_and_ordered():
    f = parse_formula("prev r & (r since prev r)", SIGNATURE)
    cl = closure(f)
    assert cl[-1] == f
    assert len(cl) == len(set(cl))
    seen = set()
    for g in cl:
        # children are listed before their parents
        for attr in ("sub", "left", "right", "body"):
            kid = getattr(g, attr, None)
            if kid is not None:
                assert kid in seen
        seen.add(g)
    # r, prev r, since, and
    assert len(cl) == 4


def test_capability_errors():
    y = Var("y", INT)
    with pytest.raises(EngineCapabilityError, match="counting"):
        check_dp(History([[]]), Count(y, TRUE, Rel("=", (y, Const(1)))))
    g = parse_formula("forall (x): once p(x). x = 1", SIGNATURE)
    assert not supports(g)
    with pytest.raises(EngineCapabilityError, match="guard"):
        check_dp(History([[Event("p", (1,))]]), g)


def test_empty_history():
    with pytest.raises(EmptyHistoryError):
        check_dp(History([]), TRUE)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_matches_recursive_engine_at_every_index(seed):
    rng = random.Random(seed)
    h = random_history(rng)
    f = random_formula(rng, max_depth=5, core=True)
    for i in range(1, len(h) + 1):
        assert check_dp(h, f, index=i) == eval_at(h, i, f).value


def _count_constants(h, sort):
    from ptltl.core import sort_of
    return sum(1 for c in h.constants() if sort_of(c) is sort)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_table_width_bound(seed):
    rng = random.Random(seed)
    h = random_history(rng)
    f = random_formula(rng, max_depth=5, core=True)
    dp = DPChecker(h)
    dp.run(f)
    n_consts = len(h.constants())
    for t in dp.tables():
        assert all(1 <= i <= len(h) for i, _ in t.cells)
        assert {key for _, key in t.cells} <= set(t.columns)
        assert len(t.columns) <= max(1, n_consts ** len(t.names))
        for key in t.columns:
            assert all(v in h.constants() for v in key)


def test_tables_fill_in_session_order():
    h = History([[Event("p", (1,))], [], [Event("p", (2,))]])
    f = parse_formula("once p(1)", SIGNATURE)
    dp = DPChecker(h)
    assert dp.run(f)
    tables = dp.tables()
    atom = next(t for t in tables if t.formula == parse_formula("p(1)", SIGNATURE))
    assert [atom.lookup(i) for i in (1, 2, 3)] == [True, False, False]
    root = tables[-1]
    assert list(root.cells) == [(3, ())]
    assert root.lookup(3) is True


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_every_materialised_cell_is_correct(seed):
    rng = random.Random(seed)
    h = random_history(rng)
    f = random_formula(rng, max_depth=4, core=True)
    dp = DPChecker(h)
    dp.run(f)
    ev = Evaluator(h)
    for t in dp.tables():
        for (i, key), v in t.cells.items():
            assert v == ev.value(t.formula, i, dict(zip(t.names, key)))


def test_forall_columns_come_from_events():
    h = History([[Event("q", (1, 2)), Event("p", (3,))]])
    f = parse_formula("forall (a,b):q. p(a) | prev p(b)", SIGNATURE)
    dp = DPChecker(h)
    assert dp.run(f) is False
    body_tables = [t for t in dp.tables() if t.names == ("a", "b")]
    assert body_tables and all(t.columns == [(1, 2)] for t in body_tables)
