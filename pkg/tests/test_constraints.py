import random

import pytest
from hypothesis import given, settings, strategies as st

from ptltl.constraints import (
    BOT, TOP, CAnd, CEq, CGe, CLe, CNot, COr, CVar, Lin, brute_force, dump,
    evaluate, mk_and, mk_not, mk_or, satisfiable, to_smtlib, variables,
)
from ptltl.core import Sort
from ptltl.errors import BudgetExceeded
from ptltl.partial import compile as compile_po
from ptltl.testkit import random_constraint

from conftest import GOLDEN

STR = Sort.STR
x, y, X = Lin.var("x"), Lin.var("y"), Lin.var("X")
k = Lin.constant


def test_top():
    r = satisfiable(TOP)
    assert r.sat and r.model == {}


def test_empty_interval():
    assert not satisfiable(mk_and([CGe(x, k(1)), CLe(x, k(0))]))


def test_integer_gap():
    assert not satisfiable(CEq(x + x, k(1)))
    # the rational relaxation would admit x = 1/2; brute force agrees there is no integer
    assert brute_force(CEq(x + x, k(1)), -3, 3) is None


def test_disequality_split():
    r = satisfiable(mk_and([CNot(CEq(x, k(0))), CLe(x, k(0))]))
    assert r.sat and r.model == {"x": -1}


def test_bezout():
    r = satisfiable(CEq(x.scale(3) + y.scale(5), k(1)))
    assert r.sat and 3 * r.model["x"] + 5 * r.model["y"] == 1


def test_parity_after_elimination():
    # 2x = 2y + 1 has no integer solution even though both sides are unbounded
    assert not satisfiable(CEq(x.scale(2), y.scale(2) + k(1)))
    # 2x + 4y in [1, 1] is impossible, in [2, 2] is not
    assert not satisfiable(mk_and([CGe(x.scale(2) + y.scale(4), k(1)), CLe(x.scale(2) + y.scale(4), k(1))]))
    assert satisfiable(mk_and([CGe(x.scale(2) + y.scale(4), k(2)), CLe(x.scale(2) + y.scale(4), k(2))]))


def test_tightening_gap():
    # 3 <= 2x <= 3 over integers
    c = mk_and([CGe(x.scale(2), k(3)), CLe(x.scale(2), k(3))])
    assert not satisfiable(c)


def test_strings_distinct_constants():
    s = CVar("s", STR)
    assert not satisfiable(mk_and([CEq(s, "a"), CEq(s, "b")]))
    r = satisfiable(mk_and([CNot(CEq(s, "a")), CNot(CEq(s, "b"))]))
    assert r.sat and r.model["s"] not in {"a", "b"}


def test_strings_need_two_fresh_values():
    s, t = CVar("s", STR), CVar("t", STR)
    c = mk_and([CNot(CEq(s, t)), CNot(CEq(s, "a")), CNot(CEq(t, "a"))])
    r = satisfiable(c)
    assert r.sat and len({r.model["s"], r.model["t"], "a"}) == 3
    assert brute_force(c) is not None


def test_string_congruence():
    s, t, u = CVar("s", STR), CVar("t", STR), CVar("u", STR)
    c = mk_and([CEq(s, t), CEq(t, u), CEq(u, "a"), CNot(CEq(s, "a"))])
    assert not satisfiable(c)


def test_budget_is_reported_as_unknown():
    c = mk_and([COr((CEq(Lin.var(f"v{j}"), k(0)), CEq(Lin.var(f"v{j}"), k(1)))) for j in range(12)]
               + [CGe(sum((Lin.var(f"v{j}") for j in range(12)), k(0)), k(13))])
    with pytest.raises(BudgetExceeded, match="unknown: budget"):
        satisfiable(c, budget=50)
    assert not satisfiable(c)


def test_smart_constructors():
    assert mk_and([]) == TOP and mk_or([]) == BOT
    assert mk_and([TOP, BOT]) == BOT and mk_or([BOT, TOP]) == TOP
    assert mk_not(mk_not(CEq(x, k(1)))) == CEq(x, k(1))


def test_dump_is_unambiguous():
    s = CVar("T", STR)
    c = mk_and([CNot(CEq(s, "b")), COr((CLe(x.scale(2) - y, k(-3)), CEq(s, CVar("U", STR))))])
    assert dump(c) == '!(T = "b") & (2*x - y <= -3 | T = U)'


@pytest.mark.parametrize("name, build", [
    ("eq_x5.smt2", lambda: CEq(X, k(5))),
    ("bottom.smt2", lambda: BOT),
    ("strings.smt2", lambda: mk_and([CNot(CEq(CVar("T", STR), "b")),
                                    COr((CLe(x.scale(2) - y, k(-3)), CEq(CVar("T", STR), CVar("U", STR))))])),
    ("distinct.smt2", lambda: mk_and([CEq(CVar("s", STR), "a"), CNot(CEq(CVar("t", STR), "a")),
                                     CNot(CEq(CVar("t", STR), "b")), CEq(CVar("u", STR), "b")])),
])
def test_smtlib_golden(name, build):
    assert to_smtlib(build()) == (GOLDEN / name).read_text()


def test_smtlib_compiled_example(win_pay):
    h, psi, _ = win_pay
    c = compile_po(h, 2, psi)
    assert to_smtlib(c) == (GOLDEN / "win_pay.smt2").read_text()


def _z3_verdict(script):
    z3 = pytest.importorskip("z3")
    s = z3.Solver()
    s.from_string(script)
    res = s.check()
    assert res != z3.unknown
    return res == z3.sat


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_z3_agrees(seed):
    c = random_constraint(random.Random(seed))
    assert _z3_verdict(to_smtlib(c)) == satisfiable(c).sat


def test_z3_on_compiled_example(win_pay):
    h, psi, _ = win_pay
    assert _z3_verdict(to_smtlib(compile_po(h, 2, psi))) is True


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_models_are_sound(seed):
    c = random_constraint(random.Random(seed), box=30)
    r = satisfiable(c)
    if r.sat:
        assert set(r.model) == set(variables(c))
        assert evaluate(c, r.model)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_double_negation(seed):
    c = random_constraint(random.Random(seed))
    assert satisfiable(c).sat == satisfiable(CNot(CNot(c))).sat


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_brute_force_agreement(seed):
    c = random_constraint(random.Random(seed), nvars=2)
    assert satisfiable(c).sat == (brute_force(c) is not None)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-12, 12)), min_size=1, max_size=4))
def test_inequality_systems_match_brute_force(rows):
    # integer tightening must neither lose solutions nor invent them
    c = mk_and([CLe(x.scale(a) + y.scale(b), k(r)) for a, b, r in rows]
               + [CGe(x, k(-15)), CLe(x, k(15)), CGe(y, k(-15)), CLe(y, k(15))])
    r = satisfiable(c)
    assert r.sat == (brute_force(c, -15, 15) is not None)
    if r.sat:
        assert evaluate(c, r.model)
