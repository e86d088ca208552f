import random

import pytest
from hypothesis import given, settings, strategies as st

from ptltl import constraints as C
from ptltl.core import (
    TRUE, App, Const, Count, Event, History, Not, Pred, Rel, Sort, Var,
)
from ptltl.errors import BudgetExceeded, CompileError
from ptltl.evaluate import eval_at
from ptltl.parser import parse_formula
from ptltl.partial import adhere, compile, psat
from ptltl.testkit import psat_bounded, random_formula, random_history, random_po_instance

INT, STR = Sort.INT, Sort.STR
X = Var("X", INT)
EBAY = {"win": (STR, INT), "pay": (INT, STR, INT), "post": (STR, INT), "positive": ()}


def test_single_event_compiles_to_equation():
    h = History([[Event("p", (X,))]])
    c = compile(h, 1, Pred("p", (Const(5),)))
    assert c == C.CEq(C.Lin.var("X"), C.Lin.constant(5))


def test_absent_predicate_compiles_to_false():
    assert compile(History([[]]), 1, Pred("p", (Const(5),))) == C.BOT


def test_out_of_range_compiles_to_false():
    h = History([[Event("p", (X,))]])
    assert compile(h, 0, TRUE) == C.BOT
    assert compile(h, 2, TRUE) == C.BOT


def test_prev_at_first_session():
    h = History([[Event("p", (X,))]])
    assert compile(h, 1, parse_formula("prev true", {})) == C.BOT


def test_bidding_example(win_pay):
    h, psi, phi = win_pay
    assert h.variables() == {X}
    r = psat(h, 2, psi)
    assert r.value and set(r.witness) == {"X"}
    assert r.witness["X"] == 100
    assert eval_at(h.substitute(r.witness), 2, psi).value
    assert adhere(h, 2, psi) is False
    assert adhere(h, 2, phi) is True
    assert eval_at(h.substitute({"X": 99}), 2, psi).value is False


def test_ground_argument_meets_unknown_in_lookup():
    h = History([[Event("q", (1, X))]])
    f = parse_formula("forall (a,b):q. q(b, b)", {"q": (INT, INT)})
    r = psat(h, 1, f)
    assert r.value and r.witness == {"X": 1}
    assert adhere(h, 1, f) is False


def test_bounded_bidding_example(win_pay):
    h, psi, _ = win_pay
    assert psat_bounded(h, 2, psi, 0, 200) is True
    assert psat_bounded(h, 2, psi, 0, 50) is False


def test_forced_amount_contradiction():
    h = History([[Event("win", ("a", 100)), Event("pay", (1, "a", X))]])
    f = parse_formula("forall (x,v):win. exists (t,y,u):pay. x = y & u = v & u >= 200", EBAY)
    assert psat(h, 1, f).value is False
    assert psat_bounded(h, 1, f, -300, 300) is False


def test_ground_history_matches_evaluation():
    rng = random.Random(3)
    for _ in range(100):
        h = random_history(rng)
        f = random_formula(rng, max_depth=4, core=True)
        i = rng.randint(1, len(h))
        v = eval_at(h, i, f).value
        assert psat(h, i, f).value == v == adhere(h, i, f)


def test_string_unknowns():
    S = Var("S", STR)
    h = History([[Event("s", (S,))]])
    f = parse_formula('forall (z):s. !(z = "a") & !(z = "b")', {"s": (STR,)})
    r = psat(h, 1, f)
    assert r.value and r.witness["S"] not in {"a", "b"}
    assert adhere(h, 1, f) is False


def test_arithmetic_over_unknowns():
    h = History([[Event("p", (X,)), Event("q", (X, 4))]])
    sig = {"p": (INT,), "q": (INT, INT)}
    f = parse_formula("forall (a):p. exists (b,c):q. 2 * a + c = 10 & a = b", sig)
    r = psat(h, 1, f)
    assert r.value and r.witness == {"X": 3}
    assert not psat(h, 1, parse_formula("forall (a):p. 2 * a = 7", sig)).value


def test_rejects_nonlinear():
    Y = Var("Y", INT)
    h = History([[Event("q", (X, Y))]])
    f = parse_formula("forall (a,b):q. a * b = 6", {"q": (INT, INT)})
    with pytest.raises(CompileError):
        compile(h, 1, f)


def test_rejects_count_and_guards():
    h = History([[Event("p", (X,))]])
    y = Var("y", INT)
    with pytest.raises(CompileError):
        compile(h, 1, Count(y, TRUE, Rel("=", (y, Const(1)))))
    with pytest.raises(CompileError):
        compile(h, 1, parse_formula("forall (x): once p(x). x = 1", {"p": (INT,)}))


def test_node_cap():
    h = History([[Event("p", (Var(f"X{k}", INT),)) for k in range(6)] for _ in range(4)])
    f = parse_formula("historically (forall (a):p. exists (b):p. a = b + 1 | once p(a + 2))", {"p": (INT,)})
    with pytest.raises(BudgetExceeded):
        compile(h, 4, f, node_cap=50)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_duality(seed):
    h, i, f = random_po_instance(random.Random(seed))
    p = psat(h, i, f).value
    assert p or adhere(h, i, Not(f))
    assert not (p and adhere(h, i, Not(f)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_witness_round_trip(seed):
    h, i, f = random_po_instance(random.Random(seed))
    r = psat(h, i, f)
    if r.value:
        assert set(r.witness) == {v.name for v in h.variables()}
        assert eval_at(h.substitute(r.witness), i, f).value


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(-4, 4))
def test_compile_on_ground_instances(seed, val):
    h, i, f = random_po_instance(random.Random(seed))
    g = h.substitute({v.name: val for v in h.variables()})
    assert C.satisfiable(compile(g, i, f)).sat == eval_at(g, i, f).value


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_bounded_oracle_protocol(seed):
    h, i, f = random_po_instance(random.Random(seed))
    r = psat(h, i, f)
    b = psat_bounded(h, i, f, -10, 10)
    if b:
        assert r.value
    if r.value and all(-10 <= w <= 10 for w in r.witness.values()):
        assert b
