import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptltl.core import (
    TRUE, And, Const, Count, Event, ForallP, History, Not, Pred, Rel,
    Session, Sort, Var, apply_substitution, free_vars, sort_of,
)
from ptltl.errors import SortError
from ptltl.testkit import random_formula

INT, STR = Sort.INT, Sort.STR

x, y = Var("x", INT), Var("y", INT)


def test_free_vars_atom():
    assert free_vars(Pred("p", (x,))) == {x}


def test_free_vars_binder_closes():
    f = ForallP((x,), "p", Pred("q", (x, x)))
    assert free_vars(f) == set()


def test_free_vars_count_binds_only_its_variable():
    f = Count(x, Pred("negative"), Rel("<=", (x, y)))
    assert free_vars(f) == {y}


def test_substitution_direct_replacement():
    f = Rel("=", (x, y))
    assert apply_substitution(f, {"x": 1}) == Rel("=", (Const(1), y))


def test_substitution_leaves_bound_variable():
    f = ForallP((x,), "p", Rel("=", (x, y)))
    g = apply_substitution(f, {"x": 1, "y": 2})
    assert g == ForallP((x,), "p", Rel("=", (x, Const(2))))


def test_substitution_unknown_amount():
    X = Var("X", INT)
    assert apply_substitution(Pred("p", (X,)), {"X": 100}) == Pred("p", (Const(100),))


def test_substitution_rejects_sort_mismatch():
    with pytest.raises(SortError):
        apply_substitution(Pred("p", (x,)), {"x": "text"})


def test_value_sorts():
    assert sort_of(7) is INT
    assert sort_of("a") is STR
    q = Fraction(2, -4)
    assert sort_of(q) is Sort.RAT
    assert (q.numerator, q.denominator) == (-1, 2)


def test_session_is_a_set_in_canonical_order():
    a = Session([Event("q", (2,)), Event("p", (1,)), Event("q", (2,))])
    b = Session([Event("p", (1,)), Event("q", (2,))])
    assert a == b
    assert repr(a) == repr(b) == "{p(1), q(2)}"
    assert len(a) == 2


def test_history_is_one_based():
    h = History([[Event("p", (1,))], []])
    assert h[1].has("p", (1,))
    assert len(h[2]) == 0
    with pytest.raises(IndexError):
        h[0]
    with pytest.raises(IndexError):
        h[3]


def test_history_size_counts_symbols():
    h = History([[Event("p", (1,)), Event("r")], [Event("q", (1, 2))]])
    assert h.size() == 2 + 1 + 3


def test_variables_and_substitute():
    X = Var("X", INT)
    h = History([[Event("p", (X,)), Event("p", (1,))]])
    assert h.variables() == {X}
    g = h.substitute({"X": 1})
    assert g.ground and len(g[1]) == 1


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.dictionaries(st.sampled_from("xyz"), st.integers(-3, 3), max_size=3))
def test_free_vars_after_substitution(seed, sigma):
    rng = random.Random(seed)
    f = random_formula(rng, max_depth=4)
    # peel closed wrappers until something free is left to substitute
    while isinstance(f, (Not, ForallP)) and not free_vars(f):
        f = f.sub if isinstance(f, Not) else f.body
    ints = {k: v for k, v in sigma.items() if any(w.name == k and w.sort is INT for w in free_vars(f))}
    g = apply_substitution(f, ints)
    assert {v.name for v in free_vars(g)} == {v.name for v in free_vars(f)} - set(ints)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(-3, 3), st.integers(-3, 3))
def test_substitution_composition(seed, a, b):
    f = And(Rel("<=", (x, y)), Pred("q", (y, x)))
    one = apply_substitution(apply_substitution(f, {"x": a}), {"y": b})
    both = apply_substitution(f, {"x": a, "y": b})
    assert one == both


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("pq"), st.integers(0, 3)), max_size=6))
def test_canonical_order_is_insertion_independent(evs):
    events = [Event(n, (v,)) for n, v in evs]
    a = Session(events)
    b = Session(list(reversed(events)))
    assert repr(a) == repr(b)


def test_true_is_closed():
    assert free_vars(TRUE) == set()
    assert free_vars(Pred("s", (Var("z", STR),))) == {Var("z", STR)}
