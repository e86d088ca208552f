import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ptltl.core import App, Const, History, Event, Rel, Sort, Var
from ptltl.errors import EvaluationError, PtltlError, SortError
from ptltl.evaluate import eval_at
from ptltl.interp import DEFAULT, RegistryFrozen, builtin_registry, eval_term, path

INT, RAT, STR = Sort.INT, Sort.RAT, Sort.STR


def add(a, b, sort=INT):
    return App("+", (a, b), sort)


def test_ground_sum():
    assert eval_term(add(Const(2), Const(3))) == 5


def test_additive_identity():
    assert eval_term(add(Var("x", INT), Const(0)), {"x": 7}) == 7


def test_path_before_final_separator():
    assert eval_term(App("path", (Const("Document/f.txt"),), STR)) == "Document"
    assert path("a/b/c") == "a/b"
    assert path("plain") == ""


def test_division_is_exact():
    q = eval_term(App("/", (Const(Fraction(1)), Const(Fraction(4))), RAT))
    assert q == Fraction(1, 4)


def test_division_by_zero_is_an_error():
    with pytest.raises(EvaluationError, match="division by zero"):
        eval_term(App("/", (Const(Fraction(1)), Const(Fraction(0))), RAT))


def test_unbound_variable():
    with pytest.raises(EvaluationError, match="unbound"):
        eval_term(Var("x", INT))


def test_unknown_symbol():
    with pytest.raises((SortError, PtltlError)):
        DEFAULT.apply("frobnicate", [1])


def test_mixed_comparison_promotes_int():
    assert DEFAULT.decide("<=", [Fraction(1, 5), 1])
    assert not DEFAULT.decide("<=", [Fraction(2, 5), Fraction(1, 4)])


def test_registry_frozen():
    with pytest.raises(RegistryFrozen):
        DEFAULT.add_function("twice", (INT,), INT, lambda a: 2 * a)
    reg = builtin_registry()
    reg.add_function("twice", (INT,), INT, lambda a: 2 * a)
    reg.freeze()
    assert reg.apply("twice", [4]) == 8


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_rigidity_across_sessions(a, b, c):
    # an interpreted relation means the same thing in every session
    t = add(Var("x", INT), Const(b))
    f = Rel("<=", (t, Const(c)))
    from ptltl.core import apply_substitution
    g = apply_substitution(f, {"x": a})
    h = History([[Event("p", (1,))], [], [Event("q", (1, 2))]])
    vals = {eval_at(h, i, g).value for i in range(1, 4)}
    assert vals == {a + b <= c}


@given(st.integers(-10**30, 10**30), st.integers(-10**30, 10**30))
def test_integers_are_unbounded(a, b):
    assert eval_term(App("*", (Const(a), Const(b)), INT)) == a * b


def test_ground_term_ignores_substitution():
    t = add(Const(2), Const(3))
    rng = random.Random(0)
    for _ in range(20):
        assert eval_term(t, {"x": rng.randint(-9, 9)}) == 5
