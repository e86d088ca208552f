import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ptltl.core import Const, Event, History, Not, Pred
from ptltl.dp import check_dp
from ptltl.evaluate import check
from ptltl.parser import parse_formula, parse_history, parse_policy
from ptltl.testkit import (
    SIGNATURE, WEIGHTS, FormulaGen, QbfSpec, gen_qbf, oracle_eval, parse_qbf,
    psat_bounded, qbf_value, random_formula, random_history, random_qbf,
)

p1 = Pred("p", (Const(1),))


def test_oracle_once_same_session():
    assert oracle_eval(History([[Event("p", (1,))]]), 1, parse_formula("once p(1)", SIGNATURE))


def test_oracle_once_earlier_session():
    h = History([[Event("p", (1,))], []])
    assert oracle_eval(h, 2, parse_formula("once p(1)", SIGNATURE))


def test_oracle_historically_fails_on_gap():
    h = History([[], [Event("p", (1,))]])
    assert not oracle_eval(h, 2, parse_formula("historically p(1)", SIGNATURE))


SAMPLE_QBF = "A x1. E x2. A x3. (x1 | !x2) & (!x2 | x3)"


def _truth_table(spec):
    # independent enumerator: ranges over all assignments, folds quantifiers from the inside
    names = [x for _, x in spec.prefix]

    def ev(m, env):
        kind = m[0]
        if kind == "var":
            return env[m[1]]
        if kind == "not":
            return not ev(m[1], env)
        if kind == "and":
            return ev(m[1], env) and ev(m[2], env)
        if kind == "or":
            return ev(m[1], env) or ev(m[2], env)
        raise AssertionError(kind)

    table = {bits: ev(spec.matrix, dict(zip(names, bits)))
             for bits in itertools.product((False, True), repeat=len(names))}
    for depth in range(len(names), 0, -1):
        q = spec.prefix[depth - 1][0]
        table = {k[:-1]: (all if q == "A" else any)(table[k[:-1] + (b,)] for b in (False, True))
                 for k in table if k[-1] is False}
    return table[()]


def test_sample_qbf_is_true():
    spec = parse_qbf(SAMPLE_QBF)
    assert qbf_value(spec) is True is _truth_table(spec)
    for trace_like in (False, True):
        inst = gen_qbf(spec, trace_like)
        assert inst.expected is True
        assert check(inst.history, inst.formula).value is True


@pytest.mark.parametrize("text, expected", [("E x. x", True), ("A x. x", False)])
def test_one_variable(text, expected):
    spec = parse_qbf(text)
    assert qbf_value(spec) is expected
    for trace_like in (False, True):
        inst = gen_qbf(spec, trace_like)
        assert check(inst.history, inst.formula).value is expected


def test_single_session_shape():
    inst = gen_qbf(parse_qbf(SAMPLE_QBF))
    assert len(inst.history) == 1
    assert repr(inst.history[1]) == "{p1(0), p1(1), p2(0), p2(1), p3(0), p3(1), true_(1)}"


def test_trace_like_shape():
    inst = gen_qbf(parse_qbf(SAMPLE_QBF), trace_like=True)
    h = inst.history
    assert len(h) == 6 and h.is_trace_like()
    assert [repr(s) for s in h.sessions] == [
        "{p3(0), true_(1)}", "{p3(1), true_(1)}",
        "{p2(0), true_(1)}", "{p2(1), true_(1)}",
        "{p1(0), true_(1)}", "{p1(1), true_(1)}",
    ]
    assert inst.policy_text.splitlines()[-1].startswith(
        "policy historically (forall x1:p1. once (exists x2:p2. historically (forall x3:p3.")


def test_policy_text_parses_to_formula():
    for trace_like in (False, True):
        inst = gen_qbf(parse_qbf(SAMPLE_QBF), trace_like)
        assert parse_policy(inst.policy_text).formula == inst.formula


def test_variable_cap():
    names = " ".join(f"A x{k}." for k in range(17))
    with pytest.raises(Exception, match="16"):
        parse_qbf(f"{names} x0")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_exhaustive_small_specs(n):
    rng = random.Random(100 + n)
    for _ in range(12):
        spec = random_qbf(n, rng)
        want = _truth_table(spec)
        assert qbf_value(spec) is want
        for trace_like in (False, True):
            inst = gen_qbf(spec, trace_like)
            assert check(inst.history, inst.formula).value is want
            assert check_dp(inst.history, inst.formula) is want


def test_spec_round_trips_through_text():
    rng = random.Random(9)
    for _ in range(30):
        spec = random_qbf(rng.randint(1, 5), rng)
        assert parse_qbf(str(spec)) == spec


def test_bounded_psat_on_ground_history():
    rng = random.Random(2)
    for _ in range(50):
        h = random_history(rng)
        f = random_formula(rng, max_depth=4)
        i = rng.randint(1, len(h))
        # truth at i only depends on the prefix up to i
        assert psat_bounded(h, i, f) == check(History(h.sessions[:i]), f).value


def test_generators_are_seeded():
    a = [random_formula(random.Random(s)) for s in range(20)]
    b = [random_formula(random.Random(s)) for s in range(20)]
    assert a == b
    assert sum(WEIGHTS.values()) == 100
    assert WEIGHTS["atom"] == 35


def test_history_bounds():
    rng = random.Random(5)
    for _ in range(200):
        h = random_history(rng)
        assert 1 <= len(h) <= 6
        assert all(len(s) <= 4 for s in h.sessions)


def test_core_generator_avoids_count():
    from ptltl.dp import supports
    rng = random.Random(8)
    assert all(supports(random_formula(rng, core=True)) for _ in range(300))
