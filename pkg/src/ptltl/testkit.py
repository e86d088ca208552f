"""Independent oracles and seeded generators for differential testing.

``oracle_eval`` transcribes the defining clauses directly: it substitutes
quantified values into formulae, searches for a ``since`` witness ``j`` and
checks every later ``k``, and brute-forces guard solutions over the constants
of the history.  It deliberately shares nothing with the recursive engine
beyond term evaluation.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    TRUE, And, App, Const, Count, Event, Exists, ExistsG, ForallG, ForallP,
    GAnd, GAtom, GHist, GOnce, GOr, GPrev, GSince, Historically, History, Not, Once, Or,
    Pred, Prev,
    Rel, Session, Since, Sort, TrueF, Var, apply_substitution, free_vars,
    guard_vars, sort_of,
)
from .errors import PtltlError
from .guards import guard_to_formula
from .interp import DEFAULT, eval_term

INT, STR = Sort.INT, Sort.STR


# ---------------------------------------------------------------- oracle

class _Oracle:
    def __init__(self, h: History, registry=DEFAULT):
        self.h = h
        self.reg = registry
        self.memo: dict = {}
        self.consts = sorted(h.constants(), key=lambda v: (sort_of(v).value, str(v)))

    def holds(self, f, i: int) -> bool:
        key = (f, i)
        if key in self.memo:
            return self.memo[key]
        res = self._holds(f, i)
        self.memo[key] = res
        return res

    def _holds(self, f, i):
        h = self.h
        if isinstance(f, TrueF):
            return True
        if isinstance(f, Pred):
            args = tuple(eval_term(t, None, self.reg) for t in f.args)
            return Event(f.name, args) in h[i]
        if isinstance(f, Rel):
            return self.reg.decide(f.op, [eval_term(t, None, self.reg) for t in f.args])
        if isinstance(f, Not):
            return not self.holds(f.sub, i)
        if isinstance(f, And):
            return self.holds(f.left, i) and self.holds(f.right, i)
        if isinstance(f, Prev):
            return i > 1 and self.holds(f.sub, i - 1)
        if isinstance(f, Since):
            return any(
                self.holds(f.right, j) and all(self.holds(f.left, k) for k in range(j + 1, i + 1))
                for j in range(1, i + 1)
            )
        if isinstance(f, ForallP):
            for e in h[i]:
                if e.name != f.pred:
                    continue
                sigma = {v.name: a for v, a in zip(f.vars, e.args)}
                if not self.holds(apply_substitution(f.body, sigma), i):
                    return False
            return True
        if isinstance(f, Count):
            n = sum(1 for j in range(1, i + 1) if self.holds(f.counted, j))
            return self.holds(apply_substitution(f.body, {f.var.name: n}), i)
        if isinstance(f, (ForallG, ExistsG)):
            sols = self.guard_solutions(f.guard, i)
            results = (self.holds(apply_substitution(f.body, s), i) for s in sols)
            return any(results) if isinstance(f, ExistsG) else all(results)
        raise TypeError(f"not a formula: {f!r}")

    def guard_solutions(self, g, i, extra=()) -> list[dict]:
        """Brute force: every candidate tuple of history constants, filtered by truth.

        ``extra`` widens the candidate pool with further values (of any sort).
        """
        gvars = sorted(guard_vars(g), key=lambda v: v.name)
        cands = self.consts + [c for c in extra if c not in self.consts]
        pools = [[c for c in cands if sort_of(c) is v.sort or
                  (v.sort is Sort.RAT and sort_of(c) is INT)] for v in gvars]
        gf = guard_to_formula(g)
        out = []
        for combo in itertools.product(*pools):
            sigma = {v.name: c for v, c in zip(gvars, combo)}
            if self.holds(apply_substitution(gf, sigma), i):
                out.append(sigma)
        return out


def oracle_eval(h: History, i: int, f, registry=DEFAULT) -> bool:
    """Truth of closed ``f`` at ``(h, i)`` by direct transcription of the semantics."""
    if not 1 <= i <= len(h):
        raise PtltlError(f"session index {i} outside 1..{len(h)}")
    return _Oracle(h, registry).holds(f, i)


def oracle_guard_solutions(h: History, i: int, g, extra=()) -> set:
    """Solutions of ``g`` at ``(h, i)`` found by filtering candidate tuples."""
    sols = _Oracle(h).guard_solutions(g, i, extra)
    return {tuple(sorted(s.items())) for s in sols}


# ---------------------------------------------------------------- QBF

@dataclass(frozen=True)
class QbfSpec:
    """Prenex QBF: ``prefix`` is a tuple of (``"A"``|``"E"``, variable); ``matrix`` a nested tuple.

    Matrix nodes are ``("var", x)``, ``("not", m)``, ``("and", a, b)``,
    ``("or", a, b)`` and ``("const", bool)``.
    """

    prefix: tuple
    matrix: tuple

    MAX_VARS = 16

    def __post_init__(self):
        names = [x for _, x in self.prefix]
        if len(names) > self.MAX_VARS:
            raise PtltlError(f"QBF has {len(names)} variables; at most {self.MAX_VARS} are supported")
        if len(set(names)) != len(names):
            raise PtltlError("QBF prefix binds a variable twice")
        free = _matrix_vars(self.matrix) - set(names)
        if free:
            raise PtltlError(f"QBF matrix has unbound variables: {', '.join(sorted(free))}")

    def __str__(self):
        pre = " ".join(f"{q} {x}." for q, x in self.prefix)
        return f"{pre} {_matrix_str(self.matrix, 0)}".strip()


def _matrix_vars(m) -> set:
    if m[0] == "var":
        return {m[1]}
    if m[0] == "const":
        return set()
    return set().union(*(_matrix_vars(s) for s in m[1:]))


def _matrix_str(m, prec):
    if m[0] == "var":
        return m[1]
    if m[0] == "const":
        return "1" if m[1] else "0"
    if m[0] == "not":
        return "!" + _matrix_str(m[1], 3)
    op, p = (" & ", 2) if m[0] == "and" else (" | ", 1)
    text = _matrix_str(m[1], p) + op + _matrix_str(m[2], p)
    return f"({text})" if prec > p else text


def parse_qbf(text: str) -> QbfSpec:
    """Parse ``"A x1. E x2. (x1 | !x2) & x2"``: quantifier prefix, then a matrix."""
    pos = 0
    prefix = []
    pattern = re.compile(r"\s*([AE])\s+([A-Za-z_][A-Za-z0-9_]*)\s*\.")
    while True:
        m = pattern.match(text, pos)
        if not m:
            break
        prefix.append((m.group(1), m.group(2)))
        pos = m.end()
    tokens = re.findall(r"[A-Za-z_][A-Za-z0-9_]*|[01]|[()!&|~]|\S", text[pos:])
    it = _TokenStream(tokens)
    matrix = it.parse_or()
    if it.peek() is not None:
        raise PtltlError(f"unexpected token {it.peek()!r} in QBF matrix")
    return QbfSpec(tuple(prefix), matrix)


class _TokenStream:
    def __init__(self, toks):
        self.toks = toks
        self.k = 0

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise PtltlError("unexpected end of QBF matrix")
        self.k += 1
        return tok

    def parse_or(self):
        left = self.parse_and()
        while self.peek() == "|":
            self.take()
            left = ("or", left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_not()
        while self.peek() == "&":
            self.take()
            left = ("and", left, self.parse_not())
        return left

    def parse_not(self):
        if self.peek() in ("!", "~"):
            self.take()
            return ("not", self.parse_not())
        tok = self.take()
        if tok == "(":
            inner = self.parse_or()
            if self.take() != ")":
                raise PtltlError("expected ')' in QBF matrix")
            return inner
        if tok in ("0", "1"):
            return ("const", tok == "1")
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return ("var", tok)
        raise PtltlError(f"unexpected token {tok!r} in QBF matrix")


def _eval_matrix(m, env) -> bool:
    tag = m[0]
    if tag == "var":
        return env[m[1]]
    if tag == "const":
        return m[1]
    if tag == "not":
        return not _eval_matrix(m[1], env)
    if tag == "and":
        return _eval_matrix(m[1], env) and _eval_matrix(m[2], env)
    return _eval_matrix(m[1], env) or _eval_matrix(m[2], env)


def qbf_value(spec: QbfSpec) -> bool:
    """Truth of the QBF by exhaustive enumeration of assignments."""
    def go(k, env):
        if k == len(spec.prefix):
            return _eval_matrix(spec.matrix, env)
        q, x = spec.prefix[k]
        branches = (go(k + 1, {**env, x: b}) for b in (False, True))
        return all(branches) if q == "A" else any(branches)
    return go(0, {})


def random_qbf(nvars: int, rng: random.Random, clauses: int | None = None, width: int = 2) -> QbfSpec:
    """A prenex CNF: random quantifiers, ``clauses`` clauses of ``width`` literals."""
    names = [f"x{k}" for k in range(1, nvars + 1)]
    prefix = tuple((rng.choice("AE"), x) for x in names)
    clauses = clauses if clauses is not None else rng.randint(1, nvars + 1)
    matrix = None
    for _ in range(clauses):
        lits = []
        for x in rng.sample(names, min(width, nvars)):
            lit = ("var", x)
            lits.append(("not", lit) if rng.random() < 0.5 else lit)
        clause = lits[0]
        for lit in lits[1:]:
            clause = ("or", clause, lit)
        matrix = clause if matrix is None else ("and", matrix, clause)
    return QbfSpec(prefix, matrix)


def _matrix_formula(m, truth_pred: str):
    tag = m[0]
    if tag == "var":
        return Pred(truth_pred, (Var(m[1], INT),))
    if tag == "const":
        return TRUE if m[1] else Not(TRUE)
    if tag == "not":
        return Not(_matrix_formula(m[1], truth_pred))
    a, b = _matrix_formula(m[1], truth_pred), _matrix_formula(m[2], truth_pred)
    return And(a, b) if tag == "and" else Or(a, b)


def _matrix_text(m, prec, truth_pred):
    tag = m[0]
    if tag == "var":
        return f"{truth_pred}({m[1]})"
    if tag == "const":
        return "true" if m[1] else "false"
    if tag == "not":
        return "!" + _matrix_text(m[1], 3, truth_pred)
    op, p = (" & ", 2) if tag == "and" else (" | ", 1)
    text = _matrix_text(m[1], p, truth_pred) + op + _matrix_text(m[2], p, truth_pred)
    return f"({text})" if prec > p else text


@dataclass(frozen=True)
class QbfInstance:
    spec: QbfSpec
    trace_like: bool
    formula: object
    history: History
    policy_text: str
    predicates: dict
    expected: bool


TRUTH_PRED = "true_"


def gen_qbf(spec: QbfSpec, trace_like: bool = False) -> QbfInstance:
    """Model-checking instance whose verdict equals the truth of ``spec``.

    Quantifier k ranges over predicate ``p<k>`` holding the two truth values
    0 and 1; ``true_(1)`` marks truth.  The single-session form puts all of
    them in one session.  The trace-like form gives each value its own
    session, innermost variable first, and reaches them with ``historically``
    for universal and ``once`` for existential quantifiers.
    """
    n = len(spec.prefix)
    preds = {f"p{k}": [INT] for k in range(1, n + 1)}
    preds[TRUTH_PRED] = [INT]
    if trace_like:
        sessions = []
        for k in range(n, 0, -1):
            for b in (0, 1):
                sessions.append(Session([Event(f"p{k}", (b,)), Event(TRUTH_PRED, (1,))]))
        h = History(sessions)
    else:
        events = [Event(f"p{k}", (b,)) for k in range(1, n + 1) for b in (0, 1)]
        h = History([Session(events + [Event(TRUTH_PRED, (1,))])])

    body = _matrix_formula(spec.matrix, TRUTH_PRED)
    text = _matrix_text(spec.matrix, 0, TRUTH_PRED)
    for k in range(n, 0, -1):
        q, x = spec.prefix[k - 1]
        v = (Var(x, INT),)
        if q == "A":
            body = ForallP(v, f"p{k}", body)
            text = f"forall {x}:p{k}. {text}"
            if trace_like:
                body = Historically(body)
                text = f"historically ({text})"
        else:
            body = Exists(v, f"p{k}", body)
            text = f"exists {x}:p{k}. {text}"
            if trace_like:
                body = Once(body)
                text = f"once ({text})"
    decl = "".join(f"pred {p}(Int).\n" for p in preds)
    policy = f"{decl}policy {text}.\n"
    return QbfInstance(spec, trace_like, body, h, policy, preds, qbf_value(spec))


# ---------------------------------------------------------------- bounded psat

def psat_bounded(h: History, i: int, f, lo: int = -10, hi: int = 10, registry=DEFAULT) -> bool:
    """Brute-force potential satisfiability.

    Int unknowns range over ``[lo, hi]``.  The other unknowns range over the
    constants of their sort occurring in ``h`` or ``f`` plus one fresh value,
    which stands for every value not mentioned anywhere.
    """
    from .evaluate import eval_at

    unknowns = sorted(h.variables(), key=lambda v: v.name)
    consts = set(h.constants()) | _formula_constants(f)
    pools = []
    for v in unknowns:
        if v.sort is INT:
            pools.append(range(lo, hi + 1))
        else:
            pool = sorted((c for c in consts if sort_of(c) is v.sort), key=str)
            pool.append("\x00fresh" if v.sort is STR else Fraction(1, 999_983))
            pools.append(pool)
    for combo in itertools.product(*pools):
        sigma = {v.name: c for v, c in zip(unknowns, combo)}
        if eval_at(h.substitute(sigma), i, f, registry=registry).value:
            return True
    return False


def _formula_constants(f) -> set:
    out: set = set()

    def term(t):
        if isinstance(t, Const):
            out.add(t.value)
        elif isinstance(t, App):
            for a in t.args:
                term(a)

    def walk(g):
        if isinstance(g, (Pred, Rel)):
            for t in g.args:
                term(t)
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, (And, Since)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Prev):
            walk(g.sub)
        elif isinstance(g, ForallP):
            walk(g.body)
        elif isinstance(g, Count):
            walk(g.counted)
            walk(g.body)
        elif isinstance(g, (ForallG, ExistsG)):
            walk(guard_to_formula(g.guard))
            walk(g.body)
    walk(f)
    return out


# ---------------------------------------------------------------- random instances

SIGNATURE = {"p": [INT], "q": [INT, INT], "s": [STR], "r": []}
INT_POOL = (0, 1, 2, 3)
STR_POOL = ("a", "b")
WEIGHTS = {"atom": 35, "not": 15, "and": 15, "prev": 10, "since": 10, "forall": 10, "count": 5}


def random_history(rng: random.Random, max_len: int = 6, max_events: int = 4,
                   min_len: int = 1, signature=SIGNATURE) -> History:
    sessions = []
    for _ in range(rng.randint(min_len, max_len)):
        events = []
        for _ in range(rng.randint(0, max_events)):
            name = rng.choice(sorted(signature))
            events.append(Event(name, tuple(_random_value(rng, s) for s in signature[name])))
        sessions.append(Session(events))
    return History(sessions)


def _random_value(rng, sort):
    return rng.choice(INT_POOL) if sort is INT else rng.choice(STR_POOL)


class FormulaGen:
    """Seeded random formulae over :data:`SIGNATURE`.

    Node kinds are drawn with :data:`WEIGHTS`; ``core`` drops the counting
    quantifier.  ``int_consts`` bounds the constants used in comparisons.
    """

    def __init__(self, rng: random.Random, max_depth: int = 5, core: bool = False,
                 int_consts=INT_POOL, arithmetic: bool = True):
        self.rng = rng
        self.max_depth = max_depth
        self.core = core
        self.int_consts = tuple(int_consts)
        self.arithmetic = arithmetic
        self.fresh = 0

    def formula(self, scope: tuple = (), depth: int | None = None):
        depth = self.max_depth if depth is None else depth
        weights = dict(WEIGHTS)
        if self.core:
            del weights["count"]
        if depth <= 1:
            kind = "atom"
        else:
            kinds = sorted(weights)
            kind = self.rng.choices(kinds, weights=[weights[k] for k in kinds])[0]
        d = depth - 1
        if kind == "atom":
            return self.atom(scope)
        if kind == "not":
            return Not(self.formula(scope, d))
        if kind == "and":
            return And(self.formula(scope, d), self.formula(scope, d))
        if kind == "prev":
            return Prev(self.formula(scope, d))
        if kind == "since":
            return Since(self.formula(scope, d), self.formula(scope, d))
        if kind == "forall":
            pred = self.rng.choice(["p", "q", "s"])
            vs = tuple(self._fresh(s) for s in SIGNATURE[pred])
            return ForallP(vs, pred, self.formula(scope + vs, d))
        counted = self.formula(scope, d)
        var = self._fresh(INT)
        return Count(var, counted, self.formula(scope + (var,), d))

    def _fresh(self, sort):
        self.fresh += 1
        return Var(f"{'n' if sort is INT else 'w'}{self.fresh}", sort)

    def int_term(self, scope):
        ints = [v for v in scope if v.sort is INT]
        r = self.rng.random()
        if ints and r < 0.6:
            t = self.rng.choice(ints)
            if self.arithmetic and self.rng.random() < 0.2:
                t = App("+", (t, Const(self.rng.choice(self.int_consts))), INT)
            return t
        return Const(self.rng.choice(self.int_consts))

    def str_term(self, scope):
        strs = [v for v in scope if v.sort is STR]
        if strs and self.rng.random() < 0.6:
            return self.rng.choice(strs)
        return Const(self.rng.choice(STR_POOL))

    def atom(self, scope):
        r = self.rng.random()
        if r < 0.1:
            return TRUE
        if r < 0.55:
            pred = self.rng.choice(sorted(SIGNATURE))
            args = tuple(self.int_term(scope) if s is INT else self.str_term(scope)
                         for s in SIGNATURE[pred])
            return Pred(pred, args)
        if r < 0.85 or not any(v.sort is STR for v in scope):
            op = self.rng.choice(["=", "!=", "<=", "<", ">=", ">"])
            return Rel(op, (self.int_term(scope), self.int_term(scope)))
        op = self.rng.choice(["=", "!="])
        return Rel(op, (self.str_term(scope), self.str_term(scope)))


def random_formula(rng: random.Random, max_depth: int = 5, core: bool = False):
    return FormulaGen(rng, max_depth, core).formula()


# -- po-instances

def random_po_instance(rng: random.Random, max_unknowns: int = 2, bound: int = 8):
    """(h, i, psi): a history with at most ``max_unknowns`` Int unknowns and a core formula
    whose integer comparisons are between one variable and a constant with ``|c| <= bound``.
    """
    h = random_history(rng, max_len=4, max_events=3)
    names = [f"X{k}" for k in range(1, rng.randint(1, max_unknowns) + 1)]
    sessions = [list(s.events) for s in h.sessions]
    for name in names:
        k = rng.randrange(len(sessions))
        pred = rng.choice(["p", "q"])
        arity = len(SIGNATURE[pred])
        args = [rng.choice(INT_POOL) for _ in range(arity)]
        args[rng.randrange(arity)] = Var(name, INT)
        sessions[k].append(Event(pred, tuple(args)))
    h = History(Session(s) for s in sessions)
    gen = _PoFormulaGen(rng, max_depth=4, core=True,
                        int_consts=range(-bound, bound + 1), arithmetic=False)
    f = gen.formula()
    return h, rng.randint(1, len(h)), f


class _PoFormulaGen(FormulaGen):
    def atom(self, scope):
        ints = [v for v in scope if v.sort is INT]
        r = self.rng.random()
        if r < 0.1:
            return TRUE
        if r < 0.5 or not ints:
            pred = self.rng.choice(sorted(SIGNATURE))
            args = tuple((self.rng.choice(ints) if ints and self.rng.random() < 0.6
                          else Const(self.rng.choice(INT_POOL))) if s is INT else self.str_term(scope)
                         for s in SIGNATURE[pred])
            return Pred(pred, args)
        op = self.rng.choice(["=", "!=", "<=", "<", ">=", ">"])
        return Rel(op, (self.rng.choice(ints), Const(self.rng.choice(self.int_consts))))


# -- positive guards

_GUARD_VARS = (Var("x", INT), Var("y", INT), Var("z", STR))


def random_guard(rng: random.Random, depth: int = 3, vars_=None):
    """A positive guard over a subset of x:Int, y:Int, z:Str."""
    if vars_ is None:
        k = rng.randint(1, 3)
        vars_ = tuple(sorted(rng.sample(_GUARD_VARS, k), key=lambda v: v.name))
    return _guard(rng, depth, tuple(vars_))


def _guard_atom(rng, vars_):
    # Pick an atom whose argument positions can host all of vars_ (padding with constants).
    ints = [v for v in vars_ if v.sort is INT]
    strs = [v for v in vars_ if v.sort is STR]
    if len(ints) > 2 or len(strs) > 1 or (ints and strs):
        return None
    if strs:
        return GAtom("s", (strs[0],))
    if len(ints) == 2:
        return GAtom("q", tuple(rng.sample(ints, 2)))
    if len(ints) == 1:
        if rng.random() < 0.5:
            return GAtom("p", (ints[0],))
        other = Const(rng.choice(INT_POOL)) if rng.random() < 0.5 else ints[0]
        args = [ints[0], other]
        rng.shuffle(args)
        return GAtom("q", tuple(args))
    return GAtom("r", ())


def _split(rng, vars_):
    """Two variable sets whose union is vars_ (used by conjunction)."""
    if len(vars_) <= 1:
        return vars_, vars_ if rng.random() < 0.5 else ()
    cut = rng.randint(1, len(vars_) - 1)
    pool = list(vars_)
    rng.shuffle(pool)
    a = tuple(sorted(pool[:cut], key=lambda v: v.name))
    b = tuple(sorted(pool[cut:], key=lambda v: v.name))
    if len(b) + 1 < len(vars_) and rng.random() < 0.3:
        b = tuple(sorted(set(b) | {rng.choice(a)}, key=lambda v: v.name))
    return a, b


def _guard(rng, depth, vars_):
    atom = _guard_atom(rng, vars_)
    if depth <= 0 or (atom is not None and rng.random() < 0.3):
        if atom is not None:
            return atom
    kinds = ["and", "or", "prev", "once", "hist", "since"]
    if atom is None:
        kind = "and"
    else:
        kind = rng.choice(kinds)
    d = max(depth - 1, 0)
    if kind == "and":
        a, b = _split(rng, vars_)
        if not b:
            return GAnd(_guard(rng, d, a), GAtom("r", ()))
        return GAnd(_guard(rng, d, a), _guard(rng, d, b))
    if kind == "or":
        return GOr(_guard(rng, d, vars_), _guard(rng, d, vars_))
    if kind == "prev":
        return GPrev(_guard(rng, d, vars_))
    if kind == "once":
        return GOnce(_guard(rng, d, vars_))
    if kind == "hist":
        return GHist(_guard(rng, d, vars_))
    return GSince(_guard(rng, d, vars_), _guard(rng, d, vars_))


# -- constraint formulae

def random_constraint(rng: random.Random, nvars: int = 3, depth: int = 3, box: int = 10,
                      with_strings: bool = True):
    """A constraint formula whose Int unknowns are boxed to ``[-box, box]``."""
    from . import constraints as C

    names = [f"v{k}" for k in range(1, nvars + 1)]

    def lin():
        coeffs = {}
        for n in rng.sample(names, rng.randint(1, min(2, nvars))):
            coeffs[n] = rng.choice([-3, -2, -1, 1, 1, 2, 3])
        return C.Lin.of(coeffs)

    def atom():
        r = rng.random()
        if with_strings and r < 0.15:
            a = C.CVar(rng.choice(["s1", "s2"]), STR)
            b = rng.choice([C.CVar("s1", STR), C.CVar("s2", STR), "a", "b"])
            return C.CEq(a, b)
        kind = rng.choice(["eq", "le", "ge"])
        rhs = C.Lin.constant(rng.randint(-8, 8))
        return {"eq": C.CEq, "le": C.CLe, "ge": C.CGe}[kind](lin(), rhs)

    def go(d):
        if d <= 0 or rng.random() < 0.3:
            return atom()
        kind = rng.choice(["and", "or", "not"])
        if kind == "not":
            return C.CNot(go(d - 1))
        parts = tuple(go(d - 1) for _ in range(rng.randint(2, 3)))
        return C.CAnd(parts) if kind == "and" else C.COr(parts)

    body = go(depth)
    boxes = []
    for n in sorted(C.variables(body)):
        if C.variables(body)[n] is INT:
            boxes.append(C.CGe(C.Lin.var(n), C.Lin.constant(-box)))
            boxes.append(C.CLe(C.Lin.var(n), C.Lin.constant(box)))
    return C.CAnd(tuple(boxes) + (body,)) if boxes else body
