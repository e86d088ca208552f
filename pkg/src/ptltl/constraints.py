"""Constraint formulae over linear integer arithmetic plus equality on other sorts.

Int atoms hold :class:`Lin` terms (integer coefficients); atoms over Str or
Rat unknowns are equalities between :class:`CVar` and constant values.  The
decision procedure is a depth-first branch search over the negation normal
form with Fourier-Motzkin feasibility for Int literals and union-find for the
rest.  Every model it returns is checked against the input before use.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import Sort, format_value, sort_of, value_key
from .errors import BudgetExceeded, PtltlError

DEFAULT_BUDGET = 200_000


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class CVar:
    """An unknown of a po-history."""

    name: str
    sort: Sort = Sort.INT

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Lin:
    """``sum(k * x for x, k in coeffs) + const`` with integer ``k`` and ``const``."""

    coeffs: tuple = ()
    const: int = 0

    @staticmethod
    def of(coeffs: Mapping[str, int] | Iterable = (), const: int = 0) -> Lin:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, int] = {}
        for name, k in items:
            acc[name] = acc.get(name, 0) + k
        return Lin(tuple(sorted((n, k) for n, k in acc.items() if k)), const)

    @staticmethod
    def var(name: str) -> Lin:
        return Lin(((name, 1),), 0)

    @staticmethod
    def constant(c: int) -> Lin:
        return Lin((), c)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other: Lin) -> Lin:
        return Lin.of(self.coeffs + other.coeffs, self.const + other.const)

    def __neg__(self) -> Lin:
        return Lin(tuple((n, -k) for n, k in self.coeffs), -self.const)

    def __sub__(self, other: Lin) -> Lin:
        return self + (-other)

    def scale(self, k: int) -> Lin:
        return Lin.of(((n, c * k) for n, c in self.coeffs), self.const * k)

    def value(self, model: Mapping[str, int]) -> int:
        return sum(k * model[n] for n, k in self.coeffs) + self.const

    def __str__(self):
        return format_lin(self)


def format_lin(t: Lin) -> str:
    parts = []
    for name, k in t.coeffs:
        mag = abs(k)
        body = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(body if k > 0 else f"-{body}")
        else:
            parts.append(("+ " if k > 0 else "- ") + body)
    if t.const or not parts:
        if not parts:
            parts.append(str(t.const))
        else:
            parts.append(("+ " if t.const > 0 else "- ") + str(abs(t.const)))
    return " ".join(parts)


# ---------------------------------------------------------------- formulae

@dataclass(frozen=True)
class CTop:
    pass


@dataclass(frozen=True)
class CBot:
    pass


@dataclass(frozen=True)
class CEq:
    """``left = right``; both :class:`Lin`, or each a :class:`CVar` or a value."""

    left: object
    right: object


@dataclass(frozen=True)
class CLe:
    left: Lin
    right: Lin


@dataclass(frozen=True)
class CGe:
    left: Lin
    right: Lin


@dataclass(frozen=True)
class CAnd:
    parts: tuple


@dataclass(frozen=True)
class COr:
    parts: tuple


@dataclass(frozen=True)
class CNot:
    sub: object


TOP, BOT = CTop(), CBot()


def mk_not(c):
    if isinstance(c, CTop):
        return BOT
    if isinstance(c, CBot):
        return TOP
    if isinstance(c, CNot):
        return c.sub
    return CNot(c)


def mk_and(parts: Iterable):
    out = []
    for p in parts:
        if isinstance(p, CBot):
            return BOT
        if isinstance(p, CTop):
            continue
        out.extend(p.parts if isinstance(p, CAnd) else (p,))
    out = list(dict.fromkeys(out))
    if not out:
        return TOP
    return out[0] if len(out) == 1 else CAnd(tuple(out))


def mk_or(parts: Iterable):
    out = []
    for p in parts:
        if isinstance(p, CTop):
            return TOP
        if isinstance(p, CBot):
            continue
        out.extend(p.parts if isinstance(p, COr) else (p,))
    out = list(dict.fromkeys(out))
    if not out:
        return BOT
    return out[0] if len(out) == 1 else COr(tuple(out))


def size(c) -> int:
    if isinstance(c, (CAnd, COr)):
        return 1 + sum(size(p) for p in c.parts)
    if isinstance(c, CNot):
        return 1 + size(c.sub)
    return 1


def variables(c) -> dict[str, Sort]:
    """Unknowns of ``c`` with their sorts."""
    out: dict[str, Sort] = {}
    _collect(c, out)
    return out


def _collect(c, out):
    if isinstance(c, (CAnd, COr)):
        for p in c.parts:
            _collect(p, out)
    elif isinstance(c, CNot):
        _collect(c.sub, out)
    elif isinstance(c, (CEq, CLe, CGe)):
        for side in (c.left, c.right):
            if isinstance(side, Lin):
                for n in side.names:
                    out[n] = Sort.INT
            elif isinstance(side, CVar):
                out[side.name] = side.sort


def _side_value(side, model):
    if isinstance(side, Lin):
        return side.value(model)
    if isinstance(side, CVar):
        return model[side.name]
    return side


def evaluate(c, model: Mapping[str, object]) -> bool:
    """Truth of ``c`` under a total assignment of its unknowns."""
    if isinstance(c, CTop):
        return True
    if isinstance(c, CBot):
        return False
    if isinstance(c, CEq):
        return _side_value(c.left, model) == _side_value(c.right, model)
    if isinstance(c, CLe):
        return c.left.value(model) <= c.right.value(model)
    if isinstance(c, CGe):
        return c.left.value(model) >= c.right.value(model)
    if isinstance(c, CAnd):
        return all(evaluate(p, model) for p in c.parts)
    if isinstance(c, COr):
        return any(evaluate(p, model) for p in c.parts)
    if isinstance(c, CNot):
        return not evaluate(c.sub, model)
    raise TypeError(f"not a constraint: {c!r}")


# ---------------------------------------------------------------- text dump

def _side_str(side) -> str:
    if isinstance(side, Lin):
        return format_lin(side)
    if isinstance(side, CVar):
        return side.name
    return format_value(side)


def dump(c) -> str:
    """Readable rendering: ``true``, ``false``, ``=``, ``<=``, ``>=``, ``&``, ``|``, ``!``."""
    return _dump(c, 0)


def _dump(c, prec: int) -> str:
    if isinstance(c, CTop):
        return "true"
    if isinstance(c, CBot):
        return "false"
    if isinstance(c, CEq):
        return f"{_side_str(c.left)} = {_side_str(c.right)}"
    if isinstance(c, CLe):
        return f"{format_lin(c.left)} <= {format_lin(c.right)}"
    if isinstance(c, CGe):
        return f"{format_lin(c.left)} >= {format_lin(c.right)}"
    if isinstance(c, CNot):
        inner = _dump(c.sub, 0)
        return f"!({inner})" if not isinstance(c.sub, (CTop, CBot, CNot)) else "!" + inner
    if isinstance(c, CAnd):
        text = " & ".join(_dump(p, 2) for p in c.parts)
        return f"({text})" if prec > 2 else text
    if isinstance(c, COr):
        text = " | ".join(_dump(p, 1) for p in c.parts)
        return f"({text})" if prec > 1 else text
    raise TypeError(f"not a constraint: {c!r}")


# ---------------------------------------------------------------- SMT-LIB

_SMT_SIMPLE = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789~!@$%^&*_-+=<>.?/")


def _symbol(name: str) -> str:
    if name and not name[0].isdigit() and all(ch in _SMT_SIMPLE for ch in name):
        return name
    return "|" + name + "|"


def _smt_int(k: int) -> str:
    return str(k) if k >= 0 else f"(- {-k})"


def _smt_lin(t: Lin) -> str:
    terms = []
    for name, k in t.coeffs:
        if k == 1:
            terms.append(_symbol(name))
        elif k == -1:
            terms.append(f"(- {_symbol(name)})")
        else:
            terms.append(f"(* {_smt_int(k)} {_symbol(name)})")
    if t.const or not terms:
        terms.append(_smt_int(t.const))
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


class _SmtWriter:
    def __init__(self):
        self.consts: dict[Sort, list] = {}

    def const_name(self, v) -> str:
        s = sort_of(v)
        bucket = self.consts.setdefault(s, [])
        if v not in bucket:
            bucket.append(v)
        return f"{s.value}_c{bucket.index(v)}"

    def side(self, x) -> str:
        if isinstance(x, Lin):
            return _smt_lin(x)
        if isinstance(x, CVar):
            return _symbol(x.name)
        return self.const_name(x)

    def formula(self, c) -> str:
        if isinstance(c, CTop):
            return "true"
        if isinstance(c, CBot):
            return "false"
        if isinstance(c, CEq):
            return f"(= {self.side(c.left)} {self.side(c.right)})"
        if isinstance(c, CLe):
            return f"(<= {self.side(c.left)} {self.side(c.right)})"
        if isinstance(c, CGe):
            return f"(>= {self.side(c.left)} {self.side(c.right)})"
        if isinstance(c, CNot):
            return f"(not {self.formula(c.sub)})"
        if isinstance(c, CAnd):
            return "(and " + " ".join(self.formula(p) for p in c.parts) + ")"
        if isinstance(c, COr):
            return "(or " + " ".join(self.formula(p) for p in c.parts) + ")"
        raise TypeError(f"not a constraint: {c!r}")


def _prescan_constants(c, w: _SmtWriter):
    # Number constants in order of value so the output is canonical.
    found: list = []

    def walk(x):
        if isinstance(x, (CAnd, COr)):
            for p in x.parts:
                walk(p)
        elif isinstance(x, CNot):
            walk(x.sub)
        elif isinstance(x, CEq):
            for side in (x.left, x.right):
                if not isinstance(side, (Lin, CVar)):
                    found.append(side)
    walk(c)
    for v in sorted(set(found), key=value_key):
        w.const_name(v)


def to_smtlib(c) -> str:
    """A self-contained SMT-LIB 2 script: declarations, one assert, check-sat."""
    unknowns = variables(c)
    w = _SmtWriter()
    _prescan_constants(c, w)
    body = w.formula(c)
    other = sorted({s for s in unknowns.values() if s is not Sort.INT} | set(w.consts),
                   key=lambda s: s.value)
    lines = [f"(set-logic {'QF_UFLIA' if other else 'QF_LIA'})"]
    for s in other:
        lines.append(f"(declare-sort {s.value} 0)")
    for s in other:
        for k, v in enumerate(w.consts.get(s, [])):
            lines.append(f"; {s.value}_c{k} stands for {format_value(v)}")
            lines.append(f"(declare-const {s.value}_c{k} {s.value})")
        if len(w.consts.get(s, [])) > 1:
            names = " ".join(f"{s.value}_c{k}" for k in range(len(w.consts[s])))
            lines.append(f"(assert (distinct {names}))")
    for name in sorted(unknowns):
        s = unknowns[name]
        lines.append(f"(declare-const {_symbol(name)} {s.value})")
    lines.append(f"(assert {body})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- solver

@dataclass(frozen=True)
class SolveResult:
    sat: bool
    model: dict | None = None

    def __bool__(self):
        return self.sat


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1, what: str = "solver"):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"unknown: budget ({what} exceeded {self.limit} steps)")


# Literals in normal form:
#   ("le", Lin)          meaning  Lin <= 0
#   ("eq", Lin)          meaning  Lin == 0
#   ("ueq", a, b, pol)   non-Int equality (pol True) or disequality (pol False);
#                        a, b are ("v", name) or ("c", value)

def _int_atom(c):
    if isinstance(c, CEq):
        return [("eq", c.left - c.right)]
    if isinstance(c, CLe):
        return [("le", c.left - c.right)]
    return [("le", c.right - c.left)]


def _uside(x):
    return ("v", x.name) if isinstance(x, CVar) else ("c", x)


def _nnf(c, positive: bool = True):
    """Return a nested structure of ("and", [...]) / ("or", [...]) / literal / True / False."""
    if isinstance(c, CTop):
        return positive
    if isinstance(c, CBot):
        return not positive
    if isinstance(c, CNot):
        return _nnf(c.sub, not positive)
    if isinstance(c, (CAnd, COr)):
        conj = isinstance(c, CAnd) == positive
        return ("and" if conj else "or", [_nnf(p, positive) for p in c.parts])
    if isinstance(c, CEq) and not isinstance(c.left, Lin):
        return ("ueq", _uside(c.left), _uside(c.right), positive)
    if isinstance(c, (CEq, CLe, CGe)):
        lit = _int_atom(c)[0]
        if positive:
            return lit
        if lit[0] == "le":
            # not (t <= 0)   <=>   -t + 1 <= 0
            return ("le", -lit[1] + Lin.constant(1))
        t = lit[1]
        return ("or", [("le", t + Lin.constant(1)), ("le", -t + Lin.constant(1))])
    raise TypeError(f"not a constraint: {c!r}")


def _is_literal(x) -> bool:
    return isinstance(x, tuple) and x[0] in ("le", "eq", "ueq")


class _Search:
    def __init__(self, budget: _Budget):
        self.budget = budget
        self.feasible_cache: dict[frozenset, object] = {}

    def run(self, root):
        return self._dfs((), [root])

    def _dfs(self, lits: tuple, todo: list):
        self.budget.spend(1, "branch search")
        todo = list(todo)
        lits = list(lits)
        while todo:
            f = todo.pop()
            if f is True:
                continue
            if f is False:
                return None
            if _is_literal(f):
                if f not in lits:
                    lits.append(f)
                continue
            kind, parts = f
            if kind == "and":
                todo.extend(reversed(parts))
                continue
            # Disjunction: prune with what is known so far, then branch in order.
            if self._model(lits) is None:
                return None
            for p in parts:
                found = self._dfs(tuple(lits), todo + [p])
                if found is not None:
                    return found
            return None
        return self._model(lits)

    def _model(self, lits):
        key = frozenset(lits)
        if key in self.feasible_cache:
            return self.feasible_cache[key]
        res = solve_literals(lits, self.budget)
        self.feasible_cache[key] = res
        return res


def solve_literals(lits, budget: _Budget | None = None):
    """A model for a conjunction of normal-form literals, or None."""
    budget = budget or _Budget(DEFAULT_BUDGET)
    ints = [l for l in lits if l[0] in ("le", "eq")]
    others = [l for l in lits if l[0] == "ueq"]
    umodel = _solve_uninterpreted(others)
    if umodel is None:
        return None
    imodel = _solve_int(ints, budget)
    if imodel is None:
        return None
    return {**umodel, **imodel}


# -- uninterpreted sorts

def _solve_uninterpreted(lits):
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, a, b, pol in lits:
        find(a)
        find(b)
        if pol:
            parent[find(a)] = find(b)
    classes: dict = {}
    for x in list(parent):
        classes.setdefault(find(x), []).append(x)
    value_of: dict = {}
    for root, members in classes.items():
        consts = {m[1] for m in members if m[0] == "c"}
        if len(consts) > 1:
            return None
        value_of[root] = next(iter(consts)) if consts else None
    for _, a, b, pol in lits:
        if not pol and find(a) == find(b):
            return None
    used = {m[1] for members in classes.values() for m in members if m[0] == "c"}
    model: dict = {}
    fresh = 0
    for root in sorted(classes, key=lambda r: str(r)):
        members = classes[root]
        val = value_of[root]
        if val is None:
            val, fresh = _fresh_value(members, used, fresh)
            used.add(val)
        for m in members:
            if m[0] == "v":
                model[m[1]] = val
    return model


def _fresh_value(members, used, start):
    # Sort unknown here; the caller fixes sorts via SolveResult post-processing.
    k = start
    while True:
        cand = FreshValue(k)
        if cand not in used:
            return cand, k + 1
        k += 1


@dataclass(frozen=True)
class FreshValue:
    """Placeholder for 'a value distinct from every constant'; made concrete per sort."""

    index: int


def concretize(value, sort: Sort, avoid: set):
    if not isinstance(value, FreshValue):
        return value
    k = value.index
    while True:
        if sort is Sort.STR:
            cand = f"fresh{k}"
        elif sort is Sort.RAT:
            cand = Fraction(2 * k + 1, 1_000_003)
        else:
            cand = 1_000_003 + k
        if cand not in avoid:
            return cand
        k += 1


# -- linear integer arithmetic

def _normalize_le(t: Lin):
    """Tighten ``t <= 0``: divide by coefficient gcd, rounding the constant up."""
    if not t.coeffs:
        return True if t.const <= 0 else False
    g = 0
    for _, k in t.coeffs:
        g = math.gcd(g, k)
    if g > 1:
        # sum(a x) <= -c  ->  sum(a/g x) <= floor(-c/g)  ->  ... + ceil(c/g) <= 0
        const = -((-t.const) // g)
        t = Lin(tuple((n, k // g) for n, k in t.coeffs), const)
    return t


def _solve_int(lits, budget: _Budget):
    eqs = [l[1] for l in lits if l[0] == "eq"]
    les = [l[1] for l in lits if l[0] == "le"]
    names = sorted({n for t in eqs + les for n in t.names})
    subst: list[tuple[str, Lin]] = []   # x := Lin, applied in reverse for back-substitution

    # Equality elimination by unit coefficients; otherwise split into two bounds.
    while eqs:
        budget.spend(1, "equality elimination")
        t = eqs.pop()
        if not t.coeffs:
            if t.const != 0:
                return None
            continue
        g = 0
        for _, k in t.coeffs:
            g = math.gcd(g, k)
        if t.const % g:
            return None
        t = Lin(tuple((n, k // g) for n, k in t.coeffs), t.const // g)
        unit = next(((n, k) for n, k in t.coeffs if abs(k) == 1), None)
        if unit is None:
            les.append(t)
            les.append(-t)
            continue
        x, k = unit
        # k*x + rest = 0  ->  x = -k * rest  (k is +-1)
        rest = Lin(tuple((n, c) for n, c in t.coeffs if n != x), t.const)
        expr = rest.scale(-k)
        subst.append((x, expr))
        eqs = [_substitute(e, x, expr) for e in eqs]
        les = [_substitute(e, x, expr) for e in les]

    system = []
    for t in les:
        n = _normalize_le(t)
        if n is False:
            return None
        if n is not True:
            system.append(n)
    system = list(dict.fromkeys(system))

    levels: list[tuple[str, list[Lin]]] = []
    while True:
        live = sorted({n for t in system for n in t.names})
        if not live:
            break
        budget.spend(len(system), "Fourier-Motzkin elimination")
        best = None
        for x in live:
            lo = sum(1 for t in system if _coef(t, x) < 0)
            up = sum(1 for t in system if _coef(t, x) > 0)
            score = (lo * up - lo - up, x)
            if best is None or score < best[0]:
                best = (score, x)
        x = best[1]
        levels.append((x, [t for t in system if _coef(t, x) != 0]))
        keep = [t for t in system if _coef(t, x) == 0]
        lowers = [t for t in system if _coef(t, x) < 0]
        uppers = [t for t in system if _coef(t, x) > 0]
        budget.spend(len(lowers) * len(uppers), "Fourier-Motzkin elimination")
        for lo_t in lowers:
            for up_t in uppers:
                a, b = -_coef(lo_t, x), _coef(up_t, x)
                comb = lo_t.scale(b) + up_t.scale(a)
                n = _normalize_le(comb)
                if n is False:
                    return None
                if n is not True:
                    keep.append(n)
        system = list(dict.fromkeys(keep))

    # Variables that cancelled out without being chosen are unconstrained by the
    # projection; give them their own (empty) level so they are assigned first.
    chosen = {x for x, _ in levels}
    for x in sorted({n for _, cons in levels for t in cons for n in t.names} - chosen):
        levels.append((x, []))

    model: dict[str, int] = {}
    truncated = [False]
    ok = _back_substitute(levels, len(levels) - 1, model, budget, truncated)
    if not ok:
        if truncated[0]:
            raise BudgetExceeded("unknown: budget (integer search window exhausted)")
        return None
    for x in names:
        model.setdefault(x, 0)
    for x, expr in reversed(subst):
        model[x] = expr.value(model)
    return {n: model[n] for n in names}


def _coef(t: Lin, x: str) -> int:
    for n, k in t.coeffs:
        if n == x:
            return k
    return 0


def _substitute(t: Lin, x: str, expr: Lin) -> Lin:
    k = _coef(t, x)
    if not k:
        return t
    rest = Lin(tuple((n, c) for n, c in t.coeffs if n != x), t.const)
    return rest + expr.scale(k)


def _bounds(x: str, constraints: list[Lin], model: Mapping[str, int]):
    lo, hi = None, None
    for t in constraints:
        k = _coef(t, x)
        if any(n != x and n not in model for n in t.names):
            raise AssertionError("back-substitution order violated")
        rest = sum(c * model[n] for n, c in t.coeffs if n != x) + t.const
        # k*x + rest <= 0
        if k > 0:
            b = (-rest) // k
            hi = b if hi is None else min(hi, b)
        else:
            b = -((-rest) // (-k))    # ceil(rest / -k)
            lo = b if lo is None else max(lo, b)
    return lo, hi


def _candidates(lo, hi, width):
    """Integers of [lo, hi] nearest to zero first, at most ``width`` of them."""
    if lo is not None and hi is not None and lo > hi:
        return [], False
    if lo is None and hi is None:
        centre = 0
    elif lo is None:
        centre = min(0, hi)
    elif hi is None:
        centre = max(0, lo)
    else:
        centre = min(max(0, lo), hi)
    out = [centre]
    step = 1
    while len(out) < width:
        grew = False
        for cand in (centre - step, centre + step):
            if (lo is None or cand >= lo) and (hi is None or cand <= hi):
                out.append(cand)
                grew = True
        if not grew:
            return out, False
        step += 1
    total = None if lo is None or hi is None else hi - lo + 1
    return out[:width], total is None or total > width


def _back_substitute(levels, idx, model, budget, truncated) -> bool:
    if idx < 0:
        return True
    x, cons = levels[idx]
    lo, hi = _bounds(x, cons, model)
    width = 4 * max((abs(k) for t in cons for _, k in t.coeffs), default=1) + 4
    cands, cut = _candidates(lo, hi, width)
    for v in cands:
        budget.spend(1, "integer back-substitution")
        model[x] = v
        if _back_substitute(levels, idx - 1, model, budget, truncated):
            return True
    model.pop(x, None)
    if cut:
        truncated[0] = True
    return False


def satisfiable(c, budget: int | None = None, sorts: Mapping[str, Sort] | None = None) -> SolveResult:
    """Decide ``c``; on success return a model over all of its unknowns.

    Raises :class:`BudgetExceeded` when the search cannot decide within
    ``budget`` steps; that outcome is never reported as sat or unsat.
    """
    b = _Budget(DEFAULT_BUDGET if budget is None else budget)
    unknowns = variables(c)
    if sorts:
        unknowns = {**unknowns, **{k: v for k, v in sorts.items() if k in unknowns}}
    found = _Search(b).run(_nnf(c))
    if found is None:
        return SolveResult(False)
    avoid = set(_constants(c))
    chosen: dict = {}
    model = {}
    for name, s in sorted(unknowns.items()):
        v = found.get(name)
        if v is None:
            # unconstrained: any value will do
            model[name] = 0 if s is Sort.INT else concretize(FreshValue(0), s, avoid)
            avoid.add(model[name])
        elif isinstance(v, FreshValue):
            # one concrete value per equality class, distinct across classes
            if (v, s) not in chosen:
                chosen[(v, s)] = concretize(v, s, avoid)
                avoid.add(chosen[(v, s)])
            model[name] = chosen[(v, s)]
        else:
            model[name] = v
    if not evaluate(c, model):
        raise PtltlError(f"internal error: solver model {model} does not satisfy {dump(c)}")
    return SolveResult(True, model)


def _constants(c):
    out = []
    if isinstance(c, (CAnd, COr)):
        for p in c.parts:
            out.extend(_constants(p))
    elif isinstance(c, CNot):
        out.extend(_constants(c.sub))
    elif isinstance(c, CEq):
        for side in (c.left, c.right):
            if not isinstance(side, (Lin, CVar)):
                out.append(side)
    return out


def brute_force(c, lo: int = -10, hi: int = 10, extra: Mapping[Sort, list] | None = None):
    """Exhaustive search: Int unknowns over [lo, hi], others over constants plus fresh values.

    Each non-Int sort gets one fresh value per unknown of that sort, enough to
    make all of them pairwise distinct and distinct from every constant.
    """
    unknowns = sorted(variables(c).items())
    consts = _constants(c)
    per_sort: dict = {}
    for _, s in unknowns:
        per_sort[s] = per_sort.get(s, 0) + 1
    domains = []
    for name, s in unknowns:
        if s is Sort.INT:
            domains.append(range(lo, hi + 1))
        else:
            pool = {v for v in consts if sort_of(v) is s} | set((extra or {}).get(s, []))
            pool = sorted(pool, key=value_key)
            avoid = set(pool)
            for k in range(per_sort[s]):
                fresh = concretize(FreshValue(k), s, avoid)
                avoid.add(fresh)
                pool.append(fresh)
            domains.append(pool)
    names = [n for n, _ in unknowns]
    for combo in itertools.product(*domains):
        model = dict(zip(names, combo))
        if evaluate(c, model):
            return model
    return None
