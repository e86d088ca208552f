"""Abstract syntax and histories, with values and substitution on top.

Values are plain Python objects: ``int`` for Int, ``fractions.Fraction`` for
Rat (always normalized by construction) and ``str`` for Str.  Every syntax
node is an immutable dataclass, so formulas can be shared freely and compared
structurally.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import SortError


class Sort(enum.Enum):
    INT = "Int"
    RAT = "Rat"
    STR = "Str"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> Sort:
        for s in cls:
            if s.value == name:
                return s
        raise SortError(f"unknown sort {name!r}")


Value = Union[int, Fraction, str]

_SORT_RANK = {Sort.INT: 0, Sort.RAT: 1, Sort.STR: 2}


def sort_of(v: object) -> Sort:
    if isinstance(v, bool):
        raise SortError(f"booleans are not term values: {v!r}")
    if isinstance(v, int):
        return Sort.INT
    if isinstance(v, Fraction):
        return Sort.RAT
    if isinstance(v, str):
        return Sort.STR
    raise SortError(f"not a term value: {v!r}")


def fits(value_sort: Sort, slot: Sort) -> bool:
    """Whether a value of ``value_sort`` may occupy a position of sort ``slot``.

    Int promotes to Rat exactly; nothing else converts.
    """
    return value_sort is slot or (value_sort is Sort.INT and slot is Sort.RAT)


def coerce(v: Value, slot: Sort) -> Value:
    s = sort_of(v)
    if not fits(s, slot):
        raise SortError(f"value {format_value(v)} of sort {s} used where {slot} expected")
    if slot is Sort.RAT and s is Sort.INT:
        return Fraction(v)
    return v


def value_key(v: Value) -> tuple:
    if isinstance(v, Fraction):
        return (_SORT_RANK[Sort.RAT], v)
    return (_SORT_RANK[sort_of(v)], v)


def format_value(v: Value) -> str:
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


# --- terms ---------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Value

    @property
    def sort(self) -> Sort:
        return sort_of(self.value)

    def __str__(self) -> str:
        return format_value(self.value)


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple
    sort: Sort


Term = Union[Var, Const, App]


def term_vars(t: Term) -> set[Var]:
    if isinstance(t, Var):
        return {t}
    if isinstance(t, App):
        out: set[Var] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


# --- formulas ------------------------------------------------------------

@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Rel:
    op: str
    args: tuple


@dataclass(frozen=True)
class Not:
    sub: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Prev:
    sub: object


@dataclass(frozen=True)
class Since:
    left: object
    right: object


@dataclass(frozen=True)
class ForallP:
    """``forall (x1..xn):p. body`` -- guard is a bare predicate name."""

    vars: tuple
    pred: str
    body: object


@dataclass(frozen=True)
class Count:
    """``count x : counted. body`` binds ``x`` (Int) to a number of sessions."""

    var: Var
    counted: object
    body: object


@dataclass(frozen=True)
class ForallG:
    vars: tuple
    guard: object
    body: object


@dataclass(frozen=True)
class ExistsG:
    vars: tuple
    guard: object
    body: object


Formula = Union[TrueF, Pred, Rel, Not, And, Prev, Since, ForallP, Count, ForallG, ExistsG]

TRUE = TrueF()


# --- positive guards -----------------------------------------------------

@dataclass(frozen=True)
class GAtom:
    name: str
    args: tuple  # Var or Const only


@dataclass(frozen=True)
class GAnd:
    left: object
    right: object


@dataclass(frozen=True)
class GOr:
    left: object
    right: object


@dataclass(frozen=True)
class GPrev:
    sub: object


@dataclass(frozen=True)
class GOnce:
    sub: object


@dataclass(frozen=True)
class GHist:
    sub: object


@dataclass(frozen=True)
class GSince:
    left: object
    right: object


Guard = Union[GAtom, GAnd, GOr, GPrev, GOnce, GHist, GSince]


def guard_vars(g) -> set[Var]:
    if isinstance(g, GAtom):
        return {a for a in g.args if isinstance(a, Var)}
    if isinstance(g, (GAnd, GOr, GSince)):
        return guard_vars(g.left) | guard_vars(g.right)
    return guard_vars(g.sub)


# --- derived connectives (desugaring targets) ------------------------------

def Or(a, b):
    return Not(And(Not(a), Not(b)))


def Implies(a, b):
    return Not(And(a, Not(b)))


def Once(a):
    return Since(TRUE, a)


def Historically(a):
    return Not(Since(TRUE, Not(a)))


def Exists(vars: tuple, pred: str, body):
    return Not(ForallP(vars, pred, Not(body)))


FALSE = Not(TRUE)


# --- free variables and substitution ---------------------------------------

def free_vars(f) -> set[Var]:
    """Variables with a free occurrence in ``f``."""
    if isinstance(f, TrueF):
        return set()
    if isinstance(f, (Pred, Rel)):
        out: set[Var] = set()
        for t in f.args:
            out |= term_vars(t)
        return out
    if isinstance(f, (Not, Prev)):
        return free_vars(f.sub)
    if isinstance(f, (And, Since)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (ForallP, ForallG, ExistsG)):
        bound = {v.name for v in f.vars}
        return {v for v in free_vars(f.body) if v.name not in bound}
    if isinstance(f, Count):
        return free_vars(f.counted) | {v for v in free_vars(f.body) if v.name != f.var.name}
    raise TypeError(f"not a formula: {f!r}")


def is_closed(f) -> bool:
    return not free_vars(f)


def subst_term(t: Term, sigma: Mapping[str, Value]) -> Term:
    if isinstance(t, Var):
        if t.name in sigma:
            return Const(coerce(sigma[t.name], t.sort))
        return t
    if isinstance(t, App):
        return App(t.fn, tuple(subst_term(a, sigma) for a in t.args), t.sort)
    return t


def _check_sorts(f, sigma: Mapping[str, Value]) -> None:
    for v in free_vars(f):
        if v.name in sigma:
            coerce(sigma[v.name], v.sort)


def apply_substitution(f, sigma: Mapping[str, Value]):
    """Replace the free occurrences of ``dom(sigma)`` in ``f`` by constants.

    Raises :class:`SortError` when a value does not fit its variable's sort.
    """
    _check_sorts(f, sigma)
    return _subst(f, dict(sigma))


def _subst(f, sigma: dict):
    if not sigma or isinstance(f, TrueF):
        return f
    if isinstance(f, Pred):
        return Pred(f.name, tuple(subst_term(t, sigma) for t in f.args))
    if isinstance(f, Rel):
        return Rel(f.op, tuple(subst_term(t, sigma) for t in f.args))
    if isinstance(f, Not):
        return Not(_subst(f.sub, sigma))
    if isinstance(f, Prev):
        return Prev(_subst(f.sub, sigma))
    if isinstance(f, And):
        return And(_subst(f.left, sigma), _subst(f.right, sigma))
    if isinstance(f, Since):
        return Since(_subst(f.left, sigma), _subst(f.right, sigma))
    if isinstance(f, (ForallP, ForallG, ExistsG)):
        inner = {k: v for k, v in sigma.items() if k not in {x.name for x in f.vars}}
        if isinstance(f, ForallP):
            return ForallP(f.vars, f.pred, _subst(f.body, inner))
        return type(f)(f.vars, f.guard, _subst(f.body, inner))
    if isinstance(f, Count):
        inner = {k: v for k, v in sigma.items() if k != f.var.name}
        return Count(f.var, _subst(f.counted, sigma), _subst(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f) -> Iterator:
    """Post-order walk (children before parents), duplicates included."""
    if isinstance(f, (Not, Prev)):
        yield from subformulas(f.sub)
    elif isinstance(f, (And, Since)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (ForallP, ForallG, ExistsG)):
        yield from subformulas(f.body)
    elif isinstance(f, Count):
        yield from subformulas(f.counted)
        yield from subformulas(f.body)
    yield f


# --- histories -----------------------------------------------------------

def _arg_key(a) -> tuple:
    if isinstance(a, Var):
        return (3, a.name)
    return value_key(a)


@dataclass(frozen=True)
class Event:
    """``name(args)``; in po-histories an argument may be a :class:`Var`."""

    name: str
    args: tuple = ()

    def sort_key(self) -> tuple:
        return (self.name, tuple(_arg_key(a) for a in self.args))

    @property
    def ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        parts = [a.name if isinstance(a, Var) else format_value(a) for a in self.args]
        return f"{self.name}({', '.join(parts)})"


class Session:
    """A finite set of events kept in canonical order."""

    __slots__ = ("events", "_set", "_by_pred")

    def __init__(self, events: Iterable[Event] = ()):
        uniq = {e: None for e in events}
        self.events: tuple[Event, ...] = tuple(sorted(uniq, key=Event.sort_key))
        self._set = frozenset((e.name, e.args) for e in self.events)
        by: dict[str, list[tuple]] = {}
        for e in self.events:
            by.setdefault(e.name, []).append(e.args)
        self._by_pred = {k: tuple(v) for k, v in by.items()}

    def __contains__(self, e: Event) -> bool:
        return (e.name, e.args) in self._set

    def has(self, name: str, args: tuple) -> bool:
        return (name, args) in self._set

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __eq__(self, other):
        return isinstance(other, Session) and self.events == other.events

    def __hash__(self):
        return hash(self.events)

    def __repr__(self):
        return "{" + ", ".join(str(e) for e in self.events) + "}"

    def tuples(self, pred: str) -> tuple:
        """Argument tuples of ``pred`` in this session, canonical order."""
        return self._by_pred.get(pred, ())


class History:
    """A list of sessions, indexed from 1 as in ``h_1 .. h_|h|``."""

    __slots__ = ("sessions",)

    def __init__(self, sessions: Iterable = ()):
        self.sessions: tuple[Session, ...] = tuple(
            s if isinstance(s, Session) else Session(s) for s in sessions
        )

    def __len__(self) -> int:
        return len(self.sessions)

    def __getitem__(self, i: int) -> Session:
        """1-based session access."""
        if not 1 <= i <= len(self.sessions):
            raise IndexError(f"session index {i} outside 1..{len(self.sessions)}")
        return self.sessions[i - 1]

    def __eq__(self, other):
        return isinstance(other, History) and self.sessions == other.sessions

    def __hash__(self):
        return hash(self.sessions)

    def __repr__(self):
        return "History([" + "; ".join(repr(s) for s in self.sessions) + "])"

    def size(self) -> int:
        """s(h): number of symbols occurring in the history."""
        return sum(1 + len(e.args) for s in self.sessions for e in s)

    def constants(self) -> set:
        return {a for s in self.sessions for e in s for a in e.args if not isinstance(a, Var)}

    def variables(self) -> set[Var]:
        """V(h)."""
        return {a for s in self.sessions for e in s for a in e.args if isinstance(a, Var)}

    @property
    def ground(self) -> bool:
        return not self.variables()

    def substitute(self, sigma: Mapping[str, Value]) -> History:
        """h-sigma: instantiate unknowns; sessions re-collapse under set semantics."""
        def inst(a):
            if isinstance(a, Var) and a.name in sigma:
                return coerce(sigma[a.name], a.sort)
            return a
        return History(
            Session(Event(e.name, tuple(inst(a) for a in e.args)) for e in s)
            for s in self.sessions
        )

    def append(self, session: Session) -> History:
        return History(self.sessions + (session,))

    def is_trace_like(self) -> bool:
        return all(len(s.tuples(p)) <= 1 for s in self.sessions for p in {e.name for e in s})
