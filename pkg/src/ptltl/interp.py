"""Interpreted function and relation symbols.

The registry maps each symbol to one or more typed signatures and a single
total implementation.  Implementations rely on Python's exact numeric tower,
so mixed Int/Rat arguments promote without loss.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import App, Const, Sort, Term, Value, Var, coerce, fits
from .errors import EvaluationError, PtltlError, SortError

INT, RAT, STR = Sort.INT, Sort.RAT, Sort.STR


@dataclass(frozen=True)
class FunctionSignature:
    name: str
    arg_sorts: tuple
    result_sort: Sort
    impl: Callable


@dataclass(frozen=True)
class RelationSignature:
    name: str
    arg_sorts: tuple
    impl: Callable


class RegistryFrozen(PtltlError):
    pass


class Registry:
    def __init__(self):
        self._functions: dict[str, list[FunctionSignature]] = {}
        self._relations: dict[str, list[RelationSignature]] = {}
        self._fn_impl: dict[str, Callable] = {}
        self._rel_impl: dict[str, Callable] = {}
        self.frozen = False

    def freeze(self) -> Registry:
        self.frozen = True
        return self

    def add_function(self, name: str, arg_sorts: Sequence[Sort], result: Sort, impl: Callable):
        if self.frozen:
            raise RegistryFrozen(f"cannot register {name!r}: registry is frozen")
        self._functions.setdefault(name, []).append(
            FunctionSignature(name, tuple(arg_sorts), result, impl))
        self._fn_impl[name] = impl

    def add_relation(self, name: str, arg_sorts: Sequence[Sort], impl: Callable):
        if self.frozen:
            raise RegistryFrozen(f"cannot register {name!r}: registry is frozen")
        self._relations.setdefault(name, []).append(
            RelationSignature(name, tuple(arg_sorts), impl))
        self._rel_impl[name] = impl

    def has_function(self, name: str) -> bool:
        return name in self._functions

    def has_relation(self, name: str) -> bool:
        return name in self._relations

    def function_names(self) -> set[str]:
        return set(self._functions)

    def resolve_function(self, name: str, arg_sorts: Sequence[Sort]) -> FunctionSignature:
        """Exact signature match first, then one reachable by Int->Rat promotion."""
        return _resolve(self._functions, "function", name, tuple(arg_sorts))

    def resolve_relation(self, name: str, arg_sorts: Sequence[Sort]) -> RelationSignature:
        return _resolve(self._relations, "relation", name, tuple(arg_sorts))

    def apply(self, name: str, args: Sequence[Value]) -> Value:
        try:
            impl = self._fn_impl[name]
        except KeyError:
            raise EvaluationError(f"unknown function symbol {name!r}") from None
        return impl(*args)

    def decide(self, name: str, args: Sequence[Value]) -> bool:
        try:
            impl = self._rel_impl[name]
        except KeyError:
            raise EvaluationError(f"unknown relation symbol {name!r}") from None
        return bool(impl(*args))


def _resolve(table, kind, name, sorts):
    cands = table.get(name)
    if not cands:
        raise SortError(f"unknown {kind} symbol {name!r}")
    for sig in cands:
        if sig.arg_sorts == sorts:
            return sig
    for sig in cands:
        if len(sig.arg_sorts) == len(sorts) and all(fits(a, b) for a, b in zip(sorts, sig.arg_sorts)):
            return sig
    shown = ", ".join(str(s) for s in sorts)
    raise SortError(f"no signature of {kind} {name!r} accepts ({shown})")


def _div(a, b):
    if b == 0:
        raise EvaluationError(f"division by zero: {a} / {b}")
    return Fraction(a) / b


def path(s: str) -> str:
    """Directory part of ``s``: everything before the final ``/``."""
    cut = s.rfind("/")
    return s[:cut] if cut >= 0 else ""


def _numeric(reg: Registry, name, impl):
    reg.add_function(name, (INT, INT), INT, impl)
    reg.add_function(name, (RAT, RAT), RAT, impl)


def builtin_registry() -> Registry:
    reg = Registry()
    _numeric(reg, "+", operator.add)
    _numeric(reg, "-", operator.sub)
    _numeric(reg, "*", operator.mul)
    reg.add_function("neg", (INT,), INT, operator.neg)
    reg.add_function("neg", (RAT,), RAT, operator.neg)
    reg.add_function("/", (RAT, RAT), RAT, _div)
    reg.add_function("path", (STR,), STR, path)
    for op, impl in (("=", operator.eq), ("!=", operator.ne)):
        for s in (INT, RAT, STR):
            reg.add_relation(op, (s, s), impl)
    for op, impl in (("<=", operator.le), (">=", operator.ge),
                     ("<", operator.lt), (">", operator.gt)):
        reg.add_relation(op, (INT, INT), impl)
        reg.add_relation(op, (RAT, RAT), impl)
    return reg


DEFAULT = builtin_registry().freeze()


def eval_term(t: Term, sigma: Mapping[str, Value] | None = None, registry: Registry = DEFAULT) -> Value:
    """The unique value of ``t`` under ``sigma`` (the ``t``-down-arrow of a ground term)."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        if sigma is None or t.name not in sigma:
            raise EvaluationError(f"unbound variable {t.name}")
        return coerce(sigma[t.name], t.sort)
    if isinstance(t, App):
        return registry.apply(t.fn, [eval_term(a, sigma, registry) for a in t.args])
    raise TypeError(f"not a term: {t!r}")
