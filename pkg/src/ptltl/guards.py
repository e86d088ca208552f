"""Positive guards: well-formedness, solution enumeration, guarded quantifiers.

A solution is represented canonically as a tuple of ``(name, value)`` pairs
sorted by variable name, so solution sets are plain frozensets.
"""

from __future__ import annotations

from typing import Iterable

from .core import (
    TRUE, And, Const, ExistsG, ForallG, GAnd, GAtom, GHist, GOnce, GOr, GPrev,
    GSince, History, Historically, Not, Once, Or, Pred, Prev, Since, Var,
    guard_vars, value_key,
)
from .errors import GuardError, IndexOutOfRange


def validate_guard(g, bound: Iterable[Var] | None = None) -> None:
    """Reject guards outside the positive fragment.

    ``bound`` is the quantifier's variable vector; when given, the guard's
    variables must be exactly those.
    """
    _validate(g)
    if bound is not None:
        want = {v.name for v in bound}
        have = {v.name for v in guard_vars(g)}
        if want != have:
            raise GuardError(f"guard variables {sorted(have)} differ from quantified {sorted(want)}")


def _validate(g):
    if isinstance(g, GAtom):
        for a in g.args:
            if not isinstance(a, (Var, Const)):
                raise GuardError(f"function symbols are not allowed in guards: {g.name}")
        return
    if isinstance(g, GAnd):
        _validate(g.left)
        _validate(g.right)
        return
    if isinstance(g, (GOr, GSince)):
        _validate(g.left)
        _validate(g.right)
        if {v.name for v in guard_vars(g.left)} != {v.name for v in guard_vars(g.right)}:
            raise GuardError("operands of a disjunctive or since guard must share their variables")
        return
    if isinstance(g, (GPrev, GOnce, GHist)):
        _validate(g.sub)
        return
    raise GuardError(f"not a positive guard: {g!r}")


def _match(atom: GAtom, args: tuple):
    binding: dict = {}
    for pat, c in zip(atom.args, args):
        if isinstance(pat, Const):
            if pat.value != c:
                return None
        elif pat.name in binding:
            if binding[pat.name] != c:
                return None
        else:
            binding[pat.name] = c
    return tuple(sorted(binding.items()))


def _merge(a: tuple, b: tuple):
    out = dict(a)
    for k, v in b:
        if k in out and out[k] != v:
            return None
        out[k] = v
    return tuple(sorted(out.items()))


def solutions(h: History, i: int, g, cache: dict | None = None) -> frozenset:
    """All substitutions sigma with (h, i) |= g.sigma."""
    if not 1 <= i <= len(h):
        raise IndexOutOfRange(f"session index {i} outside 1..{len(h)}")
    _validate(g)
    return _solve(h, i, g, {} if cache is None else cache)


def _solve(h, i, g, cache):
    key = (id(g), i)
    hit = cache.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(g, GAtom):
        out = set()
        for args in h[i].tuples(g.name):
            m = _match(g, args)
            if m is not None:
                out.add(m)
        res = frozenset(out)
    elif isinstance(g, GAnd):
        left = _solve(h, i, g.left, cache)
        right = _solve(h, i, g.right, cache) if left else frozenset()
        out = set()
        for a in left:
            for b in right:
                m = _merge(a, b)
                if m is not None:
                    out.add(m)
        res = frozenset(out)
    elif isinstance(g, GOr):
        res = _solve(h, i, g.left, cache) | _solve(h, i, g.right, cache)
    elif isinstance(g, GPrev):
        res = _solve(h, i - 1, g.sub, cache) if i > 1 else frozenset()
    elif isinstance(g, GOnce):
        res = frozenset().union(*(_solve(h, j, g.sub, cache) for j in range(1, i + 1)))
    elif isinstance(g, GHist):
        res = _solve(h, 1, g.sub, cache)
        for j in range(2, i + 1):
            if not res:
                break
            res = res & _solve(h, j, g.sub, cache)
    elif isinstance(g, GSince):
        # T_j = S2_j  union  (S1_j  intersect  T_{j-1})
        res = frozenset()
        for j in range(1, i + 1):
            res = _solve(h, j, g.right, cache) | (_solve(h, j, g.left, cache) & res)
    else:
        raise GuardError(f"not a positive guard: {g!r}")
    cache[key] = (g, res)
    return res


def ordered(sols: Iterable[tuple]) -> list[tuple]:
    """Deterministic enumeration order for a solution set."""
    return sorted(sols, key=lambda s: tuple((k, value_key(v)) for k, v in s))


def eval_guarded(h: History, i: int, q) -> bool:
    """Truth of a closed ``ForallG``/``ExistsG`` formula at (h, i)."""
    if not isinstance(q, (ForallG, ExistsG)):
        raise TypeError("eval_guarded expects a positive-guard quantifier")
    validate_guard(q.guard, q.vars)
    from .evaluate import eval_at
    return eval_at(h, i, q).value


def guard_to_formula(g):
    """The guard read as an ordinary formula (same forcing semantics)."""
    if isinstance(g, GAtom):
        return Pred(g.name, g.args)
    if isinstance(g, GAnd):
        return And(guard_to_formula(g.left), guard_to_formula(g.right))
    if isinstance(g, GOr):
        return Or(guard_to_formula(g.left), guard_to_formula(g.right))
    if isinstance(g, GPrev):
        return Prev(guard_to_formula(g.sub))
    if isinstance(g, GOnce):
        return Once(guard_to_formula(g.sub))
    if isinstance(g, GHist):
        return Historically(guard_to_formula(g.sub))
    if isinstance(g, GSince):
        return Since(guard_to_formula(g.left), guard_to_formula(g.right))
    raise GuardError(f"not a positive guard: {g!r}")
