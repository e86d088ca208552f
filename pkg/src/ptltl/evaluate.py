"""Reference recursive model checker, with optional explanation trees.

Each rule of the evaluation calculus is one branch of :meth:`Evaluator.value`.
``Since`` uses the unfolding clause ``a S b  ==  b | (a & prev(a S b))``,
iterated upward from session 1 so that long histories do not exhaust the
Python stack.  Results are memoised on (subformula, session, relevant part of
the substitution).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .core import (
    And, Count, ExistsG, ForallG, ForallP, History, Not, Pred, Prev, Rel, Since,
    TrueF, format_value, free_vars,
)
from .errors import EmptyHistoryError, EvaluationError, IndexOutOfRange, PtltlError
from .guards import _solve, ordered
from .interp import DEFAULT, Registry, eval_term


@dataclass
class Explanation:
    """One node of a derivation: rule, session index, verdict, premises."""

    rule: str
    index: int
    value: bool
    formula: str
    binding: str = ""
    children: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"rule": self.rule, "index": self.index, "value": self.value,
             "formula": self.formula}
        if self.binding:
            d["binding"] = self.binding
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render(self, indent: str = "  ") -> str:
        lines: list[str] = []
        self._render(lines, 0, indent)
        return "\n".join(lines)

    def _render(self, lines, depth, indent):
        mark = "T" if self.value else "F"
        bind = f"  [{self.binding}]" if self.binding else ""
        lines.append(f"{indent * depth}({self.rule}) i={self.index} {mark}: {self.formula}{bind}")
        for c in self.children:
            c._render(lines, depth + 1, indent)


@dataclass
class Verdict:
    value: bool
    explanation: Explanation | None = None

    def __bool__(self) -> bool:
        return self.value


class Evaluator:
    """Evaluation state for one history; reuse it for many (i, formula) queries."""

    def __init__(self, h: History, registry: Registry = DEFAULT):
        self.h = h
        self.reg = registry
        self._memo: dict = {}
        self._fv: dict[int, tuple] = {}
        self._keep: list = []
        self._guards: dict = {}
        self._explained: dict = {}

    # -- helpers --
    def _names(self, f) -> tuple:
        names = self._fv.get(id(f))
        if names is None:
            names = tuple(sorted({v.name for v in free_vars(f)}))
            self._fv[id(f)] = names
            self._keep.append(f)
        return names

    def _key(self, f, i, env):
        return (id(f), i, tuple(env[n] for n in self._names(f)))

    def _terms(self, f, i, env):
        try:
            return [eval_term(t, env, self.reg) for t in f.args]
        except EvaluationError as e:
            if getattr(e, "located", False):
                raise
            from .parser import format_formula
            err = EvaluationError(f"session {i}, in {format_formula(f)}: {e}")
            err.located = True
            raise err from None

    def _solutions(self, g, i):
        return _solve(self.h, i, g, self._guards)

    # -- evaluation --
    def value(self, f, i: int, env: Mapping) -> bool:
        key = self._key(f, i, env)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Since):
            res = self._since(f, i, env)
        else:
            res = self._value(f, i, env)
        self._memo[key] = res
        return res

    def _value(self, f, i, env) -> bool:
        if isinstance(f, TrueF):
            return True
        if isinstance(f, Pred):
            return self.h[i].has(f.name, tuple(self._terms(f, i, env)))
        if isinstance(f, Rel):
            vals = self._terms(f, i, env)
            try:
                return self.reg.decide(f.op, vals)
            except EvaluationError as e:
                raise EvaluationError(f"session {i}: {e}") from None
        if isinstance(f, Not):
            return not self.value(f.sub, i, env)
        if isinstance(f, And):
            return self.value(f.left, i, env) and self.value(f.right, i, env)
        if isinstance(f, Prev):
            return i > 1 and self.value(f.sub, i - 1, env)
        if isinstance(f, ForallP):
            names = [v.name for v in f.vars]
            for args in self.h[i].tuples(f.pred):
                inner = dict(env)
                inner.update(zip(names, args))
                if not self.value(f.body, i, inner):
                    return False
            return True
        if isinstance(f, Count):
            n = sum(1 for j in range(1, i + 1) if self.value(f.counted, j, env))
            return self.value(f.body, i, {**env, f.var.name: n})
        if isinstance(f, (ForallG, ExistsG)):
            want = isinstance(f, ExistsG)
            for sol in ordered(self._solutions(f.guard, i)):
                inner = dict(env)
                inner.update(sol)
                if self.value(f.body, i, inner) is want:
                    return want
            return not want
        raise TypeError(f"not a formula: {f!r}")

    def _since(self, f, i, env) -> bool:
        # Find the highest already-known session, then unfold upward from it.
        start, prev = 1, False
        for j in range(i - 1, 0, -1):
            hit = self._memo.get(self._key(f, j, env))
            if hit is not None:
                start, prev = j + 1, hit
                break
        for j in range(start, i + 1):
            if self.value(f.right, j, env):
                cur = True
            else:
                cur = j > 1 and prev and self.value(f.left, j, env)
            if j < i:
                self._memo[self._key(f, j, env)] = cur
            prev = cur
        return prev

    # -- explanations --
    def explain(self, f, i: int, env: Mapping, full: bool = False) -> Explanation:
        key = (self._key(f, i, env), full)
        hit = self._explained.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Since):
            node = self._explain_since(f, i, env, full)
        else:
            node = self._explain(f, i, env, full)
        self._explained[key] = node
        return node

    def _node(self, rule, f, i, env, value, children=()):
        from .parser import format_formula
        names = self._names(f)
        binding = ", ".join(f"{n}={format_value(env[n])}" for n in names)
        return Explanation(rule, i, value, format_formula(f), binding, list(children))

    def _explain(self, f, i, env, full) -> Explanation:
        if isinstance(f, TrueF):
            return self._node("true", f, i, env, True)
        if isinstance(f, Pred):
            return self._node("id", f, i, env, self.value(f, i, env))
        if isinstance(f, Rel):
            return self._node("R", f, i, env, self.value(f, i, env))
        if isinstance(f, Not):
            c = self.explain(f.sub, i, env, full)
            return self._node("neg", f, i, env, not c.value, [c])
        if isinstance(f, And):
            a = self.explain(f.left, i, env, full)
            if not a.value and not full:
                return self._node("and", f, i, env, False, [a])
            b = self.explain(f.right, i, env, full)
            return self._node("and", f, i, env, a.value and b.value, [a, b])
        if isinstance(f, Prev):
            if i == 1:
                return self._node("X2", f, i, env, False)
            c = self.explain(f.sub, i - 1, env, full)
            return self._node("X1", f, i, env, c.value, [c])
        if isinstance(f, ForallP):
            names = [v.name for v in f.vars]
            kids, val = [], True
            for args in self.h[i].tuples(f.pred):
                inner = dict(env)
                inner.update(zip(names, args))
                c = self.explain(f.body, i, inner, full)
                kids.append(c)
                val = val and c.value
                if not val and not full:
                    break
            return self._node("forall", f, i, env, val, kids)
        if isinstance(f, Count):
            kids = [self.explain(f.counted, j, env, full) for j in range(1, i + 1)]
            n = sum(1 for c in kids if c.value)
            body = self.explain(f.body, i, {**env, f.var.name: n}, full)
            node = self._node("N", f, i, env, body.value, kids + [body])
            node.binding = (node.binding + ", " if node.binding else "") + f"{f.var.name}:={n}"
            return node
        if isinstance(f, (ForallG, ExistsG)):
            want = isinstance(f, ExistsG)
            kids, val = [], not want
            for sol in ordered(self._solutions(f.guard, i)):
                inner = dict(env)
                inner.update(sol)
                c = self.explain(f.body, i, inner, full)
                kids.append(c)
                if c.value is want:
                    val = want
                    if not full:
                        break
            return self._node("existsG" if want else "forallG", f, i, env, val, kids)
        raise TypeError(f"not a formula: {f!r}")

    def _explain_since(self, f, i, env, full) -> Explanation:
        node = None
        for j in range(1, i + 1):
            hit = self._explained.get((self._key(f, j, env), full))
            if hit is not None:
                node = hit
                continue
            b = self.explain(f.right, j, env, full)
            if j == 1:
                node = self._node("S2", f, j, env, b.value, [b])
            elif b.value and not full:
                node = self._node("S1", f, j, env, True, [b])
            else:
                a = self.explain(f.left, j, env, full)
                if not a.value and not full:
                    node = self._node("S1", f, j, env, b.value, [b, a])
                else:
                    node = self._node("S1", f, j, env, b.value or (a.value and node.value),
                                      [b, a, node])
            self._explained[(self._key(f, j, env), full)] = node
        return node


def _require(h: History, i: int, f) -> None:
    if not 1 <= i <= len(h):
        raise IndexOutOfRange(f"session index {i} outside 1..{len(h)}")
    if free_vars(f):
        names = ", ".join(sorted(v.name for v in free_vars(f)))
        raise PtltlError(f"formula is not closed; free variables: {names}")


def eval_at(h: History, i: int, f, trace: bool = False, full: bool = False,
            registry: Registry = DEFAULT, evaluator: Evaluator | None = None) -> Verdict:
    """Decide (h, i) |= f; with ``trace`` also return the derivation."""
    _require(h, i, f)
    ev = evaluator or Evaluator(h, registry)
    if trace:
        node = ev.explain(f, i, {}, full)
        return Verdict(node.value, node)
    return Verdict(ev.value(f, i, {}))


def check(h: History, f, trace: bool = False, full: bool = False,
          registry: Registry = DEFAULT) -> Verdict:
    """h |= f, i.e. truth at the last session."""
    if len(h) == 0:
        raise EmptyHistoryError("history has no sessions; the verdict is vacuous")
    return eval_at(h, len(h), f, trace, full, registry)


_COMBINE = {
    "neg": lambda kids: not kids[0],
    "X1": lambda kids: kids[0],
    "S2": lambda kids: kids[0],
}


def well_formed(node: Explanation, full: bool = False) -> bool:
    """Check that every node's verdict follows from its premises by its rule."""
    v = [c.value for c in node.children]
    r = node.rule
    if r in ("true",):
        ok = node.value is True and not v
    elif r in ("id", "R"):
        ok = not v
    elif r == "X2":
        ok = node.value is False and not v
    elif r in _COMBINE:
        ok = len(v) == 1 and node.value == _COMBINE[r](v)
    elif r == "and":
        ok = (len(v) == 2 and node.value == (v[0] and v[1])) or (
            len(v) == 1 and not full and v[0] is False and node.value is False)
    elif r == "S1":
        if len(v) == 3:
            ok = node.value == (v[0] or (v[1] and v[2]))
        else:
            ok = not full and ((len(v) == 1 and v[0] and node.value) or
                               (len(v) == 2 and not v[1] and node.value == v[0]))
    elif r in ("forall", "forallG"):
        ok = node.value == all(v) and (full or node.value or not v[-1])
    elif r == "existsG":
        ok = node.value == any(v)
    elif r == "N":
        ok = bool(v) and node.value == v[-1] and len(v) == node.index + 1
    else:
        ok = False
    return ok and all(well_formed(c, full) for c in node.children)
