"""Fixed-policy engine: bottom-up truth tables over the closure of a formula.

Every distinct subformula gets a table indexed by (substitution of its own
free variables, session).  Only the cells that will actually be consulted are
materialised: a top-down pass starting from the root records which
(substitution, session) pairs each node is asked for, then a bottom-up pass
fills them, children before parents and earlier sessions before later ones.
Quantified variables only ever take argument values of events, so every
substitution is built from constants of the history.

A node's cells live in one flat ``uint8`` vector; parents reach into their
children's vectors through index arrays.  ``since`` is the one operator that
needs whole columns, so it lays its operands out densely for the scan kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    And, Count, ExistsG, ForallG, ForallP, History, Not, Pred, Prev, Rel, Since,
    TrueF, free_vars,
)
from .errors import EmptyHistoryError, EngineCapabilityError, EvaluationError, PtltlError
from .interp import DEFAULT, Registry, eval_term


@dataclass
class Table:
    """Materialised cells of one closure node."""

    formula: object
    names: tuple          # free variable names, key order
    columns: list         # substitutions (value tuples aligned with ``names``)
    cells: dict           # (session index, key) -> bool, demanded cells only

    def lookup(self, i: int, key: tuple = ()) -> bool:
        return self.cells[(i, key)]


def closure(f) -> list:
    """Distinct subformulae of ``f``, children before parents, ``f`` last."""
    order: list = []
    seen: set = set()
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            if node not in seen:
                seen.add(node)
                order.append(node)
            continue
        if node in seen:
            continue
        stack.append((node, True))
        for c in reversed(_children(node)):
            if c not in seen:
                stack.append((c, False))
    return order


def _children(f) -> tuple:
    if isinstance(f, Not):
        return (f.sub,)
    if isinstance(f, (And, Since)):
        return (f.left, f.right)
    if isinstance(f, Prev):
        return (f.sub,)
    if isinstance(f, ForallP):
        return (f.body,)
    if isinstance(f, Count):
        return (f.counted, f.body)
    if isinstance(f, (ForallG, ExistsG)):
        return (f.body,)
    return ()


def supports(f) -> bool:
    """Whether ``f`` lies in the fragment this engine handles."""
    return not any(isinstance(n, (Count, ForallG, ExistsG)) for n in closure(f))


class _Node:
    __slots__ = ("f", "names", "demand", "keys", "cells", "index", "values", "pairs", "kids")

    def __init__(self, f):
        self.f = f
        self.names = tuple(sorted({v.name for v in free_vars(f)}))
        self.demand: dict[tuple, set] = {}
        self.keys: list = []
        self.cells: list = []          # (key position, session) in storage order
        self.index: dict = {}          # (key, session) -> storage position
        self.values = None
        self.pairs = None
        self.kids: tuple = ()

    def want(self, key, rows):
        self.demand.setdefault(key, set()).update(rows)

    def layout(self):
        self.keys = sorted(self.demand, key=repr)
        for c, key in enumerate(self.keys):
            for r in sorted(self.demand[key]):
                self.index[(key, r)] = len(self.cells)
                self.cells.append((c, r))


def _projector(src: tuple, dst: tuple):
    if src == dst:
        return lambda key: key
    pos = [src.index(n) for n in dst]
    return lambda key: tuple(key[p] for p in pos)


def _intp(it, n):
    return np.fromiter(it, dtype=np.intp, count=n)


class DPChecker:
    def __init__(self, h: History, registry: Registry = DEFAULT):
        if len(h) == 0:
            raise EmptyHistoryError("history has no sessions; the verdict is vacuous")
        self.h = h
        self.reg = registry
        self.n = len(h)

    def run(self, f, index: int | None = None):
        order = closure(f)
        for node in order:
            if isinstance(node, (Count, ForallG, ExistsG)):
                kind = "counting quantifier" if isinstance(node, Count) else "positive-guard quantifier"
                raise EngineCapabilityError(f"the dp engine does not support the {kind}; use the recursive engine")
        if free_vars(f):
            raise PtltlError("formula is not closed")
        i = self.n if index is None else index
        if not 1 <= i <= self.n:
            raise PtltlError(f"session index {i} outside 1..{self.n}")
        nodes = {g: _Node(g) for g in order}
        for g in order:
            nodes[g].kids = tuple(nodes[c] for c in _children(g))
        nodes[f].want((), {i})
        for g in reversed(order):
            self._propagate(nodes[g])
        for g in order:
            self._fill(nodes[g])
        self.nodes = nodes
        self.order = order
        root = nodes[f]
        return bool(root.values[root.index[((), i)]])

    # -- demand pass (parents before children)
    def _propagate(self, node: _Node):
        f = node.f
        node.layout()
        if isinstance(f, (Not, And)):
            for kid in node.kids:
                proj = _projector(node.names, kid.names)
                for key, rows in node.demand.items():
                    kid.want(proj(key), rows)
        elif isinstance(f, Prev):
            kid = node.kids[0]
            for key, rows in node.demand.items():
                kid.want(key, [r - 1 for r in rows if r > 1])
        elif isinstance(f, Since):
            for kid in node.kids:
                proj = _projector(node.names, kid.names)
                for key, rows in node.demand.items():
                    kid.want(proj(key), range(1, max(rows, default=0) + 1))
        elif isinstance(f, ForallP):
            body = node.kids[0]
            bound = [v.name for v in f.vars]
            pairs = []
            for key, rows in node.demand.items():
                base = dict(zip(node.names, key))
                for r in rows:
                    for args in self.h[r].tuples(f.pred):
                        env = dict(base)
                        env.update(zip(bound, args))
                        bkey = tuple(env[n] for n in body.names)
                        body.want(bkey, (r,))
                        pairs.append(((key, r), (bkey, r)))
            node.pairs = pairs

    # -- fill pass (children before parents)
    def _fill(self, node: _Node):
        f = node.f
        size = len(node.cells)
        if isinstance(f, TrueF):
            node.values = np.ones(size, dtype=np.uint8)
        elif isinstance(f, Pred):
            vals = np.zeros(size, dtype=np.uint8)
            pos = 0
            for key in node.keys:
                env = dict(zip(node.names, key))
                args = tuple(self._eval(a, env, f) for a in f.args)
                for r in sorted(node.demand[key]):
                    vals[pos] = self.h[r].has(f.name, args)
                    pos += 1
            node.values = vals
        elif isinstance(f, Rel):
            per_key = np.fromiter(
                (self.reg.decide(f.op, [self._eval(a, dict(zip(node.names, key)), f) for a in f.args])
                 for key in node.keys), dtype=np.uint8, count=len(node.keys))
            cols = _intp((c for c, _ in node.cells), size)
            node.values = per_key[cols]
        elif isinstance(f, Not):
            node.values = 1 - self._pull(node, node.kids[0])
        elif isinstance(f, And):
            node.values = self._pull(node, node.kids[0]) & self._pull(node, node.kids[1])
        elif isinstance(f, Prev):
            kid = node.kids[0]
            idx = _intp((kid.index[(node.keys[c], r - 1)] if r > 1 else -1 for c, r in node.cells), size)
            node.values = kernels.gather(kid.values, idx)
        elif isinstance(f, Since):
            node.values = self._since(node)
        elif isinstance(f, ForallP):
            vals = np.ones(size, dtype=np.uint8)
            body = node.kids[0]
            if node.pairs:
                k = len(node.pairs)
                pidx = _intp((node.index[p] for p, _ in node.pairs), k)
                bidx = _intp((body.index[b] for _, b in node.pairs), k)
                kernels.guard_reduce(vals, body.values, pidx, bidx)
            node.values = vals
        else:
            raise TypeError(f"not a formula: {f!r}")

    def _pull(self, node, kid):
        """The child's values at the parent's cells."""
        proj = _projector(node.names, kid.names)
        keys = [proj(k) for k in node.keys]
        idx = _intp((kid.index[(keys[c], r)] for c, r in node.cells), len(node.cells))
        return kernels.gather(kid.values, idx)

    def _since(self, node):
        a_kid, b_kid = node.kids
        width = len(node.keys)
        rows = max((r for _, r in node.cells), default=0)
        a = np.zeros((rows, width), dtype=np.uint8)
        b = np.zeros((rows, width), dtype=np.uint8)
        for dense, kid in ((a, a_kid), (b, b_kid)):
            proj = _projector(node.names, kid.names)
            rr, cc, src = [], [], []
            for c, key in enumerate(node.keys):
                pk = proj(key)
                for r in range(1, max(node.demand[key], default=0) + 1):
                    rr.append(r - 1)
                    cc.append(c)
                    src.append(kid.index[(pk, r)])
            if src:
                dense[np.array(rr, dtype=np.intp), np.array(cc, dtype=np.intp)] = \
                    kid.values[np.array(src, dtype=np.intp)]
        out = kernels.since_scan(a, b)
        size = len(node.cells)
        return out[_intp((r - 1 for _, r in node.cells), size), _intp((c for c, _ in node.cells), size)]

    def _eval(self, t, env, f):
        try:
            return eval_term(t, env, self.reg)
        except EvaluationError as e:
            from .parser import format_formula
            raise EvaluationError(f"in {format_formula(f)}: {e}") from None

    def tables(self) -> list[Table]:
        """Materialised tables in closure order (after :meth:`run`)."""
        out = []
        for g in self.order:
            node = self.nodes[g]
            cells = {(r, node.keys[c]): bool(node.values[p]) for p, (c, r) in enumerate(node.cells)}
            out.append(Table(g, node.names, list(node.keys), cells))
        return out


def check_dp(h: History, f, registry: Registry = DEFAULT, index: int | None = None) -> bool:
    """``h |= f`` (or truth at ``index``) by bottom-up table filling."""
    return DPChecker(h, registry).run(f, index)
