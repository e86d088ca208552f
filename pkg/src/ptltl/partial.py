"""Potential satisfiability and adherence over histories with unknowns.

:func:`compile` turns a judgement ``(h, i) |- psi`` into a constraint formula
that is satisfiable exactly when some instantiation of the unknowns makes
``psi`` true at ``i``.  Formula variables are bound, during compilation, to
either a constant or an unknown of the history; a ``forall`` over a predicate
therefore instantiates its body with history unknowns as well as constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import constraints as C
from .core import (
    App, Const, Count, ExistsG, ForallG, ForallP, History, Not, And, Pred, Prev,
    Rel, Since, Sort, TrueF, Var, free_vars, sort_of,
)
from .errors import BudgetExceeded, CompileError, IndexOutOfRange, PtltlError
from .interp import DEFAULT, Registry

DEFAULT_NODE_CAP = 200_000


# ---------------------------------------------------------------- symbolic terms

@dataclass(frozen=True)
class _Affine:
    """Int/Rat-valued linear expression with rational coefficients over Int unknowns."""

    coeffs: tuple
    const: Fraction

    @staticmethod
    def of(d: Mapping[str, Fraction], const) -> _Affine:
        return _Affine(tuple(sorted((k, v) for k, v in d.items() if v)), Fraction(const))

    def is_ground(self) -> bool:
        return not self.coeffs

    def add(self, other: _Affine, sign: int = 1) -> _Affine:
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + sign * v
        return _Affine.of(d, self.const + sign * other.const)

    def scale(self, k: Fraction) -> _Affine:
        return _Affine.of({n: c * k for n, c in self.coeffs}, self.const * k)


def _ground_value(x):
    """Concrete value of a compiled term, or None when it mentions an unknown."""
    if isinstance(x, _Affine):
        if not x.is_ground():
            return None
        v = x.const
        return int(v) if v.denominator == 1 else v
    if isinstance(x, C.CVar):
        return None
    return x


class Compiler:
    """Compiles judgements for one po-history, memoising shared sub-judgements."""

    def __init__(self, h: History, registry: Registry = DEFAULT,
                 node_cap: int = DEFAULT_NODE_CAP):
        self.h = h
        self.reg = registry
        self.node_cap = node_cap
        self.nodes = 0
        self._memo: dict = {}
        self._fv: dict = {}
        self._keep: list = []

    # -- terms
    def term(self, t, env):
        if isinstance(t, Const):
            return self._lift(t.value, t.sort)
        if isinstance(t, Var):
            if t.name not in env:
                raise CompileError(f"unbound variable {t.name}")
            val = env[t.name]
            if isinstance(val, C.CVar):
                return self._as_affine(val) if val.sort is Sort.INT else val
            if isinstance(val, _Affine):
                return val
            return self._lift(val, t.sort)
        if isinstance(t, App):
            args = [self.term(a, env) for a in t.args]
            ground = [_ground_value(a) for a in args]
            if all(g is not None for g in ground):
                return self._lift(self.reg.apply(t.fn, ground), t.sort)
            return self._symbolic_app(t, args, ground)
        raise TypeError(f"not a term: {t!r}")

    def _lift(self, v, sort):
        if isinstance(v, C.CVar):
            return v
        if sort in (Sort.INT, Sort.RAT) and sort_of(v) in (Sort.INT, Sort.RAT):
            return _Affine((), Fraction(v))
        return v

    def _symbolic_app(self, t, args, ground):
        for a in args:
            if isinstance(a, C.CVar):
                raise CompileError(
                    f"function {t.fn!r} applied to unknown {a.name} of sort {a.sort.value}; "
                    "only Int unknowns support arithmetic")
        if t.fn in ("+", "-"):
            return args[0].add(args[1], 1 if t.fn == "+" else -1)
        if t.fn == "neg":
            return args[0].scale(Fraction(-1))
        if t.fn == "*":
            if ground[0] is not None:
                return args[1].scale(Fraction(ground[0]))
            if ground[1] is not None:
                return args[0].scale(Fraction(ground[1]))
            raise CompileError("nonlinear term: product of two unknown quantities")
        if t.fn == "/":
            if ground[1] is None:
                raise CompileError("division by an unknown quantity is not linear")
            if ground[1] == 0:
                raise CompileError("division by zero")
            return args[0].scale(1 / Fraction(ground[1]))
        raise CompileError(f"function {t.fn!r} cannot be applied to unknowns")

    # -- atoms
    def equality(self, a, b):
        ga, gb = _ground_value(a), _ground_value(b)
        if ga is not None and gb is not None:
            return C.TOP if ga == gb else C.BOT
        if isinstance(a, _Affine) or isinstance(b, _Affine):
            # the other side may be a CVar or a plain ground number
            return self._int_atom("=", self._as_affine(a), self._as_affine(b))
        if isinstance(a, C.CVar) and a.sort is Sort.INT or isinstance(b, C.CVar) and b.sort is Sort.INT:
            return self._int_atom("=", self._as_affine(a), self._as_affine(b))
        if isinstance(a, C.CVar) and isinstance(b, C.CVar) and a.name == b.name:
            return C.TOP
        if isinstance(a, C.CVar) and a.sort is Sort.RAT and gb is not None:
            b = Fraction(gb)
        if isinstance(b, C.CVar) and b.sort is Sort.RAT and ga is not None:
            a = Fraction(ga)
        return C.CEq(a, b)

    def _as_affine(self, x):
        if isinstance(x, _Affine):
            return x
        if isinstance(x, C.CVar):
            if x.sort is not Sort.INT:
                raise CompileError(f"unknown {x.name} of sort {x.sort.value} used arithmetically")
            return _Affine(((x.name, Fraction(1)),), Fraction(0))
        return _Affine((), Fraction(x))

    def _int_atom(self, op, a, b):
        d = a.add(b, -1)
        if d.is_ground():
            return C.TOP if self.reg.decide(op, [d.const, 0]) else C.BOT
        lcm = 1
        for _, k in d.coeffs:
            lcm = lcm * k.denominator // _gcd(lcm, k.denominator)
        lcm = lcm * d.const.denominator // _gcd(lcm, d.const.denominator)
        sign = -1 if d.coeffs[0][1] < 0 else 1
        lhs = C.Lin.of({n: int(k * lcm * sign) for n, k in d.coeffs})
        rhs = int(-d.const * lcm * sign)   # lhs op rhs, leading coefficient positive
        if sign < 0:
            op = _FLIP.get(op, op)
        if op == "=":
            return C.CEq(lhs, C.Lin.constant(rhs))
        if op == "!=":
            return C.mk_not(C.CEq(lhs, C.Lin.constant(rhs)))
        if op == "<=":
            return C.CLe(lhs, C.Lin.constant(rhs))
        if op == "<":
            return C.CLe(lhs, C.Lin.constant(rhs - 1))
        if op == ">=":
            return C.CGe(lhs, C.Lin.constant(rhs))
        if op == ">":
            return C.CGe(lhs, C.Lin.constant(rhs + 1))
        raise CompileError(f"relation {op!r} is not supported on unknowns")

    def relation(self, f: Rel, env):
        args = [self.term(t, env) for t in f.args]
        ground = [_ground_value(a) for a in args]
        if all(g is not None for g in ground):
            return C.TOP if self.reg.decide(f.op, ground) else C.BOT
        if f.op == "=":
            return self.equality(args[0], args[1])
        if f.op == "!=":
            return C.mk_not(self.equality(args[0], args[1]))
        if f.op in ("<=", "<", ">=", ">"):
            return self._int_atom(f.op, self._as_affine(args[0]), self._as_affine(args[1]))
        raise CompileError(f"relation {f.op!r} is not supported on unknowns")

    def _event_arg(self, a):
        if isinstance(a, Var):
            return C.CVar(a.name, a.sort)
        return a

    # -- formulae
    def _names(self, f):
        names = self._fv.get(id(f))
        if names is None:
            names = tuple(sorted({v.name for v in free_vars(f)}))
            self._fv[id(f)] = names
            self._keep.append(f)
        return names

    def compile(self, f, i: int, env: Mapping | None = None):
        env = env or {}
        if i < 1 or i > len(self.h):
            return C.BOT
        key = (id(f), i, tuple(env.get(n) for n in self._names(f)))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        res = self._compile(f, i, env)
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExceeded(f"unknown: budget (constraint compilation exceeded {self.node_cap} nodes)")
        self._memo[key] = res
        return res

    def _compile(self, f, i, env):
        if isinstance(f, TrueF):
            return C.TOP
        if isinstance(f, Pred):
            targs = [self.term(t, env) for t in f.args]
            options = []
            for u in self.h[i].tuples(f.name):
                options.append(C.mk_and(self.equality(self._event_arg(a), t)
                                        for a, t in zip(u, targs)))
            return C.mk_or(options)
        if isinstance(f, Rel):
            return self.relation(f, env)
        if isinstance(f, Not):
            return C.mk_not(self.compile(f.sub, i, env))
        if isinstance(f, And):
            left = self.compile(f.left, i, env)
            if isinstance(left, C.CBot):
                return C.BOT
            return C.mk_and([left, self.compile(f.right, i, env)])
        if isinstance(f, Prev):
            return self.compile(f.sub, i - 1, env) if i > 1 else C.BOT
        if isinstance(f, Since):
            # C_1 = C2 at 1;  C_j = C2 | (C1 & C_{j-1}); built upward to bound recursion depth
            acc = self.compile(f.right, 1, env)
            for j in range(2, i + 1):
                step = C.mk_or([self.compile(f.right, j, env),
                                C.mk_and([self.compile(f.left, j, env), acc])])
                acc = step
            return acc
        if isinstance(f, ForallP):
            names = [v.name for v in f.vars]
            parts = []
            for u in self.h[i].tuples(f.pred):
                inner = dict(env)
                inner.update(zip(names, (self._event_arg(a) for a in u)))
                part = self.compile(f.body, i, inner)
                if isinstance(part, C.CBot):
                    return C.BOT
                parts.append(part)
            return C.mk_and(parts)
        if isinstance(f, Count):
            raise CompileError("the counting quantifier is not supported over partially observed histories")
        if isinstance(f, (ForallG, ExistsG)):
            raise CompileError("positive-guard quantifiers are not supported over partially observed histories")
        raise TypeError(f"not a formula: {f!r}")


_FLIP = {"<=": ">=", ">=": "<=", "<": ">", ">": "<"}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _require(h, i, f):
    if not 1 <= i <= len(h):
        raise IndexOutOfRange(f"session index {i} outside 1..{len(h)}")
    if free_vars(f):
        raise PtltlError("formula is not closed")


def compile(h: History, i: int, f, registry: Registry = DEFAULT,
            node_cap: int = DEFAULT_NODE_CAP, env: Mapping | None = None):
    """Constraint formula equisatisfiable with the judgement ``(h, i) |- f``.

    ``env`` binds free variables of ``f`` to constants or :class:`CVar`
    unknowns of ``h``.  Indices outside ``1..|h|`` compile to false.
    """
    return Compiler(h, registry, node_cap).compile(f, i, env)


@dataclass(frozen=True)
class PsatResult:
    value: bool
    witness: dict | None = None
    constraint: object = None

    def __bool__(self):
        return self.value


def psat(h: History, i: int, f, registry: Registry = DEFAULT,
         node_cap: int = DEFAULT_NODE_CAP, budget: int | None = None) -> PsatResult:
    """Potential satisfiability, with a witness over all of V(h) when true."""
    from .evaluate import eval_at

    _require(h, i, f)
    c = compile(h, i, f, registry, node_cap)
    unknowns = {v.name: v.sort for v in h.variables()}
    res = C.satisfiable(c, budget=budget, sorts=unknowns)
    if not res.sat:
        return PsatResult(False, None, c)
    avoid = set(h.constants()) | set(res.model.values())
    witness = {}
    for name, s in sorted(unknowns.items()):
        if name in res.model:
            witness[name] = res.model[name]
        else:
            witness[name] = C.concretize(C.FreshValue(0), s, avoid) if s is not Sort.INT else 0
            avoid.add(witness[name])
    if not eval_at(h.substitute(witness), i, f, registry=registry).value:
        raise PtltlError(f"internal error: witness {witness} fails the round-trip check")
    return PsatResult(True, witness, c)


def adhere(h: History, i: int, f, registry: Registry = DEFAULT,
           node_cap: int = DEFAULT_NODE_CAP, budget: int | None = None) -> bool:
    """True when every instantiation of the unknowns satisfies ``f`` at ``i``."""
    return not psat(h, i, Not(f), registry, node_cap, budget).value
