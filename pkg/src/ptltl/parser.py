"""Text frontend: ``.ptltl`` policies, ``.hist`` histories, and a formatter.

Policy files declare predicate signatures and named functions, then give a
single closed formula::

    # comments run to end of line
    pred pay(Int, Str, Int).
    pred post(Str, Int).
    use path.
    policy historically (forall (t,x,v):pay. exists (y,t2):post. x = y & t2 <= 10).

Operator precedence, loosest first: ``->`` (right associative), ``|``, ``&``,
the unary operators ``!``, ``prev``, ``once``, ``historically``, and finally
``since`` (right associative).  Quantifier bodies extend as far right as
possible.  Disjunction, implication, ``exists`` over a bare predicate,
``once``, ``historically`` and ``false`` are desugared into the core
connectives; :func:`format_formula` puts the sugar back.

History files are JSON documents; see :func:`parse_history`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    TRUE, And, App, Const, Count, Event, Exists, ExistsG, ForallG, ForallP, GAnd,
    GAtom, GHist, GOnce, GOr, GPrev, GSince, History, Historically, Implies, Not,
    Once, Or, Pred, Prev, Rel, Session, Since, Sort, TrueF, Var, coerce,
    fits, format_value, free_vars, guard_vars, sort_of,
)
from .errors import ParseError, PtltlError, SortError
from .interp import DEFAULT, Registry

KEYWORDS = {
    "pred", "use", "policy", "forall", "exists", "count", "true", "false",
    "prev", "once", "historically", "since",
}
# Function symbols written as operators need no ``use`` declaration.
OPERATOR_FUNCTIONS = {"+", "-", "*", "/", "neg"}
RELOPS = ("<=", ">=", "!=", "=", "<", ">")

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<rat>\d+/\d+)
  | (?P<int>\d+)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|<=|>=|!=|[=<>!&|()+\-*/,.:{}\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    value: object = None


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "rat":
            num, den = s.split("/")
            if int(den) == 0:
                raise ParseError(f"zero denominator in {s}", line, col)
            out.append(Token("rat", s, line, col, Fraction(int(num), int(den))))
        elif kind == "int":
            out.append(Token("int", s, line, col, int(s)))
        elif kind == "str":
            out.append(Token("str", s, line, col, _unescape(s[1:-1], line, col)))
        elif kind == "name":
            out.append(Token("kw" if s in KEYWORDS else "name", s, line, col))
        elif kind == "op":
            out.append(Token("op", s, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


def _unescape(body: str, line: int, col: int) -> str:
    out = []
    it = iter(body)
    for ch in it:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(it, "")
        mapping = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}
        if nxt not in mapping:
            raise ParseError(f"bad string escape \\{nxt}", line, col)
        out.append(mapping[nxt])
    return "".join(out)


@dataclass
class PolicyDocument:
    predicates: dict  # name -> tuple[Sort, ...]
    uses: set
    formula: object
    positions: dict = field(default_factory=dict, repr=False)  # id(node) -> (line, col)

    def uses_count(self) -> bool:
        from .core import subformulas
        return any(isinstance(f, Count) for f in subformulas(self.formula))

    def uses_positive_guards(self) -> bool:
        from .core import subformulas
        return any(isinstance(f, (ForallG, ExistsG)) for f in subformulas(self.formula))


class _Parser:
    def __init__(self, text: str, registry: Registry = DEFAULT,
                 predicates: Mapping | None = None, uses: Iterable[str] = ()):
        self.toks = tokenize(text)
        self.pos = 0
        self.reg = registry
        self.preds: dict[str, tuple] = dict(predicates or {})
        self.uses: set[str] = set(uses)
        self.positions: dict[int, tuple] = {}

    # -- token helpers --
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_name(self, what: str = "identifier") -> Token:
        if self.tok.kind != "name":
            self.fail(f"expected {what}, found {self.describe(self.tok)}")
        return self.advance()

    @staticmethod
    def describe(t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)

    def fail(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def mark(self, node, tok: Token):
        self.positions.setdefault(id(node), (tok.line, tok.col))
        return node

    # -- document --
    def document(self) -> PolicyDocument:
        while self.at("pred") or self.at("use"):
            if self.at("pred"):
                self.pred_decl()
            else:
                self.use_decl()
        self.expect("policy")
        start = self.tok
        f = self.formula({})
        self.expect(".")
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.describe(self.tok)} after policy")
        if free_vars(f):
            names = ", ".join(sorted(v.name for v in free_vars(f)))
            self.fail(f"policy is not closed; free variables: {names}", start)
        return PolicyDocument(self.preds, self.uses, f, self.positions)

    def pred_decl(self):
        self.expect("pred")
        name_tok = self.expect_name("predicate name")
        name = name_tok.text
        if name in self.preds:
            self.fail(f"predicate {name!r} declared twice", name_tok)
        if self.reg.has_function(name) or self.reg.has_relation(name):
            self.fail(f"{name!r} is an interpreted symbol", name_tok)
        sorts: list[Sort] = []
        if self.at("("):
            self.advance()
            if not self.at(")"):
                sorts.append(self.sort())
                while self.at(","):
                    self.advance()
                    sorts.append(self.sort())
            self.expect(")")
        self.expect(".")
        self.preds[name] = tuple(sorts)

    def sort(self) -> Sort:
        t = self.expect_name("sort name")
        try:
            return Sort.parse(t.text)
        except SortError:
            self.fail(f"unknown sort {t.text!r} (expected Int, Rat or Str)", t)

    def use_decl(self):
        self.expect("use")
        while True:
            t = self.expect_name("function name")
            if not self.reg.has_function(t.text):
                self.fail(f"unknown interpreted function {t.text!r}", t)
            self.uses.add(t.text)
            if not self.at(","):
                break
            self.advance()
        self.expect(".")

    # -- formulas --
    def formula(self, scope: dict):
        return self.implication(scope)

    def implication(self, scope):
        left = self.disjunction(scope)
        if self.at("->"):
            self.advance()
            right = self.implication(scope)
            return Implies(left, right)
        return left

    def disjunction(self, scope):
        left = self.conjunction(scope)
        while self.at("|"):
            self.advance()
            left = Or(left, self.conjunction(scope))
        return left

    def conjunction(self, scope):
        left = self.unary(scope)
        while self.at("&"):
            self.advance()
            left = And(left, self.unary(scope))
        return left

    def unary(self, scope):
        t = self.tok
        if self.at("!"):
            self.advance()
            return self.mark(Not(self.unary(scope)), t)
        if self.at("prev"):
            self.advance()
            return self.mark(Prev(self.unary(scope)), t)
        if self.at("once"):
            self.advance()
            return self.mark(Once(self.unary(scope)), t)
        if self.at("historically"):
            self.advance()
            return self.mark(Historically(self.unary(scope)), t)
        return self.since(scope)

    def since(self, scope):
        t = self.tok
        left = self.primary(scope)
        if self.at("since"):
            self.advance()
            return self.mark(Since(left, self.unary(scope)), t)
        return left

    def primary(self, scope):
        t = self.tok
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return Not(TRUE)
        if self.at("forall") or self.at("exists"):
            return self.quantifier(scope)
        if self.at("count"):
            return self.count(scope)
        if self.at("("):
            return self.paren(scope)
        if t.kind == "name" and t.text in self.preds:
            return self.mark(self.pred_atom(scope), t)
        if t.kind == "name" and t.text not in scope and not self.peek().text == "(":
            self.fail(f"undeclared predicate or unbound variable {t.text!r}")
        return self.mark(self.relation(scope), t)

    def paren(self, scope):
        save = self.pos
        try:
            self.advance()
            f = self.formula(scope)
            self.expect(")")
        except ParseError as err:
            self.pos = save
            try:
                return self.relation(scope)
            except ParseError:
                raise err from None
        if self.tok.kind == "op" and self.tok.text in RELOPS + ("+", "-", "*", "/"):
            self.pos = save
            return self.relation(scope)
        return f

    def pred_atom(self, scope):
        name_tok = self.advance()
        sorts = self.preds[name_tok.text]
        args: list = []
        if self.at("("):
            self.advance()
            if not self.at(")"):
                args.append(self.term(scope))
                while self.at(","):
                    self.advance()
                    args.append(self.term(scope))
            self.expect(")")
        if len(args) != len(sorts):
            self.fail(f"predicate {name_tok.text!r} expects {len(sorts)} argument(s), got {len(args)}",
                      name_tok)
        for a, s in zip(args, sorts):
            if not fits(a.sort, s):
                self.fail(f"argument of {name_tok.text!r} has sort {a.sort}, expected {s}", name_tok)
        return Pred(name_tok.text, tuple(args))

    def relation(self, scope):
        t = self.tok
        left = self.term(scope)
        if not (self.tok.kind == "op" and self.tok.text in RELOPS):
            self.fail(f"expected a relation operator after term, found {self.describe(self.tok)}")
        op = self.advance().text
        right = self.term(scope)
        try:
            self.reg.resolve_relation(op, (left.sort, right.sort))
        except SortError as e:
            self.fail(str(e), t)
        return Rel(op, (left, right))

    def _binder_vars(self) -> list[Token]:
        if self.at("("):
            self.advance()
            names = [self.expect_name("variable")]
            while self.at(","):
                self.advance()
                names.append(self.expect_name("variable"))
            self.expect(")")
        else:
            names = [self.expect_name("variable")]
        seen = set()
        for n in names:
            if n.text in seen:
                self.fail(f"variable {n.text!r} bound twice", n)
            if n.text in self.preds:
                self.fail(f"variable {n.text!r} clashes with a predicate name", n)
            seen.add(n.text)
        return names

    def quantifier(self, scope):
        q = self.advance()
        names = self._binder_vars()
        self.expect(":")
        g_tok = self.tok
        if (g_tok.kind == "name" and self.peek().text == "."
                and g_tok.text in self.preds):
            # bare predicate guard
            self.advance()
            sorts = self.preds[g_tok.text]
            if len(sorts) != len(names):
                self.fail(f"guard {g_tok.text!r} has arity {len(sorts)} but {len(names)} "
                          f"variable(s) are bound", g_tok)
            self.expect(".")
            vs = tuple(Var(n.text, s) for n, s in zip(names, sorts))
            body = self.formula({**scope, **{v.name: v for v in vs}})
            node = ForallP(vs, g_tok.text, body) if q.text == "forall" else Exists(vs, g_tok.text, body)
            return self.mark(node, q)
        guard = self.guard_or(set(n.text for n in names))
        self.expect(".")
        gv = {v.name: v for v in guard_vars(guard)}
        missing = [n.text for n in names if n.text not in gv]
        if missing:
            self.fail(f"guard does not bind variable(s) {', '.join(missing)}", g_tok)
        vs = tuple(gv[n.text] for n in names)
        body = self.formula({**scope, **{v.name: v for v in vs}})
        cls = ForallG if q.text == "forall" else ExistsG
        return self.mark(cls(vs, guard, body), q)

    def count(self, scope):
        c = self.advance()
        name = self.expect_name("variable")
        if name.text in self.preds:
            self.fail(f"variable {name.text!r} clashes with a predicate name", name)
        self.expect(":")
        counted = self.formula(scope)
        self.expect(".")
        if any(v.name == name.text for v in free_vars(counted)):
            self.fail(f"counting variable {name.text!r} occurs free in the counted formula", name)
        var = Var(name.text, Sort.INT)
        body = self.formula({**scope, name.text: var})
        return self.mark(Count(var, counted, body), c)

    # -- positive guards --
    def guard_or(self, allowed):
        left = self.guard_and(allowed)
        while self.at("|"):
            t = self.advance()
            right = self.guard_and(allowed)
            self._same_vars(left, right, "|", t)
            left = GOr(left, right)
        return left

    def guard_and(self, allowed):
        left = self.guard_unary(allowed)
        while self.at("&"):
            self.advance()
            right = self.guard_unary(allowed)
            self._consistent_sorts(left, right)
            left = GAnd(left, right)
        return left

    def guard_unary(self, allowed):
        for kw, cls in (("prev", GPrev), ("once", GOnce), ("historically", GHist)):
            if self.at(kw):
                self.advance()
                return cls(self.guard_unary(allowed))
        if self.at("!"):
            self.fail("negation is not allowed in quantifier guards")
        t = self.tok
        left = self.guard_primary(allowed)
        if self.at("since"):
            self.advance()
            right = self.guard_unary(allowed)
            self._same_vars(left, right, "since", t)
            return GSince(left, right)
        return left

    def guard_primary(self, allowed):
        if self.at("("):
            self.advance()
            g = self.guard_or(allowed)
            self.expect(")")
            return g
        t = self.tok
        if t.kind != "name" or t.text not in self.preds:
            self.fail(f"expected a predicate in guard, found {self.describe(t)}")
        self.advance()
        sorts = self.preds[t.text]
        args = []
        if self.at("("):
            self.advance()
            if not self.at(")"):
                args.append(self.guard_arg(allowed))
                while self.at(","):
                    self.advance()
                    args.append(self.guard_arg(allowed))
            self.expect(")")
        if len(args) != len(sorts):
            self.fail(f"predicate {t.text!r} expects {len(sorts)} argument(s), got {len(args)}", t)
        typed = []
        for a, s in zip(args, sorts):
            if isinstance(a, str):
                typed.append(Var(a, s))
            else:
                if not fits(sort_of(a), s):
                    self.fail(f"constant {format_value(a)} does not fit sort {s}", t)
                typed.append(Const(coerce(a, s)))
        g = GAtom(t.text, tuple(typed))
        return g

    def guard_arg(self, allowed):
        t = self.tok
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text in ("(", "+", "-", "*", "/"):
            self.fail("function symbols are not allowed in quantifier guards")
        if t.kind == "name":
            if t.text not in allowed:
                self.fail(f"guard variable {t.text!r} is not bound by this quantifier")
            self.advance()
            return t.text
        if t.kind in ("int", "rat", "str"):
            self.advance()
            return t.value
        if self.at("-") and nxt.kind in ("int", "rat"):
            self.advance()
            return -self.advance().value
        self.fail(f"expected a variable or constant in guard, found {self.describe(t)}")

    def _consistent_sorts(self, a, b):
        sa = {v.name: v.sort for v in guard_vars(a)}
        for v in guard_vars(b):
            if v.name in sa and sa[v.name] is not v.sort:
                self.fail(f"guard variable {v.name!r} used at sorts {sa[v.name]} and {v.sort}")

    def _same_vars(self, a, b, op, tok):
        self._consistent_sorts(a, b)
        if {v.name for v in guard_vars(a)} != {v.name for v in guard_vars(b)}:
            self.fail(f"operands of {op!r} in a guard must have the same variables", tok)

    # -- terms --
    def term(self, scope):
        left = self.product(scope)
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.advance()
            right = self.product(scope)
            left = self.app(op.text, (left, right), op)
        return left

    def product(self, scope):
        left = self.uterm(scope)
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.advance()
            right = self.uterm(scope)
            left = self.app(op.text, (left, right), op)
        return left

    def uterm(self, scope):
        if self.at("-"):
            op = self.advance()
            if self.tok.kind in ("int", "rat"):
                return Const(-self.advance().value)
            return self.app("neg", (self.uterm(scope),), op)
        return self.tprimary(scope)

    def tprimary(self, scope):
        t = self.tok
        if t.kind in ("int", "rat", "str"):
            self.advance()
            return Const(t.value)
        if self.at("("):
            self.advance()
            inner = self.term(scope)
            self.expect(")")
            return inner
        if t.kind == "name":
            self.advance()
            if self.at("("):
                if t.text in self.preds:
                    self.fail(f"predicate {t.text!r} used as a term", t)
                if not self.reg.has_function(t.text):
                    self.fail(f"unknown function {t.text!r}", t)
                if t.text not in self.uses and t.text not in OPERATOR_FUNCTIONS:
                    self.fail(f"function {t.text!r} used without a 'use {t.text}.' declaration", t)
                self.advance()
                args = [self.term(scope)]
                while self.at(","):
                    self.advance()
                    args.append(self.term(scope))
                self.expect(")")
                return self.app(t.text, tuple(args), t)
            if t.text in scope:
                return scope[t.text]
            if t.text in self.preds:
                self.fail(f"predicate {t.text!r} used as a term", t)
            self.fail(f"unbound variable {t.text!r}", t)
        self.fail(f"expected a term, found {self.describe(t)}")

    def app(self, fn, args, tok):
        try:
            sig = self.reg.resolve_function(fn, [a.sort for a in args])
        except SortError as e:
            self.fail(str(e), tok)
        return App(fn, args, sig.result_sort)


def parse_policy(text: str, registry: Registry = DEFAULT) -> PolicyDocument:
    return _Parser(text, registry).document()


def parse_formula(text: str, predicates: Mapping, uses: Iterable[str] = ("path",),
                  registry: Registry = DEFAULT, allow_open: bool = False,
                  scope: Mapping | None = None):
    """Parse a bare formula against the given predicate signatures."""
    p = _Parser(text, registry, predicates, uses)
    f = p.formula(dict(scope or {}))
    if p.at("."):
        p.advance()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.describe(p.tok)}")
    if not allow_open and free_vars(f):
        p.fail("formula is not closed")
    return f


# --- formatter -----------------------------------------------------------

_INFIX = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_term(t, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        s = format_value(t.value)
        if prec >= 3 and s.startswith("-"):
            return f"({s})"
        return s
    if t.fn in _INFIX and len(t.args) == 2:
        p = _INFIX[t.fn]
        s = f"{format_term(t.args[0], p)} {t.fn} {format_term(t.args[1], p + 1)}"
        return f"({s})" if prec > p else s
    if t.fn == "neg":
        (a,) = t.args
        inner = format_term(a, 3)
        if isinstance(a, Const) or inner.startswith("-"):
            inner = f"({format_value(a.value) if isinstance(a, Const) else inner})"
        s = f"-{inner}"
        return f"({s})" if prec > 3 else s
    return f"{t.fn}({', '.join(format_term(a) for a in t.args)})"


def _sugar(f):
    """Recognise the desugared shapes produced by the parser."""
    if isinstance(f, Not):
        s = f.sub
        if isinstance(s, TrueF):
            return ("false",)
        if isinstance(s, And) and isinstance(s.left, Not) and isinstance(s.right, Not):
            return ("or", s.left.sub, s.right.sub)
        if isinstance(s, And) and isinstance(s.right, Not):
            return ("imp", s.left, s.right.sub)
        if isinstance(s, Since) and isinstance(s.left, TrueF) and isinstance(s.right, Not):
            return ("hist", s.right.sub)
        if isinstance(s, ForallP) and isinstance(s.body, Not):
            return ("exists", s.vars, s.pred, s.body.sub)
        return ("not", s)
    if isinstance(f, Since) and isinstance(f.left, TrueF):
        return ("once", f.right)
    return None


def _binder(vs) -> str:
    return "(" + ",".join(v.name for v in vs) + ")"


def format_formula(f, prec: int = 0) -> str:
    """Canonical text for ``f``; ``parse(format(f))`` reproduces ``f``."""
    s, p = _fmt(f)
    return f"({s})" if prec > p else s


def _fmt(f):
    sug = _sugar(f)
    if sug is not None:
        kind = sug[0]
        if kind == "false":
            return "false", 6
        if kind == "or":
            return f"{format_formula(sug[1], 2)} | {format_formula(sug[2], 3)}", 2
        if kind == "imp":
            return f"{format_formula(sug[1], 2)} -> {format_formula(sug[2], 1)}", 1
        if kind == "exists":
            return f"exists {_binder(sug[1])}:{sug[2]}. {format_formula(sug[3], 0)}", 0
        word = {"not": "!", "once": "once ", "hist": "historically "}[kind]
        inner = format_formula(sug[1], 4)
        if isinstance(sug[1], Rel):
            inner = f"({inner})"
        return f"{word}{inner}", 4
    if isinstance(f, TrueF):
        return "true", 6
    if isinstance(f, Pred):
        if not f.args:
            return f.name, 6
        return f"{f.name}({', '.join(format_term(a) for a in f.args)})", 6
    if isinstance(f, Rel):
        return f"{format_term(f.args[0])} {f.op} {format_term(f.args[1])}", 6
    if isinstance(f, Prev):
        return f"prev {format_formula(f.sub, 4)}", 4
    if isinstance(f, And):
        return f"{format_formula(f.left, 3)} & {format_formula(f.right, 4)}", 3
    if isinstance(f, Since):
        return f"{format_formula(f.left, 6)} since {format_formula(f.right, 4)}", 5
    if isinstance(f, ForallP):
        return f"forall {_binder(f.vars)}:{f.pred}. {format_formula(f.body, 0)}", 0
    if isinstance(f, (ForallG, ExistsG)):
        q = "forall" if isinstance(f, ForallG) else "exists"
        return f"{q} {_binder(f.vars)}: {format_guard(f.guard)}. {format_formula(f.body, 0)}", 0
    if isinstance(f, Count):
        return f"count {f.var.name} : {format_formula(f.counted, 0)}. {format_formula(f.body, 0)}", 0
    if isinstance(f, Not):
        return f"!{format_formula(f.sub, 4)}", 4
    raise TypeError(f"not a formula: {f!r}")


def format_guard(g, prec: int = 0) -> str:
    if isinstance(g, GAtom):
        s, p = (g.name if not g.args else
                f"{g.name}({', '.join(format_term(a) for a in g.args)})"), 6
    elif isinstance(g, GOr):
        s, p = f"{format_guard(g.left, 2)} | {format_guard(g.right, 3)}", 2
    elif isinstance(g, GAnd):
        s, p = f"{format_guard(g.left, 3)} & {format_guard(g.right, 4)}", 3
    elif isinstance(g, (GPrev, GOnce, GHist)):
        word = {GPrev: "prev", GOnce: "once", GHist: "historically"}[type(g)]
        s, p = f"{word} {format_guard(g.sub, 4)}", 4
    elif isinstance(g, GSince):
        s, p = f"{format_guard(g.left, 6)} since {format_guard(g.right, 4)}", 5
    else:
        raise TypeError(f"not a guard: {g!r}")
    return f"({s})" if prec > p else s


def format_policy(doc: PolicyDocument) -> str:
    lines = []
    for name, sorts in doc.predicates.items():
        if sorts:
            lines.append(f"pred {name}({', '.join(str(s) for s in sorts)}).")
        else:
            lines.append(f"pred {name}.")
    if doc.uses:
        lines.append(f"use {', '.join(sorted(doc.uses))}.")
    lines.append(f"policy {format_formula(doc.formula)}.")
    return "\n".join(lines) + "\n"


# --- histories -----------------------------------------------------------

class HistoryFormatError(ParseError):
    pass


def _decode_arg(raw, where: str):
    if isinstance(raw, bool) or isinstance(raw, float) or raw is None:
        raise HistoryFormatError(f"{where}: unsupported argument {raw!r}")
    if isinstance(raw, (int, str)):
        return raw
    if isinstance(raw, dict):
        if set(raw) == {"rat"}:
            m = re.fullmatch(r"(-?\d+)/(\d+)", str(raw["rat"]))
            if not m or int(m.group(2)) == 0:
                raise HistoryFormatError(f"{where}: malformed rational {raw['rat']!r}")
            return Fraction(int(m.group(1)), int(m.group(2)))
        if set(raw) == {"var", "sort"}:
            try:
                return Var(str(raw["var"]), Sort.parse(str(raw["sort"])))
            except SortError as e:
                raise HistoryFormatError(f"{where}: {e}") from None
    raise HistoryFormatError(f"{where}: unsupported argument {raw!r}")


def _encode_arg(a):
    if isinstance(a, Var):
        return {"var": a.name, "sort": a.sort.value}
    if isinstance(a, Fraction):
        return {"rat": f"{a.numerator}/{a.denominator}"}
    return a


class _EventChecker:
    """Validates events against declared and inferred predicate signatures."""

    def __init__(self, signature: Mapping | None, declared: Mapping | None, ground: bool):
        self.strict = signature is not None
        self.sig: dict[str, tuple] = dict(signature or {})
        for name, sorts in (declared or {}).items():
            if name in self.sig and tuple(self.sig[name]) != tuple(sorts):
                raise HistoryFormatError(f"predicate {name!r}: history declares "
                                         f"{_show(sorts)}, policy declares {_show(self.sig[name])}")
            self.sig.setdefault(name, tuple(sorts))
        self.inferred: set[str] = set()
        self.ground = ground
        self.var_sorts: dict[str, Sort] = {}

    def event(self, name: str, args: list, where: str) -> Event:
        if name not in self.sig:
            if self.strict:
                raise HistoryFormatError(f"{where}: unknown predicate {name!r}")
            self.sig[name] = tuple(a.sort if isinstance(a, Var) else sort_of(a) for a in args)
            self.inferred.add(name)
        sorts = self.sig[name]
        if len(sorts) != len(args):
            raise HistoryFormatError(f"{where}: {name!r} expects {len(sorts)} argument(s), got {len(args)}")
        out = []
        for a, s in zip(args, sorts):
            if isinstance(a, Var):
                if self.ground:
                    raise HistoryFormatError(f"{where}: variable {a.name} in a ground history")
                if a.sort is not s:
                    raise HistoryFormatError(f"{where}: variable {a.name} of sort {a.sort} "
                                             f"in a {s} position of {name!r}")
                prev = self.var_sorts.setdefault(a.name, a.sort)
                if prev is not a.sort:
                    raise HistoryFormatError(f"{where}: variable {a.name} used at sorts {prev} and {a.sort}")
                out.append(a)
            else:
                vs = sort_of(a)
                ok = vs is s if name in self.inferred else fits(vs, s)
                if not ok:
                    raise HistoryFormatError(f"{where}: argument {format_value(a)} of {name!r} "
                                             f"has sort {vs}, expected {s}")
                out.append(coerce(a, s))
        return Event(name, tuple(out))


def _show(sorts) -> str:
    return "(" + ", ".join(str(s) for s in sorts) + ")"


@dataclass
class HistoryDocument:
    history: History
    predicates: dict

    @property
    def variables(self):
        return self.history.variables()


def parse_history_document(text: str, signature: Mapping | None = None,
                           ground: bool = False) -> HistoryDocument:
    """Parse a JSON history document.

    Schema::

        {"preds": {"pay": ["Int", "Str", "Int"], ...},        # optional
         "sessions": [[{"pred": "pay", "args": [1, "a", 100]}, ...], ...]}

    Arguments are JSON integers (Int), strings (Str), ``{"rat": "n/d"}`` (Rat)
    or ``{"var": "X", "sort": "Int"}`` (an unknown; po-histories only).
    When ``signature`` is given, every event must match it.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise HistoryFormatError(f"malformed JSON: {e.msg}", e.lineno, e.colno) from None
    if isinstance(raw, list):
        raw = {"sessions": raw}
    if not isinstance(raw, dict) or "sessions" not in raw:
        raise HistoryFormatError("history document needs a 'sessions' list")
    declared = {}
    for name, sorts in (raw.get("preds") or {}).items():
        try:
            declared[name] = tuple(Sort.parse(s) for s in sorts)
        except (SortError, TypeError):
            raise HistoryFormatError(f"bad sort list for predicate {name!r}") from None
    sessions_raw = raw["sessions"]
    if not isinstance(sessions_raw, list):
        raise HistoryFormatError("'sessions' must be a list")
    chk = _EventChecker(signature, declared, ground)
    sessions = []
    for si, sess in enumerate(sessions_raw, 1):
        if not isinstance(sess, list):
            raise HistoryFormatError(f"session {si}: expected a list of events")
        events = []
        for ei, ev in enumerate(sess, 1):
            where = f"session {si}, event {ei}"
            if not isinstance(ev, dict) or "pred" not in ev:
                raise HistoryFormatError(f"{where}: expected {{\"pred\": ..., \"args\": [...]}}")
            args = ev.get("args", [])
            if not isinstance(args, list):
                raise HistoryFormatError(f"{where}: 'args' must be a list")
            decoded = [_decode_arg(a, where) for a in args]
            events.append(chk.event(str(ev["pred"]), decoded, where))
        sessions.append(Session(events))
    used = {e.name for s in sessions for e in s}
    preds = {n: chk.sig[n] for n in sorted(set(declared) | used)}
    return HistoryDocument(History(sessions), preds)


def parse_history(text: str, signature: Mapping | None = None, ground: bool = False) -> History:
    return parse_history_document(text, signature, ground).history


def dump_history(h: History, predicates: Mapping | None = None) -> str:
    """Canonical JSON text: sorted predicate table, one event per line."""
    preds = dict(predicates or {})
    for s in h.sessions:
        for e in s:
            if e.name not in preds:
                preds[e.name] = tuple(a.sort if isinstance(a, Var) else sort_of(a) for a in e.args)
    lines = ["{", '  "preds": {']
    items = sorted(preds.items())
    for k, (name, sorts) in enumerate(items):
        sep = "," if k < len(items) - 1 else ""
        lines.append(f"    {json.dumps(name)}: {json.dumps([str(s) for s in sorts])}{sep}")
    lines.append("  },")
    lines.append('  "sessions": [')
    for si, s in enumerate(h.sessions):
        sep = "," if si < len(h.sessions) - 1 else ""
        if not s.events:
            lines.append(f"    []{sep}")
            continue
        lines.append("    [")
        for ei, e in enumerate(s.events):
            esep = "," if ei < len(s.events) - 1 else ""
            rec = json.dumps({"pred": e.name, "args": [_encode_arg(a) for a in e.args]},
                             ensure_ascii=False)
            lines.append(f"      {rec}{esep}")
        lines.append(f"    ]{sep}")
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_session_text(text: str, signature: Mapping | None = None,
                       ground: bool = False) -> Session:
    """Parse the compact form ``{p1(0), pay(2, "a", X), negative}``.

    Bare identifiers in argument position are unknowns whose sort comes from
    the predicate signature.
    """
    text = text.strip()
    if text.startswith("["):
        raw = json.loads(text)
        doc = parse_history_document(json.dumps({"sessions": [raw]}), signature, ground)
        return doc.history.sessions[0]
    toks = tokenize(text)
    pos = 0
    sig = dict(signature or {})
    chk = _EventChecker(signature, None, ground)

    def tok():
        return toks[pos]

    def fail(msg):
        t = toks[pos]
        raise HistoryFormatError(msg, t.line, t.col)

    braced = toks[0].text == "{"
    if braced:
        pos += 1
    events = []
    while toks[pos].kind != "eof" and toks[pos].text != "}":
        t = tok()
        if t.kind != "name":
            fail(f"expected an event, found {t.text!r}")
        name = t.text
        pos += 1
        args = []
        if tok().text == "(":
            pos += 1
            while tok().text != ")":
                a = tok()
                if a.kind in ("int", "rat", "str"):
                    args.append(a.value)
                    pos += 1
                elif a.text == "-" and toks[pos + 1].kind in ("int", "rat"):
                    args.append(-toks[pos + 1].value)
                    pos += 2
                elif a.kind == "name":
                    sorts = sig.get(name)
                    if sorts is None or len(sorts) <= len(args):
                        fail(f"cannot infer the sort of unknown {a.text!r}; declare {name!r}")
                    args.append(Var(a.text, sorts[len(args)]))
                    pos += 1
                else:
                    fail(f"unexpected {a.text!r} in event arguments")
                if tok().text == ",":
                    pos += 1
                elif tok().text != ")":
                    fail(f"expected ',' or ')', found {tok().text!r}")
            pos += 1
        events.append(chk.event(name, args, f"event {len(events) + 1}"))
        if tok().text == ",":
            pos += 1
    if braced:
        if tok().text != "}":
            fail("expected '}'")
        pos += 1
    if tok().kind != "eof":
        fail(f"unexpected {tok().text!r} after session")
    return Session(events)
