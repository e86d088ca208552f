"""``ptltl`` command-line interface.

Exit status: 0 when the verdict is true, 1 when false, 2 on usage or input
errors, 3 when a resource budget ran out before a verdict was reached.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import constraints
from .errors import (
    BudgetExceeded, EmptyHistoryError, EngineCapabilityError, PtltlError,
)
from .parser import (
    dump_history, format_policy, parse_history_document, parse_policy,
    parse_session_text,
)

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2, 3
BUDGET_ENV = "PTLTL_BUDGET"


class UsageError(PtltlError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _budget(args) -> int | None:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    return None


def _load_policy(path: str):
    return parse_policy(_read(path))


def _load_history(path: str, doc, ground: bool):
    hist = parse_history_document(_read(path), ground=ground)
    for name, sorts in hist.predicates.items():
        want = doc.predicates.get(name)
        if want is not None and tuple(want) != tuple(sorts):
            shown = ", ".join(s.value for s in want)
            got = ", ".join(s.value for s in sorts)
            raise UsageError(f"{path}: predicate {name} has sorts ({got}) but the policy declares ({shown})")
    return hist


def _index(args, h) -> int:
    i = len(h) if args.index is None else args.index
    if not 1 <= i <= len(h):
        raise UsageError(f"--index {i} outside 1..{len(h)}")
    return i


def _emit(args, record: dict, human: str):
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(human)


def _format_witness(w: dict) -> list[str]:
    from .core import format_value
    return [f"{k} = {format_value(v)}" for k, v in sorted(w.items())]


# ---------------------------------------------------------------- commands

def cmd_check(args) -> int:
    doc = _load_policy(args.policy)
    if args.engine == "dp" and (doc.uses_count() or doc.uses_positive_guards()):
        raise EngineCapabilityError(
            "the dp engine does not support counting or positive-guard quantifiers; "
            "use --engine recursive")
    hist = _load_history(args.history, doc, ground=True)
    h = hist.history
    start = time.perf_counter()
    if len(h) == 0:
        _emit(args, {"policy": args.policy, "history": args.history, "engine": args.engine,
                     "verdict": "vacuous", "seconds": 0.0}, "vacuous (empty history)")
        return EXIT_TRUE
    explanation = None
    if args.engine == "dp":
        from .dp import check_dp
        value = check_dp(h, doc.formula, index=_index(args, h))
    else:
        from .evaluate import eval_at
        v = eval_at(h, _index(args, h), doc.formula, trace=args.trace, full=args.full_trace)
        value, explanation = v.value, v.explanation
    elapsed = time.perf_counter() - start
    record = {"policy": args.policy, "history": args.history, "engine": args.engine,
              "verdict": value, "seconds": round(elapsed, 6)}
    human = "true" if value else "false"
    if explanation is not None:
        record["trace"] = explanation.to_dict()
        human = human + "\n" + explanation.render()
    _emit(args, record, human)
    return EXIT_TRUE if value else EXIT_FALSE


def cmd_trace(args) -> int:
    doc = _load_policy(args.policy)
    h = _load_history(args.history, doc, ground=True).history
    if len(h) == 0:
        raise EmptyHistoryError("history has no sessions; nothing to trace")
    from .evaluate import eval_at
    v = eval_at(h, _index(args, h), doc.formula, trace=True, full=args.full_trace)
    if args.format == "json":
        print(v.explanation.to_json())
    else:
        print(v.explanation.render())
    return EXIT_TRUE if v.value else EXIT_FALSE


def cmd_psat(args) -> int:
    from .partial import psat
    doc = _load_policy(args.policy)
    h = _load_history(args.history, doc, ground=False).history
    if len(h) == 0:
        raise EmptyHistoryError("history has no sessions")
    res = psat(h, _index(args, h), doc.formula, budget=_budget(args))
    lines = ["sat" if res.value else "unsat"]
    if res.value:
        lines += _format_witness(res.witness)
    _emit(args, {"policy": args.policy, "history": args.history, "psat": res.value,
                 "witness": {k: _jsonable(v) for k, v in (res.witness or {}).items()}},
          "\n".join(lines))
    return EXIT_TRUE if res.value else EXIT_FALSE


def cmd_adhere(args) -> int:
    from .core import Not
    from .partial import psat
    doc = _load_policy(args.policy)
    h = _load_history(args.history, doc, ground=False).history
    if len(h) == 0:
        raise EmptyHistoryError("history has no sessions")
    counter = psat(h, _index(args, h), Not(doc.formula), budget=_budget(args))
    value = not counter.value
    lines = ["adheres" if value else "does not adhere"]
    if not value:
        lines.append("counterexample:")
        lines += ["  " + s for s in _format_witness(counter.witness)]
    _emit(args, {"policy": args.policy, "history": args.history, "adhere": value,
                 "counterexample": None if value else
                 {k: _jsonable(v) for k, v in counter.witness.items()}},
          "\n".join(lines))
    return EXIT_TRUE if value else EXIT_FALSE


def _jsonable(v):
    from fractions import Fraction
    return f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v


def cmd_emit(args) -> int:
    from .partial import compile
    doc = _load_policy(args.policy)
    h = _load_history(args.history, doc, ground=False).history
    if len(h) == 0:
        raise EmptyHistoryError("history has no sessions")
    c = compile(h, _index(args, h), doc.formula)
    text = constraints.to_smtlib(c) if args.smtlib else constraints.dump(c) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


def cmd_append(args) -> int:
    text = _read(args.history)
    hist = parse_history_document(text)
    sig = dict(hist.predicates)
    if args.policy:
        for name, sorts in _load_policy(args.policy).predicates.items():
            if name in sig and tuple(sig[name]) != tuple(sorts):
                raise UsageError(f"predicate {name}: the history and {args.policy} disagree on its sorts")
            sig[name] = tuple(sorts)
    session_text = args.session
    if session_text.startswith("@"):
        session_text = _read(session_text[1:])
    # with no signature at all, sorts are inferred from the new events
    session = parse_session_text(session_text, sig or None, ground=not args.partial)
    if not args.partial and not hist.history.ground:
        raise UsageError(f"{args.history} contains unknowns; pass --partial to append to it")
    h = hist.history.append(session)
    out = dump_history(h, sig)
    parse_history_document(out, sig or None)   # unknown sorts must stay consistent
    Path(args.history).write_text(out, encoding="utf-8")
    n = len(session)
    print(f"appended session {len(h)} ({n} event{'' if n == 1 else 's'})")
    return EXIT_TRUE


def cmd_fmt(args) -> int:
    doc = _load_policy(args.policy)
    out = format_policy(doc)
    if args.in_place:
        Path(args.policy).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_TRUE


def cmd_gen_qbf(args) -> int:
    from .testkit import gen_qbf, parse_qbf, random_qbf
    if args.spec.startswith("random:"):
        try:
            nvars = int(args.spec.split(":", 1)[1])
        except ValueError:
            raise UsageError("random QBF spec must look like random:N") from None
        spec = random_qbf(nvars, random.Random(args.seed))
    else:
        spec = parse_qbf(args.spec)
    inst = gen_qbf(spec, trace_like=args.trace_like)
    prefix = Path(args.out)
    policy_path = prefix.with_name(prefix.name + ".ptltl")
    hist_path = prefix.with_name(prefix.name + ".hist")
    header = f"# QBF: {spec}\n# expected verdict: {'true' if inst.expected else 'false'}\n"
    policy_path.write_text(header + inst.policy_text, encoding="utf-8")
    hist_path.write_text(dump_history(inst.history, inst.predicates), encoding="utf-8")
    _emit(args, {"spec": str(spec), "trace_like": args.trace_like, "expected": inst.expected,
                 "policy": str(policy_path), "history": str(hist_path),
                 "sessions": len(inst.history)},
          f"wrote {policy_path} and {hist_path} ({len(inst.history)} "
          f"session{'' if len(inst.history) == 1 else 's'}); "
          f"expected verdict {'true' if inst.expected else 'false'}")
    return EXIT_TRUE


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("human", "json"), default="human",
                        help="human-readable text or one JSON record")
    shared.add_argument("--seed", type=int, default=0, help="seed for randomized subcommands")
    shared.add_argument("--budget", type=int, default=None,
                        help=f"solver step budget (overrides ${BUDGET_ENV})")
    p = argparse.ArgumentParser(prog="ptltl", description="Check histories against temporal policies.")
    base = p.add_subparsers(dest="command", required=True)

    class _Sub:
        @staticmethod
        def add_parser(name, **kw):
            return base.add_parser(name, parents=[shared], **kw)
    sub = _Sub()

    def common(sp, history_name="history"):
        sp.add_argument("policy")
        sp.add_argument(history_name)
        sp.add_argument("--index", type=int, default=None, help="session index (default: last)")

    c = sub.add_parser("check", help="decide whether a history satisfies a policy")
    common(c)
    c.add_argument("--engine", choices=("recursive", "dp"), default="recursive")
    c.add_argument("--trace", action="store_true", help="print the derivation")
    c.add_argument("--full-trace", action="store_true", help="disable short-circuiting in the derivation")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("trace", help="print the derivation of a verdict")
    common(t)
    t.add_argument("--full-trace", action="store_true")
    t.set_defaults(func=cmd_trace)

    ps = sub.add_parser("psat", help="potential satisfiability over a history with unknowns")
    common(ps, "pohistory")
    ps.set_defaults(func=cmd_psat)

    ad = sub.add_parser("adhere", help="adherence: every instantiation satisfies the policy")
    common(ad, "pohistory")
    ad.set_defaults(func=cmd_adhere)

    em = sub.add_parser("emit-constraints", help="print the compiled constraint formula")
    common(em, "pohistory")
    em.add_argument("--smtlib", action="store_true", help="emit an SMT-LIB 2 script")
    em.add_argument("-o", "--output", default=None)
    em.set_defaults(func=cmd_emit)

    ap = sub.add_parser("append", help="validate and append a session to a history file")
    ap.add_argument("history")
    ap.add_argument("session", help='compact text such as {pay(1, "a", 100), negative}, or @FILE')
    ap.add_argument("--partial", action="store_true", help="allow unknowns in the new session")
    ap.add_argument("--policy", default=None, help="take predicate signatures from this policy")
    ap.set_defaults(func=cmd_append)

    g = sub.add_parser("gen-qbf", help="write a policy/history pair encoding a QBF")
    g.add_argument("spec", help='e.g. "A x1. E x2. (x1 | !x2)" or random:N')
    g.add_argument("--trace-like", action="store_true")
    g.add_argument("--out", default="qbf", help="output path prefix")
    g.set_defaults(func=cmd_gen_qbf)

    f = sub.add_parser("fmt", help="pretty-print a policy canonically")
    f.add_argument("policy")
    f.add_argument("-i", "--in-place", action="store_true")
    f.set_defaults(func=cmd_fmt)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_TRUE
    if hasattr(args, "pohistory"):
        args.history = args.pohistory
    try:
        return args.func(args)
    except BudgetExceeded as e:
        msg = str(e)
        print(msg if msg.startswith("unknown") else f"unknown: {msg}", file=sys.stderr)
        return EXIT_UNKNOWN
    except PtltlError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
