"""Compare the compiled and numpy kernel backends.

Each backend runs in its own interpreter, because the backend is chosen once
at import time (``PTLTL_PURE_PYTHON=1`` forces the numpy one).  Two workloads
are timed: the raw kernels on random arrays, and the dp engine on a seller
history checked against the on-time shipping policy.

    python3 benchmarks/bench_kernels.py [--sessions 400] [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, random, sys, timeit
import numpy as np
from ptltl import kernels
from ptltl.core import Event, History, Session
from ptltl.dp import check_dp
from ptltl.parser import parse_policy

sessions, repeat, policy_path = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
rng = np.random.default_rng(0)
a = rng.integers(0, 2, size=(2000, 200), dtype=np.uint8)
b = (rng.random((2000, 200)) < 0.02).astype(np.uint8)
flat = a.ravel()
idx = rng.integers(-1, flat.size, size=200_000).astype(np.intp)
pidx = rng.integers(0, 5000, size=200_000).astype(np.intp)
bidx = rng.integers(0, flat.size, size=200_000).astype(np.intp)

def guard():
    out = np.ones(5000, dtype=np.uint8)
    kernels.guard_reduce(out, flat, pidx, bidx)

def seller(n, per=4):
    r = random.Random(1)
    out = []
    for s in range(n):
        ev = []
        for k in range(per):
            item = f"i{s}_{k}"
            ev.append(Event("pay", (s, item, r.randint(10, 500))))
            ev.append(Event("post", (item, r.randint(0, 10))))
        out.append(Session(ev))
    return History(out)

f = parse_policy(open(policy_path).read()).formula
h = seller(sessions)
best = lambda fn: min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps({
    "backend": kernels.BACKEND,
    "since_scan": best(lambda: kernels.since_scan(a, b)),
    "gather": best(lambda: kernels.gather(flat, idx)),
    "guard_reduce": best(guard),
    "dp": best(lambda: check_dp(h, f)),
}))
"""


def measure(pure: bool, sessions: int, repeat: int, policy: str) -> dict:
    env = dict(os.environ)
    env.pop("PTLTL_PURE_PYTHON", None)
    if pure:
        env["PTLTL_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", CHILD, str(sessions), str(repeat), policy],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None) -> int:
    here = os.path.dirname(os.path.abspath(__file__))
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sessions", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--policy", default=os.path.join(here, "..", "corpus", "ebay_ontime.ptltl"))
    args = ap.parse_args(argv)

    rows = [measure(False, args.sessions, args.repeat, args.policy),
            measure(True, args.sessions, args.repeat, args.policy)]
    if rows[0]["backend"] != "cython":
        print("compiled extension not available; both runs use numpy", file=sys.stderr)
    names = ["since_scan", "gather", "guard_reduce", "dp"]
    print(f"{'workload':<14}" + "".join(f"{r['backend']:>12}" for r in rows) + f"{'speedup':>10}")
    for n in names:
        fast, slow = rows[0][n], rows[1][n]
        print(f"{n:<14}{fast * 1000:>10.2f}ms{slow * 1000:>10.2f}ms{slow / fast:>9.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
