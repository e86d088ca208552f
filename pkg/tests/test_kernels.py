import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptltl import _pykernels, kernels

BACKENDS = [("numpy", _pykernels)]
try:
    from ptltl import _kernels
    BACKENDS.append(("cython", _kernels))
except ImportError:
    pass


def ref_gather(values, idx):
    return np.array([values[k] if k >= 0 else 0 for k in idx], dtype=np.uint8)


def ref_since(a, b):
    n, m = b.shape
    out = np.zeros((n, m), dtype=np.uint8)
    for c in range(m):
        for r in range(n):
            # exists j <= r with b[j] and a[k] for all j < k <= r
            out[r, c] = any(b[j, c] and all(a[k, c] for k in range(j + 1, r + 1)) for j in range(r + 1))
    return out


def ref_guard(out, body, pidx, bidx):
    out = out.copy()
    for p, b in zip(pidx, bidx):
        out[p] = out[p] and body[b]
    return out


tables = st.integers(0, 12).flatmap(lambda n: st.integers(1, 5).flatmap(
    lambda m: st.tuples(
        st.lists(st.integers(0, 1), min_size=n * m, max_size=n * m),
        st.lists(st.integers(0, 1), min_size=n * m, max_size=n * m),
        st.just((n, m)))))


def _arr(bits, shape):
    return np.array(bits, dtype=np.uint8).reshape(shape)


@pytest.mark.parametrize("name, mod", BACKENDS)
@settings(max_examples=150, deadline=None)
@given(tables)
def test_since(name, mod, t):
    a_bits, b_bits, shape = t
    a, b = _arr(a_bits, shape), _arr(b_bits, shape)
    assert np.array_equal(mod.since_scan(a, b), ref_since(a, b))


@pytest.mark.parametrize("name, mod", BACKENDS)
@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=20), st.lists(st.integers(-1, 19), max_size=30))
def test_gather(name, mod, bits, idx):
    values = np.array(bits, dtype=np.uint8)
    idx = np.array([k if k < len(bits) else -1 for k in idx], dtype=np.intp)
    assert np.array_equal(mod.gather(values, idx), ref_gather(values, idx))


@pytest.mark.parametrize("name, mod", BACKENDS)
@settings(max_examples=150, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 10**6))
def test_guard_reduce(name, mod, n, m, seed):
    rng = np.random.default_rng(seed)
    body = rng.integers(0, 2, size=m, dtype=np.uint8)
    out = rng.integers(0, 2, size=n, dtype=np.uint8)
    k = int(rng.integers(0, 3 * n))
    pidx = rng.integers(0, n, size=k).astype(np.intp)
    bidx = rng.integers(0, m, size=k).astype(np.intp)
    want = ref_guard(out, body, pidx, bidx)
    assert mod.guard_reduce(out, body, pidx, bidx) is None
    assert np.array_equal(out, want)


def test_backends_agree_on_large_input():
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, size=(500, 40), dtype=np.uint8)
    b = (rng.random((500, 40)) < 0.05).astype(np.uint8)
    (_, py), (_, cy) = BACKENDS
    assert np.array_equal(py.since_scan(a, b), cy.since_scan(a, b))
    idx = rng.integers(-1, a.size, size=5000).astype(np.intp)
    flat = a.ravel()
    assert np.array_equal(py.gather(flat, idx), cy.gather(flat, idx))
    pidx = rng.integers(0, 300, size=4000).astype(np.intp)
    bidx = rng.integers(0, flat.size, size=4000).astype(np.intp)
    o1, o2 = np.ones(300, dtype=np.uint8), np.ones(300, dtype=np.uint8)
    py.guard_reduce(o1, flat, pidx, bidx)
    cy.guard_reduce(o2, flat, pidx, bidx)
    assert np.array_equal(o1, o2)


def test_empty_tables():
    for _, mod in BACKENDS:
        z = np.zeros((0, 3), dtype=np.uint8)
        assert mod.since_scan(z, z).shape == (0, 3)
        e = np.zeros(0, dtype=np.intp)
        assert mod.gather(np.zeros(0, dtype=np.uint8), e).shape == (0,)
        out = np.ones(2, dtype=np.uint8)
        mod.guard_reduce(out, np.zeros(0, dtype=np.uint8), e, e)
        assert out.tolist() == [1, 1]


def test_backend_names():
    assert kernels.BACKEND in {"numpy", "cython"}
    if len(BACKENDS) == 2 and not os.environ.get("PTLTL_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


def test_environment_forces_fallback():
    env = dict(os.environ, PTLTL_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ptltl.kernels as k; print(k.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


def test_benchmark_script_runs(capsys):
    import importlib.util
    import pathlib
    path = pathlib.Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    assert bench.main(["--sessions", "5", "--repeat", "1"]) == 0
    out = capsys.readouterr().out
    assert "since_scan" in out and "dp" in out
