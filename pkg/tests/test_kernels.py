import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from breather import _kernels_py as ref
from breather import kernels

try:
    from breather import _kernels as ext
except ImportError:  # extension not built
    ext = None

needs_ext = pytest.mark.skipif(ext is None, reason="compiled kernels not built")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    if ext is not None:
        assert kernels.BACKEND == "cython"


def test_env_forces_python():
    code = "import breather.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, BREATHER_KERNELS="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_cos_mul_batch_reference():
    a = np.array([[0.0, 1.0]])
    assert np.allclose(ref.cos_mul_batch(a, a), [[0.5, 0.0, 0.5]])


def test_scans_reference():
    f = np.arange(5.0)
    y = ref.scan_exp_forward(f, 0.5, 1.0, 2.0, 1.0)
    assert y[0] == 1.0 and y[1] == 0.5 * 1.0 + 0.0 + 2.0
    z = ref.scan_exp_backward(f, 0.5, 1.0, 2.0, 3.0)
    assert z[-1] == 3.0 and z[-2] == 0.5 * 3.0 - (3.0 + 8.0)


arrays = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.floats(-2, 2), min_size=n * 4, max_size=n * 4),
    st.lists(st.floats(-2, 2), min_size=n * 3, max_size=n * 3),
    st.just(n)))


@needs_ext
@settings(max_examples=50, deadline=None)
@given(arrays)
def test_cos_mul_parity(data):
    a, b, n = data
    A, B = np.array(a).reshape(n, 4), np.array(b).reshape(n, 3)
    assert np.array_equal(ext.cos_mul_batch(A, B), ref.cos_mul_batch(A, B))


@needs_ext
def test_scan_parity():
    rng = np.random.default_rng(1)
    f = rng.normal(size=501)
    assert np.array_equal(ext.scan_exp_forward(f, 0.99, 0.1, 0.2, 0.3), ref.scan_exp_forward(f, 0.99, 0.1, 0.2, 0.3))
    assert np.array_equal(ext.scan_exp_backward(f, 0.99, 0.1, 0.2, 0.3), ref.scan_exp_backward(f, 0.99, 0.1, 0.2, 0.3))
    F = rng.normal(size=(4, 301))
    R = rng.normal(size=(4, 2, 2)) * 0.5
    p0, p1, tail = rng.normal(size=(4, 2)), rng.normal(size=(4, 2)), rng.normal(size=(4, 2))
    assert np.array_equal(ext.scan_rot_backward(F, R, p0, p1, tail), ref.scan_rot_backward(F, R, p0, p1, tail))


@needs_ext
def test_solver_identical_across_backends(monkeypatch):
    from breather import hs_solver
    from breather.hs_solver import GOdd, SolverConfig, solve_fixed_point

    cfg = SolverConfig(N=400)
    g = GOdd.preset("sinh")
    T1, _ = solve_fixed_point(g, cfg)
    for name in ("cos_mul_batch", "scan_exp_forward", "scan_exp_backward", "scan_rot_backward"):
        monkeypatch.setattr(hs_solver.kernels, name, getattr(ref, name))
    T2, _ = solve_fixed_point(g, cfg)
    assert T1.dump() == T2.dump()
