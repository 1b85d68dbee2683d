"""Compiled and pure-Python kernels must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from genk import _kernels_py, kernels

compiled = pytest.importorskip("genk._kernels")
BACKENDS = [_kernels_py, compiled]


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_backends_agree(rng, m):
    n = 1 << m
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = rng.standard_normal(m) + 0j
    w = [k.wedge(a, b, m) for k in BACKENDS]
    c = [k.contract(x, a, m) for k in BACKENDS]
    M = [k.wedge_matrix(a, m) for k in BACKENDS]
    assert np.allclose(w[0], w[1], atol=1e-13)
    assert np.allclose(c[0], c[1], atol=1e-13)
    assert np.allclose(M[0], M[1], atol=1e-13)
    for i in range(m):
        assert np.array_equal(_kernels_py.contraction_matrix(i, m), compiled.contraction_matrix(i, m))


def test_signs_agree():
    for a in range(32):
        for b in range(32):
            assert _kernels_py.wedge_sign(a, b) == compiled.wedge_sign(a, b)
        for i in range(5):
            assert _kernels_py.contract_sign(i, a) == compiled.contract_sign(i, a)


def test_default_backend_is_compiled():
    if os.environ.get("GENK_PURE_PYTHON"):
        pytest.skip("pure Python forced")
    assert kernels.BACKEND == "cython"


def test_env_var_selects_python_fallback():
    code = "from genk import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, GENK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_exact_inputs_take_python_path():
    from fractions import Fraction

    a = np.array([Fraction(1, 2)] + [Fraction(0)] * 15, dtype=object)
    b = np.array([Fraction(0), Fraction(1, 3)] + [Fraction(0)] * 14, dtype=object)
    out = kernels.wedge(a, b, 4)
    assert out[1] == Fraction(1, 6)


def test_benchmark_smoke(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--dims", "4", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "wedge_matrix" in out
