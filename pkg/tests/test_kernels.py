import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zipfcode import _pykernels, kernels

from conftest import brute_force_strings, brute_force_tau_b


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_nonsingular_lengths_vs_enumeration(backend):
    for n in (2, 3, 4, 5):
        strings = brute_force_strings("abcde"[:n], 6)[:3000]
        got = kernels.nonsingular_lengths(np.arange(1, len(strings) + 1), n)
        assert got.tolist() == [len(s) for s in strings]


def test_kendall_counts_tau(backend, rng):
    for _ in range(50):
        n = int(rng.integers(2, 40))
        x = rng.integers(0, 5, n).astype(float)
        y = rng.integers(0, 5, n).astype(float)
        s, n0, tx, ty = kernels.kendall_counts(x, y)
        if n0 == tx or n0 == ty:
            continue
        tau = s / np.sqrt(n0 - tx) / np.sqrt(n0 - ty)
        assert tau == pytest.approx(brute_force_tau_b(x, y), abs=1e-12)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=200))
def test_backends_agree(pairs):
    from zipfcode import _ckernels

    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    assert _ckernels.kendall_counts(x, y) == _pykernels.kendall_counts(x, y)
    ranks = np.arange(1, len(pairs) * 50 + 1)
    for n in (2, 7, 26):
        np.testing.assert_array_equal(
            _ckernels.nonsingular_lengths(ranks, n), _pykernels.nonsingular_lengths(ranks, n)
        )


def test_environment_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ZIPFCODE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import zipfcode; print(zipfcode.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
