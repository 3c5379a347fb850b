from __future__ import annotations

import math
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_eisenstein import _fallback, kernels
from padic_eisenstein.rings import binomial

try:
    from padic_eisenstein import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

mods = st.sampled_from([2**5, 3**7, 5**6, 7**8, 11**4, 2**31 - 1])
vec = st.lists(st.integers(0, 10**9), min_size=1, max_size=40)


def stirling2(k, i):
    return sum((-1) ** (i - j) * binomial(i, j) * j**k for j in range(i + 1)) // math.factorial(i)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    forced = os.environ.get("PADIC_EISENSTEIN_PURE", "") in ("1", "true", "yes")
    if compiled is not None:
        assert kernels.BACKEND == ("python" if forced else "cython")


def test_pure_env_forces_fallback():
    env = dict(os.environ, PADIC_EISENSTEIN_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from padic_eisenstein import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=80, deadline=None)
@given(vec, vec, st.integers(1, 50), mods)
def test_fallback_mul_matches_naive(a, b, n, mod):
    want = [0] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                want[i + j] += x * y
    assert _fallback.mul_trunc(a, b, n, mod) == [w % mod for w in want]


@settings(max_examples=60, deadline=None)
@given(vec, st.integers(1, 30), st.sampled_from([3**7, 5**6, 7**5]))
def test_fallback_inverse(a, n, mod):
    a = [1 + a[0] * 105] + a[1:]
    inv = _fallback.inv_trunc(a, n, mod, pow(a[0], -1, mod))
    prod = _fallback.mul_trunc(a, inv, n, mod)
    assert prod == [1] + [0] * (n - 1)


@settings(max_examples=60, deadline=None)
@given(vec, mods)
def test_fallback_pascal(v, mod):
    N = len(v)
    want = [sum(binomial(a, j) * v[a] for a in range(N)) % mod for j in range(N)]
    assert _fallback.pascal_apply(v, mod) == want
    assert _fallback.pascal_inverse_apply(want, mod) == [x % mod for x in v]


@settings(max_examples=60, deadline=None)
@given(vec, mods)
def test_fallback_forward_differences(v, mod):
    N = len(v)
    want = [sum((-1) ** (n - j) * binomial(n, j) * v[j] for j in range(n + 1)) % mod for n in range(N)]
    assert _fallback.forward_differences(v, mod) == want


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=15), mods)
def test_fallback_theta(a, mod):
    jmax = len(a) - 1
    want = [sum(math.factorial(i) * stirling2(k, i) * a[i] for i in range(k + 1)) % mod for k in range(jmax + 1)]
    assert _fallback.theta_values(a, jmax, mod) == want


@needs_compiled
@settings(max_examples=150, deadline=None)
@given(vec, vec, st.integers(1, 60), mods)
def test_parity_mul(a, b, n, mod):
    a = [x % mod for x in a]
    b = [x % mod for x in b]
    assert compiled.mul_trunc(a, b, n, mod) == _fallback.mul_trunc(a, b, n, mod)


@needs_compiled
@settings(max_examples=100, deadline=None)
@given(vec, st.integers(1, 40), st.sampled_from([3**7, 5**6, 7**5, 11**4]))
def test_parity_inverse(a, n, mod):
    a = [(1 + a[0] * 1155) % mod] + [x % mod for x in a[1:]]
    inv0 = pow(a[0], -1, mod)
    assert compiled.inv_trunc(a, n, mod, inv0) == _fallback.inv_trunc(a, n, mod, inv0)


@needs_compiled
@settings(max_examples=100, deadline=None)
@given(vec, mods)
def test_parity_linear_kernels(v, mod):
    v = [x % mod for x in v]
    for name in ("pascal_apply", "pascal_inverse_apply", "forward_differences"):
        assert getattr(compiled, name)(v, mod) == getattr(_fallback, name)(v, mod)
    assert compiled.theta_values(v, len(v) - 1, mod) == _fallback.theta_values(v, len(v) - 1, mod)


def test_large_modulus_uses_python():
    big = 5**40
    a = [big - 1, 3, 7]
    assert kernels.mul_trunc(a, a, 3, big) == _fallback.mul_trunc(a, a, 3, big)
