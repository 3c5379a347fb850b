from __future__ import annotations

import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_eisenstein.fourier import (
    AmiceMeasure,
    FiniteLevelData,
    UncertifiableError,
    apply_coordinate,
    convolve,
    cyclic_mul,
    dirac,
    evaluate,
    finite_convolve,
    finite_level_transform,
    growth_profile,
    level_compatibility_check,
    measure_from_json,
    moment,
    moments,
    negate,
    pascal_matrix,
    random_measure,
    restrict_units,
    zero_measure,
)
from padic_eisenstein.mahler import MahlerCoeffs, SampledFunction, mahler_coeffs
from padic_eisenstein.rings import PAdicRing, PAdicScalar, binomial
from padic_eisenstein.series import INF, TruncationError, TruncSeries, derive


def poly_mahler(p, coeffs, N=None):
    N = N if N is not None else len(coeffs) + 2
    return mahler_coeffs(SampledFunction.from_polynomial(p, coeffs, N))


def test_dirac_examples():
    assert dirac(5, 0, 6).series == TruncSeries({0: 1}, 6)
    assert dirac(5, 2, 6).series == TruncSeries({0: 1, 1: 2, 2: 1}, 6)
    assert dirac(5, -1, 6).series == TruncSeries({n: (-1) ** n for n in range(6)}, 6)
    m = dirac(5, PAdicScalar(7, 5, 4), 4)
    assert m.series.coeffs == {n: binomial(7, n) % 625 for n in range(4)}


def test_dirac_padic_precision_loss():
    m = dirac(5, PAdicScalar(3, 5, 2), 6)
    # C(a, 5) divides by 5 once
    assert m.K == 1


def test_evaluate_examples():
    z2 = poly_mahler(3, [0, 0, 1])
    assert evaluate(dirac(3, 3, 10), z2).value == 9
    assert evaluate(dirac(3, -1, 10), z2).value == 1
    mu = AmiceMeasure(5, TruncSeries({1: 1}, 10))
    rng = random.Random(1)
    for _ in range(10):
        cs = [rng.randrange(-9, 9) for _ in range(5)]
        f = lambda z: sum(c * z**i for i, c in enumerate(cs))
        assert evaluate(mu, poly_mahler(5, cs)).value == f(1) - f(0)


def test_evaluate_uncertifiable():
    f = MahlerCoeffs(5, tuple(range(1, 9)), None, complete=False)
    with pytest.raises(UncertifiableError, match="uncertifiable tail"):
        evaluate(dirac(5, 2, 20, 4), f)


def test_evaluate_certified_tail():
    f = mahler_coeffs(SampledFunction.locally_constant(5, 1, [1, 0, 0, 0, 0], 130))
    got = evaluate(dirac(5, 3, 130, 6), f)
    assert got.precision == 6
    assert got.value.congruent(0, 6)
    got = evaluate(dirac(5, 10, 130, 6), f)
    assert got.value.congruent(1, 6)


def test_short_tail_lowers_precision():
    f = mahler_coeffs(SampledFunction.locally_constant(5, 1, [1, 0, 0, 0, 0], 40))
    assert evaluate(dirac(5, 3, 40, 6), f).precision == 1


def test_evaluate_polynomial_has_no_tail():
    mu = random_measure(7, 30, 5, random.Random(2))
    cs = [3, -1, 4, 1, 5]
    a = poly_mahler(7, cs, 10)
    got = evaluate(mu, a)
    want = sum(a.coeffs[n] * mu.series.coeffs.get(n, 0) for n in range(5)) % 7**5
    assert got.value.value == want and got.precision == 5


def test_convolve_examples():
    assert convolve(dirac(3, 2, 8), dirac(3, 3, 8)).series == dirac(3, 5, 8).series
    mu = random_measure(3, 8, 4, random.Random(3))
    assert convolve(mu, dirac(3, 0, INF, 4)).series == mu.series


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_convolution_binomial_moments(seed):
    rng = random.Random(seed)
    mu, nu = random_measure(5, 12, 6, rng), random_measure(5, 12, 6, rng)
    a, b = moments(mu, 8), moments(nu, 8)
    c = moments(convolve(mu, nu), 8)
    mod = 5**6
    for m in range(9):
        want = sum(binomial(m, i) * a[i].value * b[m - i].value for i in range(m + 1))
        assert (c[m].value - want) % mod == 0


def test_apply_coordinate_examples():
    for a in (-2, 0, 3, 7):
        got = apply_coordinate(dirac(5, a, 10)).series
        assert got.agrees(dirac(5, a, 10).series.scale(a), 9)
    assert not apply_coordinate(dirac(5, 0, 10)).series.coeffs
    mu = AmiceMeasure(3, TruncSeries({1: 1}, 10))
    zm = apply_coordinate(mu)
    assert zm.series == TruncSeries({0: 1, 1: 1}, 9)
    for k in range(8):
        assert moment(zm, k) == moment(mu, k + 1)


def test_equivariance_literal():
    rng = random.Random(4)
    for _ in range(10):
        mu = random_measure(7, 15, 4, rng)
        F = mu.series
        assert apply_coordinate(mu).series == TruncSeries({0: 1, 1: 1}, INF, F.ring) * derive(F)


def test_moment_examples():
    for a in (-3, 2, 5):
        mu = dirac(7, a, 12)
        assert [moment(mu, k) for k in range(10)] == [a**k for k in range(10)]
    mu = AmiceMeasure(7, TruncSeries({1: 1}, 12))
    assert [moment(mu, k) for k in range(8)] == [0] + [1] * 7
    assert all(v.value == 0 for v in moments(zero_measure(7, 10, 3), 9))
    with pytest.raises(TruncationError):
        moment(dirac(7, 2, 5), 5)


def test_moment_matches_evaluate():
    mu = random_measure(5, 20, 6, random.Random(5))
    for k in range(10):
        f = poly_mahler(5, [0] * k + [1])
        assert moment(mu, k).value == evaluate(mu, f).value.value
    assert moment(mu, 0).value == mu.series[0]


def test_restrict_units_examples():
    p, K = 5, 6
    D = 125
    got = restrict_units(dirac(p, 3, D, K), [0, 1, 2, 5], K)
    for k, c in zip([0, 1, 2, 5], got):
        assert c.precision == K
        assert c.value.congruent(3**k, K)
    for c in restrict_units(dirac(p, p, D, K), [1, 2, 3], K):
        assert c.value.congruent(0, c.precision)
    (c,) = restrict_units(AmiceMeasure(2, TruncSeries({1: 1}, INF)), [1], 4)
    assert c.value == 1


def test_restrict_units_needs_degree():
    with pytest.raises(TruncationError, match="D >= 125"):
        restrict_units(dirac(5, 3, 60, 6), [2], 6)


def test_restrict_units_random_oracle():
    # finitely supported measure: unit moments by direct summation
    p, K = 3, 5
    weights = {a: random.Random(a).randrange(10) for a in range(12)}
    series = TruncSeries({}, INF)
    for a, w in weights.items():
        series = series + TruncSeries({n: w * binomial(a, n) for n in range(a + 1)}, INF)
    mu = AmiceMeasure(p, series)
    got = restrict_units(mu, [1, 2, 3], K)
    for k, c in zip([1, 2, 3], got):
        assert c.value == sum(w * a**k for a, w in weights.items() if a % p)


def test_finite_level_examples():
    out = finite_level_transform(FiniteLevelData(2, 1, 4, (3, 5)), "to_function")
    assert out.values == (8, 5) and out.kind == "function"
    assert pascal_matrix(3) == [[1, 1, 1], [0, 1, 2], [0, 0, 1]]
    # rows of [C(a, j)] indexed by a
    assert [list(r) for r in zip(*pascal_matrix(3))] == [[1, 0, 0], [1, 1, 0], [1, 2, 1]]
    with pytest.raises(ValueError):
        FiniteLevelData(3, 1, 2, (1, 2))


def test_finite_level_round_trip():
    rng = random.Random(6)
    for _ in range(50):
        v = FiniteLevelData(3, 2, 5, tuple(rng.randrange(3**5) for _ in range(9)))
        f = finite_level_transform(v, "to_function")
        assert finite_level_transform(f, "to_measure") == v


def test_pascal_inverse_entries():
    N = 9
    P = pascal_matrix(N)
    inv = [[(-1) ** (a + j) * binomial(a, j) for a in range(N)] for j in range(N)]
    prod = [[sum(P[i][m] * inv[m][j] for m in range(N)) for j in range(N)] for i in range(N)]
    assert prod == [[int(i == j) for j in range(N)] for i in range(N)]


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1)])
def test_convolution_intertwines_exhaustive(p, n):
    N, k = p**n, 2
    mod = p**k
    import itertools
    vecs = list(itertools.product(range(mod), repeat=N)) if N <= 3 else [
        tuple(random.Random(i).randrange(mod) for _ in range(N)) for i in range(200)]
    basis = [tuple(int(i == j) for j in range(N)) for i in range(N)]
    for x in vecs[:80]:
        for y in basis + vecs[:10]:
            X, Y = FiniteLevelData(p, n, k, x), FiniteLevelData(p, n, k, y)
            lhs = finite_level_transform(finite_convolve(X, Y), "to_function")
            rhs = cyclic_mul(finite_level_transform(X, "to_function"), finite_level_transform(Y, "to_function"))
            assert lhs == rhs


def test_level_compatibility():
    r = level_compatibility_check(2, 1, 3)
    assert r["ok"] and r["failures"] == []
    r = level_compatibility_check(3, 1, 4, trials=20)
    assert r["ok"] and r["checked"] > 40
    with pytest.raises(ValueError):
        level_compatibility_check(3, 0, 4)


def test_growth_profile_examples():
    R = PAdicRing(5, 30)
    g = growth_profile(TruncSeries({n: 1 for n in range(40)}, 40, R))
    assert g.bounded and g.slope == 0 and g.distribution_compatible
    F = TruncSeries({n: math.factorial(n) for n in range(400)}, 400)
    g = growth_profile(F, p=5)
    assert g.bounded
    assert abs(g.slope - 1 / 4) < 0.03
    F = TruncSeries({n: Fraction(1, 5**n) for n in range(30)}, 30)
    g = growth_profile(F, p=5)
    assert g.slope == -1 and not g.distribution_compatible and not g.bounded


def test_antipode():
    p, K, D = 5, 6, 12
    for a in (0, 3, 11):
        got = negate(dirac(p, a, D, K)).series
        assert got == dirac(p, -a, D, K).series
    rng = random.Random(7)
    mu = random_measure(p, D, K, rng)
    neg = negate(mu)
    ms, ns = moments(mu, D - 1), moments(neg, D - 1)
    for k in range(D):
        assert (ns[k].value - (-1) ** k * ms[k].value) % p**K == 0


def test_measure_json_round_trip():
    mu = random_measure(7, 10, 3, random.Random(8))
    doc = json.loads(json.dumps(mu.to_json()))
    assert doc["p"] == 7 and doc["K"] == 3 and doc["norm_exponent"] == 0
    back = measure_from_json(doc)
    assert back == mu
    rat = dirac(7, -2, 6)
    assert measure_from_json(rat.to_json()) == rat
