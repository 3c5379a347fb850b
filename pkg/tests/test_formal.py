from __future__ import annotations

import math
import threading
from fractions import Fraction

import pytest
import sympy

from padic_eisenstein.formal import (
    LEMNISCATE,
    IntegralityError,
    WeierstrassData,
    _check_integral,
    additive_group,
    elliptic_formal_x,
    elliptic_group_law,
    invariant_derive,
    multiplicative_group,
    tate_x_series,
)
from padic_eisenstein.rings import QQ, binomial
from padic_eisenstein.series import (
    MultiSeries,
    TruncationError,
    TruncSeries,
    compose,
    univariate_of,
)


@pytest.fixture(scope="module")
def lemniscate():
    coords = elliptic_formal_x(LEMNISCATE, 24)
    return coords, elliptic_group_law(coords, 20)


def test_multiplicative_examples():
    fg = multiplicative_group(10)
    assert fg.mult(2) == TruncSeries({1: 2, 2: 1}, 10)
    assert fg.log == TruncSeries({k: Fraction((-1) ** (k + 1), k) for k in range(1, 10)}, 10)
    t = TruncSeries.gen(trunc=10)
    assert invariant_derive(fg, t, 1) == TruncSeries({0: 1, 1: 1}, 9)
    assert fg.mult(-1) == TruncSeries({k: (-1) ** k for k in range(1, 10)}, 10)


def test_degenerate_curve_is_additive():
    coords = elliptic_formal_x(WeierstrassData(0, 0), 12)
    assert coords.x_series == TruncSeries({-2: 1}, 12)
    fg = elliptic_group_law(coords, 10)
    assert fg.log == TruncSeries.gen(trunc=10)
    assert fg.mult(3) == TruncSeries({1: 3}, 10)


def test_lemniscate_coordinates(lemniscate):
    coords, _ = lemniscate
    D = 24
    assert not coords.residual().truncate(D - 6).coeffs
    x = coords.x_series
    assert all(e % 2 == 0 for e in x.coeffs)
    assert all(Fraction(c).denominator == 1 for e, c in x.coeffs.items() if e < 20)
    # leading terms: u = 1 + t^4 + ... so x = t^-2 + t^2 + ...
    assert x[-2] == 1 and x[2] == 1


def test_second_curve_coordinates():
    coords = elliptic_formal_x(WeierstrassData(8, 3), 20)
    assert not coords.residual().truncate(14).coeffs
    # away from 2 the coefficients are integral
    for c in coords.x_series.coeffs.values():
        den = Fraction(c).denominator
        assert den & (den - 1) == 0


def test_integrality_guard():
    with pytest.raises(IntegralityError):
        _check_integral([(3, Fraction(1, 7))], {2, 3}, "probe")
    _check_integral([(3, Fraction(1, 4))], {2, 3}, "probe")


def test_mult_leading_terms(lemniscate):
    _, fg = lemniscate
    for n in (2, 3, -1, 5):
        assert fg.mult(n)[1] == n
        assert fg.mult(n)[0] == 0


def test_log_additive_on_law(lemniscate):
    _, fg = lemniscate
    D = 12
    F = fg.law
    lam = fg.log.truncate(D)
    x, y = MultiSeries.variable(0, 2, QQ, D), MultiSeries.variable(1, 2, QQ, D)
    lhs = univariate_of(lam, F.truncate(D))
    assert lhs.agrees(univariate_of(lam, x) + univariate_of(lam, y), D)


def test_multiplication_composes(lemniscate):
    _, fg = lemniscate
    assert compose(fg.mult(2), fg.mult(3)).agrees(fg.mult(6), 12)
    assert compose(fg.mult(3), fg.mult(2)).agrees(fg.mult(6), 12)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_log_linear_on_mult(lemniscate, n):
    _, fg = lemniscate
    for law in (fg, multiplicative_group(16)):
        lhs = compose(law.log, law.mult(n))
        assert lhs.agrees(law.log.scale(n), min(lhs.trunc, law.log.trunc))


def test_group_law_axioms_to_degree_8(lemniscate):
    _, fg = lemniscate
    D = 8
    F = fg.law.truncate(D)
    a, b, c = (MultiSeries.variable(i, 3, QQ, D) for i in range(3))
    assert F.substitute([F.substitute([a, b]), c]).agrees(F.substitute([a, F.substitute([b, c])]), D)
    assert F.is_symmetric()
    assert all(Fraction(v).denominator & (Fraction(v).denominator - 1) == 0 for v in F.coeffs.values())


def test_derivation_is_translation_invariant(lemniscate):
    _, fg = lemniscate
    D = 8
    f = TruncSeries({1: 2, 2: -1, 3: 5, 5: Fraction(1, 3), 7: 4}, 12)
    F = fg.law.truncate(D + 1)
    df = invariant_derive(fg, f, 1)
    lhs_inner = univariate_of(f.truncate(D + 1), F)
    factor = MultiSeries.embed(fg.inv_derivation_factor.truncate(D + 1), 1, 2)
    lhs = factor * lhs_inner.partial(1)
    rhs = univariate_of(df.truncate(D), F.truncate(D))
    assert lhs.agrees(rhs, D - 1)


def test_invariant_derive_examples():
    gm = multiplicative_group(12)
    for a in (-3, 0, 2, 7):
        f = TruncSeries({k: binomial(a, k) for k in range(12)}, 12)
        assert invariant_derive(gm, f, 1) == f.truncate(11).scale(a)
    ga = additive_group(12)
    for k in range(1, 8):
        got = invariant_derive(ga, TruncSeries.monomial(k, trunc=12), k)
        assert got[0] == math.factorial(k)
    assert invariant_derive(gm, TruncSeries.one(trunc=5), 1).coeffs == {}


def test_invariant_derive_exhaustion():
    gm = multiplicative_group(6)
    with pytest.raises(TruncationError, match="only 3"):
        invariant_derive(gm, TruncSeries({1: 1}, 4), 6)


def test_mult_cache_threadsafe():
    coords = elliptic_formal_x(LEMNISCATE, 16)
    fg = elliptic_group_law(coords, 14)
    out = []

    def work():
        out.append(fg.mult(7))

    threads = [threading.Thread(target=work) for _ in range(6)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(o is fg.mult_cache[7] for o in out)


def test_tate_q0_specialization():
    coords = tate_x_series(1, 8)
    x = coords.x_series
    assert set(x.coeffs) == {-2, -1}
    assert x[-2] == TruncSeries({0: 1}, 1) and x[-1] == TruncSeries({0: 1}, 1)


def _tate_oracle(M, D):
    q, u, t = sympy.symbols("q u t")
    expr = sum(q**m * u / (1 - q**m * u) ** 2 + q**m / u / (1 - q**m / u) ** 2 - 2 * q**m / (1 - q**m) ** 2
               for m in range(1, M))
    qser = sympy.series(expr, q, 0, M).removeO()
    out = {}
    for k in range(1, M):
        ck = sympy.simplify(qser.coeff(q, k)).subs(u, 1 + t)
        tser = sympy.series(ck, t, 0, D).removeO()
        for e in range(D):
            c = tser.coeff(t, e)
            if c:
                out[(e, k)] = int(c)
    return out


def test_tate_against_brute_force():
    M, D = 4, 6
    x = tate_x_series(M, D).x_series
    want = _tate_oracle(M, D)
    got = {(e, k): int(c) for e, row in x.coeffs.items() if e >= 0 for k, c in row.coeffs.items()}
    assert got == want
    # q^1 t^0 coefficient
    assert got.get((0, 1), 0) == want.get((0, 1), 0) == 0


def test_tate_pole_order_two():
    x = tate_x_series(6, 8).x_series
    assert x.pole_order() == 2
    for e, row in x.coeffs.items():
        if e < 0:
            assert set(row.coeffs) == {0}


def test_tate_weierstrass_model():
    # with the 1/12 shift, q = 0 gives y^2 = 4x^3 - x/12 + 1/216
    coords = tate_x_series(1, 10, weierstrass_constant=True)
    R = coords.ring
    x = coords.x_series.map(lambda c: c[0], QQ)
    y = coords.y_series.map(lambda c: c[0], QQ)
    res = y * y - (x * x * x).scale(4) + x.scale(Fraction(1, 12)) - Fraction(1, 216)
    assert not res.truncate(res.trunc).coeffs
    assert R.M == 1
