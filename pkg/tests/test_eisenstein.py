from __future__ import annotations

import json
from fractions import Fraction

import pytest
import sympy

from padic_eisenstein.eisenstein import (
    EisensteinError,
    eis_moments_formal,
    eis_moments_rational,
    formal_setup,
    katz_oracle,
    kummer_congruence_check,
    padic_zeta_value,
    supersingular_integrality_check,
    synthetic_kummer_check,
    tate_katz_moments,
    wp_recursion,
    x_depleted,
    zeta_oracle,
)
from padic_eisenstein.formal import LEMNISCATE, WeierstrassData, elliptic_formal_x, elliptic_group_law
from padic_eisenstein.rings import PAdicRing, bernoulli, vp
from padic_eisenstein.series import TruncationError, TruncSeries, compose

SECOND = WeierstrassData(8, 3)


@pytest.fixture(scope="module")
def lem12():
    return formal_setup(LEMNISCATE, 12)


def wp_oracle(g2, g3, K):
    # Laurent coefficients of wp from the ODE (wp')^2 = 4 wp^3 - g2 wp - g3, solved by sympy
    z = sympy.Symbol("z")
    cs = sympy.symbols(f"c2:{K + 1}")
    wp = z**-2 + sum(c * z ** (2 * i + 2) for i, c in enumerate(cs))
    expr = sympy.expand((sympy.diff(wp, z) ** 2 - 4 * wp**3 + g2 * wp + g3) * z**6)
    sol = {}
    for e in range(4, 2 * K + 1, 2):
        eq = expr.coeff(z, e).subs(sol)
        free = [c for c in cs if c in eq.free_symbols]
        if free:
            sol[free[0]] = sympy.solve(eq, free[0])[0]
    return {int(str(c)[1:]): sol[c] for c in cs if c in sol}


def test_wp_examples():
    L = wp_recursion(4, 0, 10)
    assert L.A(4) == Fraction(1, 15)
    assert L.A(6) == 0
    assert L.A(8) == Fraction(1, 525)
    assert L.A(7) == 0
    with pytest.raises(ValueError):
        L.A(2)


@pytest.mark.parametrize("g2,g3", [(4, 0), (8, 3), (Fraction(1, 12), Fraction(-1, 216))])
def test_wp_against_ode(g2, g3):
    L = wp_recursion(g2, g3, 14)
    want = wp_oracle(sympy.Rational(str(g2)), sympy.Rational(str(g3)), 7)
    for k, v in want.items():
        assert L.c[k] == Fraction(int(v.p), int(v.q))


def test_lemniscatic_symmetry():
    L = wp_recursion(4, 0, 14)
    assert all(L.c[k] == 0 for k in L.c if k % 2)


def test_x_depleted_examples(lem12):
    coords, fg = lem12
    xd = x_depleted(coords, fg, 2)
    assert min(xd.coeffs, default=1) > 0
    assert xd[0] == 0
    neg = compose(xd, TruncSeries({1: -1}, xd.trunc))
    assert neg.agrees(xd, 12)
    add = elliptic_formal_x(WeierstrassData(0, 0), 10)
    xa = x_depleted(add, elliptic_group_law(add, 10), 3)
    assert xa.coeffs == {}


def test_lemniscate_formal_values(lem12):
    coords, fg = lem12
    tab = eis_moments_formal(coords, fg, 2, 12)
    assert tab.value(4) == -6
    assert tab.value(5) == 0
    assert tab.value(8) == -2448
    assert tab.value(2) == 0
    assert {e.system for e in tab.entries} == {"formal-t"}


def test_rational_examples():
    assert eis_moments_rational(4, 0, 2, 8).value(4) == -6
    assert eis_moments_rational(4, 0, 3, 8).value(4) == -32
    assert all(v == 0 for v in eis_moments_rational(8, 3, 1, 12).values().values())
    assert eis_moments_rational(4, 0, 2, 8).value(8) == Fraction(-255 * 5040, 525)


@pytest.mark.parametrize("w", [LEMNISCATE, SECOND])
@pytest.mark.parametrize("n", [2, 3])
def test_cross_oracle(w, n):
    coords, fg = formal_setup(w, 12)
    formal = eis_moments_formal(coords, fg, n, 12).values()
    rational = eis_moments_rational(w.g2, w.g3, n, 12).values()
    assert formal == rational
    assert all(v == 0 for k, v in formal.items() if k % 2)


def test_rational_matches_bernoulli_on_nodal():
    # (1/12, -1/216) degenerates to the multiplicative group: (1 - n^k) zeta(1 - k)
    tab = eis_moments_rational(Fraction(1, 12), Fraction(-1, 216), 2, 10)
    for k in range(4, 11, 2):
        assert tab.value(k) == (1 - 2**k) * (-bernoulli(k) / k)


def test_tate_examples():
    p, K, M = 5, 6, 4
    tab = tate_katz_moments(2, 2, M, p, K)
    assert not tab.value(2).coeffs
    val = tab.value(4)
    R = PAdicRing(p, K)
    assert val[0] == R.coerce(Fraction(-1, 8))
    assert val[1] == R.coerce(-30)
    assert val == katz_oracle(2, 4, M, p, K)


def test_tate_j_up_to_6():
    p, K, M = 7, 5, 6
    tab = tate_katz_moments(3, 6, M, p, K)
    for k in (4, 6, 8):
        assert tab.value(k) == katz_oracle(3, k, M, p, K)
    for k in (3, 5, 7):
        assert not tab.value(k).coeffs


def test_zeta_examples():
    v = padic_zeta_value(5, 2, 6, 6)
    assert v.precision == 6
    assert v.congruent(-781, 6)
    assert zeta_oracle(5, 2, 6) == -781
    assert padic_zeta_value(5, 1, 6, 6).congruent(0, 6)
    assert padic_zeta_value(7, 2, 5, 4).congruent(0, 4)


@pytest.mark.parametrize("p,n,k", [(5, 2, 4), (5, 3, 8), (7, 2, 6), (11, 2, 4)])
def test_zeta_matches_oracle(p, n, k):
    K = 4
    want = zeta_oracle(p, n, k)
    assert padic_zeta_value(p, n, k, K).congruent(PAdicRing(p, K).coerce(want), K)


def test_zeta_degree_error():
    with pytest.raises(TruncationError, match="D >= 125"):
        padic_zeta_value(5, 2, 6, 6, D=40)


def test_preconditions():
    for bad in [(3, 2), (4, 2), (5, 5)]:
        with pytest.raises(EisensteinError):
            padic_zeta_value(*bad, 6, 4)
        with pytest.raises(EisensteinError):
            tate_katz_moments(bad[1], 2, 4, bad[0], 4)
    with pytest.raises(EisensteinError):
        supersingular_integrality_check(13, 2, 8, 4)


def test_kummer():
    r = kummer_congruence_check(5, 2, [(6, 10), (6, 6)], 0, 6)
    assert r["ok"]
    assert all(row["raw"] and row["divided"] for row in r["pairs"])
    r = kummer_congruence_check(7, 2, [(4, 10)], 0, 4)
    assert r["ok"]
    r = kummer_congruence_check(5, 2, [(8, 12)], 0, 6)
    assert r["ok"] and "notice" in r["pairs"][0]
    with pytest.raises(EisensteinError):
        kummer_congruence_check(5, 2, [(6, 8)], 0, 6)
    with pytest.raises(EisensteinError):
        kummer_congruence_check(5, 2, [(6, 10)], 3, 4)


def test_kummer_oracle_agrees():
    # Bernoulli side of the congruence, independent of the measure
    for p, k, k2 in [(5, 6, 10), (7, 4, 10), (5, 4, 8)]:
        a, b = zeta_oracle(p, 2, k), zeta_oracle(p, 2, k2)
        assert vp(a - b, p) >= 1


def test_synthetic_kummer():
    r = synthetic_kummer_check(5, 10, seed=1)
    assert r["ok"] and r["trials"] == 10


def test_supersingular():
    r = supersingular_integrality_check(7, 2, 12, 6)
    assert r["ok"]
    assert vp(2448, 7) == 0
    assert supersingular_integrality_check(11, 2, 8, 4)["ok"]


def test_moment_table_json(lem12):
    coords, fg = lem12
    tab = eis_moments_formal(coords, fg, 2, 6)
    doc = json.loads(json.dumps(tab.to_json()))
    assert doc["curve"] == {"g2": "4", "g3": "0"}
    assert doc["n"] == 2
    assert [e["k"] for e in doc["entries"]] == list(range(2, 7))
    assert doc["entries"][2] == {"k": 4, "value": "-6", "system": "formal-t", "precision": None}
    tate = tate_katz_moments(2, 2, 3, 5, 4).to_json()
    assert tate["curve"] == "tate" and tate["qOrder"] == 3 and tate["p"] == 5
