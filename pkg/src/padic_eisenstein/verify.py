"""Self-verification suites behind ``padic-eisenstein verify``.

Every check is deterministic (fixed seeds) and returns ``(ok, detail)``.
Checks run on a thread pool capped by ``PADIC_EISENSTEIN_THREADS``; results
are reported in declaration order, so output does not depend on scheduling.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import eisenstein as eis
from . import fourier as fo
from . import formal as fm
from . import mahler as ma
from .rings import PAdicRing, PAdicScalar, bernoulli, binomial, divisor_sigma, vp, vp_factorial, zeta_at_negative
from .series import INF, MultiSeries, TruncSeries, compose, invert_unit, reverse

SUITES = ("rings", "series", "formal", "mahler", "fourier", "eisenstein")


def thread_count() -> int:
    raw = os.environ.get("PADIC_EISENSTEIN_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


# --- rings -----------------------------------------------------------------


def _rings_bernoulli():
    known = {0: Fraction(1), 1: Fraction(-1, 2), 2: Fraction(1, 6), 4: Fraction(-1, 30), 12: Fraction(-691, 2730)}
    bad = [k for k, v in known.items() if bernoulli(k) != v]
    return not bad, f"checked B_k for k in {sorted(known)}"


def _rings_legendre():
    rng = random.Random(11)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randrange(300)
        f = 1
        for i in range(2, n + 1):
            f *= i
        if vp_factorial(n, p) != vp(f, p):
            return False, f"v_{p}({n}!) mismatch"
    return True, "200 factorial valuations"


def _rings_padic():
    rng = random.Random(12)
    p, K = 7, 8
    for _ in range(300):
        a = Fraction(rng.randrange(-999, 999), rng.choice([1, 2, 3, 5, 11]))
        b = Fraction(rng.randrange(1, 999), rng.choice([1, 2, 3, 5, 11]))
        x, y = PAdicScalar.from_rational(a, p, K), PAdicScalar.from_rational(b, p, K)
        for got, want in ((x + y, a + b), (x * y, a * b), (x - y, a - b)):
            w = PAdicScalar.from_rational(want, p, K) if want else PAdicScalar(0, p, K)
            if not got.congruent(w, min(got.precision, w.precision)):
                return False, f"{a}, {b}"
    return True, "300 random operand pairs mod 7^8"


def _rings_binomial():
    p, K = 5, 6
    for a in range(-30, 60):
        for n in range(12):
            got = binomial(PAdicScalar(a, p, K), n)
            if (got.value - binomial(a, n)) % p**got.precision:
                return False, f"C({a}, {n})"
    return True, "p-adic binomials agree with integer ones"


# --- series ----------------------------------------------------------------


def _series_reverse():
    D = 24
    f = TruncSeries({1: 1, 2: 1}, INF).truncate(D)
    g = reverse(f)
    cat = [1]
    for n in range(1, D):
        cat.append(cat[-1] * 2 * (2 * n - 1) // (n + 1))
    ok = all(g[n] == (-1) ** (n - 1) * cat[n - 1] for n in range(1, D))
    ok = ok and compose(f, g).truncate(D) == TruncSeries.gen(trunc=D)
    return ok, "reversion of t + t^2 gives signed Catalan numbers"


def _series_inverse():
    rng = random.Random(21)
    ring = PAdicRing(5, 6)
    for _ in range(20):
        f = TruncSeries({0: rng.randrange(1, 5)} | {i: rng.randrange(5**6) for i in range(1, 30)}, 30, ring)
        if f * invert_unit(f) != TruncSeries.one(ring, 30):
            return False, "f * f^-1 != 1"
    return True, "20 unit inverses mod (5^6, t^30)"


def _series_associative():
    rng = random.Random(22)
    for _ in range(20):
        f, g, h = (TruncSeries({i: Fraction(rng.randrange(-9, 9), rng.randrange(1, 5)) for i in range(1, 12)}, 12)
                   for _ in range(3))
        if compose(compose(f, g), h) != compose(f, compose(g, h)):
            return False, "composition is not associative"
    return True, "composition associative on 20 triples"


# --- formal ----------------------------------------------------------------


def _group_axioms(fg, D: int) -> str | None:
    F = fg.law.truncate(D)
    a, b, c = (MultiSeries.variable(i, 3, fg.ring, D) for i in range(3))
    lhs = F.substitute([F.substitute([a, b]), c]).truncate(D)
    rhs = F.substitute([a, F.substitute([b, c])]).truncate(D)
    if not lhs.agrees(rhs, D):
        return "associativity"
    if not F.is_symmetric():
        return "symmetry"
    x = MultiSeries.variable(0, 2, fg.ring, D)
    zero = MultiSeries.constant(0, 2, fg.ring, D)
    if not F.substitute([x, zero]).agrees(x, D):
        return "unit"
    return None


def _formal_laws():
    for name, fg in (("multiplicative", fm.multiplicative_group(14)),
                     ("lemniscate", fm.elliptic_group_law(fm.elliptic_formal_x(fm.LEMNISCATE, 20), 16, 12))):
        bad = _group_axioms(fg, 12)
        if bad:
            return False, f"{name}: {bad}"
    return True, "unit, symmetry, associativity to total degree 12"


def _formal_mult():
    fg = fm.elliptic_group_law(fm.elliptic_formal_x(fm.LEMNISCATE, 24), 20)
    six = fg.mult(6)
    direct = compose(fg.exp, fg.log.scale(6)).truncate(six.trunc)
    if compose(fg.mult(2), fg.mult(3)).truncate(six.trunc) != direct:
        return False, "[6] != [2] o [3]"
    lam = fg.log
    if compose(lam, fg.mult(3)).truncate(lam.trunc) != lam.scale(3).truncate(compose(lam, fg.mult(3)).trunc):
        return False, "log([3] t) != 3 log t"
    return True, "[6] = [2] o [3] and log is additive on [n]"


def _formal_integral():
    x = fm.elliptic_formal_x(fm.LEMNISCATE, 22).x_series
    bad = [e for e, c in x.coeffs.items() if e < 20 and Fraction(c).denominator != 1]
    return not bad, "lemniscate x(t) integral to t^20"


# --- mahler ----------------------------------------------------------------


def _mahler_poly():
    rng = random.Random(31)
    for p in (2, 3, 5, 7, 11):
        for _ in range(10):
            deg = rng.randrange(17)
            coeffs = [rng.randrange(-50, 50) for _ in range(deg + 1)]
            f = ma.SampledFunction.from_polynomial(p, coeffs, 24)
            a = ma.mahler_coeffs(f)
            if any(a[n] for n in range(deg + 1, 25)):
                return False, f"tail nonzero for p={p}"
            for z in range(-5, 40):
                if ma.mahler_reconstruct(a, z) != sum(c * z**i for i, c in enumerate(coeffs)):
                    return False, f"reconstruction at {z}"
    return True, "50 polynomials of degree <= 16"


def _mahler_growth():
    rng = random.Random(32)
    for i in range(60):
        p = rng.choice([2, 3, 5])
        m = rng.randrange(4)
        classes = [rng.randrange(p**6) for _ in range(p**m)]
        a = ma.mahler_coeffs(ma.SampledFunction.locally_constant(p, m, classes, 60))
        if a.check_regularity():
            return False, f"function {i} violates the Amice bound"
    return True, "60 locally constant functions"


# --- fourier ---------------------------------------------------------------


def _fourier_cartier():
    for p, n, k in ((2, 2, 6), (3, 2, 5)):
        rep = fo.level_compatibility_check(p, n, k, trials=10, seed=41)
        if not rep["ok"]:
            return False, f"diagram failure at {(p, n, k)}"
        rng = random.Random(42)
        N = p**n
        for _ in range(10):
            lam = fo.FiniteLevelData(p, n, k, tuple(rng.randrange(p**k) for _ in range(N)))
            mu = fo.FiniteLevelData(p, n, k, tuple(rng.randrange(p**k) for _ in range(N)))
            F = fo.finite_level_transform(lam, "to_function")
            if fo.finite_level_transform(F, "to_measure") != lam:
                return False, "round trip"
            G = fo.finite_level_transform(mu, "to_function")
            if fo.finite_level_transform(fo.finite_convolve(lam, mu), "to_function") != fo.cyclic_mul(F, G):
                return False, "convolution"
    return True, "round trip, convolution and limit diagrams"


def _fourier_hopf():
    rng = random.Random(43)
    p, K, D = 5, 6, 64
    for _ in range(20):
        mu, nu = fo.random_measure(p, D, K, rng), fo.random_measure(p, D, K, rng)
        conv = fo.convolve(mu, nu)
        m1, m2, mc = fo.moments(mu, 8), fo.moments(nu, 8), fo.moments(conv, 8)
        for m in range(9):
            want = sum(binomial(m, i) * m1[i].value * m2[m - i].value for i in range(m + 1))
            if (mc[m].value - want) % p**K:
                return False, f"binomial moment formula at m={m}"
        zmu = fo.apply_coordinate(mu)
        if fo.moments(zmu, 8)[:8] != fo.moments(mu, 9)[1:9]:
            return False, "apply_coordinate shifts moments"
    return True, "20 random measure pairs mod (5^6, t^64)"


# --- eisenstein ------------------------------------------------------------


def _eis_cross():
    for g2, g3 in ((4, 0), (8, 3)):
        coords, fg = eis.formal_setup(fm.WeierstrassData(g2, g3), 12)
        for n in (2, 3):
            a = eis.eis_moments_formal(coords, fg, n, 12).values()
            b = eis.eis_moments_rational(g2, g3, n, 12).values()
            if a != b:
                return False, f"pipelines differ for {(g2, g3)}, n={n}"
    lem = eis.eis_moments_rational(4, 0, 2, 8)
    if lem.value(4) != -6 or lem.value(8) != -2448:
        return False, "lemniscate spot values"
    return True, "formal = rational for two curves, n in {2, 3}, k <= 12"


def _eis_supersingular():
    rep = eis.supersingular_integrality_check(7, 2, 40, 6)
    return rep["ok"], "p = 7, n = 2, k <= 40"


def _eis_tate():
    tab = eis.tate_katz_moments(2, 6, 8, 5, 6)
    for j in (0, 2, 4, 6):
        got = tab.value(j + 2)
        want = (eis.katz_oracle(2, j + 2, 8, 5, 6) if j else TruncSeries.zero(PAdicRing(5, 6), 8))
        if got != want:
            return False, f"j = {j}"
    return True, "q-expansions mod (5^6, q^8) for j in {0, 2, 4, 6}"


def _eis_zeta():
    z = eis.padic_zeta_value(5, 2, 6, 6)
    if not z.congruent(PAdicScalar.from_rational(-781, 5, 6), 5):
        return False, f"zeta value {z}"
    a = eis.kummer_congruence_check(5, 2, [(6, 10), (8, 12)], 0, 6)
    b = eis.kummer_congruence_check(7, 2, [(4, 10)], 0, 6)
    c = eis.synthetic_kummer_check(5, 10, seed=51)
    return a["ok"] and b["ok"] and c["ok"], "zeta value, Kummer pairs, synthetic measures"


def _eis_oracle():
    # one-point calibration of the q-expansion normalization at k = 4
    z4 = zeta_at_negative(4)
    ok = z4 == Fraction(1, 120) and divisor_sigma(3, 6) == 1 + 8 + 27 + 216
    nodal = eis.eis_moments_rational(Fraction(1, 12), Fraction(-1, 216), 2, 8)
    ok = ok and all(nodal.value(k) == (1 - 2**k) * zeta_at_negative(k) for k in (4, 6, 8))
    return ok, "zeta(-3) = 1/120 and the nodal lattice matches the oracle"


CHECKS = {
    "rings": [("bernoulli", _rings_bernoulli), ("legendre", _rings_legendre), ("padic-arith", _rings_padic),
              ("padic-binomial", _rings_binomial)],
    "series": [("reverse", _series_reverse), ("unit-inverse", _series_inverse),
               ("compose-assoc", _series_associative)],
    "formal": [("axioms", _formal_laws), ("multiplication", _formal_mult), ("x-integral", _formal_integral)],
    "mahler": [("polynomial-exact", _mahler_poly), ("amice-growth", _mahler_growth)],
    "fourier": [("cartier", _fourier_cartier), ("hopf-equivariance", _fourier_hopf)],
    "eisenstein": [("oracle-calibration", _eis_oracle), ("cross-oracle", _eis_cross),
                   ("supersingular", _eis_supersingular), ("tate-katz", _eis_tate), ("zeta-kummer", _eis_zeta)],
}


def _run_one(item):
    suite, name, fn = item
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"suite": suite, "check": name, "ok": bool(ok), "detail": detail}


def run_suite(suite: str, threads: int | None = None) -> list[dict]:
    names = SUITES if suite == "all" else (suite,)
    items = []
    for s in names:
        if s not in CHECKS:
            raise ValueError(f"unknown suite {s!r}")
        items += [(s, name, fn) for name, fn in CHECKS[s]]
    threads = thread_count() if threads is None else threads
    if threads <= 1:
        return [_run_one(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_one, items))
