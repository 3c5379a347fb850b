"""Eisenstein moments from the Weierstrass x-coordinate.

Two independent routes lead to the same numbers.  The Laurent side expands
``wp(z) = z^-2 + sum_k (k-1) A_k z^(k-2)`` and reads off
``(1 - n^k) (k-1)! A_k``.  The formal side forms ``x^(n) = x - n^2 [n]^* x``
in the formal parameter t and applies the invariant derivation k-2 times
at t = 0.  On the Tate curve the formal group is multiplicative and the
moments become q-expansions of Eisenstein series; restricting the q = 0
measure to Z_p^x produces p-adic zeta values.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .formal import (
    LEMNISCATE,
    EllipticFormalCoordinates,
    FormalGroupLaw,
    WeierstrassData,
    elliptic_formal_x,
    elliptic_group_law,
    invariant_derive,
    multiplicative_group,
    tate_x_series,
)
from .fourier import AmiceMeasure, moment, random_measure, restrict_units
from .mahler import amice_tail_bound
from .rings import QQ, PAdicRing, PAdicScalar, divisor_sigma, is_prime, vp, zeta_at_negative
from .series import INF, QSeriesRing, SeriesError, TruncationError, TruncSeries, compose

__all__ = [
    "EisensteinError",
    "LatticeEisenstein",
    "MomentEntry",
    "MomentTable",
    "wp_recursion",
    "x_depleted",
    "formal_setup",
    "eis_moments_formal",
    "eis_moments_rational",
    "tate_katz_moments",
    "katz_oracle",
    "padic_zeta_value",
    "zeta_oracle",
    "kummer_congruence_check",
    "synthetic_kummer_check",
    "supersingular_integrality_check",
]


class EisensteinError(ValueError):
    """A violated precondition of a p-adic Eisenstein entry point."""


def _require_prime(p: int, n: int | None = None) -> None:
    if not is_prime(p):
        raise EisensteinError(f"{p} is not prime")
    if p <= 3:
        raise EisensteinError(f"p > 3 is required, got p = {p}")
    if n is not None and n % p == 0:
        raise EisensteinError(f"p must not divide n (p = {p}, n = {n})")


@dataclass(frozen=True)
class LatticeEisenstein:
    g2: Fraction
    g3: Fraction
    c: dict

    def A(self, k: int) -> Fraction:
        """A_k; zero for odd k."""
        if k < 3:
            raise ValueError("A_k is only defined for k >= 3")
        if k % 2:
            return Fraction(0)
        m = k // 2
        if m not in self.c:
            raise ValueError(f"A_{k} needs the recursion to c_{m}")
        return self.c[m] / (k - 1)

    @property
    def k_max(self) -> int:
        return 2 * max(self.c)


def wp_recursion(g2, g3, k_max: int) -> LatticeEisenstein:
    """c_2 = g2/20, c_3 = g3/28, c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m}."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    g2, g3 = Fraction(g2), Fraction(g3)
    top = max(3, k_max // 2)
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, top + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = Fraction(3, (2 * k + 1) * (k - 3)) * s
    return LatticeEisenstein(g2, g3, c)


@dataclass(frozen=True)
class MomentEntry:
    k: int
    value: object
    system: str
    ring: str
    precision: int | None
    truncation: dict = field(default_factory=dict)

    @property
    def j(self) -> int:
        return self.k - 2


@dataclass
class MomentTable:
    curve: object
    n: int
    entries: list
    p: int | None = None
    K: int | None = None
    q_order: int | None = None
    ring: object = QQ

    def value(self, k: int):
        for e in self.entries:
            if e.k == k:
                return e.value
        raise KeyError(k)

    def values(self) -> dict:
        return {e.k: e.value for e in self.entries}

    def entry_json(self, e: MomentEntry) -> dict:
        return {"k": e.k, "value": self.ring.to_json(e.value), "system": e.system, "precision": e.precision}

    def to_json(self) -> dict:
        doc = {"curve": self.curve, "n": self.n}
        if self.p is not None:
            doc["p"] = self.p
        if self.K is not None:
            doc["K"] = self.K
        if self.q_order is not None:
            doc["qOrder"] = self.q_order
        doc["entries"] = [self.entry_json(e) for e in sorted(self.entries, key=lambda e: e.k)]
        return doc

    def value_text(self, e: MomentEntry) -> str:
        if isinstance(self.ring, PAdicRing):
            return f"{e.value % self.ring.modulus} + O({self.p}^{e.precision})"
        if isinstance(self.ring, QSeriesRing):
            return f"{self.ring.to_str(e.value)} + O({self.p}^{e.precision})"
        return self.ring.to_str(e.value)


def _curve_doc(curve: WeierstrassData | None) -> object:
    if curve is None:
        return "tate"
    return {"g2": QQ.to_str(curve.g2), "g3": QQ.to_str(curve.g3)}


# ---------------------------------------------------------------------------
# formal side


def formal_setup(w: WeierstrassData, k_max: int) -> tuple[EllipticFormalCoordinates, FormalGroupLaw]:
    """Coordinates and group law with enough precision for moments up to k_max."""
    D = max(k_max, 4) + 4
    coords = elliptic_formal_x(w, D + 2)
    fg = elliptic_group_law(coords, D + 4)
    return coords, fg


def x_depleted(coords: EllipticFormalCoordinates, fg: FormalGroupLaw, n: int, D=None, ring=None) -> TruncSeries:
    """x(t) - n^2 x([n](t)); a power series with vanishing constant term.

    If ``ring`` is given, x and [n] are reduced into it before composing.
    """
    if n == 0:
        raise EisensteinError("n must be nonzero")
    x = coords.x_series
    mult = fg.mult(n)
    if ring is not None and ring != x.ring:
        x = x.change_ring(ring)
    R = x.ring
    if mult.ring != R:
        mult = mult.change_ring(R)
    xn = compose(x, mult)
    res = x - xn.scale(R.coerce(n * n))
    if D is not None:
        if res.trunc < D:
            raise TruncationError(f"x^(n) is only known to t^{res.trunc}, asked for t^{D}")
        res = res.truncate(D)
    for e, c in res.coeffs.items():
        if e < 0:
            raise SeriesError(f"residual pole: coefficient of t^{e} is {R.to_str(c)}")
    c0 = res.coeffs.get(0)
    if c0 is not None and not R.is_zero(c0):
        raise SeriesError(f"x^(n) has nonzero constant term {R.to_str(c0)}")
    return res


def _derivation_values(fg: FormalGroupLaw, f: TruncSeries, j_max: int) -> list:
    """Constant terms of d^j f for j = 0..j_max."""
    if f.trunc != INF and f.trunc < j_max + 1:
        raise TruncationError(
            f"insufficient series order: known to t^{f.trunc}, achievable k_max = {int(f.trunc) + 1}")
    out = []
    g = f
    R = f.ring
    for j in range(j_max + 1):
        if j:
            g = invariant_derive(fg, g, 1)
        out.append(g.coeffs.get(0, R.zero))
    return out


def eis_moments_formal(coords: EllipticFormalCoordinates, fg: FormalGroupLaw, n: int, k_max: int,
                       ring=None) -> MomentTable:
    """Entry k is d^(k-2) x^(n) at t = 0, for 2 <= k <= k_max."""
    curve = coords.curve
    if curve is not None and curve.discriminant == 0 and (curve.g2, curve.g3) != (0, 0):
        raise EisensteinError("the elliptic moment pipeline needs a nonsingular curve")
    xd = x_depleted(coords, fg, n, ring=ring)
    if xd.trunc != INF and xd.trunc < k_max - 1:
        raise TruncationError(
            f"insufficient series order: known to t^{xd.trunc}, achievable k_max = {int(xd.trunc) + 1}")
    R = xd.ring
    vals = _derivation_values(fg, xd, k_max - 2)
    if isinstance(R, PAdicRing):
        prec, tag, p, K = R.K, R.tag, R.p, R.K
    else:
        prec, tag, p, K = None, R.tag, None, None
    entries = [MomentEntry(j + 2, v, "formal-t", tag, prec, {"t": int(xd.trunc)}) for j, v in enumerate(vals)]
    return MomentTable(_curve_doc(curve), n, entries, p, K, None, R)


def eis_moments_rational(g2, g3, n: int, k_max: int) -> MomentTable:
    """Entry k is (1 - n^k) (k-1)! A_k; entry 2 is 0."""
    lat = wp_recursion(g2, g3, k_max)
    entries = [MomentEntry(2, Fraction(0), "laurent-z", "QQ", None, {"z": k_max})]
    for k in range(3, k_max + 1):
        v = (1 - n**k) * math.factorial(k - 1) * lat.A(k)
        entries.append(MomentEntry(k, v, "laurent-z", "QQ", None, {"z": k_max}))
    return MomentTable(_curve_doc(WeierstrassData(g2, g3)), n, entries)


# ---------------------------------------------------------------------------
# Tate curve


def tate_katz_moments(n: int, j_max: int, M: int, p: int, K: int) -> MomentTable:
    """Entry at j (stored as k = j + 2) is ((1+t) d/dt)^j x^(n)(t, q) at t = 0, mod (p^K, q^M)."""
    _require_prime(p, n)
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    base = PAdicRing(p, K)
    R = QSeriesRing(base, M)
    D = j_max + 2
    coords = tate_x_series(M, D + 3, base, weierstrass_constant=True)
    fg = multiplicative_group(D + 6)
    xd = x_depleted(coords, fg, n, D)
    mu = AmiceMeasure(p, xd)
    entries = [MomentEntry(j + 2, moment(mu, j), "tate-q", R.tag, K, {"t": D, "q": M}) for j in range(j_max + 1)]
    return MomentTable("tate", n, entries, p, K, M, R)


def katz_oracle(n: int, k: int, M: int, p: int | None = None, K: int | None = None) -> TruncSeries:
    """(1 - n^k)(zeta(1-k) + 2 sum_{m<M} sigma_{k-1}(m) q^m)."""
    coeffs = {0: zeta_at_negative(k)}
    for m in range(1, M):
        coeffs[m] = 2 * divisor_sigma(k - 1, m)
    f = TruncSeries(coeffs, M).scale(1 - n**k)
    if p is not None:
        f = f.change_ring(PAdicRing(p, K))
    return f


def zeta_oracle(p: int, n: int, k: int) -> Fraction:
    """(1 - n^k)(1 - p^(k-1)) zeta(1 - k); zero for odd k."""
    if k % 2:
        return Fraction(0)
    return (1 - n**k) * (1 - p ** (k - 1)) * zeta_at_negative(k)


def _cusp_measure(p: int, n: int, K: int, D: int) -> AmiceMeasure:
    """The q = 0 specialization of x^(n), an integral measure on Z_p."""
    ring = PAdicRing(p, K)
    x = TruncSeries({-2: 1, -1: 1, 0: Fraction(1, 12)}, INF, ring)
    fg = multiplicative_group(D + 4, ring=QQ)
    mult = fg.mult(n).change_ring(ring).truncate(D + 3)
    res = x - compose(x, mult).scale(ring.coerce(n * n))
    res = res.truncate(D)
    if any(e < 0 for e in res.coeffs) or res.coeffs.get(0, 0):
        raise SeriesError("q = 0 specialization of x^(n) is not a measure")
    return AmiceMeasure(p, res, 0, {"n": n})


def padic_zeta_value(p: int, n: int, k: int, K: int, D: int | None = None) -> PAdicScalar:
    """Unit-restricted moment of index k - 2 of the cusp measure."""
    _require_prime(p, n)
    if k < 3:
        raise ValueError("k must be at least 3")
    need = amice_tail_bound(p, 1, 0, K)
    D = max(need, k) if D is None else D
    if D < need or D < k:
        raise TruncationError(f"insufficient degree bound: precision {K} at p={p} needs D >= {max(need, k)}, have {D}")
    mu = _cusp_measure(p, n, K, D)
    (res,) = restrict_units(mu, [k - 2], K)
    return res.value


def kummer_congruence_check(p: int, n: int, k_pairs, m: int, K: int) -> dict:
    """Compare unit moments of the cusp measure for k = k' mod (p-1) p^m.

    The raw unit moments are compared for every pair; when both factors
    1 - n^k are units the quotients are compared too, otherwise that step
    is skipped with a notice.
    """
    _require_prime(p, n)
    if K < m + 2:
        raise EisensteinError(f"precision K = {K} must be at least m + 2 = {m + 2}")
    period = (p - 1) * p**m
    mod = p ** (m + 1)
    cache = {}

    def zeta(k):
        if k not in cache:
            cache[k] = padic_zeta_value(p, n, k, K)
        return cache[k]

    results = []
    ok = True
    for k, k2 in k_pairs:
        if k % 2 or k2 % 2 or k < 4 or k2 < 4:
            raise EisensteinError(f"pair ({k}, {k2}) must consist of even k >= 4")
        if (k - k2) % period:
            raise EisensteinError(f"pair ({k}, {k2}) is not congruent mod (p-1) p^m = {period}")
        a, b = zeta(k), zeta(k2)
        prec = min(a.precision, b.precision)
        if prec < m + 2:
            raise TruncationError(f"certified precision {prec} is below m + 2 = {m + 2}")
        raw = (a.value - b.value) % mod == 0
        row = {"k": k, "k2": k2, "values": [a.value, b.value], "precision": prec, "raw": raw}
        fa, fb = 1 - n**k, 1 - n**k2
        if fa % p and fb % p:
            mK = p**K
            qa = a.value * pow(fa, -1, mK) % mK
            qb = b.value * pow(fb, -1, mK) % mK
            row["divided"] = (qa - qb) % mod == 0
            row["quotients"] = [qa, qb]
        else:
            row["divided"] = None
            row["notice"] = f"1 - n^k is not a unit for ({k}, {k2}); quotient comparison skipped"
        ok = ok and raw and row["divided"] is not False
        results.append(row)
    return {"p": p, "n": n, "m": m, "K": K, "ok": ok, "pairs": results}


def synthetic_kummer_check(p: int, trials: int, seed: int = 0, K: int = 2) -> dict:
    """mu(z^k 1_units) = mu(z^k' 1_units) mod p for k = k' mod (p-1), on random bounded measures."""
    rng = random.Random(seed)
    D = amice_tail_bound(p, 1, 0, K)
    ks = [k for k in range(1, min(D, 3 * (p - 1) + 2))]
    failures = []
    for trial in range(trials):
        mu = random_measure(p, D, K, rng)
        vals = {k: c.value.value for k, c in zip(ks, restrict_units(mu, ks, K))}
        for k in ks:
            k2 = k + (p - 1)
            if k2 in vals and (vals[k] - vals[k2]) % p:
                failures.append({"trial": trial, "k": k, "k2": k2, "values": [vals[k], vals[k2]]})
    return {"p": p, "trials": trials, "D": D, "ok": not failures, "failures": failures}


def supersingular_integrality_check(p: int, n: int, k_max: int, K: int, setup=None) -> dict:
    """Lemniscate moments: v_p >= 0, and the rational values reduce to the formal pipeline mod p^K."""
    _require_prime(p, n)
    if p % 4 != 3:
        raise EisensteinError(f"p = {p} is not 3 mod 4")
    rational = eis_moments_rational(LEMNISCATE.g2, LEMNISCATE.g3, n, k_max)
    coords, fg = setup if setup is not None else formal_setup(LEMNISCATE, k_max)
    formal = eis_moments_formal(coords, fg, n, k_max, ring=PAdicRing(p, K))
    mod = p**K
    failures = []
    for e in rational.entries:
        v = e.value
        if v != 0 and vp(v, p) < 0:
            failures.append({"k": e.k, "reason": "negative valuation", "value": QQ.to_str(v)})
            continue
        red = v.numerator * pow(v.denominator, -1, mod) % mod
        got = formal.value(e.k) % mod
        if red != got:
            failures.append({"k": e.k, "reason": "mismatch", "rational": red, "formal": got})
    return {"p": p, "n": n, "k_max": k_max, "K": K, "ok": not failures, "failures": failures}

