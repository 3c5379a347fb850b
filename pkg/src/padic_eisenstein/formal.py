"""One-dimensional formal group laws.

Three kinds are provided: the multiplicative group, the formal group of a
Weierstrass curve ``y^2 = 4x^3 - g2 x - g3`` in the parameter ``t = -2x/y``,
and the Tate curve over a ring of truncated q-series, whose formal group is
the multiplicative one with ``u = 1 + t``.

Construction runs over exact rationals.  Logarithms carry ``1/k``
denominators; the group law and the ``[n]`` series do not, and that
cancellation is asserted.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .rings import QQ, binomial
from .series import (
    INF,
    BivarTruncSeries,
    MultiSeries,
    QSeriesRing,
    SeriesError,
    TruncationError,
    TruncSeries,
    _laurent_inverse,
    compose,
    derive,
    integrate,
    invert_unit,
    reverse,
    univariate_of,
)

__all__ = [
    "IntegralityError",
    "WeierstrassData",
    "EllipticFormalCoordinates",
    "FormalGroupLaw",
    "multiplicative_group",
    "additive_group",
    "elliptic_formal_x",
    "elliptic_group_law",
    "tate_x_series",
    "invariant_derive",
    "LEMNISCATE",
]


class IntegralityError(SeriesError):
    """A series that must be integral picked up a forbidden denominator."""


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    n = abs(n)
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _check_integral(coeffs, allowed: set[int], what: str) -> None:
    for key, c in coeffs:
        den = Fraction(c).denominator
        if den == 1:
            continue
        bad = _prime_factors(den) - allowed
        if bad:
            raise IntegralityError(f"{what}: coefficient {key} = {c} has denominator primes {sorted(bad)}")


@dataclass(frozen=True)
class WeierstrassData:
    g2: Fraction
    g3: Fraction

    def __post_init__(self):
        object.__setattr__(self, "g2", Fraction(self.g2))
        object.__setattr__(self, "g3", Fraction(self.g3))

    @property
    def discriminant(self) -> Fraction:
        return self.g2**3 - 27 * self.g3**2

    def bad_primes(self) -> set[int]:
        """Primes that may legitimately divide denominators of x(t), F and [n]."""
        return {2, 3} | _prime_factors(self.g2.denominator) | _prime_factors(self.g3.denominator)


LEMNISCATE = WeierstrassData(4, 0)


@dataclass(frozen=True)
class EllipticFormalCoordinates:
    x_series: TruncSeries
    y_series: TruncSeries
    curve: WeierstrassData | None = None
    parameter: str = "-2x/y"

    @property
    def ring(self):
        return self.x_series.ring

    def residual(self) -> TruncSeries:
        """y^2 - 4x^3 + g2 x + g3 (Weierstrass curves only)."""
        if self.curve is None:
            raise ValueError("no Weierstrass data attached")
        x, y = self.x_series, self.y_series
        return y * y - (x * x * x).scale(4) + x.scale(self.curve.g2) + self.curve.g3


@dataclass
class FormalGroupLaw:
    """Group-law data; everything except ``mult_cache`` is fixed at construction."""

    kind: str
    degree: int
    log: TruncSeries
    log_derivative: TruncSeries
    inv_derivation_factor: TruncSeries
    ring: object = QQ
    law_degree: int = 12
    curve: WeierstrassData | None = None
    _law: BivarTruncSeries | None = field(default=None, repr=False)
    _exp: TruncSeries | None = field(default=None, repr=False)
    mult_cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def exp(self) -> TruncSeries:
        """The compositional inverse of the logarithm."""
        if self._exp is None:
            with self._lock:
                if self._exp is None:
                    self._exp = reverse(self.log)
        return self._exp

    @property
    def law(self) -> BivarTruncSeries:
        if self._law is None:
            built = self._build_law()
            with self._lock:
                if self._law is None:
                    self._law = built
        return self._law

    def _build_law(self) -> BivarTruncSeries:
        D = min(self.law_degree, self.degree)
        ring = self.ring
        if self.kind == "multiplicative":
            F = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
            return BivarTruncSeries(F, D, ring)
        if self.kind == "additive":
            return BivarTruncSeries({(1, 0): 1, (0, 1): 1}, D, ring)
        lam = self.log.truncate(D)
        s = univariate_of(lam, MultiSeries.variable(0, 2, ring, D)) + univariate_of(
            lam, MultiSeries.variable(1, 2, ring, D))
        F = univariate_of(self.exp.truncate(D), s).truncate(D)
        if self.curve is not None:
            _check_integral(F.coeffs.items(), self.curve.bad_primes(), "group law")
        return BivarTruncSeries.from_multi(F)

    def mult(self, n: int) -> TruncSeries:
        """[n](t), cached; n may be negative."""
        cached = self.mult_cache.get(n)
        if cached is not None:
            return cached
        value = self._compute_mult(n)
        with self._lock:
            # entries never change once written
            return self.mult_cache.setdefault(n, value)

    def _compute_mult(self, n: int) -> TruncSeries:
        D = self.degree
        ring = self.ring
        if self.kind == "multiplicative":
            if n >= 0:
                return TruncSeries({k: binomial(n, k) for k in range(1, n + 1)}, INF, ring).truncate(D)
            return TruncSeries({k: binomial(n, k) for k in range(1, D)}, D, ring)
        if self.kind == "additive":
            return TruncSeries({1: n}, D, ring)
        if n == 0:
            return TruncSeries.zero(ring, D)
        if n == 1:
            return TruncSeries.gen(ring, D)
        if n == -1:
            # t = -2x/y and the inverse point is (x, -y)
            return TruncSeries({1: -1}, D, ring)
        for a in range(2, abs(n)):
            if n % a == 0 and abs(n) // a > 1:
                return compose(self.mult(a), self.mult(n // a)).truncate(D)
        value = compose(self.exp, self.log.scale(n)).truncate(D)
        if self.curve is not None:
            _check_integral(value.coeffs.items(), self.curve.bad_primes(), f"[{n}]")
        return value

    def inverse(self) -> TruncSeries:
        return self.mult(-1)


def additive_group(D: int, ring=QQ) -> FormalGroupLaw:
    t = TruncSeries.gen(ring, D)
    return FormalGroupLaw("additive", D, t, TruncSeries.one(ring, D - 1), TruncSeries.one(ring), ring)


def multiplicative_group(D: int, ring=QQ) -> FormalGroupLaw:
    """F = t1 + t2 + t1 t2, log = log(1 + t), d = (1 + t) d/dt."""
    if D < 2:
        raise ValueError("D must be at least 2")
    if ring is QQ or getattr(ring, "is_exact", False):
        log = TruncSeries({k: Fraction((-1) ** (k + 1), k) for k in range(1, D)}, D, ring)
    else:
        # log(1+t) has 1/k denominators; build it only where they are invertible
        log = TruncSeries({k: ring.div_int(ring.coerce((-1) ** (k + 1)), k) for k in range(1, D)}, D, ring)
    log_derivative = TruncSeries({k: (-1) ** k for k in range(D - 1)}, D - 1, ring)
    factor = TruncSeries({0: 1, 1: 1}, INF, ring)
    return FormalGroupLaw("multiplicative", D, log, log_derivative, factor, ring)


def elliptic_formal_x(w: WeierstrassData, D: int) -> EllipticFormalCoordinates:
    """x(t) = t^-2 (1 + ...) mod t^D and y = -2x/t for t = -2x/y.

    With x = u/t^2 the curve equation becomes u^2 (u - 1) = (g2/4) u t^4 + (g3/4) t^6;
    u - 1 is found coefficient by coefficient by fixed-point iteration.
    """
    if D < 6:
        raise ValueError("D must be at least 6")
    U = D + 2  # x mod t^D needs u mod t^(D+2)
    a = w.g2 / 4
    b = w.g3 / 4
    t4 = TruncSeries({4: a}, INF)
    t6 = TruncSeries({6: b}, INF)
    wser = TruncSeries.zero(QQ, U)
    # each pass fixes at least four more coefficients
    for _ in range(U // 4 + 2):
        nxt = (t4 * (wser + 1) + t6 - (wser * wser).scale(2) - wser * wser * wser).truncate(U)
        if nxt == wser:
            break
        wser = nxt
    u = wser + 1
    x = u.shift(-2)
    y = x.shift(-1).scale(-2)
    coords = EllipticFormalCoordinates(x, y, w)
    if coords.residual().truncate(D - 6).coeffs:
        raise SeriesError("Weierstrass solve is inconsistent")
    _check_integral(x.coeffs.items(), w.bad_primes() - {3}, "x(t)")
    return coords


def elliptic_group_law(coords: EllipticFormalCoordinates, D: int, law_degree: int = 12) -> FormalGroupLaw:
    """Formal group of the curve from the invariant differential dx/y."""
    x, y = coords.x_series, coords.y_series
    if x.trunc < D - 3:
        raise TruncationError(f"coordinates known to t^{x.trunc}; need t^{D - 3}")
    lam_prime = (derive(x) * _laurent_inverse(y)).truncate(D - 1)
    if lam_prime[0] != 1:
        raise SeriesError("invariant differential is not normalized")
    log = integrate(lam_prime)
    factor = invert_unit(lam_prime)
    w = coords.curve
    if w is not None:
        _check_integral(lam_prime.coeffs.items(), w.bad_primes(), "log derivative")
    return FormalGroupLaw("elliptic", D, log, lam_prime, factor, QQ, law_degree, w)


def tate_x_series(M: int, D: int, base=QQ, weierstrass_constant: bool = False) -> EllipticFormalCoordinates:
    """Tate-curve x(t, q) in the multiplicative parameter t = u - 1.

    ``x = u/(1-u)^2 + sum_{m>=1} [q^m u/(1-q^m u)^2 + q^m u^-1/(1-q^m u^-1)^2 - 2 q^m/(1-q^m)^2]``,
    expanded mod (t^D, q^M).  With ``weierstrass_constant`` the constant 1/12
    is added, which turns x into the coordinate of the Weierstrass model
    y^2 = 4x^3 - g2 x - g3 whose invariant differential is du/u.
    """
    if M < 1 or D < 2:
        raise ValueError("need M >= 1 and D >= 2")
    R = QSeriesRing(base, M)
    coeffs: dict[int, dict[int, object]] = {}

    def bump(e: int, qe: int, c) -> None:
        row = coeffs.setdefault(e, {})
        row[qe] = row.get(qe, 0) + c

    # m = 0 term: (1+t)/t^2
    bump(-2, 0, 1)
    bump(-1, 0, 1)
    if weierstrass_constant:
        bump(0, 0, Fraction(1, 12))
    # q^m u/(1-q^m u)^2 = sum_r r q^(mr) u^r; likewise for u^-1; the last piece is r q^(mr)
    for m in range(1, M):
        for r in range(1, (M - 1) // m + 1):
            qe = m * r
            for e in range(D):
                c = binomial(r, e) + binomial(-r, e)
                if e == 0:
                    c -= 2
                if c:
                    bump(e, qe, r * c)
    x_coeffs = {e: TruncSeries(row, M, base) for e, row in coeffs.items()}
    x = TruncSeries(x_coeffs, D, R)
    y = derive(x) * TruncSeries({0: 1, 1: 1}, INF, R)
    return EllipticFormalCoordinates(x, y, None, parameter="u-1")


def invariant_derive(fg: FormalGroupLaw, f: TruncSeries, j: int) -> TruncSeries:
    """Apply d = (1/log'(t)) d/dt to f, j times."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    factor = fg.inv_derivation_factor
    if f.ring != factor.ring:
        factor = factor.change_ring(f.ring)
    g = f
    for i in range(j):
        g = factor * derive(g)
        if g.trunc < 1 and g.trunc != INF:
            raise TruncationError(
                f"insufficient series order: only {i} invariant derivations leave a known constant term")
    return g
