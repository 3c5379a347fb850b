"""Measures on Z_p through their Amice transforms, and the finite-level duality.

A measure mu is stored as ``F(t) = mu((1+t)^z) = sum_n mu(C(z, n)) t^n``.
Convolution is the product of transforms, multiplication by the coordinate
z is ``(1+t) d/dt``, and the moments are ``((1+t) d/dt)^k F`` at ``t = 0``.

At finite level, measures on Z/p^n and functions on mu_{p^n} (polynomials in
t of degree < p^n) are exchanged by the Pascal matrix ``[C(a, j)]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple

from . import kernels
from .mahler import MahlerCoeffs, amice_tail_bound, mahler_of_masked_power
from .rings import QQ, PAdicRing, PAdicScalar, binomial, stirling2, vp, vp_factorial
from .series import INF, QSeriesRing, TruncationError, TruncSeries, compose, derive, ring_from_json

__all__ = [
    "UncertifiableError",
    "Certified",
    "AmiceMeasure",
    "FiniteLevelData",
    "GrowthProfile",
    "dirac",
    "zero_measure",
    "evaluate",
    "convolve",
    "apply_coordinate",
    "negate",
    "moment",
    "moments",
    "restrict_units",
    "random_measure",
    "finite_level_transform",
    "finite_convolve",
    "cyclic_mul",
    "reduce_cyclic",
    "level_compatibility_check",
    "growth_profile",
]


class UncertifiableError(ValueError):
    """A pairing whose tail cannot be bounded."""


class Certified(NamedTuple):
    """A value together with the number of p-adic digits it is certified to.

    ``precision`` is ``None`` for an exact rational result.
    """

    value: object
    precision: int | None


@dataclass(frozen=True)
class AmiceMeasure:
    p: int
    series: TruncSeries
    norm_exponent: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def ring(self):
        return self.series.ring

    @property
    def K(self) -> int | None:
        ring = self.ring
        if isinstance(ring, PAdicRing):
            return ring.K
        if isinstance(ring, QSeriesRing) and isinstance(ring.base, PAdicRing):
            return ring.base.K
        return None

    @property
    def D(self):
        return self.series.trunc

    def coefficient(self, n: int):
        return self.series[n]

    def to_json(self) -> dict:
        doc = self.series.to_json()
        doc.update({"p": self.p, "K": self.K, "norm_exponent": self.norm_exponent})
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> AmiceMeasure:
        series = TruncSeries.from_json(doc)
        return cls(doc["p"], series, doc.get("norm_exponent", 0))


@dataclass(frozen=True)
class FiniteLevelData:
    """A vector of length p^n over Z/p^k: a measure on Z/p^n or a function on mu_{p^n}.

    In the function case ``values[j]`` is the coefficient of t^j.
    """

    p: int
    n: int
    k: int
    values: tuple
    kind: str = "measure"

    def __post_init__(self):
        if len(self.values) != self.p**self.n:
            raise ValueError(f"need exactly {self.p ** self.n} entries")
        if self.kind not in ("measure", "function"):
            raise ValueError("kind must be 'measure' or 'function'")
        mod = self.p**self.k
        object.__setattr__(self, "values", tuple(int(v) % mod for v in self.values))

    @property
    def modulus(self) -> int:
        return self.p**self.k


class GrowthProfile(NamedTuple):
    min_valuation: int | None
    bounded: bool
    slope: float | None
    distribution_compatible: bool
    la_norms: tuple


# ---------------------------------------------------------------------------


def _ring_for(p: int, K: int | None):
    return QQ if K is None else PAdicRing(p, K)


def _wrap(ring, x):
    if isinstance(ring, PAdicRing):
        return PAdicScalar(x, ring.p, ring.K)
    return x


def dirac(p: int, a, D: int, K: int | None = None) -> AmiceMeasure:
    """delta_a, whose transform is (1+t)^a mod t^D."""
    if isinstance(a, PAdicScalar):
        coeffs = {}
        prec = a.precision
        for n in range(D):
            c = binomial(a, n)
            prec = min(prec, c.precision)
            coeffs[n] = c.value
        ring = PAdicRing(p, prec)
        return AmiceMeasure(p, TruncSeries(coeffs, D, ring))
    ring = _ring_for(p, K)
    if D == INF:
        # exact only for a polynomial transform
        if not (isinstance(a, int) and a >= 0):
            raise TruncationError("an exact dirac needs a nonnegative integer point")
        return AmiceMeasure(p, TruncSeries({n: binomial(a, n) for n in range(a + 1)}, INF, ring))
    coeffs = {n: binomial(a, n) for n in range(D)}
    return AmiceMeasure(p, TruncSeries(coeffs, D, ring))


def zero_measure(p: int, D: int, K: int | None = None) -> AmiceMeasure:
    return AmiceMeasure(p, TruncSeries.zero(_ring_for(p, K), D))


def random_measure(p: int, D: int, K: int, rng: random.Random) -> AmiceMeasure:
    """A bounded measure with uniformly random Amice coefficients mod p^K."""
    mod = p**K
    return AmiceMeasure(p, TruncSeries({n: rng.randrange(mod) for n in range(D)}, D, PAdicRing(p, K)))


def evaluate(mu: AmiceMeasure, f: MahlerCoeffs) -> Certified:
    """mu(f) = sum_n a_n(f) b_n, with the certified precision of the truncation."""
    if f.p != mu.p:
        raise ValueError("prime mismatch")
    ring = mu.ring
    D = mu.D
    n_terms = min(len(f), D) if D != INF else len(f)
    total = ring.zero
    for n in range(n_terms):
        a = f.coeffs[n]
        if a == 0:
            continue
        b = mu.series.coeffs.get(n)
        if b is None:
            continue
        total = ring.add(total, ring.mul(b, ring.coerce(a)))
    K = mu.K
    known_zero = D == INF and all(n < len(f) for n in mu.series.coeffs)
    if known_zero or (f.complete and len(f) <= D):
        return Certified(_wrap(ring, total), K)
    if f.regularity is None:
        raise UncertifiableError("uncertifiable tail: f has no regularity declaration and is not finitely supported")
    tail = mu.norm_exponent + f.bound(n_terms)
    prec = tail if K is None else min(K, tail)
    if isinstance(ring, PAdicRing):
        return Certified(PAdicScalar(total, ring.p, ring.K, max(min(prec, ring.K), 0)), prec)
    return Certified(total, prec)


def convolve(mu: AmiceMeasure, nu: AmiceMeasure) -> AmiceMeasure:
    if mu.p != nu.p:
        raise ValueError("prime mismatch")
    return AmiceMeasure(mu.p, mu.series * nu.series, mu.norm_exponent + nu.norm_exponent)


_ONE_PLUS_T = {0: 1, 1: 1}


def apply_coordinate(mu: AmiceMeasure) -> AmiceMeasure:
    """z * mu, whose transform is (1+t) dF/dt."""
    if mu.D != INF and mu.D < 1:
        raise TruncationError("no coefficients left to differentiate")
    factor = TruncSeries(_ONE_PLUS_T, INF, mu.ring)
    return AmiceMeasure(mu.p, factor * derive(mu.series), mu.norm_exponent)


def negate(mu: AmiceMeasure) -> AmiceMeasure:
    """Pushforward along z -> -z: F((1+t)^-1 - 1)."""
    D = mu.D
    if D == INF:
        raise TruncationError("negate needs a finite truncation")
    g = TruncSeries({n: (-1) ** n for n in range(1, int(D))}, D, mu.ring)
    return AmiceMeasure(mu.p, compose(mu.series, g), mu.norm_exponent)


def moment(mu: AmiceMeasure, k: int):
    """mu(z^k) = ((1+t) d/dt)^k F at 0 = sum_i i! S(k, i) b_i."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if mu.D != INF and k >= mu.D:
        raise TruncationError(f"moment {k} needs degree bound > {k}, have {mu.D}")
    ring = mu.ring
    if isinstance(ring, PAdicRing):
        dense = [mu.series.coeffs.get(i, 0) for i in range(k + 1)]
        return _wrap(ring, kernels.theta_values(dense, k, ring.modulus)[k])
    total = ring.zero
    fact = 1
    for i in range(k + 1):
        if i:
            fact *= i
        b = mu.series.coeffs.get(i)
        if b is None:
            continue
        s = stirling2(k, i)
        if s:
            total = ring.add(total, ring.mul(b, ring.coerce(fact * s)))
    return total


def moments(mu: AmiceMeasure, kmax: int) -> list:
    ring = mu.ring
    if isinstance(ring, PAdicRing):
        if mu.D != INF and kmax >= mu.D:
            raise TruncationError(f"moment {kmax} needs degree bound > {kmax}, have {mu.D}")
        dense = [mu.series.coeffs.get(i, 0) for i in range(kmax + 1)]
        return [_wrap(ring, v) for v in kernels.theta_values(dense, kmax, ring.modulus)]
    return [moment(mu, k) for k in range(kmax + 1)]


def restrict_units(mu: AmiceMeasure, k_list, target_precision: int) -> list[Certified]:
    """mu(z^k 1_{Z_p^x}) = mu(z^k) - mu(z^k 1_{pZ_p}) through truncated Mahler pairing."""
    p = mu.p
    if mu.D == INF:
        # finitely supported transform: the pairing is an exact finite sum
        top = max(mu.series.coeffs, default=0)
    else:
        need = amice_tail_bound(p, 1, mu.norm_exponent, target_precision)
        if mu.D < need:
            raise TruncationError(
                f"insufficient degree bound: precision {target_precision} at p={p} needs D >= {need}, have {mu.D}")
        top = int(mu.D) - 1
    modulus = p**mu.K if mu.K is not None else None
    out = []
    for k in k_list:
        full = moment(mu, k)
        masked = mahler_of_masked_power(p, k, "pZp", top, modulus)
        part = evaluate(mu, masked)
        if isinstance(mu.ring, PAdicRing):
            value = PAdicScalar(full.value - part.value.value, p, mu.K, part.precision)
            out.append(Certified(value, part.precision))
        else:
            out.append(Certified(mu.ring.sub(full, part.value), part.precision))
    return out


# ---------------------------------------------------------------------------
# finite level


def finite_level_transform(data: FiniteLevelData, direction: str) -> FiniteLevelData:
    """to_function: lambda -> sum_a lambda(a) (1+t)^a; to_measure inverts it."""
    mod = data.modulus
    vals = list(data.values)
    if direction == "to_function":
        if data.kind != "measure":
            raise ValueError("to_function expects a measure")
        out = kernels.pascal_apply(vals, mod)
        return FiniteLevelData(data.p, data.n, data.k, tuple(out), "function")
    if direction == "to_measure":
        if data.kind != "function":
            raise ValueError("to_measure expects a function")
        out = kernels.pascal_inverse_apply(vals, mod)
        return FiniteLevelData(data.p, data.n, data.k, tuple(out), "measure")
    raise ValueError(f"unknown direction {direction!r}")


def pascal_matrix(N: int) -> list[list[int]]:
    """Rows j, columns a: C(a, j)."""
    return [[binomial(a, j) for a in range(N)] for j in range(N)]


def finite_convolve(x: FiniteLevelData, y: FiniteLevelData) -> FiniteLevelData:
    N = x.p**x.n
    mod = x.modulus
    out = [0] * N
    for a, xa in enumerate(x.values):
        if xa:
            for b, yb in enumerate(y.values):
                out[(a + b) % N] += xa * yb
    return FiniteLevelData(x.p, x.n, x.k, tuple(c % mod for c in out), "measure")


def _cyclic_modulus(N: int) -> list[int]:
    """Coefficients of (1+t)^N - 1 (degree N, monic)."""
    return [0] + [binomial(N, i) for i in range(1, N + 1)]


def reduce_cyclic(poly: list[int], p: int, n: int, mod: int) -> list[int]:
    """poly mod ((1+t)^(p^n) - 1, mod), as a list of length p^n."""
    N = p**n
    P = _cyclic_modulus(N)
    work = [c % mod for c in poly]
    for d in range(len(work) - 1, N - 1, -1):
        c = work[d]
        if c:
            shift = d - N
            for i in range(1, N + 1):
                work[shift + i] = (work[shift + i] - c * P[i]) % mod
    work = work[:N] + [0] * max(0, N - len(work))
    return work


def cyclic_mul(f: FiniteLevelData, g: FiniteLevelData) -> FiniteLevelData:
    N = f.p**f.n
    prod = kernels.mul_trunc(list(f.values), list(g.values), 2 * N - 1, f.modulus)
    return FiniteLevelData(f.p, f.n, f.k, tuple(reduce_cyclic(prod, f.p, f.n, f.modulus)), "function")


def pushforward_reduce(x: FiniteLevelData) -> FiniteLevelData:
    """Measure on Z/p^(n+1) -> measure on Z/p^n along reduction."""
    N = x.p ** (x.n - 1)
    out = [0] * N
    for a, v in enumerate(x.values):
        out[a % N] += v
    return FiniteLevelData(x.p, x.n - 1, x.k, tuple(out), "measure")


def pushforward_times_p(x: FiniteLevelData) -> FiniteLevelData:
    """Measure on Z/p^n -> measure on Z/p^(n+1) along a -> p a."""
    out = [0] * x.p ** (x.n + 1)
    for a, v in enumerate(x.values):
        out[x.p * a] += v
    return FiniteLevelData(x.p, x.n + 1, x.k, tuple(out), "measure")


def _pullback_p(f: FiniteLevelData) -> FiniteLevelData:
    """f(t) -> f((1+t)^p - 1) reduced at level n+1."""
    p, n, mod = f.p, f.n, f.modulus
    g = [binomial(p, i) for i in range(p + 1)]
    g[0] = 0
    result = [0]
    power = [1]
    for c in f.values:
        if c:
            if len(result) < len(power):
                result += [0] * (len(power) - len(result))
            for i, x in enumerate(power):
                result[i] = (result[i] + c * x) % mod
        power = kernels.mul_trunc(power, g, len(power) + p, mod)
    return FiniteLevelData(p, n + 1, f.k, tuple(reduce_cyclic(result, p, n + 1, mod)), "function")


def level_compatibility_check(p: int, n: int, k: int, trials: int = 20, seed: int = 0) -> dict:
    """Check the transition diagrams between levels n and n+1.

    (reduce)  transform(pushforward along Z/p^(n+1) -> Z/p^n)
              == transform at n+1 reduced mod (1+t)^(p^n) - 1;
    ([p])     transform(pushforward along a -> p a) == transform at n composed with (1+t)^p - 1;
    (dirac)   (1+t)^a reduced mod (1+t)^(p^n) - 1 == transform of delta_{a mod p^n}.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    mod = p**k
    N, N1 = p**n, p ** (n + 1)
    failures = []
    checked = 0

    def record(name, idx, lhs, rhs):
        for j, (u, v) in enumerate(zip(lhs, rhs)):
            if (u - v) % mod:
                failures.append({"diagram": name, "case": idx, "coefficient": j, "lhs": u, "rhs": v})
                return

    cases = [[0] * N1] + [[1 if b == a else 0 for b in range(N1)] for a in range(N1)]
    cases += [[rng.randrange(mod) for _ in range(N1)] for _ in range(trials)]
    for idx, vec in enumerate(cases):
        lam = FiniteLevelData(p, n + 1, k, tuple(vec))
        top = finite_level_transform(lam, "to_function")
        lhs = finite_level_transform(pushforward_reduce(lam), "to_function").values
        rhs = reduce_cyclic(list(top.values), p, n, mod)
        record("reduce", idx, lhs, rhs)
        low = FiniteLevelData(p, n, k, tuple(vec[:N]))
        lhs = finite_level_transform(pushforward_times_p(low), "to_function").values
        rhs = _pullback_p(finite_level_transform(low, "to_function")).values
        record("[p]", idx, lhs, rhs)
        checked += 2
    for a in list(range(N1 + 3)) + [rng.randrange(p ** (n + 3)) for _ in range(trials)]:
        series = [binomial(a, j) % mod for j in range(a + 1)]
        lhs = reduce_cyclic(series, p, n, mod)
        delta = FiniteLevelData(p, n, k, tuple(1 if b == a % N else 0 for b in range(N)))
        rhs = finite_level_transform(delta, "to_function").values
        record("dirac", a, lhs, rhs)
        checked += 1
    return {"p": p, "n": n, "k": k, "checked": checked, "ok": not failures, "failures": failures}


def growth_profile(F: TruncSeries, p: int | None = None, h_max: int = 3, window: int | None = None) -> GrowthProfile:
    """Valuation growth of Amice coefficients.

    Reports min v_p(b_n) (>= 0 certifies a bounded measure), the minimum of
    v_p(b_n)/n over the tail window (negative means the series cannot come
    from a locally analytic distribution at this precision), and for each
    h <= h_max the minimum of v_p(b_n) + v_p(floor(n/p^h)!).
    """
    ring = F.ring
    if p is None:
        p = ring.p
    cap = ring.K if isinstance(ring, PAdicRing) else None
    vals = {}
    for n, c in F.coeffs.items():
        if n < 0:
            raise ValueError("growth profile of a Laurent series")
        vals[n] = vp(c, p) if cap is None else min(vp(c, p), cap)
    if not vals:
        return GrowthProfile(None, True, None, True, tuple(None for _ in range(h_max + 1)))
    top = max(vals) + 1 if F.trunc == INF else int(F.trunc)
    if window is None:
        window = max(1, top // 2)
    lo = max(1, top - window)
    tail = [vals[n] / n for n in range(lo, top) if n in vals]
    slope = min(tail) if tail else None
    mv = min(vals.values())
    la = tuple(min(v + vp_factorial(n // p**h, p) for n, v in vals.items()) for h in range(h_max + 1))
    return GrowthProfile(mv, mv >= 0, slope, slope is None or slope >= 0, la)


def measure_from_json(doc: dict) -> AmiceMeasure:
    return AmiceMeasure.from_json(doc)


__all__ += ["pascal_matrix", "pushforward_reduce", "pushforward_times_p", "measure_from_json",
            "ring_from_json"]
