"""Mahler coefficients by finite differences, and Amice tail bounds.

For f on Z_p the Mahler coefficients are ``a_n = Delta^n f(0)``, so that
``f(z) = sum a_n C(z, n)``.  If f is locally analytic of level m with sup
norm at most p^-c, then ``v_p(a_n) >= c + v_p(floor(n / p^m)!)``; that
bound is what makes truncated pairings certifiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import kernels
from .rings import binomial, is_prime, vp, vp_factorial

__all__ = [
    "SampledFunction",
    "MahlerCoeffs",
    "mahler_coeffs",
    "mahler_reconstruct",
    "amice_tail_bound",
    "mahler_of_masked_power",
    "masked_power_values",
]


@dataclass(frozen=True)
class SampledFunction:
    """Values f(0), ..., f(N) of a function on Z_p, with an optional description.

    ``descriptor`` is one of ``("polynomial", coeffs)``,
    ``("locally-constant", m, class_values)`` or ``("custom",)``.
    """

    p: int
    values: tuple
    descriptor: tuple | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("need at least one sample")
        if self.descriptor is not None:
            self._spot_check()

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def _spot_check(self) -> None:
        kind = self.descriptor[0]
        if kind == "polynomial":
            coeffs = self.descriptor[1]
            for z in range(min(len(self.values), 8)):
                if sum(c * z**i for i, c in enumerate(coeffs)) != self.values[z]:
                    raise ValueError(f"sample f({z}) disagrees with the polynomial descriptor")
        elif kind == "locally-constant":
            m, classes = self.descriptor[1], self.descriptor[2]
            for z in range(min(len(self.values), 3 * self.p**m)):
                if classes[z % self.p**m] != self.values[z]:
                    raise ValueError(f"sample f({z}) disagrees with the locally-constant descriptor")

    @classmethod
    def from_polynomial(cls, p: int, coeffs, N: int) -> SampledFunction:
        coeffs = tuple(coeffs)
        vals = [sum(c * z**i for i, c in enumerate(coeffs)) for z in range(N + 1)]
        return cls(p, vals, ("polynomial", coeffs))

    @classmethod
    def locally_constant(cls, p: int, m: int, classes, N: int) -> SampledFunction:
        classes = tuple(classes)
        if len(classes) != p**m:
            raise ValueError("need one value per residue class mod p^m")
        vals = [classes[z % p**m] for z in range(N + 1)]
        return cls(p, vals, ("locally-constant", m, classes))

    def regularity(self) -> tuple[int, int] | None:
        """(level, norm exponent) implied by the descriptor, if any."""
        if self.descriptor is None:
            return None
        if self.descriptor[0] == "locally-constant":
            vals = [v for v in self.descriptor[2] if v != 0]
            c = min((vp(v, self.p) for v in vals), default=0)
            return self.descriptor[1], c
        return None


@dataclass(frozen=True)
class MahlerCoeffs:
    """a_0..a_N plus what is known about the coefficients beyond N.

    ``complete`` means every a_n with n > N is zero (polynomials of degree
    <= N).  ``regularity = (m, c)`` asserts ``v_p(a_n) >= c + v_p(floor(n/p^m)!)``.
    """

    p: int
    coeffs: tuple
    regularity: tuple[int, int] | None = None
    complete: bool = False

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def bound(self, n: int) -> int:
        """Guaranteed lower bound for v_p(a_n)."""
        if self.regularity is None:
            raise ValueError("no regularity declared")
        m, c = self.regularity
        return c + vp_factorial(n // self.p**m, self.p)

    def check_regularity(self) -> list[int]:
        """Indices whose computed coefficient violates the declared bound."""
        bad = []
        for n, a in enumerate(self.coeffs):
            if a != 0 and vp(a, self.p) < self.bound(n):
                bad.append(n)
        return bad


def mahler_coeffs(f: SampledFunction, modulus: int | None = None) -> MahlerCoeffs:
    """Forward differences of the samples; exact unless a modulus is given."""
    vals = list(f.values)
    if modulus is not None:
        out = kernels.forward_differences([int(Fraction(v).numerator * pow(Fraction(v).denominator, -1, modulus))
                                           for v in vals], modulus)
    else:
        out = []
        work = vals
        while work:
            out.append(work[0])
            work = [work[i + 1] - work[i] for i in range(len(work) - 1)]
    complete = False
    if f.descriptor is not None and f.descriptor[0] == "polynomial":
        complete = len(f.descriptor[1]) - 1 <= f.N
    return MahlerCoeffs(f.p, tuple(out), f.regularity(), complete)


def mahler_reconstruct(a: MahlerCoeffs, z: int):
    return sum(c * binomial(z, n) for n, c in enumerate(a.coeffs))


def amice_tail_bound(p: int, m: int, c: int, K: int) -> int:
    """Smallest N with c + v_p(floor(N / p^m)!) >= K."""
    if m < 0:
        raise ValueError("level must be nonnegative")
    if c >= K:
        return 0
    step = p**m
    # v_p(j!) only grows at multiples of p, so search over j = floor(N/p^m)
    j = 0
    while c + vp_factorial(j, p) < K:
        j += p
    # back off to the smallest j that still reaches K
    while j > 0 and c + vp_factorial(j - 1, p) >= K:
        j -= 1
    return j * step


def _in_mask(z: int, p: int, mask) -> bool:
    if mask == "all":
        return True
    if mask == "units":
        return z % p != 0
    if mask in ("pZp", "pZ_p"):
        return z % p == 0
    kind, a, m = mask
    if kind != "class":
        raise ValueError(f"unknown mask {mask!r}")
    return (z - a) % p**m == 0


def _mask_level(mask) -> int:
    if mask == "all":
        return 0
    if mask in ("units", "pZp", "pZ_p"):
        return 1
    return mask[2]


def masked_power_values(p: int, k: int, mask, N: int) -> list[int]:
    return [z**k if _in_mask(z, p, mask) else 0 for z in range(N + 1)]


@lru_cache(maxsize=256)
def mahler_of_masked_power(p: int, k: int, mask, N: int, modulus: int | None = None) -> MahlerCoeffs:
    """Mahler coefficients a_0..a_N of z -> z^k 1_mask(z).

    ``mask`` is ``"all"``, ``"units"``, ``"pZp"`` or ``("class", a, m)``.
    """
    vals = masked_power_values(p, k, mask, N)
    if modulus is None:
        out = []
        work = vals
        while work:
            out.append(work[0])
            work = [work[i + 1] - work[i] for i in range(len(work) - 1)]
    else:
        out = kernels.forward_differences(vals, modulus)
    complete = mask == "all" and k <= N
    return MahlerCoeffs(p, tuple(out), (_mask_level(mask), 0), complete)
