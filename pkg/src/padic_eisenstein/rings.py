"""Exact scalars: valuations, binomials, Bernoulli numbers, p-adic residues.

Two scalar modes are supported.  Exact rationals (``fractions.Fraction``) are
the default construction path; :class:`PAdicScalar` is a residue modulo
``p**K`` together with the number of digits that are actually guaranteed.

The coefficient-ring descriptors :class:`RationalRing` and :class:`PAdicRing`
are what :mod:`padic_eisenstein.series` plugs into its truncated series.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from numbers import Rational

__all__ = [
    "PAdicError",
    "PrecisionError",
    "PAdicScalar",
    "RationalRing",
    "PAdicRing",
    "QQ",
    "is_prime",
    "vp",
    "vp_factorial",
    "binomial",
    "bernoulli",
    "divisor_sigma",
    "zeta_at_negative",
    "stirling2",
]


class PAdicError(ArithmeticError):
    pass


class PrecisionError(PAdicError):
    """Raised when a computation cannot certify the digits it was asked for."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


def vp(x, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    if isinstance(x, PAdicScalar):
        return x.valuation()
    if x == 0:
        raise PAdicError("valuation of zero")
    if isinstance(x, int):
        num, den = x, 1
    elif isinstance(x, Rational):
        num, den = x.numerator, x.denominator
    else:
        raise TypeError(f"cannot take valuation of {type(x).__name__}")
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def vp_factorial(n: int, p: int) -> int:
    """Legendre's formula for v_p(n!)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = 0
    n //= p
    while n:
        total += n
        n //= p
    return total


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k with B_1 = -1/2.

    Uses sum_{j=0}^{m} C(m+1, j) B_j = 0.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Fraction(1)
    if k > 1 and k % 2 == 1:
        return Fraction(0)
    # build the whole table once so the cache fills bottom-up
    table = [bernoulli(j) for j in range(k)]
    row = _pascal_row(k + 1)
    s = sum(row[j] * table[j] for j in range(k))
    return Fraction(-s, k + 1)


@lru_cache(maxsize=64)
def _pascal_row(m: int) -> tuple[int, ...]:
    row = [1]
    for j in range(m):
        row.append(row[-1] * (m - j) // (j + 1))
    return tuple(row)


def zeta_at_negative(k: int) -> Fraction:
    """zeta(1 - k) = -B_k / k for k >= 2."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return -bernoulli(k) / k


def divisor_sigma(k: int, m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    total = 0
    for d in range(1, isqrt(m) + 1):
        if m % d == 0:
            e = m // d
            total += d**k
            if e != d:
                total += e**k
    return total


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind S(n, k)."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


class PAdicScalar:
    """A residue mod p**K of which only the lowest ``precision`` digits are trusted.

    Immutable.  Arithmetic follows the usual absolute-precision rules and
    never claims more digits than its inputs justify.
    """

    __slots__ = ("value", "K", "precision", "p")

    def __init__(self, value: int, p: int, K: int, precision: int | None = None):
        _check_prime(p)
        if K < 1:
            raise ValueError("modulus exponent K must be positive")
        if precision is None:
            precision = K
        if precision > K:
            raise ValueError("precision cannot exceed the modulus exponent")
        mod = p**K
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "precision", precision)
        # digits above the precision carry no information; zero them
        keep = p ** max(precision, 0)
        object.__setattr__(self, "value", (value % mod) % keep)

    def __setattr__(self, name, value):
        raise AttributeError("PAdicScalar is immutable")

    @classmethod
    def from_rational(cls, x, p: int, K: int) -> PAdicScalar:
        x = Fraction(x)
        if x.denominator % p == 0:
            raise PAdicError(f"{x} is not {p}-integral")
        mod = p**K
        return cls(x.numerator * pow(x.denominator, -1, mod), p, K)

    @property
    def modulus(self) -> int:
        return self.p**self.K

    def valuation(self) -> int:
        """Valuation of the known digits; equals ``precision`` if they are all zero."""
        if self.value == 0:
            return self.precision
        return min(vp(self.value, self.p), self.precision)

    def is_zero(self) -> bool:
        return self.value == 0

    def _coerce(self, other) -> PAdicScalar:
        if isinstance(other, PAdicScalar):
            if other.p != self.p:
                raise PAdicError("p-adic scalars over different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PAdicScalar.from_rational(other, self.p, self.K)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        K = min(self.K, other.K)
        return PAdicScalar(self.value + other.value, self.p, K, min(self.precision, other.precision, K))

    __radd__ = __add__

    def __neg__(self):
        return PAdicScalar(-self.value, self.p, self.K, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        K = min(self.K, other.K)
        prec = min(K, self.precision + other.valuation(), other.precision + self.valuation())
        return PAdicScalar(self.value * other.value, self.p, K, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        v = other.valuation()
        if v >= other.precision:
            raise PrecisionError("division by a scalar indistinguishable from zero")
        vx = self.valuation()
        if vx < v and vx < self.precision:
            raise PAdicError("quotient is not p-integral")
        K = min(self.K, other.K)
        p = self.p
        pv = p**v
        unit = (other.value // pv) % p**K
        num = self.value // pv if vx >= v else 0
        prec = min(self.precision, vx + other.precision - v) - v
        prec = min(prec, K)
        if prec < 1:
            raise PrecisionError("division leaves no certified digits")
        return PAdicScalar(num * pow(unit, -1, p**K), p, K, prec)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int):
        if e < 0:
            return PAdicScalar(1, self.p, self.K) / (self**-e)
        result = PAdicScalar(1, self.p, self.K)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        """Equality of the certified digits (on the common precision)."""
        if isinstance(other, (int, Fraction)):
            try:
                other = PAdicScalar.from_rational(other, self.p, self.K)
            except PAdicError:
                return False
        if not isinstance(other, PAdicScalar) or other.p != self.p:
            return NotImplemented
        prec = min(self.precision, other.precision)
        return (self.value - other.value) % self.p**prec == 0

    def __hash__(self):
        return hash((self.p, self.precision, self.value))

    def congruent(self, other, digits: int) -> bool:
        """True when the two agree mod p**digits; needs that many certified digits."""
        other = self._coerce(other)
        if min(self.precision, other.precision) < digits:
            raise PrecisionError(f"only {min(self.precision, other.precision)} digits certified, {digits} requested")
        return (self.value - other.value) % self.p**digits == 0

    def lift(self) -> int:
        return self.value

    def signed_lift(self) -> int:
        """Representative in (-p^prec/2, p^prec/2]."""
        m = self.p**self.precision
        v = self.value % m
        return v - m if v > m // 2 else v

    def __repr__(self):
        return f"PAdicScalar({self.value}, p={self.p}, K={self.K}, precision={self.precision})"

    def __str__(self):
        return f"{self.value} + O({self.p}^{self.precision})"


def binomial(a, n: int):
    """C(a, n) = a(a-1)...(a-n+1)/n! for integer, rational or p-adic ``a``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(a, PAdicScalar):
        num = PAdicScalar(1, a.p, a.K)
        for i in range(n):
            num = num * (a - i)
        fact = 1
        for i in range(2, n + 1):
            fact *= i
        v = vp_factorial(n, a.p)
        prec = num.precision - v
        if prec < 1:
            raise PrecisionError(f"C(a, {n}) needs more than {a.precision} digits of a")
        return num / PAdicScalar(fact, a.p, a.K)
    if isinstance(a, int):
        if 0 <= a < n:
            return 0
        num = 1
        for i in range(n):
            num *= a - i
        den = 1
        for i in range(2, n + 1):
            den *= i
        return num // den
    a = Fraction(a)
    num = Fraction(1)
    for i in range(n):
        num *= a - i
    den = 1
    for i in range(2, n + 1):
        den *= i
    return num / den


class RationalRing:
    """Exact rationals; the default scalar mode."""

    tag = "QQ"
    is_exact = True

    zero = Fraction(0)
    one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "RationalRing()"

    def coerce(self, x):
        if isinstance(x, PAdicScalar):
            raise TypeError("cannot coerce a p-adic residue to an exact rational")
        return Fraction(x)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def mul(a, b):
        return a * b

    def is_zero(self, x) -> bool:
        return x == 0

    def is_unit(self, x) -> bool:
        return x != 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def div_int(self, x, k: int):
        return Fraction(x) / k

    def to_json(self, x):
        return self.to_str(x)

    def from_json(self, v):
        return self.from_str(v)

    def to_str(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def from_str(self, s):
        return Fraction(s)


QQ = RationalRing()


class PAdicRing:
    """Residues mod p**K stored as plain ints in [0, p**K)."""

    is_exact = False

    def __init__(self, p: int, K: int):
        _check_prime(p)
        if K < 1:
            raise ValueError("K must be positive")
        self.p = p
        self.K = K
        self.modulus = p**K
        self.zero = 0
        self.one = 1 % self.modulus

    @property
    def tag(self) -> str:
        return f"Zp({self.p},{self.K})"

    def __eq__(self, other):
        return isinstance(other, PAdicRing) and (other.p, other.K) == (self.p, self.K)

    def __hash__(self):
        return hash((self.p, self.K))

    def __repr__(self):
        return f"PAdicRing({self.p}, {self.K})"

    def coerce(self, x) -> int:
        if isinstance(x, int):
            return x % self.modulus
        if isinstance(x, PAdicScalar):
            if x.p != self.p or x.precision < self.K:
                raise PrecisionError(f"{x} does not carry {self.K} digits")
            return x.value % self.modulus
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise PAdicError(f"{x} is not {self.p}-integral")
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def is_zero(self, x) -> bool:
        return x % self.modulus == 0

    def is_unit(self, x) -> bool:
        return x % self.p != 0

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise PAdicError(f"{x} is not a unit mod {self.p}")
        return pow(x, -1, self.modulus)

    def div_int(self, x, k: int) -> int:
        if k % self.p == 0:
            raise PAdicError(f"non-invertible denominator {k} in Zp({self.p},{self.K})")
        return x * pow(k, -1, self.modulus) % self.modulus

    def scalar(self, x) -> PAdicScalar:
        return PAdicScalar(x, self.p, self.K)

    def to_json(self, x):
        return self.to_str(x)

    def from_json(self, v):
        return self.from_str(v)

    def to_str(self, x) -> str:
        return str(x % self.modulus)

    def from_str(self, s) -> int:
        return self.coerce(Fraction(s))


def ring_from_tag(tag: str):
    if tag == "QQ":
        return QQ
    if tag.startswith("Zp(") and tag.endswith(")"):
        p, K = (int(s) for s in tag[3:-1].split(","))
        return PAdicRing(p, K)
    raise ValueError(f"unknown ring tag {tag!r}")


def rational_to_padic(x, p: int, K: int) -> PAdicScalar:
    return PAdicScalar.from_rational(x, p, K)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
