"""Truncated power / Laurent series over a pluggable coefficient ring.

A :class:`TruncSeries` is a sparse map ``exponent -> coefficient`` plus an
explicit truncation order ``trunc``: every coefficient of exponent
``>= trunc`` is unknown.  ``trunc = INF`` marks an exact (Laurent)
polynomial.  Output truncations follow fixed rules:

* add/sub: ``min(D1, D2)``
* mul: ``min(D1 + ord2, D2 + ord1)``
* compose ``f(g)`` with ``v = ord(g)``: ``min(v*Df, min_e (e*v + Dg - v))`` over
  the nonzero exponents ``e`` of ``f``.

Coefficient rings are :data:`~padic_eisenstein.rings.QQ`,
:class:`~padic_eisenstein.rings.PAdicRing` and :class:`QSeriesRing`, whose
elements are themselves truncated series in ``q``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product as _iproduct
from math import gcd

from . import kernels
from .rings import QQ, PAdicError, PAdicRing, RationalRing, ring_from_tag

__all__ = [
    "INF",
    "SeriesError",
    "RingMismatchError",
    "TruncationError",
    "TruncSeries",
    "MultiSeries",
    "BivarTruncSeries",
    "QSeriesRing",
    "series_arith",
    "compose",
    "reverse",
    "derive",
    "integrate",
    "invert_unit",
    "ring_from_json",
]

INF = math.inf


class SeriesError(ArithmeticError):
    pass


class RingMismatchError(SeriesError):
    pass


class TruncationError(SeriesError):
    """Not enough known terms for the requested operation."""


# ---------------------------------------------------------------------------
# dense helpers: lists of ring elements indexed from exponent 0


def _common_den(xs) -> int:
    d = 1
    for x in xs:
        xd = x.denominator
        if xd != 1 and d % xd:
            d = d // gcd(d, xd) * xd
    return d


def _dmul(ring, a: list, b: list, n: int) -> list:
    """First n coefficients of a*b."""
    if n <= 0:
        return []
    if isinstance(ring, PAdicRing):
        return kernels.mul_trunc(a, b, n, ring.modulus)
    if isinstance(ring, RationalRing):
        a = a[:n]
        b = b[:n]
        da = _common_den(a)
        db = _common_den(b)
        ia = [int(x * da) for x in a]
        ib = [int(x * db) for x in b]
        out = [0] * n
        lb = len(ib)
        for i, ai in enumerate(ia):
            if ai:
                for j in range(min(lb, n - i)):
                    bj = ib[j]
                    if bj:
                        out[i + j] += ai * bj
        den = da * db
        return [Fraction(c, den) for c in out]
    out = [ring.zero] * n
    lb = len(b)
    for i, ai in enumerate(a[:n]):
        if ring.is_zero(ai):
            continue
        for j in range(min(lb, n - i)):
            if not ring.is_zero(b[j]):
                out[i + j] = ring.add(out[i + j], ring.mul(ai, b[j]))
    return out


def _dinv(ring, a: list, n: int) -> list:
    if not a or not ring.is_unit(a[0]):
        raise SeriesError("constant term is not a unit")
    c = ring.inv(a[0])
    if isinstance(ring, PAdicRing):
        return kernels.inv_trunc(a, n, ring.modulus, c)
    out = [ring.zero] * n
    if n == 0:
        return out
    out[0] = c
    la = len(a)
    for i in range(1, n):
        s = ring.zero
        for j in range(1, min(i, la - 1) + 1):
            if not ring.is_zero(a[j]):
                s = ring.add(s, ring.mul(a[j], out[i - j]))
        out[i] = ring.neg(ring.mul(s, c))
    return out


def _dcompose(ring, a: list, b: list, n: int) -> list:
    """First n coefficients of a(b) where b[0] == 0 (Horner)."""
    top = min(len(a), n) - 1
    while top > 0 and ring.is_zero(a[top]):
        top -= 1
    if top < 0:
        return [ring.zero] * n
    acc = [a[top]]
    for i in range(top - 1, -1, -1):
        acc = _dmul(ring, acc, b, n)
        if not acc:
            acc = [ring.zero]
        acc[0] = ring.add(acc[0], a[i])
    acc = acc + [ring.zero] * (n - len(acc))
    return acc[:n]


def _dense(f: "TruncSeries", start: int, n: int) -> list:
    z = f.ring.zero
    return [f.coeffs.get(start + i, z) for i in range(n)]


# ---------------------------------------------------------------------------
# coefficient ring of q-series


class QSeriesRing:
    """Truncated q-series ``base[[q]]/q^M`` used as a coefficient ring."""

    is_exact = False

    def __init__(self, base, M: int):
        if M < 1:
            raise ValueError("q-order M must be positive")
        self.base = base
        self.M = M
        self.zero = TruncSeries({}, M, base)
        self.one = TruncSeries({0: base.one}, M, base)

    @property
    def tag(self) -> str:
        return f"{self.base.tag}[[q]]/q^{self.M}"

    @property
    def p(self):
        return getattr(self.base, "p", None)

    @property
    def K(self):
        return getattr(self.base, "K", None)

    def __eq__(self, other):
        return isinstance(other, QSeriesRing) and other.base == self.base and other.M == self.M

    def __hash__(self):
        return hash((self.base, self.M))

    def __repr__(self):
        return f"QSeriesRing({self.base!r}, {self.M})"

    def coerce(self, x) -> "TruncSeries":
        if isinstance(x, TruncSeries):
            if x.ring != self.base:
                raise RingMismatchError(f"{x.ring.tag} is not {self.base.tag}")
            return x.truncate(self.M) if x.trunc > self.M else x
        c = self.base.coerce(x)
        return TruncSeries({0: c}, self.M, self.base)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, x) -> bool:
        return not x.coeffs

    def is_unit(self, x) -> bool:
        return 0 in x.coeffs and self.base.is_unit(x.coeffs[0])

    def inv(self, x):
        return invert_unit(x)

    def div_int(self, x, k: int):
        return x.map(lambda c: self.base.div_int(c, k))

    def to_json(self, x):
        return x.to_json(with_ring=False)

    def from_json(self, v):
        return TruncSeries.from_json(v, ring=self.base)

    def to_str(self, x) -> str:
        return x.pretty("q")

    def from_str(self, s):
        raise ValueError("q-series values are serialized as nested objects")

    def constant(self, x):
        return x.coeffs.get(0, self.base.zero)


def ring_from_json(tag: str):
    if "[[q]]/q^" in tag:
        base, M = tag.split("[[q]]/q^")
        return QSeriesRing(ring_from_tag(base), int(M))
    return ring_from_tag(tag)


# ---------------------------------------------------------------------------


class TruncSeries:
    """Sparse truncated Laurent series ``sum c_e t^e + O(t^trunc)``."""

    __slots__ = ("coeffs", "trunc", "ring")

    def __init__(self, coeffs: dict, trunc, ring=QQ):
        if trunc != INF:
            trunc = int(trunc)
        clean = {}
        for e, c in coeffs.items():
            if e >= trunc:
                continue
            c = ring.coerce(c)
            if not ring.is_zero(c):
                clean[int(e)] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @classmethod
    def _raw(cls, coeffs: dict, trunc, ring) -> "TruncSeries":
        """Build from already-coerced coefficients, dropping zeros and the tail."""
        obj = object.__new__(cls)
        clean = {e: c for e, c in coeffs.items() if e < trunc and not ring.is_zero(c)}
        object.__setattr__(obj, "coeffs", clean)
        object.__setattr__(obj, "trunc", trunc)
        object.__setattr__(obj, "ring", ring)
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_list(cls, values, trunc=None, ring=QQ, start: int = 0) -> "TruncSeries":
        values = list(values)
        if trunc is None:
            trunc = start + len(values)
        return cls({start + i: v for i, v in enumerate(values)}, trunc, ring)

    @classmethod
    def zero(cls, ring=QQ, trunc=INF) -> "TruncSeries":
        return cls({}, trunc, ring)

    @classmethod
    def one(cls, ring=QQ, trunc=INF) -> "TruncSeries":
        return cls({0: ring.one}, trunc, ring)

    @classmethod
    def monomial(cls, e: int, c=1, ring=QQ, trunc=INF) -> "TruncSeries":
        return cls({e: c}, trunc, ring)

    @classmethod
    def gen(cls, ring=QQ, trunc=INF) -> "TruncSeries":
        return cls({1: ring.one}, trunc, ring)

    # -- inspection --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.trunc == INF

    def ord(self):
        """Lowest stored exponent; ``trunc`` for a series with no known nonzero term."""
        if not self.coeffs:
            return self.trunc
        return min(self.coeffs)

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def pole_order(self) -> int:
        o = self.ord()
        return -o if o != INF and o < 0 else 0

    def __getitem__(self, e: int):
        if e >= self.trunc:
            raise TruncationError(f"coefficient t^{e} unknown (series is O(t^{self.trunc}))")
        return self.coeffs.get(e, self.ring.zero)

    coefficient = __getitem__

    def leading(self):
        return self.coeffs[self.ord()]

    def truncate(self, D) -> "TruncSeries":
        if D >= self.trunc:
            return self
        return TruncSeries._raw(self.coeffs, D, self.ring)

    def dense(self, n: int, start: int = 0) -> list:
        if start + n > self.trunc:
            raise TruncationError(f"need t^{start + n - 1}, series is O(t^{self.trunc})")
        return _dense(self, start, n)

    def map(self, fn, ring=None) -> "TruncSeries":
        ring = ring or self.ring
        return TruncSeries({e: fn(c) for e, c in self.coeffs.items()}, self.trunc, ring)

    def change_ring(self, ring) -> "TruncSeries":
        """Reduce / embed coefficients into another ring (e.g. QQ -> Zp)."""
        return TruncSeries({e: ring.coerce(c) for e, c in self.coeffs.items()}, self.trunc, ring)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ring == other.ring and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.trunc, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    def agrees(self, other: "TruncSeries", D=None) -> bool:
        """Equality of all coefficients below ``min(D, trunc_self, trunc_other)``."""
        lim = min(self.trunc, other.trunc)
        if D is not None:
            lim = min(lim, D)
        if lim == INF:
            return self.coeffs == other.coeffs
        diff = self.truncate(lim) - other.truncate(lim)
        return not diff.coeffs

    def __repr__(self):
        return f"TruncSeries({self.pretty()}, ring={self.ring.tag})"

    def pretty(self, var: str = "t") -> str:
        parts = []
        for e in sorted(self.coeffs):
            c = self.ring.to_str(self.coeffs[e])
            if isinstance(self.ring, QSeriesRing):
                c = f"({c})"
            parts.append(c if e == 0 else f"{c}*{var}^{e}")
        body = " + ".join(parts) if parts else "0"
        if self.trunc != INF:
            body += f" + O({var}^{self.trunc})"
        return body

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "TruncSeries") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring.tag} vs {other.ring.tag}")

    def _lift(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        return TruncSeries({0: self.ring.coerce(other)}, INF, self.ring)

    def __add__(self, other):
        other = self._lift(other)
        ring = self.ring
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = ring.add(out[e], c) if e in out else c
        return TruncSeries._raw(out, min(self.trunc, other.trunc), ring)

    __radd__ = __add__

    def __neg__(self):
        ring = self.ring
        return TruncSeries._raw({e: ring.neg(c) for e, c in self.coeffs.items()}, self.trunc, ring)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        ring = self.ring
        c = ring.coerce(c)
        return TruncSeries._raw({e: ring.mul(x, c) for e, x in self.coeffs.items()}, self.trunc, ring)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k."""
        return TruncSeries._raw({e + k: c for e, c in self.coeffs.items()}, self.trunc + k, self.ring)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        o1, o2 = self.ord(), other.ord()
        D = min(self.trunc + o2, other.trunc + o1)
        if not self.coeffs or not other.coeffs:
            return TruncSeries._raw({}, D, self.ring)
        if D == INF:
            n = self.degree() + other.degree() - o1 - o2 + 1
        else:
            n = int(D - o1 - o2)
        if n <= 0:
            return TruncSeries._raw({}, D, self.ring)
        a = _dense(self, o1, min(n, self.degree() - o1 + 1))
        b = _dense(other, o2, min(n, other.degree() - o2 + 1))
        c = _dmul(self.ring, a, b, n)
        base = o1 + o2
        return TruncSeries._raw({base + i: x for i, x in enumerate(c)}, D, self.ring)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            return _laurent_inverse(self) ** (-e)
        result = TruncSeries.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __call__(self, g: "TruncSeries") -> "TruncSeries":
        return compose(self, g)

    # -- serialization -----------------------------------------------------

    def to_json(self, with_ring: bool = True) -> dict:
        ring = self.ring
        doc = {
            "trunc": None if self.trunc == INF else self.trunc,
            "coeffs": [[e, ring.to_json(self.coeffs[e])] for e in sorted(self.coeffs)],
        }
        if with_ring:
            doc = {"ring": ring.tag, **doc}
        return doc

    @classmethod
    def from_json(cls, doc: dict, ring=None) -> "TruncSeries":
        if ring is None:
            ring = ring_from_json(doc["ring"])
        trunc = INF if doc.get("trunc") is None else doc["trunc"]
        return cls({int(e): ring.from_json(v) for e, v in doc["coeffs"]}, trunc, ring)


# ---------------------------------------------------------------------------
# operations


def series_arith(op: str, f: TruncSeries, g) -> TruncSeries:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown series operation {op!r}")


def invert_unit(f: TruncSeries) -> TruncSeries:
    """Multiplicative inverse of a power series with unit constant term."""
    if f.trunc == INF and set(f.coeffs) == {0} and f.ring.is_unit(f.coeffs[0]):
        return TruncSeries._raw({0: f.ring.inv(f.coeffs[0])}, INF, f.ring)
    if f.trunc == INF:
        raise TruncationError("inverse of an exact polynomial needs an explicit truncation")
    if f.ord() < 0:
        raise SeriesError("invert_unit expects a power series")
    c0 = f.coeffs.get(0)
    if c0 is None or not f.ring.is_unit(c0):
        raise SeriesError("constant term is not a unit")
    n = int(f.trunc)
    inv = _dinv(f.ring, _dense(f, 0, n), n)
    return TruncSeries._raw(dict(enumerate(inv)), f.trunc, f.ring)


def _laurent_inverse(g: TruncSeries) -> TruncSeries:
    """1/g for g = c t^v (1 + ...) with c a unit."""
    v = g.ord()
    if v == INF or not g.coeffs:
        raise SeriesError("inverse of zero")
    c = g.coeffs[v]
    if not g.ring.is_unit(c):
        raise SeriesError("leading coefficient is not a unit")
    w = g.shift(-v)
    if w.trunc == INF:
        raise TruncationError("inverse of an exact polynomial needs an explicit truncation")
    return invert_unit(w).shift(-v)


def derive(f: TruncSeries) -> TruncSeries:
    ring = f.ring
    out = {}
    for e, c in f.coeffs.items():
        if e:
            out[e - 1] = ring.mul(c, ring.coerce(e))
    return TruncSeries._raw(out, f.trunc - 1, ring)


def integrate(f: TruncSeries) -> TruncSeries:
    """Antiderivative with zero constant term."""
    ring = f.ring
    if -1 in f.coeffs:
        raise SeriesError("t^-1 has no Laurent antiderivative")
    out = {}
    for e, c in f.coeffs.items():
        try:
            out[e + 1] = ring.div_int(c, e + 1)
        except PAdicError as exc:
            raise SeriesError(
                f"non-invertible denominator {e + 1}; integrate in rational mode") from exc
    return TruncSeries._raw(out, f.trunc + 1, ring)


def _compose_trunc(f: TruncSeries, g: TruncSeries, v: int):
    D = v * f.trunc if f.trunc != INF else INF
    for e in f.coeffs:
        if e != 0:
            D = min(D, e * v + g.trunc - v)
    return D


def compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f(g(t)) with the truncation rule documented in the module docstring."""
    f._check(g)
    ring = f.ring
    v = g.ord()
    if not g.coeffs:
        if f.ord() < 0:
            raise SeriesError("cannot substitute a zero series into a Laurent series")
        if f.trunc <= 0:
            return TruncSeries._raw({}, 0, ring)
        c = f.coeffs.get(0, ring.zero)
        nonconst = f.trunc != INF or any(e > 0 for e in f.coeffs)
        D = g.trunc if nonconst else INF
        return TruncSeries._raw({0: c}, D, ring)
    if v < 1:
        raise SeriesError("compose needs ord(g) >= 1")
    negative = [e for e in f.coeffs if e < 0]
    if negative and v != 1:
        raise SeriesError("Laurent composition needs ord(g) = 1")
    if negative and not ring.is_unit(g.coeffs[1]):
        raise SeriesError("Laurent composition needs a unit leading coefficient")
    D = _compose_trunc(f, g, v)
    if D == INF:
        # exact polynomial into exact polynomial
        result = TruncSeries.zero(ring)
        power = TruncSeries.one(ring)
        for e in range(f.degree() + 1):
            if e in f.coeffs:
                result = result + power.scale(f.coeffs[e])
            power = power * g
        return result
    n = int(D)
    out = {}
    if n > 0:
        pos_top = max((e for e in f.coeffs if e >= 0), default=-1)
        if pos_top >= 0:
            a = _dense(f, 0, min(pos_top + 1, n))
            # unknown coefficients of f or g only reach exponents >= D
            b = [g.coeffs.get(i, ring.zero) for i in range(n)]
            vals = _dcompose(ring, a, b, n)
            out = {i: x for i, x in enumerate(vals)}
    if negative and n + max(-e for e in negative) > 0:
        # 1/g = t^-1 * (1/w), w = g / t; only the known part of w matters below D
        m = max(-e for e in negative)
        width = n + m  # exponents of (1/w)^k needed: up to n - 1 + k
        w = g.shift(-1)
        wl = [w.coeffs.get(i, ring.zero) for i in range(width)]
        winv = _dinv(ring, wl, width)
        power = [ring.one] + [ring.zero] * (width - 1)
        for k in range(1, m + 1):
            power = _dmul(ring, power, winv, width)
            c = f.coeffs.get(-k)
            if c is None:
                continue
            for i in range(width):
                e = i - k
                if e >= n:
                    break
                x = power[i]
                if not ring.is_zero(x):
                    term = ring.mul(c, x)
                    out[e] = ring.add(out[e], term) if e in out else term
    return TruncSeries._raw(out, D, ring)


def reverse(f: TruncSeries) -> TruncSeries:
    """Compositional inverse of f = a t + ..., a a unit (Newton iteration)."""
    ring = f.ring
    if f.ord() != 1 or not f.coeffs:
        raise SeriesError("reverse needs ord(f) = 1")
    a = f.coeffs[1]
    if not ring.is_unit(a):
        raise SeriesError("leading coefficient of f is not a unit")
    if f.trunc == INF:
        raise TruncationError("reverse of an exact polynomial needs an explicit truncation")
    n = int(f.trunc)
    fd = _dense(f, 0, n)
    fpd = [ring.mul(fd[i], ring.coerce(i)) for i in range(1, n)] + [ring.zero]
    g = [ring.zero] * n
    if n > 1:
        g[1] = ring.inv(a)
    prec = 2
    while prec < n:
        prec = min(2 * prec, n)
        fg = _dcompose(ring, fd, g, prec)
        fg[1] = ring.sub(fg[1], ring.one) if prec > 1 else fg[1]
        fpg = _dcompose(ring, fpd, g, prec)
        corr = _dmul(ring, fg, _dinv(ring, fpg, prec), prec)
        g = [ring.sub(g[i], corr[i]) for i in range(prec)] + g[prec:]
    return TruncSeries._raw(dict(enumerate(g)), f.trunc, ring)


# ---------------------------------------------------------------------------
# multivariate series with total-degree truncation


class MultiSeries:
    """Truncated series in several variables; unknown from total degree ``trunc`` on."""

    __slots__ = ("coeffs", "trunc", "ring", "nvars")

    def __init__(self, coeffs: dict, trunc, nvars: int, ring=QQ):
        if trunc != INF:
            trunc = int(trunc)
        clean = {}
        for e, c in coeffs.items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e) < 0:
                raise SeriesError(f"bad exponent {e}")
            if sum(e) >= trunc:
                continue
            c = ring.coerce(c)
            if not ring.is_zero(c):
                clean[e] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "nvars", nvars)

    def __setattr__(self, name, value):
        raise AttributeError("MultiSeries is immutable")

    @classmethod
    def _raw(cls, coeffs, trunc, nvars, ring):
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", {e: c for e, c in coeffs.items()
                                           if sum(e) < trunc and not ring.is_zero(c)})
        object.__setattr__(obj, "trunc", trunc)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "nvars", nvars)
        return obj

    @classmethod
    def variable(cls, i: int, nvars: int, ring=QQ, trunc=INF):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): ring.one}, trunc, nvars, ring)

    @classmethod
    def constant(cls, c, nvars: int, ring=QQ, trunc=INF):
        return cls({(0,) * nvars: c}, trunc, nvars, ring)

    @classmethod
    def embed(cls, f: TruncSeries, i: int, nvars: int):
        """The univariate series f in the i-th variable."""
        if f.ord() < 0:
            raise SeriesError("cannot embed a Laurent series")
        coeffs = {}
        for e, c in f.coeffs.items():
            ex = [0] * nvars
            ex[i] = e
            coeffs[tuple(ex)] = c
        return cls._raw(coeffs, f.trunc, nvars, f.ring)

    def ord(self):
        if not self.coeffs:
            return self.trunc
        return min(sum(e) for e in self.coeffs)

    def __getitem__(self, e):
        e = tuple(e)
        if sum(e) >= self.trunc:
            raise TruncationError(f"coefficient {e} unknown")
        return self.coeffs.get(e, self.ring.zero)

    def truncate(self, D):
        if D >= self.trunc:
            return self
        return MultiSeries._raw(self.coeffs, D, self.nvars, self.ring)

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (self.ring, self.trunc, self.nvars, self.coeffs) == (
            other.ring, other.trunc, other.nvars, other.coeffs)

    def agrees(self, other: "MultiSeries", D=None) -> bool:
        lim = min(self.trunc, other.trunc)
        if D is not None:
            lim = min(lim, D)
        diff = self.truncate(lim) - other.truncate(lim)
        return not diff.coeffs

    def _lift(self, other):
        if isinstance(other, MultiSeries):
            if other.ring != self.ring or other.nvars != self.nvars:
                raise RingMismatchError("multivariate ring mismatch")
            return other
        return MultiSeries.constant(self.ring.coerce(other), self.nvars, self.ring)

    def __add__(self, other):
        other = self._lift(other)
        ring = self.ring
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = ring.add(out[e], c) if e in out else c
        return MultiSeries._raw(out, min(self.trunc, other.trunc), self.nvars, ring)

    __radd__ = __add__

    def __neg__(self):
        ring = self.ring
        return MultiSeries._raw({e: ring.neg(c) for e, c in self.coeffs.items()},
                                self.trunc, self.nvars, ring)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        ring = self.ring
        c = ring.coerce(c)
        return MultiSeries._raw({e: ring.mul(x, c) for e, x in self.coeffs.items()},
                                self.trunc, self.nvars, ring)

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        other = self._lift(other)
        ring = self.ring
        D = min(self.trunc + other.ord(), other.trunc + self.ord())
        # bucket the right factor by total degree so the inner loop can stop early
        right = sorted(((sum(e), e, c) for e, c in other.coeffs.items()), key=lambda x: x[0])
        out = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for d2, e2, c2 in right:
                if d1 + d2 >= D:
                    break
                e = tuple(a + b for a, b in zip(e1, e2))
                term = ring.mul(c1, c2)
                out[e] = ring.add(out[e], term) if e in out else term
        return MultiSeries._raw(out, D, self.nvars, ring)

    __rmul__ = __mul__

    def partial(self, i: int) -> "MultiSeries":
        ring = self.ring
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                ex = list(e)
                ex[i] -= 1
                out[tuple(ex)] = ring.mul(c, ring.coerce(e[i]))
        return MultiSeries._raw(out, self.trunc - 1, self.nvars, ring)

    def substitute(self, args: list["MultiSeries"]) -> "MultiSeries":
        """self(args[0], ..., args[n-1]); every argument must have zero constant term."""
        if len(args) != self.nvars:
            raise SeriesError("wrong number of arguments")
        ring = self.ring
        target = args[0].nvars
        vs = [a.ord() for a in args]
        if min(vs) < 1:
            raise SeriesError("substituted series need zero constant term")
        D = INF
        if self.trunc != INF:
            D = min(vs) * self.trunc
        for a in args:
            for e in self.coeffs:
                if sum(e):
                    D = min(D, sum(e) * min(vs) + a.trunc - min(vs))
        powers = []
        for a in args:
            pw = [MultiSeries.constant(ring.one, target, ring).truncate(D)]
            powers.append(pw)
        result = MultiSeries._raw({}, D, target, ring)
        for e, c in self.coeffs.items():
            term = MultiSeries.constant(c, target, ring).truncate(D)
            for i, k in enumerate(e):
                pw = powers[i]
                while len(pw) <= k:
                    pw.append((pw[-1] * args[i]).truncate(D))
                if k:
                    term = (term * pw[k]).truncate(D)
            result = result + term
        return result.truncate(D)

    def is_symmetric(self) -> bool:
        if self.nvars != 2:
            return False
        return all(self.coeffs.get((b, a)) == c for (a, b), c in self.coeffs.items())

    def to_json(self) -> dict:
        return {
            "ring": self.ring.tag,
            "nvars": self.nvars,
            "trunc": None if self.trunc == INF else self.trunc,
            "coeffs": [[list(e), self.ring.to_json(self.coeffs[e])] for e in sorted(self.coeffs)],
        }


class BivarTruncSeries(MultiSeries):
    """Two-variable series; ``symmetric`` reports whether f(t1, t2) = f(t2, t1)."""

    def __init__(self, coeffs: dict, trunc, ring=QQ):
        super().__init__(coeffs, trunc, 2, ring)

    @property
    def symmetric(self) -> bool:
        return self.is_symmetric()

    @classmethod
    def from_multi(cls, m: MultiSeries) -> "BivarTruncSeries":
        if m.nvars != 2:
            raise SeriesError("not a bivariate series")
        obj = object.__new__(cls)
        for name in ("coeffs", "trunc", "ring", "nvars"):
            object.__setattr__(obj, name, getattr(m, name))
        return obj


def univariate_of(f: TruncSeries, g: MultiSeries) -> MultiSeries:
    """f(g) for univariate f and multivariate g with zero constant term."""
    if f.ord() < 0:
        raise SeriesError("Laurent f cannot be composed with a multivariate series")
    ring = f.ring
    v = g.ord()
    if v < 1:
        raise SeriesError("g must have zero constant term")
    D = f.trunc * v if f.trunc != INF else INF
    for e in f.coeffs:
        if e:
            D = min(D, e * v + g.trunc - v)
    top = f.degree()
    result = MultiSeries.constant(f.coeffs.get(top, ring.zero), g.nvars, ring).truncate(D)
    for e in range(top - 1, -1, -1):
        result = (result * g).truncate(D) + f.coeffs.get(e, ring.zero)
    return result.truncate(D)


def _all_exponents(nvars: int, D: int):
    for e in _iproduct(range(D), repeat=nvars):
        if sum(e) < D:
            yield e
