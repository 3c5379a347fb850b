"""Integral p-adic Fourier theory and Eisenstein measures in exact arithmetic."""

from __future__ import annotations

from .kernels import BACKEND
from .rings import QQ, PAdicRing, PAdicScalar, bernoulli, binomial, divisor_sigma, vp, vp_factorial
from .series import INF, QSeriesRing, TruncSeries, compose, derive, integrate, invert_unit, reverse

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INF",
    "QQ",
    "PAdicRing",
    "PAdicScalar",
    "QSeriesRing",
    "TruncSeries",
    "bernoulli",
    "binomial",
    "compose",
    "derive",
    "divisor_sigma",
    "integrate",
    "invert_unit",
    "reverse",
    "vp",
    "vp_factorial",
]
