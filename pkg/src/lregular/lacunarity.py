"""Empirical coefficient-density measurement modulo powers of two.

delta_r(F, M; X) = #{1 <= n <= X : a(n) == r (mod M)} / X, kept as an
exact rational.  A stream is lacunary mod M when delta_0 tends to 1; at
finite X this module only measures, it does not prove.  The n = 0 term is
excluded by the counting convention (n ranges over 1..X), which keeps
committed baselines reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import qseries as qs
from .partitions import build_named_series
from .qseries import CoefficientRing, QuadraticForm, Series

DEFAULT_CHECKPOINTS = (1_000, 10_000, 100_000, 1_000_000)


@dataclass(frozen=True)
class DensityPoint:
    X: int
    M: int
    r: int
    count: int
    delta: Fraction

    def to_json_dict(self) -> dict:
        return {
            "X": self.X,
            "M": self.M,
            "r": self.r,
            "count": self.count,
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
        }


def _validate_modulus(series: Series, M: int):
    if M < 2:
        raise ValueError("modulus must be at least 2")
    if not series.ring.is_exact:
        if M & (M - 1):
            raise ValueError(f"mod-2^k series only measure power-of-two moduli, got {M}")
        if M > series.ring.modulus:
            raise ValueError(f"modulus {M} exceeds ring modulus {series.ring.modulus}")


def density(series: Series, M: int, r: int, X: int) -> DensityPoint:
    """Exact count of residues r mod M among coefficients 1..X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    if series.trunc < X:
        raise ValueError(f"series truncated at {series.trunc}, density needs {X}")
    _validate_modulus(series, M)
    r %= M
    if series.ring.is_exact:
        count = sum(1 for n in range(1, X + 1) if series[n] % M == r)
    else:
        arr = series.array()
        count = int(np.count_nonzero((arr[1 : X + 1] % arr.dtype.type(M)) == r))
    return DensityPoint(X=X, M=M, r=r, count=count, delta=Fraction(count, X))


def ring_for_modulus(M: int) -> CoefficientRing:
    if M < 2 or M & (M - 1):
        raise ValueError(f"density streams are measured mod powers of two, got {M}")
    return CoefficientRing.mod_pow2(M.bit_length() - 1)


def density_curve(series_spec: str, M: int, checkpoints=DEFAULT_CHECKPOINTS, r: int = 0) -> list[DensityPoint]:
    """Build the named stream once at the largest checkpoint and measure
    delta_r at each X, unsmoothed."""
    pts = sorted(set(int(x) for x in checkpoints))
    if not pts or pts[0] < 1:
        raise ValueError("checkpoints must be positive")
    series = build_named_series(series_spec, pts[-1], ring_for_modulus(M))
    return [density(series, M, r, X) for X in pts]


def theta_product_parity(form1: QuadraticForm, form2: QuadraticForm, T: int) -> Series:
    """Mod-2 product of the two theta series sum q^{r(n)} over n in Z.

    Products of two quadratic-exponent thetas are classically lacunary mod
    2; this builds the actual parity stream for measuring and for matching
    against eta-quotient expressions.
    """
    a = qs.theta_series(form1, T, qs.MOD2)
    b = qs.theta_series(form2, T, qs.MOD2)
    return qs.mul(a, b)
