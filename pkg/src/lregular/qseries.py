"""Truncated formal power series in q over exact integers or Z/2^k.

A Series holds coefficients c[0..T] of sum_n c(n) q^n.  Operations never
report coefficients beyond the truncation, and binary operations truncate
to the smaller T of the two operands (no silent extension).  Values are
immutable after construction and safe to share across threads.

Two coefficient rings are supported: exact arbitrary-precision signed
integers, and Z/2^k for 1 <= k <= 63.  Mod-2^k coefficients are stored in
the narrowest unsigned numpy dtype that holds them; products go through
the Kronecker-substitution kernels in _fastmul.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _fastmul


@dataclass(frozen=True)
class CoefficientRing:
    """Coefficient domain: bits=None for exact integers, k for Z/2^k."""

    bits: Optional[int] = None

    def __post_init__(self):
        if self.bits is not None and not 1 <= self.bits <= 63:
            raise ValueError(f"mod-2^k ring needs 1 <= k <= 63, got {self.bits}")

    @staticmethod
    def exact() -> "CoefficientRing":
        return CoefficientRing(None)

    @staticmethod
    def mod_pow2(k: int) -> "CoefficientRing":
        return CoefficientRing(k)

    @property
    def is_exact(self) -> bool:
        return self.bits is None

    @property
    def modulus(self) -> Optional[int]:
        return None if self.bits is None else 1 << self.bits

    @property
    def name(self) -> str:
        return "exact" if self.bits is None else f"mod2^{self.bits}"

    @staticmethod
    def parse(name: str) -> "CoefficientRing":
        if name == "exact":
            return CoefficientRing.exact()
        if name.startswith("mod2^"):
            return CoefficientRing.mod_pow2(int(name[5:]))
        raise ValueError(f"unknown ring name {name!r}")

    def dtype(self):
        k = self.bits
        if k is None:
            raise ValueError("exact ring has no numpy dtype")
        if k <= 8:
            return np.uint8
        if k <= 16:
            return np.uint16
        if k <= 32:
            return np.uint32
        return np.uint64

    def reduce(self, value: int) -> int:
        return int(value) if self.bits is None else int(value) & ((1 << self.bits) - 1)


EXACT = CoefficientRing.exact()
MOD2 = CoefficientRing.mod_pow2(1)


class Series:
    """Immutable truncated power series; index with s[n] for 0 <= n <= s.trunc."""

    __slots__ = ("ring", "trunc", "_c")

    def __init__(self, ring: CoefficientRing, coeffs: Iterable[int], trunc: Optional[int] = None):
        data = list(coeffs)
        if trunc is None:
            trunc = len(data) - 1
        if trunc < 0 or len(data) != trunc + 1:
            raise ValueError(f"need trunc+1 = {trunc + 1} coefficients, got {len(data)}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "trunc", trunc)
        if ring.is_exact:
            object.__setattr__(self, "_c", tuple(int(c) for c in data))
        else:
            mask = (1 << ring.bits) - 1
            arr = np.array([int(c) & mask for c in data], dtype=ring.dtype())
            arr.setflags(write=False)
            object.__setattr__(self, "_c", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def _wrap(cls, ring: CoefficientRing, data) -> "Series":
        """Internal no-copy constructor; data must already be reduced/typed."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        if ring.is_exact:
            data = tuple(data)
        else:
            if not isinstance(data, np.ndarray) or data.dtype != ring.dtype():
                data = np.asarray(data, dtype=ring.dtype())
            data.setflags(write=False)
        object.__setattr__(obj, "trunc", len(data) - 1)
        object.__setattr__(obj, "_c", data)
        return obj

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.trunc:
            raise IndexError(f"coefficient {n} beyond truncation {self.trunc}")
        return int(self._c[n])

    def coeffs(self) -> list[int]:
        return [int(c) for c in self._c]

    def array(self) -> np.ndarray:
        """Raw mod-2^k coefficient array (read-only); exact ring has none."""
        if self.ring.is_exact:
            raise ValueError("exact series stores Python ints, not an array")
        return self._c

    def nonzero_count(self) -> int:
        if self.ring.is_exact:
            return sum(1 for c in self._c if c)
        return int(np.count_nonzero(self._c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return compare(self, other).equal

    # equality compares only up to the shorter truncation, so no consistent
    # hash exists; Series values are not dict keys
    __hash__ = None

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scalar_mul(other, self)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return scalar_mul(other, self)
        return NotImplemented

    def __repr__(self):
        terms = []
        for n, c in enumerate(self.coeffs()):
            if c:
                terms.append(f"{c}*q^{n}" if n else f"{c}")
            if len(terms) == 6:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"Series({self.ring.name}, T={self.trunc}: {body})"

    def to_json_dict(self) -> dict:
        return {"ring": self.ring.name, "trunc": self.trunc, "coeffs": self.coeffs()}

    @staticmethod
    def from_json_dict(d: dict) -> "Series":
        return Series(CoefficientRing.parse(d["ring"]), d["coeffs"], d["trunc"])


@dataclass(frozen=True)
class SeriesComparison:
    equal: bool
    first_mismatch: Optional[int]
    compared_through: int
    truncations_differ: bool


@dataclass(frozen=True)
class QuadraticForm:
    """r(n) = a n^2 + b n + c with a > 0."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("quadratic form must have positive leading coefficient")

    def __call__(self, n: int) -> int:
        return (self.a * n + self.b) * n + self.c


def _require_same_ring(x: Series, y: Series):
    if x.ring != y.ring:
        raise ValueError(f"ring mismatch: {x.ring.name} vs {y.ring.name}")


# ---------------------------------------------------------------------------
# constructors

def zero(ring: CoefficientRing, T: int) -> Series:
    if ring.is_exact:
        return Series._wrap(ring, (0,) * (T + 1))
    return Series._wrap(ring, np.zeros(T + 1, dtype=ring.dtype()))


def one(ring: CoefficientRing, T: int) -> Series:
    return monomial(ring, 0, T)


def monomial(ring: CoefficientRing, j: int, T: int, coefficient: int = 1) -> Series:
    if not 0 <= j <= T:
        raise ValueError(f"monomial exponent {j} outside [0, {T}]")
    if ring.is_exact:
        data = [0] * (T + 1)
        data[j] = int(coefficient)
        return Series._wrap(ring, data)
    arr = np.zeros(T + 1, dtype=ring.dtype())
    arr[j] = ring.reduce(coefficient)
    return Series._wrap(ring, arr)


# ---------------------------------------------------------------------------
# ring operations

def add(x: Series, y: Series) -> Series:
    _require_same_ring(x, y)
    T = min(x.trunc, y.trunc)
    if x.ring.is_exact:
        return Series._wrap(x.ring, [a + b for a, b in zip(x._c[: T + 1], y._c[: T + 1])])
    mask = np.uint64((1 << x.ring.bits) - 1)
    s = (x._c[: T + 1].astype(np.uint64) + y._c[: T + 1]) & mask
    return Series._wrap(x.ring, s.astype(x.ring.dtype()))


def sub(x: Series, y: Series) -> Series:
    return add(x, negate(y))


def negate(x: Series) -> Series:
    if x.ring.is_exact:
        return Series._wrap(x.ring, [-c for c in x._c])
    mask = np.uint64((1 << x.ring.bits) - 1)
    return Series._wrap(x.ring, ((np.uint64(0) - x._c.astype(np.uint64)) & mask).astype(x.ring.dtype()))


def scalar_mul(c: int, x: Series) -> Series:
    if x.ring.is_exact:
        return Series._wrap(x.ring, [c * v for v in x._c])
    mask = np.uint64((1 << x.ring.bits) - 1)
    cm = np.uint64(x.ring.reduce(c))
    return Series._wrap(x.ring, ((x._c.astype(np.uint64) * cm) & mask).astype(x.ring.dtype()))


def mul(x: Series, y: Series) -> Series:
    """Cauchy product truncated to min(x.trunc, y.trunc)."""
    _require_same_ring(x, y)
    if x.ring.is_exact:
        return Series._wrap(x.ring, _fastmul.mul_exact(x._c, y._c))
    k = x.ring.bits
    if k == 1 and x._c is y._c:
        n = x.trunc + 1
        return Series._wrap(x.ring, _fastmul.square_mod2(x._c, n))
    return Series._wrap(x.ring, _fastmul.mul_mod2k(x._c, y._c, k))


def power(x: Series, n: int) -> Series:
    """x^n for n >= 0 by binary exponentiation at x's truncation."""
    if n < 0:
        raise ValueError("power expects n >= 0; use inverse for negative exponents")
    result = one(x.ring, x.trunc)
    base = x
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def _pad(x: Series, T: int) -> Series:
    """Internal zero-extension used by Newton iteration only."""
    if T <= x.trunc:
        return truncate(x, T)
    if x.ring.is_exact:
        return Series._wrap(x.ring, x._c + (0,) * (T - x.trunc))
    arr = np.zeros(T + 1, dtype=x.ring.dtype())
    arr[: x.trunc + 1] = x._c
    return Series._wrap(x.ring, arr)


def inverse(x: Series) -> Series:
    """Multiplicative inverse by Newton iteration: mul(x, inverse(x)) = 1 to T.

    The constant term must be a unit: odd for Z/2^k, and +-1 for exact
    integers (all eta-quotients used here have constant term 1, and this
    keeps exact coefficients integral).
    """
    c0 = x[0]
    if x.ring.is_exact:
        if c0 not in (1, -1):
            raise ValueError(f"exact inverse needs constant term +-1, got {c0}")
        seed = c0
    else:
        if c0 % 2 == 0:
            raise ValueError(f"mod-2^k inverse needs odd constant term, got {c0}")
        seed = pow(c0, -1, x.ring.modulus)
    T = x.trunc
    cur = Series(x.ring, [seed])
    t = 0
    while t < T:
        t = min(2 * t + 1, T)
        xt = truncate(x, t)
        curp = _pad(cur, t)
        u = mul(xt, curp)
        two_minus_u = add(monomial(x.ring, 0, t, 2), negate(u))
        cur = mul(curp, two_minus_u)
    return cur


# ---------------------------------------------------------------------------
# structural operations

def truncate(x: Series, T: int) -> Series:
    if T > x.trunc:
        raise ValueError(f"cannot extend truncation {x.trunc} to {T}")
    if T == x.trunc:
        return x
    return Series._wrap(x.ring, x._c[: T + 1])


def dissect(x: Series, d: int, rclass: int) -> Series:
    """Arithmetic-progression extraction: result[n] = x[d*n + rclass]."""
    if d < 1 or not 0 <= rclass < d:
        raise ValueError(f"dissect needs d >= 1 and 0 <= rclass < d, got d={d}, rclass={rclass}")
    T = (x.trunc - rclass) // d
    if T < 0:
        raise ValueError(f"truncation {x.trunc} too small to dissect at residue {rclass}")
    if x.ring.is_exact:
        return Series._wrap(x.ring, x._c[rclass : rclass + d * T + 1 : d])
    return Series._wrap(x.ring, x._c[rclass : rclass + d * T + 1 : d].copy())


def inflate(x: Series, d: int, tmax: Optional[int] = None) -> Series:
    """Substitution q -> q^d: coefficient at d*n is x[n], zero elsewhere.

    The natural truncation is x.trunc * d; tmax may cap it, or extend it up
    to the largest T whose d-multiples are all covered by x.
    """
    if d < 1:
        raise ValueError("inflate needs d >= 1")
    natural = x.trunc * d
    if tmax is None:
        T = natural
    elif tmax <= natural + d - 1:
        T = tmax
    else:
        raise ValueError(f"inflate to {tmax} exceeds known range {natural + d - 1}")
    if x.ring.is_exact:
        data = [0] * (T + 1)
        for n, c in enumerate(x._c):
            if d * n > T:
                break
            data[d * n] = c
        return Series._wrap(x.ring, data)
    arr = np.zeros(T + 1, dtype=x.ring.dtype())
    m = T // d
    arr[0 : d * m + 1 : d] = x._c[: m + 1]
    return Series._wrap(x.ring, arr)


def shift(x: Series, j: int) -> Series:
    """Multiply by q^j (j >= 0); truncation grows to x.trunc + j."""
    if j < 0:
        raise ValueError("shift needs j >= 0")
    if j == 0:
        return x
    if x.ring.is_exact:
        return Series._wrap(x.ring, (0,) * j + x._c)
    arr = np.zeros(x.trunc + j + 1, dtype=x.ring.dtype())
    arr[j:] = x._c
    return Series._wrap(x.ring, arr)


def compare(x: Series, y: Series) -> SeriesComparison:
    """Coefficient-wise equality up to the smaller truncation, with a flag
    when the truncations differ."""
    _require_same_ring(x, y)
    T = min(x.trunc, y.trunc)
    flag = x.trunc != y.trunc
    if x.ring.is_exact:
        for n in range(T + 1):
            if x._c[n] != y._c[n]:
                return SeriesComparison(False, n, T, flag)
        return SeriesComparison(True, None, T, flag)
    diff = x._c[: T + 1] != y._c[: T + 1]
    idx = np.flatnonzero(diff)
    if idx.size:
        return SeriesComparison(False, int(idx[0]), T, flag)
    return SeriesComparison(True, None, T, flag)


# ---------------------------------------------------------------------------
# eta factors and theta series

def _pentagonal_theta(T: int, ring: CoefficientRing) -> Series:
    """f_1 = (q;q)_inf to T by the pentagonal number theorem."""
    pairs = _fastmul.pentagonal_pairs(T)
    if ring.is_exact:
        data = [0] * (T + 1)
        data[0] = 1
        for g, e in pairs:
            data[g] = e
        return Series._wrap(ring, data)
    arr = np.zeros(T + 1, dtype=ring.dtype())
    arr[0] = 1
    mask = (1 << ring.bits) - 1
    for g, e in pairs:
        arr[g] = e & mask
    return Series._wrap(ring, arr)


def _inverse_f1(T: int, ring: CoefficientRing) -> Series:
    """1/f_1 to T: pentagonal linear recurrence, with a doubling fast path
    for mod-2 truncations beyond the recurrence's comfortable range."""
    if ring.is_exact:
        return Series._wrap(ring, _fastmul.inverse_f1_exact(T))
    k = ring.bits
    if k == 1 and (T > _fastmul.PENT_KERNEL_MAX or not _fastmul.HAVE_NUMBA):
        return Series._wrap(ring, _fastmul.partition_parity(T))
    if T <= _fastmul.PENT_KERNEL_MAX:
        try:
            c = _fastmul.inverse_f1_mod(T, k)
        except ValueError:
            return inverse(_pentagonal_theta(T, ring))
        return Series._wrap(ring, c.astype(ring.dtype()))
    return inverse(_pentagonal_theta(T, ring))


def eta_factor(delta: int, r: int, T: int, ring: CoefficientRing) -> Series:
    """(q^delta; q^delta)_inf^r truncated at T.

    The q^{delta r/24} eta prefactor is tracked separately by EtaQuotient.
    Computed at truncation T // delta in the variable q^delta: pentagonal
    sparse expansion for r = +-1 (the inverse via the partition-style
    recurrence), square-and-multiply for |r| > 1.
    """
    if delta < 1:
        raise ValueError("eta factor needs delta >= 1")
    if T < 0:
        raise ValueError("eta factor needs T >= 0")
    if r == 0:
        return one(ring, T)
    Td = T // delta
    if r > 0:
        core = _pentagonal_theta(Td, ring)
        if r > 1:
            core = power(core, r)
    else:
        core = _inverse_f1(Td, ring)
        if r < -1:
            core = power(core, -r)
    if delta == 1:
        return core
    return inflate(core, delta, tmax=T)


def theta_series(form: QuadraticForm, T: int, ring: CoefficientRing, over_all: bool = True) -> Series:
    """sum of q^{r(n)} over n in Z (or n >= 1), keeping exponents in [0, T]."""
    disc = form.b * form.b - 4 * form.a * (form.c - T)
    if ring.is_exact:
        data = [0] * (T + 1)
    else:
        arr = np.zeros(T + 1, dtype=np.uint64)
    if disc >= 0:
        root = math.isqrt(disc)
        lo = (-form.b - root) // (2 * form.a) - 1
        hi = (root - form.b) // (2 * form.a) + 1
        if not over_all:
            lo = max(lo, 1)
        for n in range(lo, hi + 1):
            e = form(n)
            if 0 <= e <= T:
                if ring.is_exact:
                    data[e] += 1
                else:
                    arr[e] += 1
    if ring.is_exact:
        return Series._wrap(ring, data)
    mask = np.uint64((1 << ring.bits) - 1)
    return Series._wrap(ring, (arr & mask).astype(ring.dtype()))
