"""Eta-quotient modular-form metadata.

An eta-quotient prod_{delta | N} eta(delta z)^{r_delta} carries a weight,
a Kronecker-symbol character, a q-power prefactor, and exact rational
orders of vanishing at the cusps of Gamma_0(N).  Everything here is exact
integer/rational arithmetic; no floating point enters any validity
decision (one of the case analyses lands on order exactly 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import divisors, factorize, is_squarefree, prime_divisors


# ---------------------------------------------------------------------------
# Kronecker symbol

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) with the standard conventions at 2, -1 and 0."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    acc = 1
    if n < 0:
        n = -n
        if a < 0:
            acc = -acc
    # strip factors of 2 from n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            acc = -acc
    # now n odd >= 1: Jacobi symbol loop
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                acc = -acc
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            acc = -acc
        a %= n
    return acc if n == 1 else 0


# ---------------------------------------------------------------------------
# eta-quotients

@dataclass(frozen=True)
class EtaQuotient:
    """Level N and a finite exponent map delta -> r_delta, each delta | N."""

    level: int
    exponents: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        clean = {int(d): int(r) for d, r in self.exponents.items() if int(r) != 0}
        for d in clean:
            if d < 1 or self.level % d != 0:
                raise ValueError(f"exponent key {d} does not divide level {self.level}")
        object.__setattr__(self, "exponents", clean)

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.exponents.items()))))

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(self.exponents.values()), 2)

    @property
    def prefactor24(self) -> int:
        """sum delta*r_delta: the q-exponent of the leading term, in 24ths."""
        return sum(d * r for d, r in self.exponents.items())

    def character_factors(self) -> dict[int, int]:
        """Prime factorization exponents of s = prod delta^{r_delta}
        (negative exponents allowed when s is not an integer)."""
        out: dict[int, int] = {}
        for d, r in self.exponents.items():
            for p, e in factorize(d).items():
                out[p] = out.get(p, 0) + e * r
        return {p: e for p, e in out.items() if e}


@dataclass(frozen=True)
class ModularMeta:
    """Weight, character data and leading q-power for an eta-quotient.

    character_sign * prod p^{character_factors[p]} is the Kronecker-symbol
    argument (-1)^weight * s; evaluate it at d with character_value."""

    weight: Fraction
    character_sign: int
    character_factors: dict
    prefactor24: int

    def character_value(self, d: int) -> int:
        val = kronecker(-1, d) if self.character_sign < 0 else 1
        for p, e in self.character_factors.items():
            kp = kronecker(p, d)
            if kp == 0:
                return 0
            if e % 2:
                val *= kp
        return val

    def character_argument(self) -> Optional[int]:
        """The integer (-1)^weight * s when s is integral, else None."""
        if any(e < 0 for e in self.character_factors.values()):
            return None
        s = 1
        for p, e in self.character_factors.items():
            s *= p**e
        return self.character_sign * s

    def to_json_dict(self) -> dict:
        return {
            "weight": f"{self.weight.numerator}/{self.weight.denominator}",
            "character_sign": self.character_sign,
            "character_factors": {str(p): e for p, e in sorted(self.character_factors.items())},
            "prefactor24": self.prefactor24,
        }


@dataclass(frozen=True)
class ModularityReport:
    meta: ModularMeta
    weight_integral: bool
    sum_delta_r: int
    sum_delta_r_ok: bool
    sum_leveldiv_r: int
    sum_leveldiv_r_ok: bool

    @property
    def all_conditions(self) -> bool:
        return self.weight_integral and self.sum_delta_r_ok and self.sum_leveldiv_r_ok

    def to_json_dict(self) -> dict:
        return {
            "meta": self.meta.to_json_dict(),
            "conditions": {
                "weight_integral": self.weight_integral,
                "sum_delta_r_mod24": self.sum_delta_r % 24,
                "sum_delta_r_ok": self.sum_delta_r_ok,
                "sum_leveldiv_r_mod24": self.sum_leveldiv_r % 24,
                "sum_leveldiv_r_ok": self.sum_leveldiv_r_ok,
                "all": self.all_conditions,
            },
        }


def check_modularity(eq: EtaQuotient) -> ModularityReport:
    """Evaluate the standard eta-quotient modularity conditions on
    Gamma_0(N): integral weight, sum delta*r_delta == 0 (mod 24),
    sum (N/delta)*r_delta == 0 (mod 24); conditions are reported
    separately, never thrown."""
    w = eq.weight
    s1 = eq.prefactor24
    s2 = sum((eq.level // d) * r for d, r in eq.exponents.items())
    weight_integral = w.denominator == 1
    sign = 1
    if weight_integral and w.numerator % 2:
        sign = -1
    meta = ModularMeta(
        weight=w,
        character_sign=sign,
        character_factors=eq.character_factors(),
        prefactor24=s1,
    )
    return ModularityReport(
        meta=meta,
        weight_integral=weight_integral,
        sum_delta_r=s1,
        sum_delta_r_ok=s1 % 24 == 0,
        sum_leveldiv_r=s2,
        sum_leveldiv_r_ok=s2 % 24 == 0,
    )


def cusp_order(eq: EtaQuotient, d: int) -> Fraction:
    """Order of vanishing at the cusp c/d of Gamma_0(N), for d | N.

    (N/24) * sum_{delta | N} gcd(d, delta)^2 r_delta / (gcd(d, N/d) d delta);
    depends only on the denominator d, so no numerator parameter exists."""
    N = eq.level
    if d < 1 or N % d != 0:
        raise ValueError(f"{d} does not divide level {N}")
    g = math.gcd(d, N // d)
    total = Fraction(0)
    for delta, r in eq.exponents.items():
        total += Fraction(math.gcd(d, delta) ** 2 * r, g * d * delta)
    return Fraction(N, 24) * total


def scaled_cusp_value(eq: EtaQuotient, d: int, ref: Optional[int] = None) -> Fraction:
    """ref * sum gcd(d,delta)^2 r_delta/delta / gcd(d,ref)^2: the cusp-order
    sum normalized so that the ref-indexed factor has coefficient 1.  Same
    sign as cusp_order; convenient for divisor-by-divisor case analysis."""
    N = eq.level
    if d < 1 or N % d != 0:
        raise ValueError(f"{d} does not divide level {N}")
    if ref is None:
        ref = max(eq.exponents)
    total = sum(
        (Fraction(math.gcd(d, delta) ** 2 * r, delta) for delta, r in eq.exponents.items()),
        Fraction(0),
    )
    return Fraction(ref) * total / (math.gcd(d, ref) ** 2)


@dataclass(frozen=True)
class HolomorphyReport:
    holomorphic: bool
    min_order: Fraction
    witness_divisor: int
    orders: tuple

    def to_json_dict(self) -> dict:
        return {
            "holomorphic": self.holomorphic,
            "min_order": f"{self.min_order.numerator}/{self.min_order.denominator}",
            "witness_divisor": self.witness_divisor,
            "orders": {str(d): f"{o.numerator}/{o.denominator}" for d, o in self.orders},
        }


def is_holomorphic(eq: EtaQuotient) -> HolomorphyReport:
    """Scan one cusp representative per divisor d | N (the order formula
    depends only on d) and report the minimal order with its witness."""
    orders = [(d, cusp_order(eq, d)) for d in divisors(eq.level)]
    witness, min_order = min(orders, key=lambda t: t[1])
    return HolomorphyReport(
        holomorphic=min_order >= 0,
        min_order=min_order,
        witness_divisor=witness,
        orders=tuple(orders),
    )


# ---------------------------------------------------------------------------
# bounds and indices

def sturm_bound(weight: int, level: int, same_character: bool = True) -> int:
    """Coefficient index up to which agreement mod p of two forms of this
    weight/level forces agreement everywhere: floor of
    (k N / 12) prod_{p | N} (1 + 1/p) for equal characters, and of
    (k N^2 / 12) prod (1 - 1/p^2) otherwise."""
    if weight < 1 or level < 1:
        raise ValueError("sturm_bound needs weight >= 1 and level >= 1")
    if same_character:
        b = Fraction(weight * level, 12)
        for p in prime_divisors(level):
            b *= 1 + Fraction(1, p)
    else:
        b = Fraction(weight * level * level, 12)
        for p in prime_divisors(level):
            b *= 1 - Fraction(1, p * p)
    return math.floor(b)


def index_gamma0(N: int) -> int:
    """[SL2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)."""
    if N < 1:
        raise ValueError("level must be positive")
    idx = Fraction(N)
    for p in prime_divisors(N):
        idx *= 1 + Fraction(1, p)
    assert idx.denominator == 1
    return idx.numerator


# ---------------------------------------------------------------------------
# lacunarity criterion for quotients of f_alpha powers

@dataclass(frozen=True)
class CotronResult:
    holds: bool
    divisibility_ok: bool
    size_ok: bool
    threshold_sq: Fraction
    p: int
    a: int

    def to_json_dict(self) -> dict:
        return {
            "holds": self.holds,
            "divisibility_ok": self.divisibility_ok,
            "size_ok": self.size_ok,
            "threshold_sq": f"{self.threshold_sq.numerator}/{self.threshold_sq.denominator}",
            "p": self.p,
            "a": self.a,
        }


def cotron_criterion(numerator: dict[int, int], denominator: dict[int, int], p: int, a: int) -> CotronResult:
    """Sufficient criterion for prod f_alpha^r / prod f_beta^s to be
    lacunary modulo p^j for every j: p^a must divide gcd of the numerator
    indices and p^a >= sqrt(sum beta*s / sum r/alpha), compared exactly by
    squaring."""
    if not numerator:
        raise ValueError("criterion needs a nonempty numerator")
    if any(r < 1 for r in numerator.values()) or any(s < 1 for s in denominator.values()):
        raise ValueError("all exponents must be >= 1")
    if a < 1:
        raise ValueError("needs a >= 1")
    g = 0
    for alpha in numerator:
        g = math.gcd(g, alpha)
    div_ok = g % p**a == 0
    den_sum = sum(beta * s for beta, s in denominator.items())
    num_sum = sum((Fraction(r, alpha) for alpha, r in numerator.items()), Fraction(0))
    threshold_sq = Fraction(den_sum) / num_sum
    size_ok = Fraction(p ** (2 * a)) >= threshold_sq
    return CotronResult(
        holds=div_ok and size_ok,
        divisibility_ok=div_ok,
        size_ok=size_ok,
        threshold_sq=threshold_sq,
        p=p,
        a=a,
    )


# ---------------------------------------------------------------------------
# the specific quotients used by the verification pipelines

def g31_eta() -> EtaQuotient:
    """eta^4(z) eta^2(51z) eta(17z) / eta(3z), level 51 (weight 3)."""
    return EtaQuotient(51, {1: 4, 51: 2, 17: 1, 3: -1})


def g32_eta() -> EtaQuotient:
    """eta^4(17z) eta^2(3z) eta(z) / eta(51z), level 51 (weight 3)."""
    return EtaQuotient(51, {17: 4, 3: 2, 1: 1, 51: -1})


def bk_eta(k: int) -> EtaQuotient:
    """The level-324 family eta^2(6z) eta(9z) eta^{2^{k+1}+1}(54z) /
    (eta^3(3z) eta(18z) eta^{2^k}(108z)); holomorphic at every cusp for
    k >= 6, weight 2^{k-1}."""
    if k < 1:
        raise ValueError("family index k must be >= 1")
    return EtaQuotient(324, {6: 2, 9: 1, 54: 2 ** (k + 1) + 1, 3: -3, 18: -1, 108: -(2**k)})


def b9mult4_eta() -> EtaQuotient:
    """eta^7(36z) / (eta(12z) eta^2(108z)), level 1296 (weight 2): the
    eta-quotient carrying b_9(4n) mod 2 on exponents 12n+1."""
    return EtaQuotient(1296, {36: 7, 12: -1, 108: -2})


def parse_eta_quotient(spec: str, level: int) -> EtaQuotient:
    """Build an EtaQuotient from "delta:r,delta:r" flag syntax."""
    from .partitions import parse_eta_spec

    return EtaQuotient(level, parse_eta_spec(spec))
