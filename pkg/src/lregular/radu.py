"""Finite-check congruence certificates for eta-product coefficients.

Write c_r(n) for the coefficients of prod_{delta | M} (q^delta; q^delta)^{r_delta}.
Given an admissible tuple (m, M, N, r, t) (the Delta* conditions below), a
square-orbit residue set P_{m,r}(t), and exact lower-bound functions p_{m,r}
and p*_{r'} over a complete set of double-coset representatives of
Gamma_0(N) \\ SL2(Z) / Gamma_inf, checking c_r(m n + t') == 0 (mod u) for
all t' in the orbit and n up to an explicit rational bound nu proves the
congruence for all n.  All hypothesis arithmetic is exact; floor(nu) is
computed from the exact rational, never from a float.

A "proven" status is proof-grade contingent on those two classical lemmas,
whose hypotheses the verifier checks mechanically and records in the
report, so the certificate is auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import qseries as qs
from .arith import divisors, is_squarefree, prime_divisors
from .etaform import index_gamma0
from .qseries import CoefficientRing, Series

P_MR_M_CAP = 100_000


class InapplicableError(ValueError):
    """A hypothesis of the certificate machinery fails for these inputs."""


@dataclass(frozen=True)
class RaduTuple:
    m: int
    M: int
    N: int
    r: dict[int, int]
    t: int

    def __post_init__(self):
        if min(self.m, self.M, self.N) < 1:
            raise ValueError("m, M, N must be positive")
        clean = {int(d): int(v) for d, v in self.r.items()}
        for d in clean:
            if d < 1 or self.M % d != 0:
                raise ValueError(f"exponent key {d} does not divide M={self.M}")
        object.__setattr__(self, "r", clean)
        if not 0 <= self.t < self.m:
            raise ValueError(f"t must lie in 0..m-1, got {self.t}")

    def __hash__(self):
        return hash((self.m, self.M, self.N, tuple(sorted(self.r.items())), self.t))

    def sum_r(self) -> int:
        return sum(self.r.values())

    def sum_delta_r(self) -> int:
        return sum(d * v for d, v in self.r.items())


@dataclass(frozen=True)
class CosetRep:
    """The matrix (1, 0; delta, 1); one representative per divisor of N."""

    delta: int


def k_of(m: int) -> int:
    return math.gcd(m * m - 1, 24)


def squares_mod(n: int) -> set[int]:
    """{u^2 mod n : gcd(u, n) = 1}, by direct enumeration of units."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return {(u * u) % n for u in range(n) if math.gcd(u, n) == 1}


def p_set(m: int, M: int, r: dict[int, int], t: int) -> list[int]:
    """The orbit of t under t -> t*s + (s-1)/24 * sum(delta r_delta) mod m,
    s over the squares of units mod 24m; sorted ascending.

    Every such square satisfies s == 1 (mod 24), so (s-1)/24 is exact; that
    is asserted rather than assumed.
    """
    sdr = sum(d * v for d, v in r.items())
    out = set()
    for s in squares_mod(24 * m):
        if m > 1 and (s - 1) % 24 != 0:
            raise AssertionError(f"square {s} mod {24*m} not 1 mod 24")
        out.add((t * s + ((s - 1) // 24) * sdr) % m)
    return sorted(out)


@dataclass(frozen=True)
class DeltaStarReport:
    member: bool
    conditions: dict[int, bool]
    k: int
    two_power_s: int
    odd_part_j: int

    def to_json_dict(self) -> dict:
        return {
            "member": self.member,
            "conditions": {str(i): ok for i, ok in sorted(self.conditions.items())},
            "k": self.k,
            "s": self.two_power_s,
            "j": self.odd_part_j,
        }


def delta_star_check(tup: RaduTuple) -> DeltaStarReport:
    """Evaluate the six admissibility conditions independently.

    With k = gcd(m^2 - 1, 24) and prod delta^{|r_delta|} = 2^s * j (j odd):
      (1) every prime divisor of m divides N
      (2) delta | M implies delta | mN for every delta with r_delta != 0
      (3) k N sum_{delta} r_delta m N / delta == 0 (mod 24)
      (4) k N sum_{delta} r_delta == 0 (mod 8)
      (5) 24m / gcd(-24 k t - k sum delta r_delta, 24m) divides N
      (6) if 2 | m: (4 | kN and 8 | sN) or (2 | s and 8 | (1-j)N)
    """
    m, M, N, r, t = tup.m, tup.M, tup.N, tup.r, tup.t
    k = k_of(m)
    prod = 1
    for d, v in r.items():
        prod *= d ** abs(v)
    s2 = 0
    j = prod
    while j % 2 == 0:
        j //= 2
        s2 += 1

    conds: dict[int, bool] = {}
    conds[1] = all(N % p == 0 for p in prime_divisors(m))
    conds[2] = all((m * N) % d == 0 for d, v in r.items() if v != 0)
    total3 = sum((Fraction(v * m * N, d) for d, v in r.items()), Fraction(0)) * k * N
    conds[3] = total3.denominator == 1 and total3.numerator % 24 == 0
    conds[4] = (k * N * tup.sum_r()) % 8 == 0
    x = -24 * k * t - k * tup.sum_delta_r()
    g = math.gcd(abs(x), 24 * m)
    conds[5] = N % (24 * m // g) == 0
    if m % 2 == 0:
        conds[6] = (k * N % 4 == 0 and (s2 * N) % 8 == 0) or (s2 % 2 == 0 and ((1 - j) * N) % 8 == 0)
    else:
        conds[6] = True
    return DeltaStarReport(
        member=all(conds.values()),
        conditions=conds,
        k=k,
        two_power_s=s2,
        odd_part_j=j,
    )


def coset_reps(N: int) -> list[CosetRep]:
    """One double-coset representative (1,0;delta,1) per divisor delta of N,
    valid when N or N/2 is squarefree."""
    if not (is_squarefree(N) or (N % 2 == 0 and is_squarefree(N // 2))):
        raise InapplicableError(f"neither {N} nor {N}/2 is squarefree; no representative set here")
    return [CosetRep(d) for d in divisors(N)]


def p_mr(gamma: CosetRep, m: int, M: int, r: dict[int, int]) -> Fraction:
    """min over lambda in 0..m-1 of
    (1/24) sum_delta r_delta gcd(delta + delta k lambda c, m c)^2 / (delta m),
    with c = gamma.delta (the representative has a = 1)."""
    value, _ = p_mr_with_flag(gamma, m, M, r)
    return value


def p_mr_with_flag(gamma: CosetRep, m: int, M: int, r: dict[int, int]) -> tuple[Fraction, bool]:
    if m > P_MR_M_CAP:
        raise ValueError(f"m={m} beyond the exhaustive-minimum cap {P_MR_M_CAP}")
    c = gamma.delta
    k = k_of(m)
    items = sorted(r.items())
    best: Optional[Fraction] = None
    zero_gcd_seen = False
    for lam in range(m):
        total = Fraction(0)
        for d, v in items:
            x = d + d * k * lam * c
            if x == 0 or m * c == 0:
                zero_gcd_seen = True  # gcd(x, 0) = |x| convention applies
            g = math.gcd(x, m * c)
            total += Fraction(v * g * g, d * m)
        if best is None or total < best:
            best = total
    return best / 24, zero_gcd_seen


def p_star(gamma: CosetRep, rprime: dict[int, int], N: int) -> Fraction:
    """(1/24) sum_{delta | N} r'_delta gcd(delta, c)^2 / delta."""
    for d in rprime:
        if d < 1 or N % d != 0:
            raise ValueError(f"r' key {d} does not divide N={N}")
    c = gamma.delta
    total = sum(
        (Fraction(v * math.gcd(d, c) ** 2, d) for d, v in rprime.items()),
        Fraction(0),
    )
    return total / 24


def nu_bound(tup: RaduTuple, rprime: dict[int, int]) -> tuple[Fraction, int]:
    """The exact rational check bound nu and its floor:

    nu = (1/24)[(sum r + sum r')[Gamma:Gamma_0(N)] - sum delta r'_delta]
         - (1/24m) sum delta r_delta - t_min/m,
    t_min the least element of the orbit P_{m,r}(t).
    """
    idx = index_gamma0(tup.N)
    t_min = min(p_set(tup.m, tup.M, tup.r, tup.t))
    nu = (
        Fraction(tup.sum_r() + sum(rprime.values()), 24) * idx
        - Fraction(sum(d * v for d, v in rprime.items()), 24)
        - Fraction(tup.sum_delta_r(), 24 * tup.m)
        - Fraction(t_min, tup.m)
    )
    return nu, math.floor(nu)


def eta_product_series(M: int, r: dict[int, int], T: int, ring: CoefficientRing) -> Series:
    """prod_{delta | M} (q^delta; q^delta)^{r_delta} to T: the c_r stream."""
    out = None
    for d, v in sorted(r.items()):
        f = qs.eta_factor(d, v, T, ring)
        out = f if out is None else qs.mul(out, f)
    return out if out is not None else qs.one(ring, T)


@dataclass
class RaduReport:
    tuple: RaduTuple
    rprime: dict[int, int]
    modulus: int
    delta_star: DeltaStarReport
    status: str = "inapplicable"
    reason: Optional[str] = None
    coset_checks: list = field(default_factory=list)
    pset: list = field(default_factory=list)
    nu: Optional[Fraction] = None
    nu_floor: Optional[int] = None
    checks: list = field(default_factory=list)
    first_failure: Optional[dict] = None
    gcd_zero_flag: bool = False

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    def to_json_dict(self) -> dict:
        from .reports import jsonable

        return jsonable(
            {
                "status": self.status,
                "reason": self.reason,
                "m": self.tuple.m,
                "M": self.tuple.M,
                "N": self.tuple.N,
                "r": {str(d): v for d, v in sorted(self.tuple.r.items())},
                "rprime": {str(d): v for d, v in sorted(self.rprime.items())},
                "t": self.tuple.t,
                "modulus": self.modulus,
                "conditions": self.delta_star.to_json_dict()["conditions"],
                "delta_star": self.delta_star.to_json_dict(),
                "coset_checks": self.coset_checks,
                "pset": self.pset,
                "nu": self.nu,
                "nu_floor": self.nu_floor,
                "bound": self.nu_floor,
                "bound_checks": self.checks,
                "witnesses": [self.first_failure] if self.first_failure else [],
                "gcd_zero_flag": self.gcd_zero_flag,
            }
        )


def verify(
    tup: RaduTuple,
    rprime: Optional[dict[int, int]] = None,
    u: int = 2,
    series: Optional[Series] = None,
    series_provider: Optional[Callable[[int], Series]] = None,
) -> RaduReport:
    """Run the full certificate for c_r(m n + t') == 0 (mod u), t' in the
    orbit of t.

    status "proven" requires Delta* membership, a valid representative set,
    p_mr + p_star >= 0 at every representative, and every coefficient
    c_r(m n + t') for t' in the orbit and 0 <= n <= floor(nu) to vanish
    mod u.  The box of coefficients is scanned even when a hypothesis
    fails: a nonzero coefficient disproves the congruence outright and is
    reported as "failed" with the witness, while a clean box under failed
    hypotheses proves nothing and stays "inapplicable".
    """
    rprime = dict(rprime or {})
    ds = delta_star_check(tup)
    report = RaduReport(tuple=tup, rprime=rprime, modulus=u, delta_star=ds)
    hypotheses_ok = ds.member
    if not ds.member:
        bad = [i for i, ok in sorted(ds.conditions.items()) if not ok]
        report.reason = f"tuple outside Delta*: condition(s) {bad} fail"
    reps: list[CosetRep] = []
    if hypotheses_ok:
        try:
            reps = coset_reps(tup.N)
        except InapplicableError as exc:
            report.reason = str(exc)
            hypotheses_ok = False
    for rep in reps:
        pm, zflag = p_mr_with_flag(rep, tup.m, tup.M, tup.r)
        ps = p_star(rep, rprime, tup.N)
        ok = pm + ps >= 0
        report.gcd_zero_flag |= zflag
        report.coset_checks.append({"delta": rep.delta, "p_mr": pm, "p_star": ps, "ok": ok})
        if not ok and hypotheses_ok:
            report.reason = "lower-bound hypothesis p_mr + p_star >= 0 fails at a representative"
            hypotheses_ok = False
    report.pset = p_set(tup.m, tup.M, tup.r, tup.t)
    nu, nfloor = nu_bound(tup, rprime)
    report.nu, report.nu_floor = nu, nfloor
    needed = tup.m * max(nfloor, 0) + max(report.pset)
    if series is None and series_provider is not None:
        series = series_provider(needed)
    if series is None:
        if u & (u - 1) == 0 and u > 1:
            ring = CoefficientRing.mod_pow2(u.bit_length() - 1)
        else:
            ring = qs.EXACT
        series = eta_product_series(tup.M, tup.r, needed, ring)
    if series.trunc < needed:
        raise ValueError(f"series truncated at {series.trunc}, certificate needs {needed}")
    for tprime in report.pset:
        for n in range(nfloor + 1):
            value = series[tup.m * n + tprime] % u
            entry = {"t_prime": tprime, "n": n, "zero": value == 0}
            report.checks.append(entry)
            if value != 0 and report.first_failure is None:
                report.first_failure = {
                    "t_prime": tprime,
                    "n": n,
                    "index": tup.m * n + tprime,
                    "value": value,
                }
    if report.first_failure is not None:
        report.status = "failed"
        report.reason = "nonzero coefficient inside the check box"
    elif hypotheses_ok:
        report.status = "proven"
    return report
