"""Hecke operator T_p on q-expansions and the self-similarity machinery
for 3-regular partition counts mod 2.

T_p sends sum a(n) q^n to sum (a(pn) + chi(p) p^{w-1} a(n/p)) q^n, with
a(n/p) = 0 when p does not divide n.  When p divides the character's s the
chi term vanishes and T_p factors through p-dissection, which is what the
self-similarity arguments exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import qseries as qs
from .arith import is_prime
from .etaform import ModularMeta, check_modularity, g31_eta, g32_eta, sturm_bound
from .partitions import CongruenceClaim, b3_even_parity, claim_check, regular_series
from .qseries import Series
from .reports import FAIL, PASS, VerificationReport

# primes for which the self-similarity congruence is a proved theorem
# rather than finite-prefix evidence
PROVEN_SELF_SIMILAR_PRIMES = frozenset({13, 17})


@dataclass(frozen=True)
class HeckeContext:
    """Prime index, form weight, and the character value chi(p) in {-1,0,1}."""

    p: int
    weight: int
    chi_p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"Hecke index {self.p} is not prime")
        if self.weight < 1:
            raise ValueError("weight must be a positive integer")
        if self.chi_p not in (-1, 0, 1):
            raise ValueError("chi(p) must be -1, 0 or 1")

    @staticmethod
    def from_meta(meta: ModularMeta, p: int) -> "HeckeContext":
        if meta.weight.denominator != 1:
            raise ValueError("Hecke context needs an integral weight")
        return HeckeContext(p=p, weight=int(meta.weight), chi_p=meta.character_value(p))


def hecke_tp(f: Series, ctx: HeckeContext) -> Series:
    """Apply T_p coefficientwise; the result is truncated at f.trunc // p."""
    p = ctx.p
    if f.trunc < p:
        raise ValueError(f"series truncated at {f.trunc} is too short for T_{p}")
    T = f.trunc // p
    scale = p ** (ctx.weight - 1)
    if f.ring.is_exact:
        out = []
        for n in range(T + 1):
            v = f[p * n]
            if ctx.chi_p and n % p == 0:
                v += ctx.chi_p * scale * f[n // p]
            out.append(v)
        return Series(f.ring, out)
    arr = f.array()
    out = arr[:: p][: T + 1].astype(np.uint64)
    if ctx.chi_p:
        mask = np.uint64((1 << f.ring.bits) - 1)
        sm = f.ring.reduce(ctx.chi_p * scale)
        lift = np.zeros(T + 1, dtype=np.uint64)
        m = T // p
        lift[0 : p * m + 1 : p] = arr[: m + 1].astype(np.uint64) * np.uint64(sm)
        out = (out + lift) & mask
    return Series(f.ring, out.tolist())


def gamma_of(p: int) -> int:
    """The unique 0 < gamma < p^2 with 24 gamma == -1 (mod p^2); needs p > 3."""
    if p <= 3 or not is_prime(p):
        raise ValueError(f"need a prime p > 3, got {p}")
    return (-pow(24, -1, p * p)) % (p * p)


@dataclass(frozen=True)
class SelfSimReport:
    p: int
    gamma: int
    checked_to: int
    holds: bool
    first_failure: Optional[int]
    established: bool  # True when the congruence is a theorem, not just evidence

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "gamma": self.gamma,
            "checked_to": self.checked_to,
            "holds": self.holds,
            "first_failure": self.first_failure,
            "established": self.established,
            "note": "finite-prefix evidence only" if not self.established else "proved congruence",
        }


def self_similarity_check(p: int, bound: int, b3_series: Optional[Series] = None) -> SelfSimReport:
    """Compare sum b_3(2(pn+gamma)) q^n with sum b_3(2n) q^{pn} mod 2 for
    n <= bound.  A holding result is evidence, not proof, except for the
    primes where the congruence is established; the report says which."""
    gamma = gamma_of(p)
    needed = 2 * (p * bound + gamma)
    if b3_series is None:
        b3_series = regular_series(3, needed, qs.MOD2)
    if b3_series.trunc < needed:
        raise ValueError(f"b3 series truncated at {b3_series.trunc}, check needs {needed}")
    arr = b3_series.array()
    n = np.arange(bound + 1, dtype=np.int64)
    lhs = arr[2 * (p * n + gamma)] & 1
    rhs = np.zeros(bound + 1, dtype=arr.dtype)
    idx = n[n % p == 0]
    rhs[idx] = arr[2 * (idx // p)] & 1
    diff = np.flatnonzero(lhs != rhs)
    first = int(diff[0]) if diff.size else None
    return SelfSimReport(
        p=p,
        gamma=gamma,
        checked_to=bound,
        holds=first is None,
        first_failure=first,
        established=(first is None) and p in PROVEN_SELF_SIMILAR_PRIMES,
    )


def scan_self_similarity(pmin: int, pmax: int, bound: int) -> list[SelfSimReport]:
    """Run the self-similarity check for every prime in [pmin, pmax],
    p > 3.  Per-prime evidence only; nothing is aggregated.  Each prime
    builds its own mod-2 series of length 2(p*bound + gamma), which is
    also the per-worker memory bound if callers parallelize."""
    out = []
    for p in range(max(pmin, 5), pmax + 1):
        if is_prime(p):
            out.append(self_similarity_check(p, bound))
    return out


# ---------------------------------------------------------------------------
# the iterated congruence family at p = 17

def iterated_family(k: int, p: int = 17) -> CongruenceClaim:
    """The level-k member of the nested family built from self-similarity
    at 17: b_3(A n + B) == 0 (mod 2) with A = 2*17^{2k} and
    B = 17^{2k-2} * 58 + 24*(17^{2k-2} - 1)/288."""
    if p != 17:
        raise ValueError("the iterated family is built for p = 17 only")
    if k < 1:
        raise ValueError("family level k must be >= 1")
    gamma = gamma_of(p)  # 12
    base = 2 * (p + gamma)  # 58
    step = p ** (2 * k - 2)
    B = step * base + 2 * gamma * (step - 1) // (p * p - 1)
    return CongruenceClaim(A=2 * p ** (2 * k), B=B, modulus=2)


def check_iterated_family(k: int, nmax: int) -> VerificationReport:
    """Check the level-k family claim for n <= nmax.

    Arguments A n + B are always even, so the scalable even-argument parity
    extractor covers any k; a dense series would need A*nmax + B terms.
    """
    claim = iterated_family(k)
    ms = [(claim.argument(n)) // 2 for n in range(nmax + 1)]
    parities = b3_even_parity(ms)
    bad = np.flatnonzero(parities)
    if bad.size:
        n0 = int(bad[0])
        return VerificationReport(
            status=FAIL, kind="family", bound=nmax,
            witnesses=[{"n": n0, "argument": claim.argument(n0)}],
            context={"k": k, "A": claim.A, "B": claim.B, "modulus": 2},
        )
    return VerificationReport(
        status=PASS, kind="family", bound=nmax, witnesses=[],
        context={"k": k, "A": claim.A, "B": claim.B, "modulus": 2},
    )


# ---------------------------------------------------------------------------
# Sturm-bound congruence comparison

def sturm_congruence_check(
    f: Series,
    g: Series,
    weight: int,
    level: int,
    same_character: bool,
    p: int,
) -> VerificationReport:
    """Compare two q-expansions mod p through the Sturm bound for their
    weight/level.  Both series must be truncated at or beyond the bound;
    the report records the bound used."""
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    bound = sturm_bound(weight, level, same_character)
    if f.trunc < bound or g.trunc < bound:
        raise ValueError(f"series truncated below the Sturm bound {bound}")
    if not f.ring.is_exact and p != 2:
        raise ValueError("mod-2^k series only support p = 2 comparisons")
    witnesses = []
    for n in range(bound + 1):
        if (f[n] - g[n]) % p != 0:
            witnesses.append({"exponent": n, "lhs": f[n] % p, "rhs": g[n] % p})
            break
    return VerificationReport(
        status=PASS if not witnesses else FAIL,
        kind="sturm-congruence",
        bound=bound,
        witnesses=witnesses,
        context={"weight": weight, "level": level, "same_character": same_character,
                 "p": p, "deepest_compared": bound},
    )


# ---------------------------------------------------------------------------
# the weight-3 level-51 pipeline behind the p = 17 self-similarity proof

def g31_series(T: int) -> Series:
    """Mod-2 q-expansion of the first level-51 form: q^5 f_1^4 f_51^2 f_17 / f_3."""
    prod = qs.mul(
        qs.mul(qs.eta_factor(1, 4, T - 5, qs.MOD2), qs.eta_factor(51, 2, T - 5, qs.MOD2)),
        qs.mul(qs.eta_factor(17, 1, T - 5, qs.MOD2), qs.eta_factor(3, -1, T - 5, qs.MOD2)),
    )
    return qs.shift(prod, 5)


def g32_series(T: int) -> Series:
    """Mod-2 q-expansion of the second level-51 form: q f_17^4 f_3^2 f_1 / f_51."""
    prod = qs.mul(
        qs.mul(qs.eta_factor(17, 4, T - 1, qs.MOD2), qs.eta_factor(3, 2, T - 1, qs.MOD2)),
        qs.mul(qs.eta_factor(1, 1, T - 1, qs.MOD2), qs.eta_factor(51, -1, T - 1, qs.MOD2)),
    )
    return qs.shift(prod, 1)


def level51_hecke_check(bound: Optional[int] = None) -> VerificationReport:
    """T_17 of the first level-51 form against the second, mod 2, through
    the Sturm bound 18.

    Both forms carry a leading q, so agreement of the forms through q^18
    compares the inner series to index 17.  One extra coefficient (q^19,
    inner index 18) is checked on top, which pulls b_3 out to argument
    34*18 + 24 = 636 through the even-index dissection inside the first
    form.
    """
    meta = check_modularity(g31_eta()).meta
    ctx = HeckeContext.from_meta(meta, 17)
    assert ctx.chi_p == 0  # 17 divides the character's s
    b = bound if bound is not None else sturm_bound(3, 51, True)
    deep = b + 1
    f = hecke_tp(g31_series(17 * deep + 16), ctx)
    g = g32_series(deep)
    report = sturm_congruence_check(f, g, weight=3, level=51, same_character=True, p=2)
    if report.passed and (f[deep] - g[deep]) % 2 != 0:
        report.status = FAIL
        report.witnesses.append({"exponent": deep, "lhs": f[deep] % 2, "rhs": g[deep] % 2})
    report.context["deepest_compared"] = deep
    report.context["deepest_b3_argument"] = 34 * (deep - 1) + 24
    return report
