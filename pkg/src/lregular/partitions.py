"""l-regular partition series, a counting oracle, and the identity catalog.

b_l(n) counts partitions of n with no part divisible by l; the generating
function is f_l/f_1.  The catalog below holds the dissection and congruence
identities used throughout the package as data (expression trees over the
qseries operations), so each one can be evaluated and checked at any
truncation without touching the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

import numpy as np

from . import qseries as qs
from .qseries import CoefficientRing, QuadraticForm, Series
from .reports import FAIL, PASS, VerificationReport

ENUMERATION_MAX_N = 60


# ---------------------------------------------------------------------------
# generating function and enumeration oracle

def regular_series(ell: int, T: int, ring: CoefficientRing) -> Series:
    """Coefficients b_ell(0..T) of f_ell / f_1."""
    if ell < 2:
        raise ValueError(f"regular partitions need ell >= 2, got {ell}")
    return qs.mul(qs.eta_factor(ell, 1, T, ring), qs.eta_factor(1, -1, T, ring))


def iter_regular_partitions(ell: int, n: int, _max_part: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Yield every partition of n with no part divisible by ell, largest part
    first.  Exponential in n; test/demonstration use only."""
    if n == 0:
        yield ()
        return
    if _max_part is None:
        _max_part = n
    for part in range(min(n, _max_part), 0, -1):
        if part % ell == 0:
            continue
        for rest in iter_regular_partitions(ell, n - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _count_regular(ell: int, n: int, max_part: int) -> int:
    if n == 0:
        return 1
    total = 0
    for part in range(min(n, max_part), 0, -1):
        if part % ell == 0:
            continue
        total += _count_regular(ell, n - part, part)
    return total


def b_enumerate(ell: int, n: int) -> int:
    """Exact b_ell(n) by direct recursive counting over allowed parts,
    independent of any power-series arithmetic.  Capped at n = 60."""
    if ell < 2:
        raise ValueError(f"need ell >= 2, got {ell}")
    if not 0 <= n <= ENUMERATION_MAX_N:
        raise ValueError(f"enumeration oracle covers 0 <= n <= {ENUMERATION_MAX_N}, got {n}")
    return _count_regular(ell, n, n if n else 1)


# ---------------------------------------------------------------------------
# identity expression trees

@dataclass(frozen=True)
class EtaF:
    """(q^delta; q^delta)_inf ^ r"""

    delta: int
    r: int


@dataclass(frozen=True)
class MulE:
    factors: tuple

    def __init__(self, *factors):
        object.__setattr__(self, "factors", tuple(factors))


@dataclass(frozen=True)
class AddE:
    terms: tuple

    def __init__(self, *terms):
        object.__setattr__(self, "terms", tuple(terms))


@dataclass(frozen=True)
class InvE:
    inner: object


@dataclass(frozen=True)
class ShiftE:
    j: int
    inner: object


@dataclass(frozen=True)
class ScalE:
    c: int
    inner: object


@dataclass(frozen=True)
class DissectE:
    inner: object
    d: int
    rclass: int


@dataclass(frozen=True)
class InflateE:
    inner: object
    d: int


@dataclass(frozen=True)
class ThetaE:
    a: int
    b: int
    c: int
    over_all: bool = True


@dataclass(frozen=True)
class ConstE:
    c: int


Expr = Union[EtaF, MulE, AddE, InvE, ShiftE, ScalE, DissectE, InflateE, ThetaE, ConstE]


def eval_expr(expr: Expr, T: int, ring: CoefficientRing) -> Series:
    """Evaluate an expression tree to truncation T.

    Inner requirements propagate: a dissection by d needs its operand to
    d*T + rclass, a shift by j only needs T - j, and so on.
    """
    if isinstance(expr, EtaF):
        return qs.eta_factor(expr.delta, expr.r, T, ring)
    if isinstance(expr, MulE):
        out = None
        for f in expr.factors:
            s = eval_expr(f, T, ring)
            out = s if out is None else qs.mul(out, s)
        return out if out is not None else qs.one(ring, T)
    if isinstance(expr, AddE):
        out = None
        for t in expr.terms:
            s = qs._pad(eval_expr(t, T, ring), T)
            out = s if out is None else qs.add(out, s)
        return out if out is not None else qs.zero(ring, T)
    if isinstance(expr, InvE):
        return qs.inverse(eval_expr(expr.inner, T, ring))
    if isinstance(expr, ShiftE):
        if expr.j > T:
            return qs.zero(ring, T)
        return qs.shift(eval_expr(expr.inner, T - expr.j, ring), expr.j)
    if isinstance(expr, ScalE):
        return qs.scalar_mul(expr.c, eval_expr(expr.inner, T, ring))
    if isinstance(expr, DissectE):
        return qs.dissect(eval_expr(expr.inner, expr.d * T + expr.rclass, ring), expr.d, expr.rclass)
    if isinstance(expr, InflateE):
        return qs.inflate(eval_expr(expr.inner, T // expr.d, ring), expr.d, tmax=T)
    if isinstance(expr, ThetaE):
        return qs.theta_series(QuadraticForm(expr.a, expr.b, expr.c), T, ring, over_all=expr.over_all)
    if isinstance(expr, ConstE):
        return qs.monomial(ring, 0, T, expr.c)
    raise TypeError(f"unknown expression node {expr!r}")


def expr_str(expr: Expr) -> str:
    if isinstance(expr, EtaF):
        return f"f{expr.delta}" if expr.r == 1 else f"f{expr.delta}^{expr.r}"
    if isinstance(expr, MulE):
        return " * ".join(expr_str(f) for f in expr.factors)
    if isinstance(expr, AddE):
        return " + ".join(f"({expr_str(t)})" for t in expr.terms)
    if isinstance(expr, InvE):
        return f"1/({expr_str(expr.inner)})"
    if isinstance(expr, ShiftE):
        q = "q" if expr.j == 1 else f"q^{expr.j}"
        return f"{q} * ({expr_str(expr.inner)})"
    if isinstance(expr, ScalE):
        return f"{expr.c} * ({expr_str(expr.inner)})"
    if isinstance(expr, DissectE):
        return f"U[{expr.d},{expr.rclass}]({expr_str(expr.inner)})"
    if isinstance(expr, InflateE):
        return f"V[{expr.d}]({expr_str(expr.inner)})"
    if isinstance(expr, ThetaE):
        rng = "n in Z" if expr.over_all else "n >= 1"
        return f"Theta({expr.a}n^2{expr.b:+}n{expr.c:+}; {rng})"
    if isinstance(expr, ConstE):
        return str(expr.c)
    return repr(expr)


# ---------------------------------------------------------------------------
# identity catalog

@dataclass(frozen=True)
class IdentityRow:
    lhs: Expr
    rhs: Expr
    mode: str  # "exact" or "mod2"


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    anchor: str
    mode: str
    rows: tuple[IdentityRow, ...]


def _E(delta, r):
    return EtaF(delta, r)


def _row(lhs, rhs, mode):
    return IdentityRow(lhs, rhs, mode)


_B3 = MulE(_E(3, 1), _E(1, -1))
_B9 = MulE(_E(9, 1), _E(1, -1))
_B21 = MulE(_E(21, 1), _E(1, -1))

IDENTITIES: dict[str, IdentityDescriptor] = {}


def _register(id_, anchor, mode, *rows):
    IDENTITIES[id_] = IdentityDescriptor(id_, anchor, mode, tuple(rows))


_register(
    "I1", "2-dissection shape of f3/f1", "mod2",
    _row(_B3,
         AddE(MulE(_E(1, 8), _E(3, -2)), ShiftE(1, MulE(_E(3, 10), _E(1, -4)))),
         "mod2"),
)
_register(
    "I2", "even part of the 3-regular series", "mod2",
    _row(DissectE(_B3, 2, 0), MulE(_E(1, 4), _E(3, -1)), "mod2"),
)
_register(
    "I3", "six-term 2-dissection shape of f21/f1", "mod2",
    _row(_B21,
         AddE(
             MulE(_E(1, 8), _E(3, 4)),
             ShiftE(3, MulE(_E(1, 8), _E(21, 4))),
             ShiftE(6, MulE(_E(1, 8), _E(21, 8), _E(3, -4))),
             ShiftE(1, MulE(_E(3, 16), _E(1, -4))),
             ShiftE(4, MulE(_E(3, 12), _E(21, 4), _E(1, -4))),
             ShiftE(7, MulE(_E(3, 8), _E(21, 8), _E(1, -4))),
         ),
         "mod2"),
)
_register(
    "I4", "odd part of the 21-regular series", "mod2",
    _row(DissectE(_B21, 2, 1),
         AddE(
             ShiftE(1, MulE(_E(1, 4), _E(21, 2))),
             MulE(_E(3, 8), _E(1, -2)),
             ShiftE(3, MulE(_E(3, 4), _E(21, 4), _E(1, -2))),
         ),
         "mod2"),
)
_register(
    "I5", "21-regular counts on 4n+1", "mod2",
    _row(DissectE(_B21, 4, 1), MulE(_E(3, 4), _E(1, -1)), "mod2"),
)
_register(
    "I6", "9-regular counts on 2n+1, exact eta-quotient form", "exact",
    _row(DissectE(_B9, 2, 1),
         MulE(_E(2, 2), _E(3, 1), _E(18, 1), _E(1, -3), _E(6, -1)),
         "exact"),
)
_register(
    "I7", "9-regular counts on 4n", "mod2",
    _row(DissectE(_B9, 4, 0), MulE(_E(3, 7), _E(1, -1), _E(9, -2)), "mod2"),
)
_register(
    "I8", "exact 2-dissection of f9/f1", "exact",
    _row(_B9,
         AddE(
             MulE(_E(12, 3), _E(18, 1), _E(2, -2), _E(6, -1), _E(36, -1)),
             ShiftE(1, MulE(_E(4, 2), _E(6, 1), _E(36, 1), _E(2, -3), _E(12, -1))),
         ),
         "exact"),
)
_register(
    "I9", "9-regular counts on 2n: exact form and its mod-2 reduction", "exact",
    _row(DissectE(_B9, 2, 0),
         MulE(_E(6, 3), _E(9, 1), _E(1, -2), _E(3, -1), _E(18, -1)),
         "exact"),
    _row(DissectE(_B9, 2, 0),
         MulE(_E(3, 5), _E(1, -2), _E(9, -1)),
         "mod2"),
)
_register(
    "I10", "exact signed splitting of f1^3/f3", "exact",
    _row(MulE(_E(1, 3), _E(3, -1)),
         AddE(
             MulE(_E(4, 3), _E(12, -1)),
             ScalE(-3, ShiftE(1, MulE(_E(2, 2), _E(12, 3), _E(4, -1), _E(6, -2)))),
         ),
         "exact"),
)
_register(
    "I11", "9-regular counts on 4n as a two-term split", "mod2",
    # second term q * f3^6 f9 / f1: forced by I7 together with the
    # f3/f1 = f1^2 + q f9^3/f1 rewrite of I12
    _row(DissectE(_B9, 4, 0),
         AddE(
             MulE(_E(3, 6), _E(1, 2), _E(9, -2)),
             ShiftE(1, MulE(_E(3, 6), _E(9, 1), _E(1, -1))),
         ),
         "mod2"),
)
_register(
    "I12", "cube identity f1^3 = f3 + q f9^3", "mod2",
    _row(_E(1, 3), AddE(_E(3, 1), ShiftE(1, _E(9, 3))), "mod2"),
)
_register(
    "I13", "f1^3/f3 as a shifted-square theta", "mod2",
    _row(MulE(_E(1, 3), _E(3, -1)),
         AddE(ConstE(1), ThetaE(9, -6, 1)),
         "mod2"),
)
_register(
    "I14", "f1^2 as the pentagonal-exponent theta", "mod2",
    _row(_E(1, 2), ThetaE(3, -1, 0), "mod2"),
)
_register(
    "I15", "(f3^3/f9)^2 as a sparse theta", "mod2",
    _row(MulE(_E(3, 6), _E(9, -2)),
         AddE(ConstE(1), ThetaE(54, -36, 6)),
         "mod2"),
)


def _ring_for_mode(mode: str) -> CoefficientRing:
    if mode == "exact":
        return qs.EXACT
    if mode == "mod2":
        return qs.MOD2
    if mode.startswith("mod2^"):
        return CoefficientRing.mod_pow2(int(mode[5:]))
    raise ValueError(f"unknown identity mode {mode!r}")


def check_expressions(lhs: Expr, rhs: Expr, mode: str, T: int) -> qs.SeriesComparison:
    ring = _ring_for_mode(mode)
    return qs.compare(eval_expr(lhs, T, ring), eval_expr(rhs, T, ring))


def verify_identity(id_: str, T: int) -> VerificationReport:
    """Evaluate both sides of a catalog identity to T and compare."""
    if id_ not in IDENTITIES:
        raise KeyError(f"unknown identity {id_!r}; known: {', '.join(sorted(IDENTITIES))}")
    if T < 1:
        raise ValueError("identity check needs T >= 1")
    desc = IDENTITIES[id_]
    rows = []
    witnesses = []
    for row in desc.rows:
        cmp_ = check_expressions(row.lhs, row.rhs, row.mode, T)
        rows.append({"mode": row.mode, "equal": cmp_.equal, "first_mismatch": cmp_.first_mismatch})
        if not cmp_.equal:
            witnesses.append({"mode": row.mode, "exponent": cmp_.first_mismatch})
    status = PASS if not witnesses else FAIL
    return VerificationReport(
        status=status,
        kind="identity",
        bound=T,
        witnesses=witnesses,
        context={"id": id_, "anchor": desc.anchor, "mode": desc.mode, "rows": rows},
    )


def catalog_manifest() -> list[dict]:
    out = []
    for id_ in sorted(IDENTITIES, key=lambda s: int(s[1:])):
        d = IDENTITIES[id_]
        out.append(
            {
                "id": d.id,
                "anchor": d.anchor,
                "mode": d.mode,
                "expressions": [
                    {"mode": r.mode, "lhs": expr_str(r.lhs), "rhs": expr_str(r.rhs)} for r in d.rows
                ],
            }
        )
    return out


# ---------------------------------------------------------------------------
# congruence claims

@dataclass(frozen=True)
class CongruenceClaim:
    """c(A*n + B) == 0 (mod modulus) for all n >= 0, over some coefficient stream."""

    A: int
    B: int
    modulus: int

    def __post_init__(self):
        if self.A < 1 or self.B < 0 or self.modulus < 2:
            raise ValueError(f"invalid claim ({self.A}, {self.B}, {self.modulus})")

    def argument(self, n: int) -> int:
        return self.A * n + self.B


def claim_check(claim: CongruenceClaim, source: Series, nmax: int) -> VerificationReport:
    """Check claim coefficients of `source` for 0 <= n <= nmax.

    The source truncation must reach A*nmax + B; on failure the report
    carries the smallest violating n.
    """
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    needed = claim.argument(nmax)
    if source.trunc < needed:
        raise ValueError(f"source truncated at {source.trunc}, claim needs {needed}")
    u = claim.modulus
    if not source.ring.is_exact:
        k = source.ring.bits
        if u & (u - 1) or u > (1 << k):
            raise ValueError(f"modulus {u} incompatible with ring {source.ring.name}")
        idx = claim.B + claim.A * np.arange(nmax + 1, dtype=np.int64)
        vals = source.array()[idx] % source.array().dtype.type(u)
        bad = np.flatnonzero(vals)
    else:
        vals = [source[claim.argument(n)] % u for n in range(nmax + 1)]
        bad = [n for n, v in enumerate(vals) if v]
    if len(bad):
        n0 = int(bad[0])
        return VerificationReport(
            status=FAIL,
            kind="claim",
            bound=nmax,
            witnesses=[{"n": n0, "argument": claim.argument(n0), "value": int(vals[n0])}],
            context={"A": claim.A, "B": claim.B, "modulus": u},
        )
    return VerificationReport(
        status=PASS, kind="claim", bound=nmax, witnesses=[],
        context={"A": claim.A, "B": claim.B, "modulus": u},
    )


# ---------------------------------------------------------------------------
# parity of b_3 at even arguments, for indices far beyond dense reach

def b3_even_parity(m_values) -> np.ndarray:
    """Parity of b_3(2m) for each m in m_values.

    Mod 2 the even-indexed 3-regular counts form f_1^4/f_3, f_1^4 is
    supported on {2k(3k-1) : k in Z} (pentagonal exponents doubled, by
    squaring in characteristic 2), and 1/f_3 = sum p(j) q^{3j}.  So
    b_3(2m) is the XOR of partition parities p((m - e)/3) over support
    points e with 3 | (m - e).  Only needs p mod 2 to max(m)/3, which the
    doubling construction reaches quickly.
    """
    ms = np.asarray(list(m_values), dtype=np.int64)
    if ms.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if ms.min() < 0:
        raise ValueError("arguments must be nonnegative")
    mmax = int(ms.max())
    exps = []
    k = 0
    while 2 * k * (3 * k - 1) <= mmax:
        for e in (2 * k * (3 * k - 1), 2 * k * (3 * k + 1)):
            if e <= mmax:
                exps.append(e)
        k += 1
    E = np.unique(np.array(exps, dtype=np.int64))
    ptable = qs.eta_factor(1, -1, mmax // 3, qs.MOD2).array()
    out = np.zeros(ms.shape[0], dtype=np.uint8)
    for i, m in enumerate(ms):
        d = m - E
        sel = d[(d >= 0) & (d % 3 == 0)] // 3
        out[i] = np.bitwise_xor.reduce(ptable[sel]) if sel.size else 0
    return out


# ---------------------------------------------------------------------------
# named coefficient streams (shared by the claim/density CLI verbs)

@dataclass(frozen=True)
class NamedSeries:
    name: str
    description: str


NAMED_SERIES: dict[str, NamedSeries] = {
    "b3": NamedSeries("b3", "3-regular partition counts b_3(n)"),
    "b9": NamedSeries("b9", "9-regular partition counts b_9(n)"),
    "b21": NamedSeries("b21", "21-regular partition counts b_21(n)"),
    "b3even": NamedSeries("b3even", "b_3(2n)"),
    "b9odd": NamedSeries("b9odd", "b_9(2n+1)"),
    "b9even": NamedSeries("b9even", "b_9(2n)"),
    "b9mult4": NamedSeries("b9mult4", "b_9(4n)"),
    "b21odd": NamedSeries("b21odd", "b_21(2n+1)"),
    "b21mult4plus1": NamedSeries("b21mult4plus1", "b_21(4n+1)"),
}

_DISSECTIONS = {
    "b3even": (3, 2, 0),
    "b9odd": (9, 2, 1),
    "b9even": (9, 2, 0),
    "b9mult4": (9, 4, 0),
    "b21odd": (21, 2, 1),
    "b21mult4plus1": (21, 4, 1),
}


def build_named_series(name: str, T: int, ring: CoefficientRing) -> Series:
    """Construct a named stream to truncation T, straight from the
    definition (f_ell/f_1, then arithmetic-progression extraction)."""
    if name.startswith("eta:"):
        spec = parse_eta_spec(name[4:])
        out = None
        for delta, r in spec.items():
            f = qs.eta_factor(delta, r, T, ring)
            out = f if out is None else qs.mul(out, f)
        return out if out is not None else qs.one(ring, T)
    if name in ("b3", "b9", "b21"):
        return regular_series(int(name[1:]), T, ring)
    if name in _DISSECTIONS:
        ell, d, rcls = _DISSECTIONS[name]
        return qs.dissect(regular_series(ell, d * T + rcls, ring), d, rcls)
    raise KeyError(f"unknown series {name!r}; known: {', '.join(sorted(NAMED_SERIES))} or eta:<spec>")


def parse_eta_spec(text: str) -> dict[int, int]:
    """Parse "delta:r,delta:r" into an exponent map; zero exponents drop out."""
    out: dict[int, int] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        delta_s, _, r_s = chunk.partition(":")
        delta, r = int(delta_s), int(r_s)
        if delta < 1:
            raise ValueError(f"bad eta spec entry {chunk!r}")
        out[delta] = out.get(delta, 0) + r
    if not out:
        raise ValueError("empty eta spec")
    return {d: r for d, r in out.items() if r}


# residues whose progressions the two certificate pairs prove:
# b_3(2(841n + alpha)) == 0 (mod 2) and b_21(4(841n + beta) + 1) == 0 (mod 2)
B3_CERTIFIED_RESIDUES = (
    6, 64, 93, 122, 151, 180, 209, 238, 267, 296, 325, 354, 383, 412,
    441, 470, 499, 528, 557, 586, 615, 644, 673, 702, 731, 760, 789, 818,
)
B21_CERTIFIED_RESIDUES = (
    8, 37, 66, 95, 124, 153, 182, 211, 240, 269, 298, 327, 356, 414,
    443, 472, 501, 530, 559, 588, 617, 646, 675, 704, 733, 762, 791, 820,
)
