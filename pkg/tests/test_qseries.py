"""Series ring: construction, arithmetic, dissection, theta, serialization.

Expected values come from independent oracles computed here (naive product
expansion, a coin-style partition DP, schoolbook convolution), never from
the code paths under test.
"""

import json
import random

import numpy as np
import pytest

from lregular import _fastmul, qseries as qs
from lregular.qseries import CoefficientRing, QuadraticForm, Series

from conftest import assert_series_equal

EX = qs.EXACT
M2 = qs.MOD2


# ---------------------------------------------------------------------------
# oracles

def naive_euler_product(T):
    """Expand prod_{n>=1} (1 - q^n) by repeated schoolbook multiplication."""
    c = [1] + [0] * T
    for n in range(1, T + 1):
        nxt = c[:]
        for i in range(T - n + 1):
            if c[i]:
                nxt[i + n] -= c[i]
        c = nxt
    return c


def partition_dp(T):
    """p(0..T) by the coin-counting DP over part sizes (no pentagonal numbers)."""
    c = [1] + [0] * T
    for part in range(1, T + 1):
        for n in range(part, T + 1):
            c[n] += c[n - part]
    return c


def schoolbook(x, y, T):
    return [sum(x[i] * y[n - i] for i in range(n + 1)) for n in range(T + 1)]


# ---------------------------------------------------------------------------
# multiplication

def test_mul_difference_of_squares():
    a = Series(EX, [1, 1, 0, 0, 0, 0])
    b = Series(EX, [1, -1, 0, 0, 0, 0])
    assert qs.mul(a, b).coeffs() == [1, 0, -1, 0, 0, 0]


def test_mul_inverse_identity_t50():
    f1 = qs.eta_factor(1, 1, 50, EX)
    assert qs.mul(f1, qs.inverse(f1)) == qs.one(EX, 50)


def test_f1_squared_mod2_is_pentagonal_exponent_theta():
    sq = qs.mul(qs.eta_factor(1, 1, 10, M2), qs.eta_factor(1, 1, 10, M2))
    th = qs.theta_series(QuadraticForm(3, -1, 0), 10, M2)
    assert_series_equal(sq, th)
    assert sq[0] == 1 and sq[2] == 1 and sq[10] == 1


def test_mul_truncates_to_min():
    a = Series(EX, [1] * 11)
    b = Series(EX, [1] * 6)
    assert qs.mul(a, b).trunc == 5


def test_mul_ring_mismatch():
    with pytest.raises(ValueError, match="ring mismatch"):
        qs.mul(qs.one(EX, 3), qs.one(M2, 3))


def test_mul_matches_schoolbook_randomized():
    rng = random.Random(11)
    for _ in range(25):
        T = rng.randrange(1, 160)
        x = [rng.randrange(-9, 10) for _ in range(T + 1)]
        y = [rng.randrange(-9, 10) for _ in range(T + 1)]
        ref = schoolbook(x, y, T)
        assert qs.mul(Series(EX, x), Series(EX, y)).coeffs() == ref
        for k in (1, 3, 16, 63):
            ring = CoefficientRing.mod_pow2(k)
            got = qs.mul(Series(ring, x), Series(ring, y)).coeffs()
            assert got == [v % (1 << k) for v in ref], k


def test_mul_kronecker_path_large_coefficients():
    # force the packed path (T > 32) with coefficients far beyond 64 bits
    rng = random.Random(5)
    T = 80
    x = [rng.randrange(-(10**30), 10**30) for _ in range(T + 1)]
    y = [rng.randrange(-(10**30), 10**30) for _ in range(T + 1)]
    assert _fastmul.mul_exact(x, y) == schoolbook(x, y, T)


def test_mod2_square_spreads_exponents():
    rng = random.Random(3)
    x = Series(M2, [rng.randrange(2) for _ in range(301)])
    direct = _fastmul.mul_mod2k(x.array(), x.array().copy(), 1)
    assert qs.mul(x, x).coeffs() == direct.tolist()


# ---------------------------------------------------------------------------
# inversion

def test_inverse_geometric_series():
    g = Series(EX, [1, -1, 0, 0, 0])
    assert qs.inverse(g).coeffs() == [1, 1, 1, 1, 1]


def test_inverse_f1_is_partition_numbers():
    assert qs.eta_factor(1, -1, 6, EX).coeffs() == [1, 1, 2, 3, 5, 7, 11]
    assert qs.eta_factor(1, -1, 6, M2).coeffs() == [1, 1, 0, 1, 1, 1, 1]


def test_partition_numbers_against_coin_dp():
    T = 400
    dp = partition_dp(T)
    assert qs.eta_factor(1, -1, T, EX).coeffs() == dp
    got8 = qs.eta_factor(1, -1, T, CoefficientRing.mod_pow2(3)).coeffs()
    assert got8 == [v % 8 for v in dp]


def test_inverse_two_sided_randomized():
    rng = random.Random(23)
    for ring in (EX, M2, CoefficientRing.mod_pow2(5)):
        for _ in range(8):
            T = rng.randrange(2, 120)
            c = [rng.randrange(-6, 7) for _ in range(T + 1)]
            c[0] = 1 if ring.is_exact else rng.choice([1, 3, 5])
            x = Series(ring, c)
            inv = qs.inverse(x)
            assert_series_equal(qs.mul(x, inv), qs.one(ring, T))
            assert_series_equal(qs.mul(inv, x), qs.one(ring, T))


def test_inverse_requires_unit():
    with pytest.raises(ValueError, match="constant term"):
        qs.inverse(Series(EX, [2, 1, 1]))
    with pytest.raises(ValueError, match="odd"):
        qs.inverse(Series(M2, [0, 1, 1]))


# ---------------------------------------------------------------------------
# eta factors

def test_eta_factor_pentagonal_examples():
    assert qs.eta_factor(1, 1, 7, EX).coeffs() == [1, -1, -1, 0, 0, 1, 0, 1]
    assert qs.eta_factor(3, 1, 7, EX).coeffs() == [1, 0, 0, -1, 0, 0, -1, 0]
    assert qs.eta_factor(1, 0, 5, EX) == qs.one(EX, 5)


def test_pentagonal_expansion_matches_naive_product_t200():
    assert qs.eta_factor(1, 1, 200, EX).coeffs() == naive_euler_product(200)


def test_eta_factor_powers_and_deltas():
    T = 150
    f3 = qs.eta_factor(3, 1, T, EX)
    by_power = qs.eta_factor(3, 4, T, EX)
    ref = qs.mul(qs.mul(f3, f3), qs.mul(f3, f3))
    assert_series_equal(by_power, ref)
    inv4 = qs.eta_factor(3, -4, T, EX)
    assert_series_equal(qs.mul(by_power, inv4), qs.one(EX, T))


def test_eta_factor_mod_matches_exact():
    for delta, r in [(1, 2), (2, -3), (5, 1), (6, -1), (9, 7)]:
        exact = qs.eta_factor(delta, r, 180, EX).coeffs()
        for k in (1, 3):
            ring = CoefficientRing.mod_pow2(k)
            got = qs.eta_factor(delta, r, 180, ring).coeffs()
            assert got == [v % (1 << k) for v in exact], (delta, r, k)


def test_inverse_f1_paths_agree():
    """Recurrence kernel, doubling construction and Newton must all agree."""
    T = 60_000
    via_kernel = _fastmul.inverse_f1_mod(T, 1) & np.uint64(1)
    via_doubling = _fastmul.partition_parity(T)
    assert np.array_equal(via_kernel.astype(np.uint8), via_doubling)
    newton = qs.inverse(qs.eta_factor(1, 1, 2000, M2))
    assert np.array_equal(via_doubling[:2001], newton.array())


# ---------------------------------------------------------------------------
# dissect / inflate / shift

def test_dissect_definition():
    s = Series(EX, list(range(11)))
    assert qs.dissect(s, 2, 1).coeffs() == [1, 3, 5, 7, 9]
    assert qs.dissect(s, 1, 0) == s


def test_dissect_b3_even_part():
    b3 = qs.mul(qs.eta_factor(3, 1, 61, M2), qs.eta_factor(1, -1, 61, M2))
    lhs = qs.dissect(b3, 2, 0)
    rhs = qs.mul(qs.eta_factor(1, 4, 30, M2), qs.eta_factor(3, -1, 30, M2))
    assert_series_equal(lhs, rhs)


def test_dissect_interleave_reconstructs():
    rng = random.Random(6)
    for _ in range(10):
        T = rng.randrange(10, 200)
        d = rng.randrange(2, 7)
        x = Series(EX, [rng.randrange(-99, 100) for _ in range(T + 1)])
        parts = [qs.dissect(x, d, r) for r in range(d)]
        rebuilt = [0] * (T + 1)
        for r, part in enumerate(parts):
            for n, c in enumerate(part.coeffs()):
                rebuilt[d * n + r] = c
        assert rebuilt == x.coeffs()


def test_inflate_examples_and_roundtrip():
    assert qs.inflate(Series(EX, [1, 1]), 3).coeffs() == [1, 0, 0, 1]
    s = Series(EX, list(range(8)))
    assert qs.dissect(qs.inflate(s, 4), 4, 0) == s
    f17 = qs.eta_factor(17, 1, 100, EX)
    assert_series_equal(qs.inflate(qs.eta_factor(1, 1, 5, EX), 17, tmax=100), f17)


def test_inflate_cap_validation():
    x = Series(EX, [1, 2, 3])
    assert qs.inflate(x, 3, tmax=8).trunc == 8
    with pytest.raises(ValueError, match="exceeds"):
        qs.inflate(x, 3, tmax=9)


def test_shift_grows_truncation():
    x = Series(EX, [5, 7])
    assert qs.shift(x, 2).coeffs() == [0, 0, 5, 7]
    assert qs.shift(x, 2).trunc == 3


# ---------------------------------------------------------------------------
# theta series

def test_theta_squares():
    t = qs.theta_series(QuadraticForm(1, 0, 0), 5, EX)
    assert t.coeffs() == [1, 2, 0, 0, 2, 0]


def test_theta_positive_index_only():
    t = qs.theta_series(QuadraticForm(1, 0, 0), 10, EX, over_all=False)
    assert t.coeffs() == [0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0]


def test_theta_triple_exponent_identity():
    # theta over 6(3n-1)^2 equals (f3^3/f9)^2 - 1 mod 2
    T = 100
    th = qs.theta_series(QuadraticForm(54, -36, 6), T, M2)
    quot = qs.mul(qs.eta_factor(3, 6, T, M2), qs.eta_factor(9, -2, T, M2))
    expect = qs.add(quot, qs.one(M2, T))  # subtract 1 mod 2
    assert_series_equal(th, expect)


def test_quadratic_form_validation():
    with pytest.raises(ValueError):
        QuadraticForm(0, 1, 1)
    assert QuadraticForm(3, -1, 0)(2) == 10


# ---------------------------------------------------------------------------
# ring laws and differential properties

def test_ring_laws_randomized():
    rng = random.Random(42)
    for ring in (EX, M2, CoefficientRing.mod_pow2(7)):
        for _ in range(6):
            T = rng.randrange(4, 257)
            xs = [Series(ring, [rng.randrange(-20, 21) for _ in range(T + 1)]) for _ in range(3)]
            a, b, c = xs
            assert_series_equal(qs.mul(a, b), qs.mul(b, a), "commutativity")
            assert_series_equal(qs.mul(qs.mul(a, b), c), qs.mul(a, qs.mul(b, c)), "associativity")
            assert_series_equal(
                qs.mul(a, qs.add(b, c)), qs.add(qs.mul(a, b), qs.mul(a, c)), "distributivity"
            )


def test_mod_results_equal_exact_reduced():
    rng = random.Random(77)
    for _ in range(10):
        T = rng.randrange(4, 200)
        k = rng.choice([1, 2, 3, 10, 40])
        ring = CoefficientRing.mod_pow2(k)
        raw = [rng.randrange(-50, 50) for _ in range(T + 1)]
        raw2 = [rng.randrange(-50, 50) for _ in range(T + 1)]
        unit = raw[:]
        unit[0] = 1
        pairs = [
            (qs.mul(Series(EX, raw), Series(EX, raw2)), qs.mul(Series(ring, raw), Series(ring, raw2))),
            (qs.add(Series(EX, raw), Series(EX, raw2)), qs.add(Series(ring, raw), Series(ring, raw2))),
            (qs.dissect(Series(EX, raw), 3, 1), qs.dissect(Series(ring, raw), 3, 1)),
            (qs.inflate(Series(EX, raw), 2), qs.inflate(Series(ring, raw), 2)),
            (qs.inverse(Series(EX, unit)), qs.inverse(Series(ring, unit))),
            (
                qs.theta_series(QuadraticForm(2, -1, 0), T, EX),
                qs.theta_series(QuadraticForm(2, -1, 0), T, ring),
            ),
        ]
        for exact_side, mod_side in pairs:
            assert [v % (1 << k) for v in exact_side.coeffs()] == mod_side.coeffs()


# ---------------------------------------------------------------------------
# container behaviour

def test_series_immutable():
    s = Series(M2, [1, 0, 1])
    with pytest.raises(AttributeError):
        s.trunc = 5
    with pytest.raises(ValueError):
        s.array()[0] = 0
    with pytest.raises(IndexError):
        s[3]


def test_equality_and_truncation_flag():
    a = Series(EX, [1, 2, 3])
    b = Series(EX, [1, 2, 3, 9])
    cmp_ = qs.compare(a, b)
    assert cmp_.equal and cmp_.truncations_differ and cmp_.compared_through == 2
    assert a == b  # coefficient-wise up to the shorter truncation
    c = Series(EX, [1, 2, 4])
    assert qs.compare(a, c).first_mismatch == 2


def test_json_round_trip():
    for ring in (EX, CoefficientRing.mod_pow2(4)):
        s = Series(ring, [3, 1, 4, 1, 5])
        d = s.to_json_dict()
        assert set(d) == {"ring", "trunc", "coeffs"}
        assert json.loads(json.dumps(d)) == d
        back = Series.from_json_dict(d)
        assert back.ring == ring and back.coeffs() == s.coeffs()
    assert Series(CoefficientRing.mod_pow2(3), [-1, 9]).to_json_dict()["coeffs"] == [7, 1]


def test_ring_parse_and_validation():
    assert CoefficientRing.parse("exact") == EX
    assert CoefficientRing.parse("mod2^5").modulus == 32
    with pytest.raises(ValueError):
        CoefficientRing.mod_pow2(64)
    with pytest.raises(ValueError):
        CoefficientRing.parse("mod3")


def test_structural_op_validation():
    x = Series(EX, [1, 2, 3])
    with pytest.raises(ValueError):
        qs.power(x, -1)
    with pytest.raises(ValueError):
        qs.truncate(x, 5)
    with pytest.raises(ValueError):
        qs.shift(x, -1)
    with pytest.raises(ValueError):
        qs.dissect(x, 2, 2)
    with pytest.raises(ValueError):
        qs.monomial(EX, 4, 3)


def test_eta_factor_beyond_truncation():
    # delta larger than T: only the constant term is visible
    s = qs.eta_factor(100, 1, 50, EX)
    assert s.trunc == 50 and s.coeffs() == [1] + [0] * 50
    assert qs.eta_factor(100, -3, 50, M2).coeffs() == [1] + [0] * 50
    with pytest.raises(ValueError):
        qs.eta_factor(0, 1, 10, EX)
    with pytest.raises(ValueError):
        qs.eta_factor(1, 1, -1, EX)


def test_operator_sugar():
    a = Series(EX, [1, 2, 0])
    b = Series(EX, [0, 1, 1])
    assert (a + b).coeffs() == [1, 3, 1]
    assert (a - b).coeffs() == [1, 1, -1]
    assert (-a).coeffs() == [-1, -2, 0]
    assert (a * b).coeffs() == [0, 1, 3]
    assert (3 * a).coeffs() == (a * 3).coeffs() == [3, 6, 0]
