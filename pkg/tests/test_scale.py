"""Cross-path differentials at production truncations.

The small-T agreement tests live in test_qseries; these runs exercise the
sizes the claim sweeps actually use (around 1.5e6 mod-2 coefficients) and
check the recurrence kernel, the doubling construction, and the sparse
parity extractor against each other.
"""

import random
import time

import numpy as np

from lregular import _fastmul, qseries as qs
from lregular.partitions import b3_even_parity, regular_series

M2 = qs.MOD2


def test_b3_series_at_claim_scale():
    t0 = time.perf_counter()
    T = 1_500_000
    b3 = regular_series(3, T, M2)
    elapsed = time.perf_counter() - t0
    assert elapsed < 120, f"claim-scale series build took {elapsed:.1f}s"
    # even-indexed parities against the sparse extractor, across the range
    rng = random.Random(17)
    ms = [rng.randrange(T // 2) for _ in range(300)]
    pars = b3_even_parity(ms)
    arr = b3.array()
    for m, par in zip(ms, pars):
        assert arr[2 * m] == par, m


def test_recurrence_and_doubling_agree_beyond_cutoff():
    # straddle PENT_KERNEL_MAX so both code paths run at the same T
    T = _fastmul.PENT_KERNEL_MAX + 50_000
    if _fastmul.HAVE_NUMBA:
        via_kernel = (_fastmul.inverse_f1_mod(T, 1) & np.uint64(1)).astype(np.uint8)
        via_doubling = _fastmul.partition_parity(T)
        assert np.array_equal(via_kernel, via_doubling)


def test_dense_product_at_million_terms():
    T = 1_000_000
    rng = np.random.default_rng(12)
    a = qs.Series(M2, rng.integers(0, 2, T + 1, dtype=np.uint8))
    b = qs.Series(M2, rng.integers(0, 2, T + 1, dtype=np.uint8))
    t0 = time.perf_counter()
    prod = qs.mul(a, b)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30, f"dense mod-2 product took {elapsed:.1f}s"
    # spot-check a window against the direct convolution definition
    aa, bb = a.array(), b.array()
    for n in (0, 1, 999, 123_456, T):
        window = np.uint8(np.dot(aa[: n + 1].astype(np.uint64), bb[n::-1].astype(np.uint64)) & 1)
        assert prod[n] == window, n
