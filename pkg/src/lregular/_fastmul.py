"""Multiplication and inversion kernels for truncated coefficient arrays.

This module works on raw containers (numpy arrays for Z/2^k coefficients,
Python int sequences for exact coefficients); ring and truncation
bookkeeping lives in qseries.

The workhorse is Kronecker substitution: pack a coefficient array into one
big integer with a fixed slot width, multiply with GMP, and slice the
Cauchy-product coefficients back out of the slots.  The slot width adapts
to the operands: a convolution coefficient is bounded by
(2^k - 1)^2 * min(nnz_x, nnz_y, T+1), so multiplying a sparse series
(pentagonal or theta support) by a dense one packs much tighter than the
worst case and the big multiply stays small.
"""

from __future__ import annotations

import numpy as np
import gmpy2

# Above this truncation the O(T*sqrt(T)) pentagonal recurrence loses to the
# multiply-based paths even when jit-compiled.
PENT_KERNEL_MAX = 2_000_000
_PY_PENT_MAX = 70_000
_TINY_CONVOLVE_MAX = 1024

# numba import is deferred to first kernel use; it is slow to import and
# most small runs never reach the jitted path
try:
    from importlib.util import find_spec

    HAVE_NUMBA = find_spec("numba") is not None
except (ImportError, ValueError):  # pragma: no cover
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pentagonal / triangular supports

def pentagonal_pairs(limit: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of f_1 = 1 + sum_k (-1)^k (q^{k(3k-1)/2} + q^{k(3k+1)/2}),
    exponents in (0, limit], sorted by exponent."""
    pairs = []
    k = 1
    while k * (3 * k - 1) // 2 <= limit:
        sign = -1 if k % 2 else 1
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g <= limit:
                pairs.append((g, sign))
        k += 1
    pairs.sort()
    return pairs


def triangular_exponents(limit: int) -> np.ndarray:
    """k(k+1)/2 for k >= 0 up to limit (the support of f_1^3 mod 2)."""
    out = []
    k = 0
    while k * (k + 1) // 2 <= limit:
        out.append(k * (k + 1) // 2)
        k += 1
    return np.array(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# Kronecker packing for Z/2^k arrays

def _pack_mod(arr: np.ndarray, slot_bytes: int) -> gmpy2.mpz:
    n = arr.shape[0]
    buf = np.zeros((n, slot_bytes), dtype=np.uint8)
    value_bytes = min(slot_bytes, arr.dtype.itemsize)
    for b in range(value_bytes):
        buf[:, b] = (arr >> (8 * b)).astype(np.uint8)
    return gmpy2.mpz(int.from_bytes(buf.tobytes(), "little"))


def _unpack_mod(z: gmpy2.mpz, nslots: int, slot_bytes: int, dtype, mask: int) -> np.ndarray:
    total = nslots * slot_bytes
    zi = int(z)
    raw = zi.to_bytes(max((zi.bit_length() + 7) // 8, 1), "little")
    if len(raw) < total:
        raw = raw + b"\x00" * (total - len(raw))
    m = np.frombuffer(raw[:total], dtype=np.uint8).reshape(nslots, slot_bytes)
    out = np.zeros(nslots, dtype=dtype)
    dt = out.dtype.type
    for b in range(min(slot_bytes, out.dtype.itemsize)):
        out |= m[:, b].astype(dt) << dt(8 * b)
    out &= dt(mask)
    return out


def mul_mod2k(x: np.ndarray, y: np.ndarray, k: int) -> np.ndarray:
    """Truncated Cauchy product of reduced Z/2^k coefficient arrays.

    Result has length min(len(x), len(y)); 1 <= k <= 63.
    """
    n = min(x.shape[0], y.shape[0])
    x = x[:n]
    y = y[:n]
    mask = (1 << k) - 1
    if n <= _TINY_CONVOLVE_MAX:
        # uint64 convolution wraps mod 2^64, which is exact mod 2^k.
        full = np.convolve(x.astype(np.uint64), y.astype(np.uint64))[:n]
        return (full & np.uint64(mask)).astype(x.dtype)
    nnz = min(int(np.count_nonzero(x)), int(np.count_nonzero(y)), n)
    if nnz == 0:
        return np.zeros(n, dtype=x.dtype)
    bits = 2 * k + nnz.bit_length() + 1
    slot_bytes = (bits + 7) // 8
    zp = _pack_mod(x, slot_bytes) * _pack_mod(y, slot_bytes)
    return _unpack_mod(zp, n, slot_bytes, x.dtype, mask)


def square_mod2(x: np.ndarray, out_len: int) -> np.ndarray:
    """Square of a mod-2 array: in characteristic 2 this spreads exponents by 2."""
    out = np.zeros(out_len, dtype=x.dtype)
    m = min(x.shape[0], (out_len + 1) // 2)
    out[0 : 2 * m : 2] = x[:m]
    return out


# ---------------------------------------------------------------------------
# exact (arbitrary-precision signed) Kronecker multiply

def _pack_exact(coeffs, slot_bytes: int) -> gmpy2.mpz:
    pos = bytearray(len(coeffs) * slot_bytes)
    neg = bytearray(len(coeffs) * slot_bytes)
    for i, c in enumerate(coeffs):
        if c > 0:
            b = c.to_bytes((c.bit_length() + 7) // 8, "little")
            pos[i * slot_bytes : i * slot_bytes + len(b)] = b
        elif c < 0:
            c = -c
            b = c.to_bytes((c.bit_length() + 7) // 8, "little")
            neg[i * slot_bytes : i * slot_bytes + len(b)] = b
    return gmpy2.mpz(int.from_bytes(pos, "little") - int.from_bytes(neg, "little"))


def _unpack_exact(z: gmpy2.mpz, nslots: int, slot_bytes: int) -> list[int]:
    slot_bits = 8 * slot_bytes
    half = 1 << (slot_bits - 1)
    full = 1 << slot_bits
    total_bits = nslots * slot_bits
    u = int(z) % (1 << (total_bits + slot_bits))  # two's complement view
    raw = u.to_bytes(total_bits // 8 + slot_bytes, "little")
    out = []
    carry = 0
    for i in range(nslots):
        v = int.from_bytes(raw[i * slot_bytes : (i + 1) * slot_bytes], "little") + carry
        if v >= half:
            v -= full
            carry = 1
        else:
            carry = 0
        out.append(v)
    return out


def mul_exact(x, y) -> list[int]:
    """Truncated Cauchy product of exact signed big-integer sequences."""
    n = min(len(x), len(y))
    x = x[:n]
    y = y[:n]
    if n <= 32:
        out = [0] * n
        for i, a in enumerate(x):
            if a:
                for j in range(n - i):
                    if y[j]:
                        out[i + j] += a * y[j]
        return out
    bx = max((abs(c).bit_length() for c in x), default=0)
    by = max((abs(c).bit_length() for c in y), default=0)
    if bx == 0 or by == 0:
        return [0] * n
    bits = bx + by + n.bit_length() + 2
    slot_bytes = (bits + 7) // 8
    zp = _pack_exact(x, slot_bytes) * _pack_exact(y, slot_bytes)
    return _unpack_exact(zp, n, slot_bytes)


# ---------------------------------------------------------------------------
# pentagonal-recurrence inversion of f_1

def inverse_f1_exact(T: int) -> list[int]:
    """Coefficients of 1/f_1 (the partition numbers) by the pentagonal recurrence."""
    c = [0] * (T + 1)
    c[0] = 1
    taps = pentagonal_pairs(T)
    for n in range(1, T + 1):
        acc = 0
        for g, e in taps:
            if g > n:
                break
            acc += e * c[n - g]
        c[n] = -acc
    return c


def _inverse_f1_mod_py(T: int, k: int) -> np.ndarray:
    mask = (1 << k) - 1
    c = [0] * (T + 1)
    c[0] = 1
    taps = pentagonal_pairs(T)
    for n in range(1, T + 1):
        acc = 0
        for g, e in taps:
            if g > n:
                break
            acc += e * c[n - g]
        c[n] = (-acc) & mask
    return np.array(c, dtype=np.uint64)


_pent_kernel = None


def _get_pent_kernel():
    global _pent_kernel
    if _pent_kernel is None:
        import numba

        @numba.njit(cache=True)
        def kernel(taps, tapsigns, T):  # pragma: no cover - jitted
            c = np.zeros(T + 1, dtype=np.uint64)
            c[0] = 1
            nt = taps.shape[0]
            for n in range(1, T + 1):
                acc = np.uint64(0)
                for i in range(nt):
                    g = taps[i]
                    if g > n:
                        break
                    acc += tapsigns[i] * c[n - g]
                c[n] = np.uint64(0) - acc
            return c

        _pent_kernel = kernel
    return _pent_kernel


def inverse_f1_mod(T: int, k: int) -> np.ndarray:
    """1/f_1 coefficients mod 2^k as uint64, by the pentagonal recurrence.

    Uses the jitted kernel when available; the caller should prefer
    partition_parity for k == 1 beyond PENT_KERNEL_MAX.
    """
    if HAVE_NUMBA and T > _PY_PENT_MAX // 8:
        pairs = pentagonal_pairs(T)
        taps = np.array([g for g, _ in pairs], dtype=np.int64)
        # -1 encoded as 2^64-1: products/sums wrap mod 2^64; low k bits exact
        signs = np.array([e & 0xFFFFFFFFFFFFFFFF for _, e in pairs], dtype=np.uint64)
        c = _get_pent_kernel()(taps, signs, T)
        mask = np.uint64((1 << k) - 1)
        c &= mask
        return c
    if T > _PY_PENT_MAX:
        raise ValueError(f"pentagonal recurrence without numba capped at T={_PY_PENT_MAX}")
    return _inverse_f1_mod_py(T, k)


# ---------------------------------------------------------------------------
# partition parity at large truncation

def partition_parity(T: int) -> np.ndarray:
    """1/f_1 mod 2 as a uint8 0/1 array of length T+1.

    Doubling construction: in characteristic 2, (1/f_1)(q)^4 = (1/f_1)(q^4),
    so 1/f_1 = f_1^3 * (1/f_1)(q^4) with f_1^3 supported on the triangular
    numbers.  Each level is one sparse-by-dense GF(2) multiply, so the total
    cost is a constant number of GMP multiplies at the top size.
    """
    if T <= 4096:
        return (_inverse_f1_mod_py(T, 1) & np.uint64(1)).astype(np.uint8)
    sub = partition_parity(T // 4)
    spread = np.zeros(T + 1, dtype=np.uint8)
    spread[0 : 4 * (T // 4) + 1 : 4] = sub[: T // 4 + 1]
    f1cubed = np.zeros(T + 1, dtype=np.uint8)
    f1cubed[triangular_exponents(T)] = 1
    return mul_mod2k(f1cubed, spread, 1)
