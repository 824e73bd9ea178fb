"""Number-theoretic transforms in self-sorting Stockham form.

Each of the log2(N) passes composes three steps on a double buffer:
a stride permutation (the reshape/split below), a twiddle scaling of
the permuted half, and a butterfly. Because the permutation is folded
into every pass, the output arrives in natural order with no
bit-reversal step. Rows of a batch are independent, so any split of
the batch produces bit-identical results.
"""

from __future__ import annotations

import numpy as np

from .modular import PrimeSpec, inv_mod
from .tensor import ModTensor, residue_dtype


class TwiddleTable:
    """Cached root powers, per transform length, for one prime.

    For length N = 2^l the forward row holds (1, w, w^2, ..., w^(N/2-1))
    with w = omega^(2^(q-l)); the inverse row holds powers of w^-1.
    Tables are built lazily and shared read-only.
    """

    def __init__(self, prime: PrimeSpec):
        self.prime = prime
        self._forward: dict[int, np.ndarray] = {}
        self._inverse: dict[int, np.ndarray] = {}
        self._scales: dict[int, int] = {}

    def check_length(self, n: int):
        if n < 1 or n & (n - 1):
            raise ValueError(f"unsupported length: {n} is not a power of two")
        if n > (1 << self.prime.q):
            raise ValueError(
                f"unsupported length: {n} exceeds 2^{self.prime.q} for p={self.prime.p}"
            )

    def root_of_length(self, n: int) -> int:
        self.check_length(n)
        l = n.bit_length() - 1
        return pow(self.prime.omega, 1 << (self.prime.q - l), self.prime.p)

    def powers(self, n: int) -> np.ndarray:
        if n not in self._forward:
            self._forward[n] = self._build(self.root_of_length(n), n)
        return self._forward[n]

    def inv_powers(self, n: int) -> np.ndarray:
        if n not in self._inverse:
            w = self.root_of_length(n)
            self._inverse[n] = self._build(inv_mod(w, self.prime.p), n)
        return self._inverse[n]

    def scale(self, n: int) -> int:
        """1/N mod p, the inverse-transform normalization."""
        if n not in self._scales:
            self.check_length(n)
            self._scales[n] = inv_mod(n, self.prime.p)
        return self._scales[n]

    def _build(self, w: int, n: int) -> np.ndarray:
        # length-1 transforms consult no twiddles; keep a unit entry anyway
        p = self.prime.p
        vals = [1] * max(n // 2, 1)
        for i in range(1, n // 2):
            vals[i] = vals[i - 1] * w % p
        arr = np.array(vals, dtype=residue_dtype(self.prime))
        arr.setflags(write=False)
        return arr


def _transform_rows(rows: np.ndarray, powers: np.ndarray, p: int) -> np.ndarray:
    """Batched transform along the last axis of a (B, N) array."""
    batch, n = rows.shape
    if n == 1:
        return rows.copy()
    x = rows
    half, span = n // 2, 1
    while span < n:
        x3 = x.reshape(batch, 2, half, span)       # stride permutation view
        tw = powers[0 : n // 2 : n // (2 * span)]  # this pass's twiddles
        scaled = x3[:, 1] * tw[None, None, :] % p
        y = np.empty((batch, half, 2, span), dtype=x.dtype)
        y[:, :, 0, :] = (x3[:, 0] + scaled) % p    # butterfly
        y[:, :, 1, :] = (x3[:, 0] - scaled) % p
        x = y.reshape(batch, n)
        half //= 2
        span *= 2
    return x


def _as_row(data, table: TwiddleTable) -> np.ndarray:
    arr = np.array(list(data), dtype=residue_dtype(table.prime))
    if arr.ndim != 1:
        raise ValueError("expected a flat residue vector")
    return arr.reshape(1, -1)


def ntt_forward_1d(data, table: TwiddleTable) -> np.ndarray:
    """Evaluate at all root powers: out[k] = sum_j data[j] * w^(jk) mod p."""
    row = _as_row(data, table)
    n = row.shape[1]
    table.check_length(n)
    return _transform_rows(row, table.powers(n), table.prime.p)[0]


def ntt_inverse_1d(data, table: TwiddleTable) -> np.ndarray:
    """Inverse of ntt_forward_1d: conjugate root powers plus a 1/N factor."""
    row = _as_row(data, table)
    n = row.shape[1]
    table.check_length(n)
    out = _transform_rows(row, table.inv_powers(n), table.prime.p)[0]
    return out * table.scale(n) % table.prime.p


def _multi(t: ModTensor, table: TwiddleTable, inverse: bool) -> ModTensor:
    if t.prime != table.prime:
        raise ValueError("tensor and twiddle table use different primes")
    p = table.prime.p
    shape = t.shape
    axis_vars = t.axis_vars
    arr = t.residues
    if not shape:  # constant tensor: nothing to transform
        return ModTensor(shape, arr.copy(), t.prime, axis_vars)
    for _ in range(len(shape)):
        n = shape[-1]
        table.check_length(n)
        rows = arr.reshape(-1, n)
        if inverse:
            rows = _transform_rows(rows, table.inv_powers(n), p)
            if n > 1:
                rows = rows * table.scale(n) % p
        else:
            rows = _transform_rows(rows, table.powers(n), p)
        # rotate: last variable moves to the front, data transposed along
        rotated = np.ascontiguousarray(np.moveaxis(rows.reshape(shape), -1, 0))
        shape = (shape[-1],) + shape[:-1]
        axis_vars = (axis_vars[-1],) + axis_vars[:-1]
        arr = rotated.reshape(-1)
    return ModTensor(shape, arr, t.prime, axis_vars)


def ntt_forward_multi(t: ModTensor, table: TwiddleTable) -> ModTensor:
    """Evaluate a coefficient tensor on the full root-power grid.

    One round per variable: batched 1-D transforms along the contiguous
    last axis, then an axis rotation. After all rounds the variable
    order matches the input, and grid position (a_0, ..., a_{vn-1})
    holds the polynomial's value at (w_{N_0}^a_0, ..., w_{N_vn-1}^a_vn-1).
    """
    return _multi(t, table, inverse=False)


def ntt_inverse_multi(t: ModTensor, table: TwiddleTable) -> ModTensor:
    """Recover the unique coefficient tensor fitting an evaluation grid."""
    return _multi(t, table, inverse=True)
