"""Exact determinants over Z/pZ by scaled-pivot condensation.

Each elimination step i picks the first nonzero entry of row i as the
pivot and updates every lower row as z_i * row - t * pivot_row. That
update inflates the determinant by z_i per touched row, so the final
value divides the inflation back out and applies the sign of the pivot
column permutation; the result is the exact determinant, not just the
pivot product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modular import PrimeSpec, inv_mod
from .parallel import chunk_spans, map_streamed
from .tensor import residue_dtype


@dataclass(frozen=True)
class ModMatrix:
    """Square matrix of residues with its prime field."""

    r: int
    entries: tuple[tuple[int, ...], ...]
    prime: PrimeSpec

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("matrix order must be positive")
        if len(self.entries) != self.r or any(len(row) != self.r for row in self.entries):
            raise ValueError(f"entries do not form a {self.r}x{self.r} matrix")
        p = self.prime.p
        if any(not 0 <= v < p for row in self.entries for v in row):
            raise ValueError("entries must be canonical residues in [0, p)")

    @classmethod
    def from_rows(cls, rows, prime: PrimeSpec) -> "ModMatrix":
        p = prime.p
        return cls(len(rows), tuple(tuple(v % p for v in row) for row in rows), prime)


@dataclass(frozen=True)
class PivotRecord:
    """One elimination step: the pivot value, its column, and whether
    that column flips the running permutation sign."""

    step: int
    value: int
    column: int
    flips_sign: bool


def condense(m: ModMatrix) -> tuple[int, list[PivotRecord]]:
    """Determinant plus the pivot trail that produced it."""
    p = m.prime.p
    r = m.r
    rows = [list(row) for row in m.entries]
    records: list[PivotRecord] = []
    columns: list[int] = []
    for i in range(r):
        row = rows[i]
        pivot_col = next((j for j, v in enumerate(row) if v), None)
        if pivot_col is None:
            return 0, records
        z = row[pivot_col]
        flips = sum(1 for c in columns if c > pivot_col) % 2 == 1
        records.append(PivotRecord(i, z, pivot_col, flips))
        columns.append(pivot_col)
        for jj in range(i + 1, r):
            t = rows[jj][pivot_col]
            rows[jj] = [(z * a - t * b) % p for a, b in zip(rows[jj], row)]
    scale = 1
    inflation = 1
    for i, rec in enumerate(records):
        scale = scale * rec.value % p
        inflation = inflation * pow(rec.value, r - 1 - i, p) % p
    det = scale * inv_mod(inflation, p) % p
    if sum(rec.flips_sign for rec in records) % 2:
        det = (p - det) % p
    return det, records


def det_mod(m: ModMatrix) -> int:
    """Exact determinant of a residue matrix."""
    return condense(m)[0]


def det_grid(
    entry_grids: Sequence[np.ndarray],
    r: int,
    prime: PrimeSpec,
    *,
    entry_ids: Sequence[int] | None = None,
    chunk_size: int = 4096,
    workers: int = 1,
) -> np.ndarray:
    """Determinant at every node of the evaluation grids.

    entry_grids holds one flat value grid per distinct matrix entry;
    entry_ids (row-major, length r*r) maps matrix positions onto those
    grids, defaulting to the identity layout with r*r grids. Nodes are
    processed in fixed-size chunks merged by index, so the output is
    independent of chunk size and worker count.
    """
    if entry_ids is None:
        entry_ids = list(range(r * r))
    entry_ids = [int(i) for i in entry_ids]
    if len(entry_ids) != r * r:
        raise ValueError(f"need {r * r} entry ids, got {len(entry_ids)}")
    if any(not 0 <= i < len(entry_grids) for i in entry_ids):
        raise ValueError("entry id references a missing grid")
    grids = [np.asarray(g).reshape(-1) for g in entry_grids]
    nodes = grids[0].size
    if any(g.size != nodes for g in grids):
        raise ValueError("entry grids must share one shape")
    dtype = residue_dtype(prime)
    stacked = np.empty((len(grids), nodes), dtype=dtype)
    for i, g in enumerate(grids):
        stacked[i] = g
    ids = np.array(entry_ids).reshape(r, r)

    def one_chunk(span):
        lo, hi = span
        block = stacked[:, lo:hi][ids]                    # (r, r, chunk)
        block = np.ascontiguousarray(np.moveaxis(block, 2, 0))
        return _det_batch(block, prime.p, dtype)

    parts = list(map_streamed(one_chunk, chunk_spans(nodes, chunk_size), workers))
    return np.concatenate(parts) if parts else np.empty(0, dtype=dtype)


def _det_batch(mats: np.ndarray, p: int, dtype) -> np.ndarray:
    """Condensation over a (count, r, r) stack of matrices."""
    count, r, _ = mats.shape
    work = mats.copy()
    alive = np.ones(count, dtype=bool)
    scale = np.ones(count, dtype=dtype)
    inflation = np.ones(count, dtype=dtype)
    columns = np.zeros((count, r), dtype=np.int64)
    rows_idx = np.arange(count)
    for i in range(r):
        row = work[:, i, :]
        nonzero = row != 0
        alive &= nonzero.any(axis=1)
        pivot_col = np.argmax(nonzero, axis=1)
        z = row[rows_idx, pivot_col]
        z = np.where(alive, z, 1)  # dead nodes keep harmless unit pivots
        columns[:, i] = pivot_col
        scale = scale * z % p
        for _ in range(r - 1 - i):
            inflation = inflation * z % p
        if i + 1 < r:
            below = work[:, i + 1 :, :]
            t = np.take_along_axis(below, pivot_col[:, None, None], axis=2)
            work[:, i + 1 :, :] = (
                z[:, None, None] * below % p - t * row[:, None, :] % p
            ) % p
    inv = np.array([inv_mod(int(v), p) for v in inflation], dtype=dtype)
    det = scale * inv % p
    parity = np.zeros(count, dtype=np.int64)
    for a in range(r):
        for b in range(a + 1, r):
            parity += columns[:, a] > columns[:, b]
    det = np.where(parity % 2 == 1, (p - det) % p, det)
    return np.where(alive, det, 0).astype(dtype, copy=False)
