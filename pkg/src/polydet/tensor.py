"""Dense coefficient tensors for multivariate integer polynomials.

A polynomial in vn variables is stored row-major: axis k spans the
exponents 0..shape[k]-1 of variable axis_vars[k], and the last axis
varies fastest. Zero variables (vn = 0) is allowed and denotes a
constant held in a one-element tensor with empty shape.

Terms are plain dicts mapping exponent tuples to integer coefficients;
`normalize_terms` combines duplicates and drops zeros so that equal
polynomials always have equal dicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .modular import INT64_SAFE_MODULUS, PrimeSpec


def normalize_terms(items) -> dict:
    """Combine like monomials and drop zero coefficients."""
    pairs = items.items() if isinstance(items, Mapping) else items
    acc: dict = {}
    for exps, coeff in pairs:
        e = tuple(int(x) for x in exps)
        acc[e] = acc.get(e, 0) + int(coeff)
    return {e: c for e, c in acc.items() if c}


def term_key(terms) -> tuple:
    """Canonical hashable identity of a term mapping (after normalization)."""
    return tuple(sorted(normalize_terms(terms).items()))


def flat_offset(index: Sequence[int], shape: Sequence[int]) -> int:
    """Row-major offset of a multi-index; the last axis is fastest."""
    if len(index) != len(shape):
        raise ValueError(f"index arity {len(index)} != tensor arity {len(shape)}")
    off = 0
    for i, n in zip(index, shape):
        if not 0 <= i < n:
            raise IndexError(f"index {tuple(index)} outside shape {tuple(shape)}")
        off = off * n + i
    return off


def _check_axis_vars(shape, axis_vars):
    if len(shape) != len(axis_vars):
        raise ValueError("one variable name per axis is required")
    if len(set(axis_vars)) != len(axis_vars):
        raise ValueError(f"duplicate variable names in {axis_vars}")
    if any(n < 1 for n in shape):
        raise ValueError(f"axis lengths must be positive, got {shape}")


@dataclass(frozen=True)
class DegreeVector:
    """Ordered per-variable maximum degrees shared by a matrix context."""

    variables: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.variables) < 1:
            raise ValueError("at least one variable is required")
        if len(self.variables) != len(self.degrees):
            raise ValueError("one degree per variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        if any(d < 0 for d in self.degrees):
            raise ValueError(f"negative degree in {self.degrees}")


@dataclass(frozen=True)
class CoeffTensor:
    """Immutable row-major tensor of exact integer coefficients."""

    shape: tuple[int, ...]
    coeffs: tuple[int, ...]
    axis_vars: tuple[str, ...]

    def __post_init__(self):
        _check_axis_vars(self.shape, self.axis_vars)
        if len(self.coeffs) != math.prod(self.shape):
            raise ValueError(
                f"{len(self.coeffs)} coefficients do not fill shape {self.shape}"
            )

    @property
    def size(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, index) -> int:
        return self.coeffs[flat_offset(index, self.shape)]

    def terms(self) -> dict:
        """Nonzero coefficients as an exponent-tuple -> value mapping."""
        out = {}
        for off, c in enumerate(self.coeffs):
            if c:
                out[self._unravel(off)] = c
        return out

    def degrees(self) -> tuple[int, ...]:
        """Actual per-axis maximum exponent (all zeros for the zero tensor)."""
        degs = [0] * len(self.shape)
        for exps in self.terms():
            for k, e in enumerate(exps):
                degs[k] = max(degs[k], e)
        return tuple(degs)

    def _unravel(self, off):
        idx = []
        for n in reversed(self.shape):
            idx.append(off % n)
            off //= n
        return tuple(reversed(idx))


@dataclass(frozen=True, eq=False)
class ModTensor:
    """A coefficient tensor reduced into Z/pZ.

    Residues live in a flat read-only ndarray (int64 when products fit a
    signed 64-bit intermediate, Python objects otherwise); the
    constructor takes ownership of the array.
    """

    shape: tuple[int, ...]
    residues: np.ndarray
    prime: PrimeSpec
    axis_vars: tuple[str, ...]

    def __post_init__(self):
        _check_axis_vars(self.shape, self.axis_vars)
        if self.residues.ndim != 1 or len(self.residues) != math.prod(self.shape):
            raise ValueError(
                f"{self.residues.size} residues do not fill shape {self.shape}"
            )
        self.residues.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.residues)


def residue_dtype(prime: PrimeSpec):
    """int64 when every product of two residues fits 63 bits, else object."""
    return np.int64 if prime.p <= INT64_SAFE_MODULUS else object


def encode(terms, shape, axis_vars) -> CoeffTensor:
    """Lay monomial terms out densely, zero-filling the gaps."""
    shape = tuple(int(n) for n in shape)
    axis_vars = tuple(axis_vars)
    coeffs = [0] * math.prod(shape)
    for exps, c in normalize_terms(terms).items():
        if len(exps) != len(shape):
            raise ValueError(f"exponent arity {len(exps)} != tensor arity {len(shape)}")
        if any(e < 0 or e >= n for e, n in zip(exps, shape)):
            raise ValueError(f"degree overflow: exponent {exps} outside shape {shape}")
        coeffs[flat_offset(exps, shape)] = c
    return CoeffTensor(shape, tuple(coeffs), axis_vars)


def tensor_from_terms(terms, axis_vars) -> CoeffTensor:
    """Minimal-shape tensor holding the given terms."""
    axis_vars = tuple(axis_vars)
    norm = normalize_terms(terms)
    shape = [1] * len(axis_vars)
    for exps in norm:
        if len(exps) != len(axis_vars):
            raise ValueError(f"exponent arity {len(exps)} != variable count {len(axis_vars)}")
        for k, e in enumerate(exps):
            shape[k] = max(shape[k], e + 1)
    return encode(norm, tuple(shape), axis_vars)


def pad_shape(required_lengths) -> tuple[tuple[int, ...], int]:
    """Round each axis length up to a power of two; returns (shape, q_max)."""
    req = tuple(int(n) for n in required_lengths)
    if any(n < 1 for n in req):
        raise ValueError(f"axis lengths must be positive, got {req}")
    shape = tuple(1 << (n - 1).bit_length() for n in req)
    q_max = max((n.bit_length() - 1 for n in shape), default=0)
    return shape, q_max


def axis_rotate(t):
    """Move the last variable (and axis) to the front, transposing the data.

    The value at old index (i_1, ..., i_vn) lands at (i_vn, i_1, ...,
    i_{vn-1}); the new last axis is physically contiguous. vn
    applications restore the original tensor.
    """
    vn = len(t.shape)
    if vn <= 1:
        return t
    new_shape = (t.shape[-1],) + t.shape[:-1]
    new_vars = (t.axis_vars[-1],) + t.axis_vars[:-1]
    if isinstance(t, ModTensor):
        rot = np.ascontiguousarray(np.moveaxis(t.residues.reshape(t.shape), -1, 0))
        return ModTensor(new_shape, rot.reshape(-1), t.prime, new_vars)
    arr = np.array(t.coeffs, dtype=object).reshape(t.shape)
    rot = np.ascontiguousarray(np.moveaxis(arr, -1, 0)).reshape(-1)
    return CoeffTensor(new_shape, tuple(rot.tolist()), new_vars)


def pad_to(t, shape):
    """Zero-extend a tensor to a larger shape (exponents keep their place)."""
    shape = tuple(int(n) for n in shape)
    if len(shape) != len(t.shape):
        raise ValueError(f"cannot pad arity {len(t.shape)} to arity {len(shape)}")
    if any(new < old for new, old in zip(shape, t.shape)):
        raise ValueError(f"cannot shrink {t.shape} to {shape}")
    if shape == t.shape:
        return t
    region = tuple(slice(0, n) for n in t.shape)
    if isinstance(t, ModTensor):
        out = np.zeros(shape, dtype=t.residues.dtype)
        out[region] = t.residues.reshape(t.shape)
        return ModTensor(shape, out.reshape(-1), t.prime, t.axis_vars)
    out = np.zeros(shape, dtype=object)
    out[region] = np.array(t.coeffs, dtype=object).reshape(t.shape)
    return CoeffTensor(shape, tuple(out.reshape(-1).tolist()), t.axis_vars)


def reduce_mod(t: CoeffTensor, prime: PrimeSpec) -> ModTensor:
    """Map every coefficient to its canonical residue in [0, p)."""
    p = prime.p
    vals = [c % p for c in t.coeffs]
    return ModTensor(t.shape, np.array(vals, dtype=residue_dtype(prime)), prime, t.axis_vars)


@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of polynomials with structural duplicate detection.

    Equal entries (same normalized terms) share one slot in
    `unique_entries`; `entry_ids` maps the row-major position (i*r + j)
    onto that slot. k = len(unique_entries) and mu = k / r^2 drive the
    transform-once optimization and the runtime prediction.
    """

    r: int
    variables: tuple[str, ...]
    unique_entries: tuple[CoeffTensor, ...]
    entry_ids: tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("matrix order must be positive")
        if len(self.entry_ids) != self.r * self.r:
            raise ValueError("entry_ids must cover the full matrix")
        if not self.unique_entries:
            raise ValueError("a matrix needs at least one entry")
        k = len(self.unique_entries)
        if any(not 0 <= uid < k for uid in self.entry_ids):
            raise ValueError("entry_ids reference missing unique entries")
        for t in self.unique_entries:
            if t.axis_vars != self.variables:
                raise ValueError("all entries must share the matrix variable order")

    @property
    def k(self) -> int:
        return len(self.unique_entries)

    @property
    def mu(self) -> Fraction:
        return Fraction(self.k, self.r * self.r)

    @property
    def dedup(self) -> dict:
        return {
            (i, j): self.entry_ids[i * self.r + j]
            for i in range(self.r)
            for j in range(self.r)
        }

    def entry(self, i: int, j: int) -> CoeffTensor:
        return self.unique_entries[self.entry_ids[i * self.r + j]]

    def rows(self):
        return [[self.entry(i, j) for j in range(self.r)] for i in range(self.r)]

    def max_degrees(self) -> tuple[int, ...]:
        """Per-variable maximum degree over all entries."""
        degs = [0] * len(self.variables)
        for t in self.unique_entries:
            for k, d in enumerate(t.degrees()):
                degs[k] = max(degs[k], d)
        return tuple(degs)

    def degree_vector(self) -> DegreeVector:
        return DegreeVector(self.variables, self.max_degrees())

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "variables": list(self.variables),
            "entry_ids": list(self.entry_ids),
            "unique_terms": [
                [[list(e), c] for e, c in sorted(t.terms().items())]
                for t in self.unique_entries
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolyMatrix":
        variables = tuple(data["variables"])
        unique = tuple(
            tensor_from_terms({tuple(e): c for e, c in pairs}, variables)
            for pairs in data["unique_terms"]
        )
        return cls(int(data["r"]), variables, unique, tuple(data["entry_ids"]))


def poly_matrix(rows, variables) -> PolyMatrix:
    """Build a PolyMatrix from r rows of r term mappings, deduplicating."""
    variables = tuple(variables)
    rows = [list(row) for row in rows]
    r = len(rows)
    if r < 1:
        raise ValueError("matrix order must be positive")
    if any(len(row) != r for row in rows):
        raise ValueError(f"matrix is not square: {r} rows of {[len(x) for x in rows]} entries")
    ids = []
    unique: list[CoeffTensor] = []
    seen: dict = {}
    for row in rows:
        for terms in row:
            key = term_key(terms)
            uid = seen.get(key)
            if uid is None:
                uid = len(unique)
                seen[key] = uid
                unique.append(tensor_from_terms(terms, variables))
            ids.append(uid)
    return PolyMatrix(r, variables, tuple(unique), tuple(ids))
