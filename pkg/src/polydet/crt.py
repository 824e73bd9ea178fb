"""Exact reconstruction of signed integers from per-prime residues.

The mixed-radix route keeps every digit computation inside word-size
modular arithmetic; big integers appear only in the final positional
lift, and a symmetric shift maps the canonical value into
(-P/2, P/2] to recover signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modular import INT64_SAFE_MODULUS, inv_mod
from .tensor import CoeffTensor, ModTensor


@dataclass(frozen=True)
class CrtBasis:
    """Precomputed tables for a fixed list of pairwise-distinct primes.

    weights[j] = p_0 * ... * p_{j-1} (weights[0] = 1); inverses[i] is
    weights[i]^-1 mod p_i; weight_residues[i][j] caches weights[j] mod
    p_i for the digit recurrence. product is the full modulus P.
    """

    primes: tuple[int, ...]
    weights: tuple[int, ...]
    inverses: tuple[int, ...]
    weight_residues: tuple[tuple[int, ...], ...]
    product: int


def build_basis(primes: Sequence[int]) -> CrtBasis:
    """Precompute the mixed-radix tables once for a prime list."""
    primes = tuple(int(p) for p in primes)
    if not primes:
        raise ValueError("at least one prime is required")
    if len(set(primes)) != len(primes):
        raise ValueError(f"duplicate primes in {primes}")
    weights = [1]
    for p in primes[:-1]:
        weights.append(weights[-1] * p)
    product = weights[-1] * primes[-1]
    inverses = [1]
    residues = [()]
    for i in range(1, len(primes)):
        p_i = primes[i]
        inverses.append(inv_mod(weights[i] % p_i, p_i))
        residues.append(tuple(weights[j] % p_i for j in range(i)))
    return CrtBasis(primes, tuple(weights), tuple(inverses), tuple(residues), product)


def mrc_digits(residues: Sequence[int], basis: CrtBasis) -> list[int]:
    """Mixed-radix digits of the integer with the given residues.

    The recurrence is serial in the primes; parallelism belongs across
    coefficients, not within one digit vector.
    """
    if len(residues) != len(basis.primes):
        raise ValueError(
            f"got {len(residues)} residues for {len(basis.primes)} primes"
        )
    digits = [residues[0] % basis.primes[0]]
    for i in range(1, len(basis.primes)):
        p_i = basis.primes[i]
        c_i = basis.inverses[i]
        acc = (residues[i] - digits[0]) * c_i % p_i
        for j in range(1, i):
            acc = (acc - digits[j] * basis.weight_residues[i][j] % p_i * c_i) % p_i
        digits.append(acc)
    return digits


def horner_lift(digits: Sequence[int], basis: CrtBasis) -> int:
    """Positional value sum(digits[j] * weights[j]), folded Horner-style."""
    if len(digits) != len(basis.primes):
        raise ValueError(f"got {len(digits)} digits for {len(basis.primes)} primes")
    acc = digits[-1]
    for i in range(len(digits) - 2, -1, -1):
        acc = acc * basis.primes[i] + digits[i]
    return acc


def signed_lift(x: int, product: int) -> int:
    """Map a canonical value in [0, P) into the symmetric range (-P/2, P/2]."""
    if not 0 <= x < product:
        raise ValueError(f"{x} is not a canonical residue mod {product}")
    return x if 2 * x <= product else x - product


def combine_tensor(residue_tensors: Sequence[ModTensor]) -> CoeffTensor:
    """Coefficient-wise reconstruction across one residue tensor per prime.

    Digit recurrences run vectorized over all coefficient positions;
    each position is then lifted and sign-shifted independently, so the
    result does not depend on any processing order.
    """
    if not residue_tensors:
        raise ValueError("at least one residue tensor is required")
    shape = residue_tensors[0].shape
    axis_vars = residue_tensors[0].axis_vars
    for t in residue_tensors:
        if t.shape != shape or t.axis_vars != axis_vars:
            raise ValueError("residue tensors must share one shape")
    basis = build_basis([t.prime.p for t in residue_tensors])
    fast = all(p <= INT64_SAFE_MODULUS for p in basis.primes)
    dtype = np.int64 if fast else object
    xs = [np.asarray(t.residues, dtype=dtype) for t in residue_tensors]

    alphas = [xs[0] % basis.primes[0]]
    for i in range(1, len(basis.primes)):
        p_i = basis.primes[i]
        c_i = basis.inverses[i]
        acc = (xs[i] - alphas[0]) * c_i % p_i
        for j in range(1, i):
            acc = (acc - alphas[j] * basis.weight_residues[i][j] % p_i * c_i) % p_i
        alphas.append(acc)

    coeffs = []
    primes = basis.primes
    half = basis.product
    for pos in range(xs[0].size):
        acc = int(alphas[-1][pos])
        for i in range(len(primes) - 2, -1, -1):
            acc = acc * primes[i] + int(alphas[i][pos])
        coeffs.append(acc if 2 * acc <= half else acc - half)
    return CoeffTensor(shape, tuple(coeffs), axis_vars)
