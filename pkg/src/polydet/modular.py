"""Prime-field arithmetic and discovery of transform-friendly primes.

All scalar arithmetic runs on plain Python integers, which are exact at
any size, so mul_mod never truncates an intermediate product. The caps
below exist so vectorized code elsewhere can choose an int64 fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .errors import PlanningError

# Moduli stay below 2^62 so residues round-trip through unsigned 64-bit
# storage. Products of two residues under INT64_SAFE_MODULUS fit a
# signed 64-bit intermediate (3037000499^2 < 2^63).
MODULUS_LIMIT = 1 << 62
INT64_SAFE_MODULUS = 3_037_000_499

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97,
)

# Deterministic Miller-Rabin witness set for n < 3.3 * 10^24, which
# covers the full modulus range here with margin.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def add_mod(a: int, b: int, p: int) -> int:
    return (a + b) % p


def sub_mod(a: int, b: int, p: int) -> int:
    return (a - b) % p


def mul_mod(a: int, b: int, p: int) -> int:
    return a * b % p


def pow_mod(a: int, e: int, p: int) -> int:
    return pow(a, e, p)


def inv_mod(a: int, p: int) -> int:
    """Multiplicative inverse of a mod prime p."""
    if a % p == 0:
        raise ValueError(f"no inverse: {a} is not invertible mod {p}")
    return pow(a, -1, p)


def is_prime(n: int) -> bool:
    """Deterministic primality test (fixed-base Miller-Rabin)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeSpec:
    """A prime p = c * 2^q + 1 with a primitive 2^q-th root of unity.

    Every instance is validated on construction, so holding a PrimeSpec
    is proof that transforms of length up to 2^q exist mod p.
    """

    p: int
    c: int
    q: int
    omega: int

    def __post_init__(self):
        if self.c < 1 or self.q < 0:
            raise ValueError(f"invalid prime shape: c={self.c}, q={self.q}")
        if self.p != self.c * (1 << self.q) + 1:
            raise ValueError(f"{self.p} != {self.c} * 2^{self.q} + 1")
        if self.p >= MODULUS_LIMIT:
            raise ValueError(f"modulus {self.p} exceeds the 2^62 cap")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not 1 <= self.omega < self.p:
            raise ValueError(f"root {self.omega} out of range for p={self.p}")
        if pow(self.omega, 1 << self.q, self.p) != 1:
            raise ValueError(f"{self.omega}^(2^{self.q}) != 1 mod {self.p}")
        if self.q >= 1 and pow(self.omega, 1 << (self.q - 1), self.p) == 1:
            raise ValueError(f"{self.omega} has order below 2^{self.q} mod {self.p}")


def _root_candidates(p):
    yield from (a for a in _SMALL_PRIMES if a < p)
    a = _SMALL_PRIMES[-1] + 2
    while a < p:
        yield a
        a += 2


def find_root_of_order(p: int, order: int) -> int:
    """Root of unity of exact two-power `order` mod p.

    Tries the deterministic candidate sequence a = 2, 3, 5, ... and
    returns a^((p-1)/order) for the first candidate whose half-order
    power is not 1, so results are reproducible across runs.
    """
    if order < 1 or order & (order - 1):
        raise ValueError(f"order unavailable: {order} is not a power of two")
    if (p - 1) % order:
        raise ValueError(f"order unavailable: {order} does not divide {p - 1}")
    if order == 1:
        return 1
    exponent = (p - 1) // order
    for a in _root_candidates(p):
        omega = pow(a, exponent, p)
        if pow(omega, order // 2, p) != 1:
            return omega
    raise ValueError(f"order unavailable: no element of order {order} mod {p}")


def find_fourier_primes(
    q: int,
    min_product: int,
    start: int = 10**9,
    *,
    min_count: int = 2,
    scan_limit: int = 1_000_000,
) -> list[PrimeSpec]:
    """Ascending primes = 1 (mod 2^q) whose product covers min_product.

    Scans upward from `start` and stops at the shortest list whose
    product reaches `min_product`, but never returns fewer than
    `min_count` primes (a single-prime field cannot carry the signed
    reconstruction). Raises PlanningError once `scan_limit` candidates
    are exhausted.
    """
    if q < 0:
        raise ValueError("q must be non-negative")
    if min_count < 1:
        raise ValueError("min_count must be positive")
    start = max(start, 2)
    step = 1 << q
    candidate = start + (1 - start % step) % step
    found: list[PrimeSpec] = []
    product = 1
    for _ in range(scan_limit):
        if candidate >= MODULUS_LIMIT:
            break
        if is_prime(candidate):
            omega = find_root_of_order(candidate, step)
            found.append(PrimeSpec(candidate, (candidate - 1) >> q, q, omega))
            product *= candidate
            if product >= min_product and len(found) >= min_count:
                return found
        candidate += step if q else 1
    raise PlanningError(
        f"insufficient primes: found {len(found)} with product {product}, "
        f"need product >= {min_product} and at least {min_count} primes "
        f"(q={q}, start={start}, scan_limit={scan_limit})"
    )


def _primes_above(lower):
    c = max(lower + 1, 2)
    if c == 2:
        yield 2
        c = 3
    if c % 2 == 0:
        c += 1
    while True:
        if is_prime(c):
            yield c
        c += 2


@dataclass(frozen=True)
class CensusResult:
    """Prime counts per transform order, under both readings.

    `counts[N]` counts primes with p = 1 (mod N), i.e. primes admitting
    a primitive N-th root of unity. `exact_counts[N]` counts primes
    whose p - 1 has two-power part exactly N.
    """

    orders: tuple[int, ...]
    counts: dict[int, int]
    exact_counts: dict[int, int]


def census(orders, prime_count: int = 10_000, lower: int = 10**9) -> CensusResult:
    """Tally root-of-unity availability over the first primes above `lower`."""
    orders = tuple(int(n) for n in orders)
    for n in orders:
        if n < 1 or n & (n - 1):
            raise ValueError(f"census order {n} is not a power of two")
    if prime_count < 1:
        raise ValueError("prime_count must be positive")
    counts = {n: 0 for n in orders}
    exact = {n: 0 for n in orders}
    log2 = {n: n.bit_length() - 1 for n in orders}
    for p in islice(_primes_above(lower), prime_count):
        pm1 = p - 1
        v = (pm1 & -pm1).bit_length() - 1
        for n in orders:
            if pm1 % n == 0:
                counts[n] += 1
            if v == log2[n]:
                exact[n] += 1
    return CensusResult(orders, counts, exact)
