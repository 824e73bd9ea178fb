import random

import numpy as np
import pytest

from polydet.modular import find_fourier_primes, find_root_of_order
from polydet.tensor import encode, pad_to, reduce_mod, tensor_from_terms
from polydet.transform import (
    TwiddleTable,
    ntt_forward_1d,
    ntt_forward_multi,
    ntt_inverse_1d,
    ntt_inverse_multi,
)

from oracles import naive_dft, naive_inverse_dft, peval, pmul, random_terms

SPEC_97 = find_fourier_primes(4, 1, start=97, min_count=1)[0]  # p = 97, q = 4
SPECS = [
    find_fourier_primes(10, 1, start=s, min_count=1)[0]
    for s in (10**4, 10**6, 10**9)
]
BIG_SPEC = find_fourier_primes(10, 1, start=2**61, min_count=1)[0]  # object dtype


def test_small_prime_spec_sanity():
    assert SPEC_97.p == 97 and SPEC_97.q == 4


def test_length_two_butterfly():
    for spec in SPECS:
        table = TwiddleTable(spec)
        p = spec.p
        a, b = 17, p - 5
        out = ntt_forward_1d([a, b], table)
        assert out.tolist() == [(a + b) % p, (a - b) % p]


def test_delta_has_constant_spectrum():
    table = TwiddleTable(SPECS[0])
    out = ntt_forward_1d([9, 0, 0, 0], table)
    assert out.tolist() == [9, 9, 9, 9]


def test_forward_matches_naive_dft():
    rng = random.Random(1)
    for spec in SPECS:
        table = TwiddleTable(spec)
        for n in (2, 4, 8, 16, 32):
            data = [rng.randrange(spec.p) for _ in range(n)]
            expected = naive_dft(data, table.root_of_length(n), spec.p)
            assert ntt_forward_1d(data, table).tolist() == expected


def test_inverse_matches_naive_inverse():
    rng = random.Random(2)
    spec = SPECS[1]
    table = TwiddleTable(spec)
    data = [rng.randrange(spec.p) for _ in range(8)]
    expected = naive_inverse_dft(data, table.root_of_length(8), spec.p)
    assert ntt_inverse_1d(data, table).tolist() == expected


def test_roundtrip_identity_all_lengths():
    rng = random.Random(3)
    spec = SPECS[0]
    table = TwiddleTable(spec)
    for l in range(0, 11):
        n = 1 << l
        data = [rng.randrange(spec.p) for _ in range(n)]
        back = ntt_inverse_1d(ntt_forward_1d(data, table), table)
        assert back.tolist() == data


def test_linearity():
    rng = random.Random(4)
    spec = SPECS[2]
    p = spec.p
    table = TwiddleTable(spec)
    for _ in range(20):
        n = 16
        x = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        y = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        a, b = rng.randrange(p), rng.randrange(p)
        lhs = ntt_forward_1d((a * x + b * y) % p, table)
        rhs = (a * ntt_forward_1d(x, table) + b * ntt_forward_1d(y, table)) % p
        assert np.array_equal(lhs, rhs)


def test_cyclic_convolution_matches_schoolbook():
    rng = random.Random(5)
    spec = SPECS[0]
    p = spec.p
    table = TwiddleTable(spec)
    n = 8
    f = [rng.randrange(p) for _ in range(n)]
    g = [rng.randrange(p) for _ in range(n)]
    fw = ntt_forward_1d(f, table)
    gw = ntt_forward_1d(g, table)
    prod = ntt_inverse_1d(fw * gw % p, table)
    expected = [0] * n
    for i in range(n):
        for j in range(n):
            expected[(i + j) % n] = (expected[(i + j) % n] + f[i] * g[j]) % p
    assert prod.tolist() == expected


def test_unsupported_lengths():
    table = TwiddleTable(SPECS[0])
    with pytest.raises(ValueError, match="unsupported length"):
        ntt_forward_1d([1, 2, 3], table)
    with pytest.raises(ValueError, match="unsupported length"):
        ntt_forward_1d([0] * (1 << 11), table)  # above 2^q


def test_multi_constant_polynomial():
    mt = reduce_mod(encode({(0, 0): 42}, (4, 8), ("x", "y")), SPECS[0])
    out = ntt_forward_multi(mt, TwiddleTable(SPECS[0]))
    assert set(out.residues.tolist()) == {42}
    assert out.axis_vars == ("x", "y")


def test_multi_single_variable_equals_1d():
    rng = random.Random(6)
    spec = SPECS[1]
    table = TwiddleTable(spec)
    data = [rng.randrange(spec.p) for _ in range(16)]
    mt = reduce_mod(encode({(i,): c for i, c in enumerate(data)}, (16,), ("x",)), spec)
    multi = ntt_forward_multi(mt, table)
    assert multi.residues.tolist() == ntt_forward_1d(data, table).tolist()


def test_multi_matches_direct_evaluation_reference_poly():
    # F = 1 + 2x + 3xy + 4x^2 + 5y^2 on the (4, 4) grid mod 97
    table = TwiddleTable(SPEC_97)
    terms = {(0, 0): 1, (1, 0): 2, (1, 1): 3, (2, 0): 4, (0, 2): 5}
    mt = pad_to(reduce_mod(tensor_from_terms(terms, ("x", "y")), SPEC_97), (4, 4))
    grid = ntt_forward_multi(mt, table).residues.reshape(4, 4)
    wx = table.root_of_length(4)
    for a in range(4):
        for b in range(4):
            point = (pow(wx, a, 97), pow(wx, b, 97))
            assert grid[a, b] == peval(terms, point, 97)


def test_multi_matches_direct_evaluation_random():
    rng = random.Random(7)
    for spec in (SPECS[0], SPEC_97):
        table = TwiddleTable(spec)
        for _ in range(10):
            terms = random_terms(rng, 2, 3, spec.p - 1, 6)
            mt = pad_to(reduce_mod(tensor_from_terms(terms, ("x", "y")), spec), (4, 4))
            grid = ntt_forward_multi(mt, table).residues.reshape(4, 4)
            w = table.root_of_length(4)
            for a in range(4):
                for b in range(4):
                    point = (pow(w, a, spec.p), pow(w, b, spec.p))
                    assert grid[a, b] == peval(terms, point, spec.p)


def test_multi_roundtrip_shapes():
    rng = random.Random(8)
    spec = SPECS[2]
    table = TwiddleTable(spec)
    for shape in ((4, 4), (2, 8, 4), (16, 16, 8), (1,), ()):
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        vals = [rng.randrange(spec.p) for _ in range(size)]
        names = tuple(f"v{i}" for i in range(len(shape)))
        mt = reduce_mod(
            encode({tuple(np.unravel_index(i, shape)) if shape else (): v for i, v in enumerate(vals)}, shape, names),
            spec,
        )
        back = ntt_inverse_multi(ntt_forward_multi(mt, table), table)
        assert back.residues.tolist() == mt.residues.tolist()
        assert back.axis_vars == names


def test_multi_zero_grid():
    spec = SPECS[0]
    table = TwiddleTable(spec)
    mt = reduce_mod(encode([], (4, 4), ("x", "y")), spec)
    out = ntt_inverse_multi(mt, table)
    assert set(out.residues.tolist()) == {0}


def test_multi_interpolates_known_coefficients():
    # build the grid by direct evaluation, inverse-transform, compare
    rng = random.Random(9)
    spec = SPEC_97
    table = TwiddleTable(spec)
    terms = random_terms(rng, 2, 3, 96, 8)
    w = table.root_of_length(4)
    values = [
        peval(terms, (pow(w, a, 97), pow(w, b, 97)), 97)
        for a in range(4)
        for b in range(4)
    ]
    grid = reduce_mod(
        encode({(a, b): values[a * 4 + b] for a in range(4) for b in range(4)}, (4, 4), ("x", "y")),
        spec,
    )
    coeffs = ntt_inverse_multi(grid, table)
    expected = pad_to(reduce_mod(tensor_from_terms(terms, ("x", "y")), spec), (4, 4))
    assert coeffs.residues.tolist() == expected.residues.tolist()


def test_roundtrip_injectivity_random_pairs():
    rng = random.Random(10)
    spec = SPECS[0]
    table = TwiddleTable(spec)
    for _ in range(20):
        a = [rng.randrange(spec.p) for _ in range(16)]
        b = [rng.randrange(spec.p) for _ in range(16)]
        if a == b:
            continue
        fa = ntt_forward_1d(a, table)
        fb = ntt_forward_1d(b, table)
        assert fa.tolist() != fb.tolist()


def test_object_dtype_path_for_wide_primes():
    rng = random.Random(11)
    table = TwiddleTable(BIG_SPEC)
    p = BIG_SPEC.p
    assert p > 2**61
    data = [rng.randrange(p) for _ in range(16)]
    fwd = ntt_forward_1d(data, table)
    assert fwd.dtype == object
    assert fwd.tolist() == naive_dft(data, table.root_of_length(16), p)
    assert ntt_inverse_1d(fwd, table).tolist() == data


def test_polynomial_product_through_grid():
    # pointwise product of forward grids interpolates to the product poly
    rng = random.Random(12)
    spec = SPEC_97
    table = TwiddleTable(spec)
    f = random_terms(rng, 2, 1, 4, 3)
    g = random_terms(rng, 2, 1, 4, 3)
    product = pmul(f, g)
    shape = (4, 4)  # big enough for degree-2 products
    mf = pad_to(reduce_mod(tensor_from_terms(f, ("x", "y")), spec), shape)
    mg = pad_to(reduce_mod(tensor_from_terms(g, ("x", "y")), spec), shape)
    gf = ntt_forward_multi(mf, table)
    gg = ntt_forward_multi(mg, table)
    from polydet.tensor import ModTensor

    pointwise = ModTensor(shape, gf.residues * gg.residues % spec.p, spec, ("x", "y"))
    back = ntt_inverse_multi(pointwise, table)
    expected = pad_to(reduce_mod(tensor_from_terms(product, ("x", "y")), spec), shape)
    assert back.residues.tolist() == expected.residues.tolist()
