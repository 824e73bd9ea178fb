import random

import numpy as np
import pytest

from polydet.modular import PrimeSpec, find_fourier_primes
from polydet.tensor import (
    CoeffTensor,
    DegreeVector,
    axis_rotate,
    encode,
    normalize_terms,
    pad_shape,
    pad_to,
    poly_matrix,
    reduce_mod,
    tensor_from_terms,
)

from oracles import peval, random_terms

# F = 1 + 2x + 3xy + 4x^2 + 5y^2 with axes (x, y)
EXAMPLE_TERMS = {(0, 0): 1, (1, 0): 2, (1, 1): 3, (2, 0): 4, (0, 2): 5}


def _spec(q=4):
    return find_fourier_primes(q, 1, start=97, min_count=1)[0]


def test_encode_reference_layout():
    t = encode(EXAMPLE_TERMS, (3, 3), ("x", "y"))
    assert t.coeffs == (1, 0, 5, 2, 3, 0, 4, 0, 0)
    assert t[(1, 1)] == 3


def test_encode_trivial_cases():
    assert encode([], (2, 2), ("x", "y")).coeffs == (0, 0, 0, 0)
    assert encode({(0, 0): 7}, (1, 1), ("x", "y")).coeffs == (7,)


def test_encode_degree_overflow():
    with pytest.raises(ValueError, match="degree overflow"):
        encode({(3, 0): 1}, (3, 3), ("x", "y"))


def test_encode_decode_roundtrip():
    rng = random.Random(2)
    for _ in range(50):
        vn = rng.randint(1, 3)
        terms = random_terms(rng, vn, 3, 50, 6)
        shape = tuple(4 for _ in range(vn))
        names = tuple(f"v{i}" for i in range(vn))
        assert encode(terms, shape, names).terms() == terms


def test_pad_shape_reference_example():
    assert pad_shape((16, 8, 10)) == ((16, 8, 16), 4)
    assert pad_shape((1, 1)) == ((1, 1), 0)
    assert pad_shape((5,)) == ((8,), 3)
    assert pad_shape(()) == ((), 0)


def test_axis_rotate_identity_and_cycle():
    t = encode(EXAMPLE_TERMS, (3, 3), ("x", "y"))
    one_d = encode({(1,): 2}, (4,), ("x",))
    assert axis_rotate(one_d) is one_d
    rotated = axis_rotate(t)
    assert rotated.shape == (3, 3)
    assert rotated.axis_vars == ("y", "x")
    assert axis_rotate(rotated).coeffs == t.coeffs


def test_axis_rotate_index_bookkeeping():
    shape = (2, 3, 4)
    coeffs = tuple(range(24))
    t = CoeffTensor(shape, coeffs, ("a", "b", "c"))
    rot = axis_rotate(t)
    assert rot.shape == (4, 2, 3)
    for i in range(2):
        for j in range(3):
            for k in range(4):
                assert rot[(k, i, j)] == t[(i, j, k)]
    assert sorted(rot.coeffs) == sorted(coeffs)


def test_axis_rotate_full_cycle_mod():
    spec = _spec()
    rng = random.Random(9)
    t = encode(random_terms(rng, 3, 2, 1000, 12), (4, 4, 4), ("x", "y", "z"))
    mt = reduce_mod(t, spec)
    out = mt
    for _ in range(3):
        out = axis_rotate(out)
    assert np.array_equal(out.residues, mt.residues)
    assert out.axis_vars == mt.axis_vars


def test_reduce_mod():
    spec = _spec(0)
    p = spec.p
    t = encode({(0,): -1, (1,): 0, (2,): p + 3}, (4,), ("x",))
    mt = reduce_mod(t, spec)
    assert mt.residues.tolist() == [p - 1, 0, 3, 0]
    rng = random.Random(4)
    for _ in range(100):
        c = rng.randint(-(10**30), 10**30)
        t = encode({(0,): c}, (1,), ("x",))
        assert reduce_mod(t, spec).residues[0] == c % p


def test_mod_tensor_is_read_only():
    spec = _spec()
    mt = reduce_mod(encode({(1,): 5}, (2,), ("x",)), spec)
    with pytest.raises(ValueError):
        mt.residues[0] = 1


def test_pad_to_preserves_terms():
    t = encode(EXAMPLE_TERMS, (3, 3), ("x", "y"))
    padded = pad_to(t, (4, 8))
    assert padded.terms() == t.terms()
    spec = _spec()
    mp = pad_to(reduce_mod(t, spec), (4, 8))
    assert mp.shape == (4, 8)
    assert int(mp.residues.reshape(4, 8)[0, 2]) == 5
    with pytest.raises(ValueError):
        pad_to(t, (2, 3))


def test_tensor_evaluation_matches_term_evaluation():
    rng = random.Random(7)
    for _ in range(30):
        vn = rng.randint(1, 3)
        terms = random_terms(rng, vn, 3, 20, 8)
        t = tensor_from_terms(terms, tuple(f"v{i}" for i in range(vn)))
        point = tuple(rng.randint(-4, 4) for _ in range(vn))
        direct = peval(terms, point)
        via_tensor = peval(t.terms(), point)
        assert direct == via_tensor


def test_degree_vector_validation():
    DegreeVector(("x", "y"), (3, 0))
    with pytest.raises(ValueError):
        DegreeVector(("x", "x"), (1, 1))
    with pytest.raises(ValueError):
        DegreeVector(("x",), (1, 2))
    with pytest.raises(ValueError):
        DegreeVector((), ())


def test_poly_matrix_dedup():
    x = {(1,): 1}
    one = {(0,): 1}
    m = poly_matrix([[x, {(0,): 2}], [dict(x), one]], ("x",))
    assert m.r == 2
    assert m.k == 3
    assert m.entry_ids[0] == m.entry_ids[2]  # both are x
    assert m.mu == 3 / 4
    assert m.dedup[(0, 0)] == m.dedup[(1, 0)]
    assert m.entry(0, 0).terms() == x


def test_poly_matrix_normalized_equality():
    # x - x collapses to the zero polynomial and dedups with literal zero
    m = poly_matrix([[{(1,): 1, (0,): 0}, {}], [{(1,): 0}, {(1,): 1}]], ("x",))
    assert m.entry_ids[1] == m.entry_ids[2]
    assert m.entry(0, 1).terms() == {}


def test_poly_matrix_roundtrip_dict():
    rng = random.Random(12)
    rows = [
        [random_terms(rng, 2, 3, 99, 5) for _ in range(3)] for _ in range(3)
    ]
    m = poly_matrix(rows, ("x", "y"))
    from polydet.tensor import PolyMatrix

    again = PolyMatrix.from_dict(m.to_dict())
    assert again == m


def test_poly_matrix_rejects_non_square():
    with pytest.raises(ValueError, match="square"):
        poly_matrix([[{}, {}], [{}]], ("x",))
