"""Field construction, arithmetic axioms, traces and dual bases."""

import numpy as np
import pytest

from conjcodes.field import (
    Field, dual_basis, field_create, lowest_primitive, poly_is_irreducible,
    poly_is_primitive, polynomial_basis)


def test_prime_field_layout():
    f = field_create(2, 1)
    assert f.order == 2 and f.char == 2 and f.degree == 1
    assert f.modulus == (0, 1)
    assert f.base is None


def test_gf8_uses_first_cubic():
    # x^3 + x + 1 is the first irreducible cubic in packed coefficient order
    f = field_create(2, 3)
    assert f.order == 8
    assert f.modulus == (1, 1, 0, 1)


def test_nonprime_characteristic_rejected():
    with pytest.raises(ValueError):
        field_create(4, 1)
    with pytest.raises(ValueError):
        field_create(1, 2)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2)])
def test_field_axioms_on_samples(p, m):
    f = field_create(p, m)
    rng = np.random.default_rng(p * 10 + m)
    xs = rng.integers(0, f.order, size=40)
    ys = rng.integers(0, f.order, size=40)
    zs = rng.integers(0, f.order, size=40)
    for a, b, c in zip(xs, ys, zs):
        a, b, c = int(a), int(b), int(c)
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.sub(f.add(a, b), b) == a
        if b:
            assert f.mul(f.div(a, b), b) == a
            assert f.mul(b, f.inv(b)) == 1


def test_generator_order_is_full():
    for p, m in ((2, 3), (3, 2)):
        f = field_create(p, m)
        g = f.generator
        seen = {1}
        x = 1
        for _ in range(f.order - 2):
            x = f.mul(x, g)
            seen.add(x)
        assert len(seen) == f.order - 1
        assert f.mul(x, g) == 1


def test_power_index_convention():
    # 0 maps to 0; the j-th generator power maps to j + 1
    f = field_create(2, 3)
    assert f.to_power_index(0) == 0
    assert f.from_power_index(0) == 0
    for j in range(f.order - 1):
        a = f.from_power_index(j + 1)
        assert f.to_power_index(a) == j + 1
        assert a == f.pow(f.generator, j)
    # frozen wire form of the packed elements 0..7
    assert [f.to_power_index(a) for a in range(8)] == [0, 1, 2, 4, 3, 7, 5, 6]


def test_coeffs_round_trip_constant_first():
    f = field_create(2, 3)
    assert f.coeffs(6) == (0, 1, 1)
    assert f.from_coeffs((0, 1, 1)) == 6
    for a in f.elements():
        assert f.from_coeffs(f.coeffs(a)) == a
    f9 = field_create(3, 2)
    for a in f9.elements():
        c = f9.coeffs(a)
        assert a == c[0] + 3 * c[1]


def test_array_ops_match_scalar_ops():
    f = field_create(3, 2)
    rng = np.random.default_rng(1)
    a = rng.integers(0, f.order, size=25)
    b = rng.integers(0, f.order, size=25)
    assert all(int(x) == f.add(int(u), int(v))
               for x, u, v in zip(f.add_arrays(a, b), a, b))
    assert all(int(x) == f.mul(int(u), int(v))
               for x, u, v in zip(f.mul_arrays(a, b), a, b))
    assert all(int(x) == f.sub(0, int(u))
               for x, u in zip(f.neg_arrays(a), a))
    stackd = np.stack([a, b])
    col = f.sum_arrays(stackd, axis=0)
    assert all(int(x) == f.add(int(u), int(v))
               for x, u, v in zip(col, a, b))


def test_trace_values():
    f4 = field_create(2, 2)
    assert f4.trace(0) == 0
    assert f4.trace(1) == 0          # 1 + 1^2 = 0 in characteristic 2
    f8 = field_create(2, 3)
    beta = 2                         # the residue class of x
    assert f8.trace(beta) == 0       # beta + beta^2 + beta^4
    # trace is additive and lands in the prime field
    for a in f8.elements():
        for b in f8.elements():
            assert f8.trace(f8.add(a, b)) == f8.add(f8.trace(a), f8.trace(b))
        assert f8.trace(a) in (0, 1)


def test_dual_basis_kronecker_identity():
    f8 = field_create(2, 3)
    pair = dual_basis(f8)
    assert pair.basis == polynomial_basis(f8) == (1, 2, 4)
    for i, bi in enumerate(pair.basis):
        for j, dj in enumerate(pair.dual):
            assert f8.trace(f8.mul(bi, dj)) == (1 if i == j else 0)


def test_gf4_normal_basis_is_self_dual():
    # {beta, beta^2} in GF(4): Tr(beta*beta) = Tr(beta^2) = 1, cross terms 0
    f4 = field_create(2, 2)
    beta = 2
    basis = (beta, f4.mul(beta, beta))
    pair = dual_basis(f4, basis)
    assert pair.dual == basis


def test_degree_one_dual_basis_is_identity():
    f2 = field_create(2, 1)
    ext = Field.extension(f2, 1)
    pair = dual_basis(ext)
    assert pair.basis == (1,) and pair.dual == (1,)


def test_dependent_set_rejected():
    f8 = field_create(2, 3)
    with pytest.raises(ValueError):
        dual_basis(f8, (1, 2, 3))    # 3 = 1 + 2


def test_primitivity_classification():
    f2 = field_create(2, 1)
    assert poly_is_primitive(f2, (1, 1, 0, 1))        # x^3 + x + 1
    # x^4 + x^3 + x^2 + x + 1 is irreducible but its root has order 5
    quintic_factor = (1, 1, 1, 1, 1)
    assert poly_is_irreducible(f2, quintic_factor)
    assert not poly_is_primitive(f2, quintic_factor)
    assert lowest_primitive(f2, 4) == (1, 1, 0, 0, 1)  # x^4 + x + 1


def test_extension_over_extension():
    f4 = field_create(2, 2)
    f16 = Field.extension(f4, 2)
    assert f16.base is f4 and f16.order == 16
    # subfield arithmetic embeds: lifted elements add like the base
    for a in f4.elements():
        for b in f4.elements():
            la = f16.from_coeffs((a, 0))
            lb = f16.from_coeffs((b, 0))
            assert f16.add(la, lb) == f16.from_coeffs((f4.add(a, b), 0))
