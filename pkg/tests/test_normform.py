from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcspec.algebra import ExtField, PrimeField, irreducible_poly, matrix_det
from funcspec.errors import InputError
from funcspec.normform import determinant_form, multiplication_matrix, norm_form

CASES = [(p, k) for p in (2, 3, 5, 7, 11, 13) for k in range(2, 13) if p**k <= 4096]
SMALL = [(p, k) for p, k in CASES if p**k <= 256]


def field_norm(w, p, k):
    """N(w) = w^(1 + p + ... + p^(k-1)), an element of the prime field."""
    return w ** ((p**k - 1) // (p - 1))


def terms_of(nf):
    return {m: c.value for m, c in nf.terms()}


# --- examples ----------------------------------------------------------------


def test_binary_examples():
    assert terms_of(norm_form(2, 2)) == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert terms_of(norm_form(3, 2, (1, 0, 1))) == {(2, 0): 1, (0, 2): 1}
    nf = norm_form(2, 2)
    F2 = PrimeField(2)
    for point in [(1, 0), (0, 1), (1, 1)]:
        assert nf([F2.elem(v) for v in point]) == F2.one


def test_ternary_form_over_f2():
    nf = norm_form(2, 3)
    assert nf.modulus.ints() == (1, 1, 0, 1)
    assert nf.has_only_trivial_zero()
    assert terms_of(nf) == terms_of(determinant_form(PrimeField(2), 3))


def test_rejects_degree_one_and_nonprime():
    with pytest.raises(InputError):
        norm_form(3, 1)
    with pytest.raises(InputError):
        norm_form(4, 2)


def test_reducible_modulus_is_rejected():
    with pytest.raises(InputError):
        norm_form(2, 2, (1, 0, 1))


# --- oracles -----------------------------------------------------------------


@pytest.mark.parametrize("p,k", [(p, k) for p, k in CASES if p**k <= 64])
def test_conjugate_product_equals_determinant_expansion(p, k):
    fast = norm_form(p, k)
    slow = determinant_form(PrimeField(p), k)
    assert np.array_equal(fast.exponents, slow.exponents)
    assert np.array_equal(fast.coefficients, slow.coefficients)


@pytest.mark.parametrize("p,k", SMALL)
def test_values_are_field_norms(p, k):
    """Every grid value equals the norm of the corresponding field element."""
    nf = norm_form(p, k)
    L = ExtField(p, k, nf.modulus.ints())
    values = nf.grid_values()
    for w in L.elements():
        assert values[w.code] == field_norm(w, p, k).value[0]
    assert nf.has_only_trivial_zero()


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3)])
def test_grid_values_match_pointwise_evaluation(p, k):
    nf = norm_form(p, k)
    F = PrimeField(p)
    values = nf.grid_values()
    for point in itertools.product(range(p), repeat=k):
        digits = tuple(reversed(point))
        assert values[sum(d * p**i for i, d in enumerate(digits))] == nf([F.elem(d) for d in digits]).value


def test_form_is_homogeneous_of_degree_k():
    for p, k in SMALL:
        nf = norm_form(p, k)
        assert (nf.exponents.sum(axis=1) == k).all()
        assert (nf.coefficients != 0).all()


def test_determinant_of_multiplication_matrix_is_norm():
    """The multiplication matrix at a concrete element has determinant N(w)."""
    for p, k in [(2, 3), (3, 2), (5, 2), (3, 3)]:
        F = PrimeField(p)
        modulus = irreducible_poly(p, k)
        L = ExtField(p, k, modulus.ints())
        sym = multiplication_matrix(F, modulus)
        for w in L.elements():
            coords = w.value
            rows = [
                [
                    sum((c * F.elem(_mono_value(m, coords)) for m, c in entry.items()), F.zero)
                    for entry in row
                ]
                for row in sym
            ]
            assert matrix_det(rows).value == field_norm(w, p, k).value[0]


def _mono_value(mono, coords):
    out = 1
    for e, x in zip(mono, coords):
        out *= x**e
    return out


def test_determinant_form_over_extension_field():
    F4 = ExtField(2, 2)
    nf = determinant_form(F4, 2)
    assert nf.has_only_trivial_zero()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_norm_is_multiplicative(case, data):
    p, k = case
    nf = norm_form(p, k)
    values = nf.grid_values()
    L = ExtField(p, k, nf.modulus.ints())
    a = L.from_code(data.draw(st.integers(0, p**k - 1)))
    b = L.from_code(data.draw(st.integers(0, p**k - 1)))
    A, B = L.elem(a), L.elem(b)
    assert values[(A * B).code] == values[A.code] * values[B.code] % p
