from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcspec.algebra import (
    ExtField,
    Integers,
    IntegersMod,
    Poly,
    Poly2,
    PrimeField,
    elem_inverse,
    irreducible_poly,
    is_prime,
    matrix_det,
    poly2_eval,
)
from funcspec.errors import InputError, NotAUnit, ParentMismatch, ShapeMismatch

SMALL_FIELDS = [(p, k) for p in (2, 3, 5, 7) for k in range(1, 7) if p**k <= 64]


def naive_poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def products_of_degree(p, k):
    """Every monic reducible polynomial of degree k over F_p, as coefficient tuples."""
    out = set()
    for d in range(1, k // 2 + 1):
        for lo in itertools.product(range(p), repeat=d):
            for hi in itertools.product(range(p), repeat=k - d):
                out.add(tuple(naive_poly_mul(list(lo) + [1], list(hi) + [1], p)))
    return out


def perm_det(rows):
    """Leibniz expansion; an oracle independent of elimination."""
    n = len(rows)
    zero = rows[0][0].parent.zero
    total = zero
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = rows[0][0].parent.one
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total - term if inversions % 2 else total + term
    return total


# --- examples ---------------------------------------------------------------


@pytest.mark.parametrize(
    "p,k,expected",
    [(3, 1, (0, 1)), (2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (3, 2, (1, 0, 1))],
)
def test_irreducible_poly_examples(p, k, expected):
    assert irreducible_poly(p, k).ints() == expected


def test_inverse_examples():
    F5 = PrimeField(5)
    assert elem_inverse(F5.elem(2)) == F5.elem(3)
    F4 = ExtField(2, 2)
    t = F4.gen
    assert elem_inverse(t) == t + 1
    for R in (F5, F4, IntegersMod(6), Integers()):
        with pytest.raises(NotAUnit):
            elem_inverse(R.zero)
    with pytest.raises(NotAUnit):
        elem_inverse(IntegersMod(6).elem(2))
    with pytest.raises(NotAUnit):
        elem_inverse(Integers().elem(2))
    assert elem_inverse(Integers().elem(-1)) == Integers().elem(-1)


def test_matrix_det_examples():
    F2 = PrimeField(2)
    e = F2.elem
    assert matrix_det([[e(1), e(0)], [e(0), e(1)]]) == e(1)
    assert matrix_det([[e(1), e(1)], [e(1), e(0)]]) == e(1)
    assert matrix_det([[e(0)] * 3 for _ in range(3)]) == e(0)
    with pytest.raises(ShapeMismatch):
        matrix_det([[e(1), e(0)]])


def test_poly2_eval_examples():
    form = {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    F2, Z = PrimeField(2), Integers()
    s2 = Poly2.from_dict(F2, form)
    assert poly2_eval(s2, F2.zero, F2.zero) == F2.zero
    assert poly2_eval(s2, F2.one, F2.one) == F2.one
    sz = Poly2.from_dict(Z, form)
    assert poly2_eval(sz, Z.elem(2), Z.elem(3)) == Z.elem(19)
    with pytest.raises(ParentMismatch):
        poly2_eval(sz, F2.one, F2.one)


def test_poly2_canonical_terms():
    F3 = PrimeField(3)
    s = Poly2(F3, (((0, 1), 1), ((1, 0), 2), ((0, 1), 2), ((2, 2), 0)))
    assert [k for k, _ in s.terms] == [(1, 0)]


def test_canonical_representatives():
    assert IntegersMod(6).elem(-1).value == 5
    assert PrimeField(7).elem(15).value == 1
    F8 = ExtField(2, 3)
    t = F8.gen
    assert t**3 == t + 1
    assert F8.elem([1, 1]).value == (1, 1, 0)
    assert len(F8.elements()) == 8


def test_rejects_bad_parameters():
    with pytest.raises(InputError):
        PrimeField(9)
    with pytest.raises(InputError):
        ExtField(2, 2, (1, 0, 1))  # t^2 + 1 = (t + 1)^2
    with pytest.raises(InputError):
        IntegersMod(1)


def test_integers_mod_domain_flag():
    assert IntegersMod(7).is_domain and not IntegersMod(6).is_domain


def test_is_prime_against_sieve():
    sieve = [True] * 500
    sieve[0] = sieve[1] = False
    for i in range(2, 500):
        if sieve[i]:
            for j in range(i * i, 500, i):
                sieve[j] = False
    assert [n for n in range(500) if is_prime(n)] == [n for n in range(500) if sieve[n]]


# --- exhaustive properties ---------------------------------------------------


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, k):
    F = ExtField(p, k) if k > 1 else PrimeField(p)
    elems = F.elements()
    q = len(elems)
    assert q == p**k
    assert [a.code for a in elems] == list(range(q))
    # tables come from the element operations; all triples are then checked on them
    add = np.array([[(a + b).code for b in elems] for a in elems])
    mul = np.array([[(a * b).code for b in elems] for a in elems])
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[add] == add[:, add]).all()  # (a+b)+c == a+(b+c)
    assert (mul[mul] == mul[:, mul]).all()
    # a*(b+c) == a*b + a*c
    lhs = mul[:, add]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    assert (lhs == rhs).all()
    zero, one = F.zero.code, F.one.code
    assert (add[zero] == np.arange(q)).all() and (mul[one] == np.arange(q)).all()
    for a in elems:
        assert a + (-a) == F.zero
        if not a.is_zero():
            assert a * a.inverse() == F.one


@pytest.mark.parametrize("p,k", [(p, k) for p in (2, 3, 5) for k in range(1, 6) if p**k <= 3125])
def test_irreducible_poly_is_smallest_irreducible(p, k):
    f = irreducible_poly(p, k)
    code = sum(c * p**i for i, c in enumerate(f.ints()[:-1]))
    reducible = products_of_degree(p, k)
    assert f.ints() not in reducible
    F = PrimeField(p)
    assert all(not f(F.elem(a)).is_zero() for a in range(p)) or k == 1
    for smaller in range(code):
        cand = tuple((smaller // p**i) % p for i in range(k)) + (1,)
        assert cand in reducible


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5, 7]),
    n=st.integers(1, 4),
    data=st.data(),
)
def test_det_multiplicative_and_matches_leibniz(p, n, data):
    F = PrimeField(p)
    entries = st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n)
    A = [[F.elem(v) for v in row] for row in _rows(data.draw(entries), n)]
    B = [[F.elem(v) for v in row] for row in _rows(data.draw(entries), n)]
    AB = [[sum((A[i][t] * B[t][j] for t in range(n)), F.zero) for j in range(n)] for i in range(n)]
    assert matrix_det(A) == perm_det(A)
    assert matrix_det(AB) == matrix_det(A) * matrix_det(B)


def _rows(flat, n):
    return [flat[i * n : (i + 1) * n] for i in range(n)]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-50, 50), max_size=6), st.lists(st.integers(-50, 50), max_size=6), st.integers(-9, 9))
def test_poly_arithmetic_matches_evaluation(a, b, x):
    Z = Integers()
    f, g = Poly.from_ints(Z, a), Poly.from_ints(Z, b)
    X = Z.elem(x)
    assert (f * g)(X) == f(X) * g(X)
    assert (f + g)(X) == f(X) + g(X)
    assert not (f * g).coeffs or not (f * g).coeffs[-1].is_zero()


@settings(max_examples=50, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(2, 60))
def test_integers_mod_matches_python(a, m):
    R = IntegersMod(m)
    x = R.elem(a)
    assert x.value == a % m
    if math.gcd(a, m) == 1:
        assert (x * x.inverse()).value == 1 % m
