from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcspec.algebra import Integers, IntegersMod, Poly2, PrimeField
from funcspec.constructions import (
    CombinerForm,
    binary_combiner_normform,
    combine_finitecase,
    combine_notalgcl,
    dichotomy_witness,
    finitecase_form,
    ideal_cofactors,
    interpolation_combiner,
    unit_one_lift,
    unit_one_polynomial,
)
from funcspec.errors import InputError, NotMaximal, NotUnitValued, ParentMismatch
from funcspec.finite import FiniteIdeal
from funcspec.funcring import FuncRing, MDescriptor, image_ring, is_M_unit_valued, preimage
from funcspec.spectrum import enumerate_ideals, prime_maximal_test

Z = Integers()


def M(p):
    return MDescriptor.principal(Z, p)


def terms(form):
    return {k: v.value for k, v in form.s.terms}


# --- binary combiners --------------------------------------------------------


def test_normform_combiner_examples():
    s = binary_combiner_normform(2, 2, M(2))
    assert terms(s) == {(0, 2): 1, (1, 1): 1, (2, 0): 1}
    assert s.s.parent == Z and s.provenance == "norm-form"
    cubic = binary_combiner_normform(2, 3, M(2))
    assert cubic.reduced.constant_term().is_zero()
    F2 = PrimeField(2)
    for a, b in [(0, 1), (1, 0), (1, 1)]:
        assert not cubic.reduced(F2.elem(a), F2.elem(b)).is_zero()
    assert all(i + j == 3 for (i, j), _ in cubic.reduced.terms)


def test_normform_combiner_rejects_wrong_characteristic():
    with pytest.raises(InputError):
        binary_combiner_normform(3, 2, M(2))
    with pytest.raises(NotMaximal):
        binary_combiner_normform(2, 2, M(4))
    with pytest.raises(ParentMismatch):
        binary_combiner_normform(2, 2, M(2), PrimeField(2))


def test_combine_notalgcl_examples():
    R = FuncRing(Z, [0, 1])
    s = binary_combiner_normform(2, 2, M(2))
    h = combine_notalgcl(R.fn([1, 2]), R.fn([2, 2]), M(2), s)
    assert h.ints() == (7, 12)
    assert preimage(h, M(2)) == 0b10
    zero = combine_notalgcl(R.const(0), R.const(0), M(2), s)
    assert zero.ints() == (0, 0) and preimage(zero, M(2)) == 0b11
    h = combine_notalgcl(R.fn([1, 3]), R.fn([5, 1]), M(2), s)
    assert is_M_unit_valued(h, M(2))


def test_normform_combiner_unit_pairs_exhaustive():
    for p in (2, 3, 5, 7):
        s = binary_combiner_normform(p, 2, M(p))
        F = PrimeField(p)
        for a, b in itertools.product(F.elements(), repeat=2):
            value = s.reduced(a, b)
            assert value.is_zero() == (a.is_zero() and b.is_zero())


def test_interpolation_combiner_examples():
    F2 = PrimeField(2)
    s = interpolation_combiner([F2.zero, F2.one], [F2.zero, F2.one], M(2))
    assert terms(s) == {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    R = FuncRing(Z, [0, 1])
    h = combine_finitecase(R.fn([0, 1]), R.fn([1, 1]), M(2))
    assert h.ints() == (1, 3) and preimage(h, M(2)) == 0
    assert combine_finitecase(R.const(0), R.const(0), M(2)).ints() == (0, 0)
    R3 = FuncRing(Z, [0, 1, 2])
    h = combine_finitecase(R3.fn([1, 4, 7]), R3.fn([0, 3, 6]), M(3))
    assert preimage(h, M(3)) == 0
    assert all(v.value % 3 == 1 for v in h.values)


def test_interpolation_grid_values():
    F5 = PrimeField(5)
    A = [F5.elem(v) for v in (1, 3)]
    B = [F5.elem(v) for v in (0, 4)]
    s = interpolation_combiner(A, B, M(5))
    for a, b in itertools.product(A + [F5.zero], B + [F5.zero]):
        expected = 0 if a.is_zero() and b.is_zero() else 1
        assert s.reduced(a, b).value == expected


def test_combiner_validates_constant_term():
    F2 = PrimeField(2)
    with pytest.raises(InputError):
        CombinerForm(Poly2.from_dict(Z, {(0, 0): 2}), Poly2.from_dict(F2, {(0, 0): 1}), "interpolation", M(2))


@st.composite
def function_pairs(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 12))
    E = list(range(n))
    vals = st.lists(st.integers(-40, 40), min_size=n, max_size=n)
    R = FuncRing(Z, E)
    return p, R.fn(draw(vals)), R.fn(draw(vals))


@settings(max_examples=150, deadline=None)
@given(function_pairs())
def test_both_combiners_intersect_preimages(case):
    p, f, g = case
    target = preimage(f, M(p)) & preimage(g, M(p))
    s = binary_combiner_normform(p, 2, M(p))
    for h, form in (
        (combine_notalgcl(f, g, M(p), s), s),
        (combine_finitecase(f, g, M(p)), finitecase_form(f, g, M(p))),
    ):
        assert preimage(h, M(p)) == target
        a, b = ideal_cofactors(form, f, g)
        assert a * f + b * g == h


@pytest.mark.parametrize("seed", range(10))
def test_iterated_combiners_intersect_many(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5])
    n = rng.randint(1, 10)
    R = FuncRing(Z, list(range(n)))
    fns = [R.fn([rng.randint(-20, 20) for _ in range(n)]) for _ in range(rng.randint(1, 5))]
    target = (1 << n) - 1
    for f in fns:
        target &= preimage(f, M(p))
    s = binary_combiner_normform(p, 2, M(p))
    h1 = h2 = fns[0]
    for f in fns[1:]:
        h1 = combine_notalgcl(h1, f, M(p), s)
        h2 = combine_finitecase(h2, f, M(p))
    assert preimage(h1, M(p)) == preimage(h2, M(p)) == target


# --- unit-one lift -----------------------------------------------------------


def test_unit_one_examples():
    R = FuncRing(Z, [0, 1])
    assert unit_one_lift(R.fn([2, 7]), M(5)).ints() == (6, 21)
    g = R.fn([1, 6])
    assert unit_one_lift(g, M(5)) == g
    F3 = PrimeField(3)
    poly = unit_one_polynomial([F3.elem(1), F3.elem(2)], M(3))
    assert poly.ints() == (0, -3, 1)
    R3 = FuncRing(Z, [0, 1, 2])
    f = unit_one_lift(R3.fn([1, 2, 4]), M(3))
    assert f.ints() == (-2, -2, 4)
    with pytest.raises(NotUnitValued) as exc:
        unit_one_lift(R3.fn([1, 3, 4]), M(3))
    assert exc.value.position == 1


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 10), st.data())
def test_unit_one_lift_is_one_mod_m(p, n, data):
    units = st.integers(-60, 60).filter(lambda v: v % p)
    g = FuncRing(Z, list(range(n))).fn(data.draw(st.lists(units, min_size=n, max_size=n)))
    f = unit_one_lift(g, M(p))
    assert all((v.value - 1) % p == 0 for v in f.values)
    # f is a polynomial in g without constant term
    poly = unit_one_polynomial(g.residues(M(p)), M(p))
    assert poly.coeffs[0].is_zero()
    assert f.ints() == tuple(poly(v).value for v in g.values)


# --- dichotomy -----------------------------------------------------------------


def constants_model(m, n=1, gens=None):
    base = IntegersMod(m)
    R = FuncRing(base, list(range(n)), gens or {})
    return image_ring(R, MDescriptor.zero(base))


def ideal_of(T, labels):
    return FiniteIdeal(T, [T.index(tuple(T.coords[0].elem(v).value for v in lab)) for lab in labels])


def test_dichotomy_examples():
    T6 = constants_model(6)
    M6 = MDescriptor.principal(IntegersMod(6), 2)
    res = dichotomy_witness(ideal_of(T6, [(0,), (3,)]), M6)
    assert res.branch == 2 and T6.element(res.f)[0].value == 3
    assert dichotomy_witness(ideal_of(T6, [(0,), (2,), (4,)]), M6).branch == 1
    T4 = constants_model(4)
    M4 = MDescriptor.principal(IntegersMod(4), 2)
    assert dichotomy_witness(ideal_of(T4, [(0,), (2,)]), M4).branch == 1
    T44 = constants_model(4, 2, {"g": [0, 1]})
    assert T44.size == 16
    Q = ideal_of(T44, [(a, b) for a in (0, 2) for b in range(4)])
    assert dichotomy_witness(Q, M4).branch == 1
    with pytest.raises(NotMaximal):
        dichotomy_witness(ideal_of(T4, [(0,)]), M4)


def test_dichotomy_witness_equation():
    for m, p in [(6, 2), (6, 3), (12, 2), (12, 3), (18, 3)]:
        T = constants_model(m, 2, {"g": [0, 1]})
        Mp = MDescriptor.principal(IntegersMod(m), p)
        for Q in enumerate_ideals(T):
            if not prime_maximal_test(T, Q).maximal:
                continue
            res = dichotomy_witness(Q, Mp)
            if res.branch == 2:
                assert res.f in Q and res.g not in Q
                assert T.add(T.mul(res.h, res.g), res.f) == T.one
                assert all(Mp.contains(v - 1) for v in T.element(res.f))
            else:
                assert set(res.kernel) <= set(Q.members)
