"""Explicit constructions on rings of functions.

* binary forms over D whose reduction mod M vanishes only at (0, 0),
  from norm forms or from interpolation on a finite grid;
* combiners h = s(f, g) with h^{-1}(M) = f^{-1}(M) & g^{-1}(M);
* the unit-one lift of an M-unit-valued g, a multiple of g that is 1 mod M;
* the two-branch dichotomy for a maximal ideal of a finite model ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from .algebra import BaseRing, Poly, Poly2, PrimeField, RingElem
from .errors import CheckFailed, InputError, NotMaximal, NotUnitValued, ParentMismatch
from .finite import FiniteIdeal, ProductSubring, is_maximal_ideal
from .funcring import FnValue, MDescriptor, preimage
from .normform import NForm, determinant_form, norm_form


@dataclass(frozen=True)
class CombinerForm:
    """A form s over D with zero constant term, together with its reduction mod M."""

    s: Poly2
    reduced: Poly2
    provenance: Literal["norm-form", "interpolation"]
    M: MDescriptor

    def __post_init__(self):
        if not self.reduced.constant_term().is_zero():
            raise InputError("a combiner must have zero constant term")
        if self.s.map_coeffs(self.M.reduce, self.reduced.parent) != self.reduced:
            raise InputError("s does not reduce to the stored form")

    def __call__(self, a: RingElem, b: RingElem) -> RingElem:
        return self.s(a, b)


def _lift_form(sbar: Poly2, M: MDescriptor, provenance) -> CombinerForm:
    return CombinerForm(sbar.map_coeffs(M.lift, M.base), sbar, provenance, M)


def _only_trivial_zero(sbar: Poly2) -> tuple | None:
    """A nonzero zero of ``sbar`` on F^2, or None."""
    F = sbar.parent
    for a in F.elements():
        for b in F.elements():
            if (a.is_zero() and b.is_zero()) or not sbar(a, b).is_zero():
                continue
            return (a, b)
    return None


def residue_norm_form(M: MDescriptor, k: int = 2) -> NForm:
    """Norm form of the degree-k extension of the residue field D/M."""
    F = M.require_maximal()
    if isinstance(F, PrimeField):
        return norm_form(F.p, k)
    return determinant_form(F, k)


def binary_combiner_normform(p: int, k: int, M: MDescriptor, D: BaseRing | None = None) -> CombinerForm:
    """Binary form from the norm form of the degree-k extension of D/M.

    The variables x_1, ..., x_{k-1} are all replaced by y; coefficients are
    lifted to canonical representatives in D.
    """
    if D is not None and D != M.base:
        raise ParentMismatch(f"M is an ideal of {M.base}, not of {D}")
    F = M.require_maximal()
    if F.characteristic != p:
        raise InputError(f"D/M = {F} does not have characteristic {p}")
    sbar = residue_norm_form(M, k).binary()
    zero = _only_trivial_zero(sbar)
    if zero is not None:
        raise CheckFailed(f"binary form {sbar} vanishes at {tuple(map(str, zero))}", zero)
    return _lift_form(sbar, M, "norm-form")


def _lagrange_basis(F: BaseRing, nodes: Sequence[RingElem]) -> list[Poly]:
    out = []
    for a in nodes:
        num = Poly(F, (F.one,))
        den = F.one
        for b in nodes:
            if b != a:
                num = num * Poly(F, (-b, F.one))
                den = den * (a - b)
        inv = den.inverse()
        out.append(Poly(F, tuple(c * inv for c in num.coeffs)))
    return out


def interpolation_combiner(A: Sequence[RingElem], B: Sequence[RingElem], M: MDescriptor) -> CombinerForm:
    """Form whose reduction is 0 at (0, 0) and 1 on the rest of (A+0) x (B+0)."""
    F = M.require_maximal()
    return _interpolation_combiner(tuple(sorted(set(A) | {F.zero})), tuple(sorted(set(B) | {F.zero})), M)


@lru_cache(maxsize=4096)
def _interpolation_combiner(X: tuple, Y: tuple, M: MDescriptor) -> CombinerForm:
    F = M.residue_ring()
    LX, LY = _lagrange_basis(F, X), _lagrange_basis(F, Y)
    terms: dict[tuple[int, int], RingElem] = {}
    for a, la in zip(X, LX):
        for b, lb in zip(Y, LY):
            if a.is_zero() and b.is_zero():
                continue
            for i, ca in enumerate(la.coeffs):
                for j, cb in enumerate(lb.coeffs):
                    terms[(i, j)] = terms.get((i, j), F.zero) + ca * cb
    return _lift_form(Poly2.from_dict(F, terms), M, "interpolation")


def _check_pair(f: FnValue, g: FnValue, M: MDescriptor):
    if not f.parent.same_ground(g.parent):
        raise ParentMismatch("f and g live on different ground sets")
    if f.parent.base != M.base:
        raise ParentMismatch(f"M is an ideal of {M.base}, not of {f.parent.base}")


def _apply(f: FnValue, g: FnValue, s: CombinerForm) -> FnValue:
    h = FnValue(f.parent, [s(a, b) for a, b in zip(f.values, g.values)])
    if preimage(h, s.M) != preimage(f, s.M) & preimage(g, s.M):
        raise CheckFailed("combined preimage differs from the intersection", (f, g))
    return h


def combine_notalgcl(f: FnValue, g: FnValue, M: MDescriptor, s: CombinerForm) -> FnValue:
    """h = s(f, g) pointwise, with h^{-1}(M) = f^{-1}(M) & g^{-1}(M)."""
    _check_pair(f, g, M)
    if s.M != M:
        raise ParentMismatch(f"combiner serves M = {s.M}, not {M}")
    return _apply(f, g, s)


def combine_finitecase(f: FnValue, g: FnValue, M: MDescriptor) -> FnValue:
    """Combiner built by interpolating on the residues actually taken by f and g."""
    _check_pair(f, g, M)
    return _apply(f, g, finitecase_form(f, g, M))


def finitecase_form(f: FnValue, g: FnValue, M: MDescriptor) -> CombinerForm:
    return interpolation_combiner(f.residues(M), g.residues(M), M)


def ideal_cofactors(s: CombinerForm, f: FnValue, g: FnValue) -> tuple[FnValue, FnValue]:
    """(a, b) with s(f, g) = a*f + b*g exactly, a and b polynomials in f and g.

    Every term of s has positive degree, so x or y can be factored out.
    """
    R = f.parent
    a, b = R.const(0), R.const(0)
    for (i, j), c in s.s.terms:
        if i > 0:
            a = a + f ** (i - 1) * g**j * c
        else:
            b = b + g ** (j - 1) * c
    return a, b


# --- unit-one lift ---------------------------------------------------------


def unit_one_polynomial(residues: Sequence[RingElem], M: MDescriptor) -> Poly:
    """u * (prod (x - d_i) - (-1)^k prod d_i) over D, for the distinct residues d_i."""
    F = M.require_maximal()
    D = M.base
    ds = [M.lift(d) for d in sorted(set(residues))]
    if any(M.contains(d) for d in ds):
        raise NotUnitValued("a residue is zero", -1)
    k = len(ds)
    prod_poly = Poly(D, (D.one,))
    prod_d = D.one
    for d in ds:
        prod_poly = prod_poly * Poly(D, (-d, D.one))
        prod_d = prod_d * d
    sign = D.one if k % 2 == 0 else -D.one
    h = prod_poly - Poly(D, (sign * prod_d,))
    c = M.reduce(-sign * prod_d)
    u = M.lift(c.inverse())
    return Poly(D, tuple(u * x for x in h.coeffs))


def unit_one_lift(g: FnValue, M: MDescriptor) -> FnValue:
    """A multiple of g, as a polynomial in g without constant term, that is 1 mod M."""
    M.require_maximal()
    if g.parent.base != M.base:
        raise ParentMismatch(f"M is an ideal of {M.base}, not of {g.parent.base}")
    for pos, v in enumerate(g.values):
        if M.contains(v):
            raise NotUnitValued(f"g({g.parent.E[pos]}) = {v} lies in M", pos)
    poly = unit_one_polynomial(g.residues(M), M)
    if poly.coeffs and not poly.coeffs[0].is_zero():
        raise CheckFailed("unit-one polynomial has a constant term")
    f = FnValue(g.parent, [poly(v) for v in g.values])
    one = M.residue_ring().one
    bad = [i for i, v in enumerate(f.values) if M.reduce(v) != one]
    if bad:
        raise CheckFailed(f"lift is not 1 mod M at position {bad[0]}", bad[0])
    return f


# --- dichotomy -------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyResult:
    """Branch 1: the kernel of reduction mod M lies in Q.
    Branch 2: Q holds f = 1 - h*g with g in the kernel but not in Q."""

    branch: Literal[1, 2]
    kernel: tuple[int, ...]
    f: int | None = None
    g: int | None = None
    h: int | None = None


def m_kernel(T: ProductSubring, M: MDescriptor) -> np.ndarray:
    """Elements of T all of whose coordinates lie in M."""
    inside = _coordinate_mask(T, M)
    return np.flatnonzero(inside.all(axis=1))


def m_unit_valued(T: ProductSubring, M: MDescriptor) -> np.ndarray:
    """Elements of T none of whose coordinates lie in M."""
    inside = _coordinate_mask(T, M)
    return np.flatnonzero(~inside.any(axis=1))


def _coordinate_mask(T: ProductSubring, M: MDescriptor) -> np.ndarray:
    M.require_maximal()
    for c in T.coords:
        if c != M.base:
            raise ParentMismatch(f"coordinates of T are in {c}, M is an ideal of {M.base}")
    ring = T.coords[0]
    table = np.array([M.contains(ring(ring.from_code(c))) for c in range(ring.size)])
    return table[T.codes]


def dichotomy_witness(Q: FiniteIdeal, M: MDescriptor) -> DichotomyResult:
    T = Q.parent
    if not is_maximal_ideal(Q):
        raise NotMaximal("Q is not a maximal ideal of T")
    kernel = m_kernel(T, M)
    outside = [int(x) for x in kernel if x not in Q]
    if not outside:
        return DichotomyResult(1, tuple(int(x) for x in kernel))
    g = outside[0]
    # Q + (g) = T, so 1 = h*g + f for some h in T and f in Q
    f_all = T.add_table[T.one, T.neg_table[T.mul_table[:, g]]]
    for h in range(T.size):
        f = int(f_all[h])
        if f in Q:
            if not all(M.contains(v - 1) for v in T.element(f)):
                raise CheckFailed("witness is not 1 mod M", f)
            return DichotomyResult(2, tuple(int(x) for x in kernel), f, g, h)
    raise CheckFailed("no h with 1 - h*g in Q although Q is maximal", g)
