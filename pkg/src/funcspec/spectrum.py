"""Ideals and primes of finite rings, and the classification checks built on them.

Everything here is brute force over explicit finite rings: the image of a
ring of functions in (D/M)^E, small models over Z/p^2, and finite products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import BaseRing
from .constructions import DichotomyResult, dichotomy_witness, m_kernel, m_unit_valued
from .errors import CheckFailed, FIPViolated, InputError, TooLarge
from .finite import FiniteIdeal, FiniteRing, ProductSubring, Quotient, product_ring
from .funcring import FuncRing, ImageRing, MDescriptor, image_ring
from .setfilters import FilterFin, UltrafilterFin, fip_filter, ideal_in_mf, zero_sets

DEFAULT_IDEAL_CAP = 1024


def enumerate_ideals(S: FiniteRing, cap: int = DEFAULT_IDEAL_CAP) -> list[FiniteIdeal]:
    """All ideals of S, ordered by size and then by member list.

    Starting from {0}, every ideal I is extended by (a) for one a from each
    nontrivial coset of I; every ideal is a finite sum of principal ideals,
    so the search reaches all of them.
    """
    if S.size > cap:
        raise TooLarge(f"{S.size} elements exceed the enumeration cap {cap}")
    start = np.zeros(S.size, dtype=bool)
    start[S.zero] = True
    seen = {start.tobytes()}
    stack = [start]
    found = [start]
    while stack:
        ind = stack.pop()
        members = np.flatnonzero(ind)
        reps = np.unique(S.add_table[:, members].min(axis=1))
        for a in reps:
            if ind[a]:
                continue
            nxt = S.extend_ideal(ind, int(a))
            key = nxt.tobytes()
            if key not in seen:
                seen.add(key)
                stack.append(nxt)
                found.append(nxt)
    ideals = [FiniteIdeal(S, np.flatnonzero(ind), check=False) for ind in found]
    ideals.sort(key=lambda I: (len(I), I.members))
    return ideals


@dataclass(frozen=True)
class PrimeMaximal:
    prime: bool
    maximal: bool


def prime_maximal_test(S: FiniteRing, I: FiniteIdeal) -> PrimeMaximal:
    if I.parent is not S:
        raise InputError("ideal belongs to a different ring")
    if not I.is_proper():
        return PrimeMaximal(False, False)
    q = Quotient(I)
    return PrimeMaximal(q.is_domain(), q.is_field())


@dataclass(frozen=True)
class ResidueReport:
    representatives: tuple[int, ...]  # constant elements, one per coset
    size: int
    characteristic: int


def quotient_residue_check(S: ImageRing, Q: FiniteIdeal, M: MDescriptor) -> ResidueReport:
    """Constants represent S/Q exactly once each, and S/Q matches D/M."""
    F = M.residue_ring()
    q = Quotient(Q)
    if not q.is_field():
        raise InputError("Q is not maximal")
    consts = S.constants()
    classes = q.cls[consts]
    if len(np.unique(classes)) != len(consts):
        dup = next(c for c in classes if (classes == c).sum() > 1)
        pair = consts[classes == dup][:2]
        raise CheckFailed("two constants fall in the same coset", tuple(int(x) for x in pair))
    if len(consts) != q.size:
        missing = next(c for c in range(q.size) if c not in set(classes.tolist()))
        raise CheckFailed("a coset contains no constant", int(q.reps[missing]))
    if q.size != F.size or q.characteristic() != F.characteristic:
        raise CheckFailed(f"S/Q has {q.size} elements, D/M has {F.size}")
    # the constant embedding respects both operations
    for i in consts:
        for j in consts:
            if q.cls[S.add_table[i, j]] != q.add_table[q.cls[i], q.cls[j]]:
                raise CheckFailed("constant embedding is not additive", (int(i), int(j)))
            if q.cls[S.mul_table[i, j]] != q.mul_table[q.cls[i], q.cls[j]]:
                raise CheckFailed("constant embedding is not multiplicative", (int(i), int(j)))
    order = np.argsort(classes)
    return ResidueReport(tuple(int(x) for x in consts[order]), q.size, q.characteristic())


@dataclass
class FiniteThmReport:
    image_size: int
    ideal_count: int
    primes: list[tuple[int, ...]]
    point_prime: list[int]  # index into primes of the kernel at each point
    fibration: list[list[int]]
    prime_equals_maximal: bool
    primes_match_points: bool
    all_maximal: bool
    residues_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_finitethm(R: FuncRing, M: MDescriptor, cap: int = DEFAULT_IDEAL_CAP) -> FiniteThmReport:
    """Primes of the image ring versus the ideals M_U, U principal on E."""
    S = image_ring(R, M, cap)
    ideals = enumerate_ideals(S, cap)
    tests = {I: prime_maximal_test(S, I) for I in ideals}
    failures = []
    pm = all(t.prime == t.maximal for t in tests.values())
    if not pm:
        failures.append("prime and maximal disagree on some ideal")
    primes = [I for I in ideals if tests[I].prime]
    kernels = [FiniteIdeal(S, S.coordinate_kernel(j), check=False) for j in range(R.n)]
    match = set(primes) == set(kernels)
    if not match:
        failures.append("primes differ from the point kernels")
    all_max = all(tests.get(K, PrimeMaximal(False, False)).maximal for K in kernels)
    if not all_max:
        failures.append("a point kernel is not maximal")
    residues_ok = True
    for P in primes:
        try:
            quotient_residue_check(S, P, M)
        except (CheckFailed, InputError) as exc:
            residues_ok = False
            failures.append(f"residue check failed: {exc}")
    point_prime = [primes.index(K) if K in primes else -1 for K in kernels]
    fib: dict[int, list[int]] = {}
    for j, k in enumerate(point_prime):
        fib.setdefault(k, []).append(j)
    fibration = sorted(fib.values())
    return FiniteThmReport(
        S.size, len(ideals), [P.members for P in primes], point_prime, fibration,
        pm, match, all_max, residues_ok, failures,
    )


# --- dichotomy -------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyCase:
    ideal: tuple[int, ...]
    result: DichotomyResult
    kernel_inside: bool
    has_one_mod_M: bool
    has_unit_valued: bool

    @property
    def exactly_one(self) -> bool:
        return self.kernel_inside != self.has_one_mod_M

    @property
    def consistent(self) -> bool:
        return (
            self.exactly_one
            and self.result.branch == (1 if self.kernel_inside else 2)
            and (self.result.branch == 2) == self.has_unit_valued
        )


@dataclass
class DichotomyReport:
    size: int
    cases: list[DichotomyCase]

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(c.consistent for c in self.cases)


def classify_dichotomy(T: ProductSubring, M: MDescriptor, cap: int = 4096) -> DichotomyReport:
    """Run the dichotomy on every maximal ideal of T, with brute-force cross-checks."""
    ideals = enumerate_ideals(T, cap)
    kernel = set(m_kernel(T, M).tolist())
    unit_valued = set(m_unit_valued(T, M).tolist())
    one_mod_M = {
        i for i in range(T.size) if all(M.contains(v - 1) for v in T.element(i))
    }
    cases = []
    for Q in ideals:
        if not prime_maximal_test(T, Q).maximal:
            continue
        members = set(Q.members)
        cases.append(
            DichotomyCase(
                Q.members,
                dichotomy_witness(Q, M),
                kernel <= members,
                bool(one_mod_M & members),
                bool(unit_valued & members),
            )
        )
    return DichotomyReport(T.size, cases)


# --- M_F containment -------------------------------------------------------


@dataclass
class ContainmentReport:
    ideal_count: int
    fip_count: int
    maximal_no_unit: list[tuple[int, ...]]
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_mf_containment(S: ImageRing, cap: int = 256) -> ContainmentReport:
    """For every ideal I of S: no M-unit-valued member, FIP of Z_M(I), and
    I inside some M_F all agree; the maximal unit-free ideals are the point kernels."""
    ideals = enumerate_ideals(S, cap)
    n = S.funcring.n
    filters = FilterFin.all_filters(n)
    failures = []
    no_unit_ideals = []
    fip_count = 0
    for I in ideals:
        Z = zero_sets(S, I.members)
        no_unit = 0 not in Z
        try:
            F = fip_filter(Z)
            fip = True
            fip_count += 1
        except FIPViolated:
            F, fip = None, False
        in_some = any(ideal_in_mf(S, I, G) for G in filters)
        if not no_unit == fip == in_some:
            failures.append(f"ideal {list(I.members)}: unit-free={no_unit} fip={fip} in-some-M_F={in_some}")
        if fip and not ideal_in_mf(S, I, F):
            failures.append(f"ideal {list(I.members)} not inside M_F of its generated filter")
        if no_unit:
            no_unit_ideals.append(I)
    maximal = [I for I in no_unit_ideals if not any(I != J and I.issubset(J) for J in no_unit_ideals)]
    kernels = {FiniteIdeal(S, S.coordinate_kernel(j), check=False) for j in range(n)}
    if set(maximal) != kernels:
        failures.append("maximal unit-free ideals differ from the point kernels")
    return ContainmentReport(len(ideals), fip_count, sorted(I.members for I in maximal), failures)


# --- principal ultraproducts -----------------------------------------------


def base_ring_model(B: BaseRing) -> ProductSubring:
    """A finite base ring as a one-coordinate ProductSubring."""
    return ProductSubring([B], np.arange(B.size).reshape(-1, 1), check=False)


@dataclass
class UltraproductResult:
    product_size: int
    quotient: FiniteRing
    class_of: np.ndarray  # product element -> congruence class
    iso: list[int]  # congruence class -> element of the selected factor

    @property
    def size(self) -> int:
        return self.quotient.size


def ultraproduct_principal(rings: list[ProductSubring], U: UltrafilterFin) -> UltraproductResult:
    """Product of ``rings`` modulo agreement on a set in U, and its isomorphism
    with the factor at U's point."""
    if U.n != len(rings):
        raise InputError(f"ultrafilter on {U.n} points for {len(rings)} factors")
    P, blocks = product_ring(rings)
    N = P.size
    # agreement mask of every element against a representative
    block_codes = [P.codes[:, b] for b in blocks]
    class_of = np.full(N, -1, dtype=np.int64)
    reps = []
    point_bit = np.int64(1) << U.point
    while (class_of < 0).any():
        r = int(np.flatnonzero(class_of < 0)[0])
        agree = np.zeros(N, dtype=np.int64)
        for s, codes in enumerate(block_codes):
            agree |= (codes == codes[r]).all(axis=1).astype(np.int64) << s
        in_U = (agree & point_bit) != 0
        if (class_of[in_U] >= 0).any():
            raise CheckFailed("congruence classes overlap", r)
        class_of[in_U] = len(reps)
        reps.append(r)
    reps_arr = np.array(reps)
    k = len(reps)

    def op_table(which: str) -> np.ndarray:
        fn = P.add_codes if which == "add" else P.mul_codes
        table = np.empty((k, k), dtype=np.int64)
        for c, r in enumerate(reps):
            table[c] = class_of[P.lookup(fn(P.codes[r][None, :], P.codes[reps_arr]))]
        # well defined: replacing the left operand by any class member gives the same class
        for d, r in enumerate(reps):
            got = class_of[P.lookup(fn(P.codes, P.codes[r][None, :]))]
            if not np.array_equal(got, table[class_of, d]):
                raise CheckFailed(f"congruence is not compatible with {which}", r)
        return table

    qadd, qmul = op_table("add"), op_table("mul")
    quotient = FiniteRing(list(range(k)), qadd, qmul, check=k <= 32)
    factor = rings[U.point]
    proj = factor.lookup(P.codes[reps_arr][:, blocks[U.point]])
    iso = [int(x) for x in proj]
    if sorted(iso) != list(range(factor.size)):
        raise CheckFailed("projection is not a bijection onto the factor")
    iso_arr = np.array(iso)
    if not (
        np.array_equal(iso_arr[quotient.add_table], factor.add_table[np.ix_(iso_arr, iso_arr)])
        and np.array_equal(iso_arr[quotient.mul_table], factor.mul_table[np.ix_(iso_arr, iso_arr)])
    ):
        raise CheckFailed("projection does not respect the operations")
    return UltraproductResult(N, quotient, class_of, iso)
