"""The acceptance suite: ten seeded, exhaustive checks with deterministic reports.

Each ``criterion_N(seed)`` returns a :class:`CriterionResult` whose ``details``
hold only counts and canonical values, so that two runs with the same seed
serialize to identical bytes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import ExtField, Integers, IntegersMod, PrimeField, field_tables, is_prime
from .constructions import (
    binary_combiner_normform,
    combine_finitecase,
    combine_notalgcl,
    finitecase_form,
    ideal_cofactors,
    unit_one_lift,
    unit_one_polynomial,
)
from .errors import CheckFailed, FuncSpecError, NotDivisible, NotOverP, TooLarge
from .finite import coordinate_tables, product_ring
from .funcring import FnValue, FuncRing, ImageRing, MDescriptor, image_ring, preimage
from .intpoly import (
    IVPoly,
    Membership,
    PadicApprox,
    chabert_member,
    divide_by_constant,
    precision_counterexample,
    pseudoprincipal_Z,
    rep_containment_check,
    required_precision,
    vp,
)
from .normform import determinant_form, norm_form
from .setfilters import UltrafilterFin, mf_contains
from .spectrum import (
    base_ring_model,
    classify_dichotomy,
    ultraproduct_principal,
    verify_finitethm,
    verify_mf_containment,
)

MAX_LISTED_FAILURES = 5


@dataclass
class CriterionResult:
    number: int
    title: str
    details: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        self.failures.append(message)


def _rng(seed: int, number: int) -> random.Random:
    return random.Random(f"{seed}:{number}")


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


# --- 1: norm forms -----------------------------------------------------------


def field_norm_codes(p: int, k: int, modulus) -> np.ndarray:
    """N(w) = w^((q-1)/(p-1)) for every w in F_{p^k}, by code."""
    L = ExtField(p, k, modulus)
    tabs = field_tables(L)
    q = p**k
    log = np.array(tabs.log, dtype=np.int64)
    exp = np.array(tabs.exp, dtype=np.int64)
    e = (q - 1) // (p - 1)
    out = exp[(log * e) % (q - 1)]
    out[0] = 0
    return out


def criterion_1(seed: int, symbolic_limit: int = 64) -> CriterionResult:
    res = CriterionResult(1, "norm forms vanish only at zero, for every p^k <= 4096")
    cases = points = symbolic = 0
    for p in primes_up_to(64):
        k = 2
        while p**k <= 4096:
            nf = norm_form(p, k, check=False)
            vals = nf.grid_values()
            zeros = np.flatnonzero(vals == 0)
            if zeros.tolist() != [0]:
                res.fail(f"({p},{k}): zeros at codes {zeros[:4].tolist()}")
            oracle = field_norm_codes(p, k, nf.modulus.ints())
            if not np.array_equal(vals, oracle):
                bad = int(np.flatnonzero(vals != oracle)[0])
                res.fail(f"({p},{k}): form disagrees with the field norm at code {bad}")
            if p**k <= symbolic_limit:
                det = determinant_form(PrimeField(p), k, nf.modulus)
                if not (np.array_equal(det.exponents, nf.exponents) and np.array_equal(det.coefficients, nf.coefficients)):
                    res.fail(f"({p},{k}): symbolic determinant differs")
                symbolic += 1
            cases += 1
            points += p**k
            k += 1
    res.details = {"cases": cases, "points_checked": points, "symbolic_cross_checks": symbolic}
    return res


# --- 2: combiners ----------------------------------------------------------


def _neg_codes(F) -> np.ndarray:
    add, _ = coordinate_tables(F)
    zero = F.code(F.zero.value)
    return np.argmax(add == zero, axis=1)


def in_two_generated_ideal(S: ImageRing, h: FnValue, f: FnValue, g: FnValue) -> bool:
    """Whether h is in S*f + S*g, the ideal generated by f and g in S."""
    neg = _neg_codes(S.residue)
    A = S.mul_codes(S.codes, S.residue_codes(f)[None, :])
    B = S.mul_codes(S.codes, S.residue_codes(g)[None, :])
    diff = S.add_codes(S.residue_codes(h)[None, :], neg[A])
    return bool(np.isin(S.keys_of(diff), S.keys_of(B)).any())


def criterion_2(seed: int, pairs: int = 200, oracle_cap: int = 1024) -> CriterionResult:
    res = CriterionResult(2, "combiners intersect preimages and stay in the ideal")
    rng = _rng(seed, 2)
    Z = Integers()
    checked = oracle_checks = 0
    for p in (2, 3, 5):
        M = MDescriptor.principal(Z, p)
        s_norm = binary_combiner_normform(p, 2, M)
        for n in range(1, 13):
            E = list(range(n))
            for _ in range(pairs):
                fv = [rng.randint(-4 * p, 4 * p) for _ in E]
                gv = [rng.randint(-4 * p, 4 * p) for _ in E]
                R = FuncRing(Z, E, {"f": fv, "g": gv})
                f, g = R.generator("f"), R.generator("g")
                target = preimage(f, M) & preimage(g, M)
                try:
                    S = image_ring(R, M, oracle_cap)
                except TooLarge:
                    S = None
                for label, form, run in (
                    ("norm", s_norm, lambda: combine_notalgcl(f, g, M, s_norm)),
                    ("interp", finitecase_form(f, g, M), lambda: combine_finitecase(f, g, M)),
                ):
                    try:
                        h = run()
                    except CheckFailed as exc:
                        res.fail(f"p={p} n={n} {label}: {exc}")
                        continue
                    if preimage(h, M) != target:
                        res.fail(f"p={p} n={n} {label}: preimage mismatch for f={fv} g={gv}")
                    a, b = ideal_cofactors(form, f, g)
                    if a * f + b * g != h:
                        res.fail(f"p={p} n={n} {label}: cofactor identity fails")
                    if S is not None:
                        oracle_checks += 1
                        if not in_two_generated_ideal(S, h, f, g):
                            res.fail(f"p={p} n={n} {label}: h outside (f, g) in the image ring")
                    checked += 1
    res.details = {"combinations": checked, "image_ring_membership_checks": oracle_checks}
    return res


# --- 3: unit-one lift ------------------------------------------------------


def criterion_3(seed: int, samples: int = 200) -> CriterionResult:
    res = CriterionResult(3, "unit-one lifts are 1 mod M everywhere")
    rng = _rng(seed, 3)
    Z = Integers()
    checked = 0
    for p in (2, 3, 5, 7):
        M = MDescriptor.principal(Z, p)
        for _ in range(samples):
            n = rng.randint(1, 12)
            values = []
            while len(values) < n:
                v = rng.randint(-100, 100)
                if v % p:
                    values.append(v)
            R = FuncRing(Z, range(n), {"g": values})
            g = R.generator("g")
            f = unit_one_lift(g, M)
            if any((v.value - 1) % p for v in f.values):
                res.fail(f"p={p}: lift of {values} is not 1 mod {p}")
            poly = unit_one_polynomial(g.residues(M), M)
            quotient = R.const(0)
            for i, c in enumerate(poly.coeffs[1:]):
                quotient = quotient + g**i * c
            if not poly.coeffs[0].is_zero() or g * quotient != f:
                res.fail(f"p={p}: lift of {values} is not a multiple of g")
            checked += 1
    res.details = {"lifts": checked}
    return res


# --- 4: primes over M are the point ideals ----------------------------------


def random_funcring(rng: random.Random, p: int, max_points: int, max_gens: int, spread: int = 12) -> FuncRing:
    n = rng.randint(1, max_points)
    E = rng.sample(range(-spread, spread + 1), n)
    gens = {f"g{i + 1}": [rng.randint(-spread, spread) for _ in E] for i in range(rng.randint(0, max_gens))}
    return FuncRing(Integers(), E, gens)


def criterion_4(seed: int, configs: int = 50) -> CriterionResult:
    res = CriterionResult(4, "primes over M are exactly the M_U, each maximal with residue field D/M")
    rng = _rng(seed, 4)
    done = skipped = 0
    sizes = []
    while done < configs:
        p = rng.choice((2, 3, 5))
        R = random_funcring(rng, p, 6, 3)
        M = MDescriptor.principal(Integers(), p)
        try:
            rep = verify_finitethm(R, M, 1024)
        except TooLarge:
            skipped += 1
            continue
        for msg in rep.failures:
            res.fail(f"p={p} E={[e.value for e in R.E]}: {msg}")
        sizes.append(rep.image_size)
        done += 1
    res.details = {"configurations": done, "skipped_too_large": skipped, "largest_image": max(sizes)}
    return res


# --- 5: M_F containment ----------------------------------------------------


def containment_models(rng: random.Random, count: int) -> list[tuple[FuncRing, MDescriptor]]:
    Z = Integers()
    models = [
        (FuncRing(Z, [0, 1, 2], {"x": [0, 1, 2]}), MDescriptor.principal(Z, 2)),
        (FuncRing(Z, [0, 1, 2, 3], {"x": [0, 1, 2, 3]}), MDescriptor.principal(Z, 2)),
        (FuncRing(Z, [0, 1, 2]), MDescriptor.principal(Z, 3)),
    ]
    F4 = ExtField(2, 2)
    models.append((FuncRing(F4, [F4.from_code(c) for c in range(4)], {"x": list(range(4))}), MDescriptor.zero(F4)))
    models.append((FuncRing(F4, [F4.from_code(c) for c in range(3)], {}), MDescriptor.zero(F4)))
    while len(models) < count:
        p = rng.choice((2, 3, 5))
        models.append((random_funcring(rng, p, 5, 2), MDescriptor.principal(Z, p)))
    return models


def criterion_5(seed: int, rings: int = 40) -> CriterionResult:
    res = CriterionResult(5, "unit-free ideals are exactly those inside some M_F")
    rng = _rng(seed, 5)
    ideals = tested = skipped = 0
    for R, M in containment_models(rng, rings):
        try:
            S = image_ring(R, M, 256)
            rep = verify_mf_containment(S, 256)
        except TooLarge:
            skipped += 1
            continue
        for msg in rep.failures:
            res.fail(f"{R}: {msg}")
        ideals += rep.ideal_count
        tested += 1
    res.details = {"rings": tested, "skipped_too_large": skipped, "ideals": ideals}
    return res


# --- 6: dichotomy ----------------------------------------------------------


def dichotomy_models(rng: random.Random) -> list[tuple[FuncRing, MDescriptor]]:
    models = []
    Z6 = IntegersMod(6)
    models.append((FuncRing(Z6, [0]), MDescriptor.principal(Z6, 2)))
    models.append((FuncRing(Z6, [0]), MDescriptor.principal(Z6, 3)))
    # over Z/p^2 the kernel is nilpotent, so branch 2 needs a second prime
    for m, q in ((12, 2), (12, 3), (18, 2), (18, 3)):
        D = IntegersMod(m)
        for n in (1, 2):
            models.append((FuncRing(D, list(range(n)), {"x": list(range(n))}), MDescriptor.principal(D, q)))
    for p in (2, 3):
        D = IntegersMod(p * p)
        M = MDescriptor.principal(D, p)
        for n in (1, 2, 3):
            E = list(range(n))
            models.append((FuncRing(D, E), M))
            models.append((FuncRing(D, E, {"x": E}), M))
            models.append((FuncRing(D, E, {"x": [p * e for e in E]}), M))
            for _ in range(3):
                E2 = rng.sample(range(p * p), n)
                gens = {f"g{i}": [rng.randrange(p * p) for _ in E2] for i in range(rng.randint(1, 2))}
                models.append((FuncRing(D, E2, gens), M))
    return models


def criterion_6(seed: int) -> CriterionResult:
    res = CriterionResult(6, "exactly one dichotomy branch, branch 2 iff an M-unit-valued member")
    rng = _rng(seed, 6)
    models = maximal = branch2 = 0
    for R, M in dichotomy_models(rng):
        T = image_ring(R, MDescriptor.zero(R.base), 4096)
        rep = classify_dichotomy(T, M, 4096)
        if not rep.passed:
            res.fail(f"{R} with M = {M}: inconsistent dichotomy")
        models += 1
        maximal += len(rep.cases)
        branch2 += sum(c.result.branch == 2 for c in rep.cases)
    res.details = {"models": models, "maximal_ideals": maximal, "branch_2": branch2}
    return res


# --- 7: membership in M_alpha ----------------------------------------------


def random_ivpoly(rng: random.Random, max_degree: int = 6, spread: int = 20) -> IVPoly:
    while True:
        f = IVPoly(tuple(rng.randint(-spread, spread) for _ in range(rng.randint(1, max_degree + 1))))
        if not f.is_zero():
            return f


def criterion_7(seed: int, samples: int = 100) -> CriterionResult:
    res = CriterionResult(7, "precision bound, exact-argument membership, principal consistency")
    rng = _rng(seed, 7)
    Z = Integers()
    bound_checks = exact_checks = window_checks = 0
    for p in (2, 3, 5):
        M = MDescriptor.principal(Z, p)
        for _ in range(samples):
            f = random_ivpoly(rng)
            N = required_precision(f, p)
            bad = precision_counterexample(f, p, N, p ** (N + 2))
            if bad is not None:
                res.fail(f"p={p} f={f}: bound N={N} broken by {bad}")
            bound_checks += 1
            for _ in range(10):
                a = rng.randint(-500, 500)
                got = chabert_member(f, PadicApprox.of_integer(a, p, N)).status
                want = Membership.MEMBER if f(a) % p == 0 else Membership.NON_MEMBER
                if got != want:
                    res.fail(f"p={p} f={f} a={a}: {got.value} != {want.value}")
                exact_checks += 1
            lo = rng.randint(-30, 30)
            E = list(range(lo, lo + rng.randint(1, 8)))
            R = FuncRing(Z, E, {"f": [f(a) for a in E]})
            for i, a in enumerate(E):
                ultra = mf_contains(R.generator("f"), M, UltrafilterFin(len(E), i))
                member = chabert_member(f, PadicApprox.of_integer(a, p, N)).status == Membership.MEMBER
                if ultra != member:
                    res.fail(f"p={p} f={f} a={a}: ultrafilter and completion disagree")
                window_checks += 1
    res.details = {"bound_checks": bound_checks, "exact_checks": exact_checks, "window_checks": window_checks}
    return res


# --- 8: divisibility --------------------------------------------------------


def criterion_8(seed: int) -> CriterionResult:
    res = CriterionResult(8, "division by constants, containment mechanism, pseudoprincipal witnesses")
    rng = _rng(seed, 8)
    for _ in range(200):
        g = random_ivpoly(rng, spread=50)
        c = rng.choice([x for x in range(-30, 31) if x])
        if divide_by_constant(g.scale(c), c) != g:
            res.fail(f"round trip failed for g={g} c={c}")
        if abs(c) > 1 and any(x % c for x in g.coeffs):
            try:
                divide_by_constant(g, c)
                res.fail(f"g={g} wrongly divisible by {c}")
            except NotDivisible as exc:
                if g(exc.witness) % c == 0:
                    res.fail(f"bad witness {exc.witness} for g={g} c={c}")
    for _ in range(50):
        p = rng.choice((2, 3, 5, 7))
        g = random_ivpoly(rng)
        out = rep_containment_check(g.scale(p), p)
        if out.g != g or out.g.scale(p) != g.scale(p):
            res.fail(f"containment check failed for {p}*({g})")
    pairs = 0
    for q in primes_up_to(13):
        for p in range(-1000, 1001):
            if p == 0:
                continue
            if p % q:
                try:
                    pseudoprincipal_Z(q, p)
                    res.fail(f"q={q} p={p} accepted although q does not divide p")
                except NotOverP:
                    pass
                continue
            m, s = pseudoprincipal_Z(q, p)
            if m != vp(p, q) or s % q == 0 or (s * q**m) % p or m < 1:
                res.fail(f"bad witness ({m},{s}) for q={q} p={p}")
            pairs += 1
    res.details = {"round_trips": 200, "containment_checks": 50, "pseudoprincipal_pairs": pairs}
    return res


# --- 9: principal ultraproducts ---------------------------------------------


def small_ring_pool():
    pool = [base_ring_model(IntegersMod(n)) for n in range(2, 17)]
    pool += [base_ring_model(F) for F in (ExtField(2, 2), ExtField(2, 3), ExtField(2, 4), ExtField(3, 2))]
    F2 = base_ring_model(PrimeField(2))
    pool.append(product_ring([F2, F2])[0])
    pool.append(product_ring([base_ring_model(PrimeField(2)), base_ring_model(PrimeField(3))])[0])
    return pool


def criterion_9(seed: int, tuples: int = 20) -> CriterionResult:
    res = CriterionResult(9, "principal ultraproducts collapse to the chosen factor")
    rng = _rng(seed, 9)
    pool = small_ring_pool()
    sizes = []
    for _ in range(tuples):
        while True:
            rings = [rng.choice(pool) for _ in range(rng.randint(1, 4))]
            if int(np.prod([r.size for r in rings])) <= 1 << 16:
                break
        U = UltrafilterFin(len(rings), rng.randrange(len(rings)))
        try:
            out = ultraproduct_principal(rings, U)
        except CheckFailed as exc:
            res.fail(f"{[r.size for r in rings]} at {U.point}: {exc}")
            continue
        if out.size != rings[U.point].size:
            res.fail(f"{[r.size for r in rings]} at {U.point}: {out.size} classes")
        sizes.append(out.product_size)
    res.details = {"tuples": tuples, "largest_product": max(sizes) if sizes else 0}
    return res


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_criterion(number: int, seed: int) -> CriterionResult:
    try:
        return CRITERIA[number](seed)
    except FuncSpecError as exc:
        res = CriterionResult(number, f"criterion {number}")
        res.fail(f"{type(exc).__name__}: {exc}")
        return res
