"""Integer-valued polynomials on Z in the binomial basis C(x, n).

f = sum c_n C(x, n) is integer-valued on Z exactly when every c_n is an
integer, so divisibility and integer-valuedness become conditions on the
coefficient list. Membership in M_alpha = {f : f(alpha) in pZ_p} is decided
from a truncation alpha = r mod p^N, using that f(a) mod p only depends on
a mod p^(1 + v_p(d!)).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Integers, Poly, is_prime
from .errors import (
    InputError,
    NotDivisible,
    NotIntegerValued,
    NotOverP,
    PreconditionFailed,
    UnknownIdentifier,
)
from .expr import evaluate, parse_expression, variables


def binom(a: int, n: int) -> int:
    """C(a, n) for any integer a; C(a, n) = (-1)^n C(n - a - 1, n) for a < 0."""
    if n < 0:
        return 0
    if a >= 0:
        return math.comb(a, n)
    return (-1) ** n * math.comb(n - a - 1, n)


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise InputError("v_p(0) is infinite")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_factorial(d: int, p: int) -> int:
    """v_p(d!) by Legendre's formula."""
    v, q = 0, p
    while q <= d:
        v += d // q
        q *= p
    return v


@dataclass(frozen=True)
class IVPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, a: int) -> int:
        return eval_binomial(self, a)

    def __add__(self, other: IVPoly) -> IVPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IVPoly(tuple(x + y for x, y in zip(a, b)))

    def scale(self, c: int) -> IVPoly:
        return IVPoly(tuple(c * x for x in self.coeffs))

    @classmethod
    def from_values(cls, values: Sequence[int]) -> IVPoly:
        """Interpolate values at 0, 1, ..., d; c_n is the n-th forward difference at 0."""
        row = [int(v) for v in values]
        out = []
        while row:
            out.append(row[0])
            row = [b - a for a, b in zip(row, row[1:])]
        return cls(tuple(out))

    @classmethod
    def from_expression(cls, text: str, denominator: int = 1) -> IVPoly:
        """Polynomial expression in x with integer coefficients, divided by ``denominator``.

        Raises :class:`NotIntegerValued` with an argument where the quotient
        is not an integer.
        """
        if denominator == 0:
            raise InputError("denominator must be nonzero")
        node = parse_expression(text)
        extra = variables(node) - {"x"}
        if extra:
            raise UnknownIdentifier(f"unknown identifier {sorted(extra)[0]!r}; only x is allowed")
        Z = Integers()
        poly = evaluate(node, {"x": Poly(Z, (Z.zero, Z.one))}, lambda c: Poly(Z, (Z.elem(c),)))
        values = []
        for a in range(max(poly.degree, 0) + 1):
            v = Fraction(poly(Z.elem(a)).value, denominator)
            if v.denominator != 1:
                raise NotIntegerValued(f"value {v} at x = {a} is not an integer", a)
            values.append(int(v))
        return cls.from_values(values)

    def monomial_coefficients(self) -> list[Fraction]:
        """Coefficients in the basis 1, x, x^2, ... (rational)."""
        out = [Fraction(0)] * len(self.coeffs)
        for n, c in enumerate(self.coeffs):
            # C(x, n) = x (x - 1) ... (x - n + 1) / n!
            falling = [Fraction(1)]
            for k in range(n):
                falling = [Fraction(0)] + falling
                for i in range(len(falling) - 1):
                    falling[i] -= k * falling[i + 1]
            for i, v in enumerate(falling):
                out[i] += c * v / math.factorial(n)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            basis = "1" if n == 0 else f"C(x,{n})"
            parts.append(basis if c == 1 and n else f"{c}" if n == 0 else f"{c}*{basis}")
        return " + ".join(parts)


def eval_binomial(f: IVPoly, a: int) -> int:
    return sum(c * binom(a, n) for n, c in enumerate(f.coeffs))


def required_precision(f: IVPoly, p: int) -> int:
    """N with a = b mod p^N implying f(a) = f(b) mod p; N = 1 + v_p(d!)."""
    if f.is_zero():
        raise InputError("the zero polynomial has no degree")
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    return 1 + vp_factorial(f.degree, p)


def precision_counterexample(f: IVPoly, p: int, N: int, bound: int) -> tuple[int, int] | None:
    """A pair a, b in [0, bound) with a = b mod p^N but f(a) != f(b) mod p."""
    period = p**N
    base = [f(a) % p for a in range(min(period, bound))]
    for a in range(period, bound):
        if f(a) % p != base[a % period]:
            return (a % period, a)
    return None


@dataclass(frozen=True)
class PadicApprox:
    """The p-adic integers congruent to r modulo p^N."""

    p: int
    N: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.N < 1:
            raise InputError("precision N must be at least 1")
        if not 0 <= self.r < self.p**self.N:
            raise InputError(f"residue must lie in [0, {self.p}^{self.N})")

    @classmethod
    def of_integer(cls, a: int, p: int, N: int) -> PadicApprox:
        return cls(p, N, a % p**N)


class Membership(enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    INSUFFICIENT_PRECISION = "InsufficientPrecision"


@dataclass(frozen=True)
class ChabertResult:
    status: Membership
    modulus: int  # p^L, the precision at which residues were evaluated
    residues: tuple[int, ...]  # compatible residues mod p^L that were evaluated
    member_residue: int | None = None  # a sub-residue giving a member
    non_member_residue: int | None = None  # a sub-residue giving a non-member


def chabert_member(f: IVPoly, alpha: PadicApprox) -> ChabertResult:
    """Decide f(alpha) in pZ_p for every alpha = r mod p^N, if the answer is uniform."""
    p, N = alpha.p, alpha.N
    L = N if f.is_zero() else max(N, required_precision(f, p))
    step = p**N
    residues = tuple(alpha.r + j * step for j in range(p ** (L - N)))
    zero = [a for a in residues if f(a) % p == 0]
    nonzero = [a for a in residues if f(a) % p != 0]
    if not nonzero:
        status = Membership.MEMBER
    elif not zero:
        status = Membership.NON_MEMBER
    else:
        status = Membership.INSUFFICIENT_PRECISION
    return ChabertResult(
        status, p**L, residues, zero[0] if zero else None, nonzero[0] if nonzero else None
    )


def divide_by_constant(f: IVPoly, c: int) -> IVPoly:
    """g with c*g = f; requires c | f(a) for a = 0, ..., deg f."""
    if c == 0:
        raise InputError("cannot divide by zero")
    for a in range(f.degree + 1):
        if f(a) % c:
            raise NotDivisible(f"{c} does not divide f({a}) = {f(a)}", a)
    g = IVPoly(tuple(x // c for x in f.coeffs))
    if g.scale(c) != f:
        raise AssertionError("binomial coefficients not divisible although values are")
    return g


def pseudoprincipal_Z(q: int, p: int) -> tuple[int, int]:
    """(m, s) with s not in (q) and s * q^m in pZ, for P = (q) minimal over (p)."""
    if not is_prime(abs(q)):
        raise InputError(f"{q} is not prime")
    q = abs(q)
    if p == 0:
        raise InputError("p must be nonzero")
    if p % q:
        raise NotOverP(f"{q} does not divide {p}")
    m = vp(p, q)
    s = p // q**m
    if s % q == 0 or (s * q**m) % p:
        raise AssertionError("pseudoprincipal witness failed its own check")
    return m, s


@dataclass(frozen=True)
class ContainmentCheck:
    f: IVPoly
    p: int
    g: IVPoly  # f = p * g
    m: int
    s: int
    window: tuple[int, int]


def rep_containment_check(f: IVPoly, p: int, window: Iterable[int] | None = None) -> ContainmentCheck:
    """For f with values in pZ, produce g with p*g = f inside Int(Z).

    ``window`` (default: 0 .. deg f + p) is checked first; the arguments
    0 .. deg f, which decide divisibility, are always checked as well.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    window = list(range(max(f.degree, 0) + p + 1) if window is None else window)
    for a in list(window) + list(range(f.degree + 1)):
        if f(a) % p:
            raise PreconditionFailed(f"f({a}) = {f(a)} is not divisible by {p}", a)
    m, s = pseudoprincipal_Z(p, p)
    g = divide_by_constant(f, p)
    if g.scale(p) != f:
        raise AssertionError("p * g differs from f")
    lo, hi = (min(window), max(window)) if window else (0, -1)
    return ContainmentCheck(f, p, g, m, s, (lo, hi))
