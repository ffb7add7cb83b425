"""Exact arithmetic over Z, Z/m, prime fields and finite field extensions.

Every ring is an immutable value object. Elements carry a reference to their
parent ring and a canonical raw value (an ``int`` for Z and Z/m, a tuple of
``k`` coefficients in ``[0, p)``, lowest degree first, for F_{p^k}), so that
equality of elements is equality of representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import InputError, NotAField, NotAUnit, ParentMismatch, ShapeMismatch


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``|n|`` in increasing order."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def digits(code: int, base: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        code, r = divmod(code, base)
        out.append(r)
    return tuple(out)


class BaseRing:
    """Common interface of the coefficient rings.

    Subclasses implement arithmetic on raw values; :class:`RingElem` wraps
    those and supplies the operators.
    """

    is_domain: bool = True
    is_field: bool = False

    # raw-value arithmetic, overridden by subclasses
    def normalize(self, value):
        raise NotImplementedError

    def add_raw(self, a, b):
        raise NotImplementedError

    def neg_raw(self, a):
        raise NotImplementedError

    def mul_raw(self, a, b):
        raise NotImplementedError

    def inv_raw(self, a):
        raise NotImplementedError

    @property
    def size(self) -> int | None:
        """Number of elements, or ``None`` for Z."""
        return None

    @property
    def characteristic(self) -> int:
        raise NotImplementedError

    def code(self, raw) -> int:
        """Integer code in ``[0, size)``; the canonical order of elements."""
        raise NotImplementedError

    def from_code(self, code: int):
        raise NotImplementedError

    # convenience
    def __call__(self, value) -> RingElem:
        return self.elem(value)

    def elem(self, value) -> RingElem:
        if isinstance(value, RingElem):
            if value.parent != self:
                raise ParentMismatch(f"{value!r} is not an element of {self}")
            return value
        return RingElem(self, self.normalize(value))

    @cached_property
    def zero(self) -> RingElem:
        return self.elem(0)

    @cached_property
    def one(self) -> RingElem:
        return self.elem(1)

    def elements(self) -> list[RingElem]:
        if self.size is None:
            raise NotImplementedError("infinite ring")
        return [RingElem(self, self.from_code(c)) for c in range(self.size)]


@dataclass(frozen=True)
class Integers(BaseRing):
    is_domain = True
    is_field = False

    def normalize(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"expected int, got {value!r}")
        return value

    def add_raw(self, a, b):
        return a + b

    def neg_raw(self, a):
        return -a

    def mul_raw(self, a, b):
        return a * b

    def inv_raw(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit of Z")

    @property
    def characteristic(self) -> int:
        return 0

    def __str__(self):
        return "Z"


class _Modular(BaseRing):
    """Shared arithmetic of Z/m and F_p; subclasses provide ``m``."""

    m: int

    def normalize(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"expected int, got {value!r}")
        return value % self.m

    def add_raw(self, a, b):
        return (a + b) % self.m

    def neg_raw(self, a):
        return -a % self.m

    def mul_raw(self, a, b):
        return a * b % self.m

    def inv_raw(self, a):
        if math.gcd(a, self.m) != 1:
            raise NotAUnit(f"{a} is not a unit of {self}")
        return pow(a, -1, self.m)

    @property
    def size(self) -> int:
        return self.m

    @property
    def characteristic(self) -> int:
        return self.m

    def code(self, raw) -> int:
        return raw

    def from_code(self, code: int):
        return code


@dataclass(frozen=True)
class IntegersMod(_Modular):
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InputError("modulus must be at least 2")

    @property
    def is_domain(self) -> bool:  # type: ignore[override]
        return is_prime(self.m)

    @property
    def is_field(self) -> bool:  # type: ignore[override]
        return is_prime(self.m)

    def __str__(self):
        return f"Z/{self.m}"


@dataclass(frozen=True)
class PrimeField(_Modular):
    p: int

    is_domain = True
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")

    @property
    def m(self) -> int:  # type: ignore[override]
        return self.p

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class ExtField(BaseRing):
    """F_{p^k} = F_p[t]/(modulus).

    ``modulus`` is the tuple of coefficients of a monic irreducible polynomial
    of degree ``k``, lowest degree first; by default the smallest one as
    returned by :func:`irreducible_poly`.
    """

    p: int
    k: int
    modulus: tuple[int, ...] | None = None

    is_domain = True
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.k < 1:
            raise InputError("degree must be at least 1")
        if self.modulus is None:
            mod = irreducible_poly(self.p, self.k).ints()
        else:
            mod = tuple(c % self.p for c in self.modulus)
            poly = Poly.from_ints(PrimeField(self.p), mod)
            if poly.degree != self.k or mod[-1] != 1:
                raise InputError("modulus must be monic of degree k")
            if not is_irreducible(poly):
                raise InputError(f"modulus {poly} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", tuple(mod))

    def normalize(self, value):
        if isinstance(value, int) and not isinstance(value, bool):
            return (value % self.p,) + (0,) * (self.k - 1)
        value = tuple(value)
        if len(value) > self.k:
            raise InputError(f"expected at most {self.k} coefficients")
        return tuple(c % self.p for c in value) + (0,) * (self.k - len(value))

    def add_raw(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg_raw(self, a):
        return tuple(-x % self.p for x in a)

    def mul_raw(self, a, b):
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                # t^d = t^(d-k) * t^k and t^k = -sum(mod[i] t^i)
                for i in range(k):
                    prod[d - k + i] -= c * mod[i]
            prod[d] = 0
        return tuple(c % p for c in prod[:k])

    def inv_raw(self, a):
        if not any(a):
            raise NotAUnit("0 is not a unit")
        return self._pow_raw(a, self.p**self.k - 2)

    def _pow_raw(self, a, e):
        result = self.normalize(1)
        while e:
            if e & 1:
                result = self.mul_raw(result, a)
            a = self.mul_raw(a, a)
            e >>= 1
        return result

    @property
    def size(self) -> int:
        return self.p**self.k

    @property
    def characteristic(self) -> int:
        return self.p

    def code(self, raw) -> int:
        return sum(c * self.p**i for i, c in enumerate(raw))

    def from_code(self, code: int):
        return digits(code, self.p, self.k)

    @property
    def gen(self) -> RingElem:
        """The class of ``t``."""
        return self.elem((0, 1) if self.k > 1 else (-self.modulus[0],))

    def __str__(self):
        return f"F_{self.p}^{self.k}"


class RingElem:
    """An element of a :class:`BaseRing`; immutable, hashable."""

    __slots__ = ("parent", "value")

    def __init__(self, parent: BaseRing, value):
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("RingElem is immutable")

    def _coerce(self, other) -> RingElem:
        if isinstance(other, RingElem):
            if other.parent is not self.parent and other.parent != self.parent:
                raise ParentMismatch(f"{other.parent} vs {self.parent}")
            return other
        if isinstance(other, int):
            return self.parent.elem(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElem(self.parent, self.parent.add_raw(self.value, other.value))

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.parent, self.parent.neg_raw(self.value))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElem(self.parent, self.parent.mul_raw(self.value, other.value))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.parent.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> RingElem:
        return RingElem(self.parent, self.parent.inv_raw(self.value))

    def is_zero(self) -> bool:
        return self.value == self.parent.zero.value

    @property
    def code(self) -> int:
        return self.parent.code(self.value)

    def __eq__(self, other):
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.parent == other.parent and self.value == other.value

    def __hash__(self):
        return hash((self.parent, self.value))

    def __lt__(self, other: RingElem):
        if isinstance(self.parent, Integers):
            return self.value < other.value
        return self.code < other.code

    def __repr__(self):
        return f"{self.parent}({self.value})"

    def __str__(self):
        if isinstance(self.parent, ExtField):
            return _format_poly_ints(self.value, "t")
        return str(self.value)


def elem_inverse(a: RingElem) -> RingElem:
    """Multiplicative inverse; raises :class:`NotAUnit` when none exists."""
    return a.inverse()


def _format_poly_ints(coeffs: Sequence[int], var: str) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial; ``coeffs`` lowest degree first, no trailing zeros."""

    parent: BaseRing
    coeffs: tuple[RingElem, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        for c in cs:
            if c.parent != self.parent:
                raise ParentMismatch(f"coefficient {c!r} not in {self.parent}")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_ints(cls, parent: BaseRing, values: Iterable) -> Poly:
        return cls(parent, tuple(parent.elem(v) for v in values))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def ints(self) -> tuple:
        return tuple(c.value for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.parent.one

    def _check(self, other: Poly):
        if not isinstance(other, Poly):
            return Poly(self.parent, (self.parent.elem(other),))
        if other.parent != self.parent:
            raise ParentMismatch(f"{other.parent} vs {self.parent}")
        return other

    def __add__(self, other):
        other = self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.parent.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return Poly(self.parent, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.parent, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        if not self.coeffs or not other.coeffs:
            return Poly(self.parent, ())
        out = [self.parent.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.parent, tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        other = self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        lead_inv = other.coeffs[-1].inverse()
        rem = list(self.coeffs)
        quo = [self.parent.zero] * max(len(rem) - len(other.coeffs) + 1, 0)
        for i in range(len(rem) - len(other.coeffs), -1, -1):
            c = rem[i + len(other.coeffs) - 1] * lead_inv
            quo[i] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - c * b
        return Poly(self.parent, tuple(quo)), Poly(self.parent, tuple(rem))

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def __call__(self, x: RingElem) -> RingElem:
        acc = self.parent.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if isinstance(self.parent, ExtField):
            return " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()) or "0"
        return _format_poly_ints(self.ints(), "t")


def monic_polys(F: BaseRing, degree: int) -> Iterator[Poly]:
    """All monic polynomials of ``degree`` over finite ``F``, in code order."""
    q = F.size
    for code in range(q**degree):
        low = digits(code, q, degree)
        yield Poly(F, tuple(RingElem(F, F.from_code(c)) for c in low) + (F.one,))


def is_irreducible(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree at most deg(f)/2."""
    if f.degree < 1:
        return False
    for d in range(1, f.degree // 2 + 1):
        for g in monic_polys(f.parent, d):
            if not (f % g).coeffs:
                return False
    return True


def smallest_irreducible(F: BaseRing, k: int) -> Poly:
    """First monic irreducible of degree ``k`` over finite ``F``.

    Candidates are ordered by the integer sum(code(c_i) * q^i) over the
    non-leading coefficients, i.e. the same order as :func:`monic_polys`.
    """
    if not F.is_field or F.size is None:
        raise NotAField(f"{F} is not a finite field")
    for f in monic_polys(F, k):
        if is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def irreducible_poly(p: int, k: int) -> Poly:
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if k < 1:
        raise InputError("degree must be at least 1")
    return smallest_irreducible(PrimeField(p), k)


def matrix_det(rows: Sequence[Sequence[RingElem]]) -> RingElem:
    """Determinant over a field by Gaussian elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeMismatch("matrix is not square")
    if n == 0:
        raise ShapeMismatch("empty matrix")
    F = rows[0][0].parent
    if any(x.parent != F for r in rows for x in r):
        raise ParentMismatch("entries do not share a parent")
    if not F.is_field:
        raise NotAField(f"{F} is not a field")
    a = [list(r) for r in rows]
    det = F.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            return F.zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor.is_zero():
                continue
            for c in range(col, n):
                a[r][c] = a[r][c] - factor * a[col][c]
    return det


@dataclass(frozen=True)
class Poly2:
    """Bivariate polynomial sum c_ij x^i y^j stored as sorted sparse terms."""

    parent: BaseRing
    terms: tuple[tuple[tuple[int, int], RingElem], ...]

    def __post_init__(self):
        acc: dict[tuple[int, int], RingElem] = {}
        for (i, j), c in self.terms:
            c = self.parent.elem(c)
            acc[(i, j)] = acc.get((i, j), self.parent.zero) + c
        object.__setattr__(
            self, "terms", tuple(sorted((k, v) for k, v in acc.items() if not v.is_zero()))
        )

    @classmethod
    def from_dict(cls, parent: BaseRing, terms: dict) -> Poly2:
        return cls(parent, tuple(terms.items()))

    def as_dict(self) -> dict[tuple[int, int], RingElem]:
        return dict(self.terms)

    def constant_term(self) -> RingElem:
        return self.as_dict().get((0, 0), self.parent.zero)

    def map_coeffs(self, fn, parent: BaseRing) -> Poly2:
        return Poly2(parent, tuple((k, fn(v)) for k, v in self.terms))

    def __call__(self, a: RingElem, b: RingElem) -> RingElem:
        return poly2_eval(self, a, b)

    def __str__(self):
        parts = []
        for (i, j), c in self.terms:
            mono = "*".join(
                m for m in (
                    "" if i == 0 else "x" if i == 1 else f"x^{i}",
                    "" if j == 0 else "y" if j == 1 else f"y^{j}",
                ) if m
            )
            if not mono:
                parts.append(str(c))
            elif c == self.parent.one:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def poly2_eval(s: Poly2, a: RingElem, b: RingElem) -> RingElem:
    if a.parent != s.parent or b.parent != s.parent:
        raise ParentMismatch(f"arguments must lie in {s.parent}")
    acc = s.parent.zero
    for (i, j), c in s.terms:
        acc = acc + c * a**i * b**j
    return acc


def all_points(F: BaseRing, n: int) -> Iterator[tuple[RingElem, ...]]:
    return product(F.elements(), repeat=n)


@dataclass(frozen=True)
class FieldTables:
    """Log/antilog tables of a finite field, indexed by element code."""

    q: int
    p: int
    log: tuple[int, ...]
    exp: tuple[int, ...]


@lru_cache(maxsize=None)
def field_tables(F: BaseRing) -> FieldTables:
    q = F.size
    order = q - 1
    factors = prime_factors(order)
    for c in range(1, q):
        g = F.from_code(c)
        if all(F.code(_pow(F, g, order // r)) != 1 for r in factors):
            break
    exp = [0] * order
    cur = F.normalize(1)
    for i in range(order):
        exp[i] = F.code(cur)
        cur = F.mul_raw(cur, g)
    log = [-1] * q
    for i, c in enumerate(exp):
        log[c] = i
    return FieldTables(q=q, p=F.characteristic, log=tuple(log), exp=tuple(exp))


def _pow(F: BaseRing, a, e: int):
    result = F.normalize(1)
    while e:
        if e & 1:
            result = F.mul_raw(result, a)
        a = F.mul_raw(a, a)
        e >>= 1
    return result
