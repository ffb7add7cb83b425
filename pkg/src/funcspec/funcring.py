"""Rings of functions on a finite set E, stored as value tables.

A :class:`FuncRing` is the subring of ``D^E`` generated by all constant
functions together with finitely many named generators. Its elements are
only ever built from generators and constants (via arithmetic or
:func:`eval_expr`); membership of an arbitrary value table in the ring is
not decided here, since for ``D = Z`` that is not a finite question.

Subsets of E are bitmasks over the order in which E was given.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import BaseRing, ExtField, Integers, IntegersMod, PrimeField, RingElem, is_prime
from .errors import InputError, NotFinite, NotMaximal, ParentMismatch, TooLarge, UnknownGenerator
from .expr import Node, evaluate, parse_expression, variables
from .finite import ProductSubring, coordinate_tables

MAX_POINTS = 62
DEFAULT_IMAGE_CAP = 65536


class DuplicatePoint(InputError):
    pass


@dataclass(frozen=True)
class MDescriptor:
    """An ideal of the base ring: the zero ideal or a principal ideal (m)."""

    base: BaseRing
    generator: RingElem | None = None

    def __post_init__(self):
        g = self.generator
        if g is None:
            return
        g = self.base.elem(g)
        if g.is_zero():
            g = None
        elif self.base.is_field:
            raise InputError(f"only the zero ideal is a proper ideal of {self.base}")
        object.__setattr__(self, "generator", g)

    @classmethod
    def zero(cls, base: BaseRing) -> MDescriptor:
        return cls(base, None)

    @classmethod
    def principal(cls, base: BaseRing, m) -> MDescriptor:
        return cls(base, base.elem(m))

    @property
    def _modulus(self) -> int:
        """Positive integer g with M = gD (0 for the zero ideal)."""
        if self.generator is None:
            return 0
        if isinstance(self.base, Integers):
            return abs(self.generator.value)
        if isinstance(self.base, IntegersMod):
            return math.gcd(self.generator.value, self.base.m)
        raise AssertionError("principal ideals only over Z and Z/m")

    def contains(self, a: RingElem) -> bool:
        if a.parent != self.base:
            raise ParentMismatch(f"{a!r} is not in {self.base}")
        g = self._modulus
        if g == 0:
            return a.is_zero()
        return a.value % g == 0

    def residue_ring(self) -> BaseRing:
        """D/M as a finite ring; raises :class:`NotFinite` for Z/(0)."""
        return self._residue

    @cached_property
    def _residue(self) -> BaseRing:
        base, g = self.base, self._modulus
        if g == 1:
            raise InputError("M is the unit ideal")
        if isinstance(base, Integers):
            if g == 0:
                raise NotFinite("Z/(0) is infinite")
            return PrimeField(g) if is_prime(g) else IntegersMod(g)
        if isinstance(base, IntegersMod):
            if g in (0, base.m):
                return base
            return PrimeField(g) if is_prime(g) else IntegersMod(g)
        return base

    def is_maximal(self) -> bool:
        try:
            return self.residue_ring().is_field
        except NotFinite:
            return False

    def require_maximal(self) -> BaseRing:
        if not self.is_maximal():
            raise NotMaximal(f"D/M is not a field for M = {self}")
        return self.residue_ring()

    def reduce(self, a: RingElem) -> RingElem:
        F = self.residue_ring()
        if F == self.base:
            return a
        return F.elem(a.value)

    def lift(self, r: RingElem) -> RingElem:
        """Canonical representative in D of a residue class."""
        F = self.residue_ring()
        if F == self.base:
            return r
        return self.base.elem(r.value)

    def __str__(self):
        return f"({self.generator.value if self.generator is not None else 0})"


class FnValue:
    """A function E -> D as its value table; arithmetic is pointwise."""

    __slots__ = ("parent", "values")

    def __init__(self, parent: FuncRing, values: Sequence[RingElem]):
        values = tuple(values)
        if len(values) != parent.n:
            raise InputError(f"expected {parent.n} values, got {len(values)}")
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("FnValue is immutable")

    def _other(self, other) -> FnValue:
        if isinstance(other, FnValue):
            if not self.parent.same_ground(other.parent):
                raise ParentMismatch("functions live on different ground sets")
            return other
        if isinstance(other, (int, RingElem)):
            return self.parent.const(other)
        return NotImplemented

    def _zip(self, other, op):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FnValue(self.parent, [op(a, b) for a, b in zip(self.values, other.values)])

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._zip(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return FnValue(self.parent, [-a for a in self.values])

    def __pow__(self, e: int):
        return FnValue(self.parent, [a**e for a in self.values])

    def __eq__(self, other):
        if not isinstance(other, FnValue):
            return NotImplemented
        return self.parent.same_ground(other.parent) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def ints(self) -> tuple:
        return tuple(v.value for v in self.values)

    def residues(self, M: MDescriptor) -> tuple[RingElem, ...]:
        return tuple(M.reduce(v) for v in self.values)

    def __repr__(self):
        return f"FnValue({list(self.ints())})"


class FuncRing:
    """Subring of D^E generated by the constants and named generators."""

    def __init__(
        self,
        base: BaseRing,
        E: Iterable,
        generators: Mapping[str, Sequence | FnValue] | None = None,
    ):
        self.base = base
        self.E = tuple(base.elem(e) for e in E)
        if not self.E:
            raise InputError("E must be nonempty")
        if len(self.E) > MAX_POINTS:
            raise InputError(f"|E| is capped at {MAX_POINTS}")
        if len(set(self.E)) != len(self.E):
            seen = set()
            dup = next(e for e in self.E if e in seen or seen.add(e))
            raise DuplicatePoint(f"duplicate point {dup} in E")
        self.generators: dict[str, FnValue] = {}
        for name, values in (generators or {}).items():
            if not name.isidentifier():
                raise InputError(f"invalid generator name {name!r}")
            if isinstance(values, FnValue):
                values = values.values
            self.generators[name] = FnValue(self, [base.elem(v) for v in values])

    @property
    def n(self) -> int:
        return len(self.E)

    def same_ground(self, other: FuncRing) -> bool:
        return self is other or (self.base == other.base and self.E == other.E)

    def fn(self, values: Sequence) -> FnValue:
        return FnValue(self, [self.base.elem(v) for v in values])

    def const(self, c) -> FnValue:
        c = self.base.elem(c)
        return FnValue(self, [c] * self.n)

    def identity(self) -> FnValue:
        """The inclusion E -> D; an element of R only if declared a generator."""
        return FnValue(self, self.E)

    def generator(self, name: str) -> FnValue:
        if name not in self.generators:
            raise UnknownGenerator(f"unknown generator {name!r}")
        return self.generators[name]

    def eval_expr(self, expr: str | Node) -> FnValue:
        return eval_expr(self, expr)

    def image_ring(self, M: MDescriptor, cap: int = DEFAULT_IMAGE_CAP) -> ImageRing:
        return image_ring(self, M, cap)

    def __repr__(self):
        return f"FuncRing({self.base}, E={[str(e) for e in self.E]}, generators={list(self.generators)})"


@dataclass(frozen=True)
class IdealDescriptor:
    parent: FuncRing
    generators: tuple[FnValue, ...]

    def __post_init__(self):
        if not self.generators:
            raise InputError("an ideal descriptor needs at least one generator")
        gens = tuple(self.generators)
        for g in gens:
            if not self.parent.same_ground(g.parent):
                raise ParentMismatch("generator lives on a different ground set")
        object.__setattr__(self, "generators", gens)


def eval_expr(R: FuncRing, expr: str | Node) -> FnValue:
    """Evaluate a polynomial expression over D in the generator names."""
    node = parse_expression(expr) if isinstance(expr, str) else expr
    unknown = sorted(variables(node) - set(R.generators))
    if unknown:
        raise UnknownGenerator(f"unknown generator {unknown[0]!r}")
    return evaluate(node, R.generators, R.const)


def preimage(f: FnValue, M: MDescriptor) -> int:
    """Bitmask of the points e with f(e) in M."""
    mask = 0
    for i, v in enumerate(f.values):
        if M.contains(v):
            mask |= 1 << i
    return mask


def is_M_unit_valued(f: FnValue, M: MDescriptor) -> bool:
    M.require_maximal()
    return preimage(f, M) == 0


class ImageRing(ProductSubring):
    """The image of a :class:`FuncRing` in ``(D/M)^E``."""

    def __init__(self, funcring: FuncRing, M: MDescriptor, codes):
        self.funcring = funcring
        self.M = M
        self.residue = M.residue_ring()
        super().__init__([self.residue] * funcring.n, codes, check=False)

    def residue_codes(self, f: FnValue) -> np.ndarray:
        if not self.funcring.same_ground(f.parent):
            raise ParentMismatch("function lives on a different ground set")
        return np.array([self.M.reduce(v).code for v in f.values], dtype=np.int64)

    def reduce(self, f: FnValue) -> int:
        """Index of the reduction of ``f``."""
        idx = int(self.lookup(self.residue_codes(f)[None, :])[0])
        if idx < 0:
            raise InputError(f"{f!r} does not reduce into the image ring")
        return idx

    def lift(self, i: int) -> FnValue:
        """A function in D^E with canonical representatives reducing to element ``i``."""
        return FnValue(self.funcring, [self.M.lift(r) for r in self.element(i)])

    def zero_set(self, i: int) -> int:
        """Bitmask of coordinates where element ``i`` is zero."""
        zero_code = self.residue.code(self.residue.zero.value)
        mask = 0
        for j, c in enumerate(self.codes[i]):
            if c == zero_code:
                mask |= 1 << j
        return mask


def image_ring(R: FuncRing, M: MDescriptor, cap: int = DEFAULT_IMAGE_CAP) -> ImageRing:
    """Subring of (D/M)^E generated by constants and the reduced generators.

    The span of {1} is closed under multiplication by each generator (and by
    the field generator t when D/M is a proper extension field); that span is
    then the whole image.
    """
    F = M.residue_ring()
    n = R.n
    tabs_add, tabs_mul = coordinate_tables(F)

    def codes(f: FnValue) -> np.ndarray:
        return np.array([M.reduce(v).code for v in f.values], dtype=np.int64)

    mul_gens = [codes(g) for g in R.generators.values()]
    if isinstance(F, ExtField) and F.k > 1:
        mul_gens.append(np.full(n, F.gen.code, dtype=np.int64))

    members = np.zeros((1, n), dtype=np.int64)
    seen = {members[0].tobytes()}

    def add_to_span(w: np.ndarray) -> bool:
        nonlocal members
        if w.tobytes() in seen:
            return False
        base = members
        blocks = []
        step = w
        while step.tobytes() not in seen:
            block = tabs_add[base, step[None, :]]
            for row in block:
                seen.add(row.tobytes())
            blocks.append(block)
            if len(seen) > cap:
                raise TooLarge(f"image ring exceeds {cap} elements")
            step = tabs_add[step, w]
        members = np.concatenate([members] + blocks)
        return True

    one = np.full(n, F.code(F.one.value), dtype=np.int64)
    queue = deque([one])
    add_to_span(one)
    for g in mul_gens:
        if add_to_span(g):
            queue.append(g)
    while queue:
        b = queue.popleft()
        for h in mul_gens:
            w = tabs_mul[b, h]
            if add_to_span(w):
                queue.append(w)
    return ImageRing(R, M, members)

