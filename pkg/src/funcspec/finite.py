"""Explicit finite commutative rings and their ideals.

A :class:`FiniteRing` lists its elements in a canonical order and carries
full addition and multiplication tables over element indices. The common
case, a subring of a finite product ring such as ``(D/M)^E``, is
:class:`ProductSubring`: elements are rows of coordinate codes and the
tables are computed pointwise and vectorized.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np

from .algebra import BaseRing, RingElem
from .errors import InputError, TooLarge

DEFAULT_TABLE_CAP = 4096


class NotClosed(InputError):
    pass


@lru_cache(maxsize=None)
def coordinate_tables(ring: BaseRing) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of a finite ring, indexed by code."""
    elems = ring.elements()
    q = len(elems)
    add = np.array([[ring.code(ring.add_raw(a.value, b.value)) for b in elems] for a in elems])
    mul = np.array([[ring.code(ring.mul_raw(a.value, b.value)) for b in elems] for a in elems])
    return add.reshape(q, q), mul.reshape(q, q)


class FiniteRing:
    """Finite commutative unital ring given by index tables.

    ``labels`` are any sortable hashable names for the elements; they are
    sorted on construction and the tables permuted to match.
    """

    def __init__(
        self,
        labels: Sequence[Hashable],
        add_table: np.ndarray,
        mul_table: np.ndarray,
        *,
        check: bool = True,
    ):
        order = sorted(range(len(labels)), key=lambda i: labels[i])
        inv = np.empty(len(labels), dtype=np.int64)
        inv[order] = np.arange(len(labels))
        self.labels = [labels[i] for i in order]
        self._add = inv[np.asarray(add_table)[np.ix_(order, order)]]
        self._mul = inv[np.asarray(mul_table)[np.ix_(order, order)]]
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise InputError("duplicate element labels")
        self._find_identities()
        if check:
            self.check_axioms()

    # tables -----------------------------------------------------------
    @property
    def add_table(self) -> np.ndarray:
        return self._add

    @property
    def mul_table(self) -> np.ndarray:
        return self._mul

    @cached_property
    def neg_table(self) -> np.ndarray:
        rows, cols = np.nonzero(self.add_table == self.zero)
        neg = np.empty(self.size, dtype=np.int64)
        neg[rows] = cols
        return neg

    def _find_identities(self):
        n = self.size
        ar = np.arange(n)
        zeros = [i for i in range(n) if np.array_equal(self.add_table[i], ar)]
        ones = [i for i in range(n) if np.array_equal(self.mul_table[i], ar)]
        if not zeros or not ones:
            raise InputError("ring lacks an additive or multiplicative identity")
        self.zero, self.one = zeros[0], ones[0]

    def check_axioms(self, full: bool | None = None):
        """Commutativity and identities always; associativity and
        distributivity exhaustively when ``full`` (default: size <= 32)."""
        A, M = self.add_table, self.mul_table
        if not (np.array_equal(A, A.T) and np.array_equal(M, M.T)):
            raise InputError("operations are not commutative")
        if full is None:
            full = self.size <= 32
        if full:
            for a in range(self.size):
                # (a+b)+c == a+(b+c),  (ab)c == a(bc),  a(b+c) == ab+ac
                if not np.array_equal(A[A[a]], A[a][A]):
                    raise InputError("addition is not associative")
                if not np.array_equal(M[M[a]], M[a][M]):
                    raise InputError("multiplication is not associative")
                if not np.array_equal(M[a][A], A[np.ix_(M[a], M[a])]):
                    raise InputError("multiplication does not distribute")

    # element access ---------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.size

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def add(self, i, j):
        return self.add_table[i, j]

    def mul(self, i, j):
        return self.mul_table[i, j]

    def neg(self, i):
        return self.neg_table[i]

    def sub(self, i, j):
        return self.add_table[i, self.neg_table[j]]

    # ideals -----------------------------------------------------------
    def principal_ideal(self, a: int) -> np.ndarray:
        return np.unique(self.mul_table[a])

    def additive_closure(self, members: Iterable[int], start: np.ndarray | None = None) -> np.ndarray:
        """Smallest additive subgroup containing ``members`` (and the subgroup
        with indicator ``start``, if given)."""
        return np.flatnonzero(self._closure(members, start))

    def _closure(self, members: Iterable[int], start: np.ndarray | None = None) -> np.ndarray:
        if start is None:
            current = np.zeros(self.size, dtype=bool)
            current[self.zero] = True
        else:
            current = start.copy()
        for g in members:
            if current[g]:
                continue
            # H + <g> is the union of the cosets H + j*g up to the first j*g in H
            group = np.flatnonzero(current)
            step = g
            while not current[step]:
                current[self.add_table[group, step]] = True
                step = self.add_table[step, g]
        return current

    def extend_ideal(self, indicator: np.ndarray, a: int) -> np.ndarray:
        """Indicator of I + (a) for the ideal I with the given indicator."""
        return self._closure(np.unique(self.mul_table[a]), indicator)

    def ideal_generated(self, gens: Iterable[int]) -> np.ndarray:
        gens = list(gens)
        if not gens:
            return np.array([self.zero])
        multiples = np.unique(np.concatenate([self.mul_table[g] for g in gens]))
        return self.additive_closure(multiples)

    def ideal_sum(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.unique(self.add_table[np.ix_(a, b)])

    def __repr__(self):
        return f"<{type(self).__name__} with {self.size} elements>"


class ProductSubring(FiniteRing):
    """Subring of a product of finite coordinate rings, given by its elements.

    ``codes`` is an ``(N, n)`` integer array; row ``r`` is the element whose
    ``j``-th coordinate has code ``codes[r, j]`` in ``coords[j]``. Rows are
    sorted lexicographically, which is the canonical element order.
    """

    def __init__(
        self,
        coords: Sequence[BaseRing],
        codes,
        *,
        check: bool = True,
        table_cap: int = DEFAULT_TABLE_CAP,
    ):
        self.coords = tuple(coords)
        codes = np.asarray(codes, dtype=np.int64).reshape(-1, len(self.coords))
        self.codes = np.unique(codes, axis=0)  # lexicographic row order
        self.table_cap = table_cap
        self._setup_coordinate_tables()
        self._keys = self.keys_of(self.codes)
        n = len(self.coords)
        zero = self.lookup(np.array([[c.code(c.zero.value) for c in self.coords]]))
        one = self.lookup(np.array([[c.code(c.one.value) for c in self.coords]]))
        if zero[0] < 0 or one[0] < 0 or n == 0:
            raise NotClosed("subring must contain 0 and 1")
        self.zero, self.one = int(zero[0]), int(one[0])
        if check:
            self.check_closed()

    @property
    def size(self) -> int:  # type: ignore[override]
        return len(self.codes)

    @cached_property
    def labels(self) -> list[tuple[int, ...]]:  # type: ignore[override]
        return [tuple(int(c) for c in row) for row in self.codes]

    @cached_property
    def _index(self) -> dict:  # type: ignore[override]
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        i = int(self.lookup(np.array([label]))[0])
        if i < 0:
            raise KeyError(label)
        return i

    def _setup_coordinate_tables(self):
        self._coord_tables = {ring: coordinate_tables(ring) for ring in set(self.coords)}
        self._homogeneous = len(set(self.coords)) == 1
        sizes = [c.size for c in self.coords]
        weights = []
        w = 1
        for s in reversed(sizes):
            weights.append(w)
            w *= s
        self._radix_overflow = w >= 2**62
        self._weights = np.array(list(reversed(weights)), dtype=object if self._radix_overflow else np.int64)

    def keys_of(self, codes: np.ndarray) -> np.ndarray:
        if self._radix_overflow:
            return np.array([sum(int(c) * int(w) for c, w in zip(row, self._weights)) for row in codes], dtype=object)
        return codes @ self._weights

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        """Indices of the given code rows; -1 where a row is not an element."""
        keys = self.keys_of(np.asarray(codes, dtype=np.int64).reshape(-1, len(self.coords)))
        pos = np.searchsorted(self._keys, keys)
        pos = np.clip(pos, 0, self.size - 1)
        found = self._keys[pos] == keys
        return np.where(found, pos, -1).astype(np.int64)

    def _pointwise(self, which: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self._homogeneous:
            tab = self._coord_tables[self.coords[0]][which]
            return tab[a, b]
        out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for j, ring in enumerate(self.coords):
            out[..., j] = self._coord_tables[ring][which][a[..., j], b[..., j]]
        return out

    def add_codes(self, a, b):
        return self._pointwise(0, np.asarray(a), np.asarray(b))

    def mul_codes(self, a, b):
        return self._pointwise(1, np.asarray(a), np.asarray(b))

    def _table(self, which: int) -> np.ndarray:
        if self.size > self.table_cap:
            raise TooLarge(f"{self.size} elements exceed the table cap {self.table_cap}")
        N = self.size
        table = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            row = self.lookup(self._pointwise(which, self.codes[i][None, :], self.codes))
            if (row < 0).any():
                j = int(np.flatnonzero(row < 0)[0])
                raise NotClosed(f"not closed: elements {self.labels[i]} and {self.labels[j]}")
            table[i] = row
        return table

    @cached_property
    def add_table(self) -> np.ndarray:  # type: ignore[override]
        return self._table(0)

    @cached_property
    def mul_table(self) -> np.ndarray:  # type: ignore[override]
        return self._table(1)

    def check_closed(self):
        """Closure under + and * (pointwise ops are commutative and unital)."""
        for which in (0, 1):
            for i in range(self.size):
                row = self.lookup(self._pointwise(which, self.codes[i][None, :], self.codes))
                if (row < 0).any():
                    j = int(np.flatnonzero(row < 0)[0])
                    raise NotClosed(f"not closed: elements {self.labels[i]} and {self.labels[j]}")

    def element(self, i: int) -> tuple[RingElem, ...]:
        return tuple(RingElem(c, c.from_code(int(v))) for c, v in zip(self.coords, self.codes[i]))

    def constants(self) -> np.ndarray:
        """Indices of the constant elements (all coordinates equal)."""
        if not self._homogeneous:
            raise InputError("constants need identical coordinate rings")
        return np.flatnonzero((self.codes == self.codes[:, :1]).all(axis=1))

    def coordinate_kernel(self, j: int) -> np.ndarray:
        ring = self.coords[j]
        return np.flatnonzero(self.codes[:, j] == ring.code(ring.zero.value))


def product_ring(factors: Sequence[ProductSubring]) -> tuple[ProductSubring, list[slice]]:
    """Direct product; returns the ring and the coordinate block of each factor."""
    blocks, coords, start = [], [], 0
    for f in factors:
        blocks.append(slice(start, start + len(f.coords)))
        coords.extend(f.coords)
        start += len(f.coords)
    total = 1
    for f in factors:
        total *= f.size
    if total > 1 << 16:
        raise TooLarge(f"product has {total} elements")
    grids = np.meshgrid(*[np.arange(f.size) for f in factors], indexing="ij")
    idx = [g.reshape(-1) for g in grids]
    codes = np.concatenate([f.codes[i] for f, i in zip(factors, idx)], axis=1)
    return ProductSubring(coords, codes, check=False), blocks


class FiniteIdeal:
    """An ideal of a :class:`FiniteRing`, as a sorted tuple of element indices."""

    __slots__ = ("parent", "members", "_mask")

    def __init__(self, parent: FiniteRing, members: Iterable[int], *, check: bool = True):
        self.parent = parent
        self.members = tuple(sorted({int(m) for m in members}))
        self._mask = None
        if check:
            self.check()

    def check(self):
        S, mem = self.parent, np.array(self.members)
        inside = np.zeros(S.size, dtype=bool)
        inside[mem] = True
        if not inside[S.zero]:
            raise InputError("ideal must contain 0")
        if not inside[S.add_table[np.ix_(mem, mem)]].all():
            raise InputError("not closed under addition")
        if not inside[S.mul_table[mem]].all():
            raise InputError("not closed under multiplication by ring elements")

    @property
    def mask(self) -> int:
        if self._mask is None:
            m = 0
            for i in self.members:
                m |= 1 << i
            self._mask = m
        return self._mask

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.parent.size, dtype=bool)
        out[list(self.members)] = True
        return out

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> int(i) & 1)

    def __len__(self):
        return len(self.members)

    def is_proper(self) -> bool:
        return self.parent.one not in self

    def issubset(self, other: FiniteIdeal) -> bool:
        return self.mask & ~other.mask == 0

    def __eq__(self, other):
        return isinstance(other, FiniteIdeal) and other.parent is self.parent and other.members == self.members

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return f"FiniteIdeal({list(self.members)})"


class Quotient:
    """The quotient S/I: coset labels, representatives and index tables.

    ``cls[x]`` is the index of the coset of element ``x``; ``reps[c]`` is the
    smallest element index in coset ``c``.
    """

    def __init__(self, ideal: FiniteIdeal):
        S = ideal.parent
        members = np.array(ideal.members, dtype=np.int64)
        coset_min = S.add_table[:, members].min(axis=1)
        self.reps, self.cls = np.unique(coset_min, return_inverse=True)
        self.ideal = ideal
        R = self.reps
        self.add_table = self.cls[S.add_table[np.ix_(R, R)]]
        self.mul_table = self.cls[S.mul_table[np.ix_(R, R)]]
        self.zero = int(self.cls[S.zero])
        self.one = int(self.cls[S.one])

    @property
    def size(self) -> int:
        return len(self.reps)

    def is_domain(self) -> bool:
        if self.size < 2:
            return False
        nz = [c for c in range(self.size) if c != self.zero]
        return not (self.mul_table[np.ix_(nz, nz)] == self.zero).any()

    def is_field(self) -> bool:
        if self.size < 2:
            return False
        nz = [c for c in range(self.size) if c != self.zero]
        return bool((self.mul_table[nz] == self.one).any(axis=1).all())

    def characteristic(self) -> int:
        n, acc = 1, self.one
        while acc != self.zero:
            acc = int(self.add_table[acc, self.one])
            n += 1
        return n

    def ring(self) -> FiniteRing:
        return FiniteRing(list(range(self.size)), self.add_table, self.mul_table, check=False)


def is_maximal_ideal(ideal: FiniteIdeal) -> bool:
    return ideal.is_proper() and Quotient(ideal).is_field()
