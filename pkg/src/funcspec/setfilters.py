"""Filters and ultrafilters on a finite ground set, zero-locus families.

Subsets of ``{0, ..., n-1}`` are int bitmasks. On a finite set every filter
is the family of supersets of a single nonempty set (its minimal member) and
every ultrafilter is principal, so both are stored by that data alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import FIPViolated, GroundSetMismatch, InputError
from .finite import FiniteIdeal
from .funcring import FnValue, IdealDescriptor, ImageRing, MDescriptor, image_ring, preimage


def indices(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def to_mask(idx: Iterable[int]) -> int:
    m = 0
    for i in idx:
        m |= 1 << i
    return m


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class SetFamily:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if any(m < 0 or m >> self.n for m in self.members):
            raise InputError(f"member out of range for ground set of size {self.n}")
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @classmethod
    def from_lists(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(n, tuple(to_mask(s) for s in sets))

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def as_lists(self) -> list[list[int]]:
        return [indices(m) for m in self.members]


@dataclass(frozen=True)
class FilterFin:
    n: int
    minimal: int

    def __post_init__(self):
        if self.n < 1:
            raise InputError("ground set must be nonempty")
        if self.minimal == 0:
            raise InputError("the empty set is never a filter member")
        if self.minimal >> self.n:
            raise InputError("minimal member out of range")

    def contains(self, mask: int) -> bool:
        return mask & self.minimal == self.minimal

    def issubset(self, other: FilterFin) -> bool:
        """Every member of ``self`` is a member of ``other``."""
        return other.contains(self.minimal)

    @classmethod
    def all_filters(cls, n: int) -> list[FilterFin]:
        return [cls(n, m) for m in range(1, 1 << n)]


@dataclass(frozen=True)
class UltrafilterFin:
    n: int
    point: int

    def __post_init__(self):
        if not 0 <= self.point < self.n:
            raise InputError("point out of range")

    def contains(self, mask: int) -> bool:
        return bool(mask >> self.point & 1)

    @property
    def minimal(self) -> int:
        return 1 << self.point

    def as_filter(self) -> FilterFin:
        return FilterFin(self.n, self.minimal)


def fip_filter(family: SetFamily) -> FilterFin:
    """Filter generated by a family with the finite intersection property."""
    meet = full_mask(family.n)
    used = []
    for i, m in enumerate(family.members):
        meet &= m
        used.append(i)
        if meet == 0:
            # shrink to a minimal failing subfamily, in member order
            needed = list(used)
            for j in list(used):
                trial = [k for k in needed if k != j]
                acc = full_mask(family.n)
                for k in trial:
                    acc &= family.members[k]
                if acc == 0:
                    needed = trial
            witness = tuple(needed)
            raise FIPViolated(
                f"members {[indices(family.members[k]) for k in witness]} have empty intersection",
                witness,
            )
    return FilterFin(family.n, meet)


def refinements(F: FilterFin) -> list[UltrafilterFin]:
    """All ultrafilters containing ``F``; the first is the canonical one."""
    return [UltrafilterFin(F.n, e) for e in indices(F.minimal)]


def mf_contains(f: FnValue, M: MDescriptor, F: FilterFin | UltrafilterFin) -> bool:
    if f.parent.n != F.n:
        raise GroundSetMismatch(f"function on {f.parent.n} points, filter on {F.n}")
    return F.contains(preimage(f, M))


def zero_sets(S: ImageRing, members: Iterable[int]) -> SetFamily:
    """Zero sets, as subsets of E, of the given image-ring elements."""
    members = np.asarray(list(members), dtype=np.int64)
    zero_code = S.residue.code(S.residue.zero.value)
    hits = S.codes[members] == zero_code
    weights = np.array([1 << j for j in range(S.funcring.n)], dtype=object)
    masks = {int(m) for m in hits.astype(object) @ weights} if len(members) else set()
    return SetFamily(S.funcring.n, tuple(masks))


def zero_locus_family(I: IdealDescriptor, M: MDescriptor, cap: int = 65536) -> SetFamily:
    """Z_M(I), computed from the ideal generated by I inside the image ring."""
    S = image_ring(I.parent, M, cap)
    gens = [S.reduce(g) for g in I.generators]
    return zero_sets(S, S.ideal_generated(gens))


def ideal_in_mf(S: ImageRing, ideal: FiniteIdeal, F: FilterFin | UltrafilterFin) -> bool:
    """Whether every element of ``ideal`` has its zero set in ``F``."""
    return all(F.contains(m) for m in zero_sets(S, ideal.members))
