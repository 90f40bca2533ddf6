"""Exact integer-set arithmetic on k-sets.

Sumsets are computed with Python integers used as bit vectors: a set with
minimum ``a`` becomes the mask with bit ``x - a`` set for each element ``x``,
and ``A + B`` is the OR of ``mask(B)`` shifted by every element of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

#: Largest admissible ambient bound. Every sum the package forms fits in a
#: signed 64-bit integer with room to spare (h * 2**20 for h-fold sums).
MAX_AMBIENT = 2**20


def _as_tuple(values) -> tuple[int, ...]:
    if isinstance(values, KSet):
        return values.elements
    return tuple(values)


@dataclass(frozen=True)
class KSet:
    """A finite set of non-negative integers, stored ascending.

    ``ambient_n`` is the declared bound N; elements lie in ``[0, N]``.
    Equality and hashing look at the elements only.
    """

    elements: tuple[int, ...]
    ambient_n: int = field(default=-1, compare=False)

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        if not els:
            raise ValueError("a k-set needs at least one element")
        if any(b <= a for a, b in zip(els, els[1:])):
            raise ValueError(f"elements must be strictly increasing: {els}")
        if els[0] < 0:
            raise ValueError(f"negative element in {els}")
        n = self.ambient_n
        if n < 0:
            n = max(els[-1], 1)
        if els[-1] > n:
            raise ValueError(f"element {els[-1]} exceeds ambient bound {n}")
        if n > MAX_AMBIENT:
            raise ValueError(f"ambient bound {n} exceeds cap {MAX_AMBIENT}")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "ambient_n", n)

    @classmethod
    def of(cls, values: Iterable[int], n: int = -1) -> KSet:
        """Build from any iterable, sorting it first."""
        return cls(tuple(sorted(values)), n)

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def min(self) -> int:
        return self.elements[0]

    @property
    def max(self) -> int:
        return self.elements[-1]

    def shift(self, t: int, n: int | None = None) -> KSet:
        return KSet(tuple(x + t for x in self.elements),
                    self.ambient_n + t if n is None else n)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __lt__(self, other: KSet) -> bool:
        return lex_compare(self, other) < 0

    def __le__(self, other: KSet) -> bool:
        return lex_compare(self, other) <= 0

    def __gt__(self, other: KSet) -> bool:
        return lex_compare(self, other) > 0

    def __ge__(self, other: KSet) -> bool:
        return lex_compare(self, other) >= 0

    def __repr__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"


@dataclass(frozen=True, order=True)
class SumsetKey:
    """A sumset, as its strictly increasing sequence of distinct sums."""

    sums: tuple[int, ...]

    def __len__(self):
        return len(self.sums)

    def __iter__(self):
        return iter(self.sums)

    @property
    def min(self) -> int:
        return self.sums[0]

    @property
    def max(self) -> int:
        return self.sums[-1]

    def __repr__(self):
        return "SumsetKey(" + ",".join(map(str, self.sums)) + ")"


@dataclass(frozen=True)
class NormalForm:
    """A set written as ``base + distance_set`` with ``0`` in the distance set."""

    base: int
    distance_set: KSet

    def reassemble(self, n: int | None = None) -> KSet:
        return self.distance_set.shift(self.base, n)


def to_mask(values: Sequence[int]) -> int:
    """Bit vector of ``values - min(values)``."""
    lo = values[0]
    m = 0
    for x in values:
        m |= 1 << (x - lo)
    return m


def mask_bits(mask: int) -> list[int]:
    """Positions of the set bits, ascending."""
    out = []
    pos = 0
    while mask:
        low = mask & -mask
        pos = low.bit_length() - 1
        out.append(pos)
        mask ^= low
    return out


def _shift_or(mask: int, shifts: Iterable[int]) -> int:
    acc = 0
    for d in shifts:
        acc |= mask << d
    return acc


def sumset_mask(a: Sequence[int], b: Sequence[int]) -> tuple[int, int]:
    """``(min(A)+min(B), mask of A'+B')`` for sorted sequences ``a``, ``b``."""
    if len(a) > len(b):
        a, b = b, a
    lo = a[0]
    return lo + b[0], _shift_or(to_mask(b), (x - lo for x in a))


def sumset(a, b) -> SumsetKey:
    """The set ``{x + y : x in a, y in b}``."""
    ea, eb = _as_tuple(a), _as_tuple(b)
    base, mask = sumset_mask(ea, eb)
    return SumsetKey(tuple(base + d for d in mask_bits(mask)))


def h_fold_sumset(sets: Sequence) -> SumsetKey:
    """Iterated sumset ``A_1 + ... + A_h``."""
    if len(sets) == 0:
        raise ValueError("h_fold_sumset needs at least one set")
    tuples = [_as_tuple(s) for s in sets]
    base = sum(t[0] for t in tuples)

    def step(acc, t):
        return _shift_or(acc, (x - t[0] for x in t))

    mask = reduce(step, tuples[1:], to_mask(tuples[0]))
    return SumsetKey(tuple(base + d for d in mask_bits(mask)))


def normalize(a: KSet) -> NormalForm:
    base = a.min
    return NormalForm(base, KSet(tuple(x - base for x in a.elements),
                                 a.ambient_n))


def lex_compare(a, b) -> int:
    """Lexicographic order: ``a`` precedes ``b`` iff min(a ^ b) lies in ``a``.

    Returns -1, 0 or 1 in the manner of a classic ``cmp``.
    """
    ea, eb = _as_tuple(a), _as_tuple(b)
    if len(ea) != len(eb):
        raise ValueError(f"cannot compare sets of sizes {len(ea)} and {len(eb)}")
    diff = set(ea).symmetric_difference(eb)
    if not diff:
        return 0
    return -1 if min(diff) in ea else 1


def dilate(a, lam: int, bound: int) -> KSet:
    """``lam * a``, checked against the ambient ``bound``."""
    if lam < 1:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    ea = _as_tuple(a)
    if lam * ea[-1] > bound:
        raise ValueError(f"{lam} * {ea[-1]} exceeds ambient bound {bound}")
    return KSet(tuple(lam * x for x in ea), bound)


def dual_3set(x) -> KSet:
    """Reflect ``{0, x1, x2}`` to ``{0, x2 - x1, x2}``."""
    ex = _as_tuple(x)
    if len(ex) != 3 or ex[0] != 0:
        raise ValueError(f"dual is defined for 3-sets containing 0, got {ex}")
    n = x.ambient_n if isinstance(x, KSet) else ex[2]
    return KSet((0, ex[2] - ex[1], ex[2]), n)
