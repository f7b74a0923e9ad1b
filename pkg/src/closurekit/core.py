"""Ground types for finite closure systems and implicational bases.

Element sets are plain ``int`` bitmasks over a :class:`Universe`: bit ``i`` is
set when the element with index ``i`` is a member.  Labels only matter for I/O.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

DEFAULT_UNIVERSE_CAP = 20
# Full 2^n closure tables are cached up to this size.
TABLE_LIMIT = 16


class UniverseTooLarge(ValueError):
    """An operation that enumerates all subsets was asked to run on a big universe."""


class NotReduced(ValueError):
    pass


# --------------------------------------------------------------------------
# bitmask helpers


def popcount(mask: int) -> int:
    return mask.bit_count() if hasattr(mask, "bit_count") else bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield member indices in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def iter_submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, ascending numerically, including 0 and mask."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def set_key(mask: int) -> tuple:
    """Sort key: by size, then lexicographically by member indices."""
    return (popcount(mask), tuple(iter_bits(mask)))


def check_cap(n: int, cap: int = DEFAULT_UNIVERSE_CAP) -> None:
    if n > cap:
        raise UniverseTooLarge(f"universe has {n} elements; exhaustive operations are capped at {cap}")


# --------------------------------------------------------------------------
# types


def _natural_key(label: str):
    return (0, int(label), label) if label.isdigit() else (1, 0, label)


@dataclass(frozen=True)
class Universe:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate element labels in {names}")
        for name in names:
            if not name or any(ch.isspace() for ch in name) or name in ("{}", "->", "#"):
                raise ValueError(f"invalid element label {name!r}")

    @classmethod
    def from_labels(cls, labels: Iterable[str], sort: bool = True) -> "Universe":
        seen = list(dict.fromkeys(labels))
        if sort:
            seen.sort(key=_natural_key)
        return cls(tuple(seen))

    @classmethod
    def of_size(cls, n: int) -> "Universe":
        """Universe labelled ``1..n``."""
        return cls(tuple(str(i) for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r}") from None

    def mask(self, labels: Iterable[str] | str) -> int:
        """Mask from labels; a string is split on whitespace, and ``{}`` is empty."""
        if isinstance(labels, str):
            labels = [tok for tok in labels.split() if tok != "{}"]
        return mask_of(self.index(lab) for lab in labels)

    def cmask(self, compact: str) -> int:
        """Mask from compact notation where every character is a label (``"134"``)."""
        return mask_of(self.index(ch) for ch in compact if not ch.isspace())

    def labels(self, mask: int) -> list[str]:
        return [self.names[i] for i in iter_bits(mask)]

    def format(self, mask: int, sep: str = " ") -> str:
        return sep.join(self.labels(mask)) if mask else "{}"

    def imp(self, text: str) -> "Implication":
        """Compact implication ``"14->23"``; every character of each side is one label."""
        lhs, rhs = text.split("->")
        premise = 0 if lhs.strip() in ("", "{}") else self.cmask(lhs)
        return Implication(premise, self.cmask(rhs) & ~premise)


@dataclass(frozen=True, order=True)
class Implication:
    """``premise -> conclusion``; the conclusion never overlaps the premise."""

    premise: int
    conclusion: int

    def __post_init__(self):
        if self.premise & self.conclusion:
            raise ValueError("conclusion must be disjoint from premise")
        if not self.conclusion:
            raise ValueError("empty conclusion")

    @property
    def is_unit(self) -> bool:
        return self.conclusion & (self.conclusion - 1) == 0

    @property
    def is_binary(self) -> bool:
        # covers both y -> x and the aggregated y -> Y
        return popcount(self.premise) == 1

    def size(self) -> int:
        return popcount(self.premise) + popcount(self.conclusion)

    def units(self) -> Iterator["Implication"]:
        for i in iter_bits(self.conclusion):
            yield Implication(self.premise, 1 << i)

    def format(self, universe: Universe) -> str:
        return f"{universe.format(self.premise)} -> {universe.format(self.conclusion)}"


UNIT = "unit"
AGGREGATED = "aggregated"


@dataclass(frozen=True)
class Basis:
    """An ordered list of implications; the order is what ordered iteration follows."""

    universe: Universe
    implications: tuple[Implication, ...] = ()
    form: str = UNIT

    def __post_init__(self):
        imps = tuple(self.implications)
        object.__setattr__(self, "implications", imps)
        full = self.universe.full
        for imp in imps:
            if (imp.premise | imp.conclusion) & ~full:
                raise ValueError("implication mentions elements outside the universe")
        if self.form == UNIT:
            if not all(imp.is_unit for imp in imps):
                raise ValueError("unit basis with a non-singleton conclusion")
        elif self.form == AGGREGATED:
            premises = [imp.premise for imp in imps]
            if len(set(premises)) != len(premises):
                raise ValueError("aggregated basis with repeated premises")
        else:
            raise ValueError(f"unknown basis form {self.form!r}")

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self) -> Iterator[Implication]:
        return iter(self.implications)

    def __getitem__(self, i):
        return self.implications[i]

    def replace(self, implications: Iterable[Implication], form: Optional[str] = None) -> "Basis":
        return Basis(self.universe, tuple(implications), self.form if form is None else form)

    def binary_part(self) -> list[Implication]:
        return [imp for imp in self.implications if imp.is_binary]

    def nonbinary_part(self) -> list[Implication]:
        return [imp for imp in self.implications if not imp.is_binary]

    def unit_pairs(self) -> Counter:
        """Multiset of unit ``(premise, conclusion)`` pairs; order-free comparison key."""
        return Counter((u.premise, u.conclusion) for imp in self.implications for u in imp.units())

    def format(self) -> list[str]:
        return [imp.format(self.universe) for imp in self.implications]

    @classmethod
    def compact(cls, universe: Universe, texts: Iterable[str] | str, form: str = UNIT) -> "Basis":
        """Build from compact strings, e.g. ``Basis.compact(U, "5->4, 14->3")``."""
        if isinstance(texts, str):
            texts = [t for t in re.split(r"[,\s]+", texts) if t]
        imps = [universe.imp(t) for t in texts]
        if form == UNIT:
            imps = [u for imp in imps for u in imp.units()]
        return cls(universe, tuple(imps), form)


def _moore_completion(full: int, sets: Iterable[int]) -> set[int]:
    family = {full}
    frontier = []
    for s in sets:
        if s not in family:
            family.add(s)
            frontier.append(s)
    while frontier:
        new = []
        snapshot = list(family)
        for s in frontier:
            for t in snapshot:
                meet = s & t
                if meet not in family:
                    family.add(meet)
                    new.append(meet)
                    snapshot.append(meet)
        frontier = new
    return family


@dataclass(frozen=True)
class ClosureSystem:
    """A Moore family on a universe; acts as the closure operator and its lattice.

    ``completed`` is set when the input family was not intersection-closed (or
    lacked the full set) and had to be completed.
    """

    universe: Universe
    closed: tuple[int, ...]
    completed: bool = False

    @classmethod
    def from_family(cls, universe: Universe, sets: Iterable[int]) -> "ClosureSystem":
        given = set(sets)
        full = universe.full
        for s in given:
            if s & ~full:
                raise ValueError("closed set mentions elements outside the universe")
        family = _moore_completion(full, given)
        return cls(universe, tuple(sorted(family, key=set_key)), completed=family != given)

    @property
    def n(self) -> int:
        return self.universe.n

    @cached_property
    def closed_set(self) -> frozenset[int]:
        return frozenset(self.closed)

    @cached_property
    def table(self) -> Optional[list[int]]:
        """``table[x] == phi(x)`` for every mask, or None for large universes."""
        n = self.universe.n
        if n > TABLE_LIMIT:
            return None
        full = self.universe.full
        table = [full] * (1 << n)
        for c in self.closed:
            for sub in iter_submasks(c):
                table[sub] &= c
        return table

    def phi(self, x: int) -> int:
        table = self.table
        if table is not None:
            return table[x]
        result = self.universe.full
        for c in self.closed:
            if x & ~c == 0:
                result &= c
        return result

    def is_closed(self, x: int) -> bool:
        return x in self.closed_set

    @cached_property
    def point_closures(self) -> tuple[int, ...]:
        return tuple(self.phi(1 << i) for i in range(self.universe.n))

    def down(self, x: int) -> int:
        """Union of the singleton closures of the members of ``x``."""
        pc = self.point_closures
        result = 0
        for i in iter_bits(x):
            result |= pc[i]
        return result

    def same_family(self, other: "ClosureSystem") -> bool:
        return self.universe == other.universe and self.closed_set == other.closed_set


class ClosureResult(NamedTuple):
    """``checks`` counts implications attended (one premise test each)."""

    closure: int
    checks: int
    passes: int = 1


# --------------------------------------------------------------------------
# operations


def phi_closure(system: ClosureSystem, x: int) -> int:
    """Intersection of all closed sets containing ``x``."""
    return system.phi(x)


def respects(y: int, imp: Implication) -> bool:
    return imp.premise & ~y != 0 or imp.conclusion & ~y == 0


def system_from_basis(basis: Basis, cap: int = DEFAULT_UNIVERSE_CAP) -> ClosureSystem:
    """Closure system whose closed sets are the subsets respecting every implication."""
    universe = basis.universe
    check_cap(universe.n, cap)
    pairs = [(imp.premise, imp.conclusion) for imp in basis]
    closed = []
    for y in range(1 << universe.n):
        for a, b in pairs:
            if a & ~y == 0 and b & ~y:
                break
        else:
            closed.append(y)
    return ClosureSystem(universe, tuple(sorted(closed, key=set_key)))


def system_from_generators(universe: Universe, sets: Iterable[int]) -> ClosureSystem:
    """Moore completion of ``sets`` together with the empty and the full set."""
    system = ClosureSystem.from_family(universe, list(sets) + [0])
    return ClosureSystem(universe, system.closed)


def consequence_holds(basis: Basis, query: Implication) -> bool:
    """Whether every model of ``basis`` is a model of ``query``."""
    from .closure import folklore_closure

    closure = folklore_closure(basis, query.premise).closure
    return query.conclusion & ~closure == 0


def definite_completion(clauses: Sequence[tuple[int, Optional[int]]], universe: Universe) -> Basis:
    """Replace non-definite Horn clauses by definite ones.

    Each clause is ``(negative_mask, positive_index_or_None)``.  The resulting
    basis has the models of the input plus the all-ones assignment.
    """
    full = universe.full
    imps: list[Implication] = []
    for negative, positive in clauses:
        if positive is not None:
            conclusion = (1 << positive) & ~negative
            if conclusion:
                imps.append(Implication(negative, conclusion))
        elif negative != full:
            imps.extend(Implication(negative, 1 << y) for y in iter_bits(full & ~negative))
    return Basis(universe, tuple(imps))


@dataclass(frozen=True)
class BasisSize:
    s: int
    t: int
    m: int


def basis_size(basis: Basis) -> BasisSize:
    """``s`` sums |X|+|Y| per implication; ``t`` counts each distinct set once."""
    s = sum(imp.size() for imp in basis)
    distinct = {imp.premise for imp in basis} | {imp.conclusion for imp in basis}
    t = sum(popcount(z) for z in distinct)
    return BasisSize(s=s, t=t, m=len(basis))


__all__ = [
    "AGGREGATED",
    "Basis",
    "BasisSize",
    "ClosureResult",
    "ClosureSystem",
    "DEFAULT_UNIVERSE_CAP",
    "Implication",
    "NotReduced",
    "UNIT",
    "Universe",
    "UniverseTooLarge",
    "basis_size",
    "check_cap",
    "consequence_holds",
    "definite_completion",
    "is_subset",
    "iter_bits",
    "iter_submasks",
    "mask_of",
    "phi_closure",
    "popcount",
    "respects",
    "set_key",
    "system_from_basis",
    "system_from_generators",
]
