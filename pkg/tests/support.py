"""Shared worked systems and converters between library objects and oracle sets."""
from __future__ import annotations

from closurekit import Basis, ClosureSystem, Universe, unit_expansion
from closurekit.io import family_compact

U3 = Universe(("a", "b", "c"))
U4 = Universe.of_size(4)
U5 = Universe.of_size(5)
U6 = Universe.of_size(6)

EX9_FAMILY = "{} 1 2 3 4 12 13 234 45 12345"
DBAS_FAMILY = "1 12 13 4 45 134 136 1236 1346 13456 123456"
EX66_FAMILY = "{} 1 2 3 4 6 36 26 13 24 14 35 23 16 135 136 236 1246 2345 123456"
EX67_FAMILY = "{} 1 2 3 5 6 12 13 14 16 23 123 124 135 256 1346 123456"
CYCLE_BASIS = "13->2 24->3 14->2 14->3"


def ex9() -> ClosureSystem:
    return family_compact(U5, EX9_FAMILY)


def dbas() -> ClosureSystem:
    return family_compact(U6, DBAS_FAMILY)


def ex66() -> ClosureSystem:
    return family_compact(U6, EX66_FAMILY)


def ex67() -> ClosureSystem:
    return family_compact(U6, EX67_FAMILY)


def n5() -> ClosureSystem:
    return family_compact(U3, "{} a c ab abc")


def s1() -> ClosureSystem:
    return family_compact(Universe(("a", "b", "c", "d")), "{} a c ab abcd")


def cycle_basis() -> Basis:
    return Basis.compact(U4, CYCLE_BASIS)


def pairs(basis: Basis) -> set:
    """Unit implications as (premise labels, conclusion labels) frozenset pairs."""
    u = basis.universe
    return {
        (frozenset(u.labels(imp.premise)), frozenset(u.labels(imp.conclusion)))
        for imp in unit_expansion(basis)
    }


def agg_pairs(basis: Basis) -> set:
    u = basis.universe
    return {(frozenset(u.labels(imp.premise)), frozenset(u.labels(imp.conclusion))) for imp in basis}


def compact_pairs(text: str) -> set:
    """``"5->4, 14->3"`` as label pairs; single-character labels."""
    out = set()
    for item in text.replace(",", " ").split():
        lhs, rhs = item.split("->")
        out.add((frozenset(lhs), frozenset(rhs)))
    return out


def unit_pairs_of(text: str) -> set:
    return {(a, frozenset([y])) for a, b in compact_pairs(text) for y in b}


def system_of(labels, family) -> ClosureSystem:
    u = Universe(tuple(labels))
    return ClosureSystem.from_family(u, [u.mask(sorted(s)) for s in family])


def family_of(system: ClosureSystem) -> set:
    return {frozenset(system.universe.labels(c)) for c in system.closed}


def to_set(universe: Universe, mask: int) -> frozenset:
    return frozenset(universe.labels(mask))
