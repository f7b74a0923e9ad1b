"""Refinement order, covers, minimal covers, the element poset, and convexity tests."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import ClosureSystem, NotReduced, check_cap, iter_bits, iter_submasks, set_key
from .reduction import is_reduced


def _require_reduced(system: ClosureSystem) -> None:
    if not is_reduced(system):
        raise NotReduced("operation requires a reduced closure system")


def ll_refines(system: ClosureSystem, x: int, y: int) -> bool:
    """``x << y``: every member of x lies in the closure of some member of y."""
    return x & ~system.down(y) == 0


def class_minimum(system: ClosureSystem, x: int) -> int:
    """Containment-least set equivalent to ``x`` under ``<<``.

    In a reduced system this is the set of members of x that are maximal in
    the element order restricted to x.
    """
    _require_reduced(system)
    pcs = system.point_closures
    result = x
    for i in iter_bits(x):
        for j in iter_bits(x):
            if j != i and (pcs[j] >> i) & 1:
                result &= ~(1 << i)
                break
    return result


def is_antichain(system: ClosureSystem, x: int) -> bool:
    pcs = system.point_closures
    return all(pcs[i] & x == 1 << i for i in iter_bits(x))


def covers_of(system: ClosureSystem, x: int) -> list[int]:
    """All ``X`` with ``x`` in ``phi(X)`` but in no ``phi(y)`` for ``y`` in X."""
    check_cap(system.n)
    bit = 1 << x
    allowed = 0
    for i, pc in enumerate(system.point_closures):
        if not pc & bit:
            allowed |= 1 << i
    phi = system.phi
    return sorted((sub for sub in iter_submasks(allowed) if phi(sub) & bit), key=set_key)


def minimal_covers(system: ClosureSystem, x: int) -> list[int]:
    """Covers ``Y`` such that every other cover ``Z`` with ``Z << Y`` contains ``Y``."""
    _require_reduced(system)
    covers = covers_of(system, x)
    down = {c: system.down(c) for c in covers}
    return [
        y for y in covers
        if all(z == y or z & ~down[y] or y & ~z == 0 for z in covers)
    ]


def minimal_covers_by_class(system: ClosureSystem, x: int) -> list[int]:
    """Covers that are ``<<``-minimal and least in their equivalence class."""
    _require_reduced(system)
    covers = covers_of(system, x)
    down = {c: system.down(c) for c in covers}
    result = []
    for y in covers:
        if class_minimum(system, y) != y:
            continue
        # strictly below: z << y but not y << z
        if any(z & ~down[y] == 0 and y & ~down[z] for z in covers):
            continue
        result.append(y)
    return result


def _fast_minimal_covers(system: ClosureSystem, x: int) -> list[int]:
    # only antichain covers can be minimal, and the minimality test may range
    # over antichain covers alone (replace Z by its class minimum)
    bit = 1 << x
    pcs = system.point_closures
    allowed = 0
    for i, pc in enumerate(pcs):
        if not pc & bit:
            allowed |= 1 << i
    phi = system.phi
    covers = []
    for sub in iter_submasks(allowed):
        if phi(sub) & bit and all(pcs[i] & sub == 1 << i for i in iter_bits(sub)):
            covers.append(sub)
    if len(covers) <= 1:
        return covers
    down = [system.down(c) for c in covers]
    result = []
    for k, y in enumerate(covers):
        dy = down[k]
        for z in covers:
            if z != y and z & ~dy == 0 and y & ~z:
                break
        else:
            result.append(y)
    result.sort(key=set_key)
    return result


@dataclass(frozen=True)
class CoverTable:
    """Per-element minimal covers ``M(x)``, the sub-family ``M*(x)`` with
    containment-minimal closures, and the induced D and E relations."""

    minimal_covers: dict[int, tuple[int, ...]]
    minimized_covers: dict[int, tuple[int, ...]]
    d_pairs: frozenset[tuple[int, int]]
    e_pairs: frozenset[tuple[int, int]]

    def is_empty(self) -> bool:
        return not any(self.minimal_covers.values())


def build_cover_table(system: ClosureSystem) -> CoverTable:
    _require_reduced(system)
    check_cap(system.n)
    phi = system.phi
    m_all: dict[int, tuple[int, ...]] = {}
    m_star: dict[int, tuple[int, ...]] = {}
    d_pairs = set()
    e_pairs = set()
    for x in range(system.n):
        covers = _fast_minimal_covers(system, x)
        closures = [phi(c) for c in covers]
        starred = tuple(
            c for c, cl in zip(covers, closures)
            if not any(other != cl and other & ~cl == 0 for other in closures)
        )
        m_all[x] = tuple(covers)
        m_star[x] = starred
        for c in covers:
            d_pairs.update((x, y) for y in iter_bits(c))
        for c in starred:
            e_pairs.update((x, y) for y in iter_bits(c))
    return CoverTable(m_all, m_star, frozenset(d_pairs), frozenset(e_pairs))


class ElementPoset(NamedTuple):
    """Pairs are ``(greater, lesser)``; ``linear_extension`` runs bottom to top."""

    order: frozenset
    cover_relation: frozenset
    linear_extension: tuple


def element_poset(system: ClosureSystem) -> ElementPoset:
    """``s <= t`` iff ``phi(s)`` is contained in ``phi(t)``."""
    _require_reduced(system)
    n = system.n
    pcs = system.point_closures
    below = [pcs[t] & ~(1 << t) for t in range(n)]
    order = frozenset((t, s) for t in range(n) for s in iter_bits(below[t]))
    covers = set()
    for t in range(n):
        for s in iter_bits(below[t]):
            # s is covered by t unless some z sits strictly between them
            if not any((below[z] >> s) & 1 for z in iter_bits(below[t])):
                covers.add((t, s))
    remaining = [len(list(iter_bits(below[t]))) for t in range(n)]
    above: list[list[int]] = [[] for _ in range(n)]
    for t, s in order:
        above[s].append(t)
    heap = [t for t in range(n) if remaining[t] == 0]
    heapq.heapify(heap)
    linear = []
    while heap:
        s = heapq.heappop(heap)
        linear.append(s)
        for t in above[s]:
            remaining[t] -= 1
            if remaining[t] == 0:
                heapq.heappush(heap, t)
    return ElementPoset(order, frozenset(covers), tuple(linear))


def is_quasi_closed(system: ClosureSystem, x: int) -> bool:
    """Not closed, and every closed set not containing ``x`` meets it in a closed set."""
    if system.phi(x) == x:
        return False
    is_closed = system.is_closed
    return all(x & ~z == 0 or is_closed(z & x) for z in system.closed)


def extreme_points(system: ClosureSystem, x: int) -> int:
    if not system.is_closed(x):
        raise ValueError("extreme points are defined for closed sets")
    phi = system.phi
    return sum(1 << i for i in iter_bits(x) if not (phi(x & ~(1 << i)) >> i) & 1)


def anti_exchange_violation(system: ClosureSystem) -> Optional[tuple[int, int, int]]:
    """A witness ``(C, x, y)`` with x in phi(C+y) and y in phi(C+x), or None."""
    phi = system.phi
    full = system.universe.full
    for c in system.closed:
        outside = list(iter_bits(full & ~c))
        for x in outside:
            for y in outside:
                if x != y and (phi(c | 1 << y) >> x) & 1 and (phi(c | 1 << x) >> y) & 1:
                    return c, x, y
    return None


def is_convex_geometry(system: ClosureSystem) -> bool:
    return anti_exchange_violation(system) is None
