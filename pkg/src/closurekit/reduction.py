"""Reduced and standard forms of a closure system, with maps back to the original."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import ClosureSystem, NotReduced, Universe, iter_bits


@dataclass(frozen=True)
class ReductionMap:
    """How an output system's elements relate to the original universe.

    ``kept`` lists original indices in output order.  Every discarded element
    is either in ``removed_zero`` (the closure of the empty set), merged into
    the representative of its class, or in ``dropped_nonstandard``; for the
    latter ``support[u]`` is the set of kept elements generating its closure.
    """

    original: Universe
    kept: tuple[int, ...]
    removed_zero: int = 0
    class_representative: dict[int, int] = field(default_factory=dict)
    dropped_nonstandard: int = 0
    support: dict[int, int] = field(default_factory=dict)

    def rep(self, i: int) -> int:
        return self.class_representative.get(i, i)

    @property
    def position(self) -> dict[int, int]:
        return {orig: pos for pos, orig in enumerate(self.kept)}

    def project(self, x: int) -> int:
        """Map an original subset into the output universe; closures correspond."""
        pos = self.position
        out = 0
        for i in iter_bits(x & ~self.removed_zero):
            r = self.rep(i)
            if r in pos:
                out |= 1 << pos[r]
            else:
                for k in iter_bits(self.support[r]):
                    out |= 1 << pos[k]
        return out

    def lift(self, c: int) -> int:
        """Original closed set corresponding to an output closed set ``c``."""
        kept_orig = 0
        for p in iter_bits(c):
            kept_orig |= 1 << self.kept[p]
        present = kept_orig
        for u, sup in self.support.items():
            if sup & ~kept_orig == 0:
                present |= 1 << u
        result = self.removed_zero
        for i in range(self.original.n):
            if (self.removed_zero >> i) & 1:
                continue
            if (present >> self.rep(i)) & 1:
                result |= 1 << i
        return result

    def is_identity(self) -> bool:
        return (
            self.kept == tuple(range(self.original.n))
            and not self.removed_zero
            and not self.dropped_nonstandard
            and all(k == v for k, v in self.class_representative.items())
        )


def _compress(mask: int, kept: tuple[int, ...]) -> int:
    out = 0
    for pos, orig in enumerate(kept):
        if (mask >> orig) & 1:
            out |= 1 << pos
    return out


def _restrict(system: ClosureSystem, kept: tuple[int, ...]) -> ClosureSystem:
    universe = Universe(tuple(system.universe.names[i] for i in kept))
    return ClosureSystem.from_family(universe, {_compress(c, kept) for c in system.closed})


def is_reduced(system: ClosureSystem) -> bool:
    """Distinct elements have distinct singleton closures."""
    pcs = system.point_closures
    return len(set(pcs)) == len(pcs)


def is_standard(system: ClosureSystem) -> bool:
    """The empty set is closed and ``phi(i) - i`` is closed for every element."""
    if system.phi(0) != 0:
        return False
    return all(system.is_closed(pc & ~(1 << i)) for i, pc in enumerate(system.point_closures))


def reduce_system(system: ClosureSystem) -> tuple[ClosureSystem, ReductionMap]:
    """Strip ``phi(empty)`` and merge elements with equal singleton closures.

    Each class keeps its lowest-index element.
    """
    zero = system.phi(0)
    reps: dict[int, int] = {}
    by_closure: dict[int, int] = {}
    for i, pc in enumerate(system.point_closures):
        if (zero >> i) & 1:
            continue
        reps[i] = by_closure.setdefault(pc & ~zero, i)
    kept = tuple(sorted(set(reps.values())))
    rmap = ReductionMap(system.universe, kept, removed_zero=zero, class_representative=reps)
    if rmap.is_identity():
        return system, rmap
    return _restrict(system, kept), rmap


def standardize_system(system: ClosureSystem) -> tuple[ClosureSystem, ReductionMap]:
    """Drop elements whose singleton closure minus themselves is not closed.

    Repeats until the result is standard.  The input must be reduced.
    """
    if not is_reduced(system):
        raise NotReduced("standardize_system needs a reduced system; call reduce_system first")
    original = system.universe
    orig_of = list(range(original.n))
    support: dict[int, int] = {}
    current = system
    while not is_standard(current):
        pcs = current.point_closures
        keep = tuple(i for i, pc in enumerate(pcs) if current.is_closed(pc & ~(1 << i)))
        keep_mask = sum(1 << i for i in keep)
        for i in range(current.n):
            if i in keep:
                continue
            sup = 0
            for k in iter_bits(pcs[i] & keep_mask):
                sup |= 1 << orig_of[k]
            support[orig_of[i]] = sup
        # earlier supports may mention elements dropped in this round
        dropped_now = {orig_of[i] for i in range(current.n) if i not in keep}
        for u, sup in list(support.items()):
            if u in dropped_now:
                continue
            expanded = sup
            for v in dropped_now:
                if (sup >> v) & 1:
                    expanded = (expanded & ~(1 << v)) | support[v]
            support[u] = expanded
        orig_of = [orig_of[i] for i in keep]
        current = _restrict(current, keep)
    dropped = 0
    for u in support:
        dropped |= 1 << u
    rmap = ReductionMap(original, tuple(orig_of), dropped_nonstandard=dropped, support=support)
    return current, rmap
