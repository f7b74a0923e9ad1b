"""Constructing, ordering and checking implicational bases.

Covers the canonical direct unit basis (``sigma_delta``), the D-basis and its
binary-optimised and ordered-sequence variants, the E-basis for systems
without D-cycles, and the Duquenne-Guigues canonical basis.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .closure import folklore_closure, ordered_iteration
from .core import (
    AGGREGATED,
    UNIT,
    Basis,
    ClosureSystem,
    Implication,
    NotReduced,
    check_cap,
    iter_bits,
    popcount,
    set_key,
    system_from_basis,
)
from .reduction import is_reduced
from .structure import CoverTable, build_cover_table, element_poset, is_quasi_closed

DEFAULT_SEARCH_CAP = 10


class DCycleError(ValueError):
    def __init__(self, cycle: list[int]):
        self.cycle = cycle
        super().__init__(f"closure system has a D-cycle through elements {cycle}")


class SearchCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OrderedSequence:
    """Implications drawn from ``source``, possibly repeated, applied in one pass."""

    steps: tuple[Implication, ...]
    source: Basis

    def __post_init__(self):
        allowed = set(self.source.unit_pairs())
        for step in self.steps:
            if any((u.premise, u.conclusion) not in allowed for u in step.units()):
                raise ValueError("sequence step does not occur in its source basis")

    def __len__(self) -> int:
        return len(self.steps)

    def as_basis(self) -> Basis:
        return Basis(self.source.universe, self.steps, UNIT)

    def evaluate(self, x: int) -> int:
        return ordered_iteration(self.as_basis(), x).closure


@dataclass(frozen=True)
class RankTable:
    d_rank: dict[int, int]

    def elements_of_rank(self, k: int) -> list[int]:
        return sorted(x for x, r in self.d_rank.items() if r == k)


def _unit_key(imp: Implication):
    return (set_key(imp.premise), imp.conclusion.bit_length())


def _require_reduced(system: ClosureSystem) -> None:
    if not is_reduced(system):
        raise NotReduced("basis construction requires a reduced system; call reduce_system first")


def _binary_units(system: ClosureSystem) -> list[Implication]:
    out = []
    for y, pc in enumerate(system.point_closures):
        for x in iter_bits(pc & ~(1 << y)):
            out.append(Implication(1 << y, 1 << x))
    return out


# --------------------------------------------------------------------------
# form conversion


def unit_expansion(basis: Basis) -> Basis:
    return Basis(basis.universe, tuple(u for imp in basis for u in imp.units()), UNIT)


def aggregate(basis: Basis) -> Basis:
    """Merge conclusions of equal premises, keeping first-occurrence order."""
    merged: dict[int, int] = {}
    for imp in basis:
        merged[imp.premise] = merged.get(imp.premise, 0) | imp.conclusion
    return Basis(basis.universe, tuple(Implication(a, b) for a, b in merged.items()), AGGREGATED)


def binary_first(basis: Basis) -> Basis:
    """Stable reorder putting every binary implication before the rest."""
    return basis.replace(basis.binary_part() + basis.nonbinary_part())


def order_is_valid_d(basis: Basis) -> bool:
    seen_nonbinary = False
    for imp in basis:
        if imp.is_binary:
            if seen_nonbinary:
                return False
        else:
            seen_nonbinary = True
    return True


# --------------------------------------------------------------------------
# constructions


def build_sigma_delta(system: ClosureSystem) -> Basis:
    """``X -> y`` for y in phi(X) - X that no proper subset of X already yields."""
    check_cap(system.n)
    phi = system.phi
    imps = []
    for x in range(1 << system.n):
        new = phi(x) & ~x
        for z in iter_bits(x):
            if not new:
                break
            new &= ~phi(x & ~(1 << z))
        for y in iter_bits(new):
            imps.append(Implication(x, 1 << y))
    imps.sort(key=_unit_key)
    return Basis(system.universe, tuple(imps), UNIT)


def build_d_basis(system: ClosureSystem, table: Optional[CoverTable] = None) -> Basis:
    """Binary part ``y -> x`` (x below y) followed by ``X -> x`` for minimal covers X."""
    _require_reduced(system)
    if table is None:
        table = build_cover_table(system)
    binary = _binary_units(system)
    covers = [
        Implication(cover, 1 << x)
        for x, cs in table.minimal_covers.items()
        for cover in cs
    ]
    covers.sort(key=_unit_key)
    return Basis(system.universe, tuple(binary + covers), UNIT)


def extract_d_basis(direct_basis: Basis) -> Basis:
    """Prune a direct unit basis of a reduced system down to its D-basis.

    For each non-binary ``X2 -> x`` the test runs, for every other
    ``X1 -> x``, one ordered pass of the binary implications followed by
    ``X1 -> x`` from X2.  If x appears, then ``X1 << X2`` or x already sits
    below a member of X2, and ``X2 -> x`` is dropped (unless X2 is contained
    in X1, in which case X2 is the smaller representative).
    """
    units = unit_expansion(direct_basis)
    binary = units.binary_part()
    nonbinary = units.nonbinary_part()
    by_conclusion: dict[int, list[int]] = {}
    for imp in nonbinary:
        by_conclusion.setdefault(imp.conclusion, []).append(imp.premise)
    universe = direct_basis.universe
    binary_pass = Basis(universe, tuple(binary), UNIT)

    def binary_closure(x: int) -> int:
        return ordered_iteration(binary_pass, x).closure

    keep = []
    for imp in nonbinary:
        x, x2 = imp.conclusion, imp.premise
        down2 = binary_closure(x2)
        if down2 & x and x2:
            continue  # not a cover: x sits below a member of X2
        dominated = False
        for x1 in by_conclusion[x]:
            if x1 == x2:
                continue
            seq = Basis(universe, tuple(binary) + (Implication(x1, x),), UNIT)
            if ordered_iteration(seq, x2).closure & x and x2 & ~x1:
                dominated = True
                break
        if not dominated:
            keep.append(imp)
    return Basis(universe, tuple(binary + keep), UNIT)


def optimize_binary(basis: Basis, system: ClosureSystem) -> Basis:
    """Keep only covering pairs in the binary part, in descending linear-extension order.

    Works on unit and aggregated bases; the non-binary part keeps its order.
    """
    _require_reduced(system)
    have = Counter()
    for imp in basis.binary_part():
        for u in imp.units():
            have[(u.premise, u.conclusion)] += 1
    want = {(b.premise, b.conclusion) for b in _binary_units(system)}
    if set(have) != want:
        raise ValueError("binary part differs from the binary part of the D-basis")
    poset = element_poset(system)
    lower_covers: dict[int, int] = {}
    for t, s in poset.cover_relation:
        lower_covers[t] = lower_covers.get(t, 0) | (1 << s)
    binary = []
    for t in reversed(poset.linear_extension):
        if t not in lower_covers:
            continue
        conclusion = lower_covers[t]
        if basis.form == AGGREGATED:
            binary.append(Implication(1 << t, conclusion))
        else:
            binary.extend(Implication(1 << t, 1 << s) for s in iter_bits(conclusion))
    return basis.replace(binary + basis.nonbinary_part())


def build_d_plus(basis: Basis, system: ClosureSystem) -> tuple[Basis, OrderedSequence]:
    """Shorten a D-basis and produce an ordered direct sequence for the result.

    (a) drop ``A -> x`` when ``A -> y`` and ``y -> x`` are present;
    (b) drop ``z -> x`` when ``z -> y`` and ``y -> x`` are present.
    The sequence is the ordered cover binaries, then the surviving non-binary
    implications, then the cover binaries needed to recover what (a) removed.
    """
    _require_reduced(system)
    units = unit_expansion(basis)
    binary_pairs = {(imp.premise, imp.conclusion) for imp in units.binary_part()}
    nonbinary = units.nonbinary_part()
    nb_pairs = {(imp.premise, imp.conclusion) for imp in nonbinary}
    below_of: dict[int, int] = {}
    for y, x in binary_pairs:
        below_of[y] = below_of.get(y, 0) | x

    removed = []
    kept_nonbinary = []
    for imp in nonbinary:
        a, x = imp.premise, imp.conclusion
        via = sorted(y for (p, y) in nb_pairs if p == a and below_of.get(y, 0) & x)
        if via:
            removed.append((x, via))
        else:
            kept_nonbinary.append(imp)

    # (b) leaves exactly the covering pairs of the element order
    binary_only = Basis(units.universe, tuple(units.binary_part()), UNIT)
    sigma1 = list(optimize_binary(binary_only, system))
    pcs = system.point_closures

    def chain_steps(y: int, x: int) -> set[int]:
        """Positions in sigma1 of the cover steps lying between y and x."""
        yi, xi = y.bit_length() - 1, x.bit_length() - 1
        return {
            k for k, step in enumerate(sigma1)
            if (pcs[yi] & step.premise) and (pcs[step.conclusion.bit_length() - 1] >> xi) & 1
        }

    # one witness y per dropped A -> x, preferring chains already re-appended
    chosen: set[int] = set()
    for x, via in removed:
        options = [chain_steps(y, x) for y in via]
        chosen |= min(options, key=lambda steps: (len(steps - chosen), len(steps)))

    sigma3 = [sigma1[k] for k in sorted(chosen)]
    plus = Basis(units.universe, tuple(sigma1 + kept_nonbinary), UNIT)
    return plus, OrderedSequence(tuple(sigma1 + kept_nonbinary + sigma3), plus)


# --------------------------------------------------------------------------
# D-relation, ranks, E-basis


def _find_cycle(nodes: Iterable[int], pairs: Iterable[tuple[int, int]]) -> Optional[list[int]]:
    adj: dict[int, list[int]] = {}
    for a, b in pairs:
        adj.setdefault(a, []).append(b)
    for a in adj:
        adj[a].sort()
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[int, int] = {}
    for start in sorted(nodes):
        if color.get(start, WHITE) != WHITE:
            continue
        stack = [(start, iter(adj.get(start, ())))]
        path = [start]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            for nxt in it:
                state = color.get(nxt, WHITE)
                if state == GRAY:
                    cycle = path[path.index(nxt):]
                    k = cycle.index(min(cycle))
                    return cycle[k:] + cycle[:k]
                if state == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(adj.get(nxt, ()))))
                    path.append(nxt)
                    break
            else:
                color[node] = BLACK
                stack.pop()
                path.pop()
    return None


def d_cycles(table: CoverTable) -> Optional[list[int]]:
    """A witness cycle of the D-relation, smallest element first, or None."""
    return _find_cycle(table.minimal_covers.keys(), table.d_pairs)


def _ranks(n: int, pairs: Iterable[tuple[int, int]]) -> dict[int, int]:
    succ: dict[int, list[int]] = {x: [] for x in range(n)}
    for a, b in pairs:
        succ[a].append(b)
    rank: dict[int, int] = {}

    def visit(x: int) -> int:
        if x not in rank:
            rank[x] = 1 + max((visit(y) for y in succ[x]), default=-1)
        return rank[x]

    for x in range(n):
        visit(x)
    return rank


def d_ranks(system: ClosureSystem, d_basis: Basis) -> RankTable:
    """Rank 0 for elements with no non-binary implication into them; otherwise
    one more than the highest rank met in any of their minimal covers."""
    if d_basis.universe != system.universe:
        raise ValueError("basis and system live on different universes")
    pairs = {
        (x, y)
        for imp in unit_expansion(d_basis).nonbinary_part()
        for x in iter_bits(imp.conclusion)
        for y in iter_bits(imp.premise)
    }
    cycle = _find_cycle(range(system.n), pairs)
    if cycle is not None:
        raise DCycleError(cycle)
    return RankTable(_ranks(system.n, pairs))


def build_e_basis(
    system: ClosureSystem, form: str = UNIT, force: bool = False, table: Optional[CoverTable] = None
) -> Basis:
    """Binary part plus ``X -> x`` for covers in ``M*(x)``, ordered by the
    highest D-rank in the premise.

    ``force=True`` skips the D-cycle check; the result is then ordered by
    premise only and need not be a basis of the system.
    """
    _require_reduced(system)
    if table is None:
        table = build_cover_table(system)
    cycle = d_cycles(table)
    if cycle is not None and not force:
        raise DCycleError(cycle)
    rank = _ranks(system.n, table.d_pairs) if cycle is None else None

    def premise_key(premise: int):
        top = max((rank[y] for y in iter_bits(premise)), default=0) if rank else 0
        return (top, set_key(premise))

    binary = _binary_units(system)
    covers = [Implication(c, 1 << x) for x, cs in table.minimized_covers.items() for c in cs]
    covers.sort(key=lambda imp: (premise_key(imp.premise), imp.conclusion.bit_length()))
    basis = Basis(system.universe, tuple(binary + covers), UNIT)
    if form == AGGREGATED:
        basis = aggregate(basis)
    return basis


# --------------------------------------------------------------------------
# Duquenne-Guigues


def quasi_closed_sets(system: ClosureSystem) -> list[int]:
    check_cap(system.n)
    return [x for x in range(1 << system.n) if is_quasi_closed(system, x)]


def build_dg_canonical(system: ClosureSystem) -> Basis:
    """``X -> phi(X) - X`` over quasi-closed X minimal among those with the same closure."""
    check_cap(system.n)
    phi = system.phi
    by_closure: dict[int, list[int]] = {}
    for x in quasi_closed_sets(system):
        by_closure.setdefault(phi(x), []).append(x)
    premises = []
    for group in by_closure.values():
        for x in group:
            if not any(w != x and w & ~x == 0 for w in group):
                premises.append(x)
    premises.sort(key=set_key)
    imps = tuple(Implication(x, phi(x) & ~x) for x in premises)
    return Basis(system.universe, imps, AGGREGATED)


# --------------------------------------------------------------------------
# ordered directness


def ordered_direct_witness(basis: Basis, system: Optional[ClosureSystem] = None) -> Optional[int]:
    """First subset (numeric order) where one ordered pass misses the closure."""
    if system is None:
        system = system_from_basis(basis)
    check_cap(system.n)
    phi = system.phi
    pairs = [(imp.premise, imp.conclusion) for imp in basis]
    for x in range(1 << system.n):
        current = x
        for a, b in pairs:
            if a & ~current == 0:
                current |= b
        if current != phi(x):
            return x
    return None


def is_ordered_direct(basis: Basis, system: Optional[ClosureSystem] = None) -> bool:
    return ordered_direct_witness(basis, system) is None


def find_ordered_direct_ordering(
    basis: Basis, system: Optional[ClosureSystem] = None, cap: int = DEFAULT_SEARCH_CAP
) -> Optional[list[int]]:
    """A permutation of ``basis`` indices that makes it ordered direct, or None.

    Depth-first over prefixes.  Only implications that add something to some
    test subset are tried next (one that adds nothing now can always be moved
    later without harm), and a prefix is abandoned once some subset cannot
    reach its closure even by iterating the unused implications to a fixpoint.
    """
    m = len(basis)
    if m > cap:
        raise SearchCapExceeded(f"{m} implications exceed the search cap of {cap}")
    if system is None:
        system = system_from_basis(basis)
    check_cap(system.n)
    phi = system.phi
    prem = [imp.premise for imp in basis]
    conc = [imp.conclusion for imp in basis]
    tests = [x for x in range(1 << system.n) if phi(x) != x]
    goal = tuple(phi(x) for x in tests)
    start = tuple(tests)
    all_idx = (1 << m) - 1

    def reachable(cur: Sequence[int], remaining: int) -> bool:
        idx = list(iter_bits(remaining))
        for c, g in zip(cur, goal):
            while c != g:
                before = c
                for j in idx:
                    if prem[j] & ~c == 0:
                        c |= conc[j]
                if c == before:
                    return False
        return True

    failed: set = set()
    order: list[int] = []

    def search(cur: tuple, remaining: int) -> bool:
        if cur == goal:
            order.extend(iter_bits(remaining))
            return True
        key = (remaining, cur)
        if key in failed:
            return False
        for j in iter_bits(remaining):
            a, b = prem[j], conc[j]
            new = tuple(c | b if a & ~c == 0 else c for c in cur)
            if new == cur:
                continue
            rest = remaining & ~(1 << j)
            if not reachable(new, rest):
                continue
            order.append(j)
            if search(new, rest):
                return True
            order.pop()
        failed.add(key)
        return False

    if not reachable(start, all_idx):
        return None
    return list(order) if search(start, all_idx) else None


def redundant_implications(basis: Basis) -> list[int]:
    """Indices of implications that follow from the others."""
    out = []
    for i, imp in enumerate(basis):
        rest = basis.replace(basis.implications[:i] + basis.implications[i + 1:])
        if imp.conclusion & ~folklore_closure(rest, imp.premise).closure == 0:
            out.append(i)
    return out
