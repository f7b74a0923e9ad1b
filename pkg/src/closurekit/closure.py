"""Closure computation from a basis: folklore, ordered iteration, forward chaining, Wild."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import Basis, ClosureResult, iter_bits, popcount


def folklore_closure(basis: Basis, x: int) -> ClosureResult:
    """Sweep the list repeatedly until a whole pass adds nothing.

    The final confirming pass is counted, so any input whose closure grows
    needs at least two passes.
    """
    pairs = [(imp.premise, imp.conclusion) for imp in basis]
    current = x
    passes = checks = 0
    while True:
        passes += 1
        before = current
        for a, b in pairs:
            checks += 1
            if a & ~current == 0:
                current |= b
        if current == before:
            return ClosureResult(current, checks, passes)


def ordered_iteration(basis: Basis, x: int) -> ClosureResult:
    """One pass in list order; each implication sees everything added before it."""
    current = x
    for imp in basis.implications:
        if imp.premise & ~current == 0:
            current |= imp.conclusion
    return ClosureResult(current, len(basis.implications), 1)


def one_sweep(basis: Basis, x: int) -> int:
    """Every implication is tested against the untouched input only."""
    result = x
    for imp in basis.implications:
        if imp.premise & ~x == 0:
            result |= imp.conclusion
    return result


def iterate_to_fixpoint(basis: Basis, x: int) -> int:
    current = x
    while True:
        nxt = ordered_iteration(basis, current).closure
        if nxt == current:
            return current
        current = nxt


@dataclass
class ForwardChainingState:
    """LINCLOSURE bookkeeping; build once, reuse for many inputs.

    Only ``propositions`` and ``true_set`` change between runs.
    """

    clause_list: list[list[int]]
    premise_sizes: list[int]
    consequent: list[int]
    propositions: list[int] = field(default_factory=list)
    true_set: int = 0

    @classmethod
    def build(cls, basis: Basis) -> "ForwardChainingState":
        clause_list: list[list[int]] = [[] for _ in range(basis.universe.n)]
        sizes = []
        consequent = []
        for j, imp in enumerate(basis.implications):
            for i in iter_bits(imp.premise):
                clause_list[i].append(j)
            sizes.append(popcount(imp.premise))
            consequent.append(imp.conclusion)
        return cls(clause_list, sizes, consequent)

    def run(self, x: int) -> ClosureResult:
        self.propositions = list(self.premise_sizes)
        props = self.propositions
        consequent = self.consequent
        clause_list = self.clause_list
        true_set = x
        checks = 0
        pending = list(iter_bits(x))
        for j, size in enumerate(props):
            if size == 0:
                checks += 1
                new = consequent[j] & ~true_set
                true_set |= new
                pending.extend(iter_bits(new))
        while pending:
            i = pending.pop()
            for j in clause_list[i]:
                checks += 1
                props[j] -= 1
                if props[j] == 0:
                    new = consequent[j] & ~true_set
                    if new:
                        true_set |= new
                        pending.extend(iter_bits(new))
        self.true_set = true_set
        return ClosureResult(true_set, checks, 1)


def forward_chaining_closure(
    basis: Basis, x: int, reuse: Optional[ForwardChainingState] = None
) -> ClosureResult:
    state = reuse if reuse is not None else ForwardChainingState.build(basis)
    return state.run(x)


@dataclass
class WildState:
    """Premise/conclusion arrays plus per-element clause lists."""

    premises: list[int]
    conclusions: list[int]
    clause_list: list[list[int]]

    @classmethod
    def build(cls, basis: Basis) -> "WildState":
        clause_list: list[list[int]] = [[] for _ in range(basis.universe.n)]
        for j, imp in enumerate(basis.implications):
            for i in iter_bits(imp.premise):
                clause_list[i].append(j)
        return cls(
            [imp.premise for imp in basis.implications],
            [imp.conclusion for imp in basis.implications],
            clause_list,
        )

    def run(self, x: int) -> ClosureResult:
        premises, conclusions = self.premises, self.conclusions
        true_set = x
        checks = 0
        remaining = set(range(len(premises)))
        candidates = sorted(remaining)
        while candidates:
            applicable = []
            for j in candidates:
                checks += 1
                if premises[j] & ~true_set == 0:
                    applicable.append(j)
            if not applicable:
                break
            added = 0
            for j in applicable:
                remaining.discard(j)
                added |= conclusions[j] & ~true_set
                true_set |= conclusions[j]
            # only pending implications that mention a new element can have become applicable
            touched = set()
            for i in iter_bits(added):
                touched.update(self.clause_list[i])
            candidates = sorted(touched & remaining)
        return ClosureResult(true_set, checks, 1)


def wild_closure(basis: Basis, x: int, reuse: Optional[WildState] = None) -> ClosureResult:
    """Fire every applicable implication at once, drop them, and repeat on the rest."""
    state = reuse if reuse is not None else WildState.build(basis)
    return state.run(x)


ALGORITHMS = {
    "folklore": folklore_closure,
    "ordered": ordered_iteration,
    "forward": forward_chaining_closure,
    "wild": wild_closure,
}
