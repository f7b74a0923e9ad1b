"""Reduced and standard forms and the maps back to the original universe."""
import pytest
from hypothesis import given

from closurekit import (
    NotReduced,
    Universe,
    is_reduced,
    is_standard,
    reduce_system,
    standardize_system,
)
from closurekit.io import family_compact

import oracles
from support import family_of, n5, s1, system_of


def assert_lattice_preserved(original, output, rmap):
    lifted = [rmap.lift(c) for c in output.closed]
    assert sorted(lifted) == sorted(original.closed)
    for a, la in zip(output.closed, lifted):
        for b, lb in zip(output.closed, lifted):
            assert (a & ~b == 0) == (la & ~lb == 0)
    for x in range(1 << original.n):
        assert rmap.lift(output.phi(rmap.project(x))) == original.phi(x)


def test_s1_is_reduced_but_not_standard():
    system = s1()
    assert is_reduced(system) and not is_standard(system)
    reduced, rmap = reduce_system(system)
    assert reduced is system
    assert rmap.is_identity()


def test_n5_is_standard():
    assert is_reduced(n5()) and is_standard(n5())


def test_equal_singleton_closures_are_neither():
    u = Universe(("a", "b", "c"))
    system = family_compact(u, "{} ab abc")
    assert not is_reduced(system) and not is_standard(system)
    reduced, rmap = reduce_system(system)
    assert reduced.universe.names == ("a", "c")
    assert rmap.rep(1) == 0
    assert_lattice_preserved(system, reduced, rmap)


def test_closure_of_empty_set_is_stripped():
    u = Universe(("x", "y", "z"))
    system = family_compact(u, "z xz yz xyz")
    reduced, rmap = reduce_system(system)
    assert reduced.universe.names == ("x", "y")
    assert rmap.removed_zero == u.mask("z")
    assert family_of(reduced) == {frozenset(), frozenset("x"), frozenset("y"), frozenset("xy")}
    assert_lattice_preserved(system, reduced, rmap)


def test_standardizing_s1_drops_d():
    standard, rmap = standardize_system(s1())
    assert standard.universe.names == ("a", "b", "c")
    assert family_of(standard) == family_of(n5())
    assert rmap.dropped_nonstandard == s1().universe.mask("d")
    assert_lattice_preserved(s1(), standard, rmap)


def test_standardizing_a_standard_system_changes_nothing():
    standard, rmap = standardize_system(n5())
    assert family_of(standard) == family_of(n5())
    assert rmap.is_identity()


def test_standardize_requires_reduced_input():
    u = Universe(("a", "b", "c"))
    with pytest.raises(NotReduced):
        standardize_system(family_compact(u, "{} ab abc"))


@given(oracles.families(max_n=6))
def test_reduction_invariants(data):
    labels, family = data
    system = system_of(labels, family)
    reduced, rmap = reduce_system(system)
    assert is_reduced(reduced)
    assert reduced.phi(0) == 0
    assert len(reduced.closed) == len(system.closed)
    for i, r in rmap.class_representative.items():
        assert rmap.rep(r) == r
        assert r <= i
    again, again_map = reduce_system(reduced)
    assert again is reduced and again_map.is_identity()
    discarded = system.universe.full & ~sum(1 << k for k in rmap.kept)
    merged = sum(1 << i for i, r in rmap.class_representative.items() if r != i)
    assert rmap.removed_zero & merged == 0
    assert rmap.removed_zero | merged == discarded
    assert_lattice_preserved(system, reduced, rmap)


@given(oracles.families(max_n=6))
def test_standardization_invariants(data):
    labels, family = data
    reduced, _ = reduce_system(system_of(labels, family))
    standard, rmap = standardize_system(reduced)
    assert is_standard(standard) and is_reduced(standard)
    for i, pc in enumerate(standard.point_closures):
        assert standard.is_closed(pc & ~(1 << i))
    assert len(standard.closed) == len(reduced.closed)
    assert_lattice_preserved(reduced, standard, rmap)
