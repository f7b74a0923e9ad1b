"""The refinement order, covers, the element poset, quasi-closed sets and convexity."""
import pytest
from hypothesis import given

from closurekit import (
    Basis,
    NotReduced,
    Universe,
    build_cover_table,
    class_minimum,
    covers_of,
    element_poset,
    extreme_points,
    is_convex_geometry,
    is_quasi_closed,
    ll_refines,
    minimal_covers,
    reduce_system,
    system_from_basis,
)
from closurekit.io import family_compact
from closurekit.structure import (
    _fast_minimal_covers,
    anti_exchange_violation,
    is_antichain,
    minimal_covers_by_class,
)

import oracles
from support import U3, U4, U5, U6, cycle_basis, dbas, ex66, ex9, n5, system_of, to_set

GEOMETRY = {"a": (0, 0), "b": (4, 0), "c": (0, 4), "d": (2, 0), "x": (2, 1)}


def geometry_system(extra=()):
    family = oracles.convex_geometry_family(GEOMETRY) | {frozenset(s) for s in extra}
    return system_of(sorted(GEOMETRY), oracles.moore(GEOMETRY, family))


def test_refinement_on_n5():
    system = n5()
    assert ll_refines(system, U3.mask("a"), U3.mask("b"))
    assert ll_refines(system, U3.mask("a c"), U3.mask("b c"))
    assert ll_refines(system, U3.mask("c"), U3.mask("a c"))
    assert not ll_refines(system, U3.mask("b c"), U3.mask("a c"))


def test_class_minimum():
    assert class_minimum(n5(), U3.full) == U3.mask("b c")
    assert class_minimum(n5(), U3.mask("c")) == U3.mask("c")
    assert class_minimum(dbas(), U6.mask("3 6")) == U6.mask("6")
    with pytest.raises(NotReduced):
        class_minimum(family_compact(U3, "{} ab abc"), U3.mask("a"))


def test_minimal_cover_ignores_a_cover_containing_a_lower_element():
    u = Universe(("a", "b", "c", "d"))
    system = family_compact(u, "{} d ad cd abd abcd")
    b = u.index("b")
    assert covers_of(system, b) == [u.mask("a c"), u.mask("a c d")]
    assert minimal_covers(system, b) == [u.mask("a c")]


def test_non_minimal_cover_in_five_element_example():
    system = ex9()
    two = U5.index("2")
    assert U5.mask("1 5") in covers_of(system, two)
    assert U5.mask("1 5") not in minimal_covers(system, two)
    assert ll_refines(system, U5.mask("1 4"), U5.mask("1 5"))


def test_element_without_covers():
    system = system_from_basis(Basis.compact(U3, "b->a"))
    assert minimal_covers(system, U3.index("a")) == []
    assert build_cover_table(system).is_empty()


def test_cover_table_for_dbas():
    table = build_cover_table(dbas())
    six = U6.index("6")
    assert sorted(table.minimal_covers[six]) == sorted(U6.cmask(c) for c in ("15", "24", "23"))
    assert sorted(table.minimized_covers[six]) == sorted(U6.cmask(c) for c in ("15", "23"))
    four = U6.index("4")
    assert (six, four) in table.d_pairs
    assert (six, four) not in table.e_pairs


def test_element_poset_of_a_chain():
    u = Universe.of_size(3)
    system = system_from_basis(Basis.compact(u, "2->1 3->2 3->1"))
    poset = element_poset(system)
    assert poset.cover_relation == {(2, 1), (1, 0)}
    assert poset.linear_extension == (0, 1, 2)


def test_element_poset_of_an_antichain():
    poset = element_poset(system_from_basis(Basis(U4)))
    assert poset.order == frozenset() and poset.cover_relation == frozenset()
    assert sorted(poset.linear_extension) == [0, 1, 2, 3]


def test_element_poset_of_dbas():
    poset = element_poset(dbas())
    expected = {("2", "1"), ("3", "1"), ("6", "3"), ("6", "1"), ("5", "4")}
    assert {(U6.names[a], U6.names[b]) for a, b in poset.order} == expected


def test_quasi_closed_sets():
    system = ex66()
    assert is_quasi_closed(system, U6.mask("3 4"))
    assert not is_quasi_closed(system, U6.mask("1 3"))
    for y in range(6):
        if not system.is_closed(1 << y):
            assert is_quasi_closed(system, 1 << y)


def test_geometry_oracle_places_x_inside_both_triangles():
    from fractions import Fraction

    pts = {k: (Fraction(a), Fraction(b)) for k, (a, b) in GEOMETRY.items()}
    assert oracles.in_hull(pts["x"], [pts["a"], pts["b"], pts["c"]])
    assert oracles.in_hull(pts["x"], [pts["d"], pts["b"], pts["c"]])
    assert oracles.in_hull(pts["d"], [pts["a"], pts["b"]])
    assert not oracles.in_hull(pts["x"], [pts["a"], pts["d"], pts["c"]])


def test_geometry_oracle_is_a_convex_geometry():
    system = geometry_system()
    assert is_convex_geometry(system)
    u = system.universe
    assert to_set(u, extreme_points(system, u.full)) == frozenset("abc")
    assert extreme_points(system, u.mask("d")) == u.mask("d")
    with pytest.raises(ValueError):
        extreme_points(system, u.mask("a b"))


def test_convexity_of_the_small_examples():
    # anti-exchange fails in N5 at C = {c}: a and b each lie in the closure of C with the other
    assert anti_exchange_violation(n5()) == (U3.mask("c"), U3.index("a"), U3.index("b"))
    assert not is_convex_geometry(n5())
    assert is_convex_geometry(system_from_basis(cycle_basis()))


@given(oracles.families(max_n=6))
def test_convexity_matches_oracle(data):
    labels, family = data
    assert is_convex_geometry(system_of(labels, family)) == oracles.anti_exchange_holds(labels, family)


@given(oracles.families(max_n=6))
def test_convex_geometries_are_spanned_by_extreme_points(data):
    labels, family = data
    system = system_of(labels, family)
    if is_convex_geometry(system):
        for c in system.closed:
            assert system.phi(extreme_points(system, c)) == c


def reduced_from(data):
    labels, family = data
    return reduce_system(system_of(labels, family))[0]


@given(oracles.families(max_n=6))
def test_refinement_is_a_quasi_order(data):
    system = reduced_from(data)
    n = system.n
    if n > 4:
        sets = [m for m in range(1 << n) if bin(m).count("1") <= 2]
    else:
        sets = list(range(1 << n))
    for x in sets:
        assert ll_refines(system, x, x)
        for y in sets:
            if x & ~y == 0:
                assert ll_refines(system, x, y)
            if ll_refines(system, x, y):
                for z in sets:
                    if ll_refines(system, y, z):
                        assert ll_refines(system, x, z)


@given(oracles.families(max_n=6))
def test_class_minimum_is_the_least_equivalent_set(data):
    system = reduced_from(data)
    for x in range(1 << system.n):
        m = class_minimum(system, x)
        assert is_antichain(system, m)
        assert ll_refines(system, m, x) and ll_refines(system, x, m)
        for y in range(1 << system.n):
            if ll_refines(system, y, x) and ll_refines(system, x, y):
                assert m & ~y == 0


@given(oracles.families(max_n=6))
def test_three_minimal_cover_computations_agree_with_oracle(data):
    system = reduced_from(data)
    u = system.universe
    labels = list(u.names)
    family = {to_set(u, c) for c in system.closed}
    for x in range(system.n):
        literal = minimal_covers(system, x)
        assert minimal_covers_by_class(system, x) == literal
        assert _fast_minimal_covers(system, x) == literal
        expected = oracles.minimal_covers(labels, family, u.names[x])
        assert {to_set(u, c) for c in literal} == set(expected)


@given(oracles.families(max_n=6))
def test_every_cover_refines_down_to_a_minimal_cover(data):
    system = reduced_from(data)
    table = build_cover_table(system)
    for x in range(system.n):
        ms = table.minimal_covers[x]
        for c in covers_of(system, x):
            assert any(ll_refines(system, m, c) for m in ms)
        assert set(table.minimized_covers[x]) <= set(ms)
        for m in ms:
            assert (system.phi(m) >> x) & 1
            assert all(not (system.point_closures[y] >> x) & 1 for y in range(system.n) if (m >> y) & 1)
    d_expected = {(x, y) for x, ms in table.minimal_covers.items() for m in ms for y in range(system.n) if (m >> y) & 1}
    assert table.d_pairs == d_expected


@given(oracles.families(max_n=6))
def test_cover_relation_generates_the_order(data):
    system = reduced_from(data)
    poset = element_poset(system)
    closure = set(poset.cover_relation)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not extra:
            break
        closure |= extra
    assert closure == set(poset.order)
    position = {e: i for i, e in enumerate(poset.linear_extension)}
    assert sorted(position) == list(range(system.n))
    for greater, lesser in poset.order:
        assert position[lesser] < position[greater]


@given(oracles.families(max_n=6))
def test_quasi_closed_matches_definition(data):
    labels, family = data
    system = system_of(labels, family)
    u = system.universe
    for x in range(1 << u.n):
        xs = to_set(u, x)
        expected = oracles.closure(labels, family, xs) != xs and all(
            xs <= z or (z & xs) in family for z in family
        )
        assert is_quasi_closed(system, x) == expected
