"""Reading and writing implication and family files."""
import pytest

from closurekit import AGGREGATED, UNIT, Universe
from closurekit.io import (
    ParseError,
    format_basis,
    format_family,
    parse_basis,
    parse_family,
    read_basis,
    read_family,
    write_basis,
    write_family,
)

from support import ex66, family_of, pairs


def test_parse_basis_keeps_line_order_and_comments():
    text = "# header\n5 -> 4\n\n1 4 -> 3   # trailing\n{} -> 2\n"
    basis = parse_basis(text)
    assert basis.universe.names == ("1", "2", "3", "4", "5")
    assert basis.format() == ["5 -> 4", "1 4 -> 3", "{} -> 2"]
    assert basis.form == UNIT


def test_parse_basis_form_selection():
    assert parse_basis("1 -> 2 3\n").form == AGGREGATED
    unit = parse_basis("1 -> 2 3\n", form=UNIT)
    assert len(unit) == 2


def test_universe_directive_fixes_order():
    basis = parse_basis("universe: c b a\na -> b\n")
    assert basis.universe.names == ("c", "b", "a")


def test_undeclared_label_is_a_parse_error_with_line_and_token():
    with pytest.raises(ParseError) as info:
        parse_basis("universe: a b\na -> b\nb -> z\n", source="f.imp")
    assert info.value.line == 3
    assert info.value.token == "z"
    assert "f.imp:3" in str(info.value)


def test_missing_arrow_is_a_parse_error():
    with pytest.raises(ParseError) as info:
        parse_basis("a b c\n")
    assert info.value.line == 1
    with pytest.raises(ParseError):
        parse_basis("a -> b -> c\n")


def test_late_universe_directive_is_rejected():
    with pytest.raises(ParseError):
        parse_basis("a -> b\nuniverse: a b\n")


def test_trivial_implication_is_skipped_with_warning():
    with pytest.warns(UserWarning):
        basis = parse_basis("a -> a\nb -> a\n")
    assert len(basis) == 1


def test_conclusion_labels_in_premise_are_dropped():
    basis = parse_basis("a b -> b c\n")
    assert basis.format() == ["a b -> c"]


def test_family_parse_completes_and_warns():
    with pytest.warns(UserWarning):
        system = parse_family("1 2\n2 3\n")
    assert system.completed
    assert frozenset({"2"}) in family_of(system)


def test_family_rejects_implications():
    with pytest.raises(ParseError):
        parse_family("1 -> 2\n")


def test_compact_labels():
    basis = parse_basis("14 -> 3\n", compact=True)
    assert basis.universe.names == ("1", "3", "4")
    system = parse_family("{}\n12\n123\n", compact=True)
    assert len(system.closed) == 3


def test_round_trips(tmp_path):
    system = ex66()
    path = tmp_path / "ex66.fam"
    write_family(path, system)
    again = read_family(path)
    assert family_of(again) == family_of(system)
    assert format_family(again) == format_family(system)

    basis = parse_basis("universe: 1 2 3 4 5 6\n5 -> 3\n3 4 -> 2 5\n")
    bpath = tmp_path / "b.imp"
    write_basis(bpath, basis)
    reread = read_basis(bpath)
    assert reread.implications == basis.implications
    assert format_basis(reread) == format_basis(basis)
    assert pairs(reread) == pairs(basis)


def test_universe_line_is_always_written():
    basis = parse_basis("b -> a\n", universe=Universe(("a", "b", "c")))
    assert format_basis(basis).splitlines()[0] == "universe: a b c"
