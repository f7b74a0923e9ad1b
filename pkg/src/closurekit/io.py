"""Reading and writing ``.imp`` (implications) and ``.fam`` (closed families).

``.imp``: one ``LHS -> RHS`` per line, labels separated by whitespace, ``{}``
for an empty side.  ``.fam``: one closed set per line, ``{}`` for the empty
set.  Both accept ``#`` comments and an optional first directive
``universe: a b c`` fixing the element order; otherwise the universe is the
union of all labels in natural order.
"""
from __future__ import annotations

import warnings
from pathlib import Path
from typing import Iterable, Optional

from .core import AGGREGATED, UNIT, Basis, ClosureSystem, Implication, Universe


class ParseError(ValueError):
    def __init__(self, message: str, line: int, token: Optional[str] = None, source: str = "<text>"):
        self.line = line
        self.token = token
        where = f"{source}:{line}"
        if token is not None:
            message = f"{message} (token {token!r})"
        super().__init__(f"{where}: {message}")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _tokens(side: str, compact: bool) -> list[str]:
    toks = [t for t in side.split() if t != "{}"]
    if compact:
        toks = [ch for t in toks for ch in t]
    return toks


def _split_universe(text: str, source: str):
    universe_line = None
    body = []
    for lineno, line in _lines(text):
        if line.lower().startswith("universe:"):
            if body or universe_line is not None:
                raise ParseError("universe directive must be the first entry", lineno, "universe:", source)
            universe_line = (lineno, line.split(":", 1)[1].split())
        else:
            body.append((lineno, line))
    return universe_line, body


def _make_universe(universe_line, seen: Iterable[str], source: str) -> Universe:
    if universe_line is None:
        return Universe.from_labels(seen)
    lineno, names = universe_line
    try:
        return Universe(tuple(names))
    except ValueError as exc:
        raise ParseError(str(exc), lineno, None, source) from None


def _lookup(universe: Universe, token: str, lineno: int, source: str) -> int:
    try:
        return 1 << universe.index(token)
    except KeyError:
        raise ParseError("label not in declared universe", lineno, token, source) from None


def parse_basis(
    text: str,
    universe: Optional[Universe] = None,
    compact: bool = False,
    form: Optional[str] = None,
    source: str = "<text>",
) -> Basis:
    """Parse ``.imp`` text.  Line order is kept: it is the basis order.

    ``form=None`` gives a unit basis when every conclusion is a singleton and an
    aggregated one otherwise.  Conclusion labels repeated in the premise are
    dropped; a line whose conclusion becomes empty is skipped with a warning.
    """
    universe_line, body = _split_universe(text, source)
    rows = []
    for lineno, line in body:
        if line.count("->") != 1:
            bad = line.split()[0] if "->" not in line else "->"
            raise ParseError("expected exactly one '->'", lineno, bad, source)
        lhs, rhs = line.split("->")
        rows.append((lineno, _tokens(lhs, compact), _tokens(rhs, compact)))
    if universe is None:
        universe = _make_universe(universe_line, (t for _, l, r in rows for t in l + r), source)
    imps = []
    for lineno, lhs, rhs in rows:
        premise = 0
        for tok in lhs:
            premise |= _lookup(universe, tok, lineno, source)
        conclusion = 0
        for tok in rhs:
            conclusion |= _lookup(universe, tok, lineno, source)
        conclusion &= ~premise
        if not conclusion:
            warnings.warn(f"{source}:{lineno}: trivial implication skipped")
            continue
        imps.append(Implication(premise, conclusion))
    if form is None:
        form = UNIT if all(imp.is_unit for imp in imps) else AGGREGATED
    if form == UNIT:
        imps = [u for imp in imps for u in imp.units()]
    return Basis(universe, tuple(imps), form)


def parse_family(
    text: str, universe: Optional[Universe] = None, compact: bool = False, source: str = "<text>"
) -> ClosureSystem:
    """Parse ``.fam`` text; a family that is not a Moore family gets completed."""
    universe_line, body = _split_universe(text, source)
    rows = []
    for lineno, line in body:
        if "->" in line:
            raise ParseError("implication in a family file", lineno, "->", source)
        rows.append((lineno, _tokens(line, compact)))
    if universe is None:
        universe = _make_universe(universe_line, (t for _, toks in rows for t in toks), source)
    sets = []
    for lineno, toks in rows:
        mask = 0
        for tok in toks:
            mask |= _lookup(universe, tok, lineno, source)
        sets.append(mask)
    system = ClosureSystem.from_family(universe, sets)
    if system.completed:
        warnings.warn(f"{source}: family was not intersection-closed; completed")
    return system


def format_basis(basis: Basis) -> str:
    lines = ["universe: " + " ".join(basis.universe.names)]
    lines += basis.format()
    return "\n".join(lines) + "\n"


def format_family(system: ClosureSystem) -> str:
    lines = ["universe: " + " ".join(system.universe.names)]
    lines += [system.universe.format(c) for c in system.closed]
    return "\n".join(lines) + "\n"


def read_basis(path, **kwargs) -> Basis:
    path = Path(path)
    return parse_basis(path.read_text(), source=str(path), **kwargs)


def read_family(path, **kwargs) -> ClosureSystem:
    path = Path(path)
    return parse_family(path.read_text(), source=str(path), **kwargs)


def write_basis(path, basis: Basis) -> None:
    Path(path).write_text(format_basis(basis))


def write_family(path, system: ClosureSystem) -> None:
    Path(path).write_text(format_family(system))


def family_compact(universe: Universe, text: str) -> ClosureSystem:
    """``family_compact(U, "{} 1 2 12 123")``: whitespace-separated compact sets."""
    sets = [0 if tok in ("{}", "∅") else universe.cmask(tok) for tok in text.replace(",", " ").split()]
    return ClosureSystem.from_family(universe, sets)
