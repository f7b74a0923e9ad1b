"""Command-line front end: ``closurekit <subcommand> ...``.

Exit status is 0 on success, 1 when a check fails or a requested object does
not exist (the reason is printed), and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import bench
from .bases import (
    DCycleError,
    SearchCapExceeded,
    aggregate,
    binary_first,
    build_d_basis,
    build_d_plus,
    build_dg_canonical,
    build_e_basis,
    build_sigma_delta,
    d_cycles,
    d_ranks,
    find_ordered_direct_ordering,
    ordered_direct_witness,
    redundant_implications,
    unit_expansion,
)
from .closure import ALGORITHMS, ordered_iteration
from .core import (
    AGGREGATED,
    UNIT,
    Basis,
    ClosureSystem,
    NotReduced,
    UniverseTooLarge,
    iter_bits,
    system_from_basis,
)
from .io import ParseError, format_basis, format_family, parse_basis, parse_family
from .reduction import is_reduced, is_standard, reduce_system, standardize_system
from .structure import build_cover_table, element_poset, is_convex_geometry


class CommandFailed(Exception):
    """A semantic failure: exit status 1."""


# --------------------------------------------------------------------------
# input helpers


def _read_text(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        return Path(path).read_text(), path
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", 0, None, path) from None


def _kind_of(path: str, text: str, override: Optional[str]) -> str:
    if override:
        return override
    suffix = Path(path).suffix.lower()
    if suffix in (".imp", ".fam"):
        return suffix[1:]
    return "imp" if "->" in text else "fam"


def _load(path: str, fmt: Optional[str], compact: bool = False) -> tuple[Optional[Basis], ClosureSystem]:
    """Read a basis or a family; returns (basis or None, closure system)."""
    text, source = _read_text(path)
    if _kind_of(path, text, fmt) == "imp":
        basis = parse_basis(text, compact=compact, source=source)
        return basis, system_from_basis(basis)
    return None, parse_family(text, compact=compact, source=source)


def _load_basis(path: str, fmt: Optional[str], compact: bool = False) -> Basis:
    text, source = _read_text(path)
    if _kind_of(path, text, fmt) != "imp":
        raise ParseError("expected an implication file", 0, None, source)
    return parse_basis(text, compact=compact, source=source)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _labels(system_or_basis, mask: int) -> list[str]:
    return system_or_basis.universe.labels(mask)


def _parse_domains(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            domains = list(range(int(lo), int(hi) + 1))
        else:
            domains = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad domain list {text!r}; use 5..8 or 6,7") from None
    if not domains:
        raise argparse.ArgumentTypeError("empty domain list")
    return domains


# --------------------------------------------------------------------------
# subcommands


def cmd_closure(args) -> int:
    basis, system = _load(args.basis or args.system, args.format, args.compact)
    universe = system.universe
    try:
        x = universe.cmask(args.set) if args.compact else universe.mask(args.set)
    except KeyError as exc:
        raise ParseError("label not in universe", 0, str(exc.args[0]), "--set") from None
    if args.algorithm == "phi" or basis is None:
        if args.algorithm not in ("phi", "folklore") and basis is None:
            raise CommandFailed(f"--algorithm {args.algorithm} needs --basis")
        closure, checks, passes = system.phi(x), None, None
    else:
        closure, checks, passes = ALGORITHMS[args.algorithm](basis, x)
    if args.json:
        doc = {"input": universe.labels(x), "closure": universe.labels(closure), "algorithm": args.algorithm}
        if checks is not None:
            doc.update(checks=checks, passes=passes)
        print(json.dumps(doc))
    else:
        print(universe.format(closure))
    return 0


def _rank_order(basis: Basis, system: ClosureSystem) -> Basis:
    ranks = d_ranks(system, build_d_basis(system)).d_rank

    def top(imp):
        return max((ranks[i] for i in iter_bits(imp.premise)), default=0)

    return basis.replace(basis.binary_part() + sorted(basis.nonbinary_part(), key=top))


def cmd_basis(args) -> int:
    _, system = _load(args.source, args.format, args.compact)
    args.cycle_universe = system.universe
    kind = args.kind
    if kind == "delta":
        basis = build_sigma_delta(system)
    elif kind == "d":
        basis = build_d_basis(system)
    elif kind == "d-plus":
        plus, sequence = build_d_plus(build_d_basis(system), system)
        basis = sequence.as_basis() if args.sequence else plus
    elif kind == "e":
        basis = build_e_basis(system, force=args.force)
    else:
        basis = build_dg_canonical(system)
    if args.order == "binary-first":
        basis = binary_first(basis)
    elif args.order == "rank":
        basis = _rank_order(basis, system)
    if args.form == AGGREGATED:
        basis = aggregate(basis)
    elif args.form == UNIT:
        basis = unit_expansion(basis)
    if args.report_redundant:
        redundant = redundant_implications(basis)
        print("redundant: " + (" ".join(str(i + 1) for i in redundant) or "none"), file=sys.stderr)
    if args.json:
        doc = {
            "kind": kind,
            "form": basis.form,
            "universe": list(basis.universe.names),
            "implications": [
                {"premise": _labels(basis, imp.premise), "conclusion": _labels(basis, imp.conclusion)}
                for imp in basis
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(format_basis(basis), args.out)
    return 0


def cmd_reduce(args) -> int:
    _, system = _load(args.source, args.format, args.compact)
    reduced, rmap = reduce_system(system)
    maps = [rmap]
    if args.standard:
        reduced, smap = standardize_system(reduced)
        maps.append(smap)
    _emit(format_family(reduced), args.out)
    if args.map:
        Path(args.map).write_text(_format_map(system, maps))
    return 0


def _format_map(original: ClosureSystem, maps) -> str:
    """One line per original element: ``label -> labels`` of the output elements that replace it."""
    final_names = _final_names(maps)
    lines = []
    for i, name in enumerate(original.universe.names):
        x = 1 << i
        for m in maps:
            x = m.project(x)
        target = " ".join(final_names[j] for j in iter_bits(x)) or "{}"
        lines.append(f"{name} -> {target}")
    return "\n".join(lines) + "\n"


def _final_names(maps) -> list[str]:
    names = list(maps[0].original.names)
    for m in maps:
        names = [names[k] for k in m.kept]
    return names


def cmd_analyze(args) -> int:
    _, system = _load(args.source, args.format, args.compact)
    u = system.universe
    doc: dict = {
        "universe": list(u.names),
        "closed_sets": len(system.closed),
        "reduced": is_reduced(system),
        "standard": is_standard(system),
        "convex_geometry": is_convex_geometry(system),
    }
    if doc["reduced"]:
        table = build_cover_table(system)
        poset = element_poset(system)
        cycle = d_cycles(table)
        doc["minimal_covers"] = {u.names[x]: [u.labels(c) for c in cs] for x, cs in table.minimal_covers.items()}
        doc["minimized_covers"] = {
            u.names[x]: [u.labels(c) for c in cs] for x, cs in table.minimized_covers.items()
        }
        doc["d_relation"] = sorted([u.names[a], u.names[b]] for a, b in table.d_pairs)
        doc["e_relation"] = sorted([u.names[a], u.names[b]] for a, b in table.e_pairs)
        doc["poset_covers"] = sorted([u.names[a], u.names[b]] for a, b in poset.cover_relation)
        doc["linear_extension"] = [u.names[i] for i in poset.linear_extension]
        doc["d_cycle"] = [u.names[i] for i in cycle] if cycle else None
        if cycle is None:
            ranks = d_ranks(system, build_d_basis(system, table)).d_rank
            doc["d_rank"] = {u.names[i]: r for i, r in sorted(ranks.items())}
    if args.json:
        print(json.dumps(doc, indent=2))
        return 0
    print(f"universe: {' '.join(u.names)}")
    print(f"closed sets: {doc['closed_sets']}")
    for key in ("reduced", "standard", "convex_geometry"):
        print(f"{key.replace('_', ' ')}: {'yes' if doc[key] else 'no'}")
    if not doc["reduced"]:
        print("cover analysis needs a reduced system; run `reduce` first")
        return 0

    def sets(cs):
        return ", ".join("{" + " ".join(c) + "}" for c in cs) or "none"

    print("minimal covers M(x):")
    for x, cs in doc["minimal_covers"].items():
        print(f"  {x}: {sets(cs)}")
    print("closure-minimal covers M*(x):")
    for x, cs in doc["minimized_covers"].items():
        print(f"  {x}: {sets(cs)}")
    print("D relation: " + (" ".join(f"{a}D{b}" for a, b in doc["d_relation"]) or "empty"))
    print("E relation: " + (" ".join(f"{a}E{b}" for a, b in doc["e_relation"]) or "empty"))
    print("poset covers (greater > lesser): " + (" ".join(f"{a}>{b}" for a, b in doc["poset_covers"]) or "none"))
    print("linear extension (bottom up): " + " ".join(doc["linear_extension"]))
    if doc["d_cycle"]:
        print("D-cycle: " + " ".join(doc["d_cycle"]))
    else:
        print("D-rank: " + " ".join(f"{x}:{r}" for x, r in doc["d_rank"].items()))
    return 0


def cmd_verify(args) -> int:
    basis = _load_basis(args.ordered_direct, args.format, args.compact)
    _, system = _load(args.system, None, args.compact)
    if basis.universe != system.universe:
        basis = _load_basis_on(args.ordered_direct, system, args.compact)
    witness = ordered_direct_witness(basis, system)
    if witness is None:
        print("ordered direct: yes")
        return 0
    u = system.universe
    got = ordered_iteration(basis, witness).closure
    print("ordered direct: no")
    print(f"witness: {u.format(witness)}")
    print(f"one pass gives: {u.format(got)}")
    print(f"closure is: {u.format(system.phi(witness))}")
    return 1


def _load_basis_on(path: str, system: ClosureSystem, compact: bool) -> Basis:
    text, source = _read_text(path)
    return parse_basis(text, universe=system.universe, compact=compact, source=source)


def cmd_order(args) -> int:
    basis = _load_basis(args.search, args.format, args.compact)
    if args.system:
        _, system = _load(args.system, None, args.compact)
        if basis.universe != system.universe:
            basis = _load_basis_on(args.search, system, args.compact)
    else:
        system = system_from_basis(basis)
    try:
        order = find_ordered_direct_ordering(basis, system, cap=args.cap)
    except SearchCapExceeded as exc:
        raise CommandFailed(f"{exc}; raise --cap to search anyway") from None
    if order is None:
        print("no ordering of this basis is ordered direct", file=sys.stderr)
        return 1
    _emit(format_basis(basis.replace([basis[i] for i in order])), args.out)
    return 0


def cmd_generate(args) -> int:
    paths = bench.generate_files(args.domain, args.count, args.seed, args.out_dir)
    for p in paths:
        print(p)
    return 0


def cmd_bench(args) -> int:
    rows = bench.run_bench(args.domains, args.trials, args.seed, timing_systems=args.timing)
    _emit(bench.rows_to_csv(rows), args.out)
    return 0


# --------------------------------------------------------------------------
# parser


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("imp", "fam"), help="override the format inferred from the extension")
    p.add_argument("--compact", action="store_true", help="labels are single characters written without spaces")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="closurekit", description="Finite closure systems and implicational bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", help="closure of one set")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--basis", help=".imp file")
    src.add_argument("--system", help=".fam file")
    p.add_argument("--set", required=True, help='labels separated by spaces, "{}" for the empty set')
    p.add_argument("--algorithm", choices=(*ALGORITHMS, "phi"), default="folklore")
    p.add_argument("--json", action="store_true")
    _add_input_flags(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("basis", help="build a basis of a closure system")
    p.add_argument("--kind", choices=("delta", "d", "d-plus", "e", "dg"), required=True)
    p.add_argument("--from", dest="source", required=True, help=".fam or .imp file, '-' for stdin")
    p.add_argument("--form", choices=(UNIT, AGGREGATED), help="default: the construction's natural form")
    p.add_argument("--order", choices=("none", "binary-first", "rank"), default="none")
    p.add_argument("--force", action="store_true", help="build the E-basis even when a D-cycle exists")
    p.add_argument("--sequence", action="store_true", help="with d-plus: print the ordered direct sequence")
    p.add_argument("--report-redundant", action="store_true", help="list redundant implications on stderr")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    _add_input_flags(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("reduce", help="reduced (and optionally standard) form of a system")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--standard", action="store_true")
    p.add_argument("--out")
    p.add_argument("--map", help="write 'original -> output elements' lines here")
    _add_input_flags(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("analyze", help="covers, D and E relations, element order")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--json", action="store_true")
    _add_input_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check that one ordered pass computes every closure")
    p.add_argument("--ordered-direct", required=True, help=".imp file, '-' for stdin")
    p.add_argument("--system", required=True, help=".fam or .imp file defining the closure system")
    _add_input_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("order", help="search for an ordered direct ordering")
    p.add_argument("--search", required=True, help=".imp file to reorder")
    p.add_argument("--system", help="closure system (default: the one the basis generates)")
    p.add_argument("--cap", type=int, default=10, help="refuse bases longer than this")
    p.add_argument("--out")
    _add_input_flags(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("generate", help="write random closure systems as .fam files")
    p.add_argument("--domain", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="closure-cost experiment, CSV summary")
    p.add_argument("--domains", type=_parse_domains, default=[5, 6, 7, 8], help="e.g. 5..8 or 6,7")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument(
        "--timing", type=int, nargs="?", const=20, default=0, metavar="SYSTEMS",
        help="also time the closure algorithms on the first SYSTEMS systems per domain (default 20)",
    )
    p.set_defaults(func=cmd_bench)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    with warnings.catch_warnings():
        warnings.showwarning = _show_warning
        return _dispatch(args)


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DCycleError as exc:
        names = args.cycle_universe.names if hasattr(args, "cycle_universe") else None
        cycle = " ".join(names[i] for i in exc.cycle) if names else str(exc.cycle)
        print(f"error: D-cycle through {cycle}; E-basis and rank order need an acyclic D relation", file=sys.stderr)
        return 1
    except (CommandFailed, NotReduced, UniverseTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
