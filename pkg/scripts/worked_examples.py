"""Build every basis for the bundled example systems and print sizes and properties.

    python3 scripts/worked_examples.py [data-dir]
"""
from __future__ import annotations

import sys
from pathlib import Path

from closurekit import (
    DCycleError,
    aggregate,
    build_d_basis,
    build_dg_canonical,
    build_e_basis,
    build_sigma_delta,
    find_ordered_direct_ordering,
    is_convex_geometry,
    is_ordered_direct,
    optimize_binary,
    reduce_system,
    unit_expansion,
)
from closurekit.io import read_family

DEFAULT_DATA = Path(__file__).resolve().parent.parent / "data"


def describe(path: Path) -> None:
    system = read_family(path)
    reduced, _ = reduce_system(system)
    print(f"== {path.name}: {system.universe.n} elements, {len(system.closed)} closed sets")
    if reduced.universe.n != system.universe.n:
        print(f"   reduced to {reduced.universe.n} elements")
    print(f"   convex geometry: {is_convex_geometry(reduced)}")
    sd = build_sigma_delta(reduced)
    d = build_d_basis(reduced)
    dg = build_dg_canonical(reduced)
    dg_unit = unit_expansion(dg)
    print(f"   sigma_delta: {len(sd)} unit implications")
    print(f"   D-basis: {len(d)} unit, {len(aggregate(d))} aggregated, "
          f"{len(optimize_binary(d, reduced))} after binary optimization; "
          f"ordered direct as listed: {is_ordered_direct(d, reduced)}")
    try:
        e = build_e_basis(reduced)
        print(f"   E-basis: {len(e)} unit implications")
    except DCycleError as exc:
        names = " ".join(reduced.universe.names[i] for i in exc.cycle)
        print(f"   E-basis: undefined, D-cycle through {names}")
    print(f"   canonical basis: {len(dg)} aggregated, {len(dg_unit)} unit")
    for label, basis in (("aggregated", dg), ("unit", dg_unit)):
        order = find_ordered_direct_ordering(basis, reduced, cap=12)
        verdict = "none exists" if order is None else "found"
        print(f"   ordered direct ordering of the {label} canonical basis: {verdict}")


def main() -> None:
    data = Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_DATA
    for path in sorted(data.glob("*.fam")):
        describe(path)


if __name__ == "__main__":
    main()
