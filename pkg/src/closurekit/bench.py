"""Random closure systems and the closure-cost experiment.

Each trial draws a closure system, reduces it, builds the unit
Duquenne-Guigues basis, ``sigma_delta`` and the binary-first D-basis, and
expands one random 3-element input with each: the folklore loop on the
Duquenne-Guigues basis and a single ordered pass on the two direct bases.
Records are bucketed by the number of closed sets.
"""
from __future__ import annotations

import csv
import io
import math
import statistics
import time
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .bases import binary_first, build_d_basis, build_dg_canonical, build_sigma_delta, unit_expansion
from .closure import (
    ForwardChainingState,
    WildState,
    folklore_closure,
    forward_chaining_closure,
    ordered_iteration,
    wild_closure,
)
from .core import Basis, ClosureSystem, Universe, popcount, system_from_generators
from .io import write_family
from .reduction import reduce_system

DG_FOLKLORE = "dg-unit-folklore"
SIGMA_DELTA = "sigma-delta"
D_BASIS = "d-basis"

CHECKS = "implications-checked"
PASSES = "passes"
GROWTH = "closure-growth"
WALL_TIME = "wall-time"

TIMED_ALGORITHMS = (
    "ordered",
    "forward-preprocessed",
    "forward",
    "wild-preprocessed",
    "wild",
)

CSV_HEADER = ("domain", "closed_sets_bucket", "basis", "metric", "mean", "stddev", "trials", "seed")


@dataclass(frozen=True)
class GeneratorConfig:
    domain_size: int
    seed: int
    trials: int = 1000
    generator_subsets: tuple[int, int] = (3, 8)
    input_size: int = 3

    def __post_init__(self):
        if self.domain_size < 2:
            raise ValueError("domain_size must be at least 2")
        lo, hi = self.generator_subsets
        if lo < 1 or lo > hi:
            raise ValueError("generator_subsets must be a non-empty range of positive counts")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class BenchRecord:
    domain_size: int
    closed_set_count: int
    basis_kind: str
    metric: str
    value: float
    input_size: int
    trial: int = 0

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("record value must be non-negative")


def bucket_of(closed_set_count: int, width: int = 5) -> int:
    """Upper edge of the width-5 bucket holding ``closed_set_count`` (1..5 -> 5, 6..10 -> 10)."""
    return width * math.ceil(closed_set_count / width)


def trial_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent per-trial streams split from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def random_proper_subset(n: int, rng: np.random.Generator) -> int:
    """Each element with probability 1/2; the empty set and the whole domain are redrawn."""
    full = (1 << n) - 1
    weights = 1 << np.arange(n, dtype=np.int64)
    while True:
        mask = int(weights[rng.random(n) < 0.5].sum())
        if mask not in (0, full):
            return mask


def generate_system(config: GeneratorConfig, rng: np.random.Generator) -> ClosureSystem:
    """Moore completion of k random subsets plus the empty set and the domain."""
    lo, hi = config.generator_subsets
    k = int(rng.integers(lo, hi + 1))
    universe = Universe.of_size(config.domain_size)
    return system_from_generators(universe, [random_proper_subset(config.domain_size, rng) for _ in range(k)])


def random_input(n: int, size: int, rng: np.random.Generator) -> int:
    picks = rng.choice(n, size=min(size, n), replace=False)
    return sum(1 << int(i) for i in picks)


def draw_trial(config: GeneratorConfig, rng: np.random.Generator) -> tuple[ClosureSystem, int]:
    """One trial's system and its random input, in the order the experiment draws them."""
    system = generate_system(config, rng)
    return system, random_input(config.domain_size, config.input_size, rng)


@dataclass(frozen=True)
class TrialBases:
    """The three unit bases built on the reduced form of one system."""

    system: ClosureSystem
    dg_unit: Basis
    sigma_delta: Basis
    d_basis: Basis


def build_trial_bases(system: ClosureSystem) -> tuple[TrialBases, Callable[[int], int]]:
    reduced, rmap = reduce_system(system)
    bases = TrialBases(
        reduced,
        unit_expansion(build_dg_canonical(reduced)),
        build_sigma_delta(reduced),
        binary_first(build_d_basis(reduced)),
    )
    return bases, rmap.project


def measure_checks(
    bases: TrialBases, x: int, domain: int, input_size: int, trial: int = 0
) -> list[BenchRecord]:
    """Checks, folklore passes and the number of elements the closure adds, for one input.

    Every closure is verified against the family.
    """
    system = bases.system
    expected = system.phi(x)
    count = len(system.closed)
    dg = folklore_closure(bases.dg_unit, x)
    sd = ordered_iteration(bases.sigma_delta, x)
    d = ordered_iteration(bases.d_basis, x)
    for name, result in ((DG_FOLKLORE, dg), (SIGMA_DELTA, sd), (D_BASIS, d)):
        if result.closure != expected:
            raise RuntimeError(f"{name} closure disagrees with the family on input {x:#x}")
    growth = popcount(expected & ~x)
    return [
        BenchRecord(domain, count, DG_FOLKLORE, CHECKS, dg.checks, input_size, trial),
        BenchRecord(domain, count, DG_FOLKLORE, PASSES, dg.passes, input_size, trial),
        BenchRecord(domain, count, DG_FOLKLORE, GROWTH, growth, input_size, trial),
        BenchRecord(domain, count, SIGMA_DELTA, CHECKS, sd.checks, input_size, trial),
        BenchRecord(domain, count, D_BASIS, CHECKS, d.checks, input_size, trial),
    ]


def _median_us(fn: Callable[[], object], repetitions: int) -> float:
    samples = []
    clock = time.perf_counter_ns
    for _ in range(repetitions):
        start = clock()
        fn()
        samples.append(clock() - start)
    return statistics.median(samples) / 1000.0


def measure_timing(basis: Basis, x: int, repetitions: int = 1000) -> dict[str, float]:
    """Median microseconds per closure for each algorithm on an ordered direct basis.

    The ``-preprocessed`` variants reuse prebuilt clause lists; the plain
    variants rebuild them on every call.
    """
    if repetitions < 1000:
        raise ValueError("timing needs at least 1000 repetitions")
    fc_state = ForwardChainingState.build(basis)
    wild_state = WildState.build(basis)
    return {
        "ordered": _median_us(lambda: ordered_iteration(basis, x), repetitions),
        "forward-preprocessed": _median_us(lambda: forward_chaining_closure(basis, x, fc_state), repetitions),
        "forward": _median_us(lambda: forward_chaining_closure(basis, x), repetitions),
        "wild-preprocessed": _median_us(lambda: wild_closure(basis, x, wild_state), repetitions),
        "wild": _median_us(lambda: wild_closure(basis, x), repetitions),
    }


def run_experiment(
    config: GeneratorConfig,
    timing_systems: int = 0,
    timing_repetitions: int = 1000,
) -> list[BenchRecord]:
    """One record per basis kind and metric per trial.

    With ``timing_systems > 0`` the first that many trials also get wall-time
    records for the five closure algorithms run on the D-basis with a random
    proper subset as input.
    """
    records: list[BenchRecord] = []
    for t, rng in enumerate(trial_rngs(config.seed, config.trials)):
        original, x_original = draw_trial(config, rng)
        bases, project = build_trial_bases(original)
        records += measure_checks(bases, project(x_original), config.domain_size, config.input_size, t)
        if t < timing_systems:
            n = bases.system.universe.n
            x = random_proper_subset(n, rng) if n >= 2 else 0
            count = len(bases.system.closed)
            for name, micros in measure_timing(bases.d_basis, x, timing_repetitions).items():
                records.append(BenchRecord(config.domain_size, count, name, WALL_TIME, micros, popcount(x), t))
    return records


@dataclass(frozen=True)
class SummaryRow:
    domain: int
    closed_sets_bucket: int
    basis: str
    metric: str
    mean: float
    stddev: float
    trials: int
    seed: int


def summarize(records: Iterable[BenchRecord], seed: int) -> list[SummaryRow]:
    """Mean and sample standard deviation per (domain, bucket, basis, metric)."""
    groups: dict[tuple[int, int, str, str], list[float]] = defaultdict(list)
    for r in records:
        groups[(r.domain_size, bucket_of(r.closed_set_count), r.basis_kind, r.metric)].append(r.value)
    rows = []
    for (domain, bucket, basis, metric), values in sorted(groups.items()):
        sd = statistics.stdev(values) if len(values) > 1 else 0.0
        rows.append(SummaryRow(domain, bucket, basis, metric, statistics.fmean(values), sd, len(values), seed))
    return rows


def overall_means(records: Iterable[BenchRecord], metric: str = CHECKS) -> dict[str, float]:
    groups: dict[str, list[float]] = defaultdict(list)
    for r in records:
        if r.metric == metric:
            groups[r.basis_kind].append(r.value)
    return {k: statistics.fmean(v) for k, v in groups.items()}


def rows_to_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            (r.domain, r.closed_sets_bucket, r.basis, r.metric, f"{r.mean:.4f}", f"{r.stddev:.4f}", r.trials, r.seed)
        )
    return buf.getvalue()


def run_bench(
    domains: Iterable[int],
    trials: int,
    seed: int,
    timing_systems: int = 0,
) -> list[SummaryRow]:
    """Summaries for several domain sizes; each domain gets its own stream derived from ``seed``."""
    rows: list[SummaryRow] = []
    for domain in domains:
        domain_seed = _domain_seed(seed, domain)
        config = GeneratorConfig(domain_size=domain, seed=domain_seed, trials=trials)
        rows += summarize(run_experiment(config, timing_systems), seed)
    return rows


def _domain_seed(seed: int, domain: int) -> int:
    return int(np.random.SeedSequence([seed, domain]).generate_state(1, np.uint64)[0])


def generate_files(domain: int, count: int, seed: int, out_dir, prefix: Optional[str] = None) -> list[Path]:
    """Write ``count`` generated systems as ``.fam`` files; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = GeneratorConfig(domain_size=domain, seed=seed, trials=count)
    stem = prefix or f"n{domain}-s{seed}"
    width = len(str(max(count - 1, 0)))
    paths = []
    for t, rng in enumerate(trial_rngs(seed, count)):
        path = out / f"{stem}-{t:0{width}d}.fam"
        write_family(path, generate_system(config, rng))
        paths.append(path)
    return paths
