"""Monte-Carlo benchmarks: operation counts, hard-case probability, iterations.

Random inputs are drawn i.i.d. uniform on ``[-a, a)`` per component. Trials
are split into fixed blocks of :data:`BLOCK` consecutive trial indices; block
``b`` of degree ``d`` draws from a PCG64 generator seeded with
``SeedSequence(seed, spawn_key=(d, b))``. The trial-to-stream mapping therefore
does not depend on how blocks are spread over worker threads, and all
per-block partial results are integer sums, so the output is identical for
any worker count.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .baselines import _wasson_draper_kernel, _zhang_siegel_kernel
from .fix import _BOX_FEASIBLE, _NO_LOG, _fix_kernel
from .geometry import ParityKind
from .opcount import DIV, LOW, MUL, Algorithm

BLOCK = 4096
MIN_DEGREE = 2
MAX_DEGREE = 64
DEFAULT_TRIALS = 100_000

CSV_HEADER = ("d", "algorithm", "mean_low_ops", "mean_mults", "mean_divs",
              "hard_case_fraction", "mean_iterations")

_ALGO_CODES = {Algorithm.FIX: 0, Algorithm.ZHANG_SIEGEL: 1, Algorithm.WASSON_DRAPER: 2}


@dataclass(frozen=True)
class BenchSpec:
    algorithms: tuple[Algorithm, ...] = tuple(Algorithm)
    degrees: tuple[int, ...] = tuple(range(2, 51))
    half_range: float = 10.0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    workers: int = 1
    kind: ParityKind = ParityKind.EVEN

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.degrees:
            raise ValueError("at least one degree is required")
        for d in self.degrees:
            if not MIN_DEGREE <= d <= MAX_DEGREE:
                raise ValueError(f"degree {d} outside {MIN_DEGREE}..{MAX_DEGREE}")
        if not self.half_range > 0 or not math.isfinite(self.half_range):
            raise ValueError("input half-range must be a positive number")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        object.__setattr__(self, "algorithms", tuple(
            a if isinstance(a, Algorithm) else Algorithm.parse(a) for a in self.algorithms))
        object.__setattr__(self, "kind", ParityKind.parse(self.kind))


@dataclass
class Tally:
    """Integer sums over a set of trials for one ``(d, algorithm)`` cell."""

    trials: int = 0
    divisions: int = 0
    multiplications: int = 0
    low_complexity: int = 0
    hard: int = 0
    hard_iterations: int = 0

    def add(self, other: "Tally") -> None:
        self.trials += other.trials
        self.divisions += other.divisions
        self.multiplications += other.multiplications
        self.low_complexity += other.low_complexity
        self.hard += other.hard
        self.hard_iterations += other.hard_iterations

    @property
    def hard_fraction(self) -> float:
        return self.hard / self.trials

    @property
    def mean_iterations(self) -> float:
        return self.hard_iterations / self.hard if self.hard else float("nan")

    def mean(self, name: str) -> float:
        return getattr(self, name) / self.trials


@dataclass
class BenchResult:
    spec: BenchSpec
    cells: dict[tuple[int, Algorithm], Tally] = field(default_factory=dict)
    hard: dict[int, Tally] = field(default_factory=dict)


def block_inputs(seed: int, d: int, half_range: float, block: int, size: int) -> np.ndarray:
    """The input vectors for trials ``block*BLOCK .. block*BLOCK + size - 1``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(d, block))
    rng = np.random.Generator(np.random.PCG64(ss))
    return rng.uniform(-half_range, half_range, size=(size, d))


@njit(cache=True, nogil=True)
def _count_rows(X, odd, algo, out):
    # out columns: divisions, multiplications, low ops, hard flag, fix iterations
    n, d = X.shape
    z = np.empty(d, dtype=np.float64)
    q = np.empty(d, dtype=np.int64)
    fixes = np.empty(d, dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    scratch = np.zeros(3, dtype=np.int64)
    vlog = np.empty((0, 0), dtype=np.float64)
    for r in range(n):
        x = X[r]
        counts[:] = 0
        if algo == 0:
            iters, term, _ = _fix_kernel(x, odd, z, q, fixes, vlog, counts)
        else:
            iters, term, _ = _fix_kernel(x, odd, z, q, fixes, vlog, scratch)
            if algo == 1:
                _zhang_siegel_kernel(x, odd, counts)
            else:
                _wasson_draper_kernel(x, odd, counts)
        out[r, 0] = counts[DIV]
        out[r, 1] = counts[MUL]
        out[r, 2] = counts[LOW]
        out[r, 3] = 0 if term == _BOX_FEASIBLE else 1
        out[r, 4] = iters


@njit(cache=True, nogil=True)
def _project_rows(X, odd, algo, Z, C):
    n, d = X.shape
    q = np.empty(d, dtype=np.int64)
    fixes = np.empty(d, dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    vlog = np.empty((0, 0), dtype=np.float64)
    for r in range(n):
        counts[:] = 0
        if algo == 0:
            _fix_kernel(X[r], odd, Z[r], q, fixes, vlog, counts)
        elif algo == 1:
            Z[r] = _zhang_siegel_kernel(X[r], odd, counts)
        else:
            Z[r] = _wasson_draper_kernel(X[r], odd, counts)
        C[r] = counts


def project_rows_counted(algo, X, kind=ParityKind.EVEN) -> tuple[np.ndarray, np.ndarray]:
    """Project every row of ``X``; returns ``(Z, counts)`` with ``counts[r] = (div, mul, low)``."""
    algo = algo if isinstance(algo, Algorithm) else Algorithm.parse(algo)
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("expected a nonempty 2-D array of row vectors")
    Z = np.empty_like(X)
    C = np.empty((X.shape[0], 3), dtype=np.int64)
    _project_rows(X, ParityKind.parse(kind) is ParityKind.ODD, _ALGO_CODES[algo], Z, C)
    return Z, C


def _block_tallies(spec: BenchSpec, d: int, block: int, algorithms) -> dict:
    size = min(BLOCK, spec.trials - block * BLOCK)
    X = block_inputs(spec.seed, d, spec.half_range, block, size)
    odd = spec.kind is ParityKind.ODD
    result = {}
    out = np.empty((size, 5), dtype=np.int64)
    for algo in algorithms:
        _count_rows(X, odd, _ALGO_CODES[algo], out)
        sums = out.sum(axis=0)
        hard_iters = int(out[out[:, 3] == 1, 4].sum())
        result[algo] = Tally(size, int(sums[0]), int(sums[1]), int(sums[2]),
                             int(sums[3]), hard_iters)
    return result


def _run(spec: BenchSpec, algorithms) -> dict[tuple[int, Algorithm], Tally]:
    n_blocks = -(-spec.trials // BLOCK)
    tasks = [(d, b) for d in spec.degrees for b in range(n_blocks)]

    def work(task):
        return _block_tallies(spec, task[0], task[1], algorithms)

    if spec.workers == 1:
        partials = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            partials = list(pool.map(work, tasks))
    cells = {(d, a): Tally() for d in spec.degrees for a in algorithms}
    for (d, _), part in zip(tasks, partials):
        for algo, tally in part.items():
            cells[(d, algo)].add(tally)
    return cells


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return f"{value:.6g}"


def _to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


def run_op_bench(spec: BenchSpec) -> BenchResult:
    """Mean operation counts per ``(d, algorithm)``; see :func:`op_bench_csv`."""
    return BenchResult(spec, _run(spec, spec.algorithms))


def op_bench_csv(result: BenchResult) -> str:
    rows = []
    for d in result.spec.degrees:
        for algo in result.spec.algorithms:
            t = result.cells[(d, algo)]
            iters = t.mean_iterations if algo is Algorithm.FIX else None
            rows.append((d, algo.value, _fmt(t.mean("low_complexity")),
                         _fmt(t.mean("multiplications")), _fmt(t.mean("divisions")),
                         _fmt(t.hard_fraction), _fmt(iters)))
    return _to_csv(rows)


def run_probability(spec: BenchSpec) -> BenchResult:
    """Empirical probability that the clamped input falls outside the polytope."""
    cells = _run(spec, (Algorithm.FIX,))
    return BenchResult(spec, cells, {d: cells[(d, Algorithm.FIX)] for d in spec.degrees})


def probability_csv(result: BenchResult) -> str:
    rows = [(d, "", "", "", "", _fmt(t.hard_fraction), "") for d, t in result.hard.items()]
    return _to_csv(rows)


def run_iteration_stats(spec: BenchSpec) -> BenchResult:
    """Mean number of hyperplane projections of the fast algorithm, hard case only."""
    return run_probability(spec)


def iteration_csv(result: BenchResult) -> str:
    rows = [(d, Algorithm.FIX.value, "", "", "", _fmt(t.hard_fraction), _fmt(t.mean_iterations))
            for d, t in result.hard.items()]
    return _to_csv(rows)


def savings_vs_best_baseline(result: BenchResult, total: bool = True) -> dict[int, float]:
    """Relative op savings of the fast algorithm against the cheapest baseline, per ``d``."""
    out = {}
    baselines = [a for a in result.spec.algorithms if a is not Algorithm.FIX]
    for d in result.spec.degrees:
        def cost(algo):
            t = result.cells[(d, algo)]
            ops = t.low_complexity + (t.divisions + t.multiplications if total else 0)
            return ops / t.trials
        best = min(cost(a) for a in baselines)
        out[d] = 1.0 - cost(Algorithm.FIX) / best
    return out


def write_svg(result: BenchResult, path, what: str = "ops") -> None:
    """Plot a benchmark result with matplotlib (optional dependency)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    degrees = list(result.spec.degrees)
    if what == "ops":
        for algo in result.spec.algorithms:
            ax.plot(degrees, [result.cells[(d, algo)].mean("low_complexity") for d in degrees],
                    marker=".", label=algo.value)
        ax.set_ylabel("mean low-complexity operations")
        ax.legend()
    elif what == "prob":
        ax.plot(degrees, [result.hard[d].hard_fraction for d in degrees], marker=".")
        ax.set_ylabel("hard-case probability")
    else:
        ax.plot(degrees, [result.hard[d].mean_iterations for d in degrees], marker=".", label="fix")
        ax.plot(degrees, np.log2(degrees), "--", label="log2(d)")
        ax.set_ylabel("mean iterations (hard case)")
        ax.legend()
    ax.set_xlabel("d")
    ax.set_title(f"inputs uniform on [-{result.spec.half_range:g}, {result.spec.half_range:g})")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
