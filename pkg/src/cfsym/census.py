"""Parallel exhaustive census of exceptional digit sets.

For each n-subset of {1..N} the kernel enumerates the n!/2 reversal-class
representatives, computes each characteristic number, and early-exits on
the first duplicate (the set is exceptional as soon as one collision
appears).  Work is partitioned statically by the smallest element of the
subset; a thread pool steals whole partitions for tail balance and the
per-partition counts are merged in partition order, so results are
deterministic for any worker count.  Counts are bucketed by the largest
element of the subset, which makes every report point N <= N_max a prefix
sum of one pass.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .core import DigitString
from .errors import DomainError, SizeError

# Refuse above ~5e9 characteristic-number evaluations unless forced; the
# case count grows like N^n.
DEFAULT_BUDGET = 5_000_000_000

CHECKPOINT_FORMAT = "cfsym-census-checkpoint"
CHECKPOINT_VERSION = 1

CSV_COLUMNS = ("n", "N", "total", "f", "delta", "delta_exact", "elapsed_seconds")


@dataclass(frozen=True)
class CensusRow:
    """One report point of the census."""

    n: int
    N: int
    total: int  # binomial(N, n)
    f: int  # exceptional subsets
    delta: Fraction  # f/total, exact
    elapsed: float  # wall seconds for the whole pass


@dataclass(frozen=True)
class ExceptionalSet:
    """An exceptional digit set with one witnessing collision."""

    digits: tuple[int, ...]
    nu: int
    chi_value: int
    witness: tuple[DigitString, DigitString]


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit argument, then CFSYM_WORKERS, then hardware parallelism."""
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("CFSYM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"CFSYM_WORKERS must be an integer, got {env!r}")
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def _pattern_table(n: int) -> np.ndarray:
    """Index patterns of the n!/2 reversal-class representatives, in
    lexicographic order (first index < last index picks one per class)."""
    reps = [p for p in permutations(range(n)) if p[0] < p[-1]]
    return np.array(reps, dtype=np.int64)


def _chi_int(digits: Sequence[int]) -> int:
    pm1, p, qm1, q = 1, 0, 0, 1
    for a in digits:
        pm1, p = p, a * p + pm1
        qm1, q = q, a * q + qm1
    return (p + q) * (qm1 + q)


def _chi_bound(n_max: int, n: int) -> int:
    """Upper bound on chi over subsets of {1..n_max}: q <= prod(a_i + 1)."""
    b = 1
    for a in range(n_max - n + 1, n_max + 1):
        b *= a + 1
    return 4 * b * b


def estimated_evaluations(n: int, n_max: int) -> int:
    return comb(n_max, n) * (factorial(n) // 2)


def _check_budget(n: int, n_max: int, force: bool) -> None:
    est = estimated_evaluations(n, n_max)
    if est > DEFAULT_BUDGET and not force:
        raise SizeError(
            f"census n={n}, N={n_max} needs ~{est:.2e} chi evaluations "
            f"(budget {DEFAULT_BUDGET:.0e}); pass force=True / --force to proceed"
        )


def _validate(n: int, n_max: int) -> None:
    if n < 3:
        raise DomainError(f"census requires n >= 3, got {n}")
    if n_max < n:
        raise DomainError(f"census requires N >= n, got N={n_max}, n={n}")


def default_report_points(n: int, n_max: int) -> list[int]:
    """Standard report grid: multiples of 10 (n=4,5) or 5 (n=6), plus N_max."""
    step = 5 if n == 6 else 10
    points = [N for N in range(step, n_max + 1, step) if N >= n]
    if not points or points[-1] != n_max:
        points.append(n_max)
    return points


# ---------------------------------------------------------------------------
# per-partition kernels

def _count_python(s: int, n_max: int, n: int, patterns: np.ndarray) -> np.ndarray:
    """Big-integer fallback for ranges where int64 could overflow."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    pats = [tuple(row) for row in patterns]
    for rest in combinations(range(s + 1, n_max + 1), n - 1):
        d = (s,) + rest
        seen = set()
        for pat in pats:
            x = _chi_int([d[i] for i in pat])
            if x in seen:
                out[d[-1]] += 1
                break
            seen.add(x)
    return out


def _make_task_runner(n: int, n_max: int) -> Callable[[int], np.ndarray]:
    patterns = _pattern_table(n)
    if _chi_bound(n_max, n) < 2 ** 63:
        from . import _kernels

        # compile once before the pool forks work off this closure
        _kernels.count_for_smallest(1, n + 1, patterns, np.zeros(n + 2, dtype=np.int64))

        def run(s: int) -> np.ndarray:
            out = np.zeros(n_max + 1, dtype=np.int64)
            _kernels.count_for_smallest(s, n_max, patterns, out)
            return out

        return run
    return lambda s: _count_python(s, n_max, n, patterns)


# ---------------------------------------------------------------------------
# checkpointing

def _load_checkpoint(path, n: int, n_max: int) -> dict[int, list[int]]:
    path = Path(path)
    if not path.exists():
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("format") != CHECKPOINT_FORMAT:
        raise DomainError(f"{path} is not a census checkpoint")
    if data.get("version") != CHECKPOINT_VERSION:
        raise DomainError(f"unsupported checkpoint version {data.get('version')}")
    if data.get("n") != n or data.get("n_max") != n_max:
        raise DomainError(
            f"checkpoint {path} is for n={data.get('n')}, N={data.get('n_max')}; "
            f"requested n={n}, N={n_max}"
        )
    return {int(s): list(counts) for s, counts in data["completed"].items()}


def _save_checkpoint(path, n: int, n_max: int, state: dict[int, list[int]]) -> None:
    path = Path(path)
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "n": n,
        "n_max": n_max,
        "completed": {str(s): counts for s, counts in sorted(state.items())},
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# public operations

def _per_max_counts(
    n: int,
    n_max: int,
    workers: Optional[int],
    checkpoint,
    progress: Optional[Callable[[int, int], None]],
) -> np.ndarray:
    run = _make_task_runner(n, n_max)
    tasks = list(range(1, n_max - n + 2))
    state: dict[int, list[int]] = {}
    if checkpoint is not None:
        state = _load_checkpoint(checkpoint, n, n_max)
    pending = [s for s in tasks if s not in state]
    done = len(state)
    total = len(tasks)
    if pending:
        with ThreadPoolExecutor(max_workers=resolve_workers(workers)) as pool:
            futures = {pool.submit(run, s): s for s in pending}
            for fut in as_completed(futures):
                s = futures[fut]
                state[s] = [int(v) for v in fut.result()]
                done += 1
                if checkpoint is not None:
                    _save_checkpoint(checkpoint, n, n_max, state)
                if progress is not None:
                    progress(done, total)
    counts = np.zeros(n_max + 1, dtype=np.int64)
    for s in tasks:  # merge in partition order
        counts += np.asarray(state[s], dtype=np.int64)
    return counts


def census(
    n: int,
    n_max: int,
    report_points: Optional[Sequence[int]] = None,
    workers: Optional[int] = None,
    force: bool = False,
    checkpoint=None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> list[CensusRow]:
    """Exact f(N,n) and delta(N,n) at each report point N <= n_max.

    Deterministic for any worker count.  checkpoint, when given, names a
    JSON file used to resume interrupted runs.
    """
    _validate(n, n_max)
    if report_points is None:
        report_points = default_report_points(n, n_max)
    else:
        report_points = [int(N) for N in report_points]
        if sorted(report_points) != report_points:
            raise DomainError(f"report points must be ascending, got {report_points}")
        for N in report_points:
            if not n <= N <= n_max:
                raise DomainError(f"report point {N} outside [{n}, {n_max}]")
    _check_budget(n, n_max, force)
    start = time.perf_counter()
    counts = _per_max_counts(n, n_max, workers, checkpoint, progress)
    cumulative = np.cumsum(counts)
    elapsed = time.perf_counter() - start
    return [
        CensusRow(
            n=n,
            N=N,
            total=comb(N, n),
            f=int(cumulative[N]),
            delta=Fraction(int(cumulative[N]), comb(N, n)),
            elapsed=elapsed,
        )
        for N in report_points
    ]


def ratio_series(
    n_max: int,
    n: int = 4,
    workers: Optional[int] = None,
    force: bool = False,
) -> list[tuple[int, Fraction]]:
    """The growth series (N, f(N,n)/N) for every N from n to n_max."""
    _validate(n, n_max)
    _check_budget(n, n_max, force)
    counts = _per_max_counts(n, n_max, workers, None, None)
    cumulative = np.cumsum(counts)
    return [(N, Fraction(int(cumulative[N]), N)) for N in range(n, n_max + 1)]


def _witness(digits: tuple[int, ...], patterns: np.ndarray) -> tuple[int, tuple, tuple]:
    """First chi collision between reversal-class representatives, scanning
    in lexicographic order."""
    seen: dict[int, tuple] = {}
    for row in patterns:
        perm = tuple(digits[i] for i in row)
        x = _chi_int(perm)
        if x in seen:
            return x, seen[x], perm
        seen[x] = perm
    raise AssertionError(f"no collision in supposedly exceptional set {digits}")


def list_exceptional(n: int, n_max: int, force: bool = False) -> Iterator[ExceptionalSet]:
    """All exceptional n-subsets of {1..n_max} in ascending lexicographic
    order, each with one witness pair of equal-chi permutations."""
    _validate(n, n_max)
    _check_budget(n, n_max, force)
    patterns = _pattern_table(n)
    for digits in _exceptional_subsets(n, n_max, patterns):
        values = {_chi_int([digits[i] for i in row]) for row in patterns}
        x, first, second = _witness(digits, patterns)
        yield ExceptionalSet(
            digits=digits,
            nu=len(values),
            chi_value=x,
            witness=(DigitString(first), DigitString(second)),
        )


def _exceptional_subsets(n: int, n_max: int, patterns: np.ndarray) -> Iterator[tuple]:
    if _chi_bound(n_max, n) < 2 ** 63:
        from . import _kernels

        for s in range(1, n_max - n + 2):
            cap = 1024
            while True:
                found = np.empty((cap, n), dtype=np.int64)
                m = _kernels.collect_for_smallest(s, n_max, patterns, found)
                if m <= cap:
                    break
                cap = max(2 * cap, m)
            for i in range(m):
                yield tuple(int(v) for v in found[i])
    else:
        pats = [tuple(row) for row in patterns]
        for subset in combinations(range(1, n_max + 1), n):
            seen = set()
            for pat in pats:
                x = _chi_int([subset[i] for i in pat])
                if x in seen:
                    yield subset
                    break
                seen.add(x)


# ---------------------------------------------------------------------------
# table rendering (the census CSV/JSONL schema)

def _row_fields(row: CensusRow, include_elapsed: bool) -> dict:
    return {
        "n": row.n,
        "N": row.N,
        "total": row.total,
        "f": row.f,
        "delta": f"{float(row.delta):.6g}",
        "delta_exact": f"{row.f}/{row.total}",
        "elapsed_seconds": f"{row.elapsed:.3f}" if include_elapsed else "",
    }


def render_census_csv(rows: Sequence[CensusRow], include_elapsed: bool = True) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        fields = _row_fields(row, include_elapsed)
        lines.append(",".join(str(fields[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def render_census_jsonl(rows: Sequence[CensusRow], include_elapsed: bool = True) -> str:
    out = []
    for row in rows:
        fields = _row_fields(row, include_elapsed)
        fields["elapsed_seconds"] = fields["elapsed_seconds"] or None
        out.append(json.dumps(fields, sort_keys=True))
    return "\n".join(out) + "\n"
