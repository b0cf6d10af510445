"""Per-iteration observables, run summaries, and cross-run averaging.

The trace of a run is one record per completed iteration:

  iteration      1-based round counter
  n_total        sum of all memory sizes across the population
  n_diff         number of distinct words held anywhere
  sr             successful members / group size of this round
  group_size     realised group size of this round
  n_transmitted  how many word broadcasts the round performed

Traces persist as CSV with exactly that header. Averaged traces (one per
experiment point) share the schema but carry float columns; runs shorter
than the longest one are padded with their absorbed state (n_total=M,
n_diff=1, sr=1) so late-iteration means are not biased toward the slow runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyTraceError

TRACE_FIELDS = ("iteration", "n_total", "n_diff", "sr", "group_size",
                "n_transmitted")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    n_total: int
    n_diff: int
    sr: float
    group_size: int
    n_transmitted: int


@dataclass(frozen=True)
class RunSummary:
    n_total_max: int
    n_diff_max: int
    n_iter_cvg: Optional[int]   # None when the run hit the cap unconverged
    converged: bool
    converged_word: Optional[int]
    iterations: int


@dataclass(frozen=True)
class AggregateStats:
    """Mean / sample standard deviation of the three run metrics.

    n_iter_cvg statistics cover converged runs only; capped runs are counted
    in n_runs and reflected in convergence_rate instead of polluting the mean.
    """

    n_runs: int
    converged_runs: int
    convergence_rate: float
    n_total_max_mean: float
    n_total_max_std: float
    n_diff_max_mean: float
    n_diff_max_std: float
    n_iter_cvg_mean: Optional[float]
    n_iter_cvg_std: Optional[float]


def snapshot(pop, outcome, iteration: int) -> TraceRecord:
    """One trace record from the population counters and the round outcome."""
    return TraceRecord(
        iteration=iteration,
        n_total=pop.total_words,
        n_diff=pop.distinct_words,
        sr=outcome.sr,
        group_size=outcome.group_size,
        n_transmitted=len(outcome.transmitted),
    )


def summarize(records, m: int, converged_word: Optional[int] = None) -> RunSummary:
    """Collapse a trace into its maxima and convergence point.

    Convergence at iteration t is read off the records: n_total == M with a
    single distinct word forces every memory to hold exactly that word.
    """
    if not records:
        raise EmptyTraceError("cannot summarise a run with no iterations")
    n_iter = None
    for r in records:
        if r.n_total == m and r.n_diff == 1:
            n_iter = r.iteration
            break
    return RunSummary(
        n_total_max=max(r.n_total for r in records),
        n_diff_max=max(r.n_diff for r in records),
        n_iter_cvg=n_iter,
        converged=n_iter is not None,
        converged_word=converged_word if n_iter is not None else None,
        iterations=records[-1].iteration,
    )


# ----------------------------------------------------------------------
# Cross-run aggregation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class AvgTraceRecord:
    iteration: int
    n_total: float
    n_diff: float
    sr: float
    group_size: float
    n_transmitted: float


def average_runs(traces, m: int) -> list:
    """Pointwise mean trace over several runs of the same experiment point.

    Shorter (already converged) runs are padded to the longest length with
    n_total=M, n_diff=1, sr=1; group_size and n_transmitted carry their final
    real value forward so those columns keep a sensible scale.
    """
    if not traces or any(not t for t in traces):
        raise EmptyTraceError("average_runs needs non-empty traces")
    longest = max(len(t) for t in traces)
    cols = {f: np.zeros(longest) for f in TRACE_FIELDS if f != "iteration"}
    for t in traces:
        last = t[-1]
        for i in range(longest):
            r = t[i] if i < len(t) else None
            cols["n_total"][i] += r.n_total if r else m
            cols["n_diff"][i] += r.n_diff if r else 1
            cols["sr"][i] += r.sr if r else 1.0
            cols["group_size"][i] += (r or last).group_size
            cols["n_transmitted"][i] += (r or last).n_transmitted
    k = len(traces)
    return [
        AvgTraceRecord(
            iteration=i + 1,
            n_total=cols["n_total"][i] / k,
            n_diff=cols["n_diff"][i] / k,
            sr=cols["sr"][i] / k,
            group_size=cols["group_size"][i] / k,
            n_transmitted=cols["n_transmitted"][i] / k,
        )
        for i in range(longest)
    ]


def _mean_std(values) -> tuple:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


def aggregate_summaries(summaries) -> AggregateStats:
    """Mean/std of run maxima plus convergence statistics for one point."""
    if not summaries:
        raise EmptyTraceError("aggregate_summaries needs at least one run")
    tm, ts = _mean_std([s.n_total_max for s in summaries])
    dm, ds = _mean_std([s.n_diff_max for s in summaries])
    cvg = [s.n_iter_cvg for s in summaries if s.n_iter_cvg is not None]
    im, istd = _mean_std(cvg) if cvg else (None, None)
    return AggregateStats(
        n_runs=len(summaries),
        converged_runs=len(cvg),
        convergence_rate=len(cvg) / len(summaries),
        n_total_max_mean=tm, n_total_max_std=ts,
        n_diff_max_mean=dm, n_diff_max_std=ds,
        n_iter_cvg_mean=im, n_iter_cvg_std=istd,
    )


# ----------------------------------------------------------------------
# CSV round trip
# ----------------------------------------------------------------------


def write_trace_csv(records, path) -> None:
    """Persist a trace (int records or averaged float records)."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(TRACE_FIELDS)
        for r in records:
            out.writerow([r.iteration, _fmt(r.n_total), _fmt(r.n_diff),
                          _fmt(r.sr), _fmt(r.group_size), _fmt(r.n_transmitted)])


def _fmt(x):
    # ints stay ints; floats use shortest round-trip repr for byte stability
    return x if isinstance(x, int) else repr(float(x))


def read_trace_csv(path) -> list:
    """Read a trace CSV back into TraceRecords (expects integer columns)."""
    cols = read_trace_columns(path)
    n = len(cols["iteration"])
    return [
        TraceRecord(
            iteration=int(cols["iteration"][i]),
            n_total=int(cols["n_total"][i]),
            n_diff=int(cols["n_diff"][i]),
            sr=float(cols["sr"][i]),
            group_size=int(cols["group_size"][i]),
            n_transmitted=int(cols["n_transmitted"][i]),
        )
        for i in range(n)
    ]


def read_trace_columns(path) -> dict:
    """Columns of a trace CSV as float arrays; rejects any schema drift."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRACE_FIELDS:
        raise ValueError(
            f"{path}: expected trace header {','.join(TRACE_FIELDS)}")
    data = np.array([[float(x) for x in row] for row in rows[1:]],
                    dtype=np.float64).reshape(-1, len(TRACE_FIELDS))
    return {f: data[:, i] for i, f in enumerate(TRACE_FIELDS)}
