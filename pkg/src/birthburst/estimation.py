"""Inverse pipeline: fitness, growth law and kernel exponent from snapshots."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from birthburst.errors import EstimationError
from birthburst.graph import EvolvingGraph, Snapshot, SnapshotSeries

DEFAULT_KMIN = 5
ALPHA_BINS = 8
ALPHA_MIN_EVENTS = 100
ALPHA_CLAMP = (0.0, 1.5)


@dataclass(frozen=True)
class FitnessEstimate:
    """Relative fitness per node, normalised so the largest value is 1."""

    eta: dict
    raw: dict
    window: tuple[int, int]
    k_min: int
    method: str = "growth-ratio"

    def values(self) -> np.ndarray:
        return np.fromiter(self.eta.values(), dtype=float, count=len(self.eta))


@dataclass(frozen=True)
class GrowthFit:
    c: float
    beta: float
    residual: float
    points: list[tuple[int, float]] = field(repr=False)

    def average_degree(self, n):
        return self.c * np.asarray(n, dtype=float) ** self.beta


@dataclass(frozen=True)
class AlphaEstimate:
    alpha: float
    slope: float
    bin_x: np.ndarray = field(repr=False)
    bin_rate: np.ndarray = field(repr=False)
    bin_nodes: np.ndarray = field(repr=False)
    events: int = 0
    window: tuple[int, int] = (0, 0)


def _normalise(raw: dict, window, k_min, method) -> FitnessEstimate:
    top = max(raw.values())
    if not top > 0.0:
        raise EstimationError("no node gained degree in the window; fitness is undefined")
    eta = {v: r / top for v, r in raw.items()}
    return FitnessEstimate(eta, raw, window, k_min, method)


def measure_fitness(before: Snapshot, after: Snapshot, k_min: int = DEFAULT_KMIN) -> FitnessEstimate:
    """Relative fitness from growth over one period.

    For every node with at least ``k_min`` links in ``before``, the raw score
    is the number of links gained by ``after`` divided by the ``before``
    degree; scores are then divided by their maximum.
    """
    if not before.time < after.time:
        raise EstimationError(f"window must be increasing, got ({before.time}, {after.time})")
    if k_min < 1:
        raise EstimationError("k_min must be >= 1 so the growth ratio is defined")
    raw = {}
    later = after.degrees
    for v, k in before.degrees.items():
        if k >= k_min:
            raw[v] = (later[v] - k) / k
    if not raw:
        raise EstimationError(f"no node has degree >= {k_min} at t = {before.time}")
    return _normalise(raw, (before.time, after.time), k_min, "growth-ratio")


def birth_fitness(graph: EvolvingGraph, growth: GrowthFit) -> FitnessEstimate:
    """Relative fitness read off birth degrees, ``eta ~ m / d(n_birth)``.

    Unlike :func:`measure_fitness`, this does not depend on the attachment
    kernel, so it can be fed to :func:`estimate_alpha` without making the
    kernel regression circular.
    """
    births = graph.birth_times()
    raw = {}
    for rec in graph.nodes():
        if rec.birth_degree is None:
            raise EstimationError(f"node {rec.id!r} has no recorded birth degree")
        n = int(np.searchsorted(births, rec.birth_time, side="right"))
        raw[rec.id] = rec.birth_degree / float(growth.average_degree(n))
    window = (int(births[0]), int(births[-1]))
    return _normalise(raw, window, 0, "birth-degree")


def fit_growth(series: SnapshotSeries, min_nodes: int = 1) -> GrowthFit:
    """Least-squares power law ``d = c n**beta`` through the snapshots.

    Each snapshot with at least one edge contributes ``(ln n, ln(2E / n))``.
    """
    n = np.asarray(series.node_counts, dtype=float)
    e = np.asarray(series.edge_counts, dtype=float)
    keep = (e > 0) & (n >= max(min_nodes, 1))
    n, e = n[keep], e[keep]
    if n.size < 2:
        raise EstimationError("fit_growth needs at least 2 snapshots with edges")
    d = 2.0 * e / n
    x, y = np.log(n), np.log(d)
    if np.ptp(x) == 0.0:
        raise EstimationError("all usable snapshots have the same node count")
    beta, log_c = np.polyfit(x, y, 1)
    resid = y - (beta * x + log_c)
    rms = float(np.sqrt(np.mean(resid**2)))
    points = [(int(a), float(b)) for a, b in zip(n, d)]
    return GrowthFit(float(np.exp(log_c)), float(beta), rms, points)


def cumulative_degree_exponent(series: SnapshotSeries, from_fraction: float = 0.5) -> float:
    """Log-log slope of total degree against node count over the late part of growth.

    Only snapshots with at least ``from_fraction`` of the final node count
    are used.
    """
    n = np.asarray(series.node_counts, dtype=float)
    total = 2.0 * np.asarray(series.edge_counts, dtype=float)
    keep = (n >= from_fraction * n[-1]) & (total > 0)
    if np.count_nonzero(keep) < 2 or np.ptp(n[keep]) == 0.0:
        raise EstimationError("too few snapshots in the fitting range")
    slope, _ = np.polyfit(np.log(n[keep]), np.log(total[keep]), 1)
    return float(slope)


def estimate_alpha(series: SnapshotSeries, window: tuple[int, int],
                   fitness: FitnessEstimate, n_bins: int = ALPHA_BINS) -> AlphaEstimate:
    """Kernel exponent from attachment rates binned by ``eta * k``.

    Nodes present at ``window[0]`` are grouped into log-spaced bins of
    ``x = eta * k(t1)``. The mean number of links each group gains by
    ``window[1]`` is regressed on ``x`` in log-log space; the slope, clamped
    to [0, 1.5], is the estimate.
    """
    t1, t2 = window
    if not t1 < t2:
        raise EstimationError(f"window must be increasing, got {window}")
    s1, s2 = series.at(t1), series.at(t2)
    later = s2.degrees
    xs, gains = [], []
    events = 0
    for v, k in s1.degrees.items():
        gain = later[v] - k
        events += gain
        eta = fitness.eta.get(v)
        if eta is None or k <= 0 or eta <= 0.0:
            continue
        xs.append(eta * k)
        gains.append(gain)
    if events < ALPHA_MIN_EVENTS:
        raise EstimationError(
            f"only {events} new link endpoints on nodes present at t = {t1}; "
            f"need {ALPHA_MIN_EVENTS}"
        )
    x = np.asarray(xs, dtype=float)
    gain = np.asarray(gains, dtype=float)
    if x.size == 0 or x.min() == x.max():
        raise EstimationError("all nodes share one kernel value; cannot bin")
    edges = np.geomspace(x.min(), x.max(), n_bins + 1)
    which = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, n_bins - 1)
    counts = np.bincount(which, minlength=n_bins)
    gain_sum = np.bincount(which, weights=gain, minlength=n_bins)
    logx_sum = np.bincount(which, weights=np.log(x), minlength=n_bins)
    used = (counts > 0) & (gain_sum > 0)
    if np.count_nonzero(used) < 2:
        raise EstimationError("attachment rates fall into a single bin")
    rate = gain_sum[used] / counts[used]
    centre = np.exp(logx_sum[used] / counts[used])
    slope, _ = np.polyfit(np.log(centre), np.log(rate), 1)
    alpha = float(np.clip(slope, *ALPHA_CLAMP))
    return AlphaEstimate(alpha, float(slope), centre, rate, counts[used], int(events), (t1, t2))
