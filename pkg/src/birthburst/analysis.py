"""Degree-distribution shape, hub trajectories, bursts and phase labels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from birthburst.errors import EstimationError
from birthburst.fitness import fit_gamma, fitness_spread
from birthburst.graph import EvolvingGraph, Snapshot

THETA = 0.5
EPS = 0.1
PLATEAU_WINDOW = 0.5
TAU = 0.25
PHI_MIN = 0.01
BINS_BASE = 2.0
GAMMA_SF = 0.1
SPREAD_SF = 0.05


@dataclass(frozen=True)
class DegreeHistogram:
    """Log-binned degree distribution over nodes with ``k >= 1``.

    Bin ``j`` covers degrees in ``[base**j, base**(j+1))``; ``widths`` counts
    the integers it contains, and ``density = count / (width * total)``.
    """

    base: float
    lower: np.ndarray
    upper: np.ndarray
    counts: np.ndarray
    widths: np.ndarray
    density: np.ndarray
    centers: np.ndarray
    total: int

    def nonempty(self) -> np.ndarray:
        return self.counts > 0


def _degree_values(source) -> np.ndarray:
    if isinstance(source, Snapshot):
        return np.fromiter(source.degrees.values(), dtype=np.int64)
    if isinstance(source, dict):
        return np.fromiter(source.values(), dtype=np.int64)
    return np.asarray(source, dtype=np.int64)


def degree_histogram(source, base: float = BINS_BASE) -> DegreeHistogram:
    """Histogram of a snapshot (or plain degree sequence) on log bins."""
    if not base > 1.0:
        raise ValueError(f"bin base must exceed 1, got {base}")
    k = _degree_values(source)
    k = k[k >= 1]
    if k.size == 0:
        raise EstimationError("no node has degree >= 1")
    n_bins = max(1, int(math.log(k.max()) / math.log(base)))
    while base**n_bins <= k.max():
        n_bins += 1
    lo_edge = base ** np.arange(n_bins, dtype=float)
    hi_edge = base ** np.arange(1, n_bins + 1, dtype=float)
    first = np.ceil(lo_edge).astype(np.int64)
    last = np.ceil(hi_edge).astype(np.int64) - 1
    widths = last - first + 1
    which = np.searchsorted(first, k, side="right") - 1
    counts = np.bincount(which, minlength=n_bins)
    with np.errstate(divide="ignore", invalid="ignore"):
        density = np.where(widths > 0, counts / (np.maximum(widths, 1) * k.size), 0.0)
    centers = np.sqrt(first * np.maximum(last, first).astype(float))
    return DegreeHistogram(float(base), first, last, counts, widths, density, centers, int(k.size))


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    curvature: float
    residual: float
    lower_slope: float
    upper_slope: float
    midpoint: float


def _line(x, y):
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    return float(slope), float(np.sqrt(np.mean(resid**2)))


def slope_and_curvature(hist: DegreeHistogram) -> SlopeFit:
    """Global log-log slope, and upper-half minus lower-half slope.

    The occupied range of log bin centres is split at its midpoint.
    Negative curvature means the distribution bends down (concave).
    """
    keep = hist.nonempty() & (hist.density > 0)
    if np.count_nonzero(keep) < 4:
        raise EstimationError("slope fit needs at least 4 non-empty bins")
    x = np.log(hist.centers[keep])
    y = np.log(hist.density[keep])
    slope, resid = _line(x, y)
    mid = 0.5 * (x.min() + x.max())
    low, high = x <= mid, x > mid
    if np.count_nonzero(low) < 2 or np.count_nonzero(high) < 2:
        raise EstimationError("each half of the degree range needs 2 non-empty bins")
    lower, _ = _line(x[low], y[low])
    upper, _ = _line(x[high], y[high])
    return SlopeFit(slope, upper - lower, resid, lower, upper, float(math.exp(mid)))


def ccdf_slope(source, k_min: int = 1, base: float = BINS_BASE) -> float:
    """Log-log slope of ``P(K >= k)`` sampled at log-spaced degrees from ``k_min``."""
    k = _degree_values(source)
    k = np.sort(k[k >= max(k_min, 1)])
    if k.size == 0:
        raise EstimationError("no degrees at or above k_min")
    start = max(k_min, int(k[0]))
    steps = int(math.log(k[-1] / start) / math.log(base)) + 1
    grid = np.unique(np.floor(start * base ** np.arange(steps + 1)).astype(np.int64))
    grid = grid[grid <= k[-1]]
    if grid.size < 2:
        raise EstimationError("degree range too narrow for a CCDF slope")
    ccdf = 1.0 - np.searchsorted(k, grid, side="left") / k.size
    slope, _ = np.polyfit(np.log(grid), np.log(ccdf), 1)
    return float(slope)


@dataclass(frozen=True)
class HubTrajectories:
    times: np.ndarray
    nodes: list
    degrees: np.ndarray  # (hubs, times)
    fractions: np.ndarray  # (hubs, times), NaN where no edges exist yet

    def rows(self):
        for h, v in enumerate(self.nodes):
            for j, t in enumerate(self.times):
                yield v, int(t), int(self.degrees[h, j]), float(self.fractions[h, j])


def top_hubs(graph: EvolvingGraph, top_n: int, at: int | None = None) -> list:
    """The ``top_n`` highest-degree nodes, ties broken by insertion order."""
    if top_n > graph.number_of_nodes:
        raise EstimationError(f"asked for {top_n} hubs from {graph.number_of_nodes} nodes")
    if at is None:
        deg = graph.degrees()
    else:
        deg = dict(graph.snapshot_at(at).degrees)
    ids = list(deg)
    ks = np.fromiter(deg.values(), dtype=np.int64, count=len(ids))
    order = np.argsort(-ks, kind="stable")[:top_n]
    return [ids[i] for i in order]


def top_hub_trajectories(graph: EvolvingGraph, times: Sequence[int], top_n: int = 4) -> HubTrajectories:
    """Degree and degree-fraction series for the ``top_n`` final hubs."""
    times = np.asarray(times, dtype=np.int64)
    if times.size == 0:
        raise EstimationError("empty snapshot schedule")
    hubs = top_hubs(graph, top_n)
    degs, fracs = [], []
    for v in hubs:
        k, phi = graph.trajectory_arrays(v, times)
        degs.append(k)
        fracs.append(phi)
    return HubTrajectories(times, hubs, np.array(degs).reshape(len(hubs), -1),
                           np.array(fracs).reshape(len(hubs), -1))


@dataclass(frozen=True)
class PlateauStats:
    passed: bool
    mean_fraction: float
    spread: float
    points: int


def plateau_test(fractions, start: int = 0, window: float = PLATEAU_WINDOW,
                 tau: float = TAU) -> PlateauStats:
    """Stability of a degree-fraction series over its trailing ``window`` share.

    Points before ``start`` are excluded. The test passes when
    ``(max - min) / mean <= tau`` over at least two defined points.
    """
    phi = np.asarray(fractions, dtype=float)
    first = max(start, int(math.floor(len(phi) * (1.0 - window))))
    tail = phi[first:]
    tail = tail[~np.isnan(tail)]
    if tail.size < 2 or not tail.mean() > 0.0:
        mean = float(tail.mean()) if tail.size else 0.0
        return PlateauStats(False, mean, math.inf, int(tail.size))
    mean = float(tail.mean())
    spread = float((tail.max() - tail.min()) / mean)
    return PlateauStats(spread <= tau, mean, spread, int(tail.size))


@dataclass(frozen=True)
class BurstEvent:
    node: object
    index: int
    time: int
    jump: int
    pre_degree: int
    plateau_fraction: float | None = None
    plateau: bool | None = None


def detect_bursts(degrees, times=None, fractions=None, node=None, theta: float = THETA,
                  eps: float = EPS, window: float = PLATEAU_WINDOW,
                  tau: float = TAU) -> list[BurstEvent]:
    """Abrupt degree jumps from near zero.

    Index ``i`` is a burst when the jump into it is at least ``theta`` times the
    final degree and the degree just before it is at most ``eps`` times the
    final degree. The degree before the first point is taken as 0. With
    ``fractions`` given, each burst also gets a plateau verdict on the
    degree fraction after it.
    """
    k = np.asarray(degrees, dtype=np.int64)
    if k.size == 0:
        return []
    times = np.arange(k.size) if times is None else np.asarray(times)
    final = int(k[-1])
    prev = np.concatenate(([0], k[:-1]))
    jump = k - prev
    hits = np.flatnonzero((jump > 0) & (jump >= theta * final) & (prev <= eps * final))
    events = []
    for i in hits.tolist():
        frac, ok = None, None
        if fractions is not None:
            stats = plateau_test(fractions, start=i, window=window, tau=tau)
            frac, ok = stats.mean_fraction, stats.passed
        events.append(BurstEvent(node, i, int(times[i]), int(jump[i]), int(prev[i]), frac, ok))
    return events


class Phase(str, Enum):
    SCALE_FREE = "scale-free"
    FIT_GET_RICH = "fit-get-rich"
    WINNER_TAKES_ALL = "winner-takes-all"


@dataclass(frozen=True)
class PhaseLabel:
    phase: Phase
    gamma_hat: float
    fitness_spread: float | None
    plateau_fraction: float | None
    plateau_passed: bool | None
    thresholds: dict = field(default_factory=dict)


def classify_phase(gamma_hat: float, plateau: PlateauStats | None = None,
                   fitness_spread: float | None = None, phi_min: float = PHI_MIN,
                   gamma_sf: float = GAMMA_SF, spread_sf: float = SPREAD_SF) -> PhaseLabel:
    """Phase from the fitted fitness exponent and the top hub's plateau.

    Degenerate fitness (small ``gamma_hat`` and small spread) is scale-free;
    ``gamma_hat > 1`` with a top hub holding a stable fraction of at least
    ``phi_min`` is winner-takes-all; anything else is fit-get-rich.
    """
    if gamma_hat < 0:
        raise ValueError(f"gamma_hat must be >= 0, got {gamma_hat}")
    thresholds = {"phi_min": phi_min, "gamma_sf": gamma_sf, "spread_sf": spread_sf}
    frac = plateau.mean_fraction if plateau else None
    passed = plateau.passed if plateau else None
    if gamma_hat < gamma_sf and fitness_spread is not None and fitness_spread < spread_sf:
        phase = Phase.SCALE_FREE
    elif gamma_hat > 1.0 and plateau is not None and plateau.passed and frac >= phi_min:
        phase = Phase.WINNER_TAKES_ALL
    else:
        phase = Phase.FIT_GET_RICH
    return PhaseLabel(phase, gamma_hat, fitness_spread, frac, passed, thresholds)


def phase_of_graph(graph: EvolvingGraph, fitness: Iterable[float], times: Sequence[int],
                   window: float = PLATEAU_WINDOW, tau: float = TAU,
                   phi_min: float = PHI_MIN) -> PhaseLabel:
    """Classify a graph from its fitness values and its top hub's trajectory."""
    values = np.asarray(list(fitness), dtype=float)
    gamma_hat = fit_gamma(values)
    spread = fitness_spread(values)
    hubs = top_hub_trajectories(graph, times, top_n=1)
    stats = plateau_test(hubs.fractions[0], window=window, tau=tau)
    return classify_phase(gamma_hat, stats, spread, phi_min=phi_min)
