"""Timestamped, growing, simple undirected graphs.

An :class:`EvolvingGraph` only grows: nodes and edges are appended with
integer timestamps that never go backwards. Frozen views at a given time
are produced by :meth:`EvolvingGraph.snapshot_at`, and ordered sequences of
them by :class:`SnapshotSeries`.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from types import MappingProxyType
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from birthburst.errors import GraphError

NodeId = Hashable


@dataclass(frozen=True)
class NodeRecord:
    id: NodeId
    birth_time: int
    fitness: float | None = None
    birth_degree: int | None = None


class TrajectoryPoint(NamedTuple):
    time: int
    degree: int
    fraction: float | None


@dataclass(frozen=True)
class Snapshot:
    """Immutable degree view of a graph at ``time``.

    ``degrees`` holds every node born at or before ``time``, including
    isolated ones.
    """

    time: int
    degrees: Mapping[NodeId, int]
    edge_count: int

    @property
    def node_count(self) -> int:
        return len(self.degrees)

    @property
    def total_degree(self) -> int:
        return 2 * self.edge_count


class EvolvingGraph:
    """Simple undirected graph whose nodes and edges carry creation times.

    Timestamps share one clock: every insertion must be at a time no
    earlier than the latest timestamp already present.
    """

    def __init__(self):
        self._index: dict[NodeId, int] = {}
        self._ids: list = []
        self._birth: list[int] = []
        self._fitness: list[float | None] = []
        self._birth_degree: list[int | None] = []
        self._adj: list[set[int]] = []
        self._inc_times: list[list[int]] = []
        self._edge_a: list[int] = []
        self._edge_b: list[int] = []
        self._edge_t: list[int] = []
        self._clock: int | None = None
        self._arrays = None

    # -- mutation -----------------------------------------------------------

    def _tick(self, time: int) -> None:
        if self._clock is not None and time < self._clock:
            raise GraphError(f"time regression: {time} < {self._clock}")
        self._clock = time

    def add_node(self, id: NodeId, birth_time: int, fitness: float | None = None,
                 birth_degree: int | None = None) -> None:
        if id in self._index:
            raise GraphError(f"duplicate node id {id!r}")
        if fitness is not None and not 0.0 <= fitness <= 1.0:
            raise GraphError(f"fitness {fitness} of node {id!r} outside [0, 1]")
        birth_time = int(birth_time)
        self._tick(birth_time)
        self._index[id] = len(self._ids)
        self._ids.append(id)
        self._birth.append(birth_time)
        self._fitness.append(fitness)
        self._birth_degree.append(birth_degree)
        self._adj.append(set())
        self._inc_times.append([])

    def add_edge(self, a: NodeId, b: NodeId, time: int) -> None:
        if a == b:
            raise GraphError(f"self-loop on {a!r}")
        try:
            ia = self._index[a]
            ib = self._index[b]
        except KeyError as exc:
            raise GraphError(f"unknown node {exc.args[0]!r}") from None
        if ib in self._adj[ia]:
            raise GraphError(f"duplicate edge ({a!r}, {b!r})")
        time = int(time)
        if time < self._birth[ia] or time < self._birth[ib]:
            raise GraphError(f"edge ({a!r}, {b!r}) at {time} predates an endpoint")
        self._tick(time)
        self._link(ia, ib, time)

    def _link(self, ia: int, ib: int, time: int) -> None:
        # Unchecked insertion by dense index; callers guarantee validity.
        self._adj[ia].add(ib)
        self._adj[ib].add(ia)
        self._inc_times[ia].append(time)
        self._inc_times[ib].append(time)
        self._edge_a.append(ia)
        self._edge_b.append(ib)
        self._edge_t.append(time)
        self._arrays = None

    def set_birth_degree(self, id: NodeId, birth_degree: int) -> None:
        self._birth_degree[self._index[id]] = int(birth_degree)

    def set_fitness(self, id: NodeId, fitness: float | None) -> None:
        if fitness is not None and not 0.0 <= fitness <= 1.0:
            raise GraphError(f"fitness {fitness} of node {id!r} outside [0, 1]")
        self._fitness[self._index[id]] = fitness

    # -- queries ------------------------------------------------------------

    def __contains__(self, id: NodeId) -> bool:
        return id in self._index

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def number_of_nodes(self) -> int:
        return len(self._ids)

    @property
    def number_of_edges(self) -> int:
        return len(self._edge_t)

    @property
    def first_time(self) -> int | None:
        return self._birth[0] if self._birth else None

    @property
    def last_time(self) -> int | None:
        return self._clock

    def node_ids(self) -> list:
        return list(self._ids)

    def node(self, id: NodeId) -> NodeRecord:
        i = self._index_of(id)
        return NodeRecord(self._ids[i], self._birth[i], self._fitness[i],
                          self._birth_degree[i])

    def nodes(self) -> Iterator[NodeRecord]:
        for i, id in enumerate(self._ids):
            yield NodeRecord(id, self._birth[i], self._fitness[i], self._birth_degree[i])

    def degree(self, id: NodeId) -> int:
        return len(self._adj[self._index_of(id)])

    def degrees(self) -> dict:
        return {id: len(adj) for id, adj in zip(self._ids, self._adj)}

    def has_edge(self, a: NodeId, b: NodeId) -> bool:
        ia, ib = self._index.get(a), self._index.get(b)
        return ia is not None and ib is not None and ib in self._adj[ia]

    def edges(self) -> Iterator[tuple]:
        """Yield ``(a, b, time)`` in insertion order."""
        ids = self._ids
        for ia, ib, t in zip(self._edge_a, self._edge_b, self._edge_t):
            yield ids[ia], ids[ib], t

    def birth_times(self) -> np.ndarray:
        return np.asarray(self._birth, dtype=np.int64)

    def fitness_values(self) -> dict:
        return {id: f for id, f in zip(self._ids, self._fitness) if f is not None}

    def edge_times(self) -> np.ndarray:
        return self._edge_arrays()[2]

    def _index_of(self, id: NodeId) -> int:
        try:
            return self._index[id]
        except KeyError:
            raise GraphError(f"unknown node {id!r}") from None

    def _edge_arrays(self):
        if self._arrays is None:
            self._arrays = (
                np.asarray(self._edge_a, dtype=np.int64),
                np.asarray(self._edge_b, dtype=np.int64),
                np.asarray(self._edge_t, dtype=np.int64),
            )
        return self._arrays

    # -- time views ---------------------------------------------------------

    def node_count_at(self, t: int) -> int:
        return bisect_right(self._birth, t)

    def edge_count_at(self, t: int) -> int:
        return bisect_right(self._edge_t, t)

    def degree_array_at(self, t: int) -> np.ndarray:
        """Degrees at time ``t`` of the nodes born by then, by insertion index."""
        n = self.node_count_at(t)
        e = self.edge_count_at(t)
        a, b, _ = self._edge_arrays()
        return (np.bincount(a[:e], minlength=n) + np.bincount(b[:e], minlength=n))[:n]

    def snapshot_at(self, t: int) -> Snapshot:
        deg = self.degree_array_at(t)
        degrees = dict(zip(self._ids[: len(deg)], deg.tolist()))
        return Snapshot(int(t), MappingProxyType(degrees), self.edge_count_at(t))

    def degree_trajectory(self, id: NodeId, times: Iterable[int]) -> list[TrajectoryPoint]:
        """Degree and degree fraction of ``id`` at each of ``times``.

        The fraction is ``None`` where the graph has no edges yet.
        """
        degrees, fractions = self.trajectory_arrays(id, times)
        return [
            TrajectoryPoint(int(t), int(k), None if np.isnan(f) else float(f))
            for t, k, f in zip(times, degrees, fractions)
        ]

    def trajectory_arrays(self, id: NodeId, times) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised form of :meth:`degree_trajectory`; NaN marks undefined fractions."""
        i = self._index_of(id)
        times = np.asarray(list(times) if not isinstance(times, np.ndarray) else times,
                           dtype=np.int64)
        inc = np.asarray(self._inc_times[i], dtype=np.int64)
        degrees = np.searchsorted(inc, times, side="right")
        total = 2 * np.searchsorted(self.edge_times(), times, side="right")
        with np.errstate(invalid="ignore", divide="ignore"):
            fractions = np.where(total > 0, degrees / np.maximum(total, 1), np.nan)
        return degrees, fractions

    def check_invariants(self) -> None:
        """Raise :class:`GraphError` if the structural invariants are broken."""
        total = sum(len(adj) for adj in self._adj)
        if total != 2 * len(self._edge_t):
            raise GraphError("degree sum differs from twice the edge count")
        seen = set()
        for ia, ib, t in zip(self._edge_a, self._edge_b, self._edge_t):
            if ia == ib:
                raise GraphError(f"self-loop on {self._ids[ia]!r}")
            key = (ia, ib) if ia < ib else (ib, ia)
            if key in seen:
                raise GraphError(f"duplicate edge {self._ids[ia]!r}-{self._ids[ib]!r}")
            seen.add(key)
            if t < self._birth[ia] or t < self._birth[ib]:
                raise GraphError("edge predates an endpoint")


class SnapshotSeries(Sequence):
    """Ordered snapshots of one graph at increasing times.

    Node and edge counts are computed eagerly; the per-snapshot degree
    maps are built on access, since a series over every timestamp of a
    generated graph would not fit in memory otherwise.
    """

    def __init__(self, graph: EvolvingGraph, times: Iterable[int]):
        times = sorted({int(t) for t in times})
        self.graph = graph
        self.times = np.asarray(times, dtype=np.int64)
        births = graph.birth_times()
        self.node_counts = np.searchsorted(births, self.times, side="right")
        self.edge_counts = np.searchsorted(graph.edge_times(), self.times, side="right")

    @classmethod
    def every_timestamp(cls, graph: EvolvingGraph) -> "SnapshotSeries":
        times = np.union1d(graph.birth_times(), graph.edge_times())
        return cls(graph, times.tolist())

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return self.graph.snapshot_at(int(self.times[i]))

    def at(self, t: int) -> Snapshot:
        return self.graph.snapshot_at(t)

    def time_at_node_count(self, n: int) -> int:
        """Earliest snapshot time whose node count reaches ``n``."""
        j = int(np.searchsorted(self.node_counts, n, side="left"))
        if j >= len(self.times):
            raise GraphError(f"series never reaches {n} nodes")
        return int(self.times[j])
