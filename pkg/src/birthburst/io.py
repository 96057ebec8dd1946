"""Temporal edge lists: parsing, graph building and deterministic output.

The native format is one ``src<TAB>dst<TAB>time`` edge per line, with
``#`` comment lines. Other delimited files (BioGRID exports, for instance)
are read through a :class:`ColumnMap`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from birthburst import __version__
from birthburst.errors import GraphError, ParseError
from birthburst.graph import EvolvingGraph, SnapshotSeries

log = logging.getLogger(__name__)

NA = "NA"


@dataclass(frozen=True)
class ColumnMap:
    col_a: int = 0
    col_b: int = 1
    col_t: int = 2
    delimiter: str = "\t"
    skip_header: int = 0

    def __post_init__(self):
        cols = (self.col_a, self.col_b, self.col_t)
        if len(set(cols)) != 3:
            raise ValueError(f"column indices must be distinct, got {cols}")
        if min(cols) < 0:
            raise ValueError("column indices are 0-based and non-negative")
        if not self.delimiter:
            raise ValueError("delimiter must be non-empty")
        if self.skip_header < 0:
            raise ValueError("skip_header must be >= 0")


@dataclass
class EdgeList:
    """Parsed edges in file order, with what the parser had to drop."""

    edges: list[tuple[str, str, int]]
    self_loops: int = 0
    duplicates: int = 0


def parse_edges(stream: IO[str] | Iterable[str], colmap: ColumnMap | None = None) -> EdgeList:
    """Read timestamped edges.

    Repeated unordered pairs collapse onto their first occurrence, which
    takes the earliest time seen for the pair. Self-loops are dropped and
    counted.
    """
    colmap = colmap or ColumnMap()
    need = max(colmap.col_a, colmap.col_b, colmap.col_t) + 1
    edges: list[list] = []
    where: dict[frozenset, int] = {}
    loops = dups = 0
    for line_no, line in enumerate(stream, start=1):
        if line_no <= colmap.skip_header:
            continue
        text = line.rstrip("\r\n")
        if not text.strip() or text.startswith("#"):
            continue
        fields = text.split(colmap.delimiter)
        if len(fields) < need:
            raise ParseError(f"expected at least {need} fields, found {len(fields)}",
                             line_no, text)
        a = fields[colmap.col_a].strip()
        b = fields[colmap.col_b].strip()
        if not a or not b:
            raise ParseError("empty node id", line_no, text)
        raw_t = fields[colmap.col_t].strip()
        try:
            t = int(raw_t)
        except ValueError:
            raise ParseError(f"time {raw_t!r} is not an integer", line_no, text) from None
        if a == b:
            loops += 1
            continue
        key = frozenset((a, b))
        seen = where.get(key)
        if seen is None:
            where[key] = len(edges)
            edges.append([a, b, t])
        else:
            dups += 1
            if t < edges[seen][2]:
                edges[seen][2] = t
    if loops:
        log.warning("dropped %d self-loop line(s)", loops)
    if dups:
        log.info("merged %d repeated interaction(s), keeping earliest times", dups)
    return EdgeList([tuple(e) for e in edges], loops, dups)


@dataclass(frozen=True)
class NodeMeta:
    birth_time: int
    fitness: float | None
    birth_degree: int | None


def build_graph(edges: Sequence[tuple] | EdgeList, schedule: Iterable[int] | None = None,
                metadata: Mapping[str, NodeMeta] | None = None):
    """Graph and snapshot series from timestamped edges.

    A node is born at the time of its earliest edge. Snapshots are taken at
    every distinct timestamp unless ``schedule`` is given. Birth degrees are
    read off the birth snapshot; ``metadata`` can supply known fitness.
    """
    if isinstance(edges, EdgeList):
        edges = edges.edges
    if not edges:
        raise GraphError("cannot build a graph from an empty edge list")
    ordered = sorted(edges, key=lambda e: e[2])
    g = EvolvingGraph()
    for a, b, t in ordered:
        for v in (a, b):
            if v not in g:
                g.add_node(v, t)
        g.add_edge(a, b, t)
    for rec in g.nodes():
        k, _ = g.trajectory_arrays(rec.id, [rec.birth_time])
        g.set_birth_degree(rec.id, int(k[0]))
    if metadata:
        for v, meta in metadata.items():
            if v in g and meta.fitness is not None:
                g.set_fitness(v, meta.fitness)
    if schedule is None:
        series = SnapshotSeries.every_timestamp(g)
    else:
        series = SnapshotSeries(g, schedule)
    return g, series


def _check_id(v) -> str:
    s = str(v)
    if not s or "\t" in s or "\n" in s or "\r" in s or s.startswith("#"):
        raise GraphError(f"node id {s!r} cannot be written to an edge list")
    return s


def provenance_lines(config: Mapping | None = None) -> list[str]:
    """Comment header: tool version, then one ``key=value`` line per setting."""
    lines = [f"# birthburst {__version__}"]
    for key in sorted(config or {}):
        value = config[key]
        lines.append(f"# {key}={'' if value is None else value}")
    return lines


def _write_header(stream: IO[str], config: Mapping | None) -> None:
    for line in provenance_lines(config):
        stream.write(line + "\n")


def serialize_graph(graph: EvolvingGraph, stream: IO[str], config: Mapping | None = None) -> None:
    """Write edges sorted by ``(time, src, dst)`` after a provenance header."""
    _write_header(stream, config)
    rows = sorted((t, _check_id(a), _check_id(b)) for a, b, t in graph.edges())
    for t, a, b in rows:
        stream.write(f"{a}\t{b}\t{t}\n")


def _fmt_float(x: float) -> str:
    return repr(float(x))


def write_metadata(graph: EvolvingGraph, stream: IO[str], config: Mapping | None = None) -> None:
    """Per-node sidecar: ``id, birth_time, fitness, birth_degree`` (NA if unknown)."""
    _write_header(stream, config)
    stream.write("id\tbirth_time\tfitness\tbirth_degree\n")
    for rec in graph.nodes():
        fit = NA if rec.fitness is None else _fmt_float(rec.fitness)
        bd = NA if rec.birth_degree is None else str(rec.birth_degree)
        stream.write(f"{_check_id(rec.id)}\t{rec.birth_time}\t{fit}\t{bd}\n")


def read_metadata(stream: IO[str] | Iterable[str]) -> dict[str, NodeMeta]:
    out: dict[str, NodeMeta] = {}
    header_seen = False
    for line_no, line in enumerate(stream, start=1):
        text = line.rstrip("\r\n")
        if not text.strip() or text.startswith("#"):
            continue
        fields = text.split("\t")
        if not header_seen:
            if fields[:4] != ["id", "birth_time", "fitness", "birth_degree"]:
                raise ParseError("missing metadata header", line_no, text)
            header_seen = True
            continue
        if len(fields) != 4:
            raise ParseError("expected 4 metadata fields", line_no, text)
        try:
            fit = None if fields[2] == NA else float(fields[2])
            bd = None if fields[3] == NA else int(fields[3])
            out[fields[0]] = NodeMeta(int(fields[1]), fit, bd)
        except ValueError:
            raise ParseError("bad metadata value", line_no, text) from None
    return out


def write_table(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence],
                config: Mapping | None = None) -> None:
    """Comma-separated table with a provenance header."""
    _write_header(stream, config)
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_cell(x) for x in row) + "\n")


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if x != x:
            return ""
        return f"{x:.10g}"
    s = str(x)
    if "," in s or '"' in s:
        s = '"' + s.replace('"', '""') + '"'
    return s


def strip_comments(text: str) -> str:
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
