"""Command-line entry point: ``birthburst {generate,estimate,analyze,compare}``.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

import numpy as np

from birthburst import __version__
from birthburst import analysis, estimation
from birthburst.errors import BirthBurstError
from birthburst.fitness import fit_gamma, fitness_spread
from birthburst.generators import GrowthLaw, ModelConfig, Variant, grow
from birthburst.graph import SnapshotSeries
from birthburst.io import (
    ColumnMap,
    build_graph,
    parse_edges,
    provenance_lines,
    read_metadata,
    serialize_graph,
    write_metadata,
    write_table,
)

log = logging.getLogger("birthburst")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _delimiter(value: str) -> str:
    aliases = {"\\t": "\t", "tab": "\t", "comma": ",", "space": " "}
    return aliases.get(value, value)


def _add_input(p):
    p.add_argument("--edges", required=True, help="timestamped edge list")
    p.add_argument("--meta", help="node metadata sidecar written by generate")
    p.add_argument("--col-a", type=int, default=0)
    p.add_argument("--col-b", type=int, default=1)
    p.add_argument("--col-t", type=int, default=2)
    p.add_argument("--delim", type=_delimiter, default="\t")
    p.add_argument("--skip-header", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout)")


def _add_plateau(p):
    p.add_argument("--theta", type=float, default=analysis.THETA)
    p.add_argument("--eps", type=float, default=analysis.EPS)
    p.add_argument("--tau", type=float, default=analysis.TAU)
    p.add_argument("--window", type=float, default=analysis.PLATEAU_WINDOW,
                   help="trailing share of snapshots used by the plateau test")
    p.add_argument("--phi-min", type=float, default=analysis.PHI_MIN)


def _add_model(p, *, with_model: bool):
    if with_model:
        p.add_argument("--model", choices=[v.value for v in Variant], default="birth-burst")
    p.add_argument("--n", type=int, required=True, help="target node count")
    p.add_argument("--m", type=int, default=2, help="edges per newcomer (BA/fitness)")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seed-graph", choices=["complete", "ring"], default="complete")
    p.add_argument("--m0", type=int, default=None)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="birthburst", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"birthburst {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="grow a synthetic network")
    _add_model(gen, with_model=True)
    gen.add_argument("--constant-m", action="store_true",
                     help="birth-burst: constant m per newcomer instead of a growth law")
    gen.add_argument("--fixed-fitness", type=float, default=None)
    gen.add_argument("--no-internal", action="store_true",
                     help="birth-burst: skip edges between existing nodes")
    gen.add_argument("--out", required=True)
    gen.add_argument("--meta-out", default=None)

    est = sub.add_parser("estimate", help="fit fitness, growth law or kernel exponent")
    est.add_argument("target", choices=["fitness", "growth", "alpha"])
    _add_input(est)
    est.add_argument("--snapshot-a", type=int, default=None)
    est.add_argument("--snapshot-b", type=int, default=None)
    est.add_argument("--kmin", type=int, default=estimation.DEFAULT_KMIN)
    est.add_argument("--method", choices=["growth-ratio", "birth-degree"], default=None,
                     help="fitness source (alpha always uses birth-degree)")

    ana = sub.add_parser("analyze", help="tabulate distributions, hubs, bursts, phase")
    ana.add_argument("target", choices=["degree-dist", "hubs", "bursts", "phase"])
    _add_input(ana)
    ana.add_argument("--at", type=int, default=None, help="snapshot time (default: final)")
    ana.add_argument("--bins-base", type=float, default=analysis.BINS_BASE)
    ana.add_argument("--top", type=int, default=4)
    ana.add_argument("--all-nodes", action="store_true", help="bursts: scan every node")
    ana.add_argument("--snapshot-a", type=int, default=None)
    ana.add_argument("--snapshot-b", type=int, default=None)
    ana.add_argument("--kmin", type=int, default=estimation.DEFAULT_KMIN)
    _add_plateau(ana)

    cmp_ = sub.add_parser("compare", help="BA vs fitness vs birth-burst on one edge budget")
    _add_model(cmp_, with_model=False)
    cmp_.add_argument("--bins-base", type=float, default=analysis.BINS_BASE)
    _add_plateau(cmp_)
    cmp_.add_argument("--out", default=None)
    return parser


# -- helpers ---------------------------------------------------------------

def run_config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    if cfg.get("delim") is not None:
        cfg["delim"] = repr(cfg["delim"])
    return cfg


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _load(args):
    colmap = ColumnMap(args.col_a, args.col_b, args.col_t, args.delim, args.skip_header)
    with open(args.edges, newline="") as fh:
        parsed = parse_edges(fh, colmap)
    meta = None
    if args.meta:
        with open(args.meta) as fh:
            meta = read_metadata(fh)
    graph, series = build_graph(parsed, metadata=meta)
    return graph, series


def default_window(series: SnapshotSeries) -> tuple[int, int]:
    """Final snapshot, and the last one with at most 80% of the final node count."""
    if len(series) < 2:
        raise BirthBurstError("need at least two snapshots for a measurement window")
    final_n = series.node_counts[-1]
    early = np.flatnonzero(series.node_counts <= 0.8 * final_n)
    t1 = int(series.times[early[-1]]) if early.size else int(series.times[-2])
    return t1, int(series.times[-1])


def _window(args, series):
    t1, t2 = default_window(series)
    if args.snapshot_a is not None:
        t1 = args.snapshot_a
    if args.snapshot_b is not None:
        t2 = args.snapshot_b
    return t1, t2


def _model_config(args, variant: Variant) -> ModelConfig:
    bb = variant is Variant.BIRTH_BURST
    if not bb and (args.c is not None or args.beta is not None):
        raise UsageError("--c/--beta only apply to the birth-burst model")
    if not bb and args.alpha not in (None, 1.0):
        raise UsageError("--alpha only applies to the birth-burst model")
    try:
        growth = None
        if bb and not getattr(args, "constant_m", False):
            growth = GrowthLaw(4.0 if args.c is None else args.c,
                               0.3 if args.beta is None else args.beta)
        return ModelConfig(
            variant=variant,
            n_target=args.n,
            gamma=args.gamma,
            alpha=1.0 if args.alpha is None else args.alpha,
            growth=growth,
            m=args.m,
            m0=args.m0,
            seed_graph=args.seed_graph,
            rng_seed=args.seed,
            fixed_fitness=getattr(args, "fixed_fitness", None),
            internal_edges=not getattr(args, "no_internal", False),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _dump_json(obj, fh, config):
    for line in provenance_lines(config):
        fh.write(line + "\n")
    fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _graph_fitness(graph):
    values = graph.fitness_values()
    return values if len(values) == graph.number_of_nodes else None


# -- subcommands -----------------------------------------------------------

def cmd_generate(args) -> int:
    config = _model_config(args, Variant(args.model))
    graph = grow(config)
    prov = run_config(args) | {f"model.{k}": v for k, v in config.as_dict().items()}
    meta_out = args.meta_out or f"{args.out}.meta.tsv"
    with _output(args.out) as fh:
        serialize_graph(graph, fh, prov)
    with open(meta_out, "w", newline="\n") as fh:
        write_metadata(graph, fh, prov)
    log.info("wrote %d nodes, %d edges to %s", graph.number_of_nodes, graph.number_of_edges, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    graph, series = _load(args)
    prov = run_config(args)
    if args.target == "growth":
        fit = estimation.fit_growth(series)
        out = {"c": fit.c, "beta": fit.beta, "residual": fit.residual,
               "n_points": len(fit.points), "points": fit.points}
        if len(series) >= 2:
            with contextlib.suppress(BirthBurstError):
                out["cumulative_exponent"] = estimation.cumulative_degree_exponent(series)
    elif args.target == "fitness":
        method = args.method or "growth-ratio"
        if method == "growth-ratio":
            t1, t2 = _window(args, series)
            fe = estimation.measure_fitness(series.at(t1), series.at(t2), args.kmin)
        else:
            fe = estimation.birth_fitness(graph, estimation.fit_growth(series))
        values = fe.values()
        out = {"method": fe.method, "window": list(fe.window), "k_min": fe.k_min,
               "n_nodes": len(fe.eta), "gamma_hat": fit_gamma(values),
               "fitness_spread": fitness_spread(values),
               "fitness": {str(k): v for k, v in sorted(fe.eta.items(), key=lambda kv: str(kv[0]))}}
    else:
        if args.method == "growth-ratio":
            raise UsageError("alpha estimation needs kernel-independent (birth-degree) fitness")
        growth = estimation.fit_growth(series)
        fe = estimation.birth_fitness(graph, growth)
        t1, t2 = _window(args, series)
        est = estimation.estimate_alpha(series, (t1, t2), fe)
        out = {"alpha": est.alpha, "raw_slope": est.slope, "window": [t1, t2],
               "events": est.events, "fitness_method": fe.method,
               "bins": [{"x": float(x), "rate": float(r), "nodes": int(n)}
                        for x, r, n in zip(est.bin_x, est.bin_rate, est.bin_nodes)]}
    with _output(args.out) as fh:
        _dump_json(out, fh, prov)
    return EXIT_OK


def _final(args, graph):
    return graph.last_time if args.at is None else args.at


def cmd_analyze(args) -> int:
    graph, series = _load(args)
    prov = run_config(args)
    if args.target == "degree-dist":
        hist = analysis.degree_histogram(graph.snapshot_at(_final(args, graph)), args.bins_base)
        rows = [(int(lo), int(hi), float(c), int(n), float(d))
                for lo, hi, c, n, d in zip(hist.lower, hist.upper, hist.centers,
                                           hist.counts, hist.density) if n > 0]
        with _output(args.out) as fh:
            write_table(fh, ["bin_lower", "bin_upper", "center", "count", "density"], rows, prov)
        return EXIT_OK

    times = series.times
    if args.target == "hubs":
        hubs = analysis.top_hub_trajectories(graph, times, args.top)
        with _output(args.out) as fh:
            write_table(fh, ["node", "time", "degree", "fraction"], hubs.rows(), prov)
        return EXIT_OK

    if args.target == "bursts":
        nodes = graph.node_ids() if args.all_nodes else analysis.top_hubs(graph, args.top)
        rows = []
        for v in nodes:
            k, phi = graph.trajectory_arrays(v, times)
            for ev in analysis.detect_bursts(k, times, phi, node=v, theta=args.theta,
                                             eps=args.eps, window=args.window, tau=args.tau):
                rows.append((v, ev.time, ev.jump, ev.pre_degree, int(k[-1]),
                             ev.plateau_fraction, ev.plateau))
        with _output(args.out) as fh:
            write_table(fh, ["node", "time", "jump", "pre_degree", "final_degree",
                             "plateau_fraction", "plateau"], rows, prov)
        return EXIT_OK

    # phase
    known = _graph_fitness(graph)
    if known is not None:
        values, source = list(known.values()), "metadata"
    else:
        t1, t2 = _window(args, series)
        values = estimation.measure_fitness(series.at(t1), series.at(t2), args.kmin).values()
        source = "growth-ratio"
    label = analysis.phase_of_graph(graph, values, times, window=args.window, tau=args.tau,
                                    phi_min=args.phi_min)
    with _output(args.out) as fh:
        write_table(fh, ["phase", "gamma_hat", "fitness_spread", "plateau_fraction",
                         "plateau_passed", "fitness_source"],
                    [(label.phase.value, label.gamma_hat, label.fitness_spread,
                      label.plateau_fraction, label.plateau_passed, source)], prov)
    return EXIT_OK


def compare_models(args) -> list[tuple]:
    """Grow the three models on a shared edge budget and summarise each."""
    bb = _model_config(args, Variant.BIRTH_BURST)
    budget = bb.growth.edge_target(args.n)
    m = max(1, round(budget / args.n))
    ns = argparse.Namespace(**{**vars(args), "m": m, "c": None, "beta": None, "alpha": None,
                               "m0": args.m0 if args.m0 and args.m0 >= m else None})
    configs = [_model_config(ns, Variant.BA), _model_config(ns, Variant.FITNESS), bb]
    rows = []
    for cfg in configs:
        graph = grow(cfg)
        final = graph.snapshot_at(graph.last_time)
        fit = analysis.slope_and_curvature(analysis.degree_histogram(final, args.bins_base))
        times = SnapshotSeries.every_timestamp(graph).times
        label = analysis.phase_of_graph(graph, graph.fitness_values().values(), times,
                                        window=args.window, tau=args.tau, phi_min=args.phi_min)
        rows.append((cfg.variant.value, graph.number_of_nodes, graph.number_of_edges,
                     fit.slope, fit.curvature, analysis.ccdf_slope(final),
                     label.plateau_fraction, label.plateau_passed, label.gamma_hat,
                     label.phase.value))
    return rows


def cmd_compare(args) -> int:
    rows = compare_models(args)
    with _output(args.out) as fh:
        write_table(fh, ["model", "nodes", "edges", "slope", "curvature", "ccdf_slope",
                         "top_hub_fraction", "plateau_passed", "gamma_hat", "phase"],
                    rows, run_config(args))
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "estimate": cmd_estimate,
            "analyze": cmd_analyze, "compare": cmd_compare}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (BirthBurstError, OSError) as exc:
        print(f"birthburst: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
