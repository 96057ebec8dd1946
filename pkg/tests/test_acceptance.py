"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists one
PASS/FAIL/SKIP line per criterion.
"""

import io
import itertools
import json
import os
import random
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import ks_2samp, spearmanr

from birthburst import GrowthLaw, ModelConfig, attachment_probabilities, fit_gamma, grow
from birthburst.analysis import (
    Phase,
    ccdf_slope,
    degree_histogram,
    detect_bursts,
    phase_of_graph,
    plateau_test,
    slope_and_curvature,
    top_hub_trajectories,
    top_hubs,
)
from birthburst.cli import main
from birthburst.estimation import (
    birth_fitness,
    cumulative_degree_exponent,
    estimate_alpha,
    fit_growth,
    measure_fitness,
)
from birthburst.graph import SnapshotSeries
from birthburst.io import build_graph, parse_edges, serialize_graph, strip_comments
from birthburst.sampler import WeightTree

FIXTURES = Path(__file__).parent / "fixtures"


def acceptance(cid, limit):
    return pytest.mark.acceptance(cid, limit=limit)


# -- 1. sampler exactness ----------------------------------------------------

FROZEN_ETA = [0.9, 0.3, 0.6, 1.0, 0.15]
FROZEN_K = [1, 7, 3, 2, 12]


@acceptance(1, 10)
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_c1_single_draw_frequencies(alpha):
    exact = np.array([(e * k) ** alpha for e, k in zip(FROZEN_ETA, FROZEN_K)])
    exact /= exact.sum()
    probs = attachment_probabilities(FROZEN_K, FROZEN_ETA, alpha).probabilities
    assert np.allclose(probs, exact, rtol=0, atol=1e-15)

    tree = WeightTree(attachment_probabilities(FROZEN_K, FROZEN_ETA, alpha).weights)
    rng = random.Random(11)
    draws = 100_000
    hits = np.bincount([tree.draw(rng) for _ in range(draws)], minlength=5)
    deviation = np.abs(hits / draws - exact).max()
    print(f"alpha={alpha}: max deviation {deviation:.4f}")
    assert deviation < 0.01


# -- 2. reduction identities -------------------------------------------------

@acceptance(2, 60)
def test_c2_kernel_reductions():
    k = [3, 1, 8, 2, 5, 13]
    eta = [0.2, 0.9, 0.5, 1.0, 0.7, 0.05]
    linear = np.array(eta) * np.array(k)
    w1 = attachment_probabilities(k, eta, 1.0)
    assert np.array_equal(w1.weights, linear)
    assert np.array_equal(w1.probabilities, linear / linear.sum())
    w0 = attachment_probabilities(k, eta, 0.0)
    assert np.array_equal(w0.probabilities, np.full(6, 1 / 6))


@acceptance(2, 60)
def test_c2_degenerate_birth_burst_matches_ba():
    n = 10_000
    ba = grow(ModelConfig("ba", n, m=2, rng_seed=5))
    bb = grow(ModelConfig("birth-burst", n, alpha=1.0, m=2, fixed_fitness=1.0,
                          internal_edges=False, rng_seed=6))
    p = ks_2samp(list(ba.degrees().values()), list(bb.degrees().values())).pvalue
    print(f"KS p = {p:.3f}")
    assert p > 0.01


# -- 3 and 4. growth and fitness recovery ------------------------------------

GROWTH_ARGS = dict(gamma=1.5, alpha=0.8, growth=GrowthLaw(4, 0.3), rng_seed=1)


@pytest.fixture(scope="module")
def recovery_run(tmp_path_factory):
    graph = grow(ModelConfig("birth-burst", 10_000, **GROWTH_ARGS))
    path = tmp_path_factory.mktemp("c3") / "run.tsv"
    with open(path, "w", newline="\n") as fh:
        serialize_graph(graph, fh)
    return graph, SnapshotSeries.every_timestamp(graph), path


@acceptance(3, 60)
def test_c3_cumulative_exponent(recovery_run):
    _, series, _ = recovery_run
    exponent = cumulative_degree_exponent(series)
    print(f"cumulative degree exponent {exponent:.4f}")
    assert abs(exponent - 1.3) <= 0.05


@acceptance(3, 60)
def test_c3_estimate_growth_command(recovery_run, tmp_path):
    _, _, path = recovery_run
    out = tmp_path / "growth.json"
    assert main(["estimate", "growth", "--edges", str(path), "--out", str(out)]) == 0
    fit = json.loads(strip_comments(out.read_text()))
    print(f"beta_hat {fit['beta']:.4f}, c_hat {fit['c']:.4f}")
    assert abs(fit["beta"] - 0.3) <= 0.05
    assert 4 / 1.3 <= fit["c"] <= 4 * 1.3


@pytest.fixture(scope="module")
def growth_ratio_fitness(recovery_run):
    graph, series, _ = recovery_run
    return graph, measure_fitness(series.at(8000), series.at(10_000), k_min=20)


@acceptance(4, 60)
def test_c4_fitness_rank_correlation(growth_ratio_fitness):
    graph, fe = growth_ratio_fitness
    nodes = list(fe.eta)
    rho = spearmanr([fe.eta[v] for v in nodes], [graph.node(v).fitness for v in nodes])[0]
    print(f"Spearman {rho:.3f} over {len(nodes)} nodes")
    assert rho >= 0.7


@acceptance(4, 60)
def test_c4_fitness_exponent(growth_ratio_fitness):
    _, fe = growth_ratio_fitness
    gamma_hat = fit_gamma(fe.values())
    print(f"gamma_hat {gamma_hat:.3f}")
    assert abs(gamma_hat - 1.5) <= 0.5


# -- 5. alpha recovery -------------------------------------------------------

@acceptance(5, 120)
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_c5_alpha_recovery(alpha):
    graph = grow(ModelConfig("birth-burst", 10_000, gamma=1.0, alpha=alpha,
                             growth=GrowthLaw(4, 0.3), rng_seed=1))
    series = SnapshotSeries.every_timestamp(graph)
    fitness = birth_fitness(graph, fit_growth(series))
    est = estimate_alpha(series, (8000, 10_000), fitness)
    print(f"alpha {alpha}: alpha_hat {est.alpha:.3f}")
    assert abs(est.alpha - alpha) <= 0.15


# -- 6. condensation ---------------------------------------------------------

SIZES = (5_000, 10_000, 20_000)


def top_fractions(graph):
    # Nested prefixes of one run equal separate runs with the same seed.
    out = []
    for n in SIZES:
        k = graph.degree_array_at(n)
        out.append(k.max() / k.sum())
    return out


@pytest.fixture(scope="module")
def condensed():
    return grow(ModelConfig("birth-burst", SIZES[-1], gamma=2.0, alpha=1.0,
                            growth=GrowthLaw(4, 0.0), rng_seed=1))


@pytest.fixture(scope="module")
def ba_control():
    return grow(ModelConfig("ba", SIZES[-1], m=2, rng_seed=1))


@acceptance(6, 180)
def test_c6_top_hub_plateaus(condensed):
    phi = top_fractions(condensed)
    change = abs(phi[2] - phi[1]) / phi[1]
    print("phi", [round(x, 4) for x in phi], f"change {change:.2f}")
    assert min(phi) >= 0.01
    assert change < 0.5


@acceptance(6, 180)
def test_c6_ba_top_hub_dilutes(ba_control):
    phi = top_fractions(ba_control)
    print("BA phi", [round(x, 4) for x in phi])
    assert phi[0] > phi[1] > phi[2]


@acceptance(6, 180)
@pytest.mark.parametrize("which, expected", [("condensed", Phase.WINNER_TAKES_ALL),
                                             ("ba_control", Phase.SCALE_FREE)])
def test_c6_phase_labels(request, which, expected):
    graph = request.getfixturevalue(which)
    times = SnapshotSeries.every_timestamp(graph).times
    label = phase_of_graph(graph, graph.fitness_values().values(), times)
    print(which, label.phase.value, f"gamma_hat {label.gamma_hat:.3f}")
    assert label.phase is expected


# -- 7. sublinearity ---------------------------------------------------------

@acceptance(7, 120)
def test_c7_birth_burst_is_concave():
    graph = grow(ModelConfig("birth-burst", 10_000, alpha=0.5, growth=GrowthLaw(4, 0.3),
                             rng_seed=1))
    fit = slope_and_curvature(degree_histogram(graph.degrees()))
    print(f"curvature {fit.curvature:.3f}")
    assert fit.curvature < 0


@acceptance(7, 120)
def test_c7_ba_is_straight():
    graph = grow(ModelConfig("ba", 100_000, m=2, rng_seed=1))
    degrees = graph.degrees()
    fit = slope_and_curvature(degree_histogram(degrees))
    slope = ccdf_slope(degrees)
    print(f"curvature {fit.curvature:.3f}, CCDF slope {slope:.3f}")
    assert abs(fit.curvature) < 0.5
    assert -2.4 <= slope <= -1.6


# -- 8. burst ledger ---------------------------------------------------------

@acceptance(8, 30)
def test_c8_birth_bursts_are_flagged():
    graph = grow(ModelConfig("birth-burst", 3_000, gamma=1.0, alpha=0.8,
                             growth=GrowthLaw(4, 0.3), rng_seed=1))
    times = np.arange(graph.first_time, graph.last_time + 1)
    checked = missed = 0
    for rec in graph.nodes():
        k, _ = graph.trajectory_arrays(rec.id, times)
        final = int(k[-1])
        birth = int(np.searchsorted(times, rec.birth_time))
        if final - k[birth] >= 0.5 * final:
            continue
        checked += 1
        flagged = {e.index for e in detect_bursts(k, times, theta=0.5, eps=0.1)}
        missed += birth not in flagged
    print(f"{checked} nodes checked, {missed} missed")
    assert checked > 0 and missed == 0


@acceptance(8, 30)
def test_c8_linear_trajectories_never_burst():
    false = 0
    for slope, length, lead in itertools.product(range(1, 6), range(3, 120, 7), (0, 5)):
        k = [0] * lead + [slope * i for i in range(1, length + 1)]
        false += len(detect_bursts(k, theta=0.5, eps=0.1))
    assert false == 0


# -- 9. structural invariants ------------------------------------------------

def check_structure(graph):
    graph.check_invariants()
    edges = [(a, b) for a, b, _ in graph.edges()]
    assert all(a != b for a, b in edges)
    assert len({frozenset(e) for e in edges}) == len(edges)
    assert sum(graph.degrees().values()) == 2 * graph.number_of_edges


@acceptance(9, 30)
@pytest.mark.parametrize("config", [
    ModelConfig("ba", 2000, m=3, rng_seed=2),
    ModelConfig("fitness", 2000, gamma=2.0, rng_seed=2, seed_graph="ring"),
    ModelConfig("birth-burst", 2000, gamma=1.0, alpha=0.5, growth=GrowthLaw(4, 0.3),
                rng_seed=2),
    ModelConfig("birth-burst", 2000, gamma=3.0, alpha=1.0, growth=GrowthLaw(2, 0.6),
                rng_seed=2, m0=2),
], ids=["ba", "fitness", "bb", "bb-steep"])
def test_c9_generated_runs(config):
    check_structure(grow(config))


@acceptance(9, 30)
def test_c9_ingested_fixture_round_trip():
    with open(FIXTURES / "small.tsv") as fh:
        parsed = parse_edges(fh)
    assert parsed.self_loops == 1 and parsed.duplicates == 1
    graph, _ = build_graph(parsed)
    check_structure(graph)
    first = io.StringIO()
    serialize_graph(graph, first, {"source": "small.tsv"})
    again, _ = build_graph(parse_edges(io.StringIO(first.getvalue())))
    check_structure(again)
    second = io.StringIO()
    serialize_graph(again, second, {"source": "small.tsv"})
    assert first.getvalue() == second.getvalue()


@acceptance(9, 30)
def test_c9_same_seed_same_bytes(tmp_path):
    argv = ["generate", "--n", "1500", "--gamma", "2", "--seed", "13"]
    outputs = []
    for _ in range(2):
        out = tmp_path / "g.tsv"
        assert main(argv + ["--out", str(out)]) == 0
        outputs.append((out.read_bytes(), (tmp_path / "g.tsv.meta.tsv").read_bytes()))
    assert outputs[0] == outputs[1]


# -- 10. PPI reproduction (needs user data) --------------------------------

SC_EDGES = os.environ.get("BIRTHBURST_SC_EDGES")


@acceptance(10, None)
@pytest.mark.skipif(not SC_EDGES, reason="set BIRTHBURST_SC_EDGES to a dated edge list")
def test_c10_ppi_hubs_burst_then_plateau():
    with open(SC_EDGES, newline="") as fh:
        graph, series = build_graph(parse_edges(fh))
    check_structure(graph)
    times = series.times
    hubs = top_hub_trajectories(graph, times, top_n=4)
    for h, v in enumerate(hubs.nodes):
        events = detect_bursts(hubs.degrees[h], times, hubs.fractions[h], node=v)
        print(v, [(e.time, e.jump, e.plateau) for e in events])
        assert events, f"hub {v} shows no burst"
        assert any(e.plateau for e in events), f"hub {v} shows no plateau after its burst"
    assert top_hubs(graph, 4) == hubs.nodes
    assert plateau_test(hubs.fractions[0]).points > 0
