"""Network growth under the BA, fitness and birth-burst models.

All three share one engine: nodes arrive one per step and attach to
existing nodes drawn with weight ``(eta * k) ** alpha``. They differ only in
where the fitness comes from, how many edges a newcomer brings, and
whether extra edges are added between existing nodes.

The generator clock is the node count: a node born at time ``t`` is the
``t``-th node, and ``snapshot_at(t)`` holds exactly ``t`` nodes. The seed
graph counts as born at ``t = m0``.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from birthburst.fitness import FitnessLaw
from birthburst.graph import EvolvingGraph
from birthburst.sampler import WeightTree

INTERNAL_RETRY_CAP = 100


class Variant(str, Enum):
    BA = "ba"
    FITNESS = "fitness"
    BIRTH_BURST = "birth-burst"


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class GrowthLaw:
    """Average degree per node ``d(n) = c * n**beta``."""

    c: float
    beta: float = 0.0

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError(f"growth constant c must be > 0, got {self.c}")
        if not self.beta >= 0.0:
            raise ValueError(f"growth exponent beta must be >= 0, got {self.beta}")

    def average_degree(self, n: float) -> float:
        return self.c * n**self.beta

    def edge_target(self, n: float) -> float:
        """Edge total implied by ``d = 2E / n``."""
        return 0.5 * self.c * n ** (1.0 + self.beta)


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of one growth run.

    ``growth`` drives birth degrees and the internal-edge budget of the
    birth-burst model; without it every variant brings a constant ``m``
    edges per newcomer. ``fixed_fitness`` replaces fitness draws with a
    constant (the BA model always uses 1).
    """

    variant: Variant
    n_target: int
    gamma: float = 1.0
    alpha: float = 1.0
    growth: GrowthLaw | None = None
    m: int = 2
    m0: int | None = None
    seed_graph: str = "complete"
    rng_seed: int = 0
    fixed_fitness: float | None = None
    internal_edges: bool = True
    law: FitnessLaw = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.m0 is None:
            object.__setattr__(self, "m0", max(3, self.m))
        if self.variant is not Variant.BIRTH_BURST:
            if self.alpha != 1.0:
                raise ValueError(f"alpha is fixed at 1 for the {self.variant.value} model")
            if self.growth is not None:
                raise ValueError(f"the {self.variant.value} model takes a constant m, not a growth law")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.m0 < 2:
            raise ValueError(f"seed graph needs m0 >= 2 nodes, got {self.m0}")
        if self.growth is None:
            if self.m < 1:
                raise ValueError(f"constant m must be >= 1, got {self.m}")
            if self.m > self.m0:
                raise ValueError(f"constant m = {self.m} exceeds seed size m0 = {self.m0}")
        if self.n_target < self.m0:
            raise ValueError(f"n_target = {self.n_target} is smaller than the seed graph")
        if self.seed_graph not in ("complete", "ring"):
            raise ValueError(f"unknown seed graph {self.seed_graph!r}")
        if self.fixed_fitness is not None and not 0.0 < self.fixed_fitness <= 1.0:
            raise ValueError("fixed_fitness must lie in (0, 1]")
        object.__setattr__(self, "law", FitnessLaw(self.gamma))

    def as_dict(self) -> dict:
        """Flat key-value form used in provenance headers."""
        out = {k: v for k, v in asdict(self).items() if k not in ("growth", "law")}
        out["variant"] = self.variant.value
        out["c"] = self.growth.c if self.growth else None
        out["beta"] = self.growth.beta if self.growth else None
        return out

    def node_fitness_is_drawn(self) -> bool:
        return self.variant is not Variant.BA and self.fixed_fitness is None


def birth_degree(growth: GrowthLaw, n: int, eta: float) -> int:
    """Edges brought by the ``n``-th node: ``round(d(n) * eta)`` clamped to [1, n - 1]."""
    m = round_half_up(growth.average_degree(n) * eta)
    return min(max(m, 1), n - 1)


def kernel_weight(eta: float, k: float, alpha: float) -> float:
    if alpha == 0.0:
        return 1.0  # 0**0 is taken as 1
    x = eta * k
    if alpha == 1.0:
        return x
    return x**alpha


@dataclass(frozen=True)
class AttachmentWeights:
    nodes: tuple
    weights: np.ndarray

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self.weights.sum()

    def as_dict(self) -> dict:
        return dict(zip(self.nodes, self.probabilities.tolist()))


def attachment_probabilities(degrees, fitness, alpha: float) -> AttachmentWeights:
    """Kernel weights ``(eta * k) ** alpha`` with exact normalisation.

    ``degrees`` and ``fitness`` are parallel sequences, or mappings keyed by
    node id (``fitness`` then indexed by the keys of ``degrees``). Nodes with
    zero kernel are ineligible unless ``alpha == 0``, where every node has
    weight 1.
    """
    if isinstance(degrees, Mapping):
        nodes = tuple(degrees)
        k = np.array([degrees[v] for v in nodes], dtype=float)
        eta = np.array([fitness[v] for v in nodes], dtype=float)
    else:
        k = np.asarray(degrees, dtype=float)
        eta = np.asarray(fitness, dtype=float)
        nodes = tuple(range(len(k)))
    if k.shape != eta.shape:
        raise ValueError("degrees and fitness differ in length")
    if not 0.0 <= alpha:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0:
        w = np.ones_like(k)
    else:
        w = (eta * k) ** alpha
    if not np.any(w > 0.0):
        raise ValueError("no eligible target: every kernel weight is zero")
    return AttachmentWeights(nodes, w)


def sample_targets(weights: AttachmentWeights, count: int, exclusions: Iterable = (),
                   rng: random.Random | None = None) -> set:
    """Draw ``count`` distinct nodes by weight, never returning excluded ones."""
    rng = rng if rng is not None else random.Random()
    excluded = set(exclusions)
    tree = WeightTree(0.0 if v in excluded else float(w)
                      for v, w in zip(weights.nodes, weights.weights))
    if count > tree.eligible:
        raise ValueError(f"cannot draw {count} targets from {tree.eligible} eligible nodes")
    return {weights.nodes[i] for i in tree.sample_distinct(count, rng)}


def grow(config: ModelConfig) -> EvolvingGraph:
    """Grow a network to ``config.n_target`` nodes.

    Random draws happen in a fixed order per step: the newcomer's fitness,
    then its targets, then internal-edge endpoints. A smaller run with the
    same seed is therefore an exact prefix of a larger one.
    """
    rng = random.Random(config.rng_seed)
    law = config.law
    alpha = config.alpha
    growth = config.growth
    drawn = config.node_fitness_is_drawn()
    constant_eta = 1.0 if config.variant is Variant.BA else config.fixed_fitness
    internal = (config.variant is Variant.BIRTH_BURST and growth is not None
                and config.internal_edges)
    uniform = rng.random

    g = EvolvingGraph()
    adj = g._adj
    tree = WeightTree()
    eta: list[float] = []

    m0 = config.m0
    for i in range(m0):
        eta.append(law.sample(uniform()) if drawn else constant_eta)
    if config.seed_graph == "complete":
        seed_edges = [(i, j) for i in range(m0) for j in range(i + 1, m0)]
    else:
        seed_edges = [(i, (i + 1) % m0) for i in range(m0 if m0 > 2 else 1)]
    seed_deg = [0] * m0
    for i, j in seed_edges:
        seed_deg[i] += 1
        seed_deg[j] += 1
    for i in range(m0):
        g.add_node(i, m0, eta[i], seed_deg[i])
    for i, j in seed_edges:
        g._link(i, j, m0)
    for i in range(m0):
        tree.append(kernel_weight(eta[i], seed_deg[i], alpha))

    for n in range(m0 + 1, config.n_target + 1):
        new = n - 1
        e = law.sample(uniform()) if drawn else constant_eta
        if growth is not None:
            m = birth_degree(growth, n, e)
        else:
            m = min(config.m, new)
        targets = tree.sample_distinct(m, rng)
        g.add_node(new, n, e, m)
        eta.append(e)
        for j in targets:
            g._link(new, j, n)
            tree.update(j, kernel_weight(eta[j], len(adj[j]), alpha))

        if internal:
            budget = round_half_up(growth.edge_target(n) - growth.edge_target(n - 1))
            for _ in range(max(0, budget - m)):
                for _attempt in range(INTERNAL_RETRY_CAP):
                    a = tree.draw(rng)
                    b = tree.draw(rng)
                    if a != b and b not in adj[a]:
                        g._link(a, b, n)
                        tree.update(a, kernel_weight(eta[a], len(adj[a]), alpha))
                        tree.update(b, kernel_weight(eta[b], len(adj[b]), alpha))
                        break

        tree.append(kernel_weight(e, m, alpha))
    return g

