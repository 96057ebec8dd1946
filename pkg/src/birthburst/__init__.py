"""Simulation and estimation toolkit for birth-burst evolving networks."""

__version__ = "0.1.0"

from birthburst.errors import (
    BirthBurstError,
    EstimationError,
    GraphError,
    ParseError,
)
from birthburst.graph import EvolvingGraph, NodeRecord, Snapshot, SnapshotSeries
from birthburst.fitness import FitnessLaw, fit_gamma
from birthburst.generators import (
    GrowthLaw,
    ModelConfig,
    Variant,
    attachment_probabilities,
    birth_degree,
    grow,
    sample_targets,
)

__all__ = [
    "BirthBurstError",
    "EstimationError",
    "EvolvingGraph",
    "FitnessLaw",
    "GraphError",
    "GrowthLaw",
    "ModelConfig",
    "NodeRecord",
    "ParseError",
    "Snapshot",
    "SnapshotSeries",
    "Variant",
    "attachment_probabilities",
    "birth_degree",
    "fit_gamma",
    "grow",
    "sample_targets",
]
