"""Construction, evaluation and search of short stabilizer codes on asymmetric Pauli channels."""

from __future__ import annotations

from .channel import ChannelSpec, Family, PauliChannel, grid, resolve
from .cyclic import CyclicCodeSpec, enumerate_cyclic, has_single_generator, to_stabilizer
from .errorset import ErrorSet, build_error_set, extend_error_set
from .fer import FEREstimate, Kind, estimate, fer_adaptive, geometric_mean_fer
from .pauli import Stabilizer, classify_structure, cyclic_stabilizer, distance, permutation_equivalent
from .search import Constraint, Mutation, SearchConfig, SearchResult, hill_climb, mutate, random_stabilizer

__all__ = [
    "ChannelSpec",
    "Constraint",
    "CyclicCodeSpec",
    "ErrorSet",
    "FEREstimate",
    "Family",
    "Kind",
    "Mutation",
    "PauliChannel",
    "SearchConfig",
    "SearchResult",
    "Stabilizer",
    "build_error_set",
    "classify_structure",
    "cyclic_stabilizer",
    "distance",
    "enumerate_cyclic",
    "estimate",
    "extend_error_set",
    "fer_adaptive",
    "geometric_mean_fer",
    "grid",
    "has_single_generator",
    "hill_climb",
    "mutate",
    "permutation_equivalent",
    "random_stabilizer",
    "resolve",
    "to_stabilizer",
]
