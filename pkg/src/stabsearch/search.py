"""Random stabilizer construction and constrained hill climbing.

Instances are scored by the geometric mean of the SEO estimate over the
objective channels and accept any mutant that does not score worse.  At the
end every instance's code is re-scored with the MAP estimate and the best is
returned.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np

from . import gf2
from .channel import ChannelSpec, Family
from .fer import ErrorSetCache, GeoMeanEstimate, Kind, geometric_mean_fer
from .pauli import (
    Stabilizer,
    classify_structure,
    omega_times,
    relabel_symbols,
    swap_halves,
    to_str,
    weight,
    x_part,
    z_part,
)

MAX_ATTEMPTS = 10_000


class Constraint(str, Enum):
    NONE = "none"
    WEIGHT4 = "weight4"
    CSS = "css"
    CSSY = "cssy"
    LINEAR = "linear"


class Mutation(str, Enum):
    PERMUTATION = "permutation"
    GENERATOR = "generator"
    COMBINED = "combined"
    RANDOM = "random"


class InfeasibleConstraint(ValueError):
    pass


class MutationFailed(RuntimeError):
    pass


# symbol codes: I=0, X=1, Z=2, Y=3
_XYZ = (1, 3, 2)


def _perm_mapping(images: Sequence[int]) -> tuple[int, int, int, int]:
    """Symbol map sending (X, Y, Z) to ``images``."""
    out = [0, 0, 0, 0]
    for src, dst in zip(_XYZ, images):
        out[src] = dst
    return tuple(out)


IDENTITY_PERM = _perm_mapping(_XYZ)
ALL_PERMS = tuple(_perm_mapping(p) for p in permutations(_XYZ))
NONTRIVIAL_PERMS = tuple(p for p in ALL_PERMS if p != IDENTITY_PERM)
# (X,Y,Z) -> (Z,X,Y) is coordinate multiplication by w, (X,Y,Z) -> (Y,Z,X) by w^2
OMEGA_PERMS = (_perm_mapping((2, 1, 3)), _perm_mapping((3, 2, 1)))


# ----------------------------------------------------------------------------
# generator pools


@lru_cache(maxsize=None)
def _weight4_pool(n: int) -> np.ndarray:
    out = []
    for qubits in combinations(range(n), 4):
        for syms in product((1, 2, 3), repeat=4):
            e = 0
            for q, c in zip(qubits, syms):
                e |= (c & 1) << q
                e |= ((c >> 1) & 1) << (n + q)
            out.append(e)
    return np.array(out, dtype=np.int64)


def _draw_from_kernel(kernel: list[int], basis, rng: np.random.Generator, accept=None) -> int | None:
    """Uniform draw from span(kernel) minus the current span, by rejection."""
    if all(gf2.in_span(v, basis) for v in kernel):
        return None
    for _ in range(MAX_ATTEMPTS):
        v = gf2.random_combination(kernel, rng)
        if v and not gf2.in_span(v, basis) and (accept is None or accept(v)):
            return v
    return None


def _commuting_kernel(n: int, gens: Sequence[int]) -> list[int]:
    return gf2.nullspace([swap_halves(g, n) for g in gens], 2 * n)


def _draw_typed(n: int, gens: Sequence[int], basis, kind: str, rng: np.random.Generator) -> int | None:
    """X-only, Z-only or Y-only element commuting with ``gens`` and outside their span."""
    if kind == "x":
        kern = gf2.nullspace([z_part(g, n) for g in gens], n)
        embed = [u for u in kern]
    elif kind == "z":
        kern = gf2.nullspace([x_part(g, n) for g in gens], n)
        embed = [v << n for v in kern]
    else:
        kern = gf2.nullspace([x_part(g, n) ^ z_part(g, n) for g in gens], n)
        embed = [u | (u << n) for u in kern]
    return _draw_from_kernel(embed, basis, rng)


def draw_generators(n: int, gens: Sequence[int], constraint: Constraint, rng: np.random.Generator) -> list[int] | None:
    """New generator(s) commuting with ``gens`` and independent of them, or None if the pool is empty."""
    basis = gf2.rref(gens)
    if constraint is Constraint.NONE:
        v = _draw_from_kernel(_commuting_kernel(n, gens), basis, rng)
        return None if v is None else [v]
    if constraint is Constraint.LINEAR:
        # M and wM commute iff wt(M) is even; wM is then automatically independent
        v = _draw_from_kernel(_commuting_kernel(n, gens), basis, rng, accept=lambda e: weight(e, n) % 2 == 0)
        return None if v is None else [v, omega_times(v, n)]
    if constraint is Constraint.WEIGHT4:
        pool = _weight4_pool(n)
        if gens:
            masks = np.array([swap_halves(g, n) for g in gens], dtype=np.int64)
            ok = (np.bitwise_count(pool[:, None] & masks[None, :]) & 1).sum(axis=1) == 0
            pool = pool[ok]
            pool = pool[gf2.reduce_array(pool, basis) != 0]
        if len(pool) == 0:
            return None
        return [int(pool[rng.integers(len(pool))])]
    kinds = ("x", "z") if constraint is Constraint.CSS else ("x", "y")
    first = kinds[int(rng.integers(2))]
    for kind in (first, kinds[1] if first == kinds[0] else kinds[0]):
        v = _draw_typed(n, gens, basis, kind, rng)
        if v is not None:
            return [v]
    return None


def _fill(n: int, gens: list[int], m: int, constraint: Constraint, rng: np.random.Generator) -> list[int] | None:
    gens = list(gens)
    while len(gens) < m:
        new = draw_generators(n, gens, constraint, rng)
        if new is None:
            return None
        gens.extend(new)
    return gens


def _full_support(n: int, gens: Sequence[int]) -> bool:
    sup = 0
    for g in gens:
        sup |= (g | (g >> n)) & ((1 << n) - 1)
    return sup == (1 << n) - 1


def random_stabilizer(n: int, k: int, constraint: Constraint | str, rng: np.random.Generator) -> Stabilizer:
    """Grow a random stabilizer one generator at a time, rebuilding until it involves every qubit."""
    constraint = Constraint(constraint)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    m = n - k
    if constraint is Constraint.LINEAR and m % 2:
        raise InfeasibleConstraint(f"linear [[{n},{k}]] codes need even n-k")
    for _ in range(MAX_ATTEMPTS):
        gens = _fill(n, [], m, constraint, rng)
        if gens is not None and _full_support(n, gens):
            return Stabilizer(n, tuple(gens))
    raise InfeasibleConstraint(f"no {constraint.value} [[{n},{k}]] stabilizer found in {MAX_ATTEMPTS} attempts")


def satisfies(s: Stabilizer, constraint: Constraint | str) -> bool:
    constraint = Constraint(constraint)
    n = s.n
    if not s.full_support:
        return False
    if constraint is Constraint.WEIGHT4:
        return all(weight(g, n) == 4 for g in s.generators)
    if constraint is Constraint.CSS:
        return all(x_part(g, n) == 0 or z_part(g, n) == 0 for g in s.generators)
    if constraint is Constraint.CSSY:
        return all(z_part(g, n) == 0 or x_part(g, n) == z_part(g, n) for g in s.generators)
    if constraint is Constraint.LINEAR:
        return classify_structure(s).is_linear
    return True


# ----------------------------------------------------------------------------
# mutations


def permutation_mutation(
    s: Stabilizer, constraint: Constraint, rng: np.random.Generator, include_identity_perm: bool = False
) -> Stabilizer:
    """Relabel the nonidentity Paulis at each qubit with probability 1/n."""
    if constraint is Constraint.LINEAR:
        choices = OMEGA_PERMS
    else:
        choices = ALL_PERMS if include_identity_perm else NONTRIVIAL_PERMS
    n = s.n
    gens = list(s.generators)
    hit = rng.random(n) < 1.0 / n
    for i in np.flatnonzero(hit).tolist():
        mapping = choices[int(rng.integers(len(choices)))]
        gens = [relabel_symbols(g, n, i, mapping) for g in gens]
    return Stabilizer(n, tuple(gens))


def generator_mutation(s: Stabilizer, constraint: Constraint, rng: np.random.Generator) -> Stabilizer:
    """Drop each generator with probability 1/(n-k) and refill with fresh random generators."""
    n, m = s.n, s.m
    gens = list(s.generators)
    if constraint is Constraint.LINEAR:
        pairs = [gens[i : i + 2] for i in range(0, m, 2)]
        keep = rng.random(len(pairs)) >= 1.0 / len(pairs)
        kept = [g for pair, kp in zip(pairs, keep) for g in pair if kp]
    else:
        keep = rng.random(m) >= 1.0 / m
        kept = [g for g, kp in zip(gens, keep) if kp]
    if len(kept) == m:
        return s
    for _ in range(MAX_ATTEMPTS):
        new = _fill(n, kept, m, constraint, rng)
        if new is not None and _full_support(n, new):
            return Stabilizer(n, tuple(new))
    raise MutationFailed("could not refill the removed generators")


def mutate(
    s: Stabilizer,
    kind: Mutation | str,
    constraint: Constraint | str,
    rng: np.random.Generator,
    include_identity_perm: bool = False,
) -> Stabilizer:
    kind = Mutation(kind)
    constraint = Constraint(constraint)
    no_perm = constraint in (Constraint.CSS, Constraint.CSSY)
    if kind is Mutation.RANDOM:
        return random_stabilizer(s.n, s.k, constraint, rng)
    if kind is Mutation.PERMUTATION:
        if no_perm:
            raise ValueError("permutation mutation does not preserve CSS structure")
        return permutation_mutation(s, constraint, rng, include_identity_perm)
    out = generator_mutation(s, constraint, rng)
    if kind is Mutation.COMBINED and not no_perm:
        out = permutation_mutation(out, constraint, rng, include_identity_perm)
    return out


# ----------------------------------------------------------------------------
# hill climbing


@dataclass
class SearchConfig:
    n: int
    k: int
    restarts: int = 1
    iterations: int = 1000
    objective_channels: list[ChannelSpec] = field(default_factory=lambda: [ChannelSpec(Family.BIASED_XZ, 0.01, 10.0)])
    constraint: Constraint = Constraint.NONE
    mutation: Mutation = Mutation.COMBINED
    seed: int = 0
    target_bound: float = 0.01
    include_identity_perm: bool = False
    percentile: float = 95.0
    max_errors: int | None = None
    workers: int = 1
    check_constraints: bool = False  # assert the constraint on every accepted step

    def __post_init__(self) -> None:
        self.constraint = Constraint(self.constraint)
        self.mutation = Mutation(self.mutation)
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if not self.objective_channels:
            raise ValueError("at least one objective channel is required")
        if self.constraint is Constraint.LINEAR and (self.n - self.k) % 2:
            raise InfeasibleConstraint(f"linear [[{self.n},{self.k}]] codes need even n-k")
        if self.mutation is Mutation.PERMUTATION and self.constraint in (Constraint.CSS, Constraint.CSSY):
            raise ValueError("permutation mutation is not available for CSS-type searches")


@dataclass
class InstanceResult:
    stabilizer: Stabilizer
    objective: float
    history: list[float]


@dataclass
class SearchResult:
    best_stabilizer: Stabilizer
    objective_seo: float
    final_fer_map: GeoMeanEstimate
    instances: list[InstanceResult]
    trace: list[float] | None = None


def _objective(s: Stabilizer, config: SearchConfig, cache: ErrorSetCache) -> float:
    return geometric_mean_fer(s, config.objective_channels, Kind.SEO, config.target_bound, cache, config.max_errors).value


def run_instance(config: SearchConfig, seed: np.random.SeedSequence, cache: ErrorSetCache | None = None) -> InstanceResult:
    """One hill-climbing instance; fully determined by its seed."""
    cache = ErrorSetCache() if cache is None else cache
    rng = np.random.default_rng(seed)
    current = random_stabilizer(config.n, config.k, config.constraint, rng)
    score = _objective(current, config, cache)
    history = [score]
    for _ in range(config.iterations):
        cand = None
        for _ in range(10):
            try:
                cand = mutate(current, config.mutation, config.constraint, rng, config.include_identity_perm)
                break
            except MutationFailed:
                continue
        if cand is not None:
            cand_score = _objective(cand, config, cache)
            if cand_score <= score:
                if config.check_constraints and not satisfies(cand, config.constraint):
                    raise AssertionError(f"mutant {cand} violates {config.constraint.value}")
                current, score = cand, cand_score
        history.append(score)
    return InstanceResult(current, score, history)


_worker_cache: ErrorSetCache | None = None


def _run_in_worker(args: tuple[SearchConfig, np.random.SeedSequence]) -> InstanceResult:
    global _worker_cache
    if _worker_cache is None:
        _worker_cache = ErrorSetCache()
    return run_instance(args[0], args[1], _worker_cache)


def percentile_trace(histories: Sequence[Sequence[float]], percentile: float) -> list[float]:
    """Per iteration, the objective beaten by ``percentile`` percent of instances.

    With 1000 instances and percentile 95 this is the 50th lowest value.
    """
    arr = np.array(histories)
    rank = max(1, math.ceil((100.0 - percentile) / 100.0 * arr.shape[0]))
    return np.sort(arr, axis=0)[rank - 1].tolist()


def hill_climb(config: SearchConfig, cache: ErrorSetCache | None = None) -> SearchResult:
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            instances = list(pool.map(_run_in_worker, [(config, s) for s in seeds]))
    else:
        cache = ErrorSetCache() if cache is None else cache
        instances = [run_instance(config, s, cache) for s in seeds]
    cache = ErrorSetCache() if cache is None else cache
    finals = [
        geometric_mean_fer(inst.stabilizer, config.objective_channels, Kind.MAP, config.target_bound, cache, config.max_errors)
        for inst in instances
    ]
    best = min(range(len(instances)), key=lambda i: (finals[i].value, instances[i].stabilizer.key))
    trace = percentile_trace([inst.history for inst in instances], config.percentile)
    return SearchResult(instances[best].stabilizer, instances[best].objective, finals[best], instances, trace)


def random_search(
    n: int,
    k: int,
    count: int,
    channels: Sequence[ChannelSpec],
    seed: int = 0,
    constraint: Constraint | str = Constraint.NONE,
    kind: Kind | str = Kind.MAP,
    target_bound: float = 0.01,
    cache: ErrorSetCache | None = None,
):
    """Yield (stabilizer, geometric-mean estimate) for ``count`` random codes."""
    cache = ErrorSetCache() if cache is None else cache
    for ss in np.random.SeedSequence(seed).spawn(count):
        s = random_stabilizer(n, k, constraint, np.random.default_rng(ss))
        yield s, geometric_mean_fer(s, channels, kind, target_bound, cache)


def describe(s: Stabilizer) -> list[str]:
    return [to_str(g, s.n) for g in s.generators]
