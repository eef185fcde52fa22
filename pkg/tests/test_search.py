from __future__ import annotations

import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabsearch.channel import ChannelSpec
from stabsearch.fer import ErrorSetCache, Kind, geometric_mean_fer
from stabsearch.pauli import classify_structure, weight
from stabsearch.search import (
    ALL_PERMS,
    NONTRIVIAL_PERMS,
    OMEGA_PERMS,
    Constraint,
    InfeasibleConstraint,
    Mutation,
    SearchConfig,
    generator_mutation,
    hill_climb,
    mutate,
    percentile_trace,
    permutation_mutation,
    random_search,
    random_stabilizer,
    satisfies,
)

CH = [ChannelSpec.parse("xz:p=0.01,eta=10")]
CASES = [(5, 1), (6, 2), (7, 1), (7, 3), (8, 2)]


def test_permutation_tables():
    assert len(ALL_PERMS) == 6 and len(NONTRIVIAL_PERMS) == 5
    for p in ALL_PERMS:
        assert p[0] == 0 and sorted(p) == [0, 1, 2, 3]
    assert len(OMEGA_PERMS) == 2 and all(p in NONTRIVIAL_PERMS for p in OMEGA_PERMS)


@pytest.mark.parametrize("constraint", list(Constraint))
@pytest.mark.parametrize("n, k", CASES)
def test_random_stabilizer_respects_constraint(constraint, n, k, rng):
    if constraint is Constraint.LINEAR and (n - k) % 2:
        with pytest.raises(InfeasibleConstraint):
            random_stabilizer(n, k, constraint, rng)
        return
    for _ in range(5):
        s = random_stabilizer(n, k, constraint, rng)
        assert s.n == n and s.k == k and s.full_support
        assert satisfies(s, constraint)
    if constraint is Constraint.WEIGHT4:
        assert all(weight(g, n) == 4 for g in s.generators)
    if constraint is Constraint.LINEAR:
        assert classify_structure(s).is_linear


def test_linear_without_full_support_is_infeasible(rng):
    t0 = time.perf_counter()
    with pytest.raises(InfeasibleConstraint):
        random_stabilizer(5, 3, Constraint.LINEAR, rng)
    assert time.perf_counter() - t0 < 60


def test_random_stabilizer_bad_k(rng):
    with pytest.raises(ValueError):
        random_stabilizer(5, 5, Constraint.NONE, rng)


def test_random_generators_cover_complement():
    # at [[2,1]] every nonidentity commuting Pauli should eventually appear as a generator
    r = np.random.default_rng(0)
    seen = {random_stabilizer(2, 1, Constraint.NONE, r).key for _ in range(300)}
    assert len(seen) == 9  # full-support one-generator codes on two qubits


@pytest.mark.parametrize("constraint", list(Constraint))
@pytest.mark.parametrize("kind", list(Mutation))
def test_mutations_preserve_constraint(constraint, kind, rng):
    n, k = 8, 2
    s = random_stabilizer(n, k, constraint, rng)
    if kind is Mutation.PERMUTATION and constraint in (Constraint.CSS, Constraint.CSSY):
        with pytest.raises(ValueError):
            mutate(s, kind, constraint, rng)
        return
    for _ in range(10):
        s = mutate(s, kind, constraint, rng)
        assert s.k == k and satisfies(s, constraint)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_permutation_mutation_keeps_weights(seed):
    r = np.random.default_rng(seed)
    s = random_stabilizer(7, 1, Constraint.NONE, r)
    t = permutation_mutation(s, Constraint.NONE, r)
    assert [weight(g, 7) for g in s.generators] == [weight(g, 7) for g in t.generators]


def test_identity_perm_option_changes_draws():
    r1, r2 = np.random.default_rng(5), np.random.default_rng(5)
    s = random_stabilizer(9, 1, Constraint.NONE, np.random.default_rng(1))
    a = [permutation_mutation(s, Constraint.NONE, r1).key for _ in range(30)]
    b = [permutation_mutation(s, Constraint.NONE, r2, include_identity_perm=True).key for _ in range(30)]
    assert a != b


def test_generator_mutation_keeps_most_generators(rng):
    s = random_stabilizer(9, 1, Constraint.NONE, rng)
    kept = []
    for _ in range(200):
        t = generator_mutation(s, Constraint.NONE, rng)
        kept.append(len(set(s.generators) & set(t.generators)))
    # each of the 8 generators survives with probability 7/8
    assert 6.0 < np.mean(kept) < 8.0


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(5, 1, restarts=0, objective_channels=CH)
    with pytest.raises(InfeasibleConstraint):
        SearchConfig(6, 3, objective_channels=CH, constraint=Constraint.LINEAR)
    with pytest.raises(ValueError):
        SearchConfig(6, 2, objective_channels=CH, constraint="css", mutation="permutation")
    with pytest.raises(ValueError):
        SearchConfig(6, 2, objective_channels=[])


def _small(**kw):
    base = dict(n=6, k=1, restarts=6, iterations=25, objective_channels=CH, seed=11)
    base.update(kw)
    return SearchConfig(**base)


def test_hill_climb_traces_nonincreasing():
    res = hill_climb(_small())
    for inst in res.instances:
        assert all(b <= a for a, b in zip(inst.history, inst.history[1:]))
        assert inst.history[-1] == inst.objective
    assert all(b <= a for a, b in zip(res.trace, res.trace[1:]))
    assert len(res.trace) == 26


def test_hill_climb_acceptance_is_sound():
    cfg = _small(restarts=3)
    res = hill_climb(cfg)
    cache = ErrorSetCache()
    for inst in res.instances:
        again = geometric_mean_fer(inst.stabilizer, CH, Kind.SEO, cfg.target_bound, cache).value
        assert again == inst.objective


def test_best_code_is_argmin_and_map_below_seo():
    cfg = _small()
    res = hill_climb(cfg)
    cache = ErrorSetCache()
    maps = [geometric_mean_fer(i.stabilizer, CH, Kind.MAP, 0.01, cache).value for i in res.instances]
    assert res.final_fer_map.value == min(maps)
    assert res.final_fer_map.value <= res.objective_seo


def test_zero_iterations_is_random_search():
    res = hill_climb(_small(iterations=0))
    assert all(len(i.history) == 1 for i in res.instances)


def test_deterministic_across_workers():
    a = hill_climb(_small(workers=1))
    b = hill_climb(_small(workers=3))
    assert a.best_stabilizer.key == b.best_stabilizer.key
    assert a.trace == b.trace
    assert [i.history for i in a.instances] == [i.history for i in b.instances]


@pytest.mark.parametrize("constraint", list(Constraint))
def test_constrained_climbs_stay_in_family(constraint):
    n, k = (8, 2)
    mutation = Mutation.GENERATOR if constraint in (Constraint.CSS, Constraint.CSSY) else Mutation.COMBINED
    cfg = _small(n=n, k=k, restarts=2, iterations=10, constraint=constraint, mutation=mutation, check_constraints=True)
    res = hill_climb(cfg)
    for inst in res.instances:
        assert satisfies(inst.stabilizer, constraint)


def test_percentile_definition():
    hist = [[float(i)] for i in range(1000)]
    assert percentile_trace(hist, 95.0) == [49.0]  # the 50th lowest value
    assert percentile_trace([[3.0], [1.0]], 95.0) == [1.0]


def test_random_search_deterministic():
    a = [(s.key, g.value) for s, g in random_search(6, 2, 5, CH, seed=4)]
    b = [(s.key, g.value) for s, g in random_search(6, 2, 5, CH, seed=4)]
    assert a == b and len(a) == 5
