from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from stabsearch.channel import ChannelSpec, PauliChannel, resolve
from stabsearch.errorset import (
    build_error_set,
    complete_error_set,
    class_errors,
    class_probability,
    empty_error_set,
    enumerate_compositions,
    extend_error_set,
    grow_error_sets,
    multinomial,
    ordered_classes,
)
from stabsearch.pauli import composition, permute_qubits, to_str

XZ = resolve(ChannelSpec.parse("xz:p=0.01,eta=10"))
AD = resolve(ChannelSpec.parse("ad:p=0.1,eta=10"))


def test_composition_counts():
    one = enumerate_compositions(1, XZ)
    assert len(one) == 4 and all(c.size == 1 for c in one)
    seven = enumerate_compositions(7, XZ)
    assert len(seven) == 120
    by_counts = {c.counts: c for c in seven}
    assert by_counts[7, 0, 0, 0].size == 1
    assert by_counts[4, 1, 1, 1].size == 210
    assert sum(c.size for c in seven) == 4**7


@pytest.mark.parametrize("n", [1, 3, 6, 9, 12])
def test_class_mass_normalised(n):
    classes = enumerate_compositions(n, XZ)
    assert math.isclose(math.fsum(c.mass for c in classes), 1.0, abs_tol=1e-10)


@pytest.mark.parametrize("counts", [(4, 1, 1, 1), (0, 7, 0, 0), (2, 2, 2, 1), (7, 0, 0, 0), (1, 0, 3, 3)])
def test_class_errors_exact(counts):
    errs = class_errors(7, counts).tolist()
    assert len(errs) == len(set(errs)) == multinomial(counts)
    assert all(composition(e, 7) == counts for e in errs)


def test_class_probability_ties_are_bit_exact():
    # p_X == p_Y on AD, so swapping X and Y counts must give the same float
    for counts in itertools.product(range(4), repeat=4):
        swapped = (counts[0], counts[2], counts[1], counts[3])
        assert class_probability(counts, AD) == class_probability(swapped, AD)


def test_full_enumeration_normalised():
    probs = oracle.channel_dict(XZ)
    total = math.fsum(oracle.probability(e, probs) for e in oracle.all_paulis(6))
    assert math.isclose(total, 1.0, abs_tol=1e-10)


def test_identity_first_for_small_p():
    e = build_error_set(5, XZ, 0.5)
    assert e.classes[0].counts == (5, 0, 0, 0)
    assert e.errors[0] == 0


def test_complete_set_at_n5():
    e = build_error_set(5, XZ, 1e-300)
    assert e.complete and len(e) == 1024 and e.residual == 0.0
    assert len(np.unique(e.errors)) == 1024
    assert math.isclose(e.retained_mass, 1.0, abs_tol=1e-12)


def test_residual_has_no_cancellation():
    # heavily biased channel: trailing classes weigh far less than one ulp of 1.0
    ch = resolve(ChannelSpec.parse("ad:p=0.1,eta=100"))
    e = build_error_set(6, ch, 1e-30)
    assert 0.0 < e.residual <= 1e-30 or e.complete
    assert e.residual == math.fsum(c.mass for c in e.classes[e.included :]) or e.complete
    full = complete_error_set(6, ch)
    assert full.complete and len(full) == 4**6 and full.residual == 0.0


def test_probabilities_match_strings():
    e = build_error_set(5, AD, 0.01)
    probs = oracle.channel_dict(AD)
    for err, p in zip(e.errors.tolist(), e.probabilities.tolist()):
        assert math.isclose(oracle.probability(to_str(err, 5), probs), p, rel_tol=1e-12)


def test_order_against_independent_sort():
    e = build_error_set(7, XZ, 0.1)
    assert e.retained_mass >= 0.9
    incl = [c.probability for c in e.included_classes]
    excl = [c.probability for c in e.classes[e.included :]]
    assert min(incl) >= max(excl)
    independent = sorted(enumerate_compositions(7, XZ), key=lambda c: -c.probability)
    assert [c.probability for c in independent] == [c.probability for c in e.classes]


def test_probability_nonincreasing_within_set():
    e = build_error_set(8, AD, 0.001)
    assert np.all(np.diff(e.probabilities) <= 0)


@pytest.mark.parametrize("ch", [XZ, AD], ids=["xz", "ad"])
def test_extend_equals_build(ch):
    b1 = build_error_set(7, ch, 0.1)
    assert extend_error_set(b1, b1.residual).same_as(b1)
    assert extend_error_set(b1, 0.01).same_as(build_error_set(7, ch, 0.01))
    chained = extend_error_set(extend_error_set(b1, 0.01), 0.001)
    assert chained.same_as(build_error_set(7, ch, 0.001))


@given(st.floats(1e-6, 0.1), st.floats(1.0, 1000))
def test_ties_never_split(p, eta):
    ch = resolve(ChannelSpec("ad", p, eta))
    e = build_error_set(6, ch, 0.05)
    if not e.complete:
        assert e.classes[e.included - 1].probability != e.classes[e.included].probability


def test_size_invariant_under_relabelling():
    e = build_error_set(6, XZ, 0.001)
    perm = [3, 0, 5, 1, 4, 2]
    moved = {permute_qubits(x, 6, perm) for x in e.errors.tolist()}
    assert moved == set(e.errors.tolist())


def test_bad_target_rejected():
    with pytest.raises(ValueError):
        build_error_set(5, XZ, 0.0)
    with pytest.raises(ValueError):
        build_error_set(5, XZ, 1.0)


def test_zero_identity_channel():
    ch = PauliChannel(0.0, 0.5, 0.25, 0.25)
    e = build_error_set(3, ch, 0.2)
    assert e.classes[0].counts[0] == 0 and e.retained_mass >= 0.8


def test_growth_is_monotone():
    sizes = [len(e) for e in grow_error_sets(5, XZ)]
    assert sizes == sorted(sizes) and sizes[-1] == 1024
    assert len(empty_error_set(5, XZ)) == 0


def test_tie_order_deterministic():
    classes = ordered_classes(6, AD)
    for a, b in zip(classes, classes[1:]):
        if a.probability == b.probability:
            assert tuple(-x for x in a.counts) < tuple(-x for x in b.counts)
