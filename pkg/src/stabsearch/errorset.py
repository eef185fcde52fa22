"""Probability-ordered, permutation-invariant limited error sets.

Errors are grouped into composition classes (n_I, n_X, n_Y, n_Z); every
error in a class has the same probability, so whole classes are added in
descending probability order until the excluded mass drops below a target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .channel import PauliChannel


@dataclass(frozen=True)
class CompositionClass:
    counts: tuple[int, int, int, int]
    probability: float
    size: int

    @property
    def mass(self) -> float:
        return self.size * self.probability


def class_probability(counts: tuple[int, int, int, int], channel: PauliChannel) -> float:
    """Product of per-qubit probabilities.

    The four power terms are multiplied in sorted order so classes with the
    same multiset of factors (e.g. X and Y counts swapped when p_X == p_Y) get
    bit-identical probabilities.
    """
    terms = sorted(q**c for q, c in zip(channel.as_tuple(), counts))
    out = 1.0
    for t in terms:
        out *= t
    return out


def multinomial(counts: tuple[int, ...]) -> int:
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def enumerate_compositions(n: int, channel: PauliChannel) -> list[CompositionClass]:
    """All (n+1)(n+2)(n+3)/6 compositions of n into (I, X, Y, Z) counts."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for ni in range(n, -1, -1):
        for nx in range(n - ni, -1, -1):
            for ny in range(n - ni - nx, -1, -1):
                counts = (ni, nx, ny, n - ni - nx - ny)
                out.append(CompositionClass(counts, class_probability(counts, channel), multinomial(counts)))
    return out


def ordered_classes(n: int, channel: PauliChannel) -> list[CompositionClass]:
    """Descending probability; ties by descending (n_I, n_X, n_Y, n_Z)."""
    classes = enumerate_compositions(n, channel)
    classes.sort(key=lambda c: (-c.probability, tuple(-x for x in c.counts)))
    return classes


@lru_cache(maxsize=None)
def _masks_by_weight(n: int) -> tuple[np.ndarray, ...]:
    allm = np.arange(1 << n, dtype=np.int64)
    w = np.bitwise_count(allm)
    return tuple(allm[w == k] for k in range(n + 1))


def class_errors(n: int, counts: tuple[int, int, int, int]) -> np.ndarray:
    """Every packed Pauli with the given composition, in a fixed order."""
    _, nx, ny, nz = counts
    masks = _masks_by_weight(n)
    a, b = masks[nx], masks[ny]
    ia, ib = np.nonzero((a[:, None] & b[None, :]) == 0)
    a, b = a[ia], b[ib]
    c = masks[nz]
    ip, ic = np.nonzero(((a | b)[:, None] & c[None, :]) == 0)
    a, b, c = a[ip], b[ip], c[ic]
    return (a | b) | ((b | c) << n)


@dataclass(frozen=True)
class ErrorSet:
    """A prefix of the class ordering, with every member error materialised."""

    n: int
    channel: PauliChannel
    classes: tuple[CompositionClass, ...] = field(repr=False)
    included: int
    errors: np.ndarray = field(repr=False, compare=False)
    probabilities: np.ndarray = field(repr=False, compare=False)
    class_index: np.ndarray = field(repr=False, compare=False)
    retained_mass: float
    excluded_mass: float

    @property
    def residual(self) -> float:
        """Probability outside the set, summed directly over the excluded classes."""
        return 0.0 if self.complete else self.excluded_mass

    @property
    def complete(self) -> bool:
        return self.included == len(self.classes)

    @property
    def min_probability(self) -> float:
        return self.classes[self.included - 1].probability if self.included else 1.0

    @property
    def included_classes(self) -> tuple[CompositionClass, ...]:
        return self.classes[: self.included]

    def __len__(self) -> int:
        return len(self.errors)

    def same_as(self, other: "ErrorSet") -> bool:
        """Element-for-element equality."""
        return (
            self.n == other.n
            and self.channel == other.channel
            and self.included == other.included
            and np.array_equal(self.errors, other.errors)
            and np.array_equal(self.probabilities, other.probabilities)
        )


def _with_classes(base: ErrorSet, upto: int) -> ErrorSet:
    if upto == base.included:
        return base
    new = base.classes[base.included : upto]
    errs = [base.errors] + [class_errors(base.n, c.counts) for c in new]
    probs = [base.probabilities] + [np.full(c.size, c.probability) for c in new]
    idx = [base.class_index] + [np.full(c.size, base.included + i, dtype=np.int32) for i, c in enumerate(new)]
    errors = np.concatenate(errs)
    probabilities = np.concatenate(probs)
    class_index = np.concatenate(idx)
    for arr in (errors, probabilities, class_index):
        arr.flags.writeable = False
    retained = math.fsum(c.mass for c in base.classes[:upto])
    excluded = math.fsum(c.mass for c in base.classes[upto:])
    return ErrorSet(base.n, base.channel, base.classes, upto, errors, probabilities, class_index, retained, excluded)


def empty_error_set(n: int, channel: PauliChannel) -> ErrorSet:
    classes = tuple(ordered_classes(n, channel))
    empty = np.zeros(0, dtype=np.int64)
    total = math.fsum(c.mass for c in classes)
    return ErrorSet(n, channel, classes, 0, empty, np.zeros(0), np.zeros(0, dtype=np.int32), 0.0, total)


def _next_stop(e: ErrorSet, start: int) -> int:
    """Index just past the tie group beginning at ``start``."""
    stop = start + 1
    prob = e.classes[start].probability
    while stop < len(e.classes) and e.classes[stop].probability == prob:
        stop += 1
    return stop


def extend_error_set(e: ErrorSet, new_target_residual: float) -> ErrorSet:
    """Continue the class ordering until the residual is at most the new target."""
    upto = e.included
    excluded = e.excluded_mass
    while upto < len(e.classes) and excluded > new_target_residual:
        upto = _next_stop(e, upto)
        # summed directly (no 1 - retained cancellation) and from scratch, so
        # build and extend make identical stop decisions
        excluded = math.fsum(c.mass for c in e.classes[upto:])
    return _with_classes(e, upto)


def build_error_set(n: int, channel: PauliChannel, target_residual: float) -> ErrorSet:
    if not 0.0 < target_residual < 1.0:
        raise ValueError("target residual must lie in (0, 1)")
    return extend_error_set(empty_error_set(n, channel), target_residual)


def complete_error_set(n: int, channel: PauliChannel) -> ErrorSet:
    """Every Pauli on n qubits."""
    e = empty_error_set(n, channel)
    return _with_classes(e, len(e.classes))


def grow_error_sets(n: int, channel: PauliChannel) -> Iterator[ErrorSet]:
    """Successively larger error sets, one tie group of classes at a time."""
    e = empty_error_set(n, channel)
    while not e.complete:
        e = _with_classes(e, _next_stop(e, e.included))
        yield e
