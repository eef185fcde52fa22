"""Frame error rate estimators over a limited error set.

Three decoders are modelled:

* ``MAP``: most probable coset of the stabilizer per syndrome,
* ``SE``: coset of the single most probable error per syndrome,
* ``SEO``: the single most probable error alone (classical decoding of the
  associated [2n, n+k] binary code).

Each estimate carries a computable upper bound on its relative error with
respect to the same decoder evaluated on the full Pauli group.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .channel import ChannelSpec, PauliChannel, resolve
from .errorset import ErrorSet, empty_error_set, extend_error_set
from .pauli import Stabilizer


class Kind(str, Enum):
    MAP = "map"
    SE = "se"
    SEO = "seo"


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, best: "FEREstimate | None" = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class FEREstimate:
    value: float
    kind: Kind
    residual: float
    bound: float  # math.inf when unbounded
    syndrome_count_r: int
    error_count: int
    alpha: float | None = None

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.bound)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "bound": self.bound if self.bounded else None,
            "residual": self.residual,
            "kind": self.kind.value,
            "syndromes": self.syndrome_count_r,
            "errors": self.error_count,
            "alpha": self.alpha,
        }


def relative_bound(value: float, slack: float) -> float:
    """slack / (value - slack), or inf when the estimate does not exceed the slack."""
    if slack == 0.0:
        return 0.0
    denom = value - slack
    return slack / denom if denom > 0.0 else math.inf


def _check(s: Stabilizer, e: ErrorSet) -> None:
    if s.n != e.n:
        raise ValueError(f"stabilizer has n={s.n} but error set has n={e.n}")


def _segments(sorted_keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    starts = np.flatnonzero(np.r_[True, sorted_keys[1:] != sorted_keys[:-1]])
    ends = np.r_[starts[1:], len(sorted_keys)]
    return starts, ends


def _coset_masses(s: Stabilizer, e: ErrorSet):
    """Exactly rounded probability of each coset's intersection with E.

    Returns (coset_keys, coset_syndromes, coset_masses) sorted by coset key.
    """
    canon = s.canonicals(e.errors)
    ncls = len(e.classes)
    pair = canon * ncls + e.class_index
    uniq, counts = np.unique(pair, return_counts=True)
    cos = uniq // ncls
    cls_prob = np.array([c.probability for c in e.classes])
    terms = (counts * cls_prob[uniq % ncls]).tolist()
    starts, ends = _segments(cos)
    masses = np.array([math.fsum(terms[a:b]) for a, b in zip(starts.tolist(), ends.tolist())])
    keys = cos[starts]
    return keys, s.syndromes(keys), masses


def _finish(value_mass: list[float], kind: Kind, e: ErrorSet, r: int, alpha: float | None = None) -> FEREstimate:
    value = min(1.0, max(0.0, 1.0 - math.fsum(value_mass)))
    residual = e.residual
    slack = residual if alpha is None else min(residual, alpha)
    bound = 0.0 if e.complete else relative_bound(value, slack)
    return FEREstimate(value, kind, residual, bound, r, len(e), alpha)


def fer_map(s: Stabilizer, e: ErrorSet) -> FEREstimate:
    """1 - sum over syndromes of the heaviest coset mass within E."""
    _check(s, e)
    if len(e) == 0:
        return _finish([], Kind.MAP, e, 0)
    _, syn, masses = _coset_masses(s, e)
    order = np.lexsort((masses, syn))
    starts, ends = _segments(syn[order])
    best = masses[order[ends - 1]]
    return _finish(best.tolist(), Kind.MAP, e, len(starts))


def fer_se(s: Stabilizer, e: ErrorSet) -> FEREstimate:
    """1 - sum over syndromes of the mass of the most probable error's coset.

    Equally probable leaders are resolved in favour of the heavier coset, which
    keeps the value independent of qubit labels; remaining ties go to the
    smallest packed error.
    """
    _check(s, e)
    if len(e) == 0:
        return _finish([], Kind.SE, e, 0)
    keys, _, masses = _coset_masses(s, e)
    syn = s.syndromes(e.errors)
    own = masses[np.searchsorted(keys, s.canonicals(e.errors))]
    order = np.lexsort((e.errors, -own, -e.probabilities, syn))
    starts, _ = _segments(syn[order])
    return _finish(own[order[starts]].tolist(), Kind.SE, e, len(starts))


def fer_seo(s: Stabilizer, e: ErrorSet) -> FEREstimate:
    """1 - sum over syndromes of the single most probable error.

    The bound also uses alpha = (2^(n-k) - r) * min P over E, valid because
    E holds the most probable errors.
    """
    _check(s, e)
    if len(e) == 0:
        return _finish([], Kind.SEO, e, 0, alpha=float(1 << s.m))
    syn = s.syndromes(e.errors)
    # errors are stored in nonincreasing probability order, so first hits are maxima
    _, first = np.unique(syn, return_index=True)
    r = len(first)
    alpha = ((1 << s.m) - r) * e.min_probability
    return _finish(e.probabilities[first].tolist(), Kind.SEO, e, r, alpha=alpha)


ESTIMATORS = {Kind.MAP: fer_map, Kind.SE: fer_se, Kind.SEO: fer_seo}


def estimate(s: Stabilizer, e: ErrorSet, kind: Kind | str) -> FEREstimate:
    return ESTIMATORS[Kind(kind)](s, e)


class ErrorSetCache:
    """Error sets per (n, channel, residual decade), each extended from the previous decade."""

    def __init__(self, max_errors: int | None = None):
        self.max_errors = max_errors
        self._sets: dict[tuple[int, PauliChannel, int], ErrorSet] = {}
        self._lock = threading.Lock()

    def get(self, n: int, channel: PauliChannel, decade: int) -> ErrorSet:
        """Error set with residual at most 10**-decade."""
        with self._lock:
            return self._get(n, channel, decade)

    def _get(self, n: int, channel: PauliChannel, decade: int) -> ErrorSet:
        key = (n, channel, decade)
        hit = self._sets.get(key)
        if hit is None:
            base = self._get(n, channel, decade - 1) if decade > 1 else empty_error_set(n, channel)
            hit = extend_error_set(base, 10.0**-decade)
            self._sets[key] = hit
        return hit

    def clear(self) -> None:
        with self._lock:
            self._sets.clear()


_default_cache = ErrorSetCache()


def fer_adaptive(
    s: Stabilizer,
    spec: ChannelSpec | PauliChannel,
    kind: Kind | str = Kind.MAP,
    target_bound: float = 0.01,
    cache: ErrorSetCache | None = None,
    max_errors: int | None = None,
) -> FEREstimate:
    """Evaluate at residual 0.1, then tighten by decades until the bound is met."""
    if not target_bound > 0:
        raise ValueError("target bound must be positive")
    cache = _default_cache if cache is None else cache
    max_errors = max_errors if max_errors is not None else cache.max_errors
    channel = spec if isinstance(spec, PauliChannel) else resolve(spec)
    estimator = ESTIMATORS[Kind(kind)]
    decade = 1
    e = cache.get(s.n, channel, decade)
    est = estimator(s, e)
    while est.bound > target_bound and not e.complete:
        decade += 1
        nxt = cache.get(s.n, channel, decade)
        if max_errors is not None and len(nxt) > max_errors:
            raise BudgetExceeded(f"error set would exceed {max_errors} errors at residual 1e-{decade}", est)
        if nxt.included != e.included:
            est = estimator(s, nxt)
        e = nxt
    return est


@dataclass(frozen=True)
class GeoMeanEstimate:
    value: float
    bound: float
    estimates: tuple[FEREstimate, ...]


def geometric_mean(values: Sequence[float]) -> float:
    if len(values) == 1:
        return float(values[0])
    if any(v <= 0.0 for v in values):
        return 0.0
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


def geometric_mean_fer(
    s: Stabilizer,
    specs: Sequence[ChannelSpec | PauliChannel],
    kind: Kind | str = Kind.MAP,
    target_bound: float = 0.01,
    cache: ErrorSetCache | None = None,
    max_errors: int | None = None,
) -> GeoMeanEstimate:
    """Geometric mean across channels; its relative error is at most the worst per-channel bound."""
    if not specs:
        raise ValueError("at least one channel is required")
    ests = tuple(fer_adaptive(s, c, kind, target_bound, cache, max_errors) for c in specs)
    return GeoMeanEstimate(geometric_mean([x.value for x in ests]), max(x.bound for x in ests), ests)
