"""GF(2) linear algebra on int-packed row vectors."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def rref(rows: Iterable[int]) -> list[tuple[int, int]]:
    """Fully reduced row echelon form as ``[(pivot_bit, row), ...]``.

    Pivots are the highest set bit of each row; every pivot bit is cleared in
    all other rows, so reduction against the basis is canonical.
    """
    basis: list[tuple[int, int]] = []
    for v in rows:
        for piv, b in basis:
            if (v >> piv) & 1:
                v ^= b
        if not v:
            continue
        piv = v.bit_length() - 1
        basis = [(p, b ^ v) if (b >> piv) & 1 else (p, b) for p, b in basis]
        basis.append((piv, v))
    basis.sort(reverse=True)
    return basis


def reduce(v: int, basis: Sequence[tuple[int, int]]) -> int:
    for piv, b in basis:
        if (v >> piv) & 1:
            v ^= b
    return v


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


def in_span(v: int, basis: Sequence[tuple[int, int]]) -> bool:
    return reduce(v, basis) == 0


def canonical_key(rows: Iterable[int]) -> tuple[int, ...]:
    """Hashable identity of the row space."""
    return tuple(b for _, b in rref(rows))


def reduce_array(values: np.ndarray, basis: Sequence[tuple[int, int]]) -> np.ndarray:
    """Vectorised ``reduce`` over an integer array."""
    out = values.copy()
    for piv, b in basis:
        hit = ((out >> piv) & 1).astype(bool)
        out[hit] ^= out.dtype.type(b)
    return out


def span_array(rows: Sequence[int], dtype=np.int64) -> np.ndarray:
    """All 2^len(rows) GF(2) combinations; index bit j selects rows[j]."""
    out = np.zeros(1, dtype=dtype)
    for r in rows:
        out = np.concatenate([out, out ^ dtype(r)])
    return out


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of {x : popcount(x & row) even for every row}."""
    basis = rref(rows)
    pivots = {p for p, _ in basis}
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        x = 1 << free
        for piv, b in basis:
            if (b >> free) & 1:
                x |= 1 << piv
        out.append(x)
    return out


def random_combination(basis: Sequence[int], rng: np.random.Generator) -> int:
    v = 0
    if not basis:
        return v
    bits = rng.integers(0, 2, size=len(basis))
    for b, c in zip(basis, bits):
        if c:
            v ^= b
    return v
