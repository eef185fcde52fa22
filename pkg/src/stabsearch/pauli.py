"""Phase-free Pauli algebra in the binary symplectic picture.

An n-qubit Pauli X^u Z^v is packed into one int: bits ``0..n-1`` hold ``u``
(qubit 1 at bit 0) and bits ``n..2n-1`` hold ``v``.  Per-qubit symbols use
the same two-bit code as GF(4) elements u + w*v: 0 = I, 1 = X, 2 = Z, 3 = Y
(1, omega, omega-bar for X, Z, Y).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import gf2

SYMBOLS = "IXZY"
_SYMBOL_CODE = {c: i for i, c in enumerate(SYMBOLS)}

# GF(4) = {0, 1, w, w^2} encoded as u + 2v for u + w*v
GF4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)
GF4_CONJ = (0, 1, 3, 2)


def gf4_trace(a: int) -> int:
    """tr(a) = a + conj(a); 1 for w and w^2, 0 for 0 and 1."""
    t = a ^ GF4_CONJ[a]
    assert t in (0, 1)
    return t


# ----------------------------------------------------------------------------
# single vectors


def from_str(s: str) -> int:
    n = len(s)
    e = 0
    for i, ch in enumerate(s.upper()):
        try:
            c = _SYMBOL_CODE[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli symbol {ch!r} in {s!r}") from None
        if c & 1:
            e |= 1 << i
        if c & 2:
            e |= 1 << (n + i)
    return e


def to_str(e: int, n: int) -> str:
    return "".join(SYMBOLS[symbol(e, n, i)] for i in range(n))


def symbol(e: int, n: int, i: int) -> int:
    return ((e >> i) & 1) | (((e >> (n + i)) & 1) << 1)


def x_part(e: int, n: int) -> int:
    return e & ((1 << n) - 1)


def z_part(e: int, n: int) -> int:
    return e >> n


def support(e: int, n: int) -> int:
    return (e | (e >> n)) & ((1 << n) - 1)


def weight(e: int, n: int) -> int:
    return support(e, n).bit_count()


def composition(e: int, n: int) -> tuple[int, int, int, int]:
    """(n_I, n_X, n_Y, n_Z)."""
    u = x_part(e, n)
    v = z_part(e, n)
    ny = (u & v).bit_count()
    nx = u.bit_count() - ny
    nz = v.bit_count() - ny
    return n - nx - ny - nz, nx, ny, nz


def swap_halves(e: int, n: int) -> int:
    return (e >> n) | ((e & ((1 << n) - 1)) << n)


def symplectic_product(a: int, b: int, n: int) -> int:
    """u.v' + u'.v over GF(2); zero iff the Paulis commute."""
    return (a & swap_halves(b, n)).bit_count() & 1


def check_length(s: str, n: int) -> None:
    if len(s) != n:
        raise ValueError(f"expected a length-{n} Pauli string, got {s!r}")


def to_gf4(e: int, n: int) -> tuple[int, ...]:
    return tuple(symbol(e, n, i) for i in range(n))


def from_gf4(symbols: Sequence[int]) -> int:
    n = len(symbols)
    e = 0
    for i, c in enumerate(symbols):
        if c not in (0, 1, 2, 3):
            raise ValueError(f"invalid GF(4) symbol {c!r}")
        e |= (c & 1) << i
        e |= ((c >> 1) & 1) << (n + i)
    return e


def trace_inner_product(a: Sequence[int], b: Sequence[int]) -> int:
    """tr(sum_i a_i * conj(b_i)) computed with GF(4) field arithmetic."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    acc = 0
    for ai, bi in zip(a, b):
        acc ^= GF4_MUL[ai][GF4_CONJ[bi]]
    return gf4_trace(acc)


def omega_times(e: int, n: int) -> int:
    """Multiply every coordinate by w: (X, Y, Z) -> (Z, X, Y)."""
    u = x_part(e, n)
    v = z_part(e, n)
    return v | ((u ^ v) << n)


def swap_zy(e: int, n: int) -> int:
    """Exchange Z and Y on every qubit."""
    u = x_part(e, n)
    v = z_part(e, n)
    return (u ^ v) | (v << n)


def swap_xy(e: int, n: int, qubits: int | None = None) -> int:
    """Exchange X and Y on the qubits in the mask (all qubits by default)."""
    mask = (1 << n) - 1 if qubits is None else qubits
    u = x_part(e, n)
    v = z_part(e, n)
    return u | ((v ^ (u & mask)) << n)


def permute_qubits(e: int, n: int, perm: Sequence[int]) -> int:
    """Move qubit i to position perm[i]."""
    out = 0
    for i, j in enumerate(perm):
        out |= ((e >> i) & 1) << j
        out |= ((e >> (n + i)) & 1) << (n + j)
    return out


def relabel_symbols(e: int, n: int, i: int, mapping: Sequence[int]) -> int:
    """Apply a permutation of symbol codes (indexed 0..3, mapping[0] == 0) at qubit i."""
    c = mapping[symbol(e, n, i)]
    e &= ~((1 << i) | (1 << (n + i)))
    return e | ((c & 1) << i) | (((c >> 1) & 1) << (n + i))


# ----------------------------------------------------------------------------
# vectorised helpers


def weights_array(errors: np.ndarray, n: int) -> np.ndarray:
    mask = (1 << n) - 1
    return np.bitwise_count((errors | (errors >> n)) & mask)


def symbols_array(errors: np.ndarray, n: int) -> np.ndarray:
    """(len(errors), n) array of per-qubit symbol codes."""
    cols = np.arange(n)
    u = (errors[:, None] >> cols) & 1
    v = (errors[:, None] >> (cols + n)) & 1
    return (u | (v << 1)).astype(np.int8)


# ----------------------------------------------------------------------------
# stabilizers


@dataclass(frozen=True)
class Stabilizer:
    """Minimal generating set of an abelian Pauli subgroup.

    Generators are validated on construction: they must be independent and
    pairwise commuting.
    """

    n: int
    generators: tuple[int, ...]
    basis: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        gens = tuple(int(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        limit = 1 << (2 * self.n)
        if any(g <= 0 or g >= limit for g in gens):
            raise ValueError("generators must be nonidentity Paulis on n qubits")
        basis = gf2.rref(gens)
        if len(basis) != len(gens):
            raise ValueError("generators are not independent")
        if len(gens) > self.n:
            raise ValueError("too many generators")
        for a, b in itertools.combinations(gens, 2):
            if symplectic_product(a, b, self.n):
                raise ValueError(f"generators {to_str(a, self.n)} and {to_str(b, self.n)} anticommute")
        object.__setattr__(self, "basis", tuple(basis))

    @classmethod
    def from_strings(cls, strings: Sequence[str]) -> "Stabilizer":
        strings = [s.strip() for s in strings if s.strip()]
        if not strings:
            raise ValueError("at least one generator is required")
        n = len(strings[0])
        for s in strings:
            check_length(s, n)
        return cls(n, tuple(from_str(s) for s in strings))

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[int]) -> "Stabilizer":
        """Build from a possibly dependent generating set, keeping an independent subset."""
        basis = gf2.rref(rows)
        return cls(n, tuple(b for _, b in basis))

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - len(self.generators)

    def to_strings(self) -> list[str]:
        return [to_str(g, self.n) for g in self.generators]

    def __str__(self) -> str:
        return ",".join(self.to_strings())

    @cached_property
    def key(self) -> tuple[int, ...]:
        """Canonical identity of the stabilizer group (RREF rows)."""
        return tuple(b for _, b in self.basis)

    @cached_property
    def _check_masks(self) -> np.ndarray:
        return np.array([swap_halves(g, self.n) for g in self.generators], dtype=np.int64)

    @property
    def full_support(self) -> bool:
        sup = 0
        for g in self.generators:
            sup |= support(g, self.n)
        return sup == (1 << self.n) - 1

    def contains(self, e: int) -> bool:
        return gf2.in_span(e, self.basis)

    def syndrome(self, e: int) -> int:
        out = 0
        for i, g in enumerate(self.generators):
            out |= symplectic_product(g, e, self.n) << i
        return out

    def syndromes(self, errors: np.ndarray) -> np.ndarray:
        out = np.zeros(len(errors), dtype=np.int64)
        for i, mask in enumerate(self._check_masks):
            out |= (np.bitwise_count(errors & mask) & 1).astype(np.int64) << i
        return out

    def canonical(self, e: int) -> int:
        return gf2.reduce(e, self.basis)

    def canonicals(self, errors: np.ndarray) -> np.ndarray:
        return gf2.reduce_array(errors, self.basis)

    @cached_property
    def elements(self) -> np.ndarray:
        """All 2^(n-k) group elements (phases dropped)."""
        return gf2.span_array(self.generators)

    @cached_property
    def normalizer_basis(self) -> tuple[int, ...]:
        return tuple(gf2.nullspace([swap_halves(g, self.n) for g in self.generators], 2 * self.n))

    def permuted(self, perm: Sequence[int]) -> "Stabilizer":
        return Stabilizer(self.n, tuple(permute_qubits(g, self.n, perm) for g in self.generators))

    def mapped(self, fn) -> "Stabilizer":
        """Apply a per-vector map (e.g. ``swap_zy``) to every generator."""
        return Stabilizer(self.n, tuple(fn(g, self.n) for g in self.generators))


def cyclic_stabilizer(generator: str) -> Stabilizer:
    """Stabilizer spanned by all cyclic shifts of one Pauli string."""
    n = len(generator)
    rows = [from_str(generator[-s:] + generator[:-s]) if s else from_str(generator) for s in range(n)]
    return Stabilizer.from_rows(n, rows)


def _check_error(s: Stabilizer, e: int) -> None:
    if e < 0 or e >= 1 << (2 * s.n):
        raise ValueError(f"error does not fit on {s.n} qubits")


def syndrome_of(s: Stabilizer, e: int) -> int:
    """Bit i is the commutation sign of e with generator i."""
    _check_error(s, e)
    return s.syndrome(e)


def coset_canonical(s: Stabilizer, e: int) -> int:
    """Unique representative of the coset e*S."""
    _check_error(s, e)
    return s.canonical(e)


def normalizer_elements(s: Stabilizer) -> Iterator[int]:
    """All 2^(n+k) vectors commuting with every generator (Gray-code order)."""
    basis = s.normalizer_basis
    v = 0
    yield v
    for i in range(1, 1 << len(basis)):
        v ^= basis[(i & -i).bit_length() - 1]
        yield v


def distance(s: Stabilizer) -> int:
    """Minimum weight over N(S) minus S."""
    if s.k < 1:
        raise ValueError("distance needs k >= 1")
    normal = gf2.span_array(s.normalizer_basis)
    logical = normal[s.canonicals(normal) != 0]
    return int(weights_array(logical, s.n).min())


# ----------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class StructureReport:
    is_css: bool
    is_cssy: bool
    is_dual_containing_css: bool
    is_linear: bool
    has_weight4_rep: bool
    full_support: bool

    def as_dict(self) -> dict[str, bool]:
        return dict(self.__dict__)


def _css_split(elements: np.ndarray, n: int, m: int) -> tuple[bool, list[int], list[int]]:
    mask = (1 << n) - 1
    x_only = [int(e) for e in elements if e and not (e >> n)]
    z_only = [int(e) for e in elements if e and not (e & mask)]
    xb = gf2.rref(x_only)
    zb = gf2.rref(z_only)
    return len(xb) + len(zb) == m, [b for _, b in xb], [b >> n for _, b in zb]


def classify_structure(s: Stabilizer) -> StructureReport:
    n, m = s.n, s.m
    elements = s.elements
    is_css, hx, hz = _css_split(elements, n, m)
    swapped = np.array([swap_zy(int(e), n) for e in elements], dtype=np.int64)
    is_cssy = _css_split(swapped, n, m)[0]
    dual_containing = is_css and gf2.canonical_key(hx) == gf2.canonical_key(hz)
    is_linear = all(s.contains(omega_times(g, n)) for g in s.generators)
    w4 = elements[weights_array(elements, n) == 4]
    has_w4 = gf2.rank(int(e) for e in w4) == m
    return StructureReport(is_css, is_cssy, dual_containing, is_linear, has_w4, s.full_support)


# ----------------------------------------------------------------------------
# permutation equivalence


def _type_enumerator(s: Stabilizer) -> tuple:
    return tuple(sorted(Counter(composition(int(e), s.n) for e in s.elements).items()))


def _qubit_signatures(sym: np.ndarray, wts: np.ndarray) -> list[tuple]:
    return [tuple(sorted(Counter(zip(sym[:, q].tolist(), wts.tolist())).items())) for q in range(sym.shape[1])]


@dataclass(frozen=True)
class _EquivData:
    sym: np.ndarray
    sigs: tuple
    invariant: tuple


def _equiv_data(s: Stabilizer) -> _EquivData:
    elements = s.elements
    sym = symbols_array(elements, s.n).astype(np.int64)
    sigs = tuple(_qubit_signatures(sym, weights_array(elements, s.n)))
    return _EquivData(sym, sigs, (s.n, s.m, _type_enumerator(s), tuple(sorted(sigs))))


def equivalence_invariant(s: Stabilizer) -> tuple:
    """Qubit-permutation invariant; equal for equivalent stabilizers."""
    return _equiv_data(s).invariant


def _find_permutation(a: _EquivData, b: _EquivData) -> list[int] | None:
    n = a.sym.shape[1]
    cands = [[j for j in range(n) if b.sigs[j] == a.sigs[i]] for i in range(n)]
    if any(not c for c in cands):
        return None
    order = sorted(range(n), key=lambda i: len(cands[i]))
    perm = [-1] * n
    used = [False] * n

    def search(depth: int, ka: np.ndarray, kb: np.ndarray) -> bool:
        if depth == n:
            return True
        i = order[depth]
        na = ka * 4 + a.sym[:, i]
        sa = np.sort(na)
        for j in cands[i]:
            if used[j]:
                continue
            nb = kb * 4 + b.sym[:, j]
            if np.array_equal(sa, np.sort(nb)):
                used[j] = True
                perm[i] = j
                if search(depth + 1, na, nb):
                    return True
                used[j] = False
        return False

    zero = np.zeros(len(a.sym), dtype=np.int64)
    return perm if search(0, zero, zero) else None


def find_equivalence(a: Stabilizer, b: Stabilizer) -> list[int] | None:
    """A qubit permutation taking a onto b (qubit i -> perm[i]), or None."""
    if a.n != b.n or a.m != b.m:
        return None
    da, db = _equiv_data(a), _equiv_data(b)
    if da.invariant != db.invariant:
        return None
    return _find_permutation(da, db)


def permutation_equivalent(a: Stabilizer, b: Stabilizer) -> bool:
    return find_equivalence(a, b) is not None


def equivalence_classes(stabs: Sequence[Stabilizer]) -> list[list[int]]:
    """Partition indices of ``stabs`` into qubit-permutation equivalence classes."""
    data = [_equiv_data(s) for s in stabs]
    buckets: dict[tuple, list[list[int]]] = {}
    classes: list[list[int]] = []
    for idx, d in enumerate(data):
        reps = buckets.setdefault(d.invariant, [])
        for cls in reps:
            if _find_permutation(d, data[cls[0]]) is not None:
                cls.append(idx)
                break
        else:
            cls = [idx]
            reps.append(cls)
            classes.append(cls)
    return classes
