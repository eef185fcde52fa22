"""Self-orthogonal additive cyclic GF(4) codes and their stabilizers.

A code is held in the canonical two-generator form <w p(x) + q(x), r(x)>
with p, q, r binary polynomials.  A GF(4) word u + w v maps to the Pauli
X^u Z^v, so w p + q contributes x-part q and z-part p, and r is x-only.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .gf2poly import (
    cyclic_shift,
    degree,
    factors_of_xn_minus_1,
    poly_gcd,
    poly_mod,
    poly_mul,
    poly_mul_mod,
    poly_reciprocal,
    to_bitstring,
    xn1,
)
from .pauli import Stabilizer, to_gf4


class EnumerationError(RuntimeError):
    """Internal inconsistency in the cyclic enumeration."""


@dataclass(frozen=True)
class CyclicCodeSpec:
    n: int
    p_poly: int
    q_poly: int
    r_poly: int

    @property
    def size_exponent(self) -> int:
        """log2 of the additive code size, i.e. the generator count n - k."""
        return 2 * self.n - degree(self.p_poly) - degree(self.r_poly)

    @property
    def k(self) -> int:
        return self.n - self.size_exponent

    def rows(self) -> list[int]:
        """Cyclic shifts of both generators as packed Paulis (possibly dependent)."""
        n = self.n
        mod = xn1(n)
        u = poly_mod(self.q_poly, mod)
        v = poly_mod(self.p_poly, mod)
        r = poly_mod(self.r_poly, mod)
        rows = []
        for s in range(n - degree(self.p_poly)):
            rows.append(cyclic_shift(u, n, s) | (cyclic_shift(v, n, s) << n))
        for s in range(n - degree(self.r_poly)):
            rows.append(cyclic_shift(r, n, s))
        return rows

    def as_dict(self) -> dict[str, str]:
        return {
            "p": to_bitstring(self.p_poly, self.n + 1),
            "q": to_bitstring(self.q_poly, self.n + 1),
            "r": to_bitstring(self.r_poly, self.n + 1),
        }


def _reflect(a: int, n: int) -> int:
    """a(x^(n-1)) mod x^n - 1 for any a."""
    return poly_reciprocal(poly_mod(a, xn1(n)), n)


def pr_orthogonal(n: int, p: int, r: int) -> bool:
    """p(x) r(x^(n-1)) == p(x^(n-1)) r(x) == 0 mod x^n - 1."""
    mod = xn1(n)
    return poly_mul_mod(p, _reflect(r, n), mod) == 0 and poly_mul_mod(_reflect(p, n), r, mod) == 0


def pq_orthogonal(n: int, p: int, q: int) -> bool:
    """p(x) q(x^(n-1)) == p(x^(n-1)) q(x) mod x^n - 1."""
    mod = xn1(n)
    return poly_mul_mod(p, _reflect(q, n), mod) == poly_mul_mod(_reflect(p, n), q, mod)


def canonical_form_valid(n: int, p: int, q: int, r: int) -> bool:
    """q(x)(x^n - 1) divisible by p(x) r(x) as polynomials."""
    return poly_mod(poly_mul(q, xn1(n)), poly_mul(p, r)) == 0


def to_stabilizer(c: CyclicCodeSpec) -> Stabilizer:
    rows = c.rows()
    basis = gf2.rref(rows)
    if len(basis) != c.size_exponent:
        raise EnumerationError(f"generator rank {len(basis)} != {c.size_exponent} for {c}")
    return Stabilizer(c.n, tuple(b for _, b in basis))


def enumerate_cyclic(n: int, k: int) -> list[CyclicCodeSpec]:
    """Every distinct self-orthogonal additive cyclic (n, 2^(n-k)) code, once each."""
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    divisors = factors_of_xn_minus_1(n)
    seen: set[tuple[int, ...]] = set()
    out = []
    for r in divisors:
        dp = n + k - degree(r)
        for p in divisors:
            if degree(p) != dp or not pr_orthogonal(n, p, r):
                continue
            for q in range(1 << (degree(r) + 1)):
                if not canonical_form_valid(n, p, q, r) or not pq_orthogonal(n, p, q):
                    continue
                spec = CyclicCodeSpec(n, p, q, r)
                key = gf2.canonical_key(spec.rows())
                if len(key) != n - k:
                    raise EnumerationError(f"rank {len(key)} != {n - k} for {spec}")
                if key in seen:
                    continue
                seen.add(key)
                out.append(spec)
    return out


def cyclic_span_dimension(word: int, n: int) -> int:
    """GF(2) dimension of the span of all cyclic shifts of a packed word.

    The shifts generate the F2[x]-module spanned by (u, v), whose dimension is
    n - deg gcd(u, v, x^n - 1).
    """
    mask = (1 << n) - 1
    g = poly_gcd(poly_gcd(xn1(n), word & mask), word >> n)
    return n - degree(g)


def has_single_generator(c: CyclicCodeSpec) -> tuple[bool, tuple[int, ...] | None]:
    """Whether one codeword's cyclic shifts span the code; returns a GF(4) witness."""
    s = to_stabilizer(c)
    target = s.m
    for w in s.elements[1:].tolist():
        if cyclic_span_dimension(w, c.n) == target:
            return True, to_gf4(w, c.n)
    return False, None
