"""Binary polynomials over GF(2) packed into Python ints.

Bit ``i`` of the integer is the coefficient of ``x**i``; addition is XOR.
The zero polynomial has degree ``-1`` (``NEG_INF_DEGREE``).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

NEG_INF_DEGREE = -1


def degree(a: int) -> int:
    return a.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-free product of two binary polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ValueError("division by the zero polynomial")
    db = degree(b)
    q = 0
    while a and degree(a) >= db:
        shift = degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_mod(a: int, modulus: int) -> int:
    return poly_divmod(a, modulus)[1]


def poly_mul_mod(a: int, b: int, modulus: int) -> int:
    """Return ``a*b mod modulus``. Raises ``ValueError`` for a zero modulus."""
    if modulus == 0:
        raise ValueError("modulus must be nonzero")
    return poly_mod(poly_mul(a, b), modulus)


def xn1(n: int) -> int:
    """The polynomial x^n + 1 (equal to x^n - 1 over GF(2))."""
    return (1 << n) | 1


def poly_reciprocal(a: int, n: int) -> int:
    """Map a(x) to a(x^(n-1)) mod x^n - 1, i.e. coefficient i moves to (n - i) mod n."""
    if n < 1 or degree(a) >= n:
        raise ValueError(f"polynomial degree must be below n={n}")
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= 1 << ((n - i) % n)
        a >>= 1
        i += 1
    return out


def cyclic_shift(a: int, n: int, s: int = 1) -> int:
    """x^s * a(x) mod x^n - 1 for deg(a) < n."""
    s %= n
    mask = (1 << n) - 1
    return ((a << s) | (a >> (n - s))) & mask


def cyclotomic_cosets(n: int) -> list[list[int]]:
    """2-cyclotomic cosets modulo an odd n."""
    if n % 2 == 0:
        raise ValueError("cyclotomic cosets are only used for odd n")
    seen: set[int] = set()
    cosets = []
    for s in range(n):
        if s in seen:
            continue
        coset = []
        j = s
        while j not in coset:
            coset.append(j)
            j = (2 * j) % n
        seen.update(coset)
        cosets.append(coset)
    return cosets


def _odd_irreducible_factors(m: int) -> list[int]:
    """Irreducible factors of x^m + 1 for odd m, one per cyclotomic coset.

    Grows candidate factors degree by degree; each coset of size d contributes
    one irreducible of degree d, and the odd-m polynomial is squarefree.
    """
    remaining = xn1(m)
    sizes = sorted(len(c) for c in cyclotomic_cosets(m))
    factors = []
    for d in sorted(set(sizes)):
        wanted = sizes.count(d)
        found = 0
        # degree-d candidates with nonzero constant term (x never divides x^m + 1)
        for cand in range((1 << d) | 1, 1 << (d + 1), 2):
            q, r = poly_divmod(remaining, cand)
            if r == 0 and _is_irreducible(cand):
                factors.append(cand)
                remaining = q
                found += 1
                if found == wanted:
                    break
        if found != wanted:
            raise ArithmeticError(f"factorization of x^{m}+1 failed at degree {d}")
    if remaining != 1:
        raise ArithmeticError(f"factorization of x^{m}+1 left cofactor {remaining:b}")
    return factors


def _is_irreducible(f: int) -> bool:
    d = degree(f)
    if d <= 0:
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if 1 <= degree(g) <= d // 2 and poly_divmod(f, g)[1] == 0:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_factorization(n: int) -> tuple[tuple[int, int], ...]:
    """Factorization of x^n + 1 as ``((factor, multiplicity), ...)``.

    With n = 2^e * m (m odd), x^n + 1 = (x^m + 1)^(2^e) over GF(2).
    """
    if n < 1:
        raise ValueError("n must be positive")
    e = 0
    m = n
    while m % 2 == 0:
        m //= 2
        e += 1
    return tuple((f, 1 << e) for f in _odd_irreducible_factors(m))


@lru_cache(maxsize=None)
def factors_of_xn_minus_1(n: int) -> tuple[int, ...]:
    """Every monic divisor of x^n + 1, each once, sorted by (degree, value)."""
    fac = irreducible_factorization(n)
    divisors = []
    for mults in product(*(range(m + 1) for _, m in fac)):
        d = 1
        for (f, _), k in zip(fac, mults):
            for _ in range(k):
                d = poly_mul(d, f)
        divisors.append(d)
    return tuple(sorted(divisors, key=lambda f: (degree(f), f)))


def to_bitstring(a: int, length: int | None = None) -> str:
    """Little-endian bitstring: "11010" is 1 + x + x^3."""
    if length is None:
        length = max(degree(a) + 1, 1)
    return "".join("1" if (a >> i) & 1 else "0" for i in range(length))


def from_bitstring(s: str) -> int:
    out = 0
    for i, ch in enumerate(s):
        if ch == "1":
            out |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid bit {ch!r} in {s!r}")
    return out


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a
