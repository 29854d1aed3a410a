"""Exact arithmetic in GF(q) for q = 2^(2t), together with its index-two
subfield GF(r), r = 2^t.

An element is a canonical bit-representative: the integer a < q stands for
the residue class of sum_i bit_i(a) * X^i modulo a fixed irreducible degree-2t
polynomial over GF(2).  Addition is XOR.  Multiplication, inversion and both
trace maps are table-driven; with q <= 256 every table is tiny and exact.

The reduction polynomial is part of the field description and is recorded in
every serialized artifact so results are bit-for-bit reproducible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConfigError

# Fixed reduction polynomials (bit masks) for 2t in {2, 4, 6, 8}.
REDUCTION_POLYS = {
    1: 0b111,        # X^2 + X + 1
    2: 0b10011,      # X^4 + X + 1
    3: 0b1000011,    # X^6 + X + 1
    4: 0b100011101,  # X^8 + X^4 + X^3 + X^2 + 1
}


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials given as bit masks."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(p: int, mod: int) -> int:
    """Remainder of p modulo mod, both GF(2) polynomials as bit masks."""
    d = poly_degree(mod)
    while poly_degree(p) >= d:
        p ^= mod << (poly_degree(p) - d)
    return p


def is_irreducible(poly: int) -> bool:
    """Brute-force factor search over all divisors of degree <= deg(poly)/2."""
    deg = poly_degree(poly)
    if deg < 1:
        return False
    for f in range(2, 1 << (deg // 2 + 1)):
        if poly_degree(f) >= 1 and poly_mod(poly, f) == 0:
            return False
    return True


class GF:
    """GF(2^(2t)) arithmetic with the GF(2^t) subfield structure.

    Scalar operations take and return plain ints (canonical representatives).
    The lookup tables ``mul_table`` (q x q), ``inv_table``, ``trace2_table``
    and ``subtrace_table`` are public numpy arrays so callers can vectorize:
    ``gf.mul_table[a, b]`` multiplies elementwise for integer arrays a, b,
    and XOR is field addition.
    """

    def __init__(self, t: int, reduction_poly: int | None = None):
        if t not in REDUCTION_POLYS:
            raise ConfigError(f"t={t} unsupported; need t in {sorted(REDUCTION_POLYS)}")
        poly = REDUCTION_POLYS[t] if reduction_poly is None else reduction_poly
        if poly_degree(poly) != 2 * t:
            raise ConfigError(f"reduction polynomial {poly:#x} does not have degree {2 * t}")
        if not is_irreducible(poly):
            raise ConfigError(f"reduction polynomial {poly:#x} is reducible over GF(2)")
        self.t = t
        self.r = 1 << t
        self.q = 1 << (2 * t)
        self.poly = poly

        q = self.q
        mul = np.zeros((q, q), dtype=np.uint16)
        for a in range(1, q):
            for b in range(a, q):
                p = poly_mod(clmul(a, b), poly)
                mul[a, b] = p
                mul[b, a] = p
        self.mul_table = mul

        inv = np.zeros(q, dtype=np.uint16)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv

        # tr(a) = a + a^2 + ... + a^(2^(2t-1)), landing in {0, 1}
        tr2 = np.zeros(q, dtype=np.uint16)
        subtr = np.zeros(q, dtype=np.uint16)
        for a in range(q):
            acc, x = 0, a
            for _ in range(2 * t):
                acc ^= x
                x = int(mul[x, x])
            tr2[a] = acc
            x = a
            for _ in range(t):
                x = int(mul[x, x])
            subtr[a] = a ^ x  # a + a^r, the GF(r)-trace
        if not set(int(v) for v in tr2) <= {0, 1}:
            raise ConfigError(f"polynomial {poly:#x} yields a non-binary trace; not a field")
        self.trace2_table = tr2
        self.subtrace_table = subtr

    # -- scalar operations ------------------------------------------------

    def check(self, *elems: int) -> None:
        for a in elems:
            if not 0 <= a < self.q:
                raise ConfigError(
                    f"{a} is not a canonical element of GF({self.q}); mismatched field parameters?"
                )

    def add(self, a: int, b: int) -> int:
        self.check(a, b)
        return a ^ b

    sub = add  # characteristic two

    def mul(self, a: int, b: int) -> int:
        self.check(a, b)
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise ZeroDivisionError(f"inversion of zero in GF({self.q})")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self.check(a)
        if e < 0:
            a, e = self.inv(a), -e
        out, base = 1, a
        while e:
            if e & 1:
                out = int(self.mul_table[out, base])
            base = int(self.mul_table[base, base])
            e >>= 1
        return out

    def trace2(self, a: int) -> int:
        """GF(2)-linear trace GF(q) -> {0, 1}."""
        self.check(a)
        return int(self.trace2_table[a])

    def subfield_trace(self, a: int) -> int:
        """a + a^r; lands in GF(r), with kernel exactly GF(r)."""
        self.check(a)
        return int(self.subtrace_table[a])

    def in_subfield(self, a: int) -> bool:
        """True iff a^r = a, i.e. a lies in GF(r)."""
        self.check(a)
        return self.subfield_trace(a) == 0

    # -- enumeration and descriptions -------------------------------------

    def elements(self) -> range:
        """All q elements in increasing bit-value order."""
        return range(self.q)

    def subfield_elements(self) -> list[int]:
        return [a for a in self.elements() if self.in_subfield(a)]

    def nonsubfield_element(self) -> int:
        """First enumerated element outside GF(r); default second test gamma."""
        for a in self.elements():
            if not self.in_subfield(a):
                return a
        raise AssertionError("q > r always leaves elements outside the subfield")

    @property
    def hex_width(self) -> int:
        """Hex digits per element in row-string serializations."""
        return (2 * self.t + 3) // 4

    def params(self) -> dict:
        return {"t": self.t, "reduction_polynomial": f"{self.poly:#x}"}

    def __repr__(self) -> str:
        return f"GF({self.q}, poly={self.poly:#x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.t, self.poly) == (other.t, other.poly)

    def __hash__(self) -> int:
        return hash((self.t, self.poly))


@lru_cache(maxsize=None)
def _field_cached(t: int, reduction_poly: int) -> GF:
    return GF(t, reduction_poly)


def field(t: int, reduction_poly: int | None = None) -> GF:
    """Cached GF factory; the tables are immutable and shareable."""
    if reduction_poly is None:
        reduction_poly = REDUCTION_POLYS.get(t, 0)
    return _field_cached(t, reduction_poly)


def field_from_params(params: dict) -> GF:
    return field(int(params["t"]), int(params["reduction_polynomial"], 16))
