"""Arithmetic in the binary fields GF(2^k).

Elements are plain ints in ``[0, 2^k)``; bit ``i`` is the coefficient of
``x^i`` in the polynomial representative.  Field descriptions are
:class:`FieldSpec` values, which are hashable and immutable so they can be
shared freely and used as cache keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DivisionByZero, ParseError

# Lexicographically smallest irreducible polynomial with constant term 1 per degree.
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
}

_TABLE_MAX_DEGREE = 8


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree <= deg(poly)/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, g) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^degree) presented as GF(2)[x] / (modulus)."""

    degree: int
    modulus: int = field(default=0)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"field degree must be positive, got {self.degree}")
        if self.modulus == 0:
            if self.degree not in DEFAULT_MODULI:
                raise ValueError(f"no default modulus for degree {self.degree}; pass one explicitly")
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.degree])
        m = self.modulus
        if m.bit_length() - 1 != self.degree:
            raise ValueError(f"modulus {m} does not have degree {self.degree}")
        if not m & 1:
            raise ValueError(f"modulus {m} must have constant term 1")
        if not is_irreducible(m):
            raise ValueError(f"modulus {m} is reducible over GF(2)")

    @property
    def order(self) -> int:
        return 1 << self.degree

    @property
    def is_prime(self) -> bool:
        return self.degree == 1

    def check(self, a: int) -> int:
        if not (isinstance(a, int) and 0 <= a < self.order):
            raise ValueError(f"{a!r} is not an element of {self}")
        return a

    # Hot-path arithmetic; small fields go through precomputed tables.

    def tables(self):
        """(mul, inv, sqrt) lookup tables for k <= 8, else None; cached on the instance."""
        try:
            return self.__dict__["_tables"]
        except KeyError:
            t = _tables(self.degree, self.modulus)
            object.__setattr__(self, "_tables", t)
            return t

    def mul(self, a: int, b: int) -> int:
        t = self.tables()
        if t is not None:
            return t[0][(a << self.degree) | b]
        return _poly_mod(_clmul(a, b), self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        t = self.tables()
        if t is not None:
            return t[1][a]
        return self.pow(a, self.order - 2)

    def sqrt(self, a: int) -> int:
        t = self.tables()
        if t is not None:
            return t[2][a]
        return _sqrt_by_squaring(self, a)

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def __str__(self):
        return format_field(self)


def _sqrt_by_squaring(spec: FieldSpec, a: int) -> int:
    return _sqrt_raw(spec.degree, spec.modulus, a)


def _sqrt_raw(k: int, m: int, a: int) -> int:
    # Frobenius has order k, so sqrt(a) = a^(2^(k-1)).
    for _ in range(k - 1):
        a = _poly_mod(_clmul(a, a), m)
    return a


@lru_cache(maxsize=None)
def _tables(k: int, m: int):
    if k > _TABLE_MAX_DEGREE:
        return None
    q = 1 << k
    mul = [0] * (q * q)
    for a in range(q):
        row = a << k
        for b in range(a, q):
            v = _poly_mod(_clmul(a, b), m)
            mul[row | b] = v
            mul[(b << k) | a] = v
    inv = [0] * q
    for a in range(1, q):
        row = a << k
        for b in range(1, q):
            if mul[row | b] == 1:
                inv[a] = b
                break
    sqrt = [_sqrt_raw(k, m, a) for a in range(q)]
    return mul, inv, sqrt


GF2 = FieldSpec(1)
GF4 = FieldSpec(2)


def fe_add(spec: FieldSpec, a: int, b: int) -> int:
    return a ^ b


def fe_mul(spec: FieldSpec, a: int, b: int) -> int:
    return spec.mul(a, b)


def fe_inv(spec: FieldSpec, a: int) -> int:
    return spec.inv(a)


def fe_sqrt(spec: FieldSpec, a: int) -> int:
    """The unique square root of ``a``; every element of a finite binary field has one."""
    return spec.sqrt(a)


def fe_enumerate(spec: FieldSpec) -> list[int]:
    return list(range(spec.order))


_FIELD_RE = re.compile(r"^gf\(2\^(\d+)\)(?::m=(\d+))?$")
_SHORT_RE = re.compile(r"^gf(\d+)$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``gf2`` or ``gf(2^k):m=<modulus>``.

    ``gf(2^k)`` and ``gf<2^k>`` (e.g. ``gf4``) select the default modulus.
    """
    s = text.strip().lower()
    if s in ("gf2", "gf(2)"):
        return GF2
    mo = _FIELD_RE.match(s)
    if mo is None:
        short = _SHORT_RE.match(s)
        q = int(short.group(1)) if short else 0
        if q < 2 or q & (q - 1):
            raise ParseError(f"bad field spec {text!r}: expected 'gf2' or 'gf(2^k):m=<modulus>'")
        degree, modulus = q.bit_length() - 1, 0
    else:
        degree, modulus = int(mo.group(1)), int(mo.group(2) or 0)
    try:
        return FieldSpec(degree, modulus)
    except ValueError as exc:
        raise ParseError(f"bad field spec {text!r}: {exc}") from None


def format_field(spec: FieldSpec) -> str:
    if spec.degree == 1:
        return "gf2"
    return f"gf(2^{spec.degree}):m={spec.modulus}"
