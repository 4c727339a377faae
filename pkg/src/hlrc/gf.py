"""Exact arithmetic in GF(p^h).

Elements are represented by their integer index in [0, q): the index encodes
the coefficient vector of the representative polynomial in base p, digit i
being the coefficient of x^i.  Index 0 is the additive identity and index 1
the multiplicative identity, and the natural integer order of indices is the
canonical element order used everywhere a deterministic ordering is needed.
A ``FieldSpec`` carries (p, h, modulus) and all arithmetic; the serialized
form of an element is just its index.

The modulus is the lexicographically smallest monic irreducible polynomial of
degree h over GF(p), coefficients compared low degree first, so field
construction is deterministic without lookup tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DivisionByZero,
    FieldTooLarge,
    InsufficientRank,
    NonPrime,
    ZeroPolynomial,
)

MAX_FIELD_SIZE = 1 << 20
MAX_EXTENSION_DEGREE = 8
# Full q x q add/mul tables are built lazily for fields up to this size; the
# vectorized linear algebra in linalg.py requires them.
TABLE_LIMIT = 2048


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- polynomial helpers over GF(p), coefficient lists low degree first -------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m, over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    while True:
        _poly_trim(a)
        if len(a) - 1 < dm or not a:
            return a
        shift = len(a) - 1 - dm
        factor = a[-1]
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p


def _poly_is_irreducible(cand: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(cand) - 1
    for d in range(1, deg // 2 + 1):
        for idx in range(p**d):
            div = _digits(idx, p, d) + [1]
            if not _poly_mod(cand, div, p):
                return False
    return True


def _digits(index: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(index % p)
        index //= p
    return out


def _undigits(digits, p: int) -> int:
    out = 0
    for d in reversed(digits):
        out = out * p + int(d)
    return out


class _Tables:
    """Dense q x q operation tables for vectorized matrix work.

    Multiplication is tabulated through discrete logs of a generator of the
    multiplicative group, so construction stays cheap even near TABLE_LIMIT.
    """

    def __init__(self, spec: "FieldSpec"):
        q, p, h = spec.q, spec.p, spec.h
        digs = np.zeros((q, h), dtype=np.int64)
        for i in range(q):
            digs[i] = _digits(i, p, h)
        powers = p ** np.arange(h, dtype=np.int64)
        self.add = (((digs[:, None, :] + digs[None, :, :]) % p) @ powers).astype(np.int32)
        self.neg = (((-digs) % p) @ powers).astype(np.int32)

        exp, log = _generator_tables(spec)
        lg = log[1:]
        outer = (lg[:, None] + lg[None, :]) % (q - 1)
        mul = np.zeros((q, q), dtype=np.int32)
        mul[1:, 1:] = exp[outer]
        self.mul = mul
        inv = np.zeros(q, dtype=np.int32)
        inv[1:] = exp[(-lg) % (q - 1)]
        self.inv = inv

    def sub(self, a, b):
        return self.add[a, self.neg[b]]


def _generator_tables(spec: "FieldSpec") -> tuple[np.ndarray, np.ndarray]:
    """(exp, log) tables for some generator of the multiplicative group."""
    q = spec.q
    for g in range(2, q):
        exp = np.zeros(q - 1, dtype=np.int32)
        cur = 1
        ok = True
        for e in range(q - 1):
            exp[e] = cur
            cur = spec._mul_scalar(cur, g)
            if cur == 1 and e != q - 2:
                ok = False
                break
        if ok and cur == 1:
            log = np.zeros(q, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            return exp, log
    # q == 2: the group is trivial
    return np.array([1], dtype=np.int32), np.array([0, 0], dtype=np.int64)


_TABLE_CACHE: dict[tuple[int, int, tuple[int, ...]], _Tables] = {}


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^h) under a fixed monic irreducible modulus of degree h.

    Immutable; all operations are pure, so a spec can be shared freely
    between concurrent readers.
    """

    p: int
    h: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.h

    def tables(self) -> _Tables:
        key = (self.p, self.h, self.modulus)
        t = _TABLE_CACHE.get(key)
        if t is None:
            if self.q > TABLE_LIMIT:
                raise FieldTooLarge(
                    f"operation tables unavailable for q={self.q} > {TABLE_LIMIT}"
                )
            t = _Tables(self)
            _TABLE_CACHE[key] = t
        return t

    # -- scalar arithmetic on element indices --------------------------------

    def add(self, a: int, b: int) -> int:
        if self.h == 1:
            return (a + b) % self.p
        p = self.p
        da, db = _digits(a, p, self.h), _digits(b, p, self.h)
        return _undigits([(x + y) % p for x, y in zip(da, db)], p)

    def neg(self, a: int) -> int:
        if self.h == 1:
            return (-a) % self.p
        p = self.p
        return _undigits([(-x) % p for x in _digits(a, p, self.h)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_scalar(self, a: int, b: int) -> int:
        p, h = self.p, self.h
        if h == 1:
            return (a * b) % p
        da, db = _digits(a, p, h), _digits(b, p, h)
        prod = [0] * (2 * h - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, list(self.modulus), p)
        return _undigits(rem + [0] * (h - len(rem)), p)

    def mul(self, a: int, b: int) -> int:
        key = (self.p, self.h, self.modulus)
        t = _TABLE_CACHE.get(key)
        if t is not None:
            return int(t.mul[a, b])
        return self._mul_scalar(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        key = (self.p, self.h, self.modulus)
        t = _TABLE_CACHE.get(key)
        if t is not None:
            return int(t.inv[a])
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply; negative exponents go through the inverse."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- enumeration and polynomial roots -------------------------------------

    def all_elements(self) -> list[int]:
        return list(range(self.q))

    def poly_eval(self, coeffs, x: int) -> int:
        acc = 0
        for c in reversed(list(coeffs)):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_roots(self, coeffs) -> list[int]:
        """All roots in the field, by exhaustive scan, ascending index.

        Multiplicity is ignored.  Raises ZeroPolynomial on the zero input,
        where "every element is a root" would poison fiber enumeration.
        """
        coeffs = list(coeffs)
        if not any(coeffs):
            raise ZeroPolynomial("root-finding on the zero polynomial")
        return [x for x in range(self.q) if self.poly_eval(coeffs, x) == 0]

    def element_digits(self, a: int) -> list[int]:
        return _digits(a, self.p, self.h)

    def serialize(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.p, self.h, self.modulus)


def build_field(p: int, h: int) -> FieldSpec:
    """GF(p^h) with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if h < 1 or h > MAX_EXTENSION_DEGREE or p**h > MAX_FIELD_SIZE:
        raise FieldTooLarge(f"GF({p}^{h}) outside supported range")
    for idx in range(p**h):
        cand = _digits(idx, p, h) + [1]
        if _poly_is_irreducible(cand, p):
            return FieldSpec(p, h, tuple(cand))
    raise AssertionError("no irreducible polynomial found")  # cannot happen


def subfield_linear_independent(spec: FieldSpec, candidates, t: int) -> list[int]:
    """First t candidates (in given order) that are GF(p)-linearly independent.

    Independence is decided by the rank over GF(p) of the base-p digit
    vectors, built up greedily with Gaussian elimination.
    """
    if t == 0:
        return []
    p, h = spec.p, spec.h
    basis_rows: list[list[int]] = []
    chosen: list[int] = []
    for a in candidates:
        row = _digits(a, p, h)
        red = list(row)
        for b in basis_rows:
            lead = next(i for i, c in enumerate(b) if c)
            if red[lead]:
                f = (red[lead] * pow(b[lead], p - 2, p)) % p
                red = [(x - f * y) % p for x, y in zip(red, b)]
        if any(red):
            basis_rows.append(red)
            chosen.append(a)
            if len(chosen) == t:
                return chosen
    raise InsufficientRank(
        f"candidates span rank {len(chosen)} < requested {t} over GF({p})"
    )
