"""Affine geometry of GF(q)^m: points, lines, flats, flags, partitions.

Points are coordinate tuples of element indices.  The global point order is
lexicographic with coordinate 1 most significant, matching the canonical
element order; it fixes codeword coordinates once and for all.

A ``Flat`` is stored in canonical form: basis in reduced row echelon form
(pivot-normalized) and base point reduced so every pivot coordinate is zero.
Two flats denote the same point set exactly when they compare equal, which is
what the disjointness and nesting checks rely on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BadDims, LineNotInFlat, PointNotInFlat, TooLarge
from .gf import FieldSpec
from .rng import SplitMix64, derive_stream

MAX_POINTS = 10**6

Point = tuple[int, ...]


@dataclass(frozen=True)
class Flat:
    """Affine subspace in canonical (echelon basis, reduced base) form."""

    dim: int
    base: Point
    basis: tuple[Point, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.base)


@dataclass(frozen=True)
class FlatFlag:
    """Nested flats of strictly decreasing dimension through a common point."""

    point: Point
    chain: tuple[Flat, ...]  # largest dimension first


def all_points(q: int, m: int) -> list[Point]:
    if q**m > MAX_POINTS:
        raise TooLarge(f"{q}^{m} points exceeds the {MAX_POINTS} limit")
    return list(itertools.product(range(q), repeat=m))


def point_index(q: int, point: Point) -> int:
    idx = 0
    for c in point:
        idx = idx * q + c
    return idx


def _rref_rows(field: FieldSpec, rows: list[list[int]]) -> list[list[int]]:
    """Reduced echelon basis (nonzero rows only) via scalar field ops."""
    rows = [list(r) for r in rows]
    m = len(rows[0]) if rows else 0
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
    return [rows[i] for i, _ in pivots]


def make_flat(field: FieldSpec, base, basis) -> Flat:
    """Canonicalize (base, basis) to the unique representation of the flat."""
    rows = _rref_rows(field, [list(b) for b in basis])
    red_base = list(base)
    for row in rows:
        c = next(i for i, x in enumerate(row) if x)
        f = red_base[c]
        if f:
            red_base = [field.sub(x, field.mul(f, y)) for x, y in zip(red_base, row)]
    return Flat(len(rows), tuple(red_base), tuple(tuple(r) for r in rows))


def flat_points(field: FieldSpec, flat: Flat) -> list[Point]:
    """All q^dim points, in lexicographic order of basis coefficients."""
    q = field.q
    pts = []
    for coeffs in itertools.product(range(q), repeat=flat.dim):
        p = list(flat.base)
        for t, direction in zip(coeffs, flat.basis):
            if t:
                p = [field.add(x, field.mul(t, d)) for x, d in zip(p, direction)]
        pts.append(tuple(p))
    return pts


def flat_contains(field: FieldSpec, flat: Flat, point: Point) -> bool:
    diff = [field.sub(a, b) for a, b in zip(point, flat.base)]
    for row in flat.basis:
        c = next(i for i, x in enumerate(row) if x)
        f = diff[c]
        if f:
            diff = [field.sub(x, field.mul(f, y)) for x, y in zip(diff, row)]
    return not any(diff)


def flat_contains_flat(field: FieldSpec, outer: Flat, inner: Flat) -> bool:
    if not flat_contains(field, outer, inner.base):
        return False
    origin = tuple([0] * len(inner.base))
    shifted = make_flat(field, origin, outer.basis)
    return all(flat_contains(field, shifted, d) for d in inner.basis)


def _normalize_direction(field: FieldSpec, v: list[int]) -> Point:
    c = next(i for i, x in enumerate(v) if x)
    inv = field.inv(v[c])
    return tuple(field.mul(inv, x) for x in v)


def _projective_directions(field: FieldSpec, m: int) -> list[Point]:
    """One canonical representative per direction, in point order."""
    q = field.q
    seen: set[Point] = set()
    out: list[Point] = []
    for v in itertools.product(range(q), repeat=m):
        if not any(v):
            continue
        rep = _normalize_direction(field, list(v))
        if rep not in seen:
            seen.add(rep)
            out.append(rep)
    return out


def lines_through(field: FieldSpec, point: Point) -> list[Flat]:
    """All (q^m - 1)/(q - 1) lines through the point, in direction order."""
    return [make_flat(field, point, [d]) for d in _projective_directions(field, len(point))]


def lines_in_flat_through(field: FieldSpec, point: Point, flat: Flat) -> list[Flat]:
    """All (q^d - 1)/(q - 1) lines through the point inside the flat."""
    if not flat_contains(field, flat, point):
        raise PointNotInFlat(f"{point} not in flat {flat}")
    q = field.q
    seen: set[Point] = set()
    dirs: list[Point] = []
    for coeffs in itertools.product(range(q), repeat=flat.dim):
        if not any(coeffs):
            continue
        v = [0] * len(point)
        for t, row in zip(coeffs, flat.basis):
            if t:
                v = [field.add(x, field.mul(t, y)) for x, y in zip(v, row)]
        rep = _normalize_direction(field, v)
        if rep not in seen:
            seen.add(rep)
            dirs.append(rep)
    dirs.sort()
    return [make_flat(field, point, [d]) for d in dirs]


def parallel_partition(field: FieldSpec, flat: Flat, line: Flat) -> list[Flat]:
    """Disjoint lines parallel to ``line`` whose union is ``flat``."""
    if line.dim != 1 or not flat_contains_flat(field, flat, line):
        raise LineNotInFlat("partition direction must be a line inside the flat")
    direction = line.basis[0]
    covered: set[Point] = set()
    out: list[Flat] = []
    for p in flat_points(field, flat):
        if p in covered:
            continue
        ln = make_flat(field, p, [direction])
        covered.update(flat_points(field, ln))
        out.append(ln)
    return out


def _direction_candidates(field: FieldSpec, m: int):
    """Nonzero vectors ordered so the standard basis comes first.

    Enumeration key treats coordinate 1 as least significant, so the first
    candidates are e1, 2*e1, ..., e2, ...; the deterministic flag policy
    therefore grows flats along standard axes when it can.
    """
    q = field.q
    for idx in range(1, q**m):
        digits = []
        i = idx
        for _ in range(m):
            digits.append(i % q)
            i //= q
        yield tuple(digits)


def flag_through(
    field: FieldSpec,
    point: Point,
    dims: list[int],
    policy: str = "deterministic",
    seed: int = 0,
) -> FlatFlag:
    """Nested flats of the requested dimensions through ``point``.

    dims must be strictly decreasing with m > dims[0] and dims[-1] >= 1.
    The deterministic policy extends by the smallest unused canonical
    direction; the seeded policy draws directions from a SplitMix64 stream
    and is reproducible per seed.
    """
    m = len(point)
    if not dims or any(d2 >= d1 for d1, d2 in zip(dims, dims[1:])) or dims[0] >= m or dims[-1] < 1:
        raise BadDims(f"dims {dims} invalid for ambient dimension {m}")
    q = field.q
    if policy == "deterministic":
        candidates = iter(_direction_candidates(field, m))

        def draw():
            return next(candidates)

    elif policy == "seeded":
        rng: SplitMix64 = derive_stream(seed, point_index(q, point))

        def draw():
            while True:
                v = rng.below(q**m)
                if v:
                    digits = []
                    for _ in range(m):
                        digits.append(v % q)
                        v //= q
                    return tuple(digits)

    else:
        raise ValueError(f"unknown flag policy {policy!r}")

    wanted = sorted(dims)
    chain: list[Flat] = []
    directions: list[Point] = []
    current = make_flat(field, point, [])
    for target in range(1, dims[0] + 1):
        while True:
            v = draw()
            if not flat_contains(field, current, tuple(field.add(a, b) for a, b in zip(point, v))):
                directions.append(v)
                current = make_flat(field, point, directions)
                break
        if target in wanted:
            chain.append(current)
    chain.reverse()
    return FlatFlag(point, tuple(chain))
