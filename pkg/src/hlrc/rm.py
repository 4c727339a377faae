"""q-ary Reed-Muller codes: construction, parameters, hierarchy ladders.

RM_q(v, m) evaluates every m-variate monomial of total degree <= v at every
point of GF(q)^m, points in the global lexicographic order and monomials in
graded-lex order (degree first, then exponent tuple), so message vectors have
a stable meaning across runs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .codes import EvaluationCode, verified_code
from .errors import BadDims, TooLarge
from .geometry import all_points
from .gf import FieldSpec

MAX_LENGTH = 10**6
MAX_DIMENSION = 10**4


@dataclass(frozen=True)
class RMSpec:
    field: FieldSpec
    v: int
    m: int

    def __post_init__(self):
        if not 0 <= self.v <= self.field.q - 1:
            raise ValueError(f"total degree v={self.v} must satisfy 0 <= v <= q-1")
        if self.m < 1:
            raise ValueError("need at least one variable")

    @property
    def q(self) -> int:
        return self.field.q


def monomials(v: int, m: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= v, graded-lex ordered."""
    out = [e for e in itertools.product(range(v + 1), repeat=m) if sum(e) <= v]
    out.sort(key=lambda e: (sum(e), e))
    return out


def evaluate_monomial(field: FieldSpec, exponents, point) -> int:
    acc = 1
    for e, x in zip(exponents, point):
        if e:
            acc = field.mul(acc, field.pow(x, e))
    return acc


def rm_build(spec: RMSpec) -> EvaluationCode:
    q, v, m = spec.q, spec.v, spec.m
    k_formula = math.comb(v + m, m)
    if q**m > MAX_LENGTH or k_formula > MAX_DIMENSION:
        raise TooLarge(f"RM_{q}({v},{m}) exceeds size limits")
    points = all_points(q, m)
    basis = monomials(v, m)
    # Per-element power table keeps the evaluation loop cheap.
    pow_table = [[spec.field.pow(x, e) for e in range(v + 1)] for x in range(q)]
    rows = []
    for exps in basis:
        row = []
        for pt in points:
            acc = 1
            for e, x in zip(exps, pt):
                if e:
                    acc = spec.field.mul(acc, pow_table[x][e])
            row.append(acc)
        rows.append(row)
    return verified_code(spec.field, "rm", spec, rows, points, basis, k_formula)


def rm_params(spec: RMSpec) -> tuple[int, int, int]:
    """Closed-form (n, k, d)."""
    q, v, m = spec.q, spec.v, spec.m
    return (q**m, math.comb(v + m, m), (q - v) * q ** (m - 1))


def default_dims(m: int) -> list[int]:
    return list(range(m - 1, 0, -1))


def rm_hierarchy_params(spec: RMSpec, dims: list[int] | None = None) -> list[tuple[int, int, int]]:
    """Per-level (n_j, s_j, delta_j) for nested flats of the given dimensions.

    The default ladder [m-1, ..., 1] descends one dimension per level; any
    strictly decreasing dimension list inside (0, m) is accepted.
    """
    q, v, m = spec.q, spec.v, spec.m
    if dims is None:
        dims = default_dims(m)
    if (
        not dims
        or dims[0] > m - 1
        or dims[-1] < 1
        or any(d2 >= d1 for d1, d2 in zip(dims, dims[1:]))
    ):
        raise BadDims(f"level dimensions {dims} invalid for m={m}")
    return [(q**d, math.comb(v + d, d), (q - v) * q ** (d - 1)) for d in dims]
