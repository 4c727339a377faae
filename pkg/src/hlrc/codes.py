"""Shared container for evaluation codes (Reed-Muller and fiber families).

A code stores its generator matrix (one row per basis function, evaluated at
the ordered evaluation points), the point list that defines coordinate
positions, and exponent-vector metadata for each basis function.  The
dimension ``k`` is always the verified rank of the generator, never the
closed-form count; ``dimension_formula`` keeps the closed form alongside so
mismatches are visible instead of silently absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gf import FieldSpec


@dataclass
class EvaluationCode:
    field: FieldSpec
    family: str  # "rm" or "fiber"
    spec: object
    generator: np.ndarray
    points: tuple
    basis: tuple[tuple[int, ...], ...]
    k: int
    dimension_formula: int
    _caches: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return int(self.generator.shape[1])

    @property
    def num_basis(self) -> int:
        return int(self.generator.shape[0])

    @property
    def rank_matches_formula(self) -> bool:
        return self.k == self.dimension_formula

    def encode(self, message) -> np.ndarray:
        message = np.asarray(message, dtype=np.int32)
        if message.shape != (self.num_basis,):
            raise ValueError(
                f"message length {message.shape} != basis count {self.num_basis}"
            )
        return linalg.encode(self.field, message, self.generator)


def verified_code(
    field: FieldSpec,
    family: str,
    spec,
    generator_rows: list[list[int]],
    points,
    basis,
    dimension_formula: int,
) -> EvaluationCode:
    gen = linalg.as_matrix(generator_rows)
    k = linalg.rank(field, gen)
    return EvaluationCode(
        field=field,
        family=family,
        spec=spec,
        generator=gen,
        points=tuple(points),
        basis=tuple(tuple(b) for b in basis),
        k=k,
        dimension_formula=dimension_formula,
    )
