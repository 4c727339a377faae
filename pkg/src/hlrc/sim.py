"""Seeded randomized erasure experiments over a code + hierarchy structure.

Every trial draws a uniform message (erasure recovery only depends on the
pattern, not the values, by linearity -- sampling uniformly anyway keeps the
value-consistency check meaningful), applies the erasure model, runs full
hierarchical recovery, and accumulates per-level usage and access counts.
All randomness comes from the documented SplitMix64 generator seeded per
trial, so equal seeds give bitwise-equal statistics on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import EvaluationCode
from .errors import Unrecoverable
from .recovery import ErasureWord, HierarchyStructure, hierarchical_recover
from .rng import derive_stream

MODEL_KINDS = ("iid", "fixed_weight", "group_burst")


@dataclass(frozen=True)
class ErasureModel:
    kind: str
    epsilon: float = 0.0  # iid erasure probability
    weight: int = 0  # fixed_weight count
    level: int = 1  # group_burst: hierarchy level whose repair group is erased
    extra: int = 0  # group_burst: additional uniform erasures

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown erasure model {self.kind!r}")
        if self.kind == "iid" and not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("iid probability must be in [0, 1]")
        if self.kind == "fixed_weight" and self.weight < 0:
            raise ValueError("fixed weight must be nonnegative")
        if self.kind == "group_burst" and (self.level < 1 or self.extra < 0):
            raise ValueError("group_burst needs level >= 1 and extra >= 0")

    def describe(self) -> str:
        if self.kind == "iid":
            return f"iid:{self.epsilon}"
        if self.kind == "fixed_weight":
            return f"fixed:{self.weight}"
        return f"burst:{self.level}:{self.extra}"


@dataclass
class TrialStats:
    trials: int
    seed: int
    model: str
    fallback: bool
    successes: int = 0
    value_mismatches: int = 0
    per_level: dict[int, int] = field(default_factory=dict)
    symbols_total: int = 0
    symbols_max: int = 0
    residual_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def symbols_mean(self) -> float:
        return self.symbols_total / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "model": self.model,
            "fallback": self.fallback,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "value_mismatches": self.value_mismatches,
            "recoveries_by_level": {str(k): v for k, v in sorted(self.per_level.items())},
            "symbols_total": self.symbols_total,
            "symbols_mean": self.symbols_mean,
            "symbols_max": self.symbols_max,
            "residual_histogram": {
                str(k): v for k, v in sorted(self.residual_histogram.items())
            },
        }


def _apply_model(
    word: ErasureWord, model: ErasureModel, structure: HierarchyStructure, rng
) -> None:
    n = len(word.values)
    if model.kind == "iid":
        threshold = int(round(model.epsilon * 2.0**64))
        to_erase = [p for p in range(n) if rng.next_u64() < threshold]
        word.erase(to_erase)
    elif model.kind == "fixed_weight":
        word.erase(rng.sample_distinct(model.weight, n))
    else:
        anchor = rng.below(n)
        groups = structure.groups_of(model.level, anchor)
        group = groups[rng.below(len(groups))]
        word.erase(group.positions)
        erased = set(group.positions)
        while len(erased) < min(n, len(group.positions) + model.extra):
            p = rng.below(n)
            if p not in erased:
                erased.add(p)
                word.erase([p])


def run_trials(
    code: EvaluationCode,
    structure: HierarchyStructure,
    model: ErasureModel,
    trials: int,
    seed: int,
    fallback: bool = False,
) -> TrialStats:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if model.kind == "group_burst" and model.level > structure.H:
        raise ValueError(
            f"burst level {model.level} exceeds the structure's {structure.H} levels"
        )
    stats = TrialStats(trials=trials, seed=seed, model=model.describe(), fallback=fallback)
    q = code.field.q
    for trial in range(trials):
        rng = derive_stream(seed, trial)
        message = np.array([rng.below(q) for _ in range(code.num_basis)], dtype=np.int32)
        codeword = code.encode(message)
        word = ErasureWord.from_codeword(codeword)
        _apply_model(word, model, structure, rng)
        try:
            out, report = hierarchical_recover(word, structure, target="all", fallback=fallback)
        except Unrecoverable:
            stats.residual_histogram[len(word.erased_positions())] = (
                stats.residual_histogram.get(len(word.erased_positions()), 0) + 1
            )
            continue
        # recovered symbols must never disagree with the original, success or not
        for pos in report.recovered:
            if int(out.values[pos]) != int(codeword[pos]):
                stats.value_mismatches += 1
        # a "success" must restore the original codeword exactly
        clean = report.success and bool(np.array_equal(out.values, codeword))
        if clean:
            stats.successes += 1
        for lev, count in report.per_level.items():
            stats.per_level[lev] = stats.per_level.get(lev, 0) + count
        stats.symbols_total += report.symbols_accessed
        stats.symbols_max = max(stats.symbols_max, report.symbols_accessed)
        stats.residual_histogram[len(report.residual)] = (
            stats.residual_histogram.get(len(report.residual), 0) + 1
        )
    return stats
