"""Brute-force ground truth: exact minimum distance, rank, erasure sweeps.

Everything here is independent of the closed-form parameter formulas it is
used to check: distance comes from enumerating all nonzero messages, the
dimension from Gaussian elimination, and recoverability claims from running a
decoder on every erasure pattern up to a weight.  Budgets are explicit and
exceeding one is an error, never a silent skip.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .codes import EvaluationCode
from .errors import BudgetExceeded, DegenerateCode, TooManyPatterns
from .recovery import ErasureWord, HierarchyStructure, peel_level, solve_erasures_ml
from .rng import SplitMix64

DEFAULT_CODEWORD_BUDGET = 2_000_000
DEFAULT_PATTERN_BUDGET = 1_000_000
_BLOCK = 1 << 14


@dataclass(frozen=True)
class DistanceResult:
    d: int
    witness: tuple[int, ...]  # message whose codeword attains weight d
    enumerated: int


def min_distance_bruteforce(
    code: EvaluationCode, budget: int = DEFAULT_CODEWORD_BUDGET
) -> DistanceResult:
    """Exact minimum distance by enumerating all q^k - 1 nonzero messages."""
    q = code.field.q
    k = code.num_basis
    if k == 0:
        raise DegenerateCode("zero-dimensional code has no nonzero codeword")
    total = q**k
    if total > budget:
        raise BudgetExceeded(f"{total} codewords exceed budget {budget}")
    best_w = code.n + 1
    best_msg: np.ndarray | None = None
    for start in range(1, total, _BLOCK):
        stop = min(start + _BLOCK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        msgs = np.empty((len(idx), k), dtype=np.int32)
        tmp = idx.copy()
        for i in range(k):
            msgs[:, i] = tmp % q
            tmp //= q
        words = linalg.encode_block(code.field, msgs, code.generator)
        weights = np.count_nonzero(words, axis=1)
        pos = int(np.argmin(weights))
        if int(weights[pos]) < best_w:
            best_w = int(weights[pos])
            best_msg = msgs[pos].copy()
    return DistanceResult(best_w, tuple(int(x) for x in best_msg), total - 1)


def dimension_rank(code: EvaluationCode) -> int:
    return linalg.rank(code.field, code.generator)


@dataclass(frozen=True)
class ErasureCheckResult:
    passed: bool
    patterns_checked: int
    counterexample: tuple[int, ...] | None


def exhaustive_erasure_check(
    code: EvaluationCode,
    support,
    max_weight: int,
    decoder: str = "ml",
    structure: HierarchyStructure | None = None,
    level: int | None = None,
    budget: int = DEFAULT_PATTERN_BUDGET,
    seed: int = 0xC0DE,
) -> ErasureCheckResult:
    """Run the chosen decoder on every erasure pattern of weight <= max_weight.

    decoder "ml" solves on the full code; decoder "peeling" runs peel_level
    at ``level`` with the support as scope (``structure`` required).  The
    test word is a fixed seeded codeword and recovered values must match it.
    """
    support = [int(s) for s in support]
    total = sum(math.comb(len(support), w) for w in range(1, max_weight + 1))
    if total > budget:
        raise TooManyPatterns(f"{total} patterns exceed budget {budget}")
    if decoder == "peeling" and (structure is None or level is None):
        raise ValueError("peeling decoder needs structure and level")

    rng = SplitMix64(seed)
    while True:
        message = [rng.below(code.field.q) for _ in range(code.num_basis)]
        if any(message):
            break
    codeword = code.encode(message)
    base = ErasureWord.from_codeword(codeword)

    checked = 0
    for w in range(1, max_weight + 1):
        for pattern in itertools.combinations(support, w):
            checked += 1
            word = base.copy()
            word.erase(pattern)
            if decoder == "ml":
                solved, ok = solve_erasures_ml(code, word)
                good = ok and bool(np.array_equal(solved.values, codeword))
            elif decoder == "peeling":
                peel_level(word, structure, level, scope=support)
                good = not any(word.mask[p] for p in pattern) and bool(
                    np.array_equal(word.values, codeword)
                )
            else:
                raise ValueError(f"unknown decoder {decoder!r}")
            if not good:
                return ErasureCheckResult(False, checked, tuple(pattern))
    return ErasureCheckResult(True, checked, None)
