"""Hierarchical erasure recovery for Reed-Muller and fiber-product codes.

A ``HierarchyStructure`` materializes, per codeword position, the nested
level supports and the repair groups available inside each one.  Recovery is
Lagrange interpolation on a repair group, peeling (repeat any group with few
enough erasures) within a level, and escalation across levels, with exact
accounting of how many symbols each repair read.

Level numbering follows the nesting: level 1 is the largest support, level H
the smallest.  Level 0 in reports means the full-code linear-algebra solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fiber as fiber_mod
from . import linalg
from .codes import EvaluationCode
from .errors import (
    BadDims,
    BadOrder,
    DegreeTooHighForRecovery,
    NotEnoughSymbols,
    Unrecoverable,
)
from .geometry import flag_through, flat_points, lines_in_flat_through, point_index
from .gf import FieldSpec
from .rm import RMSpec, default_dims


# -- words and reports --------------------------------------------------------


@dataclass
class ErasureWord:
    values: np.ndarray
    mask: np.ndarray  # True where erased

    @classmethod
    def from_codeword(cls, values) -> "ErasureWord":
        vals = np.array(values, dtype=np.int32, copy=True)
        return cls(vals, np.zeros(len(vals), dtype=bool))

    def copy(self) -> "ErasureWord":
        return ErasureWord(self.values.copy(), self.mask.copy())

    def erase(self, positions) -> None:
        for p in positions:
            self.mask[p] = True
            self.values[p] = 0  # erased positions carry no trusted value

    def erased_positions(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.mask)[0]]


@dataclass(frozen=True)
class RepairGroup:
    positions: tuple[int, ...]
    abscissae: tuple[int, ...]  # interpolation coordinate per position
    degree: int  # restricted polynomial degree bound
    direction: int  # sortable direction label
    depth: int  # native level (H = deepest)
    posset: frozenset


@dataclass
class Support:
    positions: tuple[int, ...]
    posset: frozenset
    groups: dict[int, list[RepairGroup]]  # anchor position -> its groups


@dataclass(frozen=True)
class LevelParams:
    n: int
    s: int
    delta: int
    availability: int
    # Published availability figure for RM ladders counts lines through a
    # point in a flat one dimension larger; both values are reported.
    availability_ambient: int | None = None
    availability_note: str | None = None


@dataclass(frozen=True)
class PositionRecovery:
    level: int  # escalation level that recovered it; 0 = full-code solve
    group: tuple[int, ...]
    direction: int
    symbols_read: int


@dataclass
class RecoveryReport:
    success: bool
    recovered: dict[int, PositionRecovery]
    residual: tuple[int, ...]
    symbols_accessed: int
    rounds: int  # interpolation events performed
    ml_fallback_used: bool

    @property
    def per_level(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rec in self.recovered.values():
            out[rec.level] = out.get(rec.level, 0) + 1
        return out


# -- structure ----------------------------------------------------------------


@dataclass
class HierarchyStructure:
    code: EvaluationCode
    kind: str  # "rm" | "fiber"
    H: int
    levels: tuple[LevelParams, ...]  # index 0 = level 1
    supports: list[list[Support]]  # [level-1] -> supports at that level
    support_id: list[list[int]]  # [level-1][position] -> index into supports
    meta: dict
    _cand_cache: dict = field(default_factory=dict, repr=False)
    _scope_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for lev in range(1, self.H + 1):
            for sid, sup in enumerate(self.supports[lev - 1]):
                self._scope_index[(lev, sup.posset)] = sid

    def support_of(self, level: int, position: int) -> Support:
        return self.supports[level - 1][self.support_id[level - 1][position]]

    def groups_of(self, level: int, position: int) -> list[RepairGroup]:
        return self.support_of(level, position).groups.get(position, [])

    def candidates(self, level: int, scope: frozenset | None) -> list[RepairGroup]:
        """Repair groups usable when peeling at ``level`` within ``scope``.

        Deterministic order: deepest native level first, then direction,
        then lowest anchor position.
        """
        if scope is not None:
            sid = self._scope_index.get((level, scope))
            key = (level, sid) if sid is not None else (level, scope)
        else:
            key = (level, None)
        cached = self._cand_cache.get(key)
        if cached is not None:
            return cached
        seen: set[tuple] = set()
        out: list[RepairGroup] = []
        for lev in range(self.H, level - 1, -1):
            bucket: list[tuple[int, int, RepairGroup]] = []
            for sup in self.supports[lev - 1]:
                whole = scope is None or sup.posset <= scope
                for anchor in sup.positions:
                    for g in sup.groups.get(anchor, ()):
                        if not whole and not g.posset <= scope:
                            continue
                        gkey = (g.positions, g.direction)
                        if gkey in seen:
                            continue
                        seen.add(gkey)
                        bucket.append((g.direction, anchor, g))
            bucket.sort(key=lambda item: (item[0], item[1]))
            out.extend(item[2] for item in bucket)
        self._cand_cache[key] = out
        return out


# -- interpolation ------------------------------------------------------------


def lagrange_eval(field: FieldSpec, points: list[tuple[int, int]], x: int) -> int:
    """Evaluate the interpolating polynomial through ``points`` at ``x``."""
    total = 0
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num, den = 1, 1
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            num = field.mul(num, field.sub(x, xj))
            den = field.mul(den, field.sub(xi, xj))
        total = field.add(total, field.mul(yi, field.mul(num, field.inv(den))))
    return total


def interpolate_erased(
    field: FieldSpec, abscissae, values, mask, degree: int
) -> dict[int, int]:
    """Recover every masked slot of a repair group.

    Reads exactly degree+1 unerased (abscissa, value) pairs, in group order,
    and evaluates the interpolated polynomial at each masked abscissa.
    Returns {slot index in group -> recovered value}.
    """
    known = [
        (x, int(v))
        for x, v, m in zip(abscissae, values, mask)
        if not m
    ][: degree + 1]
    if len(known) < degree + 1:
        raise NotEnoughSymbols(
            f"need {degree + 1} unerased symbols, have {sum(1 for m in mask if not m)}"
        )
    return {
        i: lagrange_eval(field, known, x)
        for i, (x, m) in enumerate(zip(abscissae, mask))
        if m
    }


# -- peeling and escalation ----------------------------------------------------


def _fire_group(word: ErasureWord, field: FieldSpec, g: RepairGroup) -> list[int]:
    vals = [int(word.values[p]) for p in g.positions]
    msk = [bool(word.mask[p]) for p in g.positions]
    recovered = interpolate_erased(field, g.abscissae, vals, msk, g.degree)
    out = []
    for slot, value in recovered.items():
        p = g.positions[slot]
        word.values[p] = value
        word.mask[p] = False
        out.append(p)
    return out


def peel_level(
    word: ErasureWord,
    structure: HierarchyStructure,
    level: int,
    scope=None,
) -> list[tuple[RepairGroup, list[int]]]:
    """Peel to fixpoint at ``level`` (using groups at levels >= level).

    ``scope`` optionally restricts both the usable groups and hence the
    symbols read to a set of positions.  Mutates ``word``; returns the list
    of (group, recovered positions) events in firing order.  Residual
    erasures are left in place, never raised.
    """
    if not 1 <= level <= structure.H:
        raise BadDims(f"level {level} outside 1..{structure.H}")
    fscope = frozenset(int(s) for s in scope) if scope is not None else None
    cands = structure.candidates(level, fscope)
    field = structure.code.field
    events: list[tuple[RepairGroup, list[int]]] = []
    while True:
        fired = None
        for g in cands:
            erased = 0
            for p in g.positions:
                if word.mask[p]:
                    erased += 1
            if erased and len(g.positions) - erased >= g.degree + 1:
                fired = g
                break
        if fired is None:
            return events
        events.append((fired, _fire_group(word, field, fired)))


def solve_erasures_ml(code: EvaluationCode, word: ErasureWord) -> tuple[ErasureWord, bool]:
    """Full-code erasure solve: succeeds iff unerased columns have rank k.

    This is the exact erasure-decodability oracle; on success the returned
    word has every erasure refilled from the unique matching message.
    """
    out = word.copy()
    unerased = np.nonzero(~word.mask)[0]
    a = code.generator[:, unerased].T.astype(np.int32)
    b = word.values[unerased].astype(np.int32)
    kb = code.num_basis
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    red, pivots = linalg.rref(code.field, aug)
    if kb in pivots or len(pivots) < kb:
        return out, False
    message = np.zeros(kb, dtype=np.int32)
    for r, c in enumerate(pivots):
        message[c] = red[r, kb]
    full = linalg.encode(code.field, message, code.generator)
    out.values[:] = full
    out.mask[:] = False
    return out, True


def hierarchical_recover(
    word: ErasureWord,
    structure: HierarchyStructure,
    target="all",
    fallback: bool = False,
) -> tuple[ErasureWord, RecoveryReport]:
    """Recover erased targets by peeling at level H and escalating to level 1.

    Positions recovered as side effects of a peel are committed.  With
    ``fallback`` enabled, targets still erased after level 1 go through the
    full-code solve; Unrecoverable is raised only when that solve fails too.
    """
    work = word.copy()
    targets = work.erased_positions() if target == "all" else [int(target)]
    recovered: dict[int, PositionRecovery] = {}
    symbols = 0
    rounds = 0
    ml_used = False

    def commit(events, level):
        nonlocal symbols, rounds
        for g, positions in events:
            rounds += 1
            symbols += g.degree + 1
            for p in positions:
                recovered[p] = PositionRecovery(
                    level=level,
                    group=g.positions,
                    direction=g.direction,
                    symbols_read=g.degree + 1,
                )

    for tgt in targets:
        if not work.mask[tgt]:
            continue
        for level in range(structure.H, 0, -1):
            scope = structure.support_of(level, tgt).posset
            commit(peel_level(work, structure, level, scope), level)
            if not work.mask[tgt]:
                break
        if work.mask[tgt] and fallback:
            read = int(np.count_nonzero(~work.mask))
            solved, ok = solve_erasures_ml(structure.code, work)
            if not ok:
                raise Unrecoverable(
                    f"position {tgt}: all levels and the full-code solve failed"
                )
            ml_used = True
            for p in work.erased_positions():
                recovered[p] = PositionRecovery(
                    level=0, group=(), direction=-1, symbols_read=read
                )
            symbols += read
            work = solved

    residual = tuple(p for p in targets if work.mask[p])
    report = RecoveryReport(
        success=not residual,
        recovered=recovered,
        residual=residual,
        symbols_accessed=symbols,
        rounds=rounds,
        ml_fallback_used=ml_used,
    )
    return work, report


# -- structure builders ---------------------------------------------------------


def build_rm_hierarchy(
    code: EvaluationCode,
    dims: list[int] | None = None,
    policy: str = "deterministic",
    seed: int = 0,
) -> HierarchyStructure:
    """Nested-flat hierarchy: one flag of flats per position, line repair groups.

    Level-j repair groups for every position inside a level-j flat are all the
    lines through that position inside the flat, each interpolating a degree-v
    restriction.  Requires v <= q-2 so a line with one erasure still holds the
    v+1 symbols interpolation needs.
    """
    spec: RMSpec = code.spec
    f = code.field
    q, v, m = spec.q, spec.v, spec.m
    if v > q - 2:
        raise DegreeTooHighForRecovery(
            f"v={v} leaves no slack on a line of {q} points; recovery needs v <= q-2"
        )
    if dims is None:
        dims = default_dims(m)
    if (
        not dims
        or dims[0] > m - 1
        or dims[-1] < 1
        or any(d2 >= d1 for d1, d2 in zip(dims, dims[1:]))
    ):
        raise BadDims(f"level dimensions {dims} invalid for m={m}")
    H = len(dims)
    pos_of = {pt: i for i, pt in enumerate(code.points)}

    supports: list[list[Support]] = [[] for _ in range(H)]
    support_id: list[list[int]] = [[-1] * code.n for _ in range(H)]
    flat_sid: list[dict] = [{} for _ in range(H)]

    def build_support(flat, depth: int) -> Support:
        pts = flat_points(f, flat)
        positions = tuple(sorted(pos_of[p] for p in pts))
        groups: dict[int, list[RepairGroup]] = {}
        for p in pts:
            anchor = pos_of[p]
            glist = []
            for line in lines_in_flat_through(f, p, flat):
                line_pts = flat_points(f, line)
                pairs = sorted((pos_of[lp], t) for t, lp in enumerate(line_pts))
                gpos = tuple(idx for idx, _ in pairs)
                gabs = tuple(t for _, t in pairs)
                if len(gpos) < 2:
                    raise BadDims("degenerate single-member repair group")
                glist.append(
                    RepairGroup(
                        positions=gpos,
                        abscissae=gabs,
                        degree=v,
                        direction=point_index(q, line.basis[0]),
                        depth=depth,
                        posset=frozenset(gpos),
                    )
                )
            groups[anchor] = glist
        return Support(positions, frozenset(positions), groups)

    for i, pt in enumerate(code.points):
        flag = flag_through(f, pt, list(dims), policy=policy, seed=seed)
        for lev, flat in enumerate(flag.chain, start=1):
            sid = flat_sid[lev - 1].get(flat)
            if sid is None:
                supports[lev - 1].append(build_support(flat, lev))
                sid = len(supports[lev - 1]) - 1
                flat_sid[lev - 1][flat] = sid
            support_id[lev - 1][i] = sid

    levels = []
    for d in dims:
        levels.append(
            LevelParams(
                n=q**d,
                s=math.comb(v + d, d),
                delta=(q - v) * q ** (d - 1),
                availability=(q**d - 1) // (q - 1),
                availability_ambient=(q ** (d + 1) - 1) // (q - 1),
                availability_note=(
                    "ambient figure counts lines through a point in a flat one "
                    "dimension larger than the level support (off-by-one vs the "
                    "within-flat line count, which is what recovery can use)"
                ),
            )
        )
    return HierarchyStructure(
        code=code,
        kind="rm",
        H=H,
        levels=tuple(levels),
        supports=supports,
        support_id=support_id,
        meta={"dims": list(dims), "policy": policy, "seed": seed},
    )


def build_fiber_hierarchy(code: EvaluationCode, order=None) -> HierarchyStructure:
    """Coordinate-forgetting hierarchy for a fiber-product code.

    ``order`` lists distinct factor indices; the last entry is the bottom
    level (its fiber is the smallest repair group) and each earlier entry
    enlarges the support by freeing one more coordinate.  Level j offers
    H+1-j repair groups per position, one per free direction.
    """
    spec = code.spec
    t = len(spec.factors)
    if order is None:
        order = list(range(t))
    order = [int(x) for x in order]
    H = len(order)
    if (
        not 1 <= H <= t
        or len(set(order)) != H
        or any(not 0 <= x < t for x in order)
    ):
        raise BadOrder(f"direction order {order} invalid for t={t} factors")
    fiber_degrees = [fac.degree(code.field.p) for fac in spec.factors]
    native_level = {d: i + 1 for i, d in enumerate(order)}

    supports: list[list[Support]] = [[] for _ in range(H)]
    support_id: list[list[int]] = [[-1] * code.n for _ in range(H)]

    for lev in range(1, H + 1):
        free = order[lev - 1 :]
        key_sid: dict[tuple, int] = {}
        buckets: list[list[int]] = []
        for i, pt in enumerate(code.points):
            key = (pt.base,) + tuple(
                fv for d, fv in enumerate(pt.fibers) if d not in free
            )
            sid = key_sid.get(key)
            if sid is None:
                sid = len(buckets)
                key_sid[key] = sid
                buckets.append([])
            buckets[sid].append(i)
            support_id[lev - 1][i] = sid
        for members in buckets:
            positions = tuple(members)  # ascending by construction
            groups: dict[int, list[RepairGroup]] = {}
            for anchor in positions:
                glist = []
                for d in sorted(free):
                    gpos = tuple(fiber_mod.recovery_support(code, anchor, d))
                    gabs = tuple(code.points[p].fibers[d] for p in gpos)
                    if len(gpos) < 2:
                        raise BadOrder("degenerate single-member repair group")
                    glist.append(
                        RepairGroup(
                            positions=gpos,
                            abscissae=gabs,
                            degree=fiber_degrees[d] - spec.rho[d],
                            direction=d,
                            depth=native_level[d],
                            posset=frozenset(gpos),
                        )
                    )
                groups[anchor] = glist
            supports[lev - 1].append(Support(positions, frozenset(positions), groups))

    levels = []
    for j in range(1, H + 1):
        tail = order[j - 1 :]
        n_j = math.prod(fiber_degrees[d] for d in tail)
        s_j = math.prod(fiber_degrees[d] - spec.rho[d] + 1 for d in tail)
        delta_j = math.prod(spec.rho[d] for d in tail)
        levels.append(
            LevelParams(n=n_j, s=s_j, delta=delta_j, availability=H + 1 - j)
        )
    return HierarchyStructure(
        code=code,
        kind="fiber",
        H=H,
        levels=tuple(levels),
        supports=supports,
        support_id=support_id,
        meta={"order": list(order)},
    )


# -- structural invariant checks -------------------------------------------------


@dataclass
class StructureCheck:
    nesting_ok: bool
    groups_inside_supports: bool
    groups_disjoint: bool
    availability_ok: bool
    violations: list[str]

    @property
    def passed(self) -> bool:
        return (
            self.nesting_ok
            and self.groups_inside_supports
            and self.groups_disjoint
            and self.availability_ok
        )


def check_structure(structure: HierarchyStructure) -> StructureCheck:
    """Exhaustive nesting / containment / disjointness / availability audit."""
    violations: list[str] = []
    nesting_ok = True
    for i in range(structure.code.n):
        chain = [structure.support_of(lev, i).posset for lev in range(1, structure.H + 1)]
        if any(i not in s for s in chain):
            nesting_ok = False
            violations.append(f"position {i} missing from its own support")
        for lev in range(structure.H - 1):
            if not chain[lev + 1] <= chain[lev]:
                nesting_ok = False
                violations.append(f"position {i}: level {lev + 2} not inside level {lev + 1}")

    inside_ok = True
    disjoint_ok = True
    availability_ok = True
    for lev in range(1, structure.H + 1):
        expected = structure.levels[lev - 1].availability
        for sup in structure.supports[lev - 1]:
            for anchor, glist in sup.groups.items():
                if len(glist) != expected:
                    availability_ok = False
                    violations.append(
                        f"level {lev} anchor {anchor}: {len(glist)} groups, expected {expected}"
                    )
                for g in glist:
                    if anchor not in g.posset:
                        inside_ok = False
                        violations.append(f"group at level {lev} misses anchor {anchor}")
                    if not g.posset <= sup.posset:
                        inside_ok = False
                        violations.append(
                            f"level {lev} anchor {anchor}: group leaves its support"
                        )
                for a in range(len(glist)):
                    for b in range(a + 1, len(glist)):
                        if glist[a].posset & glist[b].posset != {anchor}:
                            disjoint_ok = False
                            violations.append(
                                f"level {lev} anchor {anchor}: groups {a},{b} overlap"
                            )
    return StructureCheck(nesting_ok, inside_ok, disjoint_ok, availability_ok, violations)
