import numpy as np
import pytest

from hlrc.errors import (
    BadOrder,
    DegreeTooHighForRecovery,
    NotEnoughSymbols,
    Unrecoverable,
)
from hlrc.fiber import artin_schreier_spec, build_fiber_code, hermitian_spec
from hlrc.geometry import flat_points, make_flat
from hlrc.gf import build_field
from hlrc.oracle import min_distance_bruteforce
from hlrc.recovery import (
    ErasureWord,
    build_fiber_hierarchy,
    build_rm_hierarchy,
    check_structure,
    hierarchical_recover,
    interpolate_erased,
    peel_level,
    solve_erasures_ml,
)
from hlrc.rm import RMSpec, rm_build
from hlrc.rng import SplitMix64


def _codeword(code, seed=5):
    rng = SplitMix64(seed)
    msg = np.array([rng.below(code.field.q) for _ in range(code.num_basis)], dtype=np.int32)
    if not msg.any():
        msg[0] = 1
    return code.encode(msg)


# -- structures -----------------------------------------------------------------


def test_rm_structure_level_params():
    code = rm_build(RMSpec(build_field(5, 1), 3, 3))
    st = build_rm_hierarchy(code)
    assert st.H == 2
    l1, l2 = st.levels
    assert (l1.n, l1.s, l1.delta, l1.availability) == (25, 10, 10, 6)
    assert (l2.n, l2.s, l2.delta, l2.availability) == (5, 4, 2, 1)
    assert l1.availability_ambient == 31 and l2.availability_ambient == 6
    # line repair groups: 5 points, degree bound v=3
    g = st.groups_of(2, 0)[0]
    assert len(g.positions) == 5 and g.degree == 3


def test_rm_structure_rejects_v_qminus1():
    code = rm_build(RMSpec(build_field(3, 1), 2, 2))
    with pytest.raises(DegreeTooHighForRecovery):
        build_rm_hierarchy(code)


def test_rm_structure_single_level():
    code = rm_build(RMSpec(build_field(3, 1), 1, 3))
    st = build_rm_hierarchy(code, dims=[1])
    assert st.H == 1
    assert st.levels[0].n == 3
    assert all(len(sup.positions) == 3 for sup in st.supports[0])


@pytest.mark.parametrize("policy", ["deterministic", "seeded"])
def test_rm_structure_invariants(policy):
    code = rm_build(RMSpec(build_field(3, 1), 1, 3))
    st = build_rm_hierarchy(code, policy=policy, seed=11)
    chk = check_structure(st)
    assert chk.passed, chk.violations


def test_fiber_structure_hermitian_params():
    # x-direction bottom: (n1,s1,d1,n2,s2,d2) = (q(q+1), q(q-1), 4, q, q-1, 2)
    code = build_fiber_code(hermitian_spec(3))
    st = build_fiber_hierarchy(code)
    l1, l2 = st.levels
    assert (l1.n, l1.s, l1.delta, l1.availability) == (12, 6, 4, 2)
    assert (l2.n, l2.s, l2.delta, l2.availability) == (3, 2, 2, 1)


def test_fiber_structure_alternate_order():
    code = build_fiber_code(hermitian_spec(3))
    st = build_fiber_hierarchy(code, order=[1, 0])  # y-direction bottom
    l1, l2 = st.levels
    assert (l1.n, l2.n) == (12, 4)
    assert (l1.delta, l2.delta) == (4, 2)
    single = build_fiber_hierarchy(code, order=[0])
    assert single.H == 1 and single.levels[0].availability == 1
    with pytest.raises(BadOrder):
        build_fiber_hierarchy(code, order=[0, 0])
    with pytest.raises(BadOrder):
        build_fiber_hierarchy(code, order=[2])
    with pytest.raises(BadOrder):
        build_fiber_hierarchy(code, order=[])


def test_fiber_structure_artin_schreier_levels():
    code = build_fiber_code(artin_schreier_spec(3, 2, 2, 1))
    st = build_fiber_hierarchy(code)
    assert [(l.n, l.s, l.delta) for l in st.levels] == [(9, 4, 4), (3, 2, 2)]
    assert [l.availability for l in st.levels] == [2, 1]


@pytest.mark.parametrize(
    "maker",
    [
        lambda: build_fiber_code(hermitian_spec(2)),
        lambda: build_fiber_code(hermitian_spec(3)),
        lambda: build_fiber_code(artin_schreier_spec(3, 1, 1, 1)),
    ],
)
def test_fiber_structure_invariants(maker):
    st = build_fiber_hierarchy(maker())
    chk = check_structure(st)
    assert chk.passed, chk.violations


# -- interpolation ----------------------------------------------------------------


def test_interpolate_constant():
    f = build_field(7, 1)
    rec = interpolate_erased(f, [0, 1, 2], [4, 4, 4], [False, True, False], 0)
    assert rec == {1: 4}


def test_interpolate_quadratic_example():
    # f(x) = x^2 on GF(5); erase the value at x=2; degree bound 2
    f = build_field(5, 1)
    values = [(x * x) % 5 for x in range(5)]
    mask = [x == 2 for x in range(5)]
    rec = interpolate_erased(f, list(range(5)), values, mask, 2)
    assert rec == {2: 4}


def test_interpolate_not_enough_symbols():
    f = build_field(5, 1)
    with pytest.raises(NotEnoughSymbols):
        interpolate_erased(f, [0, 1, 2, 3], [1, 1, 1, 1], [True, True, False, False], 2)
    # exactly deg+1 unerased recovers both erasures
    values = [(3 * x + 1) % 5 for x in range(4)]
    mask = [False, True, True, False]
    rec = interpolate_erased(f, [0, 1, 2, 3], values, mask, 1)
    assert rec == {1: values[1], 2: values[2]}


# -- peeling ----------------------------------------------------------------------


def test_peel_no_erasures_is_empty():
    code = build_fiber_code(hermitian_spec(3))
    st = build_fiber_hierarchy(code)
    word = ErasureWord.from_codeword(_codeword(code))
    assert peel_level(word, st, 1) == []


def test_peel_middle_support_three_erasures():
    code = build_fiber_code(hermitian_spec(3))
    st = build_fiber_hierarchy(code)
    cw = _codeword(code)
    sup = st.supports[0][0]
    word = ErasureWord.from_codeword(cw)
    word.erase(sup.positions[:3])
    events = peel_level(word, st, 1, scope=sup.positions)
    assert not word.mask.any()
    assert np.array_equal(word.values, cw)
    assert all(g.posset <= sup.posset for g, _ in events)


def test_peel_reads_exactly_degree_plus_one():
    code = rm_build(RMSpec(build_field(5, 1), 3, 3))
    st = build_rm_hierarchy(code)
    cw = _codeword(code)
    word = ErasureWord.from_codeword(cw)
    word.erase([7])
    events = peel_level(word, st, 2, scope=st.support_of(2, 7).posset)
    assert len(events) == 1
    g, recovered = events[0]
    assert recovered == [7]
    assert g.degree + 1 == 4  # v+1 symbols
    # there is slack: n_j - delta_j + 1 = 5 - 2 + 1 = 4 >= reads
    assert g.degree + 1 <= st.levels[1].n - st.levels[1].delta + 1


# -- hierarchical recovery -----------------------------------------------------------


def test_single_erasure_bottom_level_rm753():
    code = rm_build(RMSpec(build_field(7, 1), 5, 3))
    st = build_rm_hierarchy(code)
    cw = _codeword(code)
    word = ErasureWord.from_codeword(cw)
    word.erase([100])
    out, rep = hierarchical_recover(word, st)
    assert rep.success
    assert rep.recovered[100].level == 2  # bottom level
    assert rep.recovered[100].symbols_read == 6
    assert rep.symbols_accessed == 6
    assert np.array_equal(out.values, cw)


def test_fully_erased_line_recovers_at_middle_level():
    code = rm_build(RMSpec(build_field(7, 1), 5, 3))
    st = build_rm_hierarchy(code)
    cw = _codeword(code)
    target = 0
    line_support = st.support_of(2, target).positions
    assert len(line_support) == 7
    word = ErasureWord.from_codeword(cw)
    word.erase(line_support)
    out, rep = hierarchical_recover(word, st)
    assert rep.success
    assert np.array_equal(out.values, cw)
    assert rep.recovered[target].level == 1  # bottom failed, plane succeeded
    assert all(rep.recovered[p].level == 1 for p in line_support)


def test_unrecoverable_with_fallback():
    code = build_fiber_code(hermitian_spec(2))
    st = build_fiber_hierarchy(code)
    word = ErasureWord.from_codeword(_codeword(code))
    word.erase(range(code.n))
    with pytest.raises(Unrecoverable):
        hierarchical_recover(word, st, fallback=True)


def test_residual_reported_without_fallback():
    code = build_fiber_code(hermitian_spec(2))
    st = build_fiber_hierarchy(code)
    word = ErasureWord.from_codeword(_codeword(code))
    word.erase(range(code.n))
    out, rep = hierarchical_recover(word, st, fallback=False)
    assert not rep.success
    assert len(rep.residual) == code.n


def test_fallback_succeeds_where_peeling_cannot():
    # a weight-4 pattern inside one middle support can stall peeling (the
    # middle delta is 4), but the full code has d = 14, so the fallback solve
    # must recover it
    code = build_fiber_code(hermitian_spec(3))
    st = build_fiber_hierarchy(code)
    cw = _codeword(code)
    sup = st.supports[0][0]
    stall = None
    import itertools

    for pattern in itertools.combinations(sup.positions, 4):
        word = ErasureWord.from_codeword(cw)
        word.erase(pattern)
        peel_level(word, st, 1, scope=sup.positions)
        if word.mask.any():
            stall = pattern
            break
    assert stall is not None
    word = ErasureWord.from_codeword(cw)
    word.erase(stall)
    out_no, rep_no = hierarchical_recover(word, st, fallback=False)
    assert not rep_no.success
    out, rep = hierarchical_recover(word, st, fallback=True)
    assert rep.success and rep.ml_fallback_used
    assert rep.per_level.get(0)  # fallback recoveries are reported as level 0
    assert np.array_equal(out.values, cw)


def test_solve_erasures_ml_success_and_failure():
    code = build_fiber_code(hermitian_spec(2))
    cw = _codeword(code)
    # every pattern below d succeeds
    word = ErasureWord.from_codeword(cw)
    word.erase([0, 3, 5])
    solved, ok = solve_erasures_ml(code, word)
    assert ok and np.array_equal(solved.values, cw)
    # erasing the support of a minimum-weight codeword defeats the solver
    res = min_distance_bruteforce(code)
    heavy = code.encode(np.array(res.witness, dtype=np.int32))
    support = [i for i, v in enumerate(heavy) if v]
    assert len(support) == res.d == 4
    word = ErasureWord.from_codeword(cw)
    word.erase(support)
    _, ok = solve_erasures_ml(code, word)
    assert not ok


def test_recovered_side_positions_are_committed():
    code = build_fiber_code(hermitian_spec(3))
    st = build_fiber_hierarchy(code)
    cw = _codeword(code)
    word = ErasureWord.from_codeword(cw)
    sup = st.supports[0][0]
    word.erase(sup.positions[:3])
    out, rep = hierarchical_recover(word, st, target=int(sup.positions[0]))
    # recovering the single target peels its whole neighborhood
    assert set(rep.recovered) == set(sup.positions[:3])
    assert not out.mask.any()


def test_scope_can_exclude_an_overlap_subspace():
    # recover a point from one plane while refusing to read a shared line:
    # scope = (A1 minus B) plus the target, where B is a line through the
    # target inside its level-1 plane A1
    code = rm_build(RMSpec(build_field(3, 1), 1, 3))
    st = build_rm_hierarchy(code)
    f = code.field
    cw = _codeword(code)
    target = 0
    plane_sup = st.support_of(1, target)
    pos = {pt: i for i, pt in enumerate(code.points)}
    b_line = make_flat(f, code.points[target], [(1, 1, 0)])
    b_positions = {pos[p] for p in flat_points(f, b_line)}
    assert b_positions <= plane_sup.posset
    scope = (plane_sup.posset - b_positions) | {target}
    word = ErasureWord.from_codeword(cw)
    word.erase([target])
    events = peel_level(word, st, 1, scope=scope)
    assert not word.mask[target]
    assert np.array_equal(word.values, cw)
    for g, _ in events:
        assert g.posset <= scope  # never read from B minus the target
