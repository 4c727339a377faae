import itertools

import pytest

from hlrc.errors import BadT, DegreeTooHigh, EmptyS, LTooLarge, NonPrime
from hlrc.fiber import (
    FactorCurve,
    FiberSpec,
    artin_schreier_spec,
    build_fiber_code,
    enumerate_split_points,
    fiber_params,
    hermitian_spec,
    middle_support,
    prime_power,
    recovery_support,
    verify_rm_embedding,
)
from hlrc.gf import build_field
from hlrc.recovery import interpolate_erased


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(8) == (2, 3)
    assert prime_power(5) == (5, 1)
    with pytest.raises(ValueError):
        prime_power(12)


def test_hermitian_q2_points_and_code():
    spec = hermitian_spec(2)
    S, B = enumerate_split_points(spec)
    assert S == [1]
    assert len(B) == 6  # q^3 - q
    code = build_fiber_code(spec)
    assert (code.n, code.k) == (6, 2)
    assert code.basis == ((0, 0, 0), (0, 1, 0))  # constants and y
    assert code.rank_matches_formula


@pytest.mark.parametrize("q,n,k", [(2, 6, 2), (3, 24, 6), (4, 60, 12)])
def test_hermitian_family_sizes(q, n, k):
    code = build_fiber_code(hermitian_spec(q))
    assert (code.n, code.k) == (n, k)
    assert n == q**3 - q and k == q * q - q
    assert code.rank_matches_formula


def test_hermitian_params():
    p3 = fiber_params(hermitian_spec(3))
    assert (p3.n, p3.k, p3.d_lower) == (24, 6, 14)
    assert p3.d_provenance == "family-exact"
    assert p3.localities == (3, 2)  # (q, q-1) for the (y, x) fibers
    assert p3.fiber_sizes == (4, 3)
    assert any("locality" in note for note in p3.notes)
    p2 = fiber_params(hermitian_spec(2))
    assert (p2.n, p2.k, p2.d_lower) == (6, 2, 4)


def test_artin_schreier_basics():
    spec = artin_schreier_spec(3, 1, 1, 1)
    S, B = enumerate_split_points(spec)
    assert len(S) == 9  # every base value splits
    assert len(B) == 27  # p^t * q^2
    code = build_fiber_code(spec)
    assert (code.n, code.k) == (27, 4)
    assert code.rank_matches_formula
    params = fiber_params(spec)
    assert (params.n, params.k, params.d_lower) == (27, 4, 20)
    assert params.d_provenance == "family-lower-bound"
    assert params.localities == (2,)


def test_artin_schreier_field_and_coefficients():
    # the curve coefficients a_i must be roots of X^q + X, GF(p)-independent
    spec = artin_schreier_spec(3, 2, 2, 1)
    f = spec.field
    q = 9
    assert f.q == 81
    for fac in spec.factors:
        a = fac.f[-1]
        assert f.add(f.pow(a, q), a) == 0
        assert fac.L == (f.neg(1), 1)  # y^p - y
    a1 = spec.factors[0].f[-1]
    a2 = spec.factors[1].f[-1]
    for x in range(3):
        for y in range(3):
            if (x, y) != (0, 0):
                assert f.add(f.mul(x, a1), f.mul(y, a2)) != 0


def test_artin_schreier_errors():
    with pytest.raises(BadT):
        artin_schreier_spec(3, 1, 2, 1)
    with pytest.raises(NonPrime):
        artin_schreier_spec(2, 1, 1, 1)
    with pytest.raises(NonPrime):
        artin_schreier_spec(9, 1, 1, 1)
    with pytest.raises(LTooLarge):
        artin_schreier_spec(3, 1, 1, 8)  # 27 - 8*3 - 4 = -1 < 1
    assert artin_schreier_spec(3, 1, 1, 7).l == 7  # 27 - 21 - 4 = 2 >= 1


def test_kummer_square_example():
    # y^2 = y0 over GF(5), zero excluded: S = quadratic residues {1, 4}
    f5 = build_field(5, 1)
    spec = FiberSpec(
        f5,
        (FactorCurve(kind="kummer", f=(0, 1), e=2, exclude_zero=True),),
        (2,),
        0,
    )
    S, B = enumerate_split_points(spec)
    assert S == [1, 4]
    assert [(pt.base, pt.fibers) for pt in B] == [
        (1, (1,)),
        (1, (4,)),
        (4, (2,)),
        (4, (3,)),
    ]


def test_empty_s():
    f3 = build_field(3, 1)
    spec = FiberSpec(
        f3,
        (FactorCurve(kind="kummer", f=(2,), e=2),),  # y^2 = 2 has no roots mod 3
        (2,),
        0,
    )
    with pytest.raises(EmptyS):
        enumerate_split_points(spec)


def test_degree_too_high():
    spec = hermitian_spec(2)
    bad = FiberSpec(spec.field, spec.factors, spec.rho, 1, preset="hermitian")
    with pytest.raises(DegreeTooHigh):
        build_fiber_code(bad)  # |S| = 1 allows only l = 0


def test_point_order_is_lexicographic():
    code = build_fiber_code(hermitian_spec(3))
    coords = [pt.coords() for pt in code.points]
    assert coords == sorted(coords)


@pytest.mark.parametrize(
    "maker,direction,size",
    [
        (lambda: hermitian_spec(3), 0, 4),  # y fiber: q+1
        (lambda: hermitian_spec(3), 1, 3),  # x fiber: q
        (lambda: artin_schreier_spec(3, 1, 1, 1), 0, 3),  # p
    ],
)
def test_recovery_support_sizes(maker, direction, size):
    code = build_fiber_code(maker())
    for i in range(code.n):
        sup = recovery_support(code, i, direction)
        assert len(sup) == size
        assert i in sup
        pi = code.points[i]
        for j in sup:
            pj = code.points[j]
            assert pj.base == pi.base
            for d, (a, b) in enumerate(zip(pi.fibers, pj.fibers)):
                if d != direction:
                    assert a == b


def test_middle_support_sizes():
    h3 = build_fiber_code(hermitian_spec(3))
    assert len(middle_support(h3, 0, [0, 1])) == 12  # q(q+1)
    assert middle_support(h3, 5, []) == [5]
    a22 = build_fiber_code(artin_schreier_spec(3, 2, 2, 1))
    assert len(middle_support(a22, 0, [0, 1])) == 9


@pytest.mark.parametrize(
    "maker", [lambda: hermitian_spec(2), lambda: hermitian_spec(3), lambda: artin_schreier_spec(3, 1, 1, 1)]
)
def test_recovery_support_disjointness_identity(maker):
    # two distinct members of a direction-j support have disjoint direction-k
    # supports for k != j; exhaustive over all positions and direction pairs
    code = build_fiber_code(maker())
    t = len(code.spec.factors)
    for i in range(code.n):
        for j in range(t):
            sup_j = recovery_support(code, i, j)
            for k in range(t):
                if k == j:
                    continue
                for l1, l2 in itertools.combinations(sup_j, 2):
                    s1 = set(recovery_support(code, l1, k))
                    s2 = set(recovery_support(code, l2, k))
                    assert not (s1 & s2)


def test_middle_support_union_identity():
    code = build_fiber_code(hermitian_spec(3))
    for i in range(0, code.n, 5):
        mid = set(middle_support(code, i, [0, 1]))
        for j in (0, 1):
            rebuilt = set()
            for l in recovery_support(code, i, j):
                rebuilt.update(middle_support(code, l, [k for k in (0, 1) if k != j]))
            assert rebuilt == mid


@pytest.mark.parametrize(
    "maker", [lambda: hermitian_spec(2), lambda: hermitian_spec(3), lambda: artin_schreier_spec(3, 1, 1, 1)]
)
def test_basis_restricts_to_low_degree_on_supports(maker):
    # every basis row, restricted to a direction-j support, is a polynomial of
    # degree <= d_j - rho_j in the fiber coordinate: interpolating from
    # degree+1 symbols must reproduce the remaining ones exactly
    code = build_fiber_code(maker())
    spec = code.spec
    field = code.field
    degrees = spec.fiber_degrees()
    for j in range(len(spec.factors)):
        deg = degrees[j] - spec.rho[j]
        seen = set()
        for i in range(code.n):
            sup = tuple(recovery_support(code, i, j))
            if sup in seen:
                continue
            seen.add(sup)
            absc = [code.points[p].fibers[j] for p in sup]
            for row in code.generator:
                vals = [int(row[p]) for p in sup]
                for probe in range(len(sup)):
                    mask = [idx == probe for idx in range(len(sup))]
                    rec = interpolate_erased(field, absc, vals, mask, deg)
                    assert rec[probe] == vals[probe]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_embedding_hermitian(q):
    code = build_fiber_code(hermitian_spec(q))
    rep = verify_rm_embedding(code)
    assert rep.passed
    assert rep.num_variables == 3
    assert rep.degree_bound == 2 * q - 3
    assert rep.max_basis_degree <= 2 * q - 3


def test_embedding_artin_schreier():
    code = build_fiber_code(artin_schreier_spec(3, 1, 1, 1))
    rep = verify_rm_embedding(code)
    assert rep.passed
    assert rep.degree_bound == 2  # l + (p - 2) = 1 + 1
    assert rep.num_variables == 2


def test_embedding_trivial_factor():
    # single Kummer factor, l = 0: bound is d_h - rho
    f5 = build_field(5, 1)
    spec = FiberSpec(
        f5, (FactorCurve(kind="kummer", f=(0, 1), e=4, exclude_zero=True),), (2,), 0
    )
    code = build_fiber_code(spec)
    rep = verify_rm_embedding(code)
    assert rep.passed
    assert rep.degree_bound == 2


def test_custom_params_flagged_unverified():
    f5 = build_field(5, 1)
    spec = FiberSpec(
        f5, (FactorCurve(kind="kummer", f=(0, 1), e=2, exclude_zero=True),), (2,), 0
    )
    params = fiber_params(spec)
    assert params.d_provenance == "generic-unverified"
    assert params.n == 4
    assert any("unverified" in n for n in params.notes)


def test_factor_validation():
    with pytest.raises(ValueError):
        FactorCurve(kind="kummer", f=(0, 1), e=1)
    with pytest.raises(ValueError):
        FactorCurve(kind="additive", f=(0, 1), L=(1,))  # degree 1 additive map
    with pytest.raises(ValueError):
        FactorCurve(kind="mystery", f=(0, 1))
    with pytest.raises(ValueError):
        FactorCurve(kind="kummer", f=(0, 0), e=2)
    f3 = build_field(3, 1)
    with pytest.raises(ValueError):
        FiberSpec(f3, (FactorCurve(kind="kummer", f=(0, 1), e=3),), (4,), 0)  # rho > d
