import pytest

from hlrc.fiber import build_fiber_code, hermitian_spec
from hlrc.gf import build_field
from hlrc.rm import RMSpec, rm_build
from hlrc.sim import ErasureModel, run_trials


def _hermitian3():
    code = build_fiber_code(hermitian_spec(3))
    from hlrc.recovery import build_fiber_hierarchy

    return code, build_fiber_hierarchy(code)


def _rm533():
    code = rm_build(RMSpec(build_field(5, 1), 3, 3))
    from hlrc.recovery import build_rm_hierarchy

    return code, build_rm_hierarchy(code)


def test_model_validation():
    with pytest.raises(ValueError):
        ErasureModel(kind="iid", epsilon=1.5)
    with pytest.raises(ValueError):
        ErasureModel(kind="fixed_weight", weight=-1)
    with pytest.raises(ValueError):
        ErasureModel(kind="group_burst", level=0)
    with pytest.raises(ValueError):
        ErasureModel(kind="gaussian")


def test_zero_epsilon_is_trivial():
    code, st = _hermitian3()
    stats = run_trials(code, st, ErasureModel(kind="iid", epsilon=0.0), 20, seed=1)
    assert stats.successes == 20
    assert stats.symbols_total == 0
    assert stats.residual_histogram == {0: 20}


def test_reproducibility_same_seed():
    code, st = _hermitian3()
    model = ErasureModel(kind="iid", epsilon=0.15)
    a = run_trials(code, st, model, 40, seed=7)
    b = run_trials(code, st, model, 40, seed=7)
    assert a.to_dict() == b.to_dict()
    c = run_trials(code, st, model, 40, seed=8)
    assert c.to_dict() != a.to_dict()


def test_trial_consistency_and_levels():
    code, st = _rm533()
    model = ErasureModel(kind="fixed_weight", weight=1)
    stats = run_trials(code, st, model, 100, seed=3)
    assert stats.successes == 100
    assert stats.value_mismatches == 0
    # single erasures are always handled by the bottom level
    assert set(stats.per_level) == {st.H}
    assert stats.per_level[st.H] == 100
    assert stats.symbols_max == 4  # v+1


def test_group_burst_model():
    code, st = _hermitian3()
    model = ErasureModel(kind="group_burst", level=2, extra=1)
    stats = run_trials(code, st, model, 50, seed=11, fallback=False)
    assert stats.trials == 50
    assert stats.value_mismatches == 0
    # bursts erase a whole bottom fiber (3 symbols) + 1 more: recoveries mix levels
    assert sum(stats.per_level.values()) > 0


def test_fallback_never_hurts():
    code, st = _hermitian3()
    model = ErasureModel(kind="iid", epsilon=0.35)
    plain = run_trials(code, st, model, 60, seed=5, fallback=False)
    helped = run_trials(code, st, model, 60, seed=5, fallback=True)
    assert helped.successes >= plain.successes
    assert helped.value_mismatches == 0


def test_single_erasure_on_rm753_always_bottom_level():
    code = rm_build(RMSpec(build_field(7, 1), 5, 3))
    from hlrc.recovery import build_rm_hierarchy

    st = build_rm_hierarchy(code)
    stats = run_trials(code, st, ErasureModel(kind="fixed_weight", weight=1), 1000, seed=42)
    assert stats.successes == 1000
    assert stats.per_level == {2: 1000}  # bottom level only
    assert stats.symbols_max == 6 and stats.symbols_total == 6000  # v+1 reads each


def test_trials_must_be_positive():
    code, st = _hermitian3()
    with pytest.raises(ValueError):
        run_trials(code, st, ErasureModel(kind="iid", epsilon=0.1), 0, seed=0)


def test_stats_dict_is_json_friendly():
    import json

    code, st = _hermitian3()
    stats = run_trials(code, st, ErasureModel(kind="fixed_weight", weight=2), 10, seed=2)
    text = json.dumps(stats.to_dict(), sort_keys=True)
    assert "success_rate" in text
