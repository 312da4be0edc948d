import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from fleetlink.patterns import (
    BadMotorId,
    DynamicPattern,
    EmptyMotors,
    Frame,
    PatternError,
    PlaybackParams,
    StaticPattern,
    PREDEFINED_NAMES,
    expand,
    pattern_from_dict,
    pattern_to_dict,
    predefined,
    repetition_ends,
    validate_params,
    validate_pattern,
)

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"


def load_golden(name):
    return json.loads((GOLDEN_DIR / f"{name}.json").read_text())


@pytest.mark.parametrize("name", PREDEFINED_NAMES)
def test_predefined_matches_golden_sequences(name):
    golden = load_golden(name)
    params = PlaybackParams(
        reps=golden["params"]["reps"],
        step_ms=golden["params"]["step_ms"],
        intensity_pct=golden["params"]["intensity_pct"],
    )
    schedule = expand(predefined(name), params)
    assert schedule.total_ms == golden["total_ms"]
    got = [
        {"offset_ms": f.offset_ms, "active": sorted(f.active), "intensity_pct": f.intensity_pct}
        for f in schedule.frames
    ]
    assert got == golden["frames"]


def test_predefined_shapes():
    assert predefined("pulse_matrix") == StaticPattern(frozenset(range(1, 10)))
    assert predefined("pulse_bottom") == StaticPattern(frozenset({10}))
    assert predefined("pulse_top_centre") == StaticPattern(frozenset({5}))
    circ = predefined("circular")
    assert [sorted(g) for g in circ.groups] == [[4], [5], [6], [10]]
    rows = predefined("moving_rows")
    assert [sorted(g) for g in rows.groups] == [[1, 2, 3], [4, 5, 6], [7, 8, 9]]


def test_predefined_unknown_name():
    with pytest.raises(PatternError):
        predefined("wave")


def test_validate_rejects_empty_static():
    with pytest.raises(EmptyMotors):
        validate_pattern(StaticPattern(frozenset()))


def test_validate_rejects_bad_motor_id():
    with pytest.raises(BadMotorId) as exc:
        validate_pattern(DynamicPattern((frozenset({1}), frozenset({11}))))
    assert exc.value.motor_id == 11


def test_validate_accepts_bottom_motor():
    validate_pattern(StaticPattern(frozenset({10})))


def test_validate_rejects_empty_group_and_empty_group_list():
    with pytest.raises(EmptyMotors):
        validate_pattern(DynamicPattern((frozenset({1}), frozenset())))
    with pytest.raises(EmptyMotors):
        validate_pattern(DynamicPattern(()))


def test_expand_circular_hand_enumeration():
    # One rep at 250 ms/step: groups 4, 5, 6, 10 then all-off at 1000.
    schedule = expand(predefined("circular"), PlaybackParams(reps=1, step_ms=250))
    assert [(f.offset_ms, sorted(f.active)) for f in schedule.frames] == [
        (0, [4]),
        (250, [5]),
        (500, [6]),
        (750, [10]),
        (1000, []),
    ]
    assert schedule.total_ms == 1000


def test_expand_static_two_reps_hand_enumeration():
    # pulse_bottom, two pulses at 100 ms: on, off, on, terminal off at 300.
    schedule = expand(predefined("pulse_bottom"), PlaybackParams(reps=2, step_ms=100))
    assert [(f.offset_ms, sorted(f.active)) for f in schedule.frames] == [
        (0, [10]),
        (100, []),
        (200, [10]),
        (300, []),
    ]
    assert schedule.total_ms == 300


@given(
    reps=st.integers(min_value=1, max_value=5),
    step=st.integers(min_value=10, max_value=400),
    name=st.sampled_from(PREDEFINED_NAMES),
)
def test_expand_closed_forms(name, reps, step):
    spec = predefined(name)
    schedule = expand(spec, PlaybackParams(reps=reps, step_ms=step))
    if isinstance(spec, DynamicPattern):
        assert schedule.total_ms == step * reps * len(spec.groups)
    else:
        assert schedule.total_ms == step * (2 * reps - 1)
    offsets = [f.offset_ms for f in schedule.frames]
    assert offsets[0] == 0
    assert all(a < b for a, b in zip(offsets, offsets[1:]))
    assert schedule.frames[-1].active == frozenset()
    assert schedule.frames[-1].offset_ms == schedule.total_ms
    assert all(all(1 <= m <= 10 for m in f.active) for f in schedule.frames)


def test_expand_is_deterministic():
    params = PlaybackParams(reps=3, step_ms=120, intensity_pct=55)
    assert expand(predefined("moving_cols"), params) == expand(predefined("moving_cols"), params)


def test_expand_rejects_invalid_pattern():
    with pytest.raises(EmptyMotors):
        expand(StaticPattern(frozenset()), PlaybackParams())


def test_frame_at_lookup():
    schedule = expand(predefined("circular"), PlaybackParams(reps=1, step_ms=250))
    assert sorted(schedule.frame_at(0).active) == [4]
    assert sorted(schedule.frame_at(249).active) == [4]
    assert sorted(schedule.frame_at(250).active) == [5]
    assert sorted(schedule.frame_at(999).active) == [10]
    assert schedule.frame_at(1000).active == frozenset()


def test_repetition_ends():
    # Static: each rep ends with its on-pulse; dynamic: after the last group.
    assert repetition_ends(predefined("pulse_bottom"), PlaybackParams(reps=3, step_ms=100)) == (100, 300, 500)
    assert repetition_ends(predefined("circular"), PlaybackParams(reps=2, step_ms=250)) == (1000, 2000)
    spec = predefined("moving_rows")
    params = PlaybackParams(reps=4, step_ms=50)
    assert repetition_ends(spec, params)[-1] == expand(spec, params).total_ms


def test_predefined_signatures_pairwise_distinct():
    params = PlaybackParams(reps=1, step_ms=250)
    signatures = {name: expand(predefined(name), params).signature() for name in PREDEFINED_NAMES}
    for a, b in itertools.combinations(PREDEFINED_NAMES, 2):
        assert signatures[a] != signatures[b], f"{a} and {b} expand identically"


@pytest.mark.parametrize(
    "params",
    [
        PlaybackParams(reps=0),
        PlaybackParams(step_ms=9),
        PlaybackParams(intensity_pct=0),
        PlaybackParams(intensity_pct=101),
        PlaybackParams(realert_delay_ms=-1),
    ],
)
def test_params_validation_rejects(params):
    with pytest.raises(ValueError):
        validate_params(params)


def test_pattern_dict_round_trip():
    for name in PREDEFINED_NAMES:
        spec = predefined(name)
        assert pattern_from_dict(pattern_to_dict(spec)) == spec
    assert pattern_from_dict({"predefined": "circular"}) == predefined("circular")
    with pytest.raises(PatternError):
        pattern_from_dict({"static": [1], "dynamic": [[2]]})
    with pytest.raises(BadMotorId):
        pattern_from_dict({"dynamic": [[1], [11]]})


def test_frame_schedule_frames_are_frames():
    schedule = expand(predefined("pulse_top_centre"), PlaybackParams())
    assert isinstance(schedule.frames[0], Frame)
    assert schedule.frames[0].intensity_pct == 100
