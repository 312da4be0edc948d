"""Vibration pattern model, the predefined pattern library, and expansion.

Motor layout: motors 1-9 form a 3x3 matrix in row-major order (1 top-left,
3 top-right, 9 bottom-right) worn on top of the forearm; motor 10 sits
beneath the forearm. The physical array spaces motor centres 4 cm apart and
drives the motors at a nominal 200 Hz; both are recorded here as layout
constants for hardware backends.

A pattern is either static (one motor set pulsing on/off together) or
dynamic (an ordered list of motor groups activated one group at a time).
`expand` turns a pattern plus playback parameters into a FrameSchedule, the
timed frame sequence every consumer (scheduler, motor tests, visualizers)
plays back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

MOTOR_COUNT = 10
MATRIX_ROWS = ((1, 2, 3), (4, 5, 6), (7, 8, 9))
BOTTOM_MOTOR = 10
MOTOR_SPACING_CM = 4.0
VIBRATION_FREQUENCY_HZ = 200

MIN_STEP_MS = 10

PREDEFINED_NAMES = (
    "pulse_matrix",
    "pulse_bottom",
    "pulse_top_centre",
    "circular",
    "moving_diagonal",
    "moving_rows",
    "moving_cols",
)


@dataclass(frozen=True)
class StaticPattern:
    motors: frozenset[int]


@dataclass(frozen=True)
class DynamicPattern:
    groups: tuple[frozenset[int], ...]


PatternSpec = Union[StaticPattern, DynamicPattern]


class PatternError(ValueError):
    """A pattern breaks the motor-id or nonemptiness rules."""


class EmptyMotors(PatternError):
    def __init__(self) -> None:
        super().__init__("pattern has an empty motor set")


class BadMotorId(PatternError):
    def __init__(self, motor_id: object) -> None:
        super().__init__(f"motor id {motor_id!r} outside 1..{MOTOR_COUNT}")
        self.motor_id = motor_id


@dataclass(frozen=True)
class PlaybackParams:
    """Playback knobs: repetitions, realert behavior, speed, and intensity.

    reps is how many times the pattern repeats per playback. realert=False is
    the do-not-realert mode: the pattern plays only when its event is first
    detected. realert_delay_ms is the pause between a playback ending and the
    next one starting for a still-active event. step_ms is the per-step
    duration (how fast the pattern plays out). intensity_pct drives the
    motors linearly.
    """

    reps: int = 1
    realert: bool = True
    realert_delay_ms: int = 5000
    step_ms: int = 250
    intensity_pct: int = 100


class ParamsError(ValueError):
    """Playback parameters outside their allowed ranges."""


def validate_params(params: PlaybackParams) -> None:
    if not isinstance(params.reps, int) or isinstance(params.reps, bool) or params.reps < 1:
        raise ParamsError(f"reps must be an integer >= 1, got {params.reps!r}")
    if not isinstance(params.realert, bool):
        raise ParamsError(f"realert must be a boolean, got {params.realert!r}")
    if not isinstance(params.realert_delay_ms, int) or params.realert_delay_ms < 0:
        raise ParamsError(f"realert_delay_ms must be an integer >= 0, got {params.realert_delay_ms!r}")
    if not isinstance(params.step_ms, int) or params.step_ms < MIN_STEP_MS:
        raise ParamsError(f"step_ms must be an integer >= {MIN_STEP_MS}, got {params.step_ms!r}")
    if not isinstance(params.intensity_pct, int) or not (1 <= params.intensity_pct <= 100):
        raise ParamsError(f"intensity_pct must be an integer in [1, 100], got {params.intensity_pct!r}")


@dataclass(frozen=True)
class Frame:
    offset_ms: int
    active: frozenset[int]
    intensity_pct: int


@dataclass(frozen=True)
class FrameSchedule:
    """Timed frames of one playback: offsets strictly increase from 0, the
    last frame is all-off, and total_ms equals the last offset. A frame stays
    active from its offset until the next frame's offset."""

    frames: tuple[Frame, ...]
    total_ms: int

    def frame_at(self, elapsed_ms: int) -> Frame:
        """The frame showing at elapsed_ms: last frame with offset <= elapsed."""
        chosen = self.frames[0]
        for frame in self.frames:
            if frame.offset_ms <= elapsed_ms:
                chosen = frame
            else:
                break
        return chosen

    def signature(self) -> tuple[tuple[int, ...], ...]:
        """Sequence of active sets (sorted ids), ignoring timing and intensity."""
        return tuple(tuple(sorted(frame.active)) for frame in self.frames)


def predefined(name: str) -> PatternSpec:
    """Look up one of the seven predefined patterns by name.

    Static: pulse_matrix (all matrix motors 1-9), pulse_bottom (motor 10),
    pulse_top_centre (motor 5). Dynamic: circular (4, 5, 6, 10 one after the
    other), moving_diagonal (1, 5, 9), moving_rows (1+2+3, 4+5+6, 7+8+9),
    moving_cols (1+4+7, 2+5+8, 3+6+9).
    """
    if name == "pulse_matrix":
        return StaticPattern(frozenset(range(1, 10)))
    if name == "pulse_bottom":
        return StaticPattern(frozenset({BOTTOM_MOTOR}))
    if name == "pulse_top_centre":
        return StaticPattern(frozenset({5}))
    if name == "circular":
        return DynamicPattern(_groups([4], [5], [6], [10]))
    if name == "moving_diagonal":
        return DynamicPattern(_groups([1], [5], [9]))
    if name == "moving_rows":
        return DynamicPattern(_groups([1, 2, 3], [4, 5, 6], [7, 8, 9]))
    if name == "moving_cols":
        return DynamicPattern(_groups([1, 4, 7], [2, 5, 8], [3, 6, 9]))
    raise PatternError(f"unknown predefined pattern {name!r}")


def validate_pattern(spec: PatternSpec) -> None:
    """Accept iff every motor id is in 1..10 and every set/group is nonempty."""
    if isinstance(spec, StaticPattern):
        _check_motor_set(spec.motors)
    elif isinstance(spec, DynamicPattern):
        if not spec.groups:
            raise EmptyMotors()
        for group in spec.groups:
            _check_motor_set(group)
    else:
        raise PatternError(f"not a pattern: {spec!r}")


def expand(spec: PatternSpec, params: PlaybackParams) -> FrameSchedule:
    """Expand a pattern into its frame schedule.

    Dynamic: each group is active for step_ms, groups back to back, the whole
    group sequence repeated reps times with no inter-rep gap, then a terminal
    all-off frame; total = step_ms * reps * group_count.

    Static: the motor set pulses on for step_ms, off for step_ms, reps
    on-pulses in total; the final pulse is followed directly by the terminal
    all-off frame (no trailing off gap), so total = step_ms * (2 * reps - 1).
    """
    validate_pattern(spec)
    validate_params(params)
    step = params.step_ms
    intensity = params.intensity_pct
    frames: list[Frame] = []

    if isinstance(spec, StaticPattern):
        for rep in range(params.reps):
            frames.append(Frame(2 * rep * step, spec.motors, intensity))
            if rep < params.reps - 1:
                frames.append(Frame((2 * rep + 1) * step, frozenset(), intensity))
        total = step * (2 * params.reps - 1)
    else:
        for rep in range(params.reps):
            for i, group in enumerate(spec.groups):
                frames.append(Frame((rep * len(spec.groups) + i) * step, group, intensity))
        total = step * params.reps * len(spec.groups)

    frames.append(Frame(total, frozenset(), intensity))
    return FrameSchedule(frames=tuple(frames), total_ms=total)


def repetition_ends(spec: PatternSpec, params: PlaybackParams) -> tuple[int, ...]:
    """Elapsed-ms offsets at which each repetition completes.

    A static repetition completes at the end of its on-pulse; a dynamic one
    after its last group. The final entry always equals the schedule total.
    """
    step = params.step_ms
    if isinstance(spec, StaticPattern):
        return tuple((2 * k - 1) * step for k in range(1, params.reps + 1))
    group_count = len(spec.groups)
    return tuple(k * group_count * step for k in range(1, params.reps + 1))


def pattern_to_dict(spec: PatternSpec) -> dict:
    if isinstance(spec, StaticPattern):
        return {"static": sorted(spec.motors)}
    return {"dynamic": [sorted(group) for group in spec.groups]}


def pattern_from_dict(data: object) -> PatternSpec:
    """Parse {"predefined": name} | {"static": [ids]} | {"dynamic": [[ids], ...]}."""
    if not isinstance(data, dict) or len(data) != 1:
        raise PatternError(f"pattern must be an object with exactly one of predefined/static/dynamic: {data!r}")
    if "predefined" in data:
        name = data["predefined"]
        if not isinstance(name, str):
            raise PatternError(f"predefined pattern name must be a string, got {name!r}")
        return predefined(name)
    if "static" in data:
        spec: PatternSpec = StaticPattern(frozenset(_int_list(data["static"])))
        validate_pattern(spec)
        return spec
    if "dynamic" in data:
        groups = data["dynamic"]
        if not isinstance(groups, list):
            raise PatternError("dynamic pattern groups must be a list")
        spec = DynamicPattern(tuple(frozenset(_int_list(group)) for group in groups))
        validate_pattern(spec)
        return spec
    raise PatternError(f"pattern must contain predefined, static, or dynamic: {data!r}")


def _groups(*ids: list[int]) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(group) for group in ids)


def _check_motor_set(motors: frozenset[int]) -> None:
    if not motors:
        raise EmptyMotors()
    for motor_id in sorted(motors, key=repr):
        if not isinstance(motor_id, int) or isinstance(motor_id, bool) or not (1 <= motor_id <= MOTOR_COUNT):
            raise BadMotorId(motor_id)


def _int_list(value: object) -> list[int]:
    if not isinstance(value, list):
        raise PatternError(f"motor ids must be a list, got {value!r}")
    for item in value:
        if not isinstance(item, int) or isinstance(item, bool):
            raise BadMotorId(item)
    return value
