"""Typed robot commands and queries.

Every user request that survives parsing becomes one of these values. The
same action/params JSON shape is used wherever an intent crosses a file or
wire boundary (model replies, scenario scripts, the utterance corpus).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

DIRECTIONS = ("forward", "backward", "left", "right")
STATUS_TOPICS = ("battery", "sensors", "tasks", "errors", "all")

MAX_MOVE_DISTANCE_M = 100.0


@dataclass(frozen=True)
class Sit:
    pass


@dataclass(frozen=True)
class Stand:
    pass


@dataclass(frozen=True)
class Move:
    distance_m: float
    direction: str


@dataclass(frozen=True)
class ReturnTo:
    label: str


@dataclass(frozen=True)
class RecordLocation:
    label: str


@dataclass(frozen=True)
class Lights:
    on: bool


@dataclass(frozen=True)
class QueryStatus:
    topic: str


@dataclass(frozen=True)
class QueryCapabilities:
    pass


@dataclass(frozen=True)
class Schedule:
    inner: "Intent"
    delay_s: int


Intent = Union[
    Sit, Stand, Move, ReturnTo, RecordLocation, Schedule, Lights, QueryStatus, QueryCapabilities
]

_ACTION_NAMES = {
    Sit: "sit",
    Stand: "stand",
    Move: "move",
    ReturnTo: "return_to",
    RecordLocation: "record_location",
    Schedule: "schedule",
    Lights: "lights",
    QueryStatus: "query_status",
    QueryCapabilities: "query_capabilities",
}


class IntentError(ValueError):
    """An intent value or its JSON form violates the intent rules."""


def is_command(intent: Intent) -> bool:
    """Queries are answered from a snapshot; everything else drives the robot."""
    return not isinstance(intent, (QueryStatus, QueryCapabilities))


def validate_intent(intent: Intent) -> None:
    """Raise IntentError if the intent breaks a sanity rule.

    Rules: move distance in (0, 100] m with a known direction, schedule delay
    positive and never nesting another schedule, labels and topics nonempty
    and known.
    """
    if isinstance(intent, Move):
        if not (0 < intent.distance_m <= MAX_MOVE_DISTANCE_M):
            raise IntentError(f"move distance {intent.distance_m} m outside (0, {MAX_MOVE_DISTANCE_M:g}]")
        if intent.direction not in DIRECTIONS:
            raise IntentError(f"unknown direction {intent.direction!r}")
    elif isinstance(intent, (ReturnTo, RecordLocation)):
        if not intent.label or not intent.label.strip():
            raise IntentError("location label must be nonempty")
    elif isinstance(intent, Schedule):
        if isinstance(intent.inner, Schedule):
            raise IntentError("schedule may not nest another schedule")
        if not isinstance(intent.delay_s, int) or isinstance(intent.delay_s, bool) or intent.delay_s <= 0:
            raise IntentError(f"schedule delay must be a positive integer, got {intent.delay_s!r}")
        validate_intent(intent.inner)
    elif isinstance(intent, Lights):
        if not isinstance(intent.on, bool):
            raise IntentError(f"lights takes a boolean, got {intent.on!r}")
    elif isinstance(intent, QueryStatus):
        if intent.topic not in STATUS_TOPICS:
            raise IntentError(f"unknown status topic {intent.topic!r}")
    elif not isinstance(intent, (Sit, Stand, QueryCapabilities)):
        raise IntentError(f"not an intent: {intent!r}")


def action_name(intent: Intent) -> str:
    return _ACTION_NAMES[type(intent)]


def intent_to_dict(intent: Intent) -> dict:
    """Serialize to the {"action": ..., "params": {...}} form."""
    params: dict = {}
    if isinstance(intent, Move):
        params = {"distance_m": intent.distance_m, "direction": intent.direction}
    elif isinstance(intent, ReturnTo) or isinstance(intent, RecordLocation):
        params = {"label": intent.label}
    elif isinstance(intent, Schedule):
        params = {"inner": intent_to_dict(intent.inner), "delay_s": intent.delay_s}
    elif isinstance(intent, Lights):
        params = {"on": intent.on}
    elif isinstance(intent, QueryStatus):
        params = {"topic": intent.topic}
    return {"action": action_name(intent), "params": params}


def intent_from_dict(data: object) -> Intent:
    """Parse and validate the {"action": ..., "params": {...}} form.

    Raises IntentError on unknown actions, missing or ill-typed parameters,
    and sanity-rule violations.
    """
    if not isinstance(data, dict):
        raise IntentError(f"intent must be an object, got {type(data).__name__}")
    action = data.get("action")
    params = data.get("params", {})
    if params is None:
        params = {}
    if not isinstance(params, dict):
        raise IntentError("params must be an object")

    intent: Intent
    if action == "sit":
        intent = Sit()
    elif action == "stand":
        intent = Stand()
    elif action == "move":
        intent = Move(
            distance_m=_number(params, "distance_m"),
            direction=_string(params, "direction"),
        )
    elif action == "return_to":
        intent = ReturnTo(label=_string(params, "label"))
    elif action == "record_location":
        intent = RecordLocation(label=_string(params, "label"))
    elif action == "schedule":
        if "inner" not in params:
            raise IntentError("schedule requires an inner action")
        delay = params.get("delay_s")
        if not isinstance(delay, int) or isinstance(delay, bool):
            raise IntentError(f"delay_s must be an integer, got {delay!r}")
        intent = Schedule(inner=intent_from_dict(params["inner"]), delay_s=delay)
    elif action == "lights":
        on = params.get("on")
        if not isinstance(on, bool):
            raise IntentError(f"lights 'on' must be a boolean, got {on!r}")
        intent = Lights(on=on)
    elif action == "query_status":
        intent = QueryStatus(topic=_string(params, "topic"))
    elif action == "query_capabilities":
        intent = QueryCapabilities()
    else:
        raise IntentError(f"unknown action {action!r}")

    validate_intent(intent)
    return intent


def describe(intent: Intent) -> str:
    """Short human phrase for logs and spoken confirmations."""
    if isinstance(intent, Sit):
        return "sit"
    if isinstance(intent, Stand):
        return "stand"
    if isinstance(intent, Move):
        return f"move {intent.distance_m:g} m {intent.direction}"
    if isinstance(intent, ReturnTo):
        return f"return to {intent.label}"
    if isinstance(intent, RecordLocation):
        return f"record location {intent.label}"
    if isinstance(intent, Schedule):
        return f"{describe(intent.inner)} in {intent.delay_s} s"
    if isinstance(intent, Lights):
        return "lights on" if intent.on else "lights off"
    if isinstance(intent, QueryStatus):
        return f"status of {intent.topic}"
    return "list capabilities"


def _number(params: dict, key: str) -> float:
    value = params.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise IntentError(f"{key} must be a number, got {value!r}")
    return float(value)


def _string(params: dict, key: str) -> str:
    value = params.get(key)
    if not isinstance(value, str):
        raise IntentError(f"{key} must be a string, got {value!r}")
    return value
