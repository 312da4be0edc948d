"""Discrete-time simulation of a small fleet of quadruped-style robots.

Each robot is a fixed-step state machine: straight-line constant-speed
motion toward a target, linear battery drain, a scheduled-action queue, and
fault flags (errors, EStop). Stepping is fully deterministic, so a scenario
script always reproduces the same status trace; that trace is what the rest
of the pipeline consumes.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace

from .intents import (
    Intent,
    Lights,
    Move,
    RecordLocation,
    ReturnTo,
    Schedule,
    Sit,
    Stand,
    describe,
    intent_from_dict,
    intent_to_dict,
    is_command,
)

log = logging.getLogger(__name__)

DEFAULT_CADENCE_MS = 100
ARRIVAL_TOLERANCE_M = 0.05

# Placeholder readings standing in for whatever the real robot would expose.
DEFAULT_SENSORS = {
    "temperature": (21.5, "C"),
    "gas_ppm": (0.0, "ppm"),
    "signal_strength": (-60.0, "dBm"),
}


@dataclass(frozen=True)
class SensorReading:
    value: float
    unit: str


@dataclass(frozen=True)
class RobotStatus:
    """One robot's full telemetry snapshot at a timestamp. Immutable."""

    robot_id: str
    timestamp_ms: int
    battery_pct: float
    estop_enabled: bool
    errors: tuple[str, ...]
    current_task: str | None
    idle: bool
    sensors: dict[str, SensorReading]
    position: tuple[float, float]
    heading_deg: float
    lights_on: bool


@dataclass(frozen=True)
class CommandResult:
    accepted: bool
    message: str


@dataclass(frozen=True)
class ScheduledAction:
    action: Intent
    fire_at_ms: int


@dataclass(frozen=True)
class LocationLabel:
    label: str
    position: tuple[float, float]
    recorded_at_ms: int


@dataclass(frozen=True)
class RobotConfig:
    speed_mps: float = 1.0
    battery_drain_pct_per_s: float = 0.01
    idle_threshold_ms: int = 5000
    initial_battery_pct: float = 100.0
    initial_position: tuple[float, float] = (0.0, 0.0)
    initial_heading_deg: float = 0.0
    sensors: dict[str, tuple[float, str]] = field(default_factory=lambda: dict(DEFAULT_SENSORS))


class UnknownRobotError(KeyError):
    def __init__(self, robot_id: str) -> None:
        super().__init__(robot_id)
        self.robot_id = robot_id

    def __str__(self) -> str:
        return f"unknown robot {self.robot_id!r}"


# Direction vectors relative to heading: forward moves along the heading,
# left is heading + 90 degrees (counter-clockwise).
_DIRECTION_OFFSETS_DEG = {"forward": 0.0, "left": 90.0, "backward": 180.0, "right": 270.0}


class Robot:
    """Mutable state machine for one robot. Not thread-safe; the owning
    fleet serializes access and hands out immutable snapshots."""

    def __init__(self, robot_id: str, config: RobotConfig | None = None) -> None:
        self.robot_id = robot_id
        self.config = config or RobotConfig()
        self.now_ms = 0
        self.battery_pct = self.config.initial_battery_pct
        self.position = self.config.initial_position
        self.heading_deg = self.config.initial_heading_deg % 360.0
        self.estop_enabled = False
        self.errors: list[str] = []
        self.current_task: str | None = None
        self.sitting = False
        self.lights_on = False
        self.motion_target: tuple[float, float] | None = None
        self.stationary_since_ms = 0
        self.scheduled: list[ScheduledAction] = []
        self.locations: dict[str, LocationLabel] = {}
        self.sensors = {name: SensorReading(v, u) for name, (v, u) in self.config.sensors.items()}

    # -- commands ---------------------------------------------------------

    def apply_command(self, intent: Intent, now_ms: int) -> CommandResult:
        if not is_command(intent):
            raise ValueError(f"not a command intent: {intent!r}")
        if isinstance(intent, Sit):
            self.sitting = True
            self._stop_motion(now_ms)
            return CommandResult(True, "sitting down")
        if isinstance(intent, Stand):
            self.sitting = False
            return CommandResult(True, "standing up")
        if isinstance(intent, Move):
            blocked = self._motion_blocked()
            if blocked:
                return blocked
            target = self._offset_position(intent.distance_m, intent.direction)
            self._start_motion(target, describe(intent), now_ms)
            return CommandResult(True, f"moving {intent.direction} {intent.distance_m:g} m")
        if isinstance(intent, RecordLocation):
            label = intent.label.strip()
            self.locations[label] = LocationLabel(label, self.position, now_ms)
            return CommandResult(True, f"recorded location {label!r}")
        if isinstance(intent, ReturnTo):
            label = intent.label.strip()
            if label not in self.locations:
                return CommandResult(False, f"no recorded location named {label!r}")
            blocked = self._motion_blocked()
            if blocked:
                return blocked
            self._start_motion(self.locations[label].position, describe(intent), now_ms)
            return CommandResult(True, f"returning to {label!r}")
        if isinstance(intent, Schedule):
            fire_at = now_ms + intent.delay_s * 1000
            self.scheduled.append(ScheduledAction(intent.inner, fire_at))
            return CommandResult(True, f"scheduled: {describe(intent.inner)} at t={fire_at} ms")
        if isinstance(intent, Lights):
            self.lights_on = intent.on
            return CommandResult(True, "lights on" if intent.on else "lights off")
        raise ValueError(f"unhandled command {intent!r}")

    def _motion_blocked(self) -> CommandResult | None:
        if self.estop_enabled:
            return CommandResult(False, "EStop enabled; release it before moving")
        if self.sitting:
            return CommandResult(False, "robot is sitting; stand first")
        return None

    def _offset_position(self, distance_m: float, direction: str) -> tuple[float, float]:
        angle = math.radians((self.heading_deg + _DIRECTION_OFFSETS_DEG[direction]) % 360.0)
        x, y = self.position
        return (x + distance_m * math.cos(angle), y + distance_m * math.sin(angle))

    def _start_motion(self, target: tuple[float, float], task: str, now_ms: int) -> None:
        self.motion_target = target
        self.current_task = task

    def _stop_motion(self, now_ms: int) -> None:
        if self.motion_target is not None or self.current_task is not None:
            self.motion_target = None
            self.current_task = None
            self.stationary_since_ms = now_ms

    # -- faults -----------------------------------------------------------

    def raise_error(self, code: str) -> None:
        if code not in self.errors:
            self.errors.append(code)

    def clear_errors(self) -> None:
        self.errors.clear()

    def set_estop(self, enabled: bool) -> None:
        self.estop_enabled = enabled
        if enabled:
            self._stop_motion(self.now_ms)

    def set_battery(self, pct: float) -> None:
        if not (0.0 <= pct <= 100.0):
            raise ValueError(f"battery {pct} outside [0, 100]")
        self.battery_pct = float(pct)

    # -- stepping ---------------------------------------------------------

    def step(self, dt_ms: int) -> RobotStatus:
        if dt_ms <= 0:
            raise ValueError(f"dt_ms must be positive, got {dt_ms}")
        new_now = self.now_ms + dt_ms

        if self.motion_target is not None and not self.estop_enabled:
            tx, ty = self.motion_target
            x, y = self.position
            remaining = math.hypot(tx - x, ty - y)
            travel = self.config.speed_mps * dt_ms / 1000.0
            if travel >= remaining or remaining <= ARRIVAL_TOLERANCE_M:
                self.position = (tx, ty)
                self.motion_target = None
                self.current_task = None
                self.stationary_since_ms = new_now
            else:
                frac = travel / remaining
                self.position = (x + (tx - x) * frac, y + (ty - y) * frac)

        drain = self.config.battery_drain_pct_per_s * dt_ms / 1000.0
        self.battery_pct = max(0.0, self.battery_pct - drain)

        self.now_ms = new_now
        due = [a for a in self.scheduled if a.fire_at_ms <= new_now]
        if due:
            self.scheduled = [a for a in self.scheduled if a.fire_at_ms > new_now]
            for action in due:
                result = self.apply_command(action.action, new_now)
                if not result.accepted:
                    log.warning("%s: scheduled %s dropped: %s", self.robot_id, describe(action.action), result.message)

        return self.snapshot()

    @property
    def moving(self) -> bool:
        return self.motion_target is not None

    def _is_idle(self) -> bool:
        if self.current_task is not None or self.moving:
            return False
        return self.now_ms - self.stationary_since_ms >= self.config.idle_threshold_ms

    def snapshot(self) -> RobotStatus:
        return RobotStatus(
            robot_id=self.robot_id,
            timestamp_ms=self.now_ms,
            battery_pct=self.battery_pct,
            estop_enabled=self.estop_enabled,
            errors=tuple(self.errors),
            current_task=self.current_task,
            idle=self._is_idle(),
            sensors=dict(self.sensors),
            position=self.position,
            heading_deg=self.heading_deg,
            lights_on=self.lights_on,
        )


# -- scenario scripting ---------------------------------------------------

FAULT_KINDS = ("raise_error", "clear_errors", "set_estop", "set_battery")


@dataclass(frozen=True)
class ScenarioEvent:
    """One scripted event: either a fault injection or a command intent."""

    at_ms: int
    robot_id: str
    fault: dict | None = None
    command: Intent | None = None


class Fleet:
    """Up to four robots stepped in lockstep. Single-threaded ownership;
    callers serialize access."""

    def __init__(self) -> None:
        self._robots: dict[str, Robot] = {}

    def add_robot(self, robot_id: str, config: RobotConfig | None = None) -> Robot:
        if robot_id in self._robots:
            raise ValueError(f"robot {robot_id!r} already exists")
        robot = Robot(robot_id, config)
        self._robots[robot_id] = robot
        return robot

    def robot(self, robot_id: str) -> Robot:
        try:
            return self._robots[robot_id]
        except KeyError:
            raise UnknownRobotError(robot_id) from None

    @property
    def robot_ids(self) -> list[str]:
        return list(self._robots)

    def apply_command(self, robot_id: str, intent: Intent, now_ms: int) -> CommandResult:
        return self.robot(robot_id).apply_command(intent, now_ms)

    def inject_fault(self, robot_id: str, fault: dict) -> None:
        robot = self.robot(robot_id)
        kind = fault.get("kind")
        if kind == "raise_error":
            robot.raise_error(str(fault["code"]))
        elif kind == "clear_errors":
            robot.clear_errors()
        elif kind == "set_estop":
            robot.set_estop(bool(fault["enabled"]))
        elif kind == "set_battery":
            robot.set_battery(float(fault["pct"]))
        else:
            raise ValueError(f"unknown fault kind {kind!r}")

    def step_all(self, dt_ms: int) -> list[RobotStatus]:
        return [robot.step(dt_ms) for robot in self._robots.values()]

    def snapshots(self) -> list[RobotStatus]:
        return [robot.snapshot() for robot in self._robots.values()]


class ScenarioRunner:
    """Drives a fleet through a script at a fixed snapshot cadence.

    Per cadence time t: scripted events with at_ms <= t are applied first,
    then every robot's snapshot at t is emitted, so an event's effect is
    visible in the snapshot of the same instant.
    """

    def __init__(self, fleet: Fleet, script: list[ScenarioEvent], cadence_ms: int = DEFAULT_CADENCE_MS) -> None:
        if cadence_ms <= 0:
            raise ValueError("cadence_ms must be positive")
        for earlier, later in zip(script, script[1:]):
            if later.at_ms < earlier.at_ms:
                raise ValueError("scenario script must be sorted by at_ms")
        self.fleet = fleet
        self.cadence_ms = cadence_ms
        self._script = list(script)
        self._next_event = 0
        self._now = 0
        self._started = False

    def run(self, duration_ms: int):
        """Yield (t, [RobotStatus...]) for t = 0, cadence, ..., duration_ms."""
        while True:
            t = self._advance()
            if t > duration_ms:
                return
            yield t, self.fleet.snapshots()

    def _advance(self) -> int:
        if self._started:
            self._now += self.cadence_ms
            self.fleet.step_all(self.cadence_ms)
        self._started = True
        while self._next_event < len(self._script) and self._script[self._next_event].at_ms <= self._now:
            event = self._script[self._next_event]
            self._next_event += 1
            if event.fault is not None:
                self.fleet.inject_fault(event.robot_id, event.fault)
            elif event.command is not None:
                result = self.fleet.apply_command(event.robot_id, event.command, self._now)
                if not result.accepted:
                    log.warning("scenario t=%d %s: %s", self._now, event.robot_id, result.message)
        return self._now


def run_scenario(
    robots: list[str] | list[tuple[str, RobotConfig]],
    script: list[ScenarioEvent],
    duration_ms: int,
    cadence_ms: int = DEFAULT_CADENCE_MS,
) -> list[RobotStatus]:
    """Deterministic status trace: identical inputs give an identical trace."""
    fleet = Fleet()
    for entry in robots:
        if isinstance(entry, tuple):
            fleet.add_robot(entry[0], entry[1])
        else:
            fleet.add_robot(entry)
    trace: list[RobotStatus] = []
    for _, statuses in ScenarioRunner(fleet, script, cadence_ms).run(duration_ms):
        trace.extend(statuses)
    return trace


def parse_script(data: object) -> list[ScenarioEvent]:
    """Parse the scenario file form: a JSON array of {at_ms, robot, action}
    records where action is {"fault": {...}} or {"command": {action, params}}."""
    if not isinstance(data, list):
        raise ValueError("scenario script must be a JSON array")
    events: list[ScenarioEvent] = []
    for i, record in enumerate(data):
        if not isinstance(record, dict):
            raise ValueError(f"script record {i} must be an object")
        try:
            at_ms = int(record["at_ms"])
            robot_id = str(record["robot"])
            action = record["action"]
        except KeyError as missing:
            raise ValueError(f"script record {i} missing {missing}") from None
        if not isinstance(action, dict):
            raise ValueError(f"script record {i}: action must be an object")
        if "fault" in action:
            fault = action["fault"]
            if not isinstance(fault, dict) or fault.get("kind") not in FAULT_KINDS:
                raise ValueError(f"script record {i}: bad fault {fault!r}")
            events.append(ScenarioEvent(at_ms, robot_id, fault=fault))
        elif "command" in action:
            events.append(ScenarioEvent(at_ms, robot_id, command=intent_from_dict(action["command"])))
        else:
            raise ValueError(f"script record {i}: action needs 'fault' or 'command'")
    return events


def load_script(path: str) -> list[ScenarioEvent]:
    with open(path, encoding="utf-8") as fh:
        return parse_script(json.load(fh))


def script_robots(script: list[ScenarioEvent]) -> list[str]:
    """Robot ids named by the script, in first-mention order."""
    seen: dict[str, None] = {}
    for event in script:
        seen.setdefault(event.robot_id, None)
    return list(seen)
