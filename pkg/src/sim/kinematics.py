"""
Waypoint-pursuit motion in a local tangent plane (metres).
"""

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

Point = Tuple[float, float, float]


@dataclass(frozen=True)
class AirframeLimits:
    """
    Airframe envelope. Defaults are the X8 flying wing.

    Wind tolerances are recorded but not simulated.
    """

    min_speed: float = 15.0
    cruise_speed: float = 18.0
    max_speed: float = 23.0
    max_altitude: float = 350.0
    endurance_ms: int = 50 * 60 * 1000
    turn_radius: float = 31.0
    max_wind_ms: float = 14.0

    def to_dict(self) -> dict:
        return {
            'min_speed': self.min_speed,
            'cruise_speed': self.cruise_speed,
            'max_speed': self.max_speed,
            'max_altitude': self.max_altitude,
            'endurance_ms': self.endurance_ms,
            'turn_radius': self.turn_radius,
            'max_wind_ms': self.max_wind_ms,
        }


X8 = AirframeLimits()


@dataclass(frozen=True)
class VehicleState:
    """
    Attributes:
        position: (x, y, altitude) in metres
        speed: Commanded ground speed, m/s
        waypoints: Current plan
        leg: Index of the waypoint being pursued
        airborne: In flight
        executing: Plan running
        plan_complete: Final waypoint reached (loitering)
        battery_j: Remaining energy, if tracked
        airborne_since: Takeoff time
    """

    position: Point
    speed: float
    waypoints: Tuple[Point, ...] = ()
    leg: int = 0
    airborne: bool = False
    executing: bool = False
    plan_complete: bool = False
    battery_j: Optional[float] = None
    airborne_since: Optional[int] = None

    def with_plan(self, waypoints: Sequence[Sequence[float]]) -> 'VehicleState':
        plan = tuple(tuple(float(c) for c in wp) for wp in waypoints)
        return replace(self, waypoints=plan, leg=0, executing=False, plan_complete=False)

    def to_dict(self) -> dict:
        return {
            'position': [round(c, 3) for c in self.position],
            'speed': self.speed,
            'leg': self.leg,
            'airborne': self.airborne,
            'executing': self.executing,
            'plan_complete': self.plan_complete,
        }


def step_vehicle(v: VehicleState, dt_ms: int, capture_radius_m: float = 31.0) -> VehicleState:
    """
    Advance along the plan for dt_ms at the commanded speed.

    Switches to the next leg once within the capture radius of an
    intermediate waypoint, and holds at the final one.

    Raises:
        ValueError: If dt_ms <= 0
    """
    if dt_ms <= 0:
        raise ValueError(f"dt must be > 0, got {dt_ms}")
    if not v.airborne or not v.executing or v.plan_complete or not v.waypoints:
        return v

    remaining = v.speed * dt_ms / 1000.0
    pos = np.asarray(v.position, dtype=float)
    leg = v.leg
    complete = False
    last = len(v.waypoints) - 1

    while True:
        target = np.asarray(v.waypoints[leg], dtype=float)
        delta = target - pos
        dist = float(np.linalg.norm(delta))
        if leg < last and dist <= capture_radius_m:
            leg += 1
            continue
        if dist <= remaining:
            pos = target
            remaining -= dist
            if leg == last:
                complete = True
                break
            leg += 1
            continue
        pos = pos + delta * (remaining / dist)
        break

    return replace(
        v,
        position=(float(pos[0]), float(pos[1]), float(pos[2])),
        leg=leg,
        plan_complete=complete,
    )


def flight_time(v: VehicleState, now: int) -> int:
    if not v.airborne or v.airborne_since is None:
        return 0
    return now - v.airborne_since
