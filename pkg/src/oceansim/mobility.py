"""Random-waypoint mobility over a rectangular arena.

Node motion is evaluated lazily: nothing is scheduled on the event
queue, a node's trajectory is advanced only when somebody asks where
the node is.  Queries must come with non-decreasing timestamps, which
holds trivially inside the simulator because the clock never runs
backwards.
"""

from dataclasses import dataclass

# Travel-time floor for the measure-zero case of a waypoint landing on
# the node's current position; keeps phase advancement from stalling.
_MIN_TRAVEL = 1e-9


@dataclass(frozen=True)
class Arena:
    width: float
    height: float

    def contains(self, x, y):
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


def sample_speed(rng, v_min, v_max):
    """Uniform speed on the half-open interval (v_min, v_max].

    Drawn as v_max - u * (v_max - v_min) with u in [0, 1), so the top
    speed is reachable and a zero speed (which would never arrive) is
    not, even when v_min is 0.
    """
    return v_max - rng.random() * (v_max - v_min)


class NodeMotion:
    """Waypoint state machine for one node.

    Starts paused at a uniformly placed point; the first departure is
    drawn uniform over [0, pause_time] so node schedules do not line up
    at t = 0.  After each leg the node pauses pause_time seconds, picks
    a fresh waypoint and speed, and walks there in a straight line.
    """

    __slots__ = (
        "arena", "pause_time", "v_min", "v_max", "_rng",
        "_moving", "_phase_end", "_x", "_y", "_t0", "_vx", "_vy",
        "_dest_x", "_dest_y",
    )

    def __init__(self, arena, pause_time, max_speed, placement_rng, motion_rng,
                 min_speed=0.1):
        self.arena = arena
        self.pause_time = pause_time
        self.v_min = min_speed
        self.v_max = max_speed
        self._rng = motion_rng
        self._x = placement_rng.uniform(0.0, arena.width)
        self._y = placement_rng.uniform(0.0, arena.height)
        self._moving = False
        # Drawn unconditionally so the placement stream yields identical
        # layouts for one seed no matter the pause setting.
        self._phase_end = placement_rng.uniform(0.0, pause_time)
        self._t0 = 0.0
        self._vx = self._vy = 0.0
        self._dest_x = self._dest_y = 0.0

    def position_at(self, t):
        """(x, y) at time t, advancing through any phases t has passed."""
        phase_end = self._phase_end
        if t < phase_end:
            if self._moving:
                dt = t - self._t0
                return (self._x + self._vx * dt, self._y + self._vy * dt)
            return (self._x, self._y)
        while t >= self._phase_end:
            self._advance()
        if self._moving:
            dt = t - self._t0
            return (self._x + self._vx * dt, self._y + self._vy * dt)
        return (self._x, self._y)

    def _advance(self):
        if self._moving:
            # Arrived: anchor at the waypoint and sit out the pause.
            self._x = self._dest_x
            self._y = self._dest_y
            self._moving = False
            self._phase_end = self._phase_end + self.pause_time
        else:
            rng = self._rng
            dx = rng.uniform(0.0, self.arena.width)
            dy = rng.uniform(0.0, self.arena.height)
            speed = sample_speed(rng, self.v_min, self.v_max)
            depart = self._phase_end
            travel = max(((dx - self._x) ** 2 + (dy - self._y) ** 2) ** 0.5 / speed,
                         _MIN_TRAVEL)
            self._dest_x = dx
            self._dest_y = dy
            self._t0 = depart
            self._vx = (dx - self._x) / travel
            self._vy = (dy - self._y) / travel
            self._moving = True
            self._phase_end = depart + travel
