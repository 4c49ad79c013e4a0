"""Adaptive integration of the Lienard field with event location.

The right-hand side is (dx/dt, dy/dt) = (y - F(x), -g(x)).  Steps come from an
embedded Dormand-Prince 5(4) pair with PI step control; events (axis, curve,
and vertical-line crossings) are located on the quartic dense output by
bisection to a time bracket of 1e-13.  Trajectories never silently fail: the
status field reports why integration stopped, and max_time is a first-class
outcome (slow spirals near semi-stable cycles run into it by design).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _dp54
from .errors import DomainError, NumericalError

EVENT_KINDS = {
    "x_axis_cross": _dp54.EV_X_AXIS,
    "y_axis_cross": _dp54.EV_Y_AXIS,
    "curve_F_cross": _dp54.EV_CURVE_F,
    "vertical_line_cross": _dp54.EV_VLINE,
}
_DIRECTIONS = {"rising": 1, "falling": -1, "any": 0}
_STATUS_NAMES = {
    _dp54.STATUS_EVENT: "event_reached",
    _dp54.STATUS_MAX_TIME: "max_time",
    _dp54.STATUS_MAX_STEPS: "max_steps",
    _dp54.STATUS_DOMAIN_EXIT: "domain_exit",
}

# 8-point Gauss-Legendre on [0, 1] for per-step path quadrature
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_NODES = np.ascontiguousarray(0.5 * (_GL_X + 1.0))
_GL_WEIGHTS = np.ascontiguousarray(0.5 * _GL_W)


@dataclass(frozen=True)
class PhaseState:
    t: float
    x: float
    y: float


@dataclass(frozen=True)
class EventSpec:
    """Crossing specification; ``count`` stops integration at that occurrence.

    ``value`` is only used by vertical_line_cross (the line x = value).
    """

    kind: str
    direction: str = "any"
    count: int = 1
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass(frozen=True)
class StepControl:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 10_000_000
    max_time: float = 1e4
    first_step: float = 1e-6
    max_step: float = math.inf

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class Trajectory:
    """Accepted states (n x 3 array of t, x, y), located events, and status."""

    states: np.ndarray
    events: list            # (kind, PhaseState) pairs in time order
    status: str
    n_accepted: int
    integral_F_dy: float | None = None
    integral_Fg_dt: float | None = None

    @property
    def start(self):
        t, x, y = self.states[0]
        return PhaseState(t, x, y)

    @property
    def end(self):
        t, x, y = self.states[-1]
        return PhaseState(t, x, y)

    def events_of(self, kind):
        return [s for k, s in self.events if k == kind]

    def to_csv(self, path, events_path=None):
        """Write t,x,y rows; optionally the events sidecar (kind,t,x,y)."""
        header = "t,x,y"
        np.savetxt(path, self.states, delimiter=",", header=header,
                   comments="", fmt="%.17g")
        if events_path is not None:
            with open(events_path, "w", encoding="utf-8") as fh:
                fh.write("kind,t,x,y\n")
                for kind, s in self.events:
                    fh.write(f"{kind},{s.t:.17g},{s.x:.17g},{s.y:.17g}\n")


def vector_field(system, state):
    """(dx/dt, dy/dt) at a phase state; raises DomainError outside (-d, d)."""
    if not abs(state.x) < system.d:
        raise DomainError(f"x={state.x} outside (-{system.d}, {system.d})")
    return (state.y - system.F.value(state.x), -system.g.value(state.x))


def slope(system, state):
    """dy/dx along the path where the path is not vertical."""
    dx, dy = vector_field(system, state)
    if dx == 0.0:
        raise ZeroDivisionError("path is vertical here (y = F(x))")
    return dy / dx


def integrate(system, start, stop, ctrl=None, record=(), *,
              backward=False, store_states=True, path_quadrature=True):
    """Integrate from ``start`` until ``stop`` (an EventSpec) fires.

    ``record`` lists additional EventSpecs located and stored without
    terminating the run.  ``backward`` integrates the time-reversed field;
    the trajectory is still parameterized by the integration variable.
    Returns a Trajectory whose status is 'event_reached' when ``stop`` fired.
    """
    ctrl = ctrl or StepControl()
    specs = list(record)
    stop_index = len(specs)
    specs.append(stop)

    ev_kind = np.array([EVENT_KINDS[s.kind] for s in specs], dtype=np.int64)
    ev_dir = np.array([_DIRECTIONS[s.direction] for s in specs], dtype=np.int64)
    ev_val = np.array([s.value for s in specs], dtype=np.float64)
    ev_stop = np.zeros(len(specs), dtype=np.int64)
    ev_stop[stop_index] = stop.count

    fb, ff, fp, _ = system.F._packed
    gb, gf, gp, _ = system.g._packed
    kinks = np.unique(np.concatenate([fb[1:-1], gb[1:-1]]))

    out = _dp54.integrate_kernel(
        fb, ff, fp, gb, gf, gp, float(system.d), kinks,
        float(start.x), float(start.y), -1.0 if backward else 1.0,
        ev_kind, ev_dir, ev_val, ev_stop,
        ctrl.rtol, ctrl.atol, int(ctrl.max_steps), float(ctrl.max_time),
        float(ctrl.first_step), float(ctrl.max_step),
        store_states, path_quadrature, _GL_NODES, _GL_WEIGHTS)

    (status, ts, xs, ys, _n, ev_idx, ev_t, ev_x, ev_y, n_events,
     i_fdy, i_fg_ds, n_accepted) = out

    if status == _dp54.STATUS_STEP_UNDERFLOW:
        raise NumericalError(
            f"step size underflow at t={ts[-1] if len(ts) else 0.0}")

    t_off = float(start.t)
    states = np.column_stack([ts + t_off, xs, ys])
    events = [(specs[ev_idx[i]].kind, PhaseState(ev_t[i] + t_off, ev_x[i], ev_y[i]))
              for i in range(n_events)]
    traj = Trajectory(states=states, events=events,
                      status=_STATUS_NAMES[status], n_accepted=int(n_accepted))
    if path_quadrature:
        # the kernel accumulates over its own (monotone) time variable
        sgn = -1.0 if backward else 1.0
        traj.integral_F_dy = float(i_fdy)
        traj.integral_Fg_dt = float(sgn * i_fg_ds)
    return traj


def path_potential_delta(system, traj):
    """(delta_v, integral_F_dy, integral_gF_dt) along a stored trajectory.

    delta_v comes from the endpoint states of v(x, y) = G(x) + y^2/2; the two
    integrals are the per-step Gauss quadratures accumulated during
    integration.  All three agree to integration accuracy because
    dv/dt = -g(x) F(x) = F dy/dt on solutions.
    """
    if traj.states.shape[0] < 2:
        raise ValueError("trajectory needs at least two states")
    if traj.integral_F_dy is None:
        raise ValueError("trajectory was integrated without path quadrature")
    s0, s1 = traj.start, traj.end
    delta_v = system.v(s1.x, s1.y) - system.v(s0.x, s0.y)
    return delta_v, traj.integral_F_dy, -traj.integral_Fg_dt
