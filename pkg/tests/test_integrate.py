import math

import numpy as np
import pytest
from numba import njit

from lienard_lab import (EventSpec, FunctionModel, LienardSystem, PhaseState,
                         Segment, StepControl, builtin, integrate,
                         path_potential_delta, vector_field)
from lienard_lab.integrate import slope


def _center_system():
    # F identically zero, g(x) = x: the harmonic-oscillator center
    return builtin("vdp", {"mu": 0.0})


# --- vector field -----------------------------------------------------------

def test_vector_field_vdp_on_axis(vdp1):
    dx, dy = vector_field(vdp1, PhaseState(0.0, 0.0, 2.0))
    assert (dx, dy) == (2.0, 0.0)


def test_vector_field_quintic(quintic35):
    dx, dy = vector_field(quintic35, PhaseState(0.0, 1.0, 0.0))
    assert dx == pytest.approx(1.4, abs=1e-14)
    assert dy == pytest.approx(-1.0, abs=1e-14)


def test_vector_field_vertical_on_curve(vdp1):
    x = 0.7
    st = PhaseState(0.0, x, vdp1.F.value(x))
    dx, dy = vector_field(vdp1, st)
    assert dx == 0.0
    assert dy < 0.0
    with pytest.raises(ZeroDivisionError):
        slope(vdp1, st)


# --- integrate + events -----------------------------------------------------

def test_full_period_returns_to_start(vdp1):
    y0 = 2.1727135
    traj = integrate(vdp1, PhaseState(0.0, 0.0, y0),
                     EventSpec("y_axis_cross", "any", 2))
    assert traj.status == "event_reached"
    kind, s = traj.events[-1]
    assert kind == "y_axis_cross"
    assert s.y == pytest.approx(y0, abs=1e-3)
    # two crossings: bottom (falling) then top (rising)
    assert traj.events[0][1].y < 0 < traj.events[-1][1].y


def test_harmonic_quarter_circle():
    traj = integrate(_center_system(), PhaseState(0.0, 0.0, 1.0),
                     EventSpec("x_axis_cross", "falling", 1))
    assert traj.status == "event_reached"
    _, s = traj.events[-1]
    assert s.x == pytest.approx(1.0, abs=1e-9)
    assert abs(s.y) <= 1e-9
    assert s.t == pytest.approx(math.pi / 2, abs=1e-9)


# Independent oracle for the event location: classical fixed-step RK4 at
# h = 1e-5 with linear interpolation at the crossing.  Frozen value below was
# produced by rk4_first_return(3.65, 0.6, 1e-5); halving h moves it by 3e-12.
RK4_ORACLE_K365_Y06 = -0.6180983818546967


@njit
def rk4_first_return(k, y0, h):
    x, y, t = 0.0, y0, 0.0
    started = False
    for _ in range(100_000_000):
        def f(xx, yy):
            return yy - (-0.4 * xx + 2.5 * xx ** 3 - k * xx ** 5), -xx
        k1x, k1y = f(x, y)
        k2x, k2y = f(x + 0.5 * h * k1x, y + 0.5 * h * k1y)
        k3x, k3y = f(x + 0.5 * h * k2x, y + 0.5 * h * k2y)
        k4x, k4y = f(x + h * k3x, y + h * k3y)
        xn = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        yn = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        if x > 1e-6:
            started = True
        if started and x > 0.0 and xn <= 0.0:
            th = x / (x - xn)
            return y + th * (yn - y)
        x, y, t = xn, yn, t + h
    return np.nan


def test_event_against_fixed_step_oracle():
    oracle = rk4_first_return(3.65, 0.6, 1e-5)
    assert oracle == pytest.approx(RK4_ORACLE_K365_Y06, abs=1e-9)
    s365 = builtin("quintic", {"k": 3.65})
    traj = integrate(s365, PhaseState(0.0, 0.0, 0.6),
                     EventSpec("y_axis_cross", "falling", 1))
    _, ev = traj.events[-1]
    assert ev.y == pytest.approx(oracle, abs=1e-6)
    # phase paths spiral outward here (repelling origin, no cycles)
    assert ev.y < 0.0 and abs(ev.y) > 0.6


def test_event_residuals(vdp1):
    traj = integrate(vdp1, PhaseState(0.0, 0.0, 2.5),
                     EventSpec("y_axis_cross", "any", 4),
                     record=(EventSpec("x_axis_cross"),
                             EventSpec("curve_F_cross")))
    assert traj.status == "event_reached"
    assert len(traj.events) >= 8
    for kind, s in traj.events:
        if kind == "y_axis_cross":
            assert abs(s.x) <= 1e-12
        elif kind == "x_axis_cross":
            assert abs(s.y) <= 1e-12
        else:
            assert abs(s.y - vdp1.F.value(s.x)) <= 1e-12


def test_trajectory_time_monotone_and_csv(tmp_path, vdp1):
    traj = integrate(vdp1, PhaseState(0.0, 0.0, 2.0),
                     EventSpec("y_axis_cross", "falling", 1))
    t = traj.states[:, 0]
    assert np.all(np.diff(t) > 0)
    csv = tmp_path / "traj.csv"
    ev = tmp_path / "events.csv"
    traj.to_csv(csv, ev)
    data = np.loadtxt(csv, delimiter=",", skiprows=1)
    assert data.shape == traj.states.shape
    assert np.allclose(data, traj.states)
    lines = ev.read_text().strip().splitlines()
    assert lines[0] == "kind,t,x,y"
    assert len(lines) == 1 + len(traj.events)


def test_symmetry_of_mirrored_orbits(vdp1):
    for y0 in (1.3, 2.0, 2.8):
        a = integrate(vdp1, PhaseState(0.0, 0.0, y0),
                      EventSpec("y_axis_cross", "falling", 1))
        b = integrate(vdp1, PhaseState(0.0, 0.0, -y0),
                      EventSpec("y_axis_cross", "rising", 1))
        sa, sb = a.events[-1][1], b.events[-1][1]
        assert sb.x == pytest.approx(-sa.x, abs=1e-8)
        assert sb.y == pytest.approx(-sa.y, abs=1e-8)
        assert sb.t == pytest.approx(sa.t, abs=1e-8)


def test_tolerance_convergence(vdp1):
    stop = EventSpec("y_axis_cross", "falling", 1)
    t1 = integrate(vdp1, PhaseState(0.0, 0.0, 2.3), stop,
                   StepControl(rtol=1e-10, atol=1e-12))
    t2 = integrate(vdp1, PhaseState(0.0, 0.0, 2.3), stop,
                   StepControl(rtol=5e-11, atol=5e-13))
    e1, e2 = t1.events[-1][1], t2.events[-1][1]
    assert abs(e1.y - e2.y) < 1e-8
    assert abs(e1.t - e2.t) < 1e-8


def test_max_time_is_first_class():
    center = _center_system()
    traj = integrate(center, PhaseState(0.0, 0.0, 1.0),
                     EventSpec("y_axis_cross", "falling", 500),
                     StepControl(max_time=10.0))
    assert traj.status == "max_time"
    assert traj.states[-1, 0] == pytest.approx(10.0, abs=1e-9)


def test_domain_exit_status():
    # truncated cubic with no tail: validity ends at x = 3
    mu = 1.0
    F = FunctionModel((Segment.polynomial(0.0, 3.0, (0.0, -mu, 0.0, mu / 3)),))
    g = FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0)),))
    sys_d3 = LienardSystem(F, g)
    assert sys_d3.d == 3.0
    traj = integrate(sys_d3, PhaseState(0.0, 0.0, 12.0),
                     EventSpec("y_axis_cross", "falling", 1))
    assert traj.status == "domain_exit"
    assert abs(traj.states[-1, 1]) <= 3.0


def test_vertical_line_events(quintic3):
    spec = EventSpec("vertical_line_cross", "any", 1, value=0.3)
    traj = integrate(quintic3, PhaseState(0.0, 0.0, 0.56),
                     EventSpec("y_axis_cross", "falling", 1), record=(spec,))
    xs = [s.x for k, s in traj.events if k == "vertical_line_cross"]
    assert len(xs) == 2  # once on the way out, once coming back
    assert all(abs(x - 0.3) <= 1e-12 for x in xs)


# --- path potentials --------------------------------------------------------

def test_potential_zero_for_conservative_center():
    center = _center_system()
    traj = integrate(center, PhaseState(0.0, 0.0, 1.0),
                     EventSpec("y_axis_cross", "falling", 1))
    dv, ifdy, igf = path_potential_delta(center, traj)
    assert abs(dv) <= 1e-10
    assert abs(ifdy) <= 1e-10
    assert abs(igf) <= 1e-10


def test_potential_zero_around_closed_orbit(vdp1):
    from lienard_lab import find_limit_cycles
    y_star = find_limit_cycles(vdp1)[0].y_plus0
    traj = integrate(vdp1, PhaseState(0.0, 0.0, y_star),
                     EventSpec("y_axis_cross", "any", 2))
    dv, _, _ = path_potential_delta(vdp1, traj)
    assert abs(dv) <= 1e-8


def test_potential_half_path_near_zero(vdp1):
    traj = integrate(vdp1, PhaseState(0.0, 0.0, 2.1727135),
                     EventSpec("y_axis_cross", "falling", 1))
    dv, _, _ = path_potential_delta(vdp1, traj)
    assert abs(dv) <= 1e-6


def test_energy_identity_across_segment_joints():
    # gentle wide orbits repeatedly crossing the piecewise joints at
    # |x| = 2.4 and 3; without joint-locking the step error estimate is
    # unreliable on straddling steps and this identity degrades to ~1.5e-8
    s = builtin("vdp_bounded", {"mu": 0.3})
    for y0 in (3.3229, 4.167, 5.3989):
        traj = integrate(s, PhaseState(0.0, 0.0, y0),
                         EventSpec("y_axis_cross", "falling", 1))
        dv, ifdy, igf = path_potential_delta(s, traj)
        tol = 1e-8 * (1.0 + abs(dv))
        assert abs(dv - ifdy) <= tol
        assert abs(dv - igf) <= tol


def test_energy_identity_random_paths():
    rng = np.random.default_rng(3)
    systems = [builtin("vdp", {"mu": 0.7}), builtin("quintic", {"k": 3.0}),
               builtin("two_cycle"), builtin("three_cycle")]
    scales = [3.0, 0.7, 0.4, 0.6]
    for s, sc in zip(systems, scales):
        for _ in range(5):
            y0 = rng.uniform(0.05 * sc, sc)
            traj = integrate(s, PhaseState(0.0, 0.0, y0),
                             EventSpec("y_axis_cross", "falling", 1))
            if traj.status != "event_reached":
                continue
            dv, ifdy, igf = path_potential_delta(s, traj)
            tol = 1e-8 * (1.0 + abs(dv))
            assert abs(dv - ifdy) <= tol
            assert abs(dv - igf) <= tol


def test_path_quadrature_required_for_potential(vdp1):
    traj = integrate(vdp1, PhaseState(0.0, 0.0, 2.0),
                     EventSpec("y_axis_cross", "falling", 1),
                     path_quadrature=False)
    with pytest.raises(ValueError):
        path_potential_delta(vdp1, traj)


def test_half_return_cross_checked_against_scipy():
    # independent implementation route: scipy's own stepper + event machinery
    from scipy.integrate import solve_ivp
    from lienard_lab import half_return

    cases = [("vdp", {"mu": 1.0}, 2.0), ("quintic", {"k": 3.0}, 0.56),
             ("two_cycle", None, 0.2), ("three_cycle", None, 0.3)]
    for name, params, y0 in cases:
        s = builtin(name, params)

        def rhs(t, state):
            x, y = state
            return [y - s.F.value(x), -s.g.value(x)]

        def hit_axis(t, state):
            return state[0]

        hit_axis.terminal = True
        hit_axis.direction = -1
        sol = solve_ivp(rhs, (0.0, 1e4), [0.0, y0], rtol=1e-11, atol=1e-13,
                        method="DOP853", events=hit_axis)
        reference = abs(sol.y_events[0][0][1])
        assert half_return(s, y0) == pytest.approx(reference, abs=1e-8), name
