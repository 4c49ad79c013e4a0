"""Limit-cycle detection and the potential diagnostics.

Everything here is built on the half-return map: an orbit started at (0, y0),
y0 > 0, is integrated to its first crossing of the y-axis with y < 0, and
half_return(y0) = |y| there.  By the odd symmetry of (F, g), fixed points of
the half-return map are exactly the closed orbits, so cycles are the roots of
D(y0) = half_return(y0) - y0.

The potential scan is the complementary route: for a point Q = (a, F(a)) on
the curve y = F(x), the orbit through Q is integrated backward to Y = (0, y+)
and forward to Y' = (0, y-), and V(a) = v(Y') - v(Y) with
v(x, y) = G(x) + y^2/2.  V vanishes exactly on the closed orbits, so the roots
of V are the cycle amplitudes.  Both routes are exposed so they can check each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._parallel import parallel_map
from .errors import AnalysisError, NumericalError
from .functions import find_zero_structure
from .integrate import EventSpec, PhaseState, StepControl, integrate

# |D| at a non-crossing extremum below which the dip is reported as one
# semi-stable (multiplicity-2) cycle.  Calibrated against the quintic family:
# at the fold parameter k = 225/64 the true flow leaves a residual dip of
# ~2.3e-4 (the asymptotic fold prediction is O(mu^2) off), while the nearest
# no-cycle acceptance case k = 3.57 has a dip of ~6.4e-3.
SEMI_STABLE_TOL = 5e-4


@dataclass(frozen=True)
class LimitCycle:
    y_plus0: float
    y_minus0: float
    amplitude: float
    stability: str          # stable | unstable | semi_stable
    multiplicity: int = 1

    def as_dict(self):
        return {"y_plus0": self.y_plus0, "y_minus0": self.y_minus0,
                "amplitude": self.amplitude, "stability": self.stability,
                "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class ReturnMapScan:
    y_grid: np.ndarray
    D_values: np.ndarray
    cycles: tuple


@dataclass(frozen=True)
class PotentialScan:
    alphas: np.ndarray
    V_values: np.ndarray
    sign_changes: tuple


@dataclass(frozen=True)
class PotentialDecomposition:
    """Path-ordered split of V at the vertical lines x = a_i.

    ``crossings`` are the crossing abscissae in path order (ascending on the
    upper arc, then descending on the lower arc); ``terms`` has one more entry
    than ``crossings`` and sums to the total V.  The middle term is the cap
    through Q beyond the outermost crossed zero.
    """

    crossings: tuple
    terms: tuple
    total: float

    @property
    def cap_term(self):
        return self.terms[len(self.terms) // 2]


def half_return(system, y0, ctrl=None):
    """|y| at the first y-axis crossing with y < 0 of the orbit from (0, y0)."""
    if y0 <= 0:
        raise ValueError("half_return needs y0 > 0")
    stop = EventSpec("y_axis_cross", "falling", 1)
    try:
        traj = integrate(system, PhaseState(0.0, 0.0, y0), stop, ctrl,
                         store_states=False, path_quadrature=False)
    except NumericalError as exc:
        # finite-time blow-up past the last zero of F counts as non-return
        raise AnalysisError(
            f"orbit from (0, {y0}) escaped before returning ({exc})") from exc
    if traj.status != "event_reached":
        raise AnalysisError(
            f"orbit from (0, {y0}) did not return to the y-axis "
            f"({traj.status})", trajectory=traj)
    return abs(traj.events[-1][1].y)


def _displacement(system, ctrl):
    def D(y0):
        try:
            return half_return(system, y0, ctrl) - y0
        except AnalysisError:
            return math.nan
    return D


def _default_y_max(system, D):
    """Search bound: grow from the F-extrema scale until D(y_max) has the sign
    implied by the asymptotic branch of F (inward for F -> +inf, outward for
    F -> -inf), at most 6 doublings."""
    zs = find_zero_structure(system)
    f_scale = max((abs(v) for v in zs.values_at_extrema), default=0.0)
    a_max = zs.zeros[-1] if zs.zeros else 1.0
    probe = min(system.d * 0.99, max(2.0 * a_max, a_max + 1.0))
    tail_sign = 1.0 if system.F.value(probe) >= 0.0 else -1.0
    y = 2.0 * (f_scale + math.sqrt(max(0.0, 2.0 * system.G(min(a_max + 1.0,
                                                               system.d * 0.99)))))
    y = max(y, 1e-3)
    for _ in range(6):
        dv = D(y)
        if math.isnan(dv):
            # escape to infinity is the strongest possible "outward"
            if tail_sign < 0:
                break
            y *= 0.5  # shrink back toward returning orbits
            continue
        if (tail_sign > 0 and dv < 0) or (tail_sign < 0 and dv > 0):
            break
        y *= 2.0
    return y


def _refine_root(D, lo, hi, dlo, ytol=1e-10):
    for _ in range(200):
        if hi - lo <= ytol:
            break
        mid = 0.5 * (lo + hi)
        dm = D(mid)
        if math.isnan(dm):
            break
        if dm == 0.0:
            return mid
        if (dlo < 0.0) == (dm < 0.0):
            lo, dlo = mid, dm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refine_extremum(D, lo, hi, minimize, ytol=1e-9):
    # golden-section search for the extremum of D on [lo, hi]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d_ = a + invphi * (b - a)
    fc, fd = D(c), D(d_)
    sgn = 1.0 if minimize else -1.0
    for _ in range(120):
        if b - a <= ytol:
            break
        if sgn * fc < sgn * fd:
            b, d_, fd = d_, c, fc
            c = b - invphi * (b - a)
            fc = D(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + invphi * (b - a)
            fd = D(d_)
    ye = 0.5 * (a + b)
    return ye, D(ye)


def _cycle_amplitude(system, y0, ctrl):
    """Max |x| on the (half) orbit from (0, y0), read off the curve crossings."""
    stop = EventSpec("y_axis_cross", "falling", 1)
    rec = (EventSpec("curve_F_cross", "any", 1),)
    traj = integrate(system, PhaseState(0.0, 0.0, y0), stop, ctrl, record=rec,
                     store_states=False, path_quadrature=False)
    xs = [abs(s.x) for k, s in traj.events if k == "curve_F_cross"]
    if not xs:
        raise AnalysisError(f"no curve crossing found on orbit from (0, {y0})",
                            trajectory=traj)
    return max(xs)


def scan_cycles(system, y_max=None, grid_n=400, ctrl=None,
                semi_stable_tol=SEMI_STABLE_TOL):
    """Full return-map scan: log-spaced grid, sign-change refinement, and
    near-tangent dip handling.  Returns the grid, D values, and cycles."""
    if grid_n < 200:
        raise ValueError("grid_n must be at least 200")
    ctrl = ctrl or StepControl()
    D = _displacement(system, ctrl)
    # displacement values at tolerance (rtol, atol) carry evaluation noise of
    # order 100x the local error; refinement runs at tightened tolerances so
    # roots resolve well below the 1e-10 bracket
    tight = replace(ctrl, rtol=min(ctrl.rtol, 1e-12),
                    atol=min(ctrl.atol, 1e-14))
    D_tight = _displacement(system, tight)
    if y_max is None:
        y_max = _default_y_max(system, D)
    if y_max <= 0:
        raise ValueError("y_max must be positive")
    grid = np.geomspace(y_max * 1e-3, y_max, grid_n)
    dvals = np.array(parallel_map(D, grid))

    # values below the evaluation-noise floor have no usable sign (a center
    # produces pure noise); transitions are taken between resolved signs
    floor = 50.0 * (ctrl.atol + ctrl.rtol * grid)
    signs = np.zeros(grid_n)
    resolved = ~np.isnan(dvals) & (np.abs(dvals) > floor)
    signs[resolved] = np.sign(dvals[resolved])

    roots = []       # (y, sign_before, sign_after)
    semis = []
    prev = None      # index of the last resolved grid point
    for i in range(grid_n):
        if signs[i] == 0.0:
            continue
        if prev is not None and signs[prev] * signs[i] < 0.0:
            y = _refine_root(D_tight, grid[prev], grid[i], dvals[prev])
            roots.append((y, signs[prev], signs[i]))
        prev = i
    # near-tangent dips: a local extremum of D with no sign change may hide a
    # semi-stable cycle or a pair of roots between grid points
    for i in range(1, grid_n - 1):
        d0, d1, d2 = dvals[i - 1], dvals[i], dvals[i + 1]
        if signs[i - 1] == 0 or signs[i] == 0 or signs[i + 1] == 0:
            continue
        if not (signs[i - 1] == signs[i] == signs[i + 1]):
            continue
        is_min = d1 > 0 and d1 <= d0 and d1 <= d2
        is_max = d1 < 0 and d1 >= d0 and d1 >= d2
        if not (is_min or is_max):
            continue
        if abs(d1) > 10.0 * semi_stable_tol:
            continue
        ye, de = _refine_extremum(D_tight, grid[i - 1], grid[i + 1],
                                  minimize=is_min)
        if math.isnan(de):
            continue
        if (is_min and de < 0.0) or (is_max and de > 0.0):
            # the dip actually crosses zero: two simple roots hide here
            yl = _refine_root(D_tight, grid[i - 1], ye, dvals[i - 1])
            yr = _refine_root(D_tight, ye, grid[i + 1], de)
            sign = 1.0 if is_min else -1.0
            roots.append((yl, sign, -sign))
            roots.append((yr, -sign, sign))
        elif abs(de) <= semi_stable_tol:
            semis.append(ye)

    # overlapping refinements can rediscover the same root; merge duplicates
    roots.sort(key=lambda r: r[0])
    merged = []
    for r in roots:
        if merged and abs(r[0] - merged[-1][0]) <= 1e-7 * max(1.0, r[0]):
            continue
        merged.append(r)
    semis.sort()
    semis = [y for i, y in enumerate(semis)
             if i == 0 or abs(y - semis[i - 1]) > 1e-6 * max(1.0, y)]

    cycles = []
    for y, sb, sa in merged:
        stability = "stable" if (sb > 0 and sa < 0) else "unstable"
        amp = _cycle_amplitude(system, y, ctrl)
        cycles.append(LimitCycle(y, -y, amp, stability, 1))
    for y in semis:
        amp = _cycle_amplitude(system, y, ctrl)
        cycles.append(LimitCycle(y, -y, amp, "semi_stable", 2))
    cycles.sort(key=lambda c: c.y_plus0)
    return ReturnMapScan(grid, dvals, tuple(cycles))


def find_limit_cycles(system, y_max=None, grid_n=400, ctrl=None,
                      semi_stable_tol=SEMI_STABLE_TOL):
    """All limit cycles, innermost first (see scan_cycles for the machinery)."""
    return list(scan_cycles(system, y_max, grid_n, ctrl, semi_stable_tol).cycles)


def _arcs_from_Q(system, alpha, ctrl, record=()):
    """Integrate backward (to Y) and forward (to Y') from Q = (alpha, F(alpha))."""
    q = PhaseState(0.0, alpha, system.F.value(alpha))
    stop = EventSpec("y_axis_cross", "falling", 1)
    back = integrate(system, q, stop, ctrl, record=record, backward=True,
                     store_states=False, path_quadrature=False)
    fwd = integrate(system, q, stop, ctrl, record=record, backward=False,
                    store_states=False, path_quadrature=False)
    return back, fwd


def potential_value(system, alpha, ctrl=None):
    """V(alpha) = v(Y') - v(Y) for the path Y -> Q(alpha, F(alpha)) -> Y'."""
    ctrl = ctrl or StepControl()
    back, fwd = _arcs_from_Q(system, alpha, ctrl)
    if back.status != "event_reached" or fwd.status != "event_reached":
        raise AnalysisError(f"arc through Q(alpha={alpha}) did not reach the "
                            f"y-axis", trajectory=back if
                            back.status != "event_reached" else fwd)
    y_plus = back.events[-1][1].y
    y_minus = fwd.events[-1][1].y
    return 0.5 * (y_minus * y_minus - y_plus * y_plus)


def potential_scan(system, alpha_range, grid_n=200, ctrl=None):
    """Scan V over alpha and refine its sign changes (cycle amplitudes)."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    lo, hi = alpha_range
    if not (0.0 < lo < hi <= system.d):
        raise ValueError("alpha_range must lie inside (0, d)")
    ctrl = ctrl or StepControl()

    def V(a):
        try:
            return potential_value(system, a, ctrl)
        except AnalysisError:
            return math.nan

    alphas = np.linspace(lo, hi, grid_n)
    vvals = np.array(parallel_map(V, alphas))
    # sub-noise values carry no sign information (a conservative system has
    # V identically zero); roots are transitions between resolved signs
    v_scale = np.array([1.0 + abs(system.v(a, system.F.value(a)))
                        for a in alphas])
    floor = 100.0 * (ctrl.atol + ctrl.rtol * v_scale)
    signs = np.zeros(grid_n)
    resolved = ~np.isnan(vvals) & (np.abs(vvals) > floor)
    signs[resolved] = np.sign(vvals[resolved])
    roots = []
    prev = None
    for i in range(grid_n):
        if signs[i] == 0.0:
            continue
        if prev is not None and signs[prev] * signs[i] < 0.0:
            roots.append(_refine_root(V, alphas[prev], alphas[i], vvals[prev]))
        prev = i
    return PotentialScan(alphas, vvals, tuple(sorted(roots)))


def potential_decomposition(system, alpha, ctrl=None):
    """Split V(alpha) at the crossings of the vertical lines x = a_i.

    Terms are v-differences between consecutive crossing states along the
    path, which equal the arc integrals of F dy on solutions; they therefore
    sum to the total V exactly up to event-location error.
    """
    ctrl = ctrl or StepControl()
    zs = find_zero_structure(system)
    rec = tuple(EventSpec("vertical_line_cross", "any", 1, value=a)
                for a in zs.zeros if a < alpha)
    back, fwd = _arcs_from_Q(system, alpha, ctrl, record=rec)
    if back.status != "event_reached" or fwd.status != "event_reached":
        raise AnalysisError(f"arc through Q(alpha={alpha}) did not reach the "
                            f"y-axis", trajectory=back if
                            back.status != "event_reached" else fwd)

    def v(s):
        return system.v(s.x, s.y)

    y_state = back.events[-1][1]
    yp_state = fwd.events[-1][1]
    up = [s for k, s in back.events if k == "vertical_line_cross"]
    up.reverse()  # backward arc records Q -> Y; path order is Y -> Q
    down = [s for k, s in fwd.events if k == "vertical_line_cross"]
    points = [y_state] + up + down + [yp_state]
    terms = tuple(v(b) - v(a) for a, b in zip(points, points[1:]))
    crossings = tuple(s.x for s in up + down)
    total = v(yp_state) - v(y_state)
    return PotentialDecomposition(crossings, terms, total)
