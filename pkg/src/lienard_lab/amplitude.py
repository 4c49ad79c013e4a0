"""Upper estimate of a limit cycle's amplitude from the y-axis intercept.

For an orbit meeting the positive y-axis at y0, the crossing point of the
path potential balance solves

    G(a) + F(a)^2 / 2 = y0^2 / 2,        G(x) = integral of g from 0 to x.

The smallest root in a bracket (a_i, a_{i+1}) is the bound for the cycle in
that interval; with F and g odd the roots from y+(0) and |y-(0)| coincide,
and the reported bound is their maximum.  Evaluation is exact (closed-form G),
so the bound's accuracy is limited only by the supplied intercept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoRootError


@dataclass(frozen=True)
class AlphaBarResult:
    alpha_prime: float
    alpha_double_prime: float
    alpha_bar: float
    y_plus0: float
    y_minus0: float
    interval_index: int = 0

    def as_dict(self):
        return {"interval_index": self.interval_index,
                "alpha_prime": self.alpha_prime,
                "alpha_double_prime": self.alpha_double_prime,
                "alpha_bar": self.alpha_bar,
                "y_plus0": self.y_plus0}


def _residual(system, y0):
    half_y2 = 0.5 * y0 * y0

    def r(a):
        Fa = system.F.value(a)
        return system.G(a) + 0.5 * Fa * Fa - half_y2
    return r


def solve_alpha(system, y0, bracket, xtol=1e-12, scan_n=1024):
    """Smallest root of G(a) + F(a)^2/2 - y0^2/2 in the bracket.

    Raises NoRootError when the residual does not change sign there, which is
    exactly the failure of the "such a bound exists" hypothesis for that
    interval.
    """
    if y0 <= 0:
        raise ValueError("solve_alpha needs y0 > 0")
    lo, hi = bracket
    if not (0.0 <= lo < hi):
        raise ValueError("bracket must satisfy 0 <= lo < hi")
    hi = min(hi, system.d * (1 - 1e-12))
    r = _residual(system, y0)
    xs = np.linspace(lo, hi, scan_n)
    prev_x, prev_r = xs[0], r(xs[0])
    if prev_r == 0.0:
        return float(prev_x)
    for x in xs[1:]:
        rx = r(x)
        if rx == 0.0:
            return float(x)
        if prev_r * rx < 0.0:
            a, b, ra = prev_x, x, prev_r
            while b - a > xtol:
                mid = 0.5 * (a + b)
                rm = r(mid)
                if rm == 0.0:
                    return float(mid)
                if (ra < 0.0) == (rm < 0.0):
                    a, ra = mid, rm
                else:
                    b = mid
            return float(0.5 * (a + b))
        prev_x, prev_r = x, rx
    raise NoRootError(
        f"no amplitude-bound root in ({lo}, {hi}) for y0={y0}; the bound "
        f"existence hypothesis fails on this interval")


def alpha_bar(system, cycle, bracket, interval_index=0, xtol=1e-12):
    """Bound from a detected cycle: root from y+(0), root from |y-(0)|, max.

    For odd F and g the two roots agree (y-(0) = -y+(0)); both are still
    computed and reported.
    """
    a_p = solve_alpha(system, cycle.y_plus0, bracket, xtol)
    a_pp = solve_alpha(system, abs(cycle.y_minus0), bracket, xtol)
    return AlphaBarResult(
        alpha_prime=a_p,
        alpha_double_prime=a_pp,
        alpha_bar=max(a_p, a_pp),
        y_plus0=cycle.y_plus0,
        y_minus0=cycle.y_minus0,
        interval_index=interval_index,
    )
