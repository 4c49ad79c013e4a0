"""Small-perturbation radius criterion for the canonical oscillator plane.

For the canonical system (dx = y, dy = -x - mu*h(x, dx)) with h = p(x)*dx and
p polynomial, limit cycles shrink onto circles of radius r solving

    Phi(r) = integral over one turn of h(r sin u, r cos u) cos u du = 0.

Phi is evaluated by composite Gauss-Legendre panels with automatic doubling
(the integrand is a trigonometric polynomial, so convergence is immediate),
roots come from a sign-change scan plus bisection, and the plane maps relate
the canonical circles to Lienard-plane cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

_GL_CACHE = {}


def _panel_rule(n):
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


@dataclass(frozen=True)
class PhiProblem:
    """Perturbation h(x, dx) = p(x) * dx with p a polynomial (ascending coeffs)."""

    p_coeffs: tuple
    mu: float = 0.0
    r_range: tuple = (1e-3, 3.0)

    def __post_init__(self):
        object.__setattr__(self, "p_coeffs", tuple(float(c) for c in self.p_coeffs))
        lo, hi = self.r_range
        if not (0.0 < lo < hi):
            raise ValueError("r_range must satisfy 0 < lo < hi")

    def p(self, x):
        return float(np.polynomial.polynomial.polyval(x, np.asarray(self.p_coeffs)))


@dataclass(frozen=True)
class PhiRoots:
    roots: tuple
    values: tuple        # (r, Phi(r)) samples over the scanned grid
    tangential: tuple = ()


def phi(problem, r, abs_tol=1e-12):
    """Phi(r) by composite Gauss-Legendre over [0, 2pi] with panel doubling."""
    if r <= 0:
        raise ValueError("phi needs r > 0")
    coeffs = np.asarray(problem.p_coeffs)

    def estimate(n_panels, rule_n=16):
        nodes, weights = _panel_rule(rule_n)
        width = 2.0 * math.pi / n_panels
        total = 0.0
        for i in range(n_panels):
            u = (i + nodes) * width
            integrand = (np.polynomial.polynomial.polyval(r * np.sin(u), coeffs)
                         * (r * np.cos(u)) * np.cos(u))
            total += width * float(np.dot(weights, integrand))
        return total

    prev = estimate(2)
    for n_panels in (4, 8, 16, 32, 64):
        cur = estimate(n_panels)
        if abs(cur - prev) <= abs_tol:
            return cur
        prev = cur
    raise NumericalError(f"phi quadrature did not reach {abs_tol} at r={r}")


def phi_roots(problem, grid_n=200):
    """Sign-change roots of Phi in r_range (bisection to 1e-12), plus
    tangential touches (local |Phi| minima below 1e-10 without a crossing)."""
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    lo, hi = problem.r_range
    rs = np.linspace(lo, hi, grid_n)
    vals = np.array([phi(problem, r) for r in rs])
    roots = []
    for i in range(grid_n - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            if i > 0 and vals[i - 1] * v1 < 0.0:
                roots.append(float(rs[i]))
        elif v0 * v1 < 0.0:
            a, b, va = rs[i], rs[i + 1], v0
            while b - a > 1e-12:
                mid = 0.5 * (a + b)
                vm = phi(problem, mid)
                if vm == 0.0:
                    a = b = mid
                elif (va < 0.0) == (vm < 0.0):
                    a, va = mid, vm
                else:
                    b = mid
            roots.append(float(0.5 * (a + b)))
    tangential = []
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    for i in range(1, grid_n - 1):
        v0, v1, v2 = vals[i - 1], vals[i], vals[i + 1]
        if not (v0 * v1 > 0 and v1 * v2 > 0
                and abs(v1) <= abs(v0) and abs(v1) <= abs(v2)):
            continue
        # golden-section refinement of the |Phi| dip
        a, b = float(rs[i - 1]), float(rs[i + 1])
        c = b - invphi * (b - a)
        d_ = a + invphi * (b - a)
        fc, fd = abs(phi(problem, c)), abs(phi(problem, d_))
        for _ in range(100):
            if b - a <= 1e-12:
                break
            if fc < fd:
                b, d_, fd = d_, c, fc
                c = b - invphi * (b - a)
                fc = abs(phi(problem, c))
            else:
                a, c, fc = c, d_, fd
                d_ = a + invphi * (b - a)
                fd = abs(phi(problem, d_))
        re = 0.5 * (a + b)
        if abs(phi(problem, re)) <= 1e-10:
            tangential.append(re)
    return PhiRoots(tuple(roots), tuple(zip(rs.tolist(), vals.tolist())),
                    tuple(tangential))


def quintic_radii(k):
    """Closed-form radii for p(x) = -4 + 75 x^2 - 50 k x^4:
    r^2 = (15 +- sqrt(225 - 64k)) / (10k).  Returns (r1, r2, discriminant)
    with None for radii that are not real and positive; r1 is the inner
    cycle's radius (minus branch)."""
    if k == 0:
        raise DomainError("k must be nonzero")
    disc = 225.0 - 64.0 * k

    def radius(sign):
        if disc < 0.0:
            return None
        r2 = (15.0 + sign * math.sqrt(disc)) / (10.0 * k)
        return math.sqrt(r2) if r2 > 0.0 else None

    return radius(-1.0), radius(+1.0), disc


def canonical_to_lienard(x, y, F):
    """Map a canonical-plane point to the Lienard plane: (u, v) = (-x, F(-x) - y)."""
    u = -x
    return u, F.value(u) - y


def lienard_to_canonical(u, v, F):
    """Inverse map: (x, y) = (-u, -v + F(u))."""
    return -u, -v + F.value(u)
