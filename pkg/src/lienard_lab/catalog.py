"""Builtin system catalog.

Five ready-made systems, each with g(x) = x:

* ``vdp(mu)``          F(x) = mu*(x^3/3 - x)
* ``vdp_bounded(mu)``  same cubic on (-2.4, 2.4), matched C1 to a cosine
                       bridge on [2.4, 3) and a constant tail beyond 3
* ``quintic(k)``       F(x) = -0.4x + 2.5x^3 - k*x^5
* ``two_cycle``        sine lobe / ellipse arc / square-root branch,
                       first zero at x = 0.1; exactly two limit cycles
* ``three_cycle``      three ellipse arcs and a sideways parabola matched C1;
                       exactly three limit cycles
"""

from __future__ import annotations

import math

from .errors import ConfigError, UnknownModelError
from .functions import FunctionModel, LienardSystem, Segment

_INF = math.inf


def _g_identity():
    return FunctionModel((Segment.polynomial(0.0, _INF, (0.0, 1.0)),), name="g")


def _vdp(mu):
    F = FunctionModel((Segment.polynomial(0.0, _INF, (0.0, -mu, 0.0, mu / 3.0)),),
                      name="F")
    return LienardSystem(F, _g_identity(), name=f"vdp(mu={mu:g})")


def _vdp_bounded(mu):
    # cubic value at the matching point x = 2.4
    c1 = mu * (2.4 ** 3 / 3.0 - 2.4)
    c2 = 4.76 * mu / math.sin(0.6)
    # c1 - c2*(cos(0.6) - cos(x - 3)) == [c1 - c2*cos(0.6)] + c2*sin(x - 3 + pi/2)
    segs = (
        Segment.polynomial(0.0, 2.4, (0.0, -mu, 0.0, mu / 3.0)),
        Segment.sinusoid(2.4, 3.0, amplitude=c2, angular_frequency=1.0,
                         phase=math.pi / 2 - 3.0,
                         offset=c1 - c2 * math.cos(0.6)),
        Segment.constant(3.0, _INF, c1 - c2 * (math.cos(0.6) - 1.0)),
    )
    return LienardSystem(FunctionModel(segs, name="F"), _g_identity(),
                         name=f"vdp_bounded(mu={mu:g})")


def _quintic(k):
    F = FunctionModel(
        (Segment.polynomial(0.0, _INF, (0.0, -0.4, 0.0, 2.5, 0.0, -k)),),
        name="F")
    return LienardSystem(F, _g_identity(), name=f"quintic(k={k:g})")


def _two_cycle():
    # Joint abscissa of the ellipse arc and the square-root branch.  The
    # printed sine amplitude 0.1 and arc semi-axis 0.01 do not match at the
    # joints; amplitude 0.01 with semi_x = 0.1 reproduces the reference zero
    # a2 = 0.25052350868645645 and joins C1 to machine precision.
    xstar = 0.15 + 1.0 / math.sqrt(101.0)
    segs = (
        Segment.sinusoid(0.0, 0.15, amplitude=-0.01,
                         angular_frequency=10.0 * math.pi),
        Segment.ellipse_arc(0.15, xstar, offset=0.0, semi_y=0.01,
                            center_x=0.15, semi_x=0.1, sign=1),
        Segment.sqrt_branch(xstar, _INF, offset=0.02099503719021,
                            scale=-0.2, shift=0.2395037190209989),
    )
    return LienardSystem(FunctionModel(segs, name="F"), _g_identity(),
                         name="two_cycle")


def _three_cycle():
    # Three ellipse arcs and a sideways parabola, joined C1 at the zeros.
    # The reference constants are rounded snapshots of an exact matching
    # construction anchored at the first arc's center; rebuilding that
    # construction in closed form reproduces every printed value to its
    # printed precision (the parabola offset to 15 digits) while keeping the
    # joints C1 at machine accuracy.
    c1 = 0.048989794
    sy1, sx1 = 0.025, 0.05
    sy2, sx2 = 0.01, 0.05
    sy3, sx3 = 0.015, 0.1
    s4 = 0.04

    a1 = 2.0 * c1
    u1 = c1 / sx1
    off1 = sy1 * math.sqrt(1.0 - u1 * u1)
    slope = sy1 * u1 / (sx1 * math.sqrt(1.0 - u1 * u1))

    s2 = slope * sx2 / sy2
    u2 = -s2 / math.sqrt(1.0 + s2 * s2)
    c2 = a1 - sx2 * u2
    a2 = 2.0 * c2 - a1
    off2 = -sy2 * math.sqrt(1.0 - u2 * u2)

    t3 = slope * sx3 / sy3
    u3 = -t3 / math.sqrt(1.0 + t3 * t3)
    c3 = a2 - sx3 * u3
    a3 = 2.0 * c3 - a2
    off3 = sy3 * math.sqrt(1.0 - u3 * u3)

    root = 0.5 * s4 / slope
    shift = a3 - root * root
    off4 = -s4 * root

    segs = (
        Segment.ellipse_arc(0.0, a1, offset=off1, semi_y=sy1,
                            center_x=c1, semi_x=sx1, sign=-1),
        Segment.ellipse_arc(a1, a2, offset=off2, semi_y=sy2,
                            center_x=c2, semi_x=sx2, sign=1),
        Segment.ellipse_arc(a2, a3, offset=off3, semi_y=sy3,
                            center_x=c3, semi_x=sx3, sign=-1),
        Segment.sqrt_branch(a3, _INF, offset=off4, scale=s4, shift=shift),
    )
    return LienardSystem(FunctionModel(segs, name="F"), _g_identity(),
                         name="three_cycle")


_NEEDS = {"vdp": ("mu",), "vdp_bounded": ("mu",), "quintic": ("k",),
          "two_cycle": (), "three_cycle": ()}


def builtin(name, params=None):
    """Build a catalog system by name; params supplies mu or k when needed."""
    params = dict(params or {})
    if name not in _NEEDS:
        raise UnknownModelError(
            f"unknown builtin {name!r}; available: {', '.join(sorted(_NEEDS))}")
    for key in _NEEDS[name]:
        if key not in params or params[key] is None:
            raise ConfigError(f"builtin {name!r} requires parameter {key!r}")
    extra = set(params) - set(_NEEDS[name])
    if extra:
        raise ConfigError(f"builtin {name!r} got unexpected parameters {sorted(extra)}")
    if name == "vdp":
        return _vdp(float(params["mu"]))
    if name == "vdp_bounded":
        return _vdp_bounded(float(params["mu"]))
    if name == "quintic":
        return _quintic(float(params["k"]))
    if name == "two_cycle":
        return _two_cycle()
    return _three_cycle()


def builtin_names():
    return tuple(sorted(_NEEDS))
