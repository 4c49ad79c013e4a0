"""Odd piecewise closed-form scalar functions and the Lienard system pair.

A :class:`FunctionModel` is defined by segments on x >= 0 and extended to
x < 0 by oddness, so value(-x) = -value(x), the derivative is even, and the
antiderivative is even.  Five closed segment forms are supported; they cover
every catalog model and keep values, derivatives, and antiderivatives exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _dp54
from .errors import DomainError, StructuralError

_FORM_CODES = {
    "polynomial": _dp54.FORM_POLYNOMIAL,
    "sinusoid": _dp54.FORM_SINUSOID,
    "ellipse_arc": _dp54.FORM_ELLIPSE_ARC,
    "sqrt_branch": _dp54.FORM_SQRT_BRANCH,
    "constant": _dp54.FORM_CONSTANT,
}

# parameter field names per form, in packed order (polynomial is variadic)
FORM_FIELDS = {
    "polynomial": ("coeffs",),
    "sinusoid": ("amplitude", "angular_frequency", "phase", "offset"),
    "ellipse_arc": ("offset", "semi_y", "center_x", "semi_x", "sign"),
    "sqrt_branch": ("offset", "scale", "shift"),
    "constant": ("value",),
}

# tolerance for joint continuity, matching the construction accuracy of the matched piecewise catalog models
JOINT_TOL = 5e-7


@dataclass(frozen=True)
class Segment:
    """One closed-form piece on [lo, hi); hi may be +inf."""

    lo: float
    hi: float
    form: str
    params: tuple

    def __post_init__(self):
        if self.form not in _FORM_CODES:
            raise StructuralError(f"unknown segment form {self.form!r}")
        if not (self.lo < self.hi):
            raise StructuralError(f"segment needs lo < hi, got [{self.lo}, {self.hi})")
        if self.form == "sinusoid" and self.params[1] == 0.0:
            raise StructuralError("sinusoid needs a nonzero angular frequency")
        if self.form == "ellipse_arc":
            off, sy, cx, sx, sg = self.params
            if sx <= 0:
                raise StructuralError("ellipse_arc needs semi_x > 0")
            if sg not in (-1, 1, -1.0, 1.0):
                raise StructuralError("ellipse_arc sign must be +1 or -1")
            for end in (self.lo, self.hi):
                if math.isfinite(end) and abs(end - cx) > sx * (1 + 1e-12):
                    raise StructuralError(
                        f"ellipse_arc undefined at x={end}: |x-center_x| > semi_x")
            if not math.isfinite(self.hi):
                raise StructuralError("ellipse_arc cannot extend to +inf")
        if self.form == "sqrt_branch" and self.lo < self.params[2] - 1e-12:
            raise StructuralError("sqrt_branch needs x >= shift on its segment")

    @staticmethod
    def polynomial(lo, hi, coeffs):
        return Segment(lo, hi, "polynomial", tuple(float(c) for c in coeffs))

    @staticmethod
    def sinusoid(lo, hi, amplitude, angular_frequency, phase=0.0, offset=0.0):
        return Segment(lo, hi, "sinusoid",
                       (float(amplitude), float(angular_frequency),
                        float(phase), float(offset)))

    @staticmethod
    def ellipse_arc(lo, hi, offset, semi_y, center_x, semi_x, sign=1):
        return Segment(lo, hi, "ellipse_arc",
                       (float(offset), float(semi_y), float(center_x),
                        float(semi_x), float(sign)))

    @staticmethod
    def sqrt_branch(lo, hi, offset, scale, shift):
        return Segment(lo, hi, "sqrt_branch",
                       (float(offset), float(scale), float(shift)))

    @staticmethod
    def constant(lo, hi, value):
        return Segment(lo, hi, "constant", (float(value),))

    def _packed_params(self, width):
        row = np.zeros(width)
        if self.form == "polynomial":
            row[0] = len(self.params)
            row[1:1 + len(self.params)] = self.params
        else:
            row[:len(self.params)] = self.params
        return row


@dataclass(frozen=True)
class FunctionModel:
    """Odd function assembled from segments tiling [0, d); immutable."""

    segments: tuple
    name: str = "F"

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise StructuralError("model needs at least one segment")
        if segs[0].lo != 0.0:
            raise StructuralError("first segment must start at x = 0")
        for a, b in zip(segs, segs[1:]):
            if b.lo != a.hi:
                raise StructuralError(
                    f"segments must tile without gaps/overlaps: "
                    f"[{a.lo},{a.hi}) then [{b.lo},{b.hi})")

    @cached_property
    def _packed(self):
        segs = self.segments
        width = max(8, max(len(s.params) + 1 for s in segs))
        bounds = np.empty(len(segs) + 1)
        forms = np.empty(len(segs), dtype=np.int64)
        params = np.empty((len(segs), width))
        for i, s in enumerate(segs):
            bounds[i] = s.lo
            forms[i] = _FORM_CODES[s.form]
            params[i] = s._packed_params(width)
        bounds[-1] = segs[-1].hi
        cumint = np.zeros(len(segs))
        anti = _dp54._seg_antideriv.py_func
        for i in range(1, len(segs)):
            f, p = forms[i - 1], params[i - 1]
            cumint[i] = cumint[i - 1] + (anti(f, p, bounds[i])
                                         - anti(f, p, bounds[i - 1]))
        return bounds, forms, params, cumint

    @property
    def extent(self):
        """Right end of the definition range on x >= 0 (may be +inf)."""
        return self.segments[-1].hi

    def _check_domain(self, x):
        if not abs(x) < self.extent:
            raise DomainError(
                f"{self.name}: x={x} outside validity interval "
                f"(-{self.extent}, {self.extent})")

    def value(self, x):
        self._check_domain(x)
        b, f, p, _ = self._packed
        return float(_dp54.model_value(b, f, p, float(x)))

    def derivative(self, x):
        """One-sided from the left at interior segment joints."""
        self._check_domain(x)
        b, f, p, _ = self._packed
        return float(_dp54.model_deriv(b, f, p, float(x)))

    def antiderivative(self, x):
        """Integral of the odd extension from 0 to x; an even function."""
        self._check_domain(x)
        b, f, p, c = self._packed
        return float(_dp54.model_antideriv(b, f, p, c, float(x)))

    def values(self, xs):
        xs = np.asarray(xs, dtype=float)
        if xs.size and np.max(np.abs(xs)) >= self.extent:
            raise DomainError(f"{self.name}: batch evaluation outside (-d, d)")
        b, f, p, _ = self._packed
        return _dp54.model_values(b, f, p, np.ascontiguousarray(xs.ravel())).reshape(xs.shape)

    def derivatives(self, xs):
        xs = np.asarray(xs, dtype=float)
        if xs.size and np.max(np.abs(xs)) >= self.extent:
            raise DomainError(f"{self.name}: batch evaluation outside (-d, d)")
        b, f, p, _ = self._packed
        return _dp54.model_derivs(b, f, p, np.ascontiguousarray(xs.ravel())).reshape(xs.shape)

    def antiderivatives(self, xs):
        xs = np.asarray(xs, dtype=float)
        if xs.size and np.max(np.abs(xs)) >= self.extent:
            raise DomainError(f"{self.name}: batch evaluation outside (-d, d)")
        b, f, p, c = self._packed
        return _dp54.model_antiderivs(b, f, p, c, np.ascontiguousarray(xs.ravel())).reshape(xs.shape)


def eval(model, which, x):
    """Single-entry evaluation: which in {'value', 'derivative', 'antiderivative'}."""
    try:
        fn = {"value": model.value, "derivative": model.derivative,
              "antiderivative": model.antiderivative}[which]
    except KeyError:
        raise ValueError(f"unknown evaluation kind {which!r}") from None
    return fn(x)


@dataclass(frozen=True)
class BoundaryResidual:
    x: float
    value_residual: float
    derivative_residual: float


@dataclass(frozen=True)
class ValidationReport:
    model_name: str
    boundaries: tuple
    c1_required: bool
    passed: bool

    @property
    def max_value_residual(self):
        return max((b.value_residual for b in self.boundaries), default=0.0)

    @property
    def max_derivative_residual(self):
        return max((b.derivative_residual for b in self.boundaries), default=0.0)


def validate_model(model, c1_required=True, tol=JOINT_TOL):
    """Check continuity (and C1 smoothness when required) at segment joints.

    The origin counts as a joint of the odd extension: oddness forces
    value(0) = 0, so |F(0+)| is reported as its value residual.  Residuals are
    compared against the catalog construction accuracy (5e-7) rather than
    machine precision, because the multi-cycle models are only matched to
    that level.
    """
    segs = model.segments
    bres = []
    v0 = abs(_seg_val(segs[0], 0.0))
    d0 = 0.0  # derivative is even, hence automatically continuous at 0
    bres.append(BoundaryResidual(0.0, v0, d0))
    for a, b in zip(segs, segs[1:]):
        xj = b.lo
        vr = abs(_seg_val(b, xj) - _seg_val(a, xj))
        dr = abs(_seg_der(b, xj) - _seg_der(a, xj))
        bres.append(BoundaryResidual(xj, vr, dr))
    ok = all(b.value_residual <= tol for b in bres)
    if c1_required:
        ok = ok and all(b.derivative_residual <= tol for b in bres)
    return ValidationReport(model.name, tuple(bres), bool(c1_required), ok)


def _seg_val(seg, x):
    row = seg._packed_params(max(8, len(seg.params) + 1))
    return float(_dp54._seg_value.py_func(_FORM_CODES[seg.form], row, x))


def _seg_der(seg, x):
    row = seg._packed_params(max(8, len(seg.params) + 1))
    return float(_dp54._seg_deriv.py_func(_FORM_CODES[seg.form], row, x))


@dataclass(frozen=True)
class LienardSystem:
    """The pair (F, g) with validity half-width d; g must be positive on (0, d)."""

    F: FunctionModel
    g: FunctionModel
    d: float = math.inf
    name: str = "lienard"

    def __post_init__(self):
        d = min(float(self.d), self.F.extent, self.g.extent)
        object.__setattr__(self, "d", d)
        if d <= 0:
            raise StructuralError("validity half-width d must be positive")
        hi = min(d, 100.0)
        xs = np.linspace(hi * 1e-6, hi * (1 - 1e-12), 512)
        if np.any(self.g.values(xs) <= 0.0):
            raise StructuralError("g(x) must be positive for x in (0, d)")

    def G(self, x):
        """Potential integral of g from 0 to x (even)."""
        return self.g.antiderivative(x)

    def v(self, x, y):
        """Path potential v(x, y) = G(x) + y^2 / 2."""
        return self.g.antiderivative(x) + 0.5 * y * y


@dataclass(frozen=True)
class ZeroStructure:
    """Positive simple zeros of F and the interleaved extrema abscissae."""

    zeros: tuple
    extrema: tuple
    values_at_extrema: tuple
    non_simple: tuple = ()


# |f| above this at a zero of F counts the zero as simple
SIMPLE_ZERO_DERIV_TOL = 1e-8


def find_zero_structure(system, scan_range=None, grid_n=4096):
    """Locate positive zeros of F (sign scan + bisection to 1e-12 brackets)
    and local extrema of F (sign changes of f, same refinement).

    Zeros where F only touches the axis (no sign change and |f| below
    ``SIMPLE_ZERO_DERIV_TOL``) are reported separately as non-simple.
    """
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    F = system.F
    if scan_range is None:
        hi = min(system.d, 20.0)
        lo = hi * 1e-9
    else:
        lo, hi = scan_range
        if not (0.0 <= lo < hi <= system.d) or not math.isfinite(hi):
            raise ValueError("scan_range must be a finite interval inside (0, d)")
        lo = max(lo, hi * 1e-12)
    xs = np.linspace(lo, hi * (1 - 1e-12), grid_n)
    fv = F.values(xs)
    dv = F.derivatives(xs)

    zeros = []
    non_simple = []
    for i in range(len(xs)):
        if fv[i] == 0.0:
            # exact grid hit: a simple zero has nonzero slope there
            if abs(F.derivative(xs[i])) > SIMPLE_ZERO_DERIV_TOL:
                zeros.append(xs[i])
            else:
                non_simple.append(xs[i])
        elif i + 1 < len(xs) and fv[i] * fv[i + 1] < 0.0:
            zeros.append(_bisect(F.value, xs[i], xs[i + 1]))

    extrema = []
    for i in range(len(xs) - 1):
        if dv[i] * dv[i + 1] < 0.0:
            xe = _bisect(F.derivative, xs[i], xs[i + 1])
            fe = F.value(xe)
            if abs(fe) <= 1e-10 and abs(F.derivative(xe)) < SIMPLE_ZERO_DERIV_TOL:
                non_simple.append(xe)
            else:
                extrema.append(xe)

    non_simple = sorted(non_simple)
    non_simple = [x for i, x in enumerate(non_simple)
                  if i == 0 or x - non_simple[i - 1] > 1e-9 * max(1.0, x)]
    zeros = sorted(zeros)
    return ZeroStructure(
        zeros=tuple(zeros),
        extrema=tuple(extrema),
        values_at_extrema=tuple(F.value(x) for x in extrema),
        non_simple=tuple(non_simple),
    )


def _bisect(fn, lo, hi, xtol=1e-12):
    flo = fn(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
