import math

import numpy as np
import pytest

from lienard_lab import (DomainError, FunctionModel, LienardSystem, Segment,
                         StructuralError, builtin, builtin_names, eval_model,
                         find_zero_structure, validate_model)
from lienard_lab.errors import ConfigError, UnknownModelError


def test_eval_quintic_value():
    s = builtin("quintic", {"k": 3.5})
    assert s.F.value(1.0) == pytest.approx(-1.4, abs=1e-14)


def test_eval_antiderivative_identity_g():
    s = builtin("quintic", {"k": 3.5})
    assert s.g.antiderivative(2.0) == pytest.approx(2.0, abs=1e-14)


def test_eval_vdp_zero_at_sqrt3():
    s = builtin("vdp", {"mu": 1.0})
    assert s.F.value(math.sqrt(3.0)) == pytest.approx(0.0, abs=1e-14)


def test_eval_dispatch():
    s = builtin("vdp", {"mu": 1.0})
    assert eval_model(s.F, "value", 1.0) == pytest.approx(-2.0 / 3.0)
    assert eval_model(s.F, "derivative", 1.0) == pytest.approx(0.0, abs=1e-14)
    assert eval_model(s.F, "antiderivative", 1.0) == pytest.approx(1.0 / 12.0 - 0.5)
    with pytest.raises(ValueError):
        eval_model(s.F, "gradient", 1.0)


def test_domain_error_outside_extent():
    F = FunctionModel((Segment.polynomial(0.0, 2.0, (0.0, 1.0)),))
    assert F.value(1.5) == 1.5
    with pytest.raises(DomainError):
        F.value(2.5)
    with pytest.raises(DomainError):
        F.value(-2.5)


def test_odd_symmetry_sampled():
    rng = np.random.default_rng(42)
    for name, params in [("vdp", {"mu": 1.0}), ("quintic", {"k": 3.0}),
                         ("two_cycle", None), ("three_cycle", None),
                         ("vdp_bounded", {"mu": 0.5})]:
        s = builtin(name, params)
        hi = min(s.d, 5.0) * 0.999
        xs = rng.uniform(1e-6, hi, 1000)
        v_sym = s.F.values(-xs) + s.F.values(xs)
        a_sym = s.F.antiderivatives(-xs) - s.F.antiderivatives(xs)
        assert np.max(np.abs(v_sym)) <= 1e-12
        assert np.max(np.abs(a_sym)) <= 1e-10


def test_derivative_matches_finite_difference():
    rng = np.random.default_rng(7)
    for name, params in [("vdp", {"mu": 2.0}), ("quintic", {"k": 3.5}),
                         ("three_cycle", None)]:
        s = builtin(name, params)
        joints = np.array([seg.lo for seg in s.F.segments] +
                          [seg.hi for seg in s.F.segments if math.isfinite(seg.hi)])
        xs = rng.uniform(0.01, min(s.d, 3.0) * 0.9, 400)
        # stay away from joints: the derivative is one-sided there
        xs = xs[np.min(np.abs(xs[:, None] - joints[None, :]), axis=1) > 1e-3]
        h = 1e-6
        fd = (s.F.values(xs + h) - s.F.values(xs - h)) / (2 * h)
        an = s.F.derivatives(xs)
        scale = np.maximum(1.0, np.abs(an))
        assert np.max(np.abs(fd - an) / scale) < 1e-6


def test_antiderivative_cross_checked_by_quadrature():
    # independent route: Gauss-Legendre segment by segment (joints are only
    # C1), with panels packed geometrically toward each segment's left edge
    # (the square-root branch point sits just left of its segment)
    s = builtin("three_cycle")
    nodes, weights = np.polynomial.legendre.leggauss(40)
    joints = [seg.lo for seg in s.F.segments]
    # packed toward both segment edges (arc curvature and the branch point)
    left = 4.0 ** -np.arange(12, 0, -1)
    fracs = np.concatenate([[0.0], 0.5 * left, [0.5], 1.0 - 0.5 * left[::-1], [1.0]])
    for x in (0.05, 0.15, 0.3, 0.45, 1.0):
        edges = [j for j in joints if j < x] + [x]
        quad = 0.0
        for lo, hi in zip(edges, edges[1:]):
            for f0, f1 in zip(fracs, fracs[1:]):
                a, b = lo + f0 * (hi - lo), lo + f1 * (hi - lo)
                t = 0.5 * (b - a) * (nodes + 1.0) + a
                quad += 0.5 * (b - a) * float(np.dot(weights, s.F.values(t)))
        assert s.F.antiderivative(x) == pytest.approx(quad, abs=1e-12)


def test_closed_form_G_for_identity_g():
    s = builtin("vdp", {"mu": 1.0})
    for x in (0.1, 1.0, 2.0, -1.3):
        assert abs(s.G(x) - 0.5 * x * x) <= 1e-14


def test_validate_three_cycle_c1():
    s = builtin("three_cycle")
    rep = validate_model(s.F, c1_required=True)
    assert rep.passed
    assert rep.max_value_residual <= 5e-7
    assert rep.max_derivative_residual <= 5e-7


def test_validate_single_polynomial_zero_residuals():
    F = FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0, 0.0, 2.0)),))
    rep = validate_model(F, c1_required=True)
    assert rep.passed
    assert rep.max_value_residual == 0.0
    assert rep.max_derivative_residual == 0.0


def test_validate_reports_value_mismatch():
    F = FunctionModel((Segment.polynomial(0.0, 1.0, (0.0, 1.0)),
                       Segment.polynomial(1.0, math.inf, (1e-3, 1.0))))
    rep = validate_model(F, c1_required=False)
    assert not rep.passed
    assert rep.boundaries[1].value_residual == pytest.approx(1e-3, rel=1e-12)


def test_structural_errors():
    with pytest.raises(StructuralError):
        Segment.polynomial(1.0, 0.5, (0.0, 1.0))  # lo >= hi
    with pytest.raises(StructuralError):
        FunctionModel((Segment.polynomial(0.5, 1.0, (0.0, 1.0)),))  # no 0 start
    with pytest.raises(StructuralError):
        FunctionModel((Segment.polynomial(0.0, 1.0, (0.0, 1.0)),
                       Segment.polynomial(1.5, 2.0, (0.0, 1.0))))  # gap
    with pytest.raises(StructuralError):
        Segment.ellipse_arc(0.0, 1.0, 0.0, 1.0, 0.0, 0.5, 1)  # x beyond semi_x
    with pytest.raises(StructuralError):
        LienardSystem(
            F=FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0)),)),
            g=FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, -1.0)),)))


def test_zero_structure_quintic_k35():
    s = builtin("quintic", {"k": 3.5})
    zs = find_zero_structure(s)
    assert zs.zeros == pytest.approx((0.4919, 0.68725), abs=1e-4)
    assert not zs.non_simple


def test_zero_structure_quintic_k3_extrema():
    s = builtin("quintic", {"k": 3.0})
    zs = find_zero_structure(s)
    assert zs.extrema == pytest.approx((0.24638, 0.66279), abs=1e-4)


def test_zero_structure_linear_F_empty():
    sys_lin = LienardSystem(
        F=FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0)),)),
        g=FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0)),)))
    zs = find_zero_structure(sys_lin, scan_range=(0.0, 10.0))
    assert zs.zeros == ()
    assert zs.extrema == ()


def test_zero_structure_idempotent_under_grid_doubling():
    s = builtin("quintic", {"k": 3.5})
    z1 = find_zero_structure(s, grid_n=2048)
    z2 = find_zero_structure(s, grid_n=4096)
    assert np.allclose(z1.zeros, z2.zeros, atol=1e-10)
    assert np.allclose(z1.extrema, z2.extrema, atol=1e-10)


def test_zero_structure_flags_double_root():
    # F = x (x - 1)^2 on x >= 0: touches zero at x = 1 without crossing
    F = FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0, -2.0, 1.0)),))
    g = FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0)),))
    zs = find_zero_structure(LienardSystem(F, g), scan_range=(0.0, 3.0))
    assert zs.non_simple == pytest.approx((1.0,), abs=1e-6)
    assert all(abs(z - 1.0) > 1e-3 for z in zs.zeros)


def test_builtin_two_cycle_reference_zeros():
    zs = find_zero_structure(builtin("two_cycle"))
    assert len(zs.zeros) == 2
    assert zs.zeros[0] == pytest.approx(0.1, abs=1e-8)
    assert zs.zeros[1] == pytest.approx(0.25052350868645645, abs=1e-8)


def test_builtin_three_cycle_reference_zeros():
    zs = find_zero_structure(builtin("three_cycle"))
    assert zs.zeros == pytest.approx(
        (0.097979588, 0.197647912, 0.397273968), abs=1e-7)
    assert zs.extrema == pytest.approx(
        (0.048989794, 0.14781375, 0.29746094), abs=1e-7)


def test_builtin_vdp_mu0_is_zero_F():
    s = builtin("vdp", {"mu": 0.0})
    xs = np.linspace(-3, 3, 50)
    assert np.all(s.F.values(xs) == 0.0)


def test_builtin_errors():
    with pytest.raises(UnknownModelError):
        builtin("pendulum")
    with pytest.raises(ConfigError):
        builtin("vdp", {})
    with pytest.raises(ConfigError):
        builtin("two_cycle", {"mu": 1.0})
    assert set(builtin_names()) == {"vdp", "vdp_bounded", "quintic",
                                    "two_cycle", "three_cycle"}


def test_vdp_bounded_matches_vdp_inside_core():
    sb = builtin("vdp_bounded", {"mu": 1.5})
    sv = builtin("vdp", {"mu": 1.5})
    xs = np.linspace(-2.39, 2.39, 201)
    assert np.allclose(sb.F.values(xs), sv.F.values(xs), atol=0.0)
    # constant tail beyond x = 3
    assert sb.F.value(3.5) == pytest.approx(sb.F.value(10.0), abs=0.0)
    rep = validate_model(sb.F, c1_required=True)
    assert rep.passed
