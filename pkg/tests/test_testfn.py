"""Test-function algebra, quadrature engine, Laplace transforms."""

import math

import numpy as np
import pytest

from maass_lseries.errors import AccuracyError, DomainError
from maass_lseries.testfn import (
    TestFunction,
    derivative,
    eval_at,
    laplace,
    laplace_many,
    quadrature,
    shift_s,
    slash_W,
    standard_battery,
)


# ---------------------------------------------------------------------------
# quadrature


def test_quadrature_polynomial():
    v, e = quadrature(lambda x: x, 0, 1)
    assert abs(v - 0.5) < 1e-14 and e < 1e-12


def test_quadrature_exponential_semi_infinite():
    v, e = quadrature(lambda x: math.exp(-x), 0, math.inf, decay_rate=1.0)
    assert abs(v - 1.0) < 1e-12


def test_quadrature_gaussian_vs_simpson_oracle():
    v, _ = quadrature(
        lambda x: np.exp(-x * x), 0, math.inf,
        rel_tol=1e-12, decay_rate=1.0, vectorized=True,
    )
    # high-resolution Simpson oracle on [0, 12]
    xs = np.linspace(0.0, 12.0, 2 ** 16 + 1)
    ys = np.exp(-xs * xs)
    h = xs[1] - xs[0]
    simp = (ys[0] + ys[-1] + 4 * ys[1::2].sum() + 2 * ys[2:-1:2].sum()) * h / 3
    assert abs(v - simp) < 1e-10
    assert abs(v - math.sqrt(math.pi) / 2) < 1e-10


def test_quadrature_needs_decay_hint():
    with pytest.raises(DomainError):
        quadrature(lambda x: math.exp(-x), 0, math.inf)


def test_quadrature_reports_failure_with_best_estimate():
    # a spike the subdivision budget cannot resolve at the requested rel_tol
    with pytest.raises(AccuracyError) as exc:
        quadrature(
            lambda x: 1.0 / (1e-14 + (x - 0.3141) ** 2), 0, 1,
            rel_tol=1e-13, max_subdiv=3,
        )
    assert exc.value.best is not None


# ---------------------------------------------------------------------------
# variants and modifiers


def test_bump_support_and_values():
    phi = TestFunction.bump(1, 2)
    assert eval_at(phi, 1.5) == 1.0  # normalized peak
    assert eval_at(phi, 3.0) == 0.0
    assert eval_at(phi, 0.5) == 0.0
    assert phi.support() == (1.0, 2.0)
    with pytest.raises(DomainError):
        TestFunction.bump(2, 1)
    with pytest.raises(DomainError):
        eval_at(phi, -1.0)


def test_trunc_power_eval():
    tp = TestFunction.trunc_power(2.0, 1.0)
    assert abs(eval_at(tp, 3.0) - 3.0) < 1e-14
    assert eval_at(tp, 0.5) == 0.0


def test_shift_s_identity_and_composition():
    phi = TestFunction.bump(1, 2)
    assert shift_s(phi, 1) is phi
    xs = np.array([1.2, 1.5, 1.9])
    p3 = shift_s(phi, 3)
    assert np.allclose(p3.eval_many(xs), xs ** 2 * phi.eval_many(xs), rtol=1e-14)
    # composition adds exponents: (phi_s)_t = phi_{s+t-1}
    a = shift_s(shift_s(phi, 2.5), 0.5)
    b = shift_s(phi, 2.0)
    assert np.allclose(a.eval_many(xs), b.eval_many(xs), rtol=1e-14)


def test_slash_action_pointwise():
    phi = TestFunction.bump(1, 2)
    pw = slash_W(phi, 2.0, 1)
    x = 0.75
    assert abs(eval_at(pw, x) - x ** -2 * eval_at(phi, 1 / x)) < 1e-14
    # support of the slash is the reciprocal interval
    assert slash_W(phi, 0.0, 1).support() == (0.5, 1.0)


def test_slash_involution():
    phi = TestFunction.bump(1, 2)
    rng = np.random.default_rng(3)
    xs = rng.uniform(1.01, 1.99, 100)
    for a, M in ((2.0, 1), (-10.0, 1), (0.5, 4), (1.5, 3)):
        pww = slash_W(slash_W(phi, a, M), a, M)
        lhs = pww.eval_many(xs)
        rhs = M ** (-a) * phi.eval_many(xs)
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(M ** -a, 1.0)


def test_slash_on_trunc_power():
    # (x^{s-1} 1_{x>T}) |_a W_1 = x^{a... }: direct formula at one point
    tp = TestFunction.trunc_power(1.5, 2.0)
    sw = slash_W(tp, 0.5, 1)
    x = 0.25  # 1/x = 4 > T
    expect = x ** -0.5 * (1 / x) ** 0.5
    assert abs(eval_at(sw, x) - expect) < 1e-14
    assert eval_at(sw, 0.9) == 0.0  # 1/x < T


# ---------------------------------------------------------------------------
# derivatives


def test_derivative_order_zero_and_fundamental_theorem():
    phi = TestFunction.bump(1, 2)
    assert derivative(phi, 0) is phi
    d1 = derivative(phi, 1)
    v, e = quadrature(lambda xs: d1.eval_many(xs), 1, 2, vectorized=True)
    assert abs(v) < 1e-13


def test_derivative_spline_cubic():
    sp = TestFunction.spline([1.0, 2.0], [[0.0, 0.0, 0.0, 1.0]])  # x^3
    d2 = derivative(sp, 2)
    assert abs(eval_at(d2, 1.5) - 9.0) < 1e-12  # 6x at x = 1.5


def test_derivative_vanishing_moments():
    # int phi^{(m)}(x) x^j dx = 0 for j <= m-1 (compact support by parts)
    phi = TestFunction.bump(1, 2)
    for m in (1, 2, 3):
        dm = derivative(phi, m)
        for j in range(m):
            v, _ = quadrature(
                lambda xs: dm.eval_many(xs) * xs ** j, 1, 2, vectorized=True
            )
            assert abs(v) < 1e-11


def test_derivative_requires_plain_variant():
    phi = TestFunction.bump(1, 2)
    with pytest.raises(DomainError):
        derivative(slash_W(phi, 1.0, 1), 1)
    with pytest.raises(DomainError):
        derivative(TestFunction.trunc_power(2.0, 1.0), 1)


def test_laplace_derivative_rule():
    # (L phi^{(m)})(u) = u^m (L phi)(u) for compactly supported smooth phi
    phi = TestFunction.bump(1, 2)
    u = 2 * math.pi
    base = laplace(phi, u)
    for m in (1, 2, 3):
        dm = derivative(phi, m)
        assert abs(laplace(dm, u) - u ** m * base) < 1e-12 * abs(u ** m * base)


def test_bspline_partition_and_smoothness():
    b3 = TestFunction.bspline(3, 0.5, 4.5)
    v, _ = quadrature(
        lambda x: b3.eval_many(x), 0.5, 4.5, knots=b3.knots(), vectorized=True
    )
    assert abs(v - 1.0) < 1e-12  # scale * int B_3 = (4/(3+1)) * 1
    for m in (0, 1, 2):
        d = derivative(b3, m)
        jump = abs(eval_at(d, 1.5 - 1e-11) - eval_at(d, 1.5 + 1e-11))
        assert jump < 1e-8


def test_bspline_high_order_laplace_rule():
    b11 = TestFunction.bspline(11, 1.0, 3.0)
    u = 2 * math.pi
    d11 = derivative(b11, 11)
    lhs = laplace(d11, u)
    rhs = u ** 11 * laplace(b11, u)
    assert abs(lhs - rhs) < 1e-10 * abs(rhs)


# ---------------------------------------------------------------------------
# Laplace transform


def test_laplace_box_closed_form():
    box = TestFunction.spline([0.0, 1.0], [[1.0]])
    for s in (1.0, 2.0, 6.283):
        assert abs(laplace(box, s) - (1 - math.exp(-s)) / s) < 1e-13


def test_laplace_trunc_power_closed_form():
    tp = TestFunction.trunc_power(2.0, 1.0)
    assert abs(laplace(tp, 1.0) - 2 / math.e) < 1e-13
    # continuation: u < 0 gives u^{-s} Gamma(s, uT); at u = -2,
    # Gamma(2,-2) = -e^2 and (-2)^{-2} = 1/4
    assert abs(laplace(tp, -2.0) - (-math.e ** 2 / 4)) < 1e-12
    # s = 0 diverges for Re(sigma) >= 0, converges to -T^s/s for Re < 0
    with pytest.raises(DomainError):
        laplace(tp, 0.0)
    tpn = TestFunction.trunc_power(-1.0, 2.0)
    assert abs(laplace(tpn, 0.0) - (2.0 ** -1.0)) < 1e-14


def test_laplace_slashed_trunc_power_unsupported():
    sw = slash_W(TestFunction.trunc_power(2.0, 1.0), 0.5, 1)
    with pytest.raises(DomainError):
        laplace(sw, 1.0)


def test_laplace_bump_vs_fine_oracle():
    phi = TestFunction.bump(1, 2)
    s = 2 * math.pi
    val = laplace(phi, s)
    # 10x finer fixed Simpson oracle
    xs = np.linspace(1.0, 2.0, 2 ** 17 + 1)
    ys = phi.eval_many(xs) * np.exp(-s * xs)
    h = xs[1] - xs[0]
    simp = (ys[0] + ys[-1] + 4 * ys[1::2].sum() + 2 * ys[2:-1:2].sum()) * h / 3
    assert abs(val - simp) < 1e-10 * abs(simp)


def test_laplace_linearity():
    rng = np.random.default_rng(5)
    a = TestFunction.bump(0.5, 1.5)
    b = TestFunction.bump(1.0, 3.0)
    for _ in range(5):
        al, be = rng.normal(size=2)
        s = rng.uniform(0.5, 8.0)
        lhs = al * laplace(a, s) + be * laplace(b, s)
        # no linear-combination type; compare against summed quadratures
        v, _ = quadrature(
            lambda xs: (al * a.eval_many(xs) + be * b.eval_many(xs)) * np.exp(-s * xs),
            0.5, 3.0, knots=(1.0, 1.5), vectorized=True, rel_tol=1e-13,
        )
        assert abs(lhs - v) < 1e-11 * max(abs(lhs), abs(v), 1e-12)


def test_laplace_decay_envelope():
    # |(L phi)(x)| <= sup|phi| (c2-c1) e^{-x c1} for the whole battery
    for phi in standard_battery():
        c1, c2 = phi.support()
        for x in (0.5, 2.0, 10.0):
            bound = (c2 - c1) * math.exp(-x * c1)
            assert abs(laplace(phi, x)) <= bound * 1.0000001


def test_laplace_many_matches_adaptive():
    phi = standard_battery()[8]
    us = np.array([-2 * math.pi, -1.0, 0.0, 1.0, 2 * math.pi, 120.0, 900.0])
    vals, errs = laplace_many(phi, us)
    for u, v in zip(us, vals):
        ref = laplace(phi, float(u))
        assert abs(v - ref) <= 5e-13 * max(abs(ref), 1e-300)


def test_laplace_many_longdouble_consistency():
    phi = standard_battery()[2]
    us = np.array([1.0, 2 * math.pi, 30.0])
    v64, _ = laplace_many(phi, us)
    vld, _ = laplace_many(phi, us.astype(np.longdouble), dtype=np.longdouble)
    assert np.max(np.abs(v64 - vld.astype(float)) / np.abs(v64)) < 1e-13


# ---------------------------------------------------------------------------
# battery


def test_battery_geometry():
    bat = standard_battery()
    assert len(bat) == 10
    assert bat[0].support() == (0.25, 0.5)
    lo9, hi9 = bat[9].support()
    assert abs(lo9 - 2 ** 2.5) < 1e-12 and abs(hi9 - 2 ** 3.5) < 1e-12


def test_battery_covers_range():
    # for any y in the tested range some member is nonzero there
    bat = standard_battery()
    for y in np.linspace(0.26, 11.0, 300):
        assert any(abs(eval_at(phi, float(y))) > 0 for phi in bat)


def test_battery_shifts():
    bat = standard_battery(shifts=(1, 2, 6))
    assert len(bat) == 30
