"""L-series: series/integral routes, delta variant, twists, s-family,
the regularized series of weakly holomorphic forms, classical values."""

import math

import numpy as np
import pytest

from maass_lseries.errors import DomainError, MembershipError
from maass_lseries.form import FormData, RuleCoeffs, twist
from maass_lseries.lseries import (
    _nonhol_sum_t,
    _nonhol_sum_y,
    regularized_lseries,
    classical_value,
    lseries_delta,
    lseries_delta_integral,
    lseries_integral,
    lseries_s,
    lseries_series,
    lseries_twisted,
    series_membership,
)
from maass_lseries.qseries import fixture
from maass_lseries.specials import characters_mod, gauss_sum, trivial_character, upper_gamma
from maass_lseries.testfn import (
    TestFunction,
    laplace,
    quadrature,
    shift_s,
    slash_W,
    standard_battery,
)

BAT = standard_battery()


def _single_a1():
    return FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a={1: 1.0}, b={}, growth_C=4.0, exhaustive=True,
    )


def test_single_term_box():
    box = TestFunction.spline([0.0, 1.0], [[1.0]])
    v = lseries_series(_single_a1(), box).value
    assert abs(v - (1 - math.exp(-2 * math.pi)) / (2 * math.pi)) < 1e-14


def test_swap_order_oracle():
    # a(n) = 1 for n <= N: L_f(phi) = int phi(y) sum e^{-2 pi n y} dy
    N = 40
    f = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a={n: 1.0 for n in range(1, N + 1)}, b={}, growth_C=1.0, exhaustive=True,
    )
    phi = BAT[2]
    lhs = lseries_series(f, phi).value

    def inner(ys):
        q = np.exp(-2 * math.pi * ys)
        return phi.eval_many(ys) * q * (1 - q ** N) / (1 - q)

    rhs, _ = quadrature(inner, *phi.support(), rel_tol=1e-13, vectorized=True)
    assert abs(lhs - rhs) < 1e-11 * abs(rhs)


@pytest.mark.parametrize("name,prec", [
    ("delta", 256), ("e4", 256), ("j744", 768), ("inv_delta", 768), ("theta", 768),
])
def test_series_integral_equivalence(name, prec):
    f = fixture(name, prec)
    for phi in BAT:
        sv = lseries_series(f, phi)
        iv = lseries_integral(f, phi)
        rel = abs(sv.value - iv.value) / max(abs(sv.value), abs(iv.value), 1e-30)
        assert rel < 1e-9, (name, phi.label, rel)
        assert sv.trunc_err >= 0 and sv.quad_err >= 0


def test_nonholomorphic_two_internal_forms():
    # single b(-1), k = -10: t-integral route vs y-integral route
    k = -10
    f = FormData(
        weight2=2 * k, level=1, psi=trivial_character(1), n0=0,
        a={}, b={-1: 1.0}, growth_C=4.0, exhaustive=True,
    )
    for phi in (BAT[2], BAT[5]):
        vt, _ = _nonhol_sum_t(f, phi, 1e-12)
        vy, _ = _nonhol_sum_y(f, phi, 1e-12)
        assert abs(vt - vy) < 1e-9 * max(abs(vt), abs(vy))
        sv = lseries_series(f, phi)
        iv = lseries_integral(f, phi)
        assert abs(sv.value - iv.value) < 1e-9 * abs(iv.value)


def test_zero_form():
    z = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a={}, b={}, growth_C=4.0, exhaustive=True,
    )
    assert lseries_series(z, BAT[0]).value == 0
    assert lseries_integral(z, BAT[0]).value == 0


def test_linearity_in_f_and_phi():
    rng = np.random.default_rng(9)
    f = fixture("delta", 128)
    g = fixture("e4", 128)
    phi, psi = BAT[2], BAT[3]
    al, be = rng.normal(size=2)
    combo = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a={n: al * f.a.get(n, 0) + be * g.a.get(n, 0) for n in set(f.a) | set(g.a)},
        b={}, growth_C=6.0,
    )
    lhs = lseries_series(combo, phi).value
    rhs = al * lseries_series(f, phi).value + be * lseries_series(g, phi).value
    assert abs(lhs - rhs) < 1e-11 * max(1e-12, abs(lhs))
    # linearity in phi through explicit quadratures of the integral route
    s1 = lseries_integral(f, phi).value + lseries_integral(f, psi).value
    from maass_lseries.form import eval_iy

    def both(ys):
        return eval_iy(f, ys, 1e-14) * (phi.eval_many(ys) + psi.eval_many(ys))

    lo = min(phi.support()[0], psi.support()[0])
    hi = max(phi.support()[1], psi.support()[1])
    s2, _ = quadrature(both, lo, hi, rel_tol=1e-13,
                       knots=phi.knots() + psi.knots(), vectorized=True)
    assert abs(s1 - s2) < 1e-11 * abs(s1)


def test_delta_variant_closed_forms():
    # constant: (k/2) c int phi
    fc = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a={0: 2.0}, b={}, growth_C=4.0, exhaustive=True,
    )
    phi = BAT[2]
    mass, _ = quadrature(lambda xs: phi.eval_many(xs), *phi.support(), vectorized=True)
    assert abs(lseries_delta(fc, phi).value - 12.0 * mass) < 1e-12 * abs(12 * mass)
    # single a(1): (k/2)(L phi)(2 pi) - 2 pi (L phi_2)(2 pi)
    f1 = _single_a1()
    expect = 6.0 * laplace(phi, 2 * math.pi) - 2 * math.pi * laplace(
        shift_s(phi, 2.0), 2 * math.pi
    )
    assert abs(lseries_delta(f1, phi).value - expect) < 1e-13 * abs(expect)


def test_delta_variant_series_vs_integral():
    f = fixture("delta", 256)
    for phi in (BAT[0], BAT[4], BAT[9]):
        sv = lseries_delta(f, phi).value
        iv = lseries_delta_integral(f, phi).value
        assert abs(sv - iv) < 1e-8 * max(abs(sv), abs(iv))


def test_delta_variant_nonholomorphic_part():
    # the t-integral route of the delta-op series against the direct
    # integral of (delta_k f)(iy) for data with a genuine b-part
    k = -10
    f = FormData(
        weight2=2 * k, level=1, psi=trivial_character(1), n0=0,
        a={1: 0.5}, b={-1: 1.0, -2: 0.25}, growth_C=4.0, exhaustive=True,
    )
    for phi in (BAT[1], BAT[4]):
        sv = lseries_delta(f, phi).value
        iv = lseries_delta_integral(f, phi).value
        assert abs(sv - iv) < 1e-10 * abs(iv)


def test_twisted_delegation_two_code_paths():
    # delegation through twist() against the direct tau-weighted series
    f = fixture("delta", 256)
    chi = characters_mod(3)[1]
    chib = chi.conjugate()
    phi = BAT[3]
    v1 = lseries_twisted(f, chi, phi).value
    ft = twist(f, chi)
    direct = sum(
        complex(f.a[n]) * gauss_sum(chib, n) * laplace(phi, 2 * math.pi * n / 3)
        for n in sorted(f.a) if n <= 40
    )
    assert abs(v1 - lseries_series(ft, phi).value) == 0.0  # same path by construction
    assert abs(v1 - direct) < 1e-12 * max(abs(v1), 1e-12)


def test_twisted_triangle_bound():
    # |L_{f_chi}(phi)| <= D sum |a(n)| (L|phi|)(2 pi n / D)
    f = fixture("delta", 128)
    D = 5
    chi = characters_mod(D)[1]
    phi = BAT[2]
    v = lseries_twisted(f, chi, phi).value
    bound = D * sum(
        abs(complex(f.a[n])) * abs(laplace(phi, 2 * math.pi * n / D))
        for n in sorted(f.a) if n <= 60
    )
    assert abs(v) <= bound


def test_membership_error_for_noncompact():
    f = fixture("delta", 64)  # not exhaustive: envelope certificate needed
    tp = TestFunction.trunc_power(2.0, 1.0)
    with pytest.raises(MembershipError):
        series_membership(f, tp)
    with pytest.raises(MembershipError):
        lseries_series(f, tp)


def test_s_family_consistency_and_cross_route():
    f = fixture("delta", 512)
    phi = BAT[3]
    v1 = lseries_s(f, phi, 1.0).value
    v0 = lseries_series(f, phi).value
    assert abs(v1 - v0) < 1e-12 * abs(v0)
    for s in (2.0 + 1.0j, 0.5, 3.7 - 0.9j):
        va = lseries_s(f, phi, s).value
        vb = lseries_series(f, shift_s(phi, s)).value
        assert abs(va - vb) < 1e-12 * abs(vb)


def test_s_family_functional_equation_delta():
    f = fixture("delta", 512)
    phi = BAT[3]
    s = 0.3 + 2.0j
    lhs = lseries_s(f, phi, s).value
    rhs = (1j) ** 12 * 1.0 ** (-s - 6 + 1) * lseries_s(
        f, slash_W(phi, 1.0 - 12, 1), 1 - s
    ).value
    assert abs(lhs - rhs) < 1e-9 * max(abs(lhs), abs(rhs))


def test_s_family_zero_form():
    z = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a={}, b={}, growth_C=4.0, exhaustive=True,
    )
    assert lseries_s(z, BAT[2], 2.5).value == 0


# ---------------------------------------------------------------------------
# regularized series of weakly holomorphic forms


def test_regularized_t0_independence_delta():
    f = fixture("delta", 64)
    for s in (2.0, 6.0, 12.0):
        vals = [regularized_lseries(f, s, t0) for t0 in (0.5, 1.0, 2.0)]
        spread = max(abs(a - b) for a in vals for b in vals)
        assert spread < 1e-9 * max(abs(v) for v in vals)


def test_regularized_t0_independence_j744():
    f = fixture("j744", 64)
    vals = [regularized_lseries(f, 2.5, t0) for t0 in (0.5, 1.0, 2.0)]
    spread = max(abs(a - b) for a in vals for b in vals)
    assert spread < 1e-8 * max(abs(v) for v in vals)
    assert all(np.isfinite([v.real, v.imag]).all() for v in vals)


def test_regularized_first_sum_vanishes_large_t0():
    # each Gamma(6, 2 pi n t0) -> 0, so the first sum alone dies off
    f = fixture("delta", 64)
    t0 = 50.0
    first = sum(
        complex(v) * upper_gamma(6.0, 2 * math.pi * n * t0) * (2 * math.pi * n) ** -6.0
        for n, v in sorted(f.a.items())
        if 2 * math.pi * n * t0 < 700
    )
    assert abs(first) < 1e-120


def test_regularized_domain_errors():
    f = fixture("e4", 32)  # nonzero constant term
    with pytest.raises(DomainError):
        regularized_lseries(f, 2.0, 1.0)
    th = fixture("theta", 32)
    with pytest.raises(DomainError):
        regularized_lseries(th, 2.0, 1.0)  # odd weight
    d = fixture("delta", 32)
    with pytest.raises(DomainError):
        regularized_lseries(d, 2.0, -1.0)


# ---------------------------------------------------------------------------
# classical values


def test_classical_zeta_values():
    ones = RuleCoeffs(lambda n: 1.0, 1, 200_000_000, vfn=lambda ns: np.ones(len(ns)))
    f = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a=ones, b={}, growth_C=1.0,
    )
    lv2 = classical_value(f, 2.0, tol=4e-9)
    assert abs(lv2.value - math.pi ** 2 / 6) < 1e-8
    assert lv2.trunc_err < 1e-8
    lv4 = classical_value(f, 4.0, tol=1e-10)
    assert abs(lv4.value - math.pi ** 4 / 90) < 1e-10


def test_classical_partial_sum_plus_tail_oracle():
    # independent oracle: partial sums + Euler-Maclaurin tail
    ones = RuleCoeffs(lambda n: 1.0, 1, 200_000_000, vfn=lambda ns: np.ones(len(ns)))
    f = FormData(
        weight2=24, level=1, psi=trivial_character(1), n0=0,
        a=ones, b={}, growth_C=1.0,
    )
    N = 100_000
    for s, target in ((2.0, math.pi ** 2 / 6), (4.0, math.pi ** 4 / 90)):
        partial = float(np.sum(np.arange(1, N + 1, dtype=float) ** -s))
        tail = N ** (1 - s) / (s - 1) - 0.5 * N ** -s + s / 12 * N ** (-s - 1)
        oracle = partial + tail
        assert abs(oracle - target) < 1e-12
        lv = classical_value(f, s, tol=4e-9)
        assert abs(lv.value - oracle) < 1e-8


def test_classical_delta_partial_sum_oracle():
    f = fixture("delta", 768)
    lv = classical_value(f, 12.0)
    oracle = sum(complex(v) / n ** 12.0 for n, v in sorted(f.a.items()))
    assert abs(lv.value - oracle) < 1e-10 * abs(oracle)


def test_classical_divergence_error():
    f = fixture("delta", 128)
    with pytest.raises(DomainError):
        classical_value(f, 3.0)  # below the tau-growth abscissa ~ 6.5
    th = fixture("j744", 32)
    with pytest.raises(DomainError):
        classical_value(th, 12.0)  # n0 != 0
