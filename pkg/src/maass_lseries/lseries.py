"""Test-function L-series of harmonic Maass forms.

The central object is the pairing

    L_f(phi) = sum_{n >= -n0} a(n) (L phi)(2 pi n / M)
             + sum_{n < 0} b(n) (-4 pi n / M)^{1-k}
                  int_0^inf (L phi_{2-k})(-2 pi n (2t+1)/M) (1+t)^{-k} dt,

together with its integral representation int_0^inf f(iy) phi(y) dy, the
delta_k variant, Dirichlet twists, the one-parameter family L(s, f, phi) =
L_f(phi_s) evaluated through its split-integral continuation, the
incomplete-gamma regularized series of weakly holomorphic forms, and
classical Dirichlet-series values.

Every returned value carries its truncation tail bound and quadrature
estimate separately; nothing is folded silently into the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError, MembershipError
from .form import FormData, RuleCoeffs, geom_tail, twist, eval_iy, delta_k_iy
from .specials import Character, _principal_pow, i_pow, upper_gamma
from .testfn import TestFunction, laplace, laplace_many, quadrature, shift_s, slash_W

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LValue:
    """An L-series value with its error budget."""

    value: complex
    trunc_err: float
    quad_err: float
    n_terms: int
    method: str

    def __complex__(self):
        return complex(self.value)


def _phi_mass(phi: TestFunction) -> tuple[float, float, float]:
    """(c1, c2, K) with |(L phi)(u)| <= K e^{-u c1} for u >= 0.

    K is the L1 mass of |phi| over its support, estimated on a dense grid
    (sup sampling times width); adequate for tail certificates at desk
    scale.
    """
    lo, hi = phi.support()
    if not (lo >= 0 and np.isfinite(hi)):
        raise MembershipError("membership certificates need compact support")
    xs = np.linspace(lo, hi, 4001)[1:-1]
    sup = float(np.max(np.abs(phi.eval_many(xs))))
    return lo, hi, 1.05 * sup * (hi - lo)


def series_membership(f: FormData, phi: TestFunction, for_delta: bool = False) -> float:
    """Absolute-value variant of the defining series, with tail certificate.

    Computes a finite upper bound for the membership sum that must converge
    for phi to lie in the admissible space of f (or of delta_k f), using
    |(L|phi|)(u)| <= K e^{-u c1} for u >= 0 and <= K e^{|u| c2} for u < 0
    on the compact support [c1, c2].  Raises MembershipError when the
    envelope cannot certify a finite tail (e.g. non-compact test functions
    against exponentially growing coefficients).
    """
    if not phi.is_compact:
        lo, hi = phi.support()
        finite_width = np.isfinite(hi)
        if f.exhaustive and ((all(n > 0 for n in f.a) and len(f.b) == 0) or finite_width):
            return math.inf  # finitely many terms, each individually finite
        raise MembershipError(
            f"{phi.label!r} is not compactly supported in (0, inf); the "
            "coefficient growth envelope cannot certify convergence"
        )
    c1, c2, K = _phi_mass(phi)
    alpha = _TWO_PI * c1 / f.period
    pw = 1.0 if for_delta else 0.0
    hol_tail = 0.0 if f.exhaustive else geom_tail(
        f.amplitude("a") * K, f.growth_C, alpha, _max_stored(f, "a"), pw
    )
    nonhol_tail = _nonhol_series_tail(f, c1, pw)
    if not (np.isfinite(hol_tail) and np.isfinite(nonhol_tail)):
        raise MembershipError(
            f"membership series for {phi.label!r} not certifiably convergent"
        )
    ns, avals = f._arrays("a")
    acc = 0.0
    if len(ns):
        nf = ns.astype(float)
        env = np.where(nf >= 0, np.exp(-alpha * nf), np.exp(_TWO_PI * c2 / f.period * -nf))
        acc += float(np.sum(np.abs(avals) * K * env))
    return acc + hol_tail + nonhol_tail


def _max_stored(f: FormData, part: str) -> int:
    ns, _ = f._arrays(part)
    return int(ns[-1]) if len(ns) else 0


def _nonhol_series_tail(f: FormData, c1: float, extra_poly: float = 0.0) -> float:
    """Tail certificate for the nonholomorphic sum of the defining series."""
    if f.exhaustive or len(f.b) == 0:
        return 0.0
    ns, _ = f._arrays("b")
    m_max = int(-ns[0])
    k = f.k
    alpha = _TWO_PI * c1 / f.period
    beta1 = 2.0 * alpha * (m_max + 1)  # decay rate of the t-integrand at m_max+1
    p = -k  # net polynomial power from (4 pi n/M)^{1-k} * O(1/n) t-integral
    if beta1 < 2.0 * max(0.0, -k) + 1.0:
        return math.inf
    pref = (4.0 * math.pi / f.period) ** (1.0 - k) * 2.0 / (2.0 * alpha)
    return geom_tail(f.amplitude("b") * pref, f.growth_C, alpha, m_max, p + extra_poly)


# ----------------------------------------------------------------------------
# the two defining routes


def lseries_series(f: FormData, phi: TestFunction, tol: float = 1e-12) -> LValue:
    """L_f(phi) by the defining coefficient-side series.

    The nonholomorphic terms are computed through the t-integral of the
    shifted Laplace transform and cross-validated against the equivalent
    incomplete-gamma y-integral; disagreement beyond the combined error
    budget raises AccuracyError.
    """
    series_membership(f, phi)
    value, trunc, quad, n_terms = _hol_sum(f, phi, tol)
    if len(f.b):
        v_t, q_t = _nonhol_sum_t(f, phi, tol)
        v_y, q_y = _nonhol_sum_y(f, phi, tol)
        if abs(v_t - v_y) > 1e-6 * max(1.0, abs(v_t), abs(v_y)) + 10 * (q_t + q_y):
            raise AccuracyError(
                f"nonholomorphic term cross-check failed: {v_t} vs {v_y}",
                best=v_t,
            )
        value += v_t
        quad += q_t
        trunc += _nonhol_series_tail(f, _phi_mass(phi)[0])
        n_terms += len(f.b)
    return LValue(value, trunc, quad, n_terms, "series")


_CANCEL_ESCALATE = 3e3
_PI_LD = 4 * np.arctan(np.longdouble(1.0))


def _weighted_transform_sum(coeffs: np.ndarray, phi: TestFunction, ns: np.ndarray, period: int):
    """sum_n coeffs[n] (L phi)(2 pi n / period), escalating precision.

    When the float64 sum cancels by more than ~3e3, the transforms, the
    frequencies 2 pi n / period themselves, and the dot product are all
    recomputed in x87 long double, pushing the noise floor down by three
    orders of magnitude.  Exact for integer coefficient data stored in
    complex128 (the cast to complex long double is lossless).
    """
    us = ns.astype(float) * (_TWO_PI / period)
    lv, le = laplace_many(phi, us)
    terms = coeffs * lv
    ssum = complex(np.sum(terms))
    mass = float(np.sum(np.abs(terms)))
    quad = float(np.sum(np.abs(coeffs) * le))
    # coefficients beyond 2^53 were rounded when stored; that noise is
    # irreducible at any working precision
    big = np.abs(coeffs) > 2.0 ** 53
    storage_noise = 5e-16 * float(np.sum(np.abs(terms[big]))) if np.any(big) else 0.0
    cancel = mass / max(abs(ssum), 1e-300)
    if cancel > _CANCEL_ESCALATE and _longdouble_capable(phi):
        us_ld = ns.astype(np.longdouble) * (2 * _PI_LD / np.longdouble(period))
        lv2, le2 = laplace_many(phi, us_ld, dtype=np.longdouble)
        terms2 = coeffs.astype(np.clongdouble) * lv2.astype(np.clongdouble)
        ssum = complex(np.sum(terms2))
        quad = float(np.sum(np.abs(coeffs) * le2.astype(float)))
        quad += float(np.finfo(np.longdouble).eps) * mass * 10.0
    else:
        quad += 1e-16 * mass
    return ssum, quad + storage_noise


def _longdouble_capable(phi: TestFunction) -> bool:
    from .testfn import _Bump, _Spline

    return isinstance(phi.base, (_Bump, _Spline)) and all(
        op[0] == "slash" or complex(op[1]).imag == 0.0 for op in phi.ops
    )


def _hol_sum(f: FormData, phi: TestFunction, tol: float):
    """sum a(n) (L phi)(2 pi n / M) over stored n, negative n adaptively."""
    ns, avals = f._arrays("a")
    if len(ns) == 0:
        return 0.0 + 0.0j, 0.0, 0.0, 0
    c1, c2, K = _phi_mass(phi)
    alpha = _TWO_PI * c1 / f.period
    # skip only terms whose certified bound is below the representable
    # range; anything larger may still matter after cancellation
    log_env = (
        np.log(np.abs(avals) + 1e-300)
        + math.log(max(K, 1e-300))
        - np.where(ns > 0, alpha * ns.astype(float), 0.0)
    )
    keep = (ns <= 0) | (log_env > -650.0)
    ns_k = ns[keep]
    avals_k = avals[keep]
    value = 0.0 + 0.0j
    quad = 0.0
    pos = ns_k >= 0
    if np.any(pos):
        v, q = _weighted_transform_sum(avals_k[pos], phi, ns_k[pos], f.period)
        value += v
        quad += q
    for n, av in zip(ns_k[~pos], avals_k[~pos]):
        lv = laplace(phi, _TWO_PI * n / f.period)
        value += av * lv
        quad += 1e-13 * abs(av * lv)
    trunc = 0.0 if f.exhaustive else geom_tail(
        f.amplitude("a") * K, f.growth_C, alpha, _max_stored(f, "a")
    )
    return value, trunc, quad, int(len(ns_k))


def _nonhol_sum_t(f: FormData, phi: TestFunction, tol: float):
    """b-part through the t-integral of (L phi_{2-k})."""
    c1, _, _ = _phi_mass(phi)
    k = f.k
    phi2k = shift_s(phi, 2.0 - k)
    bns, bvals = f._arrays("b")
    value = 0.0 + 0.0j
    quad = 0.0
    for n, bv in zip(bns, bvals):
        lam = 4.0 * math.pi * (-n) * c1 / f.period

        def integrand(ts, n=n):
            us = -_TWO_PI * n * (2.0 * ts + 1.0) / f.period
            lv, _ = laplace_many(phi2k, us)
            return lv * (1.0 + ts) ** (-k)

        iv, ie = quadrature(
            integrand, 0.0, math.inf, rel_tol=1e-12, decay_rate=lam, vectorized=True
        )
        pref = bv * (-4.0 * math.pi * n / f.period) ** (1.0 - k)
        value += pref * iv
        quad += abs(pref) * ie
    return value, quad


def _nonhol_sum_y(f: FormData, phi: TestFunction, tol: float):
    """b-part through int Gamma(1-k, -4 pi n y / M) e^{-2 pi n y / M} phi(y) dy."""
    lo, hi = phi.support()
    k = f.k
    bns, bvals = f._arrays("b")
    value = 0.0 + 0.0j
    quad = 0.0
    for n, bv in zip(bns, bvals):

        def integrand(ys, n=n):
            g = np.array(
                [upper_gamma(1.0 - k, -4.0 * math.pi * n * y / f.period) for y in ys]
            )
            return g * np.exp(-_TWO_PI * n * ys / f.period) * phi.eval_many(ys)

        iv, ie = quadrature(
            integrand, lo, hi, rel_tol=1e-12, knots=phi.knots(), vectorized=True
        )
        value += bv * iv
        quad += abs(bv) * ie
    return value, quad


def lseries_integral(f: FormData, phi: TestFunction, tol: float = 1e-12) -> LValue:
    """L_f(phi) = int_0^inf f(iy) phi(y) dy over the support of phi."""
    lo, hi = phi.support()
    if not (lo > 0 and np.isfinite(hi)):
        raise DomainError("integral route requires compact support")
    eval_tol = tol / max(hi - lo, 1e-12)

    def integrand(ys):
        return eval_iy(f, ys, eval_tol) * phi.eval_many(ys)

    value, qerr = quadrature(
        integrand, lo, hi, rel_tol=1e-13, knots=phi.knots(), vectorized=True
    )
    return LValue(value, tol, qerr, len(f.a) + len(f.b), "integral")


def lseries_delta(f: FormData, phi: TestFunction, tol: float = 1e-12) -> LValue:
    """L_{delta_k f}(phi) by the renormalized-derivative series."""
    series_membership(f, phi, for_delta=True)
    k = f.k
    base = lseries_series(f, phi, tol)
    value = 0.5 * k * base.value
    quad = abs(0.5 * k) * base.quad_err
    trunc = abs(0.5 * k) * base.trunc_err
    c1, c2, K = _phi_mass(phi)
    alpha = _TWO_PI * c1 / f.period
    phi2 = shift_s(phi, 2.0)
    ns, avals = f._arrays("a")
    if len(ns):
        log_env = (
            np.log(np.abs(avals) * (np.abs(ns) + 1) + 1e-300)
            - np.where(ns > 0, alpha * ns.astype(float), 0.0)
        )
        keep = (ns < 0) | (log_env > -650.0)
        nz = keep & (ns != 0)
        pos = nz & (ns > 0)
        if np.any(pos):
            coef = avals[pos] * ns[pos].astype(float)
            v, q = _weighted_transform_sum(coef, phi2, ns[pos], f.period)
            value += -_TWO_PI / f.period * v
            quad += _TWO_PI / f.period * q
        for n, av in zip(ns[nz & (ns < 0)], avals[nz & (ns < 0)]):
            lv = laplace(phi2, _TWO_PI * n / f.period)
            value += -_TWO_PI / f.period * av * n * lv
    if not f.exhaustive:
        c2mass = _phi_mass(phi2)[2]
        trunc += _TWO_PI / f.period * geom_tail(
            f.amplitude("a") * c2mass, f.growth_C, alpha, _max_stored(f, "a"), 1.0
        )
    # nonholomorphic part of the delta series
    bns, bvals = f._arrays("b")
    if len(bns):
        phi3k = shift_s(phi, 3.0 - k)
        for n, bv in zip(bns, bvals):
            lam = 4.0 * math.pi * (-n) * c1 / f.period

            def integrand(ts, n=n):
                us = -_TWO_PI * n * (2.0 * ts + 1.0) / f.period
                lv, _ = laplace_many(phi3k, us)
                return lv * (1.0 + ts) ** (-k)

            iv, ie = quadrature(
                integrand, 0.0, math.inf, rel_tol=1e-12, decay_rate=lam, vectorized=True
            )
            pref = -_TWO_PI / f.period * bv * n * (-4.0 * math.pi * n / f.period) ** (1.0 - k)
            value += pref * iv
            quad += abs(pref) * ie
        trunc += _nonhol_series_tail(f, c1, 1.0)
    return LValue(value, trunc, quad, len(f.a) + len(f.b), "series")


def lseries_delta_integral(f: FormData, phi: TestFunction, tol: float = 1e-12) -> LValue:
    """L_{delta_k f}(phi) = int (delta_k f)(iy) phi(y) dy (cross-check route)."""
    lo, hi = phi.support()
    if not (lo > 0 and np.isfinite(hi)):
        raise DomainError("integral route requires compact support")
    eval_tol = tol / max(hi - lo, 1e-12)

    def integrand(ys):
        return delta_k_iy(f, ys, eval_tol) * phi.eval_many(ys)

    value, qerr = quadrature(
        integrand, lo, hi, rel_tol=1e-13, knots=phi.knots(), vectorized=True
    )
    return LValue(value, tol, qerr, len(f.a) + len(f.b), "integral")


def lseries_twisted(
    f: FormData,
    chi: Character,
    phi: TestFunction,
    tol: float = 1e-12,
    delta: bool = False,
) -> LValue:
    """L_{f_chi}(phi) (or the delta_k analogue), by delegation to the twist."""
    fx = twist(f, chi)
    return lseries_delta(fx, phi, tol) if delta else lseries_series(fx, phi, tol)


# ----------------------------------------------------------------------------
# s-parameter family via the split integral


def lseries_s(
    f: FormData,
    phi: TestFunction,
    s: complex,
    g: FormData | None = None,
    tol: float = 1e-12,
) -> LValue:
    """L(s, f, phi) = L_f(phi_s) through the split-integral continuation.

    Both integrals run over [1/sqrt(N), inf) and converge for every complex
    s when phi is compactly supported; at s = 1 the value equals L_f(phi).
    ``g`` is the W_N companion f|_k W_N; it defaults to f itself, which is
    exact for the bundled self-dual fixtures.
    """
    if f.weight2 % 2 != 0:
        raise DomainError("the s-family continuation is stated for integral weight")
    if g is None:
        g = f
    k = f.k
    N = f.level
    s = complex(s)
    root = 1.0 / math.sqrt(N)
    phi_w = slash_W(phi, 1.0 - k, N)
    quad = 0.0
    value = 0.0 + 0.0j

    for func, test, expo, pref in (
        (g, phi_w, 1.0 - s, i_pow(int(round(k))) * N ** (-k / 2.0 + 1.0 - s)),
        (f, phi, s, 1.0 + 0.0j),
    ):
        lo, hi = test.support()
        lo = max(lo, root)
        if hi <= lo:
            continue
        eval_tol = tol / max(hi - lo, 1e-12)

        def integrand(xs, func=func, test=test, expo=expo):
            return (
                eval_iy(func, xs, eval_tol)
                * test.eval_many(xs)
                * np.exp((expo - 1.0) * np.log(xs))
            )

        v, e = quadrature(
            integrand, lo, hi, rel_tol=1e-13, knots=test.knots(), vectorized=True
        )
        value += pref * v
        quad += abs(pref) * e
    return LValue(value, tol, quad, len(f.a) + len(g.a), "integral")


# ----------------------------------------------------------------------------
# incomplete-gamma regularized series of weakly holomorphic forms


def regularized_lseries(f: FormData, s: complex, t0: float, tol: float = 1e-12) -> complex:
    """The t0-regularized L-series of a weakly holomorphic form.

    L(s, f) = sum_{n != 0} a(n) Gamma(s, 2 pi n t0) (2 pi n)^{-s}
            + i^k sum_{n != 0} a(n) Gamma(k-s, 2 pi n / t0) (2 pi n)^{s-k};
    independent of t0 > 0.  Negative-index terms go through the analytic
    continuation of the incomplete gamma and principal-branch powers.
    """
    if len(f.b):
        raise DomainError("regularized_lseries is defined for weakly holomorphic forms")
    if f.weight2 % 2 != 0:
        raise DomainError("regularized_lseries requires even integral weight")
    if f.period != 1:
        raise DomainError("regularized_lseries requires period 1")
    if t0 <= 0:
        raise DomainError("t0 must be positive")
    if 0 in f.a and f.a[0] != 0:
        raise DomainError("the regularized series excludes n = 0 (constant term present)")
    k = int(round(f.k))
    ik = i_pow(k)
    ns, avals = f._arrays("a")
    acc = 0.0 + 0.0j
    rate = _TWO_PI * min(t0, 1.0 / t0)  # decay of both gamma factors in n
    for n, av in zip(ns, avals):
        if n == 0 or av == 0:
            continue
        if n > 0 and rate * n > 800.0:
            break  # both terms far below double-precision resolution
        u = _TWO_PI * float(n)
        t1 = av * upper_gamma(s, u * t0) * _principal_pow(u, -s)
        t2 = ik * av * upper_gamma(k - s, u / t0) * _principal_pow(u, s - k)
        acc += t1 + t2
    return complex(acc)


# ----------------------------------------------------------------------------
# classical Dirichlet-series values


def classical_value(
    f: FormData, s: complex, tol: float = 1e-10, chunk: int = 1 << 22
) -> LValue:
    """sum_{n >= 1} a(n) n^{-s} = L_f(I_s) for holomorphic cusp data.

    The abscissa check fits a polynomial envelope |a(n)| <= A n^P to the
    stored range and requires Re(s) > P + 1.  Rule-backed coefficient maps
    are summed in vectorized chunks until the certified integral tail bound
    drops below ``tol`` or the rule range is exhausted (the remaining tail
    is reported in ``trunc_err``).
    """
    if len(f.b) or f.n0 != 0:
        raise DomainError("classical_value requires holomorphic cusp data (b empty, n0 = 0)")
    s = complex(s)
    sig = s.real
    if isinstance(f.a, RuleCoeffs):
        lo, hi_all = f.a.n_min, f.a.n_max
        if lo < 1:
            raise DomainError("classical series starts at n = 1")
        probe = np.abs(f.a.eval_range(lo, min(hi_all, lo + 4096)))
        P, A = _poly_envelope(np.arange(lo, min(hi_all, lo + 4096) + 1), probe)
        if sig <= P + 1.0 + 1e-9:
            raise DomainError(
                f"series diverges: Re(s)={sig:g} below abscissa ~{P + 1.0:g}"
            )
        acc = 0.0 + 0.0j
        n_done = lo - 1
        terms = 0
        while n_done < hi_all:
            n_hi = min(hi_all, n_done + chunk)
            ns = np.arange(n_done + 1, n_hi + 1, dtype=float)
            vals = f.a.eval_range(n_done + 1, n_hi)
            if s.imag == 0:
                acc += complex(np.sum(vals * ns ** (-sig)))
            else:
                acc += complex(np.sum(vals * np.exp(-s * np.log(ns))))
            terms += len(ns)
            n_done = n_hi
            tail = _dirichlet_tail(A, P, sig, n_done)
            if tail <= tol:
                break
        return LValue(complex(acc), _dirichlet_tail(A, P, sig, n_done), 0.0, terms, "series")
    ns, avals = f._arrays("a")
    pos = ns >= 1
    ns, avals = ns[pos].astype(float), avals[pos]
    if len(ns) == 0:
        return LValue(0.0 + 0.0j, 0.0, 0.0, 0, "series")
    P, A = _poly_envelope(ns, np.abs(avals))
    if sig <= P + 1.0 + 1e-9:
        raise DomainError(f"series diverges: Re(s)={sig:g} below abscissa ~{P + 1.0:g}")
    acc = complex(np.sum(avals * np.exp(-s * np.log(ns))))
    trunc = 0.0 if f.exhaustive else _dirichlet_tail(A, P, sig, int(ns[-1]))
    return LValue(acc, trunc, 0.0, len(ns), "series")


def _poly_envelope(ns, mags):
    """(P, A) with |a(n)| <= A n^P over the sample."""
    mask = (ns >= 2) & (mags > 0)
    if not np.any(mask):
        return 0.0, float(np.max(mags, initial=1.0))
    P = float(np.max(np.log(mags[mask]) / np.log(ns[mask])))
    P = max(0.0, P)
    A = float(np.max(mags / ns.astype(float) ** P))
    return P, max(A, 1e-300)


def _dirichlet_tail(A: float, P: float, sig: float, n_done: int) -> float:
    """A * sum_{n > n_done} n^{P - sig} bounded by the integral test."""
    p = P - sig
    if p >= -1:
        return math.inf
    return A * (n_done ** (p + 1.0) / (-p - 1.0) + n_done ** p)
