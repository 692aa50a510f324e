"""Compactly supported test functions, their algebra, and quadrature.

The test-function family has three base variants: smooth bumps
exp(-1/((x-c1)(c2-x))) normalized to peak value 1, compact piecewise
polynomials (splines), and truncated powers x^{s-1} 1_{x>T}.  Two modifiers
act on them: the power twist phi_s(x) = phi(x) x^{s-1} and the involution
(phi|_a W_M)(x) = (Mx)^{-a} phi(1/(Mx)).  Laplace transforms are closed
form for truncated powers and adaptive Gauss-Kronrod quadrature otherwise.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError
from .specials import _principal_pow, upper_gamma

# ----------------------------------------------------------------------------
# Gauss-Kronrod 15/7 pair (QUADPACK dqk15 constants)

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 ascending nodes
_GK_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss weights aligned with the 15-node layout (zeros at Kronrod-only nodes)
_G_W = np.zeros(15)
_G_W[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: float, b: float):
    """One GK15 panel: returns (value, err_est, abs_mass)."""
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    xs = mid + h * _GK_NODES
    ys = np.asarray(f(xs))
    vk = h * np.sum(_GK_W * ys)
    vg = h * np.sum(_G_W * ys)
    mass = h * np.sum(_GK_W * np.abs(ys))
    # QUADPACK-style damped error estimate
    mean = vk / (b - a)
    asc = h * np.sum(_GK_W * np.abs(ys - mean))
    diff = abs(vk - vg)
    if asc > 0 and diff > 0:
        err = asc * min(1.0, (200.0 * diff / asc) ** 1.5)
    else:
        err = diff
    err = max(err, 50.0 * np.finfo(float).eps * mass)
    return vk, err, mass


def _as_vectorized(f, vectorized: bool):
    if vectorized:
        return f
    return lambda xs: np.array([f(float(x)) for x in xs])


def quadrature(
    f,
    a: float,
    b: float,
    rel_tol: float = 1e-12,
    *,
    knots=(),
    decay_rate: float | None = None,
    vectorized: bool = False,
    max_subdiv: int = 4000,
):
    """Adaptive 15-point Gauss-Kronrod integration of ``f`` over (a, b).

    ``knots`` seed the initial subdivision (support endpoints, spline
    joints).  For b = +inf an exponential ``decay_rate`` hint is required;
    the range is truncated where the implied bound drops below the target.
    Returns ``(value, err_est)``; raises :class:`AccuracyError` with the
    best estimate if the target is unreachable within ``max_subdiv``
    subdivisions.  Convergence means
    ``err <= max(rel_tol |value|, 300 eps int|f|)``, the second term being
    the roundoff floor that genuinely vanishing integrals of oscillating
    integrands bottom out at.
    """
    fv = _as_vectorized(f, vectorized)
    tail_bound = 0.0
    if b == a:
        return 0.0 + 0.0j, 0.0
    if b == math.inf:
        if decay_rate is None or decay_rate <= 0:
            raise DomainError("semi-infinite quadrature needs a decay_rate hint")
        b, tail_bound = _truncate_semi_infinite(fv, a, decay_rate, rel_tol, knots)
    edges = sorted({float(a), float(b), *(float(k) for k in knots if a < k < b)})
    heap = []
    count = 0
    total = 0.0 + 0.0j
    total_err = 0.0
    total_mass = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e, m = _gk15(fv, lo, hi)
        heapq.heappush(heap, (-e, count, lo, hi, v, m))
        count += 1
        total += v
        total_err += e
        total_mass += m

    def converged():
        # roundoff of the absolute mass is the attainable floor, which
        # matters for genuinely vanishing integrals of oscillating f
        floor = 300.0 * np.finfo(float).eps * total_mass
        return total_err <= max(rel_tol * abs(total), floor)

    for _ in range(max_subdiv):
        if converged():
            break
        neg_e, _, lo, hi, v, m = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1, m1 = _gk15(fv, lo, mid)
        v2, e2, m2 = _gk15(fv, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - (-neg_e)
        total_mass += m1 + m2 - m
        heapq.heappush(heap, (-e1, count, lo, mid, v1, m1))
        count += 1
        heapq.heappush(heap, (-e2, count, mid, hi, v2, m2))
        count += 1
    else:
        if not converged():
            raise AccuracyError(
                f"quadrature did not converge: err={total_err:.3e}",
                best=complex(total),
                err_est=total_err + tail_bound,
            )
    return complex(total), float(total_err + tail_bound)


def _truncate_semi_infinite(fv, a, decay_rate, rel_tol, knots):
    """March fixed blocks until the decay bound certifies the tail."""
    w = max(8.0 / decay_rate, 1e-9)
    lo = max([float(a), *[float(k) for k in knots if np.isfinite(k)]])
    acc = 0.0
    ratio = math.exp(-decay_rate * w)
    for k in range(400):
        _, _, m = _gk15(fv, lo, lo + w)
        acc += m
        lo += w
        tail = m * ratio / max(1e-300, 1.0 - ratio)
        if k >= 2 and tail <= 0.5 * rel_tol * max(acc, 1e-300):
            return lo, tail
    raise AccuracyError("semi-infinite truncation did not settle")


@lru_cache(maxsize=8)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@lru_cache(maxsize=8)
def _leggauss_longdouble(n: int):
    """Gauss-Legendre nodes/weights refined to long-double accuracy.

    Newton iterations on P_n from the float64 seeds; needed because
    float64 node error alone caps quadrature at ~1e-15 relative.
    """
    x0, _ = np.polynomial.legendre.leggauss(n)
    x = x0.astype(np.longdouble)
    for _ in range(4):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        x = x - p1 / dp
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x, w


# ----------------------------------------------------------------------------
# Test-function bases


@dataclass(frozen=True)
class _Bump:
    c1: float
    c2: float

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        c1, c2 = float(self.c1), float(self.c2)
        w2 = (c2 - c1) ** 2
        out = np.zeros(xs.shape, dtype=xs.dtype if xs.dtype.kind == "f" else float)
        inside = (xs > c1) & (xs < c2)
        xi = xs[inside]
        expo = 4.0 / w2 - 1.0 / ((xi - c1) * (c2 - xi))
        out[inside] = np.exp(np.maximum(expo, -745.0)) * (expo > -745.0)
        return out

    @property
    def support(self):
        return float(self.c1), float(self.c2)

    def knots(self):
        return (float(self.c1), float(self.c2))


@dataclass(frozen=True)
class _Spline:
    """Piecewise polynomial; ``pieces[i]`` holds ascending coefficients in
    the local variable (x - knots_[i]), which keeps Horner evaluation
    stable for high degrees."""

    knots_: tuple[float, ...]
    pieces: tuple[tuple[float, ...], ...]

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        dt = xs.dtype if xs.dtype.kind == "f" else np.dtype(float)
        out = np.zeros(xs.shape, dtype=dt)
        ks = self.knots_
        for i, coeffs in enumerate(self.pieces):
            lo, hi = ks[i], ks[i + 1]
            m = (xs >= lo) & (xs < hi) if i + 1 < len(self.pieces) else (
                (xs >= lo) & (xs <= hi)
            )
            if np.any(m):
                xi = xs[m] - dt.type(lo)
                acc = np.zeros(np.count_nonzero(m), dtype=dt)
                for c in reversed(coeffs):
                    acc = acc * xi + float(c)
                out[m] = acc
        return out

    def global_piece(self, i: int) -> tuple:
        """Exact monomial-basis coefficients of piece i (Fractions)."""
        local = tuple(Fraction(c) for c in self.pieces[i])
        return _poly_compose_affine(local, Fraction(1), -Fraction(self.knots_[i]))

    @property
    def support(self):
        return float(self.knots_[0]), float(self.knots_[-1])

    def knots(self):
        return tuple(float(k) for k in self.knots_)


@dataclass(frozen=True)
class _TruncPower:
    s: complex
    T: float

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        out = np.zeros(xs.shape, dtype=complex)
        m = xs > self.T
        out[m] = np.exp((self.s - 1.0) * np.log(xs[m]))
        return out

    @property
    def support(self):
        return float(self.T), math.inf

    def knots(self):
        return (float(self.T),)


# --- exact exp-rational pieces (for high-order bump derivatives) ------------


def _padd(p, q):
    n = max(len(p), len(q))
    return tuple(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def _pdif(p):
    return tuple(i * c for i, c in enumerate(p))[1:] or (Fraction(0),)


def _pscale(p, c):
    return tuple(c * a for a in p)


def _peval(p, x):
    acc = x * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_compose_affine(p, a, b):
    """p(a x + b) as a polynomial in x (exact when inputs are Fractions)."""
    acc = (Fraction(0),)
    lin = (b, a)
    for c in reversed(p):
        acc = _padd(_pmul(acc, lin), (c,))
    return acc


@lru_cache(maxsize=32)
def _cardinal_bspline(degree: int) -> tuple:
    """Pieces of the cardinal B-spline B_degree on [0, degree+1].

    Cox-de Boor with uniform integer knots; piece j (a polynomial in the
    global variable t, exact Fraction coefficients) is valid on [j, j+1].
    """
    pieces = [(Fraction(1),)]
    for d in range(1, degree + 1):
        prev = pieces
        nxt = []
        for j in range(d + 1):
            acc = (Fraction(0),)
            if j < len(prev):
                acc = _padd(acc, _pmul(prev[j], (Fraction(0), Fraction(1, d))))
            if 0 <= j - 1 < len(prev):
                shifted = _poly_compose_affine(prev[j - 1], Fraction(1), Fraction(-1))
                acc = _padd(
                    acc,
                    _pmul(shifted, (Fraction(d + 1, d), Fraction(-1, d))),
                )
            nxt.append(acc)
        pieces = nxt
    return tuple(pieces)


@dataclass(frozen=True)
class ExpRationalPiece:
    """S(x) / v(x)^(2m) * exp(u(x)/v(x)) on (lo, hi), zero outside.

    Closed under differentiation:
        S <- v (S' v - 2 m S v') + S (u' v - u v'),   m <- m + 1.
    Coefficients are exact Fractions so that high-order derivatives keep
    full precision; evaluation converts to float only at the end.
    """

    snum: tuple[Fraction, ...]
    m: int
    u: tuple[Fraction, ...]
    v: tuple[Fraction, ...]
    lo: float
    hi: float

    def derivative(self) -> "ExpRationalPiece":
        sp = _pdif(self.snum)
        vp = _pdif(self.v)
        up = _pdif(self.u)
        t1 = _pmul(self.v, _padd(_pmul(sp, self.v), _pscale(_pmul(self.snum, vp), -2 * self.m)))
        t2 = _pmul(self.snum, _padd(_pmul(up, self.v), _pscale(_pmul(self.u, vp), -1)))
        return ExpRationalPiece(_padd(t1, t2), self.m + 1, self.u, self.v, self.lo, self.hi)

    def eval_one(self, x: float) -> float:
        if not (self.lo < x < self.hi):
            return 0.0
        xf = Fraction(x)
        vx = _peval(self.v, xf)
        if vx == 0:
            return 0.0
        expo = _peval(self.u, xf) / vx
        if expo < Fraction(-745):
            return 0.0
        rat = _peval(self.snum, xf) / vx ** (2 * self.m)
        return float(rat) * math.exp(float(expo))

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.eval_one(float(x)) for x in xs])


@dataclass(frozen=True)
class _ExpRatPieces:
    pieces: tuple[ExpRationalPiece, ...]

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        out = np.zeros(xs.shape, dtype=float)
        for p in self.pieces:
            out += p.eval_many(xs)
        return out

    @property
    def support(self):
        return min(p.lo for p in self.pieces), max(p.hi for p in self.pieces)

    def knots(self):
        ks = set()
        for p in self.pieces:
            ks.add(p.lo)
            ks.add(p.hi)
        return tuple(sorted(ks))


# ----------------------------------------------------------------------------
# TestFunction with modifier stack


@dataclass(frozen=True)
class TestFunction:
    """A member of the compactly-supported test family (or truncated power).

    ``ops`` is the modifier stack, applied left to right; an entry is
    ("shift", s) for phi -> phi_s or ("slash", a, M) for phi -> phi|_a W_M.
    """

    __test__ = False  # not a pytest collectible, despite the name

    base: object
    ops: tuple = ()
    label: str = ""

    # -- constructors ---------------------------------------------------

    @staticmethod
    def bump(c1: float, c2: float, label: str = "") -> "TestFunction":
        if not (0 < c1 < c2):
            raise DomainError("bump requires 0 < c1 < c2")
        return TestFunction(_Bump(c1, c2), (), label or f"bump[{c1:.4g},{c2:.4g}]")

    @staticmethod
    def spline(knots, pieces, label: str = "") -> "TestFunction":
        """Compact piecewise polynomial; ``pieces[i]`` are ascending global
        (monomial-basis) coefficients on [knots[i], knots[i+1]]."""
        ks = tuple(float(k) for k in knots)
        if len(ks) < 2 or any(b <= a for a, b in zip(ks, ks[1:])):
            raise DomainError("spline needs increasing knots")
        if len(pieces) != len(ks) - 1:
            raise DomainError("need one coefficient list per interval")
        if ks[0] < 0:
            raise DomainError("spline support must lie in [0, inf)")
        local = []
        for i, p in enumerate(pieces):
            shifted = _poly_compose_affine(
                tuple(Fraction(c) for c in p), Fraction(1), Fraction(ks[i])
            )
            local.append(tuple(float(c) for c in shifted))
        return TestFunction(
            _Spline(ks, tuple(local)),
            (),
            label or f"spline[{ks[0]:.4g},{ks[-1]:.4g}]",
        )

    @staticmethod
    def trunc_power(s: complex, T: float, label: str = "") -> "TestFunction":
        if T <= 0:
            raise DomainError("trunc_power requires T > 0")
        return TestFunction(_TruncPower(complex(s), float(T)), (), label or f"x^(s-1)1(x>{T:g})")

    @staticmethod
    def bspline(degree: int, lo, hi, label: str = "") -> "TestFunction":
        """Cardinal B-spline of the given degree rescaled to [lo, hi].

        C^{degree-1}, vanishing to order ``degree`` at both endpoints, with
        exact rational piece coefficients; its high derivatives stay
        moderate, unlike the bump's, which matters when Laplace transforms
        of high derivatives are compared at tight tolerances.
        """
        if degree < 1:
            raise DomainError("bspline degree must be >= 1")
        pieces_t = _cardinal_bspline(degree)
        lo_f = Fraction(lo)
        hi_f = Fraction(hi)
        scale = (hi_f - lo_f) / (degree + 1)
        knots = [lo_f + scale * j for j in range(degree + 2)]
        # piece j in its local variable xi = x - knot_j:  t = xi/scale + j
        pieces = []
        for j, p in enumerate(pieces_t):
            shifted = _poly_compose_affine(p, Fraction(1) / scale, Fraction(j))
            pieces.append(tuple(float(c) for c in shifted))
        return TestFunction(
            _Spline(tuple(float(k) for k in knots), tuple(pieces)),
            (),
            label or f"bspline{degree}[{float(lo):.4g},{float(hi):.4g}]",
        )

    # -- geometry ---------------------------------------------------------

    def support(self) -> tuple[float, float]:
        lo, hi = self.base.support
        for op in self.ops:
            if op[0] == "slash":
                _, _, M = op
                lo, hi = (
                    0.0 if hi == math.inf else 1.0 / (M * hi),
                    math.inf if lo == 0.0 else 1.0 / (M * lo),
                )
        return lo, hi

    def knots(self) -> tuple[float, ...]:
        ks = list(self.base.knots())
        for op in self.ops:
            if op[0] == "slash":
                _, _, M = op
                ks = [1.0 / (M * k) for k in ks if k not in (0.0, math.inf)]
        lo, hi = self.support()
        out = sorted({k for k in ks if np.isfinite(k)} | {lo} | ({hi} if np.isfinite(hi) else set()))
        return tuple(out)

    @property
    def is_compact(self) -> bool:
        lo, hi = self.support()
        return lo > 0 and np.isfinite(hi)

    # -- evaluation -------------------------------------------------------

    def eval_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs)
        if xs.dtype not in (np.dtype(np.longdouble), np.dtype(np.float64)):
            xs = xs.astype(float)
        arg = xs.copy()
        real_mods = all(
            op[0] == "slash" or complex(op[1]).imag == 0.0 for op in self.ops
        )
        mult = np.ones(xs.shape, dtype=xs.dtype if real_mods else complex)
        for op in reversed(self.ops):
            if op[0] == "slash":
                _, a, M = op
                mult = mult * np.power(M * arg, -float(a))
                arg = 1.0 / (M * arg)
            else:
                _, s = op
                expo = (complex(s).real - 1.0) if real_mods else (complex(s) - 1.0)
                mult = mult * np.exp(expo * np.log(arg))
        vals = self.base.eval_many(arg)
        out = mult * vals
        if np.iscomplexobj(out) and np.all(np.abs(out.imag) == 0.0):
            return out.real
        return out

    def __call__(self, x: float) -> complex:
        v = self.eval_many(np.array([float(x)]))[0]
        return complex(v) if np.iscomplexobj(v) else float(v)


def eval_at(phi: TestFunction, x: float):
    """Pointwise value of the test function with all modifiers applied."""
    if x <= 0:
        raise DomainError("test functions live on x > 0")
    return phi(x)


def shift_s(phi: TestFunction, s: complex) -> TestFunction:
    """phi_s(x) = phi(x) x^{s-1}; shift_s(phi, 1) is phi itself."""
    s = complex(s)
    if s == 1.0:
        return phi
    if s.imag == 0:
        s = s.real
    ops = phi.ops
    if ops and ops[-1][0] == "shift":
        s_prev = ops[-1][1]
        combined = s_prev + s - 1.0
        new_ops = ops[:-1] if combined == 1.0 else ops[:-1] + (("shift", combined),)
    else:
        new_ops = ops + (("shift", s),)
    return replace(phi, ops=new_ops, label=f"{phi.label}.s({s})")


def slash_W(phi: TestFunction, a, M: int) -> TestFunction:
    """(phi|_a W_M)(x) = (M x)^{-a} phi(1/(M x))."""
    if M < 1:
        raise DomainError("slash_W requires M >= 1")
    return replace(
        phi,
        ops=phi.ops + (("slash", float(a), int(M)),),
        label=f"{phi.label}.W{M}({a:g})",
    )


def derivative(phi: TestFunction, m: int) -> TestFunction:
    """m-th derivative of an unmodified bump or spline.

    Modifier stacks are rejected: normalize first.  (Slashed bumps used by
    the derivative-lift identity go through ExpRationalPiece directly.)
    """
    if m < 0:
        raise DomainError("derivative order must be >= 0")
    if m == 0:
        return phi
    if phi.ops:
        raise DomainError("derivative requires an unmodified bump/spline; normalize first")
    base = phi.base
    if isinstance(base, _Bump):
        piece = bump_exp_rational(base.c1, base.c2)
        for _ in range(m):
            piece = piece.derivative()
        return TestFunction(_ExpRatPieces((piece,)), (), f"{phi.label}^({m})")
    if isinstance(base, _Spline):
        pieces = []
        for coeffs in base.pieces:
            cs = tuple(Fraction(c) for c in coeffs)
            for _ in range(m):
                cs = _pdif(cs)
            pieces.append(tuple(float(c) for c in cs))
        return TestFunction(
            _Spline(base.knots_, tuple(pieces)), (), f"{phi.label}^({m})"
        )
    if isinstance(base, _ExpRatPieces):
        ps = base.pieces
        for _ in range(m):
            ps = tuple(p.derivative() for p in ps)
        return TestFunction(_ExpRatPieces(ps), (), f"{phi.label}^({m})")
    raise DomainError("derivative unsupported for truncated powers")


def bump_exp_rational(c1, c2) -> ExpRationalPiece:
    """The normalized bump as an exact exp-rational piece.

    exp(4/w^2 - 1/((x-c1)(c2-x))) = exp(u(x)/v(x)) with v = (x-c1)(c2-x)
    and u = (4/w^2) v - 1.
    """
    a = Fraction(c1)
    b = Fraction(c2)
    v = _pmul((-a, Fraction(1)), (b, Fraction(-1)))  # (x-c1)(c2-x)
    c0 = Fraction(4) / (b - a) ** 2
    u = _padd(_pscale(v, c0), (Fraction(-1),))
    return ExpRationalPiece((Fraction(1),), 0, u, v, float(c1), float(c2))


# ----------------------------------------------------------------------------
# Laplace transform


def laplace(phi: TestFunction, s: complex):
    """(L phi)(s) = int_0^inf e^{-s t} phi(t) dt.

    Closed form for (shifted) truncated powers, including the analytic
    continuation for Re(s_arg) <= 0; adaptive quadrature for compact
    variants, with knots at support endpoints and spline joints.
    """
    base = phi.base
    if isinstance(base, _TruncPower):
        if any(op[0] == "slash" for op in phi.ops):
            raise DomainError("laplace of a slashed truncated power is unsupported")
        sigma = complex(base.s)
        for op in phi.ops:  # only shifts by construction
            sigma += complex(op[1]) - 1.0
        u = complex(s)
        if u.imag == 0:
            u = u.real
            if u == 0.0:
                if sigma.real < 0:
                    return -(base.T ** sigma) / sigma
                raise DomainError("Laplace of truncated power diverges at s=0 for Re(sigma) >= 0")
            return _principal_pow(u, -sigma) * upper_gamma(sigma, u * base.T)
        raise DomainError("truncated-power Laplace implemented for real s only")
    lo, hi = phi.support()
    if not np.isfinite(hi) or lo < 0:
        raise DomainError("laplace: unbounded support without closed form")
    sc = complex(s)
    val, err = quadrature(
        lambda xs: phi.eval_many(xs) * np.exp(-sc * xs),
        lo,
        hi,
        rel_tol=1e-13,
        knots=phi.knots(),
        vectorized=True,
    )
    return val


def laplace_many(phi: TestFunction, us, dtype=np.float64) -> tuple[np.ndarray, np.ndarray]:
    """(L phi)(u) on an array of real u, compact support, fixed panels.

    Builds a composite Gauss-Legendre grid on the support, dyadically
    graded into both endpoints (resolving bump-type essential
    singularities and keeping |u| h small on the panels that matter), and
    evaluates all transforms with one outer product.  ``dtype`` may be
    np.longdouble for extended-precision accumulation when the caller's
    series cancels heavily.  Returns (values, err_bounds).
    """
    us = np.asarray(us, dtype=dtype)
    lo, hi = phi.support()
    if not (np.isfinite(hi) and lo >= 0):
        raise DomainError("laplace_many requires compact support")
    width = hi - lo
    u_scale = float(np.max(np.abs(us.astype(float)), initial=1.0))
    levels = min(48, max(13, int(math.ceil(math.log2(max(u_scale * width / 20.0, 2.0)))) + 2))
    edges = set(phi.knots()) | {lo, hi}
    for j in range(1, levels + 1):
        d = width / 2.0 ** j
        edges.add(lo + d)
        edges.add(hi - d)
    edges = sorted(edges)
    if np.dtype(dtype) == np.dtype(np.longdouble):
        xg, wg = _leggauss_longdouble(40)
    else:
        xg, wg = _leggauss(32)
    nodes = []
    weights = []
    one_half = np.dtype(dtype).type(0.5)
    for a, b in zip(edges[:-1], edges[1:]):
        h = one_half * (np.dtype(dtype).type(b) - np.dtype(dtype).type(a))
        nodes.append(one_half * (np.dtype(dtype).type(a) + np.dtype(dtype).type(b)) + h * xg)
        weights.append(h * wg)
    x = np.concatenate(nodes).astype(dtype)
    w = np.concatenate(weights).astype(dtype)
    fx = phi.eval_many(x)
    wf = w * fx
    E = np.exp(-np.outer(us, x))
    vals = E @ wf
    eps = float(np.finfo(dtype).eps) if np.dtype(dtype).kind == "f" else 1e-16
    errs = (50.0 * eps) * np.abs(E @ np.abs(wf))
    return vals, errs


# ----------------------------------------------------------------------------
# The canonical battery


def standard_battery(
    count: int = 10,
    shifts=(1,),
    base: float = 0.25,
    ratio: float = math.sqrt(2.0),
) -> list[TestFunction]:
    """Bump battery with supports [base r^j, 2 base r^j], j = 0..count-1.

    The default ten members cover (1/4, ~11.3), enclosing the fixed points
    x = 1/sqrt(N) of the W_N involution for every level the fixtures use.
    Optional power shifts phi_s replicate the battery at each s.
    """
    if count < 1:
        raise DomainError("battery needs at least one member")
    out = []
    for j in range(count):
        c1 = base * ratio ** j
        phi = TestFunction.bump(c1, 2.0 * c1, label=f"bump{j}")
        for s in shifts:
            out.append(phi if s == 1 else shift_s(phi, s))
    return out
