"""Coefficient data of (candidate) harmonic Maass forms and its evaluation.

A form is specified by its Fourier data: holomorphic coefficients a(n) for
n >= -n0, nonholomorphic coefficients b(n) for n < 0 (weighted by the
incomplete gamma factor), half-integral weights carried as weight2 = 2k,
a level with character, and a period M (1 for untwisted data, D after a
twist).  Truncation tails are certified from the declared growth envelope
|c(n)| <= A e^{C sqrt|n|}; forms flagged ``exhaustive`` are exact finite
Fourier polynomials with no tail at all.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, InsufficientDataError, ShadowVanishesError
from .specials import Character, gauss_sum, upper_gamma

_TWO_PI = 2.0 * math.pi


class RuleCoeffs(Mapping):
    """Coefficients given by a rule on a contiguous index range.

    Backs synthetic forms whose coefficient count would be unreasonable to
    store (e.g. a(n) = 1 up to n ~ 1e8 for zeta values).  ``vfn`` is an
    optional vectorized version of the rule used by chunked summation.
    """

    def __init__(self, fn, n_min: int, n_max: int, vfn=None):
        self.fn = fn
        self.n_min = int(n_min)
        self.n_max = int(n_max)
        self.vfn = vfn

    def __getitem__(self, n):
        if self.n_min <= n <= self.n_max:
            return self.fn(n)
        raise KeyError(n)

    def __iter__(self):
        return iter(range(self.n_min, self.n_max + 1))

    def __len__(self):
        return self.n_max - self.n_min + 1

    def eval_range(self, lo: int, hi: int) -> np.ndarray:
        ns = np.arange(lo, hi + 1)
        if self.vfn is not None:
            return np.asarray(self.vfn(ns))
        return np.array([self.fn(int(n)) for n in ns])


_ARRAY_CAP = 5_000_000


@dataclass(frozen=True)
class FormData:
    """Fourier data (a(n), b(n), n0, weight 2k/2, level, character, period)."""

    weight2: int
    level: int
    psi: Character
    period: int = 1
    n0: int = 0
    a: Mapping = field(default_factory=dict)
    b: Mapping = field(default_factory=dict)
    growth_C: float = 4.0
    label: str = ""
    exhaustive: bool = False

    def __post_init__(self):
        if self.level < 1 or self.period < 1 or self.n0 < 0:
            raise DomainError("level, period must be >= 1 and n0 >= 0")
        if self.growth_C <= 0:
            raise DomainError("growth_C must be positive")
        if self.weight2 % 2 != 0 and self.level % 4 != 0:
            raise DomainError("half-integral weight requires 4 | level")
        if self.psi.modulus != self.level:
            raise DomainError("character modulus must equal the level")
        if any(n >= 0 for n in self.b):
            raise DomainError("b-coefficients are indexed by n < 0")
        if isinstance(self.a, dict) and self.a and min(self.a) < -self.n0:
            raise DomainError("a-index below -n0")
        object.__setattr__(self, "_cache", {})

    @property
    def k(self) -> float:
        return self.weight2 / 2.0

    @property
    def weakly_holomorphic(self) -> bool:
        return len(self.b) == 0

    # -- cached coefficient arrays ---------------------------------------

    def _arrays(self, part: str):
        cache = self._cache
        if part not in cache:
            m = self.a if part == "a" else self.b
            if len(m) > _ARRAY_CAP:
                raise DomainError("coefficient map too large for dense evaluation")
            ns = np.array(sorted(m), dtype=np.int64)
            vals = np.array([complex(m[int(n)]) for n in ns], dtype=complex)
            cache[part] = (ns, vals)
        return cache[part]

    def amplitude(self, part: str) -> float:
        """A with |c(n)| <= A e^{growth_C sqrt|n|} over the stored range."""
        key = "amp_" + part
        if key not in self._cache:
            ns, vals = self._arrays(part)
            if len(ns) == 0:
                self._cache[key] = 0.0
            else:
                env = np.exp(self.growth_C * np.sqrt(np.abs(ns).astype(float)))
                self._cache[key] = float(max(1e-300, np.max(np.abs(vals) / env)))
        return self._cache[key]


def geom_tail(A: float, C: float, alpha: float, n_start: int, poly_pow: float = 0.0) -> float:
    """Certified bound for A sum_{n > n_start} n^p e^{C sqrt n - alpha n}.

    Uses the geometric ratio bound valid when terms decrease; returns inf
    when the ratio test fails at n_start (caller must extend the range).
    """
    if A == 0.0:
        return 0.0
    if alpha <= 0:
        return math.inf
    n1 = max(n_start, 0) + 1
    log_ratio = (
        max(0.0, poly_pow) * math.log((n1 + 1) / n1)
        + C / (2.0 * math.sqrt(n1))
        - alpha
    )
    r = math.exp(log_ratio)
    if r >= 0.995:
        return math.inf
    log_t1 = poly_pow * math.log(n1) + C * math.sqrt(n1) - alpha * n1
    if log_t1 > 690:
        return math.inf
    return A * math.exp(log_t1) / (1.0 - r)


def required_n_estimate(A: float, C: float, alpha: float, tol: float) -> int:
    """Rough n with A e^{C sqrt n - alpha n} <= tol (for error messages)."""
    if alpha <= 0:
        return -1
    target = max(0.0, math.log(max(A, 1e-300) / max(tol, 1e-300)))
    root = (C + math.sqrt(C * C + 4.0 * alpha * target)) / (2.0 * alpha)
    return int(root * root) + 8


# ----------------------------------------------------------------------------
# evaluation


def _hol_tail(f: FormData, alpha: float, extra_poly: float = 0.0) -> float:
    if f.exhaustive:
        return 0.0
    ns, _ = f._arrays("a")
    n_max = int(ns[-1]) if len(ns) else 0
    return geom_tail(f.amplitude("a"), f.growth_C, alpha, max(n_max, 0), extra_poly)


def _nonhol_tail(f: FormData, alpha: float, extra_poly: float = 0.0) -> float:
    """Tail for the b-part against Gamma(1-k, x) <= c x^{-k} e^{-x}.

    Valid with c = 1 for k >= 0 (any x > 0) and c = 2 for k < 0 once
    x >= -2k; alpha is the per-n exponential rate after the gamma decay is
    folded in.
    """
    if f.exhaustive or len(f.b) == 0:
        return 0.0
    ns, _ = f._arrays("b")
    m_max = int(-ns[0])  # most negative index
    k = f.k
    x_next = 2.0 * alpha * (m_max + 1)  # = 4 pi (m+1) y / M when alpha = 2 pi y / M
    if k < 0 and x_next < -2.0 * k:
        return math.inf
    c = 1.0 if k >= 0 else 2.0
    pref = c * (2.0 * alpha) ** (-k)
    return geom_tail(f.amplitude("b") * pref, f.growth_C, alpha, m_max, -k + extra_poly)


def eval_point(f: FormData, z: complex, tol: float = 1e-12) -> complex:
    """f(z) for Im z > 0 by truncated Fourier expansion with certified tail."""
    z = complex(z)
    y = z.imag
    if y <= 0:
        raise DomainError("eval requires Im z > 0")
    alpha = _TWO_PI * y / f.period
    tail = _hol_tail(f, alpha) + _nonhol_tail(f, alpha)
    if tail > tol:
        raise InsufficientDataError(
            f"tail bound {tail:.2e} > tol {tol:.2e} at y={y:g}",
            required_n=required_n_estimate(f.amplitude("a"), f.growth_C, alpha, tol),
        )
    ns, avals = f._arrays("a")
    acc = complex(np.sum(avals * np.exp(2j * math.pi * ns * z / f.period)))
    bns, bvals = f._arrays("b")
    for n, bv in zip(bns, bvals):
        g = upper_gamma(1.0 - f.k, -4.0 * math.pi * n * y / f.period)
        acc += bv * g * np.exp(2j * math.pi * n * z / f.period)
    return acc


def eval_iy(f: FormData, ys, tol: float = 1e-12) -> np.ndarray:
    """f(iy) on an array of ordinates (vectorized over stored coefficients)."""
    ys = np.asarray(ys, dtype=float)
    if np.any(ys <= 0):
        raise DomainError("eval requires y > 0")
    y_min = float(ys.min())
    alpha = _TWO_PI * y_min / f.period
    tail = _hol_tail(f, alpha) + _nonhol_tail(f, alpha)
    if tail > tol:
        raise InsufficientDataError(
            f"tail bound {tail:.2e} > tol {tol:.2e} at y={y_min:g}",
            required_n=required_n_estimate(f.amplitude("a"), f.growth_C, alpha, tol),
        )
    ns, avals = f._arrays("a")
    E = np.exp(-_TWO_PI * np.outer(ys, ns.astype(float)) / f.period)
    acc = E @ avals
    bns, bvals = f._arrays("b")
    for n, bv in zip(bns, bvals):
        g = np.array(
            [upper_gamma(1.0 - f.k, -4.0 * math.pi * n * yy / f.period) for yy in ys]
        )
        acc = acc + bv * g * np.exp(-_TWO_PI * n * ys / f.period)
    return acc


def delta_k_point(f: FormData, z: complex, tol: float = 1e-12) -> complex:
    """(delta_k f)(z) = z d f/dx + (k/2) f, via the term-wise expansion."""
    z = complex(z)
    y = z.imag
    if y <= 0:
        raise DomainError("delta_k_eval requires Im z > 0")
    alpha = _TWO_PI * y / f.period
    scale = _TWO_PI * abs(z) / f.period
    halfk = abs(0.5 * f.k)
    tail = (
        halfk * (_hol_tail(f, alpha) + _nonhol_tail(f, alpha))
        + scale * (_hol_tail(f, alpha, 1.0) + _nonhol_tail(f, alpha, 1.0))
    )
    if tail > tol:
        raise InsufficientDataError(f"tail bound {tail:.2e} > tol {tol:.2e}")
    half_k = 0.5 * f.k
    ns, avals = f._arrays("a")
    phases = np.exp(2j * math.pi * ns * z / f.period)
    acc = complex(np.sum(avals * (half_k + 2j * math.pi * ns * z / f.period) * phases))
    bns, bvals = f._arrays("b")
    for n, bv in zip(bns, bvals):
        g = upper_gamma(1.0 - f.k, -4.0 * math.pi * n * y / f.period)
        w = 2j * math.pi * n * z / f.period
        acc += bv * g * (half_k + w) * np.exp(2j * math.pi * n * z / f.period)
    return acc


def delta_k_iy(f: FormData, ys, tol: float = 1e-12) -> np.ndarray:
    """(delta_k f)(iy) on an array of ordinates."""
    ys = np.asarray(ys, dtype=float)
    if np.any(ys <= 0):
        raise DomainError("delta_k_eval requires y > 0")
    y_min = float(ys.min())
    alpha = _TWO_PI * y_min / f.period
    scale = _TWO_PI * float(ys.max()) / f.period
    halfk = abs(0.5 * f.k)
    tail = (
        halfk * (_hol_tail(f, alpha) + _nonhol_tail(f, alpha))
        + scale * (_hol_tail(f, alpha, 1.0) + _nonhol_tail(f, alpha, 1.0))
    )
    if tail > tol:
        raise InsufficientDataError(f"tail bound {tail:.2e} > tol {tol:.2e}")
    half_k = 0.5 * f.k
    ns, avals = f._arrays("a")
    nf = ns.astype(float)
    E = np.exp(-_TWO_PI * np.outer(ys, nf) / f.period)
    # at z = iy:  2 pi i n z / M = -2 pi n y / M  (real)
    acc = E @ (avals * half_k) + (E * (-_TWO_PI * np.outer(ys, nf) / f.period)) @ avals
    bns, bvals = f._arrays("b")
    for n, bv in zip(bns, bvals):
        g = np.array(
            [upper_gamma(1.0 - f.k, -4.0 * math.pi * n * yy / f.period) for yy in ys]
        )
        w = -_TWO_PI * n * ys / f.period
        acc = acc + bv * g * (half_k + w) * np.exp(-_TWO_PI * n * ys / f.period)
    return acc


# ----------------------------------------------------------------------------
# twists, shadows, growth validation


def twist(f: FormData, chi: Character) -> FormData:
    """f_chi: coefficients multiplied by the conjugate-character Gauss sums.

    The twisted form has period D; iterated twists are rejected (the
    transformation theory is stated for period-1 input only).
    """
    D = chi.modulus
    if f.period != 1:
        raise DomainError("twist requires an untwisted form (period 1)")
    if math.gcd(D, f.level) != 1:
        raise DomainError("twist requires gcd(D, N) = 1")
    chibar = chi.conjugate()
    tau = {}

    def tau_of(n: int) -> complex:
        r = n % D
        if r not in tau:
            tau[r] = gauss_sum(chibar, r)
        return tau[r]

    a = {n: v * tau_of(n) for n, v in f.a.items()}
    b = {n: v * tau_of(n) for n, v in f.b.items()}
    return replace(
        f,
        period=D,
        a=a,
        b=b,
        label=f"{f.label}.chi[{D}.{chi.index}]" if f.label else f"chi[{D}.{chi.index}]",
    )


def shadow_coeffs(g: FormData) -> dict[int, complex]:
    """Fourier coefficients of xi_{2-k} g from the nonholomorphic part.

    For g of weight 2-k (k >= 2 an even integer) the shadow is the cusp
    form with a_f(n) = -conj(c_g^-(-n)) (4 pi n)^{k-1}, n >= 1.
    """
    if g.weight2 % 2 != 0:
        raise DomainError("shadow_coeffs requires integral weight")
    k = 2 - g.weight2 // 2
    if k < 2:
        raise DomainError("shadow_coeffs requires source weight 2-k with k >= 2")
    if len(g.b) == 0:
        raise ShadowVanishesError("the form is weakly holomorphic; its shadow is zero")
    out = {}
    for m, c in g.b.items():
        n = -m
        out[n] = -np.conj(complex(c)) * (4.0 * math.pi * n) ** (k - 1)
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class GrowthReport:
    C_fit: float
    ok: bool


def validate_growth(f: FormData) -> GrowthReport:
    """Fit the smallest C with |c(n)| <= e^{C sqrt|n|} over the stored range."""
    c_fit = 0.0
    for part in ("a", "b"):
        ns, vals = f._arrays(part)
        for n, v in zip(ns, vals):
            if n != 0 and abs(v) > 1.0:
                c_fit = max(c_fit, math.log(abs(v)) / math.sqrt(abs(n)))
    return GrowthReport(C_fit=c_fit, ok=c_fit <= f.growth_C)


# ----------------------------------------------------------------------------
# coefficient JSON schema (shared with the CLI)


def form_to_dict(f: FormData) -> dict:
    return {
        "weight2": f.weight2,
        "level": f.level,
        "character": {"modulus": f.psi.modulus, "index": f.psi.index},
        "period": f.period,
        "n0": f.n0,
        "growth_C": f.growth_C,
        "a": [[int(n), float(np.real(v)), float(np.imag(v))] for n, v in sorted(f.a.items())],
        "b": [[int(n), float(np.real(v)), float(np.imag(v))] for n, v in sorted(f.b.items())],
    }


def form_from_dict(d: dict) -> FormData:
    from .errors import SchemaError
    from .specials import characters_mod

    try:
        ch = d["character"]
        chars = characters_mod(int(ch["modulus"]))
        psi = chars[int(ch["index"])]
        a = {int(n): complex(re, im) for n, re, im in d["a"]}
        b = {int(n): complex(re, im) for n, re, im in d["b"]}
        return FormData(
            weight2=int(d["weight2"]),
            level=int(d["level"]),
            psi=psi,
            period=int(d.get("period", 1)),
            n0=int(d["n0"]),
            a=a,
            b=b,
            growth_C=float(d["growth_C"]),
            label=str(d.get("label", "")),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed coefficient data: {exc}") from exc
