"""Summation-formula building blocks for holomorphic parts of harmonic lifts.

The summation formula expresses the pairing of the holomorphic part of a
harmonic lift g (with shadow f) against a test function in terms of the
shadow's coefficients, through two kernel families: finite
incomplete-gamma expansions and Whittaker-M integrals.  A genuine lift is
not available in closed form at desk scale, so the validation is
step-by-step: each kernel identity, the shadow-consistent decomposition,
and the weakly holomorphic reduction where the formula degenerates to the
functional equation.

Note on constants: the Whittaker kernel is implemented with prefactor
(8 pi n)^{-k/2} 2^{l+1} / (N (k-1)); for k = 2 both kernel routes then
collapse to (4 pi n N)^{-1} int phi (1 - e^{-2 pi n y}) dy, which pins the
normalization down independently.

Run:  python demos/05_summation_formula.py
"""

import math

import numpy as np

from maass_lseries import (
    FormData,
    TestFunction,
    decomp_identity_check,
    fixture,
    gf_term_check,
    mf_term_check,
    quadrature,
    summation_residual,
    trivial_character,
)

phi = TestFunction.bump(1, 2)

# Kernel identity 1: incomplete gamma of integer order is an exponential
# times a polynomial, so the shadow-side kernel has an exact finite form.
print("incomplete-gamma kernel (exact finite expansion):")
for k in (2, 4, 12):
    worst = max(gf_term_check(n, k, phi).rel_residual for n in range(1, 6))
    print(f"  k = {k:2d}: worst residual over n <= 5: {worst:.2e}")

# Kernel identity 2: the oscillatory Bessel double integral equals the
# Whittaker closed form.
print("\nBessel vs Whittaker kernel:")
for k in (2, 4, 12):
    worst = max(mf_term_check(n, k, 1, phi).rel_residual for n in range(1, 6))
    print(f"  k = {k:2d}: worst residual over n <= 5: {worst:.2e}")

# The k = 2 elementary cross-check.
rep = mf_term_check(1, 2, 1, phi)
elem_int, _ = quadrature(
    lambda ys: phi.eval_many(ys) * (1 - np.exp(-2 * math.pi * ys)),
    1.0, 2.0, vectorized=True,
)
elementary = complex(elem_int).real / (4 * math.pi)
print(f"\nk=2, n=1 elementary value: {elementary:.12e}")
print(f"Bessel route            : {rep.lhs.real:.12e}")
print(f"Whittaker route         : {rep.rhs.real:.12e}")

# Decomposition: with the nonholomorphic coefficients set from a chosen
# shadow, the full L-series splits into a holomorphic part minus a
# conjugated shadow pairing -- no modularity needed.
k = 12
a_f = {1: 2.0 + 1.0j, 2: -3.0 + 0.5j}
b = {-n: -np.conj(v) * (4 * math.pi * n) ** (1 - k) for n, v in a_f.items()}
g = FormData(
    weight2=2 * (2 - k), level=1, psi=trivial_character(1), n0=1,
    a={-1: 1.0, 0: 2.0, 1: 5.0}, b=b, growth_C=8.0, exhaustive=True,
)
rep = decomp_identity_check(g, a_f, phi)
print(f"\nshadow-consistent decomposition residual: {rep.rel_residual:.2e}")

# Weakly holomorphic reduction: zero shadow, g = 1/delta.  The right side
# vanishes and the left side is the functional-equation residual of g.
ginv = fixture("inv_delta", 1280)
f0 = FormData(weight2=28, level=1, psi=trivial_character(1), n0=0,
              a={}, b={}, growth_C=4.0, exhaustive=True)
rep = summation_residual(f0, dict(ginv.a), dict(ginv.a), phi)
scale = max(abs(rep.lhs_parts[0]), abs(rep.lhs_parts[1]))
print(f"weakly holomorphic reduction: |LHS| / scale = {abs(rep.lhs) / scale:.2e}")
