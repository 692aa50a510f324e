"""L-series of modular fixtures against compactly supported test functions.

The classical s-parameter Dirichlet series is replaced by a pairing
L_f(phi): the Fourier coefficients of f are summed against Laplace
transforms of phi.  For a compactly supported phi the pairing equals
the integral of f(iy) phi(y) dy, and the two routes are computed by
entirely different code paths, which makes their agreement a strong
self-check.

Run:  python demos/01_test_function_lseries.py
"""

import math

from maass_lseries import (
    TestFunction,
    fixture,
    laplace,
    lseries_integral,
    lseries_series,
    standard_battery,
)

# The bundled fixtures: discriminant form, Eisenstein series, j - 744,
# 1/delta, and the weight-1/2 theta series.  Coefficients are exact
# integers from q-expansion arithmetic, truncated at the requested length.
delta = fixture("delta", 256)
print("delta: weight", delta.weight2 / 2, " level", delta.level)
print("tau(n), n<=5:", [int(delta.a[n].real) for n in range(1, 6)])

# A smooth bump supported on [1, 2], peak normalized to 1.
phi = TestFunction.bump(1, 2)
print("\nLaplace transform of the bump at s = 2 pi:", laplace(phi, 2 * math.pi))

# The two routes to L_delta(phi).
sv = lseries_series(delta, phi)
iv = lseries_integral(delta, phi)
print("\nL_delta(phi) by coefficient series :", sv.value)
print("L_delta(phi) by integral of f(iy)  :", iv.value)
print("relative disagreement              :",
      abs(sv.value - iv.value) / abs(sv.value))
print("reported truncation / quadrature errors:", sv.trunc_err, sv.quad_err)

# The standard battery: ten bumps with supports [2^(j/2-2), 2^(j/2-1)]
# covering the region where the Fricke involution acts.
print("\nbattery agreement across all ten members:")
for phi in standard_battery():
    sv = lseries_series(delta, phi)
    iv = lseries_integral(delta, phi)
    rel = abs(sv.value - iv.value) / max(abs(sv.value), 1e-300)
    print(f"  {phi.label:8s} supp ({phi.support()[0]:7.3f},{phi.support()[1]:7.3f})"
          f"  L = {sv.value.real:+.6e}   rel diff {rel:.1e}")
