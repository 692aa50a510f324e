"""Derivative lift: weight 2-k data to weight k, checked through L-series.

Bol's classical fact -- the (k-1)-th derivative of a weight 2-k weakly
holomorphic form is weakly holomorphic of weight k -- can be rederived
with test-function L-series.  On coefficients the lift is
a(n) -> (2 pi n)^{k-1} a(n), and the proof runs through two identities:

  (i)  L_{lift f}(phi) = L_f(phi^{(k-1)})        (Laplace of a derivative)
  (ii) (phi^{(k-1)})|_k W_1 = -(d/dx)^{k-1} [phi|_{2-k} W_1]

after which the converse sweep certifies the lifted data.

Run:  python demos/04_derivative_lift.py
"""

import math

from maass_lseries import (
    TestFunction,
    alpha_identity_check,
    converse_sweep,
    derivative_lift,
    fixture,
    standard_battery,
)

# Lift 1/delta (weight -12, so k = 14).
f = fixture("inv_delta", 1280)
lift = derivative_lift(f)
print("source weight:", f.weight2 / 2, " lifted weight:", lift.weight2 / 2)
print("lifted a(-1) :", lift.a[-1].real, " = (-2 pi)^13")
print("             ", (-2 * math.pi) ** 13)

rep = converse_sweep(lift, lift, standard_battery(), tol=1e-7)
print("\nsweep on the lifted data:", rep.verdict,
      f"(worst residual {rep.worst.rel_residual:.2e})")

# The two identities behind the proof, at several weights.  High k needs a
# test function whose high derivatives stay tame; the degree-11 B-spline
# keeps the transfer check at the 1e-12 level where a bump would lose
# digits to cancellation.
print("\ntransfer and involution identities:")
for k, phi in (
    (2, TestFunction.bump(1, 2)),
    (4, TestFunction.bump(1, 2)),
    (12, TestFunction.bspline(11, 1, 3)),
):
    rep_i, rep_ii = alpha_identity_check(phi, k)
    print(f"  k = {k:2d} ({phi.label}):  transfer {rep_i.rel_residual:.2e}"
          f"   pointwise {rep_ii.rel_residual:.2e}")
