"""The converse-theorem hypotheses as a numerical sweep.

The converse theorem promises: if the functional equations hold for all
moduli D < N^2 coprime to N, all characters mod D, and enough test
functions -- for both the plain and the derivative L-series -- then the
coefficient data actually came from a modular object.  The sweep runs
exactly those hypotheses and reports worst witnesses.  It cannot prove
modularity, but it is very good at destroying pretenders: perturbing one
coefficient of delta in the ninth digit still trips it.

Run:  python demos/03_converse_sweep.py
"""

from dataclasses import replace

from maass_lseries import converse_sweep, fixture_pair, standard_battery

battery = standard_battery()

# Genuine modular input passes.
f, g = fixture_pair("delta", 256)
rep = converse_sweep(f, g, battery)
print("delta:", rep.verdict)
print("  checks run:", rep.n_checked, "  worst residual:",
      f"{rep.worst.rel_residual:.2e}", f"({rep.worst.phi_id}, {rep.worst.equation})")

# 1/delta (weight -12) is forced to be self-dual by delta's involution.
f, g = fixture_pair("inv_delta", 768)
rep = converse_sweep(f, g, battery)
print("\n1/delta:", rep.verdict, f" worst {rep.worst.rel_residual:.2e}")

# Now break tau(2) by one part in a thousand.
f, _ = fixture_pair("delta", 256)
a = dict(f.a)
a[2] = a[2] * (1 + 1e-3)
fake = replace(f, a=a)
rep = converse_sweep(fake, fake, battery)
print("\nperturbed delta:", rep.verdict)
print("  failing instances:", len(rep.failures))
w = rep.worst
print(f"  worst witness: phi = {w.phi_id}, equation = {w.equation}, "
      f"residual = {w.rel_residual:.2e}")

# Even a relative 1e-9 nudge on tau(2) leaves a visible witness: the outer
# battery members amplify coefficient errors exponentially, because their
# slashed partners probe the expansion deep into the small-y region.
a = dict(f.a)
a[2] = a[2] * (1 + 1e-9)
faint = replace(f, a=a)
rep = converse_sweep(faint, faint, battery, tol=1e-10)
print(f"\n1e-9 perturbation: worst residual {rep.worst.rel_residual:.2e} "
      f"(verdict at tol 1e-10: {rep.verdict})")
